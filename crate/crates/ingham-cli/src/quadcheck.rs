//! Independent verification of Gram entries by direct numerical integration.
//!
//! The check never touches the library's Bessel evaluation: each entry
//! int_{B_R} e^{i delta . t} dt is reduced to a one-dimensional slice
//! integral with the axis along delta,
//!
//!   entry = int_{-R}^{R} cos(|delta| x) V_{N-1}(sqrt(R^2 - x^2)) dx,
//!
//! substituted with x = R sin(theta) to remove the endpoint singularity, and
//! evaluated by adaptive Simpson quadrature. Cross-section volumes come from
//! the elementary recurrence V_n = V_{n-2} * 2 pi / n.

/// Volume of the unit ball in R^n by recurrence; V_0 = 1 for the point.
fn unit_ball_volume(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

fn simpson_panel<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    m: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (left, lm, flm) = simpson_panel(f, a, fa, m, fm);
    let (right, rm, frm) = simpson_panel(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + adaptive(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
}

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson_panel(&f, a, fa, b, fb);
    adaptive(&f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// int_{B_R} cos(delta . t) dt for |delta| = dist, by slice quadrature.
pub fn entry_by_slices(dimension: usize, radius: f64, dist: f64, tol: f64) -> f64 {
    let coeff = unit_ball_volume(dimension - 1);
    let rn = radius.powi(dimension as i32);
    // x = R sin(theta): dx = R cos(theta), cross-section (R cos theta)^(N-1)
    simpson(
        |theta| {
            let c = theta.cos();
            (dist * radius * theta.sin()).cos() * coeff * rn * c.powi(dimension as i32)
        },
        -std::f64::consts::FRAC_PI_2,
        std::f64::consts::FRAC_PI_2,
        tol,
    )
}
