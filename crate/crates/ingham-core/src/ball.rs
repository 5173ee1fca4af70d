//! Radial analysis on balls in R^N: the first Dirichlet eigenvalue and
//! eigenfunction of the unit ball, its Fourier transform h, the normalized
//! transform g of the ball indicator, ball volumes, and the certified
//! quadratic lower bound on 1 - g.
//!
//! Everything radial is evaluated through F_nu(z) = J_nu(z)/z^nu, which is
//! entire, so no removable singularity ever needs a special branch.

use crate::bessel::{eval, f_nu, first_bessel_zero, gamma_half, Order};
use crate::error::{Error, Result};
use crate::quadrature::integrate;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

/// Volume of the ball of radius `r` in R^n. Defined for n = 0 as 1 (the
/// counting measure of a point), which the slice-integration oracles rely on.
pub fn ball_volume(n: usize, r: f64) -> f64 {
    PI.powf(n as f64 / 2.0) * r.powi(n as i32) / gamma_half(n as u32 + 2)
}

/// First eigenvalue of the Dirichlet Laplacian on the unit ball of R^n,
/// the squared first zero of J_{n/2-1}. Supported for 1 <= n <= 10.
pub fn dirichlet_mu(n: usize) -> Result<f64> {
    check_dimension(n)?;
    let z = first_bessel_zero(n as f64 / 2.0 - 1.0)?;
    Ok(z * z)
}

fn check_dimension(n: usize) -> Result<()> {
    if !(1..=10).contains(&n) {
        return Err(Error::OutOfRange(format!(
            "dimension {n} outside the supported range 1..=10"
        )));
    }
    Ok(())
}

/// The first Dirichlet eigenfunction H of the unit ball, normalized to
/// unit L^2 norm, together with its eigenvalue and the transform value
/// h(0) = integral of H over the ball.
///
/// H(rho) = c rho^(1-n/2) J_{n/2-1}(sqrt(mu) rho) on [0, 1], zero outside;
/// it is radial, even, and positive inside the ball.
pub struct RadialWindow {
    dimension: usize,
    mu: f64,
    first_zero: f64,
    order: Order,
    prefactor: f64, // c * first_zero^(n/2-1); H(rho) = prefactor * F_nu(first_zero * rho)
    l2_norm: f64,
    h_at_zero: f64,
    min_h2: OnceLock<f64>,
}

impl RadialWindow {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// L^2 norm over the unit ball as confirmed by quadrature; equals 1 up
    /// to the construction tolerance of 1e-10.
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    /// h(0) = integral of H over the unit ball, positive.
    pub fn h_at_zero(&self) -> f64 {
        self.h_at_zero
    }

    /// H(rho), extended by zero outside [0, 1].
    pub fn profile(&self, rho: f64) -> f64 {
        if !(0.0..=1.0).contains(&rho) {
            return 0.0;
        }
        self.prefactor * f_nu(self.order, self.first_zero * rho)
    }
}

/// Surface area of the unit sphere in R^n.
fn beta(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n as u32)
}

/// Construct the normalized eigenfunction window for dimension n.
pub fn eigen_profile(n: usize) -> Result<RadialWindow> {
    check_dimension(n)?;
    let order = Order::from_f64(n as f64 / 2.0 - 1.0)?;
    let jz = first_bessel_zero(order.nu())?;
    let mu = jz * jz;
    let b = beta(n);
    // ||H||^2 = beta c^2 int_0^1 rho J_nu(jz rho)^2 drho = beta c^2 J_{nu+1}(jz)^2 / 2
    let j_next = eval(Order::from_f64(n as f64 / 2.0)?, jz);
    let c = 1.0 / (b * j_next * j_next / 2.0).sqrt();
    let prefactor = c * jz.powf(order.nu());
    let h_profile = |rho: f64| prefactor * f_nu(order, jz * rho);

    let l2_norm = b * integrate(
        |rho| {
            let h = h_profile(rho);
            h * h * rho.powi(n as i32 - 1)
        },
        0.0,
        1.0,
        1e-12,
    );
    if (l2_norm - 1.0).abs() > 1e-10 {
        return Err(Error::Internal(format!(
            "eigenfunction normalization off: ||H||^2 = {l2_norm}"
        )));
    }
    let h_at_zero = b * integrate(
        |rho| h_profile(rho) * rho.powi(n as i32 - 1),
        0.0,
        1.0,
        1e-12,
    );
    if h_at_zero <= 0.0 {
        return Err(Error::Internal(format!(
            "h(0) = {h_at_zero} must be positive"
        )));
    }
    Ok(RadialWindow {
        dimension: n,
        mu,
        first_zero: jz,
        order,
        prefactor,
        l2_norm,
        h_at_zero,
        min_h2: OnceLock::new(),
    })
}

/// h(t) = Fourier transform of H at radius t >= 0, via the radial reduction
/// h(t) = (2 pi)^(n/2) int_0^1 H(rho) F_nu(rho t) rho^(n-1) drho with
/// nu = n/2 - 1. Absolute error at most 1e-9 for t <= 1e3.
pub fn fourier_h(w: &RadialWindow, t: f64) -> Result<f64> {
    if !(0.0..=1e3).contains(&t) {
        return Err(Error::OutOfRange(format!(
            "fourier_h evaluated at t = {t}, supported range is [0, 1e3]"
        )));
    }
    let n = w.dimension;
    let scale = (2.0 * PI).powf(n as f64 / 2.0);
    Ok(scale
        * integrate(
            |rho| w.profile(rho) * f_nu(w.order, rho * t) * rho.powi(n as i32 - 1),
            0.0,
            1.0,
            1e-11,
        ))
}

/// min over [0, pi/2] of h(t)^2 on a grid of the given step, then golden
/// section refinement around the grid minimum. Errors if the computed
/// minimum is not strictly positive, since h has no zero that close to the
/// origin in any supported dimension and a nonpositive value would indicate
/// a special-function bug.
pub fn min_h_squared_with_step(w: &RadialWindow, step: f64) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::OutOfRange(format!(
            "grid step {step} must be positive"
        )));
    }
    let upper = FRAC_PI_2;
    let npts = (upper / step).ceil().max(2.0) as usize;
    let h2 = |t: f64| -> Result<f64> {
        let h = fourier_h(w, t)?;
        Ok(h * h)
    };
    let mut best_i = 0usize;
    let mut best = f64::INFINITY;
    for i in 0..=npts {
        let v = h2(upper * i as f64 / npts as f64)?;
        if v < best {
            best = v;
            best_i = i;
        }
    }
    // refine inside the two grid cells adjacent to the minimum
    let mut a = upper * best_i.saturating_sub(1) as f64 / npts as f64;
    let mut b = upper * (best_i + 1).min(npts) as f64 / npts as f64;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = h2(x1)?;
    let mut f2 = h2(x2)?;
    for _ in 0..70 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = h2(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = h2(x2)?;
        }
    }
    let refined = best.min(f1).min(f2);
    if refined <= 0.0 {
        return Err(Error::Internal(format!(
            "min of h^2 on [0, pi/2] computed as {refined}; h should not vanish there"
        )));
    }
    Ok(refined)
}

/// min over [0, pi/2] of h(t)^2 at the default grid step 1e-3, cached per
/// window.
pub fn min_h_squared(w: &RadialWindow) -> Result<f64> {
    if let Some(v) = w.min_h2.get() {
        return Ok(*v);
    }
    let v = min_h_squared_with_step(w, 1e-3)?;
    Ok(*w.min_h2.get_or_init(|| v))
}

/// Normalized Fourier transform of the unit-ball indicator at radius rho:
/// g(rho) = 2^(n/2) Gamma(n/2+1) J_{n/2}(rho) / rho^(n/2), with g(0) = 1.
pub fn ball_transform_g(n: usize, rho: f64) -> f64 {
    debug_assert!(n >= 1);
    let order = Order::from_f64(n as f64 / 2.0).expect("n/2 is a half-integer");
    // dividing by F_{n/2}(0) instead of multiplying the Gamma prefactor
    // makes g(0) exactly 1
    let f0 = 0.5f64.powf(order.nu()) / gamma_half(n as u32 + 2);
    f_nu(order, rho) / f0
}

/// A certified constant alpha with 1 - g(rho) >= alpha * min(rho, t_cap)^2
/// for all rho > 0.
pub struct AlphaCertificate {
    pub alpha: f64,
    /// number of construction grid points on (0, grid_upper]
    pub grid_points: usize,
    pub grid_upper: f64,
}

/// Certified quadratic minorant constant for 1 - g in dimension n, with the
/// cap t_cap (callers pass t_cap = R_0 gamma / (2m)).
///
/// On (0, max(rho_*, t_cap)] the ratio (1 - g(rho)) / min(rho, t_cap)^2 is
/// minimized on a grid refined until the minimum stabilizes, then scaled by
/// the safety factor 1 - 1e-3. Beyond rho_* the envelope
/// |J_nu(x)| <= sqrt(2/(pi x)) (valid for nu >= 1/2) forces |g| <= 1/2, so
/// the ratio is at least 0.5 / t_cap^2 there. The result is re-verified on
/// a 10x finer grid before being returned.
pub fn alpha_m_plus_1_certified(n: usize, t_cap: f64) -> Result<AlphaCertificate> {
    check_dimension(n)?;
    if !(t_cap > 0.0 && t_cap.is_finite()) {
        return Err(Error::OutOfRange(format!("cap {t_cap} must be positive")));
    }
    // |g(rho)| <= c_env rho^(-(n+1)/2) with c_env = 2^(n/2) Gamma(n/2+1) sqrt(2/pi)
    let c_env = 2f64.powf(n as f64 / 2.0) * gamma_half(n as u32 + 2) * (2.0 / PI).sqrt();
    let rho_star = (2.0 * c_env).powf(2.0 / (n as f64 + 1.0));
    let upper = rho_star.max(t_cap);
    let ratio = |rho: f64| {
        let m = rho.min(t_cap);
        (1.0 - ball_transform_g(n, rho)) / (m * m)
    };
    let grid_min = |pts: usize| {
        let mut best = f64::INFINITY;
        for i in 1..=pts {
            best = best.min(ratio(upper * i as f64 / pts as f64));
        }
        best
    };
    let mut pts = 4000usize;
    let mut m0 = grid_min(pts);
    for _ in 0..5 {
        let m1 = grid_min(2 * pts);
        let settled = (m1 - m0).abs() <= 1e-6 * m0.abs();
        m0 = m1;
        pts *= 2;
        if settled {
            break;
        }
    }
    if !(m0 > 0.0) {
        return Err(Error::Internal(format!(
            "grid minimum of (1-g)/min(rho,T)^2 computed as {m0}"
        )));
    }
    let alpha = (1.0 - 1e-3) * m0.min(0.5 / (t_cap * t_cap));
    // verification pass on a 10x finer grid
    let fine = 10 * pts;
    for i in 1..=fine {
        let rho = upper * i as f64 / fine as f64;
        let m = rho.min(t_cap);
        if alpha * m * m > 1.0 - ball_transform_g(n, rho) {
            return Err(Error::Certification(format!(
                "alpha = {alpha} exceeds 1 - g at rho = {rho} on the verification grid"
            )));
        }
    }
    Ok(AlphaCertificate {
        alpha,
        grid_points: pts,
        grid_upper: upper,
    })
}

/// The certified constant alone.
pub fn alpha_m_plus_1(n: usize, t_cap: f64) -> Result<f64> {
    Ok(alpha_m_plus_1_certified(n, t_cap)?.alpha)
}

#[cfg(test)]
// reference tables keep the oracle's full printed precision
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn h1_closed(t: f64) -> f64 {
        // transform of cos(pi x / 2) on (-1, 1)
        PI * t.cos() / (PI * PI / 4.0 - t * t)
    }

    #[test]
    fn volumes() {
        assert!((ball_volume(1, 1.0) - 2.0).abs() < 1e-15);
        assert!((ball_volume(2, 1.0) - PI).abs() < 1e-15);
        assert!((ball_volume(3, 2.0) - 32.0 * PI / 3.0).abs() < 1e-13);
        assert_eq!(ball_volume(0, 7.0), 1.0);
        // scaling by R^n
        let v1 = ball_volume(4, 1.0);
        assert!((ball_volume(4, 3.0) - 81.0 * v1).abs() < 1e-12 * v1);
    }

    #[test]
    fn mu_exact_in_dimensions_one_and_three() {
        assert_eq!(dirichlet_mu(1).unwrap(), PI * PI / 4.0);
        assert_eq!(dirichlet_mu(3).unwrap(), PI * PI);
    }

    #[test]
    fn mu_reference_values() {
        // frozen 40-digit references
        assert!((dirichlet_mu(2).unwrap() - 5.783185962946785).abs() < 1e-12);
        assert!((dirichlet_mu(4).unwrap() - 14.68197064212389).abs() < 1e-11);
        assert!((dirichlet_mu(10).unwrap() - 57.58294090329112).abs() < 1e-10);
        assert!(dirichlet_mu(0).is_err());
        assert!(dirichlet_mu(11).is_err());
    }

    #[test]
    fn window_is_normalized_and_vanishes_at_boundary() {
        for n in 1..=5 {
            let w = eigen_profile(n).unwrap();
            assert!((w.l2_norm() - 1.0).abs() <= 1e-10, "n = {n}");
            assert!(w.profile(1.0).abs() < 1e-12, "n = {n}");
            assert!(w.profile(1.5).abs() == 0.0);
            for i in 0..20 {
                let rho = i as f64 / 20.0;
                assert!(w.profile(rho) > 0.0, "H must be positive inside, n = {n}");
            }
        }
    }

    #[test]
    fn one_dimensional_window_is_cosine() {
        let w = eigen_profile(1).unwrap();
        for i in 0..=10 {
            let rho = i as f64 / 10.0;
            assert!((w.profile(rho) - (FRAC_PI_2 * rho).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn h_at_zero_reference_values() {
        // frozen references for beta c J_{nu+1}(j1)/j1
        let want = [
            1.273239544735163,
            1.474081016174682,
            1.595769121605731,
            1.639787957644180,
            1.614630833200979,
        ];
        for n in 1..=5usize {
            let w = eigen_profile(n).unwrap();
            assert!(
                (w.h_at_zero() - want[n - 1]).abs() < 1e-9,
                "n = {n}: {} vs {}",
                w.h_at_zero(),
                want[n - 1]
            );
        }
    }

    #[test]
    fn transform_matches_closed_form_in_dimension_one() {
        let w = eigen_profile(1).unwrap();
        assert!((fourier_h(&w, 0.0).unwrap() - 4.0 / PI).abs() < 1e-10);
        for &t in &[0.25, FRAC_PI_2 / 2.0, 1.0, 1.5, FRAC_PI_2, 2.5, 10.0] {
            let got = fourier_h(&w, t).unwrap();
            let want = if (t - FRAC_PI_2).abs() < 1e-12 {
                1.0
            } else {
                h1_closed(t)
            };
            assert!((got - want).abs() < 1e-9, "t = {t}: {got} vs {want}");
        }
    }

    #[test]
    fn transform_at_zero_equals_stored_value() {
        for n in 1..=4 {
            let w = eigen_profile(n).unwrap();
            assert!((fourier_h(&w, 0.0).unwrap() - w.h_at_zero()).abs() < 1e-10);
        }
    }

    #[test]
    fn transform_range_gate() {
        let w = eigen_profile(2).unwrap();
        assert!(fourier_h(&w, -0.1).is_err());
        assert!(fourier_h(&w, 1000.1).is_err());
        assert!(fourier_h(&w, 1000.0).is_ok());
    }

    #[test]
    fn min_h_squared_dimension_one_is_one() {
        // h decreases on [0, pi/2] and h(pi/2) = 1 in closed form
        let w = eigen_profile(1).unwrap();
        let v = min_h_squared(&w).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn min_h_squared_self_convergence() {
        for n in [1usize, 2, 3] {
            let w = eigen_profile(n).unwrap();
            let a = min_h_squared_with_step(&w, 1e-3).unwrap();
            let b = min_h_squared_with_step(&w, 5e-4).unwrap();
            assert!(a > 0.0);
            assert!((a - b).abs() < 1e-8, "n = {n}: {a} vs {b}");
        }
    }

    #[test]
    fn ball_transform_closed_forms() {
        assert_eq!(ball_transform_g(1, 0.0), 1.0);
        assert_eq!(ball_transform_g(7, 0.0), 1.0);
        for &rho in &[0.3, 1.0, 2.0, PI, 7.7] {
            assert!((ball_transform_g(1, rho) - rho.sin() / rho).abs() < 1e-13);
            let g3 = 3.0 * (rho.sin() - rho * rho.cos()) / (rho * rho * rho);
            assert!((ball_transform_g(3, rho) - g3).abs() < 1e-13);
        }
        assert!(ball_transform_g(1, PI).abs() < 1e-15);
    }

    #[test]
    fn ball_transform_reference_values() {
        let cases = [
            (2usize, 1.0, 0.8801011714898670),
            (2, 2.5, 0.3976752819714192),
            (3, 1.7, 0.7392838087247266),
            (4, 0.9, 0.9341857212326041),
            (5, 6.0, -0.01555237985945609),
        ];
        for (n, rho, want) in cases {
            let got = ball_transform_g(n, rho);
            assert!((got - want).abs() < 1e-12, "g_{n}({rho}): {got} vs {want}");
        }
    }

    #[test]
    fn ball_transform_bounded_and_decaying() {
        for n in 1..=6 {
            for i in 1..=400 {
                let rho = i as f64 * 0.25;
                assert!(ball_transform_g(n, rho).abs() <= 1.0 + 1e-12);
            }
            assert!(ball_transform_g(n, 80.0).abs() < 0.1);
        }
    }

    #[test]
    fn alpha_quadratic_taylor_coefficient() {
        // 1 - g(rho) = rho^2/(2n+4) + O(rho^4)
        for n in 1..=3usize {
            let rho = 1e-3;
            let lhs = (1.0 - ball_transform_g(n, rho)) / (rho * rho);
            let want = 1.0 / (2.0 * n as f64 + 4.0);
            assert!((lhs - want).abs() < 1e-4 * want, "n = {n}");
        }
    }

    #[test]
    fn alpha_small_cap_near_one_sixth() {
        let a = alpha_m_plus_1(1, 0.1).unwrap();
        assert!((a - 1.0 / 6.0).abs() < 0.01, "got {a}");
    }

    #[test]
    fn alpha_certificate_holds_on_spot_checks() {
        for (n, t_cap) in [(1usize, 1.0), (2, 1.0), (3, 0.5), (2, 10.0)] {
            let cert = alpha_m_plus_1_certified(n, t_cap).unwrap();
            assert!(cert.alpha > 0.0);
            for i in 1..=3000 {
                let rho = i as f64 * 0.01;
                let m = rho.min(t_cap);
                assert!(
                    cert.alpha * m * m <= 1.0 - ball_transform_g(n, rho) + 1e-14,
                    "n = {n}, T = {t_cap}, rho = {rho}"
                );
            }
        }
    }

    #[test]
    fn alpha_two_dimensional_unit_cap() {
        // minimum sits near rho = 1 where (1 - g_2(1))/1 = 0.1199
        let a = alpha_m_plus_1(2, 1.0).unwrap();
        assert!(a > 0.110 && a < 0.125, "got {a}");
    }
}
