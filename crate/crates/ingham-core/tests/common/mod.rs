//! Oracles for the acceptance suite, deliberately independent of the
//! library's own numerics: no Bessel series, no Gauss-Legendre panels, no
//! Jacobi rotations. Everything here is built from adaptive Simpson
//! quadrature, finite differences, and LDL^T inertia counts.

#![allow(dead_code)]

use std::f64::consts::PI;

pub fn rng(seed: u64) -> impl FnMut() -> f64 {
    // xorshift64*; reproducible and free of external dependencies
    let mut state = seed | 1;
    move || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        let bits = state.wrapping_mul(0x2545F4914F6CDD1D);
        (bits >> 11) as f64 / (1u64 << 53) as f64
    }
}

// ---------------------------------------------------------------- simpson

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
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
    let (left, lm, flm) = panel(f, a, fa, m, fm);
    let (right, rm, frm) = panel(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + adaptive(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
}

pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = panel(&f, a, fa, b, fb);
    adaptive(&f, a, fa, b, fb, whole, m, fm, tol.max(1e-15), 32)
}

// ------------------------------------------------------- radial transforms

fn gamma_half_local(two_a: u32) -> f64 {
    // Gamma(two_a / 2) by the elementary recurrences
    assert!(two_a >= 1);
    if two_a.is_multiple_of(2) {
        let mut g = 1.0;
        for k in 2..two_a / 2 {
            g *= k as f64;
        }
        g
    } else {
        let mut g = PI.sqrt();
        for i in 0..(two_a - 1) / 2 {
            g *= i as f64 + 0.5;
        }
        g
    }
}

/// Surface measure of the unit sphere in R^n (n >= 1; n = 1 gives the
/// two-point measure 2).
pub fn sphere_surface(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half_local(n as u32)
}

/// int_{B_R} F(|x|) cos(delta . x) dx for a radial profile F, computed by
/// slicing perpendicular to delta and integrating each cross-section. The
/// slice coordinate is parametrized as x1 = R sin(theta) so the outer
/// integrand stays smooth at the poles. Uses nothing but Simpson quadrature.
pub fn slice_transform<F: Fn(f64) -> f64>(
    dimension: usize,
    radius: f64,
    dist: f64,
    profile: F,
    tol: f64,
) -> f64 {
    if dimension == 1 {
        return simpson(
            |x| (dist * x).cos() * profile(x.abs()),
            -radius,
            radius,
            tol,
        );
    }
    let surf = sphere_surface(dimension - 1);
    let inner_tol = tol / (8.0 * radius.max(1.0));
    let outer = |theta: f64| -> f64 {
        let x1 = radius * theta.sin();
        let top = radius * theta.cos();
        if top <= 0.0 {
            return 0.0;
        }
        let cross = surf
            * simpson(
                |sigma| {
                    profile((x1 * x1 + sigma * sigma).sqrt()) * sigma.powi(dimension as i32 - 2)
                },
                0.0,
                top,
                inner_tol,
            );
        (dist * x1).cos() * cross * top
    };
    simpson(outer, -0.5 * PI, 0.5 * PI, tol)
}

// ------------------------------------------------ radial Dirichlet oracle

/// Smallest eigenvalue of -(rho^(n-1) u')' = mu rho^(n-1) u on (0, 1) with
/// u(1) = 0, by a finite-volume discretization on cell centers and inverse
/// iteration. Cell centers avoid the coordinate singularity; the flux
/// through rho = 0 vanishes identically, which encodes regularity.
fn fd_mu_once(n: usize, cells: usize) -> f64 {
    let h = 1.0 / (cells as f64 + 0.5);
    let node = |i: usize| (i as f64 + 0.5) * h;
    let face = |i: usize| i as f64 * h;
    let p = |x: f64| x.powi(n as i32 - 1);

    // A u = mu B u, A tridiagonal SPD, B positive diagonal
    let mut diag = vec![0.0; cells];
    let mut off = vec![0.0; cells - 1]; // off[i] couples i and i+1
    let mut b = vec![0.0; cells];
    for i in 0..cells {
        // no flux through rho = 0: drop the low face of the first cell
        // (automatic for n >= 2 where p(0) = 0, explicit for n = 1)
        let lo = if i == 0 { 0.0 } else { p(face(i)) };
        let hi = p(face(i + 1));
        diag[i] = (lo + hi) / h;
        if i + 1 < cells {
            off[i] = -hi / h;
        }
        b[i] = p(node(i)) * h;
    }

    // Thomas solve of A x = rhs
    let solve = |rhs: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; cells];
        let mut d = vec![0.0; cells];
        c[0] = off.first().copied().unwrap_or(0.0) / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..cells {
            let m = diag[i] - off[i - 1] * c[i - 1];
            if i < cells - 1 {
                c[i] = off[i] / m;
            }
            d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / m;
        }
        let mut x = vec![0.0; cells];
        x[cells - 1] = d[cells - 1];
        for i in (0..cells - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    };

    let mut u: Vec<f64> = (0..cells).map(|i| 1.0 - node(i)).collect();
    let mut mu = 0.0;
    for _ in 0..200 {
        let rhs: Vec<f64> = (0..cells).map(|i| b[i] * u[i]).collect();
        let v = solve(&rhs);
        // Rayleigh quotient u^T A u / u^T B u on the new iterate
        let norm = v.iter().zip(&b).map(|(x, w)| x * x * w).sum::<f64>().sqrt();
        let v: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let mut au = vec![0.0; cells];
        for i in 0..cells {
            au[i] = diag[i] * v[i];
            if i > 0 {
                au[i] += off[i - 1] * v[i - 1];
            }
            if i + 1 < cells {
                au[i] += off[i] * v[i + 1];
            }
        }
        let new_mu = v.iter().zip(&au).map(|(x, y)| x * y).sum::<f64>();
        let settled = (new_mu - mu).abs() <= 1e-13 * new_mu.abs();
        mu = new_mu;
        u = v;
        if settled {
            break;
        }
    }
    mu
}

/// Richardson-extrapolated Dirichlet eigenvalue; the h^2 error of the
/// finite-volume scheme cancels between the two meshes.
pub fn fd_dirichlet_mu(n: usize, cells: usize) -> f64 {
    let coarse = fd_mu_once(n, cells);
    let fine = fd_mu_once(n, 2 * cells);
    (4.0 * fine - coarse) / 3.0
}

// --------------------------------------------------- inertia-count oracle

/// Number of eigenvalues of the symmetric matrix `a` (row-major, size n)
/// strictly below sigma, by the inertia of the LDL^T factorization of
/// A - sigma I. Returns None on pivot breakdown.
fn count_below(a: &[f64], n: usize, sigma: f64) -> Option<usize> {
    let mut m = a.to_vec();
    for i in 0..n {
        m[i * n + i] -= sigma;
    }
    let mut count = 0;
    for j in 0..n {
        let pivot = m[j * n + j];
        if pivot == 0.0 {
            return None;
        }
        if pivot < 0.0 {
            count += 1;
        }
        for i in j + 1..n {
            let factor = m[i * n + j] / pivot;
            for k in j..n {
                m[i * n + k] -= factor * m[j * n + k];
            }
        }
    }
    Some(count)
}

fn count_below_robust(a: &[f64], n: usize, sigma: f64, scale: f64) -> usize {
    let mut shift = 0.0;
    loop {
        if let Some(c) = count_below(a, n, sigma + shift) {
            return c;
        }
        // a zero pivot means sigma hit an eigenvalue of a leading minor;
        // nudge the shift by a few ulps of the matrix scale
        shift += 1e-14 * scale.max(1.0);
    }
}

/// Extreme eigenvalues of a symmetric matrix by bisection on the inertia
/// count. Independent of any rotation-based eigensolver.
pub fn inertia_extreme_eigs(a: &[f64], n: usize) -> (f64, f64) {
    // Gershgorin enclosure
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let d = a[i * n + i];
        let radius: f64 = (0..n).filter(|&j| j != i).map(|j| a[i * n + j].abs()).sum();
        lo = lo.min(d - radius);
        hi = hi.max(d + radius);
    }
    let scale = hi.abs().max(lo.abs());
    let bisect = |want_below: usize| -> f64 {
        let (mut a_, mut b_) = (lo - 1e-12 * scale, hi + 1e-12 * scale);
        for _ in 0..120 {
            let mid = 0.5 * (a_ + b_);
            if count_below_robust(a, n, mid, scale) >= want_below {
                b_ = mid;
            } else {
                a_ = mid;
            }
        }
        0.5 * (a_ + b_)
    };
    (bisect(1), bisect(n))
}

/// Solve a dense n x n system by Gaussian elimination with partial
/// pivoting; `a` is row-major and left untouched.
pub fn solve_dense(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i * n + col]
                    .abs()
                    .partial_cmp(&m[j * n + col].abs())
                    .unwrap()
            })
            .unwrap();
        if pivot != col {
            for j in 0..n {
                m.swap(col * n + j, pivot * n + j);
            }
            x.swap(col, pivot);
        }
        let d = m[col * n + col];
        assert!(d != 0.0, "singular system at column {col}");
        for i in col + 1..n {
            let f = m[i * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                m[i * n + j] -= f * m[col * n + j];
            }
            x[i] -= f * x[col];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in i + 1..n {
            s -= m[i * n + j] * x[j];
        }
        x[i] = s / m[i * n + i];
    }
    x
}

/// Fixed-frame quadrature of int_{B_R} f(omega . t) dt in the plane:
/// trapezoid in the angle (periodic, spectrally accurate) against adaptive
/// Simpson in the radius. Never reduces to |omega|, so it checks radiality
/// rather than assuming it.
pub fn planar_phase_quadrature<F: Fn(f64) -> f64>(omega: &[f64], radius: f64, f: F) -> f64 {
    assert_eq!(omega.len(), 2);
    let angles = 512;
    simpson(
        |rho| {
            let mut s = 0.0;
            for a in 0..angles {
                let theta = 2.0 * std::f64::consts::PI * a as f64 / angles as f64;
                s += f(rho * (omega[0] * theta.cos() + omega[1] * theta.sin()));
            }
            s * rho * 2.0 * std::f64::consts::PI / angles as f64
        },
        0.0,
        radius,
        1e-10 * radius.max(1.0),
    )
}

/// Spherical analogue for R^3 with fixed Simpson grids in the radius and
/// polar angle and a trapezoid in the azimuth.
pub fn spatial_phase_quadrature<F: Fn(f64) -> f64>(omega: &[f64], radius: f64, f: F) -> f64 {
    assert_eq!(omega.len(), 3);
    let pi = std::f64::consts::PI;
    let (nr, np, na) = (200, 200, 128);
    let simpson_weight = |i: usize, n: usize| -> f64 {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let hr = radius / nr as f64;
    let hp = pi / np as f64;
    let mut total = 0.0;
    for ir in 0..=nr {
        let rho = ir as f64 * hr;
        let wr = simpson_weight(ir, nr) * hr / 3.0;
        let mut shell = 0.0;
        for ip in 0..=np {
            let phi = ip as f64 * hp;
            let wp = simpson_weight(ip, np) * hp / 3.0;
            let (sp, cp) = phi.sin_cos();
            let mut ring = 0.0;
            for ia in 0..na {
                let theta = 2.0 * pi * ia as f64 / na as f64;
                let dot = omega[0] * sp * theta.cos() + omega[1] * sp * theta.sin() + omega[2] * cp;
                ring += f(rho * dot);
            }
            shell += wp * sp * ring * 2.0 * pi / na as f64;
        }
        total += wr * rho * rho * shell;
    }
    total
}
