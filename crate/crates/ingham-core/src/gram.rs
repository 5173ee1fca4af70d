//! Gram matrices of exponential systems over balls and the objects derived
//! from them: exact spectral frame bounds, biorthogonal dual families, the
//! Haraux-type coefficient map, and per-point interpolating multipliers.
//!
//! Everything here rests on one identity: for the ball B_R in R^N,
//! int_{B_R} e^{i delta . t} dt = V_R g(R |delta|), where g is the
//! normalized transform of the unit-ball indicator. The Gram entries are
//! therefore exact up to special-function error, and the eigenvalues of the
//! Gram matrix are the sharp constants in
//! lambda_min sum |x_k|^2 <= int_{B_R} |sum x_k e^{i omega_k . t}|^2 dt
//! <= lambda_max sum |x_k|^2.

use crate::ball::{ball_transform_g, ball_volume, dirichlet_mu};
use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, jacobi_eigen, spd_inverse, Matrix};
use crate::spectra::{geometry, FrequencyFamily, PartitionedFamily};
use num_complex::Complex64;
use serde::Serialize;

/// Largest admissible value of radius * distance in a transform argument;
/// beyond this the Bessel backend is out of its validated range.
const MAX_TRANSFORM_ARG: f64 = 1e4;

fn transform_entry(n: usize, volume: f64, radius: f64, dist: f64) -> Result<f64> {
    let arg = radius * dist;
    if arg > MAX_TRANSFORM_ARG {
        return Err(Error::OutOfRange(format!(
            "transform argument {arg:.3e} exceeds the supported range {MAX_TRANSFORM_ARG:.0e}"
        )));
    }
    Ok(volume * ball_transform_g(n, arg))
}

/// Gram matrix of the exponentials e^{i omega_k . t} in L^2(B_R).
#[derive(Debug, Clone)]
pub struct GramMatrix {
    family: FrequencyFamily,
    radius: f64,
    volume: f64,
    entries: Matrix,
}

impl GramMatrix {
    pub fn family(&self) -> &FrequencyFamily {
        &self.family
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// V_R, also the common diagonal entry.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }
}

/// Assemble the Gram matrix G_{kn} = V_R g(R |omega_k - omega_n|).
pub fn gram_matrix(family: &FrequencyFamily, radius: f64) -> Result<GramMatrix> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "ball radius {radius} must be positive and finite"
        )));
    }
    let n = family.dimension();
    let k = family.len();
    let volume = ball_volume(n, radius);
    let mut entries = Matrix::zeros(k);
    for i in 0..k {
        entries.set(i, i, volume);
        for j in i + 1..k {
            let v = transform_entry(n, volume, radius, family.distance(i, j))?;
            entries.set(i, j, v);
            entries.set(j, i, v);
        }
    }
    Ok(GramMatrix {
        family: family.clone(),
        radius,
        volume,
        entries,
    })
}

/// Sharp frame bounds of the exponential system: the extreme eigenvalues of
/// its Gram matrix, with the worst eigenpair residual max |G v - lambda v|
/// as a quality measure.
#[derive(Debug, Clone, Serialize)]
pub struct RieszBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub residual: f64,
}

pub fn riesz_bounds(gram: &GramMatrix) -> Result<RieszBounds> {
    let (values, vectors) = jacobi_eigen(&gram.entries)?;
    let k = values.len();
    // G is a true Gram matrix, so it is positive semidefinite; anything more
    // than rounding below zero means the entries themselves are wrong
    if values[0] < -1e-9 * gram.volume {
        return Err(Error::Numerical(format!(
            "Gram eigenvalue {:.6e} is negative beyond rounding (V_R = {:.6e})",
            values[0], gram.volume
        )));
    }
    let mut residual = 0f64;
    for j in 0..k {
        let v = vectors.column(j);
        let gv = gram.entries.apply(&v);
        for i in 0..k {
            residual = residual.max((gv[i] - values[j] * v[i]).abs());
        }
    }
    Ok(RieszBounds {
        lambda_min: values[0].max(0.0),
        lambda_max: values[k - 1],
        residual,
    })
}

/// int_{B_R} |sum_k x_k e^{i omega_k . t}|^2 dt, evaluated exactly through
/// the Gram entries.
pub fn quadratic_form(family: &FrequencyFamily, radius: f64, x: &[Complex64]) -> Result<f64> {
    if x.len() != family.len() {
        return Err(Error::InvalidFamily(format!(
            "{} coefficients for {} points",
            x.len(),
            family.len()
        )));
    }
    let gram = gram_matrix(family, radius)?;
    let k = x.len();
    let mut total = 0.0;
    for i in 0..k {
        total += gram.entries.get(i, i) * x[i].norm_sqr();
        for j in i + 1..k {
            total += 2.0 * gram.entries.get(i, j) * (x[i] * x[j].conj()).re;
        }
    }
    Ok(total)
}

/// The biorthogonal system y_k = sum_n D_{kn} e^{i omega_n . t} with
/// D = G^{-1}: the unique elements of the span with <y_k, e_n> = delta_{kn}.
#[derive(Debug, Clone)]
pub struct DualFamily {
    coefficients: Matrix,
    dual_norms: Vec<f64>,
    biorthogonality_residual: f64,
    lambda_min: f64,
}

impl DualFamily {
    /// Row k holds the expansion coefficients of y_k.
    pub fn coefficients(&self) -> &Matrix {
        &self.coefficients
    }

    /// ||y_k||_{L^2(B_R)} = sqrt(D_{kk}).
    pub fn dual_norms(&self) -> &[f64] {
        &self.dual_norms
    }

    pub fn biorthogonality_residual(&self) -> f64 {
        self.biorthogonality_residual
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }
}

pub fn dual_family(gram: &GramMatrix) -> Result<DualFamily> {
    let (values, _) = jacobi_eigen(&gram.entries)?;
    let lambda_min = values[0];
    if lambda_min <= 1e-12 * gram.volume {
        return Err(Error::Conditioning(format!(
            "Gram matrix is numerically singular: lambda_min = {lambda_min:.6e} \
             with V_R = {:.6e}; the family has no usable dual system at this radius",
            gram.volume
        )));
    }
    let inv = spd_inverse(&gram.entries)?;
    let k = gram.entries.n();
    let mut residual = 0f64;
    for i in 0..k {
        let gv = gram.entries.apply(&inv.column(i));
        for j in 0..k {
            let want = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((gv[j] - want).abs());
        }
    }
    if residual > 1e-8 {
        return Err(Error::Conditioning(format!(
            "dual system failed biorthogonality: residual {residual:.3e} exceeds 1e-8"
        )));
    }
    let bound = (1.0 + 1e-9) / lambda_min.sqrt();
    let mut dual_norms = Vec::with_capacity(k);
    for i in 0..k {
        let d = inv.get(i, i);
        if d < 0.0 {
            return Err(Error::Numerical(format!(
                "dual norm squared {d:.3e} is negative at index {i}"
            )));
        }
        let norm = d.sqrt();
        if norm > bound {
            return Err(Error::Numerical(format!(
                "dual norm {norm:.6e} exceeds the spectral bound {bound:.6e}"
            )));
        }
        dual_norms.push(norm);
    }
    Ok(DualFamily {
        coefficients: inv,
        dual_norms,
        biorthogonality_residual: residual,
        lambda_min,
    })
}

/// Coefficient action of the averaging step that removes one exponential:
/// the map u |-> u - V_r^{-1} int_{B_r} u(. + s) e^{-i omega_{k'} . s} ds
/// multiplies the coefficient of omega_k by 1 - g(r |omega_k - omega_{k'}|),
/// so the k'-th coefficient of the output is exactly zero.
pub fn haraux_map(
    family: &FrequencyFamily,
    k_prime: &str,
    r: f64,
    x: &[Complex64],
) -> Result<Vec<Complex64>> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "averaging radius {r} must be positive and finite"
        )));
    }
    if x.len() != family.len() {
        return Err(Error::InvalidFamily(format!(
            "{} coefficients for {} points",
            x.len(),
            family.len()
        )));
    }
    let kp = family
        .index_of(k_prime)
        .ok_or_else(|| Error::InvalidFamily(format!("no point labeled {k_prime:?}")))?;
    let n = family.dimension();
    let mut out = Vec::with_capacity(x.len());
    for k in 0..x.len() {
        let factor = if k == kp {
            0.0
        } else {
            let arg = r * family.distance(k, kp);
            if arg > MAX_TRANSFORM_ARG {
                return Err(Error::OutOfRange(format!(
                    "transform argument {arg:.3e} exceeds the supported range"
                )));
            }
            1.0 - ball_transform_g(n, arg)
        };
        out.push(factor * x[k]);
    }
    Ok(out)
}

/// One factor of an interpolating multiplier: the transform of a finite
/// exponential sum cut off to the ball of the stored radius, evaluated as
/// psi_hat(omega) = V_rho sum_a c_a g(rho |omega_a - omega|).
#[derive(Debug, Clone)]
struct ClassFactor {
    radius: f64,
    volume: f64,
    indices: Vec<usize>,
    coefficients: Vec<f64>,
    // position of the interpolated point within `indices`
    pos: usize,
}

impl ClassFactor {
    fn evaluate(&self, family: &FrequencyFamily, omega: &[f64]) -> Result<f64> {
        let n = family.dimension();
        let mut total = 0.0;
        for (&a, &c) in self.indices.iter().zip(&self.coefficients) {
            let dist = family
                .point(a)
                .iter()
                .zip(omega)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt();
            let arg = self.radius * dist;
            if arg > MAX_TRANSFORM_ARG {
                return Err(Error::OutOfRange(format!(
                    "transform argument {arg:.3e} exceeds the supported range"
                )));
            }
            total += c * self.volume * ball_transform_g(n, arg);
        }
        Ok(total)
    }
}

/// The family of interpolating multipliers rho_k: for each point k, a
/// product of m class factors whose transform satisfies
/// rho_hat_k(omega_n) = delta_{kn} across the whole family.
///
/// The factor for class j is built from the dual system of the class
/// exponentials over B_{R_j + r} when k belongs to the class, and over the
/// class enlarged by omega_k with radius R_j + 2r when it does not (there it
/// interpolates 1 at omega_k and 0 on the class). As a convolution of m
/// pieces, rho_k is supported in the ball of radius R_0 + (2m-1) r = R - r.
#[derive(Debug, Clone)]
pub struct KahaneInterpolant {
    pf: PartitionedFamily,
    radius: f64,
    r: f64,
    support_radius: f64,
    factors: Vec<Vec<ClassFactor>>, // [point][class - 1]
    residual: f64,
}

impl KahaneInterpolant {
    pub fn partition(&self) -> &PartitionedFamily {
        &self.pf
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// The margin r = (R - R_0) / (2m).
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Radius of the ball containing the support of every rho_k; equals
    /// R - r.
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Worst deviation of rho_hat_k(omega_n) from delta_{kn}, measured at
    /// construction.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Per-point bounds on sup |rho_hat_k| from the dual coefficients
    /// themselves: each class factor psi has coefficients c solving
    /// G c = e_pos against its class Gram, so ||psi||_{L^2}^2 = c^T G c
    /// = c_pos and Cauchy-Schwarz gives ||psi||_{L^1} <= sqrt(V_rho c_pos).
    /// Entry k is the product of these bounds over the m factors of rho_k.
    ///
    /// Sharper than the alpha-chain `p_factors` of `theorem_constants`,
    /// which bound the same L^1 norms through the certified class constants
    /// instead of the exact spectra; only the chain form enters the
    /// constants L and c1.
    pub fn spectral_p_factors(&self) -> Vec<f64> {
        self.factors
            .iter()
            .map(|fs| {
                fs.iter()
                    .map(|f| (f.volume * f.coefficients[f.pos]).sqrt())
                    .product()
            })
            .collect()
    }

    /// rho_hat_k(omega); real because every factor has real coefficients
    /// and a real radial transform.
    pub fn evaluate(&self, k_label: &str, omega: &[f64]) -> Result<f64> {
        let fam = self.pf.family();
        let k = fam
            .index_of(k_label)
            .ok_or_else(|| Error::InvalidFamily(format!("no point labeled {k_label:?}")))?;
        if omega.len() != fam.dimension() {
            return Err(Error::InvalidFamily(format!(
                "evaluation point has {} coordinates, expected {}",
                omega.len(),
                fam.dimension()
            )));
        }
        let mut product = 1.0;
        for factor in &self.factors[k] {
            product *= factor.evaluate(fam, omega)?;
        }
        Ok(product)
    }
}

fn class_factor_for_member(
    indices: &[usize],
    radius: f64,
    member_pos: usize,
    chol: &Matrix,
    volume: f64,
) -> ClassFactor {
    let mut e = vec![0.0; indices.len()];
    e[member_pos] = 1.0;
    let coefficients = cholesky_solve(chol, &e);
    ClassFactor {
        radius,
        volume,
        indices: indices.to_vec(),
        coefficients,
        pos: member_pos,
    }
}

fn class_gram(fam: &FrequencyFamily, indices: &[usize], radius: f64) -> Result<(Matrix, f64)> {
    let n = fam.dimension();
    let volume = ball_volume(n, radius);
    let mut g = Matrix::zeros(indices.len());
    for (a, &ia) in indices.iter().enumerate() {
        g.set(a, a, volume);
        for (b, &ib) in indices.iter().enumerate().skip(a + 1) {
            let v = transform_entry(n, volume, radius, fam.distance(ia, ib))?;
            g.set(a, b, v);
            g.set(b, a, v);
        }
    }
    Ok((g, volume))
}

pub fn kahane_interpolant(pf: &PartitionedFamily, radius: f64) -> Result<KahaneInterpolant> {
    let fam = pf.family();
    let n = fam.dimension();
    let geom = geometry(pf, dirichlet_mu(n)?)?;
    let r0 = geom.critical_radius;
    if !(radius.is_finite() && radius > r0) {
        return Err(Error::Hypothesis(format!(
            "radius {radius} must exceed the critical radius {r0}"
        )));
    }
    let m = pf.m();
    let r = (radius - r0) / (2.0 * m as f64);
    let k_total = fam.len();
    let mut factors: Vec<Vec<ClassFactor>> = vec![Vec::with_capacity(m); k_total];

    for j in 1..=m {
        let members = pf.class_indices(j);
        let rj = geom.class_radii[j - 1];

        let radius_in = rj + r;
        let (g_in, vol_in) = class_gram(fam, &members, radius_in)?;
        let chol_in = cholesky(&g_in).map_err(|e| {
            Error::Conditioning(format!(
                "class {j} dual system over radius {radius_in}: {e}"
            ))
        })?;
        for (pos, &k) in members.iter().enumerate() {
            factors[k].push(class_factor_for_member(
                &members, radius_in, pos, &chol_in, vol_in,
            ));
        }

        let radius_out = rj + 2.0 * r;
        for k in 0..k_total {
            if pf.class_of_index(k) == j {
                continue;
            }
            let mut enlarged = members.clone();
            enlarged.push(k);
            let (g_out, vol_out) = class_gram(fam, &enlarged, radius_out)?;
            let chol_out = cholesky(&g_out).map_err(|e| {
                Error::Conditioning(format!(
                    "enlarged dual system for point {:?} against class {j}: {e}",
                    fam.labels()[k]
                ))
            })?;
            factors[k].push(class_factor_for_member(
                &enlarged,
                radius_out,
                enlarged.len() - 1,
                &chol_out,
                vol_out,
            ));
        }
    }

    let interp = KahaneInterpolant {
        pf: pf.clone(),
        radius,
        r,
        support_radius: r0 + (2.0 * m as f64 - 1.0) * r,
        factors,
        residual: 0.0,
    };

    let mut residual = 0f64;
    for k in 0..k_total {
        for t in 0..k_total {
            let value = {
                let mut product = 1.0;
                for factor in &interp.factors[k] {
                    product *= factor.evaluate(fam, fam.point(t))?;
                }
                product
            };
            let want = if k == t { 1.0 } else { 0.0 };
            residual = residual.max((value - want).abs());
        }
    }
    if residual > 1e-7 {
        return Err(Error::Certification(format!(
            "interpolant failed the delta property: residual {residual:.3e} exceeds 1e-7"
        )));
    }
    Ok(KahaneInterpolant { residual, ..interp })
}

/// rho_hat_k(omega) for a single evaluation. Builds the full interpolant
/// internally; call `kahane_interpolant` directly to amortize construction
/// over many evaluations.
pub fn rho_hat(pf: &PartitionedFamily, radius: f64, k_label: &str, omega: &[f64]) -> Result<f64> {
    kahane_interpolant(pf, radius)?.evaluate(k_label, omega)
}
