//! Dense symmetric linear algebra sized for Gram matrices of a few hundred
//! points: cyclic Jacobi eigendecomposition and Cholesky factorization.
//! Jacobi is chosen over faster reductions because every rotation is
//! orthogonal to machine precision, so eigenvalues carry no accumulated
//! similarity error beyond rounding.

use crate::error::{Error, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Internal("matrix rows have unequal lengths".into()));
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Column j as a vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    /// y = A x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order with the matching eigenvectors as
/// columns of the second value. Converges when the off-diagonal Frobenius
/// norm falls below 1e-13 of the full norm; refusal to converge within 100
/// sweeps is a numerical error (it indicates NaNs or similar corruption,
/// since Jacobi convergence is otherwise unconditional).
pub fn jacobi_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.n;
    let mut m = a.clone();
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (m.get(i, j) + m.get(j, i));
            m.set(i, j, s);
            m.set(j, i, s);
        }
    }
    let mut v = Matrix::identity(n);
    let norm = m.frobenius();
    if !norm.is_finite() {
        return Err(Error::Numerical(
            "matrix contains non-finite entries".into(),
        ));
    }
    let tol = 1e-13 * norm.max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    while m.off_diagonal_norm() > tol {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::Numerical(format!(
                "Jacobi failed to converge: off-diagonal norm {:.3e} after 100 sweeps (tolerance {:.3e})",
                m.off_diagonal_norm(),
                tol
            )));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                // smaller-angle root of t^2 + 2 theta t - 1 = 0
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| m.get(a, a).total_cmp(&m.get(b, b)));
    let values: Vec<f64> = order.iter().map(|&i| m.get(i, i)).collect();
    let mut vectors = Matrix::zeros(n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, new_j, v.get(i, old_j));
        }
    }
    Ok((values, vectors))
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// A non-positive pivot means the matrix is numerically indefinite.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let n = a.n;
    let mut l = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::Conditioning(format!(
                        "Cholesky pivot {s:.3e} at index {i}; matrix is not positive definite"
                    )));
                }
                l.set(i, i, s.sqrt());
            } else {
                l.set(i, j, s / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solve A x = b given the Cholesky factor L of A.
pub fn cholesky_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * y[k];
        }
        y[i] = s / l.get(i, i);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
pub fn spd_inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.n;
    let l = cholesky(a)?;
    let mut inv = Matrix::zeros(n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let col = cholesky_solve(&l, &e);
        e[j] = 0.0;
        for i in 0..n {
            inv.set(i, j, col[i]);
        }
    }
    // symmetrize to remove the last rounding asymmetry
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (inv.get(i, j) + inv.get(j, i));
            inv.set(i, j, s);
            inv.set(j, i, s);
        }
    }
    Ok(inv)
}
