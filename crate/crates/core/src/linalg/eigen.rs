//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use super::Matrix;
use crate::error::{MeanError, Result};

/// Sweep budget for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on the off-diagonal mass, relative to the Frobenius
/// norm of the input.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigendecomposition `A = Q · diag(values) · Qᵀ` with eigenvalues ascending
/// and eigenvectors stored as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Largest eigenvalue magnitude, i.e. the spectral norm.
    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Rebuilds `Q · diag(f(λ)) · Qᵀ`.
    pub fn synthesize(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        Matrix::spectral_synthesis(&self.vectors, &mapped)
    }

    /// Re-pairs mapped eigenvalues with their vectors and restores ascending
    /// order. Used when a spectral function is applied and the result's
    /// decomposition is known without another solve.
    pub(crate) fn mapped(&self, f: impl Fn(f64) -> f64) -> Eigen {
        let n = self.values.len();
        let mut pairs: Vec<(f64, usize)> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &x)| (f(x), k))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut vectors = Matrix::zeros(n);
        for (col, &(_, src)) in pairs.iter().enumerate() {
            for row in 0..n {
                vectors[(row, col)] = self.vectors[(row, src)];
            }
        }
        Eigen {
            values: pairs.into_iter().map(|(v, _)| v).collect(),
            vectors,
        }
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Only the symmetric part of `a` is meaningful; callers guarantee symmetry.
pub fn jacobi_eigen(a: &Matrix) -> Result<Eigen> {
    let n = a.dim();
    if !a.is_finite() {
        return Err(MeanError::DomainError(
            "eigendecomposition of a matrix with non-finite entries".into(),
        ));
    }
    let mut w = a.clone();
    let mut v = Matrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n == 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        let off = off_diagonal_norm(&w);
        if off <= OFF_DIAGONAL_TOL * scale {
            converged = true;
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(MeanError::NonConvergence {
                iterations: sweeps,
                residual: off / scale,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    debug_assert!(converged);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].total_cmp(&w[(j, j)]));
    let mut vectors = Matrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(Eigen {
        values: order.iter().map(|&i| w[(i, i)]).collect(),
        vectors,
    })
}

fn off_diagonal_norm(w: &Matrix) -> f64 {
    let n = w.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += w[(i, j)] * w[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Applies the rotation that annihilates `w[p][q]`, accumulating it into `v`.
fn rotate(w: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = w[(p, q)];
    if apq == 0.0 {
        return;
    }
    let n = w.dim();
    let theta = (w[(q, q)] - w[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = c * wkp - s * wkq;
        w[(k, q)] = s * wkp + c * wkq;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = c * wpk - s * wqk;
        w[(q, k)] = s * wpk + c * wqk;
    }
    w[(p, q)] = 0.0;
    w[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruction_error(a: &Matrix, e: &Eigen) -> f64 {
        let r = e.synthesize(|x| x);
        (&r - a).frobenius_norm() / a.frobenius_norm().max(f64::MIN_POSITIVE)
    }

    fn orthogonality_error(q: &Matrix) -> f64 {
        (&(&q.transpose() * q) - &Matrix::identity(q.dim())).frobenius_norm()
    }

    #[test]
    fn diagonal_input_sorts_eigenvalues() {
        let e = jacobi_eigen(&Matrix::from_diag(&[3.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        // permutation basis
        assert_eq!(e.vectors[(1, 0)].abs(), 1.0);
        assert_eq!(e.vectors[(0, 1)].abs(), 1.0);
    }

    #[test]
    fn identity_is_fixed() {
        for n in 1..6 {
            let e = jacobi_eigen(&Matrix::identity(n)).unwrap();
            assert!(e.values.iter().all(|&x| x == 1.0));
            assert_eq!(e.vectors, Matrix::identity(n));
        }
    }

    #[test]
    fn two_by_two_from_characteristic_polynomial() {
        // (2-λ)² - 1 = 0 → λ ∈ {1, 3}
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = jacobi_eigen(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!((e.values[1] - 3.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = (e.vectors[(0, 0)], e.vectors[(1, 0)]);
        let v1 = (e.vectors[(0, 1)], e.vectors[(1, 1)]);
        assert!((v0.0.abs() - h).abs() < 1e-15 && (v0.0 + v0.1).abs() < 1e-15);
        assert!((v1.0.abs() - h).abs() < 1e-15 && (v1.0 - v1.1).abs() < 1e-15);
    }

    #[test]
    fn dense_reconstruction_and_orthogonality() {
        let n = 7;
        let mut a = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let x = ((i * 31 + j * 17) % 13) as f64 - 6.0 + if i == j { 0.5 } else { 0.0 };
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let e = jacobi_eigen(&a).unwrap();
        assert!(reconstruction_error(&a, &e) <= 1e-12);
        assert!(orthogonality_error(&e.vectors) <= 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn zero_matrix() {
        let e = jacobi_eigen(&Matrix::zeros(3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn rejects_non_finite() {
        let a = Matrix::from_diag(&[1.0, f64::NAN]);
        assert!(matches!(jacobi_eigen(&a), Err(MeanError::DomainError(_))));
    }
}
