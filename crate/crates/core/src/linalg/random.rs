//! Seeded generation of test matrices.
//!
//! Every generator draws from a [`TrialRng`] (ChaCha8), which is portable and
//! produces the same stream on every platform for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use super::{Matrix, SpdMatrix, SpectralBounds, SymMatrix};
use crate::error::Result;

pub type TrialRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream seed from a base seed and a path of labels,
/// so that every trial can be replayed on its own.
pub fn derive_seed(base: u64, labels: &[&str], indices: &[u64]) -> u64 {
    let mut h = Sha256::new();
    h.update(base.to_le_bytes());
    for l in labels {
        h.update((l.len() as u64).to_le_bytes());
        h.update(l.as_bytes());
    }
    for i in indices {
        h.update(i.to_le_bytes());
    }
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("sha256 digest is 32 bytes"))
}

fn gaussian_matrix(dim: usize, rng: &mut TrialRng) -> Matrix {
    let data = (0..dim * dim).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_row_major(dim, data).expect("dim >= 1")
}

/// Haar-distributed orthogonal matrix: Q factor of a Gaussian matrix with the
/// diagonal of R made positive (modified Gram-Schmidt yields that directly).
pub fn random_orthogonal(dim: usize, rng: &mut TrialRng) -> Matrix {
    loop {
        let g = gaussian_matrix(dim, rng);
        if let Some(q) = gram_schmidt(&g) {
            return q;
        }
    }
}

fn gram_schmidt(g: &Matrix) -> Option<Matrix> {
    let n = g.dim();
    let mut q = g.clone();
    for j in 0..n {
        for k in 0..j {
            let dot: f64 = (0..n).map(|i| q[(i, k)] * q[(i, j)]).sum();
            for i in 0..n {
                q[(i, j)] -= dot * q[(i, k)];
            }
        }
        let norm = (0..n).map(|i| q[(i, j)] * q[(i, j)]).sum::<f64>().sqrt();
        if !(norm > 1e-8) {
            return None;
        }
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    Some(q)
}

/// Random SPD matrix with spectrum in `[m, M]`.
///
/// For `dim >= 2` two eigenvalues are pinned to `m` and `M` so that the
/// bounds are attained; the rest are uniform on `[m, M]`.
pub fn random_spd(dim: usize, bounds: SpectralBounds, rng: &mut TrialRng) -> Result<SpdMatrix> {
    let (m, big_m) = (bounds.m(), bounds.big_m());
    let mut spectrum: Vec<f64> = (0..dim).map(|_| uniform_closed(rng, m, big_m)).collect();
    if dim >= 2 {
        spectrum[0] = m;
        spectrum[1] = big_m;
    }
    let q = random_orthogonal(dim, rng);
    SpdMatrix::new(SymMatrix::symmetrize(Matrix::spectral_synthesis(
        &q, &spectrum,
    )))
}

/// Random symmetric matrix with i.i.d. Gaussian upper triangle, rescaled to
/// spectral norm `norm`.
pub fn random_symmetric(dim: usize, norm: f64, rng: &mut TrialRng) -> Result<SymMatrix> {
    let s = SymMatrix::symmetrize(gaussian_matrix(dim, rng));
    let r = s.spectral_norm()?;
    Ok(if r > 0.0 { s.scale(norm / r) } else { s })
}

/// Random positive semidefinite matrix of spectral norm 1 (spectrum uniform
/// on `[0, 1]` with the top eigenvalue pinned to 1).
pub fn random_psd_unit(dim: usize, rng: &mut TrialRng) -> SymMatrix {
    let mut spectrum: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
    spectrum[0] = 1.0;
    let q = random_orthogonal(dim, rng);
    SymMatrix::symmetrize(Matrix::spectral_synthesis(&q, &spectrum))
}

/// Random invertible matrix `U · diag(σ) · Vᵀ` with singular values in `[0.5, 2]`.
pub fn random_invertible(dim: usize, rng: &mut TrialRng) -> Matrix {
    let u = random_orthogonal(dim, rng);
    let v = random_orthogonal(dim, rng);
    let sigma: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.5..=2.0)).collect();
    let mut us = u.clone();
    for i in 0..dim {
        for j in 0..dim {
            us[(i, j)] *= sigma[j];
        }
    }
    &us * &v.transpose()
}

/// Positive probability vector from normalized i.i.d. uniform(0.05, 1) draws.
pub fn random_simplex(n: usize, rng: &mut TrialRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

fn uniform_closed(rng: &mut TrialRng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}
