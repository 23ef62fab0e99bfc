//! Karcher mean via the damped exponential-barycenter iteration.

use super::kernels::{arithmetic_mean, weighted_sum, Frame};
use super::{check_tuple, Convergence, SolverSettings, WeightVector};
use crate::error::{MeanError, Result};
use crate::linalg::{SpdMatrix, SymMatrix};

const MAX_HALVINGS: u32 = 6;

/// `Σ wᵢ log(X^{-1/2} Aᵢ X^{-1/2})`, the left side of the Karcher equation
/// pulled back to the identity.
fn gradient(frame: &Frame, w: &WeightVector, mats: &[SpdMatrix], dim: usize) -> Result<SymMatrix> {
    let logs = mats
        .iter()
        .map(|a| Ok(SpdMatrix::new(frame.pull(a.sym()))?.log()))
        .collect::<Result<Vec<_>>>()?;
    Ok(weighted_sum(w, logs.iter(), dim))
}

/// Frobenius norm of the Karcher-equation residual at `x`.
pub fn karcher_residual(w: &WeightVector, mats: &[SpdMatrix], x: &SpdMatrix) -> Result<f64> {
    let dim = check_tuple(w, mats)?;
    let frame = Frame::new(x)?;
    Ok(gradient(&frame, w, mats, dim)?.frobenius_norm())
}

/// Karcher mean `Λ(ω; 𝐀)`, the unique SPD solution of
/// `Σ wᵢ log(X^{-1/2} Aᵢ X^{-1/2}) = 0`.
pub fn karcher_mean(
    w: &WeightVector,
    mats: &[SpdMatrix],
    settings: &SolverSettings,
) -> Result<SpdMatrix> {
    karcher_mean_with_report(w, mats, settings).map(|(x, _)| x)
}

/// Iterates `X ← X^{1/2} exp(α · Σ wᵢ log(X^{-1/2} Aᵢ X^{-1/2})) X^{1/2}` from
/// the arithmetic mean. The step `α` starts at `settings.damping` and is
/// halved whenever a step would increase the residual, at most six times.
pub fn karcher_mean_with_report(
    w: &WeightVector,
    mats: &[SpdMatrix],
    settings: &SolverSettings,
) -> Result<(SpdMatrix, Convergence)> {
    let dim = check_tuple(w, mats)?;
    settings.validate()?;
    if mats.len() == 1 {
        return Ok((
            mats[0].clone(),
            Convergence {
                iterations: 0,
                residual: 0.0,
            },
        ));
    }

    let mut alpha = settings.damping;
    let mut halvings = 0;
    let mut x = arithmetic_mean(w, mats)?;
    let mut frame = Frame::new(&x)?;
    let mut grad = gradient(&frame, w, mats, dim)?;
    let mut residual = grad.frobenius_norm();

    for iter in 0..settings.max_iter {
        if residual < settings.tol {
            return Ok((
                x,
                Convergence {
                    iterations: iter,
                    residual,
                },
            ));
        }
        let candidate = SpdMatrix::new(frame.push(grad.scale(alpha).exp()?.sym()))?;
        let cand_frame = Frame::new(&candidate)?;
        let cand_grad = gradient(&cand_frame, w, mats, dim)?;
        let cand_residual = cand_grad.frobenius_norm();
        if cand_residual > residual {
            if halvings == MAX_HALVINGS {
                // Rounding floor: no step size improves the residual.
                return Err(MeanError::NonConvergence {
                    iterations: iter,
                    residual,
                });
            }
            alpha *= 0.5;
            halvings += 1;
            continue;
        }
        x = candidate;
        frame = cand_frame;
        grad = cand_grad;
        residual = cand_residual;
    }
    if residual < settings.tol {
        return Ok((
            x,
            Convergence {
                iterations: settings.max_iter,
                residual,
            },
        ));
    }
    Err(MeanError::NonConvergence {
        iterations: settings.max_iter,
        residual,
    })
}
