//! Matrix power means as fixed points of `X ↦ Σ wᵢ X #ₚ Aᵢ`.

use super::kernels::{arithmetic_mean, weighted_sum, Frame};
use super::{check_tuple, Convergence, SolverSettings, WeightVector};
use crate::error::{MeanError, Result};
use crate::linalg::SpdMatrix;

/// One application of the fixed-point map at `x`. Returns the image and the
/// Thompson distance between `x` and the image.
///
/// With `S = Σ wᵢ (X^{-1/2} Aᵢ X^{-1/2})ᵖ` the image is `X^{1/2} S X^{1/2}`,
/// so `d_T(X, image) = max |log λ(S)|` comes for free from the spectrum of `S`.
fn step(x: &SpdMatrix, w: &WeightVector, mats: &[SpdMatrix], p: f64) -> Result<(SpdMatrix, f64)> {
    let frame = Frame::new(x)?;
    let rel = mats
        .iter()
        .map(|a| SpdMatrix::new(frame.pull(a.sym()))?.pow(p))
        .collect::<Result<Vec<_>>>()?;
    let s = SpdMatrix::new(weighted_sum(w, rel.iter().map(|m| m.sym()), x.dim()))?;
    let dist = s.min_eigenvalue().ln().abs().max(s.max_eigenvalue().ln().abs());
    Ok((SpdMatrix::new(frame.push(s.sym()))?, dist))
}

/// Thompson residual `d_T(X, Σ wᵢ X #ₚ Aᵢ)` of a candidate power mean.
/// For `p < 0` the residual is measured on the inverted problem.
pub fn power_residual(w: &WeightVector, mats: &[SpdMatrix], p: f64, x: &SpdMatrix) -> Result<f64> {
    check_tuple(w, mats)?;
    if p < 0.0 {
        let invs = invert_all(mats)?;
        return Ok(step(&x.inv()?, w, &invs, -p)?.1);
    }
    Ok(step(x, w, mats, p)?.1)
}

fn invert_all(mats: &[SpdMatrix]) -> Result<Vec<SpdMatrix>> {
    mats.iter().map(SpdMatrix::inv).collect()
}

/// Power mean `Pₚ(ω; 𝐀)` for `p ∈ [-1, 1] \ {0}`.
///
/// For `p > 0` the fixed-point map is iterated from the arithmetic mean until
/// successive iterates are within `settings.tol` in the Thompson metric; the
/// returned iterate is re-checked and must satisfy `d_T(X, F(X)) < 10·tol`.
/// Negative exponents use `Pₚ(ω; 𝐀) = P₋ₚ(ω; 𝐀⁻¹)⁻¹`.
pub fn power_mean(
    w: &WeightVector,
    mats: &[SpdMatrix],
    p: f64,
    settings: &SolverSettings,
) -> Result<SpdMatrix> {
    power_mean_with_report(w, mats, p, settings).map(|(x, _)| x)
}

pub fn power_mean_with_report(
    w: &WeightVector,
    mats: &[SpdMatrix],
    p: f64,
    settings: &SolverSettings,
) -> Result<(SpdMatrix, Convergence)> {
    check_tuple(w, mats)?;
    settings.validate()?;
    if !(p.abs() <= 1.0) || p == 0.0 {
        return Err(MeanError::InvalidArgument(format!(
            "power mean exponent must lie in [-1, 1] \\ {{0}}, got {p}"
        )));
    }
    if p < 0.0 {
        let (x, conv) = solve_positive(w, &invert_all(mats)?, -p, settings)?;
        return Ok((x.inv()?, conv));
    }
    solve_positive(w, mats, p, settings)
}

fn solve_positive(
    w: &WeightVector,
    mats: &[SpdMatrix],
    p: f64,
    settings: &SolverSettings,
) -> Result<(SpdMatrix, Convergence)> {
    if mats.len() == 1 {
        return Ok((
            mats[0].clone(),
            Convergence {
                iterations: 0,
                residual: 0.0,
            },
        ));
    }
    let mut x = arithmetic_mean(w, mats)?;
    let mut last = f64::INFINITY;
    for iter in 1..=settings.max_iter {
        let (next, dist) = step(&x, w, mats, p)?;
        last = dist;
        if dist < settings.tol {
            let (_, residual) = step(&next, w, mats, p)?;
            if residual < 10.0 * settings.tol {
                return Ok((
                    next,
                    Convergence {
                        iterations: iter,
                        residual,
                    },
                ));
            }
            return Err(MeanError::NonConvergence {
                iterations: iter,
                residual,
            });
        }
        x = next;
    }
    Err(MeanError::NonConvergence {
        iterations: settings.max_iter,
        residual: last,
    })
}
