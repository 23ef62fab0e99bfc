//! Loewner-order predicates, the Thompson metric and the Kantorovich bounds.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{check_same_dim, SpdMatrix, SpectralBounds, SymMatrix};

/// Default relative tolerance for order checks.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Result of a Loewner comparison `A ≤ B`.
///
/// `slack` is `λ_min(B − A)`; negative values measure a violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub holds: bool,
    pub slack: f64,
    pub tolerance_used: f64,
}

impl OrderVerdict {
    pub fn from_slack(slack: f64, tolerance: f64) -> Self {
        Self {
            holds: slack >= -tolerance,
            slack,
            tolerance_used: tolerance,
        }
    }
}

/// Tests `A ≤ B` with tolerance `rel_tol · (1 + max(‖A‖₂, ‖B‖₂))`.
pub fn loewner_leq(
    a: impl AsRef<SymMatrix>,
    b: impl AsRef<SymMatrix>,
    rel_tol: f64,
) -> Result<OrderVerdict> {
    let (a, b) = (a.as_ref(), b.as_ref());
    check_same_dim(a.dim(), b.dim())?;
    let slack = b.sub(a).min_eigenvalue()?;
    let scale = 1.0 + a.spectral_norm()?.max(b.spectral_norm()?);
    Ok(OrderVerdict::from_slack(slack, rel_tol * scale))
}

/// Thompson metric `‖log A^{-1/2} B A^{-1/2}‖` (operator norm).
pub fn thompson_distance(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    check_same_dim(a.dim(), b.dim())?;
    let inv_half = a.inv_sqrt()?;
    let e = b.sandwich(inv_half.sym()).eigen()?;
    // the spectrum is positive in exact arithmetic; clamp rounding noise
    let lo = e.min().max(f64::MIN_POSITIVE);
    Ok(lo.ln().abs().max(e.max().ln().abs()))
}

/// Kantorovich constant `(M + m)² / (4Mm)`.
pub fn kantorovich_const(b: SpectralBounds) -> f64 {
    kantorovich_ratio(b.m(), b.big_m())
}

/// `(x + y)² / (4xy)` for positive `x, y`.
pub(crate) fn kantorovich_ratio(x: f64, y: f64) -> f64 {
    (x + y) * (x + y) / (4.0 * x * y)
}

/// Additive bound `ρ_{M,m}(t)`:
///
/// * `(1 − t)m` for `t ≥ M/m`,
/// * `M + m − 2√(tMm)` for `m/M ≤ t ≤ M/m`,
/// * `(1 − t)M` for `t ≤ m/M`.
pub fn rho(b: SpectralBounds, t: f64) -> f64 {
    let (m, big_m) = (b.m(), b.big_m());
    if t >= big_m / m {
        (1.0 - t) * m
    } else if t <= m / big_m {
        (1.0 - t) * big_m
    } else {
        big_m + m - 2.0 * (t * big_m * m).sqrt()
    }
}
