pub(crate) mod axioms;
pub(crate) mod interp;
pub(crate) mod kantorovich;
pub(crate) mod limits;
pub(crate) mod open;
pub(crate) mod param;

use crate::error::Result;
use crate::linalg::SpdMatrix;
use crate::means::{evaluate_mean, hoelder_scalar, MeanKind, SolverSettings, WeightVector};

/// The interpolation times used by the two-parameter checks.
pub(crate) const T_GRID: [f64; 4] = [0.0, 0.3, 0.7, 1.0];

/// `P_p(1 − t, t; x, y)` for matrices, with the endpoints taken exactly.
pub(crate) fn interpolate(
    p: f64,
    t: f64,
    x: &SpdMatrix,
    y: &SpdMatrix,
    s: &SolverSettings,
) -> Result<SpdMatrix> {
    if t == 0.0 {
        return Ok(x.clone());
    }
    if t == 1.0 {
        return Ok(y.clone());
    }
    evaluate_mean(MeanKind::power(p)?, &WeightVector::pair(t)?, &[x.clone(), y.clone()], s)
}

/// `𝔐_p(1 − t, t; a, b)` for positive scalars, with exact endpoints.
pub(crate) fn interpolate_scalar(p: f64, t: f64, a: f64, b: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(a);
    }
    if t == 1.0 {
        return Ok(b);
    }
    hoelder_scalar(&WeightVector::pair(t)?, &[a, b], p)
}

/// Matrix power mean of exponent `p ∈ [-1, 1]` (Karcher at `0`).
pub(crate) fn power_of(
    p: f64,
    w: &WeightVector,
    mats: &[SpdMatrix],
    s: &SolverSettings,
) -> Result<SpdMatrix> {
    evaluate_mean(MeanKind::power(p)?, w, mats, s)
}

/// Whether the mean is known to satisfy `Φ(G(𝐀)) ≤ G(Φ(𝐀))` for positive
/// unital linear maps `Φ`.
pub(crate) fn has_positive_map_inequality(kind: MeanKind) -> bool {
    matches!(kind, MeanKind::Arithmetic | MeanKind::Karcher | MeanKind::Power(_))
}

/// Whether the self-consistency equation characterizes the mean.
pub(crate) fn has_self_consistency(kind: MeanKind) -> bool {
    matches!(kind, MeanKind::Karcher | MeanKind::Power(_))
}
