//! Ordered means of positive-definite matrices.
//!
//! Each kernel takes a [`WeightVector`] and a tuple of [`SpdMatrix`] values of
//! a common dimension. [`evaluate_mean`] dispatches on [`MeanKind`] and is the
//! single entry point used by the parameterized constructions and the
//! verification harness.

mod karcher;
mod kernels;
mod power;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MeanError, Result};
use crate::linalg::{check_same_dim, SpdMatrix};

pub use karcher::{karcher_mean, karcher_mean_with_report, karcher_residual};
pub use kernels::{
    agh_mean, arithmetic_mean, geodesic, harmonic_mean, hoelder_operator, hoelder_scalar,
    resolvent_mean,
};
pub use power::{power_mean, power_mean_with_report, power_residual};

/// Positive probability vector. Renormalized on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "Vec<f64>")]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(MeanError::InvalidWeights("empty weight vector".into()));
        }
        if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(MeanError::InvalidWeights(format!(
                "weights must be positive and finite, got {bad}"
            )));
        }
        let total: f64 = weights.iter().sum();
        Ok(Self(weights.into_iter().map(|w| w / total).collect()))
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    /// `(1 - t, t)` for `t ∈ (0, 1)`.
    pub fn pair(t: f64) -> Result<Self> {
        Self::new(vec![1.0 - t, t])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `Σ wᵢ xᵢ`.
    pub fn dot(&self, xs: &[f64]) -> f64 {
        self.0.iter().zip(xs).map(|(w, x)| w * x).sum()
    }

    /// Weights reordered by `perm` (entry `i` of the result is `w[perm[i]]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(perm.iter().map(|&i| self.0[i]).collect())
    }

    /// The vector concatenated `k` times and divided by `k`.
    pub fn repeated(&self, k: usize) -> Result<Self> {
        Self::new(self.0.iter().copied().cycle().take(self.0.len() * k).collect())
    }
}

impl From<WeightVector> for Vec<f64> {
    fn from(w: WeightVector) -> Self {
        w.0
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<f64>::deserialize(d)?;
        WeightVector::new(raw).map_err(serde::de::Error::custom)
    }
}

/// The implemented ordered means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeanKind {
    Arithmetic,
    Harmonic,
    /// Matrix power mean, exponent in `[-1, 1] \ {0}`.
    Power(f64),
    Karcher,
    /// Geodesic midpoint of the arithmetic and harmonic means.
    Agh,
}

impl MeanKind {
    /// Power mean of exponent `p`; `p = 0` is the Karcher mean.
    pub fn power(p: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&p) {
            return Err(MeanError::InvalidArgument(format!(
                "power mean exponent must lie in [-1, 1], got {p}"
            )));
        }
        Ok(if p == 0.0 {
            MeanKind::Karcher
        } else {
            MeanKind::Power(p)
        })
    }

    /// The exponent of the power-mean family this kind belongs to, if any.
    pub fn power_exponent(&self) -> Option<f64> {
        match *self {
            MeanKind::Power(p) => Some(p),
            MeanKind::Karcher => Some(0.0),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    fn normalized(self) -> Result<Self> {
        match self {
            MeanKind::Power(p) => MeanKind::power(p),
            other => Ok(other),
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeanKind::Arithmetic => f.write_str("arithmetic"),
            MeanKind::Harmonic => f.write_str("harmonic"),
            MeanKind::Power(p) => write!(f, "power:{p}"),
            MeanKind::Karcher => f.write_str("karcher"),
            MeanKind::Agh => f.write_str("agh"),
        }
    }
}

impl FromStr for MeanKind {
    type Err = MeanError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "arithmetic" => Ok(MeanKind::Arithmetic),
            "harmonic" => Ok(MeanKind::Harmonic),
            "karcher" => Ok(MeanKind::Karcher),
            "agh" => Ok(MeanKind::Agh),
            _ => {
                let p = s
                    .strip_prefix("power:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| MeanError::InvalidArgument(format!("unknown mean kind {s:?}")))?;
                MeanKind::power(p)
            }
        }
    }
}

impl Serialize for MeanKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MeanKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

/// Stopping rules for the iterative kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
}

impl SolverSettings {
    pub const MIN_TOL: f64 = 1e-14;
    pub const MAX_ITER_CAP: usize = 10_000;

    pub fn new(tol: f64, max_iter: usize, damping: f64) -> Result<Self> {
        let s = Self {
            tol,
            max_iter,
            damping,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol >= Self::MIN_TOL && self.tol.is_finite()) {
            return Err(MeanError::InvalidArgument(format!(
                "solver tolerance must be >= {:e}, got {}",
                Self::MIN_TOL,
                self.tol
            )));
        }
        if self.max_iter == 0 || self.max_iter > Self::MAX_ITER_CAP {
            return Err(MeanError::InvalidArgument(format!(
                "max_iter must lie in 1..={}, got {}",
                Self::MAX_ITER_CAP,
                self.max_iter
            )));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(MeanError::InvalidArgument(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        Ok(())
    }
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_iter: 500,
            damping: 1.0,
        }
    }
}

/// Outcome of an iterative solve: how many iterations ran and the final
/// residual certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    pub iterations: usize,
    pub residual: f64,
}

/// Validates a `(weights, matrices)` pair and returns the common dimension.
pub(crate) fn check_tuple(w: &WeightVector, mats: &[SpdMatrix]) -> Result<usize> {
    if mats.is_empty() {
        return Err(MeanError::Empty);
    }
    check_same_dim(w.len(), mats.len())?;
    let dim = mats[0].dim();
    for m in &mats[1..] {
        check_same_dim(dim, m.dim())?;
    }
    Ok(dim)
}

/// Evaluates `G(ω; A₁, …, Aₙ)` for the mean selected by `kind`.
pub fn evaluate_mean(
    kind: MeanKind,
    w: &WeightVector,
    mats: &[SpdMatrix],
    settings: &SolverSettings,
) -> Result<SpdMatrix> {
    match kind.normalized()? {
        MeanKind::Arithmetic => arithmetic_mean(w, mats),
        MeanKind::Harmonic => harmonic_mean(w, mats),
        MeanKind::Power(p) => power_mean(w, mats, p, settings),
        MeanKind::Karcher => karcher_mean(w, mats, settings),
        MeanKind::Agh => agh_mean(w, mats),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_are_renormalized() {
        let w = WeightVector::new(vec![1.0, 3.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.25, 0.75]);
        assert!(WeightVector::new(vec![]).is_err());
        assert!(WeightVector::new(vec![0.5, 0.0]).is_err());
        assert!(WeightVector::new(vec![0.5, f64::NAN]).is_err());
    }

    #[test]
    fn repeated_weights() {
        let w = WeightVector::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(w.repeated(2).unwrap().as_slice(), &[0.125, 0.375, 0.125, 0.375]);
    }

    #[test]
    fn power_zero_is_karcher() {
        assert_eq!(MeanKind::power(0.0).unwrap(), MeanKind::Karcher);
        assert_eq!(MeanKind::power(-0.0).unwrap(), MeanKind::Karcher);
        assert!(MeanKind::power(1.5).is_err());
        assert_eq!("power:0".parse::<MeanKind>().unwrap(), MeanKind::Karcher);
    }

    #[test]
    fn kind_string_round_trip() {
        for k in [
            MeanKind::Arithmetic,
            MeanKind::Harmonic,
            MeanKind::Power(-0.5),
            MeanKind::Power(1.0),
            MeanKind::Karcher,
            MeanKind::Agh,
        ] {
            assert_eq!(k.to_string().parse::<MeanKind>().unwrap(), k);
        }
        assert!("geometric".parse::<MeanKind>().is_err());
    }

    #[test]
    fn settings_validation() {
        assert!(SolverSettings::new(1e-15, 10, 1.0).is_err());
        assert!(SolverSettings::new(1e-10, 0, 1.0).is_err());
        assert!(SolverSettings::new(1e-10, 10_001, 1.0).is_err());
        assert!(SolverSettings::new(1e-10, 10, 0.0).is_err());
        assert!(SolverSettings::default().validate().is_ok());
    }
}
