//! Parameterized means `G^μ` for `μ ∈ [-∞, ∞]` and the mixture maps that
//! compare row-first and column-first evaluation over a block grid.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MeanError, Result};
use crate::linalg::{check_same_dim, SpdMatrix, SymMatrix};
use crate::means::{arithmetic_mean, evaluate_mean, harmonic_mean, MeanKind, SolverSettings, WeightVector};

/// A parameter on the extended real line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedParam {
    Finite(f64),
    PlusInf,
    MinusInf,
}

impl ExtendedParam {
    /// Maps `±∞` to the matching endpoint and `-0.0` to `+0.0`. NaN is rejected.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            return Err(MeanError::InvalidArgument("parameter is NaN".into()));
        }
        Ok(if x == f64::INFINITY {
            ExtendedParam::PlusInf
        } else if x == f64::NEG_INFINITY {
            ExtendedParam::MinusInf
        } else {
            ExtendedParam::Finite(x + 0.0)
        })
    }

    pub fn value(&self) -> f64 {
        match *self {
            ExtendedParam::Finite(x) => x,
            ExtendedParam::PlusInf => f64::INFINITY,
            ExtendedParam::MinusInf => f64::NEG_INFINITY,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.value() < 0.0
    }
}

impl From<ExtendedParam> for f64 {
    fn from(p: ExtendedParam) -> f64 {
        p.value()
    }
}

impl fmt::Display for ExtendedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedParam::Finite(x) => write!(f, "{x}"),
            ExtendedParam::PlusInf => f.write_str("inf"),
            ExtendedParam::MinusInf => f.write_str("-inf"),
        }
    }
}

impl FromStr for ExtendedParam {
    type Err = MeanError;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let x = match t.as_str() {
            "inf" | "+inf" | "infinity" | "+infinity" => f64::INFINITY,
            "-inf" | "-infinity" => f64::NEG_INFINITY,
            _ => t
                .parse::<f64>()
                .map_err(|_| MeanError::InvalidArgument(format!("bad parameter {s:?}")))?,
        };
        ExtendedParam::new(x)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ParamRepr {
    Number(f64),
    Text(String),
}

impl Serialize for ExtendedParam {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedParam::Finite(x) => ParamRepr::Number(*x),
            other => ParamRepr::Text(other.to_string()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtendedParam {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ParamRepr::deserialize(d)? {
            ParamRepr::Number(x) => ExtendedParam::new(x),
            ParamRepr::Text(t) => t.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// An `n × k` grid of SPD blocks of one common dimension, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    n_rows: usize,
    n_cols: usize,
    cells: Vec<SpdMatrix>,
}

impl BlockGrid {
    pub fn new(n_rows: usize, n_cols: usize, cells: Vec<SpdMatrix>) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(MeanError::Empty);
        }
        check_same_dim(n_rows * n_cols, cells.len())?;
        let dim = cells[0].dim();
        for c in &cells[1..] {
            check_same_dim(dim, c.dim())?;
        }
        Ok(Self {
            n_rows,
            n_cols,
            cells,
        })
    }

    pub fn from_rows(rows: Vec<Vec<SpdMatrix>>) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(MeanError::DimensionMismatch {
                expected: k,
                found: bad.len(),
            });
        }
        Self::new(n, k, rows.into_iter().flatten().collect())
    }

    /// Every cell equal to `a`.
    pub fn constant(n_rows: usize, n_cols: usize, a: &SpdMatrix) -> Result<Self> {
        Self::new(n_rows, n_cols, vec![a.clone(); n_rows * n_cols])
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn dim(&self) -> usize {
        self.cells[0].dim()
    }

    pub fn cell(&self, i: usize, j: usize) -> &SpdMatrix {
        &self.cells[i * self.n_cols + j]
    }

    pub fn cells(&self) -> &[SpdMatrix] {
        &self.cells
    }

    /// The row tuple `𝔸ⁱ`.
    pub fn row(&self, i: usize) -> &[SpdMatrix] {
        &self.cells[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// The column tuple `𝔸ⱼ`.
    pub fn col(&self, j: usize) -> Vec<SpdMatrix> {
        (0..self.n_rows).map(|i| self.cell(i, j).clone()).collect()
    }
}

/// `G^μ(ω; 𝐀)`:
///
/// * `μ ≥ 0`: `G(ω; 𝐀 + μ𝐈) − μI`,
/// * `μ < 0`: `G^{−μ}(ω; 𝐀⁻¹)⁻¹`,
/// * `+∞` / `−∞`: the arithmetic / harmonic mean.
///
/// Fails with [`MeanError::NonPositiveResult`] when the final `−μI` cancels
/// the spectrum below the positivity floor.
pub fn parameterize(
    kind: MeanKind,
    mu: ExtendedParam,
    w: &WeightVector,
    mats: &[SpdMatrix],
    s: &SolverSettings,
) -> Result<SpdMatrix> {
    match mu {
        ExtendedParam::PlusInf => arithmetic_mean(w, mats),
        ExtendedParam::MinusInf => harmonic_mean(w, mats),
        ExtendedParam::Finite(m) if m == 0.0 => evaluate_mean(kind, w, mats, s),
        ExtendedParam::Finite(m) if m > 0.0 => {
            let shifted = mats
                .iter()
                .map(|a| a.shift(m))
                .collect::<Result<Vec<_>>>()?;
            unshift(evaluate_mean(kind, w, &shifted, s)?, m)
        }
        ExtendedParam::Finite(m) if m.is_finite() => {
            let invs = mats.iter().map(SpdMatrix::inv).collect::<Result<Vec<_>>>()?;
            parameterize(kind, ExtendedParam::Finite(-m), w, &invs, s)?.inv()
        }
        ExtendedParam::Finite(m) => ExtendedParam::new(m)
            .and_then(|p| parameterize(kind, p, w, mats, s)),
    }
}

fn unshift(x: SpdMatrix, mu: f64) -> Result<SpdMatrix> {
    x.shift(-mu).map_err(|e| match e {
        MeanError::NotPositiveDefinite { min_eig, .. } => MeanError::NonPositiveResult { min_eig },
        other => other,
    })
}

/// Both sides of the homogeneity identity for the scale factor `a > 0`:
/// `G^μ(ω; a𝐀)` and `a·G^{μ/a}(ω; 𝐀)` for `μ ≥ 0`, `a·G^{aμ}(ω; 𝐀)` for `μ < 0`.
pub fn param_homogeneity_pair(
    kind: MeanKind,
    mu: f64,
    a: f64,
    w: &WeightVector,
    mats: &[SpdMatrix],
    s: &SolverSettings,
) -> Result<(SpdMatrix, SpdMatrix)> {
    if !(a > 0.0 && a.is_finite()) || !mu.is_finite() {
        return Err(MeanError::InvalidArgument(format!(
            "homogeneity needs finite μ and a > 0, got μ={mu}, a={a}"
        )));
    }
    let scaled = mats.iter().map(|m| m.scale(a)).collect::<Result<Vec<_>>>()?;
    let left = parameterize(kind, ExtendedParam::new(mu)?, w, &scaled, s)?;
    let inner = if mu >= 0.0 { mu / a } else { a * mu };
    let right = parameterize(kind, ExtendedParam::new(inner)?, w, mats, s)?.scale(a)?;
    Ok((left, right))
}

/// Row-first and column-first mixtures with row parameters `μᵢ` and an outer
/// parameter `ν`:
///
/// `lhs = G_n^ν(ω; G_k^{μ₁}(λ; 𝔸¹), …, G_k^{μₙ}(λ; 𝔸ⁿ))`,
/// `rhs = G_k^{ω•μ}(λ; G_n^ν(ω; 𝔸₁), …, G_n^ν(ω; 𝔸ₖ))`.
///
/// The parameters must be all nonnegative or all negative.
#[allow(clippy::too_many_arguments)]
pub fn row_param_mixture(
    kind: MeanKind,
    nu: ExtendedParam,
    mus: &[f64],
    w: &WeightVector,
    lambda: &WeightVector,
    grid: &BlockGrid,
    s: &SolverSettings,
) -> Result<(SpdMatrix, SpdMatrix)> {
    check_same_dim(grid.n_rows(), mus.len())?;
    check_same_dim(grid.n_rows(), w.len())?;
    check_same_dim(grid.n_cols(), lambda.len())?;
    if mus.iter().any(|m| !m.is_finite()) {
        return Err(MeanError::InvalidArgument("row parameters must be finite".into()));
    }
    let negative = nu.is_negative();
    if mus.iter().any(|&m| (m < 0.0) != negative) {
        return Err(MeanError::MixedSignParameters);
    }
    let row_means = (0..grid.n_rows())
        .map(|i| parameterize(kind, ExtendedParam::new(mus[i])?, lambda, grid.row(i), s))
        .collect::<Result<Vec<_>>>()?;
    let lhs = parameterize(kind, nu, w, &row_means, s)?;
    let col_means = (0..grid.n_cols())
        .map(|j| parameterize(kind, nu, w, &grid.col(j), s))
        .collect::<Result<Vec<_>>>()?;
    let rhs = parameterize(kind, ExtendedParam::new(w.dot(mus))?, lambda, &col_means, s)?;
    Ok((lhs, rhs))
}

/// Row-first and column-first mixtures of the plain mean:
/// `Gₙ(ω; G_k(λ; 𝔸¹), …)` and `G_k(λ; Gₙ(ω; 𝔸₁), …)`.
pub fn unparam_mixture(
    kind: MeanKind,
    w: &WeightVector,
    lambda: &WeightVector,
    grid: &BlockGrid,
    s: &SolverSettings,
) -> Result<(SpdMatrix, SpdMatrix)> {
    let zeros = vec![0.0; grid.n_rows()];
    row_param_mixture(kind, ExtendedParam::Finite(0.0), &zeros, w, lambda, grid, s)
}

/// `Φ = Σ wᵢ Bᵢ`, the positive unital map applied to a block-diagonal
/// argument with diagonal blocks `Bᵢ`.
pub fn pinching_map(w: &WeightVector, blocks: &[SpdMatrix]) -> Result<SpdMatrix> {
    arithmetic_mean(w, blocks)
}

/// The diagonal blocks of `a` when split into `parts` equal blocks.
pub fn diagonal_blocks(a: &SymMatrix, parts: usize) -> Result<Vec<SpdMatrix>> {
    if parts == 0 || a.dim() % parts != 0 {
        return Err(MeanError::InvalidArgument(format!(
            "cannot split dimension {} into {parts} equal blocks",
            a.dim()
        )));
    }
    let d = a.dim() / parts;
    (0..parts)
        .map(|b| {
            let rows = (0..d)
                .map(|i| (0..d).map(|j| a[(b * d + i, b * d + j)]).collect())
                .collect::<Vec<Vec<f64>>>();
            SpdMatrix::from_rows(&rows)
        })
        .collect()
}

/// `Φ(A) = Σ vⱼ A_jj` over the `v.len()` equal diagonal blocks of `a`.
pub fn pinch(v: &WeightVector, a: &SymMatrix) -> Result<SpdMatrix> {
    pinching_map(v, &diagonal_blocks(a, v.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn diag(d: &[f64]) -> SpdMatrix {
        SpdMatrix::from_diag(d).unwrap()
    }

    fn half() -> WeightVector {
        WeightVector::uniform(2).unwrap()
    }

    fn s() -> SolverSettings {
        SolverSettings::default()
    }

    fn fin(x: f64) -> ExtendedParam {
        ExtendedParam::new(x).unwrap()
    }

    fn close(a: &SpdMatrix, b: &SpdMatrix, tol: f64) -> bool {
        (a.matrix() - b.matrix()).frobenius_norm() <= tol * b.frobenius_norm()
    }

    #[test]
    fn param_parsing() {
        assert_eq!("inf".parse::<ExtendedParam>().unwrap(), ExtendedParam::PlusInf);
        assert_eq!("-inf".parse::<ExtendedParam>().unwrap(), ExtendedParam::MinusInf);
        assert_eq!("2.5".parse::<ExtendedParam>().unwrap(), ExtendedParam::Finite(2.5));
        let z = ExtendedParam::new(-0.0).unwrap();
        assert!(z.value().is_sign_positive());
        assert!("nan".parse::<ExtendedParam>().is_err());
        let json = serde_json::to_string(&[fin(1.5), ExtendedParam::MinusInf]).unwrap();
        assert_eq!(json, r#"[1.5,"-inf"]"#);
        let back: Vec<ExtendedParam> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![fin(1.5), ExtendedParam::MinusInf]);
    }

    #[test]
    fn karcher_shift_examples() {
        let mats = [diag(&[1.0]), diag(&[4.0])];
        let x = parameterize(MeanKind::Karcher, fin(1.0), &half(), &mats, &s()).unwrap();
        assert!((x[(0, 0)] - (10f64.sqrt() - 1.0)).abs() < 1e-11);
        let x = parameterize(MeanKind::Karcher, fin(-1.0), &half(), &mats, &s()).unwrap();
        assert!((x[(0, 0)] - 1.0 / (2.5f64.sqrt() - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn endpoints_and_zero() {
        let mats = [diag(&[1.0, 2.0]), diag(&[4.0, 3.0])];
        let w = half();
        let a = parameterize(MeanKind::Karcher, ExtendedParam::PlusInf, &w, &mats, &s()).unwrap();
        assert_eq!(a, arithmetic_mean(&w, &mats).unwrap());
        let h = parameterize(MeanKind::Agh, ExtendedParam::MinusInf, &w, &mats, &s()).unwrap();
        assert_eq!(h, harmonic_mean(&w, &mats).unwrap());
        let g = parameterize(MeanKind::Agh, fin(0.0), &w, &mats, &s()).unwrap();
        assert_eq!(g, evaluate_mean(MeanKind::Agh, &w, &mats, &s()).unwrap());
    }

    #[test]
    fn harmonic_parameterization_is_the_resolvent_mean() {
        let mats = [
            SpdMatrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap(),
            SpdMatrix::from_rows(&[vec![1.0, 0.2], vec![0.2, 4.0]]).unwrap(),
        ];
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let g = parameterize(MeanKind::Harmonic, fin(2.0), &w, &mats, &s()).unwrap();
        let r = crate::means::resolvent_mean(&w, &mats, 2.0).unwrap();
        assert!(close(&g, &r, 1e-14));
    }

    #[test]
    fn homogeneity_scalar_examples() {
        let mats = [diag(&[1.0]), diag(&[4.0])];
        let (l, r) =
            param_homogeneity_pair(MeanKind::Karcher, 2.0, 2.0, &half(), &mats, &s()).unwrap();
        // G²(2, 8) = √(4·10) − 2 and 2·G¹(1, 4) = 2(√(2·5) − 1)
        let expect = 2.0 * 10f64.sqrt() - 2.0;
        assert!((l[(0, 0)] - expect).abs() < 1e-10);
        assert!((r[(0, 0)] - expect).abs() < 1e-10);

        // G^{-3} of (1, 4) by the scalar duality: (√((1+3)(1/4+3)) − 3)⁻¹
        let (l, r) =
            param_homogeneity_pair(MeanKind::Karcher, -1.0, 3.0, &half(), &mats, &s()).unwrap();
        let expect = 3.0 / ((4.0f64 * 3.25).sqrt() - 3.0);
        assert!((l[(0, 0)] - expect).abs() < 1e-9 * expect);
        assert!((r[(0, 0)] - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn mixtures_on_degenerate_grids() {
        let a = SpdMatrix::from_rows(&[vec![3.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let grid = BlockGrid::constant(2, 3, &a).unwrap();
        let w = half();
        let lambda = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let (l, r) = row_param_mixture(MeanKind::Karcher, fin(1.0), &[0.5, 2.0], &w, &lambda, &grid, &s())
            .unwrap();
        assert!(close(&l, &a, 1e-10) && close(&r, &a, 1e-10));

        let one = BlockGrid::constant(1, 1, &a).unwrap();
        let u = WeightVector::uniform(1).unwrap();
        let (l, r) = unparam_mixture(MeanKind::Agh, &u, &u, &one, &s()).unwrap();
        assert_eq!(l, a);
        assert_eq!(r, a);
    }

    #[test]
    fn commuting_grid_gives_the_product() {
        let cells = vec![diag(&[1.0, 2.0]), diag(&[4.0, 3.0]), diag(&[9.0, 0.5]), diag(&[2.0, 5.0])];
        let grid = BlockGrid::new(2, 2, cells.clone()).unwrap();
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let lambda = WeightVector::new(vec![0.6, 0.4]).unwrap();
        let (l, r) = unparam_mixture(MeanKind::Karcher, &w, &lambda, &grid, &s()).unwrap();
        let mut expect = [1.0, 1.0];
        for i in 0..2 {
            for j in 0..2 {
                let e = w.as_slice()[i] * lambda.as_slice()[j];
                for (d, x) in expect.iter_mut().enumerate() {
                    *x *= cells[i * 2 + j][(d, d)].powf(e);
                }
            }
        }
        let expect = diag(&expect);
        assert!(close(&l, &expect, 1e-10) && close(&r, &expect, 1e-10));
    }

    #[test]
    fn mixed_signs_are_rejected() {
        let a = diag(&[1.0]);
        let grid = BlockGrid::constant(2, 2, &a).unwrap();
        let w = half();
        let r = row_param_mixture(MeanKind::Karcher, fin(1.0), &[1.0, -1.0], &w, &w, &grid, &s());
        assert_eq!(r, Err(MeanError::MixedSignParameters));
        let r = row_param_mixture(MeanKind::Karcher, fin(-1.0), &[1.0, 2.0], &w, &w, &grid, &s());
        assert_eq!(r, Err(MeanError::MixedSignParameters));
    }

    #[test]
    fn pinching_examples() {
        let a = diag(&[2.0, 5.0]);
        let one = WeightVector::uniform(1).unwrap();
        assert_eq!(pinching_map(&one, std::slice::from_ref(&a)).unwrap(), a);
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let eye = SpdMatrix::identity(3);
        assert_eq!(pinching_map(&w, &[eye.clone(), eye.clone(), eye.clone()]).unwrap(), eye);
        let p = pinching_map(&half(), &[diag(&[1.0, 3.0]), diag(&[5.0, 7.0])]).unwrap();
        assert_eq!(p.matrix(), &Matrix::from_diag(&[3.0, 5.0]));

        let big = SymMatrix::from_rows(&[
            vec![2.0, 0.1, 9.0, 9.0],
            vec![0.1, 1.0, 9.0, 9.0],
            vec![9.0, 9.0, 4.0, 0.3],
            vec![9.0, 9.0, 0.3, 3.0],
        ])
        .unwrap();
        let p = pinch(&half(), &big).unwrap();
        assert_eq!(p.rows(), vec![vec![3.0, 0.2], vec![0.2, 2.0]]);
        assert!(pinch(&WeightVector::uniform(3).unwrap(), &big).is_err());
    }

    #[test]
    fn cancellation_is_reported() {
        // 1e9 + 1e-9 rounds to 1e9, so the subtraction leaves exactly zero
        let mats = [diag(&[1e-9]), diag(&[2e-9])];
        let r = parameterize(MeanKind::Karcher, fin(1e9), &half(), &mats, &s());
        assert!(matches!(r, Err(MeanError::NonPositiveResult { .. })), "{r:?}");
    }
}
