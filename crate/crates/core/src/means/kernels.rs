use super::{check_tuple, WeightVector};
use crate::error::{MeanError, Result};
use crate::linalg::{check_same_dim, SpdMatrix, SymMatrix};

/// Square root and inverse square root of a base point, shared by every
/// geodesic that starts there.
pub(crate) struct Frame {
    half: SpdMatrix,
    inv_half: SpdMatrix,
}

impl Frame {
    pub(crate) fn new(x: &SpdMatrix) -> Result<Self> {
        Ok(Self {
            half: x.sqrt()?,
            inv_half: x.inv_sqrt()?,
        })
    }

    /// `X^{-1/2} B X^{-1/2}`.
    pub(crate) fn pull(&self, b: &SymMatrix) -> SymMatrix {
        b.sandwich(self.inv_half.sym())
    }

    /// `X^{1/2} S X^{1/2}`.
    pub(crate) fn push(&self, s: &SymMatrix) -> SymMatrix {
        s.sandwich(self.half.sym())
    }
}

/// Weighted geodesic `A #ₚ B = A^{1/2} (A^{-1/2} B A^{-1/2})^p A^{1/2}`.
pub fn geodesic(a: &SpdMatrix, b: &SpdMatrix, p: f64) -> Result<SpdMatrix> {
    check_same_dim(a.dim(), b.dim())?;
    if p == 0.0 {
        return Ok(a.clone());
    }
    if p == 1.0 {
        return Ok(b.clone());
    }
    let frame = Frame::new(a)?;
    let rel = SpdMatrix::new(frame.pull(b.sym()))?.pow(p)?;
    SpdMatrix::new(frame.push(rel.sym()))
}

/// `Σ wᵢ Aᵢ`.
pub fn arithmetic_mean(w: &WeightVector, mats: &[SpdMatrix]) -> Result<SpdMatrix> {
    let dim = check_tuple(w, mats)?;
    if mats.len() == 1 {
        return Ok(mats[0].clone());
    }
    let sum = weighted_sum(w, mats.iter().map(|m| m.sym()), dim);
    SpdMatrix::new(sum)
}

/// `(Σ wᵢ Aᵢ⁻¹)⁻¹`.
pub fn harmonic_mean(w: &WeightVector, mats: &[SpdMatrix]) -> Result<SpdMatrix> {
    let dim = check_tuple(w, mats)?;
    if mats.len() == 1 {
        return Ok(mats[0].clone());
    }
    let invs = mats.iter().map(SpdMatrix::inv).collect::<Result<Vec<_>>>()?;
    let sum = weighted_sum(w, invs.iter().map(|m| m.sym()), dim);
    SpdMatrix::new(sum)?.inv()
}

pub(crate) fn weighted_sum<'a>(
    w: &WeightVector,
    mats: impl Iterator<Item = &'a SymMatrix>,
    dim: usize,
) -> SymMatrix {
    w.as_slice()
        .iter()
        .zip(mats)
        .fold(SymMatrix::zeros(dim), |acc, (&wi, m)| acc.add(&m.scale(wi)))
}

/// Scalar Hölder mean `(Σ wᵢ aᵢᵖ)^{1/p}`: the weighted geometric mean at
/// `p = 0` and `max`/`min` at `p = ±∞`.
pub fn hoelder_scalar(w: &WeightVector, a: &[f64], p: f64) -> Result<f64> {
    check_same_dim(w.len(), a.len())?;
    if let Some(bad) = a.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(MeanError::InvalidArgument(format!(
            "Hölder mean needs positive entries, got {bad}"
        )));
    }
    if p.is_nan() {
        return Err(MeanError::InvalidArgument("exponent is NaN".into()));
    }
    let ws = w.as_slice();
    Ok(if p == f64::INFINITY {
        a.iter().copied().fold(f64::MIN, f64::max)
    } else if p == f64::NEG_INFINITY {
        a.iter().copied().fold(f64::MAX, f64::min)
    } else if p == 0.0 {
        ws.iter().zip(a).map(|(w, x)| w * x.ln()).sum::<f64>().exp()
    } else {
        ws.iter()
            .zip(a)
            .map(|(w, x)| w * x.powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    })
}

/// Operator Hölder mean `(Σ wᵢ Aᵢᵖ)^{1/p}`; at `p = 0` the log-Euclidean
/// mean `exp(Σ wᵢ log Aᵢ)`.
pub fn hoelder_operator(w: &WeightVector, mats: &[SpdMatrix], p: f64) -> Result<SpdMatrix> {
    let dim = check_tuple(w, mats)?;
    if !p.is_finite() {
        return Err(MeanError::InvalidArgument(format!(
            "operator Hölder exponent must be finite, got {p}"
        )));
    }
    if p == 0.0 {
        let logs: Vec<SymMatrix> = mats.iter().map(SpdMatrix::log).collect();
        return weighted_sum(w, logs.iter(), dim).exp();
    }
    let powers = mats
        .iter()
        .map(|m| m.pow(p))
        .collect::<Result<Vec<_>>>()?;
    SpdMatrix::new(weighted_sum(w, powers.iter().map(|m| m.sym()), dim))?.pow(1.0 / p)
}

/// `𝒜(ω; 𝐀) # ℋ(ω; 𝐀)`, the geodesic midpoint of the arithmetic and harmonic
/// means.
pub fn agh_mean(w: &WeightVector, mats: &[SpdMatrix]) -> Result<SpdMatrix> {
    check_tuple(w, mats)?;
    if mats.len() == 1 {
        return Ok(mats[0].clone());
    }
    geodesic(&arithmetic_mean(w, mats)?, &harmonic_mean(w, mats)?, 0.5)
}

/// Resolvent mean `[Σ wᵢ (Aᵢ + μI)⁻¹]⁻¹ − μI` for `μ ≥ 0`.
pub fn resolvent_mean(w: &WeightVector, mats: &[SpdMatrix], mu: f64) -> Result<SpdMatrix> {
    check_tuple(w, mats)?;
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(MeanError::InvalidArgument(format!(
            "resolvent parameter must be finite and >= 0, got {mu}"
        )));
    }
    if mu == 0.0 {
        return harmonic_mean(w, mats);
    }
    let shifted = mats
        .iter()
        .map(|m| m.shift(mu))
        .collect::<Result<Vec<_>>>()?;
    harmonic_mean(w, &shifted)?
        .shift(-mu)
        .map_err(|e| match e {
            MeanError::NotPositiveDefinite { min_eig, .. } => MeanError::NonPositiveResult { min_eig },
            other => other,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn diag(d: &[f64]) -> SpdMatrix {
        SpdMatrix::from_diag(d).unwrap()
    }

    fn rel(a: &SpdMatrix, b: &Matrix) -> f64 {
        (a.matrix() - b).frobenius_norm() / b.frobenius_norm()
    }

    fn half() -> WeightVector {
        WeightVector::uniform(2).unwrap()
    }

    fn sample() -> SpdMatrix {
        SpdMatrix::from_rows(&[vec![3.0, 1.0, 0.0], vec![1.0, 2.0, 0.5], vec![0.0, 0.5, 1.5]])
            .unwrap()
    }

    #[test]
    fn geodesic_examples() {
        let a = sample();
        assert!(rel(&geodesic(&a, &a, 0.3).unwrap(), a.matrix()) < 1e-14);

        // I #ₚ B = Bᵖ
        let b = SpdMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let g = geodesic(&SpdMatrix::identity(2), &b, 0.7).unwrap();
        assert!(rel(&g, b.pow(0.7).unwrap().matrix()) < 1e-14);

        // commuting: a^{1-p} b^p
        let g = geodesic(&diag(&[1.0, 4.0]), &diag(&[9.0, 1.0]), 0.5).unwrap();
        assert!(rel(&g, &Matrix::from_diag(&[3.0, 2.0])) < 1e-15);
    }

    #[test]
    fn geodesic_reversal() {
        let a = sample();
        let b = SpdMatrix::from_rows(&[vec![1.0, 0.2, 0.3], vec![0.2, 4.0, 0.0], vec![0.3, 0.0, 2.0]])
            .unwrap();
        for p in [0.1, 0.5, 0.8, 1.7, -0.4] {
            let fwd = geodesic(&a, &b, p).unwrap();
            let bwd = geodesic(&b, &a, 1.0 - p).unwrap();
            assert!(rel(&fwd, bwd.matrix()) < 1e-12, "p={p}");
        }
    }

    #[test]
    fn arithmetic_examples() {
        let a = sample();
        let one = WeightVector::uniform(1).unwrap();
        assert_eq!(arithmetic_mean(&one, std::slice::from_ref(&a)).unwrap(), a);
        let m = arithmetic_mean(&half(), &[diag(&[1.0]), diag(&[4.0])]).unwrap();
        assert_eq!(m.rows(), vec![vec![2.5]]);
        let w = WeightVector::new(vec![0.25, 0.75]).unwrap();
        let m = arithmetic_mean(&w, &[SpdMatrix::identity(2), SpdMatrix::scalar(2, 5.0)]).unwrap();
        assert_eq!(m.matrix(), &Matrix::from_diag(&[4.0, 4.0]));
    }

    #[test]
    fn harmonic_examples() {
        let m = harmonic_mean(&half(), &[diag(&[1.0]), diag(&[4.0])]).unwrap();
        assert!((m[(0, 0)] - 1.6).abs() < 1e-15);
        let a = sample();
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let m = harmonic_mean(&w, &[a.clone(), a.clone(), a.clone()]).unwrap();
        assert!(rel(&m, a.matrix()) < 1e-14);
    }

    #[test]
    fn dimension_checks() {
        let err = arithmetic_mean(&half(), &[diag(&[1.0]), diag(&[1.0, 2.0])]).unwrap_err();
        assert!(matches!(err, MeanError::DimensionMismatch { .. }));
        let err = harmonic_mean(&half(), &[diag(&[1.0])]).unwrap_err();
        assert!(matches!(err, MeanError::DimensionMismatch { .. }));
    }

    #[test]
    fn hoelder_scalar_examples() {
        let w = half();
        assert_eq!(hoelder_scalar(&w, &[1.0, 4.0], 1.0).unwrap(), 2.5);
        assert!((hoelder_scalar(&w, &[1.0, 4.0], 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(hoelder_scalar(&w, &[1.0, 4.0], f64::INFINITY).unwrap(), 4.0);
        assert_eq!(hoelder_scalar(&w, &[1.0, 4.0], f64::NEG_INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn hoelder_scalar_is_monotone_in_exponent() {
        let w = WeightVector::new(vec![0.2, 0.5, 0.3]).unwrap();
        let a = [0.7, 3.0, 1.9];
        let grid = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
        let vals: Vec<f64> = grid.iter().map(|&p| hoelder_scalar(&w, &a, p).unwrap()).collect();
        assert!(vals.windows(2).all(|v| v[0] <= v[1]), "{vals:?}");
    }

    #[test]
    fn hoelder_operator_endpoints() {
        let a = sample();
        let b = SpdMatrix::from_rows(&[vec![1.0, 0.2, 0.3], vec![0.2, 4.0, 0.0], vec![0.3, 0.0, 2.0]])
            .unwrap();
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let mats = [a, b];
        let one = hoelder_operator(&w, &mats, 1.0).unwrap();
        assert!(rel(&one, arithmetic_mean(&w, &mats).unwrap().matrix()) < 1e-14);
        let minus_one = hoelder_operator(&w, &mats, -1.0).unwrap();
        assert!(rel(&minus_one, harmonic_mean(&w, &mats).unwrap().matrix()) < 1e-13);
        let le = hoelder_operator(&half(), &[diag(&[1.0]), diag(&[4.0])], 0.0).unwrap();
        assert!((le[(0, 0)] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn agh_examples() {
        let a = sample();
        let w = WeightVector::new(vec![0.6, 0.4]).unwrap();
        assert!(rel(&agh_mean(&w, &[a.clone(), a.clone()]).unwrap(), a.matrix()) < 1e-14);
        // √(2.5 · 1.6) = 2
        let m = agh_mean(&half(), &[diag(&[1.0]), diag(&[4.0])]).unwrap();
        assert!((m[(0, 0)] - 2.0).abs() < 1e-15);
        // entrywise √(𝒜ℋ): (2, √(6.5 · 72/13)) = (2, 6)
        let m = agh_mean(&half(), &[diag(&[1.0, 9.0]), diag(&[4.0, 4.0])]).unwrap();
        assert!(rel(&m, &Matrix::from_diag(&[2.0, 6.0])) < 1e-15);
    }

    #[test]
    fn resolvent_examples() {
        let a = sample();
        let b = SpdMatrix::from_rows(&[vec![1.0, 0.2, 0.3], vec![0.2, 4.0, 0.0], vec![0.3, 0.0, 2.0]])
            .unwrap();
        let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let mats = [a.clone(), b];
        assert_eq!(resolvent_mean(&w, &mats, 0.0).unwrap(), harmonic_mean(&w, &mats).unwrap());
        let same = resolvent_mean(&w, &[a.clone(), a.clone()], 2.0).unwrap();
        assert!(rel(&same, a.matrix()) < 1e-14);
        // (0.5/2 + 0.5/5)⁻¹ − 1 = 13/7
        let m = resolvent_mean(&half(), &[diag(&[1.0]), diag(&[4.0])], 1.0).unwrap();
        assert!((m[(0, 0)] - 13.0 / 7.0).abs() < 1e-14);
        assert!(resolvent_mean(&half(), &[diag(&[1.0]), diag(&[4.0])], -1.0).is_err());
    }
}
