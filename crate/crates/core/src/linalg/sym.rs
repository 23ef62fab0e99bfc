use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::eigen::{jacobi_eigen, Eigen};
use super::Matrix;
use crate::error::{MeanError, Result};

/// Relative positivity floor: an SPD matrix must have
/// `λ_min > POSITIVITY_REL_FLOOR · max|λ|`.
pub const POSITIVITY_REL_FLOOR: f64 = 1e-12;
/// Absolute floor below which no eigenvalue counts as positive.
pub const POSITIVITY_ABS_FLOOR: f64 = 1e-300;

/// Reciprocal condition number below which a congruence transform is refused.
const SINGULAR_RCOND: f64 = 1e-14;

/// Scalar functions that can be lifted to symmetric matrices through the
/// spectral decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralFn {
    Sqrt,
    InvSqrt,
    Inv,
    Log,
    Exp,
    Pow(f64),
}

impl SpectralFn {
    fn eval(self, x: f64) -> f64 {
        match self {
            SpectralFn::Sqrt => x.sqrt(),
            SpectralFn::InvSqrt => 1.0 / x.sqrt(),
            SpectralFn::Inv => 1.0 / x,
            SpectralFn::Log => x.ln(),
            SpectralFn::Exp => x.exp(),
            SpectralFn::Pow(t) => {
                if t.fract() == 0.0 && t.abs() <= i32::MAX as f64 {
                    x.powi(t as i32)
                } else {
                    x.powf(t)
                }
            }
        }
    }

    fn check_domain(self, min_eig: f64, has_zero: bool) -> Result<()> {
        let needs_positive = match self {
            SpectralFn::Sqrt | SpectralFn::InvSqrt | SpectralFn::Log => true,
            SpectralFn::Pow(t) => t.fract() != 0.0,
            SpectralFn::Inv | SpectralFn::Exp => false,
        };
        if needs_positive && min_eig <= 0.0 {
            return Err(MeanError::DomainError(format!(
                "{self:?} of a matrix with smallest eigenvalue {min_eig:e}"
            )));
        }
        let needs_nonzero = match self {
            SpectralFn::Inv => true,
            SpectralFn::Pow(t) => t < 0.0,
            _ => false,
        };
        if needs_nonzero && has_zero {
            return Err(MeanError::DomainError(format!(
                "{self:?} of a singular matrix"
            )));
        }
        Ok(())
    }
}

/// Real symmetric matrix. Entries are symmetrized on construction so that
/// `a[i][j] == a[j][i]` holds exactly.
#[derive(Clone, PartialEq)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_finite() {
            return Err(MeanError::DomainError("non-finite matrix entry".into()));
        }
        Ok(Self::symmetrize(m))
    }

    pub(crate) fn symmetrize(mut m: Matrix) -> Self {
        let n = m.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = avg;
                m[(j, i)] = avg;
            }
        }
        SymMatrix(m)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(MeanError::Empty);
        }
        Self::new(Matrix::from_diag(diag))
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix(Matrix::identity(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix(Matrix::zeros(dim))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn eigen(&self) -> Result<Eigen> {
        jacobi_eigen(&self.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigen()?.min())
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        Ok(self.eigen()?.spectral_radius())
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, a: f64) -> SymMatrix {
        SymMatrix(self.0.scale(a))
    }

    /// `self + delta · I`.
    pub fn shift(&self, delta: f64) -> SymMatrix {
        let mut m = self.0.clone();
        for i in 0..m.dim() {
            m[(i, i)] += delta;
        }
        SymMatrix(m)
    }

    /// Symmetric product `S · self · S` for symmetric `S`, re-symmetrized.
    pub(crate) fn sandwich(&self, s: &SymMatrix) -> SymMatrix {
        SymMatrix::symmetrize(&(&s.0 * &self.0) * &s.0)
    }

    /// `Q · diag(f(λ)) · Qᵀ`.
    pub fn apply(&self, f: SpectralFn) -> Result<SymMatrix> {
        let e = self.eigen()?;
        f.check_domain(e.min(), e.values.contains(&0.0))?;
        let out = e.synthesize(|x| f.eval(x));
        if !out.is_finite() {
            return Err(MeanError::DomainError(format!(
                "{f:?} overflowed on spectrum [{:e}, {:e}]",
                e.min(),
                e.max()
            )));
        }
        Ok(SymMatrix(out))
    }

    /// Matrix exponential of a symmetric matrix; always positive definite.
    pub fn exp(&self) -> Result<SpdMatrix> {
        let e = self.eigen()?;
        let mapped = e.mapped(f64::exp);
        let out = e.synthesize(f64::exp);
        if !out.is_finite() {
            return Err(MeanError::DomainError(format!(
                "exp overflowed on spectrum [{:e}, {:e}]",
                e.min(),
                e.max()
            )));
        }
        SpdMatrix::from_parts(SymMatrix(out), mapped)
    }
}

impl Deref for SymMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

impl AsRef<SymMatrix> for SymMatrix {
    fn as_ref(&self) -> &SymMatrix {
        self
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym{:?}", self.0)
    }
}

/// Symmetric positive-definite matrix with its eigendecomposition attached.
///
/// The decomposition is computed once, at construction, where it also serves
/// as the positivity certificate. Values are immutable afterwards.
#[derive(Clone)]
pub struct SpdMatrix {
    sym: SymMatrix,
    eig: Eigen,
}

impl SpdMatrix {
    pub fn new(sym: SymMatrix) -> Result<Self> {
        let eig = sym.eigen()?;
        Self::from_parts(sym, eig)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(SymMatrix::from_rows(rows)?)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(SymMatrix::from_diag(diag)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, 1.0)
    }

    /// `c · I` for `c > 0`.
    pub fn scalar(dim: usize, c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite(), "scalar matrix needs c > 0");
        SpdMatrix {
            sym: SymMatrix(Matrix::identity(dim).scale(c)),
            eig: Eigen {
                values: vec![c; dim],
                vectors: Matrix::identity(dim),
            },
        }
    }

    pub(crate) fn from_parts(sym: SymMatrix, eig: Eigen) -> Result<Self> {
        let floor = positivity_floor(&eig);
        if !(eig.min() > floor) {
            return Err(MeanError::NotPositiveDefinite {
                min_eig: eig.min(),
                floor,
            });
        }
        Ok(SpdMatrix { sym, eig })
    }

    pub fn sym(&self) -> &SymMatrix {
        &self.sym
    }

    pub fn into_sym(self) -> SymMatrix {
        self.sym
    }

    pub fn eigen(&self) -> &Eigen {
        &self.eig
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig.min()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eig.max()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.eig.max()
    }

    fn map_spd(&self, f: SpectralFn) -> Result<SpdMatrix> {
        let out = self.eig.synthesize(|x| f.eval(x));
        if !out.is_finite() {
            return Err(MeanError::DomainError(format!(
                "{f:?} overflowed on spectrum [{:e}, {:e}]",
                self.eig.min(),
                self.eig.max()
            )));
        }
        SpdMatrix::from_parts(SymMatrix(out), self.eig.mapped(|x| f.eval(x)))
    }

    pub fn sqrt(&self) -> Result<SpdMatrix> {
        self.map_spd(SpectralFn::Sqrt)
    }

    pub fn inv_sqrt(&self) -> Result<SpdMatrix> {
        self.map_spd(SpectralFn::InvSqrt)
    }

    pub fn inv(&self) -> Result<SpdMatrix> {
        self.map_spd(SpectralFn::Inv)
    }

    pub fn pow(&self, t: f64) -> Result<SpdMatrix> {
        if t == 0.0 {
            return Ok(SpdMatrix::identity(self.dim()));
        }
        self.map_spd(SpectralFn::Pow(t))
    }

    pub fn log(&self) -> SymMatrix {
        SymMatrix(self.eig.synthesize(f64::ln))
    }

    /// General spectral function; `Log` yields a symmetric (not necessarily
    /// positive) matrix, the others stay in the cone.
    pub fn apply(&self, f: SpectralFn) -> Result<SymMatrix> {
        match f {
            SpectralFn::Log => Ok(self.log()),
            SpectralFn::Exp => Ok(self.sym.exp()?.into_sym()),
            _ => Ok(self.map_spd(f)?.into_sym()),
        }
    }

    /// `a · self` for `a > 0`.
    pub fn scale(&self, a: f64) -> Result<SpdMatrix> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(MeanError::InvalidArgument(format!(
                "scale factor must be positive, got {a}"
            )));
        }
        SpdMatrix::from_parts(self.sym.scale(a), self.eig.mapped(|x| a * x))
    }

    /// `self + delta · I`; fails if the result leaves the cone.
    pub fn shift(&self, delta: f64) -> Result<SpdMatrix> {
        SpdMatrix::from_parts(self.sym.shift(delta), self.eig.mapped(|x| x + delta))
    }

    /// Sum of two SPD matrices.
    pub fn add(&self, other: &SpdMatrix) -> Result<SpdMatrix> {
        check_same_dim(self.dim(), other.dim())?;
        SpdMatrix::new(self.sym.add(&other.sym))
    }
}

impl Deref for SpdMatrix {
    type Target = SymMatrix;
    fn deref(&self) -> &SymMatrix {
        &self.sym
    }
}

impl AsRef<SymMatrix> for SpdMatrix {
    fn as_ref(&self) -> &SymMatrix {
        &self.sym
    }
}

impl PartialEq for SpdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.sym == other.sym
    }
}

impl fmt::Debug for SpdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Spd{:?}", self.sym.matrix())
    }
}

fn positivity_floor(eig: &Eigen) -> f64 {
    (POSITIVITY_REL_FLOOR * eig.spectral_radius()).max(POSITIVITY_ABS_FLOOR)
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(MeanError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `Sᵀ · A · S` for an invertible `S`.
pub fn congruence(s: &Matrix, a: &SpdMatrix) -> Result<SpdMatrix> {
    check_same_dim(a.dim(), s.dim())?;
    let gram = SymMatrix::symmetrize(&s.transpose() * s).eigen()?;
    let rcond = if gram.max() > 0.0 {
        (gram.min().max(0.0) / gram.max()).sqrt()
    } else {
        0.0
    };
    if !(rcond >= SINGULAR_RCOND) {
        return Err(MeanError::SingularTransform { rcond });
    }
    let prod = &(&s.transpose() * a.matrix()) * s;
    SpdMatrix::new(SymMatrix::symmetrize(prod))
}

/// Spectral bounds `0 < m ≤ M` with `mI ≤ A ≤ MI`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct SpectralBounds {
    lower: f64,
    upper: f64,
}

impl SpectralBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower > 0.0 && lower <= upper && upper.is_finite()) {
            return Err(MeanError::InvalidArgument(format!(
                "spectral bounds need 0 < m <= M, got ({lower}, {upper})"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// Lower bound `m`.
    pub fn m(&self) -> f64 {
        self.lower
    }

    /// Upper bound `M`.
    pub fn big_m(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, a: &SpdMatrix, rel_tol: f64) -> bool {
        let slop = rel_tol * self.upper;
        a.min_eigenvalue() >= self.lower - slop && a.max_eigenvalue() <= self.upper + slop
    }
}

impl TryFrom<[f64; 2]> for SpectralBounds {
    type Error = MeanError;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        SpectralBounds::new(v[0], v[1])
    }
}

impl From<SpectralBounds> for [f64; 2] {
    fn from(b: SpectralBounds) -> Self {
        [b.lower, b.upper]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &Matrix, b: &Matrix) -> f64 {
        (a - b).frobenius_norm() / b.frobenius_norm()
    }

    fn two_one() -> SpdMatrix {
        SpdMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap()
    }

    #[test]
    fn construction_symmetrizes() {
        let s = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0, 1.0]]).unwrap();
        assert_eq!(s[(0, 1)], 3.0);
        assert_eq!(s[(0, 1)], s[(1, 0)]);
    }

    #[test]
    fn positivity_is_checked() {
        let err = SpdMatrix::from_diag(&[1.0, -1e-3]).unwrap_err();
        assert!(matches!(err, MeanError::NotPositiveDefinite { .. }));
        // below the relative floor
        assert!(SpdMatrix::from_diag(&[1.0, 1e-13]).is_err());
        assert!(SpdMatrix::from_diag(&[1.0, 1e-11]).is_ok());
        // tiny but well-conditioned matrices are fine
        assert!(SpdMatrix::from_diag(&[1e-200, 2e-200]).is_ok());
    }

    #[test]
    fn sqrt_of_diagonal() {
        let a = SpdMatrix::from_diag(&[4.0, 9.0]).unwrap();
        assert_eq!(a.sqrt().unwrap().matrix(), &Matrix::from_diag(&[2.0, 3.0]));
    }

    #[test]
    fn log_of_identity_is_zero() {
        assert_eq!(SpdMatrix::identity(3).log(), SymMatrix::zeros(3));
    }

    #[test]
    fn square_matches_product() {
        // A·A = [[5,4],[4,5]]
        let sq = two_one().pow(2.0).unwrap();
        let expected = Matrix::from_rows(&[vec![5.0, 4.0], vec![4.0, 5.0]]).unwrap();
        assert!(rel_err(sq.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = two_one();
        let prod = a.inv().unwrap().matrix() * a.matrix();
        assert!((&prod - &Matrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn exp_log_round_trip() {
        let a = SpdMatrix::from_rows(&[
            vec![4.0, 1.0, 0.5],
            vec![1.0, 3.0, 0.2],
            vec![0.5, 0.2, 1.0],
        ])
        .unwrap();
        let back = a.log().exp().unwrap();
        assert!(rel_err(back.matrix(), a.matrix()) < 1e-13);
    }

    #[test]
    fn domain_errors() {
        let indefinite = SymMatrix::from_diag(&[1.0, -2.0]).unwrap();
        assert!(matches!(
            indefinite.apply(SpectralFn::Log),
            Err(MeanError::DomainError(_))
        ));
        assert!(matches!(
            indefinite.apply(SpectralFn::Pow(0.5)),
            Err(MeanError::DomainError(_))
        ));
        // integer powers are fine on any spectrum
        let sq = indefinite.apply(SpectralFn::Pow(2.0)).unwrap();
        assert_eq!(sq.matrix(), &Matrix::from_diag(&[1.0, 4.0]));
        let singular = SymMatrix::from_diag(&[0.0, 2.0]).unwrap();
        assert!(singular.apply(SpectralFn::Inv).is_err());
    }

    #[test]
    fn congruence_examples() {
        let a = SpdMatrix::from_diag(&[1.0, 3.0]).unwrap();
        let same = congruence(&Matrix::identity(2), &a).unwrap();
        assert_eq!(same.matrix(), a.matrix());

        let scaled = congruence(&Matrix::identity(2).scale(2.0), &a).unwrap();
        assert_eq!(scaled.matrix(), &Matrix::from_diag(&[4.0, 12.0]));

        let th = 0.7_f64;
        let rot =
            Matrix::from_rows(&[vec![th.cos(), -th.sin()], vec![th.sin(), th.cos()]]).unwrap();
        let i = congruence(&rot, &SpdMatrix::identity(2)).unwrap();
        assert!((i.matrix() - &Matrix::identity(2)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn congruence_rejects_singular() {
        let s = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        let err = congruence(&s, &SpdMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, MeanError::SingularTransform { .. }));
    }

    #[test]
    fn shift_and_scale_keep_decomposition_consistent() {
        let a = two_one();
        let b = a.shift(-0.5).unwrap();
        assert!((b.min_eigenvalue() - 0.5).abs() < 1e-15);
        let r = b.eigen().synthesize(|x| x);
        assert!(rel_err(&r, b.matrix()) < 1e-14);
        assert!(a.shift(-1.0).is_err());
        let c = a.scale(3.0).unwrap();
        assert!((c.max_eigenvalue() - 9.0).abs() < 1e-14);
    }

    #[test]
    fn bounds_validation() {
        assert!(SpectralBounds::new(0.0, 1.0).is_err());
        assert!(SpectralBounds::new(2.0, 1.0).is_err());
        let b = SpectralBounds::new(1.0, 4.0).unwrap();
        assert_eq!((b.m(), b.big_m()), (1.0, 4.0));
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "[1.0,4.0]");
        assert!(serde_json::from_str::<SpectralBounds>("[3.0,1.0]").is_err());
    }
}
