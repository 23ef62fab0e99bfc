//! Per-trial state: the seeded generator, the inputs drawn so far (for
//! digests and failure dumps) and the records produced.

use rand::seq::SliceRandom;
use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::linalg::random::{
    random_invertible, random_orthogonal, random_psd_unit, random_simplex, random_spd,
    random_symmetric,
};
use crate::linalg::{io, Matrix, SpdMatrix, SpectralBounds, SymMatrix, TrialRng};
use crate::means::{MeanKind, SolverSettings, WeightVector};
use crate::order::{loewner_leq, thompson_distance};
use crate::param::{parameterize, BlockGrid, ExtendedParam};

use super::report::TrialRecord;
use super::TrialConfig;

/// A grid point: matrix dimension and, where the check uses them, the tuple
/// size `n` and the second grid axis `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Case {
    pub dim: usize,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

impl Case {
    pub fn label(&self) -> String {
        let mut s = format!("d{}", self.dim);
        if let Some(n) = self.n {
            s.push_str(&format!("-n{n}"));
        }
        if let Some(k) = self.k {
            s.push_str(&format!("-k{k}"));
        }
        s
    }

    pub(crate) fn n(&self) -> usize {
        self.n.unwrap_or(1)
    }

    pub(crate) fn k(&self) -> usize {
        self.k.unwrap_or(1)
    }
}

#[derive(Debug, Default)]
pub(crate) struct Inputs {
    pub matrices: Vec<(String, Matrix)>,
    pub weights: Vec<(String, Vec<f64>)>,
    pub scalars: Vec<(String, f64)>,
}

impl Inputs {
    fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (label, m) in &self.matrices {
            h.update(label.as_bytes());
            for x in m.as_slice() {
                h.update(x.to_bits().to_le_bytes());
            }
        }
        for (label, w) in &self.weights {
            h.update(label.as_bytes());
            for x in w {
                h.update(x.to_bits().to_le_bytes());
            }
        }
        for (label, x) in &self.scalars {
            h.update(label.as_bytes());
            h.update(x.to_bits().to_le_bytes());
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// JSON replay file in the matrix and weight formats.
    pub(crate) fn to_json(&self) -> serde_json::Value {
        let matrices: serde_json::Map<String, serde_json::Value> = self
            .matrices
            .iter()
            .map(|(l, m)| {
                let text = io::write_matrix(m).expect("trial inputs are finite");
                (l.clone(), serde_json::from_str(&text).expect("writer emits valid JSON"))
            })
            .collect();
        let weights: serde_json::Map<String, serde_json::Value> = self
            .weights
            .iter()
            .map(|(l, w)| (l.clone(), serde_json::json!(w)))
            .collect();
        let scalars: serde_json::Map<String, serde_json::Value> = self
            .scalars
            .iter()
            .map(|(l, x)| (l.clone(), serde_json::json!(x)))
            .collect();
        serde_json::json!({ "matrices": matrices, "weights": weights, "scalars": scalars })
    }
}

pub(crate) struct Trial<'a> {
    pub cfg: &'a TrialConfig,
    pub case: Case,
    pub index: usize,
    pub rng: TrialRng,
    pub settings: SolverSettings,
    pub inputs: Inputs,
    records: Vec<TrialRecord>,
}

impl<'a> Trial<'a> {
    pub fn new(cfg: &'a TrialConfig, case: Case, index: usize, rng: TrialRng) -> Self {
        Self {
            cfg,
            case,
            index,
            rng,
            settings: cfg.solver,
            inputs: Inputs::default(),
            records: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.case.dim
    }

    pub fn bounds(&self) -> SpectralBounds {
        self.cfg.bounds
    }

    /// Finishes the trial, stamping every record with the input digest.
    pub fn finish(mut self) -> (Vec<TrialRecord>, Inputs) {
        let digest = self.inputs.digest();
        for r in &mut self.records {
            r.input_digest = digest.clone();
        }
        (self.records, self.inputs)
    }

    // ---- inputs ------------------------------------------------------------

    fn note_matrix(&mut self, label: &str, m: &Matrix) {
        let label = format!("{label}{}", self.inputs.matrices.len());
        self.inputs.matrices.push((label, m.clone()));
    }

    pub fn spd(&mut self, label: &str) -> Result<SpdMatrix> {
        let a = random_spd(self.case.dim, self.cfg.bounds, &mut self.rng)?;
        self.note_matrix(label, a.matrix());
        Ok(a)
    }

    pub fn spd_in(&mut self, label: &str, dim: usize, bounds: SpectralBounds) -> Result<SpdMatrix> {
        let a = random_spd(dim, bounds, &mut self.rng)?;
        self.note_matrix(label, a.matrix());
        Ok(a)
    }

    pub fn spd_tuple(&mut self, label: &str, n: usize) -> Result<Vec<SpdMatrix>> {
        (0..n).map(|_| self.spd(label)).collect()
    }

    pub fn weights(&mut self, label: &str, n: usize) -> Result<WeightVector> {
        let w = WeightVector::new(random_simplex(n, &mut self.rng))?;
        self.inputs.weights.push((label.to_owned(), w.as_slice().to_vec()));
        Ok(w)
    }

    pub fn grid(&mut self, n: usize, k: usize) -> Result<BlockGrid> {
        let cells = (0..n * k).map(|_| self.spd("cell")).collect::<Result<Vec<_>>>()?;
        BlockGrid::new(n, k, cells)
    }

    pub fn scalar(&mut self, label: &str, x: f64) -> f64 {
        self.inputs.scalars.push((label.to_owned(), x));
        x
    }

    /// A uniformly chosen entry of `options`.
    pub fn choose<T: Copy>(&mut self, options: &[T]) -> Option<T> {
        options.choose(&mut self.rng).copied()
    }

    /// Log-uniform positive parameter in `[lo, hi]`.
    pub fn log_uniform(&mut self, label: &str, lo: f64, hi: f64) -> f64 {
        let x = self.rng.gen_range(lo.ln()..=hi.ln()).exp();
        self.scalar(label, x)
    }

    /// `Bᵢ = Aᵢ − εRᵢ` with `R` unit-norm PSD and `ε = 0.1·λ_min(Aᵢ)`, so
    /// that `0 < Bᵢ ≤ Aᵢ`.
    pub fn shrink(&mut self, a: &SpdMatrix) -> Result<SpdMatrix> {
        let r = random_psd_unit(a.dim(), &mut self.rng);
        let b = SpdMatrix::new(a.sym().sub(&r.scale(0.1 * a.min_eigenvalue())))?;
        self.note_matrix("shrunk", b.matrix());
        Ok(b)
    }

    pub fn orthogonal(&mut self) -> Matrix {
        let u = random_orthogonal(self.case.dim, &mut self.rng);
        self.note_matrix("unitary", &u);
        u
    }

    pub fn invertible(&mut self) -> Matrix {
        let s = random_invertible(self.case.dim, &mut self.rng);
        self.note_matrix("congruence", &s);
        s
    }

    pub fn symmetric(&mut self, norm: f64) -> Result<SymMatrix> {
        let h = random_symmetric(self.case.dim, norm, &mut self.rng)?;
        self.note_matrix("generator", h.matrix());
        Ok(h)
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }

    // ---- evaluation shorthands ---------------------------------------------

    pub fn param(
        &self,
        kind: MeanKind,
        mu: impl Into<ParamArg>,
        w: &WeightVector,
        mats: &[SpdMatrix],
    ) -> Result<SpdMatrix> {
        let mu = match mu.into() {
            ParamArg::Ext(p) => p,
            ParamArg::Real(x) => ExtendedParam::new(x)?,
        };
        parameterize(kind, mu, w, mats, &self.settings)
    }

    // ---- records -----------------------------------------------------------

    pub fn record(&mut self, property: &str, note: String, slack: f64, tolerance: f64) {
        self.records.push(TrialRecord {
            trial: self.index,
            case: self.case.label(),
            property: property.to_owned(),
            input_digest: String::new(),
            slack: Some(slack),
            tolerance,
            pass: slack >= -tolerance,
            note,
        });
    }

    pub fn record_error(&mut self, property: &str, message: String) {
        self.records.push(TrialRecord {
            trial: self.index,
            case: self.case.label(),
            property: property.to_owned(),
            input_digest: String::new(),
            slack: None,
            tolerance: 0.0,
            pass: false,
            note: message,
        });
    }

    /// Records `a ≤ b` in the Loewner order.
    pub fn leq(
        &mut self,
        property: &str,
        note: impl Into<String>,
        a: impl AsRef<SymMatrix>,
        b: impl AsRef<SymMatrix>,
    ) -> Result<()> {
        let v = loewner_leq(a, b, self.cfg.rel_tol)?;
        self.record(property, note.into(), v.slack, v.tolerance_used);
        Ok(())
    }

    /// Records `a ≥ b` in the Loewner order.
    pub fn geq(
        &mut self,
        property: &str,
        note: impl Into<String>,
        a: impl AsRef<SymMatrix>,
        b: impl AsRef<SymMatrix>,
    ) -> Result<()> {
        self.leq(property, note, b, a)
    }

    /// Records a chain `x₀ ≤ x₁ ≤ …`, one record per link.
    pub fn chain(&mut self, property: &str, note: &str, xs: &[&SpdMatrix]) -> Result<()> {
        for (i, pair) in xs.windows(2).enumerate() {
            self.leq(property, format!("{note} link {i}"), pair[0], pair[1])?;
        }
        Ok(())
    }

    /// Records `‖a − b‖_F ≤ tol·‖b‖_F`.
    pub fn close(
        &mut self,
        property: &str,
        note: impl Into<String>,
        a: &Matrix,
        b: &Matrix,
        tol: f64,
    ) {
        let err = (a - b).frobenius_norm() / b.frobenius_norm().max(f64::MIN_POSITIVE);
        self.record(property, note.into(), -err, tol);
    }

    /// Records the scalar inequality `lhs ≤ rhs` with absolute tolerance.
    pub fn scalar_leq(&mut self, property: &str, note: impl Into<String>, lhs: f64, rhs: f64, tol: f64) {
        self.record(property, note.into(), rhs - lhs, tol);
    }

    pub fn thompson(&self, a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
        thompson_distance(a, b)
    }
}

/// Either an extended or a plain real parameter.
pub(crate) enum ParamArg {
    Ext(ExtendedParam),
    Real(f64),
}

impl From<ExtendedParam> for ParamArg {
    fn from(p: ExtendedParam) -> Self {
        ParamArg::Ext(p)
    }
}

impl From<f64> for ParamArg {
    fn from(x: f64) -> Self {
        ParamArg::Real(x)
    }
}
