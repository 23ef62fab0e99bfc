//! Seeded verification suites.
//!
//! Each [`CheckId`] turns one group of order inequalities into a property
//! evaluated over random inputs on the Cartesian grid of a [`TrialConfig`].
//! Trials draw from independent streams keyed by check, mean, case and trial
//! index, so results do not depend on scheduling.

mod checks;
mod config;
mod report;
mod trial;

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::random::{derive_seed, rng_from_seed};
use crate::means::MeanKind;

pub use config::{TrialConfig, MAX_DIM};
pub use report::{reports_to_csv, reports_to_json, PropertySummary, ReportSummary, TrialRecord, TrialReport};
pub use trial::Case;

use trial::Trial;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("cannot write failure dump: {0}")]
    Dump(String),
}

/// Stable identifiers of the verification checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    /// Idempotency, homogeneity, monotonicity, joint concavity and the
    /// arithmetic-G-harmonic sandwich.
    Axioms,
    /// Row/column mixtures within the Kantorovich factor, plus the reverse
    /// arithmetic-G bound.
    KantorovichMixture,
    /// Row/column mixtures within `t·rhs + ρ(t)I`.
    RhoMixture,
    /// Homogeneity, monotonicity, concavity, sandwich, parameter monotonicity
    /// and non-expansiveness of `G^μ`.
    ParamProperties,
    /// Permutation, repetition, congruence, self-consistency and positive
    /// linear maps for `G^μ`.
    Invariances,
    /// Weighted-parameter concavity over a grid.
    ParamConcavity,
    /// Parameterized row/column mixtures within `K` and `K⁻¹`.
    ParamKantorovich,
    /// Convex combinations of `G^μ` against `G` at the combined parameter.
    Comparison,
    /// Power-mean interpolation of parameters, two- and multi-variable.
    PowerInterp,
    /// Power means of parameters against power means of `G^μᵢ`, and the
    /// five-term chain.
    PowerCross,
    /// Arithmetic and harmonic interpolation of parameters.
    Section5,
    /// Convergence of `Pₚ` to the Karcher mean and the power-mean chain.
    PowerLimit,
    /// First-order agreement with the log-Euclidean limit near the identity.
    LieTrotter,
    /// Unresolved comparisons; reported, never failing.
    OpenProblems,
}

impl CheckId {
    pub const ALL: [CheckId; 14] = [
        CheckId::Axioms,
        CheckId::KantorovichMixture,
        CheckId::RhoMixture,
        CheckId::ParamProperties,
        CheckId::Invariances,
        CheckId::ParamConcavity,
        CheckId::ParamKantorovich,
        CheckId::Comparison,
        CheckId::PowerInterp,
        CheckId::PowerCross,
        CheckId::Section5,
        CheckId::PowerLimit,
        CheckId::LieTrotter,
        CheckId::OpenProblems,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            CheckId::Axioms => "def-2.1",
            CheckId::KantorovichMixture => "thm-2.4",
            CheckId::RhoMixture => "thm-2.5",
            CheckId::ParamProperties => "prop-3.1",
            CheckId::Invariances => "prop-3.2",
            CheckId::ParamConcavity => "thm-3.3",
            CheckId::ParamKantorovich => "thm-3.5",
            CheckId::Comparison => "thm-4.3",
            CheckId::PowerInterp => "thm-4.4",
            CheckId::PowerCross => "thm-4.7",
            CheckId::Section5 => "sec-5",
            CheckId::PowerLimit => "eq-power",
            CheckId::LieTrotter => "rem-2.2",
            CheckId::OpenProblems => "open-problems",
        }
    }

    pub fn is_exploratory(&self) -> bool {
        matches!(self, CheckId::OpenProblems)
    }

    /// All checks whose failures count against a run.
    pub fn standard() -> Vec<CheckId> {
        Self::ALL.into_iter().filter(|c| !c.is_exploratory()).collect()
    }

    fn per_kind(&self) -> bool {
        !matches!(self, CheckId::PowerLimit)
    }

    fn trials(&self, cfg: &TrialConfig) -> usize {
        match self {
            CheckId::PowerLimit => cfg.trials_per_case.min(20),
            CheckId::LieTrotter => cfg.trials_per_case.min(10),
            _ => cfg.trials_per_case,
        }
    }

    fn cases(&self, cfg: &TrialConfig) -> Vec<Case> {
        let with_n = !matches!(self, CheckId::PowerLimit | CheckId::LieTrotter);
        let with_k = matches!(
            self,
            CheckId::KantorovichMixture
                | CheckId::RhoMixture
                | CheckId::ParamConcavity
                | CheckId::ParamKantorovich
                | CheckId::PowerCross
                | CheckId::OpenProblems
        );
        let ns: Vec<Option<usize>> = if with_n {
            cfg.n_values.iter().map(|&n| Some(n)).collect()
        } else {
            vec![None]
        };
        let ks: Vec<Option<usize>> = if with_k {
            cfg.k_values.iter().map(|&k| Some(k)).collect()
        } else {
            vec![None]
        };
        let mut out = Vec::new();
        for &dim in &cfg.dims {
            for &n in &ns {
                for &k in &ks {
                    out.push(Case { dim, n, k });
                }
            }
        }
        out
    }

    fn run(&self, t: &mut Trial, kind: Option<MeanKind>) -> crate::Result<()> {
        let g = || kind.expect("per-kind check has a mean kind");
        match self {
            CheckId::Axioms => checks::axioms::run(t, g()),
            CheckId::KantorovichMixture => checks::kantorovich::mixture(t, g()),
            CheckId::RhoMixture => checks::kantorovich::rho_mixture(t, g()),
            CheckId::ParamProperties => checks::param::properties(t, g()),
            CheckId::Invariances => checks::param::invariances(t, g()),
            CheckId::ParamConcavity => checks::param::concavity(t, g()),
            CheckId::ParamKantorovich => checks::kantorovich::param_mixture(t, g()),
            CheckId::Comparison => checks::interp::comparison(t, g()),
            CheckId::PowerInterp => checks::interp::power_interp(t, g()),
            CheckId::PowerCross => checks::interp::power_cross(t, g()),
            CheckId::Section5 => checks::interp::section5(t, g()),
            CheckId::PowerLimit => checks::limits::power_limit(t),
            CheckId::LieTrotter => checks::limits::lie_trotter(t, g()),
            CheckId::OpenProblems => checks::open::run(t, g()),
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CheckId {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let s = s.trim();
        CheckId::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| ConfigError::UnknownCheck(s.to_owned()))
    }
}

/// Parses check ids; `"all"` selects every standard check.
pub fn parse_checks(ids: &[String]) -> Result<Vec<CheckId>, ConfigError> {
    let mut out = Vec::new();
    for id in ids {
        if id.trim() == "all" {
            out.extend(CheckId::standard());
        } else {
            out.push(id.parse()?);
        }
    }
    Ok(out)
}

/// Runs the selected checks and returns one report per check and mean kind,
/// in selection order. Failure dumps are written when `cfg.dump_dir` is set.
pub fn run_suite(cfg: &TrialConfig, checks: &[CheckId]) -> Result<Vec<TrialReport>, ConfigError> {
    cfg.validate()?;
    let digest = cfg.digest();
    let mut reports = Vec::new();
    for &check in checks {
        let kinds: Vec<Option<MeanKind>> = if check.per_kind() {
            cfg.mean_kinds.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        for kind in kinds {
            let report = run_one(cfg, check, kind, &digest)?;
            reports.push(report);
        }
    }
    Ok(reports)
}

struct TrialOutcome {
    case: Case,
    index: usize,
    records: Vec<TrialRecord>,
    dump: Option<serde_json::Value>,
}

fn run_one(
    cfg: &TrialConfig,
    check: CheckId,
    kind: Option<MeanKind>,
    digest: &str,
) -> Result<TrialReport, ConfigError> {
    let start = Instant::now();
    let cases = check.cases(cfg);
    let trials = check.trials(cfg);
    let kind_label = kind.map(|k| k.label());
    let tasks: Vec<(Case, usize)> = cases
        .iter()
        .flat_map(|&c| (0..trials).map(move |i| (c, i)))
        .collect();

    let outcomes: Vec<TrialOutcome> = tasks
        .par_iter()
        .map(|&(case, index)| {
            let seed = derive_seed(
                cfg.seed,
                &[check.id(), kind_label.as_deref().unwrap_or(""), &case.label()],
                &[index as u64],
            );
            let mut t = Trial::new(cfg, case, index, rng_from_seed(seed));
            if let Err(e) = check.run(&mut t, kind) {
                t.record_error("evaluation", e.to_string());
            }
            let (records, inputs) = t.finish();
            let dump = (cfg.dump_dir.is_some() && records.iter().any(|r| !r.pass)).then(|| {
                serde_json::json!({
                    "check_id": check.id(),
                    "mean_kind": kind_label,
                    "case": case.label(),
                    "trial": index,
                    "seed": seed,
                    "failed": records.iter().filter(|r| !r.pass).collect::<Vec<_>>(),
                    "inputs": inputs.to_json(),
                })
            });
            TrialOutcome {
                case,
                index,
                records,
                dump,
            }
        })
        .collect();

    if let Some(dir) = &cfg.dump_dir {
        for o in outcomes.iter().filter(|o| o.dump.is_some()) {
            let name = format!(
                "{}_{}_{}_t{}.json",
                check.id(),
                kind_label.as_deref().unwrap_or("none"),
                o.case.label(),
                o.index
            );
            write_dump(dir, &name, o.dump.as_ref().expect("filtered on is_some"))?;
        }
    }

    let records = outcomes.into_iter().flat_map(|o| o.records).collect();
    let mut report = TrialReport::new(
        check.id(),
        kind_label,
        check.is_exploratory(),
        digest.to_owned(),
        cases.len(),
        tasks.len(),
        records,
    );
    report.summary.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    Ok(report)
}

fn write_dump(dir: &Path, name: &str, value: &serde_json::Value) -> Result<(), ConfigError> {
    let safe: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' })
        .collect();
    std::fs::create_dir_all(dir).map_err(|e| ConfigError::Dump(e.to_string()))?;
    let text = serde_json::to_string_pretty(value).expect("dump is serializable");
    std::fs::write(dir.join(safe), text).map_err(|e| ConfigError::Dump(e.to_string()))
}

/// Total failures over the reports that count (exploratory ones excluded).
pub fn counted_failures(reports: &[TrialReport]) -> usize {
    reports
        .iter()
        .filter(|r| !r.exploratory)
        .map(TrialReport::failures)
        .sum()
}
