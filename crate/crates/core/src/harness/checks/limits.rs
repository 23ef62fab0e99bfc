use crate::error::Result;
use crate::linalg::{SpdMatrix, SymMatrix};
use crate::means::{evaluate_mean, MeanKind, SolverSettings, WeightVector};

use super::super::trial::Trial;
use super::power_of;

const EXPONENTS: [f64; 4] = [0.5, 0.25, 0.1, 0.05];
const RATE_FACTOR: f64 = 0.02;
const CHAIN: [(f64, f64); 4] = [(0.1, 0.5), (0.1, 1.0), (0.5, 0.5), (0.5, 1.0)];
const STEPS: [f64; 2] = [1e-3, 1e-4];
const RATIO_WINDOW: (f64, f64) = (3.3, 30.0);

/// Thompson gaps `d_T(P_{±p}, Λ)` along decreasing `|p|`, and the power-mean
/// chain `P₋₁ ≤ P₋q ≤ P₋p ≤ Λ ≤ Pₚ ≤ P_q ≤ P₁`.
pub(crate) fn power_limit(t: &mut Trial) -> Result<()> {
    let n = t.cfg.n_values[t.index % t.cfg.n_values.len()];
    t.settings.max_iter = SolverSettings::MAX_ITER_CAP;
    let s = t.settings;
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;
    let karcher = power_of(0.0, &w, &a, &s)?;

    for sign in [1.0, -1.0] {
        let mut gaps = Vec::with_capacity(EXPONENTS.len());
        for p in EXPONENTS {
            let x = power_of(sign * p, &w, &a, &s)?;
            gaps.push(t.thompson(&x, &karcher)?);
        }
        for (i, pair) in gaps.windows(2).enumerate() {
            let note = format!("sign={sign} |p|={} -> {}", EXPONENTS[i], EXPONENTS[i + 1]);
            let tol = t.cfg.rel_tol * pair[0].max(1.0);
            t.scalar_leq("monotone-gap", note, pair[1], pair[0], tol);
        }
        let (first, last) = (gaps[0], gaps[gaps.len() - 1]);
        let note = format!("sign={sign} d(0.5)={first:e} d(0.05)={last:e}");
        t.scalar_leq("rate", note, last, RATE_FACTOR * first + 1e-9, 0.0);
    }

    for (p, q) in CHAIN {
        let links = [
            power_of(-1.0, &w, &a, &s)?,
            power_of(-q, &w, &a, &s)?,
            power_of(-p, &w, &a, &s)?,
            karcher.clone(),
            power_of(p, &w, &a, &s)?,
            power_of(q, &w, &a, &s)?,
            power_of(1.0, &w, &a, &s)?,
        ];
        let refs: Vec<&SpdMatrix> = links.iter().collect();
        t.chain("chain", &format!("p={p} q={q}"), &refs)?;
    }
    Ok(())
}

/// First-order agreement of `(1/s)·log G(ω; exp(sH₁), …)` with `Σ wᵢHᵢ`:
/// the error ratio between the two step sizes must fall in the window.
pub(crate) fn lie_trotter(t: &mut Trial, g: MeanKind) -> Result<()> {
    let n = t.cfg.n_values[t.index % t.cfg.n_values.len()];
    // Near the identity the Karcher residual bottoms out around 2e-14.
    t.settings.tol = 1e-13;
    t.settings.max_iter = SolverSettings::MAX_ITER_CAP;
    let s = t.settings;
    let w = t.weights("w", n)?;
    let hs = (0..n).map(|_| t.symmetric(1.0)).collect::<Result<Vec<_>>>()?;
    let target = hs
        .iter()
        .zip(w.as_slice())
        .fold(SymMatrix::zeros(t.dim()), |acc, (h, &wi)| acc.add(&h.scale(wi)));

    let errors = STEPS
        .iter()
        .map(|&step| error_at(g, &w, &hs, &target, step, &s))
        .collect::<Result<Vec<_>>>()?;
    let ratio = errors[0] / errors[1];
    let (lo, hi) = RATIO_WINDOW;
    let slack = if ratio.is_finite() { (ratio - lo).min(hi - ratio) } else { f64::NEG_INFINITY };
    let note = format!("e(1e-3)={:e} e(1e-4)={:e} ratio={ratio}", errors[0], errors[1]);
    t.record("ratio", note, slack, 0.0);
    Ok(())
}

fn error_at(
    g: MeanKind,
    w: &WeightVector,
    hs: &[SymMatrix],
    target: &SymMatrix,
    step: f64,
    s: &SolverSettings,
) -> Result<f64> {
    let mats = hs.iter().map(|h| h.scale(step).exp()).collect::<Result<Vec<_>>>()?;
    let m = evaluate_mean(g, w, &mats, s)?;
    Ok(m.log().scale(1.0 / step).sub(target).matrix().frobenius_norm())
}
