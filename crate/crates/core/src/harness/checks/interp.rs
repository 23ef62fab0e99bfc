use rand::Rng;

use crate::error::Result;
use crate::linalg::SpdMatrix;
use crate::means::{hoelder_scalar, MeanKind};
use crate::order::kantorovich_ratio;

use super::super::trial::Trial;
use super::{interpolate, interpolate_scalar, power_of, T_GRID};

const CROSS_PAIRS: [(f64, f64); 4] = [(-1.0, 1.0), (-0.5, 2.0), (0.0, 1.0), (1.0, 3.0)];
const CHAIN_PAIRS: [(f64, f64); 2] = [(1.0, 2.0), (2.0, 4.0)];

/// `(1 − t)G^μ + tG^ν` against `G^{(1−t)μ+tν}`: below it for nonnegative
/// parameters, above it for negative ones.
pub(crate) fn comparison(t: &mut Trial, g: MeanKind) -> Result<()> {
    let n = t.case.n();
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;

    for negative in [false, true] {
        let mut pairs = Vec::new();
        let finite = t.cfg.finite_params(negative);
        if let (Some(x), Some(y)) = (t.choose(&finite), t.choose(&finite)) {
            pairs.push((x, y));
        }
        let sign = if negative { -1.0 } else { 1.0 };
        let lo = if negative { 0.1 } else { 0.0 };
        let x = sign * t.rng.gen_range(lo..4.0);
        let y = sign * t.rng.gen_range(lo..4.0);
        pairs.push((x, y));

        for (mu, nu) in pairs {
            t.scalar("mu", mu);
            t.scalar("nu", nu);
            let gm = t.param(g, mu, &w, &a)?;
            let gn = t.param(g, nu, &w, &a)?;
            for tt in T_GRID {
                let lhs = gm.sym().scale(1.0 - tt).add(&gn.sym().scale(tt));
                let rhs = t.param(g, (1.0 - tt) * mu + tt * nu, &w, &a)?;
                let note = format!("mu={mu} nu={nu} t={tt}");
                if negative {
                    t.geq("negative", note, &lhs, &rhs)?;
                } else {
                    t.leq("nonnegative", note, &lhs, &rhs)?;
                }
            }
        }
    }
    Ok(())
}

/// `G^{𝔐ₚ(1−t,t;μ,ν)} ≥ Pₚ(1−t,t; G^{μ/K}, G^{ν/K})`, and its multivariate
/// form with three parameters.
pub(crate) fn power_interp(t: &mut Trial, g: MeanKind) -> Result<()> {
    let n = t.case.n();
    let s = t.settings;
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;
    let mu = t.log_uniform("mu", 0.1, 10.0);
    let nu = t.log_uniform("nu", 0.1, 10.0);
    let big_k = kantorovich_ratio(mu, nu);
    let gm = t.param(g, mu / big_k, &w, &a)?;
    let gn = t.param(g, nu / big_k, &w, &a)?;

    let lambda = t.weights("lambda", 3)?;
    let mus: Vec<f64> = (0..3).map(|i| t.log_uniform(&format!("mu{i}"), 0.1, 10.0)).collect();
    let (lo, hi) = mus.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
    let k_multi = kantorovich_ratio(lo, hi);
    let shrunk = mus
        .iter()
        .map(|&m| t.param(g, m / k_multi, &w, &a))
        .collect::<Result<Vec<_>>>()?;

    for &p in &t.cfg.exponent_grid.clone() {
        if !(-1.0..1.0).contains(&p) {
            continue;
        }
        for tt in T_GRID {
            let lhs = t.param(g, interpolate_scalar(p, tt, mu, nu)?, &w, &a)?;
            let rhs = interpolate(p, tt, &gm, &gn, &s)?;
            t.geq("two-parameter", format!("p={p} t={tt} mu={mu} nu={nu}"), &lhs, &rhs)?;
        }
        let lhs = t.param(g, hoelder_scalar(&lambda, &mus, p)?, &w, &a)?;
        let rhs = power_of(p, &lambda, &shrunk, &s)?;
        t.geq("multivariate", format!("p={p} mu={mus:?}"), &lhs, &rhs)?;
    }
    Ok(())
}

/// `G^{𝔐_q(λ;μ)} ≥ Pₚ(λ; G^{μ₁},…)` for `−1 ≤ p ≤ 1 ≤ q`, and the chain
/// `Λ ≤ P_{1/q} ≤ P_{1/p} ≤ G^{𝔐ₚ} ≤ G^{𝔐_q}` of means of `G^{μⱼ}` for
/// `1 ≤ p ≤ q`.
pub(crate) fn power_cross(t: &mut Trial, g: MeanKind) -> Result<()> {
    let (n, k) = (t.case.n(), t.case.k());
    let s = t.settings;
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;
    let lambda = t.weights("lambda", k)?;
    let mus: Vec<f64> = (0..k).map(|i| t.log_uniform(&format!("mu{i}"), 0.1, 10.0)).collect();
    let gs = mus
        .iter()
        .map(|&m| t.param(g, m, &w, &a))
        .collect::<Result<Vec<_>>>()?;
    let at = |t: &Trial, q: f64| -> Result<SpdMatrix> {
        t.param(g, hoelder_scalar(&lambda, &mus, q)?, &w, &a)
    };

    for (p, q) in CROSS_PAIRS {
        let lhs = at(t, q)?;
        let rhs = power_of(p, &lambda, &gs, &s)?;
        t.geq("power-of-parameters", format!("p={p} q={q} mu={mus:?}"), &lhs, &rhs)?;
    }

    for (p, q) in CHAIN_PAIRS {
        let links = [
            power_of(0.0, &lambda, &gs, &s)?,
            power_of(1.0 / q, &lambda, &gs, &s)?,
            power_of(1.0 / p, &lambda, &gs, &s)?,
            at(t, p)?,
            at(t, q)?,
        ];
        let refs: Vec<&SpdMatrix> = links.iter().collect();
        t.chain("chain", &format!("p={p} q={q}"), &refs)?;
    }
    Ok(())
}

/// `G^{𝒜(1−t,t;μ,ν)} ≥ 𝒜(1−t,t;G^μ,G^ν)` and
/// `G^{ℋ(1−t,t;μ,ν)} ≥ ℋ(1−t,t;G^{μ/K},G^{ν/K})` for positive parameters.
pub(crate) fn section5(t: &mut Trial, g: MeanKind) -> Result<()> {
    let n = t.case.n();
    let s = t.settings;
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;
    let mu = t.log_uniform("mu", 0.1, 10.0);
    let nu = t.log_uniform("nu", 0.1, 10.0);
    let big_k = kantorovich_ratio(mu, nu);
    let gm = t.param(g, mu, &w, &a)?;
    let gn = t.param(g, nu, &w, &a)?;
    let gm_k = t.param(g, mu / big_k, &w, &a)?;
    let gn_k = t.param(g, nu / big_k, &w, &a)?;

    for tt in T_GRID {
        let note = format!("t={tt} mu={mu} nu={nu}");
        let lhs = t.param(g, (1.0 - tt) * mu + tt * nu, &w, &a)?;
        let rhs = gm.sym().scale(1.0 - tt).add(&gn.sym().scale(tt));
        t.geq("arithmetic", note.clone(), &lhs, &rhs)?;

        let lhs = t.param(g, interpolate_scalar(-1.0, tt, mu, nu)?, &w, &a)?;
        let rhs = interpolate(-1.0, tt, &gm_k, &gn_k, &s)?;
        t.geq("harmonic", note, &lhs, &rhs)?;
    }
    Ok(())
}
