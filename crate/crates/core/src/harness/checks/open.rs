//! Comparisons the source leaves open or states in a form its argument does
//! not support. Records carry the observed slack; the report is exploratory.

use crate::error::Result;
use crate::linalg::SpdMatrix;
use crate::means::{hoelder_operator, hoelder_scalar, MeanKind, WeightVector};
use crate::order::kantorovich_const;
use crate::param::row_param_mixture;

use super::super::trial::Trial;
use super::power_of;

const EXPONENTS: [f64; 3] = [-0.5, 0.0, 0.5];

pub(crate) fn run(t: &mut Trial, g: MeanKind) -> Result<()> {
    let (n, k) = (t.case.n(), t.case.k());
    let s = t.settings;
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;

    // G^{𝔐ₚ(μ,ν)} against the operator Hölder mean of G^μ and G^ν.
    let mu = t.log_uniform("mu", 0.1, 10.0);
    let nu = t.log_uniform("nu", 0.1, 10.0);
    let half = WeightVector::pair(0.5)?;
    let pair = [t.param(g, mu, &w, &a)?, t.param(g, nu, &w, &a)?];
    for p in EXPONENTS {
        let lhs = t.param(g, hoelder_scalar(&half, &[mu, nu], p)?, &w, &a)?;
        let rhs = hoelder_operator(&half, &pair, p)?;
        t.geq("hoelder-interpolation", format!("p={p} mu={mu} nu={nu}"), &lhs, &rhs)?;
    }

    // P_{−1/p}(λ; G^{μ·}) ≥ G^{𝔐_{−p}(λ;μ)}.
    let lambda = t.weights("lambda", k)?;
    let mus: Vec<f64> = (0..k).map(|i| t.log_uniform(&format!("mu{i}"), 0.1, 10.0)).collect();
    let gs = mus
        .iter()
        .map(|&m| t.param(g, m, &w, &a))
        .collect::<Result<Vec<SpdMatrix>>>()?;
    for p in [1.0, 2.0] {
        let lhs = power_of(-1.0 / p, &lambda, &gs, &s)?;
        let rhs = t.param(g, hoelder_scalar(&lambda, &mus, -p)?, &w, &a)?;
        t.geq("negative-chain-link", format!("p={p} mu={mus:?}"), &lhs, &rhs)?;
    }

    // Negative-parameter mixture bounded above by K⁻¹ times the rhs.
    let finite = t.cfg.finite_params(true);
    if !finite.is_empty() {
        let grid = t.grid(n, k)?;
        let mus: Vec<f64> = (0..n)
            .map(|i| {
                let m = t.choose(&finite).expect("nonempty");
                t.scalar(&format!("nu{i}"), m)
            })
            .collect();
        let nu = t.choose(&finite).expect("nonempty");
        let nu = crate::param::ExtendedParam::new(t.scalar("nu", nu))?;
        let big_k = kantorovich_const(t.bounds());
        let (lhs, rhs) = row_param_mixture(g, nu, &mus, &w, &lambda, &grid, &s)?;
        t.leq("negative-mixture-upper", format!("nu={nu} mu={mus:?}"), &lhs, rhs.sym().scale(1.0 / big_k))?;
    }
    Ok(())
}
