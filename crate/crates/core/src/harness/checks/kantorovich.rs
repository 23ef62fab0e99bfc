use crate::error::Result;
use crate::means::{arithmetic_mean, evaluate_mean, MeanKind};
use crate::order::{kantorovich_const, rho};
use crate::param::{row_param_mixture, unparam_mixture, ExtendedParam};

use super::super::trial::Trial;

/// Row-first mixture against `K` times the column-first mixture, and the
/// reverse arithmetic-G bound on the first row.
pub(crate) fn mixture(t: &mut Trial, g: MeanKind) -> Result<()> {
    let (n, k) = (t.case.n(), t.case.k());
    let s = t.settings;
    let w = t.weights("w", n)?;
    let lambda = t.weights("lambda", k)?;
    let grid = t.grid(n, k)?;
    let big_k = kantorovich_const(t.bounds());

    let (lhs, rhs) = unparam_mixture(g, &w, &lambda, &grid, &s)?;
    t.leq("mixture", format!("K={big_k}"), &lhs, rhs.sym().scale(big_k))?;

    let row = grid.row(0);
    let a = arithmetic_mean(&lambda, row)?;
    let gr = evaluate_mean(g, &lambda, row, &s)?;
    t.leq("reverse-arithmetic-G", "", &a, gr.sym().scale(big_k))?;
    Ok(())
}

/// Row-first mixture against `t·rhs + ρ(t)I` over the t grid
/// `{0.1, m/M, 1, M/m, 5}`.
pub(crate) fn rho_mixture(t: &mut Trial, g: MeanKind) -> Result<()> {
    let (n, k) = (t.case.n(), t.case.k());
    let s = t.settings;
    let w = t.weights("w", n)?;
    let lambda = t.weights("lambda", k)?;
    let grid = t.grid(n, k)?;
    let b = t.bounds();

    let (lhs, rhs) = unparam_mixture(g, &w, &lambda, &grid, &s)?;
    for tt in [0.1, b.m() / b.big_m(), 1.0, b.big_m() / b.m(), 5.0] {
        let bound = rhs.sym().scale(tt).shift(rho(b, tt));
        t.leq("rho-mixture", format!("t={tt}"), &lhs, &bound)?;
    }
    Ok(())
}

/// Parameterized mixtures: `lhs ≤ K·rhs` for nonnegative parameters and
/// `lhs ≥ K⁻¹·rhs` for negative ones.
pub(crate) fn param_mixture(t: &mut Trial, g: MeanKind) -> Result<()> {
    let (n, k) = (t.case.n(), t.case.k());
    let s = t.settings;
    let w = t.weights("w", n)?;
    let lambda = t.weights("lambda", k)?;
    let grid = t.grid(n, k)?;
    let big_k = kantorovich_const(t.bounds());

    for negative in [false, true] {
        let finite = t.cfg.finite_params(negative);
        let outer: Vec<ExtendedParam> = t
            .cfg
            .param_grid
            .iter()
            .copied()
            .filter(|p| p.is_negative() == negative)
            .collect();
        if finite.is_empty() || outer.is_empty() {
            continue;
        }
        let mus: Vec<f64> = (0..n)
            .map(|i| {
                let m = t.choose(&finite).expect("nonempty");
                t.scalar(&format!("mu{i}"), m)
            })
            .collect();
        let nu = t.choose(&outer).expect("nonempty");
        t.scalar("nu", nu.value());
        let (lhs, rhs) = row_param_mixture(g, nu, &mus, &w, &lambda, &grid, &s)?;
        let note = format!("nu={nu} mu={mus:?}");
        if negative {
            t.geq("negative", note, &lhs, rhs.sym().scale(1.0 / big_k))?;
        } else {
            t.leq("nonnegative", note, &lhs, rhs.sym().scale(big_k))?;
        }
    }
    Ok(())
}
