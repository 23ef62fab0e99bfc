use crate::error::Result;
use crate::linalg::{congruence, SpdMatrix};
use crate::means::{arithmetic_mean, harmonic_mean, resolvent_mean, MeanKind, WeightVector};
use crate::param::{param_homogeneity_pair, pinch, ExtendedParam};

use super::super::trial::Trial;
use super::{has_positive_map_inequality, has_self_consistency};

const HOMOGENEITY_SCALES: [f64; 2] = [0.5, 4.0];
const MIX: [f64; 3] = [0.25, 0.5, 0.9];

/// Homogeneity, variable monotonicity, concavity, the 𝒜/ℋ/ℛ^μ sandwich,
/// parameter monotonicity and Thompson non-expansiveness of `G^μ`.
pub(crate) fn properties(t: &mut Trial, g: MeanKind) -> Result<()> {
    let n = t.case.n();
    let s = t.settings;
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;
    let mut b = Vec::with_capacity(n);
    for m in &a {
        b.push(t.shrink(m)?);
    }
    let c = t.spd_tuple("C", n)?;
    let harm = harmonic_mean(&w, &a)?;
    let arith = arithmetic_mean(&w, &a)?;
    let mut max_input_dist = 0.0f64;
    for (x, y) in a.iter().zip(&c) {
        max_input_dist = max_input_dist.max(t.thompson(x, y)?);
    }

    let mut by_param: Vec<(ExtendedParam, SpdMatrix)> = Vec::new();
    for &mu in &t.cfg.param_grid.clone() {
        let note = format!("mu={mu}");
        let ga = t.param(g, mu, &w, &a)?;

        if let ExtendedParam::Finite(m) = mu {
            for scale in HOMOGENEITY_SCALES {
                let (l, r) = param_homogeneity_pair(g, m, scale, &w, &a, &s)?;
                t.close("homogeneity", format!("{note} a={scale}"), l.matrix(), r.matrix(), 1e-8);
            }
        }

        let gb = t.param(g, mu, &w, &b)?;
        t.leq("monotone-variables", note.clone(), &gb, &ga)?;

        let gc = t.param(g, mu, &w, &c)?;
        if !mu.is_negative() {
            for r in MIX {
                let mixed = a
                    .iter()
                    .zip(&c)
                    .map(|(x, y)| SpdMatrix::new(x.sym().scale(1.0 - r).add(&y.sym().scale(r))))
                    .collect::<Result<Vec<_>>>()?;
                let lhs = t.param(g, mu, &w, &mixed)?;
                let rhs = ga.sym().scale(1.0 - r).add(&gc.sym().scale(r));
                t.geq("concavity", format!("{note} s={r}"), &lhs, &rhs)?;
            }
        }

        t.leq("sandwich", format!("{note} harmonic"), &harm, &ga)?;
        t.leq("sandwich", format!("{note} arithmetic"), &ga, &arith)?;
        if let ExtendedParam::Finite(m) = mu {
            if m >= 0.0 {
                t.leq("sandwich", format!("{note} resolvent"), resolvent_mean(&w, &a, m)?, &ga)?;
            }
        }

        let d = t.thompson(&ga, &gc)?;
        t.scalar_leq("non-expansive", note, d, max_input_dist, 1e-8);

        by_param.push((mu, ga));
    }

    by_param.sort_by(|x, y| x.0.value().total_cmp(&y.0.value()));
    for pair in by_param.windows(2) {
        let note = format!("mu={} <= mu={}", pair[0].0, pair[1].0);
        t.leq("monotone-parameters", note, &pair[0].1, &pair[1].1)?;
    }
    Ok(())
}

/// Permutation, repetition and congruence invariance, self-consistency and
/// the positive-linear-map inequalities of `G^μ`.
pub(crate) fn invariances(t: &mut Trial, g: MeanKind) -> Result<()> {
    let n = t.case.n();
    let dim = t.dim();
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;
    let perm = t.permutation(n);
    let u = t.orthogonal();
    let u_t = u.transpose();
    let a_perm: Vec<SpdMatrix> = perm.iter().map(|&i| a[i].clone()).collect();
    let w_perm = w.permuted(&perm)?;
    let a_rep: Vec<SpdMatrix> = a.iter().chain(&a).cloned().collect();
    let w_rep = w.repeated(2)?;
    let a_rot = a.iter().map(|m| congruence(&u, m)).collect::<Result<Vec<_>>>()?;

    for &mu in &t.cfg.param_grid.clone() {
        let note = format!("mu={mu}");
        let ga = t.param(g, mu, &w, &a)?;
        let x = t.param(g, mu, &w_perm, &a_perm)?;
        t.close("permutation", note.clone(), x.matrix(), ga.matrix(), 1e-8);
        let x = t.param(g, mu, &w_rep, &a_rep)?;
        t.close("repetition", note.clone(), x.matrix(), ga.matrix(), 1e-8);
        let x = t.param(g, mu, &w, &a_rot)?;
        let expect = &(&u_t * ga.matrix()) * &u;
        t.close("unitary-congruence", note.clone(), x.matrix(), &expect, 1e-7);

        if has_self_consistency(g) && n >= 2 {
            let head = &a[..n - 1];
            let w_head = WeightVector::new(w.as_slice()[..n - 1].to_vec())?;
            let x = t.param(g, mu, &w_head, head)?;
            let mut with_x = head.to_vec();
            with_x.push(x.clone());
            let y = t.param(g, mu, &w, &with_x)?;
            t.close("self-consistency", note, y.matrix(), x.matrix(), 1e-8);
        }
    }

    let sm = t.invertible();
    let a_cong = a.iter().map(|m| congruence(&sm, m)).collect::<Result<Vec<_>>>()?;
    let ga = t.param(g, 0.0, &w, &a)?;
    let x = t.param(g, 0.0, &w, &a_cong)?;
    let expect = &(&sm.transpose() * ga.matrix()) * &sm;
    t.close("congruence", "", x.matrix(), &expect, 1e-7);

    if has_positive_map_inequality(g) {
        let v = t.weights("v", 2)?;
        let bounds = t.bounds();
        let big = (0..n)
            .map(|_| t.spd_in("block", 2 * dim, bounds))
            .collect::<Result<Vec<_>>>()?;
        let pinched = big.iter().map(|m| pinch(&v, m)).collect::<Result<Vec<_>>>()?;
        let pinched_inv = big
            .iter()
            .map(|m| pinch(&v, m.inv()?.sym())?.inv())
            .collect::<Result<Vec<_>>>()?;
        for &mu in &t.cfg.param_grid.clone() {
            let note = format!("mu={mu}");
            let lhs = pinch(&v, t.param(g, mu, &w, &big)?.sym())?;
            if mu.is_negative() {
                let rhs = t.param(g, mu, &w, &pinched_inv)?;
                t.geq("positive-map", note, &lhs, &rhs)?;
            } else {
                let rhs = t.param(g, mu, &w, &pinched)?;
                t.leq("positive-map", note, &lhs, &rhs)?;
            }
        }
    }
    Ok(())
}

/// `Σ wᵢ G_k^{μᵢ}(λ; 𝔸ⁱ) ≤ G_k^{ω•μ}(λ; Σ wᵢ 𝔸ⁱ)` for nonnegative `μᵢ`.
pub(crate) fn concavity(t: &mut Trial, g: MeanKind) -> Result<()> {
    use rand::Rng;
    let (n, k) = (t.case.n(), t.case.k());
    let w = t.weights("w", n)?;
    let lambda = t.weights("lambda", k)?;
    let grid = t.grid(n, k)?;
    let mus: Vec<f64> = (0..n)
        .map(|i| {
            let m = t.rng.gen_range(0.0..4.0);
            t.scalar(&format!("mu{i}"), m)
        })
        .collect();

    let mut lhs = crate::linalg::SymMatrix::zeros(t.dim());
    for (i, (&wi, &mu)) in w.as_slice().iter().zip(&mus).enumerate() {
        lhs = lhs.add(&t.param(g, mu, &lambda, grid.row(i))?.sym().scale(wi));
    }
    let mixed = (0..k)
        .map(|j| arithmetic_mean(&w, &grid.col(j)))
        .collect::<Result<Vec<_>>>()?;
    let rhs = t.param(g, w.dot(&mus), &lambda, &mixed)?;
    t.leq("weighted-parameter", format!("mu={mus:?}"), &lhs, &rhs)?;
    Ok(())
}
