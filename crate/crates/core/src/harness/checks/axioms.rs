use crate::error::Result;
use crate::linalg::SpdMatrix;
use crate::means::{arithmetic_mean, evaluate_mean, harmonic_mean, MeanKind};

use super::super::trial::Trial;

const SCALES: [f64; 3] = [0.1, 3.0, 100.0];
const MIX: [f64; 3] = [0.25, 0.5, 0.9];

pub(crate) fn run(t: &mut Trial, g: MeanKind) -> Result<()> {
    let n = t.case.n();
    let s = t.settings;
    let w = t.weights("w", n)?;
    let a = t.spd_tuple("A", n)?;
    let ga = evaluate_mean(g, &w, &a, &s)?;

    let same = vec![a[0].clone(); n];
    let x = evaluate_mean(g, &w, &same, &s)?;
    t.close("idempotency", "", x.matrix(), a[0].matrix(), 1e-8);

    for c in SCALES {
        let scaled = a.iter().map(|m| m.scale(c)).collect::<Result<Vec<_>>>()?;
        let lhs = evaluate_mean(g, &w, &scaled, &s)?;
        t.close("P1", format!("a={c}"), lhs.matrix(), &ga.matrix().scale(c), 1e-8);
    }

    let mut b = Vec::with_capacity(n);
    for m in &a {
        b.push(t.shrink(m)?);
    }
    let gb = evaluate_mean(g, &w, &b, &s)?;
    t.leq("P2", "", &gb, &ga)?;

    let c = t.spd_tuple("B", n)?;
    let gc = evaluate_mean(g, &w, &c, &s)?;
    for r in MIX {
        let mixed = a
            .iter()
            .zip(&c)
            .map(|(x, y)| SpdMatrix::new(x.sym().scale(1.0 - r).add(&y.sym().scale(r))))
            .collect::<Result<Vec<_>>>()?;
        let lhs = evaluate_mean(g, &w, &mixed, &s)?;
        let rhs = ga.sym().scale(1.0 - r).add(&gc.sym().scale(r));
        t.geq("P3", format!("s={r}"), &lhs, &rhs)?;
    }

    t.leq("P4", "harmonic <= G", harmonic_mean(&w, &a)?, &ga)?;
    t.leq("P4", "G <= arithmetic", &ga, arithmetic_mean(&w, &a)?)?;
    Ok(())
}
