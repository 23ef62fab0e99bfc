//! Degenerate instances of the mixed and interpolated inequalities coincide
//! with the simpler statements they specialize to, and give the same verdict.

use ordered_means::harness::{parse_checks, run_suite, CheckId, TrialConfig};
use ordered_means::linalg::random::{random_simplex, rng_from_seed};
use ordered_means::linalg::{random_spd, SpdMatrix, SpectralBounds, TrialRng};
use ordered_means::means::{evaluate_mean, hoelder_scalar, MeanKind, SolverSettings, WeightVector};
use ordered_means::order::{kantorovich_const, loewner_leq, thompson_distance};
use ordered_means::param::{parameterize, row_param_mixture, unparam_mixture, BlockGrid, ExtendedParam};
use ordered_means::scalar::scalar_param_mean;

const KINDS: [MeanKind; 4] = [MeanKind::Karcher, MeanKind::Power(0.5), MeanKind::Agh, MeanKind::Harmonic];

fn bounds() -> SpectralBounds {
    SpectralBounds::new(1.0, 4.0).unwrap()
}

fn tuple(n: usize, dim: usize, rng: &mut TrialRng) -> Vec<SpdMatrix> {
    (0..n).map(|_| random_spd(dim, bounds(), rng).unwrap()).collect()
}

fn weights(n: usize, rng: &mut TrialRng) -> WeightVector {
    WeightVector::new(random_simplex(n, rng)).unwrap()
}

fn p(kind: MeanKind, mu: f64, w: &WeightVector, a: &[SpdMatrix]) -> SpdMatrix {
    parameterize(kind, ExtendedParam::new(mu).unwrap(), w, a, &SolverSettings::default()).unwrap()
}

fn rel_diff(a: &SpdMatrix, b: &SpdMatrix) -> f64 {
    (a.matrix() - b.matrix()).frobenius_norm() / b.matrix().frobenius_norm()
}

#[test]
fn zero_parameters_reduce_to_the_plain_mixture() {
    let s = SolverSettings::default();
    let mut rng = rng_from_seed(1);
    for kind in KINDS {
        let grid = BlockGrid::new(3, 2, tuple(6, 3, &mut rng)).unwrap();
        let (w, lambda) = (weights(3, &mut rng), weights(2, &mut rng));
        let (l1, r1) = unparam_mixture(kind, &w, &lambda, &grid, &s).unwrap();
        let (l2, r2) =
            row_param_mixture(kind, ExtendedParam::Finite(0.0), &[0.0; 3], &w, &lambda, &grid, &s).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(r1, r2);
        let k = kantorovich_const(bounds());
        let v1 = loewner_leq(&l1, r1.sym().scale(k), 1e-8).unwrap();
        let v2 = loewner_leq(&l2, r2.sym().scale(k), 1e-8).unwrap();
        assert_eq!(v1.holds, v2.holds);
    }
}

#[test]
fn constant_grid_makes_both_sides_equal() {
    let s = SolverSettings::default();
    let mut rng = rng_from_seed(2);
    let a = random_spd(3, bounds(), &mut rng).unwrap();
    let grid = BlockGrid::constant(2, 3, &a).unwrap();
    let (w, lambda) = (weights(2, &mut rng), weights(3, &mut rng));
    for kind in KINDS {
        let (l, r) = unparam_mixture(kind, &w, &lambda, &grid, &s).unwrap();
        assert!(rel_diff(&l, &a) < 1e-10);
        assert!(rel_diff(&r, &a) < 1e-10);
    }
}

#[test]
fn equal_parameters_in_weighted_concavity_reduce_to_joint_concavity() {
    // Σ wᵢ G^μ(λ; rowᵢ) ≤ G^μ(λ; Σ wᵢ rowᵢ) is joint concavity for n = 2.
    let mut rng = rng_from_seed(3);
    for kind in KINDS {
        let rows = [tuple(2, 3, &mut rng), tuple(2, 3, &mut rng)];
        let lambda = weights(2, &mut rng);
        let t = 0.3;
        let w = WeightVector::pair(t).unwrap();
        let mu = 1.5;
        let lhs = p(kind, mu, &lambda, &rows[0]).sym().scale(1.0 - t).add(&p(kind, mu, &lambda, &rows[1]).sym().scale(t));
        let mixed: Vec<SpdMatrix> = (0..2)
            .map(|j| SpdMatrix::new(rows[0][j].sym().scale(1.0 - t).add(&rows[1][j].sym().scale(t))).unwrap())
            .collect();
        let rhs = p(kind, w.dot(&[mu, mu]), &lambda, &mixed);
        let concavity = p(kind, mu, &lambda, &mixed);
        assert!(rel_diff(&rhs, &concavity) < 1e-14);
        assert!(loewner_leq(&lhs, &rhs, 1e-8).unwrap().holds);
    }
}

#[test]
fn interpolation_endpoints_reduce_to_parameter_monotonicity() {
    let s = SolverSettings::default();
    let mut rng = rng_from_seed(4);
    let (mu, nu) = (1.0, 4.0);
    let k = (mu + nu) * (mu + nu) / (4.0 * mu * nu);
    for kind in KINDS {
        let a = tuple(3, 2, &mut rng);
        let w = weights(3, &mut rng);
        for p_exp in [-1.0, -0.5, 0.5] {
            // t = 1: G^ν ≥ G^{ν/K}, the monotone-parameter statement.
            let lhs = p(kind, nu, &w, &a);
            let rhs = p(kind, nu / k, &w, &a);
            assert!(loewner_leq(&rhs, &lhs, 1e-8).unwrap().holds);
            let same = evaluate_mean(MeanKind::power(p_exp).unwrap(), &WeightVector::pair(0.5).unwrap(), &[lhs.clone(), lhs.clone()], &s).unwrap();
            assert!(rel_diff(&same, &lhs) < 1e-9);
        }
    }
}

#[test]
fn comparison_with_equal_parameters_is_an_identity() {
    let mut rng = rng_from_seed(5);
    for kind in KINDS {
        let a = tuple(3, 3, &mut rng);
        let w = weights(3, &mut rng);
        for mu in [-2.0, 0.0, 2.0] {
            let g = p(kind, mu, &w, &a);
            for t in [0.3, 0.7] {
                let mix = SpdMatrix::new(g.sym().scale(1.0 - t).add(&g.sym().scale(t))).unwrap();
                assert!(rel_diff(&mix, &p(kind, (1.0 - t) * mu + t * mu, &w, &a)) < 1e-12);
            }
        }
    }
}

#[test]
fn scalar_inputs_match_the_scalar_formula() {
    let w = WeightVector::new(vec![0.3, 0.7]).unwrap();
    let vals = [1.5, 3.5];
    let mats: Vec<SpdMatrix> = vals.iter().map(|&x| SpdMatrix::from_diag(&[x]).unwrap()).collect();
    for kind in KINDS {
        for mu in [f64::NEG_INFINITY, -3.0, -0.5, 0.0, 0.5, 3.0, f64::INFINITY] {
            let mu = ExtendedParam::new(mu).unwrap();
            let m = parameterize(kind, mu, &w, &mats, &SolverSettings::default()).unwrap();
            let x = scalar_param_mean(kind, mu, &w, &vals).unwrap();
            let err = (m.matrix()[(0, 0)] - x).abs() / x;
            assert!(err <= 1e-9, "{kind} μ={mu}: {err:e}");
        }
    }
}

#[test]
fn commuting_power_gap_matches_the_scalar_gap() {
    let s = SolverSettings::default();
    let w = WeightVector::new(vec![0.25, 0.75]).unwrap();
    let d = [[1.0, 2.0, 3.5], [3.0, 1.5, 1.2]];
    let mats: Vec<SpdMatrix> = d.iter().map(|x| SpdMatrix::from_diag(x).unwrap()).collect();
    let karcher = evaluate_mean(MeanKind::Karcher, &w, &mats, &s).unwrap();
    for q in [0.5, -0.25, 0.1] {
        let pm = evaluate_mean(MeanKind::power(q).unwrap(), &w, &mats, &s).unwrap();
        let expect = (0..3)
            .map(|i| {
                let col = [d[0][i], d[1][i]];
                (hoelder_scalar(&w, &col, q).unwrap() / hoelder_scalar(&w, &col, 0.0).unwrap()).ln().abs()
            })
            .fold(0.0, f64::max);
        let got = thompson_distance(&pm, &karcher).unwrap();
        assert!((got - expect).abs() < 1e-10, "q={q}: {got} vs {expect}");
    }
}

#[test]
fn single_parameter_cross_means_collapse() {
    let s = SolverSettings::default();
    let mut rng = rng_from_seed(6);
    let a = tuple(2, 3, &mut rng);
    let w = weights(2, &mut rng);
    let one = WeightVector::uniform(1).unwrap();
    for kind in KINDS {
        let g = p(kind, 2.0, &w, &a);
        for q in [-1.0, 0.0, 0.5, 1.0] {
            let m = evaluate_mean(MeanKind::power(q).unwrap(), &one, std::slice::from_ref(&g), &s).unwrap();
            assert!(rel_diff(&m, &g) < 1e-10);
            assert!((hoelder_scalar(&one, &[2.0], q).unwrap() - 2.0).abs() < 1e-15);
        }
    }
}

#[test]
fn suite_plumbing() {
    let cfg = TrialConfig {
        trials_per_case: 1,
        dims: vec![2],
        n_values: vec![2],
        ..TrialConfig::default()
    };
    assert!(run_suite(&cfg, &[]).unwrap().is_empty());
    let reports = run_suite(&cfg, &[CheckId::Axioms]).unwrap();
    assert_eq!(reports.len(), cfg.mean_kinds.len());
    assert!(reports.iter().all(|r| r.summary.trials == 1 && r.passed()));
    assert!(parse_checks(&["thm-9.9".into()]).is_err());
    let bad = TrialConfig {
        trials_per_case: 0,
        ..cfg
    };
    assert!(run_suite(&bad, &[CheckId::Axioms]).is_err());
}
