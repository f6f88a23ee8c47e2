//! Cross-checks of the fast paths against independent oracles.

use hierpin::annealed::{annealed_step, moment_trace};
use hierpin::certificates::{holder_cost_gaussian, shifted_annealed_log, ChangeOfMeasure, ShiftProfile};
use hierpin::logspace::mean_stderr;
use hierpin::oracle::{enumerate_paths_partition, exact_tree_sample, quenched_log_partition};
use hierpin::pool::{estimate_mean_log, Ensemble};
use hierpin::rng::{Lineage, StreamFamily};
use hierpin::{DisorderModel, ModelParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn tree_draws(p: &ModelParams, d: &DisorderModel, n: u32, count: u64, seed: u64) -> Vec<f64> {
    let lineage = Lineage::new(seed, 0);
    (0..count)
        .map(|k| {
            let mut rng = lineage.stream(StreamFamily::ExactTree, n as u64, k);
            exact_tree_sample(p, d, n, &mut rng).unwrap()
        })
        .collect()
}

#[test]
fn enumeration_matches_recursion_for_random_environments() {
    let d = DisorderModel::Gaussian;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (s, b, n) in [(2u32, 2.0, 2u32), (2, 3.0, 2), (3, 2.0, 2), (2, 2.0, 3)] {
        let p = ModelParams::new(s, b, 0.9, -0.2).unwrap();
        for _ in 0..10 {
            let omega: Vec<f64> =
                (0..(s as usize).pow(n) - 1).map(|_| StandardNormal.sample(&mut rng)).collect();
            let a = quenched_log_partition(&p, &d, n, &omega).unwrap();
            let e = enumerate_paths_partition(&p, &d, n, &omega).unwrap().ln();
            assert!((a - e).abs() < 1e-12, "s={s} b={b} n={n}: {a} vs {e}");
        }
    }
}

#[test]
fn binary_disorder_enumeration() {
    let d = DisorderModel::BinaryPm1;
    let p = ModelParams::new(2, 2.0, 1.2, 0.05).unwrap();
    let omega = [1.0, -1.0, -1.0];
    let a = quenched_log_partition(&p, &d, 2, &omega).unwrap();
    let e = enumerate_paths_partition(&p, &d, 2, &omega).unwrap().ln();
    assert!((a - e).abs() < 1e-13);
}

#[test]
fn exact_tree_variance_matches_recursion() {
    let d = DisorderModel::Gaussian;
    let p = ModelParams::new(2, 2.0, 0.3, 0.02).unwrap();
    let trace = moment_trace(&p, &d, 5).unwrap();
    for n in 1..=5u32 {
        let (log_r, v) = trace[n as usize];
        let r = log_r.exp();
        let q: Vec<f64> = tree_draws(&p, &d, n, 20_000, 3)
            .into_iter()
            .map(|x| ((x.exp() - r) / r).powi(2))
            .collect();
        let (m, se) = mean_stderr(&q);
        assert!((m - v).abs() < 4.0 * se, "n={n}: v={v} sample={m} se={se}");
    }
}

#[test]
fn pool_agrees_with_exact_tree_at_small_levels() {
    let d = DisorderModel::Gaussian;
    let p = ModelParams::new(2, 1.5, 0.6, 0.0).unwrap();
    let n = 6;
    let ens = Ensemble::new(p, d.clone(), 20_000, 8, 5).unwrap().advance_to(n).unwrap();
    let pool = estimate_mean_log(&ens).unwrap();
    let (m, se) = mean_stderr(&tree_draws(&p, &d, n, 20_000, 6));
    let tol = 4.0 * (se * se + pool.stderr * pool.stderr).sqrt();
    assert!((pool.mean - m).abs() < tol, "pool {} vs tree {m}, tol {tol}", pool.mean);
}

#[test]
fn holder_chain_bounds_fractional_moment() {
    let d = DisorderModel::Gaussian;
    let theta = 0.8;
    for (s, b, n) in [(2u32, 2f64.sqrt(), 8u32), (4, 2.0, 5), (3, 1.5, 6)] {
        let p = ModelParams::new(s, b, 0.8, 0.01).unwrap();
        let profiles = [
            ShiftProfile::marginal(n, s, 0.6).unwrap(),
            ShiftProfile::homogeneous(n, s, 0.2).unwrap(),
        ];
        let draws = tree_draws(&p, &d, n, 20_000, 9);
        let u: Vec<f64> = draws.iter().map(|x| (theta * x).exp()).collect();
        let (m, se) = mean_stderr(&u);
        for prof in &profiles {
            let bound = holder_cost_gaussian(prof, theta).unwrap()
                * (theta * shifted_annealed_log(&p, &d, prof, ChangeOfMeasure::Shift).unwrap()).exp();
            assert!(m <= bound + 4.0 * se, "s={s} {:?}: u={m} bound={bound}", prof.kind);
        }
    }
}

#[test]
fn pure_tree_is_deterministic_recursion() {
    let p = ModelParams::new(3, 2.0, 0.0, 0.15).unwrap();
    let draws = tree_draws(&p, &DisorderModel::Gaussian, 5, 3, 1);
    let lr = (0..5).fold(0.0, |x, _| annealed_step(x, &p));
    assert!(draws.iter().all(|x| (x - lr).abs() < 1e-12));
}
