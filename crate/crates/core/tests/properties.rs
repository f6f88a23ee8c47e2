//! Property-based checks of algebraic identities and monotonicity.

use hierpin::annealed::{annealed_free_energy, annealed_step, annealed_step_linear};
use hierpin::certificates::{
    deloc_certify, log_holder_cost_gaussian, log_holder_cost_tilt, loc_certify, shifted_annealed_log,
    ChangeOfMeasure, DelocOptions, LocOptions, ShiftProfile,
};
use hierpin::dd::Dd;
use hierpin::fractional::{g_theta, u_bound_step, x_theta};
use hierpin::geometry::{vi_members, vi_size};
use hierpin::logspace::log_add_exp;
use hierpin::{DisorderModel, ModelParams};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_step_matches_linear(s in 2u32..6, b in 1.05f64..5.0, h in -1.0f64..0.5, r in 0.3f64..1.5) {
        let p = ModelParams::new(s, b, 0.0, h).unwrap();
        let lin = annealed_step_linear(r, &p);
        let log = annealed_step(r.ln(), &p).exp();
        prop_assert!((lin - log).abs() <= 1e-12 * lin);
    }

    #[test]
    fn log_add_exp_is_exact_sum(a in -50.0f64..50.0, b in -50.0f64..50.0) {
        let got = log_add_exp(a, b);
        prop_assert!((got - log_add_exp(b, a)).abs() == 0.0);
        prop_assert!((got - (a.exp() + b.exp()).ln()).abs() < 1e-12 * got.abs().max(1.0));
    }

    #[test]
    fn marginal_weighted_square_sum(n in 1u32..60, s in 2u32..6, eta in 0.01f64..3.0) {
        let p = ShiftProfile::marginal(n, s, eta).unwrap();
        let want = eta * eta * (s as f64 - 1.0) / s as f64;
        prop_assert!((p.weighted_square_sum() - want).abs() < 1e-12 * want.max(1.0));
        prop_assert!(p.deltas.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn gaussian_tilt_equals_shift(deltas in prop::collection::vec(0.0f64..0.8, 1..12), theta in 0.05f64..0.95) {
        let p = ShiftProfile::custom(3, deltas).unwrap();
        let g = log_holder_cost_gaussian(&p, theta).unwrap();
        let t = log_holder_cost_tilt(&DisorderModel::Gaussian, &p, theta).unwrap();
        prop_assert!((g - t).abs() <= 1e-12 * g.max(1.0));
    }

    #[test]
    fn shift_and_tilt_recursions_agree_for_gaussian(deltas in prop::collection::vec(0.0f64..0.5, 1..10), beta in 0.0f64..2.0) {
        let p = ModelParams::new(3, 1.5, beta, 0.01).unwrap();
        let prof = ShiftProfile::custom(3, deltas).unwrap();
        let d = DisorderModel::Gaussian;
        let a = shifted_annealed_log(&p, &d, &prof, ChangeOfMeasure::Shift).unwrap();
        let b = shifted_annealed_log(&p, &d, &prof, ChangeOfMeasure::Tilt).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn fractional_recursion_absorbs(s in 2u32..5, b in 1.1f64..3.0, theta in 0.5f64..0.999, la in -2.0f64..0.0) {
        prop_assume!(b < s as f64);
        if let Some(x) = x_theta(s, b, theta).unwrap() {
            prop_assert!((g_theta(x, s, b, theta) - x).abs() < 1e-9);
            let mut u = x * 0.999;
            for _ in 0..50 {
                u = u_bound_step(u, la.exp(), s, b, theta);
                prop_assert!(u <= x + 1e-12);
            }
        }
    }

    #[test]
    fn level_sets_partition_positions(s in 2u32..5, n in 1u32..6) {
        let mut all: Vec<u64> = (0..n).flat_map(|i| vi_members(i, n, s).unwrap()).collect();
        prop_assert_eq!(all.len() as u64, (0..n).map(|i| vi_size(i, n, s).unwrap()).sum::<u64>());
        all.sort();
        prop_assert_eq!(all, (1..(s as u64).pow(n)).collect::<Vec<_>>());
    }

    #[test]
    fn double_double_round_trip(x in -30.0f64..30.0) {
        let d = Dd::new(x);
        prop_assert!((d.exp().ln() - d).abs().hi < 1e-28);
    }

    #[test]
    fn loc_is_monotone_in_h(beta in 0.0f64..1.0, h in 0.0f64..1.0, dh in 0.0f64..0.5) {
        let d = DisorderModel::Gaussian;
        let opts = LocOptions { level_cap: 2_000, ..Default::default() };
        let lo = loc_certify(&ModelParams::marginal(4, beta, h).unwrap(), &d, &opts).unwrap();
        let hi = loc_certify(&ModelParams::marginal(4, beta, h + dh).unwrap(), &d, &opts).unwrap();
        prop_assert!(!lo.is_certified() || hi.is_certified());
    }

    #[test]
    fn deloc_is_monotone_in_h(log_h in -30.0f64..-2.0, shrink in 1.0f64..100.0, eta in 0.05f64..0.5, n in 2u32..30) {
        let d = DisorderModel::Gaussian;
        let prof = ShiftProfile::marginal(n, 4, eta).unwrap();
        let opts = DelocOptions::default();
        let at = |h: f64| deloc_certify(&ModelParams::marginal(4, 1.0, h).unwrap(), &d, 0.9, Some(&prof), &opts)
            .unwrap()
            .is_certified();
        let h = log_h.exp();
        prop_assert!(!at(h) || at(h / shrink));
    }
}

#[test]
fn loc_at_zero_disorder_follows_sign_of_pure_free_energy() {
    let d = DisorderModel::Gaussian;
    for (s, b) in [(4u32, 2.0), (2, 2f64.sqrt()), (4, 3.0)] {
        for h in [-0.3, -1e-3, 0.0, 1e-6, 1e-3, 0.05, 0.5] {
            let p = ModelParams::new(s, b, 0.0, h).unwrap();
            let opts = LocOptions { level_cap: 3_000, ..Default::default() };
            let c = loc_certify(&p, &d, &opts).unwrap();
            let f = annealed_free_energy(&p, 1e-12).unwrap();
            assert_eq!(c.is_certified(), f > 0.0, "s={s} b={b} h={h}");
            if c.is_certified() {
                assert!(c.log_r_at_n > b.ln() / (s as f64 - 1.0) - h);
            }
        }
    }
}
