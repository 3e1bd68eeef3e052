use allpay_core::designer::dominance_report;
use allpay_core::equilibrium::{
    dominance_gap_inner, expected_utility, one_round_effort, restricted_effort, win_probabilities, StrategyTable,
};
use allpay_core::oracle::best_response_search;
use allpay_core::{ContestSpec, CostFn, Error, Prior, Quadrature};
use proptest::prelude::*;

fn ability_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
}

fn prize_sets(n1: u32) -> Vec<(&'static str, Vec<f64>)> {
    let mut two = vec![1.0, 1.0];
    two.truncate(n1 as usize);
    let linear = (1..=n1).map(|ell| (n1 - ell) as f64 / (n1 - 1) as f64).collect();
    vec![("wta", vec![1.0]), ("two_equal", two), ("linear", linear)]
}

fn wta(n1: u32, n2: u32) -> ContestSpec {
    ContestSpec::new(n1, n2, vec![1.0], Prior::uniform(), CostFn::linear()).unwrap()
}

#[test]
fn restricted_effort_never_exceeds_one_round() {
    let q = Quadrature::default();
    let grid = ability_grid(50);
    for n1 in [3u32, 5, 10, 20] {
        for (name, prizes) in prize_sets(n1) {
            let one: Vec<f64> = grid
                .iter()
                .map(|&a| one_round_effort(a, n1, &prizes, &Prior::uniform(), &CostFn::linear(), &q).unwrap())
                .collect();
            for n2 in 2..=n1 {
                let mut v = prizes.clone();
                v.truncate(n2 as usize);
                let spec = ContestSpec::new(n1, n2, v, Prior::uniform(), CostFn::linear()).unwrap();
                for (&a, &o) in grid.iter().zip(&one) {
                    match restricted_effort(a, &spec, &q) {
                        Ok(r) => {
                            assert!(r <= o + 1e-9, "{name} n1={n1} n2={n2} a={a}: {r} > {o}");
                            let gap = dominance_gap_inner(a, &spec, &prizes, &q).unwrap();
                            if n2 < n1 {
                                assert!(gap > 0.0, "{name} n1={n1} n2={n2} a={a}: gap {gap}");
                            } else {
                                assert!((o - r).abs() < 1e-9);
                                assert!(gap.abs() < 1e-12);
                            }
                        }
                        // A large last prize can drive the formula negative,
                        // where no positive effort is an equilibrium.
                        Err(Error::NegativeArgument { .. }) => assert!(n2 < n1 && spec.prize(n2) > 0.0),
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn dominance_report_rows() {
    let q = Quadrature::default();
    let rows = dominance_report(20, &[1.0], &Prior::uniform(), &CostFn::linear(), &[0.3, 0.6, 0.9], &q).unwrap();
    for r in &rows {
        assert!(r.margin >= -1e-9);
        if r.n2 == 20 {
            assert!(r.margin.abs() < 1e-9);
        } else {
            assert!(r.margin > 0.0);
        }
    }
}

#[test]
fn effort_increases_in_admitted_count_on_upper_range() {
    let q = Quadrature::default();
    let cases = [
        (Prior::uniform(), CostFn::linear()),
        (Prior::power(2.0).unwrap(), CostFn::linear()),
        (Prior::power(0.5).unwrap(), CostFn::power(5.0).unwrap()),
    ];
    for (prior, cost) in cases {
        for n1 in [5u32, 10, 20] {
            for a in ability_grid(30) {
                let mut last = 0.0;
                for n2 in (n1 / 2 + 2)..=n1 {
                    let spec = ContestSpec::new(n1, n2, vec![1.0, 0.5], prior.clone(), cost).unwrap();
                    let b = restricted_effort(a, &spec, &q).unwrap();
                    assert!(b >= last * (1.0 - 1e-9), "n1={n1} n2={n2} a={a}");
                    last = b;
                }
            }
        }
    }
}

#[test]
fn effort_not_monotone_on_lower_range() {
    let q = Quadrature::default();
    // Recorded fixture: n1 = 10, uniform, linear, winner-take-all, a = 1/2.
    let b2 = restricted_effort(0.5, &wta(10, 2), &q).unwrap();
    let b3 = restricted_effort(0.5, &wta(10, 3), &q).unwrap();
    assert!(b3 < 0.5 * b2, "{b2} {b3}");
    assert!((b2 - 1.7994e-4).abs() < 1e-8);

    let mut witnesses = 0;
    for n1 in [5u32, 10, 20] {
        for a in ability_grid(9) {
            for n2 in 2..(n1 / 2 + 1) {
                let lo = restricted_effort(a, &wta(n1, n2), &q).unwrap();
                let hi = restricted_effort(a, &wta(n1, n2 + 1), &q).unwrap();
                if hi < lo {
                    witnesses += 1;
                }
            }
        }
    }
    assert!(witnesses > 0);
}

#[test]
fn last_prize_discourages_effort() {
    let q = Quadrature::default();
    for a in ability_grid(20) {
        let mut last = f64::INFINITY;
        for k in 0..=5 {
            let v3 = 0.1 * k as f64;
            let spec = ContestSpec::new(6, 3, vec![1.0, 0.5, v3], Prior::uniform(), CostFn::linear()).unwrap();
            match restricted_effort(a, &spec, &q) {
                Ok(b) => {
                    assert!(b <= last + 1e-12, "a={a} v3={v3}");
                    last = b;
                }
                Err(Error::NegativeArgument { .. }) => last = 0.0,
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn table_is_monotone_without_overshoot() {
    let q = Quadrature::default();
    for (n1, n2) in [(5u32, 2u32), (20, 7), (20, 20)] {
        let spec = ContestSpec::new(n1, n2, vec![1.0], Prior::power(2.0).unwrap(), CostFn::power(5.0).unwrap()).unwrap();
        let t = StrategyTable::build(&spec, 64, &q).unwrap();
        assert!(t.monotone);
        assert_eq!(t.effort(0.0), 0.0);
        let mut last = 0.0;
        for k in 0..=5000 {
            let e = t.effort(k as f64 / 5000.0);
            assert!(e >= last, "n1={n1} n2={n2} k={k}");
            last = e;
        }
    }
}

#[test]
fn equilibrium_is_a_best_response() {
    let q = Quadrature::default();
    for (n1, n2) in [(5u32, 2u32), (10, 6), (20, 20), (8, 3)] {
        let spec = wta(n1, n2);
        let t = StrategyTable::build(&spec, 256, &q).unwrap();
        for a in [0.2, 0.5, 0.9] {
            let br = best_response_search(a, &spec, &t, 2000).unwrap();
            let b = t.effort(a);
            assert!((br.effort - b).abs() <= br.step, "n1={n1} n2={n2} a={a}");
            let at_b = expected_utility(b, a, &spec, &t).unwrap();
            assert!(br.utility - at_b <= 1e-6);
            assert!(at_b >= -1e-12);
        }
    }
}

#[test]
fn zero_effort_earns_nothing_under_wta() {
    let q = Quadrature::default();
    let spec = wta(6, 3);
    let t = StrategyTable::build(&spec, 64, &q).unwrap();
    for a in [0.1, 0.5, 0.9] {
        assert_eq!(expected_utility(0.0, a, &spec, &t).unwrap(), 0.0);
    }
}

#[test]
fn on_path_probabilities() {
    let q = Quadrature::default();
    let spec = wta(2, 2);
    let t = StrategyTable::build(&spec, 64, &q).unwrap();
    for a in [0.2, 0.7] {
        let p = win_probabilities(t.effort(a), a, &spec, &t).unwrap();
        assert!((p.probs[0] - a).abs() < 1e-9);
    }
    for (n1, n2) in [(5u32, 2u32), (10, 4), (20, 20)] {
        let spec = wta(n1, n2);
        let t = StrategyTable::build(&spec, 128, &q).unwrap();
        for a in ability_grid(20) {
            let p = win_probabilities(t.effort(a), a, &spec, &t).unwrap();
            let s: f64 = p.probs.iter().sum();
            assert!(p.probs.iter().all(|&x| (0.0..=1.0 + 1e-9).contains(&x)));
            assert!(s <= 1.0 + 1e-9, "n1={n1} n2={n2} a={a} s={s}");
        }
    }
}

#[test]
fn two_player_closed_form_on_grid() {
    let q = Quadrature::default();
    for a in ability_grid(50) {
        let b = restricted_effort(a, &wta(2, 2), &q).unwrap();
        assert!((b - a * a / 2.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn full_admission_equals_one_round(
        a in 0.01f64..0.99,
        n in 2u32..12,
        theta in 0.5f64..5.0,
        k in 1.0f64..5.0,
        raw in proptest::collection::vec(0.0f64..1.0, 1..6),
    ) {
        let mut prizes = raw;
        prizes.sort_by(|x, y| y.total_cmp(x));
        prizes.truncate(n as usize);
        let prior = Prior::power(theta).unwrap();
        let cost = CostFn::power(k).unwrap();
        let spec = ContestSpec::new(n, n, prizes.clone(), prior.clone(), cost).unwrap();
        let q = Quadrature::default();
        let r = restricted_effort(a, &spec, &q).unwrap();
        let o = one_round_effort(a, n, &prizes, &prior, &cost, &q).unwrap();
        prop_assert!((r - o).abs() < 1e-9, "{} vs {}", r, o);
    }

    #[test]
    fn effort_increasing_in_ability(a in 0.02f64..0.97, n1 in 3u32..15, frac in 0.0f64..1.0) {
        let n2 = 2 + ((n1 - 2) as f64 * frac) as u32;
        let spec = wta(n1, n2);
        let q = Quadrature::default();
        prop_assert!(restricted_effort(a + 0.01, &spec, &q).unwrap() > restricted_effort(a, &spec, &q).unwrap());
    }
}
