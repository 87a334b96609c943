use num_rational::BigRational;
use num_traits::One;
use seqforge::identities::{
    bijection_f, bijection_g, check_bijection, check_even_gap, check_fib_h, check_gen_shift,
    check_gen_sum, check_min2_odd_gap, check_odd_gap, check_ratio, check_schreier_zeckendorf,
    ratio_report,
};
use seqforge::subset::{Condition, Oracle};

#[test]
fn identity_sweeps_have_no_counterexamples() {
    assert!(check_fib_h(200).passed);
    for n in 2..=8 {
        let sum = check_gen_sum(n, 300).unwrap();
        let shift = check_gen_shift(n, 300).unwrap();
        assert!(sum.passed, "{sum:?}");
        assert!(shift.passed, "{shift:?}");
    }
}

#[test]
fn oracle_backed_checks_pass() {
    let oracle = Oracle::default();
    assert!(check_schreier_zeckendorf(&oracle, 3, 16).unwrap().passed);
    assert!(check_odd_gap(&oracle, 18).unwrap().passed);
    assert!(check_even_gap(&oracle, 18).unwrap().passed);
    assert!(check_min2_odd_gap(&oracle, 18, 500).unwrap().passed);
}

#[test]
fn oracle_limit_propagates() {
    let small = Oracle::new(8).unwrap();
    assert!(check_odd_gap(&small, 9).is_err());
    assert!(check_min2_odd_gap(&small, 9, 9).is_err());
}

#[test]
fn bijection_round_trips_on_enumerated_families() {
    let oracle = Oracle::default();
    let report = check_bijection(&oracle, 3, 15).unwrap();
    assert!(report.passed, "{report:?}");

    // image membership spelled out for one family
    let (alpha, beta, n) = (2u32, 2u32, 13u32);
    let sz = Condition::schreier_zeckendorf(alpha, beta);
    for s in oracle.enumerate(n, &sz.forced_max(n)).unwrap() {
        let image = bijection_f(&s, n, alpha, beta).unwrap();
        assert!(image.is_alpha_schreier(alpha) && image.is_beta_zeckendorf(beta));
        assert!(image.max().is_none_or(|m| m <= n - alpha - beta));
        assert_eq!(bijection_g(&image, n, alpha, beta).unwrap(), s);
    }
}

#[test]
fn ratio_behaviour_over_the_window() {
    let report = ratio_report(60).unwrap();
    let r = |n: usize| &report.samples[n - 1].ratio;
    for s in &report.samples {
        assert!(s.ratio <= BigRational::one());
    }
    // the share of odd-gap sets rises strictly once n >= 9; before that it
    // falls from n = 2, 3, 4, 6 and 8 to the next n
    for n in 9..60 {
        assert!(r(n + 1) > r(n), "n={n}");
    }
    assert!(r(4) < r(3));
    // even/odd tends to zero and falls at every step
    for n in 1..60 {
        let s = &report.samples;
        assert!(s[n].even_to_odd < s[n - 1].even_to_odd, "n={}", n + 1);
    }
    assert!(report.final_gap < BigRational::new(1.into(), 1000.into()));
    assert!(check_ratio(&Oracle::default(), 60, None).unwrap().passed);
}
