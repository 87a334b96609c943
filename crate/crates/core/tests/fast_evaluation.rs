use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqforge::fasteval::{
    eval_fast, eval_fast_with, eval_iterative, tail_recurrence_of, EvalMode, FastPath,
    LinearRecurrence,
};
use seqforge::recurrences::{generate, schreier_zeckendorf_seq};
use seqforge::SequenceId;

const P: u64 = 1_000_000_007;

fn random_recurrence(rng: &mut ChaCha8Rng) -> LinearRecurrence {
    let order = rng.gen_range(1..=6);
    let mut coeffs: Vec<i64> = (0..order).map(|_| rng.gen_range(-3..=3)).collect();
    while coeffs[order - 1] == 0 {
        coeffs[order - 1] = rng.gen_range(-3..=3);
    }
    let initials: Vec<i64> = (0..order).map(|_| rng.gen_range(-50..=50)).collect();
    let valid_from = rng.gen_range(-5..=5);
    LinearRecurrence::from_i64(&coeffs, &initials, valid_from).unwrap()
}

#[test]
fn fast_paths_agree_with_iteration_on_random_recurrences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let exact = EvalMode::exact();
    for _ in 0..200 {
        let r = random_recurrence(&mut rng);
        let n = r.valid_from() + rng.gen_range(0..=5000);
        let expected = eval_iterative(&r, n, exact).unwrap();
        assert_eq!(eval_fast(&r, n, exact).unwrap(), expected, "{r:?} n={n}");
        assert_eq!(eval_fast_with(&r, n, exact, FastPath::Matrix).unwrap(), expected);
    }
}

#[test]
fn exact_then_reduce_equals_modular() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let modes = [EvalMode::modular(P).unwrap(), EvalMode::modular(2).unwrap(), EvalMode::modular(u64::MAX).unwrap()];
    for _ in 0..40 {
        let r = random_recurrence(&mut rng);
        let n = r.valid_from() + rng.gen_range(0..=2000);
        let exact = eval_fast(&r, n, EvalMode::exact()).unwrap();
        for mode in modes {
            let m = BigInt::from(mode.modulus().unwrap());
            let reduced = exact.mod_floor(&m);
            assert_eq!(eval_fast(&r, n, mode).unwrap(), reduced);
            assert_eq!(eval_iterative(&r, n, mode).unwrap(), reduced);
            assert_eq!(eval_fast_with(&r, n, mode, FastPath::Matrix).unwrap(), reduced);
        }
    }
}

/// `(F(n), F(n+1)) mod p` by fast doubling, independent of any recurrence code.
fn fib_doubling_mod(n: u64, p: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let (a, b) = fib_doubling_mod(n / 2, p);
    let (a, b, p) = (a as u128, b as u128, p as u128);
    let c = a * ((2 * b + p - a) % p) % p;
    let d = (a * a + b * b) % p;
    if n.is_multiple_of(2) {
        (c as u64, d as u64)
    } else {
        (d as u64, ((c + d) % p) as u64)
    }
}

#[test]
fn modular_billion_matches_doubling_oracle() {
    let fib = LinearRecurrence::from_i64(&[1, 1], &[0, 1], 0).unwrap();
    let mode = EvalMode::modular(P).unwrap();
    for n in [1_000_000_000i64, 999_999_999, 123_456_789, 1 << 40] {
        let expected = BigInt::from(fib_doubling_mod(n as u64, P).0);
        assert_eq!(eval_fast(&fib, n, mode).unwrap(), expected, "n={n}");
        assert_eq!(eval_fast_with(&fib, n, mode, FastPath::Matrix).unwrap(), expected);
    }
    // iterative checkpoint at a size iteration can still reach
    let n = 2_000_000;
    assert_eq!(eval_iterative(&fib, n, mode).unwrap(), BigInt::from(fib_doubling_mod(n as u64, P).0));
}

#[test]
fn tail_recurrences_reproduce_schreier_zeckendorf_counts() {
    for alpha in 1..=4u32 {
        for beta in 1..=4u32 {
            let r = tail_recurrence_of(&SequenceId::SchreierZeckendorf { alpha, beta }).unwrap();
            assert_eq!(r.order(), (alpha + beta) as usize);
            assert_eq!(r.valid_from(), i64::from(alpha));
            let seq = schreier_zeckendorf_seq(alpha, beta, 2000).unwrap();
            for n in (i64::from(alpha)..=2000).step_by(37).chain([2000]) {
                let expected = BigInt::from(seq.get(n).unwrap().clone());
                assert_eq!(eval_fast(&r, n, EvalMode::exact()).unwrap(), expected);
            }
            let last = eval_iterative(&r, 2000, EvalMode::exact()).unwrap();
            assert_eq!(last, BigInt::from(seq.get(2000).unwrap().clone()));
        }
    }
}

#[test]
fn every_catalog_tail_matches_its_generator() {
    let families = [
        SequenceId::Fibonacci,
        SequenceId::H,
        SequenceId::GenFib { n: 3 },
        SequenceId::GenK { n: 4 },
        SequenceId::GenH { n: 5 },
        SequenceId::OddGapContain,
        SequenceId::OddGapTotal,
        SequenceId::EvenGapContain,
        SequenceId::EvenGapTotal,
        SequenceId::MinSizeOddGap { k: 0 },
        SequenceId::MinSizeOddGap { k: 1 },
        SequenceId::MinSizeOddGap { k: 2 },
        SequenceId::SchreierZeckendorf { alpha: 3, beta: 2 },
    ];
    for id in families {
        let r = tail_recurrence_of(&id).unwrap();
        let window = generate(&id, 300).unwrap();
        for (i, t) in window.iter().filter(|(i, _)| *i >= r.valid_from()) {
            assert_eq!(eval_fast(&r, i, EvalMode::exact()).unwrap(), BigInt::from(t.clone()), "{id} at {i}");
        }
    }
}

#[test]
fn schreier_zeckendorf_recurrence_seeded_from_counts() {
    let r = LinearRecurrence::from_i64(&[1, 0, 1], &[2, 3, 4], 1).unwrap();
    assert_eq!(eval_iterative(&r, 4, EvalMode::exact()).unwrap(), BigInt::from(6));
    assert_eq!(eval_fast(&r, 4, EvalMode::exact()).unwrap(), BigInt::from(6));
}
