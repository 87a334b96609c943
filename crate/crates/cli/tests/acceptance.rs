//! End-to-end acceptance suite. Every criterion runs, prints one PASS/FAIL
//! line with its elapsed time, and the test fails if any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seqforge::discovery::{berlekamp_massey, discover_order};
use seqforge::fasteval::{eval_fast, eval_iterative, EvalMode, LinearRecurrence};
use seqforge::identities::{check_bijection, check_fib_h, check_gen_shift, check_gen_sum, ratio_report};
use seqforge::recurrences::{
    fibonacci, gen_fib_seq, gen_h_seq, gen_k_seq, h_seq, min_size_odd_gap_count,
    schreier_zeckendorf_seq,
};
use seqforge::{Condition, GapParity, Oracle, SequenceId, SequenceWindow};

type Check = Result<(), String>;

/// Name, check and optional wall-clock budget.
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn big(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

fn c1_h_prefix() -> Check {
    let start = Instant::now();
    let w = h_seq(6);
    let elapsed = start.elapsed();
    ensure(w.offset == 0 && w.terms == big(&[0, 1, 3, 7, 14, 26, 46]), || {
        format!("got {:?}", w.terms)
    })?;
    ensure(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))
}

fn c2_generalized_table() -> Check {
    let rows: [(&str, SequenceWindow, [u64; 13]); 3] = [
        ("F", gen_fib_seq(3, 12).map_err(|e| e.to_string())?, [0, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41]),
        ("K", gen_k_seq(3, 12).map_err(|e| e.to_string())?, [0, 1, 2, 3, 5, 8, 12, 18, 27, 40, 59, 87, 128]),
        ("H", gen_h_seq(3, 12).map_err(|e| e.to_string())?, [0, 1, 3, 6, 11, 19, 31, 49, 76, 116, 175, 262, 390]),
    ];
    for (name, w, expected) in rows {
        ensure(w.offset == 0 && w.terms == big(&expected), || format!("{name} row: {:?}", w.terms))?;
    }
    Ok(())
}

fn c3_min_size_three() -> Check {
    let got: Vec<BigUint> = (1..=12).map(|n| min_size_odd_gap_count(n, 3)).collect();
    let expected = big(&[0, 0, 1, 3, 8, 17, 34, 63, 113, 196, 334, 560]);
    ensure(got == expected, || format!("got {got:?}"))
}

fn c4_schreier_zeckendorf_grid() -> Check {
    let oracle = Oracle::default();
    for alpha in 1..=3 {
        for beta in 1..=3 {
            let seq = schreier_zeckendorf_seq(alpha, beta, 18).map_err(|e| e.to_string())?;
            let c = Condition::schreier_zeckendorf(alpha, beta);
            for n in 1..=18u32 {
                let brute = oracle.count(n, &c).map_err(|e| e.to_string())?;
                let formula = seq.get(n.into()).cloned().unwrap_or_default();
                ensure(brute == formula, || {
                    format!("alpha={alpha} beta={beta} n={n}: {brute} vs {formula}")
                })?;
            }
        }
    }
    Ok(())
}

fn c5_gap_family_grid() -> Check {
    let oracle = Oracle::default();
    let odd = Condition::new().parity(GapParity::AllOdd);
    let even = Condition::new().parity(GapParity::AllEven);
    let h = h_seq(20);
    let pow2 = |e: u32| BigUint::from(1u32) << e;
    for n in 1..=20u32 {
        let count = |c: Condition| oracle.count(n, &c).map_err(|e| e.to_string());
        let even_total = if n % 2 == 1 {
            BigUint::from(3u32) * pow2((n - 1) / 2) - 1u32
        } else {
            BigUint::from(2u32) * pow2(n / 2) - 1u32
        };
        let cases = [
            ("odd, size >= 2", count(odd.min_size(2))?, h.get(i64::from(n) - 1).cloned().unwrap()),
            ("odd, max n", count(odd.forced_max(n))?, fibonacci(u64::from(n) + 1)),
            ("odd, total", count(odd)?, fibonacci(u64::from(n) + 3) - 1u32),
            ("even, max n", count(even.forced_max(n))?, pow2((n - 1) / 2)),
            ("even, total", count(even)?, even_total),
        ];
        for (name, brute, formula) in cases {
            ensure(brute == formula, || format!("{name} n={n}: {brute} vs {formula}"))?;
        }
    }
    Ok(())
}

fn c6_identity_sweeps() -> Check {
    let fib_h = check_fib_h(200);
    ensure(fib_h.passed, || format!("{fib_h:?}"))?;
    for n in 2..=8 {
        for report in [check_gen_sum(n, 300), check_gen_shift(n, 300)] {
            let report = report.map_err(|e| e.to_string())?;
            ensure(report.passed, || format!("n={n}: {report:?}"))?;
        }
    }
    Ok(())
}

fn c7_bijection() -> Check {
    let oracle = Oracle::default();
    let report = check_bijection(&oracle, 3, 15).map_err(|e| e.to_string())?;
    ensure(report.passed, || format!("{report:?}"))?;
    // family sizes, counted separately
    for alpha in 1..=3u32 {
        for beta in 1..=3u32 {
            let sz = Condition::schreier_zeckendorf(alpha, beta);
            for n in alpha..=15 {
                let with_max = oracle.count(n, &sz.forced_max(n)).map_err(|e| e.to_string())?;
                let inner = oracle
                    .count(n.saturating_sub(alpha + beta), &sz)
                    .map_err(|e| e.to_string())?;
                ensure(with_max == inner, || format!("alpha={alpha} beta={beta} n={n}"))?;
            }
        }
    }
    Ok(())
}

fn c8_discovery() -> Check {
    for alpha in 1..=4u32 {
        for beta in 1..=4u32 {
            let k = (alpha + beta) as usize;
            let report = discover_order(alpha, beta, 4 * k).map_err(|e| e.to_string())?;
            let mut expected = vec![BigInt::from(0); k];
            expected[0] += 1;
            expected[k - 1] += 1;
            let coeffs = report.found.as_ref().map(|r| r.coeffs().to_vec());
            ensure(report.conclusive && report.order == k && coeffs == Some(expected), || {
                format!("alpha={alpha} beta={beta}: {report:?}")
            })?;
        }
    }
    let fib: Vec<BigInt> = (0..16).map(|i| BigInt::from(fibonacci(i))).collect();
    let report = berlekamp_massey(&fib);
    let coeffs = report.found.as_ref().map(|r| r.coeffs().to_vec());
    ensure(report.order == 2 && coeffs == Some(vec![1.into(), 1.into()]), || {
        format!("Fibonacci prefix: {report:?}")
    })
}

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

fn c9_fast_evaluation() -> Check {
    let exact = EvalMode::exact();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let order = rng.gen_range(1..=6);
        let mut coeffs: Vec<i64> = (0..order).map(|_| rng.gen_range(-3..=3)).collect();
        if coeffs[order - 1] == 0 {
            coeffs[order - 1] = 1;
        }
        let initials: Vec<i64> = (0..order).map(|_| rng.gen_range(-100..=100)).collect();
        let r = LinearRecurrence::from_i64(&coeffs, &initials, 0).map_err(|e| e.to_string())?;
        let n = rng.gen_range(0..=5000);
        let fast = eval_fast(&r, n, exact).map_err(|e| e.to_string())?;
        let slow = eval_iterative(&r, n, exact).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("{coeffs:?} {initials:?} n={n}"))?;
    }

    let fib = LinearRecurrence::from_i64(&[1, 1], &[0, 1], 0).map_err(|e| e.to_string())?;
    let f30 = eval_fast(&fib, 30, exact).map_err(|e| e.to_string())?;
    ensure(f30 == BigInt::from(832_040), || format!("F(30) = {f30}"))?;

    let p = 1_000_000_007;
    let mode = EvalMode::modular(p).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let got = eval_fast(&fib, 1_000_000_000, mode).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected = BigInt::from(fib_doubling_mod(1_000_000_000, p).0);
    ensure(got == expected, || format!("F(10^9) mod p: {got} vs {expected}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("modular 10^9 took {elapsed:?}"))
}

fn c10_convergence() -> Check {
    let report = ratio_report(60).map_err(|e| e.to_string())?;
    let q = |a: u64, b: u64| BigRational::new(a.into(), b.into());
    let r10 = &report.samples[9].ratio;
    ensure(*r10 == q(232, 284), || format!("r_10 = {r10}"))?;
    ensure(report.final_gap < q(1, 1000), || format!("1 - r_60 = {}", report.final_gap))?;
    for s in &report.samples {
        let n = s.n;
        ensure(s.ratio == BigRational::new(s.odd.clone().into(), s.union.clone().into()), || {
            format!("r_{n} is not odd/union")
        })?;
        if n % 2 == 1 {
            let displayed = BigRational::new(
                BigInt::from(3) * (BigInt::from(1) << ((n - 1) / 2)) - 1,
                BigInt::from(fibonacci(u64::from(n) + 3)) - 1,
            );
            ensure(s.even_to_odd == displayed, || format!("inner ratio at n={n}"))?;
        }
    }
    for pair in report.samples[4..].windows(2) {
        ensure(pair[1].even_to_odd < pair[0].even_to_odd, || {
            format!("inner ratio rises at n={}", pair[1].n)
        })?;
    }
    let last = &report.samples[59].even_to_odd;
    ensure(*last < q(1, 1000), || format!("inner ratio at 60 = {last}"))
}

fn c11_cli_bfile() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_seqforge"))
            .args(["seq", "--family", "H", "--to", "100", "--format", "bfile"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    ensure(first.status.success(), || format!("exit {:?}", first.status))?;
    ensure(first.stdout == second.stdout, || "two runs differ".into())?;
    let text = String::from_utf8(first.stdout).map_err(|e| e.to_string())?;
    let parsed = SequenceWindow::from_bfile(SequenceId::H, &text).map_err(|e| e.to_string())?;
    ensure(parsed == h_seq(100), || "parsed window differs from h_seq(100)".into())?;
    ensure(parsed.to_bfile() == text, || "re-emitted b-file differs".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("1 H prefix", c1_h_prefix, None),
        ("2 generalized Fibonacci table", c2_generalized_table, None),
        ("3 minimum size three", c3_min_size_three, None),
        ("4 Schreier-Zeckendorf oracle grid", c4_schreier_zeckendorf_grid, Some(Duration::from_secs(30))),
        ("5 gap-parity oracle grid", c5_gap_family_grid, Some(Duration::from_secs(60))),
        ("6 identity sweeps", c6_identity_sweeps, Some(Duration::from_secs(5))),
        ("7 bijection round trip", c7_bijection, Some(Duration::from_secs(30))),
        ("8 recurrence discovery", c8_discovery, Some(Duration::from_secs(5))),
        ("9 fast evaluation", c9_fast_evaluation, None),
        ("10 convergence", c10_convergence, None),
        ("11 CLI b-file round trip", c11_cli_bfile, None),
    ];
    let mut failures = Vec::new();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(budget)) = (&outcome, budget) {
            if elapsed >= budget {
                outcome = Err(format!("took {elapsed:?}, budget {budget:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS criterion {name} ({elapsed:.2?})"),
            Err(why) => {
                println!("FAIL criterion {name} ({elapsed:.2?}): {why}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
