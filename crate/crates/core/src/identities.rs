//! Range checks for the counting identities, the bijection behind the
//! Schreier/minimum-gap recurrence, and the odd-versus-even convergence report.
//!
//! Every comparison is between exact integers. A check stops at the first
//! mismatch and records it.

use std::fmt::Display;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::recurrences::{
    even_gap_counts, fibonacci_seq, gen_fib_seq, gen_h_seq, h_seq, min_size_odd_gap_seq,
    odd_gap_counts, schreier_zeckendorf_seq,
};
use crate::subset::{Condition, GapParity, Oracle, Subset};
use crate::{BigCount, Error, Result};

/// Significant digits used when rendering exact ratios.
pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub index: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity_id: String,
    /// Inclusive index interval that was (to be) checked.
    pub range_checked: (i64, i64),
    pub passed: bool,
    pub first_counterexample: Option<Counterexample>,
}

impl IdentityReport {
    fn pass(identity_id: &str, range: (i64, i64)) -> Self {
        IdentityReport {
            identity_id: identity_id.to_string(),
            range_checked: range,
            passed: true,
            first_counterexample: None,
        }
    }

    /// Records the first mismatch only.
    fn fail(&mut self, index: i64, lhs: impl Display, rhs: impl Display) {
        if self.passed {
            self.passed = false;
            self.first_counterexample =
                Some(Counterexample { index, lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
    }

    /// Compares `(index, lhs, rhs)` triples, stopping at the first mismatch.
    fn from_pairs<T, I>(identity_id: &str, range: (i64, i64), pairs: I) -> Self
    where
        T: PartialEq + Display,
        I: IntoIterator<Item = (i64, T, T)>,
    {
        let mut report = Self::pass(identity_id, range);
        if let Some((index, lhs, rhs)) = pairs.into_iter().find(|(_, l, r)| l != r) {
            report.fail(index, lhs, rhs);
        }
        report
    }
}

/// `F(n+4) = H(n) + n + 3` for `n = 0..=n_max`.
pub fn check_fib_h(n_max: u32) -> IdentityReport {
    let fib = fibonacci_seq(n_max + 4);
    let h = h_seq(n_max);
    IdentityReport::from_pairs(
        "fib-h",
        (0, n_max.into()),
        (0..=n_max).map(|n| {
            let i = i64::from(n);
            (i, fib.terms[n as usize + 4].clone(), &h.terms[n as usize] + BigCount::from(n + 3))
        }),
    )
}

/// `sum_{i=0}^{k+1} F(n, i) = F(n, k+1+n) - 1` for `k = 0..=k_max`.
pub fn check_gen_sum(n: u32, k_max: u32) -> Result<IdentityReport> {
    let f = gen_fib_seq(n, k_max + 1 + n)?;
    let mut running = &f.terms[0] + &f.terms[1];
    let mut report = IdentityReport::pass("gen-sum", (0, k_max.into()));
    for k in 0..=k_max as usize {
        if k > 0 {
            running += &f.terms[k + 1];
        }
        let rhs = &f.terms[k + 1 + n as usize] - 1u32;
        if running != rhs {
            report.fail(k as i64, &running, rhs);
            break;
        }
    }
    Ok(report)
}

/// `F(n, m+2n) = H(n, m) + m + n + 1` for `m = 0..=m_max`.
pub fn check_gen_shift(n: u32, m_max: u32) -> Result<IdentityReport> {
    let f = gen_fib_seq(n, m_max + 2 * n)?;
    let h = gen_h_seq(n, m_max)?;
    Ok(IdentityReport::from_pairs(
        "gen-shift",
        (0, m_max.into()),
        (0..=m_max).map(|m| {
            let lhs = f.terms[(m + 2 * n) as usize].clone();
            let rhs = &h.terms[m as usize] + BigCount::from(m + n + 1);
            (i64::from(m), lhs, rhs)
        }),
    ))
}

/// Odd-gap subsets with at least two elements number `H(n-1)`: checked by
/// enumeration for `n <= n_max_oracle` and by the dynamic program for
/// `n <= n_max_dp`.
pub fn check_min2_odd_gap(
    oracle: &Oracle,
    n_max_oracle: u32,
    n_max_dp: u32,
) -> Result<IdentityReport> {
    let top = n_max_oracle.max(n_max_dp);
    let h = h_seq(top);
    let dp = min_size_odd_gap_seq(2, n_max_dp);
    let condition = Condition::new().parity(GapParity::AllOdd).min_size(2);
    let mut report = IdentityReport::pass("min2-oddgap", (1, top.into()));
    for n in 1..=top {
        let expected = &h.terms[n as usize - 1];
        if n <= n_max_oracle {
            let count = oracle.count(n, &condition)?;
            if &count != expected {
                report.fail(n.into(), format!("enumerated {count}"), expected);
                break;
            }
        }
        if let Some(v) = dp.get(n.into()) {
            if v != expected {
                report.fail(n.into(), format!("dp {v}"), expected);
                break;
            }
        }
    }
    Ok(report)
}

/// Piecewise counts against enumeration for `alpha, beta <= param_max`.
pub fn check_schreier_zeckendorf(
    oracle: &Oracle,
    param_max: u32,
    n_max: u32,
) -> Result<IdentityReport> {
    let mut report = IdentityReport::pass("schreier-zeckendorf", (1, n_max.into()));
    for alpha in 1..=param_max {
        for beta in 1..=param_max {
            let seq = schreier_zeckendorf_seq(alpha, beta, n_max.max(1))?;
            let condition = Condition::schreier_zeckendorf(alpha, beta);
            for n in 1..=n_max {
                let count = oracle.count(n, &condition)?;
                let formula = &seq.terms[n as usize - 1];
                if &count != formula {
                    report.fail(
                        n.into(),
                        format!("enumerated {count} (alpha={alpha}, beta={beta})"),
                        formula,
                    );
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

fn check_gap_family(
    oracle: &Oracle,
    id: &str,
    parity: GapParity,
    n_max: u32,
    closed: fn(u32) -> Result<(BigCount, BigCount)>,
) -> Result<IdentityReport> {
    let mut report = IdentityReport::pass(id, (1, n_max.into()));
    let base = Condition::new().parity(parity);
    for n in 1..=n_max {
        let (contain, total) = closed(n)?;
        let seen_contain = oracle.count(n, &base.forced_max(n))?;
        if seen_contain != contain {
            report.fail(n.into(), format!("enumerated containing n: {seen_contain}"), contain);
            break;
        }
        let seen_total = oracle.count(n, &base)?;
        if seen_total != total {
            report.fail(n.into(), format!("enumerated total: {seen_total}"), total);
            break;
        }
    }
    Ok(report)
}

/// Odd-gap closed forms `F(n+1)` and `F(n+3) - 1` against enumeration.
pub fn check_odd_gap(oracle: &Oracle, n_max: u32) -> Result<IdentityReport> {
    check_gap_family(oracle, "odd-gap", GapParity::AllOdd, n_max, odd_gap_counts)
}

/// Even-gap closed forms against enumeration.
pub fn check_even_gap(oracle: &Oracle, n_max: u32) -> Result<IdentityReport> {
    check_gap_family(oracle, "even-gap", GapParity::AllEven, n_max, even_gap_counts)
}

fn require_params(alpha: u32, beta: u32) -> Result<()> {
    if alpha == 0 || beta == 0 {
        Err(Error::InvalidParameter("alpha and beta must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Maps a set with maximum `n` to a set inside `{1..n-alpha-beta}`: `{n}`
/// goes to the empty set, anything larger drops `n` and shifts down by alpha.
pub fn bijection_f(s: &Subset, n: u32, alpha: u32, beta: u32) -> Result<Subset> {
    require_params(alpha, beta)?;
    if s.max() != Some(n) {
        return Err(Error::Precondition(format!("{s} does not have maximum {n}")));
    }
    if !s.is_alpha_schreier(alpha) || !s.is_beta_zeckendorf(beta) {
        return Err(Error::Precondition(format!(
            "{s} is not {alpha}-Schreier with gaps >= {beta}"
        )));
    }
    let mut rest = s.clone().into_elements();
    rest.pop();
    Subset::new(rest)?.shifted_down(alpha)
}

/// Inverse of [`bijection_f`]: shift up by alpha and append `n`.
pub fn bijection_g(s: &Subset, n: u32, alpha: u32, beta: u32) -> Result<Subset> {
    require_params(alpha, beta)?;
    if n < alpha {
        return Err(Error::Precondition(format!("n = {n} is below alpha = {alpha}")));
    }
    if let Some(max) = s.max() {
        if u64::from(max) + u64::from(alpha) + u64::from(beta) > u64::from(n) {
            return Err(Error::Precondition(format!(
                "{s} is not inside {{1..n-alpha-beta}} for n = {n}"
            )));
        }
    }
    if !s.is_alpha_schreier(alpha) || !s.is_beta_zeckendorf(beta) {
        return Err(Error::Precondition(format!(
            "{s} is not {alpha}-Schreier with gaps >= {beta}"
        )));
    }
    let mut elements = s.shifted_up(alpha).into_elements();
    elements.push(n);
    Subset::new(elements)
}

/// Round trips `g(f(s)) = s` on the max-`n` family and `f(g(s)) = s` on the
/// shifted family, equal family sizes, and that `f` lands inside the shifted
/// family, for `alpha, beta <= param_max` and `alpha <= n <= n_max`.
pub fn check_bijection(oracle: &Oracle, param_max: u32, n_max: u32) -> Result<IdentityReport> {
    let mut report = IdentityReport::pass("bijection", (1, n_max.into()));
    for alpha in 1..=param_max {
        for beta in 1..=param_max {
            let sz = Condition::schreier_zeckendorf(alpha, beta);
            for n in alpha..=n_max {
                let inner_n = n.saturating_sub(alpha + beta);
                let with_max: Vec<Subset> = oracle.enumerate(n, &sz.forced_max(n))?.collect();
                let shifted: Vec<Subset> = oracle.enumerate(inner_n, &sz)?.collect();
                let tag = format!("alpha={alpha}, beta={beta}");
                if with_max.len() != shifted.len() {
                    report.fail(
                        n.into(),
                        format!("|max-n family| = {} ({tag})", with_max.len()),
                        format!("|shifted family| = {}", shifted.len()),
                    );
                    return Ok(report);
                }
                for s in &with_max {
                    let image = bijection_f(s, n, alpha, beta)?;
                    let inside = sz.matches(&image, inner_n).unwrap_or(false);
                    let back = bijection_g(&image, n, alpha, beta)?;
                    if !inside || &back != s {
                        report.fail(n.into(), format!("g(f({s})) = {back} ({tag})"), s);
                        return Ok(report);
                    }
                }
                for s in &shifted {
                    let back = bijection_f(&bijection_g(s, n, alpha, beta)?, n, alpha, beta)?;
                    if &back != s {
                        report.fail(n.into(), format!("f(g({s})) = {back} ({tag})"), s);
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioSample {
    pub n: u32,
    /// Subsets whose gaps are all odd.
    pub odd: BigCount,
    /// Subsets whose gaps are all even.
    pub even: BigCount,
    /// Subsets in both families: exactly those with at most one element.
    pub both: BigCount,
    /// Subsets in either family.
    pub union: BigCount,
    /// `odd / union`.
    pub ratio: BigRational,
    pub ratio_decimal: String,
    /// `even / odd`; tends to 0.
    pub even_to_odd: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub samples: Vec<RatioSample>,
    /// `1 - ratio` at the last sample.
    pub final_gap: BigRational,
    pub final_gap_decimal: String,
}

/// Share of odd-gap subsets among subsets whose gaps are all odd or all even,
/// for `n = 1..=n_max`, from the closed forms and inclusion-exclusion.
pub fn ratio_report(n_max: u32) -> Result<ConvergenceReport> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let mut samples = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let odd = odd_gap_counts(n)?.1;
        let even = even_gap_counts(n)?.1;
        let both = BigCount::from(n + 1);
        let union = &odd + &even - &both;
        let ratio = BigRational::new(BigInt::from(odd.clone()), BigInt::from(union.clone()));
        let even_to_odd = BigRational::new(BigInt::from(even.clone()), BigInt::from(odd.clone()));
        samples.push(RatioSample {
            n,
            ratio_decimal: render_decimal(&ratio, DECIMAL_DIGITS),
            odd,
            even,
            both,
            union,
            ratio,
            even_to_odd,
        });
    }
    let final_gap = BigRational::one() - &samples.last().expect("n_max >= 1").ratio;
    Ok(ConvergenceReport {
        final_gap_decimal: render_decimal(&final_gap, DECIMAL_DIGITS),
        final_gap,
        samples,
    })
}

/// Validates the inclusion-exclusion counts against enumeration for
/// `n <= min(n_max, 20, limit)`, checks every ratio lies in `[0, 1]` and, when
/// given, that the final gap is below `threshold`.
pub fn check_ratio(
    oracle: &Oracle,
    n_max: u32,
    threshold: Option<&BigRational>,
) -> Result<IdentityReport> {
    let report_data = ratio_report(n_max)?;
    let mut report = IdentityReport::pass("ratio", (1, n_max.into()));
    let odd = Condition::new().parity(GapParity::AllOdd);
    let even = Condition::new().parity(GapParity::AllEven);
    for sample in &report_data.samples {
        let n = sample.n;
        if n <= 20.min(oracle.limit()) {
            // a subset is in both families exactly when it has no gaps
            let small = oracle.count(n, &Condition::new())?
                - oracle.count(n, &Condition::new().min_size(2))?;
            let union = oracle.count(n, &odd)? + oracle.count(n, &even)? - &small;
            if small != sample.both || union != sample.union {
                report.fail(n.into(), format!("enumerated union {union}"), &sample.union);
                return Ok(report);
            }
        }
        if sample.ratio.is_negative() || sample.ratio > BigRational::one() {
            report.fail(n.into(), format!("ratio {}", sample.ratio), "a value in [0, 1]");
            return Ok(report);
        }
    }
    if let Some(threshold) = threshold {
        if &report_data.final_gap >= threshold {
            report.fail(
                n_max.into(),
                format!("1 - r = {}", report_data.final_gap_decimal),
                format!("< {}", render_decimal(threshold, DECIMAL_DIGITS)),
            );
        }
    }
    Ok(report)
}

/// Renders an exact rational in plain positional notation with `sig`
/// significant digits, rounding half away from zero. Never uses exponents.
pub fn render_decimal(r: &BigRational, sig: usize) -> String {
    assert!(sig >= 1, "need at least one significant digit");
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().abs().to_biguint().expect("nonnegative");
    let den = r.denom().abs().to_biguint().expect("nonnegative");
    let ten = BigUint::from(10u32);
    let pow10 = |e: u32| num_traits::pow(ten.clone(), e as usize);

    // exponent e with 10^e <= num/den < 10^(e+1)
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    let at_least = |e: i64| {
        if e >= 0 {
            num >= &den * pow10(e as u32)
        } else {
            &num * pow10((-e) as u32) >= den
        }
    };
    if !at_least(e) {
        e -= 1;
    }

    let shift = sig as i64 - 1 - e;
    let (scaled_num, scaled_den) = if shift >= 0 {
        (&num * pow10(shift as u32), den.clone())
    } else {
        (num.clone(), &den * pow10((-shift) as u32))
    };
    let mut digits = (scaled_num * 2u32 + &scaled_den).div_floor(&(scaled_den * 2u32));
    if digits == pow10(sig as u32) {
        digits /= 10u32;
        e += 1;
    }
    let digits = digits.to_string();
    let body = if e >= sig as i64 - 1 {
        format!("{digits}{}", "0".repeat((e - sig as i64 + 1) as usize))
    } else if e >= 0 {
        let (int, frac) = digits.split_at(e as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{digits}", "0".repeat((-e - 1) as usize))
    };
    format!("{sign}{body}")
}
