//! Minimal linear recurrences from sequence prefixes.
//!
//! [`berlekamp_massey`] runs over exact rationals, so it recovers the shortest
//! recurrence consistent with the whole prefix without rounding. A result is
//! only reported when the prefix holds at least `2 * order + SAFETY_MARGIN`
//! terms; shorter prefixes come back inconclusive rather than guessed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::fasteval::LinearRecurrence;
use crate::recurrences::schreier_zeckendorf_seq;
use crate::subset::{Condition, Oracle};
use crate::{BigCount, Error, Result};

/// Extra terms beyond `2 * order` required before a recurrence is trusted.
pub const SAFETY_MARGIN: usize = 2;

/// Largest `n` at which [`discover_order`] cross-checks the generator against
/// exhaustive enumeration before running discovery.
pub const CROSS_CHECK_LIMIT: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceReport {
    /// Present when the result is conclusive, of order at least one, and every
    /// coefficient is an integer.
    pub found: Option<LinearRecurrence>,
    /// Length of the shortest recurrence fitting the prefix.
    pub order: usize,
    /// Coefficients `c_1..c_order` of `a(n) = sum c_i a(n-i)`.
    pub rational_coeffs: Vec<BigRational>,
    /// The prefix was long enough for the order to be trusted.
    pub conclusive: bool,
    /// No shorter recurrence fits the prefix.
    pub minimal: bool,
    /// Last index at which `found` was checked against the prefix.
    pub verified_upto: Option<i64>,
    /// Index of the first prefix term.
    pub offset: i64,
    pub prefix_len: usize,
}

impl RecurrenceReport {
    fn inconclusive(offset: i64, prefix_len: usize) -> Self {
        RecurrenceReport {
            found: None,
            order: 0,
            rational_coeffs: Vec::new(),
            conclusive: false,
            minimal: false,
            verified_upto: None,
            offset,
            prefix_len,
        }
    }

    pub fn integral_coeffs(&self) -> Option<Vec<BigInt>> {
        self.rational_coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }
}

/// Outcome of checking a recurrence against a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum RecurrenceCheck {
    Holds { checked: usize },
    Fails { index: i64 },
    /// No index in the prefix had enough history to be checked.
    Inconclusive,
}

impl RecurrenceCheck {
    pub fn holds(self) -> bool {
        matches!(self, RecurrenceCheck::Holds { .. })
    }
}

/// [`berlekamp_massey_from`] with the prefix starting at index 0.
pub fn berlekamp_massey(prefix: &[BigInt]) -> RecurrenceReport {
    berlekamp_massey_from(prefix, 0)
}

/// Shortest recurrence fitting `prefix`, whose first term has index `offset`.
pub fn berlekamp_massey_from(prefix: &[BigInt], offset: i64) -> RecurrenceReport {
    if prefix.len() < 2 {
        return RecurrenceReport::inconclusive(offset, prefix.len());
    }
    let s: Vec<BigRational> = prefix.iter().cloned().map(BigRational::from_integer).collect();
    // connection polynomial C(x) = 1 + C_1 x + ... ; a(n) = -sum C_i a(n-i)
    let mut conn = vec![BigRational::one()];
    let mut prev = vec![BigRational::one()];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut prev_disc = BigRational::one();
    for n in 0..s.len() {
        let disc = (1..=len).fold(s[n].clone(), |acc, i| {
            match conn.get(i) {
                Some(c) => acc + c * &s[n - i],
                None => acc,
            }
        });
        if disc.is_zero() {
            shift += 1;
            continue;
        }
        let factor = &disc / &prev_disc;
        let snapshot = conn.clone();
        if conn.len() < prev.len() + shift {
            conn.resize(prev.len() + shift, BigRational::zero());
        }
        for (i, p) in prev.iter().enumerate() {
            conn[i + shift] -= &factor * p;
        }
        if 2 * len <= n {
            len = n + 1 - len;
            prev = snapshot;
            prev_disc = disc;
            shift = 1;
        } else {
            shift += 1;
        }
    }
    let rational_coeffs: Vec<BigRational> = (1..=len)
        .map(|i| conn.get(i).map(|c| -c).unwrap_or_else(BigRational::zero))
        .collect();
    let conclusive = prefix.len() >= 2 * len + SAFETY_MARGIN;
    let mut report = RecurrenceReport {
        found: None,
        order: len,
        rational_coeffs,
        conclusive,
        minimal: conclusive,
        verified_upto: None,
        offset,
        prefix_len: prefix.len(),
    };
    if conclusive && len > 0 {
        if let Some(coeffs) = report.integral_coeffs() {
            let initials = prefix[..len].to_vec();
            if let Ok(r) = LinearRecurrence::with_possible_zero_tail(coeffs, initials, offset) {
                if verify_recurrence(&r, prefix, offset).holds() {
                    report.verified_upto = Some(offset + prefix.len() as i64 - 1);
                }
                report.found = Some(r);
            }
        }
    }
    report
}

/// Checks `a(n) = sum c_i a(n-i)` at every index of the prefix at or beyond
/// `valid_from + order` whose full history lies inside the prefix.
pub fn verify_recurrence(r: &LinearRecurrence, prefix: &[BigInt], offset: i64) -> RecurrenceCheck {
    let k = r.order();
    let first = (r.valid_from() + k as i64).max(offset + k as i64);
    let mut checked = 0usize;
    for (i, term) in prefix.iter().enumerate() {
        let index = offset + i as i64;
        if index < first {
            continue;
        }
        let predicted: BigInt = r
            .coeffs()
            .iter()
            .enumerate()
            .map(|(lag, c)| c * &prefix[i - lag - 1])
            .sum();
        if &predicted != term {
            return RecurrenceCheck::Fails { index };
        }
        checked += 1;
    }
    if checked == 0 {
        RecurrenceCheck::Inconclusive
    } else {
        RecurrenceCheck::Holds { checked }
    }
}

/// Runs discovery on the tail `n >= 2*alpha + beta` of the Schreier/minimum-gap
/// count sequence, using `probe_len` tail terms.
///
/// The generator is first cross-checked against exhaustive enumeration for
/// `n <= CROSS_CHECK_LIMIT`. A probe shorter than `4 * (alpha + beta)` yields
/// an inconclusive report.
pub fn discover_order(alpha: u32, beta: u32, probe_len: usize) -> Result<RecurrenceReport> {
    if alpha == 0 || beta == 0 {
        return Err(Error::InvalidParameter("alpha and beta must be >= 1".into()));
    }
    let tail_start = 2 * alpha + beta;
    if probe_len < 4 * (alpha + beta) as usize {
        return Ok(RecurrenceReport::inconclusive(tail_start.into(), probe_len));
    }
    let last = tail_start as usize + probe_len - 1;
    let last = u32::try_from(last)
        .map_err(|_| Error::InvalidParameter(format!("probe length {probe_len} is too large")))?;
    let seq = schreier_zeckendorf_seq(alpha, beta, last)?;

    let oracle = Oracle::default();
    let condition = Condition::schreier_zeckendorf(alpha, beta);
    for n in 1..=last.min(CROSS_CHECK_LIMIT) {
        let expected: BigCount = oracle.count(n, &condition)?;
        if seq.get(n.into()) != Some(&expected) {
            return Err(Error::Precondition(format!(
                "generator disagrees with enumeration at n = {n}"
            )));
        }
    }

    let tail: Vec<BigInt> = seq
        .slice(tail_start.into(), last.into())
        .terms
        .into_iter()
        .map(BigInt::from)
        .collect();
    Ok(berlekamp_massey_from(&tail, tail_start.into()))
}
