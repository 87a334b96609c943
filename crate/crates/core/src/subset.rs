//! Finite subsets of the naturals, the Schreier and gap predicates on them, and
//! the exhaustive enumeration oracle.
//!
//! Subsets of `{1, ..., n}` are enumerated as `n`-bit characteristic vectors:
//! bit `i` set means element `i + 1` is present. Enumeration order is
//! increasing numeric order of those vectors.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{BigCount, Error, Result};

/// Default largest `n` the oracle will enumerate (2^30 subsets).
pub const DEFAULT_ENUM_LIMIT: u32 = 30;

/// Hard ceiling imposed by the 64-bit characteristic vector.
pub const MAX_ENUM_LIMIT: u32 = 63;

/// A finite set of naturals `>= 1`, stored strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Subset(Vec<u32>);

impl Subset {
    /// Builds a subset from elements that are already strictly increasing and
    /// all at least 1.
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        if elements.first() == Some(&0) {
            return Err(Error::InvalidSubset("elements must be >= 1".into()));
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(format!(
                "elements must be strictly increasing, found {} before {}",
                w[0], w[1]
            )));
        }
        Ok(Subset(elements))
    }

    pub fn empty() -> Self {
        Subset(Vec::new())
    }

    /// Decodes a characteristic vector: bit `i` stands for element `i + 1`.
    pub fn from_mask(mask: u64) -> Self {
        let mut elements = Vec::with_capacity(mask.count_ones() as usize);
        let mut rest = mask;
        while rest != 0 {
            elements.push(rest.trailing_zeros() + 1);
            rest &= rest - 1;
        }
        Subset(elements)
    }

    /// Characteristic vector, if every element fits in 64 bits.
    pub fn to_mask(&self) -> Option<u64> {
        self.0.iter().try_fold(0u64, |acc, &e| {
            (e <= 64).then(|| acc | (1u64 << (e - 1)))
        })
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn into_elements(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, element: u32) -> bool {
        self.0.binary_search(&element).is_ok()
    }

    /// Consecutive gaps `s[i+1] - s[i]`; empty for sets of size at most one.
    pub fn difference_set(&self) -> GapList {
        GapList(self.0.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// `min S >= alpha * |S|`, evaluated in integers. The empty set qualifies.
    pub fn is_alpha_schreier(&self, alpha: u32) -> bool {
        match self.min() {
            None => true,
            Some(min) => u64::from(min) >= u64::from(alpha) * self.len() as u64,
        }
    }

    /// Every pair of elements is at least `beta` apart. Sets of size at most
    /// one qualify vacuously.
    pub fn is_beta_zeckendorf(&self, beta: u32) -> bool {
        self.difference_set().min().is_none_or(|g| g >= beta)
    }

    /// Adds `k` to every element.
    pub fn shifted_up(&self, k: u32) -> Subset {
        Subset(self.0.iter().map(|&e| e + k).collect())
    }

    /// Subtracts `k` from every element, failing if an element would drop
    /// below 1.
    pub fn shifted_down(&self, k: u32) -> Result<Subset> {
        self.0
            .iter()
            .map(|&e| {
                e.checked_sub(k).filter(|&v| v >= 1).ok_or_else(|| {
                    Error::InvalidSubset(format!("element {e} cannot be shifted down by {k}"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Subset)
    }
}

impl TryFrom<Vec<u32>> for Subset {
    type Error = Error;

    fn try_from(elements: Vec<u32>) -> Result<Self> {
        Subset::new(elements)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Ordered list of consecutive differences of a subset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GapList(Vec<u32>);

impl GapList {
    pub fn gaps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.iter().copied().min()
    }

    pub fn satisfies(&self, parity: GapParity) -> bool {
        self.0.iter().all(|&g| parity.accepts(g))
    }
}

/// Constraint on the parity of every gap.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapParity {
    #[default]
    Any,
    AllOdd,
    AllEven,
}

impl GapParity {
    pub fn accepts(self, gap: u32) -> bool {
        match self {
            GapParity::Any => true,
            GapParity::AllOdd => gap % 2 == 1,
            GapParity::AllEven => gap.is_multiple_of(2),
        }
    }
}

impl FromStr for GapParity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(GapParity::Any),
            "odd" | "all-odd" => Ok(GapParity::AllOdd),
            "even" | "all-even" => Ok(GapParity::AllEven),
            other => Err(Error::InvalidParameter(format!(
                "unknown gap parity {other:?} (expected any, odd or even)"
            ))),
        }
    }
}

impl fmt::Display for GapParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapParity::Any => "any",
            GapParity::AllOdd => "odd",
            GapParity::AllEven => "even",
        })
    }
}

/// A conjunction of subset predicates. Absent clauses are skipped.
///
/// ```
/// use seqforge::{Condition, GapParity, Subset};
///
/// let c = Condition::new().parity(GapParity::AllOdd).min_size(2);
/// let s = Subset::new(vec![1, 2, 3]).unwrap();
/// assert!(c.matches(&s, 3).unwrap());
/// ```
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition {
    pub alpha: Option<u32>,
    pub beta: Option<u32>,
    pub gap_parity: GapParity,
    pub min_size: u32,
    /// When present the subset must be nonempty with exactly this maximum.
    pub forced_max: Option<u32>,
}

impl Condition {
    pub fn new() -> Self {
        Self::default()
    }

    /// Both the Schreier and the minimum-gap clause.
    pub fn schreier_zeckendorf(alpha: u32, beta: u32) -> Self {
        Self::new().alpha(alpha).beta(beta)
    }

    pub fn alpha(mut self, alpha: u32) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn beta(mut self, beta: u32) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn parity(mut self, parity: GapParity) -> Self {
        self.gap_parity = parity;
        self
    }

    pub fn min_size(mut self, min_size: u32) -> Self {
        self.min_size = min_size;
        self
    }

    pub fn forced_max(mut self, max: u32) -> Self {
        self.forced_max = Some(max);
        self
    }

    /// Checks the clause parameters against an ambient `{1, ..., n}`.
    pub fn validate(&self, n: u32) -> Result<()> {
        if self.alpha == Some(0) {
            return Err(Error::InvalidParameter("alpha must be >= 1".into()));
        }
        if self.beta == Some(0) {
            return Err(Error::InvalidParameter("beta must be >= 1".into()));
        }
        match self.forced_max {
            Some(0) => Err(Error::InvalidParameter("forced maximum must be >= 1".into())),
            Some(m) if m > n => Err(Error::InvalidParameter(format!(
                "forced maximum {m} exceeds n = {n}"
            ))),
            _ => Ok(()),
        }
    }

    /// Whether `s`, a subset of `{1, ..., n}`, satisfies every present clause.
    pub fn matches(&self, s: &Subset, n: u32) -> Result<bool> {
        self.validate(n)?;
        if let Some(&e) = s.elements().iter().find(|&&e| e > n) {
            return Err(Error::ElementOutOfRange { element: e, n });
        }
        Ok(self.matches_unchecked(s))
    }

    fn matches_unchecked(&self, s: &Subset) -> bool {
        if (s.len() as u64) < u64::from(self.min_size) {
            return false;
        }
        if let Some(m) = self.forced_max {
            if s.max() != Some(m) {
                return false;
            }
        }
        if let Some(alpha) = self.alpha {
            if !s.is_alpha_schreier(alpha) {
                return false;
            }
        }
        if let Some(beta) = self.beta {
            if !s.is_beta_zeckendorf(beta) {
                return false;
            }
        }
        s.difference_set().satisfies(self.gap_parity)
    }

    /// Same predicate as [`Condition::matches`], evaluated directly on a
    /// characteristic vector. Assumes the condition was validated.
    fn matches_mask(&self, mask: u64) -> bool {
        let size = mask.count_ones();
        if size < self.min_size {
            return false;
        }
        if let Some(m) = self.forced_max {
            if mask == 0 || 64 - mask.leading_zeros() != m {
                return false;
            }
        }
        if mask == 0 {
            return true;
        }
        let min = mask.trailing_zeros() + 1;
        if let Some(alpha) = self.alpha {
            if u64::from(min) < u64::from(alpha) * u64::from(size) {
                return false;
            }
        }
        if self.beta.is_none() && self.gap_parity == GapParity::Any {
            return true;
        }
        let beta = self.beta.unwrap_or(1);
        let mut prev = min;
        let mut rest = mask & (mask - 1);
        while rest != 0 {
            let e = rest.trailing_zeros() + 1;
            let gap = e - prev;
            if gap < beta || !self.gap_parity.accepts(gap) {
                return false;
            }
            prev = e;
            rest &= rest - 1;
        }
        true
    }
}

/// Exhaustive 2^n enumeration, the ground truth for every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    limit: u32,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { limit: DEFAULT_ENUM_LIMIT }
    }
}

// Below this many low bits a count runs sequentially.
const CHUNK_BITS: u32 = 14;

impl Oracle {
    pub fn new(limit: u32) -> Result<Self> {
        if limit > MAX_ENUM_LIMIT {
            return Err(Error::InvalidParameter(format!(
                "enumeration limit {limit} exceeds the maximum of {MAX_ENUM_LIMIT}"
            )));
        }
        Ok(Oracle { limit })
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    fn check(&self, n: u32, c: &Condition) -> Result<()> {
        if n > self.limit {
            return Err(Error::EnumerationLimit { n, limit: self.limit });
        }
        c.validate(n)
    }

    /// Number of subsets of `{1, ..., n}` matching `c`.
    ///
    /// Large spaces are split on their high bits and the partial counts summed
    /// in parallel; the result is identical to [`Oracle::count_sequential`].
    pub fn count(&self, n: u32, c: &Condition) -> Result<BigCount> {
        self.check(n, c)?;
        if n <= CHUNK_BITS {
            return Ok(count_range(c, 0, 1u64 << n).into());
        }
        let chunks = 1u64 << (n - CHUNK_BITS);
        let total: u64 = (0..chunks)
            .into_par_iter()
            .map(|hi| {
                let base = hi << CHUNK_BITS;
                count_range(c, base, base + (1u64 << CHUNK_BITS))
            })
            .sum();
        Ok(total.into())
    }

    pub fn count_sequential(&self, n: u32, c: &Condition) -> Result<BigCount> {
        self.check(n, c)?;
        Ok(count_range(c, 0, 1u64 << n).into())
    }

    /// Matching subsets in increasing order of characteristic vector.
    pub fn enumerate(
        &self,
        n: u32,
        c: &Condition,
    ) -> Result<impl Iterator<Item = Subset> + 'static> {
        self.check(n, c)?;
        let c = *c;
        Ok((0..1u64 << n)
            .filter(move |&mask| c.matches_mask(mask))
            .map(Subset::from_mask))
    }
}

fn count_range(c: &Condition, start: u64, end: u64) -> u64 {
    (start..end).filter(|&mask| c.matches_mask(mask)).count() as u64
}

/// [`Oracle::count`] with the default limit.
pub fn count_subsets(n: u32, c: &Condition) -> Result<BigCount> {
    Oracle::default().count(n, c)
}

/// [`Oracle::enumerate`] with the default limit, collected.
pub fn enumerate_subsets(n: u32, c: &Condition) -> Result<Vec<Subset>> {
    Ok(Oracle::default().enumerate(n, c)?.collect())
}
