//! n-th term evaluation for homogeneous linear recurrences with constant
//! integer coefficients.
//!
//! Indices are absolute: a recurrence carries the index of its first initial
//! term, and callers ask for the term at a sequence-native index.
//!
//! Three evaluators share one contract: [`eval_iterative`] steps the recurrence
//! forward, [`eval_fast`] reduces `x^(n - start)` modulo the characteristic
//! polynomial, and [`FastPath::Matrix`] raises the companion matrix to a power.
//! All arithmetic is exact big-integer or modular; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::recurrences::generate;
use crate::{Error, Result, SequenceId};

/// `a(n) = coeffs[0] * a(n-1) + ... + coeffs[k-1] * a(n-k)` for every
/// `n >= valid_from + k`, seeded with `initials` at `valid_from..valid_from+k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRecurrence {
    coeffs: Vec<BigInt>,
    initials: Vec<BigInt>,
    valid_from: i64,
}

impl LinearRecurrence {
    /// Requires matching nonzero lengths and a nonzero last coefficient.
    pub fn new(coeffs: Vec<BigInt>, initials: Vec<BigInt>, valid_from: i64) -> Result<Self> {
        let r = Self::with_possible_zero_tail(coeffs, initials, valid_from)?;
        if r.coeffs.last().is_some_and(Zero::is_zero) {
            return Err(Error::InvalidParameter(
                "last recurrence coefficient must be nonzero".into(),
            ));
        }
        Ok(r)
    }

    /// Like [`LinearRecurrence::new`] but admits a zero last coefficient, as
    /// produced by recurrence discovery on sequences with a transient head.
    pub fn with_possible_zero_tail(
        coeffs: Vec<BigInt>,
        initials: Vec<BigInt>,
        valid_from: i64,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("recurrence order must be >= 1".into()));
        }
        if coeffs.len() != initials.len() {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients but {} initial terms",
                coeffs.len(),
                initials.len()
            )));
        }
        Ok(LinearRecurrence { coeffs, initials, valid_from })
    }

    pub fn from_i64(coeffs: &[i64], initials: &[i64], valid_from: i64) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| c.into()).collect(),
            initials.iter().map(|&c| c.into()).collect(),
            valid_from,
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn initials(&self) -> &[BigInt] {
        &self.initials
    }

    pub fn valid_from(&self) -> i64 {
        self.valid_from
    }

    fn steps_to(&self, n: i64) -> Result<u64> {
        if n < self.valid_from {
            return Err(Error::IndexBelowStart { index: n, valid_from: self.valid_from });
        }
        Ok(n.abs_diff(self.valid_from))
    }
}

/// Exact big-integer arithmetic, or reduction modulo `modulus >= 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalMode {
    modulus: Option<u64>,
}

impl EvalMode {
    pub fn exact() -> Self {
        EvalMode { modulus: None }
    }

    pub fn modular(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidParameter(format!("modulus must be >= 2, got {modulus}")));
        }
        Ok(EvalMode { modulus: Some(modulus) })
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }
}

/// Which fast evaluator to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum FastPath {
    /// `x^(n - start)` modulo the characteristic polynomial, O(k^2 log n).
    #[default]
    CharPoly,
    /// Power of the k-by-k companion matrix, O(k^3 log n).
    Matrix,
}

trait Ring {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn one(&self) -> Self::T;
    fn is_zero(&self, a: &Self::T) -> bool;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn lift(&self, v: &BigInt) -> Self::T;
    fn lower(&self, v: Self::T) -> BigInt;
}

struct Exact;

impl Ring for Exact {
    type T = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn lift(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn lower(&self, v: BigInt) -> BigInt {
        v
    }
}

struct Modular(u64);

impl Ring for Modular {
    type T = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((u128::from(*a) + u128::from(*b)) % u128::from(self.0)) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (u128::from(*a) * u128::from(*b) % u128::from(self.0)) as u64
    }
    fn lift(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.0)).to_u64().expect("residue fits the modulus")
    }
    fn lower(&self, v: u64) -> BigInt {
        v.into()
    }
}

fn dispatch<F>(mode: EvalMode, f: F) -> BigInt
where
    F: RingFn,
{
    match mode.modulus {
        None => f.call(&Exact),
        Some(m) => f.call(&Modular(m)),
    }
}

// Generic closures are not expressible directly, so each evaluator is a small
// struct implementing this.
trait RingFn {
    fn call<R: Ring>(&self, ring: &R) -> BigInt;
}

/// Term at index `n` by stepping the recurrence forward from its initials.
pub fn eval_iterative(r: &LinearRecurrence, n: i64, mode: EvalMode) -> Result<BigInt> {
    let steps = r.steps_to(n)?;
    Ok(dispatch(mode, Iterative { r, steps }))
}

struct Iterative<'a> {
    r: &'a LinearRecurrence,
    steps: u64,
}

impl RingFn for Iterative<'_> {
    fn call<R: Ring>(&self, ring: &R) -> BigInt {
        let k = self.r.order();
        let mut window: Vec<R::T> = self.r.initials.iter().map(|v| ring.lift(v)).collect();
        if self.steps < k as u64 {
            return ring.lower(window.swap_remove(self.steps as usize));
        }
        // (lag, coefficient) for the nonzero coefficients only
        let taps: Vec<(usize, R::T)> = self
            .r
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (i + 1, ring.lift(c)))
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        // window is a ring buffer; `head` is the slot of the oldest term
        let mut head = 0usize;
        for _ in 0..=(self.steps - k as u64) {
            let mut next = ring.zero();
            for (lag, c) in &taps {
                let term = &window[(head + k - lag) % k];
                next = ring.add(&next, &ring.mul(c, term));
            }
            window[head] = next;
            head = (head + 1) % k;
        }
        let newest = (head + k - 1) % k;
        ring.lower(window.swap_remove(newest))
    }
}

/// Term at index `n` via the default fast path.
pub fn eval_fast(r: &LinearRecurrence, n: i64, mode: EvalMode) -> Result<BigInt> {
    eval_fast_with(r, n, mode, FastPath::default())
}

pub fn eval_fast_with(
    r: &LinearRecurrence,
    n: i64,
    mode: EvalMode,
    path: FastPath,
) -> Result<BigInt> {
    let steps = r.steps_to(n)?;
    Ok(match path {
        FastPath::CharPoly => dispatch(mode, CharPoly { r, steps }),
        FastPath::Matrix => dispatch(mode, Companion { r, steps }),
    })
}

struct CharPoly<'a> {
    r: &'a LinearRecurrence,
    steps: u64,
}

impl CharPoly<'_> {
    /// Reduces a polynomial (low degree first) using `x^k = sum c_i x^(k-i)`.
    fn reduce<R: Ring>(ring: &R, coeffs: &[R::T], mut p: Vec<R::T>) -> Vec<R::T> {
        let k = coeffs.len();
        for d in (k..p.len()).rev() {
            let top = std::mem::replace(&mut p[d], ring.zero());
            if ring.is_zero(&top) {
                continue;
            }
            for (i, c) in coeffs.iter().enumerate() {
                let slot = d - i - 1;
                p[slot] = ring.add(&p[slot], &ring.mul(c, &top));
            }
        }
        p.truncate(k);
        p.resize(k, ring.zero());
        p
    }

    fn square<R: Ring>(ring: &R, coeffs: &[R::T], a: &[R::T]) -> Vec<R::T> {
        let mut p = vec![ring.zero(); 2 * a.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if ring.is_zero(x) {
                continue;
            }
            for (j, y) in a.iter().enumerate() {
                p[i + j] = ring.add(&p[i + j], &ring.mul(x, y));
            }
        }
        Self::reduce(ring, coeffs, p)
    }

    fn times_x<R: Ring>(ring: &R, coeffs: &[R::T], a: Vec<R::T>) -> Vec<R::T> {
        let mut p = Vec::with_capacity(a.len() + 1);
        p.push(ring.zero());
        p.extend(a);
        Self::reduce(ring, coeffs, p)
    }
}

impl RingFn for CharPoly<'_> {
    fn call<R: Ring>(&self, ring: &R) -> BigInt {
        let k = self.r.order();
        let coeffs: Vec<R::T> = self.r.coeffs.iter().map(|c| ring.lift(c)).collect();
        let mut acc = vec![ring.zero(); k];
        acc[0] = ring.one();
        for bit in (0..64 - self.steps.leading_zeros()).rev() {
            acc = Self::square(ring, &coeffs, &acc);
            if (self.steps >> bit) & 1 == 1 {
                acc = Self::times_x(ring, &coeffs, acc);
            }
        }
        let value = acc
            .iter()
            .zip(&self.r.initials)
            .fold(ring.zero(), |sum, (x, init)| ring.add(&sum, &ring.mul(x, &ring.lift(init))));
        ring.lower(value)
    }
}

struct Companion<'a> {
    r: &'a LinearRecurrence,
    steps: u64,
}

type Matrix<T> = Vec<Vec<T>>;

fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::T>, b: &Matrix<R::T>) -> Matrix<R::T> {
    let k = a.len();
    let mut out = vec![vec![ring.zero(); k]; k];
    for i in 0..k {
        for l in 0..k {
            if ring.is_zero(&a[i][l]) {
                continue;
            }
            for j in 0..k {
                out[i][j] = ring.add(&out[i][j], &ring.mul(&a[i][l], &b[l][j]));
            }
        }
    }
    out
}

impl RingFn for Companion<'_> {
    fn call<R: Ring>(&self, ring: &R) -> BigInt {
        let k = self.r.order();
        // Maps state (a(m), ..., a(m+k-1)) to (a(m+1), ..., a(m+k)).
        let mut step = vec![vec![ring.zero(); k]; k];
        for (i, row) in step.iter_mut().enumerate().take(k - 1) {
            row[i + 1] = ring.one();
        }
        for (i, c) in self.r.coeffs.iter().enumerate() {
            step[k - 1][k - 1 - i] = ring.lift(c);
        }
        let mut power: Matrix<R::T> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
            .collect();
        let mut e = self.steps;
        while e > 0 {
            if e & 1 == 1 {
                power = mat_mul(ring, &power, &step);
            }
            step = mat_mul(ring, &step, &step);
            e >>= 1;
        }
        let value = power[0]
            .iter()
            .zip(&self.r.initials)
            .fold(ring.zero(), |sum, (x, init)| ring.add(&sum, &ring.mul(x, &ring.lift(init))));
        ring.lower(value)
    }
}

/// Coefficients of the recurrence satisfied by the running sums of any
/// sequence satisfying `coeffs`: the characteristic polynomial times `x - 1`.
pub fn partial_sum_coeffs(coeffs: &[BigInt]) -> Vec<BigInt> {
    let k = coeffs.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let cur = coeffs.get(i).cloned().unwrap_or_default();
        let prev = if i == 0 { BigInt::from(-1) } else { coeffs[i - 1].clone() };
        out.push(cur - prev);
    }
    out
}

/// The homogeneous recurrence a catalog family satisfies, with initials taken
/// from the family's own generator so that every index at or beyond
/// `valid_from + order` obeys it.
pub fn tail_recurrence_of(family: &SequenceId) -> Result<LinearRecurrence> {
    let ints = |v: &[i64]| v.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>();
    let lag_one_and = |k: usize| {
        let mut c = vec![BigInt::zero(); k];
        c[0] += 1;
        c[k - 1] += 1;
        c
    };
    let fib = ints(&[1, 1]);
    let (coeffs, valid_from) = match family {
        SequenceId::SchreierZeckendorf { alpha, beta } => {
            if *alpha == 0 || *beta == 0 {
                return Err(Error::InvalidParameter("alpha and beta must be >= 1".into()));
            }
            (lag_one_and((alpha + beta) as usize), i64::from(*alpha))
        }
        SequenceId::Fibonacci => (fib, 0),
        SequenceId::H => (partial_sum_coeffs(&partial_sum_coeffs(&fib)), 0),
        SequenceId::GenFib { n } | SequenceId::GenK { n } | SequenceId::GenH { n } => {
            if *n < 2 {
                return Err(Error::InvalidParameter("generalized order must be >= 2".into()));
            }
            let base = lag_one_and(*n as usize);
            let coeffs = match family {
                SequenceId::GenFib { .. } => base,
                SequenceId::GenK { .. } => partial_sum_coeffs(&base),
                _ => partial_sum_coeffs(&partial_sum_coeffs(&base)),
            };
            (coeffs, 0)
        }
        SequenceId::OddGapContain => (fib, 1),
        SequenceId::OddGapTotal | SequenceId::MinSizeOddGap { k: 0 | 1 } => {
            (partial_sum_coeffs(&fib), 1)
        }
        SequenceId::MinSizeOddGap { k: 2 } => (partial_sum_coeffs(&partial_sum_coeffs(&fib)), 1),
        SequenceId::EvenGapContain => (ints(&[0, 2]), 1),
        SequenceId::EvenGapTotal => (ints(&[1, 2, -2]), 1),
        SequenceId::MinSizeOddGap { .. } | SequenceId::Custom(_) => {
            return Err(Error::UnknownFamily(family.to_string()));
        }
    };
    let last = valid_from + coeffs.len() as i64 - 1;
    let window = generate(family, last)?;
    let initials = (valid_from..=last)
        .map(|i| window.get(i).cloned().map(BigInt::from))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::UnknownFamily(family.to_string()))?;
    LinearRecurrence::new(coeffs, initials, valid_from)
}
