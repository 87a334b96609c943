//! Generators for every counted family: piecewise recurrences, closed forms,
//! the partial-sum operator, and a dynamic program for odd-gap subsets with a
//! minimum size.

use num_traits::{One, Zero};

use crate::{BigCount, Error, Result, SequenceId, SequenceWindow};

/// Schreier/minimum-gap counts `a(n)` for `n = 1..=n_max`.
///
/// `a(n) = 1` for `n < alpha`, `n - alpha + 2` up to `n = 2*alpha + beta - 1`,
/// and `a(n-1) + a(n - alpha - beta)` afterwards.
pub fn schreier_zeckendorf_seq(alpha: u32, beta: u32, n_max: u32) -> Result<SequenceWindow> {
    if alpha == 0 || beta == 0 {
        return Err(Error::InvalidParameter("alpha and beta must be >= 1".into()));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    let (a, b) = (alpha as usize, beta as usize);
    let mut terms: Vec<BigCount> = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max as usize {
        let term = if n < a {
            BigCount::one()
        } else if n < 2 * a + b {
            BigCount::from(n - a + 2)
        } else {
            // terms[i] holds a(i + 1)
            &terms[n - 2] + &terms[n - a - b - 1]
        };
        terms.push(term);
    }
    Ok(SequenceWindow::new(SequenceId::SchreierZeckendorf { alpha, beta }, 1, terms))
}

/// `F(n)` with `F(0) = 0`, `F(1) = 1`, by fast doubling.
pub fn fibonacci(n: u64) -> BigCount {
    // (F(k), F(k+1)) for k = prefix of n's bits
    let mut a = BigCount::zero();
    let mut b = BigCount::one();
    for bit in (0..64 - n.leading_zeros()).rev() {
        let two_b = &b << 1usize;
        let c = &a * (two_b - &a);
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    a
}

/// `F(0..=n_max)`.
pub fn fibonacci_seq(n_max: u32) -> SequenceWindow {
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    let (mut a, mut b) = (BigCount::zero(), BigCount::one());
    for _ in 0..=n_max {
        let next = &a + &b;
        terms.push(std::mem::replace(&mut a, std::mem::replace(&mut b, next)));
    }
    SequenceWindow::new(SequenceId::Fibonacci, 0, terms)
}

/// Running sums from the window's first index, same offset.
pub fn partial_sum(w: &SequenceWindow) -> SequenceWindow {
    let mut acc = BigCount::zero();
    let terms = w
        .terms
        .iter()
        .map(|t| {
            acc += t;
            acc.clone()
        })
        .collect();
    let id = match &w.id {
        SequenceId::GenFib { n } => SequenceId::GenK { n: *n },
        SequenceId::GenK { n } => SequenceId::GenH { n: *n },
        other => SequenceId::Custom(format!("psum({other})")),
    };
    SequenceWindow::new(id, w.offset, terms)
}

/// `H(0..=n_max)`: Fibonacci summed twice, built from running prefix sums.
pub fn h_seq(n_max: u32) -> SequenceWindow {
    let mut terms = Vec::with_capacity(n_max as usize + 1);
    let (mut f, mut f_next) = (BigCount::zero(), BigCount::one());
    let mut once = BigCount::zero();
    let mut twice = BigCount::zero();
    for _ in 0..=n_max {
        once += &f;
        twice += &once;
        terms.push(twice.clone());
        let next = &f + &f_next;
        f = std::mem::replace(&mut f_next, next);
    }
    SequenceWindow::new(SequenceId::H, 0, terms)
}

/// `F(n, 0..=m_max)`: a zero, `n` ones, then `F(n,m) = F(n,m-1) + F(n,m-n)`.
pub fn gen_fib_seq(n: u32, m_max: u32) -> Result<SequenceWindow> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "generalized Fibonacci order must be >= 2, got {n}"
        )));
    }
    let n = n as usize;
    let mut terms: Vec<BigCount> = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max as usize {
        let term = match m {
            0 => BigCount::zero(),
            m if m <= n => BigCount::one(),
            m => &terms[m - 1] + &terms[m - n],
        };
        terms.push(term);
    }
    Ok(SequenceWindow::new(SequenceId::GenFib { n: n as u32 }, 0, terms))
}

/// `K(n, 0..=m_max)`, one partial sum of [`gen_fib_seq`].
pub fn gen_k_seq(n: u32, m_max: u32) -> Result<SequenceWindow> {
    Ok(partial_sum(&gen_fib_seq(n, m_max)?))
}

/// `H(n, 0..=m_max)`, two partial sums of [`gen_fib_seq`].
pub fn gen_h_seq(n: u32, m_max: u32) -> Result<SequenceWindow> {
    Ok(partial_sum(&gen_k_seq(n, m_max)?))
}

/// Odd-gap subsets of `{1..n}`: `(containing n, all)` = `(F(n+1), F(n+3) - 1)`.
pub fn odd_gap_counts(n: u32) -> Result<(BigCount, BigCount)> {
    require_positive(n)?;
    let n = u64::from(n);
    Ok((fibonacci(n + 1), fibonacci(n + 3) - 1u32))
}

/// Even-gap subsets of `{1..n}`: `(containing n, all)`.
///
/// The first is `2^floor((n-1)/2)`; the second is `3 * 2^((n-1)/2) - 1` for
/// odd `n` and `2 * 2^(n/2) - 1` for even `n`.
pub fn even_gap_counts(n: u32) -> Result<(BigCount, BigCount)> {
    require_positive(n)?;
    let contain = BigCount::one() << ((n - 1) / 2);
    let total = if n % 2 == 1 {
        (BigCount::from(3u32) << ((n - 1) / 2)) - 1u32
    } else {
        (BigCount::from(2u32) << (n / 2)) - 1u32
    };
    Ok((contain, total))
}

fn require_positive(n: u32) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("n must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Number of subsets of `{1..n}` with at least `k` elements and only odd gaps.
pub fn min_size_odd_gap_count(n: u32, k: u32) -> BigCount {
    let seq = min_size_odd_gap_dp(n, k);
    seq.last().cloned().unwrap_or_else(|| if k == 0 { BigCount::one() } else { BigCount::zero() })
}

/// The same counts for every `n = 1..=n_max`, offset 1.
pub fn min_size_odd_gap_seq(k: u32, n_max: u32) -> SequenceWindow {
    SequenceWindow::new(SequenceId::MinSizeOddGap { k }, 1, min_size_odd_gap_dp(n_max, k))
}

/// Counts subsets by their maximum `j` and size `t`, with sizes at or above
/// `max(k, 1)` merged into one bucket. A subset with maximum `j` extends one
/// with maximum `j'` exactly when `j - j'` is odd, i.e. when the parities
/// differ, so per-parity prefix sums over `j' < j` give each row in O(k).
fn min_size_odd_gap_dp(n_max: u32, k: u32) -> Vec<BigCount> {
    let cap = k.max(1) as usize;
    // prefix[p][t - 1]: subsets of size bucket t whose maximum has parity p
    let mut prefix = [vec![BigCount::zero(); cap], vec![BigCount::zero(); cap]];
    let mut running = if k == 0 { BigCount::one() } else { BigCount::zero() };
    let mut out = Vec::with_capacity(n_max as usize);
    for j in 1..=n_max as usize {
        let parity = j % 2;
        let opposite = &prefix[1 - parity];
        let mut row = vec![BigCount::zero(); cap];
        row[0] += 1u32;
        for (t, v) in opposite.iter().enumerate() {
            row[(t + 1).min(cap - 1)] += v;
        }
        running += &row[cap - 1];
        for (acc, v) in prefix[parity].iter_mut().zip(row) {
            *acc += v;
        }
        out.push(running.clone());
    }
    out
}

/// Terms of a catalog family from its natural offset through index `to`.
pub fn generate(id: &SequenceId, to: i64) -> Result<SequenceWindow> {
    let offset = id.natural_offset();
    if to < offset {
        return Ok(SequenceWindow::new(id.clone(), offset, Vec::new()));
    }
    let to = u32::try_from(to)
        .map_err(|_| Error::InvalidParameter(format!("index {to} is too large")))?;
    let per_n = |f: fn(u32) -> Result<(BigCount, BigCount)>, second: bool| {
        (1..=to)
            .map(|n| f(n).map(|(c, t)| if second { t } else { c }))
            .collect::<Result<Vec<_>>>()
            .map(|terms| SequenceWindow::new(id.clone(), 1, terms))
    };
    match id {
        SequenceId::SchreierZeckendorf { alpha, beta } => schreier_zeckendorf_seq(*alpha, *beta, to),
        SequenceId::Fibonacci => Ok(fibonacci_seq(to)),
        SequenceId::H => Ok(h_seq(to)),
        SequenceId::GenFib { n } => gen_fib_seq(*n, to),
        SequenceId::GenK { n } => gen_k_seq(*n, to),
        SequenceId::GenH { n } => gen_h_seq(*n, to),
        SequenceId::OddGapContain => per_n(odd_gap_counts, false),
        SequenceId::OddGapTotal => per_n(odd_gap_counts, true),
        SequenceId::EvenGapContain => per_n(even_gap_counts, false),
        SequenceId::EvenGapTotal => per_n(even_gap_counts, true),
        SequenceId::MinSizeOddGap { k } => Ok(min_size_odd_gap_seq(*k, to)),
        SequenceId::Custom(name) => Err(Error::UnknownFamily(name.clone())),
    }
}
