//! Exact counting of subsets of `{1, ..., n}` under Schreier, minimum-gap and
//! gap-parity conditions, together with the integer sequences those counts form.
//!
//! The crate is organised bottom-up:
//!
//! - [`subset`]: the [`Subset`] type, its predicates and the exhaustive
//!   enumeration [`Oracle`] every formula is checked against.
//! - [`recurrences`]: closed forms, piecewise recurrences, partial sums and the
//!   minimum-size dynamic program, all producing [`SequenceWindow`]s.
//! - [`fasteval`]: n-th term evaluation of constant-coefficient linear
//!   recurrences, exact or modular.
//! - [`discovery`]: Berlekamp-Massey over the rationals and recurrence
//!   verification.
//! - [`identities`]: range checks for the identities, the bijection between the
//!   max-n family and the shifted family, and the odd/even convergence report.

pub mod discovery;
pub mod error;
pub mod fasteval;
pub mod identities;
pub mod recurrences;
pub mod sequence;
pub mod subset;

pub use error::{Error, Result};
pub use sequence::{SequenceId, SequenceWindow};
pub use subset::{Condition, GapParity, Oracle, Subset};

/// Exact nonnegative count. Never saturates.
pub type BigCount = num_bigint::BigUint;
