//! Exact and high-precision computation of the polynomials `α_k(s)` defined by
//! the Taylor expansion of `(-log(1-t)/t)^(s-1)`, together with the series
//! they produce for `Γ(s)`, `Γ(s)ζ(s)`, `Γ(s)ζ(s-λ)` and `Γ(s)ζ(s+1)`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod alpha;
pub mod combinatorics;
pub mod exact;
mod fixed;
pub mod hp;
pub mod oracle;
pub mod series;
pub mod special_values;

pub use alpha::{build_alpha_prime, build_alpha_table, AlphaPrimeTable, AlphaSequence, AlphaTable};
pub use exact::{format_rational, parse_rational, BigInt, BigRational, ExactError, RationalPolynomial};
pub use hp::HPComplex;
pub use series::{Evaluator, Identity, SeriesConfig, SeriesError, SeriesResult};
