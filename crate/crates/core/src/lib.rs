//! Exact differential forms over the prime field `F_p`.
//!
//! The crate models polynomial and rational differential forms in `n`
//! variables over a field of characteristic `p` and provides the operations
//! that decide and construct exactness in that setting:
//!
//! * [`operators::is_p_closed`] decides exactness without solving anything,
//! * [`poincare::integrate`] builds a potential `η` with `dη = ω`,
//! * [`operators::split_rational_irrational`] separates a closed form into
//!   an exact part and its cohomology representative,
//! * [`cartier::cartier`] and [`cartier::gamma0`] are the Cartier operator
//!   and its inverse on representatives.
//!
//! Everything here is `no_std` + `alloc`; parsing, printing to JSON and the
//! command-line front end live in the `pforms` crate.
//!
//! Variable indices are zero-based in the API (`0` is `z1`); every
//! `Display` implementation prints them one-based.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cartier;
pub mod error;
pub mod forms;
pub mod linsolve;
pub mod operators;
pub mod poincare;
pub mod poly;
pub mod random;
pub mod ratfun;
pub mod scalar;

pub use error::Error;
pub use forms::{Coefficient, DiffForm, MultiIndex, PolyForm, RatForm};
pub use poly::{Exponents, MultiPoly, Ring};
pub use ratfun::RatFun;
pub use scalar::{Prime, Scalar};
