use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::forms::MultiIndex;

/// Errors raised by the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("{0} is not a prime in [2, 2^31-1]")]
    NotPrime(u64),
    #[error("PrimeMismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("ArityMismatch: {0} vs {1} variables")]
    ArityMismatch(usize, usize),
    #[error("IndexOutOfRange: variable {} with {nvars} variables", .index + 1)]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("InvalidMultiIndex: {0:?} is not strictly increasing")]
    InvalidMultiIndex(Vec<usize>),
    #[error("DegreeOverflow: degree {degree} in z{} exceeds the cap {cap}", .var + 1)]
    DegreeOverflow { var: usize, degree: u64, cap: u32 },
    #[error("ObstructedAntiderivative: monomial {} has z{}-exponent = p-1 mod p", monomial(.exponents), .var + 1)]
    ObstructedAntiderivative { var: usize, exponents: Vec<u32> },
    #[error("NotPthPower: monomial {} has an exponent not divisible by p", monomial(.exponents))]
    NotPthPower { exponents: Vec<u32> },
    #[error("ZeroDenominator")]
    ZeroDenominator,
    #[error("NotClosed: d(form) is nonzero at I={0}")]
    NotClosed(MultiIndex),
    #[error("NotPClosed at I={0}")]
    NotPClosed(MultiIndex),
    #[error("NonPolynomial: coefficient at I={0} has a nonconstant denominator")]
    NonPolynomial(MultiIndex),
    #[error("DegreeZero: operation needs a form of degree >= 1")]
    DegreeZero,
    #[error("DegreeMismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("InternalResidual: integration left a nonzero remainder at I={0}")]
    InternalResidual(MultiIndex),
    #[error("SystemTooLarge: {unknowns} unknowns exceeds the cap {cap}")]
    SystemTooLarge { unknowns: usize, cap: usize },
}

fn monomial(exponents: &[u32]) -> String {
    let mut out = String::new();
    for (i, &e) in exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        let _ = write!(out, "z{}", i + 1);
        if e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}
