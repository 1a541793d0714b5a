//! Exact arithmetic: finite fields, polynomials, rational functions, local
//! elements at places of k(x), and the cyclotomic value field.

pub mod cyclo;
pub mod gf;
pub mod local;
pub mod poly;
pub mod ratfunc;

pub use cyclo::{CycloAcc, CycloValue};
pub use gf::{Embedding, Field, FieldElem};
pub use local::{Completion, LocalElem, Place};
pub use poly::{resultant, Poly};
pub use ratfunc::RatFunc;

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraError {
    FieldMismatch,
    DivisionByZero,
    ZeroPolynomial,
    BadCharacteristic(u32),
    BadDegree(u32),
    BadModulus,
    FieldTooLarge(u64),
    NotIrreducible,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::FieldMismatch => write!(f, "operands live in different fields"),
            AlgebraError::DivisionByZero => write!(f, "division by zero"),
            AlgebraError::ZeroPolynomial => write!(f, "zero polynomial where a nonzero one is required"),
            AlgebraError::BadCharacteristic(p) => write!(f, "{p} is not an odd prime"),
            AlgebraError::BadDegree(m) => write!(f, "no field of degree {m}"),
            AlgebraError::BadModulus => write!(f, "modulus is not monic irreducible"),
            AlgebraError::FieldTooLarge(q) => write!(f, "field of order {q} is too large to tabulate"),
            AlgebraError::NotIrreducible => write!(f, "place polynomial is not irreducible"),
        }
    }
}

impl std::error::Error for AlgebraError {}
