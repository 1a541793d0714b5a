//! Exact orbital sums for the metaplectic fundamental lemma over k(x), k a
//! finite field of odd characteristic, with every ingredient they need.

pub mod algebra;
pub mod symbols;
pub mod metaplectic;
pub mod orbital;
pub mod global;
pub mod cli;
