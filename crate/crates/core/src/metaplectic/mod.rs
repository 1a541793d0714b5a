//! Bruhat decomposition, the tame Kazhdan-Patterson cocycle chi and the
//! splitting function kappa on GL_r(O_v).

pub mod bruhat;
pub mod cocycle;
pub mod kappa;
pub mod matrix;
pub mod sample;

pub use bruhat::{bruhat, bruhat_minors, principal_minors, BruhatData, MinorBruhat};
pub use cocycle::{chi, LeftCell};
pub use kappa::{infinity_sign, kappa_general, kappa_kubota, kappa_place_product, kappa_poly, KappaValue};
pub use matrix::LocalMatrix;

use std::fmt;

use crate::algebra::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MetaError {
    Singular,
    NotIntegral,
    VanishingMinor,
    Dimension(usize),
    Algebra(AlgebraError),
}

impl fmt::Display for MetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetaError::Singular => write!(f, "matrix is singular"),
            MetaError::NotIntegral => write!(f, "matrix is not in GL_r(O)"),
            MetaError::VanishingMinor => write!(f, "a leading principal minor vanishes"),
            MetaError::Dimension(r) => write!(f, "unsupported matrix size {r}"),
            MetaError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for MetaError {}

impl From<AlgebraError> for MetaError {
    fn from(e: AlgebraError) -> Self {
        MetaError::Algebra(e)
    }
}
