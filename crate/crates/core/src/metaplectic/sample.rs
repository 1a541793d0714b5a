//! Random matrices for property checks and sweeps.

use rand::Rng;

use super::LocalMatrix;
use crate::algebra::{Field, LocalElem};

fn random_entry(k: &Field, rng: &mut impl Rng, vlo: i64, vhi: i64) -> LocalElem {
    if rng.gen_bool(0.2) {
        return LocalElem::zero(k);
    }
    let c: Vec<u32> = (0..3).map(|i| if i == 0 { rng.gen_range(1..k.order()) } else { rng.gen_range(0..k.order()) }).collect();
    LocalElem::from_coeffs(k, &c, rng.gen_range(vlo..=vhi))
}

/// A random invertible matrix with entries of valuation in [-2, 2].
pub fn random_matrix(k: &Field, r: usize, rng: &mut impl Rng) -> LocalMatrix {
    loop {
        let m = LocalMatrix::from_fn(r, |_, _| random_entry(k, rng, -2, 2));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// A random element of GL_r(O).
pub fn random_integral(k: &Field, r: usize, rng: &mut impl Rng) -> LocalMatrix {
    loop {
        let m = LocalMatrix::from_fn(r, |_, _| random_entry(k, rng, 0, 2));
        if m.is_gl_o() {
            return m;
        }
    }
}
