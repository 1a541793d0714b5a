//! Quadratic character, tame and Hilbert symbols, Weil constants.

use std::fmt;

use crate::algebra::{poly, AlgebraError, Completion, CycloAcc, CycloValue, Field, LocalElem, Place, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymbolError {
    ZeroArgument,
    TrivialCharacter,
    NoStabilization { levels: u32 },
    Algebra(AlgebraError),
}

impl fmt::Display for SymbolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolError::ZeroArgument => write!(f, "symbol of a zero argument"),
            SymbolError::TrivialCharacter => write!(f, "additive character is trivial"),
            SymbolError::NoStabilization { levels } => write!(f, "Gauss sum did not stabilize within {levels} levels"),
            SymbolError::Algebra(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SymbolError {}

impl From<AlgebraError> for SymbolError {
    fn from(e: AlgebraError) -> Self {
        SymbolError::Algebra(e)
    }
}

/// zeta(x) = x^{(q-1)/2} in {1, -1}, extended by zeta(0) = 0.
pub fn zeta_char(f: &Field, x: u32) -> i32 {
    f.quadratic_character(x)
}

pub fn zeta_value(f: &Field, x: u32) -> CycloValue {
    CycloValue::from_sign(f.p(), zeta_char(f, x))
}

/// {f, g} = (-1)^{v(f)v(g)} (f^{v(g)} / g^{v(f)})(0), a nonzero residue-field element.
pub fn tame_symbol(f: &LocalElem, g: &LocalElem) -> Result<u32, SymbolError> {
    let (vf, vg) = match (f.valuation(), g.valuation()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(SymbolError::ZeroArgument),
    };
    let k = f.field();
    let mut s = k.mul(k.pow(f.angular(), vg), k.pow(g.angular(), -vf));
    if (vf * vg).rem_euclid(2) == 1 {
        s = k.neg(s);
    }
    Ok(s)
}

/// [a, b] = zeta(tame symbol), computed in the residue field of the place.
pub fn hilbert_symbol(a: &LocalElem, b: &LocalElem) -> Result<i32, SymbolError> {
    Ok(zeta_char(a.field(), tame_symbol(a, b)?))
}

/// Additive character x -> psi(Tr_{K/F_p} res(b x)) on a local field K((pi)).
#[derive(Clone, Debug)]
pub struct AdditiveChar {
    pub twist: LocalElem,
}

impl AdditiveChar {
    /// The character attached to x -> psi(Tr_{k_v/k} res_v(x dx)) at a completion.
    pub fn canonical(c: &Completion) -> AdditiveChar {
        AdditiveChar { twist: c.differential() }
    }
    /// Psi is trivial on pi^{conductor} O and not on pi^{conductor - 1} O.
    pub fn conductor(&self) -> i64 {
        -self.twist.valuation().expect("nonzero twist")
    }
}

#[derive(Clone, Debug)]
pub struct WeilConstant {
    pub value: CycloValue,
    pub place: Place,
    pub twist: LocalElem,
}

/// Upper bound on terms summed for a confirming level.
const CONFIRM_BUDGET: u64 = 3_000_000;

/// Exact Gauss sum sum_{x in pi^{c-J} O / pi^L O} Psi(a x^2 / 2), times the
/// normalization q^{(c + v(a))/2 - J}, for the given level J.
fn gamma_level(a: &LocalElem, ch: &AdditiveChar, j: i64) -> CycloValue {
    let k = a.field();
    let p = k.p();
    let m = k.degree();
    let c = ch.conductor();
    let va = a.valuation().expect("nonzero");
    let lo = c - j;
    let l = j - va;
    let n = (l - lo).max(0) as usize;
    // h = b a / 2; Q(x) = sum_{i,j} H[i+j] x_i x_j with H[s] the coefficient of pi^{-1-2 lo - s} in h
    let h = ch.twist.mul(a).scale(k.half());
    let top = -1 - 2 * lo;
    let span = (2 * n).max(1) as i64;
    let mut hc = h.laurent(top - span + 1, top + 1);
    hc.reverse();
    let q = k.order() as u64;
    let mut acc = CycloAcc::new(p);
    let mut x = vec![0u32; n];
    let total = q.pow(n as u32);
    for code in 0..total {
        let mut t = code;
        for xi in x.iter_mut() {
            *xi = (t % q) as u32;
            t /= q;
        }
        let mut s = 0u32;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for jj in 0..n {
                if x[jj] != 0 && hc[i + jj] != 0 {
                    s = k.add(s, k.mul(hc[i + jj], k.mul(x[i], x[jj])));
                }
            }
        }
        acc.add_zeta_p(k.abs_trace(s), 1);
    }
    acc.value().mul(&CycloValue::q_pow_half(p, m, c + va - 2 * j))
}

/// gamma(a, Psi) by stabilized Gauss sums, without square-class reduction.
pub fn weil_gamma_raw(a: &LocalElem, ch: &AdditiveChar, max_levels: u32) -> Result<CycloValue, SymbolError> {
    let va = a.valuation().ok_or(SymbolError::ZeroArgument)?;
    if ch.twist.is_zero() {
        return Err(SymbolError::TrivialCharacter);
    }
    let c = ch.conductor();
    let j0 = (c + va).div_euclid(2) + (c + va).rem_euclid(2);
    let q = a.field().order() as u64;
    let mut prev = gamma_level(a, ch, j0);
    for step in 1..=max_levels as i64 {
        let j = j0 + step;
        let terms = (q as f64).powi((2 * j - va - c) as i32);
        if terms > CONFIRM_BUDGET as f64 {
            // the level j0 is already exact; further levels only confirm it
            return Ok(prev);
        }
        let cur = gamma_level(a, ch, j);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(SymbolError::NoStabilization { levels: max_levels })
}

/// gamma(a, Psi) at a local field, reducing a to its square class
/// ang(a) pi^{v(a) mod 2} first (gamma(a b^2) = gamma(a)).
pub fn weil_gamma_with(a: &LocalElem, ch: &AdditiveChar) -> Result<CycloValue, SymbolError> {
    let va = a.valuation().ok_or(SymbolError::ZeroArgument)?;
    let k = a.field();
    let red = LocalElem::constant(k, a.angular()).mul_pi_pow(va.rem_euclid(2));
    weil_gamma_raw(&red, ch, 2)
}

/// gamma_v(a, Psi_v) for the canonical character at a completion.
pub fn weil_gamma(a: &LocalElem, c: &Completion) -> Result<WeilConstant, SymbolError> {
    let ch = AdditiveChar::canonical(c);
    let value = weil_gamma_with(a, &ch)?;
    Ok(WeilConstant { value, place: c.place.clone(), twist: ch.twist })
}

#[derive(Clone, Debug)]
pub struct WeilProduct {
    pub factors: Vec<(Place, CycloValue)>,
    pub product: CycloValue,
}

impl WeilProduct {
    pub fn holds(&self) -> bool {
        self.product.is_one()
    }
}

/// Product over all places of gamma_v(a, Psi_v) for a in k(x)^*.
pub fn weil_product_check(a: &RatFunc) -> Result<WeilProduct, SymbolError> {
    if a.is_zero() {
        return Err(SymbolError::ZeroArgument);
    }
    let k = a.field().clone();
    let mut places: Vec<Place> = vec![];
    for part in [a.num(), a.den()] {
        if part.deg() > 0 {
            for (pl, _) in poly::factor(part)? {
                places.push(Place::Finite(pl));
            }
        }
    }
    places.push(Place::Infinity);
    let mut product = CycloValue::one(k.p());
    let mut factors = vec![];
    for pl in places {
        let c = Completion::new(&k, &pl)?;
        let g = weil_gamma(&c.localize(a), &c)?.value;
        product = product.mul(&g);
        factors.push((pl, g));
    }
    Ok(WeilProduct { factors, product })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;
    use proptest::prelude::*;

    fn origin(p: u32) -> Completion {
        Completion::origin(&Field::new(p, 1).unwrap())
    }

    fn unit_times_pi(k: &Field, coeffs: &[u32], v: i64) -> LocalElem {
        LocalElem::from_poly(Poly::new(k, coeffs.to_vec())).mul_pi_pow(v)
    }

    #[test]
    fn zeta_examples() {
        let k = Field::new(3, 1).unwrap();
        assert_eq!(zeta_char(&k, 1), 1);
        assert_eq!(zeta_char(&k, 2), -1);
        assert_eq!(zeta_char(&k, 0), 0);
    }

    #[test]
    fn tame_examples() {
        let k = Field::new(3, 1).unwrap();
        let pi = LocalElem::pi_pow(&k, 1);
        assert_eq!(tame_symbol(&pi, &pi).unwrap(), 2);
        let two = LocalElem::constant(&k, 2);
        assert_eq!(tame_symbol(&two, &pi).unwrap(), 2);
        let u = unit_times_pi(&k, &[2, 1], 0);
        let w = unit_times_pi(&k, &[1, 1, 2], 0);
        assert_eq!(tame_symbol(&u, &w).unwrap(), 1);
        assert_eq!(hilbert_symbol(&pi, &pi).unwrap(), -1);
        assert_eq!(tame_symbol(&LocalElem::zero(&k), &pi), Err(SymbolError::ZeroArgument));
    }

    #[test]
    fn gamma_inverse_uniformizer_gf3() {
        // gamma(pi^{-1}) = 3^{-1/2} sum_b psi(b/2) [b, pi]
        let c = origin(3);
        let k = &c.field;
        let g = weil_gamma(&LocalElem::pi_pow(k, -1), &c).unwrap().value;
        let mut s = CycloValue::zero(3);
        for b in k.units() {
            let sym = hilbert_symbol(&LocalElem::constant(k, b), &LocalElem::pi_pow(k, 1)).unwrap();
            s = s.add(&CycloValue::psi(k, k.mul(b, k.half())).scale(sym as i64));
        }
        assert_eq!(g, s.mul(&CycloValue::q_pow_half(3, 1, -1)));
    }

    #[test]
    fn product_formula_for_x() {
        let k = Field::new(3, 1).unwrap();
        let wp = weil_product_check(&RatFunc::from_poly(Poly::x(&k))).unwrap();
        assert!(wp.holds());
        assert_eq!(wp.factors.len(), 2);
        assert!(weil_product_check(&RatFunc::one(&k)).unwrap().holds());
    }

    proptest! {
        #[test]
        fn hilbert_rules(p in prop::sample::select(vec![3u32, 5, 7]), u in 1u32..7, w in 1u32..7, t in 0u32..7, va in -3i64..4, vb in -3i64..4) {
            let k = Field::new(p, 1).unwrap();
            let (u, w, t) = (u % p, w % p, t % p);
            prop_assume!(u != 0 && w != 0);
            let a = unit_times_pi(&k, &[u, t], va);
            let b = unit_times_pi(&k, &[w, 1], vb);
            let ab = hilbert_symbol(&a, &b).unwrap();
            let ba = hilbert_symbol(&b, &a).unwrap();
            // {f,g}{g,f} = 1 exactly, and {f,f} = {-1,f}
            prop_assert_eq!(ab * ba, 1);
            prop_assert_eq!(k.mul(tame_symbol(&a, &b).unwrap(), tame_symbol(&b, &a).unwrap()), 1);
            let aa = hilbert_symbol(&a, &a).unwrap();
            prop_assert_eq!(aa, zeta_char(&k, k.neg(1)).pow(va.rem_euclid(2) as u32));
            if va.rem_euclid(2) == 1 && vb.rem_euclid(2) == 1 {
                let lhs = hilbert_symbol(&a.mul(&b).neg(), &LocalElem::pi_pow(&k, 1)).unwrap();
                prop_assert_eq!(ab, lhs);
            }
            if va.rem_euclid(2) == 0 && vb == 1 {
                prop_assert_eq!(ab, zeta_char(&k, a.angular()));
            }
            // bimultiplicativity of the tame symbol
            let c = unit_times_pi(&k, &[w, t, 1], va + 1);
            let lhs = tame_symbol(&a.mul(&c), &b).unwrap();
            prop_assert_eq!(lhs, k.mul(tame_symbol(&a, &b).unwrap(), tame_symbol(&c, &b).unwrap()));
        }

        #[test]
        fn weil_items(p in prop::sample::select(vec![3u32, 5, 7]), u in 1u32..7, w in 1u32..7, va in -3i64..4, vb in -3i64..4) {
            let c = origin(p);
            let k = &c.field;
            let (u, w) = (u % p, w % p);
            prop_assume!(u != 0 && w != 0);
            let a = unit_times_pi(k, &[u, 1], va);
            let b = unit_times_pi(k, &[w, 2], vb);
            let ga = weil_gamma(&a, &c).unwrap().value;
            let gb = weil_gamma(&b, &c).unwrap().value;
            let gab = weil_gamma(&a.mul(&b), &c).unwrap().value;
            if va.rem_euclid(2) == 0 {
                prop_assert!(ga.is_one());
            } else if va < 0 {
                // |a| = q^{2r+1}: q^{-1/2} sum_b psi(a pi^{2r} b / 2) [b, pi]
                let r2 = -va - 1;
                let mut s = CycloValue::zero(p);
                for bb in k.units() {
                    let arg = a.mul_pi_pow(r2).scale(bb).scale(k.half());
                    let sym = hilbert_symbol(&LocalElem::constant(k, bb), &LocalElem::pi_pow(k, 1)).unwrap();
                    s = s.add(&CycloValue::psi(k, arg.residue()).scale(sym as i64));
                }
                prop_assert_eq!(ga.clone(), s.mul(&CycloValue::q_pow_half(p, 1, -1)));
            }
            let h = hilbert_symbol(&a, &b).unwrap();
            prop_assert_eq!(gab, ga.mul(&gb).scale(h as i64));
            let ginv = weil_gamma(&a.inv().unwrap(), &c).unwrap().value;
            let h2 = hilbert_symbol(&a, &a.inv().unwrap()).unwrap();
            prop_assert!(ga.mul(&ginv).scale(h2 as i64).is_one());
            let z = ga.to_complex();
            prop_assert!((z.norm() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn product_formula_random(p in prop::sample::select(vec![3u32, 5]), n in proptest::collection::vec(0u32..5, 1..4), d in proptest::collection::vec(0u32..5, 1..4)) {
            let k = Field::new(p, 1).unwrap();
            let f = RatFunc::new(Poly::new(&k, n.iter().map(|c| c % p).collect()), Poly::new(&k, d.iter().map(|c| c % p).collect()));
            prop_assume!(f.is_ok());
            let f = f.unwrap();
            prop_assume!(!f.is_zero());
            let wp = weil_product_check(&f).unwrap();
            prop_assert!(wp.holds(), "{:?}", wp.factors);
            let sq = weil_product_check(&f.mul(&f)).unwrap();
            prop_assert!(sq.factors.iter().all(|(_, g)| g.is_one()));
        }

        /// Reducing to the square class does not change the stabilized sum.
        #[test]
        fn raw_sum_matches_reduced(u in 1u32..3, t in 0u32..3, s in 0u32..3, va in -2i64..3) {
            let c = origin(3);
            let k = &c.field;
            let a = unit_times_pi(k, &[u, t, s], va);
            let ch = AdditiveChar::canonical(&c);
            let raw = weil_gamma_raw(&a, &ch, 3).unwrap();
            prop_assert_eq!(raw, weil_gamma_with(&a, &ch).unwrap());
        }
    }
}
