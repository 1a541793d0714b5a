//! Places of k(x), their completions, and exact local elements.
//!
//! A completion at a finite place P of degree d is modelled over K = GF(q^d):
//! pick a root `lambda` of P in K and write x = lambda + pi. Then F_P = K((pi))
//! and every local computation happens at the origin pi = 0. At infinity
//! x = 1/u, so the uniformizer is u and dx = -u^{-2} du.

use std::fmt;

use super::gf::{Embedding, Field};
use super::poly::{self, Poly};
use super::ratfunc::RatFunc;
use super::AlgebraError;

/// A place of the rational function field k(x).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Place {
    /// A monic irreducible polynomial.
    Finite(Poly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.deg() as usize,
            Place::Infinity => 1,
        }
    }
    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }
    /// The place x = 0.
    pub fn origin(k: &Field) -> Place {
        Place::Finite(Poly::x(k))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "[{p}]"),
            Place::Infinity => write!(f, "[inf]"),
        }
    }
}

/// Data needed to compute at a place: residue field, embedding of the constants,
/// and the chosen root.
#[derive(Clone, Debug)]
pub struct Completion {
    pub place: Place,
    /// Constant field k.
    pub base: Field,
    /// Residue field k_v.
    pub field: Field,
    pub emb: Embedding,
    /// Root of the place polynomial in k_v (zero at infinity).
    pub lambda: u32,
}

impl Completion {
    pub fn new(base: &Field, place: &Place) -> Result<Completion, AlgebraError> {
        let d = place.degree() as u32;
        let field = if d == 1 { base.clone() } else { Field::new(base.p(), base.degree() * d)? };
        let emb = Embedding::new(base, &field)?;
        let lambda = match place {
            Place::Infinity => 0,
            Place::Finite(p) => {
                if p.field() != base || !p.is_monic() || p.deg() < 1 {
                    return Err(AlgebraError::FieldMismatch);
                }
                let roots = poly::split_roots(&p.embed(&emb));
                *roots.first().ok_or(AlgebraError::NotIrreducible)?
            }
        };
        Ok(Completion { place: place.clone(), base: base.clone(), field, emb, lambda })
    }
    /// The completion at x = 0 over k.
    pub fn origin(base: &Field) -> Completion {
        Completion::new(base, &Place::origin(base)).expect("origin is a place")
    }
    /// |k_v|
    pub fn residue_order(&self) -> u32 {
        self.field.order()
    }
    /// The image of a global rational function.
    pub fn localize(&self, f: &RatFunc) -> LocalElem {
        let k = &self.field;
        match &self.place {
            Place::Finite(_) => {
                let n = f.num().embed(&self.emb).taylor_shift(self.lambda);
                let d = f.den().embed(&self.emb).taylor_shift(self.lambda);
                LocalElem::from_fraction(n, d)
            }
            Place::Infinity => {
                if f.is_zero() {
                    return LocalElem::zero(k);
                }
                let (dn, dd) = (f.num().deg() as usize, f.den().deg() as usize);
                let n = f.num().embed(&self.emb).reversed(dn + 1);
                let d = f.den().embed(&self.emb).reversed(dd + 1);
                LocalElem::from_fraction(n, d).mul_pi_pow(dd as i64 - dn as i64)
            }
        }
    }
    pub fn localize_poly(&self, p: &Poly) -> LocalElem {
        self.localize(&RatFunc::from_poly(p.clone()))
    }
    /// b with dx = b d(pi): 1 at finite places, -u^{-2} at infinity.
    pub fn differential(&self) -> LocalElem {
        let k = &self.field;
        match self.place {
            Place::Finite(_) => LocalElem::one(k),
            Place::Infinity => LocalElem::constant(k, k.neg(1)).mul_pi_pow(-2),
        }
    }
    /// Residue of f dx at this place, in k_v.
    pub fn residue(&self, f: &LocalElem) -> u32 {
        f.mul(&self.differential()).residue()
    }
    /// Tr_{k_v/k} of the residue of f dx.
    pub fn traced_residue(&self, f: &LocalElem) -> u32 {
        self.emb.trace(self.residue(f))
    }
}

/// An element pi^val * num/den of K(pi) with num(0) != 0 and den(0) = 1,
/// or zero (num = 0). The valuation at pi = 0 is therefore exact.
#[derive(Clone)]
pub struct LocalElem {
    val: i64,
    num: Poly,
    den: Poly,
}

const REDUCE_DEGREE: isize = 24;

impl fmt::Debug for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LocalElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let unit = if self.den.is_one() { format!("({})", self.num) } else { format!("({})/({})", self.num, self.den) };
        match self.val {
            0 => write!(f, "{unit}"),
            v => write!(f, "pi^{v}*{unit}"),
        }
    }
}

impl PartialEq for LocalElem {
    fn eq(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        self.val == o.val && self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}
impl Eq for LocalElem {}

impl LocalElem {
    pub fn zero(f: &Field) -> LocalElem {
        LocalElem { val: 0, num: Poly::zero(f), den: Poly::one(f) }
    }
    pub fn one(f: &Field) -> LocalElem {
        Self::constant(f, 1)
    }
    pub fn constant(f: &Field, a: u32) -> LocalElem {
        LocalElem::from_fraction(Poly::constant(f, a), Poly::one(f))
    }
    /// pi^n
    pub fn pi_pow(f: &Field, n: i64) -> LocalElem {
        Self::one(f).mul_pi_pow(n)
    }
    pub fn from_poly(p: Poly) -> LocalElem {
        let f = p.field().clone();
        LocalElem::from_fraction(p, Poly::one(&f))
    }
    /// num/den as a local element; den must be nonzero.
    pub fn from_fraction(num: Poly, den: Poly) -> LocalElem {
        assert!(!den.is_zero(), "zero denominator");
        let f = num.field().clone();
        if num.is_zero() {
            return Self::zero(&f);
        }
        let (a, b) = (num.ord0(), den.ord0());
        let (num, den) = (num.unshift(a), den.unshift(b));
        let inv = f.inv(den.coeff(0));
        LocalElem { val: a as i64 - b as i64, num: num.scale(inv), den: den.scale(inv) }
    }
    /// The element sum_{j} c[j] pi^{j + shift}.
    pub fn from_coeffs(f: &Field, c: &[u32], shift: i64) -> LocalElem {
        Self::from_poly(Poly::new(f, c.to_vec())).mul_pi_pow(shift)
    }
    pub fn field(&self) -> &Field {
        self.num.field()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    /// Exact valuation; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }
    /// Valuation with zero mapped to +infinity (i64::MAX).
    pub fn v(&self) -> i64 {
        if self.is_zero() {
            i64::MAX
        } else {
            self.val
        }
    }
    pub fn is_integral(&self) -> bool {
        self.is_zero() || self.val >= 0
    }
    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.val == 0
    }
    /// Leading coefficient of the Laurent expansion.
    pub fn angular(&self) -> u32 {
        self.num.coeff(0)
    }
    /// Value at pi = 0 of an integral element.
    pub fn value_at_origin(&self) -> u32 {
        assert!(self.is_integral(), "value at origin of a non-integral element");
        if self.is_zero() || self.val > 0 {
            0
        } else {
            self.num.coeff(0)
        }
    }
    pub fn mul_pi_pow(&self, n: i64) -> LocalElem {
        if self.is_zero() {
            return self.clone();
        }
        LocalElem { val: self.val + n, num: self.num.clone(), den: self.den.clone() }
    }
    fn maybe_reduce(self) -> LocalElem {
        if self.num.deg() + self.den.deg() <= REDUCE_DEGREE || self.den.is_one() {
            return self;
        }
        let g = self.num.gcd(&self.den);
        if g.is_one() {
            return self;
        }
        let (n, d) = (self.num.div_exact(&g), self.den.div_exact(&g));
        let inv = n.field().inv(d.coeff(0));
        LocalElem { val: self.val, num: n.scale(inv), den: d.scale(inv) }
    }
    pub fn add(&self, o: &LocalElem) -> LocalElem {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let v = self.val.min(o.val);
        let (s1, s2) = ((self.val - v) as usize, (o.val - v) as usize);
        let (a, b) = if self.den == o.den {
            (self.num.shift(s1).add(&o.num.shift(s2)), self.den.clone())
        } else {
            (self.num.mul(&o.den).shift(s1).add(&o.num.mul(&self.den).shift(s2)), self.den.mul(&o.den))
        };
        if a.is_zero() {
            return Self::zero(self.field());
        }
        let k = a.ord0();
        LocalElem { val: v + k as i64, num: a.unshift(k), den: b }.maybe_reduce()
    }
    pub fn neg(&self) -> LocalElem {
        LocalElem { val: self.val, num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &LocalElem) -> LocalElem {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &LocalElem) -> LocalElem {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field());
        }
        let den = if self.den.is_one() {
            o.den.clone()
        } else if o.den.is_one() {
            self.den.clone()
        } else {
            self.den.mul(&o.den)
        };
        LocalElem { val: self.val + o.val, num: self.num.mul(&o.num), den }.maybe_reduce()
    }
    pub fn scale(&self, a: u32) -> LocalElem {
        if a == 0 || self.is_zero() {
            return Self::zero(self.field());
        }
        LocalElem { val: self.val, num: self.num.scale(a), den: self.den.clone() }
    }
    pub fn inv(&self) -> Result<LocalElem, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let f = self.field();
        let inv = f.inv(self.num.coeff(0));
        Ok(LocalElem { val: -self.val, num: self.den.scale(inv), den: self.num.scale(inv) })
    }
    pub fn div(&self, o: &LocalElem) -> Result<LocalElem, AlgebraError> {
        Ok(self.mul(&o.inv()?))
    }
    pub fn pow(&self, e: i64) -> LocalElem {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut r = Self::one(self.field());
        let mut b = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }
    /// First `n` coefficients of the unit part num/den as a power series.
    pub fn unit_series(&self, n: usize) -> Vec<u32> {
        let f = self.field();
        let mut out = vec![0u32; n];
        if self.is_zero() {
            return out;
        }
        // den(0) = 1: out[k] = num[k] - sum_{i>=1} den[i] out[k-i]
        let dc = self.den.coeffs();
        for k in 0..n {
            let mut s = self.num.coeff(k);
            for i in 1..dc.len().min(k + 1) {
                s = f.sub(s, f.mul(dc[i], out[k - i]));
            }
            out[k] = s;
        }
        out
    }
    /// Coefficients of pi^lo, ..., pi^{hi-1} in the Laurent expansion.
    pub fn laurent(&self, lo: i64, hi: i64) -> Vec<u32> {
        let n = (hi - lo).max(0) as usize;
        let mut out = vec![0u32; n];
        if self.is_zero() || hi <= self.val {
            return out;
        }
        let s = self.unit_series((hi - self.val) as usize);
        for (j, o) in out.iter_mut().enumerate() {
            let e = lo + j as i64 - self.val;
            if e >= 0 {
                *o = s[e as usize];
            }
        }
        out
    }
    pub fn coeff(&self, j: i64) -> u32 {
        self.laurent(j, j + 1)[0]
    }
    /// Coefficient of pi^{-1}.
    pub fn residue(&self) -> u32 {
        if self.is_zero() || self.val > -1 {
            0
        } else {
            self.coeff(-1)
        }
    }
    /// The truncated expansion sum_{j < n} c_j pi^j as an element (exact).
    pub fn truncated(&self, n: i64) -> LocalElem {
        if self.is_zero() || n <= self.val {
            return Self::zero(self.field());
        }
        let c = self.laurent(self.val, n);
        Self::from_coeffs(self.field(), &c, self.val)
    }
}
