//! Rational functions in k(x), kept as num/den with den monic and coprime to num.

use std::fmt;

use super::gf::Field;
use super::poly::Poly;
use super::AlgebraError;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.field() != den.field() {
            return Err(AlgebraError::FieldMismatch);
        }
        let f = num.field().clone();
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one(&f) });
        }
        let g = num.gcd(&den);
        let (n, d) = (num.div_exact(&g), den.div_exact(&g));
        let inv = f.inv(d.lc());
        Ok(RatFunc { num: n.scale(inv), den: d.scale(inv) })
    }
    pub fn from_poly(p: Poly) -> RatFunc {
        let f = p.field().clone();
        RatFunc { num: p, den: Poly::one(&f) }
    }
    pub fn zero(f: &Field) -> RatFunc {
        Self::from_poly(Poly::zero(f))
    }
    pub fn one(f: &Field) -> RatFunc {
        Self::from_poly(Poly::one(f))
    }
    pub fn constant(f: &Field, a: u32) -> RatFunc {
        Self::from_poly(Poly::constant(f, a))
    }
    pub fn field(&self) -> &Field {
        self.num.field()
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }
    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone()).expect("nonzero den");
        }
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero den")
    }
    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_poly() && o.is_poly() {
            return RatFunc::from_poly(self.num.mul(&o.num));
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero den")
    }
    pub fn inv(&self) -> Result<RatFunc, AlgebraError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, AlgebraError> {
        Ok(self.mul(&o.inv()?))
    }
    /// Split into polynomial part and proper part R/den.
    pub fn split(&self) -> (Poly, Poly) {
        self.num.divrem(&self.den).expect("nonzero den")
    }
    /// Sum over finite places of the traced residues of f dx: the coefficient of
    /// x^{deg Q - 1} in R, where f = poly + R/Q with Q monic.
    pub fn sres(&self) -> u32 {
        let (_, r) = self.split();
        match self.den.degree() {
            Some(0) | None => 0,
            Some(d) => r.coeff(d - 1),
        }
    }
    /// Valuation at the finite place given by a monic irreducible `p`.
    pub fn val_at(&self, p: &Poly) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let count = |a: &Poly| {
            let mut a = a.clone();
            let mut k = 0i64;
            loop {
                let (q, r) = a.divrem(p).expect("nonzero");
                if !r.is_zero() {
                    return k;
                }
                a = q;
                k += 1;
            }
        };
        Some(count(&self.num) - count(&self.den))
    }
    /// Valuation at infinity, deg den - deg num.
    pub fn val_inf(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.den.deg() as i64 - self.num.deg() as i64)
        }
    }
}
