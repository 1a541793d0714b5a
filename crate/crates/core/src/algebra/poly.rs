//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf::{Embedding, Field, FieldElem};
use super::AlgebraError;

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    c: Vec<u32>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut terms = vec![];
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = self.field.elem(c).to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            terms.push(match (i, c) {
                (0, _) => cs,
                (1, 1) => "x".to_string(),
                (1, _) => format!("{cs}*x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{cs}*x^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(field: &Field, mut c: Vec<u32>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }
    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), c: vec![] }
    }
    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, 1)
    }
    pub fn constant(field: &Field, a: u32) -> Poly {
        Poly::new(field, vec![a])
    }
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![0, 1])
    }
    /// a * x^n
    pub fn monomial(field: &Field, a: u32, n: usize) -> Poly {
        let mut c = vec![0; n + 1];
        c[n] = a;
        Poly::new(field, c)
    }
    /// x - a
    pub fn linear(field: &Field, a: u32) -> Poly {
        Poly::new(field, vec![field.neg(a), 1])
    }
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }
    pub fn into_coeffs(self) -> Vec<u32> {
        self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.c == [1]
    }
    /// Degree, with -1 for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }
    pub fn lc(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }
    /// Multiplicity of the root 0.
    pub fn ord0(&self) -> usize {
        self.c.iter().take_while(|&&c| c == 0).count()
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect();
        Poly::new(f, c)
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect();
        Poly::new(f, c)
    }
    pub fn neg(&self) -> Poly {
        Poly { field: self.field.clone(), c: self.c.iter().map(|&a| self.field.neg(a)).collect() }
    }
    pub fn scale(&self, a: u32) -> Poly {
        if a == 0 {
            return Poly::zero(&self.field);
        }
        Poly { field: self.field.clone(), c: self.c.iter().map(|&b| self.field.mul(a, b)).collect() }
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut c = vec![0u32; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }
    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly { field: self.field.clone(), c }
    }
    /// Divide by x^k, which must divide exactly.
    pub fn unshift(&self, k: usize) -> Poly {
        debug_assert!(self.is_zero() || self.ord0() >= k);
        Poly { field: self.field.clone(), c: self.c.get(k..).map(|s| s.to_vec()).unwrap_or_default() }
    }
    /// Keep the terms of degree < n.
    pub fn truncate(&self, n: usize) -> Poly {
        Poly::new(&self.field, self.c.iter().take(n).copied().collect())
    }
    pub fn pow(&self, mut e: u64) -> Poly {
        let mut r = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        if d.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let f = &self.field;
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(d.lc());
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        let mut qc = vec![0u32; r.len() - dd];
        for k in (0..qc.len()).rev() {
            let top = r[k + dd];
            if top == 0 {
                continue;
            }
            let c = f.mul(top, inv);
            qc[k] = c;
            for (i, &b) in d.c.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, b));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, qc), Poly::new(f, r)))
    }
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).expect("nonzero divisor").1
    }
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lc()))
    }
    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    /// (g, s, t) with s*self + t*o = g monic.
    pub fn xgcd(&self, o: &Poly) -> (Poly, Poly, Poly) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lc());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }
    pub fn eval(&self, x: u32) -> u32 {
        let f = &self.field;
        self.c.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self.c.iter().enumerate().skip(1).map(|(i, &a)| f.mul(f.from_int(i as i64), a)).collect();
        Poly::new(f, c)
    }
    /// p(x + a), by Horner in the ring.
    pub fn taylor_shift(&self, a: u32) -> Poly {
        let f = &self.field;
        let lin = Poly::new(f, vec![a, 1]);
        let mut acc = Poly::zero(f);
        for &c in self.c.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(f, c));
        }
        acc
    }
    /// x^{deg} p(1/x) padded to the given length `n` (>= len).
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c = self.c.clone();
        c.resize(n, 0);
        c.reverse();
        Poly::new(&self.field, c)
    }
    /// Coefficients mapped along an embedding into a bigger field.
    pub fn embed(&self, e: &Embedding) -> Poly {
        Poly::new(&e.dst, self.c.iter().map(|&a| e.map(a)).collect())
    }
    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Poly {
        self.mul(o).rem(m)
    }
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut r = Poly::one(&self.field).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m);
            }
            b = b.mulmod(&b, m);
            e >>= 1;
        }
        r
    }
    pub fn coeff_elem(&self, i: usize) -> FieldElem {
        self.field.elem(self.coeff(i))
    }
}

/// result(P, Q) = lc(P)^{deg Q} * prod of Q over the roots of P.
pub fn resultant(p: &Poly, q: &Poly) -> Result<u32, AlgebraError> {
    if p.is_zero() || q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if p.field() != q.field() {
        return Err(AlgebraError::FieldMismatch);
    }
    let f = p.field().clone();
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut acc = 1u32;
    loop {
        let (da, db) = (a.deg(), b.deg());
        if db == 0 {
            return Ok(f.mul(acc, f.pow(b.lc(), da as i64)));
        }
        if da == 0 {
            return Ok(f.mul(acc, f.pow(a.lc(), db as i64)));
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Ok(0);
        }
        if (da * db) % 2 == 1 {
            acc = f.neg(acc);
        }
        acc = f.mul(acc, f.pow(b.lc(), da as i64 - r.deg() as i64));
        a = b;
        b = r;
    }
}

/// Square-free decomposition: pairs (g, e) with p = lc * prod g^e, each g monic square-free.
pub fn squarefree(p: &Poly) -> Vec<(Poly, usize)> {
    let f = p.field().clone();
    let pm = p.monic();
    if pm.deg() <= 0 {
        return vec![];
    }
    let mut out = vec![];
    let d = pm.derivative();
    let mut c = pm.gcd(&d);
    let mut w = pm.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        // c is a p-th power: take the root coefficientwise
        let pch = f.p() as usize;
        let root_exp = (f.order() / f.p()) as i64;
        let coeffs: Vec<u32> = (0..=c.deg() as usize / pch).map(|j| f.pow(c.coeff(j * pch), root_exp)).collect();
        let root = Poly::new(&f, coeffs);
        for (g, e) in squarefree(&root) {
            out.push((g, e * pch));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree(p: &Poly) -> Vec<(Poly, usize)> {
    let f = p.field().clone();
    let q = f.order() as u128;
    let mut out = vec![];
    let mut rest = p.clone();
    let x = Poly::x(&f);
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.deg() >= 2 * d as isize {
        h = h.powmod(q, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            out.push((g.clone(), d));
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
        }
        d += 1;
    }
    if rest.deg() > 0 {
        let dr = rest.deg() as usize;
        out.push((rest, dr));
    }
    out
}

/// Splits a monic product of distinct irreducibles of degree `d` (odd characteristic).
pub fn equal_degree(p: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let f = p.field().clone();
    let n = p.deg() as usize;
    if n == d {
        return vec![p.clone()];
    }
    let e = ((f.order() as u128).pow(d as u32) - 1) / 2;
    loop {
        let a = Poly::new(&f, (0..n).map(|_| rng.gen_range(0..f.order())).collect());
        if a.deg() < 1 {
            continue;
        }
        let g = p.gcd(&a);
        let split = if !g.is_one() {
            g
        } else {
            let b = a.powmod(e, p).sub(&Poly::one(&f));
            p.gcd(&b)
        };
        if !split.is_one() && split.deg() < p.deg() {
            let other = p.div_exact(&split);
            let mut out = equal_degree(&split, d, rng);
            out.extend(equal_degree(&other, d, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
pub fn factor(p: &Poly) -> Result<Vec<(Poly, usize)>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = vec![];
    for (g, e) in squarefree(p) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg(), a.0.c.iter().rev().collect::<Vec<_>>()).cmp(&(b.0.deg(), b.0.c.iter().rev().collect::<Vec<_>>())));
    // merge equal factors coming from different square-free parts
    let mut merged: Vec<(Poly, usize)> = vec![];
    for (g, e) in out {
        match merged.last_mut() {
            Some((h, m)) if *h == g => *m += e,
            _ => merged.push((g, e)),
        }
    }
    Ok(merged)
}

/// The roots in the coefficient field of a polynomial that splits into distinct linear factors there.
pub fn split_roots(p: &Poly) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f_f1e1d);
    let pm = p.monic();
    let mut roots: Vec<u32> = equal_degree(&pm, 1, &mut rng).iter().map(|l| l.field().neg(l.coeff(0))).collect();
    roots.sort_unstable();
    roots
}

pub fn is_irreducible(p: &Poly) -> bool {
    p.deg() >= 1 && matches!(factor(p).as_deref(), Ok([(_, 1)]))
}
