//! Finite fields GF(p^m) with log/antilog tables.
//!
//! Elements are plain `u32` codes: the code of `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`
//! is `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. The modulus is the lexicographically
//! first monic irreducible polynomial of degree `m` (ordered by the code of its
//! lower coefficients); logs are taken to the smallest-coded primitive element.

use std::fmt;
use std::sync::Arc;

use super::AlgebraError;

/// Largest field order we are willing to tabulate.
pub const MAX_ORDER: u64 = 1 << 22;

pub(crate) struct GfCtx {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, low to high, length m + 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
}

/// A shared handle to a finite field.
#[derive(Clone)]
pub struct Field(Arc<GfCtx>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn digits_of(mut v: u32, p: u32, m: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(v % p);
        v /= p;
    }
    out
}

fn code_of(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two codes as polynomials modulo the monic `modulus`.
fn mul_mod(a: u32, b: u32, p: u32, m: u32, modulus: &[u32]) -> u32 {
    let (da, db) = (digits_of(a, p, m), digits_of(b, p, m));
    let m = m as usize;
    let mut prod = vec![0u64; 2 * m - 1];
    for i in 0..m {
        for j in 0..m {
            prod[i + j] += (da[i] * db[j]) as u64;
        }
    }
    let p64 = p as u64;
    for k in (m..2 * m - 1).rev() {
        let top = prod[k] % p64;
        prod[k] = 0;
        if top != 0 {
            for i in 0..m {
                prod[k - m + i] += top * (p64 - modulus[i] as u64);
            }
        }
    }
    let d: Vec<u32> = prod[..m].iter().map(|&c| (c % p64) as u32).collect();
    code_of(&d, p)
}

/// Polynomial helpers over GF(p) used only for the irreducibility test.
fn zp_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv_lead = zp_pow(b[db], p - 2, p);
    while a.len() > db && !a.is_empty() {
        let top = a[a.len() - 1] % p;
        let shift = a.len() - 1 - db;
        if top != 0 {
            let c = top * inv_lead % p;
            for i in 0..=db {
                a[shift + i] = (a[shift + i] + (p - c * b[i] % p)) % p;
            }
        }
        a.pop();
    }
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn zp_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn zp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    zp_rem(prod, f, p)
}

fn zp_gcd_is_one(a: &[u64], b: &[u64], p: u64) -> bool {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while x.last() == Some(&0) {
        x.pop();
    }
    while !y.is_empty() {
        let r = zp_rem(x, &y, p);
        x = y;
        y = r;
    }
    x.len() == 1
}

/// Rabin-style test: f has no irreducible factor of degree <= deg f / 2.
fn is_irreducible_zp(f: &[u32], p: u32) -> bool {
    let p = p as u64;
    let f: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let m = f.len() - 1;
    if m == 1 {
        return true;
    }
    let x = zp_rem(vec![0, 1], &f, p);
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = zp_mulmod(&acc, &base, &f, p);
            }
            base = zp_mulmod(&base, &base, &f, p);
            e >>= 1;
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        if !zp_gcd_is_one(&f, &diff, p) {
            return false;
        }
    }
    true
}

impl Field {
    /// GF(p^m) with the lexicographically first irreducible modulus.
    pub fn new(p: u32, m: u32) -> Result<Field, AlgebraError> {
        if !is_odd_prime(p) {
            return Err(AlgebraError::BadCharacteristic(p));
        }
        if m == 0 {
            return Err(AlgebraError::BadDegree(0));
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(AlgebraError::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        // Candidate moduli in order of their code; the leading coefficient 1 is implicit.
        for low in 0..q {
            let mut modulus = digits_of(low, p, m);
            modulus.push(1);
            if m > 1 && modulus[0] == 0 {
                continue;
            }
            if !is_irreducible_zp(&modulus, p) {
                continue;
            }
            if let Some((exp, log)) = Self::tables(p, m, q, &modulus) {
                return Ok(Field(Arc::new(Self::finish(p, m, q, modulus, exp, log))));
            }
        }
        Err(AlgebraError::BadDegree(m))
    }

    /// Field with an explicit monic irreducible modulus.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field, AlgebraError> {
        if !is_odd_prime(p) {
            return Err(AlgebraError::BadCharacteristic(p));
        }
        let m = (modulus.len() as u32).saturating_sub(1);
        if m == 0 || modulus[m as usize] != 1 {
            return Err(AlgebraError::BadModulus);
        }
        let q64 = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q64 > MAX_ORDER {
            return Err(AlgebraError::FieldTooLarge(q64));
        }
        let q = q64 as u32;
        let modulus: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        if !is_irreducible_zp(&modulus, p) {
            return Err(AlgebraError::BadModulus);
        }
        let (exp, log) = Self::tables(p, m, q, &modulus).ok_or(AlgebraError::BadModulus)?;
        Ok(Field(Arc::new(Self::finish(p, m, q, modulus, exp, log))))
    }

    /// Log tables with respect to the smallest-coded primitive element.
    fn tables(p: u32, m: u32, q: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
        let n = (q - 1) as usize;
        let mul = |a: u32, b: u32| {
            if m == 1 {
                ((a as u64 * b as u64) % p as u64) as u32
            } else {
                mul_mod(a, b, p, m, modulus)
            }
        };
        // orders divide q - 1, so test only the maximal proper divisors
        let mut primes = vec![];
        let mut t = n;
        let mut d = 2;
        while d * d <= t {
            if t % d == 0 {
                primes.push(d);
                while t % d == 0 {
                    t /= d;
                }
            }
            d += 1;
        }
        if t > 1 {
            primes.push(t);
        }
        let pow = |g: u32, mut e: usize| {
            let (mut r, mut b) = (1u32, g);
            while e > 0 {
                if e & 1 == 1 {
                    r = mul(r, b);
                }
                b = mul(b, b);
                e >>= 1;
            }
            r
        };
        let g = (1..q).find(|&g| {
            if n == 1 {
                return g == 1;
            }
            pow(g, n) == 1 && primes.iter().all(|&l| pow(g, n / l) != 1)
        })?;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for j in 0..n {
            exp[j] = cur;
            log[cur as usize] = j as u32;
            cur = mul(cur, g);
        }
        for j in 0..n {
            exp[n + j] = exp[j];
        }
        Some((exp, log))
    }

    fn finish(p: u32, m: u32, q: u32, modulus: Vec<u32>, exp: Vec<u32>, log: Vec<u32>) -> GfCtx {
        let neg: Vec<u32> = (0..q)
            .map(|v| code_of(&digits_of(v, p, m).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let add = if m > 1 && (q as u64) * (q as u64) <= (1 << 20) {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits_of(a, p, m);
                for b in 0..q {
                    let db = digits_of(b, p, m);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = code_of(&s, p);
                }
            }
            Some(t)
        } else {
            None
        };
        GfCtx { p, m, q, modulus, exp, log, add, neg }
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.m
    }
    pub fn order(&self) -> u32 {
        self.0.q
    }
    /// The defining modulus, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let c = &*self.0;
        if c.m == 1 {
            let s = a + b;
            if s >= c.p {
                s - c.p
            } else {
                s
            }
        } else if let Some(t) = &c.add {
            t[(a * c.q + b) as usize]
        } else {
            let (mut x, mut y, mut out, mut w) = (a, b, 0u32, 1u32);
            for _ in 0..c.m {
                out += ((x % c.p + y % c.p) % c.p) * w;
                x /= c.p;
                y /= c.p;
                w *= c.p;
            }
            out
        }
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let c = &*self.0;
        c.exp[(c.log[a as usize] + c.log[b as usize]) as usize]
    }
    /// Inverse; panics on zero. Use [`Field::checked_inv`] for fallible code.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in {:?}", self);
        let c = &*self.0;
        let l = c.log[a as usize];
        c.exp[((c.q - 1 - l) % (c.q - 1)) as usize]
    }
    pub fn checked_inv(&self, a: u32) -> Result<u32, AlgebraError> {
        if a == 0 {
            Err(AlgebraError::DivisionByZero)
        } else {
            Ok(self.inv(a))
        }
    }
    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }
    pub fn pow(&self, a: u32, e: i64) -> u32 {
        if a == 0 {
            assert!(e >= 0, "negative power of zero");
            return if e == 0 { 1 } else { 0 };
        }
        let c = &*self.0;
        let n = (c.q - 1) as i64;
        let l = (c.log[a as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        c.exp[l as usize]
    }
    /// The integer `n` reduced into the prime field.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }
    /// The primitive element used for the log tables.
    pub fn generator(&self) -> u32 {
        self.0.exp[1 % (self.0.q as usize - 1).max(1)]
    }
    pub fn discrete_log(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.0.log[a as usize])
        }
    }
    pub fn exp_of(&self, j: u64) -> u32 {
        self.0.exp[(j % (self.0.q as u64 - 1)) as usize]
    }
    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.0.log[a as usize] % 2 == 0
    }
    /// A square root if one exists.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.0.log[a as usize];
        if l % 2 == 1 {
            None
        } else {
            Some(self.0.exp[(l / 2) as usize])
        }
    }
    /// Quadratic character with the convention that zero maps to zero.
    pub fn quadratic_character(&self, a: u32) -> i32 {
        if a == 0 {
            0
        } else if self.0.log[a as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }
    /// Absolute trace to GF(p), returned as an integer in `0..p`.
    pub fn abs_trace(&self, a: u32) -> u32 {
        let mut s = 0u32;
        let mut x = a;
        for _ in 0..self.0.m {
            s = self.add(s, x);
            x = self.pow(x, self.0.p as i64);
        }
        debug_assert!(s < self.0.p);
        s
    }
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.0.q
    }
    pub fn units(&self) -> std::ops::Range<u32> {
        1..self.0.q
    }
    /// Code of the element given by its coordinates in the polynomial basis.
    pub fn from_digits(&self, d: &[u32]) -> u32 {
        code_of(d, self.0.p)
    }
    pub fn digits(&self, a: u32) -> Vec<u32> {
        digits_of(a, self.0.p, self.0.m)
    }
    pub fn half(&self) -> u32 {
        self.inv(2 % self.0.p)
    }
    pub fn elem(&self, v: u32) -> FieldElem {
        FieldElem { field: self.clone(), value: v % self.0.q }
    }
}

/// An embedding of a field into an extension, with the inverse on the image.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub src: Field,
    pub dst: Field,
    image: Vec<u32>,
    preimage: Vec<u32>,
}

impl Embedding {
    /// Embeds `src` into `dst` by sending the generator to the smallest-coded root
    /// of the modulus of `src`.
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding, AlgebraError> {
        if src.p() != dst.p() || dst.degree() % src.degree() != 0 {
            return Err(AlgebraError::FieldMismatch);
        }
        let modulus = src.modulus();
        let eval = |x: u32| {
            modulus.iter().rev().fold(0u32, |acc, &c| dst.add(dst.mul(acc, x), c))
        };
        let root = if src.degree() == 1 {
            // prime field: codes are integers and embed as themselves
            0
        } else {
            dst.elements().find(|&x| eval(x) == 0).ok_or(AlgebraError::FieldMismatch)?
        };
        let mut image = vec![0u32; src.order() as usize];
        let mut preimage = vec![u32::MAX; dst.order() as usize];
        for a in src.elements() {
            let d = src.digits(a);
            let v = d.iter().rev().fold(0u32, |acc, &c| dst.add(dst.mul(acc, root), c));
            image[a as usize] = v;
            preimage[v as usize] = a;
        }
        Ok(Embedding { src: src.clone(), dst: dst.clone(), image, preimage })
    }

    #[inline]
    pub fn map(&self, a: u32) -> u32 {
        self.image[a as usize]
    }
    /// Inverse image of an element known to lie in the subfield.
    pub fn pull(&self, b: u32) -> Option<u32> {
        match self.preimage[b as usize] {
            u32::MAX => None,
            a => Some(a),
        }
    }
    pub fn relative_degree(&self) -> u32 {
        self.dst.degree() / self.src.degree()
    }
    /// Tr_{dst/src}(b) = sum of b^{q^j}, q = |src|.
    pub fn trace(&self, b: u32) -> u32 {
        let q = self.src.order() as i64;
        let mut s = 0;
        let mut x = b;
        for _ in 0..self.relative_degree() {
            s = self.dst.add(s, x);
            x = self.dst.pow(x, q);
        }
        self.pull(s).expect("trace lies in the subfield")
    }
    /// N_{dst/src}(b) = product of b^{q^j}.
    pub fn norm(&self, b: u32) -> u32 {
        let q = self.src.order() as i64;
        let mut s = 1;
        let mut x = b;
        for _ in 0..self.relative_degree() {
            s = self.dst.mul(s, x);
            x = self.dst.pow(x, q);
        }
        self.pull(s).expect("norm lies in the subfield")
    }
}

/// A field element that carries its field, with checked operations.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    pub field: Field,
    pub value: u32,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree() == 1 {
            write!(f, "{}", self.value)
        } else {
            let d = self.field.digits(self.value);
            let terms: Vec<String> = d
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| match i {
                    0 => format!("{c}"),
                    1 => format!("{c}*s"),
                    _ => format!("{c}*s^{i}"),
                })
                .collect();
            if terms.is_empty() {
                write!(f, "0")
            } else {
                write!(f, "{}", terms.join("+"))
            }
        }
    }
}

impl FieldElem {
    fn same(&self, o: &FieldElem) -> Result<(), AlgebraError> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch)
        }
    }
    pub fn add(&self, o: &FieldElem) -> Result<FieldElem, AlgebraError> {
        self.same(o)?;
        Ok(self.field.elem(self.field.add(self.value, o.value)))
    }
    pub fn sub(&self, o: &FieldElem) -> Result<FieldElem, AlgebraError> {
        self.same(o)?;
        Ok(self.field.elem(self.field.sub(self.value, o.value)))
    }
    pub fn mul(&self, o: &FieldElem) -> Result<FieldElem, AlgebraError> {
        self.same(o)?;
        Ok(self.field.elem(self.field.mul(self.value, o.value)))
    }
    pub fn inv(&self) -> Result<FieldElem, AlgebraError> {
        Ok(self.field.elem(self.field.checked_inv(self.value)?))
    }
    pub fn pow(&self, e: i64) -> Result<FieldElem, AlgebraError> {
        if self.value == 0 && e < 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.field.elem(self.field.pow(self.value, e)))
    }
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
    /// Trace down to `base` along `emb`.
    pub fn trace_to_base(&self, emb: &Embedding) -> Result<FieldElem, AlgebraError> {
        if emb.dst != self.field {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(emb.src.elem(emb.trace(self.value)))
    }
    pub fn norm_to_base(&self, emb: &Embedding) -> Result<FieldElem, AlgebraError> {
        if emb.dst != self.field {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(emb.src.elem(emb.norm(self.value)))
    }
}
