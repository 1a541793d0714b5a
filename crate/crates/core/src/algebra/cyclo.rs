//! Exact arithmetic in Q(zeta_{4p}) = Q[Z]/(Phi_{4p}(Z)).
//!
//! Elements are stored in the power basis `1, Z, ..., Z^{2p-3}` as `i128`
//! numerators over a common positive denominator, kept in lowest terms.
//! `zeta_p = Z^4` and `i = Z^p`. Overflow of the `i128` coefficients panics;
//! the values met at desk scale stay far below that bound.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;

use super::gf::Field;

struct Tables {
    /// `red[j]` = Z^j for j in 0..4p, in the power basis.
    red: Vec<Vec<i64>>,
}

fn tables(p: u32) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Tables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic table cache poisoned");
    guard
        .entry(p)
        .or_insert_with(|| {
            let phi = 2 * (p as usize - 1);
            // Phi_{4p}(Z) = sum_{j<p} (-1)^j Z^{2j}; Z^phi = -sum_{j<p-1} (-1)^j Z^{2j}
            let mut top = vec![0i64; phi];
            for j in 0..(p as usize - 1) {
                top[2 * j] = if j % 2 == 0 { -1 } else { 1 };
            }
            let mut red = Vec::with_capacity(4 * p as usize);
            let mut cur = vec![0i64; phi];
            cur[0] = 1;
            for _ in 0..4 * p {
                red.push(cur.clone());
                // multiply by Z
                let carry = cur[phi - 1];
                for i in (1..phi).rev() {
                    cur[i] = cur[i - 1];
                }
                cur[0] = 0;
                if carry != 0 {
                    for i in 0..phi {
                        cur[i] += carry * top[i];
                    }
                }
            }
            Arc::new(Tables { red })
        })
        .clone()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloValue {
    p: u32,
    num: Vec<i128>,
    den: i128,
}

fn ck(x: Option<i128>) -> i128 {
    x.expect("cyclotomic coefficient overflow")
}

impl CycloValue {
    fn phi(p: u32) -> usize {
        2 * (p as usize - 1)
    }
    fn normalize(mut self) -> Self {
        let mut g = self.den;
        for &c in &self.num {
            g = g.gcd(&c);
            if g == 1 {
                break;
            }
        }
        if g == 0 {
            self.den = 1;
            return self;
        }
        if self.den < 0 {
            g = -g.abs();
        } else {
            g = g.abs();
        }
        if g != 1 {
            for c in &mut self.num {
                *c /= g;
            }
            self.den /= g;
        }
        self
    }
    pub fn zero(p: u32) -> Self {
        CycloValue { p, num: vec![0; Self::phi(p)], den: 1 }
    }
    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }
    pub fn from_int(p: u32, n: i64) -> Self {
        let mut v = Self::zero(p);
        v.num[0] = n as i128;
        v
    }
    pub fn from_ratio(p: u32, n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        let mut v = Self::zero(p);
        v.num[0] = n as i128;
        v.den = d as i128;
        v.normalize()
    }
    /// Z^j for any integer j.
    pub fn z_pow(p: u32, j: i64) -> Self {
        let t = tables(p);
        let j = j.rem_euclid(4 * p as i64) as usize;
        CycloValue { p, num: t.red[j].iter().map(|&c| c as i128).collect(), den: 1 }
    }
    /// zeta_p^j.
    pub fn zeta_p(p: u32, j: i64) -> Self {
        Self::z_pow(p, 4 * j)
    }
    pub fn i(p: u32) -> Self {
        Self::z_pow(p, p as i64)
    }
    pub fn from_sign(p: u32, s: i32) -> Self {
        Self::from_int(p, s as i64)
    }
    /// The positive square root of p under Z -> exp(2 pi i / 4p), as a Gauss sum.
    pub fn sqrt_p(p: u32) -> Self {
        let mut acc = CycloAcc::new(p);
        for x in 0..p as u64 {
            acc.add_zeta_p((x * x % p as u64) as u32, 1);
        }
        let g = acc.value();
        if p % 4 == 1 {
            g
        } else {
            g.mul(&Self::i(p)).neg()
        }
    }
    /// q^{h/2} with q = p^m.
    pub fn q_pow_half(p: u32, m: u32, h: i64) -> Self {
        let e = m as i64 * h;
        let base = e.div_euclid(2);
        let mut v = if base >= 0 {
            Self::from_int(p, (p as i64).pow(base as u32))
        } else {
            Self::from_ratio(p, 1, (p as i64).pow((-base) as u32))
        };
        if e.rem_euclid(2) == 1 {
            v = v.mul(&Self::sqrt_p(p));
        }
        v
    }
    /// sqrt(q) for q = p^m.
    pub fn sqrt_q(p: u32, m: u32) -> Self {
        Self::q_pow_half(p, m, 1)
    }
    /// psi(x) = zeta_p^{Tr(x)} on the field.
    pub fn psi(field: &Field, x: u32) -> Self {
        Self::zeta_p(field.p(), field.abs_trace(x) as i64)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }
    pub fn is_one(&self) -> bool {
        self.den == 1 && self.num[0] == 1 && self.num[1..].iter().all(|&c| c == 0)
    }
    /// The rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<(i128, i128)> {
        if self.num[1..].iter().all(|&c| c == 0) {
            Some((self.num[0], self.den))
        } else {
            None
        }
    }
    pub fn numerators(&self) -> &[i128] {
        &self.num
    }
    pub fn denominator(&self) -> i128 {
        self.den
    }
    fn check(&self, o: &Self) {
        assert_eq!(self.p, o.p, "cyclotomic fields differ");
    }
    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let l = self.den.lcm(&o.den);
        let (a, b) = (l / self.den, l / o.den);
        let num = self.num.iter().zip(&o.num).map(|(&x, &y)| ck(ck(x.checked_mul(a)).checked_add(ck(y.checked_mul(b))))).collect();
        CycloValue { p: self.p, num, den: l }.normalize()
    }
    pub fn neg(&self) -> Self {
        CycloValue { p: self.p, num: self.num.iter().map(|&c| -c).collect(), den: self.den }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let t = tables(self.p);
        let phi = self.num.len();
        let mut raw = vec![0i128; 2 * phi];
        for (i, &x) in self.num.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.num.iter().enumerate() {
                if y != 0 {
                    raw[i + j] = ck(raw[i + j].checked_add(ck(x.checked_mul(y))));
                }
            }
        }
        let mut num = raw[..phi].to_vec();
        for (j, &c) in raw.iter().enumerate().skip(phi) {
            if c == 0 {
                continue;
            }
            for (k, &r) in t.red[j].iter().enumerate() {
                if r != 0 {
                    num[k] = ck(num[k].checked_add(ck(c.checked_mul(r as i128))));
                }
            }
        }
        CycloValue { p: self.p, num, den: ck(self.den.checked_mul(o.den)) }.normalize()
    }
    pub fn scale(&self, n: i64) -> Self {
        CycloValue { p: self.p, num: self.num.iter().map(|&c| ck(c.checked_mul(n as i128))).collect(), den: self.den }.normalize()
    }
    /// Image under the automorphism Z -> Z^k (k prime to 4p).
    pub fn galois(&self, k: i64) -> Self {
        let mut acc = vec![0i128; self.num.len()];
        let t = tables(self.p);
        let n = 4 * self.p as i64;
        for (j, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = (j as i64 * k).rem_euclid(n) as usize;
            for (i, &r) in t.red[e].iter().enumerate() {
                acc[i] = ck(acc[i].checked_add(ck(c.checked_mul(r as i128))));
            }
        }
        CycloValue { p: self.p, num: acc, den: self.den }.normalize()
    }
    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }
    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = 4 * self.p as i64;
        let mut others = Self::one(self.p);
        for k in 2..n {
            if k.gcd(&n) == 1 {
                others = others.mul(&self.galois(k));
            }
        }
        let norm = self.mul(&others);
        let (a, b) = norm.as_rational().expect("norm is rational");
        Some(CycloValue { p: self.p, num: others.num.iter().map(|&c| ck(c.checked_mul(b))).collect(), den: ck(others.den.checked_mul(a)) }.normalize())
    }
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut r = Self::one(self.p);
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
    /// Evaluation under Z -> exp(2 pi i / 4p).
    pub fn to_complex(&self) -> Complex64 {
        let n = 4.0 * self.p as f64;
        let mut z = Complex64::new(0.0, 0.0);
        for (j, &c) in self.num.iter().enumerate() {
            if c != 0 {
                z += Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * j as f64 / n);
            }
        }
        z / self.den as f64
    }
    /// Coefficients as exact strings "n/d" (or "n") in the power basis.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.num
            .iter()
            .map(|&c| {
                let g = c.gcd(&self.den);
                let (n, d) = if g == 0 { (0, 1) } else { (c / g, self.den / g) };
                if d == 1 {
                    n.to_string()
                } else {
                    format!("{n}/{d}")
                }
            })
            .collect()
    }
}

impl fmt::Display for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(j, &c)| match j {
                0 => format!("{c}"),
                1 => format!("{c}*Z"),
                _ => format!("{c}*Z^{j}"),
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.den == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

impl fmt::Debug for CycloValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Integer accumulator over the group ring of Z/4p, for hot loops.
#[derive(Clone, Debug)]
pub struct CycloAcc {
    p: u32,
    c: Vec<i64>,
}

impl CycloAcc {
    pub fn new(p: u32) -> Self {
        CycloAcc { p, c: vec![0; 4 * p as usize] }
    }
    /// Adds sign * zeta_p^j.
    #[inline]
    pub fn add_zeta_p(&mut self, j: u32, sign: i64) {
        let idx = (4 * j as usize) % self.c.len();
        self.c[idx] += sign;
    }
    pub fn merge(&mut self, o: &CycloAcc) {
        for (a, b) in self.c.iter_mut().zip(&o.c) {
            *a += b;
        }
    }
    pub fn value(&self) -> CycloValue {
        let t = tables(self.p);
        let mut num = vec![0i128; CycloValue::phi(self.p)];
        for (j, &c) in self.c.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, &r) in t.red[j].iter().enumerate() {
                num[k] += c as i128 * r as i128;
            }
        }
        CycloValue { p: self.p, num, den: 1 }.normalize()
    }
}
