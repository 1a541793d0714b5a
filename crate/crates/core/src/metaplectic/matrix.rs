//! Square matrices over a local field K((pi)).

use std::fmt;

use crate::algebra::{Field, LocalElem};

use super::MetaError;

#[derive(Clone, PartialEq, Eq)]
pub struct LocalMatrix {
    r: usize,
    e: Vec<LocalElem>,
}

impl fmt::Debug for LocalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.r {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.r {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl LocalMatrix {
    pub fn from_fn(r: usize, mut f: impl FnMut(usize, usize) -> LocalElem) -> LocalMatrix {
        assert!(r >= 1);
        let mut e = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                e.push(f(i, j));
            }
        }
        LocalMatrix { r, e }
    }
    pub fn from_rows(rows: Vec<Vec<LocalElem>>) -> LocalMatrix {
        let r = rows.len();
        assert!(rows.iter().all(|row| row.len() == r), "matrix must be square");
        LocalMatrix { r, e: rows.into_iter().flatten().collect() }
    }
    pub fn identity(k: &Field, r: usize) -> LocalMatrix {
        Self::from_fn(r, |i, j| if i == j { LocalElem::one(k) } else { LocalElem::zero(k) })
    }
    pub fn diag(t: &[LocalElem]) -> LocalMatrix {
        let k = t[0].field().clone();
        Self::from_fn(t.len(), |i, j| if i == j { t[i].clone() } else { LocalElem::zero(&k) })
    }
    /// Permutation matrix with a 1 at (w[j], j).
    pub fn permutation(k: &Field, w: &[usize]) -> LocalMatrix {
        Self::from_fn(w.len(), |i, j| if w[j] == i { LocalElem::one(k) } else { LocalElem::zero(k) })
    }
    /// diag(t) times the permutation matrix of w.
    pub fn monomial(t: &[LocalElem], w: &[usize]) -> LocalMatrix {
        let k = t[0].field().clone();
        Self::from_fn(w.len(), |i, j| if w[j] == i { t[i].clone() } else { LocalElem::zero(&k) })
    }
    /// The antidiagonal permutation w0.
    pub fn w0(k: &Field, r: usize) -> LocalMatrix {
        let w: Vec<usize> = (0..r).rev().collect();
        Self::permutation(k, &w)
    }
    pub fn size(&self) -> usize {
        self.r
    }
    pub fn field(&self) -> &Field {
        self.e[0].field()
    }
    pub fn get(&self, i: usize, j: usize) -> &LocalElem {
        &self.e[i * self.r + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: LocalElem) {
        self.e[i * self.r + j] = v;
    }
    pub fn mul(&self, o: &LocalMatrix) -> LocalMatrix {
        assert_eq!(self.r, o.r);
        let k = self.field().clone();
        Self::from_fn(self.r, |i, j| {
            let mut s = LocalElem::zero(&k);
            for l in 0..self.r {
                let (a, b) = (self.get(i, l), o.get(l, j));
                if !a.is_zero() && !b.is_zero() {
                    s = s.add(&a.mul(b));
                }
            }
            s
        })
    }
    pub fn transpose(&self) -> LocalMatrix {
        Self::from_fn(self.r, |i, j| self.get(j, i).clone())
    }
    /// Determinant by elimination over the fraction field.
    pub fn det(&self) -> LocalElem {
        let k = self.field().clone();
        let mut a = self.clone();
        let mut d = LocalElem::one(&k);
        for c in 0..self.r {
            let Some(p) = (c..self.r).min_by_key(|&i| a.get(i, c).v()).filter(|&i| !a.get(i, c).is_zero()) else {
                return LocalElem::zero(&k);
            };
            if p != c {
                a.swap_rows(p, c);
                d = d.neg();
            }
            let piv = a.get(c, c).clone();
            d = d.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for i in c + 1..self.r {
                if !a.get(i, c).is_zero() {
                    let f = a.get(i, c).mul(&inv).neg();
                    a.add_row_multiple(i, c, &f);
                }
            }
        }
        d
    }
    pub fn is_integral(&self) -> bool {
        self.e.iter().all(|x| x.is_integral())
    }
    /// Membership in GL_r(O): integral entries and unit determinant.
    pub fn is_gl_o(&self) -> bool {
        self.is_integral() && self.det().is_unit()
    }
    pub fn is_upper_unipotent(&self) -> bool {
        (0..self.r).all(|i| {
            (0..self.r).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => *self.get(i, j) == LocalElem::one(self.field()),
                std::cmp::Ordering::Greater => self.get(i, j).is_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }
    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<LocalMatrix, MetaError> {
        let r = self.r;
        let k = self.field().clone();
        let mut a = self.clone();
        let mut b = Self::identity(&k, r);
        for c in 0..r {
            let p = (c..r).find(|&i| !a.get(i, c).is_zero()).ok_or(MetaError::Singular)?;
            a.swap_rows(p, c);
            b.swap_rows(p, c);
            let inv = a.get(c, c).inv().expect("nonzero pivot");
            a.scale_row(c, &inv);
            b.scale_row(c, &inv);
            for i in 0..r {
                if i != c && !a.get(i, c).is_zero() {
                    let f = a.get(i, c).neg();
                    a.add_row_multiple(i, c, &f);
                    b.add_row_multiple(i, c, &f);
                }
            }
        }
        Ok(b)
    }
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.r {
                self.e.swap(a * self.r + j, b * self.r + j);
            }
        }
    }
    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.r {
                self.e.swap(i * self.r + a, i * self.r + b);
            }
        }
    }
    pub fn scale_row(&mut self, i: usize, f: &LocalElem) {
        for j in 0..self.r {
            let v = self.get(i, j).mul(f);
            self.set(i, j, v);
        }
    }
    /// row `dst` += f * row `src`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, f: &LocalElem) {
        for j in 0..self.r {
            let s = self.get(src, j);
            if !s.is_zero() {
                let v = self.get(dst, j).add(&s.mul(f));
                self.set(dst, j, v);
            }
        }
    }
    /// column `dst` += f * column `src`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, f: &LocalElem) {
        for i in 0..self.r {
            let s = self.get(i, src);
            if !s.is_zero() {
                let v = self.get(i, dst).add(&s.mul(f));
                self.set(i, dst, v);
            }
        }
    }
}
