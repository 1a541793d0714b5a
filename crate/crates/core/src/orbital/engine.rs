//! Level-by-level enumeration of the coset sets X(t) and Y(t).
//!
//! A coset n N(O) is determined by the columns v_k = R_k / D_{k-1} of its
//! factors u_k (k = 2..r), with R_k taken modulo D_{k-1}. Writing g for the
//! leading (k-1)-block of tn t n', the k-block is
//! [[g, g v'], [tv g, tv g v' + t_k]], so integrality of every leading block
//! gives: R in ker(tg mod D), R' in ker(g mod D), and a bilinear condition
//! on (R, R') with values in O/D.

use crate::algebra::{Completion, Field, LocalElem, Poly};

/// Arithmetic of an integral ring O together with quotients O/D, seen as
/// K-vector spaces with a fixed basis.
pub trait Model {
    type E: Clone;
    /// The residue field K in which coordinates live.
    fn field(&self) -> &Field;
    fn zero(&self) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn scale(&self, a: &Self::E, c: u32) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    /// dim_K O/D
    fn deg(&self, d: &Self::E) -> usize;
    /// Coordinates of the integral element x modulo D.
    fn coords(&self, x: &Self::E, d: &Self::E) -> Vec<u32>;
    fn from_coords(&self, c: &[u32]) -> Self::E;
    /// x / D for x divisible by D.
    fn div_exact(&self, x: &Self::E, d: &Self::E) -> Self::E;
    /// Residue of R / D, in K.
    fn residue(&self, r: &Self::E, d: &Self::E) -> u32;
    /// Tr_{K/k}.
    fn trace(&self, x: u32) -> u32;
}

/// Completion of k(x) at a finite place; D is a power of the uniformizer.
pub struct LocalModel {
    pub comp: Completion,
}

impl Model for LocalModel {
    type E = LocalElem;
    fn field(&self) -> &Field {
        &self.comp.field
    }
    fn zero(&self) -> LocalElem {
        LocalElem::zero(&self.comp.field)
    }
    fn add(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        a.add(b)
    }
    fn mul(&self, a: &LocalElem, b: &LocalElem) -> LocalElem {
        a.mul(b)
    }
    fn scale(&self, a: &LocalElem, c: u32) -> LocalElem {
        a.scale(c)
    }
    fn is_zero(&self, a: &LocalElem) -> bool {
        a.is_zero()
    }
    fn deg(&self, d: &LocalElem) -> usize {
        d.v() as usize
    }
    fn coords(&self, x: &LocalElem, d: &LocalElem) -> Vec<u32> {
        x.laurent(0, d.v())
    }
    fn from_coords(&self, c: &[u32]) -> LocalElem {
        LocalElem::from_poly(Poly::new(&self.comp.field, c.to_vec()))
    }
    fn div_exact(&self, x: &LocalElem, d: &LocalElem) -> LocalElem {
        x.mul_pi_pow(-d.v())
    }
    fn residue(&self, r: &LocalElem, d: &LocalElem) -> u32 {
        let e = d.v();
        if e == 0 {
            return 0;
        }
        r.coeff(e - 1)
    }
    fn trace(&self, x: u32) -> u32 {
        self.comp.emb.trace(x)
    }
}

/// The polynomial ring k[x]; D is a monic polynomial and the residue is the
/// sum of the residues at all finite places.
pub struct GlobalModel {
    pub k: Field,
}

impl Model for GlobalModel {
    type E = Poly;
    fn field(&self) -> &Field {
        &self.k
    }
    fn zero(&self) -> Poly {
        Poly::zero(&self.k)
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b)
    }
    fn scale(&self, a: &Poly, c: u32) -> Poly {
        a.scale(c)
    }
    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
    fn deg(&self, d: &Poly) -> usize {
        d.degree().expect("nonzero divisor")
    }
    fn coords(&self, x: &Poly, d: &Poly) -> Vec<u32> {
        let n = self.deg(d);
        let r = x.rem(d);
        (0..n).map(|i| r.coeff(i)).collect()
    }
    fn from_coords(&self, c: &[u32]) -> Poly {
        Poly::new(&self.k, c.to_vec())
    }
    fn div_exact(&self, x: &Poly, d: &Poly) -> Poly {
        x.div_exact(d)
    }
    fn trace(&self, x: u32) -> u32 {
        x
    }
    fn residue(&self, r: &Poly, d: &Poly) -> u32 {
        let n = self.deg(d);
        if n == 0 {
            return 0;
        }
        r.rem(d).coeff(n - 1)
    }
}

/// The data of t seen level by level: g_1 = a_1, and for k = 2..r the
/// divisor D_{k-1} together with the integral element D_{k-1} t_k.
pub struct Problem<E> {
    pub a1: E,
    pub divisors: Vec<E>,
    pub dt: Vec<E>,
}

/// One enumerated coset (or pair of cosets).
#[derive(Clone, Debug)]
pub struct Leaf<E> {
    /// tn t n' (or tn t n); present when requested.
    pub g: Option<Vec<Vec<E>>>,
    /// traced residues of n_{i-1,i}, i = 2..r
    pub rho: Vec<u32>,
    /// traced residues of n'_{i-1,i} (equal to rho for X)
    pub rho_p: Vec<u32>,
    /// numerators R_k of the columns v_k = R_k / D_{k-1}, when requested
    pub cols: Option<(Vec<Vec<E>>, Vec<Vec<E>>)>,
    /// coordinates mod D_{r-1} of the last column g v' above the diagonal,
    /// when requested
    pub last_col: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// tn t n symmetric integral
    X,
    /// tn t n' integral
    Y,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub kind: Kind,
    pub keep_g: bool,
    pub keep_cols: bool,
    pub last_col: bool,
}

/// Kernel of the K-linear map with matrix m (rows x cols), as basis vectors.
pub fn kernel(k: &Field, m: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = m.to_vec();
    let mut pivots = vec![];
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(row, p);
        let inv = k.inv(a[row][c]);
        for x in a[row].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..a.len() {
            if i != row && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    let s = k.mul(f, a[row][j]);
                    a[i][j] = k.sub(a[i][j], s);
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(a[r][f]);
            }
            v
        })
        .collect()
}

/// Solutions of m x = rhs as (particular solution, kernel basis).
pub fn solve_affine(k: &Field, m: &[Vec<u32>], rhs: &[u32], cols: usize) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let rows = m.len();
    let w = cols + 1;
    let mut a = vec![0u32; rows * w];
    for (i, row) in m.iter().enumerate() {
        a[i * w..i * w + cols].copy_from_slice(row);
        a[i * w + cols] = rhs[i];
    }
    let mut pivots = Vec::with_capacity(cols);
    let mut row = 0;
    for c in 0..cols {
        let Some(p) = (row..rows).find(|&i| a[i * w + c] != 0) else { continue };
        if p != row {
            for j in 0..w {
                a.swap(row * w + j, p * w + j);
            }
        }
        let inv = k.inv(a[row * w + c]);
        for x in a[row * w..(row + 1) * w].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..rows {
            let f = a[i * w + c];
            if i != row && f != 0 {
                for j in c..w {
                    let s = k.mul(f, a[row * w + j]);
                    a[i * w + j] = k.sub(a[i * w + j], s);
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    if (row..rows).any(|i| a[i * w + cols] != 0) {
        return None;
    }
    let mut part = vec![0u32; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        part[pc] = a[r * w + cols];
    }
    let basis = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(a[r * w + f]);
            }
            v
        })
        .collect();
    Some((part, basis))
}

/// All vectors sum_i c_i b_i + base over K.
fn span_iter(k: &Field, base: &[u32], basis: &[Vec<u32>], mut f: impl FnMut(&[u32])) {
    let q = k.order();
    let d = basis.len();
    let mut digits = vec![0u32; d];
    let mut cur = base.to_vec();
    loop {
        f(&cur);
        // odometer step over the element codes of K, updating cur by the difference
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            let old = digits[i];
            let new = if old + 1 == q { 0 } else { old + 1 };
            digits[i] = new;
            let delta = k.sub(new, old);
            for (x, b) in cur.iter_mut().zip(&basis[i]) {
                *x = k.add(*x, k.mul(delta, *b));
            }
            if new != 0 {
                break;
            }
            i += 1;
        }
    }
}

/// A leaf as seen by a visitor; everything is borrowed from the walk.
pub struct LeafRef<'a, E> {
    pub g: Option<&'a [Vec<E>]>,
    pub rho: &'a [u32],
    pub rho_p: &'a [u32],
    pub cols: Option<(&'a [Vec<E>], &'a [Vec<E>])>,
    pub last_col: Option<&'a [Vec<u32>]>,
}

impl<E: Clone> LeafRef<'_, E> {
    pub fn to_owned(&self) -> Leaf<E> {
        Leaf {
            g: self.g.map(|g| g.to_vec()),
            rho: self.rho.to_vec(),
            rho_p: self.rho_p.to_vec(),
            cols: self.cols.map(|(a, b)| (a.to_vec(), b.to_vec())),
            last_col: self.last_col.map(|c| c.to_vec()),
        }
    }
}

struct Walk<E> {
    rho: Vec<u32>,
    rho_p: Vec<u32>,
    cols: (Vec<Vec<E>>, Vec<Vec<E>>),
    last_col: Vec<Vec<u32>>,
}

/// Enumerate X(t) or Y(t) for the given problem.
pub fn enumerate<M: Model>(model: &M, prob: &Problem<M::E>, opts: Options) -> Vec<Leaf<M::E>> {
    let mut out = vec![];
    visit(model, prob, opts, &mut |l| out.push(l.to_owned()));
    out
}

/// Call `f` on every leaf without materializing the list.
pub fn visit<M: Model>(model: &M, prob: &Problem<M::E>, opts: Options, f: &mut dyn FnMut(&LeafRef<M::E>)) {
    let mut st = Walk { rho: vec![], rho_p: vec![], cols: (vec![], vec![]), last_col: vec![] };
    descend(model, prob, opts, 1, &[vec![prob.a1.clone()]], &mut st, f);
}

#[allow(clippy::too_many_arguments)]
fn descend<M: Model>(
    model: &M,
    prob: &Problem<M::E>,
    opts: Options,
    level: usize,
    g: &[Vec<M::E>],
    st: &mut Walk<M::E>,
    f: &mut dyn FnMut(&LeafRef<M::E>),
) {
    if level == prob.divisors.len() + 1 {
        f(&LeafRef {
            g: opts.keep_g.then_some(g),
            rho: &st.rho,
            rho_p: &st.rho_p,
            cols: opts.keep_cols.then_some((&st.cols.0[..], &st.cols.1[..])),
            last_col: (opts.last_col && level > 1).then_some(&st.last_col[..]),
        });
        return;
    }
    let last = level == prob.divisors.len();
    let kf = model.field().clone();
    let d = &prob.divisors[level - 1];
    let dt = &prob.dt[level - 1];
    let e = model.deg(d);
    let n = level;
    let c = model.coords(dt, d);

    // basis of (O/D)^n: index (i, j) <-> x^j e_i
    let unit = |j: usize| {
        let mut v = vec![0u32; j + 1];
        v[j] = 1;
        model.from_coords(&v)
    };
    let monos: Vec<M::E> = (0..e).map(unit).collect();
    // matrix of R -> h R mod D, where h = g or tg
    let lin = |transpose: bool| -> Vec<Vec<u32>> {
        let mut rows = vec![vec![0u32; n * e]; n * e];
        for i in 0..n {
            for (j, mono) in monos.iter().enumerate() {
                for r in 0..n {
                    let entry = if transpose { &g[i][r] } else { &g[r][i] };
                    let col = model.coords(&model.mul(entry, mono), d);
                    for (s, &v) in col.iter().enumerate() {
                        rows[r * e + s][i * e + j] = v;
                    }
                }
            }
        }
        rows
    };
    let to_vec = |coef: &[u32]| -> Vec<M::E> { (0..n).map(|i| model.from_coords(&coef[i * e..(i + 1) * e])).collect() };
    // R_a, S_a = h R_a / D
    let basis_of = |transpose: bool| -> (Vec<Vec<M::E>>, Vec<Vec<M::E>>) {
        if e == 0 {
            return (vec![], vec![]);
        }
        let ker = kernel(&kf, &lin(transpose), n * e);
        let rs: Vec<Vec<M::E>> = ker.iter().map(|b| to_vec(b)).collect();
        let ss = rs
            .iter()
            .map(|r| {
                (0..n)
                    .map(|row| {
                        let mut acc = model.zero();
                        for (col, rc) in r.iter().enumerate() {
                            let entry = if transpose { &g[col][row] } else { &g[row][col] };
                            if !model.is_zero(rc) {
                                acc = model.add(&acc, &model.mul(entry, rc));
                            }
                        }
                        model.div_exact(&acc, d)
                    })
                    .collect()
            })
            .collect();
        (rs, ss)
    };
    let (rp, sp) = basis_of(false); // R' in ker g, S' = g R' / D
    let (rl, sl) = match opts.kind {
        Kind::X => (rp.clone(), sp.clone()),
        Kind::Y => basis_of(true), // R in ker tg, S = tg R / D
    };
    let dl = rl.len();
    let dp = rp.len();
    // T[a][b] = coords(tR_a S'_b mod D)
    let mut tens = vec![vec![vec![0u32; e]; dp]; dl];
    for a in 0..dl {
        for b in 0..dp {
            let mut acc = model.zero();
            for i in 0..n {
                if !model.is_zero(&rl[a][i]) {
                    acc = model.add(&acc, &model.mul(&rl[a][i], &sp[b][i]));
                }
            }
            tens[a][b] = model.coords(&acc, d);
        }
    }
    let comb = |basis: &[Vec<M::E>], lam: &[u32]| -> Vec<M::E> {
        (0..n)
            .map(|i| {
                let mut acc = model.zero();
                for (b, &l) in basis.iter().zip(lam) {
                    if l != 0 && !model.is_zero(&b[i]) {
                        acc = model.add(&acc, &model.scale(&b[i], l));
                    }
                }
                acc
            })
            .collect()
    };
    let dot = |f: &[u32], x: &[u32]| f.iter().zip(x).fold(0u32, |s, (&a, &b)| kf.add(s, kf.mul(a, b)));
    let res_l: Vec<u32> = rl.iter().map(|r| model.residue(&r[n - 1], d)).collect();
    let res_p: Vec<u32> = rp.iter().map(|r| model.residue(&r[n - 1], d)).collect();
    let want_last = last && opts.last_col;
    let col_coords: Vec<Vec<Vec<u32>>> =
        if want_last { sp.iter().map(|s| s.iter().map(|x| model.coords(x, d)).collect()).collect() } else { vec![] };
    if want_last {
        st.last_col = vec![vec![0u32; e]; n];
    }
    let exact = !last || opts.keep_g || opts.keep_cols;
    let mut child = |lam: &[u32], mu: &[u32]| {
        st.rho.push(model.trace(dot(&res_l, lam)));
        st.rho_p.push(model.trace(dot(&res_p, mu)));
        if want_last {
            for (i, v) in st.last_col.iter_mut().enumerate() {
                v.iter_mut().for_each(|x| *x = 0);
                for (b, &m) in mu.iter().enumerate() {
                    if m != 0 {
                        for (x, &y) in v.iter_mut().zip(&col_coords[b][i]) {
                            *x = kf.add(*x, kf.mul(m, y));
                        }
                    }
                }
            }
        }
        let mut g2 = vec![];
        if exact {
            let r = comb(&rl, lam);
            let rpr = comb(&rp, mu);
            if !last || opts.keep_g {
                let s = comb(&sl, lam);
                let s2 = comb(&sp, mu);
                let mut acc = dt.clone();
                for i in 0..n {
                    if !model.is_zero(&r[i]) {
                        acc = model.add(&acc, &model.mul(&r[i], &s2[i]));
                    }
                }
                let corner = model.div_exact(&acc, d);
                g2 = g
                    .iter()
                    .zip(&s2)
                    .map(|(row, x)| {
                        let mut row = row.clone();
                        row.push(x.clone());
                        row
                    })
                    .collect();
                let mut bottom = s;
                bottom.push(corner);
                g2.push(bottom);
            }
            if opts.keep_cols {
                st.cols.0.push(r);
                st.cols.1.push(rpr);
            }
        }
        descend(model, prob, opts, level + 1, &g2, st, f);
        if exact && opts.keep_cols {
            st.cols.0.pop();
            st.cols.1.pop();
        }
        st.rho.pop();
        st.rho_p.pop();
    };
    let zero_l = vec![0u32; dl];
    let ident = identity_basis(dl);
    match opts.kind {
        Kind::X => {
            let mut val = vec![0u32; e];
            span_iter(&kf, &zero_l, &ident, |lam| {
                val.copy_from_slice(&c);
                for a in 0..dl {
                    if lam[a] == 0 {
                        continue;
                    }
                    for b in 0..dl {
                        if lam[b] == 0 {
                            continue;
                        }
                        let f = kf.mul(lam[a], lam[b]);
                        for s in 0..e {
                            val[s] = kf.add(val[s], kf.mul(f, tens[a][b][s]));
                        }
                    }
                }
                if val.iter().all(|&x| x == 0) {
                    child(lam, lam);
                }
            });
        }
        Kind::Y => {
            let rhs: Vec<u32> = c.iter().map(|&x| kf.neg(x)).collect();
            let mut m = vec![vec![0u32; dp]; e];
            span_iter(&kf, &zero_l, &ident, |lam| {
                m.iter_mut().for_each(|row| row.iter_mut().for_each(|x| *x = 0));
                for a in 0..dl {
                    if lam[a] == 0 {
                        continue;
                    }
                    for b in 0..dp {
                        for s in 0..e {
                            m[s][b] = kf.add(m[s][b], kf.mul(lam[a], tens[a][b][s]));
                        }
                    }
                }
                if let Some((part, basis)) = solve_affine(&kf, &m, &rhs, dp) {
                    span_iter(&kf, &part, &basis, |mu| child(lam, mu));
                }
            });
        }
    }
}

fn identity_basis(d: usize) -> Vec<Vec<u32>> {
    (0..d)
        .map(|i| {
            let mut v = vec![0u32; d];
            v[i] = 1;
            v
        })
        .collect()
}

#[cfg(test)]
fn collect_span(k: &Field, base: &[u32], basis: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = vec![];
    span_iter(k, base, basis, |v| out.push(v.to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn span_covers_extension_field() {
        let k = Field::new(3, 2).unwrap();
        let mut seen = collect_span(&k, &[0, 0], &identity_basis(2));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 81);
    }

    proptest! {
        #[test]
        fn affine_solutions_are_complete(p in prop::sample::select(vec![3u32, 5]), m in 1u32..3, rows in 1usize..3, cols in 1usize..4, seed in proptest::collection::vec(0u32..25, 12), rhs in proptest::collection::vec(0u32..25, 3)) {
            let k = Field::new(p, m).unwrap();
            let q = k.order();
            let m: Vec<Vec<u32>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j] % q).collect()).collect();
            let rhs: Vec<u32> = rhs[..rows].iter().map(|x| x % q).collect();
            let mut brute = vec![];
            for code in 0..q.pow(cols as u32) {
                let x: Vec<u32> = (0..cols).map(|j| (code / q.pow(j as u32)) % q).collect();
                let ok = (0..rows).all(|i| (0..cols).fold(0u32, |acc, j| k.add(acc, k.mul(m[i][j], x[j]))) == rhs[i]);
                if ok { brute.push(x); }
            }
            let mut fast = match solve_affine(&k, &m, &rhs, cols) {
                Some((part, basis)) => collect_span(&k, &part, &basis),
                None => vec![],
            };
            fast.sort();
            brute.sort();
            prop_assert_eq!(fast, brute);
        }
    }
}
