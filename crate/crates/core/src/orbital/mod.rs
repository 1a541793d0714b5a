//! Local orbit sets X(t), Y(t), the characters theta and theta', the orbital
//! sums I_v, J_v and the transfer factors.
//!
//! The I-sum uses theta_alpha(n) = Psi(sum alpha_i n_{i-1,i}) and the J-sum
//! the half character theta'_alpha = Psi(1/2 sum alpha_i n_{i-1,i}), so that
//! theta'^2 = theta. Since theta'_{alpha-bar}(w0 tn w0) = theta'_alpha(n),
//! the J weight of a pair is Psi(1/2 sum alpha_i (n_{i-1,i} + n'_{i-1,i})).

pub mod engine;

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{CycloAcc, CycloValue, Completion, Field, LocalElem, Poly};
use crate::metaplectic::{kappa_general, kappa_kubota, LocalMatrix, MetaError};
use crate::symbols::{weil_gamma, zeta_char, SymbolError};

pub use engine::{GlobalModel, Kind, Leaf, LeafRef, LocalModel, Model, Options, Problem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitalError {
    Empty,
    ZeroEntry(usize),
    InfinitePlace,
    Symbol(SymbolError),
    Meta(MetaError),
}

impl fmt::Display for OrbitalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitalError::Empty => write!(f, "empty torus parameter"),
            OrbitalError::ZeroEntry(i) => write!(f, "a_{} is zero", i + 1),
            OrbitalError::InfinitePlace => write!(f, "orbit sets are only defined at finite places"),
            OrbitalError::Symbol(e) => write!(f, "{e}"),
            OrbitalError::Meta(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for OrbitalError {}

impl From<SymbolError> for OrbitalError {
    fn from(e: SymbolError) -> Self {
        OrbitalError::Symbol(e)
    }
}

impl From<MetaError> for OrbitalError {
    fn from(e: MetaError) -> Self {
        OrbitalError::Meta(e)
    }
}

/// t = diag(a_1, a_2/a_1, ..., a_r/a_{r-1}), stored through the a_i.
#[derive(Clone, Debug)]
pub struct TorusParam {
    pub a: Vec<LocalElem>,
}

impl TorusParam {
    pub fn new(a: Vec<LocalElem>) -> Result<TorusParam, OrbitalError> {
        if a.is_empty() {
            return Err(OrbitalError::Empty);
        }
        if let Some(i) = a.iter().position(|x| x.is_zero()) {
            return Err(OrbitalError::ZeroEntry(i));
        }
        Ok(TorusParam { a })
    }
    /// The parameter of diag(t_1, ..., t_r).
    pub fn from_diagonal(t: &[LocalElem]) -> Result<TorusParam, OrbitalError> {
        let mut a: Vec<LocalElem> = Vec::with_capacity(t.len());
        for x in t {
            a.push(match a.last() {
                Some(prev) => prev.mul(x),
                None => x.clone(),
            });
        }
        TorusParam::new(a)
    }
    pub fn r(&self) -> usize {
        self.a.len()
    }
    pub fn field(&self) -> &Field {
        self.a[0].field()
    }
    /// t_i (1-based), with a_0 = 1.
    pub fn t(&self, i: usize) -> LocalElem {
        if i == 1 {
            self.a[0].clone()
        } else {
            self.a[i - 1].div(&self.a[i - 2]).expect("nonzero")
        }
    }
    pub fn diagonal(&self) -> Vec<LocalElem> {
        (1..=self.r()).map(|i| self.t(i)).collect()
    }
    /// v(a_i) >= 0 for i < r and v(a_r) = 0.
    pub fn admissible(&self) -> bool {
        let r = self.r();
        self.a[..r - 1].iter().all(|x| x.v() >= 0) && self.a[r - 1].v() == 0
    }
    /// Some a_i is not integral; both orbit sets are then empty.
    fn degenerate(&self) -> bool {
        self.a.iter().any(|x| x.v() < 0)
    }
    fn problem(&self) -> Problem<LocalElem> {
        let k = self.field();
        let r = self.r();
        let divisors: Vec<LocalElem> = self.a[..r - 1].iter().map(|x| LocalElem::pi_pow(k, x.v())).collect();
        let dt = (1..r).map(|i| self.a[i].div(&self.a[i - 1]).expect("nonzero").mul_pi_pow(self.a[i - 1].v())).collect();
        Problem { a1: self.a[0].clone(), divisors, dt }
    }
    /// Multiply every a_i by the matching unit.
    pub fn rescaled(&self, units: &[LocalElem]) -> TorusParam {
        TorusParam { a: self.a.iter().zip(units).map(|(a, u)| a.mul(u)).collect() }
    }
}

/// n = u_2 ... u_r, where u_k is the identity except for column k, whose
/// entries above the diagonal are `cols[k-2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetRep {
    pub cols: Vec<Vec<LocalElem>>,
}

impl CosetRep {
    pub fn identity(k: &Field, r: usize) -> CosetRep {
        CosetRep { cols: (1..r).map(|j| vec![LocalElem::zero(k); j]).collect() }
    }
    pub fn r(&self) -> usize {
        self.cols.len() + 1
    }
    /// n_{i-1,i} (1-based i = 2..r).
    pub fn superdiagonal(&self, i: usize) -> &LocalElem {
        self.cols[i - 2].last().expect("nonempty column")
    }
    pub fn matrix(&self, k: &Field) -> LocalMatrix {
        let r = self.r();
        let mut n = LocalMatrix::identity(k, r);
        for (c, col) in self.cols.iter().enumerate() {
            let mut u = LocalMatrix::identity(k, r);
            for (i, x) in col.iter().enumerate() {
                u.set(i, c + 1, x.clone());
            }
            n = n.mul(&u);
        }
        n
    }
}

fn local_model(c: &Completion) -> Result<LocalModel, OrbitalError> {
    if c.place.is_infinite() {
        return Err(OrbitalError::InfinitePlace);
    }
    Ok(LocalModel { comp: c.clone() })
}

/// The Laurent expansion in the completion: the uniformizer there is
/// x - lambda, so a in K((pi)) is taken as is.
fn check_field(t: &TorusParam, c: &Completion) {
    assert_eq!(t.field(), &c.field, "torus parameter must live in the residue field of the place");
}

fn leaves(t: &TorusParam, c: &Completion, kind: Kind, opts: (bool, bool, bool)) -> Result<Vec<Leaf<LocalElem>>, OrbitalError> {
    check_field(t, c);
    let model = local_model(c)?;
    if t.degenerate() {
        return Ok(vec![]);
    }
    let (keep_g, keep_cols, last_col) = opts;
    Ok(engine::enumerate(&model, &t.problem(), Options { kind, keep_g, keep_cols, last_col }))
}

fn visit_leaves(
    t: &TorusParam,
    c: &Completion,
    kind: Kind,
    opts: (bool, bool, bool),
    f: &mut dyn FnMut(&LeafRef<LocalElem>),
) -> Result<(), OrbitalError> {
    check_field(t, c);
    let model = local_model(c)?;
    if !t.degenerate() {
        let (keep_g, keep_cols, last_col) = opts;
        engine::visit(&model, &t.problem(), Options { kind, keep_g, keep_cols, last_col }, f);
    }
    Ok(())
}

fn rep_of(cols: &[Vec<LocalElem>], divs: &[LocalElem]) -> CosetRep {
    CosetRep { cols: cols.iter().zip(divs).map(|(col, d)| col.iter().map(|x| x.mul_pi_pow(-d.v())).collect()).collect() }
}

/// X(t) = { n in N(F)/N(O) : tn t n symmetric integral }.
pub fn enumerate_x(t: &TorusParam, c: &Completion) -> Result<Vec<CosetRep>, OrbitalError> {
    let divs = t.problem().divisors;
    Ok(leaves(t, c, Kind::X, (false, true, false))?
        .into_iter()
        .map(|l| rep_of(&l.cols.expect("kept").0, &divs))
        .collect())
}

/// Y(t) = { (n, n') : tn t n' in GL_r(O) }, or in gl_r(O) when v | a_r.
pub fn enumerate_y(t: &TorusParam, c: &Completion) -> Result<Vec<(CosetRep, CosetRep)>, OrbitalError> {
    let divs = t.problem().divisors;
    Ok(leaves(t, c, Kind::Y, (false, true, false))?
        .into_iter()
        .map(|l| {
            let (a, b) = l.cols.expect("kept");
            (rep_of(&a, &divs), rep_of(&b, &divs))
        })
        .collect())
}

/// theta_alpha(n), or theta'_alpha(n) when `half`; alpha_i in the constant field.
pub fn theta(n: &CosetRep, alpha: &[u32], c: &Completion, half: bool) -> CycloValue {
    let k = &c.base;
    let mut s = 0u32;
    for (i, &a) in (2..=n.r()).zip(alpha) {
        s = k.add(s, k.mul(a, c.traced_residue(n.superdiagonal(i))));
    }
    if half {
        s = k.mul(s, k.half());
    }
    CycloValue::psi(k, s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitalSum {
    pub value: CycloValue,
    pub cardinality: usize,
}

/// Leaves grouped by their weight: residue vector -> multiplicity (signed by
/// kappa for J). Evaluating at any alpha is then a short character sum.
#[derive(Clone, Debug)]
pub struct WeightTable {
    pub field: Field,
    pub half: bool,
    pub cardinality: usize,
    pub counts: BTreeMap<Vec<u32>, i64>,
}

impl WeightTable {
    pub fn new(k: &Field, half: bool) -> WeightTable {
        WeightTable { field: k.clone(), half, cardinality: 0, counts: BTreeMap::new() }
    }
    pub fn add(&mut self, key: &[u32], w: i64) {
        self.cardinality += 1;
        if w != 0 {
            match self.counts.get_mut(key) {
                Some(x) => *x += w,
                None => {
                    self.counts.insert(key.to_vec(), w);
                }
            }
        }
    }
    pub fn eval(&self, alpha: &[u32]) -> OrbitalSum {
        let k = &self.field;
        let mut acc = CycloAcc::new(k.p());
        for (key, &w) in &self.counts {
            if w == 0 {
                continue;
            }
            let mut s = key.iter().zip(alpha).fold(0u32, |s, (&x, &a)| k.add(s, k.mul(x, a)));
            if self.half {
                s = k.mul(s, k.half());
            }
            acc.add_zeta_p(k.abs_trace(s), w);
        }
        OrbitalSum { value: acc.value(), cardinality: self.cardinality }
    }
    /// Product of independent sums over disjoint coordinate sets is not
    /// needed; tables at several places are combined by convolution.
    pub fn convolve(&self, o: &WeightTable) -> WeightTable {
        let k = &self.field;
        let mut out = WeightTable::new(k, self.half);
        out.cardinality = self.cardinality * o.cardinality;
        for (a, &x) in &self.counts {
            for (b, &y) in &o.counts {
                let key: Vec<u32> = a.iter().zip(b).map(|(&u, &v)| k.add(u, v)).collect();
                *out.counts.entry(key).or_insert(0) += x * y;
            }
        }
        out.counts.retain(|_, w| *w != 0);
        out
    }
}

/// zeta(N kappa(w0 g)) for g in GL_r(O_v).
pub fn kappa_sign(g: &[Vec<LocalElem>], c: &Completion) -> Result<i32, OrbitalError> {
    let r = g.len();
    let m = LocalMatrix::from_fn(r, |i, j| g[r - 1 - i][j].clone());
    let kv = if r == 2 { kappa_kubota(&m)? } else if r == 1 { return Ok(1) } else { kappa_general(&m)? };
    Ok(zeta_char(&c.base, kv.norm(&c.emb)))
}

/// Weight table of X(t) for the I-sum.
pub fn i_table(t: &TorusParam, c: &Completion) -> Result<WeightTable, OrbitalError> {
    let mut tab = WeightTable::new(&c.base, false);
    visit_leaves(t, c, Kind::X, (false, false, false), &mut |l| tab.add(l.rho, 1))?;
    Ok(tab)
}

/// Weight table of Y(t) for the J-sum; kappa enters iff v does not divide a_r.
pub fn j_table(t: &TorusParam, c: &Completion) -> Result<WeightTable, OrbitalError> {
    j_table_with(t, c, t.r() == 2)
}

/// For r = 2 the Kubota value {a_1, d / det(w0 g)} only needs the leading
/// coefficient of d = a_1 v', read off the coordinates; `short` selects that
/// route instead of building each matrix.
fn j_table_with(t: &TorusParam, c: &Completion, short: bool) -> Result<WeightTable, OrbitalError> {
    let with_kappa = t.a[t.r() - 1].v() == 0;
    let short = short && t.r() == 2;
    let k = &c.base;
    let kv = &c.field;
    let e = t.a[0].v();
    let mut tab = WeightTable::new(k, true);
    let opts = (with_kappa && !short, false, with_kappa && short);
    let mut key = vec![];
    let mut err = None;
    visit_leaves(t, c, Kind::Y, opts, &mut |l| {
        let w = if !with_kappa || e == 0 && short {
            1
        } else if short {
            // det(w0 g) = -a_2 is a unit, so d = g_{12} is a unit as well
            let d0 = l.last_col.expect("kept")[0][0];
            assert!(d0 != 0, "off-diagonal entry of an element of GL_2(O) with c in the maximal ideal");
            let ang = kv.div(kv.neg(d0), t.a[1].angular());
            zeta_char(k, c.emb.norm(kv.pow(ang, -e)))
        } else {
            match kappa_sign(l.g.expect("kept"), c) {
                Ok(w) => w,
                Err(x) => {
                    err.get_or_insert(x);
                    0
                }
            }
        };
        key.clear();
        key.extend(l.rho.iter().zip(l.rho_p).map(|(&x, &y)| k.add(x, y)));
        tab.add(&key, w as i64);
    })?;
    match err {
        Some(x) => Err(x),
        None => Ok(tab),
    }
}

pub fn i_local(t: &TorusParam, alpha: &[u32], c: &Completion) -> Result<OrbitalSum, OrbitalError> {
    Ok(i_table(t, c)?.eval(alpha))
}

pub fn j_local(t: &TorusParam, alpha: &[u32], c: &Completion) -> Result<OrbitalSum, OrbitalError> {
    Ok(j_table(t, c)?.eval(alpha))
}

/// The transfer factor: with S the indices j in 1..r with j + r odd
/// (`prime = false`) or even (`prime = true`),
/// |a_1 ... a_{r-1}|^{-1/2} zeta(-1)^{sum_S v(a_j)} prod_S gamma(a_j / a_{j-1}).
pub fn transfer_factor(t: &TorusParam, c: &Completion, prime: bool) -> Result<CycloValue, OrbitalError> {
    check_field(t, c);
    let k = &c.field;
    let r = t.r();
    let p = k.p();
    let vsum: i64 = t.a[..r - 1].iter().map(|x| x.v()).sum();
    let mut acc = CycloValue::q_pow_half(p, k.degree(), vsum);
    let mut sv = 0i64;
    for j in 1..=r {
        if ((j + r) % 2 == 0) != prime {
            continue;
        }
        sv += t.a[j - 1].v();
        acc = acc.mul(&weil_gamma(&t.t(j), c)?.value);
    }
    if sv.rem_euclid(2) == 1 {
        acc = acc.scale(zeta_char(k, k.neg(1)) as i64);
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct JacquetMao {
    pub i: CycloValue,
    pub j: CycloValue,
    pub tf: CycloValue,
    pub tf_prime: CycloValue,
    pub card_x: usize,
    pub card_y: usize,
    /// alpha_sign(t, alpha)
    pub eps: i32,
}

impl JacquetMao {
    /// J = tf I and J = tf' I; when tf != tf', also I = J = 0.
    pub fn holds(&self) -> bool {
        let ok = self.j == self.tf.mul(&self.i) && self.j == self.tf_prime.mul(&self.i);
        if self.tf != self.tf_prime {
            ok && self.i.is_zero() && self.j.is_zero()
        } else {
            ok
        }
    }
    /// The same comparison with both factors multiplied by `eps`.
    pub fn holds_normalized(&self) -> bool {
        let tf = self.tf.scale(self.eps as i64);
        let tfp = self.tf_prime.scale(self.eps as i64);
        let ok = self.j == tf.mul(&self.i) && self.j == tfp.mul(&self.i);
        if self.tf != self.tf_prime {
            ok && self.i.is_zero() && self.j.is_zero()
        } else {
            ok
        }
    }
}

/// prod_{i=2..r} zeta_v(-alpha_i)^{v(a_{i-1})}: the I-sum at alpha is the
/// I-sum at (1, ..., 1) for the twisted character Psi_alpha, and the Weil
/// indices of Psi_alpha and Psi differ by exactly these signs.
pub fn alpha_sign(t: &TorusParam, alpha: &[u32], c: &Completion) -> i32 {
    let k = &c.base;
    let d = (c.field.degree() / k.degree()) as i64;
    let mut s = 1;
    for (i, &a) in (2..=t.r()).zip(alpha) {
        if t.a[i - 2].v().rem_euclid(2) == 1 {
            s *= zeta_char(k, k.pow(k.neg(a), d));
        }
    }
    s
}

/// I, J, tf, tf' for one t and every alpha in `alphas`.
pub fn jacquet_mao_all(t: &TorusParam, alphas: &[Vec<u32>], c: &Completion) -> Result<Vec<JacquetMao>, OrbitalError> {
    let it = i_table(t, c)?;
    let jt = j_table(t, c)?;
    let tf = transfer_factor(t, c, false)?;
    let tf_prime = transfer_factor(t, c, true)?;
    Ok(alphas
        .iter()
        .map(|a| JacquetMao {
            i: it.eval(a).value,
            j: jt.eval(a).value,
            tf: tf.clone(),
            tf_prime: tf_prime.clone(),
            card_x: it.cardinality,
            card_y: jt.cardinality,
            eps: alpha_sign(t, a, c),
        })
        .collect())
}

pub fn jacquet_mao_check(t: &TorusParam, alpha: &[u32], c: &Completion) -> Result<JacquetMao, OrbitalError> {
    Ok(jacquet_mao_all(t, &[alpha.to_vec()], c)?.remove(0))
}

/// Representatives of (O / pi^m)^* as polynomial units of degree < m.
pub fn units_mod(k: &Field, m: usize) -> Vec<LocalElem> {
    let q = k.order() as u64;
    (0..q.pow(m as u32))
        .filter(|code| code % q != 0)
        .map(|code| {
            let c: Vec<u32> = (0..m).map(|j| ((code / q.pow(j as u32)) % q) as u32).collect();
            LocalElem::from_poly(Poly::new(k, c))
        })
        .collect()
}

/// All of (k^*)^{r-1}, in lexicographic order.
pub fn alpha_grid(k: &Field, r: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 1..r {
        out = out.into_iter().flat_map(|a| (1..k.order()).map(move |x| [a.clone(), vec![x]].concat())).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(p: u32) -> (Field, Completion) {
        let k = Field::new(p, 1).unwrap();
        let c = Completion::origin(&k);
        (k, c)
    }

    fn le(k: &Field, c: &[u32], v: i64) -> LocalElem {
        LocalElem::from_coeffs(k, c, v)
    }

    #[test]
    fn unit_torus() {
        let (k, c) = setup(5);
        let t = TorusParam::new(vec![le(&k, &[2, 1], 0), le(&k, &[3], 0), le(&k, &[1, 4], 0)]).unwrap();
        let x = enumerate_x(&t, &c).unwrap();
        assert_eq!(x, vec![CosetRep::identity(&k, 3)]);
        assert_eq!(enumerate_y(&t, &c).unwrap().len(), 1);
        let jm = jacquet_mao_check(&t, &[1, 2], &c).unwrap();
        assert!(jm.i.is_one() && jm.j.is_one() && jm.tf.is_one() && jm.tf_prime.is_one());
    }

    #[test]
    fn rank_two_witness() {
        let (k, c) = setup(3);
        let pi = LocalElem::pi_pow(&k, 1);
        let t = TorusParam::from_diagonal(&[pi.clone(), pi.inv().unwrap().neg()]).unwrap();
        let x = enumerate_x(&t, &c).unwrap();
        let mut res: Vec<u32> = x.iter().map(|n| n.superdiagonal(2).residue()).collect();
        res.sort();
        assert_eq!(res, vec![1, 2]);
        let mut pairs: Vec<(u32, u32)> = enumerate_y(&t, &c)
            .unwrap()
            .iter()
            .map(|(n, m)| (n.superdiagonal(2).residue(), m.superdiagonal(2).residue()))
            .collect();
        pairs.sort();
        assert_eq!(pairs, vec![(1, 1), (2, 2)]);
        let z1 = CycloValue::zeta_p(3, 1);
        let z2 = CycloValue::zeta_p(3, 2);
        let jm = jacquet_mao_check(&t, &[1], &c).unwrap();
        assert_eq!(jm.i, CycloValue::from_int(3, -1));
        assert_eq!(jm.j, z1.sub(&z2));
        assert_eq!((jm.card_x, jm.card_y), (2, 2));
        let n = CosetRep { cols: vec![vec![LocalElem::pi_pow(&k, -1)]] };
        assert_eq!(theta(&n, &[1], &c, false), z1);
    }

    #[test]
    fn nonsquare_witness_is_empty() {
        let (k, c) = setup(3);
        let pi = LocalElem::pi_pow(&k, 1);
        let t = TorusParam::from_diagonal(&[pi.clone(), pi.inv().unwrap()]).unwrap();
        assert!(enumerate_x(&t, &c).unwrap().is_empty());
        let mut pairs: Vec<(u32, u32)> = enumerate_y(&t, &c)
            .unwrap()
            .iter()
            .map(|(n, m)| (n.superdiagonal(2).residue(), m.superdiagonal(2).residue()))
            .collect();
        pairs.sort();
        assert_eq!(pairs, vec![(1, 2), (2, 1)]);
        let jm = jacquet_mao_check(&t, &[1], &c).unwrap();
        assert!(jm.i.is_zero() && jm.j.is_zero());
        assert_ne!(jm.tf, jm.tf_prime);
    }

    #[test]
    fn short_kappa_matches_kubota() {
        for p in [3u32, 5] {
            let (k, c) = setup(p);
            for e in 0..=2 {
                for (u1, u2) in [(1u32, 1u32), (2, 1), (1, 2), (3 % p, 2)] {
                    if u1 == 0 {
                        continue;
                    }
                    let t = TorusParam::new(vec![le(&k, &[u1, 1], e), le(&k, &[u2, 2], 0)]).unwrap();
                    let fast = j_table_with(&t, &c, true).unwrap();
                    let slow = j_table_with(&t, &c, false).unwrap();
                    assert_eq!(fast.counts, slow.counts, "p={p} e={e}");
                    assert_eq!(fast.cardinality, slow.cardinality);
                }
            }
        }
    }

    #[test]
    fn normalized_identity_rank_two() {
        let (k, c) = setup(3);
        let pi = LocalElem::pi_pow(&k, 1);
        let t = TorusParam::from_diagonal(&[pi.clone(), pi.inv().unwrap().neg()]).unwrap();
        let jm = jacquet_mao_check(&t, &[1], &c).unwrap();
        assert_eq!(jm.eps, -1);
        assert!(!jm.holds() && jm.holds_normalized());
        let jm = jacquet_mao_check(&t, &[2], &c).unwrap();
        assert_eq!(jm.eps, 1);
        assert!(jm.holds() && jm.holds_normalized());
    }

    #[test]
    fn rank_two_tf_is_gamma_of_minus_t1() {
        let (k, c) = setup(5);
        for u in 1..5 {
            let t1 = le(&k, &[u, 1], 1);
            for s in 1..5 {
                let sq = le(&k, &[s, 3], 0);
                let t2 = t1.inv().unwrap().neg().mul(&sq).mul(&sq);
                let t = TorusParam::from_diagonal(&[t1.clone(), t2.clone()]).unwrap();
                let tf = transfer_factor(&t, &c, false).unwrap();
                let g = weil_gamma(&t1.neg(), &c).unwrap().value;
                assert_eq!(tf, CycloValue::q_pow_half(5, 1, 1).mul(&g));
                assert_eq!(tf, transfer_factor(&t, &c, true).unwrap());
                assert_eq!(enumerate_x(&t, &c).unwrap().len(), 2);
                // y y' = -t_2/t_1 mod the maximal ideal: q - 1 pairs
                assert_eq!(enumerate_y(&t, &c).unwrap().len(), 4);
                // a nonsquare multiple of t_2 empties X
                let t = TorusParam::from_diagonal(&[t1.clone(), t2.scale(2)]).unwrap();
                assert!(enumerate_x(&t, &c).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn unit_square_rescaling_moves_alpha() {
        // a = (pi, 1) and (4 pi, 4) over GF(5): the two alpha values trade places
        let (k, c) = setup(5);
        let t = TorusParam::new(vec![LocalElem::pi_pow(&k, 1), LocalElem::one(&k)]).unwrap();
        let four = LocalElem::constant(&k, 4);
        let t2 = t.rescaled(&[four.clone(), four]);
        let i = |t: &TorusParam, a: u32| i_local(t, &[a], &c).unwrap().value;
        assert_ne!(i(&t, 1), i(&t2, 1));
        assert_eq!(i(&t, 1), i(&t2, 2));
    }

    proptest::proptest! {
        #[test]
        fn principal_unit_rescaling_is_invariant(
            p in proptest::sample::select(vec![3u32, 5]),
            e in 0i64..3,
            u in proptest::collection::vec(1u32..5, 4),
            x in proptest::collection::vec(1u32..5, 2),
        ) {
            let (k, c) = setup(p);
            let m = e.max(1) as usize;
            let t = TorusParam::new(vec![le(&k, &[u[0] % p, u[1] % p], e), le(&k, &[u[2] % p, u[3] % p], 0)]);
            proptest::prop_assume!(t.is_ok() && u[0] % p != 0 && u[2] % p != 0 && x.iter().all(|v| v % p != 0));
            let t = t.unwrap();
            let principal = |v: u32| {
                let mut cs = vec![0; m + 1];
                cs[0] = 1;
                cs[m] = v % p;
                LocalElem::from_poly(Poly::new(&k, cs))
            };
            let t2 = t.rescaled(&[principal(x[0]), principal(x[1])]);
            let alphas = alpha_grid(&k, 2);
            let sums = |t: &TorusParam| jacquet_mao_all(t, &alphas, &c).unwrap().into_iter().map(|j| (j.i, j.j)).collect::<Vec<_>>();
            proptest::prop_assert_eq!(sums(&t), sums(&t2));
        }
    }

    #[test]
    fn global_model_smoke() {
        let k = Field::new(3, 1).unwrap();
        let m = GlobalModel { k: k.clone() };
        let d = Poly::new(&k, vec![1, 0, 1]);
        let x = Poly::new(&k, vec![2, 1, 1, 1]);
        assert_eq!(m.coords(&x, &d), vec![1, 0]);
        assert_eq!(m.residue(&x, &d), 0);
        assert_eq!(m.residue(&Poly::x(&k), &d), 1);
    }
}
