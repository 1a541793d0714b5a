//! Global orbital sums over k[x]: places of a torus parameter, the product
//! and direct routes to I(t, alpha) and J(t, alpha), matrix families for
//! d = (1, ..., r), the transfer character tau and the sweeps built on them.

pub mod fiber;
pub mod zeta;

pub use fiber::{
    fiber_tables, matrix_fiber_sum_i, matrix_fiber_sum_j, tau_factor, theorem_b_check, FiberTables, TheoremB,
};
pub use zeta::{zeta_sum_identity_check, ZetaReport};

use std::fmt;

use crate::algebra::{poly, AlgebraError, CycloValue, Completion, Field, Place, Poly};
use crate::metaplectic::{kappa_general, kappa_kubota, LocalMatrix, MetaError};
use crate::orbital::{self, engine, GlobalModel, Kind, Options, OrbitalError, Problem, TorusParam, WeightTable};
use crate::symbols::zeta_char;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GlobalError {
    Empty,
    NotMonic(usize),
    NotAdmissible,
    Degrees(Vec<usize>),
    Algebra(AlgebraError),
    Orbital(OrbitalError),
    Meta(MetaError),
}

impl fmt::Display for GlobalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlobalError::Empty => write!(f, "empty torus parameter"),
            GlobalError::NotMonic(i) => write!(f, "a_{} is not a nonzero monic polynomial", i + 1),
            GlobalError::NotAdmissible => write!(f, "a_1 ... a_(r-1) and a_r are not coprime"),
            GlobalError::Degrees(d) => write!(f, "degree vector {d:?} is not (1, ..., r)"),
            GlobalError::Algebra(e) => write!(f, "{e}"),
            GlobalError::Orbital(e) => write!(f, "{e}"),
            GlobalError::Meta(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GlobalError {}

impl From<AlgebraError> for GlobalError {
    fn from(e: AlgebraError) -> Self {
        GlobalError::Algebra(e)
    }
}

impl From<OrbitalError> for GlobalError {
    fn from(e: OrbitalError) -> Self {
        GlobalError::Orbital(e)
    }
}

impl From<MetaError> for GlobalError {
    fn from(e: MetaError) -> Self {
        GlobalError::Meta(e)
    }
}

/// Monic irreducible factors of `p` as finite places, with multiplicities.
pub fn factor_places(p: &Poly) -> Result<Vec<(Place, usize)>, GlobalError> {
    Ok(poly::factor(p)?.into_iter().map(|(f, e)| (Place::Finite(f), e)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// product of local sums over the places involved
    Product,
    /// cosets of N(F)/N(O) enumerated over k[x] directly
    Direct,
}

/// t = diag(a_1, a_2/a_1, ..., a_r/a_{r-1}) with monic a_i in k[x].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalTorus {
    pub a: Vec<Poly>,
}

impl GlobalTorus {
    pub fn new(a: Vec<Poly>) -> Result<GlobalTorus, GlobalError> {
        if a.is_empty() {
            return Err(GlobalError::Empty);
        }
        if let Some(i) = a.iter().position(|x| x.is_zero() || !x.is_monic()) {
            return Err(GlobalError::NotMonic(i));
        }
        Ok(GlobalTorus { a })
    }
    pub fn r(&self) -> usize {
        self.a.len()
    }
    pub fn field(&self) -> &Field {
        self.a[0].field()
    }
    pub fn degrees(&self) -> Vec<usize> {
        self.a.iter().map(|x| x.deg() as usize).collect()
    }
    /// a_1 ... a_{r-1}
    pub fn head_product(&self) -> Poly {
        let r = self.r();
        self.a[..r - 1].iter().fold(Poly::one(self.field()), |acc, x| acc.mul(x))
    }
    /// gcd(a_1 ... a_{r-1}, a_r) = 1
    pub fn admissible(&self) -> bool {
        self.head_product().gcd(&self.a[self.r() - 1]).is_one()
    }
    /// The places dividing a_1 ... a_{r-1}, with multiplicity.
    pub fn support(&self) -> Result<Vec<(Place, usize)>, GlobalError> {
        factor_places(&self.head_product())
    }
    /// The image of t in the completion `c`.
    pub fn local(&self, c: &Completion) -> Result<TorusParam, GlobalError> {
        Ok(TorusParam::new(self.a.iter().map(|x| c.localize_poly(x)).collect())?)
    }
    fn check(&self) -> Result<(), GlobalError> {
        if self.admissible() {
            Ok(())
        } else {
            Err(GlobalError::NotAdmissible)
        }
    }
    fn problem(&self) -> Problem<Poly> {
        let r = self.r();
        Problem { a1: self.a[0].clone(), divisors: self.a[..r - 1].to_vec(), dt: self.a[1..].to_vec() }
    }
    /// prod_{i=2..r} zeta(-alpha_i)^{deg a_{i-1}}, the product over all
    /// places of the local signs relating the characters Psi_alpha and Psi.
    pub fn alpha_sign(&self, alpha: &[u32]) -> i32 {
        let k = self.field();
        let mut s = 1;
        for (i, &x) in alpha.iter().enumerate().take(self.r() - 1) {
            if self.a[i].deg() % 2 == 1 {
                s *= zeta_char(k, k.neg(x));
            }
        }
        s
    }
    /// Places where J_v can differ from 1: the support together with the
    /// places dividing a_r.
    fn j_places(&self) -> Result<Vec<Place>, GlobalError> {
        let all = self.head_product().mul(&self.a[self.r() - 1]);
        Ok(factor_places(&all)?.into_iter().map(|(p, _)| p).collect())
    }
}

/// The table of the one-point set, keys of length r - 1.
fn unit_table(k: &Field, half: bool, r: usize) -> WeightTable {
    let mut t = WeightTable::new(k, half);
    t.add(&vec![0; r - 1], 1);
    t
}

/// Weight table of the global X(t), keyed by the residue sums of n_{i-1,i}.
pub fn i_global_table(t: &GlobalTorus, mode: Mode) -> Result<WeightTable, GlobalError> {
    t.check()?;
    let k = t.field();
    let r = t.r();
    match mode {
        Mode::Product => {
            let mut acc = unit_table(k, false, r);
            for (pl, _) in t.support()? {
                let c = Completion::new(k, &pl)?;
                acc = acc.convolve(&orbital::i_table(&t.local(&c)?, &c)?);
            }
            Ok(acc)
        }
        Mode::Direct => {
            let model = GlobalModel { k: k.clone() };
            let opts = Options { kind: Kind::X, keep_g: false, keep_cols: false, last_col: false };
            let mut tab = WeightTable::new(k, false);
            engine::visit(&model, &t.problem(), opts, &mut |l| tab.add(l.rho, 1));
            Ok(tab)
        }
    }
}

/// Weight table of the global Y(t): keys are residue sums of
/// n_{i-1,i} + n'_{i-1,i}, weights carry zeta(kappa).
pub fn j_global_table(t: &GlobalTorus, mode: Mode) -> Result<WeightTable, GlobalError> {
    t.check()?;
    let k = t.field();
    let r = t.r();
    match mode {
        Mode::Product => {
            let mut acc = unit_table(k, true, r);
            for pl in t.j_places()? {
                let c = Completion::new(k, &pl)?;
                acc = acc.convolve(&orbital::j_table(&t.local(&c)?, &c)?);
            }
            Ok(acc)
        }
        Mode::Direct => {
            let model = GlobalModel { k: k.clone() };
            let opts = Options { kind: Kind::Y, keep_g: true, keep_cols: false, last_col: false };
            let comps: Vec<Completion> =
                t.support()?.iter().map(|(pl, _)| Completion::new(k, pl)).collect::<Result<_, _>>()?;
            let mut tab = WeightTable::new(k, true);
            let mut key = vec![];
            let mut err = None;
            engine::visit(&model, &t.problem(), opts, &mut |l| {
                let w = match global_kappa(l.g.expect("kept"), &comps) {
                    Ok(x) => zeta_char(k, x),
                    Err(e) => {
                        err.get_or_insert(e);
                        0
                    }
                };
                key.clear();
                key.extend(l.rho.iter().zip(l.rho_p).map(|(&x, &y)| k.add(x, y)));
                tab.add(&key, w as i64);
            });
            match err {
                Some(e) => Err(e),
                None => Ok(tab),
            }
        }
    }
}

/// prod_v N_{k_v/k} kappa_v(w0 g) over the given completions.
fn global_kappa(g: &[Vec<Poly>], comps: &[Completion]) -> Result<u32, GlobalError> {
    let r = g.len();
    let k = g[0][0].field();
    let mut acc = 1u32;
    for c in comps {
        let m = LocalMatrix::from_fn(r, |i, j| c.localize_poly(&g[r - 1 - i][j]));
        let kv = match r {
            1 => continue,
            2 => kappa_kubota(&m)?,
            _ => kappa_general(&m)?,
        };
        acc = k.mul(acc, kv.norm(&c.emb));
    }
    Ok(acc)
}

/// prod over the support of the local transfer factors (primed when `prime`).
pub fn global_transfer(t: &GlobalTorus, prime: bool) -> Result<CycloValue, GlobalError> {
    let k = t.field();
    let mut acc = CycloValue::one(k.p());
    for (pl, _) in t.support()? {
        let c = Completion::new(k, &pl)?;
        acc = acc.mul(&orbital::transfer_factor(&t.local(&c)?, &c, prime)?);
    }
    Ok(acc)
}

pub fn i_global(t: &GlobalTorus, alpha: &[u32], mode: Mode) -> Result<CycloValue, GlobalError> {
    Ok(i_global_table(t, mode)?.eval(alpha).value)
}

pub fn j_global(t: &GlobalTorus, alpha: &[u32], mode: Mode) -> Result<CycloValue, GlobalError> {
    Ok(j_global_table(t, mode)?.eval(alpha).value)
}

/// Completion at every place of `t`'s support, paired with the local torus.
pub fn localize_all(t: &GlobalTorus) -> Result<Vec<(Completion, TorusParam)>, GlobalError> {
    let k = t.field();
    t.support()?
        .into_iter()
        .map(|(pl, _)| {
            let c = Completion::new(k, &pl)?;
            let lt = t.local(&c)?;
            Ok((c, lt))
        })
        .collect()
}
