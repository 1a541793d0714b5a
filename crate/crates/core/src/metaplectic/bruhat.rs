//! Bruhat decomposition g = n (t w) n' over K((pi)).

use crate::algebra::{Field, LocalElem, Poly};

use super::{LocalMatrix, MetaError};

/// g = n * diag(t) * P_w * n_prime with P_w e_j = e_{w[j]}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruhatData {
    pub n: LocalMatrix,
    pub t: Vec<LocalElem>,
    pub w: Vec<usize>,
    pub n_prime: LocalMatrix,
}

impl BruhatData {
    pub fn middle(&self) -> LocalMatrix {
        LocalMatrix::monomial(&self.t, &self.w)
    }
    pub fn product(&self) -> LocalMatrix {
        self.n.mul(&self.middle()).mul(&self.n_prime)
    }
}

/// Rows are processed bottom to top; each row's leftmost nonzero entry is
/// the pivot, cleared to its right by column operations and above it by row
/// operations.
pub fn bruhat(g: &LocalMatrix) -> Result<BruhatData, MetaError> {
    let r = g.size();
    let k = g.field().clone();
    let mut a = g.clone();
    let mut n = LocalMatrix::identity(&k, r);
    let mut np = LocalMatrix::identity(&k, r);
    let mut w = vec![usize::MAX; r];
    let mut t = vec![LocalElem::zero(&k); r];
    for i in (0..r).rev() {
        let j = (0..r).find(|&j| !a.get(i, j).is_zero()).ok_or(MetaError::Singular)?;
        let piv = a.get(i, j).clone();
        let inv = piv.inv().expect("nonzero pivot");
        for b in j + 1..r {
            if !a.get(i, b).is_zero() {
                let c = a.get(i, b).mul(&inv).neg();
                a.add_col_multiple(b, j, &c);
                // n' <- (I + c E_jb)^{-1} n'
                np.add_row_multiple(j, b, &c.neg());
            }
        }
        for up in 0..i {
            if !a.get(up, j).is_zero() {
                let c = a.get(up, j).mul(&inv).neg();
                a.add_row_multiple(up, i, &c);
                // n <- n (I + c E_{up,i})^{-1}
                n.add_col_multiple(i, up, &c.neg());
            }
        }
        w[j] = i;
        t[i] = piv;
    }
    Ok(BruhatData { n, t, w, n_prime: np })
}

/// Matrix over k[pi], as polynomial entries.
pub type PolyMatrix = Vec<Vec<Poly>>;

/// Determinant of the submatrix on the given rows and columns (1 when empty).
pub fn poly_minor(g: &PolyMatrix, rows: &[usize], cols: &[usize], k: &Field) -> Poly {
    if rows.len() != cols.len() {
        return Poly::zero(k);
    }
    let mut sorted = rows.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != rows.len() {
        return Poly::zero(k);
    }
    poly_det(&rows.iter().map(|&i| cols.iter().map(|&j| g[i][j].clone()).collect()).collect(), k)
}

/// Laplace expansion along the first row; sizes here stay small.
pub fn poly_det(m: &PolyMatrix, k: &Field) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::one(k),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = Poly::zero(k);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: PolyMatrix = (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m[i][c].clone()).collect()).collect();
                let term = m[0][j].mul(&poly_det(&sub, k));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// y + pi Id as a polynomial matrix.
pub fn shifted(y: &[Vec<u32>], k: &Field) -> PolyMatrix {
    let r = y.len();
    (0..r)
        .map(|i| (0..r).map(|j| Poly::new(k, if i == j { vec![y[i][j], 1] } else { vec![y[i][j]] })).collect())
        .collect()
}

/// a_i(y) = det(y_{[1,i],[1,i]} + pi Id_i) for i = 1..r.
pub fn principal_minors(y: &[Vec<u32>], k: &Field) -> Vec<Poly> {
    let g = shifted(y, k);
    (1..=y.len()).map(|i| poly_minor(&g, &(0..i).collect::<Vec<_>>(), &(0..i).collect::<Vec<_>>(), k)).collect()
}

/// Closed-form Bruhat data of w0 (y + pi Id) from minor ratios, at the
/// origin place, together with the inverses of both unipotent factors.
#[derive(Clone, Debug)]
pub struct MinorBruhat {
    pub data: BruhatData,
    pub n_inv: LocalMatrix,
    pub n_prime_inv: LocalMatrix,
}

/// In the normalization g = n (t w) n' the middle torus is the reverse of
/// D(a_1, a_2/a_1, ..., a_r/a_{r-1}). The expression
/// (-1)^{j-i} det(g_{[1,j-1],[1,j]-{i}}) / a_{j-1} yields the entries of
/// n'^{-1}; n' itself has entries det(g_{[1,i],[1,i-1] u {j}}) / a_i.
pub fn bruhat_minors(y: &[Vec<u32>], k: &Field) -> Result<MinorBruhat, MetaError> {
    let r = y.len();
    let g = shifted(y, k);
    let a = principal_minors(y, k);
    if a.iter().any(|p| p.is_zero()) {
        return Err(MetaError::VanishingMinor);
    }
    let lp = |p: &Poly| LocalElem::from_poly(p.clone());
    // zero-based indices of the one-based range [lo, hi]
    let range = |lo: usize, hi: usize| (lo..=hi).map(|x| x - 1).collect::<Vec<usize>>();
    let lead = |m: usize| if m == 0 { LocalElem::one(k) } else { lp(&a[m - 1]) };
    let signed = |p: Poly, e: usize| if e % 2 == 1 { p.neg() } else { p };
    let mut n = LocalMatrix::identity(k, r);
    let mut np = LocalMatrix::identity(k, r);
    let mut n_inv = LocalMatrix::identity(k, r);
    let mut np_inv = LocalMatrix::identity(k, r);
    for i in 1..=r {
        for j in i + 1..=r {
            let mut rows = range(1, r - j);
            rows.push(r - i);
            let num = poly_minor(&g, &rows, &range(1, r + 1 - j), k);
            n.set(i - 1, j - 1, lp(&num).div(&lead(r + 1 - j))?);

            let mut cols = range(1, i - 1);
            cols.push(j - 1);
            let num = poly_minor(&g, &range(1, i), &cols, k);
            np.set(i - 1, j - 1, lp(&num).div(&lead(i))?);

            let rows: Vec<usize> = (1..=r + 1 - i).filter(|&x| x != r + 1 - j).map(|x| x - 1).collect();
            let num = signed(poly_minor(&g, &rows, &range(1, r - i), k), j - i);
            n_inv.set(i - 1, j - 1, lp(&num).div(&lead(r - i))?);

            let cols: Vec<usize> = (1..=j).filter(|&c| c != i).map(|c| c - 1).collect();
            let num = signed(poly_minor(&g, &range(1, j - 1), &cols, k), j - i);
            np_inv.set(i - 1, j - 1, lp(&num).div(&lead(j - 1))?);
        }
    }
    let mut t: Vec<LocalElem> = (1..=r).map(|i| lp(&a[i - 1]).div(&lead(i - 1)).expect("nonzero minor")).collect();
    t.reverse();
    let w: Vec<usize> = (0..r).rev().collect();
    Ok(MinorBruhat { data: BruhatData { n, t, w, n_prime: np }, n_inv, n_prime_inv: np_inv })
}
