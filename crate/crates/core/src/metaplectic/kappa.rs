//! The splitting function kappa on GL_r(O): Kubota's closed form for r = 2,
//! the generator fold for any r, and the polynomial formula on companion
//! matrices.

use crate::algebra::{poly, Completion, CycloValue, Embedding, Field, LocalElem, Place};
use crate::symbols::tame_symbol;

use super::bruhat::{poly_minor, principal_minors, shifted};
use super::cocycle::LeftCell;
use super::{LocalMatrix, MetaError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaValue {
    pub field: Field,
    pub value: u32,
}

impl KappaValue {
    fn one(k: &Field) -> KappaValue {
        KappaValue { field: k.clone(), value: 1 }
    }
    /// kappa = zeta(kappa) in {1, -1}.
    pub fn sign(&self) -> i32 {
        self.field.quadratic_character(self.value)
    }
    pub fn sign_value(&self) -> CycloValue {
        CycloValue::from_sign(self.field.p(), self.sign())
    }
    pub fn norm(&self, emb: &Embedding) -> u32 {
        emb.norm(self.value)
    }
}

fn check_integral(g: &LocalMatrix) -> Result<(), MetaError> {
    if g.is_gl_o() {
        Ok(())
    } else {
        Err(MetaError::NotIntegral)
    }
}

/// 1 if c = 0 or c is a unit, else {c, d/det g}.
pub fn kappa_kubota(g: &LocalMatrix) -> Result<KappaValue, MetaError> {
    if g.size() != 2 {
        return Err(MetaError::Dimension(g.size()));
    }
    check_integral(g)?;
    let k = g.field().clone();
    let c = g.get(1, 0);
    if c.is_zero() || c.is_unit() {
        return Ok(KappaValue::one(&k));
    }
    let rhs = g.get(1, 1).div(&g.det())?;
    if rhs.is_zero() {
        // c and d cannot both lie in the maximal ideal
        return Err(MetaError::NotIntegral);
    }
    let value = tame_symbol(c, &rhs).expect("nonzero");
    Ok(KappaValue { field: k, value })
}

/// Simple-reflection word of the transposition (i j), i < j.
fn transposition_word(i: usize, j: usize) -> Vec<usize> {
    let mut w: Vec<usize> = (i + 1..j).rev().collect();
    w.push(i);
    w.extend(i + 1..j);
    w
}

enum Step {
    Swap(usize, usize),
    /// left multiplication by I + f E_{row, col}, row > col
    Lower { row: usize, col: usize, f: LocalElem },
}

/// kappa(g) for g in GL_r(O), by factoring g into torus, Weyl and unipotent
/// generators (on which kappa is 1) and folding kappa(s x) = kappa(x) chi(s, x).
pub fn kappa_general(g: &LocalMatrix) -> Result<KappaValue, MetaError> {
    check_integral(g)?;
    let k = g.field().clone();
    let r = g.size();
    let mut a = g.clone();
    let mut steps = vec![];
    for c in 0..r {
        let p = (c..r).find(|&i| a.get(i, c).is_unit()).ok_or(MetaError::NotIntegral)?;
        if p != c {
            a.swap_rows(p, c);
            steps.push(Step::Swap(c, p));
        }
        let inv = a.get(c, c).inv()?;
        for i in c + 1..r {
            if !a.get(i, c).is_zero() {
                let f = a.get(i, c).mul(&inv);
                a.add_row_multiple(i, c, &f.neg());
                steps.push(Step::Lower { row: i, col: c, f });
            }
        }
    }
    let diag: Vec<LocalElem> = (0..r).map(|i| a.get(i, i).clone()).collect();
    let mut cell = LeftCell::monomial(diag, (0..r).collect());
    let mut acc = 1u32;
    for step in steps.iter().rev() {
        match step {
            Step::Swap(i, j) => {
                for &l in transposition_word(*i, *j).iter().rev() {
                    acc = k.mul(acc, cell.apply_simple(l));
                }
            }
            Step::Lower { row, col, f } => {
                let word = transposition_word(*col, *row);
                for &l in word.iter().rev() {
                    acc = k.mul(acc, cell.apply_simple(l));
                }
                cell.apply_upper(*col, *row, f);
                for &l in word.iter().rev() {
                    acc = k.mul(acc, cell.apply_simple(l));
                }
            }
        }
    }
    Ok(KappaValue { field: k, value: acc })
}

/// Determinant over a finite field.
pub fn field_det(k: &Field, m: &[Vec<u32>]) -> u32 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = 1u32;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            d = k.neg(d);
        }
        d = k.mul(d, a[c][c]);
        let inv = k.inv(a[c][c]);
        for i in c + 1..n {
            if a[i][c] != 0 {
                let f = k.mul(a[i][c], inv);
                for j in c..n {
                    a[i][j] = k.sub(a[i][j], k.mul(f, a[c][j]));
                }
            }
        }
    }
    d
}

/// det [ g^{r+1-i, r}[j-1] ]_{i,j}: g = y + pi Id, g^{i,r} drops row i and
/// column r, and [j] takes the pi^j coefficient of its determinant.
pub fn kappa_poly(y: &[Vec<u32>], k: &Field) -> u32 {
    let r = y.len();
    let g = shifted(y, k);
    let cols: Vec<usize> = (0..r - 1).collect();
    let m: Vec<Vec<u32>> = (1..=r)
        .map(|i| {
            let drop = r - i; // zero-based index of row r+1-i
            let rows: Vec<usize> = (0..r).filter(|&x| x != drop).collect();
            let d = poly_minor(&g, &rows, &cols, k);
            (0..r).map(|j| d.coeff(j)).collect()
        })
        .collect();
    field_det(k, &m)
}

/// (-1)^{r(r-1)/2}: the factor the place at infinity contributes to the
/// global kappa of w0 (y + pi Id), where that matrix is not integral.
pub fn infinity_sign(k: &Field, r: usize) -> u32 {
    if (r * (r - 1) / 2) % 2 == 1 {
        k.neg(1)
    } else {
        1
    }
}

/// Product of N_{k_v/k} kappa_v(w0 (y + pi Id)) over the finite places v
/// dividing a_1(y) ... a_{r-1}(y); every other finite place contributes 1.
/// Requires a_r(y) prime to those places.
pub fn kappa_place_product(y: &[Vec<u32>], k: &Field) -> Result<u32, MetaError> {
    let r = y.len();
    let a = principal_minors(y, k);
    let mut prod = crate::algebra::Poly::one(k);
    for ai in &a[..r - 1] {
        prod = prod.mul(ai);
    }
    let g = shifted(y, k);
    let mut acc = 1u32;
    for (pl, _) in poly::factor(&prod)? {
        let c = Completion::new(k, &Place::Finite(pl))?;
        let m = LocalMatrix::from_fn(r, |i, j| c.localize_poly(&g[r - 1 - i][j]));
        let kv = kappa_general(&m)?;
        acc = k.mul(acc, kv.norm(&c.emb));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::resultant;
    use crate::metaplectic::sample::random_integral;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn le(k: &Field, c: &[u32], v: i64) -> LocalElem {
        LocalElem::from_coeffs(k, c, v)
    }

    #[test]
    fn kubota_examples() {
        let k = Field::new(3, 1).unwrap();
        let one = LocalElem::one(&k);
        let zero = LocalElem::zero(&k);
        let pi = LocalElem::pi_pow(&k, 1);
        let g = LocalMatrix::from_rows(vec![vec![one.clone(), zero.clone()], vec![pi.clone(), one.clone()]]);
        assert_eq!(kappa_kubota(&g).unwrap().value, 1);
        let u = le(&k, &[2, 1], 0);
        let g = LocalMatrix::from_rows(vec![vec![u.clone(), zero.clone()], vec![pi.clone(), u.inv().unwrap()]]);
        assert_eq!(kappa_kubota(&g).unwrap().value, 2);
        assert_eq!(kappa_general(&g).unwrap().value, 2);
    }

    #[test]
    fn generators_have_trivial_kappa() {
        let k = Field::new(5, 1).unwrap();
        let t = LocalMatrix::diag(&[le(&k, &[2, 1], 0), le(&k, &[3], 0), le(&k, &[4, 4], 0)]);
        assert_eq!(kappa_general(&t).unwrap().value, 1);
        let w = LocalMatrix::permutation(&k, &[2, 0, 1]);
        assert_eq!(kappa_general(&w).unwrap().value, 1);
        let mut n = LocalMatrix::identity(&k, 3);
        n.set(0, 2, le(&k, &[1, 1], 1));
        n.set(0, 1, le(&k, &[3], 0));
        assert_eq!(kappa_general(&n).unwrap().value, 1);
    }

    #[test]
    fn kappa_relations_random() {
        let k = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let r = rng.gen_range(2..4);
            let g1 = random_integral(&k, r, &mut rng);
            let g2 = random_integral(&k, r, &mut rng);
            let lhs = kappa_general(&g1.mul(&g2)).unwrap().value;
            let rhs = k.mul(
                k.mul(kappa_general(&g1).unwrap().value, kappa_general(&g2).unwrap().value),
                super::super::chi(&g1, &g2).unwrap(),
            );
            assert_eq!(lhs, rhs);
            if r == 2 {
                assert_eq!(kappa_general(&g1).unwrap(), kappa_kubota(&g1).unwrap());
            }
        }
    }

    #[test]
    fn block_diagonal_multiplies() {
        let k = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = random_integral(&k, 2, &mut rng);
            let b = random_integral(&k, 2, &mut rng);
            let z = LocalElem::zero(&k);
            let m = LocalMatrix::from_fn(4, |i, j| match (i < 2, j < 2) {
                (true, true) => a.get(i, j).clone(),
                (false, false) => b.get(i - 2, j - 2).clone(),
                _ => z.clone(),
            });
            let anti = LocalMatrix::from_fn(4, |i, j| match (i < 2, j < 2) {
                (true, false) => a.get(i, j - 2).clone(),
                (false, true) => b.get(i - 2, j).clone(),
                _ => z.clone(),
            });
            let expect = k.mul(kappa_general(&a).unwrap().value, kappa_general(&b).unwrap().value);
            assert_eq!(kappa_general(&m).unwrap().value, expect);
            assert_eq!(kappa_general(&anti).unwrap().value, expect);
        }
    }

    #[test]
    fn poly_formula_r2() {
        // kappa_poly = -y21
        let k = Field::new(5, 1).unwrap();
        for y21 in 0..5 {
            let y = vec![vec![3, 1], vec![y21, 2]];
            assert_eq!(kappa_poly(&y, &k), k.neg(y21));
        }
    }

    #[test]
    fn resultant_identity_small() {
        let k = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for r in 2..4usize {
            let sign: usize = (1..r).map(|i| i + i * (i + 1)).sum();
            for _ in 0..200 {
                let y: Vec<Vec<u32>> = (0..r).map(|_| (0..r).map(|_| rng.gen_range(0..3)).collect()).collect();
                let yt: Vec<Vec<u32>> = (0..r).map(|i| (0..r).map(|j| y[j][i]).collect()).collect();
                let a = principal_minors(&y, &k);
                let mut res = resultant(&a[r - 2], &a[r - 1]).unwrap();
                if sign % 2 == 1 {
                    res = k.neg(res);
                }
                assert_eq!(k.mul(kappa_poly(&y, &k), kappa_poly(&yt, &k)), res);
            }
        }
    }

    #[test]
    fn poly_formula_matches_place_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (p, r) in [(3u32, 2usize), (5, 2), (3, 3), (5, 3), (3, 4)] {
            let k = Field::new(p, 1).unwrap();
            let mut done = 0;
            while done < 40 {
                let y: Vec<Vec<u32>> = (0..r).map(|_| (0..r).map(|_| rng.gen_range(0..p)).collect()).collect();
                let a = principal_minors(&y, &k);
                if a[..r - 1].iter().any(|ai| ai.gcd(&a[r - 1]).deg() > 0) {
                    continue;
                }
                done += 1;
                let prod = k.mul(kappa_place_product(&y, &k).unwrap(), infinity_sign(&k, r));
                assert_eq!(kappa_poly(&y, &k), prod, "y={y:?}");
            }
        }
    }
}
