//! The k_v^*-valued Kazhdan-Patterson cocycle, by reduction to simple
//! reflections and torus base cases.

use crate::algebra::{Field, LocalElem};
use crate::symbols::tame_symbol;

use super::bruhat::bruhat;
use super::{LocalMatrix, MetaError};

/// The part of a Bruhat decomposition x = n (t w) n' that left
/// multiplication acts on; n' is never needed.
#[derive(Clone, Debug)]
pub struct LeftCell {
    pub n: LocalMatrix,
    pub t: Vec<LocalElem>,
    pub w: Vec<usize>,
}

impl LeftCell {
    pub fn of(x: &LocalMatrix) -> Result<LeftCell, MetaError> {
        let b = bruhat(x)?;
        Ok(LeftCell { n: b.n, t: b.t, w: b.w })
    }
    /// A cell with n = 1 and middle diag(t) P_w.
    pub fn monomial(t: Vec<LocalElem>, w: Vec<usize>) -> LeftCell {
        let k = t[0].field().clone();
        LeftCell { n: LocalMatrix::identity(&k, t.len()), t, w }
    }
    fn field(&self) -> &Field {
        self.t[0].field()
    }

    /// chi(s_l, x) for the simple transposition (l, l+1); replaces x by s_l x.
    pub fn apply_simple(&mut self, l: usize) -> u32 {
        let k = self.field().clone();
        let u = self.n.get(l, l + 1).clone();
        if !u.is_zero() {
            self.n.add_col_multiple(l + 1, l, &u.neg());
        }
        self.n.swap_rows(l, l + 1);
        self.n.swap_cols(l, l + 1);
        let pos = |w: &[usize], row: usize| w.iter().position(|&x| x == row).expect("permutation");
        if u.is_zero() || pos(&self.w, l) < pos(&self.w, l + 1) {
            let v = chi_alpha_torus(l, &self.t);
            self.t.swap(l, l + 1);
            for x in self.w.iter_mut() {
                if *x == l {
                    *x = l + 1;
                } else if *x == l + 1 {
                    *x = l;
                }
            }
            v
        } else {
            let ui = u.inv().expect("nonzero");
            self.n.add_col_multiple(l + 1, l, &ui);
            let mut d = vec![LocalElem::one(&k); self.t.len()];
            d[l] = ui.neg();
            d[l + 1] = u;
            let v = chi_torus(&d, &self.t);
            self.t[l] = self.t[l].mul(&d[l]);
            self.t[l + 1] = self.t[l + 1].mul(&d[l + 1]);
            v
        }
    }

    /// chi(diag(s), x) = chi(diag(s), B(x)); replaces x by diag(s) x.
    pub fn apply_torus(&mut self, s: &[LocalElem]) -> u32 {
        let v = chi_torus(s, &self.t);
        let r = s.len();
        let inv: Vec<LocalElem> = s.iter().map(|x| x.inv().expect("invertible torus")).collect();
        for i in 0..r {
            for j in i + 1..r {
                let e = self.n.get(i, j);
                if !e.is_zero() {
                    let e = e.mul(&s[i]).mul(&inv[j]);
                    self.n.set(i, j, e);
                }
            }
        }
        for i in 0..r {
            self.t[i] = self.t[i].mul(&s[i]);
        }
        v
    }

    /// Left multiplication by the elementary unipotent I + c E_ij (i < j); chi = 1.
    pub fn apply_upper(&mut self, i: usize, j: usize, c: &LocalElem) {
        self.n.add_row_multiple(i, j, c);
    }
}

/// chi(t, t') = prod_{i<j} {t_i, t'_j}.
pub fn chi_torus(t: &[LocalElem], t2: &[LocalElem]) -> u32 {
    let k = t[0].field();
    let mut acc = 1u32;
    for j in 1..t.len() {
        for i in 0..j {
            if t[i].is_unit() && t2[j].is_unit() {
                continue;
            }
            acc = k.mul(acc, tame_symbol(&t[i], &t2[j]).expect("nonzero torus"));
        }
    }
    acc
}

/// chi(alpha, t) = {t_l, t_{l+1}}^{-1} {-1, t_l/t_{l+1}} {-1, det t}.
pub fn chi_alpha_torus(l: usize, t: &[LocalElem]) -> u32 {
    let k = t[0].field();
    let s = tame_symbol(&t[l], &t[l + 1]).expect("nonzero torus");
    let v: i64 = t.iter().map(|x| x.v()).sum::<i64>() + t[l].v() - t[l + 1].v();
    let sign = if v.rem_euclid(2) == 1 { k.neg(1) } else { 1 };
    k.mul(k.inv(s), sign)
}

/// Lexicographically first reduced word: P_w = P_{s_{l_1}} ... P_{s_{l_k}}.
pub fn reduced_word(w: &[usize]) -> Vec<usize> {
    let mut w = w.to_vec();
    let mut word = vec![];
    loop {
        let mut inv = vec![0usize; w.len()];
        for (j, &i) in w.iter().enumerate() {
            inv[i] = j;
        }
        let Some(l) = (0..w.len().saturating_sub(1)).find(|&l| inv[l] > inv[l + 1]) else {
            return word;
        };
        word.push(l);
        for x in w.iter_mut() {
            if *x == l {
                *x = l + 1;
            } else if *x == l + 1 {
                *x = l;
            }
        }
    }
}

/// chi(g1, g2) in K^*, K the residue field.
pub fn chi(g1: &LocalMatrix, g2: &LocalMatrix) -> Result<u32, MetaError> {
    let k = g1.field().clone();
    let b1 = bruhat(g1)?;
    let h = b1.n_prime.mul(g2);
    let mut cell = LeftCell::of(&h)?;
    let mut acc = 1u32;
    for &l in reduced_word(&b1.w).iter().rev() {
        acc = k.mul(acc, cell.apply_simple(l));
    }
    Ok(k.mul(acc, chi_torus(&b1.t, &cell.t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metaplectic::sample::random_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn le(k: &Field, c: &[u32], v: i64) -> LocalElem {
        LocalElem::from_coeffs(k, c, v)
    }

    #[test]
    fn alpha_on_pi_scalar() {
        let k = Field::new(3, 1).unwrap();
        let pi = LocalElem::pi_pow(&k, 1);
        let alpha = LocalMatrix::permutation(&k, &[1, 0]);
        let t = LocalMatrix::diag(&[pi.clone(), pi]);
        assert_eq!(chi(&alpha, &t).unwrap(), 2);
    }

    #[test]
    fn reduced_words() {
        assert_eq!(reduced_word(&[0, 1, 2]), Vec::<usize>::new());
        assert_eq!(reduced_word(&[2, 1, 0]), vec![0, 1, 0]);
        let k = Field::new(3, 1).unwrap();
        for w in [[1usize, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0]] {
            let word = reduced_word(&w);
            let mut p = LocalMatrix::identity(&k, 3);
            for &l in &word {
                let mut s: Vec<usize> = (0..3).collect();
                s.swap(l, l + 1);
                p = p.mul(&LocalMatrix::permutation(&k, &s));
            }
            assert_eq!(p, LocalMatrix::permutation(&k, &w));
        }
    }

    #[test]
    fn torus_and_weyl_rules() {
        let k = Field::new(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(2..4);
            let t: Vec<LocalElem> = (0..r).map(|_| le(&k, &[rng.gen_range(1..5), rng.gen_range(0..5)], rng.gen_range(-2..3))).collect();
            let t2: Vec<LocalElem> = (0..r).map(|_| le(&k, &[rng.gen_range(1..5), rng.gen_range(0..5)], rng.gen_range(-2..3))).collect();
            let (dt, dt2) = (LocalMatrix::diag(&t), LocalMatrix::diag(&t2));
            assert_eq!(chi(&dt, &dt2).unwrap(), chi_torus(&t, &t2));
            let mut w: Vec<usize> = (0..r).collect();
            let mut w2: Vec<usize> = (0..r).collect();
            for i in (1..r).rev() {
                w.swap(i, rng.gen_range(0..=i));
                w2.swap(i, rng.gen_range(0..=i));
            }
            let (pw, pw2) = (LocalMatrix::permutation(&k, &w), LocalMatrix::permutation(&k, &w2));
            assert_eq!(chi(&pw, &pw2).unwrap(), 1);
            assert_eq!(chi(&dt, &pw).unwrap(), 1);
            let l = rng.gen_range(0..r - 1);
            let mut s: Vec<usize> = (0..r).collect();
            s.swap(l, l + 1);
            assert_eq!(chi(&LocalMatrix::permutation(&k, &s), &dt).unwrap(), chi_alpha_torus(l, &t));
        }
    }

    #[test]
    fn unipotent_and_torus_reduction() {
        let k = Field::new(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.gen_range(2..4);
            let (g, g2) = (random_matrix(&k, r, &mut rng), random_matrix(&k, r, &mut rng));
            let n = LocalMatrix::from_fn(r, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => LocalElem::one(&k),
                std::cmp::Ordering::Less => le(&k, &[rng.gen_range(0..3), 1], rng.gen_range(-2..2)),
                _ => LocalElem::zero(&k),
            });
            let base = chi(&g, &g2).unwrap();
            assert_eq!(chi(&n.mul(&g), &g2.mul(&n)).unwrap(), base);
            let t: Vec<LocalElem> = (0..r).map(|_| le(&k, &[rng.gen_range(1..3), rng.gen_range(0..3)], rng.gen_range(-2..3))).collect();
            let dt = LocalMatrix::diag(&t);
            let b = bruhat(&g2).unwrap();
            assert_eq!(chi(&dt, &g2).unwrap(), chi(&dt, &b.middle()).unwrap());
        }
    }

    #[test]
    fn cocycle_identity() {
        for (p, r, count) in [(3u32, 2usize, 300), (5, 2, 200), (3, 3, 100)] {
            let k = Field::new(p, 1).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p as u64 * 31 + r as u64);
            for _ in 0..count {
                let g = random_matrix(&k, r, &mut rng);
                let g2 = random_matrix(&k, r, &mut rng);
                let g3 = random_matrix(&k, r, &mut rng);
                let lhs = k.mul(chi(&g2, &g3).unwrap(), chi(&g, &g2.mul(&g3)).unwrap());
                let rhs = k.mul(chi(&g.mul(&g2), &g3).unwrap(), chi(&g, &g2).unwrap());
                assert_eq!(lhs, rhs, "g={g:?} g2={g2:?} g3={g3:?}");
            }
        }
    }
}
