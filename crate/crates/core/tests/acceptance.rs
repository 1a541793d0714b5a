//! Acceptance suite. Each test prints one status line for its criterion.
//!
//! A criterion reads PASS when its claim holds exactly as written. Where it
//! does not, the test asserts the exact relation that does hold and the
//! precise set of inputs on which the written form fails, and prints FAIL
//! with the counts.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use metafl::algebra::{poly, resultant, Completion, CycloValue, Field, LocalElem, Place, Poly, RatFunc};
use metafl::global::fiber::{admissible_family, matrix_fiber_sum_i, matrix_fiber_sum_j, monic_polys, tau_factor};
use metafl::global::{i_global, j_global, theorem_b_check, zeta_sum_identity_check, GlobalTorus, Mode};
use metafl::metaplectic::cocycle::{chi_alpha_torus, chi_torus};
use metafl::metaplectic::sample::random_matrix;
use metafl::metaplectic::{
    bruhat, chi, infinity_sign, kappa_general, kappa_kubota, kappa_place_product, kappa_poly, principal_minors, LocalMatrix,
};
use metafl::orbital::{alpha_grid, jacquet_mao_all, units_mod, TorusParam};
use metafl::symbols::{hilbert_symbol, weil_gamma, weil_product_check, zeta_char};

/// Written straight to stderr so the line survives output capture.
fn status(n: usize, title: &str, pass: bool, detail: &str) {
    let word = if pass { "PASS" } else { "FAIL as stated" };
    let _ = writeln!(std::io::stderr(), "criterion {n} [{title}]: {word}; {detail}");
}

/// All t = (u_1 pi^{e_1}, ..., u_{r-1} pi^{e_{r-1}}, u_r) with e_i <= bounds[i]
/// and units taken modulo pi^max(1, e).
fn local_family(k: &Field, bounds: &[i64]) -> Vec<TorusParam> {
    let mut vals: Vec<Vec<i64>> = vec![vec![]];
    for &b in bounds {
        vals = vals.into_iter().flat_map(|v| (0..=b).map(move |e| [v.clone(), vec![e]].concat())).collect();
    }
    let mut out = vec![];
    for v in vals {
        let us = units_mod(k, v.iter().copied().max().unwrap_or(0).max(1) as usize);
        let mut tuples: Vec<Vec<LocalElem>> = vec![vec![]];
        for i in 0..=v.len() {
            let e = v.get(i).copied().unwrap_or(0);
            tuples = tuples.into_iter().flat_map(|t| us.iter().map(move |u| [t.clone(), vec![u.mul_pi_pow(e)]].concat())).collect();
        }
        out.extend(tuples.into_iter().map(|a| TorusParam::new(a).unwrap()));
    }
    out
}

#[derive(Default)]
struct LocalTally {
    checks: usize,
    stated: usize,
    normalized: usize,
    /// stated failures off the set {eps = -1, I != 0}, or passes on it
    pattern: usize,
}

impl LocalTally {
    fn add(&mut self, t: &TorusParam, alphas: &[Vec<u32>], c: &Completion) {
        for jm in jacquet_mao_all(t, alphas, c).unwrap() {
            self.checks += 1;
            self.stated += jm.holds() as usize;
            self.normalized += jm.holds_normalized() as usize;
            let predicted_fail = jm.eps == -1 && !jm.i.is_zero();
            self.pattern += (jm.holds() == predicted_fail) as usize;
        }
    }
}

#[test]
fn criterion_1_local_rank_two() {
    let mut lines = vec![];
    let mut all_stated = true;
    let mut fatf_two = true;
    for p in [3u32, 5, 7] {
        let k = Field::new(p, 1).unwrap();
        let c = Completion::origin(&k);
        let alphas = alpha_grid(&k, 2);
        let mut tally = LocalTally::default();
        let (mut fatf, mut fatf_y_two) = (0, 0);
        for t in local_family(&k, &[3]) {
            tally.add(&t, &alphas, &c);
            // v(a_1) = 1 and -a_2 a square unit: the two-point case
            if t.a[0].v() == 1 && zeta_char(&k, k.neg(t.a[1].angular())) == 1 {
                let jm = jacquet_mao_all(&t, &alphas[..1], &c).unwrap().remove(0);
                assert_eq!(jm.card_x, 2, "t = {:?}", t.a);
                assert_eq!(jm.card_y, (p - 1) as usize, "t = {:?}", t.a);
                assert_eq!(jm.tf, jm.tf_prime);
                fatf += 1;
                fatf_y_two += (jm.card_y == 2) as usize;
            }
        }
        assert_eq!(tally.normalized, tally.checks, "q = {p}");
        assert_eq!(tally.pattern, 0, "q = {p}");
        assert!(fatf > 0);
        all_stated &= tally.stated == tally.checks;
        fatf_two &= fatf_y_two == fatf;
        lines.push(format!(
            "q={p}: {}/{} stated, {}/{} with eps(alpha), two-point case |X|=2 |Y|={} on {fatf} t",
            tally.stated,
            tally.checks,
            tally.normalized,
            tally.checks,
            p - 1
        ));
    }
    status(1, "local Jacquet-Mao r=2", all_stated && fatf_two, &lines.join("; "));
}

#[test]
fn criterion_2_local_rank_three() {
    let k = Field::new(3, 1).unwrap();
    let c = Completion::origin(&k);
    let alphas = alpha_grid(&k, 3);
    let mut tally = LocalTally::default();
    for t in local_family(&k, &[1, 2]) {
        tally.add(&t, &alphas, &c);
    }
    assert_eq!(tally.normalized, tally.checks);
    assert_eq!(tally.pattern, 0);
    let detail = format!(
        "q=3: {}/{} stated, {}/{} with eps(alpha); stated failures are exactly eps=-1 with I!=0",
        tally.stated, tally.checks, tally.normalized, tally.checks
    );
    status(2, "local Jacquet-Mao r=3", tally.stated == tally.checks, &detail);
}

fn gamma_infinity(k: &Field) -> CycloValue {
    let c = Completion::new(k, &Place::Infinity).unwrap();
    weil_gamma(&c.localize(&RatFunc::from_poly(Poly::x(k))), &c).unwrap().value
}

#[test]
fn criterion_3_fiber_comparison() {
    let mut lines = vec![];
    let mut pass = true;
    for (p, r) in [(3u32, 2usize), (5, 2), (3, 3)] {
        let k = Field::new(p, 1).unwrap();
        let rep = theorem_b_check(&k, r, &alpha_grid(&k, r)).unwrap();
        // pre-check: J / (eps I) is one constant C, and I = 0 forces J = 0
        assert_eq!(rep.normalized.len(), 1, "q={p} r={r}");
        assert_eq!(rep.vanishing_violations, 0);
        assert_eq!(rep.local_mismatches, 0);
        assert_eq!(rep.ratios.len(), 2);
        let cst = &rep.normalized[0];
        let ratio = cst.mul(&rep.tau.inv().unwrap());
        let expected = if r == 2 {
            gamma_infinity(&k).scale(-1).mul(&CycloValue::from_ratio(p, 1, p as i64))
        } else {
            CycloValue::q_pow_half(p, 1, -3).neg()
        };
        assert_eq!(ratio, expected, "q={p} r={r}");
        assert_eq!(rep.tau, tau_factor(&(1..=r).collect::<Vec<_>>(), &k).unwrap());
        pass &= rep.holds();
        lines.push(format!(
            "q={p} r={r}: {}/{} fibers match tau, J/(eps I) is a single constant C, C/tau = {:.4}",
            rep.checks - rep.failures.len(),
            rep.checks,
            ratio.to_complex()
        ));
    }
    status(3, "fiber comparison", pass, &lines.join("; "));
}

fn resultant_sides(k: &Field, y: &[Vec<u32>]) -> (u32, u32) {
    let r = y.len();
    let yt: Vec<Vec<u32>> = (0..r).map(|i| (0..r).map(|j| y[j][i]).collect()).collect();
    let a = principal_minors(y, k);
    let res = resultant(&a[r - 2], &a[r - 1]).unwrap();
    let odd = (1..r).map(|i| i + i * (i + 1)).sum::<usize>() % 2 == 1;
    (k.mul(kappa_poly(y, k), kappa_poly(&yt, k)), if odd { k.neg(res) } else { res })
}

#[test]
fn criterion_4_resultant_identity() {
    let mut n = 0;
    for p in [3u32, 5] {
        let k = Field::new(p, 1).unwrap();
        for code in 0..p.pow(4) {
            let y: Vec<Vec<u32>> = (0..2).map(|i| (0..2).map(|j| (code / p.pow(2 * i + j)) % p).collect()).collect();
            let (l, r) = resultant_sides(&k, &y);
            assert_eq!(l, r, "y = {y:?}");
            n += 1;
        }
    }
    let k = Field::new(3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let y: Vec<Vec<u32>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(0..3)).collect()).collect();
        let (l, r) = resultant_sides(&k, &y);
        assert_eq!(l, r, "y = {y:?}");
        n += 1;
    }
    status(4, "resultant identity", true, &format!("{n} matrices (gl_2 over GF(3), GF(5) exhaustive; 10^4 random in gl_3(GF(3)))"));
}

/// a_1 ... a_{r-1} square-free and split, prime to a_r.
fn split_companion(k: &Field, y: &[Vec<u32>]) -> bool {
    let r = y.len();
    let a = principal_minors(y, k);
    let prod = a[..r - 1].iter().fold(Poly::one(k), |acc, x| acc.mul(x));
    let fs = poly::factor(&prod).unwrap();
    fs.iter().all(|(f, e)| *e == 1 && f.deg() == 1) && prod.gcd(&a[r - 1]).deg() == 0
}

#[test]
fn criterion_5_kappa_cross_validation() {
    let k = Field::new(3, 1).unwrap();
    let lifts: Vec<LocalElem> = (0..27u32).map(|c| LocalElem::from_poly(Poly::new(&k, vec![c % 3, (c / 3) % 3, c / 9]))).collect();
    let mut n = 0;
    for code in 0..27usize.pow(4) {
        let e = [code % 27, (code / 27) % 27, (code / 729) % 27, code / 19683];
        let g = LocalMatrix::from_fn(2, |i, j| lifts[e[2 * i + j]].clone());
        if !g.is_gl_o() {
            continue;
        }
        assert_eq!(kappa_general(&g).unwrap().value, kappa_kubota(&g).unwrap().value, "g = {g:?}");
        n += 1;
    }
    assert_eq!(n, 27usize.pow(4) * 48 / 81);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut m = 0;
    for (p, r) in [(5u32, 3usize), (7, 2)] {
        let k = Field::new(p, 1).unwrap();
        let mut done = 0;
        while done < 50 {
            let y: Vec<Vec<u32>> = (0..r).map(|_| (0..r).map(|_| rng.gen_range(0..p)).collect()).collect();
            if !split_companion(&k, &y) {
                continue;
            }
            let prod = k.mul(kappa_place_product(&y, &k).unwrap(), infinity_sign(&k, r));
            assert_eq!(kappa_poly(&y, &k), prod, "y = {y:?}");
            done += 1;
            m += 1;
        }
    }
    status(
        5,
        "kappa cross-validation",
        true,
        &format!("{n} lifts in GL_2(O/pi^3) over GF(3); {m} split companion y (local product times the infinity sign)"),
    );
}

fn le(k: &Field, rng: &mut ChaCha8Rng) -> LocalElem {
    let q = k.order();
    LocalElem::from_coeffs(k, &[rng.gen_range(1..q), rng.gen_range(0..q)], rng.gen_range(-2..3))
}

#[test]
fn criterion_6_cocycle_suite() {
    let k = Field::new(3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (r, count) in [(2usize, 10_000), (3, 1_000)] {
        for _ in 0..count {
            let [g1, g2, g3] = [0, 1, 2].map(|_| random_matrix(&k, r, &mut rng));
            let lhs = k.mul(chi(&g2, &g3).unwrap(), chi(&g1, &g2.mul(&g3)).unwrap());
            let rhs = k.mul(chi(&g1.mul(&g2), &g3).unwrap(), chi(&g1, &g2).unwrap());
            assert_eq!(lhs, rhs, "g1={g1:?} g2={g2:?} g3={g3:?}");
        }
    }
    // rules 1-6 on inputs of each rule's shape
    let k = Field::new(5, 1).unwrap();
    for _ in 0..300 {
        let r = rng.gen_range(2..4);
        let t: Vec<LocalElem> = (0..r).map(|_| le(&k, &mut rng)).collect();
        let t2: Vec<LocalElem> = (0..r).map(|_| le(&k, &mut rng)).collect();
        let (dt, dt2) = (LocalMatrix::diag(&t), LocalMatrix::diag(&t2));
        let perm = |rng: &mut ChaCha8Rng| {
            let mut w: Vec<usize> = (0..r).collect();
            for i in (1..r).rev() {
                w.swap(i, rng.gen_range(0..=i));
            }
            LocalMatrix::permutation(&k, &w)
        };
        let (pw, pw2) = (perm(&mut rng), perm(&mut rng));
        assert_eq!(chi(&dt, &dt2).unwrap(), chi_torus(&t, &t2));
        assert_eq!(chi(&pw, &pw2).unwrap(), 1);
        assert_eq!(chi(&dt, &pw).unwrap(), 1);
        let l = rng.gen_range(0..r - 1);
        let mut s: Vec<usize> = (0..r).collect();
        s.swap(l, l + 1);
        assert_eq!(chi(&LocalMatrix::permutation(&k, &s), &dt).unwrap(), chi_alpha_torus(l, &t));
        let (g, g2) = (random_matrix(&k, r, &mut rng), random_matrix(&k, r, &mut rng));
        let n = LocalMatrix::from_fn(r, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Equal => LocalElem::one(&k),
            std::cmp::Ordering::Less => le(&k, &mut rng),
            _ => LocalElem::zero(&k),
        });
        assert_eq!(chi(&n.mul(&g), &g2.mul(&n)).unwrap(), chi(&g, &g2).unwrap());
        assert_eq!(chi(&dt, &g2).unwrap(), chi(&dt, &bruhat(&g2).unwrap().middle()).unwrap());
    }
    status(6, "cocycle suite", true, "10^4 triples in GL_2, 10^3 in GL_3 over GF(3); rules 1-6 on 300 shaped inputs over GF(5)");
}

fn random_ratfunc(k: &Field, rng: &mut ChaCha8Rng) -> RatFunc {
    let side = |rng: &mut ChaCha8Rng| {
        (0..rng.gen_range(0..=3)).fold(Poly::one(k), |acc, _| {
            let d = rng.gen_range(1..=3);
            let mut cs: Vec<u32> = (0..d).map(|_| rng.gen_range(0..k.order())).collect();
            cs.push(1);
            acc.mul(&Poly::new(k, cs))
        })
    };
    let num = side(rng).scale(rng.gen_range(1..k.order()));
    RatFunc::new(num, side(rng)).unwrap()
}

#[test]
fn criterion_7_weil_constants() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut items = 0;
    for p in [3u32, 5, 7] {
        let k = Field::new(p, 1).unwrap();
        let c = Completion::origin(&k);
        for _ in 0..100 {
            let (va, vb) = (rng.gen_range(-3..4i64), rng.gen_range(-3..4i64));
            let a = LocalElem::from_coeffs(&k, &[rng.gen_range(1..p), rng.gen_range(0..p)], va);
            let b = LocalElem::from_coeffs(&k, &[rng.gen_range(1..p), rng.gen_range(0..p)], vb);
            let ga = weil_gamma(&a, &c).unwrap().value;
            let gb = weil_gamma(&b, &c).unwrap().value;
            if va % 2 == 0 {
                assert!(ga.is_one());
            } else if va < 0 {
                // gamma(a) = q^{-1/2} sum_b psi(a pi^{2r} b / 2) [b, pi], v(a) = -(2r + 1)
                let lead = a.mul_pi_pow(-va - 1);
                let mut s = CycloValue::zero(p);
                for bb in k.units() {
                    let x = k.mul(k.mul(lead.angular(), bb), k.half());
                    let sym = hilbert_symbol(&LocalElem::constant(&k, bb), &LocalElem::pi_pow(&k, 1)).unwrap();
                    s = s.add(&CycloValue::psi(&k, x).scale(sym as i64));
                }
                assert_eq!(ga, s.mul(&CycloValue::q_pow_half(p, 1, -1)), "a = {a}");
            }
            let h = hilbert_symbol(&a, &b).unwrap();
            assert_eq!(weil_gamma(&a.mul(&b), &c).unwrap().value, ga.mul(&gb).scale(h as i64));
            items += 1;
        }
    }
    for i in 0..100 {
        let k = Field::new([3u32, 5, 7][i % 3], 1).unwrap();
        let a = random_ratfunc(&k, &mut rng);
        let wp = weil_product_check(&a).unwrap();
        assert!(wp.holds(), "a = {a}: {:?}", wp.factors);
    }
    status(7, "Weil constants", true, &format!("items 1-3 on {items} pairs over q=3,5,7; product formula on 100 random a"));
}

#[test]
fn criterion_8_mode_agreement() {
    let k = Field::new(3, 1).unwrap();
    let zm1 = zeta_char(&k, k.neg(1)) as i64;
    let mut n = 0;
    let mut fiber_equal = 0;
    let mut check = |t: &GlobalTorus, alpha: &[u32], fiber: bool| {
        let ip = i_global(t, alpha, Mode::Product).unwrap();
        let jp = j_global(t, alpha, Mode::Product).unwrap();
        assert_eq!(ip, i_global(t, alpha, Mode::Direct).unwrap(), "a = {:?}", t.a);
        assert_eq!(jp, j_global(t, alpha, Mode::Direct).unwrap(), "a = {:?}", t.a);
        if fiber {
            let r = t.r();
            let sign = if (r * (r - 1) / 2) % 2 == 1 { zm1 } else { 1 };
            assert_eq!(matrix_fiber_sum_i(t, alpha).unwrap(), ip, "a = {:?}", t.a);
            let jf = matrix_fiber_sum_j(t, alpha).unwrap();
            assert_eq!(jf, jp.scale(sign), "a = {:?}", t.a);
            fiber_equal += (jf == jp) as usize;
        }
        n += 1;
    };
    for t in admissible_family(&k, 2) {
        for alpha in alpha_grid(&k, 2) {
            check(&t, &alpha, true);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let fam3 = admissible_family(&k, 3);
    for _ in 0..12 {
        let t = &fam3[rng.gen_range(0..fam3.len())];
        let alpha = vec![rng.gen_range(1..3), rng.gen_range(1..3)];
        check(t, &alpha, true);
    }
    // other degree vectors: product against direct only
    for d in [[1usize, 1, 2], [2, 1, 1], [2, 2, 1]] {
        let mut done = 0;
        while done < 4 {
            let a: Vec<Poly> = d.iter().map(|&di| {
                let ps = monic_polys(&k, di);
                ps[rng.gen_range(0..ps.len())].clone()
            }).collect();
            let t = GlobalTorus::new(a).unwrap();
            if !t.admissible() {
                continue;
            }
            check(&t, &[rng.gen_range(1..3), rng.gen_range(1..3)], false);
            done += 1;
        }
    }
    let fibers = 18 * 2 + 12;
    let detail = format!(
        "{n} inputs: I product = direct = fiber, J product = direct; J fiber = zeta(-1)^(r(r-1)/2) J_global, equal on {fiber_equal}/{fibers}"
    );
    status(8, "mode agreement", fiber_equal == fibers, &detail);
}

#[test]
fn criterion_9_character_sum() {
    let mut lines = vec![];
    for (p, m) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2)] {
        let k = Field::new(p, m).unwrap();
        let rep = zeta_sum_identity_check(&k);
        let q = k.order() as usize;
        assert_eq!(rep.checks, q * (q - 1));
        assert!(rep.holds(), "q = {q}: {:?} {:?}", rep.failures, rep.failures_c1);
        lines.push(format!("q={q}: {}", rep.checks));
    }
    status(9, "character-sum identity", true, &format!("(u,c) pairs {}", lines.join(", ")));
}
