//! The finite-field character sum identity
//! sum_{v + c/v = u} zeta(v) = sum_{e^2 = c} zeta(u - 2e), with zeta(0) = 0.

use crate::algebra::Field;
use crate::symbols::zeta_char;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaReport {
    /// pairs (u, c) checked
    pub checks: usize,
    /// (u, c, left, right) where the two sides differ
    pub failures: Vec<(u32, u32, i32, i32)>,
    /// failures of the c = 1 form zeta(u - 2) + zeta(u + 2)
    pub failures_c1: Vec<(u32, i32, i32)>,
}

impl ZetaReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty() && self.failures_c1.is_empty()
    }
}

/// sum over v in k^* with v + c/v = u of zeta(v)
pub fn zeta_lhs(k: &Field, u: u32, c: u32) -> i32 {
    (1..k.order()).filter(|&v| k.add(v, k.mul(c, k.inv(v))) == u).map(|v| zeta_char(k, v)).sum()
}

/// sum over e in k with e^2 = c of zeta(u - 2e)
pub fn zeta_rhs(k: &Field, u: u32, c: u32) -> i32 {
    (0..k.order()).filter(|&e| k.mul(e, e) == c).map(|e| zeta_char(k, k.sub(u, k.add(e, e)))).sum()
}

pub fn zeta_sum_identity_check(k: &Field) -> ZetaReport {
    let mut rep = ZetaReport { checks: 0, failures: vec![], failures_c1: vec![] };
    for u in 0..k.order() {
        for c in 1..k.order() {
            rep.checks += 1;
            let (l, r) = (zeta_lhs(k, u, c), zeta_rhs(k, u, c));
            if l != r {
                rep.failures.push((u, c, l, r));
            }
        }
        let two = k.add(1, 1);
        let l = zeta_lhs(k, u, 1);
        let r = zeta_char(k, k.sub(u, two)) + zeta_char(k, k.add(u, two));
        if l != r {
            rep.failures_c1.push((u, l, r));
        }
    }
    rep
}
