//! Evaluates every defining relation of `R_beta` through the multiplication
//! and reports the instances that do not vanish.

use std::sync::Arc;

use super::algebra::KlrAlgebra;
use super::element::KlrElement;
use crate::poly::MultiPoly;
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub relation: String,
    pub nu: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Checker<'a, F: Field> {
    alg: &'a Arc<KlrAlgebra<F>>,
    report: RelationReport,
}

impl<F: Field> Checker<'_, F> {
    fn check(&mut self, relation: String, s: usize, lhs: &KlrElement<F>, rhs: &KlrElement<F>) {
        self.report.checked += 1;
        let diff = lhs - rhs;
        if !diff.is_zero() {
            let d = self.alg.datum();
            self.report.failures.push(RelationFailure {
                relation,
                nu: self.alg.seq(s).iter().map(|&l| d.label_name(l).to_string()).collect(),
                residual: diff.to_string(),
            });
        }
    }
}

/// Check every relation instance for every `nu` in `I^beta`.
pub fn verify_relations<F: Field>(alg: &Arc<KlrAlgebra<F>>) -> RelationReport {
    let n = alg.n();
    let mut c = Checker { alg, report: RelationReport::default() };
    let zero = KlrElement::zero(alg);
    let xs: Vec<_> = (0..n).map(|k| KlrElement::x(alg, k).unwrap()).collect();
    let taus: Vec<_> = (0..n.saturating_sub(1)).map(|k| KlrElement::tau(alg, k).unwrap()).collect();
    let one = KlrElement::one(alg);
    let mut sum = zero.clone();
    for s in 0..alg.sequences().len() {
        let e = KlrElement::idempotent_at(alg, s);
        sum = &sum + &e;
        for t in 0..alg.sequences().len() {
            let et = KlrElement::idempotent_at(alg, t);
            let rhs = if s == t { e.clone() } else { zero.clone() };
            c.check(format!("e(nu)e(nu') nu'={:?}", alg.seq(t)), s, &(&e * &et), &rhs);
        }
        for k in 0..n {
            c.check(format!("x{} e(nu) = e(nu) x{}", k + 1, k + 1), s, &(&xs[k] * &e), &(&e * &xs[k]));
            for l in k + 1..n {
                c.check(format!("x{} x{} = x{} x{}", k + 1, l + 1, l + 1, k + 1), s, &(&(&xs[k] * &xs[l]) * &e), &(&(&xs[l] * &xs[k]) * &e));
            }
        }
        let nu = alg.seq(s);
        for k in 0..n.saturating_sub(1) {
            let sk = KlrElement::idempotent_at(alg, alg.swap_seq(s, k));
            c.check(format!("tau{} e(nu) = e(s nu) tau{}", k + 1, k + 1), s, &(&taus[k] * &e), &(&sk * &taus[k]));
            for l in k + 2..n.saturating_sub(1) {
                c.check(
                    format!("tau{} tau{} = tau{} tau{}", k + 1, l + 1, l + 1, k + 1),
                    s,
                    &(&(&taus[k] * &taus[l]) * &e),
                    &(&(&taus[l] * &taus[k]) * &e),
                );
            }
            let q = KlrElement::poly_at(alg, alg.q_at(nu[k], nu[k + 1], k, k + 1), s);
            c.check(format!("tau{}^2 e(nu) = Q e(nu)", k + 1), s, &(&(&taus[k] * &taus[k]) * &e), &q);
            for l in 0..n {
                let sl = if l == k { k + 1 } else if l == k + 1 { k } else { l };
                let lhs = &(&(&taus[k] * &xs[l]) - &(&xs[sl] * &taus[k])) * &e;
                let rhs = if nu[k] == nu[k + 1] && l == k {
                    -&e
                } else if nu[k] == nu[k + 1] && l == k + 1 {
                    e.clone()
                } else {
                    zero.clone()
                };
                c.check(format!("tau{} x{} - x{} tau{}", k + 1, l + 1, sl + 1, k + 1), s, &lhs, &rhs);
            }
            if k + 2 < n {
                let lhs = &(&(&(&taus[k + 1] * &taus[k]) * &taus[k + 1]) - &(&(&taus[k] * &taus[k + 1]) * &taus[k])) * &e;
                let rhs = if nu[k] == nu[k + 2] {
                    let num = alg.q_at(nu[k], nu[k + 1], k, k + 1).sub(&alg.q_at(nu[k + 2], nu[k + 1], k + 2, k + 1));
                    let den = MultiPoly::var(n, k).sub(&MultiPoly::var(n, k + 2));
                    KlrElement::poly_at(alg, num.exact_quotient(&den).expect("exact braid quotient"), s)
                } else {
                    zero.clone()
                };
                c.check(format!("braid at tau{}", k + 1), s, &lhs, &rhs);
            }
        }
    }
    if !alg.sequences().is_empty() {
        c.check("sum e(nu) = 1".to_string(), 0, &sum, &one);
    }
    c.report
}
