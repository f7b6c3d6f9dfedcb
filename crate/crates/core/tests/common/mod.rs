#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use klr_core::cartan::{CartanDatum, DominantWeight, RootElement};
use klr_core::cyclotomic::CyclotomicContext;
use klr_core::klr::{KlrAlgebra, KlrElement};
use klr_core::linalg::{Echelon, SparseVec};
use klr_core::poly::{Monomial, MultiPoly};
use klr_core::symgroup::Permutation;
use num_traits::One;

use klr_core::Rational;

pub type Q = Rational;

pub fn datum(name: &str) -> CartanDatum<Q> {
    CartanDatum::preset(name).unwrap_or_else(|| panic!("unknown preset {name}"))
}

pub fn algebra(name: &str, beta: &[u32]) -> Arc<KlrAlgebra<Q>> {
    KlrAlgebra::new(Arc::new(datum(name)), RootElement::new(beta.to_vec())).unwrap()
}

pub fn context(name: &str, beta: &[u32], lambda: &[u32]) -> Arc<CyclotomicContext<Q>> {
    CyclotomicContext::new(algebra(name, beta), DominantWeight::new(lambda.to_vec())).unwrap()
}

/// All nonzero multiplicity vectors of rank `r` with height at most `h`.
pub fn roots_up_to(r: usize, h: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; r];
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == cur.len() {
            if cur.iter().any(|&m| m > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for m in 0..=left {
            cur[k] = m;
            rec(k + 1, left - m, cur, out);
        }
        cur[k] = 0;
    }
    rec(0, h, &mut cur, &mut out);
    out
}

/// All weights of rank `r` with coordinates at most `c`.
pub fn weights_up_to(r: usize, c: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out.into_iter().flat_map(|w: Vec<u32>| (0..=c).map(move |x| [w.clone(), vec![x]].concat())).collect();
    }
    out
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub cartan: &'static str,
    pub beta: Vec<u32>,
    pub lambda: Vec<u32>,
}

impl Instance {
    pub fn context(&self) -> Arc<CyclotomicContext<Q>> {
        context(self.cartan, &self.beta, &self.lambda)
    }

    pub fn raised(&self, i: usize) -> Instance {
        let mut lambda = self.lambda.clone();
        lambda[i] += 1;
        Instance { lambda, ..self.clone() }
    }
}

impl std::fmt::Display for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} beta={:?} lambda={:?}", self.cartan, self.beta, self.lambda)
    }
}

/// Multiplicity-free `beta` of height at most 3 and `Lambda` with
/// coordinates at most 2, over A_2, A_3 and B_2.
pub fn multiplicity_free_grid() -> Vec<Instance> {
    let mut out = Vec::new();
    for (cartan, r) in [("A2", 2), ("A3", 3), ("B2", 2)] {
        for beta in roots_up_to(r, 3).into_iter().filter(|b| b.iter().all(|&m| m <= 1)) {
            for lambda in weights_up_to(r, 2) {
                out.push(Instance { cartan, beta: beta.clone(), lambda });
            }
        }
    }
    out
}

/// `Q_{u,nu}` straight from the definition: a factor for every pair
/// `k < t` whose order `u` reverses.
pub fn q_u_nu_oracle(alg: &KlrAlgebra<Q>, u: &Permutation, nu: &[usize]) -> MultiPoly<Q> {
    let n = nu.len();
    let img = u.images();
    let mut acc = MultiPoly::one(n);
    for k in 0..n {
        for t in k + 1..n {
            if img[k] > img[t] {
                acc = acc.mul(&alg.datum().q_at(nu[k], nu[t], n, k, t));
            }
        }
    }
    acc
}

fn monomials_of_degree(alg: &KlrAlgebra<Q>, nu: &[usize], d: i64) -> Vec<Vec<u16>> {
    let n = nu.len();
    let weights: Vec<i64> = nu.iter().map(|&l| alg.datum().bilinear_form(l, l)).collect();
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fn rec(k: usize, left: i64, w: &[i64], cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if k == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e as i64 * w[k] <= left {
            cur[k] = e;
            rec(k + 1, left - e as i64 * w[k], w, cur, out);
            e += 1;
        }
        cur[k] = 0;
    }
    if d >= 0 {
        rec(0, d, &weights, &mut cur, &mut out);
    }
    out
}

/// Graded dimensions of `e(mu) R^Lambda e(nu)` for degrees in `range`,
/// computed as `dim e(mu) R_d e(nu) - rank` of the degree-`d` part of the
/// spanning set `tau_u x^c a(x_1) e(kappa) tau_v x^e e(nu)` of the ideal.
pub fn graded_dims_oracle(ctx: &CyclotomicContext<Q>, mu: usize, nu: usize, range: std::ops::RangeInclusive<i64>) -> BTreeMap<i64, usize> {
    let alg = ctx.algebra();
    let n = alg.n();
    let group = alg.group();
    let d = alg.datum();
    let perms_between = |from: usize, to: usize| -> Vec<usize> { (0..group.order()).filter(|&w| alg.act_seq(w, from) == to).collect() };
    let tau_degree = |w: usize, s: usize| alg.term_degree(w, s, &Monomial::one(n));
    let mut out = BTreeMap::new();
    for deg in range {
        let mut ambient = 0;
        for w in perms_between(nu, mu) {
            ambient += monomials_of_degree(alg, alg.seq(nu), deg - tau_degree(w, nu)).len();
        }
        let mut keys: HashMap<(usize, Monomial), usize> = HashMap::new();
        let mut rows = Vec::new();
        for kappa in 0..alg.sequences().len() {
            let k1 = alg.seq(kappa)[0];
            let lam = ctx.lambda().coord(k1) as u16;
            let a_deg = lam as i64 * d.bilinear_form(k1, k1);
            for u in perms_between(kappa, mu) {
                for v in perms_between(nu, kappa) {
                    let base = tau_degree(u, kappa) + tau_degree(v, nu) + a_deg;
                    for left_deg in 0..=(deg - base).max(-1) {
                        for c in monomials_of_degree(alg, alg.seq(kappa), left_deg) {
                            for e in monomials_of_degree(alg, alg.seq(nu), deg - base - left_deg) {
                                let mut cx = c.clone();
                                cx[0] += lam;
                                let left = KlrElement::basis_term(alg, u, MultiPoly::monomial(n, Monomial::from_exps(&cx), Q::one()), kappa);
                                let right = KlrElement::basis_term(alg, v, MultiPoly::monomial(n, Monomial::from_exps(&e), Q::one()), nu);
                                let prod = &left * &right;
                                let mut pairs = Vec::new();
                                for (&(w, s), f) in prod.terms() {
                                    assert_eq!(s, nu);
                                    for (m, coef) in f.terms() {
                                        let next = keys.len();
                                        let idx = *keys.entry((w, m.clone())).or_insert(next);
                                        pairs.push((idx, coef.clone()));
                                    }
                                }
                                rows.push(SparseVec::from_pairs(pairs));
                            }
                        }
                    }
                }
            }
        }
        let rank = Echelon::from_rows(keys.len(), rows).rank();
        out.insert(deg, ambient - rank);
    }
    out
}
