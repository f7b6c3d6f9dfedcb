//! The polynomial representation on `sum_nu k[x_1..x_n] 1_nu`, used as an
//! independent check of the multiplication.

use std::collections::BTreeMap;

use super::algebra::KlrAlgebra;
use super::element::KlrElement;
use crate::poly::MultiPoly;
use crate::scalar::Field;

/// A vector `sum_nu f_nu 1_nu`, keyed by sequence index.
pub type PolyVector<F> = BTreeMap<usize, MultiPoly<F>>;

fn push<F: Field>(v: &mut PolyVector<F>, s: usize, f: MultiPoly<F>) {
    if f.is_zero() {
        return;
    }
    let e = v.entry(s).or_insert_with(|| MultiPoly::zero(f.nvars()));
    e.add_assign_ref(&f);
    if e.is_zero() {
        v.remove(&s);
    }
}

/// Action of `tau_k` on `f 1_nu`.
pub fn apply_tau<F: Field>(alg: &KlrAlgebra<F>, k: usize, f: &MultiPoly<F>, s: usize) -> (MultiPoly<F>, usize) {
    let nu = alg.seq(s);
    let (i, j) = (nu[k], nu[k + 1]);
    if i == j {
        (f.demazure(k), s)
    } else if i < j {
        (f.swap(k), alg.swap_seq(s, k))
    } else {
        (alg.q_at(i, j, k + 1, k).mul(&f.swap(k)), alg.swap_seq(s, k))
    }
}

/// Apply `a` to the vector `v`.
pub fn polyrep_apply<F: Field>(a: &KlrElement<F>, v: &PolyVector<F>) -> PolyVector<F> {
    let alg = a.algebra();
    let mut out = BTreeMap::new();
    for (&(w, nu), p) in a.terms() {
        let Some(g) = v.get(&nu) else { continue };
        let mut h = p.mul(g);
        let mut s = nu;
        for &l in alg.group().word(w).iter().rev() {
            let (h2, s2) = apply_tau(alg, l as usize, &h, s);
            h = h2;
            s = s2;
            if h.is_zero() {
                break;
            }
        }
        push(&mut out, s, h);
    }
    out
}
