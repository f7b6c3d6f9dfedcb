//! Cyclotomic quotients `R^Lambda_beta`: the generators `g_{nu,k}`, monomial
//! bases of bi-weight spaces and of the whole algebra, and reduction of
//! `R_beta` elements to quotient coordinates.

pub mod fdalg;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::cartan::{CartanError, DominantWeight, Label};
use crate::klr::{KlrAlgebra, KlrElement, KlrError, Terms};
use crate::linalg::SparseVec;
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Field;

pub use fdalg::{AnnihilatorReport, FiniteDimAlgebra, TraceReport, TraidenReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("sequence {0:?} is not in block form")]
    NotBlockForm(Vec<Label>),
    #[error("the full quotient is only supported when every sequence of beta is in block form")]
    Unsupported,
    #[error("element has a term outside the requested basis")]
    OutsideBasis,
    #[error("graded computation requires pure-power cyclotomic polynomials")]
    Ungraded,
    #[error(transparent)]
    Klr(#[from] KlrError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Position of each label inside a block-form sequence, e.g. `(2,2,0,1)`
/// gives `rank[2] = 0, rank[0] = 1, rank[1] = 2`. Labels absent from the
/// sequence get `u8::MAX`.
pub fn block_order(mu: &[Label], nlabels: usize) -> Option<Vec<u8>> {
    let mut rank = vec![u8::MAX; nlabels];
    let mut next = 0u8;
    let mut prev: Option<Label> = None;
    for &l in mu {
        if prev == Some(l) {
            continue;
        }
        if rank[l] != u8::MAX {
            return None;
        }
        rank[l] = next;
        next += 1;
        prev = Some(l);
    }
    Some(rank)
}

/// One basis vector `tau_w x^a e(nu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub w: usize,
    pub nu: usize,
    pub exps: Monomial,
    pub degree: i64,
}

/// A monomial basis together with the caps `N_k` used for each `(w, nu)`.
#[derive(Clone, Debug)]
pub struct CyclotomicBasis {
    pub elements: Vec<BasisElement>,
    pub caps: BTreeMap<(usize, usize), Vec<u16>>,
    index: HashMap<(usize, usize, Monomial), usize>,
}

impl CyclotomicBasis {
    fn from_elements(elements: Vec<BasisElement>, caps: BTreeMap<(usize, usize), Vec<u16>>) -> Self {
        let index = elements.iter().enumerate().map(|(i, b)| ((b.w, b.nu, b.exps.clone()), i)).collect();
        CyclotomicBasis { elements, caps, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, w: usize, nu: usize, m: &Monomial) -> Option<usize> {
        self.index.get(&(w, nu, m.clone())).copied()
    }
}

/// `R^Lambda_beta` over a fixed KLR algebra.
pub struct CyclotomicContext<F: Field> {
    alg: Arc<KlrAlgebra<F>>,
    lambda: DominantWeight,
    a_polys: Vec<MultiPoly<F>>,
    orders: Vec<Option<Vec<u8>>>,
    g_cache: RwLock<HashMap<(Vec<u8>, usize, usize), MultiPoly<F>>>,
}

impl<F: Field> std::fmt::Debug for CyclotomicContext<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CyclotomicContext(lambda={:?}, beta={:?})", self.lambda.coords, self.alg.beta().mults)
    }
}

impl<F: Field> CyclotomicContext<F> {
    pub fn new(alg: Arc<KlrAlgebra<F>>, lambda: DominantWeight) -> Result<Arc<Self>, CyclotomicError> {
        let d = alg.datum();
        d.check_weight(&lambda)?;
        let a_polys = (0..d.rank()).map(|i| d.a_poly(&lambda, i)).collect::<Result<Vec<_>, _>>()?;
        let orders = alg.sequences().iter().map(|s| block_order(s, d.rank())).collect();
        Ok(Arc::new(CyclotomicContext { alg, lambda, a_polys, orders, g_cache: RwLock::new(HashMap::new()) }))
    }

    pub fn algebra(&self) -> &Arc<KlrAlgebra<F>> {
        &self.alg
    }

    pub fn lambda(&self) -> &DominantWeight {
        &self.lambda
    }

    /// Whether the grading is respected by the ideal (pure-power `a_i`).
    pub fn is_graded(&self) -> bool {
        !self.alg.datum().has_custom_a()
    }

    /// `d_{Lambda,beta} = 2(Lambda,beta) - (beta,beta)`.
    pub fn d_lambda_beta(&self) -> i64 {
        self.alg.datum().d_lambda_beta(&self.lambda, self.alg.beta())
    }

    /// Block order of sequence `mu`, if it is in block form.
    pub fn order_of(&self, mu: usize) -> Option<&[u8]> {
        self.orders[mu].as_deref()
    }

    /// Whether every sequence in `I^beta` is in block form, so that the
    /// whole algebra has an explicit monomial basis.
    pub fn supports_full_algebra(&self) -> bool {
        self.orders.iter().all(Option::is_some)
    }

    fn a_at(&self, i: Label, k: usize) -> MultiPoly<F> {
        let n = self.alg.n();
        MultiPoly::from_terms(n, self.a_polys[i].terms().map(|(m, c)| (Monomial::var(n, k, m.exps()[0]), c.clone())))
    }

    fn g_single(&self, nu: usize, k: usize, order: &[u8]) -> MultiPoly<F> {
        let key = (order.to_vec(), nu, k);
        if let Some(g) = self.g_cache.read().unwrap().get(&key) {
            return g.clone();
        }
        let s = self.alg.seq(nu);
        let g = if k == 0 {
            self.a_at(s[0], 0)
        } else {
            let k = k - 1;
            let (i, j) = (s[k], s[k + 1]);
            if i == j {
                self.g_single(nu, k, order).demazure(k)
            } else {
                let prev = self.g_single(self.alg.swap_seq(nu, k), k, order).swap(k);
                if order[i] > order[j] {
                    prev
                } else {
                    prev.mul(&self.alg.q_at(i, j, k, k + 1))
                }
            }
        };
        self.g_cache.write().unwrap().insert(key, g.clone());
        g
    }

    /// `[g_{nu,1}, ..., g_{nu,n}]` for the label order `order`.
    pub fn g_generators(&self, nu: usize, order: &[u8]) -> Vec<MultiPoly<F>> {
        (0..self.alg.n()).map(|k| self.g_single(nu, k, order)).collect()
    }

    /// `g^Lambda_{nu,k}` (0-based `k`) for the block order of `target`.
    pub fn g_generator(&self, target: &[Label], nu: &[Label], k: usize) -> Result<MultiPoly<F>, CyclotomicError> {
        let order = block_order(target, self.alg.datum().rank()).ok_or_else(|| CyclotomicError::NotBlockForm(target.to_vec()))?;
        let s = self.alg.seq_index(nu)?;
        if k >= self.alg.n() {
            return Err(KlrError::IndexOutOfRange(k).into());
        }
        Ok(self.g_single(s, k, &order))
    }

    /// Caps `N_k`: the `x_k`-degree of `g_{nu,k}`.
    pub fn caps(&self, nu: usize, order: &[u8]) -> Vec<u16> {
        self.g_generators(nu, order)
            .iter()
            .enumerate()
            .map(|(k, g)| g.degree_in(k).unwrap_or(0))
            .collect()
    }

    fn enumerate(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> CyclotomicBasis {
        let mut elements = Vec::new();
        let mut caps = BTreeMap::new();
        for (nu, w) in pairs {
            let mu = self.alg.act_seq(w, nu);
            let order = self.orders[mu].as_ref().expect("target in block form");
            let c = self.caps(nu, order);
            for exps in exponent_box(&c) {
                let m = Monomial::from_exps(&exps);
                let degree = self.alg.term_degree(w, nu, &m);
                elements.push(BasisElement { w, nu, exps: m, degree });
            }
            caps.insert((w, nu), c);
        }
        CyclotomicBasis::from_elements(elements, caps)
    }

    /// Basis `{tau_w x^a e(nu) : w.nu = target, a_k < N_k}` of
    /// `e(target) R^Lambda_beta e(nu)`.
    pub fn biweight_basis(&self, target: &[Label], nu: &[Label]) -> Result<CyclotomicBasis, CyclotomicError> {
        let t = self.alg.seq_index(target)?;
        let s = self.alg.seq_index(nu)?;
        if self.orders[t].is_none() {
            return Err(CyclotomicError::NotBlockForm(target.to_vec()));
        }
        let ws: Vec<usize> = (0..self.alg.group().order()).filter(|&w| self.alg.act_seq(w, s) == t).collect();
        Ok(self.enumerate(ws.into_iter().map(|w| (s, w))))
    }

    /// Monomial basis of the whole quotient.
    pub fn full_basis(&self) -> Result<CyclotomicBasis, CyclotomicError> {
        if !self.supports_full_algebra() {
            return Err(CyclotomicError::Unsupported);
        }
        let ns = self.alg.sequences().len();
        let order = self.alg.group().order();
        Ok(self.enumerate((0..ns).flat_map(|s| (0..order).map(move |w| (s, w)))))
    }

    /// Reduce the polynomial parts of `terms` modulo the triangular sets
    /// `g_{nu,1..n}`; every left idempotent must be in block form.
    pub fn reduce_terms(&self, terms: &Terms<F>) -> Result<Terms<F>, CyclotomicError> {
        let n = self.alg.n();
        let mut out = BTreeMap::new();
        for (&(w, nu), f) in terms {
            let mu = self.alg.act_seq(w, nu);
            let order = self.orders[mu].as_ref().ok_or_else(|| CyclotomicError::NotBlockForm(self.alg.seq(mu).to_vec()))?;
            let gs = self.g_generators(nu, order);
            if gs.iter().any(|g| g.as_constant().is_some_and(|c| !c.is_zero())) {
                continue;
            }
            let mut r = f.clone();
            for t in (0..n).rev() {
                if r.is_zero() {
                    break;
                }
                r = r.rem_monic_in(&gs[t], t);
            }
            if !r.is_zero() {
                out.insert((w, nu), r);
            }
        }
        Ok(out)
    }

    /// Coordinates of the image of `terms` in the given basis.
    pub fn coordinates(&self, basis: &CyclotomicBasis, terms: &Terms<F>) -> Result<SparseVec<F>, CyclotomicError> {
        let reduced = self.reduce_terms(terms)?;
        let mut pairs = Vec::new();
        for ((w, nu), f) in reduced {
            for (m, c) in f.into_terms() {
                let i = basis.index.get(&(w, nu, m)).ok_or(CyclotomicError::OutsideBasis)?;
                pairs.push((*i, c));
            }
        }
        Ok(SparseVec::from_pairs(pairs))
    }

    /// Lift of basis vector `i` to `R_beta`.
    pub fn lift(&self, basis: &CyclotomicBasis, i: usize) -> KlrElement<F> {
        let b = &basis.elements[i];
        KlrElement::basis_term(&self.alg, b.w, MultiPoly::monomial(self.alg.n(), b.exps.clone(), F::one()), b.nu)
    }

    /// Lift of a coordinate vector to `R_beta`.
    pub fn lift_vec(&self, basis: &CyclotomicBasis, v: &SparseVec<F>) -> KlrElement<F> {
        let mut e = KlrElement::zero(&self.alg);
        for (i, c) in v.entries() {
            let b = &basis.elements[*i];
            e.add_term(b.w, b.nu, &MultiPoly::monomial(self.alg.n(), b.exps.clone(), c.clone()));
        }
        e
    }
}

/// All exponent vectors `a` with `a_k < caps[k]`, in lexicographic order.
pub fn exponent_box(caps: &[u16]) -> Vec<Vec<u16>> {
    if caps.contains(&0) {
        return Vec::new();
    }
    let mut out = vec![Vec::with_capacity(caps.len())];
    for &c in caps {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..c).map(move |a| {
                    let mut v = v.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Caps of the multiplicity-free basis: `<alpha_{nu_t}^vee, Lambda> -
/// sum_{k<t, w(k)<w(t)} a_{nu_t,nu_k}`, or `None` if some cap is negative.
pub fn multiplicity_free_caps<F: Field>(
    alg: &KlrAlgebra<F>,
    lambda: &DominantWeight,
    w: usize,
    nu: usize,
) -> Vec<i64> {
    let d = alg.datum();
    let s = alg.seq(nu);
    let p = alg.perm(w);
    (0..alg.n())
        .map(|t| {
            let mut c = lambda.coord(s[t]) as i64;
            for k in 0..t {
                if p.apply(k) < p.apply(t) {
                    c -= d.a(s[t], s[k]);
                }
            }
            c
        })
        .collect()
}

#[cfg(test)]
mod tests;
