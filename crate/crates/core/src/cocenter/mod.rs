//! Cocenter of `R^Lambda_beta` for multiplicity-free `beta`: the monomial
//! basis `T_gamma^Lambda`, the commutator generators `P(u, nu, a)`, a
//! leading-term reduction into `T_gamma^Lambda` coordinates, the exponent
//! shift `iota` and the center-surjectivity verdict.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::{Label, RootElement};
use crate::cyclotomic::{exponent_box, CyclotomicContext, CyclotomicError, FiniteDimAlgebra};
use crate::klr::{KlrAlgebra, KlrError, PolyVector, Terms};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Field;
use crate::symgroup::{GammaOrder, Permutation, SymError};

#[cfg(test)]
mod tests;

/// Step limit for [`Cocenter::reduce`].
pub const REDUCTION_GUARD: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocenterError {
    #[error("beta is not multiplicity-free")]
    NotMultiplicityFree,
    #[error("gamma {0:?} is not a weight sequence of beta")]
    BadGamma(Vec<Label>),
    #[error("gamma must start with label {0}")]
    GammaFirst(Label),
    #[error("label {0} does not occur in beta")]
    LabelNotInBeta(Label),
    #[error("permutation is not of the form s_p ... s_(q-1)")]
    NotInterval,
    #[error("position {0} out of range")]
    Position(usize),
    #[error("nu < u.nu fails for the commutator generator")]
    NotRaising,
    #[error("unexpected leading term while reducing")]
    LeadingTerm,
    #[error("reduction did not terminate within {0} steps")]
    Guard(usize),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Klr(#[from] KlrError),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
}

/// The increasing sequence of labels occurring in `beta`.
pub fn default_gamma(beta: &RootElement) -> Vec<Label> {
    beta.support()
}

/// `default_gamma` with `i` moved to the front.
pub fn rotated_gamma(beta: &RootElement, i: Label) -> Result<Vec<Label>, CocenterError> {
    let mut g = default_gamma(beta);
    let pos = g.iter().position(|&l| l == i).ok_or(CocenterError::LabelNotInBeta(i))?;
    let l = g.remove(pos);
    g.insert(0, l);
    Ok(g)
}

/// `T_gamma^Lambda` as a list of `(sequence index, exponents)`.
#[derive(Clone, Debug)]
pub struct CocenterBasis {
    pub gamma: GammaOrder,
    pub elements: Vec<(usize, Vec<u16>)>,
    /// Per-sequence exponent bounds; `a_t < bounds[nu][t]`.
    pub bounds: BTreeMap<usize, Vec<i64>>,
    index: HashMap<(usize, Vec<u16>), usize>,
}

impl CocenterBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, nu: usize, exps: &[u16]) -> Option<usize> {
        self.index.get(&(nu, exps.to_vec())).copied()
    }

    pub fn contains(&self, nu: usize, exps: &[u16]) -> bool {
        exps.iter().zip(&self.bounds[&nu]).all(|(&a, &b)| (a as i64) < b)
    }
}

/// `P(u, nu, F) = Q_{u,nu} F e(nu) - u.(Q_{u,nu} F e(nu))`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorGenerator<F: Field> {
    pub u: Permutation,
    pub nu: usize,
    pub f: MultiPoly<F>,
}

impl<F: Field> CommutatorGenerator<F> {
    pub fn monomial(u: Permutation, nu: usize, exps: &[u16]) -> Self {
        let f = MultiPoly::monomial(exps.len(), Monomial::from_exps(exps), F::one());
        CommutatorGenerator { u, nu, f }
    }

    pub fn realize(&self, alg: &KlrAlgebra<F>) -> PolyVector<F> {
        let q = alg.q_u_nu(&self.u, alg.seq(self.nu)).mul(&self.f);
        let mut out = PolyVector::new();
        add_poly(&mut out, self.nu, &q);
        let w = alg.perm_index(&self.u);
        add_poly(&mut out, alg.act_seq(w, self.nu), &permute(&q, &self.u).neg());
        out
    }
}

fn permute<F: Field>(f: &MultiPoly<F>, w: &Permutation) -> MultiPoly<F> {
    let images: Vec<usize> = w.images().iter().map(|&i| i as usize).collect();
    f.permute(&images)
}

fn add_poly<F: Field>(v: &mut PolyVector<F>, s: usize, f: &MultiPoly<F>) {
    if f.is_zero() {
        return;
    }
    let n = f.nvars();
    let e = v.entry(s).or_insert_with(|| MultiPoly::zero(n));
    e.add_assign_ref(f);
    if e.is_zero() {
        v.remove(&s);
    }
}

/// Polynomial elements as normal-form terms with trivial `tau` part.
pub fn poly_terms<F: Field>(alg: &KlrAlgebra<F>, v: &PolyVector<F>) -> Terms<F> {
    let id = alg.group().identity_index();
    v.iter().filter(|(_, f)| !f.is_zero()).map(|(&s, f)| ((id, s), f.clone())).collect()
}

/// Bookkeeping for the leading-term classification of a monomial.
enum Leading {
    Basis,
    Ideal(usize),
    Commutator(usize),
}

/// Cocenter data for a fixed cyclotomic quotient and order `gamma`.
pub struct Cocenter<F: Field> {
    ctx: Arc<CyclotomicContext<F>>,
    gamma: GammaOrder,
    basis: CocenterBasis,
    ideal_gens: Vec<Vec<MultiPoly<F>>>,
    ideal_caps: Vec<Vec<i64>>,
    rank: Vec<usize>,
}

impl<F: Field> std::fmt::Debug for Cocenter<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cocenter(gamma={:?}, |T|={})", self.gamma.gamma(), self.basis.len())
    }
}

impl<F: Field> Cocenter<F> {
    /// `gamma = None` uses [`default_gamma`].
    pub fn new(ctx: Arc<CyclotomicContext<F>>, gamma: Option<Vec<Label>>) -> Result<Self, CocenterError> {
        let alg = ctx.algebra().clone();
        if !alg.beta().is_multiplicity_free() {
            return Err(CocenterError::NotMultiplicityFree);
        }
        let g = gamma.unwrap_or_else(|| default_gamma(alg.beta()));
        if alg.seq_index(&g).is_err() {
            return Err(CocenterError::BadGamma(g));
        }
        let gamma = GammaOrder::new(g)?;
        let nseq = alg.sequences().len();
        let mut ideal_gens = Vec::with_capacity(nseq);
        let mut ideal_caps = Vec::with_capacity(nseq);
        for s in 0..nseq {
            let order = ctx.order_of(s).expect("multiplicity-free sequences are in block form").to_vec();
            let gens = ctx.g_generators(s, &order);
            ideal_caps.push(gens.iter().enumerate().map(|(k, g)| g.degree_in(k).map_or(0, i64::from)).collect());
            ideal_gens.push(gens);
        }
        let mut by_gamma: Vec<usize> = (0..nseq).collect();
        by_gamma.sort_by(|&a, &b| gamma.cmp(alg.seq(a), alg.seq(b)));
        let mut rank = vec![0; nseq];
        for (r, &s) in by_gamma.iter().enumerate() {
            rank[s] = r;
        }
        let basis = enumerate_basis(&ctx, &gamma);
        Ok(Cocenter { ctx, gamma, basis, ideal_gens, ideal_caps, rank })
    }

    pub fn context(&self) -> &Arc<CyclotomicContext<F>> {
        &self.ctx
    }

    pub fn algebra(&self) -> &Arc<KlrAlgebra<F>> {
        self.ctx.algebra()
    }

    pub fn gamma(&self) -> &GammaOrder {
        &self.gamma
    }

    pub fn basis(&self) -> &CocenterBasis {
        &self.basis
    }

    /// `k_{nu,t}` for a 1-based position `t`: the largest 1-based `p < t`
    /// with `nu_p < nu_t` in gamma order, or 0.
    pub fn k_nu_t(&self, nu: &[Label], t: usize) -> Result<usize, CocenterError> {
        if t == 0 || t > nu.len() {
            return Err(CocenterError::Position(t));
        }
        Ok(self.gamma.k_nu_t(nu, t - 1))
    }

    /// Upper bound (exclusive) on `a_t` in `T_gamma^Lambda`; 0-based `t`.
    pub fn t_bound(&self, nu: &[Label], t: usize) -> i64 {
        t_bound(&self.ctx, &self.gamma, nu, t)
    }

    /// `<alpha_{nu_t}^vee, Lambda> - sum_{k < t} a_{nu_t, nu_k}`; 0-based `t`.
    pub fn ideal_bound(&self, nu: &[Label], t: usize) -> i64 {
        partial_bound(&self.ctx, nu, t, t)
    }

    /// `d_{nu,u,t}` for `u = s_p ... s_{q-1}` and a 1-based position `t`.
    pub fn d_bound(&self, nu: &[Label], u: &Permutation, t: usize) -> Result<i64, CocenterError> {
        let (k, last) = u.as_interval().ok_or(CocenterError::NotInterval)?;
        if t == 0 || t > nu.len() {
            return Err(CocenterError::Position(t));
        }
        let (p0, q0, t0) = (k, last + 1, t - 1);
        Ok(if t0 > q0 {
            self.t_bound(nu, t0)
        } else if t0 == q0 {
            partial_bound(&self.ctx, nu, t0, p0)
        } else {
            partial_bound(&self.ctx, nu, t0, t0)
        })
    }

    /// `P(u, nu, F)` as a polynomial element.
    pub fn generator(&self, g: &CommutatorGenerator<F>) -> PolyVector<F> {
        g.realize(self.algebra())
    }

    /// Rewrite `P(u, nu, F)` with `nu < u.nu` as a sum of generators whose
    /// permutations are indecomposable relative to their sequences.
    pub fn expand_decomposable(&self, g: &CommutatorGenerator<F>) -> Result<Vec<CommutatorGenerator<F>>, CocenterError> {
        let mut out = Vec::new();
        self.expand_into(g.clone(), &mut out)?;
        Ok(out)
    }

    fn expand_into(&self, g: CommutatorGenerator<F>, out: &mut Vec<CommutatorGenerator<F>>) -> Result<(), CocenterError> {
        let alg = self.algebra();
        let nu = alg.seq(g.nu).to_vec();
        if !self.gamma.less(&nu, &g.u.act(&nu))? {
            return Err(CocenterError::NotRaising);
        }
        if self.gamma.is_indecomposable(&g.u, &nu)? {
            out.push(g);
            return Ok(());
        }
        let (u1, u2) = self.gamma.decompose(alg.group(), &g.u, &nu)?;
        let mu = u2.act(&nu);
        let mu_idx = alg.seq_index(&mu)?;
        let f2 = permute(&alg.q_u_nu(&u1, &mu), &u2.inverse()).mul(&g.f);
        self.expand_into(CommutatorGenerator { u: u2.clone(), nu: g.nu, f: f2 }, out)?;
        let h = permute(&alg.q_u_nu(&u2, &nu).mul(&g.f), &u2);
        if self.gamma.less(&mu, &u1.act(&mu))? {
            self.expand_into(CommutatorGenerator { u: u1, nu: mu_idx, f: h }, out)
        } else {
            let target = alg.seq_index(&u1.act(&mu))?;
            let f1 = permute(&h, &u1).neg();
            self.expand_into(CommutatorGenerator { u: u1.inverse(), nu: target, f: f1 }, out)
        }
    }

    fn classify(&self, s: usize, m: &Monomial) -> Leading {
        let nu = self.algebra().seq(s);
        let e = m.exps();
        if let Some(k) = (0..e.len()).rev().find(|&k| e[k] as i64 >= self.ideal_caps[s][k]) {
            return Leading::Ideal(k);
        }
        match (0..e.len()).rev().find(|&t| e[t] as i64 >= self.t_bound(nu, t)) {
            Some(q) => Leading::Commutator(q),
            None => Leading::Basis,
        }
    }

    /// Coordinates in `T_gamma^Lambda` of the image of a polynomial element
    /// in the cocenter.
    pub fn reduce(&self, x: &PolyVector<F>) -> Result<SparseVec<F>, CocenterError> {
        let alg = self.algebra().clone();
        let n = alg.n();
        let mut work: BTreeMap<(usize, usize), MultiPoly<F>> =
            x.iter().filter(|(_, f)| !f.is_zero()).map(|(&s, f)| ((self.rank[s], s), f.clone())).collect();
        let mut coords = Vec::new();
        let mut steps = 0;
        while let Some(((r, s), mut f)) = work.pop_first() {
            steps += 1;
            if steps > REDUCTION_GUARD {
                return Err(CocenterError::Guard(REDUCTION_GUARD));
            }
            let Some((m, c)) = f.leading_term().map(|(m, c)| (m.clone(), c.clone())) else { continue };
            match self.classify(s, &m) {
                Leading::Basis => {
                    let i = self.basis.index_of(s, m.exps()).ok_or(CocenterError::LeadingTerm)?;
                    f.add_term(m, -c.clone());
                    coords.push((i, c));
                }
                Leading::Ideal(k) => {
                    let g = &self.ideal_gens[s][k];
                    let (gm, gc) = g.leading_term().ok_or(CocenterError::LeadingTerm)?;
                    if !gm.divides(&m) {
                        return Err(CocenterError::LeadingTerm);
                    }
                    f.add_scaled_shifted(g, &-(c / gc.clone()), &gm.quotient_of(&m));
                }
                Leading::Commutator(q) => {
                    let nu = alg.seq(s);
                    let p = self.gamma.k_nu_t(nu, q);
                    if p == 0 {
                        return Err(CocenterError::LeadingTerm);
                    }
                    let u = Permutation::interval(n, p - 1, q - 1);
                    let qp = alg.q_u_nu(&u, nu);
                    let (lm, lc) = qp.leading_term().ok_or(CocenterError::LeadingTerm)?;
                    if !lm.divides(&m) {
                        return Err(CocenterError::LeadingTerm);
                    }
                    let body = qp.mul_monomial(&lm.quotient_of(&m)).scale(&-(c / lc.clone()));
                    f.add_assign_ref(&body);
                    let t = alg.act_seq(alg.perm_index(&u), s);
                    let slot = work.entry((self.rank[t], t)).or_insert_with(|| MultiPoly::zero(n));
                    slot.sub_assign_ref(&permute(&body, &u));
                }
            }
            if !f.is_zero() {
                work.insert((r, s), f);
            }
        }
        Ok(SparseVec::from_pairs(coords))
    }

    /// `x^a e(nu)` for the basis element `i`.
    pub fn element(&self, i: usize) -> PolyVector<F> {
        let (s, exps) = &self.basis.elements[i];
        let mut v = PolyVector::new();
        v.insert(*s, MultiPoly::monomial(exps.len(), Monomial::from_exps(exps), F::one()));
        v
    }

    /// Exponent shift `a -> a + delta_{nu_t, i}` from this basis into the
    /// basis for `Lambda + Lambda_i`; gamma must start with `i`.
    pub fn iota_check(&self, i: Label) -> Result<IotaReport, CocenterError> {
        if self.gamma.gamma().first() != Some(&i) {
            return Err(CocenterError::GammaFirst(i));
        }
        let alg = self.algebra().clone();
        let bigger = CyclotomicContext::new(alg.clone(), self.ctx.lambda().plus_fundamental(i))?;
        let target = enumerate_basis(&bigger, &self.gamma);
        let mut images = HashSet::new();
        let mut violations = Vec::new();
        for (s, a) in &self.basis.elements {
            let nu = alg.seq(*s);
            let b: Vec<u16> = a.iter().zip(nu).map(|(&x, &l)| x + u16::from(l == i)).collect();
            if !target.contains(*s, &b) {
                violations.push(IotaViolation { nu: nu.to_vec(), source: a.clone(), image: b.clone() });
            }
            images.insert((*s, b));
        }
        Ok(IotaReport {
            label: i,
            source_size: self.basis.len(),
            target_size: target.len(),
            injective: images.len() == self.basis.len(),
            violations,
        })
    }

    /// `dim A/[A, A]` from the commutator span, and whether the images of
    /// `T_gamma^Lambda` are independent modulo `[A, A]`.
    pub fn linear_algebra_check(&self, fd: &FiniteDimAlgebra<F>) -> Result<(usize, bool), CocenterError> {
        let mut ech = fd.commutator_space();
        let dim_cocenter = fd.dim() - ech.rank();
        let mut independent = true;
        for i in 0..self.basis.len() {
            let v = fd.coords(&poly_terms(self.algebra(), &self.element(i)))?;
            independent &= ech.insert(v);
        }
        Ok((dim_cocenter, independent))
    }

    /// Compare the center with the image of the symmetric elements and the
    /// basis `T_gamma^Lambda` with the linear-algebra cocenter.
    pub fn conjecture_verify(&self, fd: &FiniteDimAlgebra<F>) -> Result<ConjectureReport<F>, CocenterError> {
        let center = fd.center();
        let sym = fd.symmetric_image();
        let sym_central = sym.iter().all(|v| fd.is_central(v));
        let sym_span = Echelon::from_rows(fd.dim(), sym.iter().cloned());
        let missing: Vec<SparseVec<F>> = center.iter().filter(|v| !sym_span.contains(v)).cloned().collect();
        let (dim_cocenter, independent) = self.linear_algebra_check(fd)?;
        let mut iota_injective = true;
        for i in self.algebra().beta().support() {
            let shifted = Cocenter::new(self.ctx.clone(), Some(rotated_gamma(self.algebra().beta(), i)?))?;
            let r = shifted.iota_check(i)?;
            iota_injective &= r.injective && r.violations.is_empty();
        }
        let surjective = sym_central && missing.is_empty() && center.len() == sym.len();
        Ok(ConjectureReport {
            dim_center: center.len(),
            dim_sym_image: sym.len(),
            sym_image_central: sym_central,
            dim_cocenter,
            t_gamma_size: self.basis.len(),
            t_gamma_independent: independent,
            iota_injective,
            surjective,
            missing,
        })
    }
}

/// Outcome of [`Cocenter::iota_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaReport {
    pub label: Label,
    pub source_size: usize,
    pub target_size: usize,
    pub injective: bool,
    pub violations: Vec<IotaViolation>,
}

impl IotaReport {
    pub fn passed(&self) -> bool {
        self.injective && self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaViolation {
    pub nu: Vec<Label>,
    pub source: Vec<u16>,
    pub image: Vec<u16>,
}

/// Outcome of [`Cocenter::conjecture_verify`].
#[derive(Clone, Debug)]
pub struct ConjectureReport<F> {
    pub dim_center: usize,
    pub dim_sym_image: usize,
    pub sym_image_central: bool,
    pub dim_cocenter: usize,
    pub t_gamma_size: usize,
    pub t_gamma_independent: bool,
    pub iota_injective: bool,
    pub surjective: bool,
    /// Central vectors outside the symmetric image.
    pub missing: Vec<SparseVec<F>>,
}

impl<F> ConjectureReport<F> {
    pub fn cocenter_matches(&self) -> bool {
        self.t_gamma_size == self.dim_cocenter && self.t_gamma_independent
    }
}

fn lambda_at<F: Field>(ctx: &CyclotomicContext<F>, i: Label) -> i64 {
    ctx.lambda().coord(i) as i64
}

/// `<alpha_{nu_t}^vee, Lambda> - sum_{k < upto} a_{nu_t, nu_k}` (0-based).
fn partial_bound<F: Field>(ctx: &CyclotomicContext<F>, nu: &[Label], t: usize, upto: usize) -> i64 {
    let d = ctx.algebra().datum();
    lambda_at(ctx, nu[t]) - (0..upto).map(|k| d.a(nu[t], nu[k])).sum::<i64>()
}

fn t_bound<F: Field>(ctx: &CyclotomicContext<F>, gamma: &GammaOrder, nu: &[Label], t: usize) -> i64 {
    let k = gamma.k_nu_t(nu, t);
    if k == 0 {
        partial_bound(ctx, nu, t, t)
    } else {
        let d = ctx.algebra().datum();
        -(k - 1..t).map(|l| d.a(nu[t], nu[l])).sum::<i64>()
    }
}

fn enumerate_basis<F: Field>(ctx: &CyclotomicContext<F>, gamma: &GammaOrder) -> CocenterBasis {
    let alg = ctx.algebra();
    let mut elements = Vec::new();
    let mut bounds = BTreeMap::new();
    for (s, nu) in alg.sequences().iter().enumerate() {
        let b: Vec<i64> = (0..nu.len()).map(|t| t_bound(ctx, gamma, nu, t)).collect();
        if b.iter().all(|&x| x > 0) {
            let caps: Vec<u16> = b.iter().map(|&x| x as u16).collect();
            elements.extend(exponent_box(&caps).into_iter().map(|e| (s, e)));
        }
        bounds.insert(s, b);
    }
    let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
    CocenterBasis { gamma: gamma.clone(), elements, bounds, index }
}
