//! `R^Lambda_beta` as an explicit finite-dimensional algebra: generator
//! actions, structure constants, center, cocenter, symmetrizing forms and
//! the annihilator comparison.

use std::collections::HashSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CyclotomicBasis, CyclotomicContext, CyclotomicError};
use crate::cartan::Label;
use crate::klr::{KlrElement, Terms};
use crate::linalg::{kernel_of_columns, kernel_of_rows, same_span, Echelon, SparseVec};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Field;

/// Seed used for every random choice made by the verifiers.
pub const SEED: u64 = 0x6b6c_725f_6c61_6221;

pub struct FiniteDimAlgebra<F: Field> {
    ctx: Arc<CyclotomicContext<F>>,
    basis: CyclotomicBasis,
    lifts: Vec<KlrElement<F>>,
    gen_names: Vec<String>,
    left: Vec<Vec<SparseVec<F>>>,
    right: Vec<Vec<SparseVec<F>>>,
}

impl<F: Field> std::fmt::Debug for FiniteDimAlgebra<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteDimAlgebra(dim={}, {:?})", self.dim(), self.ctx)
    }
}

/// Outcome of the symmetrizing-form search.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceReport<F> {
    pub degree: i64,
    pub solution_dim: usize,
    pub nondegenerate: bool,
    pub form: Option<SparseVec<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnihilatorReport {
    pub label: Label,
    pub dim_big: usize,
    pub dim_small: usize,
    pub dim_annihilator: usize,
    pub dim_kernel: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraidenReport<F> {
    pub label: Label,
    pub solution_dim: usize,
    pub holds: bool,
    /// The scalar `c` with `t~(a z) = c t(p(a))` for the normalized forms,
    /// when both trace spaces are one-dimensional.
    pub constant: Option<F>,
}

impl<F: Field> FiniteDimAlgebra<F> {
    pub fn new(ctx: Arc<CyclotomicContext<F>>) -> Result<Self, CyclotomicError> {
        let basis = ctx.full_basis()?;
        let alg = ctx.algebra().clone();
        let lifts: Vec<_> = (0..basis.len()).map(|i| ctx.lift(&basis, i)).collect();
        let mut gens = Vec::new();
        let mut gen_names = Vec::new();
        for (s, nu) in alg.sequences().iter().enumerate() {
            gens.push(KlrElement::idempotent_at(&alg, s));
            gen_names.push(format!("e{:?}", nu));
        }
        for k in 0..alg.n() {
            gens.push(KlrElement::x(&alg, k)?);
            gen_names.push(format!("x{}", k + 1));
        }
        for k in 0..alg.n().saturating_sub(1) {
            gens.push(KlrElement::tau(&alg, k)?);
            gen_names.push(format!("tau{}", k + 1));
        }
        let act = |g: &KlrElement<F>, left: bool| -> Result<Vec<SparseVec<F>>, CyclotomicError> {
            lifts
                .par_iter()
                .map(|b| {
                    let p = if left { alg.multiply_terms(g.terms(), b.terms()) } else { alg.multiply_terms(b.terms(), g.terms()) };
                    ctx.coordinates(&basis, &p)
                })
                .collect()
        };
        let left = gens.iter().map(|g| act(g, true)).collect::<Result<Vec<_>, _>>()?;
        let right = gens.iter().map(|g| act(g, false)).collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteDimAlgebra { ctx, basis, lifts, gen_names, left, right })
    }

    pub fn context(&self) -> &Arc<CyclotomicContext<F>> {
        &self.ctx
    }

    pub fn basis(&self) -> &CyclotomicBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis.elements[i].degree
    }

    pub fn top_degree(&self) -> Option<i64> {
        self.basis.elements.iter().map(|b| b.degree).max()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn lift(&self, i: usize) -> &KlrElement<F> {
        &self.lifts[i]
    }

    /// Coordinates of an element of `R_beta` in the quotient basis.
    pub fn coords(&self, terms: &Terms<F>) -> Result<SparseVec<F>, CyclotomicError> {
        self.ctx.coordinates(&self.basis, terms)
    }

    fn coords_ok(&self, terms: &Terms<F>) -> SparseVec<F> {
        self.coords(terms).expect("full basis covers every term")
    }

    /// `b_i b_j` in coordinates.
    pub fn product(&self, i: usize, j: usize) -> SparseVec<F> {
        let p = self.ctx.algebra().multiply_terms(self.lifts[i].terms(), self.lifts[j].terms());
        self.coords_ok(&p)
    }

    pub fn mul_vec(&self, a: &SparseVec<F>, b: &SparseVec<F>) -> SparseVec<F> {
        let la = self.ctx.lift_vec(&self.basis, a);
        let lb = self.ctx.lift_vec(&self.basis, b);
        self.coords_ok(&self.ctx.algebra().multiply_terms(la.terms(), lb.terms()))
    }

    pub fn unit(&self) -> SparseVec<F> {
        self.coords_ok(KlrElement::one(self.ctx.algebra()).terms())
    }

    /// Full multiplication table: `table[i][j] = b_i b_j`.
    pub fn structure_constants(&self) -> Vec<Vec<SparseVec<F>>> {
        (0..self.dim()).into_par_iter().map(|i| (0..self.dim()).map(|j| self.product(i, j)).collect()).collect()
    }

    /// Check `(b_i b_j) b_k = b_i (b_j b_k)` on `samples` random triples.
    pub fn spot_check_associativity(&self, samples: usize) -> bool {
        if self.dim() == 0 {
            return true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        (0..samples).all(|_| {
            let (i, j, k) = (rng.gen_range(0..self.dim()), rng.gen_range(0..self.dim()), rng.gen_range(0..self.dim()));
            let ij = self.product(i, j);
            let jk = self.product(j, k);
            self.mul_vec(&ij, &SparseVec::unit(k)) == self.mul_vec(&SparseVec::unit(i), &jk)
        })
    }

    /// `[g, b_j]` for every generator `g` and basis vector `b_j`.
    fn commutators(&self) -> impl Iterator<Item = SparseVec<F>> + '_ {
        self.left.iter().zip(&self.right).flat_map(|(l, r)| l.iter().zip(r).map(|(a, b)| a.sub(b)))
    }

    /// Echelon form of the commutator subspace `[A, A]`.
    pub fn commutator_space(&self) -> Echelon<F> {
        Echelon::from_rows(self.dim(), self.commutators())
    }

    /// `dim A / [A, A]`.
    pub fn cocenter_dim(&self) -> usize {
        self.dim() - self.commutator_space().rank()
    }

    /// Basis of the center: vectors commuting with every generator.
    pub fn center(&self) -> Vec<SparseVec<F>> {
        let d = self.dim();
        let ng = self.left.len();
        let columns: Vec<SparseVec<F>> = (0..d)
            .map(|j| {
                SparseVec::from_pairs((0..ng).flat_map(|g| {
                    let c = self.left[g][j].sub(&self.right[g][j]);
                    c.entries().iter().map(move |(i, v)| (g * d + i, v.clone())).collect::<Vec<_>>()
                }))
            })
            .collect();
        kernel_of_columns(ng * d, &columns)
    }

    /// Whether `v` commutes with every generator.
    pub fn is_central(&self, v: &SparseVec<F>) -> bool {
        (0..self.left.len()).all(|g| {
            let mut acc = SparseVec::zero();
            for (j, c) in v.entries() {
                acc = acc.axpy(c, &self.left[g][*j].sub(&self.right[g][*j]));
            }
            acc.is_zero()
        })
    }

    /// Span of the images of the symmetric elements
    /// `sum_{w} w.(x^a e(nu))` up to one degree past the top degree.
    pub fn symmetric_image(&self) -> Vec<SparseVec<F>> {
        let alg = self.ctx.algebra().clone();
        let n = alg.n();
        let graded = self.ctx.is_graded();
        let top = self.top_degree().unwrap_or(0);
        let poly_bound: u32 = self.basis.elements.iter().map(|b| b.exps.degree()).max().unwrap_or(0) + 1;
        let mut seen: HashSet<(usize, Monomial)> = HashSet::new();
        let mut ech = Echelon::new(self.dim());
        if self.dim() == 0 {
            return Vec::new();
        }
        let group = alg.group();
        for s in 0..alg.sequences().len() {
            let seq = alg.seq(s).to_vec();
            for exps in monomials_up_to(n, |e| {
                if graded {
                    alg.poly_degree(&seq, e) <= top + 1
                } else {
                    e.iter().map(|&a| a as u32).sum::<u32>() <= poly_bound
                }
            }) {
                let m = Monomial::from_exps(&exps);
                if seen.contains(&(s, m.clone())) {
                    continue;
                }
                let mut orbit = HashSet::new();
                for w in 0..group.order() {
                    let images: Vec<usize> = group.get(w).images().iter().map(|&i| i as usize).collect();
                    let mut e = Monomial::one(n);
                    for (k, &a) in exps.iter().enumerate() {
                        e.0[images[k]] = a;
                    }
                    orbit.insert((alg.act_seq(w, s), e));
                }
                let mut terms = Terms::new();
                for (t, e) in &orbit {
                    seen.insert((*t, e.clone()));
                    let p = MultiPoly::monomial(n, e.clone(), F::one());
                    KlrElement::poly_at(&alg, p, *t).into_terms().into_iter().for_each(|(k, v)| {
                        terms.entry(k).or_insert_with(|| MultiPoly::zero(n)).add_assign_ref(&v);
                    });
                }
                ech.insert(self.coords_ok(&terms));
            }
        }
        ech.rows().cloned().collect()
    }

    /// Linear forms supported in degree `degree` that vanish on `[A, A]`.
    pub fn trace_forms(&self, degree: i64) -> Vec<SparseVec<F>> {
        let support: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) == degree).collect();
        if support.is_empty() {
            return Vec::new();
        }
        let pos: std::collections::HashMap<usize, usize> = support.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let rows: Vec<SparseVec<F>> = self
            .commutator_space()
            .rows()
            .map(|r| SparseVec::from_pairs(r.entries().iter().filter_map(|(i, v)| pos.get(i).map(|&p| (p, v.clone())))))
            .filter(|r| !r.is_zero())
            .collect();
        kernel_of_rows(support.len(), rows)
            .into_iter()
            .map(|k| SparseVec::from_pairs(k.entries().iter().map(|(p, v)| (support[*p], v.clone()))))
            .collect()
    }

    fn left_idem(&self, i: usize) -> usize {
        let b = &self.basis.elements[i];
        self.ctx.algebra().act_seq(b.w, b.nu)
    }

    /// Whether `(a, b) -> t(ab)` is a perfect pairing.
    pub fn is_nondegenerate(&self, t: &SparseVec<F>, degree: i64) -> bool {
        let d = self.dim();
        let rows: Vec<SparseVec<F>> = (0..d)
            .into_par_iter()
            .map(|i| {
                let (li, ri) = (self.left_idem(i), self.basis.elements[i].nu);
                let pairs: Vec<(usize, F)> = (0..d)
                    .filter(|&j| {
                        self.left_idem(j) == ri && self.basis.elements[j].nu == li && self.degree(i) + self.degree(j) == degree
                    })
                    .map(|j| (j, self.product(i, j).dot(t)))
                    .collect();
                SparseVec::from_pairs(pairs)
            })
            .collect();
        Echelon::from_rows(d, rows).rank() == d
    }

    /// Search for a nondegenerate trace of degree `d_{Lambda,beta}`.
    pub fn trace_report(&self) -> Result<TraceReport<F>, CyclotomicError> {
        if !self.ctx.is_graded() {
            return Err(CyclotomicError::Ungraded);
        }
        let degree = self.ctx.d_lambda_beta();
        let forms = self.trace_forms(degree);
        if self.dim() == 0 {
            return Ok(TraceReport { degree, solution_dim: forms.len(), nondegenerate: true, form: Some(SparseVec::zero()) });
        }
        let form = pick_nondegenerate(&forms, |t| self.is_nondegenerate(t, degree));
        Ok(TraceReport { degree, solution_dim: forms.len(), nondegenerate: form.is_some(), form })
    }

    /// Compare `Ann(z(i, beta))` in this algebra (level `Lambda + Lambda_i`)
    /// with the kernel of the projection onto `small` (level `Lambda`).
    pub fn annihilator_check(&self, small: &FiniteDimAlgebra<F>, i: Label) -> AnnihilatorReport {
        let alg = self.ctx.algebra();
        let z = KlrElement::z_element(alg, i);
        let zcols: Vec<SparseVec<F>> = self.lifts.par_iter().map(|b| self.coords_ok(&alg.multiply_terms(b.terms(), z.terms()))).collect();
        let pcols: Vec<SparseVec<F>> = self.lifts.iter().map(|b| small.coords_ok(b.terms())).collect();
        let ann = kernel_of_columns(self.dim(), &zcols);
        let ker = kernel_of_columns(small.dim(), &pcols);
        AnnihilatorReport {
            label: i,
            dim_big: self.dim(),
            dim_small: small.dim(),
            dim_annihilator: ann.len(),
            dim_kernel: ker.len(),
            equal: same_span(self.dim(), &ann, &ker),
        }
    }

    /// Look for nondegenerate traces `t~` here and `t` on `small` with
    /// `t~(a z(i, beta)) = t(p(a))` for all `a`.
    pub fn traiden_check(&self, small: &FiniteDimAlgebra<F>, i: Label) -> Result<TraidenReport<F>, CyclotomicError> {
        if !self.ctx.is_graded() {
            return Err(CyclotomicError::Ungraded);
        }
        if self.dim() == 0 {
            return Ok(TraidenReport { label: i, solution_dim: 0, holds: true, constant: None });
        }
        let alg = self.ctx.algebra();
        let (db, ds) = (self.ctx.d_lambda_beta(), small.ctx.d_lambda_beta());
        let big_forms = self.trace_forms(db);
        let small_forms = small.trace_forms(ds);
        let (r, s) = (big_forms.len(), small_forms.len());
        let z = KlrElement::z_element(alg, i);
        let rows: Vec<SparseVec<F>> = self
            .lifts
            .par_iter()
            .map(|b| {
                let bz = self.coords_ok(&alg.multiply_terms(b.terms(), z.terms()));
                let pb = small.coords_ok(b.terms());
                let mut pairs: Vec<(usize, F)> = big_forms.iter().enumerate().map(|(k, t)| (k, bz.dot(t))).collect();
                pairs.extend(small_forms.iter().enumerate().map(|(k, t)| (r + k, -pb.dot(t))));
                SparseVec::from_pairs(pairs)
            })
            .collect();
        let sol = kernel_of_rows(r + s, rows);
        let split = |v: &SparseVec<F>| -> (SparseVec<F>, SparseVec<F>) {
            let mut tb = SparseVec::zero();
            let mut ts = SparseVec::zero();
            for (k, c) in v.entries() {
                if *k < r {
                    tb = tb.axpy(c, &big_forms[*k]);
                } else {
                    ts = ts.axpy(c, &small_forms[*k - r]);
                }
            }
            (tb, ts)
        };
        let ok = |v: &SparseVec<F>| {
            let (tb, ts) = split(v);
            !tb.is_zero()
                && self.is_nondegenerate(&tb, db)
                && (small.dim() == 0 || (!ts.is_zero() && small.is_nondegenerate(&ts, ds)))
        };
        let found = pick_nondegenerate(&sol, ok);
        let constant = match (&found, r, s) {
            (Some(v), 1, 1) => {
                let (a, g) = (v.get(0), v.get(1));
                (!a.is_zero()).then(|| g / a)
            }
            _ => None,
        };
        Ok(TraidenReport { label: i, solution_dim: sol.len(), holds: found.is_some(), constant })
    }
}

/// A member of the span of `forms` accepted by `ok`: the single generator if
/// the span is a line, otherwise seeded random combinations.
fn pick_nondegenerate<F: Field>(forms: &[SparseVec<F>], ok: impl Fn(&SparseVec<F>) -> bool) -> Option<SparseVec<F>> {
    match forms.len() {
        0 => None,
        1 => ok(&forms[0]).then(|| forms[0].clone()),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(SEED);
            for _ in 0..8 {
                let mut v = SparseVec::zero();
                for f in forms {
                    v = v.axpy(&F::from_i64(rng.gen_range(1..=97)), f);
                }
                if ok(&v) {
                    return Some(v);
                }
            }
            None
        }
    }
}

/// Exponent vectors in `n` variables accepted by `keep`, which must be
/// monotone (rejecting `e` rejects every `e + e_k`).
fn monomials_up_to(n: usize, keep: impl Fn(&[u16]) -> bool) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; n];
    fn rec(k: usize, cur: &mut Vec<u16>, keep: &dyn Fn(&[u16]) -> bool, out: &mut Vec<Vec<u16>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        loop {
            if !keep(cur) {
                break;
            }
            rec(k + 1, cur, keep, out);
            cur[k] += 1;
        }
        cur[k] = 0;
    }
    if keep(&cur) {
        rec(0, &mut cur, &keep, &mut out);
    }
    out
}
