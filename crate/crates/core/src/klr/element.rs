use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::algebra::{add_term, add_terms, right_mul_poly, sub_terms, KlrAlgebra, KlrError, Terms};
use crate::cartan::Label;
use crate::poly::MultiPoly;
use crate::scalar::Field;

/// Degree of an element of the graded algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedDegree {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

/// An element `sum tau_w P_{w,nu}(x) e(nu)` of `R_beta` in normal form.
#[derive(Clone)]
pub struct KlrElement<F: Field> {
    alg: Arc<KlrAlgebra<F>>,
    terms: Terms<F>,
}

impl<F: Field> PartialEq for KlrElement<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl<F: Field> KlrElement<F> {
    pub fn from_terms(alg: &Arc<KlrAlgebra<F>>, mut terms: Terms<F>) -> Self {
        terms.retain(|_, p| !p.is_zero());
        KlrElement { alg: alg.clone(), terms }
    }

    pub fn zero(alg: &Arc<KlrAlgebra<F>>) -> Self {
        Self::from_terms(alg, BTreeMap::new())
    }

    /// `sum_nu e(nu)`.
    pub fn one(alg: &Arc<KlrAlgebra<F>>) -> Self {
        let n = alg.n();
        let id = alg.group().identity_index();
        Self::from_terms(alg, (0..alg.sequences().len()).map(|s| ((id, s), MultiPoly::one(n))).collect())
    }

    pub fn idempotent(alg: &Arc<KlrAlgebra<F>>, nu: &[Label]) -> Result<Self, KlrError> {
        let s = alg.seq_index(nu)?;
        Ok(Self::idempotent_at(alg, s))
    }

    pub fn idempotent_at(alg: &Arc<KlrAlgebra<F>>, s: usize) -> Self {
        let mut t = BTreeMap::new();
        t.insert((alg.group().identity_index(), s), MultiPoly::one(alg.n()));
        Self::from_terms(alg, t)
    }

    /// `f e(nu)` for a polynomial `f`.
    pub fn poly_at(alg: &Arc<KlrAlgebra<F>>, f: MultiPoly<F>, s: usize) -> Self {
        let mut t = BTreeMap::new();
        t.insert((alg.group().identity_index(), s), f);
        Self::from_terms(alg, t)
    }

    /// The basis-shaped element `tau_w f e(nu)`.
    pub fn basis_term(alg: &Arc<KlrAlgebra<F>>, w: usize, f: MultiPoly<F>, s: usize) -> Self {
        let mut t = BTreeMap::new();
        t.insert((w, s), f);
        Self::from_terms(alg, t)
    }

    /// `x_k = sum_nu x_k e(nu)` (0-based `k`).
    pub fn x(alg: &Arc<KlrAlgebra<F>>, k: usize) -> Result<Self, KlrError> {
        if k >= alg.n() {
            return Err(KlrError::IndexOutOfRange(k));
        }
        let id = alg.group().identity_index();
        let v = MultiPoly::var(alg.n(), k);
        Ok(Self::from_terms(alg, (0..alg.sequences().len()).map(|s| ((id, s), v.clone())).collect()))
    }

    /// `tau_k = sum_nu tau_k e(nu)` (0-based `k`).
    pub fn tau(alg: &Arc<KlrAlgebra<F>>, k: usize) -> Result<Self, KlrError> {
        if k + 1 >= alg.n() {
            return Err(KlrError::IndexOutOfRange(k));
        }
        let w = alg.group().mul_simple(alg.group().identity_index(), k);
        Ok(Self::from_terms(alg, (0..alg.sequences().len()).map(|s| ((w, s), MultiPoly::one(alg.n()))).collect()))
    }

    /// `tau_k e(nu)`.
    pub fn tau_at(alg: &Arc<KlrAlgebra<F>>, k: usize, s: usize) -> Self {
        let w = alg.group().mul_simple(alg.group().identity_index(), k);
        Self::basis_term(alg, w, MultiPoly::one(alg.n()), s)
    }

    /// `tau_{i_1} ... tau_{i_r} e(nu)` for an arbitrary word, evaluated by
    /// successive right multiplication.
    pub fn word_at(alg: &Arc<KlrAlgebra<F>>, word: &[u8], s: usize) -> Self {
        let t = alg.eval_word(word, &MultiPoly::one(alg.n()), &[], s);
        Self::from_terms(alg, t)
    }

    /// `z(i, beta) = sum_nu prod_{nu_k = i} x_k e(nu)`.
    pub fn z_element(alg: &Arc<KlrAlgebra<F>>, i: Label) -> Self {
        let n = alg.n();
        let id = alg.group().identity_index();
        let mut t = BTreeMap::new();
        for (s, nu) in alg.sequences().iter().enumerate() {
            let mut f = MultiPoly::one(n);
            for (k, &l) in nu.iter().enumerate() {
                if l == i {
                    f = f.mul(&MultiPoly::var(n, k));
                }
            }
            t.insert((id, s), f);
        }
        Self::from_terms(alg, t)
    }

    pub fn algebra(&self) -> &Arc<KlrAlgebra<F>> {
        &self.alg
    }

    pub fn terms(&self) -> &Terms<F> {
        &self.terms
    }

    pub fn into_terms(self) -> Terms<F> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same(&self, other: &Self) -> Result<(), KlrError> {
        if Arc::ptr_eq(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(KlrError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, KlrError> {
        self.same(other)?;
        let mut t = self.terms.clone();
        add_terms(&mut t, &other.terms);
        Ok(Self::from_terms(&self.alg, t))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, KlrError> {
        self.same(other)?;
        let mut t = self.terms.clone();
        sub_terms(&mut t, &other.terms);
        Ok(Self::from_terms(&self.alg, t))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, KlrError> {
        self.same(other)?;
        Ok(Self::from_terms(&self.alg, self.alg.multiply_terms(&self.terms, &other.terms)))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(&self.alg, self.terms.iter().map(|(&k, p)| (k, p.scale(c))).collect())
    }

    /// Right multiplication by a polynomial.
    pub fn mul_poly(&self, f: &MultiPoly<F>) -> Self {
        Self::from_terms(&self.alg, right_mul_poly(&self.terms, f))
    }

    pub fn add_term(&mut self, w: usize, s: usize, f: &MultiPoly<F>) {
        add_term(&mut self.terms, (w, s), f);
    }

    pub fn degree(&self) -> GradedDegree {
        let mut deg = None;
        for (&(w, s), p) in &self.terms {
            for (m, _) in p.terms() {
                let d = self.alg.term_degree(w, s, m);
                match deg {
                    None => deg = Some(d),
                    Some(e) if e != d => return GradedDegree::Inhomogeneous,
                    _ => {}
                }
            }
        }
        match deg {
            None => GradedDegree::Zero,
            Some(d) => GradedDegree::Homogeneous(d),
        }
    }

    /// Whether every term has permutation length strictly below `l`.
    pub fn max_length(&self) -> Option<usize> {
        self.terms.keys().map(|&(w, _)| self.alg.group().length(w)).max()
    }

    /// Action of `S_n` on polynomial elements: `w.(f e(nu)) = w(f) e(w.nu)`.
    /// Terms with nontrivial `tau` are rejected.
    pub fn permute_polynomial_part(&self, w: usize) -> Option<Self> {
        let id = self.alg.group().identity_index();
        let perm = self.alg.perm(w);
        let mut t = BTreeMap::new();
        for (&(u, s), p) in &self.terms {
            if u != id {
                return None;
            }
            add_term(&mut t, (id, self.alg.act_seq(w, s)), &p.permute(perm.images().iter().map(|&i| i as usize).collect::<Vec<_>>().as_slice()));
        }
        Some(Self::from_terms(&self.alg, t))
    }
}

impl<F: Field> Add for &KlrElement<F> {
    type Output = KlrElement<F>;
    fn add(self, o: Self) -> KlrElement<F> {
        self.try_add(o).expect("algebra mismatch")
    }
}

impl<F: Field> Sub for &KlrElement<F> {
    type Output = KlrElement<F>;
    fn sub(self, o: Self) -> KlrElement<F> {
        self.try_sub(o).expect("algebra mismatch")
    }
}

impl<F: Field> Mul for &KlrElement<F> {
    type Output = KlrElement<F>;
    fn mul(self, o: Self) -> KlrElement<F> {
        self.try_mul(o).expect("algebra mismatch")
    }
}

impl<F: Field> Neg for &KlrElement<F> {
    type Output = KlrElement<F>;
    fn neg(self) -> KlrElement<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> fmt::Display for KlrElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(w, s), p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word: Vec<String> = self.alg.group().word(w).iter().map(|l| format!("t{}", l + 1)).collect();
            let nu: Vec<&str> = self.alg.seq(s).iter().map(|&l| self.alg.datum().label_name(l)).collect();
            write!(f, "{}({})e({})", if word.is_empty() { String::new() } else { word.join("*") + "*" }, p, nu.join(","))?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for KlrElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
