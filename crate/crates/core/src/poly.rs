//! Sparse multivariate polynomials over an exact field.
//!
//! Variables are indexed from 0 internally, so `x_1` of the usual notation
//! is variable 0 and the simple transposition `s_1` swaps variables 0 and 1.
//! Monomials are ordered anti-lexicographically: exponent vectors are
//! compared starting from the last variable. The last entry of the term map
//! is therefore the anti-lexicographic leading term.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::scalar::{fraction_string, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division is not exact: remainder {0}")]
    NotExact(String),
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
}

/// Exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub SmallVec<[u16; 6]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn from_exps(exps: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn var(n: usize, k: usize, e: u16) -> Self {
        let mut m = Self::one(n);
        m.0[k] = e;
        m
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn swap(&self, k: usize) -> Monomial {
        let mut m = self.clone();
        m.0.swap(k, k + 1);
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .iter()
            .rev()
            .cmp(other.0.iter().rev())
            .then(self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// A polynomial in `nvars` variables.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The variable `x_{k+1}` (0-based index `k`).
    pub fn var(nvars: usize, k: usize) -> Self {
        Self::monomial(nvars, Monomial::var(nvars, k, 1), F::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: F) -> Self {
        debug_assert_eq!(m.nvars(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, F)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    /// Anti-lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Self) {
        debug_assert_eq!(self.nvars, other.nvars);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled_shifted(&mut self, other: &Self, c: &F, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign_ref(other);
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.sub_assign_ref(other);
        r
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut r = Self::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one(self.nvars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Total degree of the highest term, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in a single variable, `None` for zero.
    pub fn degree_in(&self, k: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.0[k]).max()
    }

    /// Coefficient of `x_k^e` viewed as a polynomial in the other variables.
    pub fn coeff_in(&self, k: usize, e: u16) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[k] == e {
                let mut m2 = m.clone();
                m2.0[k] = 0;
                r.terms.insert(m2, c.clone());
            }
        }
        r
    }

    /// Whether only variables with index `< k` occur.
    pub fn only_vars_below(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.0[k..].iter().all(|&e| e == 0))
    }

    /// Apply the transposition `s_{k+1}`: swap variables `k` and `k+1`.
    pub fn swap(&self, k: usize) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.swap(k), c.clone())).collect(),
        }
    }

    /// Substitute `x_k -> x_{w(k)}` where `images[k] = w(k)` (0-based).
    pub fn permute(&self, images: &[usize]) -> Self {
        assert_eq!(images.len(), self.nvars, "permutation size mismatch");
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(self.nvars);
            for (k, &a) in m.0.iter().enumerate() {
                e.0[images[k]] = a;
            }
            r.terms.insert(e, c.clone());
        }
        r
    }

    /// Divided difference `(f - s_k f) / (x_{k+1} - x_k)` in 0-based
    /// variables `k`, `k+1`, computed monomial by monomial.
    pub fn demazure(&self, k: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let (a, b) = (m.0[k], m.0[k + 1]);
            if a == b {
                continue;
            }
            let (lo, hi, sign) = if a > b { (b, a, -c.clone()) } else { (a, b, c.clone()) };
            let d = hi - lo;
            for i in 0..d {
                let mut e = m.clone();
                if a > b {
                    e.0[k] = lo + d - 1 - i;
                    e.0[k + 1] = lo + i;
                } else {
                    e.0[k] = lo + i;
                    e.0[k + 1] = lo + d - 1 - i;
                }
                r.add_term(e, sign.clone());
            }
        }
        r
    }

    /// Exact division. Fails if `den` does not divide `self`.
    pub fn exact_quotient(&self, den: &Self) -> Result<Self, PolyError> {
        if self.nvars != den.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, den.nvars));
        }
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if let Some(c) = den.as_constant() {
            return Ok(self.scale(&c.inv()));
        }
        let v = (0..self.nvars)
            .rev()
            .find(|&k| den.degree_in(k).unwrap_or(0) > 0)
            .expect("non-constant denominator has a variable");
        let dd = den.degree_in(v).unwrap();
        let lead = den.coeff_in(v, dd);
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        loop {
            let Some(e) = rem.degree_in(v) else { break };
            if e < dd {
                return Err(PolyError::NotExact(format!("{}", rem)));
            }
            let ce = rem.coeff_in(v, e);
            let q = ce.exact_quotient(&lead)?;
            let q = q.mul_monomial(&Monomial::var(self.nvars, v, e - dd));
            rem.sub_assign_ref(&q.mul(den));
            quot.add_assign_ref(&q);
        }
        Ok(quot)
    }

    /// Reduce modulo a polynomial whose leading coefficient in variable `k`
    /// is a nonzero scalar: the result has `x_k`-degree below that of `g`.
    pub fn rem_monic_in(&self, g: &Self, k: usize) -> Self {
        let dg = g.degree_in(k).expect("reduction by zero polynomial");
        let lc = g
            .coeff_in(k, dg)
            .as_constant()
            .filter(|c| !c.is_zero())
            .expect("leading coefficient must be a scalar");
        let inv = lc.inv();
        let mut r = self.clone();
        loop {
            let top = r
                .terms
                .iter()
                .filter(|(m, _)| m.0[k] >= dg)
                .max_by_key(|(m, _)| m.0[k])
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = top else { break };
            let mut shift = m;
            shift.0[k] -= dg;
            r.add_scaled_shifted(g, &(-(c * inv.clone())), &shift);
        }
        r
    }

    /// Embed a bivariate polynomial `q(u, v)` as `q(x_a, x_b)`.
    pub fn embed_bivariate(q: &MultiPoly<F>, nvars: usize, a: usize, b: usize) -> Self {
        assert_eq!(q.nvars, 2);
        let mut r = Self::zero(nvars);
        for (m, c) in &q.terms {
            let mut e = Monomial::one(nvars);
            e.0[a] += m.0[0];
            e.0[b] += m.0[1];
            r.add_term(e, c.clone());
        }
        r
    }

    /// Embed into a ring with more variables, keeping indices.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        MultiPoly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = Monomial::one(nvars);
                    e.0[..self.nvars].copy_from_slice(&m.0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Terms grouped by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Self> {
        let mut parts: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree())
                .or_insert_with(|| Self::zero(self.nvars))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { format!("x{}", k + 1) } else { format!("x{}^{}", k + 1, e) })
                .collect();
            let cs = fraction_string(c);
            if vars.is_empty() {
                write!(f, "{}", cs)?;
            } else if cs == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "({})*{}", cs, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type P = MultiPoly<Rational>;

    fn q(v: i64) -> Rational {
        Rational::from_i64(v)
    }

    fn x(n: usize, k: usize) -> P {
        P::var(n, k)
    }

    fn poly_strategy(n: usize) -> impl Strategy<Value = P> {
        prop::collection::vec((prop::collection::vec(0u16..4, n), -3i64..4), 0..6).prop_map(move |ts| {
            P::from_terms(n, ts.into_iter().map(|(e, c)| (Monomial::from_exps(&e), q(c))))
        })
    }

    #[test]
    fn anti_lex_order() {
        let a = Monomial::from_exps(&[5, 0]);
        let b = Monomial::from_exps(&[0, 1]);
        assert!(a < b);
        let c = Monomial::from_exps(&[1, 1]);
        assert!(b < c);
    }

    #[test]
    fn demazure_small_cases() {
        let n = 2;
        assert_eq!(x(n, 0).demazure(0), P::constant(n, q(-1)));
        assert!(x(n, 0).mul(&x(n, 1)).demazure(0).is_zero());
        let sq = x(n, 0).mul(&x(n, 0));
        assert_eq!(sq.demazure(0), x(n, 0).add(&x(n, 1)).neg());
    }

    #[test]
    fn exact_quotient_examples() {
        let n = 3;
        let num = x(n, 0).pow(2).sub(&x(n, 2).pow(2));
        let den = x(n, 0).sub(&x(n, 2));
        assert_eq!(num.exact_quotient(&den).unwrap(), x(n, 0).add(&x(n, 2)));
        assert!(P::zero(n).exact_quotient(&den).unwrap().is_zero());
        let bad = x(n, 0).add(&P::one(n));
        assert!(matches!(bad.exact_quotient(&den), Err(PolyError::NotExact(_))));
    }

    #[test]
    fn permute_composes_as_substitution() {
        let n = 3;
        let f = x(n, 0).mul(&x(n, 1).pow(2));
        // s1 s2 as images: s2 = [0,2,1], s1 = [1,0,2]; (s1 s2)(k) = s1(s2(k))
        let s1 = [1usize, 0, 2];
        let s2 = [0usize, 2, 1];
        let s1s2: Vec<usize> = (0..3).map(|k| s1[s2[k]]).collect();
        // direct substitution oracle: x_k -> x_{w(k)}
        let mut expect = P::one(n);
        for (k, e) in [(0usize, 1u32), (1, 2)] {
            expect = expect.mul(&x(n, s1s2[k]).pow(e));
        }
        assert_eq!(f.permute(&s1s2), expect);
        assert_eq!(f.permute(&s1s2), f.permute(&s2).permute(&s1));
    }

    #[test]
    fn rem_monic_reduces_degree() {
        let n = 2;
        let g = x(n, 1).pow(2).add(&x(n, 0));
        let f = x(n, 1).pow(5).add(&x(n, 0).mul(&x(n, 1)));
        let r = f.rem_monic_in(&g, 1);
        assert!(r.degree_in(1).unwrap() < 2);
        assert!(f.sub(&r).exact_quotient(&g).is_ok());
    }

    proptest! {
        #[test]
        fn demazure_squares_to_zero(f in poly_strategy(4), k in 0usize..3) {
            prop_assert!(f.demazure(k).demazure(k).is_zero());
        }

        #[test]
        fn demazure_matches_quotient(f in poly_strategy(3), k in 0usize..2) {
            let den = x(3, k + 1).sub(&x(3, k));
            let via_div = f.sub(&f.swap(k)).exact_quotient(&den).unwrap();
            prop_assert_eq!(f.demazure(k), via_div);
        }

        #[test]
        fn twisted_leibniz(f in poly_strategy(3), g in poly_strategy(3), k in 0usize..2) {
            let lhs = f.mul(&g).demazure(k);
            let rhs = f.demazure(k).mul(&g).add(&f.swap(k).mul(&g.demazure(k)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn demazure_kernel_is_invariants(f in poly_strategy(3), k in 0usize..2) {
            prop_assert_eq!(f.demazure(k).is_zero(), f.swap(k) == f);
        }

        #[test]
        fn quotient_inverts_product(a in poly_strategy(3), b in poly_strategy(3)) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(a.mul(&b).exact_quotient(&b).unwrap(), a);
        }
    }
}
