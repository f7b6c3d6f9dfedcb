use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::cartan::{CartanDatum, CartanError, Label, RootElement, Sequence};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Field;
use crate::symgroup::{BraidMove, Permutation, SymGroup};

/// Normal-form terms keyed by `(permutation index, right idempotent index)`.
/// The entry `((w, nu), f)` stands for `tau_w f e(nu)`.
pub type Terms<F> = BTreeMap<(usize, usize), MultiPoly<F>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KlrError {
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("sequence {0:?} is not in I^beta")]
    UnknownSequence(Vec<Label>),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("height {0} exceeds the supported maximum {1}")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Cartan(#[from] CartanError),
}

/// Largest height supported by the precomputed group tables.
pub const MAX_HEIGHT: usize = 6;

/// The KLR algebra `R_beta` with its multiplication tables and memo.
pub struct KlrAlgebra<F: Field> {
    datum: Arc<CartanDatum<F>>,
    beta: RootElement,
    n: usize,
    group: Arc<SymGroup>,
    seqs: Vec<Sequence>,
    seq_index: HashMap<Sequence, usize>,
    swap_seq: Vec<Vec<usize>>,
    act_table: Vec<Vec<usize>>,
    memo: RwLock<HashMap<(usize, u8, usize), Arc<Terms<F>>>>,
}

impl<F: Field> std::fmt::Debug for KlrAlgebra<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "KlrAlgebra(beta={:?})", self.beta.mults)
    }
}

impl<F: Field> KlrAlgebra<F> {
    pub fn new(datum: Arc<CartanDatum<F>>, beta: RootElement) -> Result<Arc<Self>, KlrError> {
        datum.check_root(&beta)?;
        let n = beta.height();
        if n > MAX_HEIGHT {
            return Err(KlrError::TooLarge(n, MAX_HEIGHT));
        }
        let group = Arc::new(SymGroup::new(n));
        let seqs = beta.weight_sequences();
        let seq_index: HashMap<Sequence, usize> = seqs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let swap_seq = seqs
            .iter()
            .map(|s| {
                (0..n.saturating_sub(1))
                    .map(|k| {
                        let mut t = s.clone();
                        t.swap(k, k + 1);
                        seq_index[&t]
                    })
                    .collect()
            })
            .collect();
        let act_table = group
            .elements()
            .iter()
            .map(|w| seqs.iter().map(|s| seq_index[&w.act(s)]).collect())
            .collect();
        Ok(Arc::new(KlrAlgebra {
            datum,
            beta,
            n,
            group,
            seqs,
            seq_index,
            swap_seq,
            act_table,
            memo: RwLock::new(HashMap::new()),
        }))
    }

    pub fn datum(&self) -> &CartanDatum<F> {
        &self.datum
    }

    pub fn datum_arc(&self) -> Arc<CartanDatum<F>> {
        self.datum.clone()
    }

    pub fn beta(&self) -> &RootElement {
        &self.beta
    }

    /// Height of beta, i.e. the number of polynomial variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &SymGroup {
        &self.group
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.seqs
    }

    pub fn seq(&self, i: usize) -> &[Label] {
        &self.seqs[i]
    }

    pub fn seq_index(&self, nu: &[Label]) -> Result<usize, KlrError> {
        self.seq_index.get(nu).copied().ok_or_else(|| KlrError::UnknownSequence(nu.to_vec()))
    }

    /// Index of `s_k nu`.
    pub fn swap_seq(&self, nu: usize, k: usize) -> usize {
        self.swap_seq[nu][k]
    }

    /// Index of `w.nu`.
    pub fn act_seq(&self, w: usize, nu: usize) -> usize {
        self.act_table[w][nu]
    }

    pub fn perm(&self, w: usize) -> &Permutation {
        self.group.get(w)
    }

    pub fn perm_index(&self, w: &Permutation) -> usize {
        self.group.index_of(w)
    }

    /// `Q_{i,j}(x_a, x_b)`.
    pub fn q_at(&self, i: Label, j: Label, a: usize, b: usize) -> MultiPoly<F> {
        self.datum.q_at(i, j, self.n, a, b)
    }

    /// `Q_{u,nu} = prod_{k<t, u(k)>u(t)} Q_{nu_k,nu_t}(x_k, x_t)`.
    pub fn q_u_nu(&self, u: &Permutation, nu: &[Label]) -> MultiPoly<F> {
        let mut acc = MultiPoly::one(self.n);
        for (k, t) in u.inversions() {
            acc = acc.mul(&self.q_at(nu[k], nu[t], k, t));
        }
        acc
    }

    /// Degree of `tau_w x^a e(nu)`.
    pub fn term_degree(&self, w: usize, nu: usize, m: &Monomial) -> i64 {
        let d = &self.datum;
        let s = &self.seqs[nu];
        let mut deg = 0;
        for (k, t) in self.group.get(w).inversions() {
            deg -= d.bilinear_form(s[k], s[t]);
        }
        for (t, &a) in m.exps().iter().enumerate() {
            deg += a as i64 * d.bilinear_form(s[t], s[t]);
        }
        deg
    }

    /// Degree of `x^a e(nu)` given a bare exponent vector.
    pub fn poly_degree(&self, nu: &[Label], exps: &[u16]) -> i64 {
        exps.iter().enumerate().map(|(t, &a)| a as i64 * self.datum.bilinear_form(nu[t], nu[t])).sum()
    }

    fn braid_delta(&self, s: &[Label], a: usize) -> MultiPoly<F> {
        let num = self.q_at(s[a], s[a + 1], a, a + 1).sub(&self.q_at(s[a + 2], s[a + 1], a + 2, a + 1));
        let den = MultiPoly::var(self.n, a).sub(&MultiPoly::var(self.n, a + 2));
        num.exact_quotient(&den).expect("braid correction is an exact quotient")
    }

    /// Index of `s_{l_1} ... s_{l_m} . mu` for a word `l`.
    fn act_word(&self, word: &[u8], mu: usize) -> usize {
        word.iter().rev().fold(mu, |cur, &l| self.swap_seq[cur][l as usize])
    }

    /// `tau_prefix * f * tau_suffix * e(mu)` evaluated into normal form.
    pub fn eval_word(&self, prefix: &[u8], f: &MultiPoly<F>, suffix: &[u8], mu: usize) -> Terms<F> {
        let mid = self.act_word(suffix, mu);
        let start = self.act_word(prefix, mid);
        let mut x: Terms<F> = BTreeMap::new();
        x.insert((self.group.identity_index(), start), MultiPoly::one(self.n));
        for &l in prefix {
            x = self.right_mul_tau(&x, l as usize);
        }
        x = right_mul_poly(&x, f);
        for &l in suffix {
            x = self.right_mul_tau(&x, l as usize);
        }
        x
    }

    /// Normal form of `tau_u tau_k e(mu)`.
    pub fn tau_right(&self, u: usize, k: usize, mu: usize) -> Arc<Terms<F>> {
        let key = (u, k as u8, mu);
        if let Some(t) = self.memo.read().unwrap().get(&key) {
            return t.clone();
        }
        let n = self.n;
        let us = self.group.mul_simple(u, k);
        let mut out: Terms<F> = BTreeMap::new();
        if self.group.length(us) > self.group.length(u) {
            out.insert((us, mu), MultiPoly::one(n));
            let path = self.group.lift_path(u, k as u8);
            let mut word = self.group.word(u).to_vec();
            word.push(k as u8);
            for mv in path.iter() {
                let (pos, a, sign) = match *mv {
                    BraidMove::Commute { .. } => {
                        mv.apply(&mut word);
                        continue;
                    }
                    BraidMove::Down { pos, a } => (pos, a as usize, true),
                    BraidMove::Up { pos, a } => (pos, a as usize, false),
                };
                let suffix = &word[pos + 3..];
                let s = &self.seqs[self.act_word(suffix, mu)];
                if s[a] == s[a + 2] {
                    let delta = self.braid_delta(s, a);
                    let corr = self.eval_word(&word[..pos], &delta, suffix, mu);
                    if sign {
                        add_terms(&mut out, &corr);
                    } else {
                        sub_terms(&mut out, &corr);
                    }
                }
                mv.apply(&mut word);
            }
        } else {
            let smu = self.swap_seq[mu][k];
            let mut c = (*self.tau_right(us, k, smu)).clone();
            add_term(&mut c, (u, smu), &MultiPoly::one(n).neg());
            let s = &self.seqs[mu];
            out.insert((us, mu), self.q_at(s[k], s[k + 1], k, k + 1));
            out.retain(|_, p| !p.is_zero());
            let corr = self.right_mul_tau(&c, k);
            sub_terms(&mut out, &corr);
        }
        let arc = Arc::new(out);
        self.memo.write().unwrap().insert(key, arc.clone());
        arc
    }

    /// Right multiplication by `tau_k`.
    pub fn right_mul_tau(&self, x: &Terms<F>, k: usize) -> Terms<F> {
        let mut out: Terms<F> = BTreeMap::new();
        for (&(u, rho), h) in x {
            let mu = self.swap_seq[rho][k];
            let tr = self.tau_right(u, k, mu);
            let sh = h.swap(k);
            for (&key, f) in tr.iter() {
                add_term(&mut out, key, &f.mul(&sh));
            }
            let s = &self.seqs[rho];
            if s[k] == s[k + 1] {
                add_term(&mut out, (u, mu), &h.demazure(k));
            }
        }
        out
    }

    /// Product of two normal forms.
    pub fn multiply_terms(&self, a: &Terms<F>, b: &Terms<F>) -> Terms<F> {
        let mut out: Terms<F> = BTreeMap::new();
        let mut by_right: HashMap<usize, Terms<F>> = HashMap::new();
        for (&(w, nu), f) in a {
            by_right.entry(nu).or_default().insert((w, nu), f.clone());
        }
        for (&(w2, nu2), g) in b {
            let left = self.act_seq(w2, nu2);
            let Some(part) = by_right.get(&left) else { continue };
            let mut x = part.clone();
            for &l in self.group.word(w2) {
                x = self.right_mul_tau(&x, l as usize);
            }
            x = right_mul_poly(&x, g);
            add_terms(&mut out, &x);
        }
        out
    }

    /// Number of memoized `tau_u tau_k e(mu)` products.
    pub fn memo_size(&self) -> usize {
        self.memo.read().unwrap().len()
    }
}

pub(crate) fn add_term<F: Field>(t: &mut Terms<F>, key: (usize, usize), p: &MultiPoly<F>) {
    if p.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match t.entry(key) {
        Entry::Vacant(v) => {
            v.insert(p.clone());
        }
        Entry::Occupied(mut o) => {
            o.get_mut().add_assign_ref(p);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub(crate) fn add_terms<F: Field>(t: &mut Terms<F>, other: &Terms<F>) {
    for (&k, p) in other {
        add_term(t, k, p);
    }
}

pub(crate) fn sub_terms<F: Field>(t: &mut Terms<F>, other: &Terms<F>) {
    for (&k, p) in other {
        add_term(t, k, &p.neg());
    }
}

pub(crate) fn right_mul_poly<F: Field>(x: &Terms<F>, f: &MultiPoly<F>) -> Terms<F> {
    let mut out = BTreeMap::new();
    for (&k, p) in x {
        let q = p.mul(f);
        if !q.is_zero() {
            out.insert(k, q);
        }
    }
    out
}
