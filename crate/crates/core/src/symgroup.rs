//! The symmetric group `S_n`: permutations, reduced words, braid-move paths,
//! actions on weight sequences, and the gamma order used by the cocenter
//! construction.
//!
//! Everything is 0-based internally. The generator with index `k` is the
//! transposition of positions `k` and `k+1` (written `s_{k+1}` in the usual
//! 1-based notation). A word `[i_1, ..., i_r]` denotes the product
//! `s_{i_1} ... s_{i_r}`, composed as functions: `(uv)(k) = u(v(k))`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::cartan::Label;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("not a permutation of 0..{0}")]
    NotBijection(usize),
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("sequence is not a rearrangement of gamma")]
    NotInOrbit,
    #[error("gamma entries must be pairwise distinct")]
    RepeatedGamma,
    #[error("precondition nu < u.nu fails")]
    NotRaising,
    #[error("the identity permutation has no decomposition")]
    Identity,
    #[error("permutation is indecomposable relative to nu")]
    Indecomposable,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based: Vec<u8> = self.images.iter().map(|i| i + 1).collect();
        write!(f, "{:?}", one_based)
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u8).collect() }
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self, SymError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return Err(SymError::NotBijection(n));
            }
            seen[i as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Simple transposition with 0-based index `k`.
    pub fn simple(n: usize, k: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(k, k + 1);
        p
    }

    /// `s_{i_1} ... s_{i_r}`.
    pub fn from_word(n: usize, word: &[u8]) -> Self {
        let mut p = Self::identity(n);
        for &k in word {
            p = p.mul_simple(k as usize);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, k: usize) -> usize {
        self.images[k] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| k == i as usize)
    }

    /// `self * other`, i.e. `k -> self(other(k))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&k| self.images[k as usize]).collect() }
    }

    /// `self * s_k`.
    pub fn mul_simple(&self, k: usize) -> Permutation {
        let mut p = self.clone();
        p.images.swap(k, k + 1);
        p
    }

    /// `s_k * self`.
    pub fn simple_mul(&self, k: usize) -> Permutation {
        Permutation::simple(self.n(), k).compose(self)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (k, &i) in self.images.iter().enumerate() {
            inv[i as usize] = k as u8;
        }
        Permutation { images: inv }
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut c = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Pairs `k < t` with `w(k) > w(t)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.images[a] > self.images[b] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// `l(w s_k) < l(w)`.
    pub fn has_right_descent(&self, k: usize) -> bool {
        self.images[k] > self.images[k + 1]
    }

    /// `l(s_k w) < l(w)`.
    pub fn has_left_descent(&self, k: usize) -> bool {
        let inv = self.inverse();
        inv.images[k] > inv.images[k + 1]
    }

    /// Lexicographically smallest reduced word.
    pub fn preferred_word(&self) -> Vec<u8> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while !w.is_identity() {
            let inv = w.inverse();
            let k = (0..self.n() - 1).find(|&k| inv.images[k] > inv.images[k + 1]).unwrap();
            word.push(k as u8);
            w = w.simple_mul(k);
        }
        word
    }

    /// All reduced words, in lexicographic order.
    pub fn reduced_words(&self) -> Vec<Vec<u8>> {
        fn rec(w: &Permutation, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            if w.is_identity() {
                out.push(cur.clone());
                return;
            }
            for k in 0..w.n() - 1 {
                if w.has_left_descent(k) {
                    cur.push(k as u8);
                    rec(&w.simple_mul(k), cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(self, &mut Vec::new(), &mut out);
        out
    }

    /// `w.nu` with `(w.nu)_{w(j)} = nu_j`.
    pub fn act<T: Clone>(&self, nu: &[T]) -> Vec<T> {
        assert_eq!(nu.len(), self.n(), "sequence length mismatch");
        let mut out = nu.to_vec();
        for (j, x) in nu.iter().enumerate() {
            out[self.images[j] as usize] = x.clone();
        }
        out
    }

    pub fn try_act<T: Clone>(&self, nu: &[T]) -> Result<Vec<T>, SymError> {
        if nu.len() != self.n() {
            return Err(SymError::Length(nu.len(), self.n()));
        }
        Ok(self.act(nu))
    }

    /// The cycle `s_k s_{k+1} ... s_t` (0-based indices).
    pub fn interval(n: usize, k: usize, t: usize) -> Self {
        let word: Vec<u8> = (k..=t).map(|i| i as u8).collect();
        Self::from_word(n, &word)
    }

    /// If this permutation equals `s_k ... s_t` for some `k <= t`, return `(k, t)`.
    pub fn as_interval(&self) -> Option<(usize, usize)> {
        let n = self.n();
        if self.is_identity() {
            return None;
        }
        let k = (0..n).find(|&i| self.images[i] as usize != i)?;
        let t1 = (0..n).rev().find(|&i| self.images[i] as usize != i)?;
        if t1 == 0 {
            return None;
        }
        let t = t1 - 1;
        (*self == Self::interval(n, k, t)).then_some((k, t))
    }
}

/// All permutations of `0..n` in lexicographic order of images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation { images: cur.clone() });
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Elementary rewrite of a reduced word at position `pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidMove {
    /// `s_a s_b -> s_b s_a` with `|a - b| >= 2`.
    Commute { pos: usize },
    /// `s_{a+1} s_a s_{a+1} -> s_a s_{a+1} s_a`.
    Down { pos: usize, a: u8 },
    /// `s_a s_{a+1} s_a -> s_{a+1} s_a s_{a+1}`.
    Up { pos: usize, a: u8 },
}

impl BraidMove {
    pub fn apply(&self, word: &mut [u8]) {
        match *self {
            BraidMove::Commute { pos } => word.swap(pos, pos + 1),
            BraidMove::Down { pos, a } => word[pos..pos + 3].copy_from_slice(&[a, a + 1, a]),
            BraidMove::Up { pos, a } => word[pos..pos + 3].copy_from_slice(&[a + 1, a, a + 1]),
        }
    }
}

fn neighbours(word: &[u8]) -> Vec<(BraidMove, Vec<u8>)> {
    let mut out = Vec::new();
    for p in 0..word.len().saturating_sub(1) {
        let (x, y) = (word[p], word[p + 1]);
        if x.abs_diff(y) >= 2 {
            let m = BraidMove::Commute { pos: p };
            let mut w = word.to_vec();
            m.apply(&mut w);
            out.push((m, w));
        }
        if p + 2 < word.len() && word[p + 2] == x && x.abs_diff(y) == 1 {
            let m = if x > y { BraidMove::Down { pos: p, a: y } } else { BraidMove::Up { pos: p, a: x } };
            let mut w = word.to_vec();
            m.apply(&mut w);
            out.push((m, w));
        }
    }
    out
}

/// Shortest sequence of braid and commutation moves between two reduced
/// words of the same permutation (Matsumoto's theorem guarantees one).
pub fn braid_path(from: &[u8], to: &[u8]) -> Option<Vec<BraidMove>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut prev: HashMap<Vec<u8>, (Vec<u8>, BraidMove)> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(from.to_vec());
    prev.insert(from.to_vec(), (Vec::new(), BraidMove::Commute { pos: 0 }));
    while let Some(w) = queue.pop_front() {
        for (m, nw) in neighbours(&w) {
            if prev.contains_key(&nw) {
                continue;
            }
            prev.insert(nw.clone(), (w.clone(), m));
            if nw == to {
                let mut path = Vec::new();
                let mut cur = nw;
                while cur != from {
                    let (p, m) = prev[&cur].clone();
                    path.push(m);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(nw);
        }
    }
    None
}

/// Precomputed tables for `S_n`, shared by the algebra engine.
pub struct SymGroup {
    n: usize,
    elems: Vec<Permutation>,
    index: HashMap<Vec<u8>, usize>,
    lengths: Vec<usize>,
    words: Vec<Vec<u8>>,
    right_simple: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    paths: RwLock<HashMap<(usize, u8), Arc<Vec<BraidMove>>>>,
}

impl fmt::Debug for SymGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymGroup(n={})", self.n)
    }
}

impl SymGroup {
    pub fn new(n: usize) -> Self {
        let elems = all_permutations(n);
        let index: HashMap<Vec<u8>, usize> = elems.iter().enumerate().map(|(i, p)| (p.images.clone(), i)).collect();
        let lengths = elems.iter().map(|p| p.length()).collect();
        let words = elems.iter().map(|p| p.preferred_word()).collect();
        let right_simple = elems
            .iter()
            .map(|p| (0..n.saturating_sub(1)).map(|k| index[&p.mul_simple(k).images]).collect())
            .collect();
        let inverse = elems.iter().map(|p| index[&p.inverse().images]).collect();
        SymGroup { n, elems, index, lengths, words, right_simple, inverse, paths: RwLock::new(HashMap::new()) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elems
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.elems[i]
    }

    pub fn index_of(&self, p: &Permutation) -> usize {
        self.index[&p.images]
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn length(&self, i: usize) -> usize {
        self.lengths[i]
    }

    pub fn word(&self, i: usize) -> &[u8] {
        &self.words[i]
    }

    pub fn mul_simple(&self, i: usize, k: usize) -> usize {
        self.right_simple[i][k]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    /// Moves rewriting `pref(u) ++ [k]` into `pref(u s_k)`, assuming
    /// `l(u s_k) > l(u)`. Cached.
    pub fn lift_path(&self, u: usize, k: u8) -> Arc<Vec<BraidMove>> {
        if let Some(p) = self.paths.read().unwrap().get(&(u, k)) {
            return p.clone();
        }
        let mut from = self.words[u].clone();
        from.push(k);
        let target = &self.words[self.right_simple[u][k as usize]];
        let path = Arc::new(braid_path(&from, target).expect("reduced words of one permutation are braid-connected"));
        self.paths.write().unwrap().insert((u, k), path.clone());
        path
    }
}

/// Total order on labels induced by an initial weight `gamma` with pairwise
/// distinct entries, transported to weight sequences through `u -> u.gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaOrder {
    gamma: Vec<Label>,
    rank: HashMap<Label, usize>,
}

impl GammaOrder {
    pub fn new(gamma: Vec<Label>) -> Result<Self, SymError> {
        let mut rank = HashMap::new();
        for (t, &g) in gamma.iter().enumerate() {
            if rank.insert(g, t).is_some() {
                return Err(SymError::RepeatedGamma);
            }
        }
        Ok(GammaOrder { gamma, rank })
    }

    pub fn gamma(&self) -> &[Label] {
        &self.gamma
    }

    pub fn n(&self) -> usize {
        self.gamma.len()
    }

    /// Position of a label in gamma.
    pub fn rank(&self, i: Label) -> Option<usize> {
        self.rank.get(&i).copied()
    }

    pub fn label_less(&self, i: Label, j: Label) -> bool {
        self.rank[&i] < self.rank[&j]
    }

    /// The permutation `v` with `v.gamma = nu`.
    pub fn perm_of(&self, nu: &[Label]) -> Result<Permutation, SymError> {
        if nu.len() != self.n() {
            return Err(SymError::Length(nu.len(), self.n()));
        }
        let mut images = vec![u8::MAX; self.n()];
        for (pos, &l) in nu.iter().enumerate() {
            let t = self.rank(l).ok_or(SymError::NotInOrbit)?;
            if images[t] != u8::MAX {
                return Err(SymError::NotInOrbit);
            }
            images[t] = pos as u8;
        }
        Permutation::from_images(images)
    }

    /// `mu <_gamma nu`.
    pub fn less(&self, mu: &[Label], nu: &[Label]) -> Result<bool, SymError> {
        Ok(self.perm_of(mu)?.images < self.perm_of(nu)?.images)
    }

    pub fn cmp(&self, mu: &[Label], nu: &[Label]) -> std::cmp::Ordering {
        self.perm_of(mu).unwrap().images.cmp(&self.perm_of(nu).unwrap().images)
    }

    /// Largest `s <= t` with `nu_s < nu_{t+1}` in this order (0-based).
    pub fn interval_start(&self, nu: &[Label], t: usize) -> Option<usize> {
        (0..=t).rev().find(|&s| self.label_less(nu[s], nu[t + 1]))
    }

    /// Closed-form classification of permutations indecomposable relative to `nu`.
    pub fn is_indecomposable(&self, u: &Permutation, nu: &[Label]) -> Result<bool, SymError> {
        if u.is_identity() {
            return Err(SymError::Identity);
        }
        if !self.less(nu, &u.act(nu))? {
            return Err(SymError::NotRaising);
        }
        Ok(match u.as_interval() {
            Some((k, t)) => self.interval_start(nu, t) == Some(k),
            None => false,
        })
    }

    /// Definition-level check: no length-additive `u = u1 u2` with `u1 != e`
    /// and `nu < u2.nu`.
    pub fn is_indecomposable_brute(&self, group: &SymGroup, u: &Permutation, nu: &[Label]) -> Result<bool, SymError> {
        if u.is_identity() {
            return Err(SymError::Identity);
        }
        if !self.less(nu, &u.act(nu))? {
            return Err(SymError::NotRaising);
        }
        Ok(self.decompositions(group, u, nu).is_empty())
    }

    /// All length-additive factorizations `u = u1 u2` with `u1 != e`, `nu < u2.nu`.
    pub fn decompositions(&self, group: &SymGroup, u: &Permutation, nu: &[Label]) -> Vec<(Permutation, Permutation)> {
        let lu = u.length();
        let mut out = Vec::new();
        for u2 in group.elements() {
            let u1 = u.compose(&u2.inverse());
            if u1.is_identity() || u1.length() + u2.length() != lu {
                continue;
            }
            if self.less(nu, &u2.act(nu)).unwrap_or(false) {
                out.push((u1, u2.clone()));
            }
        }
        out
    }

    /// A decomposition relative to `nu`: `u2` of maximal length, ties broken
    /// by the lexicographically smallest preferred word of `u1`.
    pub fn decompose(&self, group: &SymGroup, u: &Permutation, nu: &[Label]) -> Result<(Permutation, Permutation), SymError> {
        if u.is_identity() {
            return Err(SymError::Identity);
        }
        if !self.less(nu, &u.act(nu))? {
            return Err(SymError::NotRaising);
        }
        self.decompositions(group, u, nu)
            .into_iter()
            .min_by(|(a1, a2), (b1, b2)| {
                b2.length().cmp(&a2.length()).then_with(|| a1.preferred_word().cmp(&b1.preferred_word()))
            })
            .ok_or(SymError::Indecomposable)
    }

    /// For each `t`, the unique interval `s_k ... s_t` indecomposable
    /// relative to `nu`, when it exists.
    pub fn enumerate_indecomposables(&self, nu: &[Label]) -> Vec<Permutation> {
        let n = nu.len();
        (0..n.saturating_sub(1))
            .filter_map(|t| self.interval_start(nu, t).map(|k| Permutation::interval(n, k, t)))
            .collect()
    }

    /// `k_{nu,t}`: 1-based index of the last earlier position with a smaller
    /// label, or 0. `t` is 0-based.
    pub fn k_nu_t(&self, nu: &[Label], t: usize) -> usize {
        (0..t).rev().find(|&p| self.label_less(nu[p], nu[t])).map(|p| p + 1).unwrap_or(0)
    }
}
