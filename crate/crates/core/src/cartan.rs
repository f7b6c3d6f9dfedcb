//! Cartan data, dominant weights, positive roots and the Q-polynomials.
//!
//! Labels are addressed by their position in [`CartanDatum::labels`]; a
//! weight sequence is a list of such positions.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::poly::{Monomial, MultiPoly};
use crate::scalar::Field;

pub type Label = usize;

/// A weight sequence `(nu_1, ..., nu_n)` of label positions.
pub type Sequence = Vec<Label>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("matrix must be square of size {0}")]
    Shape(usize),
    #[error("diagonal entry a_{{{0},{0}}} must be 2, found {1}")]
    Diagonal(String, i64),
    #[error("off-diagonal entry a_{{{0},{1}}} = {2} must be <= 0")]
    Positive(String, String, i64),
    #[error("a_{{{0},{1}}} and a_{{{1},{0}}} must vanish together")]
    ZeroPattern(String, String),
    #[error("symmetrizers must be positive and make d_i a_ij symmetric (fails at {0},{1})")]
    NotSymmetrizable(String, String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("Q coefficient ({0},{1},{2},{3}) violates the degree constraint")]
    QDegree(String, String, u32, u32),
    #[error("Q coefficients for {0},{1} are not symmetric under (i,j,p,q) -> (j,i,q,p)")]
    QSymmetry(String, String),
    #[error("Q coefficients given for the diagonal pair {0},{0}")]
    QDiagonal(String),
    #[error("leading coefficient c_{{{0},{1},-a,0}} must be invertible")]
    QLeading(String, String),
    #[error("cyclotomic coefficients for {0}: expected {1} lower coefficients, found {2}")]
    ACoeffs(String, usize, usize),
    #[error("vector length {0} does not match the number of labels {1}")]
    Length(usize, usize),
}

/// Symmetrizable Cartan datum together with its Q-polynomials.
#[derive(Clone, Debug)]
pub struct CartanDatum<F: Field> {
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
    symmetrizers: Vec<i64>,
    q: Vec<Vec<MultiPoly<F>>>,
    a_coeffs: BTreeMap<Label, Vec<F>>,
}

/// One Q coefficient `c_{i,j,p,q}` (coefficient of `u^p v^q` in `Q_{i,j}`).
#[derive(Clone, Debug)]
pub struct QCoeff<F> {
    pub i: Label,
    pub j: Label,
    pub p: u32,
    pub q: u32,
    pub value: F,
}

impl<F: Field> CartanDatum<F> {
    /// Build and validate a datum. `q_coeffs` overrides the default
    /// `Q_{i,j}(u,v) = u^{-a_ij} + v^{-a_ji}` for every pair it mentions;
    /// mirrored entries `(j,i,q,p)` are filled in automatically.
    pub fn new(
        labels: Vec<String>,
        matrix: Vec<Vec<i64>>,
        symmetrizers: Vec<i64>,
        q_coeffs: &[QCoeff<F>],
    ) -> Result<Self, CartanError> {
        let r = labels.len();
        for (k, l) in labels.iter().enumerate() {
            if labels[..k].contains(l) {
                return Err(CartanError::DuplicateLabel(l.clone()));
            }
        }
        if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
            return Err(CartanError::Shape(r));
        }
        if symmetrizers.len() != r {
            return Err(CartanError::Length(symmetrizers.len(), r));
        }
        for i in 0..r {
            if matrix[i][i] != 2 {
                return Err(CartanError::Diagonal(labels[i].clone(), matrix[i][i]));
            }
            for j in 0..r {
                if i == j {
                    continue;
                }
                if matrix[i][j] > 0 {
                    return Err(CartanError::Positive(labels[i].clone(), labels[j].clone(), matrix[i][j]));
                }
                if (matrix[i][j] == 0) != (matrix[j][i] == 0) {
                    return Err(CartanError::ZeroPattern(labels[i].clone(), labels[j].clone()));
                }
                if symmetrizers[i] <= 0 || symmetrizers[i] * matrix[i][j] != symmetrizers[j] * matrix[j][i] {
                    return Err(CartanError::NotSymmetrizable(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        if r == 1 && symmetrizers[0] <= 0 {
            return Err(CartanError::NotSymmetrizable(labels[0].clone(), labels[0].clone()));
        }

        let mut given: BTreeMap<(Label, Label), BTreeMap<(u32, u32), F>> = BTreeMap::new();
        for c in q_coeffs {
            if c.i >= r {
                return Err(CartanError::UnknownLabel(c.i.to_string()));
            }
            if c.j >= r {
                return Err(CartanError::UnknownLabel(c.j.to_string()));
            }
            if c.i == c.j {
                return Err(CartanError::QDiagonal(labels[c.i].clone()));
            }
            let di = symmetrizers[c.i];
            let dj = symmetrizers[c.j];
            if c.p as i64 * di + c.q as i64 * dj != -di * matrix[c.i][c.j] && !c.value.is_zero() {
                return Err(CartanError::QDegree(labels[c.i].clone(), labels[c.j].clone(), c.p, c.q));
            }
            for (a, b, p, q) in [(c.i, c.j, c.p, c.q), (c.j, c.i, c.q, c.p)] {
                let entry = given.entry((a, b)).or_default();
                if let Some(old) = entry.get(&(p, q)) {
                    if *old != c.value {
                        return Err(CartanError::QSymmetry(labels[a].clone(), labels[b].clone()));
                    }
                }
                entry.insert((p, q), c.value.clone());
            }
        }

        let mut q = vec![vec![MultiPoly::zero(2); r]; r];
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                q[i][j] = match given.get(&(i, j)) {
                    Some(cs) => MultiPoly::from_terms(
                        2,
                        cs.iter().map(|((p, qq), v)| (Monomial::from_exps(&[*p as u16, *qq as u16]), v.clone())),
                    ),
                    None => default_q(matrix[i][j], matrix[j][i]),
                };
                let lead = q[i][j].coeff(&Monomial::from_exps(&[(-matrix[i][j]) as u16, 0]));
                if lead.is_zero() {
                    return Err(CartanError::QLeading(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(CartanDatum { labels, matrix, symmetrizers, q, a_coeffs: BTreeMap::new() })
    }

    /// Attach lower coefficients of a general monic cyclotomic polynomial
    /// `a_i(u) = u^l + c_{l-1} u^{l-1} + ... + c_0` for label `i`.
    pub fn with_a_coeffs(mut self, i: Label, lower: Vec<F>) -> Result<Self, CartanError> {
        if i >= self.rank() {
            return Err(CartanError::UnknownLabel(i.to_string()));
        }
        self.a_coeffs.insert(i, lower);
        Ok(self)
    }

    pub fn has_custom_a(&self) -> bool {
        self.a_coeffs.values().any(|v| v.iter().any(|c| !c.is_zero()))
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_name(&self, i: Label) -> &str {
        &self.labels[i]
    }

    pub fn label_index(&self, name: &str) -> Option<Label> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn a(&self, i: Label, j: Label) -> i64 {
        self.matrix[i][j]
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.symmetrizers
    }

    /// `(alpha_i, alpha_j) = d_i a_ij`.
    pub fn bilinear_form(&self, i: Label, j: Label) -> i64 {
        self.symmetrizers[i] * self.matrix[i][j]
    }

    /// `Q_{i,j}(u, v)` as a polynomial in two variables.
    pub fn q_poly(&self, i: Label, j: Label) -> &MultiPoly<F> {
        &self.q[i][j]
    }

    /// `Q_{i,j}(x_a, x_b)` inside an `n`-variable ring.
    pub fn q_at(&self, i: Label, j: Label, n: usize, a: usize, b: usize) -> MultiPoly<F> {
        MultiPoly::embed_bivariate(&self.q[i][j], n, a, b)
    }

    /// `r_{i,j} = c_{i,j,-a_ij,0}`, zero on the diagonal.
    pub fn r(&self, i: Label, j: Label) -> F {
        if i == j {
            return F::zero();
        }
        self.q[i][j].coeff(&Monomial::from_exps(&[(-self.matrix[i][j]) as u16, 0]))
    }

    /// `r_nu = prod_{k<l} r_{nu_k, nu_l}`.
    pub fn r_nu(&self, nu: &[Label]) -> F {
        let mut acc = F::one();
        for k in 0..nu.len() {
            for l in k + 1..nu.len() {
                acc *= self.r(nu[k], nu[l]);
            }
        }
        acc
    }

    /// `r(beta, nu_n) = prod_{k<n} r_{nu_k, nu_n}`.
    pub fn r_last(&self, nu: &[Label]) -> F {
        let Some((&last, rest)) = nu.split_last() else { return F::one() };
        rest.iter().fold(F::one(), |acc, &k| acc * self.r(k, last))
    }

    /// Cyclotomic polynomial `a_i^Lambda(u)` in one variable.
    pub fn a_poly(&self, lambda: &DominantWeight, i: Label) -> Result<MultiPoly<F>, CartanError> {
        let l = lambda.coord(i) as usize;
        let mut p = MultiPoly::monomial(1, Monomial::from_exps(&[l as u16]), F::one());
        if let Some(lower) = self.a_coeffs.get(&i) {
            if lower.len() != l {
                return Err(CartanError::ACoeffs(self.labels[i].clone(), l, lower.len()));
            }
            for (k, c) in lower.iter().enumerate() {
                p.add_term(Monomial::from_exps(&[k as u16]), c.clone());
            }
        }
        Ok(p)
    }

    /// `a_i^Lambda(x_k)` inside an `n`-variable ring.
    pub fn a_at(&self, lambda: &DominantWeight, i: Label, n: usize, k: usize) -> Result<MultiPoly<F>, CartanError> {
        let a = self.a_poly(lambda, i)?;
        Ok(MultiPoly::from_terms(
            n,
            a.terms().map(|(m, c)| (Monomial::var(n, k, m.exps()[0]), c.clone())),
        ))
    }

    /// `(Lambda, alpha_i) = d_i <alpha_i^vee, Lambda>`.
    pub fn lambda_pairing(&self, lambda: &DominantWeight, i: Label) -> i64 {
        self.symmetrizers[i] * lambda.coord(i) as i64
    }

    /// `(beta, beta')` extended bilinearly.
    pub fn root_pairing(&self, a: &RootElement, b: &RootElement) -> i64 {
        let mut acc = 0;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                acc += a.mult(i) as i64 * b.mult(j) as i64 * self.bilinear_form(i, j);
            }
        }
        acc
    }

    /// `d_{Lambda,beta} = 2 (Lambda, beta) - (beta, beta)`.
    pub fn d_lambda_beta(&self, lambda: &DominantWeight, beta: &RootElement) -> i64 {
        let lb: i64 = (0..self.rank()).map(|i| beta.mult(i) as i64 * self.lambda_pairing(lambda, i)).sum();
        2 * lb - self.root_pairing(beta, beta)
    }

    pub fn check_weight(&self, lambda: &DominantWeight) -> Result<(), CartanError> {
        if lambda.coords.len() != self.rank() {
            return Err(CartanError::Length(lambda.coords.len(), self.rank()));
        }
        Ok(())
    }

    pub fn check_root(&self, beta: &RootElement) -> Result<(), CartanError> {
        if beta.mults.len() != self.rank() {
            return Err(CartanError::Length(beta.mults.len(), self.rank()));
        }
        Ok(())
    }
}

fn default_q<F: Field>(aij: i64, aji: i64) -> MultiPoly<F> {
    if aij == 0 {
        return MultiPoly::one(2);
    }
    let mut p = MultiPoly::zero(2);
    p.add_term(Monomial::from_exps(&[(-aij) as u16, 0]), F::one());
    p.add_term(Monomial::from_exps(&[0, (-aji) as u16]), F::one());
    p
}

fn numbered_labels(r: usize) -> Vec<String> {
    (1..=r).map(|i| i.to_string()).collect()
}

impl<F: Field> CartanDatum<F> {
    /// Type `A_1`: a single label.
    pub fn a1() -> Self {
        Self::new(numbered_labels(1), vec![vec![2]], vec![1], &[]).unwrap()
    }

    /// Type `A_r` with labels `1..=r`.
    pub fn type_a(r: usize) -> Self {
        let mut m = vec![vec![0i64; r]; r];
        for i in 0..r {
            m[i][i] = 2;
            if i + 1 < r {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        Self::new(numbered_labels(r), m, vec![1; r], &[]).unwrap()
    }

    pub fn a2() -> Self {
        Self::type_a(2)
    }

    pub fn a3() -> Self {
        Self::type_a(3)
    }

    /// Type `B_2` with `d = (2, 1)`, `a_12 = -1`, `a_21 = -2`.
    pub fn b2() -> Self {
        Self::new(numbered_labels(2), vec![vec![2, -1], vec![-2, 2]], vec![2, 1], &[]).unwrap()
    }

    /// Look up a preset by name (`A1`, `A2`, `A3`, `B2`).
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "A1" => Some(Self::a1()),
            "A2" => Some(Self::a2()),
            "A3" => Some(Self::a3()),
            "B2" => Some(Self::b2()),
            _ => None,
        }
    }
}

/// Dominant integral weight by its coordinates `<alpha_i^vee, Lambda>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DominantWeight {
    pub coords: Vec<u32>,
}

impl DominantWeight {
    pub fn new(coords: Vec<u32>) -> Self {
        DominantWeight { coords }
    }

    pub fn zero(r: usize) -> Self {
        DominantWeight { coords: vec![0; r] }
    }

    /// Fundamental weight `Lambda_i`.
    pub fn fundamental(r: usize, i: Label) -> Self {
        let mut w = Self::zero(r);
        w.coords[i] = 1;
        w
    }

    pub fn coord(&self, i: Label) -> u32 {
        self.coords[i]
    }

    pub fn plus_fundamental(&self, i: Label) -> Self {
        let mut w = self.clone();
        w.coords[i] += 1;
        w
    }
}

/// Element `beta = sum_i k_i alpha_i` of the positive root lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootElement {
    pub mults: Vec<u32>,
}

impl RootElement {
    pub fn new(mults: Vec<u32>) -> Self {
        RootElement { mults }
    }

    pub fn simple(r: usize, i: Label) -> Self {
        let mut m = vec![0; r];
        m[i] = 1;
        RootElement { mults: m }
    }

    /// Content of a weight sequence.
    pub fn from_sequence(r: usize, nu: &[Label]) -> Self {
        let mut m = vec![0; r];
        for &i in nu {
            m[i] += 1;
        }
        RootElement { mults: m }
    }

    pub fn mult(&self, i: Label) -> u32 {
        self.mults[i]
    }

    pub fn height(&self) -> usize {
        self.mults.iter().map(|&k| k as usize).sum()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.mults.iter().all(|&k| k <= 1)
    }

    /// Labels with nonzero multiplicity.
    pub fn support(&self) -> Vec<Label> {
        (0..self.mults.len()).filter(|&i| self.mults[i] > 0).collect()
    }

    /// All distinct orderings of the content, in lexicographic order.
    pub fn weight_sequences(&self) -> Vec<Sequence> {
        let mut out = Vec::new();
        let mut remaining = self.mults.clone();
        let mut cur = Vec::with_capacity(self.height());
        fn rec(rem: &mut Vec<u32>, cur: &mut Vec<Label>, n: usize, out: &mut Vec<Sequence>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for i in 0..rem.len() {
                if rem[i] > 0 {
                    rem[i] -= 1;
                    cur.push(i);
                    rec(rem, cur, n, out);
                    cur.pop();
                    rem[i] += 1;
                }
            }
        }
        let n = self.height();
        rec(&mut remaining, &mut cur, n, &mut out);
        out
    }
}

/// Whether `Q_{i,j}(u,v) = Q_{j,i}(v,u)` holds for every pair.
pub fn q_symmetric<F: Field>(d: &CartanDatum<F>) -> bool {
    (0..d.rank()).all(|i| {
        (0..d.rank()).all(|j| {
            let swapped = d.q_poly(j, i).swap(0);
            *d.q_poly(i, j) == swapped
        })
    })
}

/// Multinomial coefficient `n! / prod k_i!`.
pub fn multinomial(mults: &[u32]) -> u64 {
    let mut acc: u64 = 1;
    let mut total: u64 = 0;
    for &k in mults {
        for t in 1..=k as u64 {
            total += 1;
            acc = acc * total / t;
        }
    }
    acc
}
