use std::sync::Arc;

use num_traits::One;
use proptest::prelude::*;

use super::*;
use crate::cartan::{CartanDatum, QCoeff, RootElement};
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::{Field, Rational};
use crate::symgroup::Permutation;

type Q = Rational;

fn q(v: i64) -> Q {
    Q::from_i64(v)
}

fn alg(d: CartanDatum<Q>, mults: &[u32]) -> Arc<KlrAlgebra<Q>> {
    KlrAlgebra::new(Arc::new(d), RootElement::new(mults.to_vec())).unwrap()
}

/// B_2 with rescaled `Q_{1,2}(u,v) = 2u + 3v^2`.
fn b2_scaled() -> CartanDatum<Q> {
    CartanDatum::new(
        vec!["1".into(), "2".into()],
        vec![vec![2, -1], vec![-2, 2]],
        vec![2, 1],
        &[QCoeff { i: 0, j: 1, p: 1, q: 0, value: q(2) }, QCoeff { i: 0, j: 1, p: 0, q: 2, value: q(3) }],
    )
    .unwrap()
}

fn test_algebras() -> Vec<Arc<KlrAlgebra<Q>>> {
    vec![
        alg(CartanDatum::a2(), &[1, 1]),
        alg(CartanDatum::a1(), &[2]),
        alg(CartanDatum::a1(), &[3]),
        alg(CartanDatum::a2(), &[2, 1]),
        alg(CartanDatum::a3(), &[1, 1, 1]),
        alg(b2_scaled(), &[1, 2]),
        alg(b2_scaled(), &[2, 1]),
    ]
}

fn x(a: &Arc<KlrAlgebra<Q>>, k: usize) -> KlrElement<Q> {
    KlrElement::x(a, k).unwrap()
}

fn tau(a: &Arc<KlrAlgebra<Q>>, k: usize) -> KlrElement<Q> {
    KlrElement::tau(a, k).unwrap()
}

#[test]
fn idempotents_are_orthogonal() {
    let a = alg(CartanDatum::a2(), &[1, 1]);
    let e0 = KlrElement::idempotent(&a, &[0, 1]).unwrap();
    let e1 = KlrElement::idempotent(&a, &[1, 0]).unwrap();
    assert_eq!(&e0 * &e0, e0);
    assert!((&e0 * &e1).is_zero());
}

#[test]
fn tau_x_relation_equal_labels() {
    let a = alg(CartanDatum::a1(), &[2]);
    let e = KlrElement::idempotent(&a, &[0, 0]).unwrap();
    let lhs = &(&tau(&a, 0) * &x(&a, 0)) * &e;
    let rhs = &(&(&x(&a, 1) * &tau(&a, 0)) * &e) - &e;
    assert_eq!(lhs, rhs);
}

#[test]
fn tau_squared_distinct_labels() {
    let a = alg(b2_scaled(), &[1, 1]);
    let e = KlrElement::idempotent(&a, &[0, 1]).unwrap();
    let lhs = &(&tau(&a, 0) * &tau(&a, 0)) * &e;
    let q12 = MultiPoly::var(2, 0).scale(&q(2)).add(&MultiPoly::var(2, 1).pow(2).scale(&q(3)));
    assert_eq!(lhs, KlrElement::poly_at(&a, q12, a.seq_index(&[0, 1]).unwrap()));
}

#[test]
fn nil_hecke_tau_squared_vanishes() {
    let a = alg(CartanDatum::a1(), &[2]);
    assert!((&tau(&a, 0) * &tau(&a, 0)).is_zero());
}

#[test]
fn degrees_of_generators() {
    let a = alg(CartanDatum::a2(), &[1, 1]);
    let s = a.seq_index(&[0, 1]).unwrap();
    assert_eq!(KlrElement::idempotent_at(&a, s).degree(), GradedDegree::Homogeneous(0));
    assert_eq!((&x(&a, 0) * &KlrElement::idempotent_at(&a, s)).degree(), GradedDegree::Homogeneous(2));
    assert_eq!(KlrElement::tau_at(&a, 0, s).degree(), GradedDegree::Homogeneous(1));
    assert_eq!(KlrElement::<Q>::zero(&a).degree(), GradedDegree::Zero);
    let mixed = &KlrElement::idempotent_at(&a, s) + &KlrElement::tau_at(&a, 0, s);
    assert_eq!(mixed.degree(), GradedDegree::Inhomogeneous);
}

#[test]
fn q_u_nu_examples() {
    let a = alg(CartanDatum::a2(), &[1, 1]);
    assert!(a.q_u_nu(&Permutation::identity(2), &[0, 1]).sub(&MultiPoly::one(2)).is_zero());
    assert_eq!(a.q_u_nu(&Permutation::simple(2, 0), &[0, 1]), a.q_at(0, 1, 0, 1));
}

#[test]
fn z_element_examples() {
    let a = alg(CartanDatum::a2(), &[1, 0]);
    assert_eq!(KlrElement::z_element(&a, 0), x(&a, 0));
    assert_eq!(KlrElement::z_element(&a, 1), KlrElement::one(&a));
    let b = alg(CartanDatum::a2(), &[1, 1]);
    let expected = &(&x(&b, 0) * &KlrElement::idempotent(&b, &[0, 1]).unwrap())
        + &(&x(&b, 1) * &KlrElement::idempotent(&b, &[1, 0]).unwrap());
    assert_eq!(KlrElement::z_element(&b, 0), expected);
}

#[test]
fn all_relations_hold() {
    for a in test_algebras() {
        let r = verify_relations(&a);
        assert!(r.checked > 0);
        assert!(r.passed(), "{:?}: {:?}", a, r.failures.first());
    }
}

#[test]
fn inversion_product_for_all_of_s3() {
    let scoped = |a: &Arc<KlrAlgebra<Q>>| a.beta().is_multiplicity_free() || a.beta().support().len() == 1;
    for a in test_algebras().into_iter().filter(|a| a.n() == 3 && scoped(a)) {
        let g = a.group();
        for u in 0..g.order() {
            let ui = g.inverse_index(u);
            let one = MultiPoly::one(3);
            for s in 0..a.sequences().len() {
                let t = KlrElement::basis_term(&a, u, one.clone(), s);
                let left = a.act_seq(u, s);
                let ti = KlrElement::basis_term(&a, ui, one.clone(), left);
                let expected = KlrElement::poly_at(&a, a.q_u_nu(g.get(u), a.seq(s)), s);
                assert_eq!(&ti * &t, expected, "u={:?} nu={:?}", g.get(u), a.seq(s));
            }
        }
    }
}

#[test]
fn inversion_product_fails_with_mixed_repeated_labels() {
    let a = alg(CartanDatum::a2(), &[2, 1]);
    let u = a.perm_index(&Permutation::from_images(vec![1, 2, 0]).unwrap());
    let s = a.seq_index(&[1, 0, 0]).unwrap();
    let one = MultiPoly::one(3);
    let t = KlrElement::basis_term(&a, u, one.clone(), s);
    let ti = KlrElement::basis_term(&a, a.group().inverse_index(u), one, a.act_seq(u, s));
    assert!(a.q_u_nu(a.perm(u), a.seq(s)).is_zero());
    assert!(!(&ti * &t).is_zero());
}

#[test]
fn two_sided_demazure() {
    let a = alg(CartanDatum::a1(), &[3]);
    let s = 0;
    let e = KlrElement::idempotent_at(&a, s);
    let f = MultiPoly::from_terms(3, [(Monomial::from_exps(&[2, 0, 1]), q(1)), (Monomial::from_exps(&[0, 1, 0]), q(5))]);
    for k in 0..2 {
        let fe = KlrElement::poly_at(&a, f.clone(), s);
        let lhs = &(&(&tau(&a, k) * &fe) * &tau(&a, k)) * &e;
        let rhs = &tau(&a, k) * &KlrElement::poly_at(&a, f.demazure(k), s);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn reduced_words_agree_up_to_shorter_terms() {
    for a in test_algebras().into_iter().filter(|a| a.n() == 3) {
        let g = a.group();
        for w in 0..g.order() {
            for word in g.get(w).reduced_words() {
                for s in 0..a.sequences().len() {
                    let start = {
                        let p = Permutation::from_word(3, &word);
                        a.act_seq(a.perm_index(&p), s)
                    };
                    let mut prod = KlrElement::idempotent_at(&a, start);
                    for &l in &word {
                        prod = &prod * &tau(&a, l as usize);
                    }
                    prod = &prod * &KlrElement::idempotent_at(&a, s);
                    let diff = &prod - &KlrElement::basis_term(&a, w, MultiPoly::one(3), s);
                    if let Some(m) = diff.max_length() {
                        assert!(m < g.length(w));
                    }
                }
            }
        }
    }
}

fn z_all(a: &Arc<KlrAlgebra<Q>>) -> Vec<KlrElement<Q>> {
    (0..a.datum().rank()).map(|i| KlrElement::z_element(a, i)).collect()
}

#[test]
fn z_elements_are_central() {
    for a in test_algebras() {
        let mut gens: Vec<_> = (0..a.n()).map(|k| x(&a, k)).collect();
        gens.extend((0..a.n() - 1).map(|k| tau(&a, k)));
        gens.extend((0..a.sequences().len()).map(|s| KlrElement::idempotent_at(&a, s)));
        for z in z_all(&a) {
            for g in &gens {
                assert_eq!(&z * g, g * &z);
            }
        }
    }
}

fn element_strategy(a: Arc<KlrAlgebra<Q>>) -> impl Strategy<Value = KlrElement<Q>> {
    let (order, nseq, n) = (a.group().order(), a.sequences().len(), a.n());
    prop::collection::vec((0..order, 0..nseq, prop::collection::vec(0u16..3, n), -3i64..4), 1..4).prop_map(move |ts| {
        let mut e = KlrElement::zero(&a);
        for (w, s, exps, c) in ts {
            e.add_term(w, s, &MultiPoly::monomial(n, Monomial::from_exps(&exps), q(c)));
        }
        e
    })
}

fn homogeneous(e: &KlrElement<Q>) -> KlrElement<Q> {
    // keep the part of the same degree as the first term
    let a = e.algebra();
    let Some((&(w, s), p)) = e.terms().iter().next() else { return e.clone() };
    let d = a.term_degree(w, s, p.terms().next().unwrap().0);
    let mut out = KlrElement::zero(a);
    for (&(w, s), p) in e.terms() {
        for (m, c) in p.terms() {
            if a.term_degree(w, s, m) == d {
                out.add_term(w, s, &MultiPoly::monomial(a.n(), m.clone(), c.clone()));
            }
        }
    }
    out
}

fn triple() -> impl Strategy<Value = (KlrElement<Q>, KlrElement<Q>, KlrElement<Q>)> {
    let algs = test_algebras().into_iter().filter(|a| a.n() <= 3).collect::<Vec<_>>();
    (0..algs.len()).prop_flat_map(move |i| {
        let a = algs[i].clone();
        (element_strategy(a.clone()), element_strategy(a.clone()), element_strategy(a))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_is_distributive((a, b, c) in triple()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn degree_is_additive((a, b, _c) in triple()) {
        let (a, b) = (homogeneous(&a), homogeneous(&b));
        let p = &a * &b;
        if let (GradedDegree::Homogeneous(da), GradedDegree::Homogeneous(db)) = (a.degree(), b.degree()) {
            prop_assert!(matches!(p.degree(), GradedDegree::Zero) || p.degree() == GradedDegree::Homogeneous(da + db));
        }
    }

    #[test]
    fn polyrep_is_multiplicative((a, b, c) in triple()) {
        let alg = a.algebra().clone();
        let mut v = PolyVector::new();
        for (&(_, s), p) in c.terms() {
            let e = v.entry(s).or_insert_with(|| MultiPoly::zero(alg.n()));
            e.add_assign_ref(p);
        }
        v.retain(|_, p| !p.is_zero());
        prop_assert_eq!(polyrep_apply(&(&a * &b), &v), polyrep_apply(&a, &polyrep_apply(&b, &v)));
    }
}

#[test]
fn polyrep_examples() {
    let a = alg(CartanDatum::a2(), &[1, 1]);
    let s = a.seq_index(&[0, 1]).unwrap();
    let f = MultiPoly::var(2, 0).add(&MultiPoly::var(2, 1).pow(2));
    let v: PolyVector<Q> = [(s, f.clone())].into_iter().collect();
    assert_eq!(polyrep_apply(&KlrElement::idempotent_at(&a, s), &v), v);
    let tt = &tau(&a, 0) * &tau(&a, 0);
    let expected: PolyVector<Q> = [(s, a.q_at(0, 1, 0, 1).mul(&f))].into_iter().collect();
    assert_eq!(polyrep_apply(&tt, &v), expected);
    let b = alg(CartanDatum::a1(), &[2]);
    let one: PolyVector<Q> = [(0, MultiPoly::one(2))].into_iter().collect();
    assert!(polyrep_apply(&tau(&b, 0), &one).is_empty());
}

#[test]
fn permute_polynomial_part_fixes_z() {
    let a = alg(CartanDatum::a2(), &[2, 1]);
    let z = KlrElement::z_element(&a, 0);
    for w in 0..a.group().order() {
        assert_eq!(z.permute_polynomial_part(w).unwrap(), z);
    }
    assert!(Q::one().is_one());
}
