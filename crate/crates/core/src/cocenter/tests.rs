use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cartan::{CartanDatum, DominantWeight, RootElement};
use crate::cyclotomic::FiniteDimAlgebra;
use crate::scalar::Rational;

type Q = Rational;

fn ctx(d: CartanDatum<Q>, beta: &[u32], lambda: &[u32]) -> Arc<CyclotomicContext<Q>> {
    let alg = KlrAlgebra::new(Arc::new(d), RootElement::new(beta.to_vec())).unwrap();
    CyclotomicContext::new(alg, DominantWeight::new(lambda.to_vec())).unwrap()
}

fn instances() -> Vec<Arc<CyclotomicContext<Q>>> {
    vec![
        ctx(CartanDatum::a2(), &[1, 1], &[1, 1]),
        ctx(CartanDatum::a2(), &[1, 1], &[2, 0]),
        ctx(CartanDatum::b2(), &[1, 1], &[1, 1]),
        ctx(CartanDatum::a3(), &[1, 1, 1], &[1, 0, 0]),
        ctx(CartanDatum::a3(), &[1, 1, 1], &[1, 0, 1]),
    ]
}

fn exps_below(bounds: &[i64]) -> Vec<Vec<u16>> {
    if bounds.iter().any(|&b| b <= 0) {
        return Vec::new();
    }
    exponent_box(&bounds.iter().map(|&b| b as u16).collect::<Vec<_>>())
}

#[test]
fn single_vertex_basis() {
    let c = Cocenter::new(ctx(CartanDatum::a1(), &[1], &[3]), None).unwrap();
    let e: Vec<_> = c.basis().elements.iter().map(|(_, a)| a[0]).collect();
    assert_eq!(e, vec![0, 1, 2]);
    let fd = FiniteDimAlgebra::new(c.context().clone()).unwrap();
    assert_eq!(fd.cocenter_dim(), 3);
}

#[test]
fn a2_fundamental_basis_is_one_idempotent() {
    let c = Cocenter::new(ctx(CartanDatum::a2(), &[1, 1], &[1, 0]), None).unwrap();
    let alg = c.algebra().clone();
    assert_eq!(c.basis().elements, vec![(alg.seq_index(&[0, 1]).unwrap(), vec![0, 0])]);
    assert_eq!(c.basis().bounds[&alg.seq_index(&[1, 0]).unwrap()][0], 0);
}

#[test]
fn zero_weight_gives_empty_basis() {
    let c = Cocenter::new(ctx(CartanDatum::a3(), &[1, 1, 1], &[0, 0, 0]), None).unwrap();
    assert!(c.basis().is_empty());
}

#[test]
fn repeated_labels_are_rejected() {
    let err = Cocenter::new(ctx(CartanDatum::a2(), &[2, 1], &[1, 0]), None).unwrap_err();
    assert_eq!(err, CocenterError::NotMultiplicityFree);
}

#[test]
fn k_nu_t_examples() {
    let c = Cocenter::new(ctx(CartanDatum::a3(), &[1, 1, 1], &[1, 0, 0]), None).unwrap();
    assert_eq!(c.k_nu_t(&[1, 0, 2], 1).unwrap(), 0);
    assert_eq!(c.k_nu_t(&[1, 0, 2], 3).unwrap(), 2);
    assert_eq!(c.k_nu_t(&[1, 0, 2], 2).unwrap(), 0);
    assert_eq!(c.k_nu_t(&[0, 1, 2], 3).unwrap(), 2);
    assert!(c.k_nu_t(&[0, 1, 2], 4).is_err());
}

#[test]
fn d_bound_cases() {
    let c = Cocenter::new(ctx(CartanDatum::a3(), &[1, 1, 1], &[2, 1, 1]), None).unwrap();
    let nu = [0, 1, 2];
    let u = Permutation::interval(3, 1, 1);
    // t < q
    assert_eq!(c.d_bound(&nu, &u, 2).unwrap(), 1 + 1);
    // t = q sums only below p = 2
    assert_eq!(c.d_bound(&nu, &u, 3).unwrap(), 1);
    assert_eq!(c.d_bound(&nu, &u, 1).unwrap(), 2);
    let u = Permutation::interval(3, 0, 0);
    assert_eq!(c.d_bound(&nu, &u, 3).unwrap(), c.t_bound(&nu, 2));
    assert_eq!(c.d_bound(&nu, &Permutation::from_images(vec![2, 1, 0]).unwrap(), 1), Err(CocenterError::NotInterval));
}

#[test]
fn basis_elements_reduce_to_themselves() {
    for cx in instances() {
        let c = Cocenter::new(cx, None).unwrap();
        for i in 0..c.basis().len() {
            assert_eq!(c.reduce(&c.element(i)).unwrap(), SparseVec::unit(i));
        }
    }
}

#[test]
fn indecomposable_generators_reduce_to_zero() {
    for cx in instances() {
        let c = Cocenter::new(cx, None).unwrap();
        let alg = c.algebra().clone();
        for (s, nu) in alg.sequences().iter().enumerate() {
            for u in c.gamma().enumerate_indecomposables(nu) {
                let bounds: Vec<i64> = (1..=nu.len()).map(|t| c.d_bound(nu, &u, t).unwrap()).collect();
                let mut exps = exps_below(&bounds);
                exps.push(vec![2; nu.len()]);
                for a in exps {
                    let p = c.generator(&CommutatorGenerator::monomial(u.clone(), s, &a));
                    assert!(c.reduce(&p).unwrap().is_zero(), "u={:?} nu={:?} a={:?}", u, nu, a);
                }
            }
        }
    }
}

#[test]
fn decomposable_generators_expand_and_reduce_to_zero() {
    let c = Cocenter::new(ctx(CartanDatum::a3(), &[1, 1, 1], &[1, 1, 0]), None).unwrap();
    let alg = c.algebra().clone();
    let mut decomposable = 0;
    for (s, nu) in alg.sequences().iter().enumerate() {
        for u in alg.group().elements() {
            if u.is_identity() || !c.gamma().less(nu, &u.act(nu)).unwrap() {
                continue;
            }
            let g = CommutatorGenerator::monomial(u.clone(), s, &[1, 0, 1]);
            let parts = c.expand_decomposable(&g).unwrap();
            let mut sum = PolyVector::new();
            for p in &parts {
                assert!(c.gamma().is_indecomposable(&p.u, alg.seq(p.nu)).unwrap());
                for (t, f) in c.generator(p) {
                    add_poly(&mut sum, t, &f);
                }
            }
            assert_eq!(sum, c.generator(&g));
            if parts.len() > 1 {
                decomposable += 1;
            }
            assert!(c.reduce(&c.generator(&g)).unwrap().is_zero());
        }
    }
    assert!(decomposable > 0);
}

#[test]
fn reduction_agrees_with_linear_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for cx in instances() {
        let c = Cocenter::new(cx.clone(), None).unwrap();
        let fd = FiniteDimAlgebra::new(cx).unwrap();
        let alg = c.algebra().clone();
        let n = alg.n();
        let comm = fd.commutator_space();
        for _ in 0..10 {
            let mut x = PolyVector::new();
            for _ in 0..6 {
                let s = rng.gen_range(0..alg.sequences().len());
                let e: Vec<u16> = (0..n).map(|_| rng.gen_range(0..4)).collect();
                let coef = Q::from_integer(rng.gen_range(-3..4).into());
                add_poly(&mut x, s, &MultiPoly::monomial(n, Monomial::from_exps(&e), coef));
            }
            let coords = c.reduce(&x).unwrap();
            let mut diff = fd.coords(&poly_terms(&alg, &x)).unwrap();
            for (i, v) in coords.entries() {
                let t = fd.coords(&poly_terms(&alg, &c.element(*i))).unwrap();
                diff = diff.axpy(&-v.clone(), &t);
            }
            assert!(comm.contains(&diff));
        }
    }
}

#[test]
fn iota_examples() {
    let c = Cocenter::new(ctx(CartanDatum::a1(), &[1], &[2]), None).unwrap();
    let r = c.iota_check(0).unwrap();
    assert!(r.passed());
    assert_eq!((r.source_size, r.target_size), (2, 3));

    let c = Cocenter::new(ctx(CartanDatum::a2(), &[1, 1], &[1, 0]), None).unwrap();
    let r = c.iota_check(0).unwrap();
    assert!(r.passed());
    assert!(r.target_size >= r.source_size);

    let c = Cocenter::new(ctx(CartanDatum::a2(), &[1, 1], &[1, 0]), Some(vec![1, 0])).unwrap();
    assert_eq!(c.iota_check(0), Err(CocenterError::GammaFirst(0)));
}

#[test]
fn conjecture_on_small_instances() {
    for cx in [ctx(CartanDatum::a2(), &[1, 1], &[1, 1]), ctx(CartanDatum::a3(), &[1, 1, 1], &[1, 0, 0]), ctx(CartanDatum::a2(), &[1, 1], &[1, 0])] {
        let c = Cocenter::new(cx.clone(), None).unwrap();
        let fd = FiniteDimAlgebra::new(cx).unwrap();
        let r = c.conjecture_verify(&fd).unwrap();
        assert!(r.surjective, "{:?}", r);
        assert!(r.cocenter_matches());
        assert!(r.iota_injective);
        assert_eq!(r.dim_center, r.dim_cocenter);
    }
}
