//! Property tests for the structural invariants: tensor algebra laws,
//! Kleisli category laws, Fubini marginals, and the context partial order.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use toposq::contexts::{context_intersection, context_leq};
use toposq::linalg::ComplexOperator;
use toposq::monad::{
    checks, fubini_product, kleisli_compose, FiniteDist, FiniteSet, Kernel,
};
use toposq::sample::{random_context_with_blocks, random_density};

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn random_op(dims: &[usize], seed: u64) -> ComplexOperator<f64> {
    random_density::<f64, _>(dims, &mut rng(seed))
}

fn random_kernel(from: &FiniteSet, to: &FiniteSet, seed: u64) -> Kernel<f64> {
    let mut r = rng(seed);
    let rows = (0..from.size)
        .map(|_| {
            let raw: Vec<f64> = (0..to.size).map(|_| rand::Rng::gen::<f64>(&mut r) + 0.01).collect();
            let sum: f64 = raw.iter().sum();
            FiniteDist::raw(to.clone(), raw.iter().map(|w| w / sum).collect())
        })
        .collect();
    Kernel::new(from.clone(), to.clone(), rows).unwrap()
}

fn random_dist(over: &FiniteSet, seed: u64) -> FiniteDist<f64> {
    let mut r = rng(seed);
    let raw: Vec<f64> = (0..over.size).map(|_| rand::Rng::gen::<f64>(&mut r) + 0.01).collect();
    let sum: f64 = raw.iter().sum();
    FiniteDist::raw(over.clone(), raw.iter().map(|w| w / sum).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tensor_associative(seed in 0u64..1000) {
        let a = random_op(&[2], seed);
        let b = random_op(&[3], seed.wrapping_add(1));
        let c = random_op(&[2], seed.wrapping_add(2));
        let left = a.tensor(&b.tensor(&c));
        let right = a.tensor(&b).tensor(&c);
        prop_assert!(left.sub(&right).frobenius_norm() < 1e-14);
    }

    #[test]
    fn partial_trace_of_tensor(seed in 0u64..1000) {
        let a = random_op(&[3], seed);
        let b = random_op(&[2], seed.wrapping_add(7));
        let t = a.tensor(&b);
        let back = t.partial_trace(&[0]).unwrap();
        let expect = a.scale(b.trace());
        prop_assert!(back.sub(&expect).frobenius_norm() < 1e-13);
    }

    #[test]
    fn partial_transpose_involution_preserves(seed in 0u64..1000) {
        let w = random_op(&[2, 3], seed);
        let pt = w.partial_transpose(1).unwrap();
        prop_assert!((pt.trace() - w.trace()).norm() < 1e-13);
        prop_assert!(pt.is_hermitian(1e-12));
        let back = pt.partial_transpose(1).unwrap();
        prop_assert!(back.sub(&w).frobenius_norm() == 0.0);
    }

    #[test]
    fn purify_partial_trace_roundtrip(seed in 0u64..1000) {
        let rho = random_op(&[4], seed);
        let p = rho.purify(1e-12, 1e-9).unwrap();
        let back = p.projector(4).partial_trace(&[0]).unwrap();
        prop_assert!(back.sub(&rho).frobenius_norm() < 1e-10);
    }

    #[test]
    fn kleisli_associativity_and_units(seed in 0u64..1000) {
        let x = FiniteSet::new("X", 3);
        let y = FiniteSet::new("Y", 4);
        let z = FiniteSet::new("Z", 2);
        let w = FiniteSet::new("W", 3);
        let f = random_kernel(&x, &y, seed);
        let g = random_kernel(&y, &z, seed.wrapping_add(1));
        let h = random_kernel(&z, &w, seed.wrapping_add(2));
        let left = kleisli_compose(&h, &kleisli_compose(&g, &f).unwrap()).unwrap();
        let right = kleisli_compose(&kleisli_compose(&h, &g).unwrap(), &f).unwrap();
        for (a, b) in left.rows.iter().zip(&right.rows) {
            prop_assert!(a.max_abs_diff(b) < 1e-14);
        }
        let lid = kleisli_compose(&f, &Kernel::identity(x)).unwrap();
        let rid = kleisli_compose(&Kernel::identity(y), &f).unwrap();
        for (a, b) in lid.rows.iter().zip(&f.rows) {
            prop_assert!(a.max_abs_diff(b) < 1e-14);
        }
        for (a, b) in rid.rows.iter().zip(&f.rows) {
            prop_assert!(a.max_abs_diff(b) < 1e-14);
        }
    }

    #[test]
    fn fubini_marginals_recover_inputs(seed in 0u64..1000) {
        let x = FiniteSet::new("X", 3);
        let y = FiniteSet::new("Y", 4);
        let p = random_dist(&x, seed);
        let q = random_dist(&y, seed.wrapping_add(3));
        let pq = fubini_product(&p, &q);
        let px = pq.marginal(&[3, 4], &[0], "X");
        let qy = pq.marginal(&[3, 4], &[1], "Y");
        prop_assert!(px.max_abs_diff(&p) < 1e-15);
        prop_assert!(qy.max_abs_diff(&q) < 1e-15);
    }

    #[test]
    fn lemma_checkers_on_random_instances(seed in 0u64..500) {
        let x = FiniteSet::new("X", 3);
        let y = FiniteSet::new("Y", 2);
        let z = FiniteSet::new("Z", 4);
        let p_x = random_dist(&x, seed);
        let p_y = random_dist(&y, seed.wrapping_add(11));
        let f = random_kernel(&x, &y, seed.wrapping_add(12));
        let g = random_kernel(&y, &z, seed.wrapping_add(13));
        prop_assert!(checks::check_product_stability(&p_x, &p_y, &f, &g) < 1e-12);
        let joint = random_dist(&FiniteSet::new("XY", 6), seed.wrapping_add(14));
        prop_assert!(checks::check_marginal_locality(&joint, 3, &g) < 1e-12);
        prop_assert!(checks::check_state_preservation(&joint, 3, &g) < 1e-12);
    }

    #[test]
    fn context_order_and_glb(seed in 0u64..200) {
        let mut r = rng(seed);
        let tol = 1e-9;
        // comparable triple: coarse <= mid by merging, plus an incomparable
        let fine = random_context_with_blocks::<f64, _>(4, 4, &mut r);
        let mid = random_context_with_blocks::<f64, _>(4, 2, &mut r);
        // reflexive
        prop_assert!(context_leq(&fine, &fine, tol).unwrap());
        // intersection is a lower bound of both arguments
        let meet = context_intersection(&fine, &mid, tol).unwrap();
        prop_assert!(context_leq(&meet, &fine, tol).unwrap());
        prop_assert!(context_leq(&meet, &mid, tol).unwrap());
        // greatest among common lower bounds generated the same way
        let lower = context_intersection(&meet, &fine, tol).unwrap();
        prop_assert!(context_leq(&lower, &meet, tol).unwrap());
        // antisymmetry on canonical forms
        let meet2 = context_intersection(&mid, &fine, tol).unwrap();
        prop_assert!(meet.approx_eq(&meet2, 1e-8));
    }
}

#[test]
fn context_glb_universal_property_on_coarse_grainings() {
    // E <= C and E <= D implies E <= C meet D, on engineered triples
    let tol = 1e-9;
    for seed in 0..20u64 {
        let mut r = rng(seed);
        let basis = toposq::sample::random_orthonormal_basis::<f64, _>(4, &mut r);
        let c = toposq::contexts::Context::from_basis(&basis).unwrap();
        // D merges {0,1} and {2,3}; E merges everything (coarser than both)
        let p01 = basis[0].projector().add(&basis[1].projector());
        let p23 = basis[2].projector().add(&basis[3].projector());
        let d = toposq::contexts::Context::new(4, vec![p01.clone(), p23.clone()]).unwrap();
        let e = toposq::contexts::Context::trivial(4);
        assert!(context_leq(&e, &c, tol).unwrap());
        assert!(context_leq(&e, &d, tol).unwrap());
        let meet = context_intersection(&c, &d, tol).unwrap();
        assert!(context_leq(&e, &meet, tol).unwrap());
        // here the meet is D itself since D <= C
        assert!(meet.approx_eq(&d, 1e-8));
    }
}
