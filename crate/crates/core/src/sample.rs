//! Seeded random generators for states, vectors, and contexts, plus the
//! deterministic canonical fixtures. Every function takes the generator
//! explicitly; nothing here touches wall-clock entropy.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::contexts::Context;
use crate::linalg::{ComplexOperator, UnitVector};
use crate::scalar::{Scalar, C};

/// Haar-distributed unit vector: normalized vector of standard complex
/// Gaussians.
pub fn haar_unit_vector<F: Scalar, R: Rng>(dim: usize, rng: &mut R) -> UnitVector<F> {
    loop {
        let entries: Vec<C<F>> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex::new(F::of(re), F::of(im))
            })
            .collect();
        if let Ok(v) = UnitVector::new(entries) {
            return v;
        }
    }
}

/// One Haar unit vector per factor dimension.
pub fn random_product_vectors<F: Scalar, R: Rng>(
    dims: &[usize],
    rng: &mut R,
) -> Vec<UnitVector<F>> {
    dims.iter().map(|&d| haar_unit_vector(d, rng)).collect()
}

/// Haar-ish orthonormal basis by Gram-Schmidt on random Gaussian vectors.
pub fn random_orthonormal_basis<F: Scalar, R: Rng>(
    dim: usize,
    rng: &mut R,
) -> Vec<UnitVector<F>> {
    let mut basis: Vec<UnitVector<F>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let raw = haar_unit_vector::<F, R>(dim, rng);
        let mut entries: Vec<C<F>> = raw.entries().to_vec();
        for b in &basis {
            let overlap = b.inner(&raw);
            for (e, be) in entries.iter_mut().zip(b.entries()) {
                *e -= overlap * be;
            }
        }
        if let Ok(v) = UnitVector::new(entries) {
            basis.push(v);
        }
    }
    basis
}

/// Random full-rank density operator `M M^† / tr` on the given factors.
pub fn random_density<F: Scalar, R: Rng>(dims: &[usize], rng: &mut R) -> ComplexOperator<F> {
    let side: usize = dims.iter().product();
    let mut m = ComplexOperator::zeros(dims.to_vec());
    for r in 0..side {
        for c in 0..side {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m.set(r, c, Complex::new(F::of(re), F::of(im)));
        }
    }
    let g = m.matmul(&m.adjoint());
    let tr = g.trace().re;
    g.scale_re(F::one() / tr)
}

/// Random pure state on the product of the given factors (generically
/// entangled across every cut).
pub fn random_pure_state<F: Scalar, R: Rng>(dims: &[usize], rng: &mut R) -> ComplexOperator<F> {
    let side: usize = dims.iter().product();
    let v = haar_unit_vector::<F, R>(side, rng);
    v.projector().with_dims(dims.to_vec()).expect("side matches dims")
}

/// Random maximal context from a random orthonormal basis.
pub fn random_maximal_context<F: Scalar, R: Rng>(dim: usize, rng: &mut R) -> Context<F> {
    let basis = random_orthonormal_basis::<F, R>(dim, rng);
    Context::from_basis(&basis).expect("orthonormal basis forms a context")
}

/// Random context obtained by merging a random orthonormal basis into
/// `blocks` nonempty groups.
pub fn random_context_with_blocks<F: Scalar, R: Rng>(
    dim: usize,
    blocks: usize,
    rng: &mut R,
) -> Context<F> {
    assert!(blocks >= 1 && blocks <= dim);
    let basis = random_orthonormal_basis::<F, R>(dim, rng);
    // assign each basis vector to a block; force every block nonempty
    let mut assignment: Vec<usize> = (0..dim).map(|i| i % blocks).collect();
    for a in assignment.iter_mut() {
        if rng.gen::<f64>() < 0.5 {
            *a = rng.gen_range(0..blocks);
        }
    }
    for b in 0..blocks {
        if !assignment.contains(&b) {
            let i = rng.gen_range(0..dim);
            assignment[i] = b;
        }
    }
    let mut projectors = vec![ComplexOperator::<F>::zeros(vec![dim]); blocks];
    let mut used = vec![false; blocks];
    for (i, v) in basis.iter().enumerate() {
        let b = assignment[i];
        projectors[b] = projectors[b].add(&v.projector());
        used[b] = true;
    }
    let projectors: Vec<_> =
        projectors.into_iter().zip(used).filter(|(_, u)| *u).map(|(p, _)| p).collect();
    Context::new(dim, projectors).expect("merged basis blocks form a context")
}

/// The maximally entangled vector `sum_i |ii> / sqrt(d)`.
pub fn maximally_entangled<F: Scalar>(d: usize) -> UnitVector<F> {
    let mut entries = vec![C::<F>::zero(); d * d];
    for i in 0..d {
        entries[i * d + i] = Complex::new(F::one(), F::zero());
    }
    UnitVector::new(entries).expect("nonzero vector")
}

/// Projector of the maximally entangled state with dims `[d, d]`.
pub fn maximally_entangled_state<F: Scalar>(d: usize) -> ComplexOperator<F> {
    maximally_entangled::<F>(d).projector().with_dims(vec![d, d]).expect("side d^2")
}

/// Classically correlated state `sum_i |ii><ii| / d` with dims `[d, d]`.
pub fn classically_correlated<F: Scalar>(d: usize) -> ComplexOperator<F> {
    let mut out = ComplexOperator::zeros(vec![d, d]);
    let w = Complex::new(F::one() / F::of(d as f64), F::zero());
    for i in 0..d {
        out.set(i * d + i, i * d + i, w);
    }
    out
}
