//! Executable checks of the structural lemmas behind the Markov-chain
//! construction: product stability, marginal locality, state preservation,
//! and the strength/costrength diagram laws.
//!
//! Checkers accept raw weight vectors so injected faults (non-stochastic
//! rows) show up as reported deviations instead of constructor errors.

use crate::scalar::Scalar;

use super::{
    costrength, dst, dst_prime, ext_map, fubini_product, kleisli_apply, pair_extension,
    spatial_compose, strength, DistributionMonad, FiniteDist, FiniteSet, Kernel, MonadOps,
};

/// Max deviation of `(i . (f x g)) (.) (i . <p_X, p_Y>)` from
/// `i . <f (.) p_X, g (.) p_Y>`: local transformations preserve product
/// states.
pub fn check_product_stability<F: Scalar>(
    p_x: &FiniteDist<F>,
    p_y: &FiniteDist<F>,
    f: &Kernel<F>,
    g: &Kernel<F>,
) -> F {
    let product = fubini_product(p_x, p_y);
    let lhs = kleisli_apply(&spatial_compose(f, g), &product).expect("aligned by construction");
    let rhs = fubini_product(
        &kleisli_apply(f, p_x).expect("aligned by construction"),
        &kleisli_apply(g, p_y).expect("aligned by construction"),
    );
    lhs.max_abs_diff(&rhs)
}

/// Max deviation of `T pi_{YxZ} . (ext (.) p)` from
/// `(i . <eta_Y, f>) (.) (T pi_Y . p)`: the created marginal depends on `p`
/// only through its marginal on `Y`.
pub fn check_marginal_locality<F: Scalar>(
    p: &FiniteDist<F>,
    x_size: usize,
    f: &Kernel<F>,
) -> F {
    let y_size = f.from.size;
    let z_size = f.to.size;
    assert_eq!(p.over.size, x_size * y_size, "joint state size mismatch");
    let x_set = FiniteSet::new("X", x_size);
    let ext = ext_map(f, &x_set);
    let reshaped = FiniteDist::raw(ext.from.clone(), p.weights.clone());
    let extended = kleisli_apply(&ext, &reshaped).expect("aligned by construction");
    let lhs = extended.marginal(&[x_size, y_size, z_size], &[1, 2], "YxZ");
    let p_y = {
        let m = p.marginal(&[x_size, y_size], &[1], "Y");
        FiniteDist::raw(f.from.clone(), m.weights)
    };
    let rhs = kleisli_apply(&pair_extension(f), &p_y).expect("aligned by construction");
    lhs.max_abs_diff(&rhs)
}

/// Max deviation of `T pi_{XxY} . (ext (.) p)` from `p`: extension preserves
/// the original state (this is where `T 1 ~ 1`, i.e. weight normalization,
/// enters).
pub fn check_state_preservation<F: Scalar>(
    p: &FiniteDist<F>,
    x_size: usize,
    f: &Kernel<F>,
) -> F {
    let y_size = f.from.size;
    let z_size = f.to.size;
    assert_eq!(p.over.size, x_size * y_size, "joint state size mismatch");
    let x_set = FiniteSet::new("X", x_size);
    let ext = ext_map(f, &x_set);
    let reshaped = FiniteDist::raw(ext.from.clone(), p.weights.clone());
    let extended = kleisli_apply(&ext, &reshaped).expect("aligned by construction");
    let lhs = extended.marginal(&[x_size, y_size, z_size], &[0, 1], "XxY");
    lhs.max_abs_diff(&FiniteDist::raw(lhs.over.clone(), p.weights.clone()))
}

/// Per-law maximum deviations found by [`check_strength_diagrams`].
#[derive(Clone, Debug)]
pub struct StrengthDiagramReport<F: Scalar> {
    /// `dst . (id x eta) = cst`
    pub unit_costrength: F,
    /// `dst' . (eta x id) = st`
    pub unit_strength: F,
    /// `T pi_X . dst = pi_TX`
    pub left_projection: F,
    /// `T pi_Y . dst' = pi_TY`
    pub right_projection: F,
    /// `dst = dst' = fubini` (commutativity of the instance)
    pub commutativity: F,
}

impl<F: Scalar> StrengthDiagramReport<F> {
    pub fn max_deviation(&self) -> F {
        self.unit_costrength
            .max(self.unit_strength)
            .max(self.left_projection)
            .max(self.right_projection)
            .max(self.commutativity)
    }

    pub fn all_within(&self, tol: F) -> bool {
        self.max_deviation() <= tol
    }
}

/// Deterministic test family generating `T X` for the distribution monad:
/// all point masses, the uniform distribution, and a normalized ramp. The
/// laws are linear in each `T`-argument, so the point masses alone already
/// decide them; the mixtures exercise the same identities away from the
/// simplex vertices.
pub fn test_family<F: Scalar>(over: &FiniteSet) -> Vec<FiniteDist<F>> {
    let mut family: Vec<FiniteDist<F>> =
        (0..over.size).map(|x| FiniteDist::point(over.clone(), x)).collect();
    family.push(FiniteDist::uniform(over.clone()));
    let total: f64 = (1..=over.size).map(|k| k as f64).sum();
    let ramp: Vec<F> = (1..=over.size).map(|k| F::of(k as f64 / total)).collect();
    family.push(FiniteDist::raw(over.clone(), ramp));
    family
}

/// Evaluates the strength/costrength diagram laws for the distribution
/// monad on sets of the given sizes, over the deterministic test family
/// plus any `extra` values (which may be deliberately non-stochastic to
/// exercise the fault paths).
pub fn check_strength_diagrams<F: Scalar>(
    x_size: usize,
    y_size: usize,
    extra: &[FiniteDist<F>],
) -> StrengthDiagramReport<F> {
    type M = DistributionMonad;
    let x_set = FiniteSet::new("X", x_size);
    let y_set = FiniteSet::new("Y", y_size);
    let mut s_family = test_family::<F>(&x_set);
    let mut t_family = test_family::<F>(&y_set);
    for e in extra {
        if e.over.size == x_size {
            s_family.push(FiniteDist::raw(x_set.clone(), e.weights.clone()));
        }
        if e.over.size == y_size {
            t_family.push(FiniteDist::raw(y_set.clone(), e.weights.clone()));
        }
    }

    let mut unit_costrength = F::zero();
    let mut unit_strength = F::zero();
    let mut left_projection = F::zero();
    let mut right_projection = F::zero();
    let mut commutativity = F::zero();

    for s in &s_family {
        for y in 0..y_size {
            let via_dst = dst::<F, M>(s, &<M as MonadOps<F>>::unit(&y_set, y));
            let direct = costrength::<F, M>(s, &y_set, y);
            unit_costrength = unit_costrength.max(via_dst.max_abs_diff(&direct));
        }
    }
    for t in &t_family {
        for x in 0..x_size {
            let via_dst = dst_prime::<F, M>(&<M as MonadOps<F>>::unit(&x_set, x), t);
            let direct = strength::<F, M>(&x_set, x, t);
            unit_strength = unit_strength.max(via_dst.max_abs_diff(&direct));
        }
    }
    for s in &s_family {
        for t in &t_family {
            let left = dst::<F, M>(s, t);
            let right = dst_prime::<F, M>(s, t);
            let fub = <M as MonadOps<F>>::fubini(s, t);
            commutativity = commutativity
                .max(left.max_abs_diff(&right))
                .max(left.max_abs_diff(&fub));
            let proj_x = <M as MonadOps<F>>::map(&left, &x_set, &|k| k / y_size);
            left_projection = left_projection.max(proj_x.max_abs_diff(s));
            let proj_y = <M as MonadOps<F>>::map(&right, &y_set, &|k| k % y_size);
            right_projection = right_projection.max(proj_y.max_abs_diff(t));
        }
    }

    StrengthDiagramReport {
        unit_costrength,
        unit_strength,
        left_projection,
        right_projection,
        commutativity,
    }
}

/// Max deviation across the three monad laws for the distribution instance
/// on a set of the given size, over the deterministic test family:
/// `join . map(unit) = id`, `join . unit = id`, and associativity of `join`.
pub fn check_monad_laws<F: Scalar>(size: usize) -> F {
    type M = DistributionMonad;
    let x_set = FiniteSet::new("X", size);
    let family = test_family::<F>(&x_set);
    let mut worst = F::zero();

    for t in &family {
        // join . map(unit) = id : T(eta)(t) is t over indices with inner units
        let inner: Vec<FiniteDist<F>> =
            (0..size).map(|x| <M as MonadOps<F>>::unit(&x_set, x)).collect();
        let lhs = <M as MonadOps<F>>::join(t, &inner);
        worst = worst.max(lhs.max_abs_diff(t));

        // join . unit = id : point mass on t, joined
        let one = FiniteSet::new("1", 1);
        let outer = <M as MonadOps<F>>::unit(&one, 0);
        let lhs = <M as MonadOps<F>>::join(&outer, std::slice::from_ref(t));
        worst = worst.max(lhs.max_abs_diff(t));
    }

    // associativity on a nested family: outer r over M, middles p_m over K,
    // inners q_{m,k} over X
    let m_set = FiniteSet::new("M", family.len().min(3));
    let k_set = FiniteSet::new("K", family.len().min(3));
    let r = FiniteDist::<F>::uniform(m_set.clone());
    let middles: Vec<FiniteDist<F>> = test_family::<F>(&k_set)
        .into_iter()
        .take(m_set.size)
        .collect();
    let inners: Vec<Vec<FiniteDist<F>>> = (0..m_set.size)
        .map(|m| {
            (0..k_set.size)
                .map(|k| family[(m + k) % family.len()].clone())
                .collect()
        })
        .collect();
    // path A: mu . T(mu)
    let collapsed: Vec<FiniteDist<F>> = (0..m_set.size)
        .map(|m| <M as MonadOps<F>>::join(&middles[m], &inners[m]))
        .collect();
    let path_a = <M as MonadOps<F>>::join(&r, &collapsed);
    // path B: mu . mu — flatten the outer two layers to pairs (m,k)
    let pair_set = m_set.product(&k_set);
    let mut pair_weights = Vec::with_capacity(pair_set.size);
    let mut pair_inners = Vec::with_capacity(pair_set.size);
    for m in 0..m_set.size {
        for k in 0..k_set.size {
            pair_weights.push(r.weights[m] * middles[m].weights[k]);
            pair_inners.push(inners[m][k].clone());
        }
    }
    let path_b =
        <M as MonadOps<F>>::join(&FiniteDist::raw(pair_set, pair_weights), &pair_inners);
    worst.max(path_a.max_abs_diff(&path_b))
}
