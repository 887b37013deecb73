//! Commutative-monad machinery over finite sets: the abstract interface, the
//! finite distribution instance, Kleisli composition, Fubini products,
//! extension maps, and the Markov-chain builder.
//!
//! Product sets are flattened row-major with the last factor fastest, so all
//! equality checks are plain entrywise comparisons. Weights are never
//! renormalized silently.

pub mod checks;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A finite carrier set with a display label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSet {
    pub label: String,
    pub size: usize,
}

impl FiniteSet {
    pub fn new(label: impl Into<String>, size: usize) -> Self {
        assert!(size >= 1, "finite sets must be nonempty");
        Self { label: label.into(), size }
    }

    /// Cartesian product, sizes multiplied, labels joined.
    pub fn product(&self, other: &Self) -> Self {
        Self { label: format!("{}x{}", self.label, other.label), size: self.size * other.size }
    }

    pub fn product_all(sets: &[FiniteSet]) -> Self {
        let label = sets.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join("x");
        let size = sets.iter().map(|s| s.size).product();
        Self { label, size }
    }
}

/// Probability vector over a finite set. The weights sum to one within
/// `1e-12` for honestly constructed values; checkers accept raw vectors so
/// injected faults surface as reported violations.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDist<F: Scalar> {
    pub over: FiniteSet,
    pub weights: Vec<F>,
}

impl<F: Scalar> FiniteDist<F> {
    /// Validated constructor: weights nonnegative, summing to 1 within tol.
    pub fn new(over: FiniteSet, weights: Vec<F>) -> Result<Self> {
        if weights.len() != over.size {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for set of size {}",
                weights.len(),
                over.size
            )));
        }
        if weights.iter().any(|w| *w < -F::of(1e-12)) {
            return Err(Error::InvalidInput("negative probability weight".into()));
        }
        let sum: F = weights.iter().copied().sum();
        if (sum - F::one()).abs() > F::of(1e-12) * F::of(weights.len() as f64) {
            return Err(Error::InvalidInput(format!(
                "weights sum to {} instead of 1",
                sum.as_f64()
            )));
        }
        Ok(Self { over, weights })
    }

    /// Unchecked constructor for checker inputs (possibly invalid on purpose).
    pub fn raw(over: FiniteSet, weights: Vec<F>) -> Self {
        assert_eq!(weights.len(), over.size);
        Self { over, weights }
    }

    /// Point mass at `x`.
    pub fn point(over: FiniteSet, x: usize) -> Self {
        assert!(x < over.size);
        let mut weights = vec![F::zero(); over.size];
        weights[x] = F::one();
        Self { over, weights }
    }

    pub fn uniform(over: FiniteSet) -> Self {
        let w = F::one() / F::of(over.size as f64);
        let weights = vec![w; over.size];
        Self { over, weights }
    }

    /// Explicit renormalization (never done silently).
    pub fn renormalized(&self) -> Result<Self> {
        let sum: F = self.weights.iter().copied().sum();
        if sum <= F::zero() {
            return Err(Error::InvalidInput("cannot renormalize zero mass".into()));
        }
        Ok(Self {
            over: self.over.clone(),
            weights: self.weights.iter().map(|&w| w / sum).collect(),
        })
    }

    /// Marginal onto the chosen coordinates of a product structure
    /// with the given factor sizes (ascending coordinate order kept).
    pub fn marginal(&self, sizes: &[usize], keep: &[usize], label: &str) -> Self {
        let total: usize = sizes.iter().product();
        assert_eq!(total, self.over.size, "marginal factor sizes mismatch");
        let keep: Vec<usize> = {
            let mut k = keep.to_vec();
            k.sort_unstable();
            k.dedup();
            k
        };
        let out_size: usize = keep.iter().map(|&k| sizes[k]).product();
        let mut weights = vec![F::zero(); out_size];
        for (flat, &w) in self.weights.iter().enumerate() {
            let idx = unravel(sizes, flat);
            let kept: Vec<usize> = keep.iter().map(|&k| idx[k]).collect();
            let kept_sizes: Vec<usize> = keep.iter().map(|&k| sizes[k]).collect();
            weights[ravel(&kept_sizes, &kept)] += w;
        }
        Self { over: FiniteSet::new(label, out_size), weights }
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        assert_eq!(self.weights.len(), other.weights.len(), "distribution size mismatch");
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (*a - *b).abs())
            .fold(F::zero(), F::max)
    }

    pub fn l1_distance(&self, other: &Self) -> F {
        assert_eq!(self.weights.len(), other.weights.len(), "distribution size mismatch");
        self.weights.iter().zip(&other.weights).map(|(a, b)| (*a - *b).abs()).sum()
    }
}

pub fn unravel(sizes: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0usize; sizes.len()];
    for k in (0..sizes.len()).rev() {
        idx[k] = flat % sizes[k];
        flat /= sizes[k];
    }
    idx
}

pub fn ravel(sizes: &[usize], idx: &[usize]) -> usize {
    let mut flat = 0usize;
    for (k, &d) in sizes.iter().enumerate() {
        flat = flat * d + idx[k];
    }
    flat
}

/// Row-stochastic kernel: one distribution per source element. Kleisli
/// morphism `from -> T to` of the distribution monad, i.e. a transition
/// matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<F: Scalar> {
    pub from: FiniteSet,
    pub to: FiniteSet,
    pub rows: Vec<FiniteDist<F>>,
}

impl<F: Scalar> Kernel<F> {
    pub fn new(from: FiniteSet, to: FiniteSet, rows: Vec<FiniteDist<F>>) -> Result<Self> {
        if rows.len() != from.size {
            return Err(Error::ShapeMismatch(format!(
                "{} rows for source of size {}",
                rows.len(),
                from.size
            )));
        }
        for row in &rows {
            if row.over.size != to.size {
                return Err(Error::ShapeMismatch(format!(
                    "row over size {} does not match target size {}",
                    row.over.size, to.size
                )));
            }
        }
        Ok(Self { from, to, rows })
    }

    /// Identity kernel (the monad unit as a Kleisli morphism).
    pub fn identity(over: FiniteSet) -> Self {
        let rows = (0..over.size).map(|x| FiniteDist::point(over.clone(), x)).collect();
        Self { from: over.clone(), to: over, rows }
    }

    /// Constant kernel: outputs the fixed state `v` no matter what the input
    /// is (factoring through the terminal object).
    pub fn constant(from: FiniteSet, v: FiniteDist<F>) -> Self {
        let rows = vec![v.clone(); from.size];
        Self { from, to: v.over, rows }
    }

    pub fn apply(&self, p: &FiniteDist<F>) -> Result<FiniteDist<F>> {
        kleisli_apply(self, p)
    }
}

/// Abstract commutative-monad interface: enough structure to write the
/// kernel, extension, and Markov-chain machinery once, generically.
///
/// `TValue` is an element of `T X` for a finite carrier `X`. `T(T X)` is
/// represented by an outer `TValue` over an index set together with the list
/// of indexed inner values, which is exactly what Kleisli extension
/// consumes. The distribution monad is the shipped instance; another
/// instance only needs these five maps and the laws checked in
/// [`checks::check_strength_diagrams`].
pub trait MonadOps<F: Scalar> {
    type TValue: Clone + std::fmt::Debug;

    /// The carrier set a value lives over.
    fn carrier(t: &Self::TValue) -> FiniteSet;

    /// Unit `eta_X(x)`.
    fn unit(over: &FiniteSet, x: usize) -> Self::TValue;

    /// Functor action `T h` along `h: X -> Y`.
    fn map(t: &Self::TValue, to: &FiniteSet, h: &dyn Fn(usize) -> usize) -> Self::TValue;

    /// Multiplication `mu` applied to `T f (outer)` where `f(i) = inner[i]`:
    /// the Kleisli extension ingredient `mu . T f`.
    fn join(outer: &Self::TValue, inner: &[Self::TValue]) -> Self::TValue;

    /// The Fubini map `i_{X,Y}: T X x T Y -> T(X x Y)`.
    fn fubini(a: &Self::TValue, b: &Self::TValue) -> Self::TValue;
}

/// The finite distribution monad.
pub struct DistributionMonad;

impl<F: Scalar> MonadOps<F> for DistributionMonad {
    type TValue = FiniteDist<F>;

    fn carrier(t: &FiniteDist<F>) -> FiniteSet {
        t.over.clone()
    }

    fn unit(over: &FiniteSet, x: usize) -> FiniteDist<F> {
        FiniteDist::point(over.clone(), x)
    }

    fn map(t: &FiniteDist<F>, to: &FiniteSet, h: &dyn Fn(usize) -> usize) -> FiniteDist<F> {
        let mut weights = vec![F::zero(); to.size];
        for (x, &w) in t.weights.iter().enumerate() {
            weights[h(x)] += w;
        }
        FiniteDist { over: to.clone(), weights }
    }

    fn join(outer: &FiniteDist<F>, inner: &[FiniteDist<F>]) -> FiniteDist<F> {
        assert_eq!(outer.over.size, inner.len(), "join arity mismatch");
        let over = inner[0].over.clone();
        let mut weights = vec![F::zero(); over.size];
        for (i, &w) in outer.weights.iter().enumerate() {
            if w == F::zero() {
                continue;
            }
            for (y, &q) in inner[i].weights.iter().enumerate() {
                weights[y] += w * q;
            }
        }
        FiniteDist { over, weights }
    }

    fn fubini(a: &FiniteDist<F>, b: &FiniteDist<F>) -> FiniteDist<F> {
        let over = a.over.product(&b.over);
        let mut weights = Vec::with_capacity(over.size);
        for &wa in &a.weights {
            for &wb in &b.weights {
                weights.push(wa * wb);
            }
        }
        FiniteDist { over, weights }
    }
}

// -- derived strength structure, generic over the monad ---------------------

/// Strength `st_{X,Y}: X x T Y -> T(X x Y)` at the point `x`.
pub fn strength<F: Scalar, M: MonadOps<F>>(
    x_set: &FiniteSet,
    x: usize,
    t: &M::TValue,
) -> M::TValue {
    let y_set = M::carrier(t);
    let prod = x_set.product(&y_set);
    let ysize = y_set.size;
    M::map(t, &prod, &move |y| x * ysize + y)
}

/// Costrength `cst_{X,Y}: T X x Y -> T(X x Y)` at the point `y`.
pub fn costrength<F: Scalar, M: MonadOps<F>>(
    t: &M::TValue,
    y_set: &FiniteSet,
    y: usize,
) -> M::TValue {
    let x_set = M::carrier(t);
    let prod = x_set.product(y_set);
    let ysize = y_set.size;
    M::map(t, &prod, &move |x| x * ysize + y)
}

/// Left Fubini map `dst = mu . T(st) . cst_{X,TY}` built from the strength.
pub fn dst<F: Scalar, M: MonadOps<F>>(s: &M::TValue, t: &M::TValue) -> M::TValue {
    let x_set = M::carrier(s);
    let inner: Vec<M::TValue> =
        (0..x_set.size).map(|x| strength::<F, M>(&x_set, x, t)).collect();
    M::join(s, &inner)
}

/// Right Fubini map `dst' = mu . T(cst) . st_{TX,Y}` built from the
/// costrength.
pub fn dst_prime<F: Scalar, M: MonadOps<F>>(s: &M::TValue, t: &M::TValue) -> M::TValue {
    let y_set = M::carrier(t);
    let inner: Vec<M::TValue> =
        (0..y_set.size).map(|y| costrength::<F, M>(s, &y_set, y)).collect();
    M::join(t, &inner)
}

// -- Kleisli machinery -------------------------------------------------------

/// Kleisli composition `g after f`: `(g . f)(x) = mu(T g (f x))`.
pub fn kleisli_compose<F: Scalar>(g: &Kernel<F>, f: &Kernel<F>) -> Result<Kernel<F>> {
    if f.to != g.from {
        return Err(Error::ChainMismatch(format!(
            "cannot compose: intermediate sets {:?} vs {:?}",
            f.to, g.from
        )));
    }
    let rows = f
        .rows
        .iter()
        .map(|row| DistributionMonad::join(row, &g.rows))
        .collect();
    Ok(Kernel { from: f.from.clone(), to: g.to.clone(), rows })
}

/// Action of a kernel on a state, `f . p` with `p: 1 ->_kl X`.
pub fn kleisli_apply<F: Scalar>(f: &Kernel<F>, p: &FiniteDist<F>) -> Result<FiniteDist<F>> {
    if p.over != f.from {
        return Err(Error::ChainMismatch(format!(
            "state over {:?} does not match kernel source {:?}",
            p.over, f.from
        )));
    }
    Ok(DistributionMonad::join(p, &f.rows))
}

/// Product state via the Fubini map: weights `(x,y) -> p(x) q(y)`.
pub fn fubini_product<F: Scalar>(p: &FiniteDist<F>, q: &FiniteDist<F>) -> FiniteDist<F> {
    DistributionMonad::fubini(p, q)
}

/// Spatial composition `f (x) g := i . (f x g)`, a kernel between product
/// sets.
pub fn spatial_compose<F: Scalar>(f: &Kernel<F>, g: &Kernel<F>) -> Kernel<F> {
    let from = f.from.product(&g.from);
    let to = f.to.product(&g.to);
    let mut rows = Vec::with_capacity(from.size);
    for x in 0..f.from.size {
        for y in 0..g.from.size {
            rows.push(DistributionMonad::fubini(&f.rows[x], &g.rows[y]));
        }
    }
    Kernel { from, to, rows }
}

/// Extension map along `f: Y -> T Z` with a spectator `X`:
/// `ext = i_{X, Y x Z} . (eta_X x (i_{Y,Z} . <eta_Y, f>))`, concretely
/// `ext((x,y))((x',y',z)) = [x'=x][y'=y] f(y)(z)`.
pub fn ext_map<F: Scalar>(f: &Kernel<F>, x_set: &FiniteSet) -> Kernel<F> {
    let y_set = f.from.clone();
    let from = x_set.product(&y_set);
    let to = x_set.product(&y_set).product(&f.to);
    let mut rows = Vec::with_capacity(from.size);
    for x in 0..x_set.size {
        for y in 0..y_set.size {
            // eta_X(x) (x) (i_{Y,Z} . <eta_Y, f>)(y)
            let left = FiniteDist::point(x_set.clone(), x);
            let mid = DistributionMonad::fubini(&FiniteDist::point(y_set.clone(), y), &f.rows[y]);
            rows.push(DistributionMonad::fubini(&left, &mid));
        }
    }
    Kernel { from, to, rows }
}

/// Markov-chain specification: an initial state and chained kernels.
#[derive(Clone, Debug)]
pub struct MarkovChainSpec<F: Scalar> {
    pub initial: FiniteDist<F>,
    pub kernels: Vec<Kernel<F>>,
}

impl<F: Scalar> MarkovChainSpec<F> {
    pub fn new(initial: FiniteDist<F>, kernels: Vec<Kernel<F>>) -> Result<Self> {
        let mut prev = &initial.over;
        for (i, k) in kernels.iter().enumerate() {
            if &k.from != prev {
                return Err(Error::ChainMismatch(format!(
                    "kernel {} source {:?} does not follow {:?}",
                    i, k.from, prev
                )));
            }
            prev = &k.to;
        }
        Ok(Self { initial, kernels })
    }

    pub fn len(&self) -> usize {
        self.kernels.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sizes of the chain alphabets `X_1, ..., X_n`.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![self.initial.over.size];
        s.extend(self.kernels.iter().map(|k| k.to.size));
        s
    }

    /// Truncation to the first `k` variables.
    pub fn truncated(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.len());
        Self { initial: self.initial.clone(), kernels: self.kernels[..k - 1].to_vec() }
    }
}

/// Builds the joint state of a Markov chain by iterated extension.
///
/// The result lives over `X_1 x ... x X_n` and equals the closed form
/// `p(x_1,..,x_n) = p_1(x_1) prod_i f_i(x_{i-1})(x_i)` exactly.
pub fn build_markov_chain<F: Scalar>(spec: &MarkovChainSpec<F>) -> Result<FiniteDist<F>> {
    // revalidate chaining so raw-constructed specs fail loudly
    let mut prev = &spec.initial.over;
    for (i, k) in spec.kernels.iter().enumerate() {
        if &k.from != prev {
            return Err(Error::ChainMismatch(format!(
                "kernel {} source {:?} does not follow {:?}",
                i, k.from, prev
            )));
        }
        prev = &k.to;
    }
    let mut joint = spec.initial.clone();
    let mut sizes = vec![spec.initial.over.size];
    for (i, f) in spec.kernels.iter().enumerate() {
        if i == 0 {
            // i_{X1,X2} . <eta_X1, f_2> applied under Kleisli composition
            let pair = pair_extension(f);
            joint = kleisli_apply(&pair, &joint)?;
        } else {
            let spectator_size: usize = sizes[..sizes.len() - 1].iter().product();
            let spectator = FiniteSet::new("head", spectator_size);
            let ext = ext_map(f, &spectator);
            // reshape: joint is over head x Y with Y the last alphabet
            let reshaped = FiniteDist::raw(
                spectator.product(&f.from),
                joint.weights.clone(),
            );
            joint = kleisli_apply(&ext, &reshaped)?;
        }
        sizes.push(f.to.size);
    }
    let label_sets: Vec<FiniteSet> = std::iter::once(spec.initial.over.clone())
        .chain(spec.kernels.iter().map(|k| k.to.clone()))
        .collect();
    Ok(FiniteDist::raw(FiniteSet::product_all(&label_sets), joint.weights))
}

/// Kernel `y -> i_{Y,Z}(<eta_Y, f>): Y ->_kl Y x Z` pairing the input with
/// its image.
pub fn pair_extension<F: Scalar>(f: &Kernel<F>) -> Kernel<F> {
    let from = f.from.clone();
    let to = f.from.product(&f.to);
    let rows = (0..from.size)
        .map(|y| {
            DistributionMonad::fubini(&FiniteDist::point(from.clone(), y), &f.rows[y])
        })
        .collect();
    Kernel { from, to, rows }
}

/// Closed-form Markov joint distribution, the independent oracle for
/// [`build_markov_chain`].
pub fn markov_closed_form<F: Scalar>(spec: &MarkovChainSpec<F>) -> FiniteDist<F> {
    let sizes = spec.sizes();
    let total: usize = sizes.iter().product();
    let mut weights = vec![F::zero(); total];
    for flat in 0..total {
        let idx = unravel(&sizes, flat);
        let mut w = spec.initial.weights[idx[0]];
        for (i, f) in spec.kernels.iter().enumerate() {
            w *= f.rows[idx[i]].weights[idx[i + 1]];
        }
        weights[flat] = w;
    }
    let label_sets: Vec<FiniteSet> = std::iter::once(spec.initial.over.clone())
        .chain(spec.kernels.iter().map(|k| k.to.clone()))
        .collect();
    FiniteDist::raw(FiniteSet::product_all(&label_sets), weights)
}

/// Outcome of the classical extension problem for a pair of bipartite
/// distributions overlapping on the middle variable.
#[derive(Clone, Debug)]
pub enum ClassicalExtension<F: Scalar> {
    /// Extension exists; marginals of the returned triple reproduce the
    /// inputs.
    Extension(FiniteDist<F>),
    /// Necessary condition failed: the two marginals on the shared variable
    /// differ by the reported L1 distance.
    Incompatible { l1_gap: F },
}

/// Solves the classical extension problem for `p_XY` and `p_YZ` via the
/// conditional-product construction `p(x,y,z) = p_{Z|Y}(y)(z) p_XY(x,y)`.
///
/// Rows of the conditional at `p_Y(y) = 0` are uniform; any choice works
/// there because it is multiplied by zero, and the uniform row is the
/// deterministic canonical one.
pub fn classical_extension<F: Scalar>(
    p_xy: &FiniteDist<F>,
    p_yz: &FiniteDist<F>,
    x_size: usize,
    y_size: usize,
    z_size: usize,
    tol: F,
) -> Result<ClassicalExtension<F>> {
    if p_xy.over.size != x_size * y_size || p_yz.over.size != y_size * z_size {
        return Err(Error::ShapeMismatch("factor sizes do not match the inputs".into()));
    }
    let y_from_xy = p_xy.marginal(&[x_size, y_size], &[1], "Y");
    let y_from_yz = p_yz.marginal(&[y_size, z_size], &[0], "Y");
    let gap = y_from_xy.l1_distance(&y_from_yz);
    if gap > tol {
        return Ok(ClassicalExtension::Incompatible { l1_gap: gap });
    }
    // conditional p_{Z|Y}
    let mut conditional = vec![vec![F::one() / F::of(z_size as f64); z_size]; y_size];
    for y in 0..y_size {
        let py = y_from_yz.weights[y];
        if py > F::zero() {
            for z in 0..z_size {
                conditional[y][z] = p_yz.weights[y * z_size + z] / py;
            }
        }
    }
    let mut weights = vec![F::zero(); x_size * y_size * z_size];
    for x in 0..x_size {
        for y in 0..y_size {
            let wxy = p_xy.weights[x * y_size + y];
            for z in 0..z_size {
                weights[(x * y_size + y) * z_size + z] = conditional[y][z] * wxy;
            }
        }
    }
    Ok(ClassicalExtension::Extension(FiniteDist::raw(
        FiniteSet::new("XxYxZ", x_size * y_size * z_size),
        weights,
    )))
}
