//! Contextual integrals and their consistency checks, the bijection between
//! POPT states and unentangled frame functions (both directions), and
//! per-context valuations over product characters.

use num_complex::Complex;
use num_traits::Zero;

use crate::contexts::{refinement_map, ProductContext};
use crate::error::{Error, Result};
use crate::linalg::{ComplexOperator, RealLeastSquares, UnitVector};
use crate::popt::PoptState;
use crate::scalar::{Scalar, C};

/// A contextual-integral sample point: a product context, an element of its
/// span, and the assigned real value.
#[derive(Clone, Debug)]
pub struct TableEntry<F: Scalar> {
    pub context: ProductContext<F>,
    pub element: ComplexOperator<F>,
    pub value: F,
}

/// Finite table of integral values keyed by canonicalized contexts.
#[derive(Clone, Debug)]
pub struct IntegralTable<F: Scalar> {
    pub dims: Vec<usize>,
    pub entries: Vec<TableEntry<F>>,
}

/// Functional evaluated per product context: backed either by a POPT state
/// (evaluation mode) or by a finite value table (table mode).
#[derive(Clone, Debug)]
pub enum ContextualIntegral<F: Scalar> {
    State(PoptState<F>),
    Table(IntegralTable<F>),
}

/// Evaluates the integral of `a` at the product context `pc` for the state
/// backing: `I(a) = tr(w a)`.
///
/// The element must be Hermitian and inside the span of the product
/// context; the integral is only defined contextwise.
pub fn integral_evaluate<F: Scalar>(
    state: &PoptState<F>,
    pc: &ProductContext<F>,
    a: &ComplexOperator<F>,
    tol: F,
) -> Result<F> {
    let defect = a.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian(defect.as_f64()));
    }
    let induced = pc.induced();
    if induced.dim() != state.op().side() {
        return Err(Error::DimensionMismatch(format!(
            "context dim {} vs state side {}",
            induced.dim(),
            state.op().side()
        )));
    }
    let (_, residual) = induced.span_coefficients(&a.with_dims(vec![induced.dim()])?);
    if residual > tol {
        return Err(Error::OutsideSpan(residual.as_f64()));
    }
    let v = state.op().hs_inner(&a.with_dims(state.op().dims().to_vec())?);
    debug_assert!(v.im.abs() < F::of(1e-10));
    Ok(v.re)
}

/// One violation found by [`integral_check_family`].
#[derive(Clone, Debug)]
pub enum Violation<F: Scalar> {
    /// Entry with an identity element whose value is not 1.
    Normalization { entry: usize, deviation: F },
    /// Entries with `element_k = element_i + element_j` in one context whose
    /// values do not add up.
    Linearity { lhs: (usize, usize), rhs: usize, deviation: F },
    /// Entry with a positive semidefinite element and a negative value.
    Positivity { entry: usize, value: F },
    /// Equal elements in comparable (or equal) contexts with different
    /// values.
    Naturality { coarse: usize, fine: usize, deviation: F },
}

/// Report of [`integral_check_family`]: all detected violations plus the
/// dimension flag for the Gleason-type uniqueness hypothesis (a factor of
/// dimension below three).
#[derive(Clone, Debug)]
pub struct FamilyReport<F: Scalar> {
    pub violations: Vec<Violation<F>>,
    pub gleason_dim_warning: bool,
    pub entries_checked: usize,
    pub comparable_pairs: usize,
}

impl<F: Scalar> FamilyReport<F> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies per-context normalization, linearity on supplied span samples,
/// positivity on supplied positive elements, and naturality across all
/// comparable context pairs in the table. Violations are reported, not
/// thrown.
pub fn integral_check_family<F: Scalar>(table: &IntegralTable<F>, tol: F) -> FamilyReport<F> {
    let mut report = FamilyReport {
        violations: Vec::new(),
        gleason_dim_warning: table.dims.iter().any(|&d| d < 3),
        entries_checked: table.entries.len(),
        comparable_pairs: 0,
    };
    let side: usize = table.dims.iter().product();
    let eye = ComplexOperator::<F>::identity(table.dims.clone());
    let entries = &table.entries;
    let scale = F::of(side as f64);

    for (k, e) in entries.iter().enumerate() {
        if e.element.sub(&eye).frobenius_norm() <= tol * scale {
            let dev = (e.value - F::one()).abs();
            if dev > tol * scale {
                report.violations.push(Violation::Normalization { entry: k, deviation: dev });
            }
        }
        if let Ok(eig) = e.element.eigh_with_tol(F::of(1e-6)) {
            let min = eig.values.last().copied().unwrap_or(F::zero());
            if min >= -tol && e.value < -tol {
                report.violations.push(Violation::Positivity { entry: k, value: e.value });
            }
        }
    }

    // group entries by context (canonical-form equality)
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    'outer: for (k, e) in entries.iter().enumerate() {
        for (rep, members) in groups.iter_mut() {
            if entries[*rep].context.approx_eq(&e.context, tol.max(F::of(1e-8))) {
                members.push(k);
                continue 'outer;
            }
        }
        groups.push((k, vec![k]));
    }

    // linearity within each context group
    for (_, members) in &groups {
        for (a, &i) in members.iter().enumerate() {
            for &j in members.iter().skip(a) {
                let sum = entries[i].element.add(&entries[j].element);
                for &k in members {
                    if k == i || k == j {
                        continue;
                    }
                    if entries[k].element.sub(&sum).frobenius_norm() <= tol * scale {
                        let dev =
                            (entries[i].value + entries[j].value - entries[k].value).abs();
                        if dev > tol * scale {
                            report.violations.push(Violation::Linearity {
                                lhs: (i, j),
                                rhs: k,
                                deviation: dev,
                            });
                        }
                    }
                }
            }
        }
    }

    // naturality across comparable group pairs (including well-definedness
    // inside one group): equal elements must carry equal values
    let group_list: Vec<&Vec<usize>> = groups.iter().map(|(_, m)| m).collect();
    for (gi, mi) in group_list.iter().enumerate() {
        for (gj, mj) in group_list.iter().enumerate() {
            if gj < gi {
                continue;
            }
            let ci = &entries[mi[0]].context;
            let cj = &entries[mj[0]].context;
            let comparable = if gi == gj {
                true
            } else {
                matches!(ci.leq(cj, tol), Ok(true)) || matches!(cj.leq(ci, tol), Ok(true))
            };
            if !comparable {
                continue;
            }
            if gi != gj {
                report.comparable_pairs += 1;
            }
            for &i in mi.iter() {
                for &j in mj.iter() {
                    if gi == gj && j <= i {
                        continue;
                    }
                    if entries[i].element.sub(&entries[j].element).frobenius_norm()
                        <= tol * scale
                    {
                        let dev = (entries[i].value - entries[j].value).abs();
                        if dev > tol * scale {
                            report.violations.push(Violation::Naturality {
                                coarse: i,
                                fine: j,
                                deviation: dev,
                            });
                        }
                    }
                }
            }
        }
    }

    report
}

/// Unentangled frame function of unit weight: evaluator over product unit
/// vectors, `f(v_1 (x) ... (x) v_n) = tr((p_1 (x) ... (x) p_n) w)`.
#[derive(Clone, Debug)]
pub struct FrameFunction<F: Scalar> {
    op: ComplexOperator<F>,
    weight: F,
}

impl<F: Scalar> FrameFunction<F> {
    pub fn op(&self) -> &ComplexOperator<F> {
        &self.op
    }

    pub fn weight(&self) -> F {
        self.weight
    }

    /// Evaluates on per-factor unit vectors.
    pub fn evaluate(&self, vs: &[UnitVector<F>]) -> F {
        crate::popt::product_overlap(&self.op, vs)
    }

    /// Sum of values over the product basis `(basis_1) (x) ... (x) (basis_n)`
    /// given per-factor orthonormal bases.
    pub fn basis_sum(&self, bases: &[Vec<UnitVector<F>>]) -> F {
        let counts: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let total: usize = counts.iter().product();
        let mut acc = F::zero();
        for flat in 0..total {
            let idx = crate::monad::unravel(&counts, flat);
            let vs: Vec<UnitVector<F>> =
                idx.iter().enumerate().map(|(f, &i)| bases[f][i].clone()).collect();
            acc += self.evaluate(&vs);
        }
        acc
    }
}

/// The frame function of a certified POPT state (the state-to-function
/// direction of the bijection). Errors if the state is not certified.
pub fn frame_function_from_state<F: Scalar>(state: &PoptState<F>) -> Result<FrameFunction<F>> {
    state.require_certified()?;
    Ok(FrameFunction { op: state.op().clone(), weight: F::one() })
}

/// The canonical informationally complete rank-1 family in dimension `d`:
/// `|i><i|`, then `|e+_ij>` with `e+_ij = (|i>+|j>)/sqrt(2)` for `i<j`, then
/// `|ey_ij>` with `ey_ij = (|i>+i|j>)/sqrt(2)` for `i<j` — `d^2` vectors.
pub fn ic_vectors<F: Scalar>(d: usize) -> Vec<UnitVector<F>> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(UnitVector::basis(d, i));
    }
    let half = F::of(0.5).sqrt();
    for i in 0..d {
        for j in (i + 1)..d {
            let mut entries = vec![C::<F>::zero(); d];
            entries[i] = Complex::new(half, F::zero());
            entries[j] = Complex::new(half, F::zero());
            out.push(UnitVector::new(entries).expect("nonzero"));
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut entries = vec![C::<F>::zero(); d];
            entries[i] = Complex::new(half, F::zero());
            entries[j] = Complex::new(F::zero(), half);
            out.push(UnitVector::new(entries).expect("nonzero"));
        }
    }
    out
}

/// A product-projector value record: one rank-1 projector per factor plus
/// the assigned value.
#[derive(Clone, Debug)]
pub struct ProjectorValue<F: Scalar> {
    pub factors: Vec<UnitVector<F>>,
    pub value: F,
}

/// Labels the Hermitian coordinate basis used by the reconstruction, for
/// rank-deficiency diagnostics.
fn hermitian_basis_label(side: usize, m: usize) -> String {
    let diag = side;
    let off = side * (side - 1) / 2;
    if m < diag {
        return format!("diag({m})");
    }
    let mut t = m - diag;
    let block = if t < off { "re" } else { "im" };
    if t >= off {
        t -= off;
    }
    let mut count = t;
    for k in 0..side {
        for l in (k + 1)..side {
            if count == 0 {
                return format!("{block}({k},{l})");
            }
            count -= 1;
        }
    }
    format!("basis({m})")
}

/// Orthonormal Hermitian basis element `m` of the `side x side` matrices:
/// diagonal units, then symmetric pairs, then antisymmetric (imaginary)
/// pairs, both in `(k,l)` lexicographic order.
fn hermitian_basis_element<F: Scalar>(side: usize, m: usize) -> ComplexOperator<F> {
    let mut out = ComplexOperator::zeros(vec![side]);
    let diag = side;
    let off = side * (side - 1) / 2;
    let half = F::of(0.5).sqrt();
    if m < diag {
        out.set(m, m, Complex::new(F::one(), F::zero()));
        return out;
    }
    let mut t = m - diag;
    let imag = t >= off;
    if imag {
        t -= off;
    }
    let mut count = t;
    for k in 0..side {
        for l in (k + 1)..side {
            if count == 0 {
                if imag {
                    out.set(k, l, Complex::new(F::zero(), half));
                    out.set(l, k, Complex::new(F::zero(), -half));
                } else {
                    out.set(k, l, Complex::new(half, F::zero()));
                    out.set(l, k, Complex::new(half, F::zero()));
                }
                return out;
            }
            count -= 1;
        }
    }
    unreachable!("basis index out of range")
}

/// Reconstructs the unique Hermitian operator matching the supplied product
/// projector values, by solving the induced real linear system.
///
/// Errors when the value set does not determine the operator (naming the
/// undetermined directions) or when the values are inconsistent (residual
/// above `residual_tol`).
pub fn reconstruct_state<F: Scalar>(
    dims: &[usize],
    values: &[ProjectorValue<F>],
    residual_tol: F,
) -> Result<ComplexOperator<F>> {
    let side: usize = dims.iter().product();
    let unknowns = side * side;
    if values.is_empty() {
        return Err(Error::RankDeficient("empty value table".into()));
    }
    let mut system = RealLeastSquares::<F>::new(values.len(), unknowns);
    let mut rhs = Vec::with_capacity(values.len());
    let basis: Vec<ComplexOperator<F>> =
        (0..unknowns).map(|m| hermitian_basis_element(side, m)).collect();
    for (r, record) in values.iter().enumerate() {
        if record.factors.len() != dims.len() {
            return Err(Error::ShapeMismatch(format!(
                "record {} has {} factors, expected {}",
                r,
                record.factors.len(),
                dims.len()
            )));
        }
        for (v, &d) in record.factors.iter().zip(dims) {
            if v.dim() != d {
                return Err(Error::ShapeMismatch(format!(
                    "record {} factor dimension {} does not match {}",
                    r,
                    v.dim(),
                    d
                )));
            }
        }
        let parts: Vec<ComplexOperator<F>> =
            record.factors.iter().map(|v| v.projector()).collect();
        let refs: Vec<&ComplexOperator<F>> = parts.iter().collect();
        let projector = ComplexOperator::tensor_all(&refs).with_dims(vec![side])?;
        for (m, b) in basis.iter().enumerate() {
            // tr(Pi B_m) is real for Hermitian Pi and B_m
            system.set(r, m, projector.hs_inner(b).re);
        }
        rhs.push(record.value);
    }
    let cutoff = F::of(crate::SPAN_CUTOFF);
    let solved = system.solve(&rhs, cutoff)?;
    if !solved.null_directions.is_empty() {
        let mut names: Vec<String> = Vec::new();
        for dir in solved.null_directions.iter().take(8) {
            let (m, _) = dir
                .iter()
                .enumerate()
                .map(|(m, c)| (m, c.abs()))
                .fold((0, F::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
            names.push(hermitian_basis_label(side, m));
        }
        names.sort();
        names.dedup();
        return Err(Error::RankDeficient(names.join(", ")));
    }
    if solved.residual > residual_tol {
        return Err(Error::InconsistentValues(solved.residual.as_f64()));
    }
    let mut out = ComplexOperator::zeros(vec![side]);
    for (m, b) in basis.iter().enumerate() {
        out = out.add(&b.scale(Complex::new(solved.solution[m], F::zero())));
    }
    out.with_dims(dims.to_vec())
}

/// Evaluates a frame function on the canonical informationally complete
/// product family and reconstructs the backing operator.
pub fn reconstruct_from_frame_function<F: Scalar>(
    f: &FrameFunction<F>,
    dims: &[usize],
    residual_tol: F,
) -> Result<ComplexOperator<F>> {
    let values = canonical_ic_values(dims, |vs| f.evaluate(vs));
    reconstruct_state(dims, &values, residual_tol)
}

/// Builds the canonical IC product family over `dims` and tags each member
/// with the value supplied by the evaluator.
pub fn canonical_ic_values<F: Scalar>(
    dims: &[usize],
    mut eval: impl FnMut(&[UnitVector<F>]) -> F,
) -> Vec<ProjectorValue<F>> {
    let per_factor: Vec<Vec<UnitVector<F>>> = dims.iter().map(|&d| ic_vectors::<F>(d)).collect();
    let counts: Vec<usize> = per_factor.iter().map(|f| f.len()).collect();
    let total: usize = counts.iter().product();
    let mut out = Vec::with_capacity(total);
    for flat in 0..total {
        let idx = crate::monad::unravel(&counts, flat);
        let factors: Vec<UnitVector<F>> =
            idx.iter().enumerate().map(|(f, &i)| per_factor[f][i].clone()).collect();
        let value = eval(&factors);
        out.push(ProjectorValue { factors, value });
    }
    out
}

/// Probability weights over the product characters of a product context.
#[derive(Clone, Debug)]
pub struct ContextValuation<F: Scalar> {
    pub context: ProductContext<F>,
    pub weights: Vec<F>,
}

impl<F: Scalar> ContextValuation<F> {
    /// Measure of a set of characters (flat indices): the induced valuation
    /// on subsets, additive by construction so the modular law
    /// `v(U) + v(V) = v(U or V) + v(U and V)` holds exactly.
    pub fn measure(&self, subset: &[usize]) -> F {
        let mut seen = vec![false; self.weights.len()];
        let mut acc = F::zero();
        for &k in subset {
            if !seen[k] {
                seen[k] = true;
                acc += self.weights[k];
            }
        }
        acc
    }

    pub fn total(&self) -> F {
        self.weights.iter().copied().sum()
    }

    /// Marginal valuation on a subset of the components (ascending order).
    pub fn marginal(&self, keep: &[usize]) -> Result<ContextValuation<F>> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(Error::EmptyFactorSet);
        }
        let sizes: Vec<usize> = self.context.components().iter().map(|c| c.len()).collect();
        for &k in &keep {
            if k >= sizes.len() {
                return Err(Error::InvalidFactor { index: k, nfactors: sizes.len() });
            }
        }
        let kept_components: Vec<_> =
            keep.iter().map(|&k| self.context.components()[k].clone()).collect();
        let context = ProductContext::new(kept_components)?;
        let kept_sizes: Vec<usize> = keep.iter().map(|&k| sizes[k]).collect();
        let mut weights = vec![F::zero(); kept_sizes.iter().product()];
        for (flat, &w) in self.weights.iter().enumerate() {
            let idx = crate::monad::unravel(&sizes, flat);
            let kept_idx: Vec<usize> = keep.iter().map(|&k| idx[k]).collect();
            weights[crate::monad::ravel(&kept_sizes, &kept_idx)] += w;
        }
        Ok(ContextValuation { context, weights })
    }
}

/// The valuation of a certified POPT state at a product context:
/// `w(i_1,...,i_n) = tr(w (P_{i_1} (x) ... (x) P_{i_n}))`, with negative
/// values inside the tolerance band clipped to zero.
pub fn valuation_of<F: Scalar>(
    state: &PoptState<F>,
    pc: &ProductContext<F>,
    tol: F,
) -> Result<ContextValuation<F>> {
    state.require_certified()?;
    let side: usize = pc.total_dim();
    if side != state.op().side() {
        return Err(Error::DimensionMismatch(format!(
            "context dim {} vs state side {}",
            side,
            state.op().side()
        )));
    }
    let n = pc.character_count();
    let flat_op = state.op().with_dims(vec![side])?;
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let idx = pc.character_index(k);
        let projector = pc.product_projector(&idx).with_dims(vec![side])?;
        let w = flat_op.hs_inner(&projector).re;
        if w < -tol {
            return Err(Error::NotCertified(format!(
                "negative character weight {:.3e} contradicts certification",
                w.as_f64()
            )));
        }
        weights.push(w.max(F::zero()));
    }
    Ok(ContextValuation { context: pc.clone(), weights })
}

/// Restriction of a valuation along context inclusion: weights summed along
/// the refinement map onto a componentwise-coarser product context.
pub fn valuation_pushforward<F: Scalar>(
    v: &ContextValuation<F>,
    coarser: &ProductContext<F>,
    tol: F,
) -> Result<ContextValuation<F>> {
    if coarser.components().len() != v.context.components().len() {
        return Err(Error::IncomparableContexts(format!(
            "component counts {} vs {}",
            coarser.components().len(),
            v.context.components().len()
        )));
    }
    let mut maps = Vec::with_capacity(coarser.components().len());
    for (fine, coarse) in v.context.components().iter().zip(coarser.components()) {
        maps.push(refinement_map(fine, coarse, tol)?);
    }
    let fine_sizes: Vec<usize> = v.context.components().iter().map(|c| c.len()).collect();
    let coarse_sizes: Vec<usize> = coarser.components().iter().map(|c| c.len()).collect();
    let mut weights = vec![F::zero(); coarse_sizes.iter().product()];
    for (flat, &w) in v.weights.iter().enumerate() {
        let idx = crate::monad::unravel(&fine_sizes, flat);
        let coarse_idx: Vec<usize> = idx.iter().enumerate().map(|(c, &i)| maps[c][i]).collect();
        weights[crate::monad::ravel(&coarse_sizes, &coarse_idx)] += w;
    }
    Ok(ContextValuation { context: coarser.clone(), weights })
}
