//! Positive-over-pure-tensor (POPT) states: numerical certification of
//! positivity over pure tensors by see-saw minimization plus an independent
//! sampling oracle, product-structure tests, and the extremality heuristic
//! for the two certified extremal families (pure states and their partial
//! transposes).

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexOperator, UnitVector};
use crate::sample::random_product_vectors;
use crate::scalar::Scalar;

/// Certification status of an operator with respect to positivity over pure
/// tensors. Refutations always carry a re-checkable witness.
#[derive(Clone, Debug)]
pub enum Certification<F: Scalar> {
    /// Best overlap found stayed above the certification threshold across
    /// all restarts and the sampling oracle.
    CertifiedPopt { min_overlap: F, witness: Vec<UnitVector<F>> },
    /// A product vector with overlap below the refutation threshold.
    Refuted { value: F, witness: Vec<UnitVector<F>> },
    /// Best value fell between the refutation and certification thresholds.
    Unknown { best_value: F },
}

impl<F: Scalar> Certification<F> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::CertifiedPopt { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Certification::Refuted { .. })
    }
}

/// Hermitian unit-trace operator together with its certification record.
#[derive(Clone, Debug)]
pub struct PoptState<F: Scalar> {
    op: ComplexOperator<F>,
    certification: Certification<F>,
}

impl<F: Scalar> PoptState<F> {
    pub fn op(&self) -> &ComplexOperator<F> {
        &self.op
    }

    pub fn certification(&self) -> &Certification<F> {
        &self.certification
    }

    pub fn is_certified(&self) -> bool {
        self.certification.is_certified()
    }

    /// Errors unless the state is certified.
    pub fn require_certified(&self) -> Result<()> {
        match &self.certification {
            Certification::CertifiedPopt { .. } => Ok(()),
            Certification::Refuted { value, .. } => Err(Error::NotCertified(format!(
                "refuted with product overlap {:.3e}",
                value.as_f64()
            ))),
            Certification::Unknown { best_value } => Err(Error::NotCertified(format!(
                "undecided at best value {:.3e}",
                best_value.as_f64()
            ))),
        }
    }
}

/// Tuning knobs for see-saw certification.
#[derive(Clone, Debug)]
pub struct PoptConfig<F: Scalar> {
    /// Independent seeded see-saw restarts.
    pub restarts: usize,
    /// Cap on see-saw sweeps per restart.
    pub max_sweeps: usize,
    /// Convergence: stop once the per-sweep improvement drops below this.
    pub sweep_tol: F,
    /// Product states drawn by the supplementary sampling oracle.
    pub samples: usize,
    /// Refutation threshold (asymmetric with certification so values at an
    /// exact zero minimum do not flip-flop).
    pub refute_tol: F,
    /// Certification threshold.
    pub cert_tol: F,
}

impl<F: Scalar> Default for PoptConfig<F> {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_sweeps: 500,
            sweep_tol: F::of(1e-12),
            samples: 10_000,
            refute_tol: F::of(1e-8),
            cert_tol: F::of(1e-9),
        }
    }
}

impl<F: Scalar> PoptConfig<F> {
    /// Lighter configuration for inner loops over many states.
    pub fn fast() -> Self {
        Self { restarts: 16, samples: 2_000, ..Self::default() }
    }
}

/// Real product overlap `<v_1 .. v_n| A |v_1 .. v_n>` evaluated by
/// contracting all but the last factor.
pub fn product_overlap<F: Scalar>(op: &ComplexOperator<F>, vs: &[UnitVector<F>]) -> F {
    debug_assert_eq!(op.nfactors(), vs.len());
    let last = op.nfactors() - 1;
    let m = op.contract_except(last, vs).expect("factor index in range");
    m.expectation(&vs[last]).re
}

/// One see-saw run from the given starting product vectors. Cyclically fixes
/// all factors but one and replaces that factor with the minimal eigenvector
/// of the contracted operator, so the value is nonincreasing sweep to sweep.
fn see_saw_run<F: Scalar>(
    op: &ComplexOperator<F>,
    mut vs: Vec<UnitVector<F>>,
    max_sweeps: usize,
    sweep_tol: F,
) -> (F, Vec<UnitVector<F>>) {
    let n = op.nfactors();
    let mut value = product_overlap(op, &vs);
    for _ in 0..max_sweeps {
        for i in 0..n {
            let mut m = op.contract_except(i, &vs).expect("factor index in range");
            m = m.add(&m.adjoint()).scale_re(F::of(0.5));
            let eig = m.eigh_with_tol(F::of(1e-6)).expect("contraction is Hermitian");
            vs[i] = eig.vectors.last().expect("nonempty spectrum").clone();
        }
        let new_value = product_overlap(op, &vs);
        let improvement = value - new_value;
        value = new_value;
        if improvement < sweep_tol {
            break;
        }
    }
    (value, vs)
}

/// Local minimum of the product overlap of a Hermitian multi-factor
/// operator: best value over `restarts` seeded see-saw runs together with
/// the minimizing product vectors. Ties between restarts resolve to the
/// earliest one.
///
/// Errors on fewer than two factors (use a plain eigenvalue there) and on
/// non-Hermitian input.
pub fn min_product_overlap<F: Scalar, R: Rng>(
    op: &ComplexOperator<F>,
    restarts: usize,
    max_sweeps: usize,
    sweep_tol: F,
    rng: &mut R,
) -> Result<(F, Vec<UnitVector<F>>)> {
    if op.nfactors() < 2 {
        return Err(Error::InvalidInput(
            "product overlap needs at least two factors; use a plain eigenvalue".into(),
        ));
    }
    let defect = op.hermiticity_defect();
    if defect > F::of(crate::DEFAULT_TOL) {
        return Err(Error::NotHermitian(defect.as_f64()));
    }
    let mut best: Option<(F, Vec<UnitVector<F>>)> = None;
    for _ in 0..restarts.max(1) {
        let start = random_product_vectors(op.dims(), rng);
        let (value, vs) = see_saw_run(op, start, max_sweeps, sweep_tol);
        match &best {
            Some((b, _)) if value >= *b => {}
            _ => best = Some((value, vs)),
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Independent sampling oracle: minimum overlap over `samples` random
/// product states.
pub fn sample_min_overlap<F: Scalar, R: Rng>(
    op: &ComplexOperator<F>,
    samples: usize,
    rng: &mut R,
) -> (F, Vec<UnitVector<F>>) {
    let mut best_value = F::infinity();
    let mut best_vs: Vec<UnitVector<F>> = Vec::new();
    for _ in 0..samples {
        let vs = random_product_vectors(op.dims(), rng);
        let value = product_overlap(op, &vs);
        if value < best_value {
            best_value = value;
            best_vs = vs;
        }
    }
    (best_value, best_vs)
}

/// Certifies or refutes positivity over pure tensors.
///
/// Refuted when any see-saw restart or oracle sample dips below
/// `-refute_tol` (the witness vector is stored); certified when everything
/// stays above `-cert_tol`; the in-between band yields `Unknown`.
///
/// Errors on non-Hermitian or non-unit-trace input. Single-factor operators
/// are certified directly from the spectrum.
pub fn certify_popt<F: Scalar, R: Rng>(
    op: &ComplexOperator<F>,
    config: &PoptConfig<F>,
    rng: &mut R,
) -> Result<PoptState<F>> {
    let defect = op.hermiticity_defect();
    if defect > F::of(crate::DEFAULT_TOL) {
        return Err(Error::NotHermitian(defect.as_f64()));
    }
    let tr = op.trace();
    if (tr.re - F::one()).abs() > F::of(1e-8) || tr.im.abs() > F::of(1e-8) {
        return Err(Error::NotAState(format!(
            "trace is {:+.3e}{:+.3e}i, expected 1",
            tr.re.as_f64(),
            tr.im.as_f64()
        )));
    }
    if op.nfactors() < 2 {
        let eig = op.eigh()?;
        let min = *eig.values.last().expect("nonempty spectrum");
        let witness = vec![eig.vectors.last().expect("nonempty spectrum").clone()];
        let certification = if min < -config.refute_tol {
            Certification::Refuted { value: min, witness }
        } else if min >= -config.cert_tol {
            Certification::CertifiedPopt { min_overlap: min, witness }
        } else {
            Certification::Unknown { best_value: min }
        };
        return Ok(PoptState { op: op.clone(), certification });
    }

    let (saw_value, saw_vs) =
        min_product_overlap(op, config.restarts, config.max_sweeps, config.sweep_tol, rng)?;
    let (sample_value, sample_vs) = if config.samples > 0 {
        sample_min_overlap(op, config.samples, rng)
    } else {
        (F::infinity(), Vec::new())
    };
    let (best_value, witness) = if sample_value < saw_value {
        (sample_value, sample_vs)
    } else {
        (saw_value, saw_vs)
    };

    let certification = if best_value < -config.refute_tol {
        Certification::Refuted { value: best_value, witness }
    } else if best_value >= -config.cert_tol {
        Certification::CertifiedPopt { min_overlap: best_value, witness }
    } else {
        Certification::Unknown { best_value }
    };
    Ok(PoptState { op: op.clone(), certification })
}

/// Product test across a bipartition of the factors: returns
/// `(delta <= tol, delta)` with `delta = |w - w_A (x) w_B|_F` where the
/// marginals follow the cut.
pub fn is_product<F: Scalar>(
    op: &ComplexOperator<F>,
    cut_a: &[usize],
    tol: F,
) -> Result<(bool, F)> {
    let n = op.nfactors();
    let mut a: Vec<usize> = cut_a.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() {
        return Err(Error::EmptyFactorSet);
    }
    for &k in &a {
        if k >= n {
            return Err(Error::InvalidFactor { index: k, nfactors: n });
        }
    }
    let b: Vec<usize> = (0..n).filter(|k| !a.contains(k)).collect();
    if b.is_empty() {
        return Err(Error::InvalidInput("cut must be a proper bipartition".into()));
    }
    let wa = op.partial_trace(&a)?;
    let wb = op.partial_trace(&b)?;
    let prod = wa.tensor(&wb);
    // permute the product back to the original factor order
    let concat: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
    let mut perm = vec![0usize; n];
    for (pos_in_concat, &orig) in concat.iter().enumerate() {
        perm[orig] = pos_in_concat;
    }
    let prod = prod.permute_factors(&perm)?;
    let delta = op.sub(&prod).frobenius_norm();
    Ok((delta <= tol, delta))
}

/// Verdict of the extremality heuristic for bipartite POPT states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremalClass {
    /// Rank one: a pure state.
    ExtremalPure,
    /// A single partial transpose is rank one.
    ExtremalPtPure,
    /// No extremality decision attempted.
    Undecided,
}

/// Classifies a certified bipartite POPT state into the two extremal
/// families that are certified here (pure states and partial transposes of
/// pure states); anything else is `Undecided`.
pub fn is_extremal_popt_heuristic<F: Scalar>(state: &PoptState<F>) -> Result<ExtremalClass> {
    state.require_certified()?;
    let op = state.op();
    if op.nfactors() != 2 {
        return Err(Error::InvalidInput("extremality heuristic is bipartite only".into()));
    }
    if numeric_rank(op)? == 1 {
        return Ok(ExtremalClass::ExtremalPure);
    }
    let pt = op.partial_transpose(1)?;
    if numeric_rank(&pt)? == 1 {
        return Ok(ExtremalClass::ExtremalPtPure);
    }
    Ok(ExtremalClass::Undecided)
}

/// Rank with eigenvalues below `1e-8` of the largest treated as zero.
pub fn numeric_rank<F: Scalar>(op: &ComplexOperator<F>) -> Result<usize> {
    let eig = op.eigh()?;
    let top = eig.values.iter().map(|l| l.abs()).fold(F::zero(), F::max);
    if top == F::zero() {
        return Ok(0);
    }
    Ok(eig.values.iter().filter(|l| l.abs() > top * F::of(1e-8)).count())
}

/// Descending operator-Schmidt singular values of a bipartite operator:
/// the singular values of the realignment `M[(rx,cx),(ry,cy)] = w[(rx,ry),(cx,cy)]`.
/// The operator is product exactly when only one is nonzero.
pub fn operator_schmidt_values<F: Scalar>(op: &ComplexOperator<F>) -> Result<Vec<F>> {
    if op.nfactors() != 2 {
        return Err(Error::InvalidInput("operator Schmidt values are bipartite only".into()));
    }
    let dx = op.dims()[0];
    let dy = op.dims()[1];
    let (rows, cols) = (dx * dx, dy * dy);
    let mut m = vec![num_complex::Complex::new(F::zero(), F::zero()); rows * cols];
    for rx in 0..dx {
        for cx in 0..dx {
            for ry in 0..dy {
                for cy in 0..dy {
                    m[(rx * dx + cx) * cols + (ry * dy + cy)] =
                        op.get(rx * dy + ry, cx * dy + cy);
                }
            }
        }
    }
    // Jordan-Wielandt embedding [[0, M], [M^†, 0]]: eigenvalues are +-sigma,
    // so small singular values come out at absolute machine precision
    // instead of the square-rooted accuracy of a Gram matrix.
    let n = rows + cols;
    let mut h = ComplexOperator::<F>::zeros(vec![n]);
    for r in 0..rows {
        for c in 0..cols {
            h.set(r, rows + c, m[r * cols + c]);
            h.set(rows + c, r, m[r * cols + c].conj());
        }
    }
    let eig = h.eigh_with_tol(F::of(1e-6))?;
    let k = rows.min(cols);
    let mut sv: Vec<F> = eig.values.iter().take(k).map(|l| l.max(F::zero())).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(sv)
}

/// Second operator-Schmidt value relative to the first; `> threshold` means
/// nonproduct.
pub fn schmidt_nonproduct_ratio<F: Scalar>(op: &ComplexOperator<F>) -> Result<F> {
    let sv = operator_schmidt_values(op)?;
    if sv.is_empty() || sv[0] == F::zero() {
        return Ok(F::zero());
    }
    Ok(sv.get(1).copied().unwrap_or(F::zero()) / sv[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{
        classically_correlated, maximally_entangled_state, random_density,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn overlap_of_scalar_operator() {
        let w = ComplexOperator::<f64>::identity(vec![3, 3]).scale_re(1.0 / 9.0);
        let mut r = rng(1);
        let (v, _) = min_product_overlap(&w, 4, 100, 1e-12, &mut r).unwrap();
        assert!((v - 1.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn overlap_rejects_single_factor() {
        let w = ComplexOperator::<f64>::identity1(3).scale_re(1.0 / 3.0);
        let mut r = rng(2);
        assert!(min_product_overlap(&w, 4, 100, 1e-12, &mut r).is_err());
    }

    #[test]
    fn pt_maxent_overlap_is_zero() {
        let w = maximally_entangled_state::<f64>(3);
        let pt = w.partial_transpose(1).unwrap();
        let mut r = rng(3);
        let (v, vs) = min_product_overlap(&pt, 16, 300, 1e-13, &mut r).unwrap();
        // analytic minimum: <ab|SWAP|ab>/3 = |<a|b>|^2/3 >= 0, reaching 0
        assert!(v.abs() < 1e-9, "value {v}");
        // witness orthogonality: |<a|b>| ~ 0
        let ip = vs[0].inner(&vs[1]).norm();
        assert!(ip < 1e-4, "witness vectors not orthogonal: {ip}");
    }

    #[test]
    fn maxent_overlap_is_zero() {
        let w = maximally_entangled_state::<f64>(3);
        let mut r = rng(4);
        let (v, _) = min_product_overlap(&w, 16, 300, 1e-13, &mut r).unwrap();
        // <ab|Phi+><Phi+|ab> = |<conj(a)|b>|^2 / 3, minimized at 0
        assert!(v.abs() < 1e-9, "value {v}");
    }

    #[test]
    fn grid_oracle_agrees_on_pt_maxent() {
        // dense deterministic grid over parameterized product pairs
        let w = maximally_entangled_state::<f64>(3);
        let pt = w.partial_transpose(1).unwrap();
        let mut grid_min = f64::INFINITY;
        let steps = 6;
        for ia in 0..3 {
            for ib in 0..3 {
                if ia == ib {
                    continue;
                }
                for t in 0..=steps {
                    let theta = std::f64::consts::FRAC_PI_2 * t as f64 / steps as f64;
                    // a = |ia>, b = cos(theta)|ia> + sin(theta)|ib>
                    let a = UnitVector::<f64>::basis(3, ia);
                    let mut entries = vec![num_complex::Complex::new(0.0, 0.0); 3];
                    entries[ia] = num_complex::Complex::new(theta.cos(), 0.0);
                    entries[ib] = num_complex::Complex::new(theta.sin(), 0.0);
                    let b = UnitVector::new(entries).unwrap();
                    let val = product_overlap(&pt, &[a, b]);
                    grid_min = grid_min.min(val);
                    // analytic formula check: |<a|b>|^2/3
                    let expect = theta.cos().powi(2) / 3.0;
                    assert!((val - expect).abs() < 1e-12);
                }
            }
        }
        let mut r = rng(5);
        let (v, _) = min_product_overlap(&pt, 16, 300, 1e-13, &mut r).unwrap();
        assert!((v - grid_min).abs() < 1e-4);
    }

    #[test]
    fn certify_density_operators() {
        let mut r = rng(6);
        let rho = random_density::<f64, _>(&[3, 3], &mut r);
        let cfg = PoptConfig::fast();
        let state = certify_popt(&rho, &cfg, &mut r).unwrap();
        assert!(state.is_certified());
    }

    #[test]
    fn certify_pt_of_entangled_pure() {
        let w = maximally_entangled_state::<f64>(3);
        let pt = w.partial_transpose(1).unwrap();
        let mut r = rng(7);
        let state = certify_popt(&pt, &PoptConfig::fast(), &mut r).unwrap();
        assert!(state.is_certified(), "{:?}", state.certification());
        // negative eigenvalue while POPT-certified
        let eig = pt.eigh().unwrap();
        assert!((eig.values.last().unwrap() + 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn refute_block_positivity_violator() {
        // I/9 - |Phi+><Phi+|/2, renormalized to unit trace
        let eye = ComplexOperator::<f64>::identity(vec![3, 3]).scale_re(1.0 / 9.0);
        let w = maximally_entangled_state::<f64>(3);
        let raw = eye.sub(&w.scale_re(0.5));
        let tr = raw.trace().re;
        let op = raw.scale_re(1.0 / tr);
        let mut r = rng(8);
        let state = certify_popt(&op, &PoptConfig::fast(), &mut r).unwrap();
        match state.certification() {
            Certification::Refuted { value, witness } => {
                assert!(*value < -1e-8);
                // witness is re-checkable by direct evaluation
                let direct = product_overlap(&op, witness);
                assert!((direct - value).abs() < 1e-12);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn certify_rejects_bad_trace() {
        let op = ComplexOperator::<f64>::identity(vec![2, 2]);
        let mut r = rng(9);
        assert!(matches!(
            certify_popt(&op, &PoptConfig::fast(), &mut r),
            Err(Error::NotAState(_))
        ));
    }

    #[test]
    fn local_unitary_invariance_of_overlap() {
        let mut r = rng(10);
        let rho = random_density::<f64, _>(&[2, 2], &mut r);
        let basis_u = crate::sample::random_orthonormal_basis::<f64, _>(2, &mut r);
        let basis_v = crate::sample::random_orthonormal_basis::<f64, _>(2, &mut r);
        // U = sum_k |b_k><k|
        let mut u = ComplexOperator::<f64>::zeros(vec![2]);
        let mut v = ComplexOperator::<f64>::zeros(vec![2]);
        for k in 0..2 {
            for row in 0..2 {
                u.set(row, k, basis_u[k].entries()[row]);
                v.set(row, k, basis_v[k].entries()[row]);
            }
        }
        let uv = u.tensor(&v);
        let rotated = uv.matmul(&rho.with_dims(vec![2, 2]).unwrap()).matmul(&uv.adjoint());
        let (a, _) = min_product_overlap(&rho, 24, 300, 1e-13, &mut r).unwrap();
        let (b, _) = min_product_overlap(&rotated, 24, 300, 1e-13, &mut r).unwrap();
        assert!((a - b).abs() < 1e-7, "{a} vs {b}");
    }

    #[test]
    fn product_state_overlap_is_product_of_min_eigenvalues() {
        let mut r = rng(11);
        let rho_a = random_density::<f64, _>(&[2], &mut r);
        let rho_b = random_density::<f64, _>(&[3], &mut r);
        let prod = rho_a.tensor(&rho_b);
        let (v, _) = min_product_overlap(&prod, 24, 300, 1e-13, &mut r).unwrap();
        let la = *rho_a.eigh().unwrap().values.last().unwrap();
        let lb = *rho_b.eigh().unwrap().values.last().unwrap();
        assert!((v - la * lb).abs() < 1e-9);
    }

    #[test]
    fn overlap_bounded_below_by_min_eigenvalue() {
        for seed in 20..25u64 {
            let mut r = rng(seed);
            let rho = random_density::<f64, _>(&[3, 3], &mut r);
            let (v, _) = min_product_overlap(&rho, 16, 300, 1e-13, &mut r).unwrap();
            let min_eig = *rho.eigh().unwrap().values.last().unwrap();
            assert!(v >= min_eig - 1e-10, "overlap {v} below spectrum floor {min_eig}");
        }
    }

    #[test]
    fn is_product_on_products_and_entangled() {
        let mut r = rng(12);
        let rho = random_density::<f64, _>(&[2], &mut r);
        let sigma = random_density::<f64, _>(&[3], &mut r);
        let prod = rho.tensor(&sigma);
        let (ok, delta) = is_product(&prod, &[0], 1e-10).unwrap();
        assert!(ok);
        assert!(delta < 1e-12);

        let w = maximally_entangled_state::<f64>(3);
        let (ok, delta) = is_product(&w, &[0], 1e-10).unwrap();
        assert!(!ok);
        // |Phi+><Phi+| - I/9 has Frobenius norm sqrt(8/9)
        assert!((delta - (8.0f64 / 9.0).sqrt()).abs() < 1e-12);

        let cc = classically_correlated::<f64>(3);
        let (ok, _) = is_product(&cc, &[0], 1e-10).unwrap();
        assert!(!ok);
    }

    #[test]
    fn is_product_rejects_bad_cuts() {
        let w = maximally_entangled_state::<f64>(3);
        assert!(is_product(&w, &[], 1e-10).is_err());
        assert!(is_product(&w, &[0, 1], 1e-10).is_err());
        assert!(is_product(&w, &[5], 1e-10).is_err());
    }

    #[test]
    fn extremality_classification() {
        let mut r = rng(13);
        let cfg = PoptConfig::fast();

        let pure = crate::sample::random_pure_state::<f64, _>(&[3, 3], &mut r);
        let s = certify_popt(&pure, &cfg, &mut r).unwrap();
        assert_eq!(is_extremal_popt_heuristic(&s).unwrap(), ExtremalClass::ExtremalPure);

        let pt = pure.partial_transpose(1).unwrap();
        let s = certify_popt(&pt, &cfg, &mut r).unwrap();
        assert_eq!(is_extremal_popt_heuristic(&s).unwrap(), ExtremalClass::ExtremalPtPure);

        let mixed = ComplexOperator::<f64>::identity(vec![3, 3]).scale_re(1.0 / 9.0);
        let s = certify_popt(&mixed, &cfg, &mut r).unwrap();
        assert_eq!(is_extremal_popt_heuristic(&s).unwrap(), ExtremalClass::Undecided);
    }

    #[test]
    fn schmidt_values_detect_product_structure() {
        let mut r = rng(14);
        let rho = random_density::<f64, _>(&[2], &mut r);
        let sigma = random_density::<f64, _>(&[3], &mut r);
        let prod = rho.tensor(&sigma);
        assert!(schmidt_nonproduct_ratio(&prod).unwrap() < 1e-10);
        let w = maximally_entangled_state::<f64>(3);
        assert!(schmidt_nonproduct_ratio(&w).unwrap() > 0.5);
    }

    #[test]
    fn single_precision_instantiation() {
        let mut r = rng(16);
        let w = ComplexOperator::<f32>::identity(vec![2, 2]).scale_re(0.25);
        let cfg = PoptConfig::<f32> {
            restarts: 4,
            samples: 100,
            sweep_tol: 1e-6,
            cert_tol: 1e-4,
            refute_tol: 1e-3,
            max_sweeps: 100,
        };
        let state = certify_popt(&w, &cfg, &mut r).unwrap();
        assert!(state.is_certified());
        let eig = w.eigh_with_tol(1e-5f32).unwrap();
        assert!((eig.values[0] - 0.25).abs() < 1e-6);
    }

    #[test]
    fn partial_trace_of_certified_popt_certifies() {
        // PT of a pure entangled tripartite-marginal scenario: build a POPT
        // state on 3x3, tensor a qutrit, trace it back out
        let mut r = rng(15);
        let w = maximally_entangled_state::<f64>(3).partial_transpose(1).unwrap();
        let tau = random_density::<f64, _>(&[3], &mut r);
        let big = w.tensor(&tau);
        let back = big.partial_trace(&[0, 1]).unwrap();
        let s = certify_popt(&back, &PoptConfig::fast(), &mut r).unwrap();
        assert!(s.is_certified());
    }
}
