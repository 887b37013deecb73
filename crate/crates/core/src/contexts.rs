//! Contexts: unital commutative subalgebras represented by projective
//! decompositions of identity, their inclusion order, intersections, and
//! product contexts on multi-factor spaces.
//!
//! Contexts are supplied explicitly and never enumerated; the poset of all
//! contexts is a continuum, while every construction here only ever
//! evaluates at finitely many of them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{ComplexOperator, UnitVector};
use crate::scalar::{Scalar, C};

/// Ordered partition of identity into nonzero mutually orthogonal projectors
/// on one tensor factor. The commutative algebra is the span of the
/// projectors.
///
/// Projectors are kept in canonical order: descending rank, ties by the
/// lexicographic order of the phase-normalized leading eigenvector.
#[derive(Clone, Debug)]
pub struct Context<F: Scalar> {
    dim: usize,
    projectors: Vec<ComplexOperator<F>>,
}

/// Ordered list of per-factor contexts; the induced decomposition by tensor
/// products of component projectors is itself a valid context on the product
/// dimension.
#[derive(Clone, Debug)]
pub struct ProductContext<F: Scalar> {
    components: Vec<Context<F>>,
}

/// Character (point of the spectrum) of a finite-dimensional commutative
/// algebra presented by a partition: one per minimal projector,
/// `chi(a) = tr(P a) / tr(P)`.
#[derive(Clone, Debug)]
pub struct Character<F: Scalar> {
    projector: ComplexOperator<F>,
    rank: usize,
}

impl<F: Scalar> Character<F> {
    pub fn evaluate(&self, a: &ComplexOperator<F>) -> C<F> {
        self.projector.hs_inner(a) / Complex::new(F::of(self.rank as f64), F::zero())
    }

    pub fn projector(&self) -> &ComplexOperator<F> {
        &self.projector
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

fn default_tol<F: Scalar>() -> F {
    F::of(crate::DEFAULT_TOL)
}

impl<F: Scalar> Context<F> {
    /// Validates and canonicalizes a partition of identity.
    pub fn new(dim: usize, projectors: Vec<ComplexOperator<F>>) -> Result<Self> {
        Self::with_tol(dim, projectors, default_tol())
    }

    pub fn with_tol(dim: usize, projectors: Vec<ComplexOperator<F>>, tol: F) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::InvalidContext("no projectors supplied".into()));
        }
        for (k, p) in projectors.iter().enumerate() {
            if p.side() != dim {
                return Err(Error::InvalidContext(format!(
                    "projector {} has side {}, expected {}",
                    k,
                    p.side(),
                    dim
                )));
            }
            if !p.is_hermitian(tol) {
                return Err(Error::InvalidContext(format!("projector {} is not Hermitian", k)));
            }
            let idem = p.matmul(p).sub(p).frobenius_norm();
            if idem > tol {
                return Err(Error::InvalidContext(format!(
                    "projector {} is not idempotent (defect {:.3e})",
                    k,
                    idem.as_f64()
                )));
            }
            if p.frobenius_norm() <= tol {
                return Err(Error::InvalidContext(format!("projector {} is zero", k)));
            }
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let cross = projectors[i].matmul(&projectors[j]).frobenius_norm();
                if cross > tol {
                    return Err(Error::InvalidContext(format!(
                        "projectors {} and {} are not orthogonal (|PQ| = {:.3e})",
                        i,
                        j,
                        cross.as_f64()
                    )));
                }
            }
        }
        let mut sum = ComplexOperator::zeros(vec![dim]);
        for p in &projectors {
            sum = sum.add(&p.with_dims(vec![dim])?);
        }
        let defect = sum.sub(&ComplexOperator::identity1(dim)).frobenius_norm();
        if defect > tol * F::of(dim as f64) {
            return Err(Error::InvalidContext(format!(
                "projectors do not sum to identity (defect {:.3e})",
                defect.as_f64()
            )));
        }
        let mut ctx = Self { dim, projectors };
        ctx.canonicalize();
        Ok(ctx)
    }

    /// The trivial context `{I}` (bottom of the poset).
    pub fn trivial(dim: usize) -> Self {
        Self { dim, projectors: vec![ComplexOperator::identity1(dim)] }
    }

    /// Maximal context from an orthonormal basis.
    pub fn from_basis(basis: &[UnitVector<F>]) -> Result<Self> {
        let dim = basis.len();
        for v in basis {
            if v.dim() != dim {
                return Err(Error::InvalidContext("basis vector dimension mismatch".into()));
            }
        }
        Self::new(dim, basis.iter().map(|v| v.projector()).collect())
    }

    /// Standard-basis maximal context in dimension `dim`.
    pub fn standard(dim: usize) -> Self {
        let projectors = (0..dim).map(|i| UnitVector::basis(dim, i).projector()).collect();
        let mut ctx = Self { dim, projectors };
        ctx.canonicalize();
        ctx
    }

    fn canonicalize(&mut self) {
        let phase_tol = F::of(1e-7);
        let mut keyed: Vec<(usize, Vec<C<F>>, ComplexOperator<F>)> = self
            .projectors
            .drain(..)
            .map(|p| {
                let rank = p.trace().re.round().as_f64() as usize;
                let lead = p
                    .eigh_with_tol(F::of(1e-6))
                    .map(|e| e.vectors[0].phase_normalized(phase_tol).entries().to_vec())
                    .unwrap_or_default();
                (rank, lead, p)
            })
            .collect();
        keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| crate::linalg::lex_cmp(&a.1, &b.1)));
        self.projectors = keyed.into_iter().map(|(_, _, p)| p).collect();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn projectors(&self) -> &[ComplexOperator<F>] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn is_maximal(&self) -> bool {
        self.projectors.len() == self.dim
    }

    /// Least-squares coefficients of `a` on the projector basis together
    /// with the off-span residual. The projectors are HS-orthogonal, so the
    /// projection is `sum_i tr(P_i a)/tr(P_i) P_i`.
    pub fn span_coefficients(&self, a: &ComplexOperator<F>) -> (Vec<C<F>>, F) {
        assert_eq!(a.side(), self.dim, "span_coefficients side mismatch");
        let mut approx = ComplexOperator::zeros(vec![self.dim]);
        let mut coeffs = Vec::with_capacity(self.projectors.len());
        for p in &self.projectors {
            let c = p.hs_inner(a) / Complex::new(p.trace().re, F::zero());
            approx = approx.add(&p.with_dims(vec![self.dim]).expect("projector side").scale(c));
            coeffs.push(c);
        }
        let diff = a.with_dims(vec![self.dim]).expect("element side").sub(&approx);
        (coeffs, diff.frobenius_norm())
    }

    /// Membership of `a` in the algebra spanned by this context.
    pub fn contains(&self, a: &ComplexOperator<F>, tol: F) -> bool {
        self.span_coefficients(a).1 <= tol
    }

    /// One character per projector.
    pub fn characters(&self) -> Vec<Character<F>> {
        self.projectors
            .iter()
            .map(|p| Character {
                projector: p.clone(),
                rank: p.trace().re.round().as_f64() as usize,
            })
            .collect()
    }

    /// Approximate equality of canonical forms.
    pub fn approx_eq(&self, other: &Self, tol: F) -> bool {
        self.dim == other.dim
            && self.projectors.len() == other.projectors.len()
            && self
                .projectors
                .iter()
                .zip(&other.projectors)
                .all(|(p, q)| p.sub(q).frobenius_norm() <= tol)
    }
}

/// `C <= D` in the context poset: every projector of `C` is (within
/// tolerance) a sum of projectors of `D`; equivalently span(C) is contained
/// in span(D).
pub fn context_leq<F: Scalar>(c: &Context<F>, d: &Context<F>, tol: F) -> Result<bool> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch(format!("context dims {} vs {}", c.dim(), d.dim())));
    }
    Ok(c.projectors().iter().all(|p| d.contains(p, tol)))
}

/// Greatest lower bound of two contexts: the canonical partition generating
/// span(C) ∩ span(D).
///
/// Projectors `P_i`, `Q_j` are grouped by connected components of the
/// overlap graph (edge whenever `P_i Q_j != 0`); each component's summed
/// projector is a minimal projection of the intersection algebra, and the
/// two summed sides agree.
pub fn context_intersection<F: Scalar>(
    c: &Context<F>,
    d: &Context<F>,
    tol: F,
) -> Result<Context<F>> {
    if c.dim() != d.dim() {
        return Err(Error::DimensionMismatch(format!("context dims {} vs {}", c.dim(), d.dim())));
    }
    let m = c.len();
    let k = d.len();
    let mut parent: Vec<usize> = (0..m + k).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut cur = x;
        while parent[cur] != r {
            let next = parent[cur];
            parent[cur] = r;
            cur = next;
        }
        r
    }
    for i in 0..m {
        for j in 0..k {
            // tr(P Q) = |PQ|_F^2 >= 0 for projectors
            let overlap = c.projectors()[i].hs_inner(&d.projectors()[j]).re;
            if overlap > tol {
                let a = find(&mut parent, i);
                let b = find(&mut parent, m + j);
                parent[a] = b;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, ComplexOperator<F>> =
        std::collections::BTreeMap::new();
    for i in 0..m {
        let root = find(&mut parent, i);
        let entry = groups.entry(root).or_insert_with(|| ComplexOperator::zeros(vec![c.dim()]));
        *entry = entry.add(&c.projectors()[i].with_dims(vec![c.dim()])?);
    }
    Context::with_tol(c.dim(), groups.into_values().collect(), tol.max(default_tol()))
}

impl<F: Scalar> ProductContext<F> {
    pub fn new(components: Vec<Context<F>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidContext("empty product context".into()));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[Context<F>] {
        &self.components
    }

    pub fn dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.dim()).product()
    }

    /// Number of product characters (product of component partition sizes).
    pub fn character_count(&self) -> usize {
        self.components.iter().map(|c| c.len()).product()
    }

    /// Multi-index of component projector indices for flat character index
    /// `k` (last component fastest).
    pub fn character_index(&self, mut k: usize) -> Vec<usize> {
        let sizes: Vec<usize> = self.components.iter().map(|c| c.len()).collect();
        let mut idx = vec![0usize; sizes.len()];
        for i in (0..sizes.len()).rev() {
            idx[i] = k % sizes[i];
            k /= sizes[i];
        }
        idx
    }

    /// Tensor product of the component projectors selected by `idx`.
    pub fn product_projector(&self, idx: &[usize]) -> ComplexOperator<F> {
        let parts: Vec<&ComplexOperator<F>> =
            self.components.iter().zip(idx).map(|(c, &i)| &c.projectors()[i]).collect();
        ComplexOperator::tensor_all(&parts)
    }

    /// The induced context on the product dimension, projectors ordered
    /// lexicographically by component indices.
    pub fn induced(&self) -> Context<F> {
        let n = self.character_count();
        let mut projectors = Vec::with_capacity(n);
        for k in 0..n {
            let idx = self.character_index(k);
            projectors.push(self.product_projector(&idx));
        }
        // mutually orthogonal and complete by construction
        Context { dim: self.total_dim(), projectors }
    }

    /// Componentwise partial order on product contexts.
    pub fn leq(&self, other: &Self, tol: F) -> Result<bool> {
        if self.components.len() != other.components.len() {
            return Err(Error::DimensionMismatch(format!(
                "product contexts have {} vs {} components",
                self.components.len(),
                other.components.len()
            )));
        }
        for (c, d) in self.components.iter().zip(&other.components) {
            if !context_leq(c, d, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn approx_eq(&self, other: &Self, tol: F) -> bool {
        self.components.len() == other.components.len()
            && self.components.iter().zip(&other.components).all(|(c, d)| c.approx_eq(d, tol))
    }
}

/// Context on the product dimension whose projectors are all tensor products
/// of component projectors, ordered lexicographically by component indices.
pub fn product_context<F: Scalar>(cs: &[Context<F>]) -> Result<Context<F>> {
    let pc = ProductContext::new(cs.to_vec())?;
    Ok(pc.induced())
}

/// Identity-padded embedding of an element of span(C_i) into the product
/// algebra: `1 (x) ... (x) a (x) ... (x) 1`.
pub fn coproduct_injection<F: Scalar>(
    i: usize,
    a: &ComplexOperator<F>,
    cs: &[Context<F>],
    tol: F,
) -> Result<ComplexOperator<F>> {
    if i >= cs.len() {
        return Err(Error::InvalidFactor { index: i, nfactors: cs.len() });
    }
    if a.side() != cs[i].dim() {
        return Err(Error::DimensionMismatch(format!(
            "element side {} vs context dim {}",
            a.side(),
            cs[i].dim()
        )));
    }
    let (_, residual) = cs[i].span_coefficients(a);
    if residual > tol {
        return Err(Error::OutsideSpan(residual.as_f64()));
    }
    let parts: Vec<ComplexOperator<F>> = cs
        .iter()
        .enumerate()
        .map(|(k, c)| if k == i { a.clone() } else { ComplexOperator::identity1(c.dim()) })
        .collect();
    let refs: Vec<&ComplexOperator<F>> = parts.iter().collect();
    Ok(ComplexOperator::tensor_all(&refs))
}

/// For `coarse <= fine`, maps each projector index of `fine` to the index of
/// the unique projector of `coarse` containing it.
pub fn refinement_map<F: Scalar>(
    fine: &Context<F>,
    coarse: &Context<F>,
    tol: F,
) -> Result<Vec<usize>> {
    if !context_leq(coarse, fine, tol)? {
        return Err(Error::IncomparableContexts(
            "coarse context is not below the fine context".into(),
        ));
    }
    let mut map = Vec::with_capacity(fine.len());
    for p in fine.projectors() {
        let rank = p.trace().re;
        let mut found = None;
        for (k, q) in coarse.projectors().iter().enumerate() {
            let overlap = q.hs_inner(p).re;
            if (overlap - rank).abs() <= tol.max(F::of(1e-7)) * F::of(fine.dim() as f64) {
                found = Some(k);
                break;
            }
        }
        match found {
            Some(k) => map.push(k),
            None => {
                return Err(Error::IncomparableContexts(
                    "no coarse projector contains a fine projector".into(),
                ))
            }
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{orthonormalize_hs, span_residual};

    type Ctx = Context<f64>;

    fn tol() -> f64 {
        1e-9
    }

    fn qutrit_coarse() -> Ctx {
        let p0 = UnitVector::<f64>::basis(3, 0).projector();
        let p12 = UnitVector::<f64>::basis(3, 1)
            .projector()
            .add(&UnitVector::<f64>::basis(3, 2).projector());
        Ctx::new(3, vec![p0, p12]).unwrap()
    }

    #[test]
    fn trivial_below_everything() {
        let c = Ctx::trivial(3);
        let d = Ctx::standard(3);
        assert!(context_leq(&c, &d, tol()).unwrap());
        assert!(!context_leq(&d, &c, tol()).unwrap());
    }

    #[test]
    fn coarse_graining_below_standard() {
        let c = qutrit_coarse();
        let d = Ctx::standard(3);
        assert!(context_leq(&c, &d, tol()).unwrap());
        assert!(!context_leq(&d, &c, tol()).unwrap());
    }

    #[test]
    fn leq_dim_mismatch_errors() {
        let c = Ctx::trivial(2);
        let d = Ctx::trivial(3);
        assert!(context_leq(&c, &d, tol()).is_err());
    }

    fn rotated_qutrit_basis(angle: f64) -> Ctx {
        let c = angle.cos();
        let s = angle.sin();
        let v0 = UnitVector::new(vec![
            Complex::new(c, 0.0),
            Complex::new(s, 0.0),
            Complex::new(0.0, 0.0),
        ])
        .unwrap();
        let v1 = UnitVector::new(vec![
            Complex::new(-s, 0.0),
            Complex::new(c, 0.0),
            Complex::new(0.0, 0.0),
        ])
        .unwrap();
        let v2 = UnitVector::<f64>::basis(3, 2);
        Ctx::from_basis(&[v0, v1, v2]).unwrap()
    }

    #[test]
    fn noncommuting_maximal_contexts_incomparable() {
        let d = Ctx::standard(3);
        let e = rotated_qutrit_basis(0.7);
        assert!(!context_leq(&d, &e, tol()).unwrap());
        assert!(!context_leq(&e, &d, tol()).unwrap());
        // span-inclusion oracle by least squares agrees
        let basis = orthonormalize_hs(e.projectors(), 1e-9);
        let outside = d.projectors().iter().any(|p| span_residual(p, &basis) > 1e-6);
        assert!(outside);
    }

    #[test]
    fn intersection_idempotent() {
        let c = rotated_qutrit_basis(0.3);
        let i = context_intersection(&c, &c, tol()).unwrap();
        assert!(i.approx_eq(&c, 1e-8));
    }

    #[test]
    fn intersection_generic_maximal_is_trivial() {
        let c = Ctx::standard(3);
        let h = 1.0 / 3f64.sqrt();
        let v0 = UnitVector::new(vec![
            Complex::new(h, 0.0),
            Complex::new(h, 0.1),
            Complex::new(h, -0.1),
        ])
        .unwrap();
        let g1 = v0.projector();
        let rest = ComplexOperator::identity1(3).sub(&g1);
        let eig = rest.eigh().unwrap();
        let d = Ctx::new(3, vec![g1, eig.vectors[0].projector(), eig.vectors[1].projector()])
            .unwrap();
        let i = context_intersection(&c, &d, tol()).unwrap();
        assert_eq!(i.len(), 1);
        assert!(i.approx_eq(&Ctx::trivial(3), 1e-8));
        // span-intersection oracle: only the identity direction is shared
        let shared =
            crate::linalg::span_intersection_dim(c.projectors(), d.projectors(), 1e-9);
        assert_eq!(shared, 1);
    }

    #[test]
    fn intersection_with_coarse_graining() {
        let c = qutrit_coarse();
        let d = Ctx::standard(3);
        let i = context_intersection(&c, &d, tol()).unwrap();
        assert!(i.approx_eq(&c, 1e-8));
        assert!(context_leq(&i, &c, tol()).unwrap());
        assert!(context_leq(&i, &d, tol()).unwrap());
    }

    #[test]
    fn product_of_trivials_is_trivial() {
        let p = product_context(&[Ctx::trivial(2), Ctx::trivial(3)]).unwrap();
        assert_eq!(p.dim(), 6);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn product_of_maximal_qutrits() {
        let p = product_context(&[Ctx::standard(3), Ctx::standard(3)]).unwrap();
        assert_eq!(p.len(), 9);
        for proj in p.projectors() {
            assert!((proj.trace().re - 1.0).abs() < 1e-12);
        }
        let mut sum = ComplexOperator::<f64>::zeros(vec![9]);
        for proj in p.projectors() {
            sum = sum.add(&proj.with_dims(vec![9]).unwrap());
        }
        assert!(sum.sub(&ComplexOperator::identity1(9)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn product_of_singleton_is_identity_operation() {
        let c = rotated_qutrit_basis(0.4);
        let p = product_context(std::slice::from_ref(&c)).unwrap();
        assert!(p.approx_eq(&c, 1e-10));
    }

    #[test]
    fn injection_of_identity_is_identity() {
        let cs = [Ctx::standard(2), Ctx::standard(3)];
        let a = ComplexOperator::<f64>::identity1(2);
        let inj = coproduct_injection(0, &a, &cs, tol()).unwrap();
        assert!(inj.sub(&ComplexOperator::identity(vec![2, 3])).frobenius_norm() < 1e-12);
    }

    #[test]
    fn injections_commute_and_match_kronecker() {
        let cs = [Ctx::standard(2), Ctx::standard(2)];
        let a = UnitVector::<f64>::basis(2, 0).projector().scale_re(2.0);
        let b = UnitVector::<f64>::basis(2, 1).projector();
        let ia = coproduct_injection(0, &a, &cs, tol()).unwrap();
        let ib = coproduct_injection(1, &b, &cs, tol()).unwrap();
        let ab = ia.matmul(&ib);
        let ba = ib.matmul(&ia);
        assert!(ab.sub(&ba).frobenius_norm() < 1e-12);
        assert!(ab.sub(&a.tensor(&b)).frobenius_norm() < 1e-12);
    }

    #[test]
    fn injection_rejects_off_span_element() {
        let cs = [Ctx::standard(2), Ctx::standard(2)];
        let mut x = ComplexOperator::<f64>::zeros(vec![2]);
        x.set(0, 1, Complex::new(1.0, 0.0));
        x.set(1, 0, Complex::new(1.0, 0.0));
        assert!(matches!(coproduct_injection(0, &x, &cs, tol()), Err(Error::OutsideSpan(_))));
    }

    #[test]
    fn characters_are_dual_to_projectors() {
        let c = qutrit_coarse();
        let chars = c.characters();
        for (i, chi) in chars.iter().enumerate() {
            for (j, p) in c.projectors().iter().enumerate() {
                let val = chi.evaluate(p);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((val.re - expect).abs() < 1e-12);
                assert!(val.im.abs() < 1e-12);
            }
            let unit = chi.evaluate(&ComplexOperator::identity1(3));
            assert!((unit.re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn characters_multiplicative_on_span() {
        let c = rotated_qutrit_basis(0.9);
        let chars = c.characters();
        let coeffs_a = [0.3, -1.2, 0.5];
        let coeffs_b = [1.1, 0.2, -0.7];
        let mut a = ComplexOperator::<f64>::zeros(vec![3]);
        let mut b = ComplexOperator::<f64>::zeros(vec![3]);
        for (k, p) in c.projectors().iter().enumerate() {
            a = a.add(&p.scale_re(coeffs_a[k]));
            b = b.add(&p.scale_re(coeffs_b[k]));
        }
        let ab = a.matmul(&b);
        for chi in &chars {
            let lhs = chi.evaluate(&ab);
            let rhs = chi.evaluate(&a) * chi.evaluate(&b);
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn product_poset_monotonicity() {
        // componentwise order holds iff span inclusion holds on the induced
        // product contexts
        let coarse = ProductContext::new(vec![qutrit_coarse(), Ctx::trivial(3)]).unwrap();
        let fine = ProductContext::new(vec![Ctx::standard(3), Ctx::standard(3)]).unwrap();
        assert!(coarse.leq(&fine, tol()).unwrap());
        assert!(context_leq(&coarse.induced(), &fine.induced(), tol()).unwrap());
        assert!(!fine.leq(&coarse, tol()).unwrap());
        assert!(!context_leq(&fine.induced(), &coarse.induced(), tol()).unwrap());
        // incomparable components break both sides
        let rotated =
            ProductContext::new(vec![rotated_qutrit_basis(0.6), Ctx::standard(3)]).unwrap();
        assert!(!rotated.leq(&fine, tol()).unwrap());
        assert!(!context_leq(&rotated.induced(), &fine.induced(), tol()).unwrap());
    }

    #[test]
    fn refinement_map_coarse_graining() {
        let fine = Ctx::standard(3);
        let coarse = qutrit_coarse();
        let map = refinement_map(&fine, &coarse, tol()).unwrap();
        assert_eq!(map.len(), 3);
        let rank2_idx = coarse
            .projectors()
            .iter()
            .position(|p| (p.trace().re - 2.0).abs() < 1e-9)
            .unwrap();
        assert_eq!(map.iter().filter(|&&k| k == rank2_idx).count(), 2);
    }
}
