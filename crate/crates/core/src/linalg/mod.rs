//! Dense complex tensor algebra on small multi-factor Hilbert spaces.
//!
//! Operators are stored as row-major square matrices tagged with an ordered
//! list of tensor-factor dimensions. Factor indices are 0-based throughout.
//! Everything here is a pure function of its inputs; values are immutable
//! after construction.

mod eigh;
mod solve;

pub use eigh::{lex_cmp, EighDecomposition, Purification};
pub use solve::{
    orthonormalize_hs, span_intersection_dim, span_residual, LeastSquares, RealLeastSquares,
};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// Dense square complex matrix with an ordered list of factor dimensions.
///
/// The matrix side always equals the product of `dims`. A scalar (side 1,
/// empty `dims`) is a valid operator and acts as the tensor unit.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexOperator<F: Scalar> {
    dims: Vec<usize>,
    side: usize,
    data: Vec<C<F>>,
}

/// Complex vector of unit Euclidean norm.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector<F: Scalar> {
    dim: usize,
    entries: Vec<C<F>>,
}

impl<F: Scalar> UnitVector<F> {
    /// Builds a unit vector, normalizing the input. Errors on (near-)zero
    /// input.
    pub fn new(entries: Vec<C<F>>) -> Result<Self> {
        let norm_sq: F = entries.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq < F::of(1e-24) {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        let norm = norm_sq.sqrt();
        let dim = entries.len();
        let entries = entries.into_iter().map(|z| z / norm).collect();
        Ok(Self { dim, entries })
    }

    /// Standard basis vector `|i>` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index out of range");
        let mut entries = vec![C::<F>::zero(); dim];
        entries[i] = C::<F>::one();
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C<F>] {
        &self.entries
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> C<F> {
        assert_eq!(self.dim, other.dim, "inner product dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .fold(C::<F>::zero(), |acc, z| acc + z)
    }

    /// Rank-1 projector `|self><self|` on a single factor of this dimension.
    pub fn projector(&self) -> ComplexOperator<F> {
        let d = self.dim;
        let mut data = vec![C::<F>::zero(); d * d];
        for r in 0..d {
            for c in 0..d {
                data[r * d + c] = self.entries[r] * self.entries[c].conj();
            }
        }
        ComplexOperator { dims: vec![d], side: d, data }
    }

    /// Tensor product of unit vectors.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.dim * other.dim);
        for a in &self.entries {
            for b in &other.entries {
                entries.push(*a * *b);
            }
        }
        Self { dim: self.dim * other.dim, entries }
    }

    /// Tensor product of a list of unit vectors; empty input gives the scalar 1.
    pub fn tensor_all(vs: &[UnitVector<F>]) -> Self {
        let mut out = Self { dim: 1, entries: vec![C::<F>::one()] };
        for v in vs {
            out = out.tensor(v);
        }
        out
    }

    /// Multiplies by the phase making the first entry of magnitude > `tol`
    /// real and positive.
    pub fn phase_normalized(&self, tol: F) -> Self {
        let mut entries = self.entries.clone();
        if let Some(z) = entries.iter().find(|z| z.norm() > tol) {
            let phase = z.conj() / z.norm();
            for e in entries.iter_mut() {
                *e *= phase;
            }
        }
        Self { dim: self.dim, entries }
    }
}

impl<F: Scalar> ComplexOperator<F> {
    /// Builds an operator from row-major entries; `dims` must multiply to the
    /// matrix side.
    pub fn from_matrix(dims: Vec<usize>, data: Vec<C<F>>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if data.len() != side * side {
            return Err(Error::ShapeMismatch(format!(
                "expected {}x{} = {} entries for dims {:?}, got {}",
                side,
                side,
                side * side,
                dims,
                data.len()
            )));
        }
        Ok(Self { dims, side, data })
    }

    /// Zero operator on the given factor dimensions.
    pub fn zeros(dims: Vec<usize>) -> Self {
        let side: usize = dims.iter().product();
        Self { dims, side, data: vec![C::<F>::zero(); side * side] }
    }

    /// Identity on the given factor dimensions.
    pub fn identity(dims: Vec<usize>) -> Self {
        let mut out = Self::zeros(dims);
        for i in 0..out.side {
            out.data[i * out.side + i] = C::<F>::one();
        }
        out
    }

    /// Single-factor identity of dimension `d`.
    pub fn identity1(d: usize) -> Self {
        Self::identity(vec![d])
    }

    /// The scalar 1 (side-1 operator with no factors): the tensor unit.
    pub fn scalar_one() -> Self {
        Self { dims: vec![], side: 1, data: vec![C::<F>::one()] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn nfactors(&self) -> usize {
        self.dims.len()
    }

    pub fn data(&self) -> &[C<F>] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C<F> {
        self.data[r * self.side + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C<F>) {
        self.data[r * self.side + c] = v;
    }

    /// Reinterprets the same matrix with a different factor structure
    /// (product of `dims` must be unchanged).
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if side != self.side {
            return Err(Error::ShapeMismatch(format!(
                "dims {:?} do not multiply to side {}",
                dims, self.side
            )));
        }
        Ok(Self { dims, side, data: self.data.clone() })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.side, other.side, "operator addition shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { dims: self.dims.clone(), side: self.side, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.side, other.side, "operator subtraction shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { dims: self.dims.clone(), side: self.side, data }
    }

    pub fn scale(&self, s: C<F>) -> Self {
        let data = self.data.iter().map(|a| a * s).collect();
        Self { dims: self.dims.clone(), side: self.side, data }
    }

    pub fn scale_re(&self, s: F) -> Self {
        self.scale(Complex::new(s, F::zero()))
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.side, other.side, "matmul shape mismatch");
        let n = self.side;
        let mut data = vec![C::<F>::zero(); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        Self { dims: self.dims.clone(), side: n, data }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.side;
        let mut data = vec![C::<F>::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        Self { dims: self.dims.clone(), side: n, data }
    }

    pub fn trace(&self) -> C<F> {
        (0..self.side).map(|i| self.data[i * self.side + i]).fold(C::<F>::zero(), |a, z| a + z)
    }

    /// Hilbert-Schmidt inner product `tr(self^† other)`.
    pub fn hs_inner(&self, other: &Self) -> C<F> {
        assert_eq!(self.side, other.side, "hs_inner shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .fold(C::<F>::zero(), |acc, z| acc + z)
    }

    pub fn frobenius_norm(&self) -> F {
        self.data.iter().map(|z| z.norm_sqr()).sum::<F>().sqrt()
    }

    pub fn max_abs(&self) -> F {
        self.data.iter().map(|z| z.norm()).fold(F::zero(), F::max)
    }

    /// Maximum deviation from Hermiticity, `max |A - A^†|`.
    pub fn hermiticity_defect(&self) -> F {
        let n = self.side;
        let mut worst = F::zero();
        for r in 0..n {
            for c in r..n {
                let d = (self.data[r * n + c] - self.data[c * n + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: F) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Expectation value `<v|A|v>`.
    pub fn expectation(&self, v: &UnitVector<F>) -> C<F> {
        assert_eq!(self.side, v.dim(), "expectation dimension mismatch");
        let n = self.side;
        let mut acc = C::<F>::zero();
        for r in 0..n {
            let mut row = C::<F>::zero();
            for c in 0..n {
                row += self.data[r * n + c] * v.entries[c];
            }
            acc += v.entries[r].conj() * row;
        }
        acc
    }

    /// Applies the matrix to a raw vector.
    pub fn apply(&self, v: &[C<F>]) -> Vec<C<F>> {
        assert_eq!(self.side, v.len(), "apply dimension mismatch");
        let n = self.side;
        let mut out = vec![C::<F>::zero(); n];
        for r in 0..n {
            let mut acc = C::<F>::zero();
            for c in 0..n {
                acc += self.data[r * n + c] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// Kronecker product; `dims` is the concatenation of operand dims.
    pub fn tensor(&self, other: &Self) -> Self {
        let n1 = self.side;
        let n2 = other.side;
        let n = n1 * n2;
        let mut data = vec![C::<F>::zero(); n * n];
        for r1 in 0..n1 {
            for c1 in 0..n1 {
                let a = self.data[r1 * n1 + c1];
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..n2 {
                    for c2 in 0..n2 {
                        data[(r1 * n2 + r2) * n + (c1 * n2 + c2)] = a * other.data[r2 * n2 + c2];
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims, side: n, data }
    }

    /// Kronecker product of a list; empty input gives the scalar 1.
    pub fn tensor_all(ops: &[&Self]) -> Self {
        let mut out = Self::scalar_one();
        for op in ops {
            out = out.tensor(op);
        }
        out
    }

    /// Decomposes a flat index into per-factor indices (last factor fastest).
    fn unravel(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0usize; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            idx[k] = i % self.dims[k];
            i /= self.dims[k];
        }
        idx
    }

    fn ravel(dims: &[usize], idx: &[usize]) -> usize {
        let mut i = 0usize;
        for (k, &d) in dims.iter().enumerate() {
            i = i * d + idx[k];
        }
        i
    }

    fn check_factor(&self, factor: usize) -> Result<()> {
        if factor >= self.dims.len() {
            return Err(Error::InvalidFactor { index: factor, nfactors: self.dims.len() });
        }
        Ok(())
    }

    /// Traces out every factor not listed in `keep` (0-based, any order;
    /// result factors follow ascending `keep` order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyFactorSet);
        }
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &k in &keep {
            self.check_factor(k)?;
        }
        let traced: Vec<usize> = (0..self.dims.len()).filter(|k| !keep.contains(k)).collect();
        let out_dims: Vec<usize> = keep.iter().map(|&k| self.dims[k]).collect();
        let mut out = Self::zeros(out_dims);
        for r in 0..self.side {
            let ridx = self.unravel(r);
            for c in 0..self.side {
                let cidx = self.unravel(c);
                if traced.iter().any(|&t| ridx[t] != cidx[t]) {
                    continue;
                }
                let rk: Vec<usize> = keep.iter().map(|&k| ridx[k]).collect();
                let ck: Vec<usize> = keep.iter().map(|&k| cidx[k]).collect();
                let ro = Self::ravel(&out.dims, &rk);
                let co = Self::ravel(&out.dims, &ck);
                out.data[ro * out.side + co] += self.data[r * self.side + c];
            }
        }
        Ok(out)
    }

    /// Transposes the chosen factor's indices only.
    pub fn partial_transpose(&self, factor: usize) -> Result<Self> {
        self.check_factor(factor)?;
        let mut out = Self::zeros(self.dims.clone());
        for r in 0..self.side {
            let mut ridx = self.unravel(r);
            for c in 0..self.side {
                let mut cidx = self.unravel(c);
                std::mem::swap(&mut ridx[factor], &mut cidx[factor]);
                let ro = Self::ravel(&self.dims, &ridx);
                let co = Self::ravel(&self.dims, &cidx);
                out.data[ro * self.side + co] = self.data[r * self.side + c];
                std::mem::swap(&mut ridx[factor], &mut cidx[factor]);
            }
        }
        Ok(out)
    }

    /// Reorders factors: position `k` of the result is factor `perm[k]` of
    /// the input. `perm` must be a permutation of `0..nfactors`.
    pub fn permute_factors(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "permutation length {} != {} factors",
                perm.len(),
                n
            )));
        }
        for &p in perm {
            self.check_factor(p)?;
            if seen[p] {
                return Err(Error::ShapeMismatch("duplicate factor in permutation".into()));
            }
            seen[p] = true;
        }
        let out_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut out = Self::zeros(out_dims);
        for r in 0..self.side {
            let ridx = self.unravel(r);
            for c in 0..self.side {
                let cidx = self.unravel(c);
                let rp: Vec<usize> = perm.iter().map(|&p| ridx[p]).collect();
                let cp: Vec<usize> = perm.iter().map(|&p| cidx[p]).collect();
                let ro = Self::ravel(&out.dims, &rp);
                let co = Self::ravel(&out.dims, &cp);
                out.data[ro * out.side + co] = self.data[r * self.side + c];
            }
        }
        Ok(out)
    }

    /// Contracts all factors except `factor` with the given per-factor unit
    /// vectors, leaving a matrix on the free factor:
    /// `M[a,b] = <v_1 .. a .. v_n| A |v_1 .. b .. v_n>`.
    ///
    /// `vectors[factor]` is ignored.
    pub fn contract_except(&self, factor: usize, vectors: &[UnitVector<F>]) -> Result<Self> {
        self.check_factor(factor)?;
        if vectors.len() != self.dims.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} vectors supplied for {} factors",
                vectors.len(),
                self.dims.len()
            )));
        }
        let d = self.dims[factor];
        let mut out = Self::zeros(vec![d]);
        for r in 0..self.side {
            let ridx = self.unravel(r);
            let mut wr = C::<F>::one();
            for (k, &i) in ridx.iter().enumerate() {
                if k != factor {
                    wr *= vectors[k].entries[i].conj();
                }
            }
            if wr.is_zero() {
                continue;
            }
            for c in 0..self.side {
                let cidx = self.unravel(c);
                let mut w = wr * self.data[r * self.side + c];
                if w.is_zero() {
                    continue;
                }
                for (k, &j) in cidx.iter().enumerate() {
                    if k != factor {
                        w *= vectors[k].entries[j];
                    }
                }
                out.data[ridx[factor] * d + cidx[factor]] += w;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Op = ComplexOperator<f64>;

    fn c(re: f64, im: f64) -> C<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn tensor_identities() {
        let i2 = Op::identity1(2);
        let i3 = Op::identity1(3);
        let t = i2.tensor(&i3);
        assert_eq!(t.dims(), &[2, 3]);
        assert!(t.sub(&Op::identity(vec![2, 3])).frobenius_norm() < 1e-15);
    }

    #[test]
    fn tensor_basis_projectors() {
        let p0 = UnitVector::<f64>::basis(2, 0).projector();
        let p1 = UnitVector::<f64>::basis(2, 1).projector();
        let t = p0.tensor(&p1);
        // single 1 at row/col index 1 (0-based)
        for r in 0..4 {
            for c in 0..4 {
                let expect = if r == 1 && c == 1 { 1.0 } else { 0.0 };
                assert!((t.get(r, c) - c64(expect)).norm() < 1e-15);
            }
        }
    }

    fn c64(x: f64) -> C<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn tensor_trace_multiplicative() {
        // fixed pseudo-random 3x3 matrices
        let a = Op::from_matrix(
            vec![3],
            (0..9).map(|k| c(0.3 * k as f64 - 1.0, 0.1 * (k * k) as f64)).collect(),
        )
        .unwrap();
        let b = Op::from_matrix(
            vec![3],
            (0..9).map(|k| c((k as f64).sin(), (k as f64).cos())).collect(),
        )
        .unwrap();
        let lhs = a.tensor(&b).trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_product_case() {
        let rho = UnitVector::<f64>::basis(2, 0).projector();
        let sigma = Op::from_matrix(vec![2], vec![c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)])
            .unwrap();
        let t = rho.tensor(&sigma);
        let back = t.partial_trace(&[0]).unwrap();
        let expect = rho.scale(sigma.trace());
        assert!(back.sub(&expect).frobenius_norm() < 1e-14);
    }

    #[test]
    fn partial_trace_maximally_entangled_marginal() {
        let phi = maximally_entangled(3);
        let m = phi.projector_multi(&[3, 3]).partial_trace(&[1]).unwrap();
        let expect = Op::identity1(3).scale_re(1.0 / 3.0);
        assert!(m.sub(&expect).frobenius_norm() < 1e-14);
    }

    /// |Phi+> = sum_i |ii> / sqrt(d)
    fn maximally_entangled(d: usize) -> UnitVector<f64> {
        let mut entries = vec![C::<f64>::zero(); d * d];
        for i in 0..d {
            entries[i * d + i] = c64(1.0);
        }
        UnitVector::new(entries).unwrap()
    }

    impl UnitVector<f64> {
        /// Test helper: projector viewed with explicit factor dims.
        fn projector_multi(&self, dims: &[usize]) -> Op {
            self.projector().with_dims(dims.to_vec()).unwrap()
        }
    }

    #[test]
    fn partial_trace_composition() {
        // random-ish 2 (x) 3 (x) 2 state
        let side = 12;
        let mut data = vec![C::<f64>::zero(); side * side];
        for r in 0..side {
            for cc in 0..side {
                let re = ((r * 13 + cc * 7) % 11) as f64 / 11.0 - 0.4;
                let im = ((r * 5 + cc * 3) % 7) as f64 / 7.0 - 0.5;
                data[r * side + cc] = c(re, im);
            }
        }
        // hermitize
        let raw = Op::from_matrix(vec![2, 3, 2], data).unwrap();
        let h = raw.add(&raw.adjoint()).scale_re(0.5);
        let a = h.partial_trace(&[0, 1]).unwrap().partial_trace(&[0]).unwrap();
        let b = h.partial_trace(&[0]).unwrap();
        assert!(a.sub(&b).frobenius_norm() < 1e-13);
    }

    #[test]
    fn partial_trace_empty_keep_errors() {
        let i = Op::identity(vec![2, 2]);
        assert!(matches!(i.partial_trace(&[]), Err(Error::EmptyFactorSet)));
    }

    #[test]
    fn partial_transpose_involution_and_trace() {
        let phi = maximally_entangled(3);
        let w = phi.projector_multi(&[3, 3]);
        let pt = w.partial_transpose(1).unwrap();
        assert!((pt.trace() - w.trace()).norm() < 1e-14);
        assert!(pt.is_hermitian(1e-12));
        let back = pt.partial_transpose(1).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn partial_transpose_identity_fixed_point() {
        let w = Op::identity(vec![2, 2]).scale_re(0.25);
        let pt = w.partial_transpose(0).unwrap();
        assert!(pt.sub(&w).frobenius_norm() < 1e-15);
    }

    #[test]
    fn pt_maxent_is_swap_over_d() {
        let phi = maximally_entangled(3);
        let w = phi.projector_multi(&[3, 3]);
        let pt = w.partial_transpose(1).unwrap();
        // SWAP/3: entry ((i,j),(k,l)) = delta_{il} delta_{jk} / 3
        for r in 0..9 {
            let (i, j) = (r / 3, r % 3);
            for cidx in 0..9 {
                let (k, l) = (cidx / 3, cidx % 3);
                let expect = if i == l && j == k { 1.0 / 3.0 } else { 0.0 };
                assert!((pt.get(r, cidx) - c64(expect)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn permute_factors_roundtrip() {
        let a = UnitVector::<f64>::basis(2, 1).projector();
        let b = UnitVector::<f64>::basis(3, 2).projector();
        let ab = a.tensor(&b);
        let ba = ab.permute_factors(&[1, 0]).unwrap();
        assert_eq!(ba, b.tensor(&a));
        let back = ba.permute_factors(&[1, 0]).unwrap();
        assert_eq!(back, ab);
    }

    #[test]
    fn contract_except_on_product_vectors() {
        let phi = maximally_entangled(3);
        let w = phi.projector_multi(&[3, 3]);
        let v = vec![UnitVector::<f64>::basis(3, 0), UnitVector::<f64>::basis(3, 1)];
        // fixing factor 1 at |1>: M[a,b] = <a 1|w|b 1> = delta_{a1} delta_{b1} / 3
        let m = w.contract_except(0, &v).unwrap();
        for r in 0..3 {
            for cc in 0..3 {
                let expect = if r == 1 && cc == 1 { 1.0 / 3.0 } else { 0.0 };
                assert!((m.get(r, cc) - c64(expect)).norm() < 1e-14);
            }
        }
    }
}
