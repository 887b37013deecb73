//! Real least-squares solve with rank inspection, backed by the Hermitian
//! eigensolver applied to the normal equations.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::Result;
use crate::scalar::{Scalar, C};

use super::ComplexOperator;

/// Result of a least-squares solve `min |M x - y|`.
#[derive(Clone, Debug)]
pub struct LeastSquares<F: Scalar> {
    pub solution: Vec<F>,
    pub residual: F,
    /// Column-space directions with singular value at or below the cutoff,
    /// reported as unit coefficient vectors.
    pub null_directions: Vec<Vec<F>>,
}

/// Dense real matrix in row-major order for the solver.
#[derive(Clone, Debug)]
pub struct RealLeastSquares<F: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> RealLeastSquares<F> {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    /// Solves `min |M x - y|` with singular values below `cutoff` treated as
    /// zero; null directions are reported rather than inverted.
    pub fn solve(&self, y: &[F], cutoff: F) -> Result<LeastSquares<F>> {
        assert_eq!(y.len(), self.rows, "right-hand side length mismatch");
        let m = self.cols;
        // normal matrix G = M^T M as a complex Hermitian operator
        let mut g = ComplexOperator::<F>::zeros(vec![m]);
        for a in 0..m {
            for b in a..m {
                let mut acc = F::zero();
                for r in 0..self.rows {
                    acc += self.data[r * self.cols + a] * self.data[r * self.cols + b];
                }
                g.set(a, b, Complex::new(acc, F::zero()));
                g.set(b, a, Complex::new(acc, F::zero()));
            }
        }
        // rhs v = M^T y
        let mut v = vec![F::zero(); m];
        for (a, va) in v.iter_mut().enumerate() {
            let mut acc = F::zero();
            for r in 0..self.rows {
                acc += self.data[r * self.cols + a] * y[r];
            }
            *va = acc;
        }
        let eig = g.eigh_with_tol(F::of(1e-6))?;
        let lambda_cut = cutoff * cutoff;
        let mut x = vec![F::zero(); m];
        let mut null_directions = Vec::new();
        for (k, &lambda) in eig.values.iter().enumerate() {
            let u: Vec<F> = eig.vectors[k].entries().iter().map(|z| z.re).collect();
            if lambda <= lambda_cut {
                null_directions.push(u);
                continue;
            }
            let coeff = u.iter().zip(&v).map(|(&ui, &vi)| ui * vi).sum::<F>() / lambda;
            for (xi, &ui) in x.iter_mut().zip(&u) {
                *xi += coeff * ui;
            }
        }
        // residual of the original system
        let mut res = F::zero();
        for r in 0..self.rows {
            let mut acc = F::zero();
            for (cidx, xi) in x.iter().enumerate() {
                acc += self.data[r * self.cols + cidx] * *xi;
            }
            let d = acc - y[r];
            res += d * d;
        }
        Ok(LeastSquares { solution: x, residual: res.sqrt(), null_directions })
    }
}

/// Orthonormalizes a family of operators under the Hilbert-Schmidt inner
/// product by modified Gram-Schmidt, dropping members whose residual norm
/// falls at or below `cutoff`. Returns the orthonormal basis.
pub fn orthonormalize_hs<F: Scalar>(
    ops: &[ComplexOperator<F>],
    cutoff: F,
) -> Vec<ComplexOperator<F>> {
    let mut basis: Vec<ComplexOperator<F>> = Vec::new();
    for op in ops {
        let mut w = op.clone();
        for b in &basis {
            let overlap = b.hs_inner(&w);
            w = w.sub(&b.scale(overlap));
        }
        // second pass for numerical stability
        for b in &basis {
            let overlap = b.hs_inner(&w);
            w = w.sub(&b.scale(overlap));
        }
        let n = w.frobenius_norm();
        if n > cutoff {
            basis.push(w.scale(Complex::new(F::one() / n, F::zero())));
        }
    }
    basis
}

/// Residual Frobenius norm of `op` after projecting onto the HS-orthonormal
/// `basis`; zero residual means membership in the span.
pub fn span_residual<F: Scalar>(op: &ComplexOperator<F>, basis: &[ComplexOperator<F>]) -> F {
    let mut w = op.clone();
    for b in basis {
        let overlap = b.hs_inner(&w);
        w = w.sub(&b.scale(overlap));
    }
    w.frobenius_norm()
}

/// Dimension of the intersection of two operator spans, computed from the
/// HS Gram spectrum of the combined orthonormal bases. An intersection
/// direction shows up as a singular pair between the two spans.
pub fn span_intersection_dim<F: Scalar>(
    left: &[ComplexOperator<F>],
    right: &[ComplexOperator<F>],
    cutoff: F,
) -> usize {
    let lb = orthonormalize_hs(left, cutoff);
    let rb = orthonormalize_hs(right, cutoff);
    if lb.is_empty() || rb.is_empty() {
        return 0;
    }
    // Overlap matrix S[i][j] = <l_i, r_j>; squared singular values of S equal
    // cos^2 of principal angles; intersection dim = count of angles ~ 0.
    let p = lb.len();
    let q = rb.len();
    let mut s = vec![C::<F>::zero(); p * q];
    for i in 0..p {
        for j in 0..q {
            s[i * q + j] = lb[i].hs_inner(&rb[j]);
        }
    }
    // Hermitian S S^†, p x p
    let mut gram = ComplexOperator::<F>::zeros(vec![p]);
    for i in 0..p {
        for k in 0..p {
            let mut acc = C::<F>::zero();
            for j in 0..q {
                acc += s[i * q + j] * s[k * q + j].conj();
            }
            gram.set(i, k, acc);
        }
    }
    let eig = gram.eigh_with_tol(F::of(1e-6)).expect("gram matrix is Hermitian");
    eig.values.iter().filter(|&&l| l > F::one() - F::of(1e-7)).count()
}
