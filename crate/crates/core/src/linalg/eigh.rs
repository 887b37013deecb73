//! Complex Hermitian eigendecomposition by cyclic Jacobi rotations, with a
//! deterministic ordering rule so every downstream construction is
//! reproducible given the same input.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

use super::{ComplexOperator, UnitVector};

/// Eigendecomposition of a Hermitian operator.
///
/// Eigenvalues are sorted descending; degenerate ties are broken by the
/// lexicographic order of the phase-normalized eigenvectors (first entry of
/// non-negligible magnitude made real positive). Returned eigenvectors are
/// phase-normalized.
#[derive(Clone, Debug)]
pub struct EighDecomposition<F: Scalar> {
    pub values: Vec<F>,
    pub vectors: Vec<UnitVector<F>>,
}

/// Purification of a positive semidefinite operator: a vector on
/// `d (x) ancilla_dim` whose ancilla partial trace reproduces the input.
#[derive(Clone, Debug)]
pub struct Purification<F: Scalar> {
    pub vector: UnitVector<F>,
    pub ancilla_dim: usize,
}

impl<F: Scalar> Purification<F> {
    /// The rank-1 projector of the purification with dims `[d, ancilla_dim]`.
    pub fn projector(&self, d: usize) -> ComplexOperator<F> {
        self.vector
            .projector()
            .with_dims(vec![d, self.ancilla_dim])
            .expect("purification dims consistent")
    }
}

const MAX_SWEEPS: usize = 100;

impl<F: Scalar> EighDecomposition<F> {
    /// Rebuilds `U diag(values) U^†`.
    pub fn reconstruct(&self, dims: Vec<usize>) -> ComplexOperator<F> {
        let n = self.values.len();
        let mut out = ComplexOperator::zeros(dims);
        for k in 0..n {
            let lambda = self.values[k];
            let vk = self.vectors[k].entries();
            for r in 0..n {
                for c in 0..n {
                    let add = vk[r] * vk[c].conj() * Complex::new(lambda, F::zero());
                    let cur = out.get(r, c);
                    out.set(r, c, cur + add);
                }
            }
        }
        out
    }

    /// Number of eigenvalues of magnitude above `cutoff`.
    pub fn rank(&self, cutoff: F) -> usize {
        self.values.iter().filter(|v| v.abs() > cutoff).count()
    }
}

/// Compares two complex vectors entrywise by (re, im).
pub fn lex_cmp<F: Scalar>(a: &[C<F>], b: &[C<F>]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b) {
        match x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            o => return o,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

impl<F: Scalar> ComplexOperator<F> {
    /// Hermitian eigendecomposition with the deterministic ordering rule.
    ///
    /// Errors if the operator deviates from Hermiticity by more than `tol`.
    pub fn eigh_with_tol(&self, tol: F) -> Result<EighDecomposition<F>> {
        let defect = self.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect.as_f64()));
        }
        let n = self.side();
        // Work on the Hermitian average to suppress within-tolerance noise.
        let mut a: Vec<C<F>> = self.add(&self.adjoint()).scale_re(F::of(0.5)).data().to_vec();
        let mut v: Vec<C<F>> = vec![C::<F>::zero(); n * n];
        for i in 0..n {
            v[i * n + i] = Complex::new(F::one(), F::zero());
        }
        let norm = self.frobenius_norm().max(F::min_positive_value());
        let stop = norm * F::epsilon() * F::of(n as f64);
        let skip = norm * F::epsilon() * F::of(1e-2);

        for _ in 0..MAX_SWEEPS {
            let mut off = F::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[p * n + q].norm_sqr();
                }
            }
            if off.sqrt() <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    let r = apq.norm();
                    if r <= skip {
                        continue;
                    }
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    let phase = apq / Complex::new(r, F::zero());
                    let tau = (aqq - app) / (F::of(2.0) * r);
                    let t = tau.signum() / (tau.abs() + (F::one() + tau * tau).sqrt());
                    let c = F::one() / (F::one() + t * t).sqrt();
                    let s = t * c;
                    // Unitary on the (p,q) plane:
                    //   U[p][p] = c        U[p][q] = s
                    //   U[q][p] = -s e^-if U[q][q] = c e^-if
                    let upp = Complex::new(c, F::zero());
                    let upq = Complex::new(s, F::zero());
                    let uqp = -phase.conj() * s;
                    let uqq = phase.conj() * c;
                    // columns: B = A U
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = akp * upp + akq * uqp;
                        a[k * n + q] = akp * upq + akq * uqq;
                    }
                    // rows: A' = U^† B
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = upp.conj() * apk + uqp.conj() * aqk;
                        a[q * n + k] = upq.conj() * apk + uqq.conj() * aqk;
                    }
                    // eigenvector accumulation: V = V U
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * upp + vkq * uqp;
                        v[k * n + q] = vkp * upq + vkq * uqq;
                    }
                }
            }
        }

        let phase_tol = F::of(1e-7);
        let mut pairs: Vec<(F, UnitVector<F>)> = (0..n)
            .map(|k| {
                let col: Vec<C<F>> = (0..n).map(|r| v[r * n + k]).collect();
                let vec = UnitVector::new(col)
                    .expect("Jacobi eigenvector has unit norm")
                    .phase_normalized(phase_tol);
                (a[k * n + k].re, vec)
            })
            .collect();
        pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));

        // break degenerate ties lexicographically; values within a group
        // agree to the tie tolerance, so only the vector order matters
        let tie = norm.max(F::one()) * F::of(1e-9);
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && (pairs[end - 1].0 - pairs[end].0).abs() <= tie {
                end += 1;
            }
            pairs[start..end].sort_by(|x, y| lex_cmp(x.1.entries(), y.1.entries()));
            start = end;
        }

        let (values, vectors) = pairs.into_iter().unzip();
        Ok(EighDecomposition { values, vectors })
    }

    /// `eigh_with_tol` at the crate default tolerance.
    pub fn eigh(&self) -> Result<EighDecomposition<F>> {
        self.eigh_with_tol(F::of(crate::DEFAULT_TOL))
    }

    /// Purifies a positive semidefinite state: returns a vector on
    /// `d (x) r` with `r` the number of eigenvalues above `rank_cutoff`,
    /// whose ancilla partial trace reproduces the input.
    ///
    /// Errors if an eigenvalue lies below `-tol` (input is not a state).
    pub fn purify(&self, rank_cutoff: F, tol: F) -> Result<Purification<F>> {
        let eig = self.eigh_with_tol(tol)?;
        if let Some(neg) = eig.values.iter().find(|&&l| l < -tol) {
            return Err(Error::NotAState(format!(
                "negative eigenvalue {:.3e} below tolerance",
                neg.as_f64()
            )));
        }
        let r = eig.values.iter().filter(|&&l| l > rank_cutoff).count().max(1);
        let d = self.side();
        let mut entries = vec![C::<F>::zero(); d * r];
        for (k, (&lambda, vec)) in eig.values.iter().zip(&eig.vectors).enumerate().take(r) {
            let w = lambda.max(F::zero()).sqrt();
            for i in 0..d {
                entries[i * r + k] += vec.entries()[i] * Complex::new(w, F::zero());
            }
        }
        Ok(Purification { vector: UnitVector::new(entries)?, ancilla_dim: r })
    }
}
