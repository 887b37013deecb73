//! Finite-dimensional verification toolkit for contexts on multi-factor
//! Hilbert spaces, positive-over-pure-tensor (POPT) states and their
//! bijection with contextual integrals, a generic commutative-monad
//! Markov-chain engine with the finite distribution monad, and numerical
//! demonstrations of POPT monogamy and the resulting triviality of these
//! Markov chains.
//!
//! The numeric kernel is generic over the real scalar (`f32`/`f64`) via
//! [`scalar::Scalar`]; concrete `f64` aliases live at the crate root.

pub mod contexts;
pub mod error;
pub mod integrals;
pub mod linalg;
pub mod monad;
pub mod monogamy;
pub mod popt;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default tolerance for Hermiticity/positivity checks, overridable per call.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Singular-value cutoff for span membership and span intersection.
pub const SPAN_CUTOFF: f64 = 1e-9;

// Concrete f64 aliases.
pub type Operator64 = linalg::ComplexOperator<f64>;
pub type UnitVector64 = linalg::UnitVector<f64>;
pub type Context64 = contexts::Context<f64>;
pub type ProductContext64 = contexts::ProductContext<f64>;
pub type PoptState64 = popt::PoptState<f64>;
pub type FiniteDist64 = monad::FiniteDist<f64>;
pub type Kernel64 = monad::Kernel<f64>;
