//! Real-scalar abstraction: all numeric modules are generic over the
//! floating-point type via `num-traits`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type the toolkit is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Conversion from an `f64` constant (tolerances, literal weights).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("representable f64 constant")
    }

    /// Lossy view as `f64`, used for reporting and error payloads.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the generic real scalar.
pub type C<F> = Complex<F>;

/// Complex constant from `f64` parts.
pub fn cplx<F: Scalar>(re: f64, im: f64) -> C<F> {
    Complex::new(F::of(re), F::of(im))
}
