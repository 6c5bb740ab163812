//! Real scalar abstraction for the matrix / hyperbolic-model layer.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

/// Real scalar the 2×2 matrix and hyperbolic-model layers are generic over.
///
/// `f32` works for the geometric primitives; the solver layers are pinned to
/// `f64` because their tolerances sit below `f32` resolution.
pub trait Scalar:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    fn from_f64c(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for the complex type over a scalar.
pub type Cx<S> = Complex<S>;

/// `Complex` constant from f64 parts.
pub fn cx<S: Scalar>(re: f64, im: f64) -> Cx<S> {
    Complex::new(S::from_f64c(re), S::from_f64c(im))
}
