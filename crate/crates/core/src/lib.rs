//! Numerical engine for constant-mean-curvature-1 surfaces in hyperbolic
//! 3-space built by desingularizing horosphere packings.
//!
//! The pipeline: generate or load a packing of tangent horospheres, build the
//! meromorphic data (Gauss map, differential, flat connection) on a charted
//! model of the degenerating Riemann surface, solve the SU(2) monodromy
//! problem at first order by Newton iteration, and mesh the resulting
//! immersion (horosphere caps, catenoidal necks, transition annuli) together
//! with end-behavior diagnostics.
//!
//! The low-level matrix/hyperbolic layer is generic over the real scalar;
//! the solver and meshing layers use the `f64` aliases below.

pub mod error;
pub mod geometry;
pub mod hyperbolic;
pub mod io;
pub mod mat2;
pub mod monodromy;
pub mod packing;
pub mod scalar;
pub mod surface;
pub mod tol;

pub use error::Error;
pub use scalar::Scalar;

/// Real scalar used by the solver and meshing layers.
pub type Real = f64;
/// Complex scalar over [`Real`].
pub type C64 = num_complex::Complex<f64>;
/// 2×2 complex matrix over [`Real`].
pub type Mat2C = mat2::Mat2<f64>;
/// Point on the Minkowski hyperboloid over [`Real`].
pub type HermitianPoint = hyperbolic::HermitianPoint0<f64>;
/// Point of the half-space model over [`Real`].
pub type HalfSpacePoint = hyperbolic::HalfSpacePoint0<f64>;
/// Point of the ideal boundary (Riemann sphere) over [`Real`].
pub type BoundaryPoint = hyperbolic::BoundaryPoint0<f64>;

pub type Result<T> = std::result::Result<T, Error>;
