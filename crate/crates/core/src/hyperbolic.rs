//! Hyperbolic 3-space model layer: Minkowski ↔ hermitian identification,
//! half-space projection, SL(2,C) isometry action on points, boundary points
//! and horospheres.
//!
//! A Minkowski point x = (x0,x1,x2,x3) is identified with the hermitian
//! matrix X = [[x0+x3, x1+i x2],[x1−i x2, x0−x3]]; the hyperboloid
//! ⟨x,x⟩ = −1, x0 > 0 becomes the positive definite matrices with det 1.
//! Isometries act by X ↦ H X H* and on the ideal boundary by homographies.

use crate::error::Error;
use crate::mat2::Mat2;
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Point of the Minkowski hyperboloid model (generic scalar).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianPoint0<S: Scalar> {
    pub x0: S,
    pub x1: S,
    pub x2: S,
    pub x3: S,
}

/// Point of the upper half-space model, x3 > 0 (generic scalar).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePoint0<S: Scalar> {
    pub x1: S,
    pub x2: S,
    pub x3: S,
}

/// Point of the ideal boundary C ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint0<S: Scalar> {
    Finite(Cx<S>),
    Infinity,
}

impl<S: Scalar> HermitianPoint0<S> {
    pub fn new(x0: S, x1: S, x2: S, x3: S) -> Self {
        Self { x0, x1, x2, x3 }
    }

    /// Minkowski inner product ⟨x,y⟩ = −x0y0 + x1y1 + x2y2 + x3y3.
    pub fn inner(&self, o: &Self) -> S {
        -self.x0 * o.x0 + self.x1 * o.x1 + self.x2 * o.x2 + self.x3 * o.x3
    }

    /// Hermitian-matrix image.
    pub fn to_matrix(&self) -> Mat2<S> {
        Mat2::new(
            Complex::new(self.x0 + self.x3, S::zero()),
            Complex::new(self.x1, self.x2),
            Complex::new(self.x1, -self.x2),
            Complex::new(self.x0 - self.x3, S::zero()),
        )
    }

    /// Inverse of [`to_matrix`]; the anti-hermitian part is discarded.
    pub fn from_matrix(m: &Mat2<S>) -> Self {
        let two = S::from_f64c(2.0);
        Self {
            x0: (m.m11.re + m.m22.re) / two,
            x1: (m.m12.re + m.m21.re) / two,
            x2: (m.m12.im - m.m21.im) / two,
            x3: (m.m11.re - m.m22.re) / two,
        }
    }

    /// Membership defect for the hyperboloid ⟨x,x⟩ = −1, x0 > 0.
    pub fn hyperboloid_defect(&self) -> S {
        (self.inner(self) + S::one()).abs()
    }
}

impl<S: Scalar> HalfSpacePoint0<S> {
    pub fn new(x1: S, x2: S, x3: S) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn horizontal(&self) -> Cx<S> {
        Complex::new(self.x1, self.x2)
    }

    /// Hyperbolic distance in the half-space model.
    pub fn dist(&self, o: &Self) -> S {
        let two = S::from_f64c(2.0);
        let dh = (self.horizontal() - o.horizontal()).norm_sqr();
        let dv = (self.x3 - o.x3) * (self.x3 - o.x3);
        let arg = S::one() + (dh + dv) / (two * self.x3 * o.x3);
        (arg + (arg * arg - S::one()).max(S::zero()).sqrt()).ln()
    }
}

/// Half-space projection Φ(x) = (x1/(x0−x3), x2/(x0−x3), 1/(x0−x3)).
pub fn minkowski_to_half_space<S: Scalar>(
    x: &HermitianPoint0<S>,
) -> Result<HalfSpacePoint0<S>, Error> {
    let d = x.x0 - x.x3;
    if d <= S::from_f64c(1e-12) {
        return Err(Error::Degenerate(
            "x0 - x3 <= tol: point at the ideal boundary".into(),
        ));
    }
    Ok(HalfSpacePoint0::new(x.x1 / d, x.x2 / d, S::one() / d))
}

/// Inverse of [`minkowski_to_half_space`] onto the hyperboloid.
pub fn half_space_to_minkowski<S: Scalar>(p: &HalfSpacePoint0<S>) -> HermitianPoint0<S> {
    let two = S::from_f64c(2.0);
    let inv = S::one() / p.x3; // x0 − x3
    let x1 = p.x1 * inv;
    let x2 = p.x2 * inv;
    let sum = (S::one() + x1 * x1 + x2 * x2) / inv; // x0 + x3
    HermitianPoint0::new((sum + inv) / two, x1, x2, (sum - inv) / two)
}

/// Immersion formula: half-space image of F F* for F ∈ SL(2,C).
///
/// x1 + i x2 = (F11 conj F21 + F12 conj F22) / (|F21|² + |F22|²),
/// x3 = 1 / (|F21|² + |F22|²).
pub fn immerse<S: Scalar>(f: &Mat2<S>) -> Result<HalfSpacePoint0<S>, Error> {
    let den = f.m21.norm_sqr() + f.m22.norm_sqr();
    if den < S::from_f64c(1e-300) {
        return Err(Error::Numerical("immersion denominator vanishes".into()));
    }
    let h = (f.m11 * f.m21.conj() + f.m12 * f.m22.conj()) / den;
    Ok(HalfSpacePoint0::new(h.re, h.im, S::one() / den))
}

/// Isometry action on the hyperboloid: H · X = H X H*.
pub fn act_isometry<S: Scalar>(h: &Mat2<S>, x: &HermitianPoint0<S>) -> HermitianPoint0<S> {
    let m = *h * x.to_matrix() * h.adjoint();
    HermitianPoint0::from_matrix(&m)
}

/// Isometry action on a half-space point (through the hyperboloid).
pub fn act_half_space<S: Scalar>(
    h: &Mat2<S>,
    p: &HalfSpacePoint0<S>,
) -> Result<HalfSpacePoint0<S>, Error> {
    minkowski_to_half_space(&act_isometry(h, &half_space_to_minkowski(p)))
}

/// Boundary action H · z = (H11 z + H12)/(H21 z + H22), projectively at ∞.
pub fn act_boundary<S: Scalar>(h: &Mat2<S>, z: &BoundaryPoint0<S>) -> BoundaryPoint0<S> {
    let tiny = S::from_f64c(1e-300);
    match z {
        BoundaryPoint0::Infinity => {
            if h.m21.norm() < tiny {
                BoundaryPoint0::Infinity
            } else {
                BoundaryPoint0::Finite(h.m11 / h.m21)
            }
        }
        BoundaryPoint0::Finite(z) => {
            let den = h.m21 * z + h.m22;
            if den.norm() < tiny {
                BoundaryPoint0::Infinity
            } else {
                BoundaryPoint0::Finite((h.m11 * z + h.m12) / den)
            }
        }
    }
}

/// Horosphere as a linear level set on the hyperboloid:
/// S = { X : u* X u = κ }, κ > 0, u ∈ C² \ {0}.
///
/// Normalized shapes: u = (1, −c̄) for limit point c (then κ = 2R in the
/// half-space model), u = (0, 1) for limit point ∞ (then κ = 1/h).
#[derive(Debug, Clone, Copy)]
pub struct HoroForm<S: Scalar> {
    pub u: [Cx<S>; 2],
    pub kappa: S,
}

impl<S: Scalar> HoroForm<S> {
    /// Sphere tangent to the boundary at `c` with euclidean radius `r`.
    pub fn sphere(c: Cx<S>, r: S) -> Self {
        Self { u: [Cx::one(), -c.conj()], kappa: S::from_f64c(2.0) * r }
    }

    /// Horizontal plane at height `h`.
    pub fn plane(h: S) -> Self {
        Self { u: [Cx::zero(), Cx::one()], kappa: S::one() / h }
    }

    /// Evaluation u* X u − κ; zero on the horosphere.
    pub fn eval(&self, x: &HermitianPoint0<S>) -> S {
        let m = x.to_matrix();
        let v = m.apply([self.u[0], self.u[1]]);
        let q = self.u[0].conj() * v[0] + self.u[1].conj() * v[1];
        q.re - self.kappa
    }

    /// Image under the isometry X ↦ H X H*: u ↦ (H*)⁻¹ u, κ fixed.
    pub fn act(&self, h: &Mat2<S>) -> Result<Self, Error> {
        let hi = h.adjoint().inverse()?;
        let u = hi.apply([self.u[0], self.u[1]]);
        Ok(Self { u: [u[0], u[1]], kappa: self.kappa })
    }

    /// Normalize to the sphere/plane shape and report (limit point, size):
    /// `Finite(c)` with euclidean radius, or `Infinity` with plane height.
    pub fn classify(&self) -> (BoundaryPoint0<S>, S) {
        let two = S::from_f64c(2.0);
        // plane iff u[0] = 0 relative to u's scale
        if self.u[0].norm() <= S::from_f64c(1e-13) * self.u[1].norm() {
            let kappa = self.kappa / self.u[1].norm_sqr();
            (BoundaryPoint0::Infinity, S::one() / kappa)
        } else {
            let c = -(self.u[1] / self.u[0]).conj();
            let kappa = self.kappa / self.u[0].norm_sqr();
            (BoundaryPoint0::Finite(c), kappa / two)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{C64, HalfSpacePoint, HermitianPoint, Mat2C};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn origin_maps_to_unit_height() {
        let x = HermitianPoint::new(1.0, 0.0, 0.0, 0.0);
        let p = minkowski_to_half_space(&x).unwrap();
        assert_eq!((p.x1, p.x2, p.x3), (0.0, 0.0, 1.0));
    }

    #[test]
    fn xi_traces_vertical_axis() {
        // Φ(Ξ(s)Ξ(s)*) = (0,0,e^s)
        for &s in &[0.0, 0.3, -0.7, 2.0] {
            let xi = Mat2C::xi(s);
            let p = immerse(&xi).unwrap();
            assert_relative_eq!(p.x3, s.exp(), max_relative = 1e-13);
            assert!(p.x1.abs() < 1e-14 && p.x2.abs() < 1e-14);
        }
    }

    #[test]
    fn geodesic_point_formula() {
        // (cosh r, sinh r, 0, 0) → (tanh r, 0, 1/cosh r), unit speed
        let r = 0.9f64;
        let x = HermitianPoint::new(r.cosh(), r.sinh(), 0.0, 0.0);
        assert!(x.hyperboloid_defect() < 1e-12);
        let p = minkowski_to_half_space(&x).unwrap();
        assert_relative_eq!(p.x1, r.sinh() / r.cosh(), max_relative = 1e-13);
        assert_relative_eq!(p.x3, 1.0 / r.cosh(), max_relative = 1e-13);
        // numeric speed check along the geodesic
        let h = 1e-5;
        let xp = HermitianPoint::new((r + h).cosh(), (r + h).sinh(), 0.0, 0.0);
        let pp = minkowski_to_half_space(&xp).unwrap();
        let speed = p.dist(&pp) / h;
        assert_relative_eq!(speed, 1.0, max_relative = 1e-4);
    }

    #[test]
    fn immerse_equals_projection_of_ff_star() {
        let f = Mat2C::new(c(1.1, 0.2), c(-0.4, 0.3), c(0.2, -0.5), c(0.7, 0.1));
        let f = f.scale(C64::new(1.0, 0.0) / f.det().sqrt()); // det 1
        let lhs = immerse(&f).unwrap();
        let ffs = f * f.adjoint();
        let rhs = minkowski_to_half_space(&HermitianPoint::from_matrix(&ffs)).unwrap();
        assert_relative_eq!(lhs.x1, rhs.x1, max_relative = 1e-12);
        assert_relative_eq!(lhs.x2, rhs.x2, max_relative = 1e-12);
        assert_relative_eq!(lhs.x3, rhs.x3, max_relative = 1e-12);
    }

    #[test]
    fn boundary_action_diagonal_scales() {
        let xi = Mat2C::xi(0.8);
        let z = act_boundary(&xi, &BoundaryPoint0::Finite(c(0.3, -0.2)));
        match z {
            BoundaryPoint0::Finite(w) => {
                let expect = c(0.3, -0.2) * (0.8f64).exp();
                assert!((w - expect).norm() < 1e-13);
            }
            _ => panic!("finite expected"),
        }
        assert!(matches!(
            act_boundary(&xi, &BoundaryPoint0::Infinity),
            BoundaryPoint0::Infinity
        ));
    }

    #[test]
    fn half_space_roundtrip_grid() {
        for i in -3..4 {
            for j in -3..4 {
                for k in 1..6 {
                    let p = HalfSpacePoint::new(i as f64 * 0.7, j as f64 * 0.5, k as f64 * 0.4);
                    let x = half_space_to_minkowski(&p);
                    assert!(x.hyperboloid_defect() < 1e-10, "defect {}", x.hyperboloid_defect());
                    let q = minkowski_to_half_space(&x).unwrap();
                    assert!((p.x1 - q.x1).abs() + (p.x2 - q.x2).abs() + (p.x3 - q.x3).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn horoform_classify_roundtrip() {
        let s = HoroForm::sphere(c(1.5, -0.5), 0.5);
        match s.classify() {
            (BoundaryPoint0::Finite(p), r) => {
                assert!((p - c(1.5, -0.5)).norm() < 1e-14);
                assert_relative_eq!(r, 0.5);
            }
            _ => panic!(),
        }
        let pl = HoroForm::plane(2.0);
        match pl.classify() {
            (BoundaryPoint0::Infinity, h) => assert_relative_eq!(h, 2.0),
            _ => panic!(),
        }
    }

    #[test]
    fn horoform_eval_on_members() {
        // top of the sphere at c with radius R is (c, 2R)
        let s = HoroForm::sphere(c(0.3, 0.7), 0.4);
        let top = half_space_to_minkowski(&HalfSpacePoint::new(0.3, 0.7, 0.8));
        assert!(s.eval(&top).abs() < 1e-12);
        let pl = HoroForm::plane(1.0);
        let pt = half_space_to_minkowski(&HalfSpacePoint::new(2.0, -3.0, 1.0));
        assert!(pl.eval(&pt).abs() < 1e-12);
    }

    fn arb_su2() -> impl Strategy<Value = Mat2C> {
        ([-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]).prop_filter_map("nonzero quaternion", |q| {
            let n = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
            if n < 1e-3 {
                return None;
            }
            let q: Vec<f64> = q.iter().map(|x| x / n).collect();
            Some(Mat2C::new(
                c(q[0], q[1]),
                c(q[2], q[3]),
                c(-q[2], q[3]),
                c(q[0], -q[1]),
            ))
        })
    }

    fn arb_sl2() -> impl Strategy<Value = Mat2C> {
        ((-1.0f64..1.0), (-1.0f64..1.0), (-1.0f64..1.0), (-1.0f64..1.0), (-1.0f64..1.0), (-1.0f64..1.0))
            .prop_map(|(a, b, cc, d, e, f)| {
                let m = Mat2C::new(c(1.0 + a, b), c(cc, d), c(e, f), c(1.0, 0.0));
                m.scale(C64::new(1.0, 0.0) / m.det().sqrt())
            })
            .prop_filter("well-conditioned", |m| m.det_defect() < 1e-9)
    }

    proptest! {
        #[test]
        fn immerse_invariant_under_right_su2(f in arb_sl2(), u in arb_su2()) {
            let a = immerse(&f).unwrap();
            let b = immerse(&(f * u)).unwrap();
            prop_assert!((a.x1 - b.x1).abs() < 1e-10);
            prop_assert!((a.x2 - b.x2).abs() < 1e-10);
            prop_assert!((a.x3 - b.x3).abs() < 1e-10 * a.x3.max(1.0));
        }

        #[test]
        fn isometry_action_composes(h1 in arb_sl2(), h2 in arb_sl2()) {
            let x = half_space_to_minkowski(&HalfSpacePoint::new(0.3, -0.4, 1.7));
            let a = act_isometry(&h2, &act_isometry(&h1, &x));
            let b = act_isometry(&(h2 * h1), &x);
            prop_assert!((a.x0 - b.x0).abs() < 1e-9 * a.x0.abs().max(1.0));
            prop_assert!((a.x1 - b.x1).abs() < 1e-9 * a.x0.abs().max(1.0));
            prop_assert!((a.x2 - b.x2).abs() < 1e-9 * a.x0.abs().max(1.0));
            prop_assert!((a.x3 - b.x3).abs() < 1e-9 * a.x0.abs().max(1.0));
        }

        #[test]
        fn isometry_preserves_hyperboloid(h in arb_sl2()) {
            let x = half_space_to_minkowski(&HalfSpacePoint::new(-0.8, 0.2, 0.6));
            let y = act_isometry(&h, &x);
            prop_assert!(y.hyperboloid_defect() < 1e-9);
        }
    }
}
