//! 2×2 complex matrices: arithmetic, closed-form exp/log/powers, SU(2) tests.
//!
//! Exponential and logarithm use the Cayley–Hamilton closed form for 2×2
//! matrices (split off the trace, the trace-free part B satisfies B² = δ²·I),
//! so nilpotent and diagonal cases are exact rather than series-truncated.

use crate::error::Error;
use crate::scalar::{Cx, Scalar};
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// 2×2 complex matrix over the real scalar `S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2<S: Scalar> {
    pub m11: Cx<S>,
    pub m12: Cx<S>,
    pub m21: Cx<S>,
    pub m22: Cx<S>,
}

impl<S: Scalar> Mat2<S> {
    pub fn new(m11: Cx<S>, m12: Cx<S>, m21: Cx<S>, m22: Cx<S>) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::new(Cx::one(), Cx::zero(), Cx::zero(), Cx::one())
    }

    pub fn zero() -> Self {
        Self::new(Cx::zero(), Cx::zero(), Cx::zero(), Cx::zero())
    }

    pub fn diag(a: Cx<S>, d: Cx<S>) -> Self {
        Self::new(a, Cx::zero(), Cx::zero(), d)
    }

    /// diag(e^{s/2}, e^{-s/2}); transports the point (0,0,1) up the vertical
    /// axis at unit speed in the half-space model.
    pub fn xi(s: S) -> Self {
        let half = s / S::from_f64c(2.0);
        Self::diag(
            Complex::new(half.exp(), S::zero()),
            Complex::new((-half).exp(), S::zero()),
        )
    }

    pub fn trace(&self) -> Cx<S> {
        self.m11 + self.m22
    }

    pub fn det(&self) -> Cx<S> {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// Inverse scaled by 1/det; errors only on (numerically) singular input.
    pub fn inverse(&self) -> Result<Self, Error> {
        let d = self.det();
        if d.norm() < S::from_f64c(1e-300) {
            return Err(Error::Numerical("singular 2x2 matrix".into()));
        }
        Ok(Self::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d))
    }

    /// Inverse assuming det = 1 (adjugate); exact for SL(2,C) inputs.
    pub fn inverse_sl(&self) -> Self {
        Self::new(self.m22, -self.m12, -self.m21, self.m11)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(self.m11.conj(), self.m21.conj(), self.m12.conj(), self.m22.conj())
    }

    /// Frobenius norm.
    pub fn norm(&self) -> S {
        (self.m11.norm_sqr() + self.m12.norm_sqr() + self.m21.norm_sqr() + self.m22.norm_sqr())
            .sqrt()
    }

    pub fn scale(&self, k: Cx<S>) -> Self {
        Self::new(self.m11 * k, self.m12 * k, self.m21 * k, self.m22 * k)
    }

    pub fn apply(&self, v: [Cx<S>; 2]) -> [Cx<S>; 2] {
        [
            self.m11 * v[0] + self.m12 * v[1],
            self.m21 * v[0] + self.m22 * v[1],
        ]
    }

    /// Largest absolute determinant drift from 1.
    pub fn det_defect(&self) -> S {
        (self.det() - Cx::one()).norm()
    }

    /// Eigenvalues (μ ± δ with μ = tr/2, δ² = μ² − det).
    pub fn eigenvalues(&self) -> (Cx<S>, Cx<S>) {
        let mu = self.trace() / S::from_f64c(2.0);
        let delta = (mu * mu - self.det()).sqrt();
        (mu + delta, mu - delta)
    }

    /// Matrix exponential, closed form.
    ///
    /// With μ = tr/2, B = M − μI (so B² = δ²I, δ² = μ² − det M):
    /// exp(M) = e^μ (cosh δ · I + sinhc δ · B). Exact for nilpotent and
    /// diagonal matrices.
    pub fn exp(&self) -> Self {
        let two = S::from_f64c(2.0);
        let mu = self.trace() / two;
        let b = *self - Self::diag(mu, mu);
        let delta_sq = mu * mu - self.det();
        let (ch, shc) = cosh_sinhc(delta_sq);
        let emu = mu.exp();
        (Self::diag(ch, ch) + b.scale(shc)).scale(emu)
    }

    /// Principal matrix logarithm.
    ///
    /// Valid on the principal-branch neighborhood (no eigenvalue on the
    /// closed negative real axis). log M = c₀ I + c₁ (M − μI) with
    /// c₀ = (Log λ₁ + Log λ₂)/2 and c₁ = atanh(δ/μ)/δ.
    pub fn log(&self) -> Result<Self, Error> {
        let two = S::from_f64c(2.0);
        let mu = self.trace() / two;
        let delta_sq = mu * mu - self.det();
        let delta = delta_sq.sqrt();
        let (l1, l2) = (mu + delta, mu - delta);
        for l in [l1, l2] {
            let tol = S::from_f64c(1e-12) * l.norm().max(S::one());
            if l.norm() < S::from_f64c(1e-300) || (l.re <= S::zero() && l.im.abs() <= tol) {
                return Err(Error::Domain(format!(
                    "eigenvalue {l} on the branch cut of the principal log"
                )));
            }
        }
        let c0 = (l1.ln() + l2.ln()) / two;
        // c₁ = atanh(δ/μ)/δ; even in δ, smooth limit 1/μ at δ = 0.
        let x = delta / mu;
        let c1 = if x.norm() < S::from_f64c(1e-4) {
            let x2 = x * x;
            (Cx::<S>::one() + x2 / S::from_f64c(3.0) + x2 * x2 / S::from_f64c(5.0)) / mu
        } else {
            x.atanh() / delta
        };
        let b = *self - Self::diag(mu, mu);
        Ok(Self::diag(c0, c0) + b.scale(c1))
    }

    /// M^λ = exp(λ log M).
    pub fn pow(&self, lambda: Cx<S>) -> Result<Self, Error> {
        Ok(self.log()?.scale(lambda).exp())
    }

    /// Deviation of the (sign-normalized) matrix from SU(2).
    ///
    /// With L = log(±M) (sign chosen so Re tr ≥ 0), returns
    /// |Re L¹¹| + |L¹² + conj L²¹|; zero iff M ∈ SU(2) within the branch
    /// domain of the log.
    pub fn su2_defect(&self) -> Result<S, Error> {
        let m = if self.trace().re < S::zero() { -*self } else { *self };
        let l = m.log()?;
        Ok(l.m11.re.abs() + (l.m12 + l.m21.conj()).norm())
    }
}

/// (cosh δ, sinh δ / δ) from δ², without choosing a branch of δ.
fn cosh_sinhc<S: Scalar>(delta_sq: Cx<S>) -> (Cx<S>, Cx<S>) {
    if delta_sq.norm() < S::from_f64c(1e-8) {
        // cosh δ = 1 + δ²/2 + δ⁴/24, sinhc δ = 1 + δ²/6 + δ⁴/120
        let d2 = delta_sq;
        let d4 = d2 * d2;
        (
            Cx::<S>::one() + d2 / S::from_f64c(2.0) + d4 / S::from_f64c(24.0),
            Cx::<S>::one() + d2 / S::from_f64c(6.0) + d4 / S::from_f64c(120.0),
        )
    } else {
        let delta = delta_sq.sqrt();
        (delta.cosh(), delta.sinh() / delta)
    }
}

impl<S: Scalar> Add for Mat2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)
    }
}

impl<S: Scalar> Sub for Mat2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.m11 - o.m11, self.m12 - o.m12, self.m21 - o.m21, self.m22 - o.m22)
    }
}

impl<S: Scalar> Neg for Mat2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.m11, -self.m12, -self.m21, -self.m22)
    }
}

impl<S: Scalar> Mul for Mat2<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }
}
