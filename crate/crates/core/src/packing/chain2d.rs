//! Horocycle chains in the hyperbolic plane, disk model.
//!
//! Built as Ford circles in the half-plane (each new horocycle is the
//! Apollonius completion of two tangent ones with the ideal boundary) and
//! mapped to the disk; a chain of n horocycles carries exactly 2n − 3
//! tangency points.

use crate::error::Error;
use crate::C64;
use serde::{Deserialize, Serialize};

/// Horocycle packing in the disk model: circles internally tangent to the
/// unit circle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Packing2D {
    /// (center, radius) in the disk model.
    pub circles: Vec<(C64, f64)>,
    pub tangencies: Vec<(usize, usize)>,
}

impl Packing2D {
    pub fn n(&self) -> usize {
        self.circles.len()
    }

    pub fn m(&self) -> usize {
        self.tangencies.len()
    }

    /// All circles are horocycles (internally tangent to the unit circle),
    /// listed pairs are tangent, unlisted pairs disjoint.
    pub fn validate(&self) -> Result<(), Error> {
        let tol = 1e-9;
        for (k, (c, r)) in self.circles.iter().enumerate() {
            if c.norm() + r - 1.0 > tol * 4.0 || (c.norm() + r - 1.0) < -tol * 4.0 {
                return Err(Error::InvariantViolation(format!(
                    "circle {k} is not a horocycle: |c| + r - 1 = {}",
                    c.norm() + r - 1.0
                )));
            }
        }
        let listed: std::collections::BTreeSet<(usize, usize)> =
            self.tangencies.iter().cloned().collect();
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let (ci, ri) = self.circles[i];
                let (cj, rj) = self.circles[j];
                let gap = (ci - cj).norm() - (ri + rj);
                let scale = (ri + rj).max(1e-12);
                if listed.contains(&(i, j)) {
                    if gap.abs() > 1e-7 * scale.max(1.0) {
                        return Err(Error::InvariantViolation(format!(
                            "listed pair ({i},{j}) not tangent: gap {gap}"
                        )));
                    }
                } else if gap < -1e-7 * scale.max(1.0) {
                    return Err(Error::InvariantViolation(format!(
                        "unlisted pair ({i},{j}) overlaps: gap {gap}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Planar-graph certificate: the boundary tangency points plus ∞ give a
    /// planar graph with n + 1 vertices and m + n edges, so m + n ≤ 3(n+1) − 6.
    pub fn planar_certificate_ok(&self) -> bool {
        let (n, m) = (self.n() as i64, self.m() as i64);
        m + n <= 3 * (n + 1) - 6
    }
}

/// Chain of n horocycles with exactly 2n − 3 tangency points.
pub fn build_horocycle_chain(n: usize) -> Result<Packing2D, Error> {
    if n < 2 {
        return Err(Error::Precondition("need at least two horocycles".into()));
    }
    // Ford circles at fractions p/q: center (p/q, 1/(2q²)), radius 1/(2q²).
    // Start with 0/1 and 1/1; each step inserts the mediant of the current
    // leftmost adjacent pair, tangent to exactly its two parents.
    let mut fracs: Vec<(i64, i64)> = vec![(0, 1), (1, 1)];
    let mut parents: Vec<(usize, usize)> = Vec::new();
    let mut pair = (0usize, 1usize);
    for _ in 2..n {
        let (a, b) = (fracs[pair.0], fracs[pair.1]);
        let med = (a.0 + b.0, a.1 + b.1);
        fracs.push(med);
        let k = fracs.len() - 1;
        parents.push((pair.0, k));
        parents.push((pair.1, k));
        pair = (pair.0, k);
    }

    let circles: Vec<(C64, f64)> = fracs
        .iter()
        .map(|&(p, q)| {
            let r = 1.0 / (2.0 * (q * q) as f64);
            let c = C64::new(p as f64 / q as f64, r);
            mobius_circle_to_disk(c, r)
        })
        .collect();

    let mut tangencies: Vec<(usize, usize)> = vec![(0, 1)];
    for (a, b) in parents {
        tangencies.push((a.min(b), a.max(b)));
    }
    tangencies.sort_unstable();

    let p = Packing2D { circles, tangencies };
    p.validate()?;
    Ok(p)
}

/// Image of a circle under the Cayley map z ↦ (z − i)/(z + i), upper
/// half-plane to unit disk, via three points and a circumcircle.
fn mobius_circle_to_disk(center: C64, r: f64) -> (C64, f64) {
    let i = C64::new(0.0, 1.0);
    let map = |z: C64| (z - i) / (z + i);
    let p1 = map(center + C64::new(r, 0.0));
    let p2 = map(center + C64::new(0.0, r));
    let p3 = map(center - C64::new(r, 0.0));
    circumcircle(p1, p2, p3)
}

fn circumcircle(a: C64, b: C64, c: C64) -> (C64, f64) {
    let d = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    let (na, nb, nc) = (a.norm_sqr(), b.norm_sqr(), c.norm_sqr());
    let ux = (na * (b.im - c.im) + nb * (c.im - a.im) + nc * (a.im - b.im)) / d;
    let uy = (na * (c.re - b.re) + nb * (a.re - c.re) + nc * (b.re - a.re)) / d;
    let center = C64::new(ux, uy);
    (center, (a - center).norm())
}
