//! Packing generators: equilateral-lattice stacks and apollonian packings.

use super::{tangency_point, tangency_test, Horosphere, Packing, Tangency};
use crate::error::Error;
use crate::hyperbolic::act_half_space;
use crate::{C64, HalfSpacePoint, Mat2C};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Radius-1/2 spheres on the equilateral lattice points inside the closed
/// disk D(0,R), topped by the plane x3 = 1.
pub fn build_lattice_packing(r: f64) -> Result<Packing, Error> {
    if r < 0.0 {
        return Err(Error::Precondition("lattice radius must be nonnegative".into()));
    }
    let sqrt3_2 = 3f64.sqrt() / 2.0;
    let bound = (2.0 * r / 3f64.sqrt()).ceil() as i64 + 2;
    let mut pts: Vec<C64> = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            let x = a as f64 + b as f64 * 0.5;
            let y = b as f64 * sqrt3_2;
            if x * x + y * y <= r * r + 1e-9 {
                pts.push(C64::new(x, y));
            }
        }
    }
    pts.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut horospheres: Vec<Horosphere> =
        pts.into_iter().map(|p| Horosphere::Sphere { p, r: 0.5 }).collect();
    horospheres.push(Horosphere::Plane { h: 1.0 });
    Packing::from_horospheres(horospheres)
}

/// The two horospheres tangent to three mutually tangent ones.
///
/// Reduces to the standard frame by an isometry sending S1 to the plane
/// x3 = 1 and the S1∩S2 tangency to (0,0,1); there S2 and S3 are radius-1/2
/// spheres at boundary distance 1 and the solutions complete equilateral
/// triangles. Results are mapped back and returned in deterministic order.
pub fn solve_apollonius_tangent(
    s1: &Horosphere,
    s2: &Horosphere,
    s3: &Horosphere,
) -> Result<(Horosphere, Horosphere), Error> {
    for (a, b) in [(s1, s2), (s1, s3), (s2, s3)] {
        if tangency_test(a, b) != Tangency::Tangent {
            return Err(Error::Degenerate("inputs must be pairwise tangent".into()));
        }
    }
    let t12 = tangency_point(s1, s2)?;
    let h = standardize(s1, &t12)?;
    let hinv = h.inverse_sl();

    // images (S1 → plane 1, S2 → sphere at 0); S3 lands at |p| = 1
    let s3h = s3.act(&h)?;
    let p3 = match s3h {
        Horosphere::Sphere { p, r } => {
            if (r - 0.5).abs() > 1e-6 || (p.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::Degenerate(format!(
                    "standardized third horosphere off the unit circle: p = {p}, r = {r}"
                )));
            }
            p
        }
        Horosphere::Plane { .. } => {
            return Err(Error::Degenerate("third horosphere degenerated to a plane".into()))
        }
    };

    let rot = C64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    let sol_a = Horosphere::Sphere { p: p3 * rot, r: 0.5 }.act(&hinv)?;
    let sol_b = Horosphere::Sphere { p: p3 * rot.conj(), r: 0.5 }.act(&hinv)?;
    Ok(order_pair(sol_a, sol_b))
}

/// Isometry mapping `s1` to the plane x3 = 1 and the half-space point `t`
/// (assumed on s1) to (0,0,1).
fn standardize(s1: &Horosphere, t: &HalfSpacePoint) -> Result<Mat2C, Error> {
    match s1 {
        Horosphere::Plane { h } => Ok(plane_normalizer(Complex::new(t.x1, t.x2), *h)),
        Horosphere::Sphere { p, .. } => {
            // invert about the limit point: z ↦ −1/(z − p) sends S1 to a plane
            let m1 = Mat2C::new(
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(1.0, 0.0),
                -p,
            );
            let t1 = act_half_space(&m1, t)?;
            Ok(plane_normalizer(Complex::new(t1.x1, t1.x2), t1.x3) * m1)
        }
    }
}

/// Boundary map z ↦ (z − w)/h as an SL(2,C) matrix: plane at height h to
/// plane at height 1, the point (w, h) to (0,0,1).
fn plane_normalizer(w: C64, h: f64) -> Mat2C {
    let sh = h.sqrt();
    Mat2C::new(
        C64::new(1.0 / sh, 0.0),
        -w / sh,
        C64::new(0.0, 0.0),
        C64::new(sh, 0.0),
    )
}

fn order_pair(a: Horosphere, b: Horosphere) -> (Horosphere, Horosphere) {
    let key = |s: &Horosphere| match s {
        Horosphere::Sphere { p, .. } => (1, p.re, p.im),
        Horosphere::Plane { h } => (0, *h, 0.0),
    };
    if key(&a) <= key(&b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Apollonian packing: start from three mutually tangent horospheres and
/// repeatedly insert one of the two completions of a tangent triple, keeping
/// the family a packing. n = 3 + steps, m = 3n − 6.
pub fn build_apollonian_packing(steps: usize, seed: u64) -> Result<Packing, Error> {
    let mut horospheres = vec![
        Horosphere::Plane { h: 1.0 },
        Horosphere::Sphere { p: C64::new(0.0, 0.0), r: 0.5 },
        Horosphere::Sphere { p: C64::new(1.0, 0.0), r: 0.5 },
    ];
    let mut tangencies: Vec<(usize, usize)> = vec![(0, 1), (0, 2), (1, 2)];
    let mut triples: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for _ in 0..steps {
        let start = rng.gen_range(0..triples.len());
        let mut inserted = false;
        'search: for k in 0..triples.len() {
            let tri = triples[(start + k) % triples.len()];
            let (sa, sb) = solve_apollonius_tangent(
                &horospheres[tri[0]],
                &horospheres[tri[1]],
                &horospheres[tri[2]],
            )?;
            for sol in [sa, sb] {
                if fits(&horospheres, &sol, &tri) {
                    let v = horospheres.len();
                    horospheres.push(sol);
                    for &i in &tri {
                        tangencies.push((i.min(v), i.max(v)));
                    }
                    triples.push([tri[0], tri[1], v]);
                    triples.push([tri[0], tri[2], v]);
                    triples.push([tri[1], tri[2], v]);
                    inserted = true;
                    break 'search;
                }
            }
        }
        if !inserted {
            return Err(Error::Geometry(
                "apollonian step failed: no completion keeps the family a packing".into(),
            ));
        }
    }
    let p = Packing { horospheres, tangencies };
    p.validate()?;
    Ok(p)
}

/// New horosphere acceptable iff tangent to exactly the triple and disjoint
/// from everything else.
fn fits(existing: &[Horosphere], sol: &Horosphere, tri: &[usize; 3]) -> bool {
    for (i, s) in existing.iter().enumerate() {
        let want = if tri.contains(&i) { Tangency::Tangent } else { Tangency::Disjoint };
        if tangency_test(sol, s) != want {
            return false;
        }
    }
    true
}
