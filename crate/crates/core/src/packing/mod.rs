//! Horosphere packings in H³ (and horocycle packings in H²): representation,
//! tangency classification, generators, and the combinatorial bounds.

mod chain2d;
mod generate;

pub use chain2d::{build_horocycle_chain, Packing2D};
pub use generate::{build_apollonian_packing, build_lattice_packing, solve_apollonius_tangent};

use crate::error::Error;
use crate::hyperbolic::{BoundaryPoint0, HoroForm};
use crate::tol;
use crate::{BoundaryPoint, C64, HalfSpacePoint, Mat2C};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Horosphere in the upper half-space model: either a euclidean sphere
/// tangent to the boundary plane or a horizontal plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "HoroRepr", into = "HoroRepr")]
pub enum Horosphere {
    Sphere { p: C64, r: f64 },
    Plane { h: f64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum HoroRepr {
    Sphere {
        p: [f64; 2],
        #[serde(rename = "R")]
        r: f64,
    },
    Plane {
        h: f64,
    },
}

impl From<HoroRepr> for Horosphere {
    fn from(r: HoroRepr) -> Self {
        match r {
            HoroRepr::Sphere { p, r } => Horosphere::Sphere { p: C64::new(p[0], p[1]), r },
            HoroRepr::Plane { h } => Horosphere::Plane { h },
        }
    }
}

impl From<Horosphere> for HoroRepr {
    fn from(h: Horosphere) -> Self {
        match h {
            Horosphere::Sphere { p, r } => HoroRepr::Sphere { p: [p.re, p.im], r },
            Horosphere::Plane { h } => HoroRepr::Plane { h },
        }
    }
}

impl Horosphere {
    pub fn limit_point(&self) -> BoundaryPoint {
        match self {
            Horosphere::Sphere { p, .. } => BoundaryPoint0::Finite(*p),
            Horosphere::Plane { .. } => BoundaryPoint0::Infinity,
        }
    }

    /// Euclidean radius (spheres) / height (planes); positive.
    pub fn size(&self) -> f64 {
        match self {
            Horosphere::Sphere { r, .. } => *r,
            Horosphere::Plane { h } => *h,
        }
    }

    pub fn to_form(&self) -> HoroForm<f64> {
        match self {
            Horosphere::Sphere { p, r } => HoroForm::sphere(*p, *r),
            Horosphere::Plane { h } => HoroForm::plane(*h),
        }
    }

    pub fn from_form(f: &HoroForm<f64>) -> Self {
        match f.classify() {
            (BoundaryPoint0::Finite(p), r) => Horosphere::Sphere { p, r },
            (BoundaryPoint0::Infinity, h) => Horosphere::Plane { h },
        }
    }

    /// Image under the isometry X ↦ H X H*.
    pub fn act(&self, h: &Mat2C) -> Result<Self, Error> {
        Ok(Self::from_form(&self.to_form().act(h)?))
    }

    pub fn is_plane(&self) -> bool {
        matches!(self, Horosphere::Plane { .. })
    }
}

/// Outcome of the pairwise position test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tangency {
    Tangent,
    Disjoint,
    Overlapping,
}

/// Classify the relative position of two horospheres.
///
/// Spheres compare ‖p₁−p₂‖² against 4R₁R₂ (equality = tangency); a sphere
/// and a plane compare 2R against h; two planes at distinct heights are
/// disjoint, coincident planes overlap.
pub fn tangency_test(s1: &Horosphere, s2: &Horosphere) -> Tangency {
    let band = |a: f64, b: f64| tol::TOL_TANG * a.abs().max(b.abs()).max(1e-30);
    match (s1, s2) {
        (Horosphere::Sphere { p: p1, r: r1 }, Horosphere::Sphere { p: p2, r: r2 }) => {
            let d2 = (p1 - p2).norm_sqr();
            let t = 4.0 * r1 * r2;
            if (d2 - t).abs() <= band(d2, t) {
                Tangency::Tangent
            } else if d2 > t {
                Tangency::Disjoint
            } else {
                Tangency::Overlapping
            }
        }
        (Horosphere::Sphere { r, .. }, Horosphere::Plane { h })
        | (Horosphere::Plane { h }, Horosphere::Sphere { r, .. }) => {
            let top = 2.0 * r;
            if (top - h).abs() <= band(top, *h) {
                Tangency::Tangent
            } else if top < *h {
                Tangency::Disjoint
            } else {
                Tangency::Overlapping
            }
        }
        (Horosphere::Plane { h: h1 }, Horosphere::Plane { h: h2 }) => {
            if (h1 - h2).abs() <= band(*h1, *h2) {
                Tangency::Overlapping
            } else {
                Tangency::Disjoint
            }
        }
    }
}

/// Point of tangency of two tangent horospheres, in half-space coordinates.
pub fn tangency_point(s1: &Horosphere, s2: &Horosphere) -> Result<HalfSpacePoint, Error> {
    match (s1, s2) {
        (Horosphere::Sphere { p: p1, r: r1 }, Horosphere::Sphere { p: p2, r: r2 }) => {
            let t = r1 / (r1 + r2);
            let h = p1 + (p2 - p1) * t;
            Ok(HalfSpacePoint::new(h.re, h.im, 2.0 * r1 * r2 / (r1 + r2)))
        }
        (Horosphere::Sphere { p, r }, Horosphere::Plane { .. })
        | (Horosphere::Plane { .. }, Horosphere::Sphere { p, r }) => {
            Ok(HalfSpacePoint::new(p.re, p.im, 2.0 * r))
        }
        _ => Err(Error::Degenerate("two planes have no tangency point".into())),
    }
}

/// A horosphere packing: the spheres plus the set I of tangent index pairs
/// (i < j).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Packing {
    pub horospheres: Vec<Horosphere>,
    pub tangencies: Vec<(usize, usize)>,
}

impl Packing {
    /// Assemble from horospheres, computing the tangency set; errors if any
    /// pair overlaps.
    pub fn from_horospheres(horospheres: Vec<Horosphere>) -> Result<Self, Error> {
        let mut tangencies = Vec::new();
        for i in 0..horospheres.len() {
            for j in (i + 1)..horospheres.len() {
                match tangency_test(&horospheres[i], &horospheres[j]) {
                    Tangency::Tangent => tangencies.push((i, j)),
                    Tangency::Disjoint => {}
                    Tangency::Overlapping => {
                        return Err(Error::Geometry(format!(
                            "horospheres {i} and {j} overlap"
                        )))
                    }
                }
            }
        }
        Ok(Self { horospheres, tangencies })
    }

    pub fn n(&self) -> usize {
        self.horospheres.len()
    }

    pub fn m(&self) -> usize {
        self.tangencies.len()
    }

    pub fn graph(&self) -> TangencyGraph {
        TangencyGraph { n: self.n(), edges: self.tangencies.clone() }
    }

    /// Re-derive the tangency set and check it matches; also check that all
    /// non-listed pairs are disjoint.
    pub fn validate(&self) -> Result<(), Error> {
        let listed: std::collections::BTreeSet<(usize, usize)> =
            self.tangencies.iter().cloned().collect();
        for (i, j) in &listed {
            if *j <= *i || *j >= self.n() {
                return Err(Error::Validation(format!("bad tangency pair ({i},{j})")));
            }
        }
        for i in 0..self.n() {
            for j in (i + 1)..self.n() {
                let t = tangency_test(&self.horospheres[i], &self.horospheres[j]);
                let expect = if listed.contains(&(i, j)) { Tangency::Tangent } else { Tangency::Disjoint };
                if t != expect {
                    return Err(Error::InvariantViolation(format!(
                        "pair ({i},{j}) is {t:?}, expected {expect:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Image of the whole packing under an isometry.
    pub fn act(&self, h: &Mat2C) -> Result<Self, Error> {
        let horospheres = self
            .horospheres
            .iter()
            .map(|s| s.act(h))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { horospheres, tangencies: self.tangencies.clone() })
    }
}

/// Combinatorial view of a packing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TangencyGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TangencyGraph {
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Genus of the surface built on this packing: m − n + 1 (connected).
    pub fn genus(&self) -> i64 {
        self.m() as i64 - self.n as i64 + 1
    }

    /// Number of connected components (union-find).
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut Vec<usize>, i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut roots: Vec<usize> = (0..self.n).map(|i| find(&mut parent, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components() == 1
    }

    /// Cycle rank edges − vertices + components; equals genus when connected.
    pub fn cycle_rank(&self) -> i64 {
        self.m() as i64 - self.n as i64 + self.components() as i64
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == v || *b == v).count()
    }
}

/// Report produced by [`verify_packing_bounds`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PackingReport {
    pub n: usize,
    pub m: usize,
    pub genus: i64,
    pub connected: bool,
    /// m ≤ 5n − 16 for n ≥ 5 (trivially true below).
    pub bound_5n16_ok: bool,
    /// After a generic isometry, the smallest-radius horosphere has ≤ 5
    /// tangencies.
    pub smallest_radius_degree: usize,
    pub lemma_ok: bool,
    /// Genus formula against independently computed cycle rank.
    pub genus_matches_cycle_rank: bool,
}

impl PackingReport {
    pub fn csv_header() -> &'static str {
        "n,m,genus,connected,bound_5n16_ok,smallest_radius_degree,lemma_ok,genus_matches_cycle_rank"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.genus,
            self.connected,
            self.bound_5n16_ok,
            self.smallest_radius_degree,
            self.lemma_ok,
            self.genus_matches_cycle_rank
        )
    }
}

/// Seeded generic isometry used by the smallest-radius lemma check.
fn generic_isometry(seed: u64) -> Mat2C {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let a = c();
    let b = c() * 0.5;
    let k = C64::new(1.25, 0.0) + c() * 0.5;
    let sqrt_k = k.sqrt();
    let translate = Mat2C::new(C64::new(1.0, 0.0), a, C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let lox = Mat2C::diag(sqrt_k, 1.0 / sqrt_k);
    let parab = Mat2C::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), b, C64::new(1.0, 0.0));
    translate * lox * parab
}

/// Check the packing against the combinatorial bounds; errors with
/// `InvariantViolation` if a bound guaranteed for valid packings fails.
pub fn verify_packing_bounds(p: &Packing) -> Result<PackingReport, Error> {
    p.validate()?;
    let g = p.graph();
    let n = p.n();
    let m = p.m();
    let bound_5n16_ok = n < 5 || (m as i64) <= 5 * n as i64 - 16;

    // smallest-radius lemma check after a generic perturbation; retry seeds
    // until all radii are distinct and no horosphere is a plane
    let mut smallest_radius_degree = 0;
    let mut lemma_attempted = false;
    for seed in 0..32u64 {
        let h = generic_isometry(seed);
        let Ok(moved) = p.act(&h) else { continue };
        if moved.horospheres.iter().any(|s| s.is_plane()) {
            continue;
        }
        let mut radii: Vec<(f64, usize)> = moved
            .horospheres
            .iter()
            .enumerate()
            .map(|(i, s)| (s.size(), i))
            .collect();
        radii.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let distinct = radii.windows(2).all(|w| (w[1].0 - w[0].0).abs() > 1e-12 * w[1].0);
        if !distinct {
            continue;
        }
        smallest_radius_degree = g.degree(radii[0].1);
        lemma_attempted = true;
        break;
    }
    let lemma_ok = lemma_attempted && (n < 2 || smallest_radius_degree <= 5);

    let genus_matches_cycle_rank = g.is_connected() && g.genus() == g.cycle_rank();

    let report = PackingReport {
        n,
        m,
        genus: g.genus(),
        connected: g.is_connected(),
        bound_5n16_ok,
        smallest_radius_degree,
        lemma_ok,
        genus_matches_cycle_rank,
    };
    if !bound_5n16_ok {
        return Err(Error::InvariantViolation(format!(
            "m = {m} exceeds 5n - 16 = {}",
            5 * n as i64 - 16
        )));
    }
    if n >= 2 && lemma_attempted && !lemma_ok {
        return Err(Error::InvariantViolation(format!(
            "smallest-radius horosphere has {smallest_radius_degree} > 5 tangencies"
        )));
    }
    Ok(report)
}

/// Angle at p₁ of the triangle of sphere centers, for spheres with
/// R₁ < R₂ ≤ R₃ where S₁S₂ and S₁S₃ are tangent and S₂S₃ is tangent or
/// disjoint. The lemma guarantees the result exceeds π/3.
pub fn angle_check(s1: &Horosphere, s2: &Horosphere, s3: &Horosphere) -> Result<f64, Error> {
    let (p1, r1) = sphere_data(s1)?;
    let (p2, r2) = sphere_data(s2)?;
    let (p3, r3) = sphere_data(s3)?;
    if !(r1 < r2 && r2 <= r3) {
        return Err(Error::Precondition(format!(
            "radius ordering violated: need R1 < R2 <= R3, got {r1}, {r2}, {r3}"
        )));
    }
    if tangency_test(s1, s2) != Tangency::Tangent || tangency_test(s1, s3) != Tangency::Tangent {
        return Err(Error::Precondition("S1 must be tangent to S2 and S3".into()));
    }
    if tangency_test(s2, s3) == Tangency::Overlapping {
        return Err(Error::Precondition("S2 and S3 must be tangent or disjoint".into()));
    }
    let a = p2 - p1;
    let b = p3 - p1;
    let cos = (a.re * b.re + a.im * b.im) / (a.norm() * b.norm());
    Ok(cos.clamp(-1.0, 1.0).acos())
}

fn sphere_data(s: &Horosphere) -> Result<(C64, f64), Error> {
    match s {
        Horosphere::Sphere { p, r } => Ok((*p, *r)),
        Horosphere::Plane { .. } => Err(Error::Precondition(
            "angle check needs spheres (apply an isometry to remove planes)".into(),
        )),
    }
}

/// One row of the lattice ratio scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub radius: f64,
    pub n: usize,
    pub m: usize,
    pub ratio: f64,
    pub upper_ok: bool,
}

/// Scan report: rows over integer R plus the fitted lower-bound constant
/// in m ≥ 4n − C√n.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub fitted_c: f64,
    pub ratios_nondecreasing: bool,
}

/// Tabulate n(R), m(R), m/n for the lattice packings, R = 1..⌊R_max⌋.
pub fn lattice_ratio_scan(r_max: f64) -> Result<ScanReport, Error> {
    if r_max < 1.0 {
        return Err(Error::Precondition("R_max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    let mut fitted_c: f64 = 0.0;
    for r in 1..=(r_max.floor() as usize) {
        let p = build_lattice_packing(r as f64)?;
        let (n, m) = (p.n(), p.m());
        let upper_ok = m <= 4 * (n - 1);
        fitted_c = fitted_c.max((4.0 * n as f64 - m as f64) / (n as f64).sqrt());
        rows.push(ScanRow { radius: r as f64, n, m, ratio: m as f64 / n as f64, upper_ok });
    }
    let ratios_nondecreasing = rows.windows(2).all(|w| w[1].ratio >= w[0].ratio - 1e-12);
    Ok(ScanReport { rows, fitted_c, ratios_nondecreasing })
}
