//! Piecewise paths across charts: segment geometry, obstacle-avoiding
//! routing inside plane charts, and the canonical loop/connector paths of
//! the monodromy problem.

use crate::error::Error;
use crate::surface::{ChartId, SurfaceParams};
use crate::C64;
use serde::{Deserialize, Serialize};

/// Inflation of the unit node disks used as routing obstacles.
const OBSTACLE_R: f64 = 1.05;

/// Parametrized curve piece, x ∈ [0, 1].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum SegGeom {
    Line { a: C64, b: C64 },
    /// z = center + radius e^{iθ}, θ from ang0 to ang1 (signed sweep).
    Arc { center: C64, radius: f64, ang0: f64, ang1: f64 },
    /// z = exp(u0 + x (u1 − u0)); the args of u0, u1 fix the branch.
    LogRay { u0: C64, u1: C64 },
}

impl SegGeom {
    pub fn at(&self, x: f64) -> (C64, C64) {
        match self {
            SegGeom::Line { a, b } => (a + (b - a) * x, b - a),
            SegGeom::Arc { center, radius, ang0, ang1 } => {
                let th = ang0 + (ang1 - ang0) * x;
                let e = C64::from_polar(*radius, th);
                (center + e, C64::new(0.0, 1.0) * e * (ang1 - ang0))
            }
            SegGeom::LogRay { u0, u1 } => {
                let z = (u0 + (u1 - u0) * x).exp();
                (z, z * (u1 - u0))
            }
        }
    }

    pub fn start(&self) -> C64 {
        self.at(0.0).0
    }

    pub fn end(&self) -> C64 {
        self.at(1.0).0
    }

    /// Rough arclength scale for choosing step counts.
    pub fn length_scale(&self) -> f64 {
        match self {
            SegGeom::Line { a, b } => (b - a).norm(),
            SegGeom::Arc { radius, ang0, ang1, .. } => radius * (ang1 - ang0).abs(),
            SegGeom::LogRay { u0, u1 } => (u1 - u0).norm(),
        }
    }

    pub fn reversed(&self) -> SegGeom {
        match *self {
            SegGeom::Line { a, b } => SegGeom::Line { a: b, b: a },
            SegGeom::Arc { center, radius, ang0, ang1 } => {
                SegGeom::Arc { center, radius, ang0: ang1, ang1: ang0 }
            }
            SegGeom::LogRay { u0, u1 } => SegGeom::LogRay { u0: u1, u1: u0 },
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Segment {
    pub chart: ChartId,
    pub geom: SegGeom,
}

/// Piecewise path; consecutive segments either continue in the same chart
/// or cross a node under the identification v·w = t.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathSpec {
    pub segments: Vec<Segment>,
}

impl PathSpec {
    pub fn reversed(&self) -> PathSpec {
        PathSpec {
            segments: self.segments.iter().rev().map(|s| Segment {
                chart: s.chart,
                geom: s.geom.reversed(),
            }).collect(),
        }
    }

    /// Largest |v·w − t| over the declared chart transitions.
    pub fn transition_defect(&self, params: &SurfaceParams) -> f64 {
        let mut worst: f64 = 0.0;
        for w in self.segments.windows(2) {
            let (s1, s2) = (&w[0], &w[1]);
            if s1.chart == s2.chart {
                worst = worst.max((s1.geom.end() - s2.geom.start()).norm());
                continue;
            }
            let defect = match (s1.chart, s2.chart) {
                (ChartId::Plane(i), ChartId::Neck(k)) => {
                    let v = s1.geom.end() - node_of(params, k, i);
                    let w = neck_coord(params, k, i, s2.geom.start());
                    (v * w - t_of(params, k, i)).norm()
                }
                (ChartId::Neck(k), ChartId::Plane(i)) => {
                    let v = s2.geom.start() - node_of(params, k, i);
                    let w = neck_coord(params, k, i, s1.geom.end());
                    (v * w - t_of(params, k, i)).norm()
                }
                _ => f64::INFINITY,
            };
            worst = worst.max(defect);
        }
        worst
    }
}

fn node_of(params: &SurfaceParams, k: usize, chart: usize) -> C64 {
    if params.pairs[k].i == chart {
        params.node_i(k)
    } else {
        params.node_j(k)
    }
}

fn t_of(params: &SurfaceParams, k: usize, chart: usize) -> C64 {
    if params.pairs[k].i == chart {
        params.t_node_i(k)
    } else {
        params.t_node_j(k)
    }
}

/// Node coordinate of the neck sphere glued to the given plane chart:
/// w = z near the i-side node (glued at 0), w = 1/z near the j-side (∞).
fn neck_coord(params: &SurfaceParams, k: usize, chart: usize, z: C64) -> C64 {
    if params.pairs[k].i == chart {
        z
    } else {
        1.0 / z
    }
}

/// Straight route from `from` to `to` inside one plane chart, detouring
/// around the inflated unit disks of all nodes except `exclude`.
pub fn route_in_plane(
    params: &SurfaceParams,
    chart_idx: usize,
    from: C64,
    to: C64,
    exclude: &[usize],
) -> Result<Vec<SegGeom>, Error> {
    let obstacles: Vec<C64> = params
        .nodes_of(chart_idx)
        .iter()
        .filter(|nd| !exclude.contains(&nd.pair))
        .map(|nd| params.node_in_chart(nd.pair, chart_idx))
        .collect();
    for c in &obstacles {
        for (name, p) in [("start", from), ("end", to)] {
            if (p - c).norm() < OBSTACLE_R - 1e-9 {
                return Err(Error::Geometry(format!(
                    "route {name} point {p} lies inside an obstacle disk at {c}"
                )));
            }
        }
    }

    let mut segments = Vec::new();
    let mut cur = from;
    for _guard in 0..(obstacles.len() + 2) {
        match first_hit(cur, to, &obstacles) {
            None => {
                if (to - cur).norm() > 1e-15 {
                    segments.push(SegGeom::Line { a: cur, b: to });
                }
                return Ok(segments);
            }
            Some((c, t1, t2)) => {
                let dir = to - cur;
                let entry = cur + dir * t1;
                let exit = cur + dir * t2;
                segments.push(SegGeom::Line { a: cur, b: entry });
                let a0 = (entry - c).arg();
                let mut a1 = (exit - c).arg();
                // shorter angular side
                while a1 - a0 > std::f64::consts::PI {
                    a1 -= 2.0 * std::f64::consts::PI;
                }
                while a1 - a0 < -std::f64::consts::PI {
                    a1 += 2.0 * std::f64::consts::PI;
                }
                segments.push(SegGeom::Arc { center: c, radius: OBSTACLE_R, ang0: a0, ang1: a1 });
                cur = exit;
            }
        }
    }
    Err(Error::Geometry("routing did not terminate".into()))
}

/// First obstacle strictly crossed by the segment cur→to, with the entry and
/// exit parameters of the inflated circle.
fn first_hit(cur: C64, to: C64, obstacles: &[C64]) -> Option<(C64, f64, f64)> {
    let d = to - cur;
    let len2 = d.norm_sqr();
    if len2 < 1e-30 {
        return None;
    }
    let mut best: Option<(C64, f64, f64)> = None;
    for &c in obstacles {
        // |cur + t d − c|² = r²
        let f = cur - c;
        let b_half = (f.re * d.re + f.im * d.im) / len2;
        let q = (f.norm_sqr() - OBSTACLE_R * OBSTACLE_R) / len2;
        let disc = b_half * b_half - q;
        if disc <= 1e-14 {
            continue;
        }
        let sq = disc.sqrt();
        let (t1, t2) = (-b_half - sq, -b_half + sq);
        if t2 <= 1e-9 || t1 >= 1.0 - 1e-9 {
            continue; // intersection outside the segment
        }
        let t1c = t1.max(0.0);
        if best.map_or(true, |(_, bt, _)| t1c < bt) {
            best = Some((c, t1c.max(1e-12), t2.min(1.0 - 1e-12)));
        }
    }
    best
}

/// Loop around the node of pair k in its first-index plane chart, based at
/// 0: approach to the unit circle, full counterclockwise turn, return.
pub fn gamma_path(params: &SurfaceParams, k: usize) -> Result<PathSpec, Error> {
    let chart_idx = params.pairs[k].i;
    let p = params.node_i(k);
    if p.norm() < 1e-12 {
        return Err(Error::Geometry("node at the base point".into()));
    }
    let attach_angle = (-p).arg();
    let attach = p + C64::from_polar(1.0, attach_angle);
    let approach = route_in_plane(params, chart_idx, C64::new(0.0, 0.0), attach, &[k])?;
    let mut segments: Vec<Segment> = approach
        .iter()
        .map(|g| Segment { chart: ChartId::Plane(chart_idx), geom: *g })
        .collect();
    segments.push(Segment {
        chart: ChartId::Plane(chart_idx),
        geom: SegGeom::Arc {
            center: p,
            radius: 1.0,
            ang0: attach_angle,
            ang1: attach_angle + 2.0 * std::f64::consts::PI,
        },
    });
    segments.extend(
        approach
            .iter()
            .rev()
            .map(|g| Segment { chart: ChartId::Plane(chart_idx), geom: g.reversed() }),
    );
    Ok(PathSpec { segments })
}

/// Reference arguments for the node-opening parameters of pair k, used to
/// fix the branch of the neck crossing. `None` means principal args.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeckBranch {
    pub arg_t_i: Option<f64>,
    pub arg_t_j: Option<f64>,
}

/// log z with the argument tracked continuously from a reference: the
/// declared arg is the representative of arg z closest to `ref_arg`.
pub fn declared_log(z: C64, ref_arg: Option<f64>) -> C64 {
    let principal = z.arg();
    let arg = match ref_arg {
        None => principal,
        Some(r) => {
            let mut a = principal;
            while a - r > std::f64::consts::PI {
                a -= 2.0 * std::f64::consts::PI;
            }
            while a - r < -std::f64::consts::PI {
                a += 2.0 * std::f64::consts::PI;
            }
            a
        }
    };
    C64::new(z.norm().ln(), arg)
}

/// Connector from 0 in plane chart i to 0 in plane chart j through the neck
/// of pair k: line to the node circle, log-linear neck crossing from t_i to
/// 1/t_j, line from the far node circle; detours around other node disks.
pub fn big_gamma_path(
    params: &SurfaceParams,
    k: usize,
    branch: NeckBranch,
) -> Result<PathSpec, Error> {
    let pr = params.pairs[k];
    let t_i = params.t_node_i(k);
    let t_j = params.t_node_j(k);
    if t_i.norm() < 1e-300 || t_j.norm() < 1e-300 {
        return Err(Error::Degenerate(
            "neck crossing needs nonzero opening parameters (tau > 0, b != 0)".into(),
        ));
    }
    let p_i = params.node_i(k);
    let p_j = params.node_j(k);

    let leg1 = route_in_plane(params, pr.i, C64::new(0.0, 0.0), p_i + 1.0, &[k])?;
    let leg3 = route_in_plane(params, pr.j, p_j + 1.0, C64::new(0.0, 0.0), &[k])?;

    let u0 = declared_log(t_i, branch.arg_t_i);
    let u1 = -declared_log(t_j, branch.arg_t_j);

    let mut segments: Vec<Segment> = leg1
        .iter()
        .map(|g| Segment { chart: ChartId::Plane(pr.i), geom: *g })
        .collect();
    segments.push(Segment { chart: ChartId::Neck(k), geom: SegGeom::LogRay { u0, u1 } });
    segments.extend(leg3.iter().map(|g| Segment { chart: ChartId::Plane(pr.j), geom: *g }));
    Ok(PathSpec { segments })
}
