//! Charted model of the noded surface with its first-order meromorphic data.
//!
//! Charts are n copies of the plane (one per horosphere) and one sphere per
//! tangency. The engine carries a first-order family in the opening
//! parameters: Gauss map, differential and connection are affine in a with
//! the constraint t(a) folded in, which is the regime the monodromy solve
//! operates in.

mod field;

pub use field::{
    connection_a, connection_a_hat, connection_a_product, gauss_first_order, gauss_map_g0,
    omega_first_order, residue_at_infinity,
};

use crate::error::Error;
use crate::hyperbolic::{act_boundary, act_half_space, BoundaryPoint0};
use crate::packing::{tangency_point, Horosphere, Packing};
use crate::tol;
use crate::{BoundaryPoint, C64, Mat2C};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

/// Chart of the noded surface: a plane chart per horosphere or the neck
/// sphere of a tangency pair (indexed into [`SurfaceParams::pairs`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChartId {
    Plane(usize),
    Neck(usize),
}

/// One tangency pair (i < j) with its node positions: `node_i` in plane
/// chart i (glued to 0 of the neck sphere), `node_j` in plane chart j
/// (glued to ∞ of the neck sphere).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Pair {
    pub i: usize,
    pub j: usize,
    pub node_i: C64,
    pub node_j: C64,
}

/// Node reference inside a plane chart: `sign` is +1 when the chart is the
/// first index of the pair, −1 when it is the second.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChartNode {
    pub pair: usize,
    pub sign: i8,
}

/// Full parameter set of the charted model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceParams {
    /// Horospheres as given (before plane removal).
    pub original: Vec<Horosphere>,
    /// Isometry applied so no horosphere is a horizontal plane.
    pub ambient: Mat2C,
    /// Normalized horospheres (all spheres).
    pub normalized: Vec<Horosphere>,
    /// Limit points of the normalized horospheres.
    pub c: Vec<C64>,
    /// Differential normalization per chart (Ω = λ dz at a = 0).
    pub lambda: Vec<C64>,
    /// Deflation speeds.
    pub xi: Vec<f64>,
    /// Frame anchors: F_i(z) = (I + z A_i) f0[i] parametrizes horosphere i.
    pub f0: Vec<Mat2C>,
    pub pairs: Vec<Pair>,
    /// Nodes present in each plane chart.
    pub chart_nodes: Vec<Vec<ChartNode>>,
    /// Neck parameter (τ ≥ 0, τ < τ_max).
    pub tau: f64,
    /// Per pair: b with a = τ b / (c_i − c_j).
    pub b: Vec<C64>,
    /// Per pair: node drift at the i-side (node = node_i + s q).
    pub q_i: Vec<C64>,
    /// Per pair: node drift at the j-side.
    pub q_j: Vec<C64>,
}

impl SurfaceParams {
    pub fn n(&self) -> usize {
        self.c.len()
    }

    /// s = −τ log τ, continuously 0 at τ = 0.
    pub fn s(&self) -> f64 {
        if self.tau > 0.0 {
            -self.tau * self.tau.ln()
        } else {
            0.0
        }
    }

    /// Solver variable t with τ = e^{−1/t²}.
    pub fn t_var(&self) -> f64 {
        if self.tau > 0.0 {
            (-1.0 / self.tau.ln()).sqrt()
        } else {
            0.0
        }
    }

    /// Opening parameter a = τ b / (c_i − c_j) of a pair.
    pub fn a(&self, k: usize) -> C64 {
        let p = &self.pairs[k];
        self.tau * self.b[k] / (self.c[p.i] - self.c[p.j])
    }

    /// Node-opening parameter at the i-side: t = −a/(2λ_i).
    pub fn t_node_i(&self, k: usize) -> C64 {
        -self.a(k) / (self.lambda[self.pairs[k].i] * 2.0)
    }

    /// Node-opening parameter at the j-side: t = a/(2λ_j).
    pub fn t_node_j(&self, k: usize) -> C64 {
        self.a(k) / (self.lambda[self.pairs[k].j] * 2.0)
    }

    /// Current (drifted) node position in chart i of pair k.
    pub fn node_i(&self, k: usize) -> C64 {
        self.pairs[k].node_i + self.q_i[k] * self.s()
    }

    /// Current (drifted) node position in chart j of pair k.
    pub fn node_j(&self, k: usize) -> C64 {
        self.pairs[k].node_j + self.q_j[k] * self.s()
    }

    /// Node position of pair k as seen from plane chart `chart`.
    pub fn node_in_chart(&self, k: usize, chart: usize) -> C64 {
        if self.pairs[k].i == chart {
            self.node_i(k)
        } else {
            self.node_j(k)
        }
    }

    /// Connection coefficient matrix A_i = λ_i N(c_i) of chart i (a = 0 part).
    pub fn base_matrix(&self, i: usize) -> Mat2C {
        n_matrix(self.c[i]).scale(self.lambda[i])
    }

    /// Parametrizing frame F_i(z) = (I + z A_i) F0_i.
    pub fn frame_at(&self, i: usize, z: C64) -> Mat2C {
        (Mat2C::identity() + self.base_matrix(i).scale(z)) * self.f0[i]
    }

    /// Central value b⁰ = (ξ_i + ξ_j)/2 of a pair.
    pub fn b0(&self, k: usize) -> f64 {
        (self.xi[self.pairs[k].i] + self.xi[self.pairs[k].j]) / 2.0
    }

    /// Neighbor pairs of plane chart i.
    pub fn nodes_of(&self, i: usize) -> &[ChartNode] {
        &self.chart_nodes[i]
    }

    /// Isometry normalizing the end of chart i: maps horosphere i to the
    /// plane x3 = 1, the base point f_i(0) to (0,0,1), and c_i to ∞.
    pub fn end_frame(&self, i: usize) -> Mat2C {
        self.f0[i].inverse_sl()
    }

    pub fn validate_tau(&self) -> Result<(), Error> {
        if self.tau < 0.0 || self.tau >= tol::TAU_MAX {
            return Err(Error::Validation(format!(
                "tau = {} outside [0, {})",
                self.tau,
                tol::TAU_MAX
            )));
        }
        Ok(())
    }
}

/// Trace-free coefficient matrix of a horosphere connection: N(c) =
/// [[c, −c²],[1, −c]].
pub fn n_matrix(c: C64) -> Mat2C {
    Mat2C::new(c, -c * c, Complex::new(1.0, 0.0), -c)
}

/// Node coupling matrix K(cᵢ,cⱼ) = [[(cᵢ+cⱼ)/2, −cᵢcⱼ],[1, −(cᵢ+cⱼ)/2]]:
/// the per-node residue of ∂A/∂a in the first-index chart (−K in the other).
pub fn k_matrix(ci: C64, cj: C64) -> Mat2C {
    let half_sum = (ci + cj) / 2.0;
    Mat2C::new(half_sum, -ci * cj, Complex::new(1.0, 0.0), -half_sum)
}

/// Pair frame: the standardizing isometry of a tangency pair and the
/// conjugated constant data.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PairFrame {
    pub pair: usize,
    pub i: usize,
    pub j: usize,
    /// H maps horosphere i to the plane x3 = 1, horosphere j to the sphere
    /// of radius 1/2 at 0, the tangency point to (0,0,1); c_i → ∞, c_j → 0.
    pub h: Mat2C,
    pub rho_sq: C64,
    pub rho_inv_sq: C64,
    pub lambda_hat_i: C64,
    pub lambda_hat_j: C64,
}

impl PairFrame {
    /// Â_i = [[0, λ̂_i],[0,0]] (strictly upper).
    pub fn a_hat_i(&self) -> Mat2C {
        Mat2C::new(
            Complex::new(0.0, 0.0),
            self.lambda_hat_i,
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
        )
    }

    /// Â_j = [[0,0],[λ̂_j, 0]] (strictly lower).
    pub fn a_hat_j(&self) -> Mat2C {
        Mat2C::new(
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            self.lambda_hat_j,
            Complex::new(0.0, 0.0),
        )
    }

    /// M̂_i(s) = exp(−node_i Â_i) Ξ(ξ_i s).
    pub fn m_hat_i(&self, params: &SurfaceParams, s: f64) -> Mat2C {
        let p0 = params.pairs[self.pair].node_i;
        let exp_part = Mat2C::identity() + self.a_hat_i().scale(-p0);
        exp_part * Mat2C::xi(params.xi[self.i] * s)
    }

    /// M̂_j(s) = exp(−node_j Â_j) Ξ(−ξ_j s); the mean curvature vector of the
    /// standardized sphere points down, hence the sign.
    pub fn m_hat_j(&self, params: &SurfaceParams, s: f64) -> Mat2C {
        let p0 = params.pairs[self.pair].node_j;
        let exp_part = Mat2C::identity() + self.a_hat_j().scale(-p0);
        exp_part * Mat2C::xi(-params.xi[self.j] * s)
    }
}

/// Build the pair frame of pair k: H = F_i(node_i)⁻¹ (the parametrizing
/// frames are aligned so this maps c_i to ∞ and the pair data to standard
/// position), ρ² read off the first row.
pub fn pair_frame(params: &SurfaceParams, k: usize) -> Result<PairFrame, Error> {
    let pr = &params.pairs[k];
    let (ci, cj) = (params.c[pr.i], params.c[pr.j]);
    if (ci - cj).norm() < 1e-12 {
        return Err(Error::Degenerate(
            "coincident limit points in a tangency pair".into(),
        ));
    }
    let h = params.frame_at(pr.i, pr.node_i).inverse_sl();
    // H = (c_j−c_i)^{-1/2} [[ρ, −ρ c_j],[ρ⁻¹, −ρ⁻¹ c_i]]
    let rho_sq = h.m11 * h.m11 * (cj - ci);
    let rho_inv_sq = h.m21 * h.m21 * (cj - ci);
    let lambda_hat_i = rho_sq * params.lambda[pr.i] * (ci - cj);
    let lambda_hat_j = rho_inv_sq * params.lambda[pr.j] * (cj - ci);
    Ok(PairFrame {
        pair: k,
        i: pr.i,
        j: pr.j,
        h,
        rho_sq,
        rho_inv_sq,
        lambda_hat_i,
        lambda_hat_j,
    })
}

/// Choose the conformal parametrizations and assemble the model at the
/// central parameter values (b = b⁰, q = 0) for a given τ.
///
/// Each horosphere gets the frame F_i(z) = (I + z λ_i N(c_i)) F0_i with
/// F0_i aligned so that every pair frame is the plain inverse of F_i at the
/// node. λ_i defaults to 1 and is shrunk when needed so node points in one
/// chart stay at pairwise distance ≥ [`tol::NODE_SEPARATION`] and away from
/// the base point.
pub fn from_packing(packing: &Packing, xi: &[f64], tau: f64) -> Result<SurfaceParams, Error> {
    let n = packing.n();
    if xi.len() != n {
        return Err(Error::Validation(format!(
            "need {n} deflation speeds, got {}",
            xi.len()
        )));
    }
    if xi.iter().any(|x| *x <= 0.0) {
        return Err(Error::Validation("deflation speeds must be positive".into()));
    }
    packing.validate()?;
    let graph = packing.graph();
    if !graph.is_connected() {
        return Err(Error::Validation("tangency graph must be connected".into()));
    }
    if tau < 0.0 || tau >= tol::TAU_MAX {
        return Err(Error::Validation(format!("tau = {tau} outside [0, {})", tol::TAU_MAX)));
    }

    // normalize so no horosphere is a horizontal plane
    let ambient = if packing.horospheres.iter().any(|s| s.is_plane()) {
        let max_re = packing
            .horospheres
            .iter()
            .filter_map(|s| match s {
                Horosphere::Sphere { p, .. } => Some(p.re + s.size()),
                _ => None,
            })
            .fold(0.0f64, f64::max);
        let z0 = C64::new(max_re + 2.0, 0.0);
        // z ↦ −1/(z − z0)
        Mat2C::new(C64::new(0.0, 0.0), C64::new(-1.0, 0.0), C64::new(1.0, 0.0), -z0)
    } else {
        Mat2C::identity()
    };
    let normalized: Vec<Horosphere> = packing
        .horospheres
        .iter()
        .map(|s| s.act(&ambient))
        .collect::<Result<Vec<_>, _>>()?;
    for s in &normalized {
        if s.is_plane() {
            return Err(Error::Geometry("normalization left a horizontal plane".into()));
        }
    }

    let c: Vec<C64> = normalized
        .iter()
        .map(|s| match s.limit_point() {
            BoundaryPoint0::Finite(p) => p,
            BoundaryPoint0::Infinity => unreachable!("planes removed above"),
        })
        .collect();

    // tangency-point preimages under the height-normalized parametrization
    // of each sphere: w = horizontal of (T_c S)⁻¹ · (tangency point)
    let mut w_per_chart: Vec<Vec<(usize, C64)>> = vec![Vec::new(); n]; // (pair idx, w)
    for (k, &(i, j)) in packing.tangencies.iter().enumerate() {
        let t = tangency_point(&normalized[i], &normalized[j])?;
        for &(chart, other) in &[(i, j), (j, i)] {
            let _ = other;
            let g_inv = chart_plane_map(c[chart]); // (T_c S)⁻¹
            let tp = act_half_space(&g_inv, &t)?;
            let h_expect = 1.0 / (2.0 * normalized[chart].size());
            if (tp.x3 - h_expect).abs() > 1e-8 * h_expect.max(1.0) {
                return Err(Error::Geometry(format!(
                    "tangency preimage off the parametrizing plane: {} vs {}",
                    tp.x3, h_expect
                )));
            }
            w_per_chart[chart].push((k, tp.horizontal()));
        }
    }

    // λ per chart: default 1, shrink so node separation holds
    let mut lambda = vec![C64::new(1.0, 0.0); n];
    for i in 0..n {
        let ws = &w_per_chart[i];
        let mut d_min = f64::INFINITY;
        for (a_idx, (_, wa)) in ws.iter().enumerate() {
            d_min = d_min.min(wa.norm()); // distance to base point 0
            for (_, wb) in ws.iter().skip(a_idx + 1) {
                d_min = d_min.min((wa - wb).norm());
            }
        }
        if ws.is_empty() {
            continue;
        }
        if d_min < 1e-12 {
            return Err(Error::Geometry(format!(
                "coincident node preimages in chart {i}; cannot separate by rescaling"
            )));
        }
        if d_min < tol::NODE_SEPARATION {
            lambda[i] = C64::new(d_min / tol::NODE_SEPARATION, 0.0);
        }
    }

    // frames: F0_i = T_{c_i} S diag(√h_i, 1/√h_i), h_i = 1/(2 r_i)
    let f0: Vec<Mat2C> = (0..n)
        .map(|i| {
            let h = 1.0 / (2.0 * normalized[i].size());
            let sh = h.sqrt();
            // [[c√h, −1/√h],[√h, 0]]
            Mat2C::new(
                c[i] * sh,
                C64::new(-1.0 / sh, 0.0),
                C64::new(sh, 0.0),
                C64::new(0.0, 0.0),
            )
        })
        .collect();

    // node positions p = w / λ' with λ' = −λ
    let mut pairs: Vec<Pair> = Vec::with_capacity(packing.tangencies.len());
    for (k, &(i, j)) in packing.tangencies.iter().enumerate() {
        let w_i = w_per_chart[i].iter().find(|(kk, _)| *kk == k).unwrap().1;
        let w_j = w_per_chart[j].iter().find(|(kk, _)| *kk == k).unwrap().1;
        pairs.push(Pair {
            i,
            j,
            node_i: -w_i / lambda[i],
            node_j: -w_j / lambda[j],
        });
    }

    let mut chart_nodes: Vec<Vec<ChartNode>> = vec![Vec::new(); n];
    for (k, pr) in pairs.iter().enumerate() {
        chart_nodes[pr.i].push(ChartNode { pair: k, sign: 1 });
        chart_nodes[pr.j].push(ChartNode { pair: k, sign: -1 });
    }

    // separation check after scaling
    for i in 0..n {
        let mut ps: Vec<C64> = vec![C64::new(0.0, 0.0)];
        ps.extend(chart_nodes[i].iter().map(|nd| {
            if nd.sign > 0 {
                pairs[nd.pair].node_i
            } else {
                pairs[nd.pair].node_j
            }
        }));
        for a_idx in 0..ps.len() {
            for b_idx in (a_idx + 1)..ps.len() {
                if (ps[a_idx] - ps[b_idx]).norm() < tol::NODE_SEPARATION - 1e-9 {
                    return Err(Error::Geometry(format!(
                        "node separation failed in chart {i} after rescaling"
                    )));
                }
            }
        }
    }

    let b: Vec<C64> = packing
        .tangencies
        .iter()
        .map(|&(i, j)| C64::new((xi[i] + xi[j]) / 2.0, 0.0))
        .collect();
    let m = pairs.len();

    Ok(SurfaceParams {
        original: packing.horospheres.clone(),
        ambient,
        normalized,
        c,
        lambda,
        xi: xi.to_vec(),
        f0,
        pairs,
        chart_nodes,
        tau,
        b,
        q_i: vec![C64::new(0.0, 0.0); m],
        q_j: vec![C64::new(0.0, 0.0); m],
    })
}

/// (T_c S)⁻¹ = [[0, 1],[−1, c]]: sends the sphere at limit point c to the
/// parametrizing horizontal plane.
fn chart_plane_map(c: C64) -> Mat2C {
    Mat2C::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), c)
}

/// Boundary image of a chart's limit point under a frame (used in tests).
pub fn frame_boundary(h: &Mat2C, z: C64) -> BoundaryPoint {
    act_boundary(h, &BoundaryPoint0::Finite(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::immerse;
    use crate::packing::{build_lattice_packing, Packing};

    pub(crate) fn two_sphere_packing() -> Packing {
        Packing::from_horospheres(vec![
            Horosphere::Sphere { p: C64::new(0.0, 0.0), r: 0.5 },
            Horosphere::Sphere { p: C64::new(1.0, 0.0), r: 0.5 },
        ])
        .unwrap()
    }

    pub(crate) fn triangle_packing() -> Packing {
        let rot = C64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        Packing::from_horospheres(vec![
            Horosphere::Sphere { p: C64::new(0.0, 0.0), r: 0.5 },
            Horosphere::Sphere { p: C64::new(1.0, 0.0), r: 0.5 },
            Horosphere::Sphere { p: rot, r: 0.5 },
        ])
        .unwrap()
    }

    #[test]
    fn two_sphere_model_builds() {
        let p = two_sphere_packing();
        let m = from_packing(&p, &[1.0, 1.0], 1e-4).unwrap();
        assert_eq!(m.n(), 2);
        assert_eq!(m.pairs.len(), 1);
        // frames parametrize the horospheres: f_i(z) lies on sphere i
        for i in 0..2 {
            for z in [C64::new(0.0, 0.0), C64::new(1.3, -0.4), C64::new(-2.0, 0.7)] {
                let f = m.frame_at(i, z);
                assert!(f.det_defect() < 1e-12);
                let pt = immerse(&f).unwrap();
                let form = m.normalized[i].to_form();
                let x = crate::hyperbolic::half_space_to_minkowski(&pt);
                assert!(form.eval(&x).abs() < 1e-10, "chart {i} z {z}");
            }
        }
        // node parametrizes the tangency point
        let t = tangency_point(&m.normalized[0], &m.normalized[1]).unwrap();
        let f = m.frame_at(0, m.pairs[0].node_i);
        let pt = immerse(&f).unwrap();
        assert!((pt.x1 - t.x1).abs() + (pt.x2 - t.x2).abs() + (pt.x3 - t.x3).abs() < 1e-10);
    }

    #[test]
    fn lattice_model_distributes_nodes() {
        let p = build_lattice_packing(1.0).unwrap();
        let m = from_packing(&p, &vec![1.0; p.n()], 1e-4).unwrap();
        assert_eq!(m.pairs.len(), 19);
        let total: usize = m.chart_nodes.iter().map(|v| v.len()).sum();
        assert_eq!(total, 38);
        assert!(m.normalized.iter().all(|s| !s.is_plane()));
        // separation honored
        for i in 0..m.n() {
            for nd in m.nodes_of(i) {
                let p0 = if nd.sign > 0 { m.pairs[nd.pair].node_i } else { m.pairs[nd.pair].node_j };
                assert!(p0.norm() >= tol::NODE_SEPARATION - 1e-9);
            }
        }
    }

    #[test]
    fn pair_frame_standardizes() {
        let p = triangle_packing();
        let m = from_packing(&p, &[1.0, 1.0, 1.0], 1e-4).unwrap();
        for k in 0..m.pairs.len() {
            let fr = pair_frame(&m, k).unwrap();
            assert!(fr.h.det_defect() < 1e-10);
            // c_i → ∞, c_j → 0
            match frame_boundary(&fr.h, m.c[fr.i]) {
                BoundaryPoint0::Finite(w) => assert!(w.norm() > 1e10, "c_i image {w}"),
                BoundaryPoint0::Infinity => {}
            }
            match frame_boundary(&fr.h, m.c[fr.j]) {
                BoundaryPoint0::Finite(w) => assert!(w.norm() < 1e-10, "c_j image {w}"),
                _ => panic!("c_j must map to 0"),
            }
            // horosphere images: plane x3=1 and sphere radius 1/2 at 0
            let si = m.normalized[fr.i].act(&fr.h).unwrap();
            let sj = m.normalized[fr.j].act(&fr.h).unwrap();
            match si {
                Horosphere::Plane { h } => assert!((h - 1.0).abs() < 1e-9),
                _ => panic!("S_i must standardize to the unit plane"),
            }
            match sj {
                Horosphere::Sphere { p, r } => {
                    assert!(p.norm() < 1e-9 && (r - 0.5).abs() < 1e-9);
                }
                _ => panic!("S_j must standardize to the half sphere"),
            }
            // ρ extraction consistent: ρ²·ρ⁻² = 1, H-form reproduction
            assert!((fr.rho_sq * fr.rho_inv_sq - C64::new(1.0, 0.0)).norm() < 1e-9);
            // Â_i = H (λ_i N(c_i)) H⁻¹
            let lhs = fr.h * m.base_matrix(fr.i) * fr.h.inverse_sl();
            assert!((lhs - fr.a_hat_i()).norm() < 1e-9, "a_hat_i mismatch {:?}", lhs - fr.a_hat_i());
            let lhs_j = fr.h * m.base_matrix(fr.j) * fr.h.inverse_sl();
            assert!((lhs_j - fr.a_hat_j()).norm() < 1e-9);
            // nilpotency
            assert!((fr.a_hat_i() * fr.a_hat_i()).norm() < 1e-12);
            assert!((fr.a_hat_j() * fr.a_hat_j()).norm() < 1e-12);
        }
    }

    #[test]
    fn m_hat_matrices_shape() {
        let p = two_sphere_packing();
        let m = from_packing(&p, &[1.0, 2.0], 1e-4).unwrap();
        let fr = pair_frame(&m, 0).unwrap();
        let s = m.s();
        let mi = fr.m_hat_i(&m, s);
        let mj = fr.m_hat_j(&m, s);
        assert!(mi.det_defect() < 1e-12);
        assert!(mj.det_defect() < 1e-12);
        // s = 0: unipotent
        let mi0 = fr.m_hat_i(&m, 0.0);
        assert!((mi0.m11 - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((mi0.m22 - C64::new(1.0, 0.0)).norm() < 1e-14);
        // geodesic speed oracle: Φ(M̂_i M̂_i*) moves at speed ξ_i
        let h = 1e-6;
        let at = |sv: f64| {
            let f = fr.m_hat_i(&m, sv);
            immerse(&f).unwrap()
        };
        let (p1, p2) = (at(0.1), at(0.1 + h));
        let speed = p1.dist(&p2) / h;
        assert!((speed - m.xi[0]).abs() < 1e-4, "speed {speed}");
        let at_j = |sv: f64| immerse(&fr.m_hat_j(&m, sv)).unwrap();
        let (q1, q2) = (at_j(0.1), at_j(0.1 + h));
        let speed_j = q1.dist(&q2) / h;
        assert!((speed_j - m.xi[1]).abs() < 1e-4, "speed_j {speed_j}");
    }

    #[test]
    fn plane_normalization_roundtrip() {
        // lattice contains the plane; ambient isometry must remove it and
        // map original data consistently
        let p = build_lattice_packing(0.0).unwrap(); // one sphere + plane
        let m = from_packing(&p, &[1.0, 1.0], 0.0).unwrap();
        assert!((m.ambient - Mat2C::identity()).norm() > 0.1);
        // normalized horospheres are the images of the originals
        for (orig, norm) in m.original.iter().zip(&m.normalized) {
            let moved = orig.act(&m.ambient).unwrap();
            match (moved, norm) {
                (Horosphere::Sphere { p: pa, r: ra }, Horosphere::Sphere { p: pb, r: rb }) => {
                    assert!((pa - pb).norm() < 1e-12 && (ra - rb).abs() < 1e-12);
                }
                _ => panic!("normalized packing must be all spheres"),
            }
        }
    }
}
