//! First-order field evaluators on the charts: Gauss map, differential Ω,
//! connection A (dz-coefficients) and the pair-conjugated variant.

use super::{k_matrix, n_matrix, ChartId, PairFrame, SurfaceParams};
use crate::error::Error;
use crate::hyperbolic::BoundaryPoint0;
use crate::tol;
use crate::{BoundaryPoint, C64, Mat2C};
use num_complex::Complex;

/// Gauss map of the degenerate surface: c_i on plane charts,
/// c_j + (c_j−c_i)/(z−1) on neck charts (∞ at the pole z = 1).
pub fn gauss_map_g0(params: &SurfaceParams, chart: ChartId, z: C64) -> BoundaryPoint {
    match chart {
        ChartId::Plane(i) => BoundaryPoint0::Finite(params.c[i]),
        ChartId::Neck(k) => {
            let pr = &params.pairs[k];
            let (ci, cj) = (params.c[pr.i], params.c[pr.j]);
            let d = z - Complex::new(1.0, 0.0);
            if d.norm() < 1e-300 {
                BoundaryPoint0::Infinity
            } else {
                BoundaryPoint0::Finite(cj + (cj - ci) / d)
            }
        }
    }
}

/// Gauss map at first order in a along the constrained family.
///
/// Plane charts gain simple-pole corrections at the nodes; on neck charts
/// the degenerate map is already first-order accurate (Ω vanishes there at
/// a = 0, so Gauss-map corrections do not enter the connection at this
/// order).
pub fn gauss_first_order(params: &SurfaceParams, chart: ChartId, z: C64) -> BoundaryPoint {
    match chart {
        ChartId::Plane(chart_idx) => {
            let mut g = params.c[chart_idx];
            for nd in params.nodes_of(chart_idx) {
                let pr = &params.pairs[nd.pair];
                let coef = (params.c[pr.j] - params.c[pr.i]) / (params.lambda[chart_idx] * 2.0);
                let p = params.node_in_chart(nd.pair, chart_idx);
                g += params.a(nd.pair) * coef / (z - p);
            }
            BoundaryPoint0::Finite(g)
        }
        ChartId::Neck(_) => gauss_map_g0(params, chart, z),
    }
}

/// Ω at first order, as the coefficient of dz.
///
/// Plane i: λ_i dz + Σ_{J⁺} a dz/(z−p) − Σ_{J⁻} a dz/(z−p).
/// Neck (i,j): a_ij (1−z)²/(2z²) dz — the constrained-family combination,
/// with the double zero at z = 1.
pub fn omega_first_order(params: &SurfaceParams, chart: ChartId, z: C64) -> Result<C64, Error> {
    match chart {
        ChartId::Plane(chart_idx) => {
            let mut w = params.lambda[chart_idx];
            for nd in params.nodes_of(chart_idx) {
                let p = params.node_in_chart(nd.pair, chart_idx);
                if (z - p).norm() < tol::R_MIN {
                    return Err(Error::Pole(format!(
                        "z = {z} within r_min of node {} in chart {chart_idx}",
                        nd.pair
                    )));
                }
                let term = params.a(nd.pair) / (z - p);
                w += if nd.sign > 0 { term } else { -term };
            }
            Ok(w)
        }
        ChartId::Neck(k) => {
            let one = Complex::new(1.0, 0.0);
            Ok(params.a(k) * (one - z) * (one - z) / (z * z * 2.0))
        }
    }
}

/// Connection A = [[G, −G²],[1, −G]] Ω at first order in a (affine family).
///
/// Plane k: λ_k N(c_k) + Σ ± a K(c_i,c_j)/(z−p). Neck: the closed form with
/// the double pole at 0 and a finite value at the Gauss-map pole z = 1
/// (double zero of Ω against double pole of G²).
pub fn connection_a(params: &SurfaceParams, chart: ChartId, z: C64) -> Result<Mat2C, Error> {
    match chart {
        ChartId::Plane(chart_idx) => {
            let mut a = n_matrix(params.c[chart_idx]).scale(params.lambda[chart_idx]);
            for nd in params.nodes_of(chart_idx) {
                let pr = &params.pairs[nd.pair];
                let p = params.node_in_chart(nd.pair, chart_idx);
                if (z - p).norm() < tol::R_MIN {
                    return Err(Error::Pole(format!(
                        "z = {z} within r_min of node {} in chart {chart_idx}",
                        nd.pair
                    )));
                }
                let coef = params.a(nd.pair) / (z - p);
                let coef = if nd.sign > 0 { coef } else { -coef };
                a = a + k_matrix(params.c[pr.i], params.c[pr.j]).scale(coef);
            }
            Ok(a)
        }
        ChartId::Neck(k) => {
            let pr = &params.pairs[k];
            let (ci, cj) = (params.c[pr.i], params.c[pr.j]);
            let one = Complex::new(1.0, 0.0);
            let u = one - z; // (1 − z)
            let v = ci - cj * z; // (c_i − c_j z)
            let scale = params.a(k) / (z * z * 2.0);
            Ok(Mat2C::new(u * v, -v * v, u * u, -u * v).scale(scale))
        }
    }
}

/// Product-form connection M₂(G) Ω with the first-order G and Ω (keeps the
/// O(a²) cross terms; used as the second route in oracle checks).
pub fn connection_a_product(
    params: &SurfaceParams,
    chart: ChartId,
    z: C64,
) -> Result<Mat2C, Error> {
    let g = match gauss_first_order(params, chart, z) {
        BoundaryPoint0::Finite(g) => g,
        BoundaryPoint0::Infinity => {
            return Err(Error::Pole("Gauss map pole; use the closed neck form".into()))
        }
    };
    let w = omega_first_order(params, chart, z)?;
    Ok(Mat2C::new(g, -g * g, Complex::new(1.0, 0.0), -g).scale(w))
}

/// Pair-conjugated connection, the standardized-frame formula
/// Â = (c_j−c_i)⁻¹ [[(G−c_i)(G−c_j), −ρ²(G−c_j)²],[ρ⁻²(G−c_i)², −(G−c_i)(G−c_j)]] Ω.
///
/// Identical to H A H⁻¹ for the product-form A whenever both use the same G.
pub fn connection_a_hat(
    frame: &PairFrame,
    params: &SurfaceParams,
    chart: ChartId,
    z: C64,
) -> Result<Mat2C, Error> {
    let g = match gauss_first_order(params, chart, z) {
        BoundaryPoint0::Finite(g) => g,
        BoundaryPoint0::Infinity => {
            return Err(Error::Pole("Gauss map pole at the evaluation point".into()))
        }
    };
    let w = omega_first_order(params, chart, z)?;
    let (ci, cj) = (params.c[frame.i], params.c[frame.j]);
    let (di, dj) = (g - ci, g - cj);
    let m = Mat2C::new(
        di * dj,
        -frame.rho_sq * dj * dj,
        frame.rho_inv_sq * di * di,
        -di * dj,
    );
    Ok(m.scale(w / (cj - ci)))
}

/// Contour residue of Ω at ∞ of a plane chart, computed numerically:
/// Res_∞ = −(1/2πi) ∮_{ccw, |z| large} Ω dz.
pub fn residue_at_infinity(params: &SurfaceParams, chart_idx: usize) -> Result<C64, Error> {
    let mut r_big = 10.0f64;
    for nd in params.nodes_of(chart_idx) {
        r_big = r_big.max(2.0 * params.node_in_chart(nd.pair, chart_idx).norm() + 10.0);
    }
    let n = 1024;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..n {
        let th = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
        let z = C64::from_polar(r_big, th);
        let dz = C64::new(0.0, 1.0) * z * (2.0 * std::f64::consts::PI / n as f64);
        acc += omega_first_order(params, ChartId::Plane(chart_idx), z)? * dz;
    }
    Ok(-acc / (C64::new(0.0, 1.0) * 2.0 * std::f64::consts::PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::tests::{triangle_packing, two_sphere_packing};
    use crate::surface::{from_packing, pair_frame};

    #[test]
    fn plane_connection_at_zero_a() {
        let m = from_packing(&two_sphere_packing(), &[1.0, 1.0], 0.0).unwrap();
        let z = C64::new(0.7, 0.3);
        let a = connection_a(&m, ChartId::Plane(0), z).unwrap();
        let expect = n_matrix(m.c[0]).scale(m.lambda[0]);
        assert!((a - expect).norm() < 1e-14);
        // neck field vanishes at a = 0
        let an = connection_a(&m, ChartId::Neck(0), C64::new(0.5, 0.2)).unwrap();
        assert!(an.norm() < 1e-14);
    }

    #[test]
    fn traces_vanish_everywhere() {
        let m = from_packing(&triangle_packing(), &[1.0, 1.5, 2.0], 1e-3).unwrap();
        let mut worst: f64 = 0.0;
        for k in 0..40 {
            let th = k as f64 * 0.157;
            let z = C64::from_polar(1.3 + 0.1 * k as f64, th);
            for chart in [ChartId::Plane(0), ChartId::Plane(1), ChartId::Neck(0)] {
                if let Ok(a) = connection_a(&m, chart, z) {
                    worst = worst.max(a.trace().norm());
                }
            }
        }
        assert!(worst < 1e-12, "worst trace {worst}");
    }

    #[test]
    fn gauss_matches_across_nodes() {
        let m = from_packing(&two_sphere_packing(), &[1.0, 1.0], 1e-4).unwrap();
        // neck at 0 → c_i, neck at large |z| → c_j
        match gauss_map_g0(&m, ChartId::Neck(0), C64::new(0.0, 0.0)) {
            BoundaryPoint0::Finite(g) => assert!((g - m.c[0]).norm() < 1e-12),
            _ => panic!(),
        }
        match gauss_map_g0(&m, ChartId::Neck(0), C64::new(1e9, 0.0)) {
            BoundaryPoint0::Finite(g) => assert!((g - m.c[1]).norm() < 1e-8),
            _ => panic!(),
        }
        assert!(matches!(
            gauss_map_g0(&m, ChartId::Neck(0), C64::new(1.0, 0.0)),
            BoundaryPoint0::Infinity
        ));
    }

    #[test]
    fn omega_double_zero_at_one_and_value_at_minus_one() {
        let m = from_packing(&two_sphere_packing(), &[1.0, 1.0], 1e-3).unwrap();
        let w1 = omega_first_order(&m, ChartId::Neck(0), C64::new(1.0, 0.0)).unwrap();
        assert!(w1.norm() < 1e-16);
        // derivative ~ 0 at z = 1 (double zero): central difference
        let h = 1e-5;
        let wp = omega_first_order(&m, ChartId::Neck(0), C64::new(1.0 + h, 0.0)).unwrap();
        let wm = omega_first_order(&m, ChartId::Neck(0), C64::new(1.0 - h, 0.0)).unwrap();
        assert!(((wp - wm) / (2.0 * h)).norm() < 1e-9);
        let wm1 = omega_first_order(&m, ChartId::Neck(0), C64::new(-1.0, 0.0)).unwrap();
        assert!((wm1 - m.a(0) * 2.0).norm() < 1e-15);
        // plane with a = 0 evaluates to λ
        let m0 = from_packing(&two_sphere_packing(), &[1.0, 1.0], 0.0).unwrap();
        let w = omega_first_order(&m0, ChartId::Plane(0), C64::new(0.4, -0.1)).unwrap();
        assert!((w - m0.lambda[0]).norm() < 1e-15);
    }

    #[test]
    fn neck_connection_finite_at_gauss_pole() {
        let m = from_packing(&two_sphere_packing(), &[1.0, 1.0], 1e-3).unwrap();
        let a = connection_a(&m, ChartId::Neck(0), C64::new(1.0, 0.0)).unwrap();
        assert!(a.norm().is_finite());
        // [[0, −a(c_i−c_j)²/2],[0,0]] expected
        let d = m.c[0] - m.c[1];
        let expect = Mat2C::new(
            C64::new(0.0, 0.0),
            -m.a(0) * d * d / 2.0,
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        );
        assert!((a - expect).norm() < 1e-14);
    }

    #[test]
    fn hat_equals_conjugated_product() {
        let m = from_packing(&triangle_packing(), &[1.0, 1.0, 1.0], 1e-3).unwrap();
        for k in 0..m.pairs.len() {
            let fr = pair_frame(&m, k).unwrap();
            let hinv = fr.h.inverse_sl();
            let samples = [
                (ChartId::Plane(fr.i), C64::new(0.9, 0.6)),
                (ChartId::Plane(fr.j), C64::new(-0.8, 0.9)),
                (ChartId::Neck(k), C64::new(0.4, 0.8)),
                (ChartId::Neck(k), C64::new(-2.0, 0.3)),
            ];
            for (chart, z) in samples {
                let hat = connection_a_hat(&fr, &m, chart, z).unwrap();
                let conj = fr.h * connection_a_product(&m, chart, z).unwrap() * hinv;
                assert!(
                    (hat - conj).norm() < 1e-12 * hat.norm().max(1.0),
                    "chart {chart:?} z {z}: {}",
                    (hat - conj).norm()
                );
            }
        }
    }

    #[test]
    fn hat_first_order_coefficients() {
        // (Â(a) − Â(0))/a against the displayed coefficient matrices
        let packing = two_sphere_packing();
        let m0 = from_packing(&packing, &[1.0, 1.0], 0.0).unwrap();
        let mut m1 = m0.clone();
        m1.tau = 1e-6;
        m1.b[0] = C64::new(1.0, 0.0); // a = τ/(c_i − c_j)
        let a_val = m1.a(0);
        let fr = pair_frame(&m0, 0).unwrap();
        let hinv = fr.h.inverse_sl();
        let conj = |mm: &super::SurfaceParams, chart, z| {
            fr.h * connection_a(mm, chart, z).unwrap() * hinv
        };
        // plane i: (c_i − c_j)/2 diag(1,−1)/(z − p)
        let zi = C64::new(0.3, 1.1);
        let d_num = (conj(&m1, ChartId::Plane(0), zi) - conj(&m0, ChartId::Plane(0), zi))
            .scale(1.0 / a_val);
        let dc = (m0.c[0] - m0.c[1]) / 2.0;
        let expect = Mat2C::diag(dc, -dc).scale(1.0 / (zi - m0.pairs[0].node_i));
        assert!((d_num - expect).norm() < 1e-5 * expect.norm());
        // plane j: (c_j − c_i)/2 diag(1,−1)/(z − p_ji)
        let zj = C64::new(-0.7, 0.8);
        let d_num_j = (conj(&m1, ChartId::Plane(1), zj) - conj(&m0, ChartId::Plane(1), zj))
            .scale(1.0 / a_val);
        let expect_j = Mat2C::diag(-dc, dc).scale(1.0 / (zj - m0.pairs[0].node_j));
        assert!((d_num_j - expect_j).norm() < 1e-5 * expect_j.norm());
        // neck: (c_j − c_i)/2 [[z, −ρ²],[ρ⁻² z², −z]]/z²
        let zn = C64::new(0.5, -0.9);
        let d_num_n = (conj(&m1, ChartId::Neck(0), zn) - conj(&m0, ChartId::Neck(0), zn))
            .scale(1.0 / a_val);
        let expect_n = Mat2C::new(
            zn,
            -fr.rho_sq,
            fr.rho_inv_sq * zn * zn,
            -zn,
        )
        .scale(-dc / (zn * zn));
        assert!(
            (d_num_n - expect_n).norm() < 1e-5 * expect_n.norm(),
            "{d_num_n:?} vs {expect_n:?}"
        );
    }

    #[test]
    fn gauss_derivative_matches_closed_form() {
        let packing = triangle_packing();
        let m0 = from_packing(&packing, &[1.0, 1.0, 1.0], 0.0).unwrap();
        for k in 0..m0.pairs.len() {
            let mut m1 = m0.clone();
            m1.tau = 1e-6;
            for kk in 0..m1.b.len() {
                m1.b[kk] = C64::new(0.0, 0.0);
            }
            m1.b[k] = C64::new(1.0, 0.0);
            let a_val = m1.a(k);
            let pr = m0.pairs[k];
            for (chart_idx, node) in [(pr.i, pr.node_i), (pr.j, pr.node_j)] {
                let z = node + C64::new(1.7, 0.9);
                let g1 = match gauss_first_order(&m1, ChartId::Plane(chart_idx), z) {
                    BoundaryPoint0::Finite(g) => g,
                    _ => panic!(),
                };
                let fd = (g1 - m0.c[chart_idx]) / a_val;
                let expect =
                    (m0.c[pr.j] - m0.c[pr.i]) / (m0.lambda[chart_idx] * 2.0) / (z - node);
                assert!(
                    (fd - expect).norm() < 1e-8 * expect.norm().max(1.0),
                    "chart {chart_idx} pair {k}"
                );
            }
        }
    }

    #[test]
    fn residue_bookkeeping_exact() {
        let m = from_packing(&triangle_packing(), &[1.0, 2.0, 1.5], 1e-3).unwrap();
        for i in 0..m.n() {
            let res_inf = residue_at_infinity(&m, i).unwrap();
            let mut sum = C64::new(0.0, 0.0);
            for nd in m.nodes_of(i) {
                let a = m.a(nd.pair);
                sum += if nd.sign > 0 { a } else { -a };
            }
            assert!(
                (sum + res_inf).norm() < 1e-12,
                "chart {i}: sum {sum} res_inf {res_inf}"
            );
        }
    }
}
