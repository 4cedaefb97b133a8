//! The regular metric on the 2-skeleton minus the vertices: every 2-simplex
//! is carried isometrically to a fixed ideal triangle in the hyperbolic
//! plane. Arc lengths, PL area, and length minimization over edge-crossing
//! positions live here.
//!
//! Model triangle: ideal vertices 0, 1, oo in the upper half-plane. Sides
//! are indexed by the opposite corner and parametrized by signed hyperbolic
//! arclength from the incircle tangency points (i on the 0-oo side, 1+i on
//! the 1-oo side, (1+i)/2 on the 0-1 side), positive toward the
//! higher-indexed corner.

pub mod minimize;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{edge_index, face_corners, TriangulationWindow};

/// Equality tolerance for lengths.
pub const LENGTH_EQ_TOL: f64 = 1e-9;
/// Gradient norm stopping threshold for minimization.
pub const GRAD_TOL: f64 = 1e-8;
/// Parameter magnitude beyond which a still-decreasing length is diagnosed
/// as cusp drift; arcs out there are shorter than 1e-20.
pub const DRIFT_BOUND: f64 = 50.0;

/// A position on a bi-infinite geodesic edge: signed arclength from the
/// class basepoint, along the class orientation.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct EdgePosition {
    pub edge_class: u32,
    pub param: f64,
}

/// Identification of one side of a face class with a model side.
#[derive(Copy, Clone, Debug, Serialize)]
pub struct SideIdent {
    pub edge_class: u32,
    /// Whether the side direction (low corner to high corner) runs against
    /// the edge class orientation.
    pub flip: bool,
    /// Arclength offset of the edge basepoint from the model tangency point.
    pub offset: f64,
}

/// Metric data: per face class, the identification of its three sides with
/// the model sides. Offsets all zero is the regular structure.
#[derive(Clone, Debug)]
pub struct JRMetricData {
    sides: Vec<[SideIdent; 3]>,
    regular: bool,
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("edge class {0} is identified with itself reversed; no consistent parametrization")]
    ReversedEdge(u32),
    #[error("positions lie on the same side of the face")]
    SameSide,
    #[error("edge class {0} does not bound face class {1}")]
    EdgeNotOnFace(u32, u32),
}

impl JRMetricData {
    /// The regular structure: offsets zero, flips from the skeleton
    /// orientation data.
    pub fn regular(w: &TriangulationWindow) -> Result<JRMetricData, MetricError> {
        if let Some(&e) = w.reversed_self_edges().first() {
            return Err(MetricError::ReversedEdge(e));
        }
        let mut sides = Vec::with_capacity(w.face_class_count());
        for fc in 0..w.face_class_count() as u32 {
            let &(ti, f) = &w.face_sides(fc)[0];
            let corners = face_corners(f);
            let mut idents = [SideIdent { edge_class: 0, flip: false, offset: 0.0 }; 3];
            for k in 0..3usize {
                // Side k connects the two corners other than k.
                let others: Vec<u8> = (0..3).filter(|&j| j != k).map(|j| corners[j]).collect();
                let (u, v) = (others[0], others[1]);
                let e = edge_index(u, v);
                idents[k] = SideIdent {
                    edge_class: w.edge_class_of(ti, e),
                    flip: w.edge_reversed(ti, e),
                    offset: 0.0,
                };
            }
            sides.push(idents);
        }

        Ok(JRMetricData { sides, regular: true })
    }

    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn side(&self, face_class: u32, side: u8) -> &SideIdent {
        &self.sides[face_class as usize][side as usize]
    }

    /// Model-side position of an edge-class param on the given face side.
    pub fn side_position(&self, face_class: u32, side: u8, edge_param: f64) -> f64 {
        let ident = self.side(face_class, side);
        if ident.flip {
            ident.offset - edge_param
        } else {
            ident.offset + edge_param
        }
    }

    /// Declare nonzero offsets (non-regular structure).
    pub fn set_offset(&mut self, face_class: u32, side: u8, offset: f64) {
        self.sides[face_class as usize][side as usize].offset = offset;
        self.regular = false;
    }
}

/// Upper half-plane point of a position on a model side.
pub fn model_point(side: u8, s: f64) -> (f64, f64) {
    match side {
        // Side opposite corner 0: the line x = 1, from vertex 1 up to oo.
        0 => (1.0, s.exp()),
        // Side opposite corner 1: the line x = 0, from vertex 0 up to oo.
        1 => (0.0, s.exp()),
        // Side opposite corner 2: the unit semicircle over [0,1], positive
        // direction toward vertex 1.
        2 => {
            let theta = 2.0 * (-s).exp().atan();
            (0.5 + 0.5 * theta.cos(), 0.5 * theta.sin())
        }
        _ => panic!("bad side index {side}"),
    }
}

/// d/ds of the model point.
pub fn model_point_deriv(side: u8, s: f64) -> (f64, f64) {
    match side {
        0 | 1 => (0.0, s.exp()),
        2 => {
            let theta = 2.0 * (-s).exp().atan();
            let dtheta = -1.0 / s.cosh();
            (-0.5 * theta.sin() * dtheta, 0.5 * theta.cos() * dtheta)
        }
        _ => panic!("bad side index {side}"),
    }
}

/// Hyperbolic distance between points on two distinct model sides.
pub fn model_distance(side_a: u8, sa: f64, side_b: u8, sb: f64) -> f64 {
    let (x1, y1) = model_point(side_a, sa);
    let (x2, y2) = model_point(side_b, sb);
    half_plane_distance(x1, y1, x2, y2)
}

pub fn half_plane_distance(x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
    let dx = x1 - x2;
    let dy = y1 - y2;
    let u = (dx * dx + dy * dy) / (2.0 * y1 * y2);
    acosh1p(u)
}

/// arccosh(1 + u) computed without cancellation for tiny u; cuspward arcs
/// reach u below machine epsilon well inside the drift window.
pub fn acosh1p(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    (u + (u * (u + 2.0)).sqrt()).ln_1p()
}

/// Geodesic distance between two realized edge positions on distinct sides
/// of the given face.
pub fn arc_length(
    metric: &JRMetricData,
    w: &TriangulationWindow,
    face_class: u32,
    p: &EdgePosition,
    q: &EdgePosition,
) -> Result<f64, MetricError> {
    let sides = &metric.sides[face_class as usize];
    let find = |edge: u32, exclude: Option<u8>| -> Option<u8> {
        (0..3u8).find(|&k| sides[k as usize].edge_class == edge && Some(k) != exclude)
    };
    let _ = w;
    let ka = find(p.edge_class, None)
        .ok_or(MetricError::EdgeNotOnFace(p.edge_class, face_class))?;
    // Prefer a distinct side for q; two sides of one face may share an edge
    // class, in which case the second occurrence is taken.
    let kb = match find(q.edge_class, Some(ka)) {
        Some(k) => k,
        None => {
            let k = find(q.edge_class, None)
                .ok_or(MetricError::EdgeNotOnFace(q.edge_class, face_class))?;
            if k == ka {
                return Err(MetricError::SameSide);
            }
            k
        }
    };
    let sa = metric.side_position(face_class, ka, p.param);
    let sb = metric.side_position(face_class, kb, q.param);
    Ok(model_distance(ka, sa, kb, sb))
}

/// PL area: weight then length, lexicographically.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct PLArea {
    pub weight: u64,
    pub length: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AreaOrder {
    Less,
    Equal,
    Greater,
}

/// Lexicographic comparison, weight first; lengths within `LENGTH_EQ_TOL`
/// count as equal.
pub fn compare_pl_area(a: &PLArea, b: &PLArea) -> AreaOrder {
    if a.weight != b.weight {
        return if a.weight < b.weight {
            AreaOrder::Less
        } else {
            AreaOrder::Greater
        };
    }
    let d = a.length - b.length;
    if d.abs() <= LENGTH_EQ_TOL {
        AreaOrder::Equal
    } else if d < 0.0 {
        AreaOrder::Less
    } else {
        AreaOrder::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, TetGluing, TetId};

    #[test]
    fn midpoint_distance_matches_closed_form() {
        // Midpoints of the two sides meeting at oo: i and 1+i.
        let d = model_distance(0, 0.0, 1, 0.0);
        assert!((d - 1.5f64.acosh()).abs() < 1e-12);
        assert!((d - 0.9624236501192069).abs() < 1e-9);
    }

    #[test]
    fn cusp_drift_profile() {
        // Points at height h on x=0 and x=1: arccosh(1 + 1/(2h^2)), which
        // decreases to 0 as h grows.
        for &s in &[0.0f64, 1.0, 3.0] {
            let h = s.exp();
            let d = model_distance(0, s, 1, s);
            let expect = (1.0 + 1.0 / (2.0 * h * h)).acosh();
            assert!((d - expect).abs() < 1e-12);
        }
        // Far up the cusp the naive formula saturates; the tail behaves like
        // the series 1/h and keeps decreasing.
        let far = model_distance(0, 10.0, 1, 10.0);
        assert!((far - acosh1p(0.5 * (-20.0f64).exp())).abs() < 1e-18);
        assert!(far < model_distance(0, 1.0, 1, 1.0));
        assert!(model_distance(0, 40.0, 1, 40.0) > 0.0);
    }

    #[test]
    fn side_parametrizations_hit_basepoints() {
        assert_eq!(model_point(1, 0.0), (0.0, 1.0));
        assert_eq!(model_point(0, 0.0), (1.0, 1.0));
        let (x, y) = model_point(2, 0.0);
        assert!((x - 0.5).abs() < 1e-15 && (y - 0.5).abs() < 1e-15);
    }

    #[test]
    fn six_symmetries_preserve_arc_length() {
        // Each symmetry of the ideal triangle permutes the corners; on the
        // sides it acts by the same permutation of side indices with a sign
        // on each parameter. For permutation sigma of corners, side k maps
        // to sigma(k), and the parameter sign is +1 iff sigma preserves the
        // order of the two corners on that side.
        let perms: [[u8; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let samples = [(0u8, 0.37), (1u8, -0.82), (2u8, 0.55), (0u8, -1.3), (2u8, -0.11)];
        for sigma in perms {
            let map = |side: u8, s: f64| -> (u8, f64) {
                let new_side = sigma[side as usize];
                let others: Vec<u8> = (0..3u8).filter(|&c| c != side).collect();
                let (u, v) = (others[0], others[1]);
                // Parameter sign flips when the corner order reverses.
                let sign = if sigma[u as usize] < sigma[v as usize] { 1.0 } else { -1.0 };
                (new_side, sign * s)
            };
            for i in 0..samples.len() {
                for j in (i + 1)..samples.len() {
                    let (ka, sa) = samples[i];
                    let (kb, sb) = samples[j];
                    if ka == kb {
                        continue;
                    }
                    let (ka2, sa2) = map(ka, sa);
                    let (kb2, sb2) = map(kb, sb);
                    let d1 = model_distance(ka, sa, kb, sb);
                    let d2 = model_distance(ka2, sa2, kb2, sb2);
                    assert!(
                        (d1 - d2).abs() < 1e-12,
                        "sigma={sigma:?} ({ka},{sa})-({kb},{sb}): {d1} vs {d2}"
                    );
                }
            }
        }
    }

    #[test]
    fn compare_orders_lexicographically() {
        let a = PLArea { weight: 3, length: 100.0 };
        let b = PLArea { weight: 4, length: 0.1 };
        assert_eq!(compare_pl_area(&a, &b), AreaOrder::Less);
        let a = PLArea { weight: 3, length: 1.0 };
        let b = PLArea { weight: 3, length: 2.0 };
        assert_eq!(compare_pl_area(&a, &b), AreaOrder::Less);
        let b = PLArea { weight: 3, length: 1.0 + 1e-12 };
        assert_eq!(compare_pl_area(&a, &b), AreaOrder::Equal);
    }

    #[test]
    fn regular_metric_on_single_tet() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let m = JRMetricData::regular(&w).unwrap();
        assert!(m.is_regular());
        // Every face has three distinct edge classes on a lone tet.
        for fc in 0..w.face_class_count() as u32 {
            let e: Vec<u32> = (0..3).map(|k| m.side(fc, k).edge_class).collect();
            assert_eq!(e.iter().collect::<std::collections::BTreeSet<_>>().len(), 3);
        }
    }
}
