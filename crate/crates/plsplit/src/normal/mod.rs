//! Normal surface coordinates: per tetrahedron, four triangle-type counts
//! (one per vertex) and three quad-type counts, subject to the matching
//! equations across interior faces and the one-quad-type-per-tet
//! embeddability constraint.
//!
//! Quad type `k` separates vertices {0, k+1} from the other two.

pub mod curve;
pub mod enumerate;
pub mod realize;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{face_corners, FaceGluing, TriangulationWindow, EDGE_VERTS};

/// Per-tet disk-type counts: `tri[v]` triangles at vertex `v`, `quad[k]`
/// quads of type `k`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TetCoords {
    pub tri: [u32; 4],
    pub quad: [u32; 3],
}

impl TetCoords {
    pub const ZERO: TetCoords = TetCoords { tri: [0; 4], quad: [0; 3] };

    pub fn is_zero(&self) -> bool {
        *self == TetCoords::ZERO
    }

    pub fn quad_type(&self) -> Option<u8> {
        (0..3u8).find(|&k| self.quad[k as usize] > 0)
    }

    pub fn admissible(&self) -> bool {
        self.quad.iter().filter(|&&q| q > 0).count() <= 1
    }

    pub fn disk_count(&self) -> u32 {
        self.tri.iter().sum::<u32>() + self.quad.iter().sum::<u32>()
    }
}

/// The quad type whose partition pairs vertices `a` and `b` together.
pub fn quad_type_pairing(a: u8, b: u8) -> u8 {
    debug_assert!(a != b);
    if a == 0 {
        b - 1
    } else if b == 0 {
        a - 1
    } else {
        // The complementary pair contains 0; its partner is the vertex of
        // {1,2,3} missing from {a,b}.
        let other = (1..=3u8).find(|v| *v != a && *v != b).unwrap();
        other - 1
    }
}

/// The two-vertex side of quad type `k` containing vertex 0.
pub fn quad_zero_side(k: u8) -> (u8, u8) {
    (0, k + 1)
}

/// Whether quad type `k` crosses the edge (a, b): exactly when the endpoints
/// lie on opposite sides of the partition.
pub fn quad_crosses_edge(k: u8, a: u8, b: u8) -> bool {
    let in_zero_side = |v: u8| v == 0 || v == k + 1;
    in_zero_side(a) != in_zero_side(b)
}

/// Corner of the arc that a disk type leaves in face `f`, if any.
pub fn arc_corner(dtype: DiskType, f: u8) -> Option<u8> {
    match dtype {
        DiskType::Tri(v) => {
            if v == f {
                None
            } else {
                Some(v)
            }
        }
        DiskType::Quad(k) => {
            // The corner is the partition partner of the off-face vertex f.
            let (z0, z1) = quad_zero_side(k);
            Some(if f == z0 {
                z1
            } else if f == z1 {
                z0
            } else {
                // f is on the complementary pair; its partner is the other
                // complementary vertex.
                (1..=3u8)
                    .chain(std::iter::once(0))
                    .find(|&v| v != f && v != z0 && v != z1)
                    .unwrap()
            })
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiskType {
    Tri(u8),
    Quad(u8),
}

impl DiskType {
    pub fn crosses_edge(&self, e: u8) -> bool {
        let (a, b) = EDGE_VERTS[e as usize];
        match *self {
            DiskType::Tri(v) => a == v || b == v,
            DiskType::Quad(k) => quad_crosses_edge(k, a, b),
        }
    }
}

/// Normal coordinates on a window, aligned with its tet order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalCoordinates {
    pub tets: Vec<TetCoords>,
}

#[derive(Debug, Error)]
pub enum NormalError {
    #[error("coordinate vector length {got} does not match window tet count {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("tet {tet} has two nonzero quad types")]
    QuadConflict { tet: usize },
    #[error("matching equation fails on face class {face} corner {corner}: {lhs} vs {rhs}")]
    Matching { face: u32, corner: u8, lhs: u32, rhs: u32 },
    #[error("edge class {edge}: incident tets disagree on crossing count ({a} vs {b})")]
    EdgeCount { edge: u32, a: u32, b: u32 },
    #[error("enumeration budget exceeded ({0} nodes); narrow the window or bound")]
    WindowTooLarge(usize),
    #[error("surface parse: line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl NormalCoordinates {
    pub fn zero(w: &TriangulationWindow) -> NormalCoordinates {
        NormalCoordinates { tets: vec![TetCoords::ZERO; w.tet_count()] }
    }

    pub fn is_zero(&self) -> bool {
        self.tets.iter().all(|t| t.is_zero())
    }

    /// Arc count of this tet's disks at corner `v` of its face `f`.
    pub fn arcs_at(&self, ti: usize, f: u8, v: u8) -> u32 {
        debug_assert!(v != f);
        let c = &self.tets[ti];
        c.tri[v as usize] + c.quad[quad_type_pairing(v, f) as usize]
    }

    /// Crossings of this tet's disks on its local edge `e`.
    pub fn edge_crossings(&self, ti: usize, e: u8) -> u32 {
        let (a, b) = EDGE_VERTS[e as usize];
        let c = &self.tets[ti];
        let qsum: u32 = c.quad.iter().sum();
        c.tri[a as usize] + c.tri[b as usize] + qsum
            - c.quad[quad_type_pairing(a, b) as usize]
    }

    /// Total weight: crossings summed over edge classes, using one incident
    /// side as representative (consistent once matching holds).
    pub fn weight(&self, w: &TriangulationWindow) -> u64 {
        let mut total = 0u64;
        for ec in 0..w.edge_class_count() as u32 {
            let &(ti, e) = &w.edge_sides(ec)[0];
            total += self.edge_crossings(ti, e) as u64;
        }
        total
    }

    /// Validates admissibility, matching equations, and edge-count
    /// consistency.
    pub fn validate(&self, w: &TriangulationWindow) -> Result<(), NormalError> {
        if self.tets.len() != w.tet_count() {
            return Err(NormalError::SizeMismatch { got: self.tets.len(), want: w.tet_count() });
        }
        for (ti, c) in self.tets.iter().enumerate() {
            if !c.admissible() {
                return Err(NormalError::QuadConflict { tet: ti });
            }
        }
        for fc in 0..w.face_class_count() as u32 {
            let sides = w.face_sides(fc);
            if sides.len() != 2 {
                continue;
            }
            let (ti, fi) = sides[0];
            if let FaceGluing::Glued { tet, face: fj, perm } = *w.gluing(ti, fi) {
                let tj = w.tet_index(tet).unwrap();
                for v in face_corners(fi) {
                    let lhs = self.arcs_at(ti, fi, v);
                    let rhs = self.arcs_at(tj, fj, perm.apply(v));
                    if lhs != rhs {
                        return Err(NormalError::Matching { face: fc, corner: v, lhs, rhs });
                    }
                }
            }
        }
        for ec in 0..w.edge_class_count() as u32 {
            let sides = w.edge_sides(ec);
            let first = self.edge_crossings(sides[0].0, sides[0].1);
            for &(ti, e) in &sides[1..] {
                let got = self.edge_crossings(ti, e);
                if got != first {
                    return Err(NormalError::EdgeCount { edge: ec, a: first, b: got });
                }
            }
        }
        Ok(())
    }

    /// True when no disk leaves an arc on a window-boundary face.
    pub fn is_closed(&self, w: &TriangulationWindow) -> bool {
        for fc in 0..w.face_class_count() as u32 {
            if !w.is_boundary_face(fc) {
                continue;
            }
            let &(ti, f) = &w.face_sides(fc)[0];
            for v in face_corners(f) {
                if self.arcs_at(ti, f, v) > 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Coordinate sum (Haken sum at the coordinate level). `None` when the
    /// quad types are incompatible in some tet.
    pub fn haken_sum(&self, other: &NormalCoordinates) -> Option<NormalCoordinates> {
        if self.tets.len() != other.tets.len() {
            return None;
        }
        let mut tets = Vec::with_capacity(self.tets.len());
        for (a, b) in self.tets.iter().zip(&other.tets) {
            let mut tri = [0u32; 4];
            let mut quad = [0u32; 3];
            for i in 0..4 {
                tri[i] = a.tri[i] + b.tri[i];
            }
            for k in 0..3 {
                quad[k] = a.quad[k] + b.quad[k];
            }
            let c = TetCoords { tri, quad };
            if !c.admissible() {
                return None;
            }
            tets.push(c);
        }
        Some(NormalCoordinates { tets })
    }

    /// Scales all counts (parallel copies).
    pub fn scaled(&self, k: u32) -> NormalCoordinates {
        NormalCoordinates {
            tets: self
                .tets
                .iter()
                .map(|c| TetCoords {
                    tri: [c.tri[0] * k, c.tri[1] * k, c.tri[2] * k, c.tri[3] * k],
                    quad: [c.quad[0] * k, c.quad[1] * k, c.quad[2] * k],
                })
                .collect(),
        }
    }

    /// Tets with at least one disk.
    pub fn support(&self) -> Vec<usize> {
        self.tets
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Parses the `.nsc` text format: named surfaces, one tet per line.
///
/// ```text
/// surf <name> tet <id>: t0 t1 t2 t3 q0 q1 q2
/// ```
///
/// Tets omitted from a surface carry zero coordinates.
pub fn parse_nsc(
    text: &str,
    w: &TriangulationWindow,
) -> Result<Vec<(String, NormalCoordinates)>, NormalError> {
    let mut by_name: BTreeMap<String, NormalCoordinates> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let err = |msg: &str| NormalError::Parse { line, msg: msg.into() };
        let rest = s.strip_prefix("surf").ok_or_else(|| err("expected `surf`"))?;
        let rest = rest.trim_start();
        let (name, rest) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| err("expected surface name"))?;
        let rest = rest.trim_start();
        let rest = rest.strip_prefix("tet").ok_or_else(|| err("expected `tet`"))?;
        let (id_str, nums) = rest.split_once(':').ok_or_else(|| err("expected `:`"))?;
        let id: i64 = id_str
            .trim()
            .parse()
            .map_err(|_| err("bad tet id"))?;
        let ti = w
            .tet_index(crate::complex::TetId(id))
            .ok_or_else(|| err(&format!("tet {id} not in window")))?;
        let vals: Vec<u32> = nums
            .split_whitespace()
            .map(|v| v.parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| err("bad coordinate"))?;
        if vals.len() != 7 {
            return Err(err("expected 7 coordinates"));
        }
        let entry = by_name.entry(name.to_string()).or_insert_with(|| {
            order.push(name.to_string());
            NormalCoordinates::zero(w)
        });
        entry.tets[ti] = TetCoords {
            tri: [vals[0], vals[1], vals[2], vals[3]],
            quad: [vals[4], vals[5], vals[6]],
        };
    }
    Ok(order
        .into_iter()
        .map(|name| {
            let c = by_name.remove(&name).unwrap();
            (name, c)
        })
        .collect())
}

pub fn emit_nsc(surfaces: &[(String, &NormalCoordinates)], w: &TriangulationWindow) -> String {
    let mut out = String::new();
    for (name, c) in surfaces {
        for (ti, tc) in c.tets.iter().enumerate() {
            if tc.is_zero() {
                continue;
            }
            out.push_str(&format!(
                "surf {name} tet {}: {} {} {} {} {} {} {}\n",
                w.tet_id(ti),
                tc.tri[0],
                tc.tri[1],
                tc.tri[2],
                tc.tri[3],
                tc.quad[0],
                tc.quad[1],
                tc.quad[2]
            ));
        }
    }
    out
}

/// Weight of a single disk type: its number of edge crossings.
pub fn disk_weight(d: DiskType) -> u32 {
    match d {
        DiskType::Tri(_) => 3,
        DiskType::Quad(_) => 4,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, TetGluing, TetId};

    #[test]
    fn quad_pairing_table() {
        assert_eq!(quad_type_pairing(0, 1), 0);
        assert_eq!(quad_type_pairing(2, 3), 0);
        assert_eq!(quad_type_pairing(0, 2), 1);
        assert_eq!(quad_type_pairing(1, 3), 1);
        assert_eq!(quad_type_pairing(0, 3), 2);
        assert_eq!(quad_type_pairing(1, 2), 2);
    }

    #[test]
    fn quad_crossings() {
        // Quad 0 separates {0,1} | {2,3}: crosses the four mixed edges.
        for (e, &(a, b)) in EDGE_VERTS.iter().enumerate() {
            let crosses = quad_crosses_edge(0, a, b);
            let expect = !matches!((a, b), (0, 1) | (2, 3));
            assert_eq!(crosses, expect, "edge {e}");
        }
    }

    #[test]
    fn weight_of_lone_disks() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let mut c = NormalCoordinates::zero(&w);
        c.tets[0].tri[2] = 1;
        assert_eq!(c.weight(&w), 3);
        c.tets[0].tri[2] = 0;
        c.tets[0].quad[1] = 1;
        assert_eq!(c.weight(&w), 4);
    }

    #[test]
    fn haken_sum_is_additive_on_weight() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let mut a = NormalCoordinates::zero(&w);
        a.tets[0].tri[0] = 2;
        let mut b = NormalCoordinates::zero(&w);
        b.tets[0].tri[3] = 1;
        b.tets[0].quad[1] = 1;
        let s = a.haken_sum(&b).unwrap();
        assert_eq!(s.weight(&w), a.weight(&w) + b.weight(&w));
        let mut conflicting = NormalCoordinates::zero(&w);
        conflicting.tets[0].quad[2] = 1;
        assert!(b.haken_sum(&conflicting).is_none());
    }

    #[test]
    fn nsc_round_trip() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let mut c = NormalCoordinates::zero(&w);
        c.tets[0] = TetCoords { tri: [1, 0, 2, 0], quad: [0, 3, 0] };
        let text = emit_nsc(&[("s".to_string(), &c)], &w);
        let parsed = parse_nsc(&text, &w).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[0].1, c);
    }
}
