//! Geometric realization of normal coordinates: explicit crossings on edge
//! classes, disks with ordered boundary arcs, and the induced surface cell
//! complex (crossings/arcs/disks) used for PL area, analysis, intersections,
//! and length minimization.
//!
//! Crossing order along an edge, seen from a local edge (a,b) of one tet:
//! triangles at `a` innermost, then the quad stack (copy 0 nearest the side
//! of the quad partition containing vertex 0), then triangles at `b`
//! innermost from `b`. Within each face the induced corner arcs are nested
//! without crossings.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{edge_index, TriangulationWindow, EDGE_VERTS};
use crate::hypmetric::minimize::{ArcSpec, Endpoint, LengthProblem};
use crate::hypmetric::{model_distance, JRMetricData, PLArea};

use super::{quad_type_pairing, quad_zero_side, DiskType, NormalCoordinates, NormalError};

#[derive(Copy, Clone, Debug, Serialize)]
pub struct Crossing {
    pub edge_class: u32,
    /// 1-based position along the class orientation.
    pub slot: u32,
    pub param: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Disk {
    pub tet: usize,
    pub dtype: DiskType,
    pub copy: u32,
    /// Boundary cycle: arc ids with traversal direction (true = a to b).
    pub boundary: Vec<(usize, bool)>,
    /// Crossing per crossed local edge.
    pub edge_crossings: Vec<(u8, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfArc {
    pub face_class: u32,
    /// Corner of the face (rep labels) the arc cuts.
    pub rep_corner: u8,
    pub a: usize,
    pub b: usize,
    /// Incident disks with the local face they meet this arc through.
    pub disks: Vec<(usize, u8)>,
}

#[derive(Clone, Debug)]
pub struct RealizedSurface {
    pub coords: NormalCoordinates,
    pub crossings: Vec<Crossing>,
    pub disks: Vec<Disk>,
    pub arcs: Vec<SurfArc>,
    crossing_ids: HashMap<(u32, u32), usize>,
}

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Coords(#[from] NormalError),
    #[error("edge class {edge}: local side expects {local} crossings, class has {class}")]
    SlotMismatch { edge: u32, local: u32, class: u32 },
}

impl RealizedSurface {
    pub fn crossing_id(&self, edge_class: u32, slot: u32) -> Option<usize> {
        self.crossing_ids.get(&(edge_class, slot)).copied()
    }

    pub fn weight(&self) -> u64 {
        self.crossings.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    /// Arcs lying in window-boundary faces (surface boundary).
    pub fn boundary_arcs(&self) -> Vec<usize> {
        self.arcs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.disks.len() == 1)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Realizes validated coordinates with equally spaced crossing parameters in
/// a width-2 interval around each edge basepoint, shifted by `param_shift`
/// (deterministic perturbation between surfaces).
pub fn realize_surface(
    w: &TriangulationWindow,
    coords: &NormalCoordinates,
    param_shift: f64,
) -> Result<RealizedSurface, RealizeError> {
    coords.validate(w)?;

    // Crossings per edge class.
    let mut crossings = Vec::new();
    let mut crossing_ids = HashMap::new();
    let mut edge_w = vec![0u32; w.edge_class_count()];
    for ec in 0..w.edge_class_count() as u32 {
        let &(ti, e) = &w.edge_sides(ec)[0];
        let count = coords.edge_crossings(ti, e);
        edge_w[ec as usize] = count;
        for slot in 1..=count {
            let param = -1.0 + 2.0 * slot as f64 / (count + 1) as f64 + param_shift;
            crossing_ids.insert((ec, slot), crossings.len());
            crossings.push(Crossing { edge_class: ec, slot, param });
        }
    }

    // The slot of a disk's crossing on a local edge of its tet.
    let local_slot = |ti: usize, e: u8, dtype: DiskType, copy: u32| -> Result<u32, RealizeError> {
        let (a, b) = EDGE_VERTS[e as usize];
        let c = &coords.tets[ti];
        let t_a = c.tri[a as usize];
        let t_b = c.tri[b as usize];
        let pairing = quad_type_pairing(a, b);
        let (qk, nq) = match c.quad_type() {
            Some(k) if k != pairing && c.quad[k as usize] > 0 => (Some(k), c.quad[k as usize]),
            _ => (None, 0),
        };
        let local_total = t_a + t_b + nq;
        let class_total = edge_w[w.edge_class_of(ti, e) as usize];
        if local_total != class_total {
            return Err(RealizeError::SlotMismatch {
                edge: w.edge_class_of(ti, e),
                local: local_total,
                class: class_total,
            });
        }
        let s = match dtype {
            DiskType::Tri(v) if v == a => copy + 1,
            DiskType::Tri(v) if v == b => local_total - copy,
            DiskType::Tri(v) => panic!("triangle at {v} does not cross edge ({a},{b})"),
            DiskType::Quad(k) => {
                debug_assert_eq!(Some(k), qk);
                let (z0, z1) = quad_zero_side(k);
                let a_on_zero_side = a == z0 || a == z1;
                if a_on_zero_side {
                    t_a + copy + 1
                } else {
                    t_a + nq - copy
                }
            }
        };
        Ok(if w.edge_reversed(ti, e) { class_total + 1 - s } else { s })
    };

    // Disks with their crossing cycles, then deduped arcs.
    let mut disks: Vec<Disk> = Vec::new();
    let mut arc_ids: HashMap<(u32, usize, usize, u8), usize> = HashMap::new();
    let mut arcs: Vec<SurfArc> = Vec::new();

    for ti in 0..w.tet_count() {
        let c = &coords.tets[ti];
        let mut tet_disks: Vec<DiskType> = Vec::new();
        let mut copies: Vec<u32> = Vec::new();
        for v in 0..4u8 {
            for copy in 0..c.tri[v as usize] {
                tet_disks.push(DiskType::Tri(v));
                copies.push(copy);
            }
        }
        for k in 0..3u8 {
            for copy in 0..c.quad[k as usize] {
                tet_disks.push(DiskType::Quad(k));
                copies.push(copy);
            }
        }
        for (dtype, copy) in tet_disks.into_iter().zip(copies) {
            let disk_id = disks.len();
            // Cycle of (edge, corner-of-next-arc's-face...) built from the
            // crossed-edge cycle; consecutive crossings share a face.
            let cycle: Vec<(u8, u8)> = match dtype {
                DiskType::Tri(v) => {
                    let xs: Vec<u8> = (0..4u8).filter(|&x| x != v).collect();
                    // Crossings on edges (v,x1),(v,x2),(v,x3); the arc from
                    // (v,xi) to (v,xj) lies in the face opposite the third.
                    vec![
                        (edge_index(v, xs[0]), xs[2]),
                        (edge_index(v, xs[1]), xs[0]),
                        (edge_index(v, xs[2]), xs[1]),
                    ]
                }
                DiskType::Quad(k) => {
                    let (p0, p1) = quad_zero_side(k);
                    let qs: Vec<u8> = (0..4u8).filter(|&x| x != p0 && x != p1).collect();
                    let (q0, q1) = (qs[0], qs[1]);
                    // Cycle (p0,q0) -> (p0,q1) -> (p1,q1) -> (p1,q0); the
                    // face of each step is opposite the vertex not involved.
                    vec![
                        (edge_index(p0, q0), p1),
                        (edge_index(p0, q1), q0),
                        (edge_index(p1, q1), p0),
                        (edge_index(p1, q0), q1),
                    ]
                }
            };
            // cycle[i] = (edge, face of the arc from crossing i to i+1).
            let ids: Vec<usize> = cycle
                .iter()
                .map(|&(e, _)| {
                    let slot = local_slot(ti, e, dtype, copy)?;
                    let ec = w.edge_class_of(ti, e);
                    Ok(crossing_ids[&(ec, slot)])
                })
                .collect::<Result<_, RealizeError>>()?;
            let edge_crossings: Vec<(u8, usize)> =
                cycle.iter().map(|&(e, _)| e).zip(ids.iter().copied()).collect();
            let mut boundary = Vec::with_capacity(cycle.len());
            for i in 0..cycle.len() {
                let j = (i + 1) % cycle.len();
                let f = cycle[i].1;
                let corner = super::arc_corner(dtype, f).expect("disk leaves an arc in this face");
                let rep_corner = w.face_rep_corner(ti, f, corner);
                let fc = w.face_class_of(ti, f);
                let (ca, cb) = (ids[i], ids[j]);
                let key = (fc, ca.min(cb), ca.max(cb), rep_corner);
                let arc_id = *arc_ids.entry(key).or_insert_with(|| {
                    arcs.push(SurfArc {
                        face_class: fc,
                        rep_corner,
                        a: ca.min(cb),
                        b: ca.max(cb),
                        disks: Vec::new(),
                    });
                    arcs.len() - 1
                });
                if !arcs[arc_id].disks.contains(&(disk_id, f)) {
                    arcs[arc_id].disks.push((disk_id, f));
                }
                boundary.push((arc_id, ca <= cb));
            }
            disks.push(Disk { tet: ti, dtype, copy, boundary, edge_crossings });
        }
    }

    Ok(RealizedSurface {
        coords: coords.clone(),
        crossings,
        disks,
        arcs,
        crossing_ids,
    })
}

/// PL area: weight is the crossing count; length sums each arc of the
/// induced 1-complex on the 2-skeleton once.
pub fn pl_area(
    metric: &JRMetricData,
    w: &TriangulationWindow,
    s: &RealizedSurface,
) -> PLArea {
    let mut length = 0.0;
    for arc in &s.arcs {
        length += arc_geodesic_length(metric, w, s, arc);
    }
    PLArea { weight: s.weight(), length }
}

/// Sides of the face (in rep labels) that an arc at `rep_corner` joins.
pub fn arc_sides(rep_corner: u8) -> (u8, u8) {
    match rep_corner {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("bad corner {rep_corner}"),
    }
}

/// Assigns the arc's two endpoints to face sides, matching edge classes;
/// when both sides lie on one edge class the assignment is by crossing
/// order (deterministic).
fn arc_side_assignment(
    metric: &JRMetricData,
    s: &RealizedSurface,
    arc: &SurfArc,
) -> ((u8, usize), (u8, usize)) {
    let (s1, s2) = arc_sides(arc.rep_corner);
    let e1 = metric.side(arc.face_class, s1).edge_class;
    let e2 = metric.side(arc.face_class, s2).edge_class;
    let (ea, eb) = (s.crossings[arc.a].edge_class, s.crossings[arc.b].edge_class);
    if ea == e1 && eb == e2 {
        ((s1, arc.a), (s2, arc.b))
    } else if ea == e2 && eb == e1 {
        ((s2, arc.a), (s1, arc.b))
    } else {
        // Shared edge class on both sides: keep crossing order.
        ((s1, arc.a), (s2, arc.b))
    }
}

pub fn arc_geodesic_length(
    metric: &JRMetricData,
    w: &TriangulationWindow,
    s: &RealizedSurface,
    arc: &SurfArc,
) -> f64 {
    let _ = w;
    let ((sa, ca), (sb, cb)) = arc_side_assignment(metric, s, arc);
    let pa = metric.side_position(arc.face_class, sa, s.crossings[ca].param);
    let pb = metric.side_position(arc.face_class, sb, s.crossings[cb].param);
    model_distance(sa, pa, sb, pb)
}

/// Builds the shared-variable length problem for a surface: one variable per
/// crossing, arcs referencing the side identifications.
pub fn length_problem(
    metric: &JRMetricData,
    s: &RealizedSurface,
    frozen: Vec<usize>,
) -> (LengthProblem, Vec<f64>) {
    let mut arcs = Vec::with_capacity(s.arcs.len());
    for arc in &s.arcs {
        let ((sa, ca), (sb, cb)) = arc_side_assignment(metric, s, arc);
        let ia = metric.side(arc.face_class, sa);
        let ib = metric.side(arc.face_class, sb);
        arcs.push(ArcSpec {
            a: Endpoint { side: sa, var: ca, flip: ia.flip, offset: ia.offset },
            b: Endpoint { side: sb, var: cb, flip: ib.flip, offset: ib.offset },
        });
    }
    let start: Vec<f64> = s.crossings.iter().map(|c| c.param).collect();
    (
        LengthProblem { arcs, n_vars: s.crossings.len(), frozen },
        start,
    )
}

// ---------------------------------------------------------------------------
// Surface analysis: components, Euler characteristic, orientability, kind.
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceKind {
    Sphere,
    Torus,
    Klein,
    Disk,
    Annulus,
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub disks: Vec<usize>,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub boundary_circles: usize,
    pub closed: bool,
    pub kind: SurfaceKind,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurfaceReport {
    pub components: Vec<ComponentReport>,
}

struct Dsu {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect(), parity: vec![false; n] }
    }
    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (r, p) = self.find(self.parent[x]);
        let total = p ^ self.parity[x];
        self.parent[x] = r;
        self.parity[x] = total;
        (r, total)
    }
    fn union(&mut self, x: usize, y: usize, rel: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return (px ^ py) == rel;
        }
        self.parent[rx] = ry;
        self.parity[rx] = px ^ py ^ rel;
        true
    }
}

/// Components by arc incidence, Euler characteristic by cell count,
/// orientability by boundary-orientation propagation, kind from the
/// classification data.
pub fn analyze_surface(s: &RealizedSurface) -> SurfaceReport {
    let n = s.disks.len();
    let mut dsu = Dsu::new(n);
    let mut orientable_violation: Vec<bool> = vec![false; n];
    for (ai, arc) in s.arcs.iter().enumerate() {
        if arc.disks.len() == 2 {
            let (d1, f1) = arc.disks[0];
            let (d2, f2) = arc.disks[1];
            // Consistent orientation requires opposite traversal.
            let t1 = traversal(s, d1, ai, f1);
            let t2 = traversal(s, d2, ai, f2);
            let rel = t1 == t2; // same direction => flip one side
            if d1 == d2 {
                // A disk glued to itself along this arc: orientable only
                // when its two traversals oppose.
                let hits: Vec<bool> = s.disks[d1]
                    .boundary
                    .iter()
                    .filter(|&&(a, _)| a == ai)
                    .map(|&(_, fwd)| fwd)
                    .collect();
                if hits.len() == 2 && hits[0] == hits[1] {
                    orientable_violation[d1] = true;
                }
            } else if !dsu.union(d1, d2, rel) {
                orientable_violation[d1] = true;
            }
        }
    }

    // Group disks into components.
    let mut comp_of: HashMap<usize, usize> = HashMap::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for d in 0..n {
        let (r, _) = dsu.find(d);
        let c = *comp_of.entry(r).or_insert_with(|| {
            comps.push(Vec::new());
            comps.len() - 1
        });
        comps[c].push(d);
    }

    let mut reports = Vec::new();
    for comp in comps {
        let in_comp: std::collections::BTreeSet<usize> = comp.iter().copied().collect();
        let comp_arcs: Vec<usize> = s
            .arcs
            .iter()
            .enumerate()
            .filter(|(_, a)| a.disks.iter().any(|(d, _)| in_comp.contains(d)))
            .map(|(i, _)| i)
            .collect();
        let mut comp_crossings: std::collections::BTreeSet<usize> =
            std::collections::BTreeSet::new();
        for &ai in &comp_arcs {
            comp_crossings.insert(s.arcs[ai].a);
            comp_crossings.insert(s.arcs[ai].b);
        }
        let v = comp_crossings.len() as i64;
        let e = comp_arcs.len() as i64;
        let f = comp.len() as i64;
        let chi = v - e + f;
        let orientable = comp.iter().all(|&d| !orientable_violation[d]);
        // Boundary circles: chain boundary arcs through crossings.
        let boundary: Vec<usize> = comp_arcs
            .iter()
            .copied()
            .filter(|&ai| s.arcs[ai].disks.len() == 1)
            .collect();
        let boundary_circles = count_boundary_circles(s, &boundary);
        let closed = boundary.is_empty();
        let kind = classify(chi, orientable, closed, boundary_circles);
        reports.push(ComponentReport {
            disks: comp,
            euler_characteristic: chi,
            orientable,
            boundary_circles,
            closed,
            kind,
        });
    }
    SurfaceReport { components: reports }
}

fn traversal(s: &RealizedSurface, disk: usize, arc_id: usize, _local_face: u8) -> bool {
    for &(ai, fwd) in &s.disks[disk].boundary {
        if ai == arc_id {
            return fwd;
        }
    }
    unreachable!("disk does not traverse arc");
}

fn count_boundary_circles(s: &RealizedSurface, boundary: &[usize]) -> usize {
    if boundary.is_empty() {
        return 0;
    }
    let mut at_crossing: HashMap<usize, Vec<usize>> = HashMap::new();
    for &ai in boundary {
        at_crossing.entry(s.arcs[ai].a).or_default().push(ai);
        at_crossing.entry(s.arcs[ai].b).or_default().push(ai);
    }
    let mut seen: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
    let mut circles = 0;
    for &start in boundary {
        if seen.contains(&start) {
            continue;
        }
        circles += 1;
        let mut frontier = vec![start];
        seen.insert(start);
        while let Some(ai) = frontier.pop() {
            for end in [s.arcs[ai].a, s.arcs[ai].b] {
                for &nb in at_crossing.get(&end).into_iter().flatten() {
                    if seen.insert(nb) {
                        frontier.push(nb);
                    }
                }
            }
        }
    }
    circles
}

fn classify(chi: i64, orientable: bool, closed: bool, boundary_circles: usize) -> SurfaceKind {
    if closed {
        match (chi, orientable) {
            (2, true) => SurfaceKind::Sphere,
            (0, true) => SurfaceKind::Torus,
            (0, false) => SurfaceKind::Klein,
            _ => SurfaceKind::Other,
        }
    } else {
        match (chi, orientable, boundary_circles) {
            (1, true, 1) => SurfaceKind::Disk,
            (0, true, 2) => SurfaceKind::Annulus,
            _ => SurfaceKind::Other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, TetGluing, TetId};
    use crate::normal::TetCoords;

    #[test]
    fn lone_triangle_is_a_disk() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let mut c = NormalCoordinates::zero(&w);
        c.tets[0] = TetCoords { tri: [0, 0, 1, 0], quad: [0, 0, 0] };
        let s = realize_surface(&w, &c, 0.0).unwrap();
        assert_eq!(s.weight(), 3);
        assert_eq!(s.disks.len(), 1);
        assert_eq!(s.arcs.len(), 3);
        let rep = analyze_surface(&s);
        assert_eq!(rep.components.len(), 1);
        let comp = &rep.components[0];
        assert_eq!(comp.euler_characteristic, 1);
        assert_eq!(comp.boundary_circles, 1);
        assert_eq!(comp.kind, SurfaceKind::Disk);
    }

    #[test]
    fn parallel_copies_double_weight() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let mut c = NormalCoordinates::zero(&w);
        c.tets[0] = TetCoords { tri: [1, 0, 0, 0], quad: [0, 0, 0] };
        let s1 = realize_surface(&w, &c, 0.0).unwrap();
        let s2 = realize_surface(&w, &c.scaled(2), 0.0).unwrap();
        assert_eq!(s2.weight(), 2 * s1.weight());
        let rep = analyze_surface(&s2);
        assert_eq!(rep.components.len(), 2);
    }

    #[test]
    fn quad_plus_triangles_orders_without_crossings() {
        use crate::interplay::intersect::{arcs_cross_in_face, face_arc};

        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let metric = crate::hypmetric::JRMetricData::regular(&w).unwrap();
        let mut c = NormalCoordinates::zero(&w);
        c.tets[0] = TetCoords { tri: [1, 2, 0, 0], quad: [0, 2, 0] };
        let s = realize_surface(&w, &c, 0.0).unwrap();
        // Within each face the realized arcs of one embedded surface are
        // nested and never interleave.
        for i in 0..s.arcs.len() {
            for j in (i + 1)..s.arcs.len() {
                if s.arcs[i].face_class != s.arcs[j].face_class {
                    continue;
                }
                let fa = face_arc(&metric, &s, &s.arcs[i]);
                let fb = face_arc(&metric, &s, &s.arcs[j]);
                assert!(!arcs_cross_in_face(&fa, &fb), "arcs {i} and {j} cross");
            }
        }
    }
}
