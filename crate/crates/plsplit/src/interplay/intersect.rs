//! Combinatorial intersection of two realized normal surfaces.
//!
//! Crossing points are computed face by face: two geodesic arcs in an ideal
//! triangle cross exactly when their endpoints interleave around the face
//! boundary. Inside each tetrahedron the crossing points on a disk pair's
//! boundaries are matched into intersection arcs, and arcs chain across
//! faces into circles. Circle homology classes on each surface come from a
//! cellular approximation pushed to disk boundaries.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::TriangulationWindow;
use crate::homology::{CycleClasses, LinAlgError, Mat};
use crate::hypmetric::JRMetricData;
use crate::normal::realize::{RealizedSurface, SurfArc};

/// A point of a face boundary in cyclic order: corner 0, then the 0-1 side
/// ascending, corner 1, the 1-2 side ascending, corner 2, the 0-2 side
/// descending, back to corner 0. `seg` is 1, 3, or 5 for the side strictly
/// between corners; `key` orders points within the segment.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BPoint {
    pub seg: u8,
    pub key: f64,
}

impl BPoint {
    /// Side indices are by opposite corner: side 2 joins corners 0,1; side 0
    /// joins 1,2; side 1 joins 0,2 (order reversed along the cycle).
    pub fn on_side(side: u8, pos: f64) -> BPoint {
        match side {
            2 => BPoint { seg: 1, key: pos },
            0 => BPoint { seg: 3, key: pos },
            1 => BPoint { seg: 5, key: -pos },
            _ => panic!("bad side {side}"),
        }
    }
}

impl Eq for BPoint {}

impl Ord for BPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.seg
            .cmp(&other.seg)
            .then_with(|| self.key.total_cmp(&other.key))
    }
}

impl PartialOrd for BPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Whether `x` lies strictly inside the cyclic open interval (a, b).
fn cyclic_between(a: BPoint, x: BPoint, b: BPoint) -> bool {
    if a < b {
        a < x && x < b
    } else {
        x > a || x < b
    }
}

#[derive(Copy, Clone, Debug)]
pub struct FaceArc {
    pub face_class: u32,
    pub a: BPoint,
    pub b: BPoint,
}

/// Realized positions of a surface arc on its face boundary.
pub fn face_arc(metric: &JRMetricData, s: &RealizedSurface, arc: &SurfArc) -> FaceArc {
    let (sa, sb) = crate::normal::realize::arc_sides(arc.rep_corner);
    let ea = metric.side(arc.face_class, sa).edge_class;
    let (ca, cb) = (&s.crossings[arc.a], &s.crossings[arc.b]);
    let (pa, pb) = if ca.edge_class == ea {
        (
            BPoint::on_side(sa, metric.side_position(arc.face_class, sa, ca.param)),
            BPoint::on_side(sb, metric.side_position(arc.face_class, sb, cb.param)),
        )
    } else {
        (
            BPoint::on_side(sb, metric.side_position(arc.face_class, sb, ca.param)),
            BPoint::on_side(sa, metric.side_position(arc.face_class, sa, cb.param)),
        )
    };
    FaceArc { face_class: arc.face_class, a: pa, b: pb }
}

/// Two geodesic arcs cross exactly when their endpoints interleave.
pub fn arcs_cross_in_face(x: &FaceArc, y: &FaceArc) -> bool {
    debug_assert_eq!(x.face_class, y.face_class);
    let first_in = cyclic_between(x.a, y.a, x.b);
    let second_in = cyclic_between(x.a, y.b, x.b);
    first_in != second_in
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossPoint {
    pub face_class: u32,
    pub arc_a: usize,
    pub arc_b: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionArc {
    pub tet: usize,
    pub disk_a: usize,
    pub disk_b: usize,
    pub ends: (usize, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct Circle {
    /// Cross point ids in traversal order.
    pub points: Vec<usize>,
    /// Arc ids in traversal order (arcs[i] joins points[i] to points[i+1]).
    pub arcs: Vec<usize>,
    /// Itinerary: (tet, disk of A, disk of B) per traversed arc.
    pub itinerary: Vec<(usize, usize, usize)>,
    pub class_on_a: Vec<i64>,
    pub class_on_b: Vec<i64>,
    pub essential_a: bool,
    pub essential_b: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionPattern {
    pub points: Vec<CrossPoint>,
    pub arcs: Vec<IntersectionArc>,
    pub circles: Vec<Circle>,
    /// Intersection components cut off by the window boundary.
    pub open_chains: usize,
}

#[derive(Clone, Debug, Serialize)]
pub enum IntersectResult {
    /// Identical coordinates: the surfaces are normally homotopic.
    Equal,
    Pattern(IntersectionPattern),
}

#[derive(Debug, Error)]
pub enum IntersectError {
    #[error("surfaces share a crossing parameter after perturbation; not transverse")]
    NotTransverse,
    #[error("disk pair has an odd number of boundary crossings")]
    OddCrossings,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Homology bookkeeping for one surface: boundary maps of its cell complex
/// and the class computer.
pub struct SurfaceHomology {
    pub classes: CycleClasses,
}

impl SurfaceHomology {
    pub fn new(s: &RealizedSurface) -> Result<SurfaceHomology, LinAlgError> {
        let n_v = s.crossings.len();
        let n_e = s.arcs.len();
        let n_f = s.disks.len();
        let mut d1: Mat = vec![vec![0; n_e]; n_v];
        for (j, arc) in s.arcs.iter().enumerate() {
            // Oriented from a to b; a loop arc contributes zero.
            if arc.a != arc.b {
                d1[arc.a][j] -= 1;
                d1[arc.b][j] += 1;
            }
        }
        let mut d2: Mat = vec![vec![0; n_f]; n_e];
        for (j, disk) in s.disks.iter().enumerate() {
            for &(ai, fwd) in &disk.boundary {
                d2[ai][j] += if fwd { 1 } else { -1 };
            }
        }
        Ok(SurfaceHomology { classes: CycleClasses::new(&d1, &d2)? })
    }

    pub fn betti(&self) -> usize {
        self.classes.betti
    }
}

/// Cellular 1-cycle for a closed transversal of the surface: the traversal
/// lists, per step, the disk entered and the surface arcs carrying the entry
/// and exit points; each chord is pushed to the disk boundary.
pub fn transversal_cycle(
    s: &RealizedSurface,
    steps: &[(usize, usize, usize)],
) -> Vec<i128> {
    let mut z = vec![0i128; s.arcs.len()];
    for &(disk, entry_arc, exit_arc) in steps {
        let b = &s.disks[disk].boundary;
        let len = b.len();
        let pos_of = |arc: usize| b.iter().position(|&(a, _)| a == arc).unwrap();
        let anchor_idx = |arc: usize| -> usize {
            let p = pos_of(arc);
            if b[p].1 {
                p
            } else {
                (p + 1) % len
            }
        };
        let from = anchor_idx(entry_arc);
        let to = anchor_idx(exit_arc);
        let mut i = from;
        while i != to {
            let (ai, fwd) = b[i];
            z[ai] += if fwd { 1 } else { -1 };
            i = (i + 1) % len;
        }
    }
    z
}

/// Computes the intersection pattern of two realized surfaces on a common
/// window. The caller realizes the two surfaces with distinct deterministic
/// parameter shifts.
pub fn intersect_surfaces(
    w: &TriangulationWindow,
    metric: &JRMetricData,
    a: &RealizedSurface,
    b: &RealizedSurface,
) -> Result<IntersectResult, IntersectError> {
    if a.coords == b.coords {
        return Ok(IntersectResult::Equal);
    }

    let fa: Vec<FaceArc> = a.arcs.iter().map(|arc| face_arc(metric, a, arc)).collect();
    let fb: Vec<FaceArc> = b.arcs.iter().map(|arc| face_arc(metric, b, arc)).collect();

    // Transversality: no shared boundary points.
    for x in &fa {
        for y in &fb {
            if x.face_class == y.face_class
                && (x.a == y.a || x.a == y.b || x.b == y.a || x.b == y.b)
            {
                return Err(IntersectError::NotTransverse);
            }
        }
    }

    // Cross points, grouped by face class.
    let mut by_face_a: HashMap<u32, Vec<usize>> = HashMap::new();
    for (i, arc) in a.arcs.iter().enumerate() {
        by_face_a.entry(arc.face_class).or_default().push(i);
    }
    let mut points: Vec<CrossPoint> = Vec::new();
    for (j, arc_b) in b.arcs.iter().enumerate() {
        if let Some(list) = by_face_a.get(&arc_b.face_class) {
            for &i in list {
                if arcs_cross_in_face(&fa[i], &fb[j]) {
                    points.push(CrossPoint {
                        face_class: arc_b.face_class,
                        arc_a: i,
                        arc_b: j,
                    });
                }
            }
        }
    }
    points.sort_by_key(|p| (p.face_class, p.arc_a, p.arc_b));

    // Group cross points by localized disk pair.
    let mut by_pair: HashMap<(usize, usize, usize), Vec<usize>> = HashMap::new();
    for (pid, p) in points.iter().enumerate() {
        // Each tet side of the face contributes one disk from each surface.
        for &(da, face_a) in &a.arcs[p.arc_a].disks {
            let ta = a.disks[da].tet;
            for &(db, face_b) in &b.arcs[p.arc_b].disks {
                let tb = b.disks[db].tet;
                if ta == tb && face_a == face_b {
                    by_pair.entry((ta, da, db)).or_default().push(pid);
                }
            }
        }
    }

    // Match endpoints into intersection arcs inside each disk pair.
    let mut arcs: Vec<IntersectionArc> = Vec::new();
    let mut pairs: Vec<(&(usize, usize, usize), &Vec<usize>)> = by_pair.iter().collect();
    pairs.sort_by_key(|(k, _)| **k);
    for (&(tet, da, db), pids) in pairs {
        if pids.len() % 2 != 0 {
            return Err(IntersectError::OddCrossings);
        }
        if pids.is_empty() {
            continue;
        }
        let order_a = order_along_disk(a, &fa, &fb, da, pids, &points, true);
        if pids.len() == 2 {
            arcs.push(IntersectionArc { tet, disk_a: da, disk_b: db, ends: (pids[0], pids[1]) });
            continue;
        }
        let order_b = order_along_disk(b, &fb, &fa, db, pids, &points, false);
        // Candidate matchings along the A order: consecutive pairs with the
        // two possible phases; keep the one non-crossing in the B order.
        let m1: Vec<(usize, usize)> = (0..order_a.len() / 2)
            .map(|i| (order_a[2 * i], order_a[2 * i + 1]))
            .collect();
        let m2: Vec<(usize, usize)> = (0..order_a.len() / 2)
            .map(|i| (order_a[(2 * i + 1) % order_a.len()], order_a[(2 * i + 2) % order_a.len()]))
            .collect();
        let chosen = if matching_noncrossing(&m2, &order_b) && !matching_noncrossing(&m1, &order_b)
        {
            m2
        } else {
            m1
        };
        for (x, y) in chosen {
            arcs.push(IntersectionArc { tet, disk_a: da, disk_b: db, ends: (x, y) });
        }
    }

    // Chain arcs into circles through shared cross points.
    let mut at_point: HashMap<usize, Vec<usize>> = HashMap::new();
    for (ai, arc) in arcs.iter().enumerate() {
        at_point.entry(arc.ends.0).or_default().push(ai);
        at_point.entry(arc.ends.1).or_default().push(ai);
    }
    let mut used = vec![false; arcs.len()];
    let mut circles = Vec::new();
    let mut open_chains = 0usize;
    for start in 0..arcs.len() {
        if used[start] {
            continue;
        }
        // Walk forward until closing or hitting a dead end; a dead end means
        // the intersection runs off the window boundary.
        let mut chain_arcs = vec![start];
        used[start] = true;
        let mut chain_points = vec![arcs[start].ends.0, arcs[start].ends.1];
        let mut closed = false;
        loop {
            let tail = *chain_points.last().unwrap();
            if tail == chain_points[0] {
                chain_points.pop();
                closed = true;
                break;
            }
            let next = at_point[&tail]
                .iter()
                .copied()
                .find(|&ai| !used[ai]);
            match next {
                Some(ai) => {
                    used[ai] = true;
                    chain_arcs.push(ai);
                    let (x, y) = arcs[ai].ends;
                    chain_points.push(if x == tail { y } else { x });
                }
                None => break,
            }
        }
        if !closed {
            // Extend backward for reporting completeness, then count open.
            open_chains += 1;
            continue;
        }
        circles.push((chain_points, chain_arcs));
    }

    // Homology classes of each circle on both surfaces.
    let ha = SurfaceHomology::new(a)?;
    let hb = SurfaceHomology::new(b)?;
    let mut out_circles = Vec::new();
    for (pts, ars) in circles {
        let itinerary: Vec<(usize, usize, usize)> = ars
            .iter()
            .map(|&ai| (arcs[ai].tet, arcs[ai].disk_a, arcs[ai].disk_b))
            .collect();
        let steps_a: Vec<(usize, usize, usize)> = ars
            .iter()
            .enumerate()
            .map(|(i, &ai)| {
                let entry = pts[i];
                let exit = pts[(i + 1) % pts.len()];
                (arcs[ai].disk_a, points[entry].arc_a, points[exit].arc_a)
            })
            .collect();
        let steps_b: Vec<(usize, usize, usize)> = ars
            .iter()
            .enumerate()
            .map(|(i, &ai)| {
                let entry = pts[i];
                let exit = pts[(i + 1) % pts.len()];
                (arcs[ai].disk_b, points[entry].arc_b, points[exit].arc_b)
            })
            .collect();
        let za = transversal_cycle(a, &steps_a);
        let zb = transversal_cycle(b, &steps_b);
        let class_on_a: Vec<i64> = ha
            .classes
            .class_of(&za)?
            .into_iter()
            .map(|x| x as i64)
            .collect();
        let class_on_b: Vec<i64> = hb
            .classes
            .class_of(&zb)?
            .into_iter()
            .map(|x| x as i64)
            .collect();
        let essential_a = class_on_a.iter().any(|&x| x != 0);
        let essential_b = class_on_b.iter().any(|&x| x != 0);
        out_circles.push(Circle {
            points: pts,
            arcs: ars,
            itinerary,
            class_on_a,
            class_on_b,
            essential_a,
            essential_b,
        });
    }
    let _ = w;

    Ok(IntersectResult::Pattern(IntersectionPattern {
        points,
        arcs,
        circles: out_circles,
        open_chains,
    }))
}

/// Cross point ids sorted along the boundary of one disk of the `primary`
/// surface. `primary_is_a` selects which arc of each cross point belongs to
/// the disk's surface.
fn order_along_disk(
    s: &RealizedSurface,
    fs: &[FaceArc],
    other_fs: &[FaceArc],
    disk: usize,
    pids: &[usize],
    points: &[CrossPoint],
    primary_is_a: bool,
) -> Vec<usize> {
    let b = &s.disks[disk].boundary;
    let mut keyed: Vec<(usize, usize, BPoint)> = Vec::new();
    for &pid in pids {
        let (own_arc, other_arc) = if primary_is_a {
            (points[pid].arc_a, points[pid].arc_b)
        } else {
            (points[pid].arc_b, points[pid].arc_a)
        };
        let pos = b
            .iter()
            .position(|&(ai, _)| ai == own_arc)
            .expect("cross point arc on disk boundary");
        let fwd = b[pos].1;
        let fa = &fs[own_arc];
        let start = if fwd { fa.a } else { fa.b };
        let fo = &other_fs[other_arc];
        // Order along the arc from its traversal start: nested intervals of
        // the crossing arcs, outermost first; the interval start in the
        // cut-at-start cyclic order is the key.
        let (s1, s2) = (fo.a, fo.b);
        let key = min_rel(start, s1, s2);
        keyed.push((pid, pos, key));
    }
    keyed.sort_by(|x, y| {
        x.1.cmp(&y.1).then_with(|| rel_cmp_at(
            boundary_start(s, fs, disk, x.1),
            x.2,
            y.2,
        ))
    });
    keyed.into_iter().map(|(pid, _, _)| pid).collect()
}

fn boundary_start(s: &RealizedSurface, fs: &[FaceArc], disk: usize, pos: usize) -> BPoint {
    let (ai, fwd) = s.disks[disk].boundary[pos];
    if fwd {
        fs[ai].a
    } else {
        fs[ai].b
    }
}

/// The endpoint of {p, q} that comes first in cyclic order from `start`.
fn min_rel(start: BPoint, p: BPoint, q: BPoint) -> BPoint {
    match rel_cmp_at(start, p, q) {
        std::cmp::Ordering::Greater => q,
        _ => p,
    }
}

/// Compares two points by cyclic distance from `start`.
fn rel_cmp_at(start: BPoint, p: BPoint, q: BPoint) -> std::cmp::Ordering {
    let rp = (p <= start, p);
    let rq = (q <= start, q);
    rp.cmp(&rq)
}

/// Whether the matching's chords are pairwise non-crossing in the given
/// cyclic order.
fn matching_noncrossing(matching: &[(usize, usize)], order: &[usize]) -> bool {
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = order.len();
    for (i, &(a1, b1)) in matching.iter().enumerate() {
        for &(a2, b2) in &matching[(i + 1)..] {
            let (p1, q1) = (pos[&a1], pos[&b1]);
            let (p2, q2) = (pos[&a2], pos[&b2]);
            let between = |x: usize| -> bool {
                if p1 < q1 {
                    p1 < x && x < q1
                } else {
                    x > p1 || x < q1
                }
            };
            if between(p2) != between(q2) {
                return false;
            }
            let _ = n;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(seg: u8, key: f64) -> BPoint {
        BPoint { seg, key }
    }

    #[test]
    fn interleave_detects_crossings() {
        let f = |a: BPoint, b: BPoint| FaceArc { face_class: 0, a, b };
        // Arc from side 2 to side 0 vs arc from side 0 to side 1,
        // interleaved endpoints.
        let x = f(bp(1, 0.0), bp(3, 0.5));
        let y = f(bp(3, 0.0), bp(5, 0.0));
        assert!(arcs_cross_in_face(&x, &y));
        let y2 = f(bp(3, 0.9), bp(5, 0.0));
        assert!(!arcs_cross_in_face(&x, &y2));
    }

    #[test]
    fn cyclic_interval_wraps() {
        assert!(cyclic_between(bp(5, 0.0), bp(1, 0.0), bp(3, 0.0)));
        assert!(!cyclic_between(bp(3, 0.0), bp(1, 0.0), bp(5, 0.0)));
    }
}
