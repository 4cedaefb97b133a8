//! Enumeration of matching-equation solutions.
//!
//! Bounded mode walks tets in a face-adjacency order, generating per-tet
//! candidates consistent with already-fixed neighbors and pruning on the
//! exact weight lower bound; it returns every embedded solution of weight at
//! most W. Vertex mode runs the double description method on the cone
//! `x >= 0, Ax = 0` and keeps the admissible extreme rays.

use std::collections::VecDeque;

use crate::complex::{face_corners, FaceGluing, TriangulationWindow, EDGE_VERTS};

use super::{quad_type_pairing, NormalCoordinates, NormalError, TetCoords};

/// Hard cap on explored search nodes in bounded mode.
pub const NODE_BUDGET: usize = 10_000_000;
/// Vertex mode refuses windows larger than this.
pub const VERTEX_MODE_MAX_TETS: usize = 40;
/// Ray-count cap for the double description method.
pub const RAY_BUDGET: usize = 200_000;

#[derive(Copy, Clone, Debug)]
pub enum EnumerateMode {
    /// All embedded solutions of weight <= W.
    WeightBound(u64),
    /// Admissible extreme rays of the solution cone.
    Vertex,
}

pub fn enumerate_surfaces(
    w: &TriangulationWindow,
    mode: EnumerateMode,
) -> Result<Vec<NormalCoordinates>, NormalError> {
    match mode {
        EnumerateMode::WeightBound(bound) => enumerate_bounded(w, bound),
        EnumerateMode::Vertex => enumerate_vertex(w),
    }
}

/// Tets ordered so each one (після the first of a component) is face-glued
/// to an earlier one.
fn bfs_order(w: &TriangulationWindow) -> Vec<usize> {
    let n = w.tet_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(ti) = queue.pop_front() {
            order.push(ti);
            for f in 0..4u8 {
                if let FaceGluing::Glued { tet, .. } = *w.gluing(ti, f) {
                    let tj = w.tet_index(tet).unwrap();
                    if !seen[tj] {
                        seen[tj] = true;
                        queue.push_back(tj);
                    }
                }
            }
        }
    }
    order
}

struct BoundedSearch<'a> {
    w: &'a TriangulationWindow,
    order: Vec<usize>,
    bound: u64,
    assigned: Vec<Option<TetCoords>>,
    /// Fixed crossing count per edge class, once some incident side is set.
    edge_w: Vec<Option<u32>>,
    solutions: Vec<NormalCoordinates>,
    nodes: usize,
}

pub fn enumerate_bounded(
    w: &TriangulationWindow,
    bound: u64,
) -> Result<Vec<NormalCoordinates>, NormalError> {
    let mut search = BoundedSearch {
        w,
        order: bfs_order(w),
        bound,
        assigned: vec![None; w.tet_count()],
        edge_w: vec![None; w.edge_class_count()],
        solutions: Vec::new(),
        nodes: 0,
    };
    search.run(0)?;
    search.solutions.sort();
    Ok(search.solutions)
}

impl<'a> BoundedSearch<'a> {
    fn run(&mut self, depth: usize) -> Result<(), NormalError> {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return Err(NormalError::WindowTooLarge(self.nodes));
        }
        if depth == self.order.len() {
            let coords = NormalCoordinates {
                tets: self.assigned.iter().map(|c| c.unwrap()).collect(),
            };
            debug_assert!(coords.validate(self.w).is_ok());
            self.solutions.push(coords);
            return Ok(());
        }
        let ti = self.order[depth];
        let candidates = self.candidates_for(ti);
        for cand in candidates {
            self.assigned[ti] = Some(cand);
            // Record/verify edge counts and the running weight bound.
            let mut touched: Vec<(usize, u32)> = Vec::new();
            let mut ok = true;
            for e in 0..6u8 {
                let ec = self.w.edge_class_of(ti, e) as usize;
                let cnt = count_edge(&cand, e);
                match self.edge_w[ec] {
                    Some(existing) => {
                        if existing != cnt {
                            ok = false;
                            break;
                        }
                    }
                    None => {
                        self.edge_w[ec] = Some(cnt);
                        touched.push((ec, cnt));
                    }
                }
            }
            if ok {
                let weight_lb: u64 = self
                    .edge_w
                    .iter()
                    .map(|x| x.unwrap_or(0) as u64)
                    .sum();
                if weight_lb <= self.bound {
                    self.run(depth + 1)?;
                }
            }
            for (ec, _) in touched {
                self.edge_w[ec] = None;
            }
            self.assigned[ti] = None;
        }
        Ok(())
    }

    /// Per-tet candidates consistent with assigned neighbors: matching
    /// equations on faces into assigned tets (including self-gluings) and
    /// fixed edge-class counts.
    fn candidates_for(&self, ti: usize) -> Vec<TetCoords> {
        // Arc constraints: (face, corner) -> required count.
        let mut arc_req: Vec<(u8, u8, u32)> = Vec::new();
        for f in 0..4u8 {
            if let FaceGluing::Glued { tet, face: fj, perm } = *self.w.gluing(ti, f) {
                let tj = self.w.tet_index(tet).unwrap();
                if tj == ti {
                    continue; // self-gluing: checked per candidate below
                }
                if let Some(other) = self.assigned[tj] {
                    for v in face_corners(f) {
                        let vp = perm.apply(v);
                        let req = other.tri[vp as usize]
                            + other.quad[quad_type_pairing(vp, fj) as usize];
                        arc_req.push((f, v, req));
                    }
                }
            }
        }
        let edge_req: Vec<(u8, Option<u32>)> = (0..6u8)
            .map(|e| (e, self.edge_w[self.w.edge_class_of(ti, e) as usize]))
            .collect();

        // Remaining weight budget caps every count.
        let used: u64 = self.edge_w.iter().map(|x| x.unwrap_or(0) as u64).sum();
        let slack = self.bound.saturating_sub(used);
        let cap_u64 = edge_req
            .iter()
            .filter_map(|&(_, r)| r)
            .map(|r| r as u64)
            .max()
            .unwrap_or(0)
            .max(slack);
        let cap = cap_u64.min(u32::MAX as u64) as u32;

        let mut out = Vec::new();
        // Quad choice: none, or (type, count >= 1).
        for qt in [None, Some(0u8), Some(1), Some(2)] {
            let max_m = if qt.is_some() { cap } else { 0 };
            let min_m = if qt.is_some() { 1 } else { 0 };
            for m in min_m..=max_m {
                let mut quad = [0u32; 3];
                if let Some(k) = qt {
                    quad[k as usize] = m;
                }
                self.push_tris(ti, &arc_req, &edge_req, quad, cap, &mut out);
            }
        }
        out
    }

    /// Enumerates triangle counts compatible with the constraints for a
    /// fixed quad vector.
    fn push_tris(
        &self,
        ti: usize,
        arc_req: &[(u8, u8, u32)],
        edge_req: &[(u8, Option<u32>)],
        quad: [u32; 3],
        cap: u32,
        out: &mut Vec<TetCoords>,
    ) {
        // Determined values from arc constraints: tri[v] = req - quad_part.
        let mut fixed: [Option<u32>; 4] = [None; 4];
        for &(f, v, req) in arc_req {
            let qpart = quad[quad_type_pairing(v, f) as usize];
            if qpart > req {
                return;
            }
            let t = req - qpart;
            match fixed[v as usize] {
                Some(x) if x != t => return,
                _ => fixed[v as usize] = Some(t),
            }
        }
        // Edge equalities tri[a] + tri[b] = w - quads(e) propagate more.
        let qsum: u32 = quad.iter().sum();
        let mut edge_pair: Vec<(u8, u8, u32)> = Vec::new();
        for &(e, req) in edge_req {
            if let Some(wv) = req {
                let (a, b) = EDGE_VERTS[e as usize];
                let quads_on_e = qsum - quad[quad_type_pairing(a, b) as usize];
                if quads_on_e > wv {
                    return;
                }
                edge_pair.push((a, b, wv - quads_on_e));
            }
        }
        // Propagate to a fixpoint.
        loop {
            let mut changed = false;
            for &(a, b, s) in &edge_pair {
                match (fixed[a as usize], fixed[b as usize]) {
                    (Some(x), Some(y)) => {
                        if x + y != s {
                            return;
                        }
                    }
                    (Some(x), None) => {
                        if x > s {
                            return;
                        }
                        fixed[b as usize] = Some(s - x);
                        changed = true;
                    }
                    (None, Some(y)) => {
                        if y > s {
                            return;
                        }
                        fixed[a as usize] = Some(s - y);
                        changed = true;
                    }
                    (None, None) => {}
                }
            }
            if !changed {
                break;
            }
        }
        // Scan free triangle slots.
        let free: Vec<usize> = (0..4).filter(|&v| fixed[v].is_none()).collect();
        let mut tri = [0u32; 4];
        for v in 0..4 {
            if let Some(x) = fixed[v] {
                tri[v] = x;
            }
        }
        self.scan_free(ti, &free, 0, &mut tri, quad, cap, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn scan_free(
        &self,
        ti: usize,
        free: &[usize],
        idx: usize,
        tri: &mut [u32; 4],
        quad: [u32; 3],
        cap: u32,
        out: &mut Vec<TetCoords>,
    ) {
        if idx == free.len() {
            let cand = TetCoords { tri: *tri, quad };
            if self.check_candidate(ti, &cand) {
                out.push(cand);
            }
            return;
        }
        for x in 0..=cap {
            tri[free[idx]] = x;
            self.scan_free(ti, free, idx + 1, tri, quad, cap, out);
        }
        tri[free[idx]] = 0;
    }

    /// Self-gluing matching and full edge/arc re-check for one candidate.
    fn check_candidate(&self, ti: usize, cand: &TetCoords) -> bool {
        if !cand.admissible() {
            return false;
        }
        // Weight headroom: edges whose class is not yet counted add their
        // full crossing count to the lower bound.
        let used: u64 = self.edge_w.iter().map(|x| x.unwrap_or(0) as u64).sum();
        let mut fresh: Vec<(u32, u32)> = Vec::new();
        for e in 0..6u8 {
            let ec = self.w.edge_class_of(ti, e);
            if self.edge_w[ec as usize].is_none() && !fresh.iter().any(|&(c, _)| c == ec) {
                fresh.push((ec, count_edge(cand, e)));
            }
        }
        let contribution: u64 = fresh.iter().map(|&(_, c)| c as u64).sum();
        if used + contribution > self.bound {
            return false;
        }
        let arcs = |f: u8, v: u8, c: &TetCoords| -> u32 {
            c.tri[v as usize] + c.quad[quad_type_pairing(v, f) as usize]
        };
        for f in 0..4u8 {
            if let FaceGluing::Glued { tet, face: fj, perm } = *self.w.gluing(ti, f) {
                let tj = self.w.tet_index(tet).unwrap();
                let other: Option<TetCoords> = if tj == ti {
                    Some(*cand)
                } else {
                    self.assigned[tj]
                };
                if let Some(o) = other {
                    for v in face_corners(f) {
                        if arcs(f, v, cand) != arcs(fj, perm.apply(v), &o) {
                            return false;
                        }
                    }
                }
            }
        }
        // Same-tet repeated edge classes must agree.
        for e1 in 0..6u8 {
            for e2 in (e1 + 1)..6 {
                if self.w.edge_class_of(ti, e1) == self.w.edge_class_of(ti, e2)
                    && count_edge(cand, e1) != count_edge(cand, e2)
                {
                    return false;
                }
            }
        }
        true
    }
}

fn count_edge(c: &TetCoords, e: u8) -> u32 {
    let (a, b) = EDGE_VERTS[e as usize];
    let qsum: u32 = c.quad.iter().sum();
    c.tri[a as usize] + c.tri[b as usize] + qsum - c.quad[quad_type_pairing(a, b) as usize]
}

// ---------------------------------------------------------------------------
// Double description on the solution cone.
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct Ray {
    v: Vec<i128>,
    /// Bitset over coordinates: which x_i >= 0 constraints are tight.
    zero: Vec<u64>,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ray {
    fn new(v: Vec<i128>) -> Ray {
        let mut r = Ray { v, zero: Vec::new() };
        r.reduce();
        r.recompute_zero();
        r
    }

    fn reduce(&mut self) {
        let mut g = 0i128;
        for &x in &self.v {
            g = gcd(g, x);
        }
        if g > 1 {
            for x in &mut self.v {
                *x /= g;
            }
        }
    }

    fn recompute_zero(&mut self) {
        let words = self.v.len().div_ceil(64);
        self.zero = vec![0u64; words];
        for (i, &x) in self.v.iter().enumerate() {
            if x == 0 {
                self.zero[i / 64] |= 1 << (i % 64);
            }
        }
    }
}

fn zero_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn enumerate_vertex(w: &TriangulationWindow) -> Result<Vec<NormalCoordinates>, NormalError> {
    let n = w.tet_count();
    if n > VERTEX_MODE_MAX_TETS {
        return Err(NormalError::WindowTooLarge(n));
    }
    let dim = 7 * n;
    // Matching equations as integer rows.
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for fc in 0..w.face_class_count() as u32 {
        let sides = w.face_sides(fc);
        if sides.len() != 2 {
            continue;
        }
        let (ti, fi) = sides[0];
        if let FaceGluing::Glued { tet, face: fj, perm } = *w.gluing(ti, fi) {
            let tj = w.tet_index(tet).unwrap();
            for v in face_corners(fi) {
                let mut row = vec![0i128; dim];
                row[7 * ti + v as usize] += 1;
                row[7 * ti + 4 + quad_type_pairing(v, fi) as usize] += 1;
                let vp = perm.apply(v);
                row[7 * tj + vp as usize] -= 1;
                row[7 * tj + 4 + quad_type_pairing(vp, fj) as usize] -= 1;
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
            }
        }
    }

    let mut rays: Vec<Ray> = (0..dim)
        .map(|i| {
            let mut v = vec![0i128; dim];
            v[i] = 1;
            Ray::new(v)
        })
        .collect();

    for row in &rows {
        let dot = |r: &Ray| -> i128 { r.v.iter().zip(row).map(|(a, b)| a * b).sum() };
        let mut zeros: Vec<Ray> = Vec::new();
        let mut pos: Vec<(Ray, i128)> = Vec::new();
        let mut neg: Vec<(Ray, i128)> = Vec::new();
        for r in rays.drain(..) {
            let d = dot(&r);
            if d == 0 {
                zeros.push(r);
            } else if d > 0 {
                pos.push((r, d));
            } else {
                neg.push((r, d));
            }
        }
        let mut combined: Vec<Ray> = Vec::new();
        for (pi, (p, dp)) in pos.iter().enumerate() {
            for (qi, (q, dq)) in neg.iter().enumerate() {
                // Adjacency among current rays: no third ray's zero set
                // contains the meet of the pair's zero sets.
                let mut meet = vec![0u64; p.zero.len()];
                for i in 0..meet.len() {
                    meet[i] = p.zero[i] & q.zero[i];
                }
                let blocked = zeros
                    .iter()
                    .map(|r| (r, usize::MAX, usize::MAX))
                    .chain(pos.iter().enumerate().map(|(i, (r, _))| (r, i, usize::MAX)))
                    .chain(neg.iter().enumerate().map(|(i, (r, _))| (r, usize::MAX, i)))
                    .any(|(r, ip, iq)| ip != pi && iq != qi && zero_subset(&meet, &r.zero));
                if blocked {
                    continue;
                }
                let mut v = vec![0i128; dim];
                for i in 0..dim {
                    let a = dp
                        .checked_mul(q.v[i])
                        .ok_or(NormalError::WindowTooLarge(usize::MAX))?;
                    let b = dq
                        .checked_mul(p.v[i])
                        .ok_or(NormalError::WindowTooLarge(usize::MAX))?;
                    v[i] = a.checked_sub(b).ok_or(NormalError::WindowTooLarge(usize::MAX))?;
                }
                combined.push(Ray::new(v));
                if zeros.len() + combined.len() > RAY_BUDGET {
                    return Err(NormalError::WindowTooLarge(zeros.len() + combined.len()));
                }
            }
        }
        zeros.extend(combined);
        rays = zeros;
    }

    let mut out = Vec::new();
    for r in rays {
        let coords = NormalCoordinates {
            tets: (0..n)
                .map(|ti| TetCoords {
                    tri: [
                        r.v[7 * ti] as u32,
                        r.v[7 * ti + 1] as u32,
                        r.v[7 * ti + 2] as u32,
                        r.v[7 * ti + 3] as u32,
                    ],
                    quad: [
                        r.v[7 * ti + 4] as u32,
                        r.v[7 * ti + 5] as u32,
                        r.v[7 * ti + 6] as u32,
                    ],
                })
                .collect(),
        };
        if coords.tets.iter().all(|c| c.admissible()) && !coords.is_zero() {
            out.push(coords);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, TetGluing, TetId};

    #[test]
    fn lone_tet_weight_three() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let sols = enumerate_bounded(&w, 3).unwrap();
        // Empty plus the four vertex-linking triangles; quads weigh 4.
        assert_eq!(sols.len(), 5);
        assert!(sols.iter().any(|s| s.is_zero()));
        assert_eq!(sols.iter().filter(|s| s.weight(&w) == 3).count(), 4);
    }

    #[test]
    fn lone_tet_weight_four_includes_quads() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let sols = enumerate_bounded(&w, 4).unwrap();
        // Empty, 4 triangles, 3 quads.
        assert_eq!(sols.len(), 8);
        assert_eq!(sols.iter().filter(|s| s.weight(&w) == 4).count(), 3);
    }

    #[test]
    fn weight_zero_only_empty() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let sols = enumerate_bounded(&w, 0).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(sols[0].is_zero());
    }

    #[test]
    fn vertex_mode_lone_tet() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let rays = enumerate_vertex(&w).unwrap();
        // No equations: the extreme rays are the seven unit disks.
        assert_eq!(rays.len(), 7);
    }
}
