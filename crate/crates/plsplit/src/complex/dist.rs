//! Size and quasimetric machinery: minimal simplex covers and the
//! path-size-minus-one distance, computed on the incidence structure of a
//! window.
//!
//! Point loci are cell-relative: a tetrahedron id plus barycentric-style
//! rational weights whose support picks out the carrying cell. Two closed
//! 3-simplices intersect exactly when they share a vertex class, so minimal
//! path covers correspond to chains in the tet intersection graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{edge_index, TetId, TriangulationWindow};

/// A cell of the window, identified by its class id.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellRef {
    Vertex(u32),
    Edge(u32),
    Face(u32),
    Tet(TetId),
}

/// A point locus: a tetrahedron and nonnegative rational barycentric weights
/// (numerators over their sum). Only the support matters for covering and
/// distance queries.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Locus {
    pub tet: TetId,
    pub weights: [i64; 4],
}

#[derive(Debug, Error)]
pub enum DistError {
    #[error("locus references tet {0} outside the window")]
    NotCovered(TetId),
    #[error("degenerate barycentric weights")]
    BadWeights,
    #[error("no connecting path within the window; expand and retry")]
    Disconnected,
}

impl Locus {
    pub fn interior(tet: TetId) -> Locus {
        Locus { tet, weights: [1, 1, 1, 1] }
    }

    pub fn vertex(tet: TetId, v: u8) -> Locus {
        let mut weights = [0i64; 4];
        weights[v as usize] = 1;
        Locus { tet, weights }
    }

    pub fn on_edge(tet: TetId, a: u8, b: u8) -> Locus {
        let mut weights = [0i64; 4];
        weights[a as usize] = 1;
        weights[b as usize] = 1;
        Locus { tet, weights }
    }

    pub fn on_face(tet: TetId, f: u8) -> Locus {
        let mut weights = [1i64; 4];
        weights[f as usize] = 0;
        Locus { tet, weights }
    }

    /// The carrying cell: the open cell of the window this point lies in.
    pub fn carrier(&self, w: &TriangulationWindow) -> Result<CellRef, DistError> {
        let ti = w.tet_index(self.tet).ok_or(DistError::NotCovered(self.tet))?;
        if self.weights.iter().any(|&x| x < 0) || self.weights.iter().all(|&x| x == 0) {
            return Err(DistError::BadWeights);
        }
        let support: Vec<u8> = (0..4u8)
            .filter(|&v| self.weights[v as usize] > 0)
            .collect();
        Ok(match support.as_slice() {
            [v] => CellRef::Vertex(w.vertex_class_of(ti, *v)),
            [a, b] => CellRef::Edge(w.edge_class_of(ti, edge_index(*a, *b))),
            [a, b, c] => {
                // The face missing the remaining vertex.
                let f = (0..4u8).find(|v| ![*a, *b, *c].contains(v)).unwrap();
                CellRef::Face(w.face_class_of(ti, f))
            }
            _ => CellRef::Tet(self.tet),
        })
    }
}

/// Distinct tetrahedra whose closure contains the given cell.
pub fn tets_containing(w: &TriangulationWindow, cell: CellRef) -> Vec<usize> {
    let mut out: Vec<usize> = match cell {
        CellRef::Vertex(c) => w.vertex_corners(c).iter().map(|&(ti, _)| ti).collect(),
        CellRef::Edge(c) => w.edge_sides(c).iter().map(|&(ti, _)| ti).collect(),
        CellRef::Face(c) => w.face_sides(c).iter().map(|&(ti, _)| ti).collect(),
        CellRef::Tet(id) => w.tet_index(id).into_iter().collect(),
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// True if the closed simplex `ti` covers the cell.
pub fn tet_covers(w: &TriangulationWindow, ti: usize, cell: CellRef) -> bool {
    tets_containing(w, cell).contains(&ti)
}

/// Adjacency of closed 3-simplices: sharing at least one vertex class.
pub fn tet_intersection_graph(w: &TriangulationWindow) -> Vec<Vec<usize>> {
    let n = w.tet_count();
    let mut adj = vec![Vec::new(); n];
    for c in 0..w.vertex_class_count() as u32 {
        let tets = w.tets_at_vertex(c);
        for &a in &tets {
            for &b in &tets {
                if a != b {
                    adj[a].push(b);
                }
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// Minimal number of closed 3-simplices covering the union of the given
/// cells. Exact set cover by branch and bound.
pub fn subset_size(w: &TriangulationWindow, cells: &[CellRef]) -> Result<usize, DistError> {
    let mut elements: Vec<Vec<usize>> = Vec::new();
    for &cell in cells {
        if let CellRef::Tet(id) = cell {
            if w.tet_index(id).is_none() {
                return Err(DistError::NotCovered(id));
            }
        }
        let covers = tets_containing(w, cell);
        if covers.is_empty() {
            return Err(DistError::Disconnected);
        }
        elements.push(covers);
    }
    elements.sort();
    elements.dedup();
    if elements.is_empty() {
        return Ok(0);
    }

    // Greedy upper bound.
    let greedy = {
        let mut uncovered: Vec<usize> = (0..elements.len()).collect();
        let mut count = 0usize;
        while !uncovered.is_empty() {
            let mut best_tet = elements[uncovered[0]][0];
            let mut best_gain = 0usize;
            let mut candidates: Vec<usize> = uncovered
                .iter()
                .flat_map(|&e| elements[e].iter().copied())
                .collect();
            candidates.sort_unstable();
            candidates.dedup();
            for t in candidates {
                let gain = uncovered
                    .iter()
                    .filter(|&&e| elements[e].contains(&t))
                    .count();
                if gain > best_gain {
                    best_gain = gain;
                    best_tet = t;
                }
            }
            uncovered.retain(|&e| !elements[e].contains(&best_tet));
            count += 1;
            let _ = best_tet;
        }
        count
    };

    let mut best = greedy;
    let all: Vec<usize> = (0..elements.len()).collect();
    branch(&elements, &all, 0, &mut best);
    Ok(best)
}

fn branch(elements: &[Vec<usize>], uncovered: &[usize], used: usize, best: &mut usize) {
    if uncovered.is_empty() {
        if used < *best {
            *best = used;
        }
        return;
    }
    if used + 1 >= *best {
        return;
    }
    // Branch on the element with the fewest covering tets.
    let &pivot = uncovered
        .iter()
        .min_by_key(|&&e| elements[e].len())
        .unwrap();
    for &t in &elements[pivot] {
        let rest: Vec<usize> = uncovered
            .iter()
            .copied()
            .filter(|&e| !elements[e].contains(&t))
            .collect();
        branch(elements, &rest, used + 1, best);
    }
}

/// Quasimetric distance: minimal size of a connecting path, minus one.
///
/// Computed as the shortest chain in the tet intersection graph between any
/// simplex containing `x` and any containing `y`; symmetric by construction,
/// and zero exactly when the loci share a closed 3-simplex.
pub fn quasi_distance(
    w: &TriangulationWindow,
    x: &Locus,
    y: &Locus,
) -> Result<usize, DistError> {
    let cx = x.carrier(w)?;
    let cy = y.carrier(w)?;
    quasi_distance_cells(w, cx, cy)
}

pub fn quasi_distance_cells(
    w: &TriangulationWindow,
    cx: CellRef,
    cy: CellRef,
) -> Result<usize, DistError> {
    let adj = tet_intersection_graph(w);
    let sources = tets_containing(w, cx);
    let targets = tets_containing(w, cy);
    if sources.is_empty() || targets.is_empty() {
        return Err(DistError::Disconnected);
    }
    quasi_distance_sets(&adj, &sources, &targets).ok_or(DistError::Disconnected)
}

/// BFS over a prebuilt intersection graph; `None` when disconnected.
pub fn quasi_distance_sets(
    adj: &[Vec<usize>],
    sources: &[usize],
    targets: &[usize],
) -> Option<usize> {
    let mut is_target = vec![false; adj.len()];
    for &t in targets {
        is_target[t] = true;
    }
    let mut dist = vec![usize::MAX; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    for &s in sources {
        if dist[s] == usize::MAX {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        if is_target[v] {
            return Some(dist[v]);
        }
        for &u in &adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    None
}

/// Diameter of a set of cells under the quasimetric: the maximum pairwise
/// distance between interior points of the listed carriers.
pub fn diameter(w: &TriangulationWindow, cells: &[CellRef]) -> Result<usize, DistError> {
    let adj = tet_intersection_graph(w);
    let sets: Vec<Vec<usize>> = cells.iter().map(|&c| tets_containing(w, c)).collect();
    let mut max = 0usize;
    for i in 0..sets.len() {
        for j in (i + 1)..sets.len() {
            let d = quasi_distance_sets(&adj, &sets[i], &sets[j]).ok_or(DistError::Disconnected)?;
            if d > max {
                max = d;
            }
        }
    }
    Ok(max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, TetGluing};

    fn one_tet() -> TriangulationWindow {
        build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap()
    }

    #[test]
    fn interior_point_size_one() {
        let w = one_tet();
        let x = Locus::interior(TetId(0));
        let carrier = x.carrier(&w).unwrap();
        assert_eq!(subset_size(&w, &[carrier]).unwrap(), 1);
    }

    #[test]
    fn distance_zero_same_tet() {
        let w = one_tet();
        let x = Locus::interior(TetId(0));
        let y = Locus::vertex(TetId(0), 2);
        assert_eq!(quasi_distance(&w, &x, &y).unwrap(), 0);
    }
}
