//! Tetrahedral complexes with face gluings, derived skeleta, and the
//! size/quasimetric machinery.
//!
//! A complex is a set of abstract tetrahedra with faces either free
//! (`Boundary`) or glued in pairs by a vertex permutation. Faces are named by
//! the opposite vertex: face `f` of a tetrahedron is spanned by the three
//! vertices other than `f`, and a gluing permutation must carry `f` to the
//! partner's opposite vertex.

pub mod dist;
pub mod lazy;
pub mod parse;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm4;

/// Identifier of a tetrahedron. Lazy complexes use negative ids for cap
/// blocks, so the full signed range is meaningful.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TetId(pub i64);

impl fmt::Debug for TetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

impl fmt::Display for TetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Vertex pairs of the six edges of a tetrahedron, in index order.
pub const EDGE_VERTS: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Edge index for an unordered vertex pair.
pub fn edge_index(a: u8, b: u8) -> u8 {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("bad edge pair ({a},{b})"),
    }
}

/// The three corners of face `f` (the vertices other than `f`), ascending.
pub fn face_corners(f: u8) -> [u8; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("bad face index {f}"),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceGluing {
    Boundary,
    Glued { tet: TetId, face: u8, perm: Perm4 },
}

/// One tetrahedron record: its id and the gluing state of its four faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TetGluing {
    pub id: TetId,
    pub faces: [FaceGluing; 4],
}

impl TetGluing {
    pub fn isolated(id: TetId) -> TetGluing {
        TetGluing {
            id,
            faces: [FaceGluing::Boundary; 4],
        }
    }
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("invalid gluing on tet {tet} face {face}: {reason}")]
    InvalidGluing { tet: TetId, face: u8, reason: String },
    #[error("duplicate tetrahedron id {0}")]
    DuplicateTet(TetId),
    #[error("gluing references unknown tetrahedron {0}")]
    UnknownTet(TetId),
    #[error("empty complex")]
    Empty,
}

/// A validated finite complex with computed skeleta.
///
/// Immutable after construction; all queries are read-only.
#[derive(Clone, Debug)]
pub struct TriangulationWindow {
    tets: Vec<TetGluing>,
    index: HashMap<TetId, usize>,
    vertex_class: Vec<[u32; 4]>,
    edge_class: Vec<[u32; 6]>,
    /// Whether the local edge direction (low vertex -> high vertex) is
    /// reversed relative to the class orientation.
    edge_reversed: Vec<[bool; 6]>,
    face_class: Vec<[u32; 4]>,
    vertex_corners: Vec<Vec<(usize, u8)>>,
    edge_sides: Vec<Vec<(usize, u8)>>,
    face_sides: Vec<Vec<(usize, u8)>>,
    /// Per-tet orientation signs when the complex is orientable.
    orientation: Option<Vec<i8>>,
    /// Edge classes glued to themselves with a reversal; these break the
    /// bi-infinite geodesic parametrization and are flagged, not fatal.
    reversed_self_edges: Vec<u32>,
    /// Per (tet, face): rep-corner index of each ascending local corner, so
    /// both sides of a face class agree on corner labels.
    face_corner_map: Vec<[[u8; 3]; 4]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeometryAudit {
    pub tet_count: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub boundary_face_count: usize,
    /// Maximum number of distinct tetrahedra containing a single vertex class.
    pub max_vertex_degree: usize,
    pub orientable: bool,
    /// Declared global bound of the generator, when auditing a lazy window.
    pub declared_bound: Option<usize>,
}

#[derive(Debug, Error)]
#[error("window exceeds declared bounded-geometry constant: {observed} > {declared}")]
pub struct BoundViolated {
    pub observed: usize,
    pub declared: usize,
}

struct UnionFind {
    parent: Vec<u32>,
    // parity relative to parent (for oriented edge classes)
    parity: Vec<bool>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            parity: vec![false; n],
        }
    }

    /// Returns (root, parity to root).
    fn find(&mut self, x: u32) -> (u32, bool) {
        let p = self.parent[x as usize];
        if p == x {
            return (x, false);
        }
        let (root, par) = self.find(p);
        let total = par ^ self.parity[x as usize];
        self.parent[x as usize] = root;
        self.parity[x as usize] = total;
        (root, total)
    }

    /// Unions x and y with relative parity `rel` (true = reversed).
    /// Returns false if already joined with a conflicting parity.
    fn union(&mut self, x: u32, y: u32, rel: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return (px ^ py) == rel;
        }
        self.parent[rx as usize] = ry;
        self.parity[rx as usize] = px ^ py ^ rel;
        true
    }
}

/// Builds and validates a window from tetrahedron records.
///
/// Rejects non-involutive gluings, doubly-assigned faces, and faces glued to
/// themselves. A non-orientable complex is accepted but flagged in the audit.
pub fn build_complex(tets: Vec<TetGluing>) -> Result<TriangulationWindow, ComplexError> {
    if tets.is_empty() {
        return Err(ComplexError::Empty);
    }
    let mut tets = tets;
    tets.sort_by_key(|t| t.id);
    let mut index = HashMap::new();
    for (i, t) in tets.iter().enumerate() {
        if index.insert(t.id, i).is_some() {
            return Err(ComplexError::DuplicateTet(t.id));
        }
    }

    // Gluing validation: involutivity, no self-gluing of a face, perm carries
    // opposite vertex to opposite vertex.
    for t in &tets {
        for f in 0..4u8 {
            if let FaceGluing::Glued { tet, face, perm } = t.faces[f as usize] {
                if tet == t.id && face == f {
                    return Err(ComplexError::InvalidGluing {
                        tet: t.id,
                        face: f,
                        reason: "face glued to itself".into(),
                    });
                }
                if perm.apply(f) != face {
                    return Err(ComplexError::InvalidGluing {
                        tet: t.id,
                        face: f,
                        reason: format!(
                            "permutation {perm} does not carry face {f} to partner face {face}"
                        ),
                    });
                }
                let &pi = index.get(&tet).ok_or(ComplexError::UnknownTet(tet))?;
                match tets[pi].faces[face as usize] {
                    FaceGluing::Glued {
                        tet: back_tet,
                        face: back_face,
                        perm: back_perm,
                    } if back_tet == t.id && back_face == f && back_perm == perm.inverse() => {}
                    _ => {
                        return Err(ComplexError::InvalidGluing {
                            tet: t.id,
                            face: f,
                            reason: format!(
                                "gluing to {tet}/{face} is not involutive on the partner side"
                            ),
                        });
                    }
                }
            }
        }
    }

    let n = tets.len();

    // Vertex classes.
    let mut vuf = UnionFind::new(n * 4);
    // Edge classes with orientation parity.
    let mut euf = UnionFind::new(n * 6);
    // Face classes.
    let mut fuf = UnionFind::new(n * 4);
    let mut reversed_self = std::collections::BTreeSet::new();

    for (ti, t) in tets.iter().enumerate() {
        for f in 0..4u8 {
            if let FaceGluing::Glued { tet, face, perm } = t.faces[f as usize] {
                let pi = index[&tet];
                // Only glue once per pair; the partner's record repeats it.
                if (pi, face) < (ti, f) {
                    continue;
                }
                fuf.union((ti * 4 + f as usize) as u32, (pi * 4 + face as usize) as u32, false);
                for v in face_corners(f) {
                    vuf.union(
                        (ti * 4 + v as usize) as u32,
                        (pi * 4 + perm.apply(v) as usize) as u32,
                        false,
                    );
                }
                for (a, b) in edge_pairs_of_face(f) {
                    let e = edge_index(a, b);
                    let (pa, pb) = (perm.apply(a), perm.apply(b));
                    let pe = edge_index(pa, pb);
                    // Local direction low->high; reversed if the images flip.
                    let rel = pa > pb;
                    if !euf.union((ti * 6 + e as usize) as u32, (pi * 6 + pe as usize) as u32, rel)
                    {
                        // Edge identified with itself with reversal.
                        let (root, _) = euf.find((ti * 6 + e as usize) as u32);
                        reversed_self.insert(root);
                    }
                }
            }
        }
    }

    // Compress classes into dense ids, ordered by least (tet index, slot).
    let mut vertex_class = vec![[u32::MAX; 4]; n];
    let mut edge_class = vec![[u32::MAX; 6]; n];
    let mut edge_reversed = vec![[false; 6]; n];
    let mut face_class = vec![[u32::MAX; 4]; n];

    let mut vmap: HashMap<u32, u32> = HashMap::new();
    let mut vertex_corners: Vec<Vec<(usize, u8)>> = Vec::new();
    for ti in 0..n {
        for v in 0..4u8 {
            let (root, _) = vuf.find((ti * 4 + v as usize) as u32);
            let id = *vmap.entry(root).or_insert_with(|| {
                vertex_corners.push(Vec::new());
                (vertex_corners.len() - 1) as u32
            });
            vertex_class[ti][v as usize] = id;
            vertex_corners[id as usize].push((ti, v));
        }
    }

    let mut emap: HashMap<u32, u32> = HashMap::new();
    let mut edge_sides: Vec<Vec<(usize, u8)>> = Vec::new();
    for ti in 0..n {
        for e in 0..6u8 {
            let (root, parity) = euf.find((ti * 6 + e as usize) as u32);
            let id = *emap.entry(root).or_insert_with(|| {
                edge_sides.push(Vec::new());
                (edge_sides.len() - 1) as u32
            });
            edge_class[ti][e as usize] = id;
            // Parity is relative to the root side; the first occurrence we
            // meet fixes the class orientation, and roots are canonical, so
            // parity-to-root is a consistent orientation marker.
            edge_reversed[ti][e as usize] = parity;
            edge_sides[id as usize].push((ti, e));
        }
    }

    let mut fmap: HashMap<u32, u32> = HashMap::new();
    let mut face_sides: Vec<Vec<(usize, u8)>> = Vec::new();
    for ti in 0..n {
        for f in 0..4u8 {
            let (root, _) = fuf.find((ti * 4 + f as usize) as u32);
            let id = *fmap.entry(root).or_insert_with(|| {
                face_sides.push(Vec::new());
                (face_sides.len() - 1) as u32
            });
            face_class[ti][f as usize] = id;
            face_sides[id as usize].push((ti, f));
        }
    }

    let reversed_self_edges: Vec<u32> = reversed_self
        .into_iter()
        .map(|root| {
            let mut uf_root = root;
            // `root` indexes a (tet, edge) slot; map through euf find.
            let (r, _) = euf.find(uf_root);
            uf_root = r;
            emap[&uf_root]
        })
        .collect();

    // Orientation: s(t) * s(t') = -sign(perm) across every gluing.
    let mut orientation_signs = vec![0i8; n];
    let mut orientable = true;
    'outer: for start in 0..n {
        if orientation_signs[start] != 0 {
            continue;
        }
        orientation_signs[start] = 1;
        let mut stack = vec![start];
        while let Some(ti) = stack.pop() {
            let s = orientation_signs[ti];
            for f in 0..4u8 {
                if let FaceGluing::Glued { tet, perm, .. } = tets[ti].faces[f as usize] {
                    let pi = index[&tet];
                    let want = -s * perm.sign();
                    if orientation_signs[pi] == 0 {
                        orientation_signs[pi] = want;
                        stack.push(pi);
                    } else if orientation_signs[pi] != want {
                        orientable = false;
                        break 'outer;
                    }
                }
            }
        }
    }

    // Corner maps: the first listed side of each face class is the rep with
    // identity labels; a glued partner maps through the inverse permutation.
    let mut face_corner_map = vec![[[0u8; 3]; 4]; n];
    for sides in &face_sides {
        let (ti, f) = sides[0];
        face_corner_map[ti][f as usize] = [0, 1, 2];
        if sides.len() == 2 {
            let rep_corners = face_corners(f);
            if let FaceGluing::Glued { perm, .. } = tets[ti].faces[f as usize] {
                let (tj, fj) = sides[1];
                let partner_corners = face_corners(fj);
                let mut map = [0u8; 3];
                for (j, &v) in partner_corners.iter().enumerate() {
                    let pre = perm.inverse().apply(v);
                    map[j] = rep_corners.iter().position(|&c| c == pre).unwrap() as u8;
                }
                face_corner_map[tj][fj as usize] = map;
            }
        }
    }

    Ok(TriangulationWindow {
        tets,
        index,
        vertex_class,
        edge_class,
        edge_reversed,
        face_class,
        vertex_corners,
        edge_sides,
        face_sides,
        orientation: if orientable { Some(orientation_signs) } else { None },
        reversed_self_edges,
        face_corner_map,
    })
}

fn edge_pairs_of_face(f: u8) -> [(u8, u8); 3] {
    let [a, b, c] = face_corners(f);
    [(a, b), (a, c), (b, c)]
}

impl TriangulationWindow {
    pub fn tet_count(&self) -> usize {
        self.tets.len()
    }

    pub fn tets(&self) -> &[TetGluing] {
        &self.tets
    }

    pub fn tet_ids(&self) -> impl Iterator<Item = TetId> + '_ {
        self.tets.iter().map(|t| t.id)
    }

    pub fn contains(&self, id: TetId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn tet_index(&self, id: TetId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn tet_id(&self, ti: usize) -> TetId {
        self.tets[ti].id
    }

    pub fn gluing(&self, ti: usize, face: u8) -> &FaceGluing {
        &self.tets[ti].faces[face as usize]
    }

    pub fn vertex_class_count(&self) -> usize {
        self.vertex_corners.len()
    }

    pub fn edge_class_count(&self) -> usize {
        self.edge_sides.len()
    }

    pub fn face_class_count(&self) -> usize {
        self.face_sides.len()
    }

    pub fn vertex_class_of(&self, ti: usize, v: u8) -> u32 {
        self.vertex_class[ti][v as usize]
    }

    pub fn edge_class_of(&self, ti: usize, e: u8) -> u32 {
        self.edge_class[ti][e as usize]
    }

    /// True if the local low->high direction of edge slot `e` of tet `ti`
    /// runs against the class orientation.
    pub fn edge_reversed(&self, ti: usize, e: u8) -> bool {
        self.edge_reversed[ti][e as usize]
    }

    pub fn face_class_of(&self, ti: usize, f: u8) -> u32 {
        self.face_class[ti][f as usize]
    }

    pub fn vertex_corners(&self, class: u32) -> &[(usize, u8)] {
        &self.vertex_corners[class as usize]
    }

    pub fn edge_sides(&self, class: u32) -> &[(usize, u8)] {
        &self.edge_sides[class as usize]
    }

    pub fn face_sides(&self, class: u32) -> &[(usize, u8)] {
        &self.face_sides[class as usize]
    }

    pub fn is_boundary_face(&self, class: u32) -> bool {
        let &(ti, f) = &self.face_sides[class as usize][0];
        matches!(self.tets[ti].faces[f as usize], FaceGluing::Boundary)
    }

    pub fn boundary_face_count(&self) -> usize {
        (0..self.face_class_count() as u32)
            .filter(|&c| self.is_boundary_face(c))
            .count()
    }

    pub fn orientable(&self) -> bool {
        self.orientation.is_some()
    }

    pub fn orientation_sign(&self, ti: usize) -> Option<i8> {
        self.orientation.as_ref().map(|o| o[ti])
    }

    pub fn reversed_self_edges(&self) -> &[u32] {
        &self.reversed_self_edges
    }

    /// Rep-corner index (0..2 in the face class's canonical labels) of local
    /// vertex `v` on face `f` of tet `ti`.
    pub fn face_rep_corner(&self, ti: usize, f: u8, v: u8) -> u8 {
        let pos = face_corners(f).iter().position(|&c| c == v).expect("v on face");
        self.face_corner_map[ti][f as usize][pos]
    }

    /// Distinct tetrahedra incident to a vertex class.
    pub fn tets_at_vertex(&self, class: u32) -> Vec<usize> {
        let mut v: Vec<usize> = self.vertex_corners[class as usize]
            .iter()
            .map(|&(ti, _)| ti)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn geometry_audit(&self) -> GeometryAudit {
        let max_vertex_degree = (0..self.vertex_class_count() as u32)
            .map(|c| self.tets_at_vertex(c).len())
            .max()
            .unwrap_or(0);
        GeometryAudit {
            tet_count: self.tet_count(),
            vertex_count: self.vertex_class_count(),
            edge_count: self.edge_class_count(),
            face_count: self.face_class_count(),
            boundary_face_count: self.boundary_face_count(),
            max_vertex_degree,
            orientable: self.orientable(),
            declared_bound: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn glue(tet: i64, face: u8, perm: &str) -> FaceGluing {
        FaceGluing::Glued {
            tet: TetId(tet),
            face,
            perm: Perm4::parse(perm).unwrap(),
        }
    }

    #[test]
    fn single_tet_counts() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let audit = w.geometry_audit();
        assert_eq!(audit.tet_count, 1);
        assert_eq!(audit.vertex_count, 4);
        assert_eq!(audit.edge_count, 6);
        assert_eq!(audit.face_count, 4);
        assert_eq!(audit.boundary_face_count, 4);
        assert_eq!(audit.max_vertex_degree, 1);
        assert!(audit.orientable);
    }

    #[test]
    fn doubled_tet_is_sphere_like() {
        // Two tets glued along all four faces by the identity: the double of
        // a 3-simplex. 4 vertices, 6 edges, 4 faces, 2 tets.
        let t0 = TetGluing {
            id: TetId(0),
            faces: [
                glue(1, 0, "0123"),
                glue(1, 1, "0123"),
                glue(1, 2, "0123"),
                glue(1, 3, "0123"),
            ],
        };
        let t1 = TetGluing {
            id: TetId(1),
            faces: [
                glue(0, 0, "0123"),
                glue(0, 1, "0123"),
                glue(0, 2, "0123"),
                glue(0, 3, "0123"),
            ],
        };
        let w = build_complex(vec![t0, t1]).unwrap();
        let audit = w.geometry_audit();
        assert_eq!(audit.vertex_count, 4);
        assert_eq!(audit.edge_count, 6);
        assert_eq!(audit.face_count, 4);
        assert_eq!(audit.boundary_face_count, 0);
        assert!(audit.orientable);
        assert_eq!(audit.max_vertex_degree, 2);
    }

    #[test]
    fn rejects_non_involutive() {
        let t0 = TetGluing {
            id: TetId(0),
            faces: [
                glue(1, 0, "0123"),
                FaceGluing::Boundary,
                FaceGluing::Boundary,
                FaceGluing::Boundary,
            ],
        };
        // Partner does not glue back.
        let t1 = TetGluing::isolated(TetId(1));
        assert!(matches!(
            build_complex(vec![t0, t1]),
            Err(ComplexError::InvalidGluing { .. })
        ));
    }

    #[test]
    fn rejects_self_face_gluing() {
        let t0 = TetGluing {
            id: TetId(0),
            faces: [
                glue(0, 0, "0123"),
                FaceGluing::Boundary,
                FaceGluing::Boundary,
                FaceGluing::Boundary,
            ],
        };
        assert!(matches!(
            build_complex(vec![t0]),
            Err(ComplexError::InvalidGluing { .. })
        ));
    }

    #[test]
    fn rejects_perm_not_carrying_face() {
        // perm maps face 0 to 1 but target face says 2.
        let p = Perm4::parse("1023").unwrap();
        let t0 = TetGluing {
            id: TetId(0),
            faces: [
                FaceGluing::Glued { tet: TetId(1), face: 2, perm: p },
                FaceGluing::Boundary,
                FaceGluing::Boundary,
                FaceGluing::Boundary,
            ],
        };
        let t1 = TetGluing::isolated(TetId(1));
        assert!(matches!(
            build_complex(vec![t0, t1]),
            Err(ComplexError::InvalidGluing { .. })
        ));
    }
}
