//! Per-tetrahedron arrangements of normal disks from one or more realized
//! surfaces, the complementary blocks they cut, and the face regions gluing
//! blocks across faces.
//!
//! In one tetrahedron, pairwise disjoint normal disks stack as: triangle
//! disks nested at each corner, and one quad family ordered from the side of
//! its partition containing vertex 0. The complement decomposes into corner
//! blocks, quad slabs, and the two middle pieces flanking the quad stack
//! (one piece when there are no quads).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::complex::{face_corners, TriangulationWindow, EDGE_VERTS};
use crate::normal::realize::RealizedSurface;
use crate::normal::{arc_corner, quad_type_pairing, quad_zero_side, DiskType};

/// A disk instance across several surfaces.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiskKey {
    pub surface: usize,
    pub disk: usize,
}

#[derive(Clone, Debug, Default)]
pub struct TetArrangement {
    /// Triangle disks per corner, innermost first.
    pub tri: [Vec<DiskKey>; 4],
    /// Quad type and copies ordered from the partition side containing 0.
    pub quad: Option<(u8, Vec<DiskKey>)>,
}

/// Complementary region of a tet under its arrangement.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockId {
    /// Depth d at corner v: inside the d-th triangle, outside the (d-1)-st.
    Corner { v: u8, depth: usize },
    /// Between quads: 0 is the zero-side piece, m the far piece; with no
    /// quads the single middle block is Middle(0).
    Middle(usize),
}

/// A block address in the window.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockRef {
    pub tet: usize,
    pub block: BlockId,
}

/// Face regions keyed so both sides of a face class agree: a nesting depth
/// at a rep corner, or the central region.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RegionId {
    Corner { rep_corner: u8, depth: usize },
    Central,
}

#[derive(Clone, Debug)]
pub struct Arrangement<'a> {
    pub surfaces: Vec<&'a RealizedSurface>,
    pub tets: Vec<TetArrangement>,
}

impl TetArrangement {
    pub fn tri_count(&self, v: u8) -> usize {
        self.tri[v as usize].len()
    }

    pub fn quad_count(&self) -> usize {
        self.quad.as_ref().map_or(0, |(_, q)| q.len())
    }

    pub fn quad_type(&self) -> Option<u8> {
        self.quad.as_ref().map(|(k, _)| *k)
    }

    /// All blocks of this tet, sorted.
    pub fn blocks(&self) -> Vec<BlockId> {
        let mut out = Vec::new();
        for v in 0..4u8 {
            for depth in 0..self.tri_count(v) {
                out.push(BlockId::Corner { v, depth });
            }
        }
        for m in 0..=self.quad_count() {
            out.push(BlockId::Middle(m));
        }
        out.sort();
        out
    }

    /// The two blocks a disk separates, inner then outer.
    pub fn disk_sides(&self, key: DiskKey, dtype: DiskType) -> (BlockId, BlockId) {
        match dtype {
            DiskType::Tri(v) => {
                let depth = self.tri[v as usize]
                    .iter()
                    .position(|&k| k == key)
                    .expect("disk in arrangement");
                let inner = BlockId::Corner { v, depth };
                let outer = if depth + 1 < self.tri_count(v) {
                    BlockId::Corner { v, depth: depth + 1 }
                } else {
                    self.middle_at_corner(v)
                };
                (inner, outer)
            }
            DiskType::Quad(_) => {
                let (_, copies) = self.quad.as_ref().unwrap();
                let i = copies.iter().position(|&k| k == key).unwrap();
                (BlockId::Middle(i), BlockId::Middle(i + 1))
            }
        }
    }

    /// The middle block adjacent to corner v's outermost region.
    pub fn middle_at_corner(&self, v: u8) -> BlockId {
        match &self.quad {
            None => BlockId::Middle(0),
            Some((k, copies)) => {
                let (z0, z1) = quad_zero_side(*k);
                if v == z0 || v == z1 {
                    BlockId::Middle(0)
                } else {
                    BlockId::Middle(copies.len())
                }
            }
        }
    }
}

impl<'a> Arrangement<'a> {
    /// Builds the joint arrangement; surfaces must be realized with distinct
    /// parameter shifts so orders are strict.
    pub fn new(w: &TriangulationWindow, surfaces: Vec<&'a RealizedSurface>) -> Arrangement<'a> {
        let mut tets: Vec<TetArrangement> = vec![TetArrangement::default(); w.tet_count()];
        // Collect disks with a depth key per corner / quad order key.
        let mut tri_tmp: HashMap<(usize, u8), Vec<(f64, DiskKey)>> = HashMap::new();
        let mut quad_tmp: HashMap<usize, (u8, Vec<(f64, DiskKey)>)> = HashMap::new();
        for (si, s) in surfaces.iter().enumerate() {
            for (di, disk) in s.disks.iter().enumerate() {
                let key = DiskKey { surface: si, disk: di };
                match disk.dtype {
                    DiskType::Tri(v) => {
                        // Depth from the corner along one incident edge.
                        let e = (0..6u8)
                            .find(|&e| {
                                let (a, b) = EDGE_VERTS[e as usize];
                                a == v || b == v
                            })
                            .unwrap();
                        let depth = depth_key(w, s, disk.tet, e, v, key, disk.dtype);
                        tri_tmp
                            .entry((disk.tet, v))
                            .or_default()
                            .push((depth, key));
                    }
                    DiskType::Quad(k) => {
                        // Order from the zero side along a crossed edge.
                        let e = (0..6u8)
                            .find(|&e| {
                                let (a, b) = EDGE_VERTS[e as usize];
                                crate::normal::quad_crosses_edge(k, a, b)
                            })
                            .unwrap();
                        let (a, b) = EDGE_VERTS[e as usize];
                        let (z0, z1) = quad_zero_side(k);
                        let zero_end = if a == z0 || a == z1 { a } else { b };
                        let depth = depth_key(w, s, disk.tet, e, zero_end, key, disk.dtype);
                        let entry = quad_tmp.entry(disk.tet).or_insert((k, Vec::new()));
                        assert_eq!(entry.0, k, "conflicting quad types in tet {}", disk.tet);
                        entry.1.push((depth, key));
                    }
                }
            }
        }
        for ((tet, v), mut list) in tri_tmp {
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            tets[tet].tri[v as usize] = list.into_iter().map(|(_, k)| k).collect();
        }
        for (tet, (k, mut list)) in quad_tmp {
            list.sort_by(|x, y| x.0.total_cmp(&y.0));
            tets[tet].quad = Some((k, list.into_iter().map(|(_, kk)| kk).collect()));
        }
        Arrangement { surfaces, tets }
    }

    pub fn disk_type(&self, key: DiskKey) -> DiskType {
        self.surfaces[key.surface].disks[key.disk].dtype
    }

    pub fn disk_tet(&self, key: DiskKey) -> usize {
        self.surfaces[key.surface].disks[key.disk].tet
    }

    /// Arc counts at a corner of a face from this tet's arrangement: the
    /// nested arcs are the triangles at the corner, then the quad copies
    /// whose arc sits at this corner, ordered from the corner.
    pub fn arcs_at_corner(&self, tet: usize, f: u8, v: u8) -> Vec<DiskKey> {
        let ta = &self.tets[tet];
        let mut out = ta.tri[v as usize].clone();
        if let Some((k, copies)) = &ta.quad {
            if arc_corner(DiskType::Quad(*k), f) == Some(v) {
                let (z0, z1) = quad_zero_side(*k);
                if v == z0 || v == z1 {
                    out.extend(copies.iter().copied());
                } else {
                    out.extend(copies.iter().rev().copied());
                }
            }
        }
        out
    }

    /// Block adjacent to a face region, seen from one side.
    pub fn region_block(&self, w: &TriangulationWindow, tet: usize, f: u8, region: RegionId) -> BlockId {
        match region {
            RegionId::Central => {
                let ta = &self.tets[tet];
                match &ta.quad {
                    None => BlockId::Middle(0),
                    Some((k, copies)) => {
                        let corner = arc_corner(DiskType::Quad(*k), f).unwrap();
                        let (z0, z1) = quad_zero_side(*k);
                        // Central sits on the far side of the quad stack
                        // from the quad's arc corner in this face.
                        if corner == z0 || corner == z1 {
                            BlockId::Middle(copies.len())
                        } else {
                            BlockId::Middle(0)
                        }
                    }
                }
            }
            RegionId::Corner { rep_corner, depth } => {
                // Find the local corner with this rep label.
                let v = face_corners(f)
                    .into_iter()
                    .find(|&v| w.face_rep_corner(tet, f, v) == rep_corner)
                    .expect("rep corner on face");
                let arcs = self.arcs_at_corner(tet, f, v);
                let ta = &self.tets[tet];
                let t = ta.tri_count(v);
                if depth < t {
                    BlockId::Corner { v, depth }
                } else if depth == arcs.len() && depth == t {
                    // No quad arcs here and we are outside all triangles.
                    ta.middle_at_corner(v)
                } else {
                    // Inside the quad range: region depth t+j sits between
                    // quad arcs; map to the matching middle block.
                    let j = depth - t;
                    let (k, copies) = ta.quad.as_ref().unwrap();
                    let (z0, z1) = quad_zero_side(*k);
                    if v == z0 || v == z1 {
                        BlockId::Middle(j)
                    } else {
                        BlockId::Middle(copies.len() - j)
                    }
                }
            }
        }
    }

    /// All face regions of a face, seen from a side: per corner one region
    /// inside each arc plus the shared central region.
    pub fn face_regions(&self, w: &TriangulationWindow, tet: usize, f: u8) -> Vec<RegionId> {
        let mut out = Vec::new();
        for v in face_corners(f) {
            let arcs = self.arcs_at_corner(tet, f, v);
            let rep = w.face_rep_corner(tet, f, v);
            for depth in 0..arcs.len() {
                out.push(RegionId::Corner { rep_corner: rep, depth });
            }
        }
        out.push(RegionId::Central);
        out
    }

    /// Union-find of blocks glued through face regions: connected components
    /// of the window minus all surfaces.
    pub fn block_components(&self, w: &TriangulationWindow) -> BTreeMap<BlockRef, usize> {
        let mut ids: Vec<BlockRef> = Vec::new();
        let mut index: HashMap<BlockRef, usize> = HashMap::new();
        for (tet, ta) in self.tets.iter().enumerate() {
            for b in ta.blocks() {
                let r = BlockRef { tet, block: b };
                index.insert(r, ids.len());
                ids.push(r);
            }
        }
        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
                r
            } else {
                x
            }
        }
        for fc in 0..w.face_class_count() as u32 {
            let sides = w.face_sides(fc);
            if sides.len() != 2 {
                continue;
            }
            let (t1, f1) = sides[0];
            let (t2, f2) = sides[1];
            for region in self.face_regions(w, t1, f1) {
                let b1 = BlockRef { tet: t1, block: self.region_block(w, t1, f1, region) };
                let b2 = BlockRef { tet: t2, block: self.region_block(w, t2, f2, region) };
                let (x, y) = (index[&b1], index[&b2]);
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        // Dense component ids in block order.
        let mut comp_of_root: HashMap<usize, usize> = HashMap::new();
        let mut out = BTreeMap::new();
        for (i, r) in ids.iter().enumerate() {
            let root = find(&mut parent, i);
            let next = comp_of_root.len();
            let c = *comp_of_root.entry(root).or_insert(next);
            out.insert(*r, c);
        }
        out
    }
}

/// Ordering key of a disk's crossing along a local edge, measured from the
/// `v` end.
fn depth_key(
    w: &TriangulationWindow,
    s: &RealizedSurface,
    tet: usize,
    e: u8,
    v: u8,
    key: DiskKey,
    _dtype: DiskType,
) -> f64 {
    let disk = &s.disks[key.disk];
    debug_assert_eq!(disk.tet, tet);
    let (_, cid) = disk
        .edge_crossings
        .iter()
        .copied()
        .find(|&(de, _)| de == e)
        .expect("disk crosses the edge");
    let param = s.crossings[cid].param;
    let (a, _b) = EDGE_VERTS[e as usize];
    let from_start = !w.edge_reversed(tet, e);
    // Ascending class param runs from the class start; flip so the key
    // grows away from the chosen end.
    if (v == a) == from_start {
        param
    } else {
        -param
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, TetGluing, TetId};
    use crate::normal::realize::realize_surface;
    use crate::normal::{NormalCoordinates, TetCoords};

    #[test]
    fn lone_tet_blocks() {
        let w = build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap();
        let mut c = NormalCoordinates::zero(&w);
        c.tets[0] = TetCoords { tri: [2, 0, 0, 0], quad: [0, 1, 0] };
        let s = realize_surface(&w, &c, 0.0).unwrap();
        let arr = Arrangement::new(&w, vec![&s]);
        let ta = &arr.tets[0];
        assert_eq!(ta.tri_count(0), 2);
        assert_eq!(ta.quad_count(), 1);
        // Blocks: two at corner 0, and middles 0..=1.
        let blocks = ta.blocks();
        assert_eq!(blocks.len(), 4);
        assert!(blocks.contains(&BlockId::Corner { v: 0, depth: 1 }));
        assert!(blocks.contains(&BlockId::Middle(1)));
    }
}
