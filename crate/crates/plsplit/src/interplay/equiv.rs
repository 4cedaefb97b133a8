//! The disk equivalence relation over an increasing family of regions in a
//! tetrahedron, and the interval machinery that disjointifies the convex
//! hulls of equivalent edge crossings.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{Arrangement, BlockId, DiskKey};

#[derive(Debug, Error)]
pub enum EquivError {
    #[error("family is not monotone: stage {stage} is not contained in stage {next}")]
    NotMonotone { stage: usize, next: usize },
    #[error("stage {stage} references a block missing from the arrangement")]
    UnknownBlock { stage: usize },
}

/// Partition of the arrangement's disks in one tetrahedron under the
/// relation: same disk type, and co-membership in a component of some
/// stage's region. Transitivity holds because the family is increasing,
/// which is checked.
pub fn disk_equivalence(
    arr: &Arrangement,
    tet: usize,
    stages: &[BTreeSet<BlockId>],
) -> Result<Vec<Vec<DiskKey>>, EquivError> {
    let ta = &arr.tets[tet];
    let all_blocks: BTreeSet<BlockId> = ta.blocks().into_iter().collect();
    for (i, stage) in stages.iter().enumerate() {
        if !stage.is_subset(&all_blocks) {
            return Err(EquivError::UnknownBlock { stage: i });
        }
        if i + 1 < stages.len() && !stage.is_subset(&stages[i + 1]) {
            return Err(EquivError::NotMonotone { stage: i, next: i + 1 });
        }
    }

    // Disks of the tet, with their two side blocks.
    let mut disks: Vec<(DiskKey, BlockId, BlockId)> = Vec::new();
    for (si, s) in arr.surfaces.iter().enumerate() {
        for (di, d) in s.disks.iter().enumerate() {
            if d.tet != tet {
                continue;
            }
            let key = DiskKey { surface: si, disk: di };
            let (inner, outer) = ta.disk_sides(key, d.dtype);
            disks.push((key, inner, outer));
        }
    }

    let mut parent: BTreeMap<DiskKey, DiskKey> = disks.iter().map(|&(k, _, _)| (k, k)).collect();
    fn find(parent: &mut BTreeMap<DiskKey, DiskKey>, x: DiskKey) -> DiskKey {
        let p = parent[&x];
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }

    for stage in stages {
        // Components of the stage region: blocks joined across interior
        // disks (both sides inside the region).
        let blocks: Vec<BlockId> = stage.iter().copied().collect();
        let mut bparent: BTreeMap<BlockId, BlockId> = blocks.iter().map(|&b| (b, b)).collect();
        fn bfind(p: &mut BTreeMap<BlockId, BlockId>, x: BlockId) -> BlockId {
            let q = p[&x];
            if q == x {
                return x;
            }
            let r = bfind(p, q);
            p.insert(x, r);
            r
        }
        for &(_, inner, outer) in &disks {
            if stage.contains(&inner) && stage.contains(&outer) {
                let (ri, ro) = (bfind(&mut bparent, inner), bfind(&mut bparent, outer));
                if ri != ro {
                    bparent.insert(ri, ro);
                }
            }
        }
        // Disks touching each component, grouped by type, are equivalent.
        let mut touch: BTreeMap<(BlockId, crate::normal::DiskType), Vec<DiskKey>> = BTreeMap::new();
        for &(key, inner, outer) in &disks {
            let dtype = arr.disk_type(key);
            for b in [inner, outer] {
                if stage.contains(&b) {
                    let root = bfind(&mut bparent, b);
                    touch.entry((root, dtype)).or_default().push(key);
                }
            }
        }
        for group in touch.values() {
            for pair in group.windows(2) {
                let (ra, rb) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
                if ra != rb {
                    parent.insert(ra, rb);
                }
            }
        }
    }

    let mut classes: BTreeMap<DiskKey, Vec<DiskKey>> = BTreeMap::new();
    let keys: Vec<DiskKey> = disks.iter().map(|&(k, _, _)| k).collect();
    for k in keys {
        let r = find(&mut parent, k);
        classes.entry(r).or_default().push(k);
    }
    Ok(classes.into_values().collect())
}

/// One class's interval data on an edge.
#[derive(Clone, Debug, Serialize)]
pub struct IntervalHull {
    pub class_id: usize,
    /// Closure of the convex hull of the class's crossing parameters.
    pub hull: (f64, f64),
    /// Chosen subinterval, pairwise disjoint across classes.
    pub shrunk: (f64, f64),
    /// Linear remap hull -> shrunk as (scale, offset).
    pub remap: (f64, f64),
}

impl IntervalHull {
    pub fn apply(&self, x: f64) -> f64 {
        self.remap.0 * x + self.remap.1
    }
}

/// Disjointifies the hulls of finitely many classes of edge positions:
/// anchors follow the barycenter order, every shrunk interval sits inside
/// its hull, and distinct classes' shrunk intervals are pairwise disjoint.
pub fn disjointify_intervals(classes: &[Vec<f64>]) -> Vec<IntervalHull> {
    assert!(classes.iter().all(|c| !c.is_empty()), "classes are nonempty");
    let m = classes.len();
    let mut order: Vec<usize> = (0..m).collect();
    let bary = |c: &[f64]| c.iter().sum::<f64>() / c.len() as f64;
    let width = |c: &[f64]| {
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    // Ties in barycenter put narrow hulls first so their pinned anchors
    // come before the nudged wide ones.
    order.sort_by(|&i, &j| {
        bary(&classes[i])
            .total_cmp(&bary(&classes[j]))
            .then_with(|| width(&classes[i]).total_cmp(&width(&classes[j])))
            .then_with(|| classes[i][0].total_cmp(&classes[j][0]))
            .then(i.cmp(&j))
    });

    // Strictly increasing anchors inside hull interiors.
    let mut anchors = vec![0.0f64; m];
    let mut prev: Option<f64> = None;
    for (rank, &i) in order.iter().enumerate() {
        let lo = classes[i].iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = classes[i].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let b = bary(&classes[i]);
        let a = match prev {
            None => b,
            Some(p) if b > p => b,
            Some(p) => {
                // Tie or inversion from equal barycenters: nudge strictly
                // above the previous anchor, staying inside the hull.
                let room = if hi > p { (hi - p) / 2.0 } else { f64::MIN_POSITIVE };
                p + room.min(1e-6 * (1.0 + p.abs()))
            }
        };
        let a = a.clamp(lo, hi);
        assert!(prev.is_none_or(|p| a > p), "anchor order at rank {rank}");
        anchors[i] = a;
        prev = Some(a);
    }

    // Radii: stay inside the hull interior and inside a third of the gap to
    // neighboring anchors.
    let mut out: Vec<IntervalHull> = Vec::with_capacity(m);
    for (rank, &i) in order.iter().enumerate() {
        let lo = classes[i].iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = classes[i].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let a = anchors[i];
        let mut r = f64::INFINITY;
        if hi > lo {
            r = r.min((a - lo) / 2.0).min((hi - a) / 2.0);
        } else {
            r = 0.0;
        }
        if rank > 0 {
            r = r.min((a - anchors[order[rank - 1]]) / 3.0);
        }
        if rank + 1 < m {
            r = r.min((anchors[order[rank + 1]] - a) / 3.0);
        }
        if !r.is_finite() {
            // Single nondegenerate class.
            r = ((a - lo) / 2.0).min((hi - a) / 2.0).min(0.5);
        }
        let shrunk = (a - r, a + r);
        let remap = if hi > lo {
            let scale = (shrunk.1 - shrunk.0) / (hi - lo);
            (scale, shrunk.0 - scale * lo)
        } else {
            (0.0, a)
        };
        out.push(IntervalHull { class_id: i, hull: (lo, hi), shrunk, remap });
    }
    out.sort_by_key(|h| h.class_id);

    // Exact postconditions.
    for x in &out {
        for y in &out {
            if x.class_id != y.class_id {
                assert!(
                    x.shrunk.1 < y.shrunk.0 || y.shrunk.1 < x.shrunk.0,
                    "shrunk intervals overlap: {:?} vs {:?}",
                    x.shrunk,
                    y.shrunk
                );
            }
        }
        if x.hull.1 > x.hull.0 {
            assert!(x.shrunk.0 >= x.hull.0 && x.shrunk.1 <= x.hull.1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_hulls_stay_put() {
        let classes = vec![vec![0.0, 1.0], vec![5.0, 6.0]];
        let out = disjointify_intervals(&classes);
        assert!(out[0].shrunk.1 < out[1].shrunk.0);
        assert!(out[0].shrunk.0 > -0.01 && out[0].shrunk.1 < 1.01);
    }

    #[test]
    fn nested_hulls_become_disjoint() {
        let classes = vec![vec![0.0, 10.0], vec![4.0, 6.0]];
        let out = disjointify_intervals(&classes);
        let (a, b) = (&out[0], &out[1]);
        assert!(a.shrunk.1 < b.shrunk.0 || b.shrunk.1 < a.shrunk.0);
        // Remap preserves internal order.
        assert!(a.apply(0.0) < a.apply(10.0));
    }

    #[test]
    fn singleton_class_is_a_point() {
        let classes = vec![vec![0.0, 10.0], vec![5.0]];
        let out = disjointify_intervals(&classes);
        assert_eq!(out[1].shrunk.0, out[1].shrunk.1);
        assert!(out[1].shrunk.0 < out[0].shrunk.0 || out[1].shrunk.0 > out[0].shrunk.1);
    }
}
