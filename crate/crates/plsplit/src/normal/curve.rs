//! Normal curves (tracks): curves meeting each tetrahedron in arcs joining
//! two distinct faces, and the length-reducing normalization of general
//! position curves.

use serde::Serialize;
use thiserror::Error;

use crate::complex::{FaceGluing, TriangulationWindow};

/// One segment of a curve inside a tetrahedron, entering and leaving
/// through the named faces.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSegment {
    pub tet: usize,
    pub entry: u8,
    pub exit: u8,
}

/// A closed combinatorial curve in general position: a cyclic segment list
/// where consecutive segments pass through a common glued face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CombCurve {
    pub segments: Vec<CurveSegment>,
}

impl CombCurve {
    /// Length: crossings with the 2-skeleton, one per junction.
    pub fn length(&self) -> usize {
        self.segments.len()
    }

    /// Every segment joins two distinct faces.
    pub fn is_normal(&self) -> bool {
        self.segments.iter().all(|s| s.entry != s.exit)
    }
}

#[derive(Clone, Debug, Serialize)]
pub enum NormalizeMove {
    /// Removed a segment entering and leaving through one face, merging its
    /// neighbors; drops the length by 2.
    RemoveBacktrack { at: usize },
}

#[derive(Clone, Debug, Serialize)]
pub enum NormalizeOutcome {
    Normal { curve: CombCurve, moves: Vec<NormalizeMove> },
    /// The curve became empty: it was contractible within a single
    /// tetrahedron star.
    Trivial { moves: Vec<NormalizeMove> },
}

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("segment {index} not in general position: {reason}")]
    NotGeneralPosition { index: usize, reason: String },
}

/// Checks junction consistency: the exit face of each segment must be glued
/// to the entry face of the next.
pub fn validate_curve(w: &TriangulationWindow, c: &CombCurve) -> Result<(), CurveError> {
    for (i, s) in c.segments.iter().enumerate() {
        if s.tet >= w.tet_count() {
            return Err(CurveError::NotGeneralPosition {
                index: i,
                reason: "tet outside window".into(),
            });
        }
        let next = &c.segments[(i + 1) % c.segments.len()];
        match *w.gluing(s.tet, s.exit) {
            FaceGluing::Glued { tet, face, .. } => {
                let tj = w.tet_index(tet).unwrap();
                if tj != next.tet || face != next.entry {
                    return Err(CurveError::NotGeneralPosition {
                        index: i,
                        reason: format!(
                            "exit face {} does not continue into segment {}",
                            s.exit,
                            (i + 1) % c.segments.len()
                        ),
                    });
                }
            }
            FaceGluing::Boundary => {
                return Err(CurveError::NotGeneralPosition {
                    index: i,
                    reason: "curve crosses a window-boundary face".into(),
                });
            }
        }
    }
    Ok(())
}

/// Applies length-reducing moves until every segment joins two distinct
/// faces. A segment entering and leaving through one face is pulled across
/// it, merging the two neighboring segments and dropping the length by 2.
pub fn normalize_curve(
    w: &TriangulationWindow,
    curve: &CombCurve,
) -> Result<NormalizeOutcome, CurveError> {
    validate_curve(w, curve)?;
    let mut segs = curve.segments.clone();
    let mut moves = Vec::new();
    loop {
        let Some(i) = segs.iter().position(|s| s.entry == s.exit) else {
            break;
        };
        moves.push(NormalizeMove::RemoveBacktrack { at: i });
        let n = segs.len();
        if n == 1 {
            // A closed loop inside one tetrahedron star: contractible.
            return Ok(NormalizeOutcome::Trivial { moves });
        }
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        if prev == next {
            // Two segments left; removing the backtrack leaves a loop inside
            // one tetrahedron, which is trivial.
            return Ok(NormalizeOutcome::Trivial { moves });
        }
        // The predecessor now continues directly into the successor: they
        // lie in the same tet (both adjacent to the removed segment's face).
        let merged = CurveSegment {
            tet: segs[prev].tet,
            entry: segs[prev].entry,
            exit: segs[next].exit,
        };
        debug_assert_eq!(segs[prev].tet, segs[next].tet);
        // Rebuild preserving cyclic order: replace prev, i, next by merged.
        let mut rebuilt = Vec::with_capacity(n - 2);
        let mut j = next;
        rebuilt.push(merged);
        loop {
            j = (j + 1) % n;
            if j == prev {
                break;
            }
            rebuilt.push(segs[j]);
        }
        segs = rebuilt;
    }
    if segs.is_empty() {
        return Ok(NormalizeOutcome::Trivial { moves });
    }
    Ok(NormalizeOutcome::Normal { curve: CombCurve { segments: segs }, moves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_complex, FaceGluing, TetGluing, TetId};
    use crate::perm::Perm4;

    fn two_tet_loop() -> TriangulationWindow {
        // Glue tet 0 face 0 <-> tet 1 face 0 and tet 0 face 1 <-> tet 1
        // face 1, leaving the rest boundary: a curve can cycle through both.
        let p = Perm4::IDENTITY;
        let t0 = TetGluing {
            id: TetId(0),
            faces: [
                FaceGluing::Glued { tet: TetId(1), face: 0, perm: p },
                FaceGluing::Glued { tet: TetId(1), face: 1, perm: p },
                FaceGluing::Boundary,
                FaceGluing::Boundary,
            ],
        };
        let t1 = TetGluing {
            id: TetId(1),
            faces: [
                FaceGluing::Glued { tet: TetId(0), face: 0, perm: p },
                FaceGluing::Glued { tet: TetId(0), face: 1, perm: p },
                FaceGluing::Boundary,
                FaceGluing::Boundary,
            ],
        };
        build_complex(vec![t0, t1]).unwrap()
    }

    #[test]
    fn already_normal_unchanged() {
        let w = two_tet_loop();
        let c = CombCurve {
            segments: vec![
                CurveSegment { tet: 0, entry: 0, exit: 1 },
                CurveSegment { tet: 1, entry: 1, exit: 0 },
            ],
        };
        match normalize_curve(&w, &c).unwrap() {
            NormalizeOutcome::Normal { curve, moves } => {
                assert_eq!(curve, c);
                assert!(moves.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn backtrack_drops_length_by_two() {
        let w = two_tet_loop();
        // Segment 1 enters and exits tet 1 through face 0: a backtrack.
        let c = CombCurve {
            segments: vec![
                CurveSegment { tet: 0, entry: 1, exit: 0 },
                CurveSegment { tet: 1, entry: 0, exit: 0 },
                CurveSegment { tet: 0, entry: 0, exit: 0 },
                CurveSegment { tet: 1, entry: 0, exit: 1 },
            ],
        };
        match normalize_curve(&w, &c).unwrap() {
            NormalizeOutcome::Normal { curve, moves } => {
                assert_eq!(curve.length(), c.length() - 2);
                assert!(!moves.is_empty());
                assert!(curve.is_normal());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn contractible_curve_is_trivial() {
        let w = two_tet_loop();
        let c = CombCurve {
            segments: vec![
                CurveSegment { tet: 0, entry: 0, exit: 0 },
                CurveSegment { tet: 1, entry: 0, exit: 0 },
            ],
        };
        match normalize_curve(&w, &c).unwrap() {
            NormalizeOutcome::Trivial { moves } => assert!(!moves.is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }
}
