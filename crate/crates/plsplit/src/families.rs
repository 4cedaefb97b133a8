//! Example generators: grid-built surface complexes lifted to circle
//! products or level-stacked complexes, plus small closed fixtures.
//!
//! A 2-complex is built from grid cells, each split into two triangles by
//! the diagonal directed from the low corner to the high corner; all edges
//! are directed (+x, +y, diagonal), so the staircase prism triangulation of
//! the product is consistent across gluings. Per base triangle the lift has
//! three tets; the circle factor either wraps inside the block (`Wrap`) or
//! steps to the next copy (`Shift`, a level direction).

use std::collections::HashMap;

use crate::complex::lazy::{PeriodicGenerator, PeriodicMode, ShiftGluing};
use crate::complex::{build_complex, FaceGluing, TetGluing, TetId, TriangulationWindow};
use crate::normal::realize::{analyze_surface, realize_surface, SurfaceKind};
use crate::normal::{DiskType, NormalCoordinates};
use crate::perm::Perm4;

/// A directed-side triangle of the base complex. Side `k` joins the two
/// corners other than `k`, directed from the lower corner to the higher.
#[derive(Clone, Debug, Default)]
pub struct Tri2 {
    pub sides: [Option<SideRef>; 3],
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SideRef {
    pub cap: bool,
    pub tri: usize,
    pub side: u8,
}

/// Base block of a periodic surface: block triangles, optional cap
/// triangles (ray mode), and side pairs glued into the next copy.
#[derive(Clone, Debug, Default)]
pub struct Surf2 {
    pub tris: Vec<Tri2>,
    pub cap: Vec<Tri2>,
    /// (block tri, side) of copy n glued to (block tri, side) of copy n+1.
    pub cross: Vec<(usize, u8, usize, u8)>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Vertical {
    /// Circle product: the prism top is glued to its own bottom.
    Wrap,
    /// Level direction: the prism top continues into the next copy.
    Shift,
}

/// Lower-rectangle attachment of a triangle side: (prism tet offset, face,
/// locals of the rectangle roles u0, v0, v1).
fn side_lower(k: u8) -> (usize, u8, [u8; 3]) {
    match k {
        0 => (0, 0, [1, 2, 3]),
        1 => (0, 1, [0, 2, 3]),
        2 => (1, 3, [0, 1, 2]),
        _ => panic!("bad side"),
    }
}

/// Upper-rectangle attachment: locals of roles u0, u1, v1.
fn side_upper(k: u8) -> (usize, u8, [u8; 3]) {
    match k {
        0 => (1, 0, [1, 2, 3]),
        1 => (2, 2, [0, 1, 3]),
        2 => (2, 3, [0, 1, 2]),
        _ => panic!("bad side"),
    }
}

fn role_perm(from: (usize, u8, [u8; 3]), to: (usize, u8, [u8; 3])) -> Perm4 {
    let mut image = [u8::MAX; 4];
    for j in 0..3 {
        image[from.2[j] as usize] = to.2[j];
    }
    image[from.1 as usize] = to.1;
    Perm4::new(image).expect("role maps form a permutation")
}

/// A periodic product complex: the generator plus base metadata for lifting
/// curves and levels.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    pub gen: PeriodicGenerator,
    pub surf: Surf2,
    pub vertical: Vertical,
}

impl ProductComplex {
    pub fn block_tet(&self, copy: i64, tri: usize, piece: usize) -> TetId {
        self.gen.global_id(copy, 3 * tri + piece)
    }

    pub fn cap_tet(&self, tri: usize, piece: usize) -> TetId {
        self.gen.cap_id(3 * tri + piece)
    }

    pub fn window(&self, lo: i64, hi: i64) -> TriangulationWindow {
        self.gen.window(lo, hi).expect("product window builds")
    }

    /// Vertical surface over a closed base curve: per arc, the three prism
    /// disks separating the preimages of the cut corner.
    pub fn lift_curve(
        &self,
        w: &TriangulationWindow,
        arcs: &[BaseArc],
    ) -> NormalCoordinates {
        let mut coords = NormalCoordinates::zero(w);
        for arc in arcs {
            let corner = 3 - arc.entry_side - arc.exit_side;
            let disks: [(usize, DiskType); 3] = match corner {
                0 => [
                    (0, DiskType::Tri(0)),
                    (1, DiskType::Tri(0)),
                    (2, DiskType::Quad(0)),
                ],
                1 => [
                    (0, DiskType::Tri(1)),
                    (1, DiskType::Quad(2)),
                    (2, DiskType::Tri(2)),
                ],
                2 => [
                    (0, DiskType::Quad(0)),
                    (1, DiskType::Tri(3)),
                    (2, DiskType::Tri(3)),
                ],
                _ => panic!("bad corner"),
            };
            for (piece, dtype) in disks {
                let id = if arc.cap {
                    self.cap_tet(arc.tri, piece)
                } else {
                    self.block_tet(arc.copy, arc.tri, piece)
                };
                let ti = w
                    .tet_index(id)
                    .unwrap_or_else(|| panic!("curve leaves the window at {id}"));
                match dtype {
                    DiskType::Tri(v) => coords.tets[ti].tri[v as usize] += 1,
                    DiskType::Quad(k) => coords.tets[ti].quad[k as usize] += 1,
                }
            }
        }
        coords
            .validate(w)
            .expect("lifted curve satisfies matching equations");
        coords
    }

    /// Level surface between copy `copy` and `copy + 1` (Shift mode): one
    /// torus-like leaf per block.
    pub fn level_surface(&self, w: &TriangulationWindow, copy: i64) -> NormalCoordinates {
        assert_eq!(self.vertical, Vertical::Shift);
        let mut coords = NormalCoordinates::zero(w);
        for tri in 0..self.surf.tris.len() {
            for (piece, dtype) in [
                (0usize, DiskType::Tri(3)),
                (1, DiskType::Quad(0)),
                (2, DiskType::Tri(0)),
            ] {
                let ti = w
                    .tet_index(self.block_tet(copy, tri, piece))
                    .expect("level inside window");
                match dtype {
                    DiskType::Tri(v) => coords.tets[ti].tri[v as usize] += 1,
                    DiskType::Quad(k) => coords.tets[ti].quad[k as usize] += 1,
                }
            }
        }
        coords.validate(w).expect("level surface matches");
        coords
    }
}

/// One base-curve arc: a triangle crossed from one side to another.
#[derive(Copy, Clone, Debug)]
pub struct BaseArc {
    pub cap: bool,
    pub copy: i64,
    pub tri: usize,
    pub entry_side: u8,
    pub exit_side: u8,
}

/// Lifts a base block to the prism generator.
pub fn lift(surf: Surf2, vertical: Vertical, bound: usize) -> ProductComplex {
    let nb = surf.tris.len();
    let make_tets = |tris: &[Tri2], id_of: &dyn Fn(usize, usize) -> i64| -> Vec<TetGluing> {
        let mut tets: Vec<TetGluing> = (0..tris.len() * 3)
            .map(|i| TetGluing::isolated(TetId(id_of(i / 3, i % 3))))
            .collect();
        let mut set = |t: usize, f: u8, t2: usize, f2: u8, p: Perm4| {
            tets[t].faces[f as usize] = FaceGluing::Glued {
                tet: TetId(id_of(t2 / 3, t2 % 3)),
                face: f2,
                perm: p,
            };
        };
        for (i, _) in tris.iter().enumerate() {
            // Prism interior: T1/T2 along (a0,b0,c1), T2/T3 along (a0,b1,c1).
            set(3 * i, 2, 3 * i + 1, 2, Perm4::IDENTITY);
            set(3 * i + 1, 2, 3 * i, 2, Perm4::IDENTITY);
            set(3 * i + 1, 1, 3 * i + 2, 1, Perm4::IDENTITY);
            set(3 * i + 2, 1, 3 * i + 1, 1, Perm4::IDENTITY);
        }
        tets
    };

    let block_id = |tri: usize, piece: usize| (3 * tri + piece) as i64;
    let mut block = make_tets(&surf.tris, &block_id);
    let mut cap = make_tets(&surf.cap, &|tri, piece| (3 * tri + piece) as i64);
    let mut shifts: Vec<ShiftGluing> = Vec::new();
    let mut joins: Vec<ShiftGluing> = Vec::new();

    // Vertical closure.
    let wrap_perm = Perm4::new([3, 0, 1, 2]).unwrap();
    for i in 0..nb {
        match vertical {
            Vertical::Wrap => {
                block[3 * i + 2].faces[0] = FaceGluing::Glued {
                    tet: TetId(block_id(i, 0)),
                    face: 3,
                    perm: wrap_perm,
                };
                block[3 * i].faces[3] = FaceGluing::Glued {
                    tet: TetId(block_id(i, 2)),
                    face: 0,
                    perm: wrap_perm.inverse(),
                };
            }
            Vertical::Shift => {
                shifts.push(ShiftGluing {
                    from_tet: 3 * i + 2,
                    from_face: 0,
                    to_tet: 3 * i,
                    to_face: 3,
                    perm: wrap_perm,
                });
            }
        }
    }
    for i in 0..surf.cap.len() {
        assert_eq!(vertical, Vertical::Wrap, "cap requires a circle product");
        cap[3 * i + 2].faces[0] = FaceGluing::Glued {
            tet: TetId(block_id(i, 0)),
            face: 3,
            perm: wrap_perm,
        };
        cap[3 * i].faces[3] = FaceGluing::Glued {
            tet: TetId(block_id(i, 2)),
            face: 0,
            perm: wrap_perm.inverse(),
        };
    }

    // Side rectangles.
    let mut glue_rect =
        |tets_from: &mut Vec<TetGluing>,
         from_tri: usize,
         from_side: u8,
         to_cap: bool,
         to_tri: usize,
         to_side: u8,
         target_id: &dyn Fn(usize, usize) -> i64| {
            for (att_from, att_to) in [
                (side_lower(from_side), side_lower(to_side)),
                (side_upper(from_side), side_upper(to_side)),
            ] {
                let p = role_perm(att_from, att_to);
                let _ = to_cap;
                tets_from[3 * from_tri + att_from.0].faces[att_from.1 as usize] =
                    FaceGluing::Glued {
                        tet: TetId(target_id(to_tri, att_to.0)),
                        face: att_to.1,
                        perm: p,
                    };
            }
        };

    for (i, tri) in surf.tris.iter().enumerate() {
        for k in 0..3u8 {
            if let Some(r) = tri.sides[k as usize] {
                if !r.cap {
                    glue_rect(&mut block, i, k, false, r.tri, r.side, &|t, p| block_id(t, p));
                }
                // Sides into the cap are covered by the join gluings below.
            }
        }
    }
    for (i, tri) in surf.cap.iter().enumerate() {
        for k in 0..3u8 {
            if let Some(r) = tri.sides[k as usize] {
                if r.cap {
                    glue_rect(&mut cap, i, k, true, r.tri, r.side, &|t, p| block_id(t, p));
                } else {
                    for (att_from, att_to) in [
                        (side_lower(k), side_lower(r.side)),
                        (side_upper(k), side_upper(r.side)),
                    ] {
                        joins.push(ShiftGluing {
                            from_tet: 3 * i + att_from.0,
                            from_face: att_from.1,
                            to_tet: 3 * r.tri + att_to.0,
                            to_face: att_to.1,
                            perm: role_perm(att_from, att_to),
                        });
                    }
                }
            }
        }
    }
    for &(t, k, t2, k2) in &surf.cross {
        for (att_from, att_to) in [
            (side_lower(k), side_lower(k2)),
            (side_upper(k), side_upper(k2)),
        ] {
            shifts.push(ShiftGluing {
                from_tet: 3 * t + att_from.0,
                from_face: att_from.1,
                to_tet: 3 * t2 + att_to.0,
                to_face: att_to.1,
                perm: role_perm(att_from, att_to),
            });
        }
    }

    let mode = if surf.cap.is_empty() { PeriodicMode::Line } else { PeriodicMode::Ray };
    let gen = PeriodicGenerator { mode, bound, block, shifts, cap, joins };
    ProductComplex { gen, surf, vertical }
}

// ---------------------------------------------------------------------------
// Grid bases.
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    W,
    S,
    E,
    N,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GridX {
    /// The right edge of the last column wraps to the left edge of column 0.
    Cyclic,
    /// The right edge continues into the next copy (periodic direction).
    Cross,
    /// Column 0's left edge is closed by a cone cap (ray mode).
    CappedRay,
}

/// A grid of unit cells, y-cyclic, with an optional handle hole: the hole
/// cell is removed and its opposite boundary edges are identified.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub cols: usize,
    pub rows: usize,
    pub hole: Option<(usize, usize)>,
    pub x_mode: GridX,
}

#[derive(Clone, Debug)]
pub struct GridSurf {
    pub spec: GridSpec,
    pub surf: Surf2,
    cell_tri: HashMap<(usize, usize), usize>,
}

impl GridSurf {
    /// Lower triangle index of a cell (upper is +1).
    pub fn lower(&self, x: usize, y: usize) -> usize {
        self.cell_tri[&(x, y)]
    }

    pub fn upper(&self, x: usize, y: usize) -> usize {
        self.cell_tri[&(x, y)] + 1
    }

    /// The (triangle, side) carrying the given side of a cell.
    pub fn cell_side(&self, x: usize, y: usize, d: Dir) -> (usize, u8) {
        match d {
            Dir::W => (self.upper(x, y), 2),
            Dir::E => (self.lower(x, y), 0),
            Dir::S => (self.lower(x, y), 2),
            Dir::N => (self.upper(x, y), 0),
        }
    }
}

pub fn grid_surface(spec: GridSpec) -> GridSurf {
    let mut tris: Vec<Tri2> = Vec::new();
    let mut cell_tri = HashMap::new();
    for x in 0..spec.cols {
        for y in 0..spec.rows {
            if spec.hole == Some((x, y)) {
                continue;
            }
            cell_tri.insert((x, y), tris.len());
            tris.push(Tri2::default());
            tris.push(Tri2::default());
        }
    }
    let mut surf = Surf2 { tris, cap: Vec::new(), cross: Vec::new() };
    let lower = |x: usize, y: usize| cell_tri[&(x, y)];
    let upper = |x: usize, y: usize| cell_tri[&(x, y)] + 1;
    let mut join = |surf: &mut Surf2, a: (usize, u8), b: (usize, u8)| {
        surf.tris[a.0].sides[a.1 as usize] = Some(SideRef { cap: false, tri: b.0, side: b.1 });
        surf.tris[b.0].sides[b.1 as usize] = Some(SideRef { cap: false, tri: a.0, side: a.1 });
    };

    let mut cells: Vec<(usize, usize)> = cell_tri.keys().copied().collect();
    cells.sort_unstable();
    for (x, y) in cells {
        // Diagonal between the two halves.
        join(&mut surf, (lower(x, y), 1), (upper(x, y), 1));
        // East neighbor (or hole teleport, wrap, cross pair).
        let east: Option<(usize, usize)> = if spec.hole == Some((x + 1, y)) {
            Some((x + 2, y))
        } else if x + 1 < spec.cols {
            Some((x + 1, y))
        } else {
            None
        };
        match east {
            Some((nx, ny)) if cell_tri.contains_key(&(nx, ny)) => {
                join(&mut surf, (lower(x, y), 0), (upper(nx, ny), 2));
            }
            _ => match spec.x_mode {
                GridX::Cyclic if x == spec.cols - 1 => {
                    join(&mut surf, (lower(x, y), 0), (upper(0, y), 2));
                }
                GridX::Cross | GridX::CappedRay if x == spec.cols - 1 => {
                    surf.cross.push((lower(x, y), 0, upper(0, y), 2));
                }
                _ => {}
            },
        }
        // North neighbor (y always cyclic; hole teleport jumps a row).
        let ny = (y + 1) % spec.rows;
        let north: (usize, usize) = if spec.hole == Some((x, ny)) {
            (x, (y + 2) % spec.rows)
        } else {
            (x, ny)
        };
        if cell_tri.contains_key(&north) {
            join(&mut surf, (upper(x, y), 0), (lower(north.0, north.1), 2));
        }
    }

    if spec.x_mode == GridX::CappedRay {
        // Cone cap on the column-0 circle: one cap triangle per row, spokes
        // directed inward to the cone point.
        let rows = spec.rows;
        for r in 0..rows {
            surf.cap.push(Tri2::default());
            let w_side = (upper(0, r), 2u8);
            surf.cap[r].sides[2] = Some(SideRef { cap: false, tri: w_side.0, side: w_side.1 });
            surf.tris[w_side.0].sides[w_side.1 as usize] =
                Some(SideRef { cap: true, tri: r, side: 2 });
        }
        for r in 0..rows {
            let next = (r + 1) % rows;
            surf.cap[r].sides[0] = Some(SideRef { cap: true, tri: next, side: 1 });
            surf.cap[next].sides[1] = Some(SideRef { cap: true, tri: r, side: 0 });
        }
    }

    GridSurf { spec, surf, cell_tri }
}

/// A grid path step: one cell crossed between two of its sides.
#[derive(Copy, Clone, Debug)]
pub struct GridStep {
    pub copy: i64,
    pub x: usize,
    pub y: usize,
    pub enter: Dir,
    pub exit: Dir,
}

/// Routes a grid path into base arcs (one or two per cell).
pub fn route(grid: &GridSurf, steps: &[GridStep]) -> Vec<BaseArc> {
    let mut arcs = Vec::new();
    for s in steps {
        let lower = grid.lower(s.x, s.y);
        let upper = grid.upper(s.x, s.y);
        let arc = |cap_tri: usize, entry: u8, exit: u8| BaseArc {
            cap: false,
            copy: s.copy,
            tri: cap_tri,
            entry_side: entry,
            exit_side: exit,
        };
        match (s.enter, s.exit) {
            (Dir::W, Dir::E) => {
                arcs.push(arc(upper, 2, 1));
                arcs.push(arc(lower, 1, 0));
            }
            (Dir::E, Dir::W) => {
                arcs.push(arc(lower, 0, 1));
                arcs.push(arc(upper, 1, 2));
            }
            (Dir::S, Dir::N) => {
                arcs.push(arc(lower, 2, 1));
                arcs.push(arc(upper, 1, 0));
            }
            (Dir::N, Dir::S) => {
                arcs.push(arc(upper, 0, 1));
                arcs.push(arc(lower, 1, 2));
            }
            (Dir::W, Dir::N) => arcs.push(arc(upper, 2, 0)),
            (Dir::N, Dir::W) => arcs.push(arc(upper, 0, 2)),
            (Dir::S, Dir::E) => arcs.push(arc(lower, 2, 0)),
            (Dir::E, Dir::S) => arcs.push(arc(lower, 0, 2)),
            (Dir::W, Dir::S) => {
                arcs.push(arc(upper, 2, 1));
                arcs.push(arc(lower, 1, 2));
            }
            (Dir::S, Dir::W) => {
                arcs.push(arc(lower, 2, 1));
                arcs.push(arc(upper, 1, 2));
            }
            (Dir::E, Dir::N) => {
                arcs.push(arc(lower, 0, 1));
                arcs.push(arc(upper, 1, 0));
            }
            (Dir::N, Dir::E) => {
                arcs.push(arc(upper, 0, 1));
                arcs.push(arc(lower, 1, 0));
            }
            (a, b) => panic!("degenerate step {a:?}->{b:?}"),
        }
    }
    arcs
}

/// Crossing count of two grid paths: cells shared with interleaved side
/// pairs in the cyclic side order W, S, E, N. Panics if the paths share a
/// side anywhere (fixtures are designed clean).
pub fn grid_crossings(a: &[GridStep], b: &[GridStep]) -> usize {
    let rank = |d: Dir| match d {
        Dir::W => 0u8,
        Dir::S => 1,
        Dir::E => 2,
        Dir::N => 3,
    };
    let mut count = 0;
    for sa in a {
        for sb in b {
            if (sa.copy, sa.x, sa.y) != (sb.copy, sb.x, sb.y) {
                continue;
            }
            let (a1, a2) = (rank(sa.enter), rank(sa.exit));
            let (b1, b2) = (rank(sb.enter), rank(sb.exit));
            for x in [b1, b2] {
                assert!(x != a1 && x != a2, "paths share a cell side");
            }
            let between = |x: u8| -> bool {
                if a1 < a2 {
                    a1 < x && x < a2
                } else {
                    x > a1 || x < a2
                }
            };
            if between(b1) != between(b2) {
                count += 1;
            }
        }
    }
    count
}

// ---------------------------------------------------------------------------
// Named fixtures.
// ---------------------------------------------------------------------------

/// The torus-cross-line complex: 2-triangle torus base, level direction
/// periodic. Six tets per block; level tori have weight 4.
pub fn t2xr() -> ProductComplex {
    let grid = grid_surface(GridSpec { cols: 1, rows: 1, hole: None, x_mode: GridX::Cyclic });
    lift(grid.surf, Vertical::Shift, 60)
}

/// The three-torus: 3x3 torus grid base times a circle; 54 tets, closed.
pub fn t3() -> (ProductComplex, GridSurf) {
    let grid = grid_surface(GridSpec { cols: 3, rows: 3, hole: None, x_mode: GridX::Cyclic });
    let p = lift(grid.surf.clone(), Vertical::Wrap, 80);
    (p, grid)
}

/// Circle times an infinite cylinder (two rows, x periodic): the
/// translated-tori / staple-curve fixture. Twelve tets per block.
pub fn cylprod() -> (ProductComplex, GridSurf) {
    let grid = grid_surface(GridSpec { cols: 1, rows: 2, hole: None, x_mode: GridX::Cross });
    let p = lift(grid.surf.clone(), Vertical::Wrap, 80);
    (p, grid)
}

/// Circle times the infinite-genus ladder: one handle per period (3x3 grid
/// with a plumbed hole), x periodic, capped at the ray end. The motivating
/// splitting runs along the circle times a line around the row-0 corridor.
pub fn ladder() -> (ProductComplex, GridSurf) {
    let grid = grid_surface(GridSpec {
        cols: 3,
        rows: 3,
        hole: Some((1, 1)),
        x_mode: GridX::CappedRay,
    });
    let p = lift(grid.surf.clone(), Vertical::Wrap, 120);
    (p, grid)
}

/// Around-the-handle curve at period `copy`: through the hole's vertical
/// identification.
pub fn handle_h(copy: i64) -> Vec<GridStep> {
    vec![
        GridStep { copy, x: 1, y: 0, enter: Dir::S, exit: Dir::N },
        GridStep { copy, x: 1, y: 2, enter: Dir::S, exit: Dir::N },
    ]
}

/// Partner curve through the hole's horizontal identification, returning
/// around the top of the handle.
pub fn handle_v(copy: i64) -> Vec<GridStep> {
    vec![
        GridStep { copy, x: 0, y: 1, enter: Dir::N, exit: Dir::E },
        GridStep { copy, x: 2, y: 1, enter: Dir::W, exit: Dir::N },
        GridStep { copy, x: 2, y: 2, enter: Dir::S, exit: Dir::W },
        GridStep { copy, x: 1, y: 2, enter: Dir::E, exit: Dir::W },
        GridStep { copy, x: 0, y: 2, enter: Dir::E, exit: Dir::S },
    ]
}

/// Ring around the hole: crosses `handle_h` twice cleanly.
pub fn hole_ring(copy: i64) -> Vec<GridStep> {
    vec![
        GridStep { copy, x: 0, y: 0, enter: Dir::N, exit: Dir::E },
        GridStep { copy, x: 1, y: 0, enter: Dir::W, exit: Dir::E },
        GridStep { copy, x: 2, y: 0, enter: Dir::W, exit: Dir::N },
        GridStep { copy, x: 2, y: 1, enter: Dir::S, exit: Dir::N },
        GridStep { copy, x: 2, y: 2, enter: Dir::S, exit: Dir::W },
        GridStep { copy, x: 1, y: 2, enter: Dir::E, exit: Dir::W },
        GridStep { copy, x: 0, y: 2, enter: Dir::E, exit: Dir::S },
        GridStep { copy, x: 0, y: 1, enter: Dir::N, exit: Dir::S },
    ]
}

/// Staple curve on the cylinder base, spanning copies 0..=n: out along row
/// 0, turn, back along row 1.
pub fn staple(n: i64) -> Vec<GridStep> {
    assert!(n >= 1);
    let mut steps = vec![GridStep { copy: 0, x: 0, y: 0, enter: Dir::N, exit: Dir::E }];
    for c in 1..n {
        steps.push(GridStep { copy: c, x: 0, y: 0, enter: Dir::W, exit: Dir::E });
    }
    steps.push(GridStep { copy: n, x: 0, y: 0, enter: Dir::W, exit: Dir::N });
    steps.push(GridStep { copy: n, x: 0, y: 1, enter: Dir::S, exit: Dir::W });
    for c in (1..n).rev() {
        steps.push(GridStep { copy: c, x: 0, y: 1, enter: Dir::E, exit: Dir::W });
    }
    steps.push(GridStep { copy: 0, x: 0, y: 1, enter: Dir::E, exit: Dir::S });
    steps
}

/// One lone tetrahedron.
pub fn one_tet() -> TriangulationWindow {
    build_complex(vec![TetGluing::isolated(TetId(0))]).unwrap()
}

/// The doubled 3-simplex: two tets glued along all faces by the identity.
pub fn doubled_simplex() -> TriangulationWindow {
    let glue = |t: i64| {
        [0u8, 1, 2, 3].map(|f| FaceGluing::Glued {
            tet: TetId(t),
            face: f,
            perm: Perm4::IDENTITY,
        })
    };
    build_complex(vec![
        TetGluing { id: TetId(0), faces: glue(1) },
        TetGluing { id: TetId(1), faces: glue(0) },
    ])
    .unwrap()
}

/// A closed orientable two-tet complex with a single vertex, found by a
/// deterministic search over cross pairings: the standard small gluing
/// table for the 3-sphere family. The search accepts the first candidate
/// whose vertex links are all spheres.
pub fn two_tet_one_vertex() -> TriangulationWindow {
    static CACHE: std::sync::OnceLock<Vec<TetGluing>> = std::sync::OnceLock::new();
    let tets = CACHE.get_or_init(|| {
        let all = Perm4::all();
        for pairing in &all {
            // Per-face gluing permutations must carry f to pairing(f).
            let candidates: Vec<Vec<Perm4>> = (0..4u8)
                .map(|f| {
                    all.iter()
                        .copied()
                        .filter(|p| p.apply(f) == pairing.apply(f))
                        .collect()
                })
                .collect();
            for &p0 in &candidates[0] {
                for &p1 in &candidates[1] {
                    for &p2 in &candidates[2] {
                        'cand: for &p3 in &candidates[3] {
                            let perms = [p0, p1, p2, p3];
                            let mut t0 = TetGluing::isolated(TetId(0));
                            let mut t1 = TetGluing::isolated(TetId(1));
                            for f in 0..4u8 {
                                let tf = pairing.apply(f);
                                t0.faces[f as usize] = FaceGluing::Glued {
                                    tet: TetId(1),
                                    face: tf,
                                    perm: perms[f as usize],
                                };
                                t1.faces[tf as usize] = FaceGluing::Glued {
                                    tet: TetId(0),
                                    face: f,
                                    perm: perms[f as usize].inverse(),
                                };
                            }
                            let Ok(w) = build_complex(vec![t0.clone(), t1.clone()]) else {
                                continue;
                            };
                            if !w.orientable() || w.vertex_class_count() != 1 {
                                continue;
                            }
                            // Manifold check: every vertex link is a sphere.
                            let mut link = NormalCoordinates::zero(&w);
                            for t in &mut link.tets {
                                t.tri = [1, 1, 1, 1];
                            }
                            if link.validate(&w).is_err() {
                                continue;
                            }
                            let Ok(r) = realize_surface(&w, &link, 0.0) else {
                                continue;
                            };
                            for comp in analyze_surface(&r).components {
                                if comp.kind != SurfaceKind::Sphere {
                                    continue 'cand;
                                }
                            }
                            return vec![t0, t1];
                        }
                    }
                }
            }
        }
        panic!("no two-tet one-vertex closed orientable complex found");
    });
    build_complex(tets.clone()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t2xr_block_is_six_tets() {
        let p = t2xr();
        assert_eq!(p.gen.block_len(), 6);
        let w = p.window(0, 2);
        assert!(w.orientable());
        let audit = w.geometry_audit();
        assert_eq!(audit.tet_count, 18);
    }

    #[test]
    fn t3_is_closed_orientable() {
        let (p, _) = t3();
        let w = p.window(0, 0);
        let audit = w.geometry_audit();
        assert_eq!(audit.tet_count, 54);
        assert_eq!(audit.boundary_face_count, 0);
        assert!(audit.orientable);
    }

    #[test]
    fn level_torus_is_a_torus() {
        let p = t2xr();
        let w = p.window(0, 2);
        let level = p.level_surface(&w, 1);
        let s = realize_surface(&w, &level, 0.0).unwrap();
        let rep = analyze_surface(&s);
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.components[0].kind, SurfaceKind::Torus);
        assert_eq!(level.weight(&w), 4);
    }

    #[test]
    fn lifted_axis_curves_are_tori() {
        let (p, grid) = t3();
        let w = p.window(0, 0);
        // Row loop at y=0 and column loop at x=1.
        let row: Vec<GridStep> = (0..3)
            .map(|x| GridStep { copy: 0, x, y: 0, enter: Dir::W, exit: Dir::E })
            .collect();
        let col: Vec<GridStep> = (0..3)
            .map(|y| GridStep { copy: 0, x: 1, y, enter: Dir::S, exit: Dir::N })
            .collect();
        for steps in [row.clone(), col.clone()] {
            let coords = p.lift_curve(&w, &route(&grid, &steps));
            let s = realize_surface(&w, &coords, 0.0).unwrap();
            let rep = analyze_surface(&s);
            assert_eq!(rep.components.len(), 1, "{steps:?}");
            assert_eq!(rep.components[0].kind, SurfaceKind::Torus);
        }
        assert_eq!(grid_crossings(&row, &col), 1);
    }

    #[test]
    fn ladder_handle_curves_cross_once() {
        let (p, grid) = ladder();
        let w = p.window(0, 1);
        assert!(w.orientable());
        let h = handle_h(0);
        let v = handle_v(0);
        assert_eq!(grid_crossings(&h, &v), 1);
        assert_eq!(grid_crossings(&h, &hole_ring(0)), 2);
        for steps in [h, v, hole_ring(0)] {
            let coords = p.lift_curve(&w, &route(&grid, &steps));
            let s = realize_surface(&w, &coords, 0.0).unwrap();
            let rep = analyze_surface(&s);
            assert_eq!(rep.components.len(), 1);
            assert_eq!(rep.components[0].kind, SurfaceKind::Torus);
        }
    }

    #[test]
    fn staple_lifts_to_torus() {
        let (p, grid) = cylprod();
        let w = p.window(-1, 5);
        let coords = p.lift_curve(&w, &route(&grid, &staple(3)));
        let s = realize_surface(&w, &coords, 0.0).unwrap();
        let rep = analyze_surface(&s);
        assert_eq!(rep.components.len(), 1);
        assert_eq!(rep.components[0].kind, SurfaceKind::Torus);
    }

    #[test]
    fn two_tet_search_finds_sphere_complex() {
        let w = two_tet_one_vertex();
        let audit = w.geometry_audit();
        assert_eq!(audit.tet_count, 2);
        assert_eq!(audit.vertex_count, 1);
        assert_eq!(audit.boundary_face_count, 0);
        assert!(audit.orientable);
        assert_eq!(audit.max_vertex_degree, 2);
    }
}
