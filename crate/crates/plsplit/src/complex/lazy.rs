//! Deterministic generators for open complexes, and finite windows of them.
//!
//! A periodic generator repeats a finite block of tetrahedra along a line
//! (copies indexed by all integers) or a ray (copies 0,1,2,...; a ray may
//! carry a finite cap complex glued to copy 0). Global tet ids are
//! `copy * block_len + local`; cap tets use `-(local + 1)`.
//!
//! Generator spec text (`.gen`):
//!
//! ```text
//! periodic
//! mode = line
//! bound = 40
//! block = 6
//! tet 0: ...            # block-internal gluings, local ids
//! shift = 0.2 -> 3.1 / 0123   # copy n face -> copy n+1 face
//! cap = 2               # ray mode only
//! cap tet 0: ...        # cap-internal gluings, local cap ids
//! join = 0.1 -> 1.3 / 0123    # cap tet face -> copy-0 local tet face
//! ```

use std::collections::BTreeSet;

use thiserror::Error;

use crate::perm::Perm4;

use super::dist::{tet_intersection_graph, tets_containing, CellRef};
use super::parse::{parse_tet_line, ParseError};
use super::{build_complex, ComplexError, FaceGluing, TetGluing, TetId, TriangulationWindow};

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftGluing {
    pub from_tet: usize,
    pub from_face: u8,
    pub to_tet: usize,
    pub to_face: u8,
    pub perm: Perm4,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PeriodicMode {
    Line,
    Ray,
}

/// A deterministic periodic expansion rule.
#[derive(Clone, Debug)]
pub struct PeriodicGenerator {
    pub mode: PeriodicMode,
    /// Declared bounded-geometry constant (max simplices at a vertex).
    pub bound: usize,
    pub block: Vec<TetGluing>,
    pub shifts: Vec<ShiftGluing>,
    pub cap: Vec<TetGluing>,
    pub joins: Vec<ShiftGluing>,
}

#[derive(Debug, Error)]
pub enum LazyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("generator spec: {0}")]
    Spec(String),
    #[error("center tet {0} not in the expanded window")]
    UnknownCenter(TetId),
    #[error("generator cannot fill frontier face of tet {0}")]
    GeneratorExhausted(TetId),
}

impl PeriodicGenerator {
    pub fn block_len(&self) -> usize {
        self.block.len()
    }

    pub fn global_id(&self, copy: i64, local: usize) -> TetId {
        TetId(copy * self.block_len() as i64 + local as i64)
    }

    pub fn cap_id(&self, local: usize) -> TetId {
        TetId(-(local as i64) - 1)
    }

    /// Splits a global id back into (copy, local), or a cap local id.
    pub fn locate(&self, id: TetId) -> Location {
        if id.0 < 0 {
            Location::Cap((-id.0 - 1) as usize)
        } else {
            let b = self.block_len() as i64;
            Location::Block(id.0.div_euclid(b), id.0.rem_euclid(b) as usize)
        }
    }

    /// Materializes copies `lo..=hi` (cap included when a ray starts at 0).
    /// Gluings pointing outside the range become Boundary.
    pub fn materialize(&self, lo: i64, hi: i64) -> Result<Vec<TetGluing>, LazyError> {
        let (lo, hi) = match self.mode {
            PeriodicMode::Line => (lo, hi),
            PeriodicMode::Ray => (lo.max(0), hi),
        };
        if lo > hi {
            return Err(LazyError::Spec("empty copy range".into()));
        }
        let include_cap = self.mode == PeriodicMode::Ray && lo == 0 && !self.cap.is_empty();
        let mut out: Vec<TetGluing> = Vec::new();
        let in_range = |copy: i64| copy >= lo && copy <= hi;

        for copy in lo..=hi {
            for (local, t) in self.block.iter().enumerate() {
                let mut faces = [FaceGluing::Boundary; 4];
                for f in 0..4usize {
                    if let FaceGluing::Glued { tet, face, perm } = t.faces[f] {
                        faces[f] = FaceGluing::Glued {
                            tet: self.global_id(copy, tet.0 as usize),
                            face,
                            perm,
                        };
                    }
                }
                // Shift gluings to copy+1 / from copy-1.
                for s in &self.shifts {
                    if s.from_tet == local && in_range(copy + 1) {
                        occupy(&mut faces, s.from_face, self.global_id(copy, local))?;
                        faces[s.from_face as usize] = FaceGluing::Glued {
                            tet: self.global_id(copy + 1, s.to_tet),
                            face: s.to_face,
                            perm: s.perm,
                        };
                    }
                    if s.to_tet == local && in_range(copy - 1) {
                        occupy(&mut faces, s.to_face, self.global_id(copy, local))?;
                        faces[s.to_face as usize] = FaceGluing::Glued {
                            tet: self.global_id(copy - 1, s.from_tet),
                            face: s.from_face,
                            perm: s.perm.inverse(),
                        };
                    }
                }
                // Join gluings from the cap into copy 0.
                if copy == 0 && include_cap {
                    for j in &self.joins {
                        if j.to_tet == local {
                            occupy(&mut faces, j.to_face, self.global_id(copy, local))?;
                            faces[j.to_face as usize] = FaceGluing::Glued {
                                tet: self.cap_id(j.from_tet),
                                face: j.from_face,
                                perm: j.perm.inverse(),
                            };
                        }
                    }
                }
                out.push(TetGluing { id: self.global_id(copy, local), faces });
            }
        }
        if include_cap {
            for (local, t) in self.cap.iter().enumerate() {
                let mut faces = [FaceGluing::Boundary; 4];
                for f in 0..4usize {
                    if let FaceGluing::Glued { tet, face, perm } = t.faces[f] {
                        faces[f] = FaceGluing::Glued {
                            tet: self.cap_id(tet.0 as usize),
                            face,
                            perm,
                        };
                    }
                }
                for j in &self.joins {
                    if j.from_tet == local {
                        occupy(&mut faces, j.from_face, self.cap_id(local))?;
                        faces[j.from_face as usize] = FaceGluing::Glued {
                            tet: self.global_id(0, j.to_tet),
                            face: j.to_face,
                            perm: j.perm,
                        };
                    }
                }
                out.push(TetGluing { id: self.cap_id(local), faces });
            }
        }
        Ok(out)
    }

    pub fn window(&self, lo: i64, hi: i64) -> Result<TriangulationWindow, LazyError> {
        Ok(build_complex(self.materialize(lo, hi)?)?)
    }

    /// Faces of a window that the generator could still fill: shift faces at
    /// the ends of the materialized range.
    pub fn frontier_faces(&self, lo: i64, hi: i64) -> Vec<(TetId, u8)> {
        let mut out = Vec::new();
        let low_open = match self.mode {
            PeriodicMode::Line => true,
            PeriodicMode::Ray => lo > 0,
        };
        for s in &self.shifts {
            out.push((self.global_id(hi, s.from_tet), s.from_face));
            if low_open {
                out.push((self.global_id(lo, s.to_tet), s.to_face));
            }
        }
        out
    }
}

fn occupy(faces: &mut [FaceGluing; 4], f: u8, id: TetId) -> Result<(), LazyError> {
    if !matches!(faces[f as usize], FaceGluing::Boundary) {
        return Err(LazyError::Spec(format!(
            "tet {id} face {f}: shift/join gluing collides with an internal gluing"
        )));
    }
    Ok(())
}

/// A lazily expanded complex: the rule plus the materialized window.
#[derive(Clone, Debug)]
pub struct LazyComplex {
    gen: PeriodicGenerator,
    copy_lo: i64,
    copy_hi: i64,
    expanded: TriangulationWindow,
}

impl LazyComplex {
    /// Seed state: copy 0 only (plus cap on a ray).
    pub fn seed(gen: PeriodicGenerator) -> Result<LazyComplex, LazyError> {
        let expanded = gen.window(0, 0)?;
        Ok(LazyComplex { gen, copy_lo: 0, copy_hi: 0, expanded })
    }

    pub fn generator(&self) -> &PeriodicGenerator {
        &self.gen
    }

    pub fn window(&self) -> &TriangulationWindow {
        &self.expanded
    }

    pub fn copy_range(&self) -> (i64, i64) {
        (self.copy_lo, self.copy_hi)
    }

    /// Materializes a fixed copy range (monotone: the held window only grows).
    pub fn ensure_copies(&mut self, lo: i64, hi: i64) -> Result<&TriangulationWindow, LazyError> {
        let lo = match self.gen.mode {
            PeriodicMode::Line => lo.min(self.copy_lo),
            PeriodicMode::Ray => lo.max(0).min(self.copy_lo),
        };
        let hi = hi.max(self.copy_hi);
        if lo != self.copy_lo || hi != self.copy_hi {
            self.expanded = self.gen.window(lo, hi)?;
            self.copy_lo = lo;
            self.copy_hi = hi;
        }
        Ok(&self.expanded)
    }

    /// Expands until the window contains every tet whose quasimetric distance
    /// from the center tet is at most `radius`, then returns exactly that
    /// ball as a window. Idempotent for a fixed radius.
    pub fn expand_window(
        &mut self,
        center: TetId,
        radius: usize,
    ) -> Result<TriangulationWindow, LazyError> {
        if !self.expanded.contains(center) {
            return Err(LazyError::UnknownCenter(center));
        }
        let center_copy = match self.gen.locate(center) {
            Location::Block(c, _) => c,
            Location::Cap(_) => 0,
        };
        // Copies are separating: a chain leaving the materialized range must
        // pass an extreme copy. Grow until extreme copies sit beyond the
        // radius; the declared bound caps how many copies a vertex class can
        // span, so this terminates.
        let mut pad = radius as i64 + 2;
        let max_pad = (radius as i64 + 2) * (self.gen.bound.max(4) as i64);
        let ball = loop {
            self.ensure_copies(center_copy - pad, center_copy + pad)?;
            let w = &self.expanded;
            let adj = tet_intersection_graph(w);
            let sources = tets_containing(w, CellRef::Tet(center));
            let mut dist = vec![usize::MAX; w.tet_count()];
            let mut queue = std::collections::VecDeque::new();
            for &s in &sources {
                dist[s] = 0;
                queue.push_back(s);
            }
            while let Some(v) = queue.pop_front() {
                for &u in &adj[v] {
                    if dist[u] == usize::MAX {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                    }
                }
            }
            let (lo, hi) = (self.copy_lo, self.copy_hi);
            let low_open = self.gen.mode == PeriodicMode::Line;
            let extreme_reached = (0..w.tet_count()).any(|ti| {
                dist[ti] <= radius
                    && matches!(self.gen.locate(w.tet_id(ti)),
                        Location::Block(c, _) if c == hi || (low_open && c == lo))
            });
            if !extreme_reached {
                let ball: BTreeSet<TetId> = (0..w.tet_count())
                    .filter(|&ti| dist[ti] <= radius)
                    .map(|ti| w.tet_id(ti))
                    .collect();
                break ball;
            }
            if pad >= max_pad {
                return Err(LazyError::GeneratorExhausted(center));
            }
            pad *= 2;
        };
        let w = &self.expanded;
        let tets: Vec<TetGluing> = w
            .tets()
            .iter()
            .filter(|t| ball.contains(&t.id))
            .map(|t| restrict_to(t, &ball))
            .collect();
        Ok(build_complex(tets)?)
    }
}

fn restrict_to(t: &TetGluing, keep: &BTreeSet<TetId>) -> TetGluing {
    let mut faces = [FaceGluing::Boundary; 4];
    for f in 0..4usize {
        if let FaceGluing::Glued { tet, face, perm } = t.faces[f] {
            if keep.contains(&tet) {
                faces[f] = FaceGluing::Glued { tet, face, perm };
            }
        }
    }
    TetGluing { id: t.id, faces }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Block(i64, usize),
    Cap(usize),
}

fn parse_arrow(line_no: usize, rhs: &str) -> Result<ShiftGluing, LazyError> {
    // "0.2 -> 3.1 / 0123"
    let err = |msg: &str| LazyError::Spec(format!("line {line_no}: {msg}"));
    let (from, rest) = rhs.split_once("->").ok_or_else(|| err("expected `->`"))?;
    let (to, perm_str) = rest.split_once('/').ok_or_else(|| err("expected `/perm`"))?;
    let parse_pair = |s: &str| -> Result<(usize, u8), LazyError> {
        let (t, f) = s
            .trim()
            .split_once('.')
            .ok_or_else(|| err("expected `tet.face`"))?;
        Ok((
            t.trim().parse().map_err(|_| err("bad tet index"))?,
            f.trim().parse().map_err(|_| err("bad face index"))?,
        ))
    };
    let (from_tet, from_face) = parse_pair(from)?;
    let (to_tet, to_face) = parse_pair(to)?;
    let perm = Perm4::parse(perm_str.trim())
        .ok_or_else(|| err("bad permutation"))?;
    if perm.apply(from_face) != to_face {
        return Err(err("permutation does not carry the face to the partner face"));
    }
    Ok(ShiftGluing { from_tet, from_face, to_tet, to_face, perm })
}

/// Parses a `.gen` periodic generator spec.
pub fn parse_gen(text: &str) -> Result<PeriodicGenerator, LazyError> {
    let mut mode = PeriodicMode::Line;
    let mut bound: usize = 0;
    let mut block_len: Option<usize> = None;
    let mut cap_len: usize = 0;
    let mut block: Vec<Option<TetGluing>> = Vec::new();
    let mut cap: Vec<Option<TetGluing>> = Vec::new();
    let mut shifts = Vec::new();
    let mut joins = Vec::new();
    let mut saw_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if !saw_header {
            if s != "periodic" {
                return Err(LazyError::Spec(format!(
                    "line {line_no}: expected `periodic` header"
                )));
            }
            saw_header = true;
            continue;
        }
        if let Some(rest) = s.strip_prefix("mode") {
            let v = rest.trim_start().strip_prefix('=').map(str::trim);
            mode = match v {
                Some("line") => PeriodicMode::Line,
                Some("ray") => PeriodicMode::Ray,
                _ => return Err(LazyError::Spec(format!("line {line_no}: bad mode"))),
            };
        } else if let Some(rest) = s.strip_prefix("bound") {
            bound = kv_usize(rest, line_no)?;
        } else if let Some(rest) = s.strip_prefix("block") {
            let n = kv_usize(rest, line_no)?;
            block_len = Some(n);
            block = vec![None; n];
        } else if let Some(rest) = s.strip_prefix("cap tet") {
            let t = parse_tet_line(&format!("tet{rest}"), line_no)?;
            let idx = t.id.0 as usize;
            if idx >= cap_len {
                return Err(LazyError::Spec(format!(
                    "line {line_no}: cap tet {idx} out of range"
                )));
            }
            cap[idx] = Some(t);
        } else if let Some(rest) = s.strip_prefix("cap") {
            cap_len = kv_usize(rest, line_no)?;
            cap = vec![None; cap_len];
        } else if s.starts_with("tet") {
            let t = parse_tet_line(s, line_no)?;
            let idx = t.id.0 as usize;
            let n = block_len.ok_or_else(|| {
                LazyError::Spec(format!("line {line_no}: `block = <n>` must precede tets"))
            })?;
            if idx >= n {
                return Err(LazyError::Spec(format!(
                    "line {line_no}: block tet {idx} out of range"
                )));
            }
            block[idx] = Some(t);
        } else if let Some(rest) = s.strip_prefix("shift") {
            let rhs = rest
                .trim_start()
                .strip_prefix('=')
                .ok_or_else(|| LazyError::Spec(format!("line {line_no}: expected `=`")))?;
            shifts.push(parse_arrow(line_no, rhs)?);
        } else if let Some(rest) = s.strip_prefix("join") {
            let rhs = rest
                .trim_start()
                .strip_prefix('=')
                .ok_or_else(|| LazyError::Spec(format!("line {line_no}: expected `=`")))?;
            joins.push(parse_arrow(line_no, rhs)?);
        } else {
            return Err(LazyError::Spec(format!("line {line_no}: unrecognized `{s}`")));
        }
    }
    if !saw_header {
        return Err(LazyError::Spec("missing `periodic` header".into()));
    }
    let block: Vec<TetGluing> = block
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| LazyError::Spec(format!("block tet {i} missing"))))
        .collect::<Result<_, _>>()?;
    let cap: Vec<TetGluing> = cap
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| LazyError::Spec(format!("cap tet {i} missing"))))
        .collect::<Result<_, _>>()?;
    if block.is_empty() {
        return Err(LazyError::Spec("empty block".into()));
    }
    if mode == PeriodicMode::Line && !cap.is_empty() {
        return Err(LazyError::Spec("cap requires ray mode".into()));
    }
    let gen = PeriodicGenerator { mode, bound, block, shifts, cap, joins };
    // Validate by materializing a few copies.
    gen.window(0, 2).map_err(|e| match e {
        LazyError::Complex(c) => LazyError::Spec(format!("invalid generator: {c}")),
        other => other,
    })?;
    Ok(gen)
}

fn kv_usize(rest: &str, line_no: usize) -> Result<usize, LazyError> {
    rest.trim_start()
        .strip_prefix('=')
        .map(str::trim)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| LazyError::Spec(format!("line {line_no}: expected `= <n>`")))
}

pub fn emit_gen(gen: &PeriodicGenerator) -> String {
    let mut out = String::from("periodic\n");
    out.push_str(&format!(
        "mode = {}\n",
        match gen.mode {
            PeriodicMode::Line => "line",
            PeriodicMode::Ray => "ray",
        }
    ));
    out.push_str(&format!("bound = {}\n", gen.bound));
    out.push_str(&format!("block = {}\n", gen.block.len()));
    for t in &gen.block {
        out.push_str(&super::parse::emit_tet_line(t));
        out.push('\n');
    }
    for s in &gen.shifts {
        out.push_str(&format!(
            "shift = {}.{} -> {}.{} / {}\n",
            s.from_tet, s.from_face, s.to_tet, s.to_face, s.perm
        ));
    }
    if !gen.cap.is_empty() {
        out.push_str(&format!("cap = {}\n", gen.cap.len()));
        for t in &gen.cap {
            out.push_str("cap ");
            out.push_str(&super::parse::emit_tet_line(t));
            out.push('\n');
        }
        for j in &gen.joins {
            out.push_str(&format!(
                "join = {}.{} -> {}.{} / {}\n",
                j.from_tet, j.from_face, j.to_tet, j.to_face, j.perm
            ));
        }
    }
    out
}
