//! Text format for finite complexes (`.tri`).
//!
//! One line per tetrahedron:
//!
//! ```text
//! tet <id>: <entry> <entry> <entry> <entry>
//! ```
//!
//! with one entry per face in order 0..3. An entry is either `bd` (free face)
//! or `<face>-><tet>/<perm>` where `<face>` repeats the position index,
//! `<tet>` is the partner id and `<perm>` is the gluing permutation as a
//! 4-digit string (image of 0,1,2,3). Lines starting with `#` and blank
//! lines are ignored.

use thiserror::Error;

use crate::perm::Perm4;

use super::{FaceGluing, TetGluing, TetId};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

pub fn parse_tri(text: &str) -> Result<Vec<TetGluing>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        out.push(parse_tet_line(s, line)?);
    }
    Ok(out)
}

pub fn parse_tet_line(s: &str, line: usize) -> Result<TetGluing, ParseError> {
    let rest = s
        .strip_prefix("tet")
        .ok_or_else(|| syntax(line, "expected line to start with `tet`"))?
        .trim_start();
    let (id_str, faces_str) = rest
        .split_once(':')
        .ok_or_else(|| syntax(line, "expected `tet <id>: ...`"))?;
    let id: i64 = id_str
        .trim()
        .parse()
        .map_err(|_| syntax(line, format!("bad tet id `{}`", id_str.trim())))?;
    let entries: Vec<&str> = faces_str.split_whitespace().collect();
    if entries.len() != 4 {
        return Err(syntax(
            line,
            format!("expected 4 face entries, found {}", entries.len()),
        ));
    }
    let mut faces = [FaceGluing::Boundary; 4];
    for (f, entry) in entries.iter().enumerate() {
        if *entry == "bd" {
            continue;
        }
        let (face_str, target) = entry
            .split_once("->")
            .ok_or_else(|| syntax(line, format!("bad face entry `{entry}`")))?;
        let face_idx: u8 = face_str
            .parse()
            .map_err(|_| syntax(line, format!("bad face index `{face_str}`")))?;
        if face_idx as usize != f {
            return Err(syntax(
                line,
                format!("face entry {face_idx} out of order (expected {f})"),
            ));
        }
        let (tet_str, perm_str) = target
            .split_once('/')
            .ok_or_else(|| syntax(line, format!("bad face entry `{entry}` (missing /perm)")))?;
        let tet: i64 = tet_str
            .parse()
            .map_err(|_| syntax(line, format!("bad partner tet `{tet_str}`")))?;
        let perm = Perm4::parse(perm_str)
            .ok_or_else(|| syntax(line, format!("bad permutation `{perm_str}`")))?;
        let opp = perm.apply(f as u8);
        faces[f] = FaceGluing::Glued { tet: TetId(tet), face: opp, perm };
    }
    Ok(TetGluing { id: TetId(id), faces })
}

pub fn emit_tri(tets: &[TetGluing]) -> String {
    let mut sorted: Vec<&TetGluing> = tets.iter().collect();
    sorted.sort_by_key(|t| t.id);
    let mut out = String::new();
    for t in sorted {
        out.push_str(&emit_tet_line(t));
        out.push('\n');
    }
    out
}

pub fn emit_tet_line(t: &TetGluing) -> String {
    let mut parts = vec![format!("tet {}:", t.id)];
    for f in 0..4usize {
        match &t.faces[f] {
            FaceGluing::Boundary => parts.push("bd".to_string()),
            FaceGluing::Glued { tet, perm, .. } => {
                parts.push(format!("{f}->{}/{perm}", tet.0));
            }
        }
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_complex;

    #[test]
    fn round_trip() {
        let text = "\
# doubled simplex
tet 0: 0->1/0123 1->1/0123 2->1/0123 3->1/0123
tet 1: 0->0/0123 1->0/0123 2->0/0123 3->0/0123
";
        let tets = parse_tri(text).unwrap();
        assert_eq!(tets.len(), 2);
        build_complex(tets.clone()).unwrap();
        let emitted = emit_tri(&tets);
        let reparsed = parse_tri(&emitted).unwrap();
        assert_eq!(tets, reparsed);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = parse_tri("tet 0: bd bd bd\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1"), "{msg}");
        let err = parse_tri("tet 0: bd bd bd bd\ntet 1: 0->x/0123 bd bd bd\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn face_entry_must_match_position() {
        let err = parse_tri("tet 0: 1->1/0123 bd bd bd\n").unwrap_err();
        assert!(err.to_string().contains("out of order"));
    }
}
