//! Text formats: polytope files, f-tables, graphs, and generator listings.
//!
//! Polytope files are cdd-inspired and exact:
//!
//! ```text
//! # optional comments
//! V-representation | H-representation
//! ambient <n>
//! linearity <k> <row indices, 1-based>      (H only, optional)
//! begin <rows>
//! <row> ...
//! end
//! ```
//!
//! Tokens are whitespace-separated rationals `p/q` or `p`. V rows hold one
//! point each; H rows hold the rhs followed by the n coefficients, meaning
//! `a . z <= b` (or `= b` for linearity rows). Writers always emit canonical
//! form with equations first.

use std::fmt::Write as _;

use crate::linalg::{LinearConstraint, QVector};
use crate::num::Rational;
use crate::pfp::AffineGeneratorSet;
use crate::polytope::{HRep, VRep};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeFile {
    H(HRep),
    V(VRep),
}

pub fn write_vrep(v: &VRep) -> String {
    let mut out = String::new();
    out.push_str("V-representation\n");
    let _ = writeln!(out, "ambient {}", v.ambient_dim);
    let _ = writeln!(out, "begin {}", v.points.len());
    for p in &v.points {
        out.push_str(&row_string(p.entries()));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn write_hrep(h: &HRep) -> String {
    let mut out = String::new();
    out.push_str("H-representation\n");
    let _ = writeln!(out, "ambient {}", h.ambient_dim);
    if !h.equations.is_empty() {
        let idx: Vec<String> = (1..=h.equations.len()).map(|i| i.to_string()).collect();
        let _ = writeln!(out, "linearity {} {}", h.equations.len(), idx.join(" "));
    }
    let _ = writeln!(out, "begin {}", h.equations.len() + h.inequalities.len());
    for c in h.equations.iter().chain(&h.inequalities) {
        let mut entries = vec![c.rhs.clone()];
        entries.extend(c.normal.iter().cloned());
        out.push_str(&row_string(&entries));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

fn row_string(entries: &[Rational]) -> String {
    entries
        .iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_polytope_file(text: &str) -> Result<PolytopeFile> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));

    let kind = lines
        .next()
        .ok_or_else(|| Error::Parse("empty polytope file".into()))?;
    let is_h = match kind {
        "H-representation" => true,
        "V-representation" => false,
        other => {
            return Err(Error::Parse(format!(
                "expected a representation header, found '{other}'"
            )))
        }
    };

    let ambient_line = lines
        .next()
        .ok_or_else(|| Error::Parse("missing ambient line".into()))?;
    let ambient = parse_keyword_usize(ambient_line, "ambient")?;

    let mut linearity: Vec<usize> = Vec::new();
    let mut next = lines
        .next()
        .ok_or_else(|| Error::Parse("missing begin line".into()))?;
    if let Some(rest) = next.strip_prefix("linearity") {
        if !is_h {
            return Err(Error::Parse("linearity is only valid in H files".into()));
        }
        let mut tokens = rest.split_whitespace();
        let k: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("malformed linearity line".into()))?;
        for t in tokens {
            let idx: usize = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad linearity index '{t}'")))?;
            if idx == 0 {
                return Err(Error::Parse("linearity indices are 1-based".into()));
            }
            linearity.push(idx - 1);
        }
        if linearity.len() != k {
            return Err(Error::Parse("linearity count mismatch".into()));
        }
        next = lines
            .next()
            .ok_or_else(|| Error::Parse("missing begin line".into()))?;
    }

    let rows = parse_keyword_usize(next, "begin")?;
    let mut parsed_rows: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for _ in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse("fewer rows than declared".into()))?;
        parsed_rows.push(parse_rationals(line)?);
    }
    match lines.next() {
        Some("end") => {}
        _ => return Err(Error::Parse("missing end line".into())),
    }

    if is_h {
        let mut inequalities = Vec::new();
        let mut equations = Vec::new();
        for (i, row) in parsed_rows.into_iter().enumerate() {
            if row.len() != ambient + 1 {
                return Err(Error::Parse(format!(
                    "H row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    ambient + 1
                )));
            }
            let rhs = row[0].clone();
            let normal = QVector::new(row[1..].to_vec());
            let c = LinearConstraint::new(normal, rhs);
            if linearity.contains(&i) {
                equations.push(c);
            } else {
                inequalities.push(c);
            }
        }
        if let Some(&bad) = linearity.iter().find(|&&i| i >= rows) {
            return Err(Error::Parse(format!(
                "linearity index {} out of range",
                bad + 1
            )));
        }
        Ok(PolytopeFile::H(HRep::new(inequalities, equations, ambient)))
    } else {
        let mut points = Vec::new();
        for (i, row) in parsed_rows.into_iter().enumerate() {
            if row.len() != ambient {
                return Err(Error::Parse(format!(
                    "V row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    ambient
                )));
            }
            points.push(QVector::new(row));
        }
        Ok(PolytopeFile::V(VRep::new(points, ambient)))
    }
}

fn parse_keyword_usize(line: &str, keyword: &str) -> Result<usize> {
    let rest = line
        .strip_prefix(keyword)
        .ok_or_else(|| Error::Parse(format!("expected '{keyword} <n>', found '{line}'")))?;
    rest.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected '{keyword} <n>', found '{line}'")))
}

pub fn parse_rationals(line: &str) -> Result<Vec<Rational>> {
    line.split_whitespace().map(str::parse).collect()
}

/// One map per line: `ρ: <d×n matrix row-major rationals> | <offset rationals>`.
pub fn write_generators(gens: &AffineGeneratorSet) -> String {
    let mut out = String::new();
    for map in &gens.maps {
        out.push_str("ρ:");
        for row in map.linear.rows() {
            for e in row.iter() {
                let _ = write!(out, " {e}");
            }
        }
        out.push_str(" |");
        for e in map.offset.iter() {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

/// f-table file: a `split` header then one `<α> | <β> -> <γ>` line per
/// defined pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FTableFile {
    pub n1: usize,
    pub d1: usize,
    pub n2: usize,
    pub d2: usize,
    pub n: usize,
    pub entries: Vec<(QVector, QVector, QVector)>,
}

pub fn write_ftable(f: &FTableFile) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "split n1={} d1={} n2={} d2={} n={}",
        f.n1, f.d1, f.n2, f.d2, f.n
    );
    for (alpha, beta, gamma) in &f.entries {
        let _ = writeln!(
            out,
            "{} | {} -> {}",
            row_string(alpha.entries()),
            row_string(beta.entries()),
            row_string(gamma.entries())
        );
    }
    out
}

pub fn parse_ftable(text: &str) -> Result<FTableFile> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty f-table file".into()))?;
    let rest = header
        .strip_prefix("split")
        .ok_or_else(|| Error::Parse("f-table must start with a split header".into()))?;
    let mut n1 = None;
    let mut d1 = None;
    let mut n2 = None;
    let mut d2 = None;
    let mut n = None;
    for tok in rest.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("malformed split entry '{tok}'")))?;
        let v: usize = value
            .parse()
            .map_err(|_| Error::Parse(format!("malformed split value '{value}'")))?;
        match key {
            "n1" => n1 = Some(v),
            "d1" => d1 = Some(v),
            "n2" => n2 = Some(v),
            "d2" => d2 = Some(v),
            "n" => n = Some(v),
            other => return Err(Error::Parse(format!("unknown split key '{other}'"))),
        }
    }
    let (n1, d1, n2, d2, n) = match (n1, d1, n2, d2, n) {
        (Some(a), Some(b), Some(c), Some(d), Some(e)) => (a, b, c, d, e),
        _ => return Err(Error::Parse("split header is missing a field".into())),
    };

    let mut entries = Vec::new();
    for line in lines {
        let (ab, gamma) = line
            .rsplit_once("->")
            .ok_or_else(|| Error::Parse(format!("f-table line missing '->': '{line}'")))?;
        let (alpha, beta) = ab
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("f-table line missing '|': '{line}'")))?;
        let alpha = QVector::new(parse_rationals(alpha)?);
        let beta = QVector::new(parse_rationals(beta)?);
        let gamma = QVector::new(parse_rationals(gamma)?);
        if alpha.dim() != n1 || beta.dim() != n2 || gamma.dim() != n {
            return Err(Error::Parse(format!(
                "f-table line has wrong arity: '{line}'"
            )));
        }
        entries.push((alpha, beta, gamma));
    }
    Ok(FTableFile {
        n1,
        d1,
        n2,
        d2,
        n,
        entries,
    })
}

/// Graph file: `vertices <k>` then one `u v` edge per line, 0-based.
pub fn parse_graph(text: &str) -> Result<crate::models::Graph> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let count = parse_keyword_usize(head, "vertices")?;
    let mut edges = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line '{line}'")))?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad edge line '{line}'")))?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("bad edge line '{line}'")));
        }
        edges.push((u, v));
    }
    crate::models::Graph::new(count, &edges)
}

pub fn write_graph(g: &crate::models::Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "vertices {}", g.vertex_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
