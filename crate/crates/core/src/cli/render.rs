use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Format, InputKind, Ring};
use crate::cube::ChainComplex;
use crate::homology::{BigradedGroup, HomologyEntry};
use crate::invariants::{Convention, LaurentPolynomial, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub kind: InputKind,
    pub text: String,
    pub strands: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub i: i32,
    pub j: i32,
    pub rank: u64,
    pub torsion: Vec<u64>,
}

impl TableEntry {
    /// Nonzero entries sorted by `(i, j)`.
    pub fn from_table(t: &BigradedGroup) -> Vec<TableEntry> {
        t.entries().map(|((i, j), e)| TableEntry { i, j, rank: e.rank, torsion: e.torsion.clone() }).collect()
    }

    pub fn to_table(entries: &[TableEntry]) -> BigradedGroup {
        let mut t = BigradedGroup::new();
        for e in entries {
            t.insert(e.i, e.j, HomologyEntry { rank: e.rank, torsion: e.torsion.clone() });
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupStats {
    /// Normalised homological degree.
    pub i: i32,
    pub resolutions: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialStats {
    /// Normalised degree of the source group.
    pub i: i32,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeStats {
    pub crossings: usize,
    pub groups: Vec<GroupStats>,
    pub differentials: Vec<DifferentialStats>,
}

impl CubeStats {
    pub fn of(c: &ChainComplex) -> CubeStats {
        let shift = c.normalization_shift().0;
        CubeStats {
            crossings: c.crossings(),
            groups: c
                .groups()
                .iter()
                .map(|g| GroupStats { i: g.degree as i32 + shift, resolutions: g.blocks.len(), dim: g.dim() })
                .collect(),
            differentials: c
                .differentials()
                .iter()
                .enumerate()
                .map(|(k, d)| DifferentialStats { i: k as i32 + shift, rows: d.rows, cols: d.cols, nnz: d.nnz() })
                .collect(),
        }
    }
}

/// Everything one invocation reports. Payload fields that the command did
/// not produce are omitted from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub input: InputEcho,
    pub n_plus: usize,
    pub n_minus: usize,
    pub components: usize,
    pub convention: Convention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homology: Option<Vec<TableEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<LaurentPolynomial>,
    pub ring: Ring,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jones: Option<LaurentPolynomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<VerificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cube: Option<CubeStats>,
    /// Wall-clock time of the computation.
    pub elapsed_ms: u64,
}

fn entry_cell(e: &HomologyEntry) -> String {
    e.to_string()
}

/// Text grid (rows `j` descending, columns `i` ascending, `.` for zero) or
/// CSV `i,j,rank,torsion`. JSON is handled by [`render_document`].
pub fn render_table(t: &BigradedGroup, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("i,j,rank,torsion\n");
            for ((i, j), e) in t.entries() {
                let torsion: Vec<String> = e.torsion.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "{i},{j},{},{}", e.rank, torsion.join(";"));
            }
            out
        }
        Format::Json => serde_json::to_string_pretty(&TableEntry::from_table(t)).expect("table serializes") + "\n",
        Format::Text => {
            let (Some(lo), Some(hi)) = (t.min_degree(), t.max_degree()) else {
                return "j\\i\n".to_string();
            };
            let js: BTreeSet<i32> = t.entries().map(|((_, j), _)| j).collect();
            let mut rows: Vec<Vec<String>> = Vec::new();
            rows.push(std::iter::once("j\\i".to_string()).chain((lo..=hi).map(|i| i.to_string())).collect());
            for &j in js.iter().rev() {
                let mut row = vec![j.to_string()];
                row.extend((lo..=hi).map(|i| t.get(i, j).map_or(".".to_string(), entry_cell)));
                rows.push(row);
            }
            let widths: Vec<usize> =
                (0..rows[0].len()).map(|k| rows.iter().map(|r| r[k].chars().count()).max().unwrap_or(0)).collect();
            let mut out = String::new();
            for row in rows {
                let cells: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
                let _ = writeln!(out, "{}", cells.join("  "));
            }
            out
        }
    }
}

fn render_polynomial(p: &LaurentPolynomial, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("exponent,coefficient\n");
            for (e, c) in p.terms() {
                let _ = writeln!(out, "{e},{c}");
            }
            out
        }
        _ => format!("{p}\n"),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_report(r: &VerificationReport, format: Format) -> String {
    let mut out = String::new();
    let status = |s| serde_json::to_value(s).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    match format {
        Format::Csv => {
            out.push_str("name,status,details\n");
            for c in &r.checks {
                let _ = writeln!(out, "{},{},{}", c.name, status(c.status), csv_field(&c.details));
            }
        }
        _ => {
            let _ = writeln!(
                out,
                "{}  strands {}  crossings {}  {}",
                r.input,
                r.strands,
                r.crossings,
                if r.is_knot { "knot" } else { "link" }
            );
            for c in &r.checks {
                let _ = writeln!(out, "{:<24} {:<7} {}", c.name, status(c.status), c.details);
            }
        }
    }
    out
}

fn render_cube(c: &CubeStats, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("i,resolutions,dim,nnz\n");
            for (k, g) in c.groups.iter().enumerate() {
                let nnz = c.differentials.get(k).map_or(String::new(), |d| d.nnz.to_string());
                let _ = writeln!(out, "{},{},{},{}", g.i, g.resolutions, g.dim, nnz);
            }
        }
        _ => {
            let _ = writeln!(out, "crossings {}", c.crossings);
            for g in &c.groups {
                let _ = writeln!(out, "C^{} resolutions {} dim {}", g.i, g.resolutions, g.dim);
            }
            for d in &c.differentials {
                let _ = writeln!(out, "d^{} {}x{} nnz {}", d.i, d.rows, d.cols, d.nnz);
            }
        }
    }
    out
}

/// Renders a document in the requested format. JSON output is the whole
/// document; text and CSV show only the payload.
pub fn render_document(doc: &OutputDocument, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(doc).expect("document serializes") + "\n";
    }
    let mut out = String::new();
    if let Some(h) = &doc.homology {
        out.push_str(&render_table(&TableEntry::to_table(h), format));
    }
    if let Some(p) = &doc.jones {
        out.push_str(&render_polynomial(p, format));
    }
    if let Some(r) = &doc.report {
        out.push_str(&render_report(r, format));
    }
    if let Some(c) = &doc.cube {
        out.push_str(&render_cube(c, format));
    }
    out
}
