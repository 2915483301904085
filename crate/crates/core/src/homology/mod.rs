//! Integral homology of the cube complex, computed one `(i, j)` block at a time.

mod kernel;
mod snf;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{ChainComplex, GradedMatrix};
use crate::error::{KhError, Result};

pub use kernel::integer_kernel;
pub(crate) use kernel::normalize_signs;
pub use snf::{smith_normal_form, IntMatrix, SmithForm};

/// `ℤ^rank ⊕ ⨁ ℤ/t` for the torsion orders `t` (ascending, each > 1).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyEntry {
    pub rank: u64,
    pub torsion: Vec<u64>,
}

impl HomologyEntry {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rank)?;
        for t in &self.torsion {
            write!(f, "+T{t}")?;
        }
        Ok(())
    }
}

/// Nonzero groups `H^{i,j}` keyed by `(i, j)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BigradedGroup {
    table: BTreeMap<(i32, i32), HomologyEntry>,
}

impl BigradedGroup {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts an entry; zero entries are dropped.
    pub fn insert(&mut self, i: i32, j: i32, mut entry: HomologyEntry) {
        entry.torsion.sort_unstable();
        if entry.is_zero() {
            self.table.remove(&(i, j));
        } else {
            self.table.insert((i, j), entry);
        }
    }

    pub fn get(&self, i: i32, j: i32) -> Option<&HomologyEntry> {
        self.table.get(&(i, j))
    }

    /// Entries sorted by `(i, j)`.
    pub fn entries(&self) -> impl Iterator<Item = ((i32, i32), &HomologyEntry)> {
        self.table.iter().map(|(&k, v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Entries of homological degree `i`, keyed by `j`.
    pub fn row(&self, i: i32) -> BTreeMap<i32, &HomologyEntry> {
        self.table.range((i, i32::MIN)..=(i, i32::MAX)).map(|(&(_, j), e)| (j, e)).collect()
    }

    pub fn shifted(&self, di: i32, dj: i32) -> BigradedGroup {
        BigradedGroup { table: self.table.iter().map(|(&(i, j), e)| ((i + di, j + dj), e.clone())).collect() }
    }

    /// `j ↦ -j` on every entry.
    pub fn q_negated(&self) -> BigradedGroup {
        BigradedGroup { table: self.table.iter().map(|(&(i, j), e)| ((i, -j), e.clone())).collect() }
    }

    /// Rational homology: free parts only.
    pub fn free_part(&self) -> BigradedGroup {
        let mut out = BigradedGroup::new();
        for (&(i, j), e) in &self.table {
            out.insert(i, j, HomologyEntry { rank: e.rank, torsion: Vec::new() });
        }
        out
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.table.keys().map(|&(i, _)| i).min()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.table.keys().map(|&(i, _)| i).max()
    }
}

impl FromIterator<((i32, i32), HomologyEntry)> for BigradedGroup {
    fn from_iter<I: IntoIterator<Item = ((i32, i32), HomologyEntry)>>(iter: I) -> Self {
        let mut out = BigradedGroup::new();
        for ((i, j), e) in iter {
            out.insert(i, j, e);
        }
        out
    }
}

fn torsion_orders(snf: &SmithForm) -> Result<Vec<u64>> {
    snf.torsion().map(|t| u64::try_from(t).map_err(|_| KhError::TorsionOverflow(t.to_string()))).collect()
}

/// Homology at the middle of `· --d_in--> C --d_out--> ·` for one q-degree.
///
/// Returns `(free rank, torsion orders)`, where the free rank is
/// `cols(d_out) - rank(d_out) - rank(d_in)` and the torsion is read off the
/// Smith form of `d_in`.
pub fn homology_block(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<(u64, Vec<u64>)> {
    if d_in.rows != d_out.cols {
        return Err(KhError::NotAComplex(format!(
            "incoming map has {} rows but outgoing map has {} columns",
            d_in.rows, d_out.cols
        )));
    }
    match d_out.mul(d_in) {
        Some(p) if p.is_zero() => {}
        _ => return Err(KhError::NotAComplex("d_out · d_in ≠ 0".into())),
    }
    let s_in = smith_normal_form(d_in);
    let s_out = smith_normal_form(d_out);
    let free = d_out.cols - s_out.rank - s_in.rank;
    Ok((free as u64, torsion_orders(&s_in)?))
}

/// Per-q splitting of one chain group.
struct QSplit {
    local: Vec<usize>,
    dims: BTreeMap<i32, usize>,
}

fn split_by_q(q_degrees: &[i32]) -> QSplit {
    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    let local = q_degrees
        .iter()
        .map(|q| {
            let slot = dims.entry(*q).or_default();
            *slot += 1;
            *slot - 1
        })
        .collect();
    QSplit { local, dims }
}

/// Splits `d` into its q-degree blocks in local coordinates.
pub(crate) fn q_blocks(d: &GradedMatrix, src: &QSplitRef, dst: &QSplitRef) -> BTreeMap<i32, IntMatrix> {
    let mut blocks: BTreeMap<i32, IntMatrix> = BTreeMap::new();
    for (&q, &cols) in src.dims {
        blocks.insert(q, IntMatrix::zeros(dst.dims.get(&q).copied().unwrap_or(0), cols));
    }
    for e in &d.entries {
        let q = d.col_q[e.col as usize];
        debug_assert_eq!(q, d.row_q[e.row as usize]);
        let block = blocks.get_mut(&q).expect("column q-degree");
        block.entries.push((dst.local[e.row as usize], src.local[e.col as usize], e.value as i64));
    }
    blocks
}

pub(crate) struct QSplitRef<'a> {
    local: &'a [usize],
    dims: &'a BTreeMap<i32, usize>,
}

impl QSplit {
    fn as_ref(&self) -> QSplitRef<'_> {
        QSplitRef { local: &self.local, dims: &self.dims }
    }
}

/// Normalised integral homology `𝓗^{i,j}` of a complex.
pub fn homology_table(c: &ChainComplex) -> Result<BigradedGroup> {
    let splits: Vec<QSplit> = c.groups().iter().map(|g| split_by_q(&g.q_degrees)).collect();

    let tasks: Vec<(usize, i32, IntMatrix)> = c
        .differentials()
        .iter()
        .enumerate()
        .flat_map(|(i, d)| {
            q_blocks(d, &splits[i].as_ref(), &splits[i + 1].as_ref()).into_iter().map(move |(q, m)| (i, q, m))
        })
        .collect();
    let smith: BTreeMap<(usize, i32), SmithForm> =
        tasks.into_par_iter().map(|(i, q, m)| ((i, q), smith_normal_form(&m))).collect();

    let (di, _) = c.normalization_shift();
    let mut table = BigradedGroup::new();
    for (i, split) in splits.iter().enumerate() {
        for (&q, &dim) in &split.dims {
            let out = smith.get(&(i, q));
            let inc = if i > 0 { smith.get(&(i - 1, q)) } else { None };
            let rank = dim - out.map_or(0, |s| s.rank) - inc.map_or(0, |s| s.rank);
            let torsion = match inc {
                Some(s) => torsion_orders(s)?,
                None => Vec::new(),
            };
            table.insert(i as i32 + di, q, HomologyEntry { rank: rank as u64, torsion });
        }
    }
    Ok(table)
}

/// Homology `H^{i,j}(D)` of the unshifted complex.
pub fn unnormalized_homology_table(c: &ChainComplex) -> Result<BigradedGroup> {
    let (di, dj) = c.normalization_shift();
    Ok(homology_table(c)?.shifted(-di, -dj))
}

/// The q-blocks of `d^i` in local coordinates, keyed by q.
pub fn differential_blocks(c: &ChainComplex, i: usize) -> BTreeMap<i32, IntMatrix> {
    let src = split_by_q(&c.group(i).q_degrees);
    let dst = split_by_q(&c.group(i + 1).q_degrees);
    q_blocks(c.differential(i), &src.as_ref(), &dst.as_ref())
}
