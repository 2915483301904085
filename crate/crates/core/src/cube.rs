//! The cube of resolutions as a bigraded chain complex.
//!
//! Basis of `C^i`: states on every `ε` with `|ε| = i`, ordered by `ε` as an
//! integer (coordinate `k` is bit `k`) and then by label vector with `1 < X`
//! compared position by position. A label vector is packed into a code whose
//! most significant bit is circle 0; a set bit means `X`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::diagram::{
    checked_circle_map, transition_between, CircleMap, Diagram, EdgeKind, EdgeTransition, Epsilon, MAX_CROSSINGS,
};
use crate::error::{KhError, Result};

pub const DEFAULT_CROSSING_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    One,
    X,
}

impl Label {
    pub fn degree(self) -> i32 {
        match self {
            Label::One => 1,
            Label::X => -1,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::One => "1",
            Label::X => "X",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledState {
    pub epsilon: Epsilon,
    /// One label per circle, in canonical circle order.
    pub labels: Vec<Label>,
}

impl LabeledState {
    pub fn code(&self) -> u64 {
        encode_labels(&self.labels)
    }

    /// `#1 - #X + |ε|`.
    pub fn unnormalized_q_degree(&self) -> i32 {
        self.labels.iter().map(|l| l.degree()).sum::<i32>() + self.epsilon.weight() as i32
    }
}

pub(crate) fn encode_labels(labels: &[Label]) -> u64 {
    labels.iter().fold(0u64, |acc, &l| acc << 1 | (l == Label::X) as u64)
}

pub(crate) fn decode_labels(code: u64, circles: usize) -> Vec<Label> {
    (0..circles).map(|k| if code >> (circles - 1 - k) & 1 == 1 { Label::X } else { Label::One }).collect()
}

#[inline]
fn is_x(code: u64, circles: usize, k: usize) -> bool {
    code >> (circles - 1 - k) & 1 == 1
}

#[inline]
fn set_x(code: &mut u64, circles: usize, k: usize) {
    *code |= 1 << (circles - 1 - k);
}

/// Normalised q-degree: `#1 - #X + |ε| + n₊ - 2n₋`.
pub fn q_degree(s: &LabeledState, d: &Diagram) -> i32 {
    s.unnormalized_q_degree() + d.n_plus() as i32 - 2 * d.n_minus() as i32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeSymbol {
    Zero,
    One,
    Star,
}

/// `(-1)^{f(ν)}` with `f(ν)` the number of 1s before the `*`.
pub fn edge_map_sign(nu: &[EdgeSymbol]) -> Result<i64> {
    let stars = nu.iter().filter(|&&s| s == EdgeSymbol::Star).count();
    if stars != 1 {
        return Err(KhError::MalformedEdge { found: stars });
    }
    let ones = nu.iter().take_while(|&&s| s != EdgeSymbol::Star).filter(|&&s| s == EdgeSymbol::One).count();
    Ok(if ones % 2 == 0 { 1 } else { -1 })
}

/// Parses an edge vector such as `"1*0"`.
pub fn parse_edge_vector(text: &str) -> Result<Vec<EdgeSymbol>> {
    text.chars()
        .filter(|c| !c.is_whitespace() && *c != ',')
        .map(|c| match c {
            '0' => Ok(EdgeSymbol::Zero),
            '1' => Ok(EdgeSymbol::One),
            '*' => Ok(EdgeSymbol::Star),
            _ => Err(KhError::MalformedEdge { found: 0 }),
        })
        .collect()
}

/// The label `d_ν` of one cube edge: the vector `ν`, whether it merges or
/// splits, and its sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMapSpec {
    pub nu: Vec<EdgeSymbol>,
    pub kind: EdgeKind,
    pub sign: i64,
}

impl EdgeMapSpec {
    pub fn of(t: &EdgeTransition) -> EdgeMapSpec {
        let nu: Vec<EdgeSymbol> = (0..t.from.len())
            .map(|k| match (k == t.flip, t.from.get(k)) {
                (true, _) => EdgeSymbol::Star,
                (false, true) => EdgeSymbol::One,
                (false, false) => EdgeSymbol::Zero,
            })
            .collect();
        let sign = edge_map_sign(&nu).expect("one star");
        EdgeMapSpec { nu, kind: t.kind, sign }
    }
}

impl fmt::Display for EdgeMapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.nu {
            f.write_str(match s {
                EdgeSymbol::Zero => "0",
                EdgeSymbol::One => "1",
                EdgeSymbol::Star => "*",
            })?;
        }
        Ok(())
    }
}

/// Images of a source label code under the edge map, unsigned. At most two terms.
fn edge_images(
    kind: EdgeKind,
    unchanged: &[(usize, usize)],
    src_c: usize,
    dst_c: usize,
    code: u64,
) -> ([u64; 2], usize) {
    let mut base = 0u64;
    for &(s, t) in unchanged {
        if is_x(code, src_c, s) {
            set_x(&mut base, dst_c, t);
        }
    }
    match kind {
        EdgeKind::Merge { first, second, into } => match (is_x(code, src_c, first), is_x(code, src_c, second)) {
            (true, true) => ([0, 0], 0),
            (false, false) => ([base, 0], 1),
            _ => {
                set_x(&mut base, dst_c, into);
                ([base, 0], 1)
            }
        },
        EdgeKind::Split { from, first, second } => {
            if is_x(code, src_c, from) {
                set_x(&mut base, dst_c, first);
                set_x(&mut base, dst_c, second);
                ([base, 0], 1)
            } else {
                let (mut a, mut b) = (base, base);
                set_x(&mut a, dst_c, second);
                set_x(&mut b, dst_c, first);
                ([a, b], 2)
            }
        }
    }
}

/// Applies `m` or `Δ` (identity on untouched circles) to one basis state.
/// Coefficients are before the edge sign.
pub fn apply_edge_map(t: &EdgeTransition, s: &LabeledState) -> Result<Vec<(LabeledState, i64)>> {
    if s.epsilon != t.from || s.labels.len() != t.source_circles {
        return Err(KhError::StateEdgeMismatch);
    }
    let (images, n) = edge_images(t.kind, &t.unchanged, t.source_circles, t.target_circles, s.code());
    Ok(images[..n]
        .iter()
        .map(|&code| (LabeledState { epsilon: t.to, labels: decode_labels(code, t.target_circles) }, 1))
        .collect())
}

/// The states of one resolution inside a chain group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateBlock {
    pub epsilon: Epsilon,
    pub circles: usize,
    /// Index of the all-`1` state of this resolution in the group basis.
    pub offset: usize,
}

impl StateBlock {
    pub fn len(&self) -> usize {
        1 << self.circles
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainGroup {
    /// Unnormalised homological degree `|ε|`.
    pub degree: usize,
    pub blocks: Vec<StateBlock>,
    /// Normalised q-degree of every basis element.
    pub q_degrees: Vec<i32>,
}

impl ChainGroup {
    pub fn dim(&self) -> usize {
        self.q_degrees.len()
    }

    pub fn state(&self, index: usize) -> LabeledState {
        let b = self.blocks[self.blocks.partition_point(|b| b.offset <= index) - 1];
        LabeledState { epsilon: b.epsilon, labels: decode_labels((index - b.offset) as u64, b.circles) }
    }

    pub fn index_of(&self, s: &LabeledState) -> Option<usize> {
        let k = self.blocks.binary_search_by_key(&s.epsilon, |b| b.epsilon).ok()?;
        let b = self.blocks[k];
        (b.circles == s.labels.len()).then(|| b.offset + s.code() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixEntry {
    pub row: u32,
    pub col: u32,
    pub value: i8,
}

/// Sparse integer matrix with q-degree tags on rows and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Sorted by `(col, row)`.
    pub entries: Vec<MatrixEntry>,
    pub row_q: Vec<i32>,
    pub col_q: Vec<i32>,
}

impl GradedMatrix {
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_grading_preserving(&self) -> bool {
        self.entries.iter().all(|e| self.row_q[e.row as usize] == self.col_q[e.col as usize])
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols]; self.rows];
        for e in &self.entries {
            m[e.row as usize][e.col as usize] += e.value as i64;
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    crossings: usize,
    n_plus: usize,
    n_minus: usize,
    groups: Vec<ChainGroup>,
    differentials: Vec<GradedMatrix>,
}

impl ChainComplex {
    pub fn crossings(&self) -> usize {
        self.crossings
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    /// Groups `C^0 ..= C^m`, indexed by unnormalised degree.
    pub fn groups(&self) -> &[ChainGroup] {
        &self.groups
    }

    pub fn group(&self, i: usize) -> &ChainGroup {
        &self.groups[i]
    }

    /// `d^i : C^i → C^{i+1}` for `i in 0..m`.
    pub fn differentials(&self) -> &[GradedMatrix] {
        &self.differentials
    }

    pub fn differential(&self, i: usize) -> &GradedMatrix {
        &self.differentials[i]
    }

    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.dim()).collect()
    }

    /// `(homological, q)` shift taking unnormalised to normalised gradings.
    pub fn normalization_shift(&self) -> (i32, i32) {
        (-(self.n_minus as i32), self.n_plus as i32 - 2 * self.n_minus as i32)
    }

    /// Plain-text listing of group sizes and matrix nonzeros.
    pub fn dump(&self, with_entries: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "crossings {} n_plus {} n_minus {}", self.crossings, self.n_plus, self.n_minus);
        for g in &self.groups {
            let _ = writeln!(out, "C{} resolutions {} dim {}", g.degree, g.blocks.len(), g.dim());
        }
        for (i, d) in self.differentials.iter().enumerate() {
            let _ = writeln!(out, "d{} {}x{} nnz {}", i, d.rows, d.cols, d.nnz());
            if with_entries {
                for e in &d.entries {
                    let _ = writeln!(out, "  {} {} {}", e.row, e.col, e.value);
                }
            }
        }
        out
    }
}

fn column_epsilons(m: usize) -> Vec<Vec<Epsilon>> {
    let mut cols = vec![Vec::new(); m + 1];
    for bits in 0..1u64 << m {
        cols[bits.count_ones() as usize].push(Epsilon::new(bits, m));
    }
    cols
}

fn build_group(degree: usize, eps: &[Epsilon], maps: &[CircleMap], q_shift: i32) -> ChainGroup {
    let mut blocks = Vec::with_capacity(eps.len());
    let mut q_degrees = Vec::new();
    for (&e, map) in eps.iter().zip(maps) {
        let c = map.circle_count;
        blocks.push(StateBlock { epsilon: e, circles: c, offset: q_degrees.len() });
        let base = c as i32 + degree as i32 + q_shift;
        q_degrees.extend((0..1u64 << c).map(|code| base - 2 * code.count_ones() as i32));
    }
    ChainGroup { degree, blocks, q_degrees }
}

/// Builds the full cube complex. Fails if the diagram has more than `cap`
/// crossings or an edge neither merges nor splits.
pub fn build_complex(d: &Diagram, cap: usize) -> Result<ChainComplex> {
    let m = d.crossing_count();
    let cap = cap.min(MAX_CROSSINGS);
    if m > cap {
        return Err(KhError::CapExceeded { crossings: m, cap });
    }
    let q_shift = d.n_plus() as i32 - 2 * d.n_minus() as i32;
    let columns = column_epsilons(m);
    let resolve_column =
        |eps: &[Epsilon]| -> Result<Vec<CircleMap>> { eps.par_iter().map(|&e| checked_circle_map(d, e)).collect() };

    let mut groups = Vec::with_capacity(m + 1);
    let mut differentials = Vec::with_capacity(m);
    let mut maps = resolve_column(&columns[0])?;
    groups.push(build_group(0, &columns[0], &maps, q_shift));

    for i in 0..m {
        let next_maps = resolve_column(&columns[i + 1])?;
        let next = build_group(i + 1, &columns[i + 1], &next_maps, q_shift);
        let target_of: HashMap<u64, usize> = columns[i + 1].iter().enumerate().map(|(k, e)| (e.bits(), k)).collect();

        let src = &groups[i];
        let per_block: Vec<Vec<MatrixEntry>> = src
            .blocks
            .par_iter()
            .zip(maps.par_iter())
            .map(|(block, map)| -> Result<Vec<MatrixEntry>> {
                let mut entries = Vec::new();
                for k in (0..m).filter(|&k| !block.epsilon.get(k)) {
                    let to = block.epsilon.with(k, true);
                    let t_idx = target_of[&to.bits()];
                    let (tmap, tblock) = (&next_maps[t_idx], next.blocks[t_idx]);
                    let (kind, unchanged) = transition_between(d, k, map, tmap)?;
                    let sign: i8 = if block.epsilon.ones_before(k) % 2 == 0 { 1 } else { -1 };
                    for code in 0..1u64 << block.circles {
                        let (images, n) = edge_images(kind, &unchanged, block.circles, tblock.circles, code);
                        for &img in &images[..n] {
                            entries.push(MatrixEntry {
                                row: (tblock.offset + img as usize) as u32,
                                col: (block.offset + code as usize) as u32,
                                value: sign,
                            });
                        }
                    }
                }
                entries.sort_unstable_by_key(|e| (e.col, e.row));
                Ok(entries)
            })
            .collect::<Result<_>>()?;
        let entries: Vec<MatrixEntry> = per_block.into_iter().flatten().collect();
        debug_assert!(entries.windows(2).all(|w| (w[0].col, w[0].row) < (w[1].col, w[1].row)));

        differentials.push(GradedMatrix {
            rows: next.dim(),
            cols: src.dim(),
            entries,
            row_q: next.q_degrees.clone(),
            col_q: src.q_degrees.clone(),
        });
        groups.push(next);
        maps = next_maps;
    }

    Ok(ChainComplex { crossings: m, n_plus: d.n_plus(), n_minus: d.n_minus(), groups, differentials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{braid_closure, parse_braid};
    use crate::diagram::{edge_transition, resolve};

    fn closure(text: &str) -> Diagram {
        braid_closure(&parse_braid(text).unwrap())
    }

    fn state(bits: &[bool], labels: &[Label]) -> LabeledState {
        LabeledState { epsilon: Epsilon::from_bits(bits), labels: labels.to_vec() }
    }

    #[test]
    fn q_degrees() {
        use Label::*;
        let t = closure("1 1 1");
        assert_eq!(q_degree(&state(&[false; 3], &[X, X]), &t), 1);
        assert_eq!(q_degree(&state(&[false; 3], &[One, X]), &t), 3);
        let unknot = closure("");
        assert_eq!(q_degree(&state(&[], &[One]), &unknot), 1);
    }

    #[test]
    fn edge_signs() {
        let sign = |s: &str| edge_map_sign(&parse_edge_vector(s).unwrap()).unwrap();
        assert_eq!(sign("*10"), 1);
        assert_eq!(sign("1*0"), -1);
        assert_eq!(sign("11*"), 1);
        assert_eq!(sign("101*1"), 1);
        assert!(matches!(edge_map_sign(&parse_edge_vector("10").unwrap()), Err(KhError::MalformedEdge { found: 0 })));
        assert!(matches!(edge_map_sign(&parse_edge_vector("*1*").unwrap()), Err(KhError::MalformedEdge { found: 2 })));
        assert!(parse_edge_vector("1x").is_err());
    }

    #[test]
    fn merge_and_split_maps() {
        use Label::*;
        let d = closure("1 1 1");
        let zero = Epsilon::zero(3);
        let merge = edge_transition(&d, zero, 0).unwrap();
        let image = |t: &EdgeTransition, labels: &[Label]| {
            apply_edge_map(t, &LabeledState { epsilon: t.from, labels: labels.to_vec() })
                .unwrap()
                .into_iter()
                .map(|(s, c)| (s.labels, c))
                .collect::<Vec<_>>()
        };
        assert_eq!(image(&merge, &[One, X]), vec![(vec![X], 1)]);
        assert_eq!(image(&merge, &[X, One]), vec![(vec![X], 1)]);
        assert_eq!(image(&merge, &[One, One]), vec![(vec![One], 1)]);
        assert!(image(&merge, &[X, X]).is_empty());

        let split = edge_transition(&d, zero.with(0, true), 1).unwrap();
        let mut out = image(&split, &[One]);
        out.sort();
        assert_eq!(out, vec![(vec![One, X], 1), (vec![X, One], 1)]);
        assert_eq!(image(&split, &[X]), vec![(vec![X, X], 1)]);

        let wrong = LabeledState { epsilon: zero, labels: vec![One] };
        assert!(matches!(apply_edge_map(&split, &wrong), Err(KhError::StateEdgeMismatch)));
    }

    #[test]
    fn trefoil_dimensions() {
        let c = build_complex(&closure("1 1 1"), DEFAULT_CROSSING_CAP).unwrap();
        assert_eq!(c.dims(), vec![4, 6, 12, 8]);
        assert_eq!(c.differentials().len(), 3);
    }

    #[test]
    fn unknot_complex() {
        let c = build_complex(&closure(""), DEFAULT_CROSSING_CAP).unwrap();
        assert_eq!(c.dims(), vec![2]);
        assert!(c.differentials().is_empty());
        let mut q = c.group(0).q_degrees.clone();
        q.sort();
        assert_eq!(q, vec![-1, 1]);
    }

    #[test]
    fn dims_match_resolutions() {
        let d = closure("1 -2 1 2 -2");
        let c = build_complex(&d, DEFAULT_CROSSING_CAP).unwrap();
        let m = d.crossing_count();
        let mut expected = vec![0usize; m + 1];
        for bits in 0..1u64 << m {
            let e = Epsilon::new(bits, m);
            expected[e.weight()] += 1 << resolve(&d, e).unwrap().circle_count();
        }
        assert_eq!(c.dims(), expected);
    }

    #[test]
    fn differential_squares_to_zero_and_preserves_q() {
        for text in ["1 1 1", "1 -2 1 -2", "p=4; 1 3 -2 1", "-1 -1 -1"] {
            let c = build_complex(&closure(text), DEFAULT_CROSSING_CAP).unwrap();
            for d in c.differentials() {
                assert!(d.is_grading_preserving(), "{text}");
                assert!(d.entries.iter().all(|e| e.value == 1 || e.value == -1));
            }
            for pair in c.differentials().windows(2) {
                let (a, b) = (pair[0].to_dense(), pair[1].to_dense());
                for r in 0..pair[1].rows {
                    for col in 0..pair[0].cols {
                        let v: i64 = (0..pair[0].rows).map(|k| b[r][k] * a[k][col]).sum();
                        assert_eq!(v, 0, "{text}");
                    }
                }
            }
        }
    }

    #[test]
    fn basis_lookup() {
        let c = build_complex(&closure("1 2 1"), DEFAULT_CROSSING_CAP).unwrap();
        for g in c.groups() {
            for k in 0..g.dim() {
                assert_eq!(g.index_of(&g.state(k)), Some(k));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let d = closure("1 1 1 1 1");
        assert!(matches!(build_complex(&d, 4), Err(KhError::CapExceeded { crossings: 5, cap: 4 })));
        assert!(build_complex(&d, 5).is_ok());
    }

    #[test]
    fn non_planar_input_is_an_error() {
        let d = crate::diagram::from_pd("X[1,2,1,2] +").unwrap();
        assert!(matches!(build_complex(&d, 20), Err(KhError::NonPlanar { .. })));
    }

    #[test]
    fn dump_lists_columns() {
        let c = build_complex(&closure("1 1 1"), DEFAULT_CROSSING_CAP).unwrap();
        let text = c.dump(false);
        assert!(text.contains("C0 resolutions 1 dim 4"));
        assert!(text.contains("C3 resolutions 1 dim 8"));
        assert!(text.lines().any(|l| l.starts_with("d2 8x12 nnz")));
    }

    #[test]
    fn edge_map_spec_matches_transition() {
        let d = crate::braid::braid_closure(&crate::braid::parse_braid("1 1 1").unwrap());
        let t = crate::diagram::edge_transition(&d, Epsilon::new(0b001, 3), 1).unwrap();
        let edge = EdgeMapSpec::of(&t);
        assert_eq!(edge.to_string(), "1*0");
        assert_eq!(edge.sign, -1);
        assert_eq!(edge.sign, t.sign());
        assert_eq!(edge.nu, parse_edge_vector("1*0").unwrap());
    }
}
