//! Mechanical checks of the structure results for positive braid closures.
//!
//! For a positive word on `p` strands with `n` crossings:
//!
//! * `negative_degrees`: no homology below degree 0;
//! * `h0_structure` (knots only): `H⁰ ≅ ℤ²` in q-degrees `1 − p + n ± 1`;
//! * `h1_vanishing`: `H¹ = 0` in every q-degree, torsion included;
//! * `kernel_characterization`: every `t' ∈ ker d¹` has equal components on
//!   all crossings of one generator, compared through the strand-position
//!   identification of the single-smoothing summands with `V^{⊗(p−1)}`;
//! * `reduction_consistency`: the one-crossing-per-generator word has
//!   `H¹ = 0`, the same `C⁰`, and differentials equal to the restriction of
//!   `d⁰`, `d¹` to the first occurrence of each generator.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::braid::{braid_closure, braid_permutation, reduced_diagram, BraidWord, CrossingId};
use crate::cube::{build_complex, ChainComplex, ChainGroup};
use crate::diagram::{resolve, Circle, Diagram, Epsilon};
use crate::error::Result;
use crate::homology::{differential_blocks, homology_table, integer_kernel, normalize_signs, BigradedGroup, IntMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub details: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, details: String) -> Self {
        let status = if passed { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckResult { name: name.to_string(), status, details }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub input: String,
    pub strands: usize,
    pub crossings: usize,
    pub is_knot: bool,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn format_entries(cells: impl IntoIterator<Item = (i32, i32)>) -> String {
    let cells: Vec<String> = cells.into_iter().map(|(i, j)| format!("({i},{j})")).collect();
    if cells.is_empty() {
        "none".to_string()
    } else {
        cells.join(" ")
    }
}

fn q_support(g: &ChainGroup) -> Vec<i32> {
    let mut q = g.q_degrees.clone();
    q.sort_unstable();
    q.dedup();
    q
}

pub fn verify_positive_braid(word: &BraidWord, cap: usize) -> Result<VerificationReport> {
    word.require_positive()?;
    let d = braid_closure(word);
    let c = build_complex(&d, cap)?;
    let table = homology_table(&c)?;
    let p = word.strands() as i32;
    let n = word.len() as i32;
    let is_knot = braid_permutation(word).is_knot();
    let mut checks = Vec::new();

    // (a) nothing below degree 0
    let negative: Vec<(i32, i32)> = table.entries().filter(|((i, _), _)| *i < 0).map(|(k, _)| k).collect();
    checks.push(CheckResult::new(
        "negative_degrees",
        negative.is_empty(),
        format!(
            "inspected every entry with i < 0 (chain groups start at i = {}); nonzero: {}",
            -(c.n_minus() as i32),
            format_entries(negative)
        ),
    ));

    // (b) H⁰ for knots
    if is_knot {
        let expected: Vec<i32> = vec![1 - p + n - 1, 1 - p + n + 1];
        let row = table.row(0);
        let inspected = q_support(c.group(0)).into_iter().map(|j| (0, j));
        let ok =
            row.len() == 2 && expected.iter().all(|j| row.get(j).is_some_and(|e| e.rank == 1 && e.torsion.is_empty()));
        let found: Vec<String> = row.iter().map(|(j, e)| format!("(0,{j})={e}")).collect();
        checks.push(CheckResult::new(
            "h0_structure",
            ok,
            format!(
                "expected rank 1 at (0,{}) and (0,{}) only; inspected {}; found {}",
                expected[0],
                expected[1],
                format_entries(inspected),
                if found.is_empty() { "nothing".into() } else { found.join(" ") }
            ),
        ));
    } else {
        checks.push(CheckResult {
            name: "h0_structure".into(),
            status: CheckStatus::Skipped,
            details: format!("{} components", braid_permutation(word).component_count()),
        });
    }

    // (c) H¹ = 0
    let row1 = table.row(1);
    let inspected: Vec<(i32, i32)> =
        if c.groups().len() > 1 { q_support(c.group(1)).into_iter().map(|j| (1, j)).collect() } else { Vec::new() };
    let nonzero: Vec<String> = row1.iter().map(|(j, e)| format!("(1,{j})={e}")).collect();
    checks.push(CheckResult::new(
        "h1_vanishing",
        row1.is_empty(),
        format!(
            "inspected {}; nonzero: {}",
            format_entries(inspected),
            if nonzero.is_empty() { "none".into() } else { nonzero.join(" ") }
        ),
    ));

    // (d) kernel characterization
    let k = kernel_check_on(&d, &c)?;
    let c1_entries: Vec<(i32, i32)> =
        if c.groups().len() > 1 { q_support(c.group(1)).into_iter().map(|j| (1, j)).collect() } else { Vec::new() };
    let mut details = format!(
        "ker d1 has rank {} over C1 of dimension {}; compared {} occurrence pair(s) across entries {}",
        k.kernel_rank,
        if c.groups().len() > 1 { c.group(1).dim() } else { 0 },
        k.pairs_checked,
        format_entries(c1_entries)
    );
    if let Some(w) = &k.witness {
        let _ = write!(details, "; violated at {} vs {}", w.first, w.second);
    }
    checks.push(CheckResult::new("kernel_characterization", k.passed, details));

    // (e) reduction
    let r = reduction_consistency(word, cap)?;
    checks.push(CheckResult::new("reduction_consistency", r.passed, r.details.clone()));

    Ok(VerificationReport { input: word.to_text(), strands: word.strands(), crossings: word.len(), is_knot, checks })
}

/// A kernel vector whose components differ on two crossings of one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelWitness {
    pub first: CrossingId,
    pub second: CrossingId,
    /// Nonzero coordinates of the vector in the basis of `C¹`.
    pub vector: Vec<(usize, BigInt)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCheck {
    pub passed: bool,
    pub kernel_rank: usize,
    pub pairs_checked: usize,
    pub witness: Option<KernelWitness>,
}

/// Maps each circle of a braid-closure resolution to its slot in the
/// position-ordered tensor factorisation, or `None` if two circles share a
/// strand position.
fn positional_slots(d: &Diagram, eps: Epsilon) -> Result<Option<Vec<usize>>> {
    let layout = d.layout().expect("braid closure layout");
    let r = resolve(d, eps)?;
    let mut spans: Vec<(Vec<usize>, usize)> = r
        .circles
        .iter()
        .enumerate()
        .map(|(k, circle)| {
            let mut pos: Vec<usize> = match circle {
                Circle::Arcs(arcs) => arcs.iter().map(|a| layout.arc_positions[a]).collect(),
                Circle::FreeLoop(f) => vec![layout.free_loop_positions[*f]],
            };
            pos.sort_unstable();
            pos.dedup();
            (pos, k)
        })
        .collect();
    let mut owner = vec![false; layout.strands + 1];
    for (pos, _) in &spans {
        for &x in pos {
            if std::mem::replace(&mut owner[x], true) {
                return Ok(None);
            }
        }
    }
    spans.sort();
    let mut slots = vec![0; spans.len()];
    for (slot, (_, circle)) in spans.iter().enumerate() {
        slots[*circle] = slot;
    }
    Ok(Some(slots))
}

fn positional_code(code: u64, slots: &[usize]) -> u64 {
    let c = slots.len();
    let mut out = 0u64;
    for (circle, &slot) in slots.iter().enumerate() {
        if code >> (c - 1 - circle) & 1 == 1 {
            out |= 1 << (c - 1 - slot);
        }
    }
    out
}

/// Integer basis of `ker d¹`, as vectors over the basis of `C¹`.
fn kernel_of_d1(c: &ChainComplex) -> Vec<Vec<BigInt>> {
    if c.groups().len() < 2 {
        return Vec::new();
    }
    let g1 = c.group(1);
    if c.groups().len() < 3 {
        return (0..g1.dim()).map(|k| (0..g1.dim()).map(|x| BigInt::from((x == k) as i64)).collect()).collect();
    }
    let mut members: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (k, &q) in g1.q_degrees.iter().enumerate() {
        members.entry(q).or_default().push(k);
    }
    let mut basis = Vec::new();
    for (q, block) in differential_blocks(c, 1) {
        let globals = &members[&q];
        let mut local = integer_kernel(&block);
        normalize_signs(&mut local);
        for v in local {
            let mut full = vec![BigInt::zero(); g1.dim()];
            for (x, coef) in v.into_iter().enumerate() {
                full[globals[x]] = coef;
            }
            basis.push(full);
        }
    }
    basis
}

fn kernel_check_on(d: &Diagram, c: &ChainComplex) -> Result<KernelCheck> {
    let layout = d.layout().expect("braid closure layout");
    let kernel = kernel_of_d1(c);
    let m = d.crossing_count();
    if m == 0 {
        return Ok(KernelCheck { passed: true, kernel_rank: 0, pairs_checked: 0, witness: None });
    }
    let g1 = c.group(1);

    // per crossing: block offset, circle count, positional slots
    let mut summands = Vec::with_capacity(m);
    for r in 0..m {
        let eps = Epsilon::zero(m).with(r, true);
        let block = g1.blocks[g1.blocks.binary_search_by_key(&eps, |b| b.epsilon).expect("single-smoothing block")];
        let slots = positional_slots(d, eps)?.expect("single smoothings split along strand positions");
        summands.push((block, slots));
    }

    let mut by_generator: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (r, id) in layout.crossing_ids.iter().enumerate() {
        by_generator.entry(id.generator).or_default().push(r);
    }
    let pairs: Vec<(usize, usize)> = by_generator
        .values()
        .flat_map(|rs| rs.iter().enumerate().flat_map(move |(k, &a)| rs[k + 1..].iter().map(move |&b| (a, b))))
        .collect();

    let component = |v: &[BigInt], r: usize| -> Vec<BigInt> {
        let (block, slots) = &summands[r];
        let mut out = vec![BigInt::zero(); block.len()];
        for code in 0..block.len() as u64 {
            out[positional_code(code, slots) as usize] = v[block.offset + code as usize].clone();
        }
        out
    };

    for v in &kernel {
        for &(a, b) in &pairs {
            if component(v, a) != component(v, b) {
                let vector = v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (k, x.clone())).collect();
                return Ok(KernelCheck {
                    passed: false,
                    kernel_rank: kernel.len(),
                    pairs_checked: pairs.len(),
                    witness: Some(KernelWitness {
                        first: layout.crossing_ids[a],
                        second: layout.crossing_ids[b],
                        vector,
                    }),
                });
            }
        }
    }
    Ok(KernelCheck { passed: true, kernel_rank: kernel.len(), pairs_checked: pairs.len(), witness: None })
}

/// Checks that every vector of `ker d¹` has `t_{iα} = t_{iβ}` for all
/// occurrences `α, β` of each generator `i`.
pub fn kernel_structure_check(word: &BraidWord, cap: usize) -> Result<KernelCheck> {
    word.require_positive()?;
    let d = braid_closure(word);
    let c = build_complex(&d, cap)?;
    kernel_check_on(&d, &c)
}

/// The summand `W = ⨁_i V_{(i,1)}` of `C¹` and the restrictions of `d⁰`
/// and `d¹` to it, in position-ordered bases.
///
/// Row/column blocks are keyed by the sorted list of generators whose first
/// occurrence is 1-smoothed; inside a block states are ordered by
/// position-ordered label code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedComplexW {
    /// Generators with a summand in `W`, ascending.
    pub summands: Vec<usize>,
    /// `C⁰ → W`.
    pub dbar0: IntMatrix,
    /// `W → ⨁_{i<j} V_{(i,1),(j,1)}`.
    pub dbar1: IntMatrix,
}

/// Selected resolutions of one chain group re-indexed positionally.
struct PositionalBasis {
    row_of: HashMap<usize, usize>,
    dim: usize,
}

fn positional_basis(d: &Diagram, g: &ChainGroup) -> Result<PositionalBasis> {
    let layout = d.layout().expect("braid closure layout");
    let mut keyed = Vec::new();
    for block in &g.blocks {
        let ones: Vec<CrossingId> =
            (0..d.crossing_count()).filter(|&k| block.epsilon.get(k)).map(|k| layout.crossing_ids[k]).collect();
        if ones.iter().any(|id| id.occurrence != 1) {
            continue;
        }
        let gens: Vec<usize> = ones.iter().map(|id| id.generator).collect();
        keyed.push((gens, *block));
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0));

    let mut row_of = HashMap::new();
    let mut dim = 0;
    for (_, block) in keyed {
        let slots = positional_slots(d, block.epsilon)?.expect("first occurrences split along strand positions");
        for code in 0..block.len() as u64 {
            row_of.insert(block.offset + code as usize, dim + positional_code(code, &slots) as usize);
        }
        dim += block.len();
    }
    Ok(PositionalBasis { row_of, dim })
}

fn restrict(c: &ChainComplex, i: usize, src: &PositionalBasis, dst: &PositionalBasis) -> IntMatrix {
    let mut entries: Vec<(usize, usize, i64)> = c
        .differential(i)
        .entries
        .iter()
        .filter_map(|e| {
            let r = dst.row_of.get(&(e.row as usize))?;
            let col = src.row_of.get(&(e.col as usize))?;
            Some((*r, *col, e.value as i64))
        })
        .collect();
    entries.sort_unstable();
    IntMatrix { rows: dst.dim, cols: src.dim, entries }
}

fn restricted_on(d: &Diagram, c: &ChainComplex) -> Result<RestrictedComplexW> {
    let layout = d.layout().expect("braid closure layout");
    let mut summands: Vec<usize> = layout.crossing_ids.iter().map(|id| id.generator).collect();
    summands.dedup();
    let bases: Vec<PositionalBasis> =
        c.groups().iter().take(3).map(|g| positional_basis(d, g)).collect::<Result<_>>()?;
    let empty = PositionalBasis { row_of: HashMap::new(), dim: 0 };
    let b = |k: usize| bases.get(k).unwrap_or(&empty);
    let dbar0 = if c.differentials().is_empty() { IntMatrix::zeros(0, b(0).dim) } else { restrict(c, 0, b(0), b(1)) };
    let dbar1 = if c.differentials().len() < 2 { IntMatrix::zeros(0, b(1).dim) } else { restrict(c, 1, b(1), b(2)) };
    Ok(RestrictedComplexW { summands, dbar0, dbar1 })
}

pub fn restricted_complex(word: &BraidWord, cap: usize) -> Result<RestrictedComplexW> {
    word.require_positive()?;
    let d = braid_closure(word);
    let c = build_complex(&d, cap)?;
    restricted_on(&d, &c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCheck {
    pub passed: bool,
    pub reduced: BraidWord,
    pub h1_vanishes: bool,
    /// `(dim C⁰(D), dim C⁰(D′))`.
    pub c0_dims: (usize, usize),
    pub differentials_match: bool,
    pub details: String,
}

pub fn reduction_consistency(word: &BraidWord, cap: usize) -> Result<ReductionCheck> {
    let reduced = reduced_diagram(word)?;
    let d = braid_closure(word);
    let c = build_complex(&d, cap)?;
    let d_red = braid_closure(&reduced);
    let c_red = build_complex(&d_red, cap)?;
    let table_red: BigradedGroup = homology_table(&c_red)?;

    let h1_vanishes = table_red.row(1).is_empty();
    let c0_dims = (c.group(0).dim(), c_red.group(0).dim());
    let expected_c0 = 1usize << word.strands();

    let w = restricted_on(&d, &c)?;
    let full = restricted_on(&d_red, &c_red)?;
    let differentials_match = w == full;

    let passed = h1_vanishes && c0_dims.0 == expected_c0 && c0_dims.1 == expected_c0 && differentials_match;
    let details = format!(
        "reduced word {}; H1 of reduced closure {}; dim C0 = {} and {} (expected {}); restricted d0/d1 {} the reduced differentials",
        reduced,
        if h1_vanishes { "vanishes" } else { "is nonzero" },
        c0_dims.0,
        c0_dims.1,
        expected_c0,
        if differentials_match { "equal" } else { "differ from" }
    );
    Ok(ReductionCheck { passed, reduced, h1_vanishes, c0_dims, differentials_match, details })
}
