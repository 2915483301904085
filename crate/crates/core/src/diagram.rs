//! Crossing-list link diagrams, their total resolutions and the merge/split
//! structure of cube edges.
//!
//! Every crossing is stored PD-style: four arc labels listed counterclockwise
//! starting from the incoming under-strand. With that convention the
//! 0-smoothing joins slots (0,1),(2,3) and the 1-smoothing joins (0,3),(1,2)
//! for both crossing signs; the strand continues through slots (0,2),(1,3).

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use crate::braid::{CrossingId, Sign};
use crate::error::{KhError, Result};

const ZERO_SMOOTHING: [(usize, usize); 2] = [(0, 1), (2, 3)];
const ONE_SMOOTHING: [(usize, usize); 2] = [(0, 3), (1, 2)];
const STRAND_THROUGH: [(usize, usize); 2] = [(0, 2), (1, 3)];

/// Hard ceiling on circles per resolution (labels are packed into a `u64`).
pub const MAX_CIRCLES: usize = 63;
/// Hard ceiling on crossings (states are packed into a `u64`).
pub const MAX_CROSSINGS: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [i64; 4],
    pub sign: Sign,
}

/// Strand bookkeeping recorded when a diagram is built as a braid closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidLayout {
    pub strands: usize,
    /// `(i, α)` of each diagram crossing, in diagram order.
    pub crossing_ids: Vec<CrossingId>,
    /// Braid position (1-based) each arc runs along.
    pub arc_positions: BTreeMap<i64, usize>,
    /// Positions with no crossings; free loop `k` sits at `free_loop_positions[k]`.
    pub free_loop_positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: usize,
    /// Sorted distinct arc labels; an arc's internal id is its index here.
    arc_labels: Vec<i64>,
    /// Per crossing: internal arc ids of the 0- and 1-smoothing pairs.
    smoothings: Vec<[[(usize, usize); 2]; 2]>,
    through: Vec<[(usize, usize); 2]>,
    n_plus: usize,
    n_minus: usize,
    layout: Option<BraidLayout>,
}

impl Diagram {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Result<Self> {
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for c in &crossings {
            for &a in &c.arcs {
                *counts.entry(a).or_default() += 1;
            }
        }
        if let Some((&arc, &count)) = counts.iter().find(|(_, &n)| n != 2) {
            return Err(KhError::ArcMultiplicity { arc, count });
        }
        let arc_labels: Vec<i64> = counts.into_keys().collect();
        let index: HashMap<i64, usize> = arc_labels.iter().enumerate().map(|(k, &a)| (a, k)).collect();

        let pair =
            |c: &Crossing, slots: [(usize, usize); 2]| slots.map(|(x, y)| (index[&c.arcs[x]], index[&c.arcs[y]]));
        let smoothings = crossings.iter().map(|c| [pair(c, ZERO_SMOOTHING), pair(c, ONE_SMOOTHING)]).collect();
        let through = crossings.iter().map(|c| pair(c, STRAND_THROUGH)).collect();
        let n_plus = crossings.iter().filter(|c| c.sign.is_positive()).count();

        Ok(Diagram {
            n_minus: crossings.len() - n_plus,
            n_plus,
            crossings,
            free_loops,
            arc_labels,
            smoothings,
            through,
            layout: None,
        })
    }

    pub fn with_layout(mut self, layout: BraidLayout) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn arc_labels(&self) -> &[i64] {
        &self.arc_labels
    }

    pub fn arc_count(&self) -> usize {
        self.arc_labels.len()
    }

    pub fn n_plus(&self) -> usize {
        self.n_plus
    }

    pub fn n_minus(&self) -> usize {
        self.n_minus
    }

    pub fn layout(&self) -> Option<&BraidLayout> {
        self.layout.as_ref()
    }

    /// Number of link components (strands followed straight through crossings).
    pub fn component_count(&self) -> usize {
        let mut dsu = DisjointSets::new(self.arc_count());
        for pairs in &self.through {
            for &(a, b) in pairs {
                dsu.union(a, b);
            }
        }
        dsu.class_count() + self.free_loops
    }

    /// The same diagram with crossings listed in a new order.
    /// `order[k]` is the old index of the crossing placed at position `k`.
    /// The braid layout is dropped.
    pub fn permuted(&self, order: &[usize]) -> Result<Diagram> {
        let crossings = order.iter().map(|&k| self.crossings[k]).collect();
        Diagram::new(crossings, self.free_loops)
    }

    /// The same diagram with every crossing sign given explicitly reversed:
    /// over/under swapped, which rotates each PD record by one slot.
    pub fn mirrored(&self) -> Diagram {
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.arcs;
                // the old over-strand becomes the under-strand; start at its incoming end
                let arcs = match c.sign {
                    Sign::Positive => [d, a, b, cc],
                    Sign::Negative => [b, cc, d, a],
                };
                Crossing { arcs, sign: c.sign.flipped() }
            })
            .collect();
        Diagram::new(crossings, self.free_loops).expect("mirroring keeps arc multiplicities")
    }

    /// Signed PD text. Free loops have no PD representation and are dropped.
    pub fn to_pd(&self) -> String {
        let mut out = String::new();
        for c in &self.crossings {
            let [a, b, cc, d] = c.arcs;
            let s = if c.sign.is_positive() { '+' } else { '-' };
            let _ = writeln!(out, "X[{a},{b},{cc},{d}] {s}");
        }
        out
    }

    pub(crate) fn smoothing_pairs(&self, crossing: usize, bit: bool) -> [(usize, usize); 2] {
        self.smoothings[crossing][bit as usize]
    }

    /// Internal arc ids touching a crossing.
    pub(crate) fn crossing_arc_ids(&self, crossing: usize) -> [usize; 4] {
        let [(a, b), (c, d)] = self.smoothings[crossing][0];
        [a, b, c, d]
    }

    pub(crate) fn arc_id(&self, label: i64) -> Option<usize> {
        self.arc_labels.binary_search(&label).ok()
    }
}

/// Parses signed PD text: one `X[a,b,c,d] <sign>` record per line, sign in
/// `{+,-}`. Blank lines are skipped.
pub fn from_pd(text: &str) -> Result<Diagram> {
    let mut crossings = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |reason: &str| KhError::PdParse { line: n + 1, reason: reason.to_string() };
        let rest = line.strip_prefix("X[").ok_or_else(|| err("record must start with 'X['"))?;
        let (inside, tail) = rest.split_once(']').ok_or_else(|| err("missing ']'"))?;
        let arcs: Vec<i64> = inside
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("arc labels must be integers"))?;
        let arcs: [i64; 4] = arcs.try_into().map_err(|_| err("a crossing needs exactly 4 arcs"))?;
        let sign = match tail.trim() {
            "+" => Sign::Positive,
            "-" => Sign::Negative,
            "" => return Err(err("missing crossing sign")),
            other => return Err(err(&format!("unknown sign {other:?}"))),
        };
        crossings.push(Crossing { arcs, sign });
    }
    Diagram::new(crossings, 0)
}

/// A vertex of the cube: one bit per crossing, bit `k` is coordinate `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Epsilon {
    bits: u64,
    len: usize,
}

impl Epsilon {
    pub fn new(bits: u64, len: usize) -> Self {
        debug_assert!(len <= 64 && (len == 64 || bits >> len == 0));
        Epsilon { bits, len }
    }

    pub fn zero(len: usize) -> Self {
        Epsilon { bits: 0, len }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let word = bits.iter().enumerate().fold(0u64, |acc, (k, &b)| acc | ((b as u64) << k));
        Epsilon { bits: word, len: bits.len() }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn get(self, k: usize) -> bool {
        self.bits >> k & 1 == 1
    }

    pub fn with(self, k: usize, value: bool) -> Self {
        let bits = if value { self.bits | 1 << k } else { self.bits & !(1 << k) };
        Epsilon { bits, len: self.len }
    }

    /// `|ε|`.
    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of 1-coordinates before coordinate `k`.
    pub fn ones_before(self, k: usize) -> usize {
        (self.bits & ((1u64 << k) - 1)).count_ones() as usize
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len {
            f.write_char(if self.get(k) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Circle {
    /// Arc labels on the circle, ascending.
    Arcs(Vec<i64>),
    /// Index of a crossing-free component of the diagram.
    FreeLoop(usize),
}

/// A total resolution `D_ε`: circles in canonical order (by minimal arc label,
/// free loops last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub epsilon: Epsilon,
    pub circles: Vec<Circle>,
    /// Circle index of every internal arc id.
    pub(crate) circle_of_arc: Vec<usize>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.circles.len()
    }

    /// Circle index containing the arc with this label.
    pub fn circle_of_label(&self, d: &Diagram, label: i64) -> Option<usize> {
        d.arc_id(label).map(|k| self.circle_of_arc[k])
    }
}

/// Just the circle assignment; used in hot loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CircleMap {
    pub circle_of_arc: Vec<u8>,
    pub arc_circles: usize,
    pub circle_count: usize,
}

pub(crate) fn circle_map(d: &Diagram, eps: Epsilon) -> CircleMap {
    let mut dsu = DisjointSets::new(d.arc_count());
    for k in 0..d.crossing_count() {
        for (a, b) in d.smoothing_pairs(k, eps.get(k)) {
            dsu.union(a, b);
        }
    }
    // Internal arc ids are sorted by label, so first-seen numbering orders
    // circles by their minimal label.
    let mut number = vec![usize::MAX; d.arc_count()];
    let mut circle_of_arc = Vec::with_capacity(d.arc_count());
    let mut next = 0usize;
    for a in 0..d.arc_count() {
        let root = dsu.find(a);
        if number[root] == usize::MAX {
            number[root] = next;
            next += 1;
        }
        circle_of_arc.push(number[root] as u8);
    }
    CircleMap { circle_of_arc, arc_circles: next, circle_count: next + d.free_loops() }
}

fn check_len(d: &Diagram, eps: Epsilon) -> Result<()> {
    if eps.len() != d.crossing_count() {
        return Err(KhError::LengthMismatch { expected: d.crossing_count(), found: eps.len() });
    }
    Ok(())
}

pub(crate) fn checked_circle_map(d: &Diagram, eps: Epsilon) -> Result<CircleMap> {
    check_len(d, eps)?;
    let map = circle_map(d, eps);
    if map.circle_count > MAX_CIRCLES {
        return Err(KhError::TooManyCircles { circles: map.circle_count, max: MAX_CIRCLES });
    }
    Ok(map)
}

pub fn resolve(d: &Diagram, epsilon: Epsilon) -> Result<Resolution> {
    let map = checked_circle_map(d, epsilon)?;
    let mut circles: Vec<Vec<i64>> = vec![Vec::new(); map.arc_circles];
    for (a, &c) in map.circle_of_arc.iter().enumerate() {
        circles[c as usize].push(d.arc_labels[a]);
    }
    let mut circles: Vec<Circle> = circles.into_iter().map(Circle::Arcs).collect();
    circles.extend((0..d.free_loops()).map(Circle::FreeLoop));
    Ok(Resolution { epsilon, circles, circle_of_arc: map.circle_of_arc.iter().map(|&c| c as usize).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Source circles `first < second` become target circle `into`.
    Merge { first: usize, second: usize, into: usize },
    /// Source circle `from` becomes target circles `first < second`.
    Split { from: usize, first: usize, second: usize },
}

/// One edge `ε → ε'` of the cube with its circle correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTransition {
    pub from: Epsilon,
    pub to: Epsilon,
    pub flip: usize,
    pub kind: EdgeKind,
    /// `(source circle, target circle)` for every circle not involved in the edge.
    pub unchanged: Vec<(usize, usize)>,
    pub source_circles: usize,
    pub target_circles: usize,
}

impl EdgeTransition {
    /// `(-1)^{number of 1s before the flipped coordinate}`.
    pub fn sign(&self) -> i64 {
        if self.from.ones_before(self.flip).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

pub(crate) fn transition_between(
    d: &Diagram,
    flip: usize,
    source: &CircleMap,
    target: &CircleMap,
) -> Result<(EdgeKind, Vec<(usize, usize)>)> {
    let arcs = d.crossing_arc_ids(flip);
    let mut touched_src: Vec<usize> = arcs.iter().map(|&a| source.circle_of_arc[a] as usize).collect();
    touched_src.sort_unstable();
    touched_src.dedup();
    let mut touched_dst: Vec<usize> = arcs.iter().map(|&a| target.circle_of_arc[a] as usize).collect();
    touched_dst.sort_unstable();
    touched_dst.dedup();

    let kind = match (touched_src.as_slice(), touched_dst.as_slice()) {
        (&[first, second], &[into]) => EdgeKind::Merge { first, second, into },
        (&[from], &[first, second]) => EdgeKind::Split { from, first, second },
        _ => return Err(KhError::NonPlanar { crossing: flip }),
    };

    let mut unchanged = Vec::with_capacity(source.circle_count);
    let mut mapped = vec![false; source.arc_circles];
    for (a, &c) in source.circle_of_arc.iter().enumerate() {
        let c = c as usize;
        if mapped[c] || touched_src.contains(&c) {
            continue;
        }
        mapped[c] = true;
        unchanged.push((c, target.circle_of_arc[a] as usize));
    }
    unchanged.sort_unstable();
    for k in 0..d.free_loops() {
        unchanged.push((source.arc_circles + k, target.arc_circles + k));
    }
    Ok((kind, unchanged))
}

pub fn edge_transition(d: &Diagram, epsilon: Epsilon, flip: usize) -> Result<EdgeTransition> {
    check_len(d, epsilon)?;
    if flip >= d.crossing_count() {
        return Err(KhError::FlipOutOfRange { index: flip, crossings: d.crossing_count() });
    }
    if epsilon.get(flip) {
        return Err(KhError::FlipNotZero { index: flip });
    }
    let to = epsilon.with(flip, true);
    let source = checked_circle_map(d, epsilon)?;
    let target = checked_circle_map(d, to)?;
    let (kind, unchanged) = transition_between(d, flip, &source, &target)?;
    Ok(EdgeTransition {
        from: epsilon,
        to,
        flip,
        kind,
        unchanged,
        source_circles: source.circle_count,
        target_circles: target.circle_count,
    })
}

/// Checks every cube edge for the merge/split dichotomy.
pub fn check_planar(d: &Diagram) -> Result<()> {
    let m = d.crossing_count();
    for bits in 0..1u64 << m {
        let eps = Epsilon::new(bits, m);
        let source = circle_map(d, eps);
        for k in (0..m).filter(|&k| !eps.get(k)) {
            let target = circle_map(d, eps.with(k, true));
            transition_between(d, k, &source, &target)?;
        }
    }
    Ok(())
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    classes: usize,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets { parent: (0..n).collect(), size: vec![1; n], classes: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.classes -= 1;
        true
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }
}
