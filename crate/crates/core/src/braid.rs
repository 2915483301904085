//! Braid words on `p` strands and their closures.
//!
//! Text format: an optional `p=<int>;` directive followed by whitespace
//! separated nonzero integers. `k > 0` is the generator `σ_k`, `k < 0` is
//! `σ_|k|^{-1}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::diagram::{BraidLayout, Crossing, Diagram};
use crate::error::{KhError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// One letter `σ_i^{±1}` of a braid word. Generators are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn positive(generator: usize) -> Self {
        Letter { generator, sign: Sign::Positive }
    }

    pub fn negative(generator: usize) -> Self {
        Letter { generator, sign: Sign::Negative }
    }

    pub fn inverse(self) -> Self {
        Letter { generator: self.generator, sign: self.sign.flipped() }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Positive => write!(f, "{}", self.generator),
            Sign::Negative => write!(f, "-{}", self.generator),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    /// Builds a word, checking that every generator lies in `[1, strands - 1]`.
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        if strands == 0 {
            return Err(KhError::BraidParse("strand count must be at least 1".into()));
        }
        if let Some(bad) = letters.iter().find(|l| l.generator == 0 || l.generator >= strands) {
            return Err(KhError::BraidParse(format!(
                "generator {} is out of range for {} strands",
                bad.generator, strands
            )));
        }
        Ok(BraidWord { strands, letters })
    }

    /// Word from signed integers with the default strand count.
    pub fn from_ints(ints: &[i64]) -> Result<Self> {
        let text = ints.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ");
        parse_braid(&text)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| l.sign.is_positive())
    }

    /// Errors with the first negative letter, if any.
    pub fn require_positive(&self) -> Result<()> {
        match self.letters.iter().position(|l| !l.sign.is_positive()) {
            Some(position) => Err(KhError::NotPositive { position }),
            None => Ok(()),
        }
    }

    /// The same word on `strands` strands (must not drop used strands).
    pub fn with_strands(&self, strands: usize) -> Result<Self> {
        BraidWord::new(strands, self.letters.clone())
    }

    /// Word with every letter's sign reversed (the mirror image).
    pub fn mirror(&self) -> Self {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().map(|l| Letter { generator: l.generator, sign: l.sign.flipped() }).collect(),
        }
    }

    /// `σ_k^{±1} w σ_k^{∓1}`.
    pub fn conjugated(&self, by: Letter) -> Result<Self> {
        let mut letters = Vec::with_capacity(self.letters.len() + 2);
        letters.push(by);
        letters.extend_from_slice(&self.letters);
        letters.push(by.inverse());
        BraidWord::new(self.strands, letters)
    }

    /// Markov stabilisation: `w σ_p^{±1}` on `p + 1` strands.
    pub fn stabilized(&self, sign: Sign) -> Self {
        let mut letters = self.letters.clone();
        letters.push(Letter { generator: self.strands, sign });
        BraidWord { strands: self.strands + 1, letters }
    }

    /// Canonical text form, always with an explicit strand directive.
    pub fn to_text(&self) -> String {
        let body = self.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ");
        if body.is_empty() {
            format!("p={};", self.strands)
        } else {
            format!("p={}; {}", self.strands, body)
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BraidWord {
    type Err = KhError;

    fn from_str(s: &str) -> Result<Self> {
        parse_braid(s)
    }
}

pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let text = text.trim();
    let (explicit, body) = match text.strip_prefix("p=") {
        Some(rest) => {
            let (count, body) =
                rest.split_once(';').ok_or_else(|| KhError::BraidParse("strand directive must end with ';'".into()))?;
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| KhError::BraidParse(format!("malformed strand count {:?}", count.trim())))?;
            if count == 0 {
                return Err(KhError::BraidParse("strand count must be at least 1".into()));
            }
            (Some(count), body)
        }
        None => (None, text),
    };

    let mut letters = Vec::new();
    for token in body.split_whitespace() {
        let k: i64 = token.parse().map_err(|_| KhError::BraidParse(format!("malformed token {token:?}")))?;
        if k == 0 {
            return Err(KhError::BraidParse("0 is not a generator".into()));
        }
        let generator = usize::try_from(k.unsigned_abs())
            .map_err(|_| KhError::BraidParse(format!("generator {k} is too large")))?;
        let sign = if k > 0 { Sign::Positive } else { Sign::Negative };
        letters.push(Letter { generator, sign });
    }

    let needed = letters.iter().map(|l| l.generator + 1).max().unwrap_or(1);
    let strands = match explicit {
        Some(p) if p < needed => {
            return Err(KhError::BraidParse(format!(
                "generator {} needs at least {} strands, directive says {}",
                needed - 1,
                needed,
                p
            )))
        }
        Some(p) => p,
        None => needed,
    };
    BraidWord::new(strands, letters)
}

/// Crossing `(i, α)`: the `α`-th occurrence (top to bottom) of generator `i`.
///
/// The derived ordering is lexicographic on `(generator, occurrence)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CrossingId {
    pub generator: usize,
    pub occurrence: usize,
}

impl fmt::Display for CrossingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.generator, self.occurrence)
    }
}

/// The `(i, α)` labelling of a word together with both directions of the
/// letter ↔ ordered-crossing correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingClassification {
    /// Sorted crossing ids.
    pub ordered: Vec<CrossingId>,
    /// `rank_of_letter[k]` is the index in `ordered` of the `k`-th letter.
    pub rank_of_letter: Vec<usize>,
    /// `letter_of_rank[r]` is the word position of `ordered[r]`.
    pub letter_of_rank: Vec<usize>,
}

impl CrossingClassification {
    pub fn id_of_letter(&self, letter: usize) -> CrossingId {
        self.ordered[self.rank_of_letter[letter]]
    }
}

pub fn classify_crossings(word: &BraidWord) -> CrossingClassification {
    let mut seen = vec![0usize; word.strands()];
    let ids: Vec<CrossingId> = word
        .letters()
        .iter()
        .map(|l| {
            seen[l.generator] += 1;
            CrossingId { generator: l.generator, occurrence: seen[l.generator] }
        })
        .collect();

    let mut letter_of_rank: Vec<usize> = (0..ids.len()).collect();
    letter_of_rank.sort_by_key(|&k| ids[k]);
    let mut rank_of_letter = vec![0; ids.len()];
    for (rank, &letter) in letter_of_rank.iter().enumerate() {
        rank_of_letter[letter] = rank;
    }
    CrossingClassification { ordered: letter_of_rank.iter().map(|&k| ids[k]).collect(), rank_of_letter, letter_of_rank }
}

/// Permutation induced on strand positions, strands numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidPermutation {
    /// `mapping[k - 1]` is the bottom position reached by the strand starting at top position `k`.
    pub mapping: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
}

impl BraidPermutation {
    pub fn component_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_knot(&self) -> bool {
        self.cycles.len() == 1
    }
}

pub fn braid_permutation(word: &BraidWord) -> BraidPermutation {
    let p = word.strands();
    // strand_at[pos] = strand currently occupying that position
    let mut strand_at: Vec<usize> = (0..p).collect();
    for l in word.letters() {
        strand_at.swap(l.generator - 1, l.generator);
    }
    let mut mapping = vec![0; p];
    for (pos, &strand) in strand_at.iter().enumerate() {
        mapping[strand] = pos + 1;
    }

    let mut visited = vec![false; p];
    let mut cycles = Vec::new();
    for start in 0..p {
        if visited[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = start;
        while !visited[k] {
            visited[k] = true;
            cycle.push(k + 1);
            k = mapping[k] - 1;
        }
        cycles.push(cycle);
    }
    BraidPermutation { mapping, cycles }
}

/// Closes the braid into a diagram whose crossings follow the `(i, α)` order.
///
/// Arcs are labelled in creation order starting from 1; arcs `1..=p` sit at
/// the top of positions `1..=p` and are reused at the bottom, so untouched
/// positions become free loops.
pub fn braid_closure(word: &BraidWord) -> Diagram {
    let p = word.strands();
    let mut next_label: i64 = p as i64 + 1;
    let top: Vec<i64> = (1..=p as i64).collect();
    let mut current = top.clone();
    let mut arc_positions: Vec<(i64, usize)> = Vec::new();
    // arcs of each letter as (TL, TR, BL, BR)
    let mut raw: Vec<[i64; 4]> = Vec::with_capacity(word.len());
    let mut last_touch: Vec<Option<(usize, usize)>> = vec![None; p];

    for (k, l) in word.letters().iter().enumerate() {
        let left = l.generator - 1;
        let right = l.generator;
        let (bl, br) = (next_label, next_label + 1);
        next_label += 2;
        raw.push([current[left], current[right], bl, br]);
        arc_positions.push((bl, left + 1));
        arc_positions.push((br, right + 1));
        current[left] = bl;
        current[right] = br;
        last_touch[left] = Some((k, 2));
        last_touch[right] = Some((k, 3));
    }

    // Close: bottom arc of each touched position is identified with its top arc.
    let mut free_loop_positions = Vec::new();
    for pos in 0..p {
        match last_touch[pos] {
            Some((k, slot)) => raw[k][slot] = top[pos],
            None => free_loop_positions.push(pos + 1),
        }
    }
    arc_positions.retain(|(label, _)| raw.iter().any(|r| r.contains(label)));
    for (pos, &label) in top.iter().enumerate() {
        if last_touch[pos].is_some() {
            arc_positions.push((label, pos + 1));
        }
    }

    let classification = classify_crossings(word);
    let crossings: Vec<Crossing> = classification
        .letter_of_rank
        .iter()
        .map(|&k| {
            let [tl, tr, bl, br] = raw[k];
            let sign = word.letters()[k].sign;
            // PD order starts at the incoming under-strand and runs counterclockwise.
            let arcs = match sign {
                Sign::Positive => [tl, bl, br, tr],
                Sign::Negative => [tr, tl, bl, br],
            };
            Crossing { arcs, sign }
        })
        .collect();

    let layout = BraidLayout {
        strands: p,
        crossing_ids: classification.ordered.clone(),
        arc_positions: arc_positions.into_iter().collect(),
        free_loop_positions,
    };
    Diagram::new(crossings, layout.free_loop_positions.len())
        .expect("braid closure always yields a closed diagram")
        .with_layout(layout)
}

/// One occurrence of each generator used by a positive word, in increasing
/// generator order, on the same strands.
pub fn reduced_diagram(word: &BraidWord) -> Result<BraidWord> {
    word.require_positive()?;
    let mut used: Vec<usize> = word.letters().iter().map(|l| l.generator).collect();
    used.sort_unstable();
    used.dedup();
    BraidWord::new(word.strands(), used.into_iter().map(Letter::positive).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> BraidWord {
        parse_braid(text).unwrap()
    }

    #[test]
    fn parses_plain_words() {
        let t = w("1 1 1");
        assert_eq!(t.strands(), 2);
        assert_eq!(t.letters(), &[Letter::positive(1); 3]);

        let f = w("1 -2 1 -2");
        assert_eq!(f.strands(), 3);
        assert_eq!(f.letters(), &[Letter::positive(1), Letter::negative(2), Letter::positive(1), Letter::negative(2)]);
    }

    #[test]
    fn parses_strand_directive() {
        let b = w("p=4; 1 3 1 3");
        assert_eq!(b.strands(), 4);
        assert_eq!(b.len(), 4);
        assert_eq!(w("p=3;").strands(), 3);
        assert_eq!(w("").strands(), 1);
        assert_eq!(w("p=5; 1").strands(), 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_braid("0 1"), Err(KhError::BraidParse(_))));
        assert!(parse_braid("1 x").is_err());
        assert!(parse_braid("p=2; 2").is_err());
        assert!(parse_braid("p=0;").is_err());
        assert!(parse_braid("p=3 1 2").is_err());
        assert!(parse_braid("1.5").is_err());
    }

    #[test]
    fn text_round_trip() {
        for text in ["p=2; 1 1 1", "p=4; 1 -3 2", "p=1;"] {
            assert_eq!(w(text).to_text(), text);
            assert_eq!(w(&w(text).to_text()), w(text));
        }
    }

    #[test]
    fn classification_orders_by_generator_then_occurrence() {
        let ids = |text: &str| {
            classify_crossings(&w(text)).ordered.iter().map(|c| (c.generator, c.occurrence)).collect::<Vec<_>>()
        };
        assert_eq!(ids("1 1 1"), vec![(1, 1), (1, 2), (1, 3)]);
        assert_eq!(ids("2 1 2 1"), vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        assert!(ids("").is_empty());

        let c = classify_crossings(&w("2 1 2 1"));
        assert_eq!(c.letter_of_rank, vec![1, 3, 0, 2]);
        assert_eq!(c.rank_of_letter, vec![2, 0, 3, 1]);
        assert_eq!(c.id_of_letter(0), CrossingId { generator: 2, occurrence: 1 });
    }

    #[test]
    fn permutation_cycles() {
        let t = braid_permutation(&w("1 1 1"));
        assert_eq!(t.mapping, vec![2, 1]);
        assert!(t.is_knot());

        let f = braid_permutation(&w("1 2 1 2"));
        assert_eq!(f.cycles.len(), 1);
        assert_eq!(f.cycles[0].len(), 3);

        let hopf = braid_permutation(&w("1 1"));
        assert_eq!(hopf.mapping, vec![1, 2]);
        assert_eq!(hopf.component_count(), 2);

        assert_eq!(braid_permutation(&w("p=3;")).component_count(), 3);
    }

    #[test]
    fn closure_copies_signs_and_counts() {
        let d = braid_closure(&w("1 1 1"));
        assert_eq!((d.crossing_count(), d.n_plus(), d.n_minus()), (3, 3, 0));
        assert_eq!(d.free_loops(), 0);

        let u = braid_closure(&w("p=2;"));
        assert_eq!((d.crossing_count() - 3, u.crossing_count(), u.free_loops()), (0, 0, 2));

        let r2 = braid_closure(&w("1 -1"));
        assert_eq!((r2.n_plus(), r2.n_minus()), (1, 1));

        let split = braid_closure(&w("p=4; 1"));
        assert_eq!(split.free_loops(), 2);
        assert_eq!(split.layout().unwrap().free_loop_positions, vec![3, 4]);
    }

    #[test]
    fn closure_follows_generator_order() {
        let d = braid_closure(&w("2 1 2 1"));
        let ids = &d.layout().unwrap().crossing_ids;
        assert_eq!(ids[0], CrossingId { generator: 1, occurrence: 1 });
        assert_eq!(ids[3], CrossingId { generator: 2, occurrence: 2 });
    }

    #[test]
    fn reduced_words() {
        assert_eq!(reduced_diagram(&w("1 1 1")).unwrap(), w("1"));
        assert_eq!(reduced_diagram(&w("1 1 2 2")).unwrap(), w("1 2"));
        assert_eq!(reduced_diagram(&w("p=4; 1 3 1 3")).unwrap(), w("p=4; 1 3"));
        assert_eq!(reduced_diagram(&w("2 1 2")).unwrap(), w("1 2"));
        assert!(matches!(reduced_diagram(&w("1 -2")), Err(KhError::NotPositive { position: 1 })));
    }

    #[test]
    fn reduction_is_idempotent() {
        for text in ["1 1 1", "p=5; 3 1 3 2", "", "2 2 1 2"] {
            let once = reduced_diagram(&w(text)).unwrap();
            assert_eq!(reduced_diagram(&once).unwrap(), once);
        }
    }

    #[test]
    fn markov_helpers() {
        let t = w("1 1 1");
        assert_eq!(t.stabilized(Sign::Positive), w("1 1 1 2"));
        assert_eq!(t.conjugated(Letter::negative(1)).unwrap(), w("-1 1 1 1 1"));
        assert_eq!(t.mirror(), w("-1 -1 -1"));
        assert!(t.conjugated(Letter::positive(2)).is_err());
    }
}
