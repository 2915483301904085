//! Sparse Smith normal form over the integers.
//!
//! Pivots are entries of minimal absolute value (ties broken by Markowitz
//! fill-in cost). A pivot whose row and column it divides is eliminated and
//! recorded; otherwise the Euclidean remainders become the new, smaller,
//! minimum. The run starts in checked `i64` arithmetic and restarts on
//! `BigInt` if any operation would overflow.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse integer matrix given by its nonzero entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix { rows: n, cols: n, entries: (0..n).map(|k| (k, k, 1)).collect() }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().filter(|(_, &v)| v != 0).map(move |(c, &v)| (r, c, v)))
            .collect();
        IntMatrix { rows: rows.len(), cols, entries }
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            out[r][c] += v;
        }
        out
    }

    /// `self · rhs`, or `None` if the shapes do not compose or a sum overflows.
    pub fn mul(&self, rhs: &IntMatrix) -> Option<IntMatrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); rhs.rows];
        for &(r, c, v) in &rhs.entries {
            by_row[r].push((c, v));
        }
        let mut acc: std::collections::BTreeMap<(usize, usize), i64> = Default::default();
        for &(r, k, v) in &self.entries {
            for &(c, w) in &by_row[k] {
                let slot = acc.entry((r, c)).or_insert(0);
                *slot = slot.checked_add(v.checked_mul(w)?)?;
            }
        }
        let entries = acc.into_iter().filter(|&(_, v)| v != 0).map(|((r, c), v)| (r, c, v)).collect();
        Some(IntMatrix { rows: self.rows, cols: rhs.cols, entries })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&(_, _, v)| v == 0)
    }
}

/// Invariant factors `d₁ | d₂ | …` (nonzero ones only) and the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.diagonal.iter().filter(|d| !d.is_one())
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let pivots = match SparseReducer::<i64>::new(m).run() {
        Ok(p) => p.into_iter().map(BigInt::from).collect(),
        Err(Overflow) => SparseReducer::<BigInt>::new(m).run().expect("BigInt arithmetic cannot overflow"),
    };
    let rank = pivots.len();
    SmithForm { diagonal: normalize_diagonal(pivots), rank }
}

/// Replaces a diagonal by the equivalent divisibility chain.
fn normalize_diagonal(diag: Vec<BigInt>) -> Vec<BigInt> {
    let ones = diag.iter().filter(|d| d.is_one()).count();
    let mut rest: Vec<BigInt> = diag.into_iter().filter(|d| !d.is_one()).collect();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            if g != rest[i] {
                let l = rest[i].lcm(&rest[j]);
                rest[i] = g;
                rest[j] = l;
            }
        }
    }
    let mut out = vec![BigInt::one(); ones];
    out.extend(rest);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering;
    fn abs_value(&self) -> Self;
    /// Euclidean quotient with `0 <= self - q·p < |p|`.
    fn quotient(&self, p: &Self) -> Self;
    /// `self - q·x`.
    fn sub_mul(&self, q: &Self, x: &Self) -> Result<Self, Overflow>;
}

impl Coeff for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
    fn quotient(&self, p: &Self) -> Self {
        self.div_euclid(*p)
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Result<Self, Overflow> {
        q.checked_mul(*x).and_then(|qx| self.checked_sub(qx)).ok_or(Overflow)
    }
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn abs_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn abs_value(&self) -> Self {
        self.abs()
    }
    fn quotient(&self, p: &Self) -> Self {
        let (q, r) = self.div_mod_floor(p);
        if r.is_negative() {
            // p < 0 with floor division leaves r in (p, 0]
            q + 1
        } else {
            q
        }
    }
    fn sub_mul(&self, q: &Self, x: &Self) -> Result<Self, Overflow> {
        Ok(self - q * x)
    }
}

/// Row-major sparse matrix plus column → rows incidence.
pub(crate) struct SparseReducer<T> {
    rows: Vec<Vec<(usize, T)>>,
    col_rows: Vec<BTreeSet<usize>>,
    live_rows: BTreeSet<usize>,
}

impl<T: Coeff> SparseReducer<T> {
    pub fn new(m: &IntMatrix) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); m.rows];
        let mut sorted = m.entries.clone();
        sorted.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for (r, c, v) in sorted {
            if v == 0 {
                continue;
            }
            match rows[r].last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.sub_mul(&T::from_i64(-1), &T::from_i64(v)).expect("entry sum"),
                _ => rows[r].push((c, T::from_i64(v))),
            }
        }
        for row in &mut rows {
            row.retain(|(_, v)| !v.is_zero());
        }
        let mut col_rows = vec![BTreeSet::new(); m.cols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].insert(r);
            }
        }
        let live_rows = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
        SparseReducer { rows, col_rows, live_rows }
    }

    fn entry(&self, r: usize, c: usize) -> Option<&T> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(cc, _)| *cc).ok().map(|k| &row[k].1)
    }

    fn pick_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &T, usize)> = None;
        for &r in &self.live_rows {
            let row = &self.rows[r];
            let row_cost = row.len() - 1;
            for (c, v) in row {
                let cost = row_cost * (self.col_rows[*c].len() - 1);
                let better = match best {
                    None => true,
                    Some((_, _, bv, bcost)) => match v.abs_cmp(bv) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => cost < bcost,
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((r, *c, v, cost));
                    if v.is_unit() && cost == 0 {
                        return Some((r, *c));
                    }
                }
            }
        }
        best.map(|(r, c, _, _)| (r, c))
    }

    /// `row[target] -= q · row[source]`.
    fn row_sub(&mut self, target: usize, q: &T, source: usize) -> Result<(), Overflow> {
        let src = std::mem::take(&mut self.rows[source]);
        let old = std::mem::take(&mut self.rows[target]);
        let mut merged = Vec::with_capacity(old.len() + src.len());
        let (mut i, mut j) = (0, 0);
        let zero = T::from_i64(0);
        let result = (|| {
            while i < old.len() || j < src.len() {
                let take_old = j >= src.len() || (i < old.len() && old[i].0 < src[j].0);
                let take_src = i >= old.len() || (j < src.len() && src[j].0 < old[i].0);
                if take_old {
                    merged.push(old[i].clone());
                    i += 1;
                } else if take_src {
                    let c = src[j].0;
                    let v = zero.sub_mul(q, &src[j].1)?;
                    self.col_rows[c].insert(target);
                    merged.push((c, v));
                    j += 1;
                } else {
                    let c = old[i].0;
                    let v = old[i].1.sub_mul(q, &src[j].1)?;
                    if v.is_zero() {
                        self.col_rows[c].remove(&target);
                    } else {
                        merged.push((c, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            Ok(())
        })();
        self.rows[source] = src;
        self.rows[target] = merged;
        if self.rows[target].is_empty() {
            self.live_rows.remove(&target);
        }
        result
    }

    fn remove_row(&mut self, r: usize) {
        for (c, _) in std::mem::take(&mut self.rows[r]) {
            self.col_rows[c].remove(&r);
        }
        self.live_rows.remove(&r);
    }

    /// Returns the absolute values of the eliminated pivots.
    pub fn run(mut self) -> Result<Vec<T>, Overflow> {
        let mut pivots = Vec::new();
        while let Some((r, c)) = self.pick_pivot() {
            let p = self.entry(r, c).expect("pivot entry").clone();

            // clear column c below/above the pivot with row operations
            let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&s| s != r).collect();
            let mut column_clean = true;
            for s in others {
                let v = self.entry(s, c).expect("column entry").clone();
                let q = v.quotient(&p);
                if !q.is_zero() {
                    self.row_sub(s, &q, r)?;
                }
                if self.entry(s, c).is_some() {
                    column_clean = false;
                }
            }
            if !column_clean {
                continue;
            }

            // column c now only meets row r, so column operations only touch row r
            let mut row_clean = true;
            let mut reduced = Vec::with_capacity(self.rows[r].len());
            for (t, v) in std::mem::take(&mut self.rows[r]) {
                if t == c {
                    reduced.push((t, v));
                    continue;
                }
                let rem = v.sub_mul(&v.quotient(&p), &p)?;
                if rem.is_zero() {
                    self.col_rows[t].remove(&r);
                } else {
                    row_clean = false;
                    reduced.push((t, rem));
                }
            }
            self.rows[r] = reduced;
            if row_clean {
                pivots.push(p.abs_value());
                self.remove_row(r);
            }
        }
        Ok(pivots)
    }
}
