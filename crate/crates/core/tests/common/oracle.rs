//! Brute-force Khovanov homology straight from PD text.
//!
//! Shares nothing with the library beyond the conventions: its own PD
//! parser, circles found by depth-first search over arc labels, a basis
//! enumerated into a hash map, dense matrices, ranks by fraction-free
//! elimination and torsion by a dense Smith reduction.

use std::collections::{BTreeMap, HashMap};

/// `(rank, sorted torsion orders)` keyed by `(i, j)`; zero groups omitted.
pub type Table = BTreeMap<(i32, i32), (usize, Vec<i128>)>;

#[derive(Debug, Clone)]
pub struct PdCrossing {
    arcs: [i64; 4],
    positive: bool,
}

pub fn parse_pd(text: &str) -> Vec<PdCrossing> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            let open = line.find('[').expect("[");
            let close = line.find(']').expect("]");
            let arcs: Vec<i64> = line[open + 1..close].split(',').map(|a| a.trim().parse().unwrap()).collect();
            let positive = match line[close + 1..].trim() {
                "+" => true,
                "-" => false,
                s => panic!("sign {s}"),
            };
            PdCrossing { arcs: [arcs[0], arcs[1], arcs[2], arcs[3]], positive }
        })
        .collect()
}

/// Circles of a resolution as sorted arc-label lists, ordered by smallest label.
fn circles(pd: &[PdCrossing], state: &[bool]) -> Vec<Vec<i64>> {
    let mut adj: HashMap<i64, Vec<i64>> = HashMap::new();
    for (c, &one) in pd.iter().zip(state) {
        let [a, b, cc, d] = c.arcs;
        let pairs = if one { [(a, d), (b, cc)] } else { [(a, b), (cc, d)] };
        for (x, y) in pairs {
            adj.entry(x).or_default().push(y);
            adj.entry(y).or_default().push(x);
        }
    }
    let mut labels: Vec<i64> = adj.keys().copied().collect();
    labels.sort_unstable();
    let mut seen: HashMap<i64, bool> = HashMap::new();
    let mut out = Vec::new();
    for &start in &labels {
        if seen.contains_key(&start) {
            continue;
        }
        let mut circle = Vec::new();
        let mut stack = vec![start];
        seen.insert(start, true);
        while let Some(x) = stack.pop() {
            circle.push(x);
            for &y in &adj[&x] {
                if seen.insert(y, true).is_none() {
                    stack.push(y);
                }
            }
        }
        circle.sort_unstable();
        out.push(circle);
    }
    out
}

/// A generator: resolution plus one label per circle (`true` = X).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Gen {
    state: Vec<bool>,
    labels: Vec<bool>,
}

struct Complex {
    n_minus: i32,
    /// generators per unnormalised degree with their normalised q-degree
    groups: Vec<Vec<(Gen, i32)>>,
    /// `d[r]` maps degree r to r+1: sparse (row, col, value)
    d: Vec<Vec<(usize, usize, i64)>>,
}

fn build(pd: &[PdCrossing], free_loops: usize) -> Complex {
    let m = pd.len();
    let n_plus = pd.iter().filter(|c| c.positive).count() as i32;
    let n_minus = m as i32 - n_plus;
    let mut groups: Vec<Vec<(Gen, i32)>> = vec![Vec::new(); m + 1];
    let mut circ_cache: HashMap<Vec<bool>, Vec<Vec<i64>>> = HashMap::new();
    for bits in 0..1u32 << m {
        let state: Vec<bool> = (0..m).map(|k| bits >> k & 1 == 1).collect();
        let cs = circles(pd, &state);
        let c = cs.len() + free_loops;
        let r = state.iter().filter(|&&b| b).count();
        for lab in 0..1u32 << c {
            let labels: Vec<bool> = (0..c).map(|k| lab >> k & 1 == 1).collect();
            let xs = labels.iter().filter(|&&x| x).count() as i32;
            let q = (c as i32 - 2 * xs) + r as i32 + n_plus - 2 * n_minus;
            groups[r].push((Gen { state: state.clone(), labels }, q));
        }
        circ_cache.insert(state, cs);
    }
    let index: Vec<HashMap<Gen, usize>> =
        groups.iter().map(|g| g.iter().enumerate().map(|(k, (gen, _))| (gen.clone(), k)).collect()).collect();

    let mut d = Vec::new();
    for r in 0..m {
        let mut entries: HashMap<(usize, usize), i64> = HashMap::new();
        for (col, (g, _)) in groups[r].iter().enumerate() {
            for k in 0..m {
                if g.state[k] {
                    continue;
                }
                let sign = if g.state[..k].iter().filter(|&&b| b).count() % 2 == 0 { 1 } else { -1 };
                let mut target = g.state.clone();
                target[k] = true;
                let src = &circ_cache[&g.state];
                let dst = &circ_cache[&target];
                for (labels, coef) in edge_map(src, dst, &g.labels, free_loops) {
                    let row = index[r + 1][&Gen { state: target.clone(), labels }];
                    *entries.entry((row, col)).or_default() += sign * coef;
                }
            }
        }
        d.push(entries.into_iter().filter(|&(_, v)| v != 0).map(|((r, c), v)| (r, c, v)).collect());
    }
    Complex { n_minus, groups, d }
}

/// Image of one labelling under `m` or `Δ`, matching circles by shared arcs.
fn edge_map(src: &[Vec<i64>], dst: &[Vec<i64>], labels: &[bool], free_loops: usize) -> Vec<(Vec<bool>, i64)> {
    let owner = |cs: &[Vec<i64>], arc: i64| cs.iter().position(|c| c.contains(&arc)).unwrap();
    // for each target circle, the source circles sharing an arc with it
    let preimages: Vec<Vec<usize>> = dst
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.iter().map(|&a| owner(src, a)).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let fl = |n: usize| (0..free_loops).map(move |k| n + k);
    let mut base = vec![false; dst.len() + free_loops];
    for (s, t) in fl(src.len()).zip(fl(dst.len())) {
        base[t] = labels[s];
    }
    if dst.len() < src.len() {
        // merge: the target circle with two preimages
        let into = preimages.iter().position(|p| p.len() == 2).expect("merge");
        for (t, p) in preimages.iter().enumerate() {
            if t != into {
                base[t] = labels[p[0]];
            }
        }
        let (a, b) = (labels[preimages[into][0]], labels[preimages[into][1]]);
        match (a, b) {
            (false, false) => vec![(base, 1)],
            (true, true) => vec![],
            _ => {
                base[into] = true;
                vec![(base, 1)]
            }
        }
    } else {
        // split: two target circles share a preimage
        let mut from = None;
        let mut pair = Vec::new();
        for s in 0..src.len() {
            let hits: Vec<usize> = (0..dst.len()).filter(|&t| preimages[t] == [s]).collect();
            if hits.len() == 2 {
                from = Some(s);
                pair = hits;
            }
        }
        let from = from.expect("split");
        for (t, p) in preimages.iter().enumerate() {
            if !pair.contains(&t) {
                base[t] = labels[p[0]];
            }
        }
        let (f, g) = (pair[0], pair[1]);
        if labels[from] {
            base[f] = true;
            base[g] = true;
            vec![(base, 1)]
        } else {
            let mut a = base.clone();
            a[f] = true;
            let mut b = base;
            b[g] = true;
            vec![(a, 1), (b, 1)]
        }
    }
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut r = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = a[r][c].checked_mul(a[i][j]).unwrap() - a[i][c].checked_mul(a[r][j]).unwrap();
                assert_eq!(v % prev, 0);
                a[i][j] = v / prev;
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Nonzero invariant factors of a dense integer matrix.
pub fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let p = a[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let f = a[i][t] / p;
            if f != 0 {
                for j in t..cols {
                    a[i][j] -= f * a[t][j];
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let f = a[t][j] / p;
            if f != 0 {
                for i in t..rows {
                    a[i][j] -= f * a[i][t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // p must divide the rest, otherwise fold an offending row in
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

fn block(entries: &[(usize, usize, i64)], rows: &[usize], cols: &[usize]) -> Vec<Vec<i128>> {
    let rpos: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let cpos: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut m = vec![vec![0i128; cols.len()]; rows.len()];
    for &(r, c, v) in entries {
        if let (Some(&i), Some(&j)) = (rpos.get(&r), cpos.get(&c)) {
            m[i][j] += v as i128;
        }
    }
    m
}

/// Homology of the diagram given by `pd` plus `free_loops` crossingless circles.
pub fn homology(pd_text: &str, free_loops: usize) -> Table {
    let pd = parse_pd(pd_text);
    let cx = build(&pd, free_loops);
    let m = pd.len();
    let mut out = Table::new();
    for r in 0..=m {
        let mut qs: Vec<i32> = cx.groups[r].iter().map(|(_, q)| *q).collect();
        qs.sort_unstable();
        qs.dedup();
        for q in qs {
            let here: Vec<usize> = (0..cx.groups[r].len()).filter(|&k| cx.groups[r][k].1 == q).collect();
            let out_rank = if r < m {
                let next: Vec<usize> = (0..cx.groups[r + 1].len()).filter(|&k| cx.groups[r + 1][k].1 == q).collect();
                let dm = block(&cx.d[r], &next, &here);
                rank(dm)
            } else {
                0
            };
            let (in_rank, torsion) = if r > 0 {
                let prev: Vec<usize> = (0..cx.groups[r - 1].len()).filter(|&k| cx.groups[r - 1][k].1 == q).collect();
                let dm = block(&cx.d[r - 1], &here, &prev);
                let sd = smith_diagonal(dm.clone());
                assert_eq!(sd.len(), rank(dm));
                (sd.len(), sd.into_iter().filter(|&x| x > 1).collect::<Vec<_>>())
            } else {
                (0, Vec::new())
            };
            let free = here.len() - out_rank - in_rank;
            if free > 0 || !torsion.is_empty() {
                let mut torsion = torsion;
                torsion.sort_unstable();
                out.insert((r as i32 - cx.n_minus, q), (free, torsion));
            }
        }
    }
    out
}

/// `d ∘ d` vanishes in the oracle's own complex.
pub fn oracle_is_complex(pd_text: &str, free_loops: usize) -> bool {
    let pd = parse_pd(pd_text);
    let cx = build(&pd, free_loops);
    (1..cx.d.len()).all(|r| {
        let mut prod: HashMap<(usize, usize), i64> = HashMap::new();
        for &(i, k, a) in &cx.d[r] {
            for &(k2, j, b) in &cx.d[r - 1] {
                if k == k2 {
                    *prod.entry((i, j)).or_default() += a * b;
                }
            }
        }
        prod.values().all(|&v| v == 0)
    })
}

/// Dimensions of the oracle's chain groups, by unnormalised degree.
pub fn dims(pd_text: &str, free_loops: usize) -> Vec<usize> {
    let pd = parse_pd(pd_text);
    let cx = build(&pd, free_loops);
    cx.groups.iter().map(Vec::len).collect()
}
