//! Sparse elimination of generators for large, redundant presentations.
//!
//! A relation with a coefficient `+-1` on generator `j` lets `j` be written in
//! terms of the others; substituting that expression everywhere removes one
//! generator and one relation without changing the quotient group. Repeating
//! this (choosing pivots of least fill-in) leaves a small presentation on
//! the surviving generators, which is then handled densely.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use super::abgroup::SparseRow;

type Row = Vec<(usize, i64)>;

/// A presentation on `survivors` equivalent to the original one on `n`
/// generators, with `subst[i]` expressing original generator `i` in the
/// survivors (by position).
#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub n: usize,
    pub survivors: Vec<usize>,
    pub subst: Vec<Vec<(usize, BigInt)>>,
}

impl Reduction {
    pub fn identity(n: usize) -> Self {
        Reduction {
            n,
            survivors: (0..n).collect(),
            subst: (0..n).map(|i| vec![(i, BigInt::from(1))]).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.survivors.len()
    }

    /// Image of an original vector in `Z^m`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.m()];
        for (vi, expr) in v.iter().zip(&self.subst) {
            if vi.is_zero() {
                continue;
            }
            for (k, c) in expr {
                out[*k] += vi * c;
            }
        }
        out
    }

    /// Lifts a vector in `Z^m` to the original generators.
    pub fn lift(&self, w: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.n];
        for (k, &orig) in self.survivors.iter().enumerate() {
            out[orig] = w[k].clone();
        }
        out
    }
}

fn normalize(mut r: Row) -> Row {
    r.sort_unstable_by_key(|&(j, _)| j);
    let mut out: Row = Vec::with_capacity(r.len());
    for (j, c) in r {
        match out.last_mut() {
            Some((lj, lc)) if *lj == j => *lc += c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    if out.first().map_or(false, |&(_, c)| c < 0) {
        for e in out.iter_mut() {
            e.1 = -e.1;
        }
    }
    out
}

/// `r - k * p`, both sorted; `None` on overflow.
fn axpy(r: &Row, k: i64, p: &Row) -> Option<Row> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j == p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i == r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push(r[i]);
            i += 1;
        } else if take_p {
            out.push((p[j].0, k.checked_mul(p[j].1)?.checked_neg()?));
            j += 1;
        } else {
            let c = r[i].1.checked_sub(k.checked_mul(p[j].1)?)?;
            if c != 0 {
                out.push((r[i].0, c));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

struct Eliminator {
    rows: Vec<Option<Row>>,
    col_rows: Vec<HashSet<usize>>,
    /// `(generator, expression)` in elimination order.
    eliminated: Vec<(usize, Row)>,
    alive_cols: Vec<bool>,
}

impl Eliminator {
    fn new(n: usize, input: impl Iterator<Item = SparseRow>) -> Self {
        let mut seen = HashSet::new();
        let mut rows = Vec::new();
        for r in input {
            let r = normalize(r);
            if !r.is_empty() && seen.insert(r.clone()) {
                rows.push(Some(r));
            }
        }
        let mut col_rows = vec![HashSet::new(); n];
        for (i, r) in rows.iter().enumerate() {
            for &(j, _) in r.as_ref().unwrap() {
                col_rows[j].insert(i);
            }
        }
        Eliminator { rows, col_rows, eliminated: Vec::new(), alive_cols: vec![true; n] }
    }

    /// Unit entry of least Markowitz cost, ties by row then column.
    fn pick(&self) -> Option<(usize, usize, i64)> {
        let mut best: Option<(usize, usize, usize, i64)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            let Some(r) = r else { continue };
            let w = r.len() - 1;
            if best.map_or(false, |b| w == 0 && b.0 == 0) {
                break;
            }
            for &(j, c) in r {
                if c == 1 || c == -1 {
                    let cost = w * (self.col_rows[j].len() - 1);
                    if best.map_or(true, |b| cost < b.0) {
                        best = Some((cost, i, j, c));
                    }
                }
            }
        }
        best.map(|(_, i, j, c)| (i, j, c))
    }

    /// Eliminates generator `j` using row `i`; `false` on overflow (state is
    /// left consistent).
    fn eliminate(&mut self, i: usize, j: usize, e: i64) -> bool {
        let p = self.rows[i].take().unwrap();
        for &(k, _) in &p {
            self.col_rows[k].remove(&i);
        }
        let targets: Vec<usize> = self.col_rows[j].iter().copied().collect();
        let mut updates = Vec::with_capacity(targets.len());
        for &t in &targets {
            let r = self.rows[t].as_ref().unwrap();
            let c = r.iter().find(|&&(k, _)| k == j).unwrap().1;
            // e = +-1, so r - c e p clears column j
            match c.checked_mul(e).and_then(|k| axpy(r, k, &p)) {
                Some(nr) => updates.push((t, nr)),
                None => {
                    // restore the pivot row and give up on this pivot
                    for &(k, _) in &p {
                        self.col_rows[k].insert(i);
                    }
                    self.rows[i] = Some(p);
                    return false;
                }
            }
        }
        for (t, nr) in updates {
            let old = self.rows[t].take().unwrap();
            for &(k, _) in &old {
                self.col_rows[k].remove(&t);
            }
            let nr = normalize(nr);
            if !nr.is_empty() {
                for &(k, _) in &nr {
                    self.col_rows[k].insert(t);
                }
                self.rows[t] = Some(nr);
            }
        }
        // gen_j = -e * sum_{k != j} p_k gen_k
        let expr: Row = p.iter().filter(|&&(k, _)| k != j).map(|&(k, c)| (k, -e * c)).collect();
        self.eliminated.push((j, expr));
        self.alive_cols[j] = false;
        true
    }

    fn dedup(&mut self) {
        let mut seen: HashMap<Row, usize> = HashMap::new();
        for i in 0..self.rows.len() {
            let Some(r) = &self.rows[i] else { continue };
            if seen.contains_key(r) {
                let r = self.rows[i].take().unwrap();
                for &(k, _) in &r {
                    self.col_rows[k].remove(&i);
                }
            } else {
                seen.insert(r.clone(), i);
            }
        }
    }
}

/// Eliminates generators along unit pivots. Returns the reduction and the
/// remaining relations as dense rows over the survivors.
pub(crate) fn reduce<I>(n: usize, rows: I) -> (Reduction, Vec<Vec<i64>>)
where
    I: Iterator<Item = SparseRow>,
{
    let mut el = Eliminator::new(n, rows);
    let mut steps = 0usize;
    let mut blocked: HashSet<(usize, usize)> = HashSet::new();
    loop {
        let pick = el.pick_excluding(&blocked);
        let Some((i, j, e)) = pick else { break };
        if !el.eliminate(i, j, e) {
            blocked.insert((i, j));
            continue;
        }
        steps += 1;
        if steps % 8 == 0 {
            el.dedup();
        }
    }

    let survivors: Vec<usize> = (0..n).filter(|&j| el.alive_cols[j]).collect();
    let mut pos = vec![usize::MAX; n];
    for (k, &j) in survivors.iter().enumerate() {
        pos[j] = k;
    }
    let mut subst: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); n];
    for &j in &survivors {
        subst[j] = vec![(pos[j], BigInt::from(1))];
    }
    // an eliminated generator's expression only involves generators that
    // were eliminated later or survive
    for (j, expr) in el.eliminated.iter().rev() {
        let mut acc = vec![BigInt::zero(); survivors.len()];
        for &(k, c) in expr {
            for (t, v) in &subst[k] {
                acc[*t] += v * c;
            }
        }
        subst[*j] = acc.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
    }

    let dense: Vec<Vec<i64>> = el
        .rows
        .into_iter()
        .flatten()
        .map(|r| {
            let mut d = vec![0i64; survivors.len()];
            for (k, c) in r {
                d[pos[k]] = c;
            }
            d
        })
        .collect();
    (Reduction { n, survivors, subst }, dense)
}

impl Eliminator {
    fn pick_excluding(&self, blocked: &HashSet<(usize, usize)>) -> Option<(usize, usize, i64)> {
        if blocked.is_empty() {
            return self.pick();
        }
        let mut best: Option<(usize, usize, usize, i64)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            let Some(r) = r else { continue };
            let w = r.len() - 1;
            for &(j, c) in r {
                if (c == 1 || c == -1) && !blocked.contains(&(i, j)) {
                    let cost = w * (self.col_rows[j].len() - 1);
                    if best.map_or(true, |b| cost < b.0) {
                        best = Some((cost, i, j, c));
                    }
                }
            }
        }
        best.map(|(_, i, j, c)| (i, j, c))
    }
}
