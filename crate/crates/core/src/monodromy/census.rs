//! Exhaustive enumeration of topological classes.
//!
//! Canonical multisets always contain `1` with the largest multiplicity
//! (scaling by `j^{-1}` turns the most frequent exponent `j` into `1`), so the
//! walk fixes the run of ones first and caps every later run at that length.
//! Later runs are chosen as `(value, multiplicity)` pairs in increasing value
//! order, pruning any prefix whose remaining slots cannot reach residue zero.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::{is_canonical_sorted, StratumClass};
use crate::arith::PrimeModulus;
use crate::error::{Error, Result};
use crate::DEFAULT_BUDGET;

#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    /// Maximum number of enumeration-tree nodes.
    pub budget: u64,
    pub parallel: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { budget: DEFAULT_BUDGET, parallel: true }
    }
}

#[derive(Debug, Clone)]
pub struct Census {
    pub p: PrimeModulus,
    pub k: usize,
    /// Every class exactly once, sorted by canonical multiset.
    pub classes: Vec<StratumClass>,
    /// Enumeration-tree nodes visited.
    pub nodes: u64,
}

/// All topological classes of branch data with `k` points over `C_p`.
pub fn census(p: PrimeModulus, k: usize, budget: u64) -> Result<Vec<StratumClass>> {
    Ok(census_with(p, k, CensusOptions { budget, parallel: true })?.classes)
}

pub fn census_with(p: PrimeModulus, k: usize, opts: CensusOptions) -> Result<Census> {
    if k < 3 {
        return Err(Error::TooFewPoints(k));
    }
    let counter = Counter::new(opts.budget);
    let runs: Vec<u64> = ones_runs(p, k).collect();
    let collect_run = |top: u64| -> Result<Vec<StratumClass>> {
        let mut out = Vec::new();
        let mut walker = Walker::new(p, k, top, &counter);
        let _ = walker.run(&mut |c| {
            out.push(c);
            ControlFlow::Continue(())
        })?;
        Ok(out)
    };
    let parts: Vec<Result<Vec<StratumClass>>> = if opts.parallel {
        runs.par_iter().map(|&top| collect_run(top)).collect()
    } else {
        runs.iter().map(|&top| collect_run(top)).collect()
    };
    let mut classes = Vec::new();
    for part in parts {
        classes.extend(part?);
    }
    classes.sort();
    Ok(Census { p, k, classes, nodes: counter.nodes.load(Ordering::Relaxed) })
}

/// First class in canonical order satisfying `pred`, or `None` once the
/// enumeration completes without a match.
pub fn first_class(
    p: PrimeModulus,
    k: usize,
    budget: u64,
    mut pred: impl FnMut(&StratumClass) -> bool,
) -> Result<Option<StratumClass>> {
    if k < 3 {
        return Err(Error::TooFewPoints(k));
    }
    let counter = Counter::new(budget);
    for top in ones_runs(p, k) {
        let mut found = None;
        let _ = Walker::new(p, k, top, &counter).run(&mut |c| {
            if pred(&c) {
                found = Some(c);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

// Run lengths for the exponent 1, longest first (canonical order).
fn ones_runs(p: PrimeModulus, k: usize) -> impl Iterator<Item = u64> {
    let k = k as u64;
    let lo = k.div_ceil(p.get() as u64 - 1).max(1);
    (lo..=k).rev()
}

struct Counter {
    nodes: AtomicU64,
    budget: u64,
    blown: AtomicBool,
}

impl Counter {
    fn new(budget: u64) -> Self {
        Counter { nodes: AtomicU64::new(0), budget, blown: AtomicBool::new(false) }
    }

    #[inline]
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget || self.blown.load(Ordering::Relaxed) {
            self.blown.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }
}

struct Walker<'a> {
    p: PrimeModulus,
    k: usize,
    top: u64,
    counter: &'a Counter,
    buf: Vec<u32>,
}

type Visit<'v> = dyn FnMut(StratumClass) -> ControlFlow<()> + 'v;

impl<'a> Walker<'a> {
    fn new(p: PrimeModulus, k: usize, top: u64, counter: &'a Counter) -> Self {
        Walker { p, k, top, counter, buf: Vec::with_capacity(k) }
    }

    fn run(&mut self, visit: &mut Visit<'_>) -> Result<ControlFlow<()>> {
        self.counter.tick()?;
        self.buf.extend(std::iter::repeat(1).take(self.top as usize));
        let residue = (self.top % self.p.get() as u64) as u32;
        let remaining = self.k - self.top as usize;
        self.descend(2, remaining, residue, visit)
    }

    /// Whether some sum of `slots` values in `[lo, p-1]` is `= -residue mod p`.
    /// Such sums fill the integer interval `[slots*lo, slots*(p-1)]`.
    fn reachable(&self, slots: u64, lo: u32, residue: u32) -> bool {
        let p = self.p.get() as u64;
        if slots == 0 {
            return residue == 0;
        }
        if lo as u64 >= p {
            return false;
        }
        let min = slots * lo as u64;
        let max = slots * (p - 1);
        let need = (p - residue as u64) % p;
        let first = min + (need + p - min % p) % p;
        first <= max
    }

    fn leaf(&mut self, visit: &mut Visit<'_>) -> ControlFlow<()> {
        if is_canonical_sorted(self.p, &self.buf) {
            visit(StratumClass::from_canonical(self.p, self.buf.clone()))
        } else {
            ControlFlow::Continue(())
        }
    }

    fn descend(&mut self, next: u32, slots: usize, residue: u32, visit: &mut Visit<'_>) -> Result<ControlFlow<()>> {
        let p = self.p.get();
        if slots == 0 {
            return Ok(if residue == 0 { self.leaf(visit) } else { ControlFlow::Continue(()) });
        }
        let s = slots as u64;
        // the final run is forced: value w with s*w = -residue
        let mut finals: Vec<u32> = Vec::new();
        if s <= self.top {
            let need = (p - residue) % p;
            if s % p as u64 == 0 {
                if need == 0 {
                    finals.extend(next..p);
                }
            } else {
                let inv = self.p.unit(s % p as u64)?.inverse();
                let w = inv.scale(need);
                if w >= next {
                    finals.push(w);
                }
            }
        }
        let mut finals = finals.into_iter().peekable();
        for w in next..p {
            if ((p - w) as u64) * self.top < s {
                break;
            }
            // children in canonical order: longer runs of w first
            let cap = self.top.min(s);
            if finals.peek() == Some(&w) {
                finals.next();
                self.counter.tick()?;
                let mark = self.buf.len();
                self.buf.extend(std::iter::repeat(w).take(slots));
                let flow = self.leaf(visit);
                self.buf.truncate(mark);
                if flow.is_break() {
                    return Ok(flow);
                }
            }
            for c in (1..=cap.min(s - 1)).rev() {
                let r = ((residue as u64 + c * w as u64) % p as u64) as u32;
                if !self.reachable(s - c, w + 1, r) {
                    continue;
                }
                self.counter.tick()?;
                let mark = self.buf.len();
                self.buf.extend(std::iter::repeat(w).take(c as usize));
                let flow = self.descend(w + 1, slots - c as usize, r, visit)?;
                self.buf.truncate(mark);
                if flow.is_break() {
                    return Ok(flow);
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Number of classes by Burnside's lemma over the unit group.
///
/// For each unit `u` the invariant multisets are exactly the ones with
/// constant multiplicity along each orbit of `j -> u j`; they are counted by
/// a knapsack over orbits tracking `(size, sum mod p)`.
pub fn burnside_count(p: PrimeModulus, k: usize) -> Result<u128> {
    if k < 3 {
        return Err(Error::TooFewPoints(k));
    }
    let pp = p.get() as usize;
    let mut total: u128 = 0;
    for u in p.units() {
        let mut seen = vec![false; pp];
        let mut dp = vec![vec![0u128; pp]; k + 1];
        dp[0][0] = 1;
        for start in 1..pp {
            if seen[start] {
                continue;
            }
            let (mut size, mut sum, mut j) = (0usize, 0usize, start as u32);
            while !seen[j as usize] {
                seen[j as usize] = true;
                size += 1;
                sum += j as usize;
                j = u.scale(j);
            }
            let sum = sum % pp;
            for n in size..=k {
                for r in 0..pp {
                    let from = dp[n - size][(r + pp - sum) % pp];
                    if from != 0 {
                        dp[n][r] = dp[n][r].checked_add(from).ok_or(Error::Overflow("burnside count"))?;
                    }
                }
            }
        }
        total = total.checked_add(dp[k][0]).ok_or(Error::Overflow("burnside count"))?;
    }
    let order = (pp - 1) as u128;
    assert_eq!(total % order, 0, "Burnside sum not divisible by the group order");
    Ok(total / order)
}
