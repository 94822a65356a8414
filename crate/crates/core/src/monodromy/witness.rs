//! Constructive isolated branch data for a given prime and dimension.

use serde::Serialize;

use super::census::first_class;
use super::{BranchData, Profile};
use crate::arith::PrimeModulus;
use crate::error::{Error, Result};
use crate::isolation::verdict_for;

/// Node cap for the census probe when a direct construction is unavailable.
pub const CENSUS_PROBE_NODES: u64 = 2_000_000;
/// Longest non-unit tail tried by [`sparse_isolated`].
pub const SPARSE_MAX_TAIL: usize = 16;

/// Where an isolated witness came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessSource {
    /// One of the five congruence-class constructions for `p >= 7`, `d >= 2`.
    PrintedCase(u8),
    /// One of the explicit pentagonal monodromies.
    PentagonalTheta(u8),
    /// First isolated class in canonical census order.
    Census,
    /// First isolated vector of the form `(1^{k-t}, tail)`.
    SparseSearch,
}

/// A published exponent vector, taken verbatim (reduced mod `p`) and not yet validated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedConstruction {
    pub source: WitnessSource,
    pub exponents: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolatedWitness {
    pub data: BranchData,
    pub source: WitnessSource,
    /// The printed construction, when one exists for `(p, d)` but was
    /// rejected (invalid, or not isolated).
    pub rejected_printed: Option<PrintedConstruction>,
}

/// Printed construction for `(p, d)` if one exists.
///
/// For `p >= 7`, `d >= 2` the vector is `(1^d, a, b, c)` with the tail chosen
/// by `d mod p`; for `p = 5` the three explicit monodromies at `d = 4, 6, 7`.
pub fn printed_construction(p: PrimeModulus, d: u64) -> Option<PrintedConstruction> {
    let pp = p.get() as i64;
    if pp == 5 {
        let (n, xs): (u8, Vec<i64>) = match d {
            4 => (1, vec![1, 1, 1, 2, 3, 3, 4]),
            6 => (2, vec![1, 1, 1, 1, 1, 1, 2, 3, 4]),
            7 => (3, vec![1, 2, 3, 3, 3, 4, 4, 4, 4, 4]),
            _ => return None,
        };
        return Some(PrintedConstruction { source: WitnessSource::PentagonalTheta(n), exponents: xs });
    }
    if d < 2 {
        return None;
    }
    let r = (d % pp as u64) as i64;
    let (case, tail) = match r {
        0 => (2, [3, 5, pp - 8]),
        2 => (3, [3, pp - 3, pp - 2]),
        _ if r == pp - 2 => (4, [3, pp - 3, 2]),
        _ if r == pp - 1 => (5, [4, 5, pp - 8]),
        _ => (1, [2, pp - 2, pp - r]),
    };
    let mut xs = vec![1i64; d as usize];
    xs.extend(tail.iter().map(|&t| t.rem_euclid(pp)));
    Some(PrintedConstruction { source: WitnessSource::PrintedCase(case), exponents: xs })
}

/// First isolated vector `(1^{k-t}, tail)` with `tail` a non-decreasing
/// vector over `[2, p-1]`, trying `t = 1, 2, ...` up to [`SPARSE_MAX_TAIL`].
pub fn sparse_isolated(p: PrimeModulus, k: usize, budget: u64) -> Result<Option<BranchData>> {
    if k < 3 {
        return Err(Error::TooFewPoints(k));
    }
    let mut nodes = 0u64;
    let mut tail = Vec::new();
    for t in 1..=SPARSE_MAX_TAIL.min(k) {
        let ones = (k - t) as u64;
        let residue = (ones % p.get() as u64) as u32;
        if let Some(found) = sparse_walk(p, ones, t, 2, residue, &mut tail, &mut nodes, budget)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn sparse_walk(
    p: PrimeModulus,
    ones: u64,
    slots: usize,
    next: u32,
    residue: u32,
    tail: &mut Vec<u32>,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<BranchData>> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let pp = p.get();
    if slots == 1 {
        let w = (pp - residue) % pp;
        if w < next.max(2) {
            return Ok(None);
        }
        tail.push(w);
        let mut xs = vec![1u32; ones as usize];
        xs.extend_from_slice(tail);
        tail.pop();
        let m = Profile::from_exponents(p, &xs);
        if verdict_for(&m).is_isolated() {
            return Ok(Some(BranchData::from_trusted(p, xs)));
        }
        return Ok(None);
    }
    for w in next..pp {
        tail.push(w);
        let r = ((residue as u64 + w as u64) % pp as u64) as u32;
        let found = sparse_walk(p, ones, slots - 1, w, r, tail, nodes, budget)?;
        tail.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Isolated branch data of dimension `d` over `C_p`.
///
/// Tries the printed construction first. If there is none, or it is invalid
/// or not isolated, the census is probed for the first isolated class; a
/// completed census without one means no isolated class exists. When the
/// census is too large the sparse search is used instead.
pub fn paper_witness(p: PrimeModulus, d: u64, budget: u64) -> Result<IsolatedWitness> {
    let k = usize::try_from(d + 3).map_err(|_| Error::Overflow("branch point count"))?;
    let mut rejected = None;
    if let Some(pc) = printed_construction(p, d) {
        match BranchData::validate(p, &pc.exponents) {
            Ok(bd) if verdict_for(&bd.profile()).is_isolated() => {
                return Ok(IsolatedWitness { data: bd, source: pc.source, rejected_printed: None });
            }
            _ => rejected = Some(pc),
        }
    }
    let probe = if d <= 1 { budget } else { budget.min(CENSUS_PROBE_NODES) };
    match first_class(p, k, probe, |c| verdict_for(&c.profile()).is_isolated()) {
        Ok(Some(c)) => {
            return Ok(IsolatedWitness { data: c.branch_data(), source: WitnessSource::Census, rejected_printed: rejected })
        }
        Ok(None) => return Err(Error::NoIsolatedClass { p: p.get(), d }),
        Err(Error::BudgetExceeded { .. }) if d > 1 => {}
        Err(e) => return Err(e),
    }
    match sparse_isolated(p, k, budget)? {
        Some(bd) => Ok(IsolatedWitness { data: bd, source: WitnessSource::SparseSearch, rejected_printed: rejected }),
        None => Err(Error::BudgetExceeded { budget }),
    }
}
