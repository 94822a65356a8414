//! Rotation-candidate analysis for isolation of p-gonal strata.
//!
//! Any automorphism outside `C_p` can be taken to normalize `C_p`, so it
//! descends to a finite-order automorphism of the quotient sphere permuting
//! the branch set. Such a rotation either carries exponent `j` to exponent
//! `u j` for some unit `u != 1`, in which case no branch point is fixed, or
//! preserves every exponent class while fixing at most its two fixed points.
//! A prime-order power of the rotation has the same properties, so it is
//! enough to look for prime orders `q`. A stratum with no candidate is
//! isolated.

use serde::Serialize;

use crate::arith::{units_of_prime_order, Unit};
use crate::monodromy::{Profile, StratumClass};

/// A possible sphere rotation of prime order `q` compatible with the monodromy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RotationCandidate {
    pub q: u32,
    /// Conjugation exponent: `1`, or a unit of order `q`.
    pub u: Unit,
    /// Fewest branch points any compatible permutation must fix.
    pub min_fixed_in_s: u64,
    pub has_cycle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "candidates", rename_all = "snake_case")]
pub enum IsolationVerdict {
    Isolated,
    HasCandidates(Vec<RotationCandidate>),
}

impl IsolationVerdict {
    pub fn is_isolated(&self) -> bool {
        matches!(self, IsolationVerdict::Isolated)
    }

    pub fn candidates(&self) -> &[RotationCandidate] {
        match self {
            IsolationVerdict::Isolated => &[],
            IsolationVerdict::HasCandidates(c) => c,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            IsolationVerdict::Isolated => "isolated",
            IsolationVerdict::HasCandidates(_) => "has_candidates",
        }
    }
}

fn primes_up_to(n: u64) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            (i * i..=n).step_by(i).for_each(|j| sieve[j] = false);
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32).collect()
}

/// Feasible rotation candidates for a multiplicity profile, sorted by `(q, u)`.
pub fn rotation_candidates_for(m: &Profile) -> Vec<RotationCandidate> {
    let p = m.p();
    let mut out: Vec<RotationCandidate> = units_of_prime_order(p)
        .into_iter()
        .filter(|&(u, _)| m.invariant_under(u))
        .map(|(u, q)| RotationCandidate { q, u, min_fixed_in_s: 0, has_cycle: true })
        .collect();
    let one = Unit::one(p);
    for q in primes_up_to(m.max()) {
        let q64 = q as u64;
        let fixed: u64 = m.multiplicities().iter().map(|&c| c % q64).sum();
        let has_cycle = m.multiplicities().iter().any(|&c| c >= q64);
        if fixed <= 2 && has_cycle {
            out.push(RotationCandidate { q, u: one, min_fixed_in_s: fixed, has_cycle });
        }
    }
    out.sort_by_key(|c| (c.q, c.u.value()));
    out
}

pub fn rotation_candidates(cls: &StratumClass) -> Vec<RotationCandidate> {
    rotation_candidates_for(&cls.profile())
}

pub fn verdict_for(m: &Profile) -> IsolationVerdict {
    let cands = rotation_candidates_for(m);
    if cands.is_empty() {
        IsolationVerdict::Isolated
    } else {
        IsolationVerdict::HasCandidates(cands)
    }
}

pub fn isolation_verdict(cls: &StratumClass) -> IsolationVerdict {
    verdict_for(&cls.profile())
}
