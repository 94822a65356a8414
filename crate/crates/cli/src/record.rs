//! Machine-readable result records.

use std::collections::BTreeMap;

use anyhow::Result;
use pgonal_core::extension::{prove_extension, ExtensionWitness};
use pgonal_core::isolation::isolation_verdict;
use pgonal_core::monodromy::StratumClass;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub q: u32,
    pub u: u32,
    pub min_fixed_in_s: u64,
    pub has_cycle: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub group: String,
    pub n: u32,
    pub u: u32,
    pub quotient_signature: String,
    pub quotient_periods: Vec<u64>,
    /// `[a, b]` pairs in `Z_p ⋊ Z_n`.
    pub images: Vec<[u32; 2]>,
}

impl From<&ExtensionWitness> for WitnessRecord {
    fn from(w: &ExtensionWitness) -> Self {
        WitnessRecord {
            group: w.group.shape().to_string(),
            n: w.group.n(),
            u: w.group.u().value(),
            quotient_signature: w.quotient_signature.to_string(),
            quotient_periods: w.quotient_signature.periods().to_vec(),
            images: w.images.iter().map(|x| [x.a, x.b]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

/// One classified stratum. Field order is part of the output format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub p: u32,
    pub k: usize,
    pub canonical: Vec<u32>,
    /// Nonzero multiplicities `m_j`, keyed by exponent.
    pub profile: BTreeMap<u32, u64>,
    pub g: u64,
    pub d: u64,
    pub verdict: String,
    pub candidates: Vec<CandidateRecord>,
    pub witnesses: Vec<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl ResultRecord {
    pub fn build(cls: &StratumClass, extend: Option<u32>) -> Result<Self> {
        let verdict = isolation_verdict(cls);
        let profile = cls.profile();
        let witnesses = match extend {
            Some(n) => prove_extension(cls, n)?.iter().map(WitnessRecord::from).collect(),
            None => Vec::new(),
        };
        Ok(ResultRecord {
            schema_version: SCHEMA_VERSION,
            p: cls.p().get(),
            k: cls.k(),
            canonical: cls.exponents().to_vec(),
            profile: profile.support().map(|j| (j, profile.get(j))).collect(),
            g: cls.genus(),
            d: cls.dim(),
            verdict: verdict.label().to_string(),
            candidates: verdict
                .candidates()
                .iter()
                .map(|c| CandidateRecord { q: c.q, u: c.u.value(), min_fixed_in_s: c.min_fixed_in_s, has_cycle: c.has_cycle })
                .collect(),
            witnesses,
            timing: None,
        })
    }

    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self.canonical.iter().map(|r| r.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Top-level JSON document for `classify` and `census`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordSet {
    pub schema_version: u32,
    pub command: String,
    pub records: Vec<ResultRecord>,
}
