//! Branch data of cyclic p-gonal covers and their topological classes.
//!
//! A cover `X -> P^1` with deck group `C_p = <alpha>` and `k` branch points is
//! recorded by the exponents `r_i` with `theta(x_i) = alpha^{r_i}`. Two
//! exponent vectors give topologically equivalent actions iff they agree up
//! to reordering and multiplication by a unit mod `p`.

mod census;
mod witness;

use std::fmt;

use serde::Serialize;

use crate::arith::{PrimeModulus, Unit};
use crate::error::{Error, Result};
use crate::signature::genus_and_dim;

pub use census::{burnside_count, census, census_with, first_class, Census, CensusOptions};
pub use witness::{paper_witness, printed_construction, sparse_isolated, IsolatedWitness, PrintedConstruction, WitnessSource};

/// A validated exponent vector `(r_1, ..., r_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BranchData {
    p: PrimeModulus,
    exponents: Vec<u32>,
}

impl BranchData {
    /// Checks range, length, and the long relation `sum r_i = 0 mod p`.
    pub fn validate(p: PrimeModulus, exponents: &[i64]) -> Result<Self> {
        let max = p.get() - 1;
        for (index, &r) in exponents.iter().enumerate() {
            if r < 1 || r > max as i64 {
                return Err(Error::ExponentOutOfRange { index, value: r, max });
            }
        }
        if exponents.len() < 3 {
            return Err(Error::TooFewPoints(exponents.len()));
        }
        let sum: u64 = exponents.iter().map(|&r| r as u64).sum();
        let residue = (sum % p.get() as u64) as u32;
        if residue != 0 {
            return Err(Error::SumNotZero { sum, residue, p: p.get() });
        }
        Ok(BranchData { p, exponents: exponents.iter().map(|&r| r as u32).collect() })
    }

    pub(crate) fn from_trusted(p: PrimeModulus, exponents: Vec<u32>) -> Self {
        debug_assert!(exponents.len() >= 3);
        debug_assert!(exponents.iter().all(|&r| r >= 1 && r < p.get()));
        debug_assert_eq!(exponents.iter().map(|&r| r as u64).sum::<u64>() % p.get() as u64, 0);
        BranchData { p, exponents }
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn k(&self) -> usize {
        self.exponents.len()
    }

    pub fn profile(&self) -> Profile {
        Profile::from_exponents(self.p, &self.exponents)
    }

    /// `u * R`, keeping positions.
    pub fn scaled(&self, u: Unit) -> BranchData {
        BranchData { p: self.p, exponents: self.exponents.iter().map(|&r| u.scale(r)).collect() }
    }

    pub fn canonical(&self) -> StratumClass {
        canonical_form(self)
    }
}

impl fmt::Display for BranchData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_exponents(f, &self.exponents)
    }
}

fn write_exponents(f: &mut fmt::Formatter<'_>, xs: &[u32]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Multiplicity `m_j` of each exponent `j` in `[1, p-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    p: PrimeModulus,
    counts: Vec<u64>,
}

impl Profile {
    pub fn from_exponents(p: PrimeModulus, exponents: &[u32]) -> Self {
        let mut counts = vec![0u64; p.get() as usize];
        for &r in exponents {
            counts[r as usize] += 1;
        }
        Profile { p, counts }
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    /// `m_j`; zero for `j = 0` or `j >= p`.
    #[inline]
    pub fn get(&self, j: u32) -> u64 {
        self.counts.get(j as usize).copied().unwrap_or(0)
    }

    /// `(m_1, ..., m_{p-1})`.
    pub fn multiplicities(&self) -> &[u64] {
        &self.counts[1..]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Exponents with non-zero multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.counts.iter().enumerate().filter(|(_, &m)| m > 0).map(|(j, _)| j as u32)
    }

    /// Whether `m_{u j} = m_j` for every `j`.
    pub fn invariant_under(&self, u: Unit) -> bool {
        self.support().all(|j| self.get(u.scale(j)) == self.get(j))
    }

    pub fn to_exponents(&self) -> Vec<u32> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(j, &m)| std::iter::repeat(j as u32).take(m as usize))
            .collect()
    }
}

/// Canonical representative of a topological class of branch data.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct StratumClass {
    p: PrimeModulus,
    exponents: Vec<u32>,
    k: usize,
    g: u64,
    d: u64,
}

impl StratumClass {
    pub(crate) fn from_canonical(p: PrimeModulus, exponents: Vec<u32>) -> Self {
        let k = exponents.len();
        let (g, d) = genus_and_dim(p, k).expect("validated branch data has k >= 3");
        StratumClass { p, exponents, k, g, d }
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    /// Sorted canonical exponent multiset.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn genus(&self) -> u64 {
        self.g
    }

    pub fn dim(&self) -> u64 {
        self.d
    }

    pub fn profile(&self) -> Profile {
        Profile::from_exponents(self.p, &self.exponents)
    }

    pub fn branch_data(&self) -> BranchData {
        BranchData::from_trusted(self.p, self.exponents.clone())
    }
}

impl PartialOrd for StratumClass {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StratumClass {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.p, self.k, &self.exponents).cmp(&(other.p, other.k, &other.exponents))
    }
}

impl fmt::Display for StratumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_exponents(f, &self.exponents)
    }
}

/// Whether the sorted vector `xs` is lexicographically least among all its
/// sorted unit multiples.
pub(crate) fn is_canonical_sorted(p: PrimeModulus, xs: &[u32]) -> bool {
    if xs.len() >= p.get() as usize {
        return is_canonical_profile(&Profile::from_exponents(p, xs));
    }
    let mut buf = vec![0u32; xs.len()];
    for u in p.units().skip(1) {
        for (b, &x) in buf.iter_mut().zip(xs) {
            *b = u.scale(x);
        }
        buf.sort_unstable();
        if buf.as_slice() < xs {
            return false;
        }
    }
    true
}

// A sorted vector is lex-smaller exactly when its profile is lex-larger.
fn is_canonical_profile(m: &Profile) -> bool {
    let p = m.p();
    for u in p.units().skip(1) {
        let inv = u.inverse();
        for j in 1..p.get() {
            let scaled = m.get(inv.scale(j));
            let own = m.get(j);
            if scaled != own {
                if scaled > own {
                    return false;
                }
                break;
            }
        }
    }
    true
}

/// Lexicographically least sorted multiple `u * R` over all units `u`.
pub fn canonical_form(bd: &BranchData) -> StratumClass {
    let p = bd.p;
    let mut best: Option<Vec<u32>> = None;
    let mut buf = Vec::with_capacity(bd.k());
    for u in p.units() {
        buf.clear();
        buf.extend(bd.exponents.iter().map(|&r| u.scale(r)));
        buf.sort_unstable();
        if best.as_ref().map_or(true, |b| buf < *b) {
            best = Some(buf.clone());
        }
    }
    StratumClass::from_canonical(p, best.expect("at least one unit"))
}

/// Topological equivalence of two branch data over the same prime.
pub fn equivalent(a: &BranchData, b: &BranchData) -> Result<bool> {
    if a.p != b.p {
        return Err(Error::ModulusMismatch(a.p.get(), b.p.get()));
    }
    Ok(a.k() == b.k() && canonical_form(a) == canonical_form(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn bd(p: u64, xs: &[i64]) -> BranchData {
        BranchData::validate(pm(p), xs).unwrap()
    }

    #[test]
    fn validate_examples() {
        let t1 = bd(5, &[1, 1, 1, 2, 3, 3, 4]);
        assert_eq!(t1.exponents().iter().sum::<u32>(), 15);
        assert_eq!(
            BranchData::validate(pm(5), &[1, 2, 3, 3, 3, 4, 4, 4, 4, 4]),
            Err(Error::SumNotZero { sum: 32, residue: 2, p: 5 })
        );
        assert_eq!(
            BranchData::validate(pm(5), &[1, 1, 1, 1, 2, 4, 4, 4]),
            Err(Error::SumNotZero { sum: 18, residue: 3, p: 5 })
        );
        assert_eq!(
            BranchData::validate(pm(7), &[1, 1, 0, 5]),
            Err(Error::ExponentOutOfRange { index: 2, value: 0, max: 6 })
        );
        assert_eq!(BranchData::validate(pm(7), &[7, 1, 6]).unwrap_err(), Error::ExponentOutOfRange { index: 0, value: 7, max: 6 });
        assert_eq!(BranchData::validate(pm(5), &[1, 4]), Err(Error::TooFewPoints(2)));
    }

    #[test]
    fn profile_examples() {
        assert_eq!(bd(5, &[1, 1, 1, 2, 3, 3, 4]).profile().multiplicities(), &[3, 1, 2, 1]);
        assert_eq!(bd(7, &[1, 1, 1, 2, 5, 4]).profile().multiplicities(), &[3, 1, 0, 1, 1, 0]);
        assert_eq!(bd(5, &[1, 2, 3, 4]).profile().multiplicities(), &[1, 1, 1, 1]);
        let m = bd(7, &[1, 1, 1, 2, 5, 4]).profile();
        assert_eq!(m.total(), 6);
        assert_eq!(m.support().collect::<Vec<_>>(), vec![1, 2, 4, 5]);
        assert_eq!(m.to_exponents(), vec![1, 1, 1, 2, 4, 5]);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(bd(5, &[4, 3, 3]).canonical().exponents(), &[1, 1, 3]);
        assert_eq!(bd(5, &[1, 1, 3]).canonical().exponents(), &[1, 1, 3]);
        assert_eq!(bd(7, &[3, 5, 6]).canonical().exponents(), &[1, 2, 4]);
        let c = bd(5, &[1, 1, 1, 2, 3, 3, 4]).canonical();
        assert_eq!((c.genus(), c.dim(), c.k()), (10, 4, 7));
    }

    #[test]
    fn equivalence_examples() {
        assert!(equivalent(&bd(7, &[1, 2, 4]), &bd(7, &[3, 5, 6])).unwrap());
        assert!(!equivalent(&bd(7, &[1, 1, 5]), &bd(7, &[1, 2, 4])).unwrap());
        let x = bd(11, &[1, 2, 8]);
        assert!(equivalent(&x, &x).unwrap());
        assert_eq!(equivalent(&bd(5, &[1, 1, 3]), &bd(7, &[1, 2, 4])), Err(Error::ModulusMismatch(5, 7)));
    }

    #[test]
    fn canonical_check_paths_agree() {
        for p in [5u64, 7, 11] {
            let p = pm(p);
            for xs in [vec![1u32, 1, 3], vec![1, 2, 2], vec![1, 1, 1, 2, 3, 3, 4], vec![1, 2, 4], vec![1, 1, 2, 2, 3, 3, 4, 4]] {
                if xs.iter().any(|&x| x >= p.get()) {
                    continue;
                }
                let prof = Profile::from_exponents(p, &xs);
                let direct = {
                    let b = BranchData::from_trusted_unchecked(p, xs.clone());
                    canonical_form(&b).exponents() == xs.as_slice()
                };
                assert_eq!(is_canonical_profile(&prof), direct, "{xs:?} mod {p}");
                assert_eq!(is_canonical_sorted(p, &xs), direct);
            }
        }
    }

    impl BranchData {
        fn from_trusted_unchecked(p: PrimeModulus, exponents: Vec<u32>) -> Self {
            BranchData { p, exponents }
        }
    }

    fn arb_branch_data() -> impl Strategy<Value = BranchData> {
        prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23])
            .prop_flat_map(|p| (Just(p), prop::collection::vec(1..p as i64, 2..14)))
            .prop_map(|(p, mut xs)| {
                // close the long relation with one more exponent
                let s: i64 = xs.iter().sum();
                let last = (p as i64 - s.rem_euclid(p as i64)) % p as i64;
                if last == 0 {
                    xs.push(1);
                    xs.push(p as i64 - 1);
                } else {
                    xs.push(last);
                }
                bd(p, &xs)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn canonical_is_idempotent(x in arb_branch_data()) {
            let c = x.canonical();
            prop_assert_eq!(c.branch_data().canonical(), c.clone());
            prop_assert!(is_canonical_sorted(x.p(), c.exponents()));
        }

        #[test]
        fn canonical_ignores_units_and_order(x in arb_branch_data(), u_seed in 1u32..1000, perm_seed in any::<u64>()) {
            let p = x.p();
            let u = p.unit((u_seed % (p.get() - 1) + 1) as u64).unwrap();
            let mut moved = x.scaled(u).exponents().to_vec();
            // deterministic shuffle from the seed
            let mut s = perm_seed;
            for i in (1..moved.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                moved.swap(i, (s >> 33) as usize % (i + 1));
            }
            let y = BranchData::validate(p, &moved.iter().map(|&r| r as i64).collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(y.canonical(), x.canonical());
            prop_assert!(equivalent(&x, &y).unwrap());
        }
    }
}
