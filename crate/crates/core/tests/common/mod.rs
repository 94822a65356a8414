#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use pgonal_core::monodromy::BranchData;
use pgonal_core::PrimeModulus;
use proptest::prelude::*;

pub fn pm(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

/// Lex-least sorted `u * R` over every unit, straight from the definition.
pub fn canonical(p: u32, exps: &[u32]) -> Vec<u32> {
    (1..p)
        .map(|u| {
            let mut v: Vec<u32> = exps.iter().map(|&r| r * u % p).collect();
            v.sort_unstable();
            v
        })
        .min()
        .unwrap()
}

/// Every ordered tuple in `[1, p-1]^k` with zero sum, reduced to classes.
pub fn brute_classes(p: u32, k: usize) -> BTreeSet<Vec<u32>> {
    let mut digits = vec![1u32; k];
    let mut counts = vec![0u8; p as usize];
    counts[1] = k as u8;
    let mut sum = k as u32;
    let mut multisets: HashSet<Vec<u8>> = HashSet::new();
    loop {
        if sum % p == 0 {
            multisets.insert(counts.clone());
        }
        let mut i = 0;
        loop {
            if i == k {
                return multisets
                    .into_iter()
                    .map(|c| {
                        let exps: Vec<u32> =
                            (1..p).flat_map(|j| std::iter::repeat(j).take(c[j as usize] as usize)).collect();
                        canonical(p, &exps)
                    })
                    .collect();
            }
            counts[digits[i] as usize] -= 1;
            if digits[i] + 1 < p {
                digits[i] += 1;
                sum += 1;
                counts[digits[i] as usize] += 1;
                break;
            }
            sum -= p - 2;
            digits[i] = 1;
            counts[1] += 1;
            i += 1;
        }
    }
}

pub fn brute_range() -> Vec<(u32, usize)> {
    let mut v = Vec::new();
    for p in [5u32, 7, 11, 13, 17, 19, 23] {
        for k in 3.. {
            if ((p - 1) as u64).pow(k as u32) > 10_000_000 {
                break;
            }
            v.push((p, k));
        }
    }
    v
}

/// Whether some permutation of prime order `q` of the branch points,
/// together with a unit `u` with `u^q = 1`, carries label `r_i` to
/// `u * r_i`, fixing at most two points when `u = 1`.
pub fn has_rotation(p: u32, exps: &[u32]) -> bool {
    let k = exps.len();
    for sigma in (0..k).permutations(k) {
        let mut seen = vec![false; k];
        let mut lens = Vec::new();
        for s in 0..k {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = sigma[x];
                len += 1;
            }
            lens.push(len);
        }
        let Some(&q) = lens.iter().max() else { continue };
        if q == 1 || !lens.iter().all(|&l| l == 1 || l == q) || !(2..q).all(|d| q % d != 0) {
            continue;
        }
        let fixed = lens.iter().filter(|&&l| l == 1).count();
        for u in 1..p {
            let u_pow_q = (0..q).fold(1u64, |acc, _| acc * u as u64 % p as u64);
            if u_pow_q != 1 || (u == 1 && fixed > 2) {
                continue;
            }
            if (0..k).all(|i| exps[sigma[i]] == exps[i] * u % p) {
                return true;
            }
        }
    }
    false
}

/// Valid branch data with the last exponent solving the long relation.
pub fn branch_data(primes: Vec<u64>, k: std::ops::Range<usize>) -> impl Strategy<Value = BranchData> {
    (prop::sample::select(primes), k)
        .prop_flat_map(|(p, k)| (Just(p), prop::collection::vec(1..p as i64, k - 1)))
        .prop_filter_map("last exponent would be zero", |(p, mut xs)| {
            let last = (-xs.iter().sum::<i64>()).rem_euclid(p as i64);
            (last != 0).then(|| {
                xs.push(last);
                BranchData::validate(pm(p), &xs).unwrap()
            })
        })
}
