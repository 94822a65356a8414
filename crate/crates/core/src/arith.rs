//! Modular arithmetic over a prime modulus.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test.
///
/// Strong-pseudoprime test with the first twelve primes as bases, which has
/// no false positives below 3.3 * 10^24 and so is exact on `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending. Trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An odd prime `p >= 5`, the order of the deck group `C_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::ModulusTooSmall(p));
        }
        let p = u32::try_from(p).map_err(|_| Error::Overflow("prime modulus"))?;
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// `(p - 1) / 2`.
    #[inline]
    pub fn half(self) -> u64 {
        (self.0 as u64 - 1) / 2
    }

    /// All units `1..p`, ascending.
    pub fn units(self) -> impl Iterator<Item = Unit> {
        (1..self.0).map(move |v| Unit { value: v, modulus: self })
    }

    pub fn unit(self, value: u64) -> Result<Unit> {
        Unit::new(value, self)
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub(crate) fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    /// Smallest primitive root.
    pub fn primitive_root(self) -> Unit {
        let p = self.0 as u64;
        let factors = prime_factors(p - 1);
        let g = (2..p)
            .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
            .expect("every prime has a primitive root");
        Unit { value: g as u32, modulus: self }
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for PrimeModulus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

/// An element of `(Z/p)^*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Unit {
    value: u32,
    modulus: PrimeModulus,
}

impl Unit {
    pub fn new(value: u64, modulus: PrimeModulus) -> Result<Self> {
        if value == 0 || value >= modulus.0 as u64 {
            return Err(Error::NotAUnit { value, p: modulus.0 });
        }
        Ok(Unit { value: value as u32, modulus })
    }

    pub fn one(modulus: PrimeModulus) -> Self {
        Unit { value: 1, modulus }
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn pow(self, e: u64) -> Unit {
        let v = pow_mod(self.value as u64, e, self.modulus.0 as u64) as u32;
        Unit { value: v, modulus: self.modulus }
    }

    pub fn inverse(self) -> Unit {
        self.pow(self.modulus.0 as u64 - 2)
    }

    /// `self * x mod p` for a residue `x`.
    #[inline]
    pub fn scale(self, x: u32) -> u32 {
        self.modulus.mul(self.value, x)
    }
}

impl std::ops::Mul for Unit {
    type Output = Unit;
    fn mul(self, rhs: Unit) -> Unit {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Unit { value: self.modulus.mul(self.value, rhs.value), modulus: self.modulus }
    }
}

impl PartialOrd for Unit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Unit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.modulus, self.value).cmp(&(other.modulus, other.value))
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Unit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.value)
    }
}

/// Multiplicative order of `u` modulo `p`. Always divides `p - 1`.
pub fn mult_order(u: Unit) -> u64 {
    let p = u.modulus.0 as u64;
    let mut order = p - 1;
    for q in prime_factors(p - 1) {
        while order % q == 0 && pow_mod(u.value as u64, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

/// Every unit `u != 1` of prime multiplicative order `q`, as `(u, q)` pairs sorted by `u`.
pub fn units_of_prime_order(p: PrimeModulus) -> Vec<(Unit, u32)> {
    let g = p.primitive_root();
    let n = p.0 as u64 - 1;
    let mut out = Vec::new();
    for q in prime_factors(n) {
        let h = g.pow(n / q);
        let mut us: Vec<Unit> = (1..q).map(|j| h.pow(j)).collect();
        us.sort();
        out.extend(us.into_iter().map(|u| (u, q as u32)));
    }
    out.sort();
    out
}

/// `lcm((p_i - 1) / 2)` over a set of distinct primes.
pub fn lcm_half_primes(primes: &[PrimeModulus]) -> Result<u64> {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeList);
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut acc = 1u64;
    for p in primes {
        if !seen.insert(p.get()) {
            return Err(Error::DuplicatePrime(p.get()));
        }
        acc = acc.lcm(&p.half());
    }
    Ok(acc)
}
