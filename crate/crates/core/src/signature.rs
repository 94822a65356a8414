//! Fuchsian signatures, hyperbolic areas, and subgroup signatures from
//! transitive permutation representations.

use std::fmt;

use serde::Serialize;

use crate::arith::PrimeModulus;
use crate::error::{Error, Result};
use crate::rational::{ExactInt, ExactRational};
use crate::Rational;

/// A signature `(h; m_1, ..., m_k)`. Periods are kept sorted, so two
/// signatures compare equal iff they describe the same orbifold type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Signature {
    genus: u64,
    periods: Vec<u64>,
}

impl Signature {
    pub fn new(genus: u64, mut periods: Vec<u64>) -> Result<Self> {
        if let Some(&m) = periods.iter().find(|&&m| m < 2) {
            return Err(Error::PeriodTooSmall(m));
        }
        periods.sort_unstable();
        Ok(Signature { genus, periods })
    }

    pub fn genus0(periods: Vec<u64>) -> Result<Self> {
        Self::new(0, periods)
    }

    /// A surface group signature `(g; -)`.
    pub fn surface(genus: u64) -> Self {
        Signature { genus, periods: Vec::new() }
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    /// Hyperbolic area divided by `2*pi`: `2h - 2 + sum(1 - 1/m_i)`.
    pub fn normalized_area(&self) -> Rational {
        self.normalized_area_in::<i64>().expect("normalized area overflowed i64")
    }

    /// [`Signature::normalized_area`] in an arbitrary backing integer.
    pub fn normalized_area_in<T: ExactInt>(&self) -> Result<ExactRational<T>> {
        let of = || Error::Overflow("normalized area");
        let cast = |x: u64| T::from(x).ok_or_else(of);
        let two = cast(2)?;
        let h = cast(self.genus)?;
        let base = two.checked_mul(&h).and_then(|x| x.checked_sub(&two)).ok_or_else(of)?;
        let mut acc = ExactRational::from_integer(base);
        for &m in &self.periods {
            let m = cast(m)?;
            let term = ExactRational::checked_new(m - T::one(), m).ok_or_else(of)?;
            acc = acc.checked_add(&term).ok_or_else(of)?;
        }
        Ok(acc)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.normalized_area().is_positive()
    }

    /// Complex dimension of the Teichmüller space, `3h - 3 + k`.
    pub fn teichmuller_dim(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.periods.len() as i64
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.genus)?;
        if self.periods.is_empty() {
            return write!(f, "-)");
        }
        let mut first = true;
        for m in &self.periods {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

/// `(0; p, ..., p)` with `k` periods.
pub fn pgonal_signature(p: PrimeModulus, k: usize) -> Result<Signature> {
    if k < 3 {
        return Err(Error::TooFewPeriods(k));
    }
    Ok(Signature { genus: 0, periods: vec![p.get() as u64; k] })
}

/// Genus and stratum dimension of a cyclic p-gonal cover with `k` branch
/// points: `g = (k - 2)(p - 1)/2`, `d = k - 3`.
pub fn genus_and_dim(p: PrimeModulus, k: usize) -> Result<(u64, u64)> {
    if k < 3 {
        return Err(Error::TooFewPeriods(k));
    }
    let k = k as u64;
    let g = (k - 2).checked_mul(p.half()).ok_or(Error::Overflow("genus"))?;
    Ok((g, k - 3))
}

/// Genus from which the p-gonal morphism is unique: `(p - 1)^2 + 1`.
pub fn uniqueness_bound(p: PrimeModulus) -> u64 {
    let q = p.get() as u64 - 1;
    q * q + 1
}

/// A permutation of `{0, ..., n-1}` acting on the right: `x^(st) = (x^s)^t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::RepresentationShape("image list is not a permutation".into()));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u32).collect())
    }

    /// `x -> x + shift mod n`.
    pub fn rotation(n: usize, shift: u64) -> Self {
        Permutation((0..n as u64).map(|x| ((x + shift) % n as u64) as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&x| other.apply(x)).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn cycle_lengths(&self) -> Vec<u64> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }
}

/// Images of the canonical generators of a signature in `Sym(N)`.
///
/// Only genus-0 sources are supported, so `hyperbolic` must be empty; the
/// slot is kept so the shape matches the full presentation.
#[derive(Debug, Clone)]
pub struct PermutationRep {
    degree: usize,
    pub hyperbolic: Vec<(Permutation, Permutation)>,
    pub elliptic: Vec<Permutation>,
}

impl PermutationRep {
    pub fn new(degree: usize, elliptic: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::RepresentationShape("degree must be positive".into()));
        }
        if elliptic.iter().any(|x| x.degree() != degree) {
            return Err(Error::RepresentationShape(format!("every image must have degree {degree}")));
        }
        Ok(PermutationRep { degree, hyperbolic: Vec::new(), elliptic })
    }

    /// The regular action of `Z_n` on itself, generator `i` acting by `+shifts[i]`.
    pub fn cyclic_regular(n: usize, shifts: &[u64]) -> Self {
        let elliptic = shifts.iter().map(|&s| Permutation::rotation(n, s)).collect();
        PermutationRep { degree: n, hyperbolic: Vec::new(), elliptic }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_transitive(&self) -> bool {
        let gens: Vec<&Permutation> =
            self.elliptic.iter().chain(self.hyperbolic.iter().flat_map(|(a, b)| [a, b])).collect();
        let mut seen = vec![false; self.degree];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.degree
    }

    /// Whether `x_1 x_2 ... x_k = 1`.
    pub fn satisfies_long_relation(&self) -> bool {
        self.elliptic
            .iter()
            .fold(Permutation::identity(self.degree), |acc, x| acc.then(x))
            .is_identity()
    }
}

/// Signature of the finite-index subgroup determined by a transitive
/// permutation representation.
///
/// Each cycle of length `l < m_i` in the image of `x_i` contributes a period
/// `m_i / l`; the orbit genus is then solved from
/// `area(subgroup) = N * area(sig)`.
pub fn induced_subgroup_signature(sig: &Signature, rep: &PermutationRep) -> Result<Signature> {
    if sig.genus != 0 || !rep.hyperbolic.is_empty() {
        return Err(Error::RepresentationShape("only genus-0 sources are supported".into()));
    }
    if rep.elliptic.len() != sig.periods.len() {
        return Err(Error::RepresentationShape(format!(
            "{} images for {} periods",
            rep.elliptic.len(),
            sig.periods.len()
        )));
    }
    if !rep.is_transitive() {
        return Err(Error::NonTransitive);
    }
    if !rep.satisfies_long_relation() {
        return Err(Error::ProductNotIdentity);
    }
    let mut periods = Vec::new();
    for (index, (x, &m)) in rep.elliptic.iter().zip(&sig.periods).enumerate() {
        let lens = x.cycle_lengths();
        let order = lens.iter().fold(1u64, |acc, &l| num_integer::lcm(acc, l));
        if m % order != 0 {
            return Err(Error::ImageOrderMismatch { index, order, period: m });
        }
        periods.extend(lens.into_iter().filter(|&l| l < m).map(|l| m / l));
    }
    let n = i64::try_from(rep.degree).map_err(|_| Error::Overflow("degree"))?;
    let target = sig
        .normalized_area()
        .checked_mul_int(n)
        .ok_or(Error::Overflow("subgroup area"))?;
    let cone = Signature::genus0(periods.clone())?.normalized_area() + Rational::from_integer(2);
    let twice_genus = target - cone + Rational::from_integer(2);
    let genus = match twice_genus.to_integer() {
        Some(t) if t >= 0 && t % 2 == 0 => (t / 2) as u64,
        _ => return Err(Error::NoIntegralGenus(format!("2h = {twice_genus}"))),
    };
    Signature::new(genus, periods)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    fn sig(h: u64, ps: &[u64]) -> Signature {
        Signature::new(h, ps.to_vec()).unwrap()
    }

    #[test]
    fn area_examples() {
        assert_eq!(sig(0, &[5; 7]).normalized_area(), Rational::new(18, 5));
        assert_eq!(sig(10, &[]).normalized_area(), Rational::from_integer(18));
        assert_eq!(sig(0, &[5, 5, 5, 10, 10]).normalized_area(), Rational::new(11, 5));
        assert_eq!(sig(0, &[2, 3, 7]).normalized_area(), Rational::new(1, 42));
        assert!(!sig(0, &[2, 3, 6]).is_hyperbolic());
    }

    #[test]
    fn area_in_narrow_width_overflows_loudly() {
        let s = sig(0, &[2_147_483_629, 2_147_483_587, 2_147_483_579]);
        assert_eq!(s.normalized_area_in::<i32>(), Err(Error::Overflow("normalized area")));
        assert!(s.normalized_area_in::<i128>().is_ok());
    }

    #[test]
    fn periods_are_sorted_and_validated() {
        assert_eq!(sig(0, &[10, 5, 10, 5, 5]), sig(0, &[5, 5, 5, 10, 10]));
        assert_eq!(Signature::new(0, vec![3, 1]), Err(Error::PeriodTooSmall(1)));
        assert_eq!(sig(0, &[5, 5, 5, 10, 10]).to_string(), "(0; 5,5,5,10,10)");
        assert_eq!(Signature::surface(10).to_string(), "(10; -)");
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(sig(0, &[5; 7]).teichmuller_dim(), 4);
        assert_eq!(sig(0, &[7, 7, 7]).teichmuller_dim(), 0);
        assert_eq!(sig(2, &[]).teichmuller_dim(), 3);
    }

    #[test]
    fn pgonal_signature_examples() {
        assert_eq!(pgonal_signature(pm(5), 7).unwrap(), sig(0, &[5; 7]));
        assert_eq!(pgonal_signature(pm(7), 6).unwrap(), sig(0, &[7; 6]));
        assert_eq!(pgonal_signature(pm(5), 2), Err(Error::TooFewPeriods(2)));
    }

    #[test]
    fn genus_and_dim_examples() {
        assert_eq!(genus_and_dim(pm(5), 7).unwrap(), (10, 4));
        assert_eq!(genus_and_dim(pm(7), 6).unwrap(), (12, 3));
        assert_eq!(genus_and_dim(pm(11), 3).unwrap(), (5, 0));
    }

    #[test]
    fn genus_dim_roundtrip_and_area_positive() {
        for p in [5u64, 7, 11, 13, 101, 401] {
            let p = pm(p);
            for k in 3..60usize {
                let (g, d) = genus_and_dim(p, k).unwrap();
                assert_eq!(g, (d + 1) * p.half());
                assert_eq!(k as u64, 2 * g / (p.get() as u64 - 1) + 2);
                let s = pgonal_signature(p, k).unwrap();
                assert_eq!(s.teichmuller_dim(), d as i64);
                let expected = Rational::from_integer(-2)
                    + Rational::from_integer(k as i64) * Rational::new(p.get() as i64 - 1, p.get() as i64);
                assert_eq!(s.normalized_area(), expected);
                assert!(expected.is_positive());
            }
        }
    }

    #[test]
    fn uniqueness_bound_examples() {
        assert_eq!(uniqueness_bound(pm(5)), 17);
        assert_eq!(uniqueness_bound(pm(7)), 37);
        assert_eq!(uniqueness_bound(pm(11)), 101);
    }

    #[test]
    fn regular_c5_action_gives_surface_group() {
        let rep = PermutationRep::cyclic_regular(5, &[1, 1, 1, 2, 3, 3, 4]);
        let out = induced_subgroup_signature(&sig(0, &[5; 7]), &rep).unwrap();
        assert_eq!(out, Signature::surface(10));
    }

    #[test]
    fn c10_coset_action_on_two_cosets() {
        // Z_10 acting on Z_10 / <2>: even elements fix both cosets, odd swap them
        let rep = PermutationRep::cyclic_regular(2, &[2, 4, 6, 9, 9]);
        let out = induced_subgroup_signature(&sig(0, &[5, 5, 5, 10, 10]), &rep).unwrap();
        assert_eq!(out, sig(0, &[5; 8]));
        assert_eq!(out.normalized_area(), sig(0, &[5, 5, 5, 10, 10]).normalized_area() * Rational::from_integer(2));
    }

    #[test]
    fn trivial_rep_is_identity() {
        let s = sig(0, &[2, 3, 7]);
        let rep = PermutationRep::new(1, vec![Permutation::identity(1); 3]).unwrap();
        assert_eq!(induced_subgroup_signature(&s, &rep).unwrap(), s);
    }

    #[test]
    fn rejects_bad_reps() {
        let s = sig(0, &[5; 3]);
        let not_transitive = PermutationRep::new(2, vec![Permutation::identity(2); 3]).unwrap();
        assert_eq!(induced_subgroup_signature(&s, &not_transitive), Err(Error::NonTransitive));
        let bad_product = PermutationRep::cyclic_regular(5, &[1, 1, 1]);
        assert_eq!(induced_subgroup_signature(&s, &bad_product), Err(Error::ProductNotIdentity));
        let wrong_order = PermutationRep::cyclic_regular(2, &[1, 1, 0]);
        assert!(matches!(
            induced_subgroup_signature(&s, &wrong_order),
            Err(Error::ImageOrderMismatch { index: 0, order: 2, period: 5 })
        ));
        let wrong_count = PermutationRep::cyclic_regular(5, &[1, 4]);
        assert!(matches!(induced_subgroup_signature(&s, &wrong_count), Err(Error::RepresentationShape(_))));
        let mut with_handles = PermutationRep::cyclic_regular(5, &[1, 1, 3]);
        with_handles.hyperbolic.push((Permutation::identity(5), Permutation::identity(5)));
        assert!(matches!(induced_subgroup_signature(&s, &with_handles), Err(Error::RepresentationShape(_))));
    }

    #[test]
    fn fixed_points_become_cone_points() {
        let s = sig(0, &[2, 2, 2, 3]);
        let rep = PermutationRep::cyclic_regular(2, &[1, 1, 0, 0]);
        let out = induced_subgroup_signature(&s, &rep).unwrap();
        assert_eq!(out, sig(0, &[2, 2, 3, 3]));
        assert_eq!(out.normalized_area(), s.normalized_area() * Rational::from_integer(2));
        let s = sig(0, &[4, 4, 4]);
        let rep = PermutationRep::cyclic_regular(4, &[1, 1, 2]);
        assert_eq!(induced_subgroup_signature(&s, &rep).unwrap(), sig(1, &[2, 2]));
    }
}
