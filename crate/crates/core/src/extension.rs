//! One-step extensions of a `C_p` action to `C_p ⋊ C_n`.
//!
//! If the branch data of a class arise by restricting a surface-kernel
//! epimorphism `Delta' -> C_p ⋊_u C_n` to the preimage of the normal `C_p`,
//! the surfaces in the stratum carry a larger group and the stratum is not
//! isolated. [`find_witness`] searches for such epimorphisms and
//! [`verify_witness`] rechecks one from scratch through permutation
//! representations.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{PrimeModulus, Unit};
use crate::error::{Error, Result};
use crate::monodromy::{canonical_form, BranchData, StratumClass};
use crate::signature::{induced_subgroup_signature, pgonal_signature, Permutation, PermutationRep, Signature};
use crate::Rational;

/// Default largest top order tried by [`prove_extension`].
pub const DEFAULT_N_MAX: u32 = 6;

/// An element `(a, b)` of `Z_p ⋊ Z_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Element {
    pub a: u32,
    pub b: u32,
}

impl Element {
    pub fn new(a: u32, b: u32) -> Self {
        Element { a, b }
    }
}

// Search order is by `b`, then `a`.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.b, self.a).cmp(&(other.b, other.a))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Isomorphism-type label used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupShape {
    Cyclic { order: u64 },
    Dihedral { p: u32 },
    Semidirect { p: u32, n: u32 },
}

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupShape::Cyclic { order } => write!(f, "C_{order}"),
            GroupShape::Dihedral { p } => write!(f, "D_{p}"),
            GroupShape::Semidirect { p, n } => write!(f, "C_{p}⋊C_{n}"),
        }
    }
}

/// `Z_p ⋊_u Z_n` with `(a, b)(a', b') = (a + u^b a', b + b')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetacyclicGroup {
    p: PrimeModulus,
    n: u32,
    u: Unit,
    powers: Vec<u32>,
}

impl MetacyclicGroup {
    pub fn new(p: PrimeModulus, n: u32, u: Unit) -> Result<Self> {
        if u.modulus() != p {
            return Err(Error::ModulusMismatch(p.get(), u.modulus().get()));
        }
        if n < 2 || !u.pow(n as u64).is_one() {
            return Err(Error::InvalidExtension { p: p.get(), n, u: u.value() });
        }
        let powers = (0..n).map(|b| u.pow(b as u64).value()).collect();
        Ok(MetacyclicGroup { p, n, u, powers })
    }

    pub fn cyclic(p: PrimeModulus, n: u32) -> Result<Self> {
        Self::new(p, n, Unit::one(p))
    }

    pub fn dihedral(p: PrimeModulus) -> Self {
        let minus_one = p.unit(p.get() as u64 - 1).expect("p - 1 is a unit");
        Self::new(p, 2, minus_one).expect("(-1)^2 = 1")
    }

    pub fn p(&self) -> PrimeModulus {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn u(&self) -> Unit {
        self.u
    }

    pub fn order(&self) -> u64 {
        self.p.get() as u64 * self.n as u64
    }

    pub fn is_abelian(&self) -> bool {
        self.u.is_one()
    }

    pub fn shape(&self) -> GroupShape {
        let p = self.p.get();
        if self.u.is_one() {
            GroupShape::Cyclic { order: self.order() }
        } else if self.n == 2 && self.u.value() == p - 1 {
            GroupShape::Dihedral { p }
        } else {
            GroupShape::Semidirect { p, n: self.n }
        }
    }

    pub fn identity(&self) -> Element {
        Element::new(0, 0)
    }

    pub fn contains(&self, x: Element) -> bool {
        x.a < self.p.get() && x.b < self.n
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        let p = self.p.get() as u64;
        let a = (x.a as u64 + self.powers[x.b as usize] as u64 * y.a as u64) % p;
        Element::new(a as u32, (x.b + y.b) % self.n)
    }

    pub fn inv(&self, x: Element) -> Element {
        let b = (self.n - x.b) % self.n;
        let p = self.p.get() as u64;
        let a = (p - x.a as u64) % p * self.powers[b as usize] as u64 % p;
        Element::new(a as u32, b)
    }

    pub fn pow(&self, x: Element, mut e: u64) -> Element {
        let mut base = x;
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Order of `x`: `s = n / gcd(b, n)` times `p` when `x^s` is nontrivial.
    pub fn element_order(&self, x: Element) -> u64 {
        let s = (self.n / x.b.gcd(&self.n)) as u64;
        if self.pow(x, s).a == 0 {
            s
        } else {
            s * self.p.get() as u64
        }
    }

    /// All elements, ordered by `(b, a)`.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let p = self.p.get();
        (0..self.n).flat_map(move |b| (0..p).map(move |a| Element::new(a, b)))
    }

    /// Order of the subgroup generated by `gens`.
    pub fn generated_order(&self, gens: &[Element]) -> u64 {
        let p = self.p.get() as usize;
        let idx = |x: Element| x.b as usize * p + x.a as usize;
        let mut seen = vec![false; self.order() as usize];
        let mut stack = vec![self.identity()];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[idx(y)] {
                    seen[idx(y)] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }

    /// Exponents of the branch points of the normal `C_p` lying over a cone
    /// point whose generator maps to `x`.
    pub fn lift_exponents(&self, x: Element) -> Vec<u32> {
        let cycles = x.b.gcd(&self.n);
        let s = (self.n / cycles) as u64;
        let c = self.pow(x, s).a;
        if c == 0 {
            return Vec::new();
        }
        let p = self.p.get() as u64;
        (0..cycles as usize).map(|t| (self.powers[t] as u64 * c as u64 % p) as u32).collect()
    }
}

impl fmt::Display for MetacyclicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p={}, n={}, u={})", self.shape(), self.p, self.n, self.u)
    }
}

impl Serialize for MetacyclicGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MetacyclicGroup", 4)?;
        s.serialize_field("shape", &self.shape().to_string())?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("u", &self.u)?;
        s.end()
    }
}

/// A surface-kernel epimorphism onto `C_p ⋊ C_n` whose restriction to the
/// normal `C_p` reproduces `induced_class`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionWitness {
    pub group: MetacyclicGroup,
    pub quotient_signature: Signature,
    pub images: Vec<Element>,
    pub induced_class: StratumClass,
}

impl fmt::Display for ExtensionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {} via [", self.group.shape(), self.quotient_signature)?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

fn pgonal_area(p: PrimeModulus, k: usize) -> Result<Rational> {
    pgonal_signature(p, k)?.normalized_area_in::<i64>()
}

fn divisors_at_least_two(x: u64) -> Vec<u64> {
    (2..=x).filter(|d| x % d == 0).collect()
}

/// Genus-0 signatures of area `area((0; p^k)) / n` with periods among the
/// divisors of `p n`, sorted.
///
/// The enumeration is exhaustive, so its size grows quickly with `k`.
pub fn quotient_signatures(p: PrimeModulus, k: usize, n: u32) -> Result<Vec<Signature>> {
    signatures_with(p, k, n, false)
}

// With `count_points`, only keeps signatures whose period-`p s` cone points
// lift to exactly `k` branch points, and prunes partial lists that can no
// longer absorb the remaining points. Only sound when `p` does not divide `n`.
fn signatures_with(p: PrimeModulus, k: usize, n: u32, count_points: bool) -> Result<Vec<Signature>> {
    if n < 2 {
        return Err(Error::InvalidExtension { p: p.get(), n, u: 1 });
    }
    let area = pgonal_area(p, k)?;
    let target = area.checked_div(&Rational::from_integer(n as i64)).ok_or(Error::Overflow("quotient area"))?
        + Rational::from_integer(2);
    let pv = p.get() as u64;
    let periods = divisors_at_least_two(pv * n as u64);
    let points = |m: u64| -> u64 {
        if m % pv == 0 {
            n as u64 / (m / pv)
        } else {
            0
        }
    };
    let per_point = Rational::new(pv as i64 - 1, pv as i64 * n as i64);
    let mut out = Vec::new();
    let mut current = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn walk(
        start: usize,
        left: Rational,
        pts_left: u64,
        periods: &[u64],
        points: &dyn Fn(u64) -> u64,
        per_point: Rational,
        count_points: bool,
        current: &mut Vec<u64>,
        out: &mut Vec<Signature>,
    ) {
        if left.is_zero() {
            if !count_points || pts_left == 0 {
                out.push(Signature::genus0(current.clone()).expect("periods are at least 2"));
            }
            return;
        }
        for (i, &m) in periods.iter().enumerate().skip(start) {
            let term = Rational::new(m as i64 - 1, m as i64);
            if term > left {
                break;
            }
            let rest = left - term;
            let c = points(m);
            if count_points {
                if c > pts_left {
                    continue;
                }
                if rest < per_point * Rational::from_integer((pts_left - c) as i64) {
                    continue;
                }
            }
            current.push(m);
            walk(i, rest, pts_left.saturating_sub(c), periods, points, per_point, count_points, current, out);
            current.pop();
        }
    }

    walk(0, target, k as u64, &periods, &points, per_point, count_points, &mut current, &mut out);
    out.sort();
    Ok(out)
}

struct Slot {
    period: u64,
    candidates: Vec<(Element, Vec<u32>)>,
    max_points: u64,
}

struct Search<'a> {
    group: &'a MetacyclicGroup,
    slots: Vec<Slot>,
    last_period: u64,
    suffix_points: Vec<u64>,
    remaining: Vec<u64>,
    left: u64,
    chosen: Vec<Element>,
}

impl Search<'_> {
    fn take(&mut self, lifts: &[u32]) -> bool {
        let mut ok = true;
        let mut taken = 0;
        for &r in lifts {
            if self.remaining[r as usize] == 0 {
                ok = false;
                break;
            }
            self.remaining[r as usize] -= 1;
            taken += 1;
        }
        if ok {
            self.left -= lifts.len() as u64;
        } else {
            lifts[..taken].iter().for_each(|&r| self.remaining[r as usize] += 1);
        }
        ok
    }

    fn give_back(&mut self, lifts: &[u32]) {
        lifts.iter().for_each(|&r| self.remaining[r as usize] += 1);
        self.left += lifts.len() as u64;
    }

    fn symmetric_skip(&self, i: usize, x: Element) -> bool {
        if i == 0 || self.slots[i - 1].period != self.slots[i].period {
            return false;
        }
        let prev = self.chosen[i - 1];
        if self.group.is_abelian() {
            x < prev
        } else {
            x.b == 0 && prev.b == 0 && x.a < prev.a
        }
    }

    fn run(&mut self, i: usize, prefix: Element) -> bool {
        if self.left > self.suffix_points[i] {
            return false;
        }
        if i == self.slots.len() {
            return self.close(prefix);
        }
        for c in 0..self.slots[i].candidates.len() {
            let (x, lifts) = {
                let (x, l) = &self.slots[i].candidates[c];
                (*x, l.clone())
            };
            if self.symmetric_skip(i, x) || !self.take(&lifts) {
                continue;
            }
            self.chosen.push(x);
            if self.run(i + 1, self.group.mul(prefix, x)) {
                return true;
            }
            self.chosen.pop();
            self.give_back(&lifts);
        }
        false
    }

    fn close(&mut self, prefix: Element) -> bool {
        let x = self.group.inv(prefix);
        if self.group.element_order(x) != self.last_period {
            return false;
        }
        let lifts = self.group.lift_exponents(x);
        if lifts.len() as u64 != self.left || !self.take(&lifts) {
            return false;
        }
        self.chosen.push(x);
        if self.group.generated_order(&self.chosen) == self.group.order() {
            return true;
        }
        self.chosen.pop();
        self.give_back(&lifts);
        false
    }
}

fn search_signature(group: &MetacyclicGroup, sig: &Signature, cls: &StratumClass) -> Option<Vec<Element>> {
    let periods = sig.periods();
    let (&last_period, head) = periods.split_last()?;
    let mut by_period: Vec<(u64, Vec<(Element, Vec<u32>)>)> = Vec::new();
    for &m in head {
        if by_period.iter().any(|(q, _)| *q == m) {
            continue;
        }
        let cands: Vec<_> = group
            .elements()
            .filter(|&x| group.element_order(x) == m)
            .map(|x| (x, group.lift_exponents(x)))
            .collect();
        by_period.push((m, cands));
    }
    let slots: Vec<Slot> = head
        .iter()
        .map(|&m| {
            let candidates = by_period.iter().find(|(q, _)| *q == m).expect("filled above").1.clone();
            let max_points = candidates.iter().map(|(_, l)| l.len() as u64).max().unwrap_or(0);
            Slot { period: m, candidates, max_points }
        })
        .collect();
    if slots.iter().any(|s| s.candidates.is_empty()) {
        return None;
    }
    let last_max = group
        .elements()
        .filter(|&x| group.element_order(x) == last_period)
        .map(|x| group.lift_exponents(x).len() as u64)
        .max()?;
    let mut suffix_points = vec![last_max; slots.len() + 1];
    for i in (0..slots.len()).rev() {
        suffix_points[i] = suffix_points[i + 1] + slots[i].max_points;
    }
    let mut search = Search {
        group,
        slots,
        last_period,
        suffix_points,
        remaining: (0..cls.p().get()).map(|j| cls.profile().get(j)).collect(),
        left: cls.k() as u64,
        chosen: Vec::with_capacity(periods.len()),
    };
    if search.run(0, group.identity()) {
        Some(search.chosen)
    } else {
        None
    }
}

fn admissible_signatures(group: &MetacyclicGroup, k: usize) -> Result<Vec<Signature>> {
    let count_points = group.n() % group.p().get() != 0;
    signatures_with(group.p(), k, group.n(), count_points)
}

/// First witness for `cls` in `C_p ⋊_u C_n`, searching signatures in sorted
/// order and images by `(b, a)`.
///
/// The returned witness induces exactly the canonical exponents of `cls`.
pub fn find_witness(cls: &StratumClass, n: u32, u: Unit) -> Result<Option<ExtensionWitness>> {
    let group = MetacyclicGroup::new(cls.p(), n, u)?;
    for sig in admissible_signatures(&group, cls.k())? {
        if let Some(w) = find_witness_on(&group, &sig, cls) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Search restricted to a single quotient signature.
pub fn find_witness_on(group: &MetacyclicGroup, sig: &Signature, cls: &StratumClass) -> Option<ExtensionWitness> {
    search_signature(group, sig, cls).map(|images| ExtensionWitness {
        group: group.clone(),
        quotient_signature: sig.clone(),
        images,
        induced_class: cls.clone(),
    })
}

/// Units `u` with `u^n = 1`, ascending.
pub fn conjugation_units(p: PrimeModulus, n: u32) -> Vec<Unit> {
    p.units().filter(|u| u.pow(n as u64).is_one()).collect()
}

/// One witness per `(n, u, quotient signature)` for `2 <= n <= n_max`.
pub fn prove_extension(cls: &StratumClass, n_max: u32) -> Result<Vec<ExtensionWitness>> {
    let p = cls.p();
    let mut groups = Vec::new();
    for n in 2..=n_max {
        for u in conjugation_units(p, n) {
            groups.push(MetacyclicGroup::new(p, n, u)?);
        }
    }
    let mut jobs = Vec::new();
    for g in &groups {
        for sig in admissible_signatures(g, cls.k())? {
            jobs.push((g, sig));
        }
    }
    let found: Vec<Option<ExtensionWitness>> =
        jobs.par_iter().map(|(g, sig)| find_witness_on(g, sig, cls)).collect();
    Ok(found.into_iter().flatten().collect())
}

fn reject(msg: impl Into<String>) -> Error {
    Error::WitnessRejected(msg.into())
}

fn order_by_iteration(group: &MetacyclicGroup, x: Element) -> u64 {
    let mut y = x;
    let mut s = 1;
    while y != group.identity() {
        y = group.mul(y, x);
        s += 1;
    }
    s
}

fn regular_rep(group: &MetacyclicGroup, images: &[Element]) -> Result<PermutationRep> {
    let all: Vec<Element> = group.elements().collect();
    let index = |y: Element| y.b as usize * group.p().get() as usize + y.a as usize;
    let perms = images
        .iter()
        .map(|&x| Permutation::new(all.iter().map(|&y| index(group.mul(y, x)) as u32).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermutationRep::new(all.len(), perms)
}

/// Rechecks every defining property of a witness without using the search
/// internals: exact image orders, product one, generation, the area
/// identity, the coset-action subgroup signature `(0; p^k)`, the regular
/// action giving a surface group, and the induced exponents.
pub fn verify_witness(w: &ExtensionWitness) -> Result<()> {
    let g = &w.group;
    let sig = &w.quotient_signature;
    let cls = &w.induced_class;
    let p = g.p();
    if cls.p() != p {
        return Err(Error::ModulusMismatch(p.get(), cls.p().get()));
    }
    if w.images.len() != sig.periods().len() {
        return Err(reject("one image per period required"));
    }
    if let Some(x) = w.images.iter().find(|&&x| !g.contains(x)) {
        return Err(reject(format!("{x} is not a group element")));
    }
    for (x, &m) in w.images.iter().zip(sig.periods()) {
        let o = order_by_iteration(g, *x);
        if o != m {
            return Err(reject(format!("{x} has order {o}, period is {m}")));
        }
    }
    let product = w.images.iter().fold(g.identity(), |acc, &x| g.mul(acc, x));
    if product != g.identity() {
        return Err(Error::ProductNotIdentity);
    }
    if g.generated_order(&w.images) != g.order() {
        return Err(reject("images do not generate the group"));
    }
    let big = pgonal_signature(p, cls.k())?;
    let lhs = sig.normalized_area() * Rational::from_integer(g.n() as i64);
    if lhs != big.normalized_area() {
        return Err(reject(format!("n * area = {lhs}, expected {}", big.normalized_area())));
    }

    let shifts: Vec<u64> = w.images.iter().map(|x| x.b as u64).collect();
    let cosets = PermutationRep::cyclic_regular(g.n() as usize, &shifts);
    let induced = induced_subgroup_signature(sig, &cosets)?;
    if induced != big {
        return Err(reject(format!("coset action gives {induced}, expected {big}")));
    }
    let surface = induced_subgroup_signature(sig, &regular_rep(g, &w.images)?)?;
    if surface != Signature::surface(cls.genus()) {
        return Err(reject(format!("kernel has signature {surface}")));
    }

    let mut exponents = Vec::with_capacity(cls.k());
    for (&x, (perm, &m)) in w.images.iter().zip(cosets.elliptic.iter().zip(sig.periods())) {
        let mut seen = vec![false; perm.degree()];
        for t in 0..perm.degree() as u32 {
            if seen[t as usize] {
                continue;
            }
            let mut len = 0u64;
            let mut y = t;
            while !seen[y as usize] {
                seen[y as usize] = true;
                y = perm.apply(y);
                len += 1;
            }
            if len == m {
                continue;
            }
            let rep = Element::new(0, t);
            let stab = g.mul(g.mul(rep, g.pow(x, len)), g.inv(rep));
            if stab.b != 0 || stab.a == 0 {
                return Err(reject(format!("lift of {x} at coset {t} is {stab}")));
            }
            exponents.push(stab.a as i64);
        }
    }
    let data = BranchData::validate(p, &exponents)?;
    let got = canonical_form(&data);
    if got != *cls {
        return Err(reject(format!("induced class is {got}, expected {cls}")));
    }
    Ok(())
}
