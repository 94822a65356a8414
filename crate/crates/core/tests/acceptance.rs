//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_classes, brute_range, canonical, has_rotation, pm};
use num_integer::Integer;
use pgonal_core::atlas::{atlas, multiprime, paper_check, AtlasMode};
use pgonal_core::extension::{prove_extension, verify_witness, ExtensionWitness, GroupShape};
use pgonal_core::isolation::{isolation_verdict, verdict_for};
use pgonal_core::monodromy::{burnside_count, canonical_form, census, paper_witness, BranchData};
use pgonal_core::signature::{induced_subgroup_signature, PermutationRep, Signature};
use pgonal_core::{Error, Rational128, DEFAULT_BUDGET};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn isolated(p: u64, k: usize) -> Result<usize, String> {
    Ok(census(pm(p), k, DEFAULT_BUDGET).map_err(err)?.iter().filter(|c| isolation_verdict(c).is_isolated()).count())
}

fn is_isolated(p: u64, xs: &[i64]) -> Result<bool, String> {
    Ok(verdict_for(&BranchData::validate(pm(p), xs).map_err(err)?.profile()).is_isolated())
}

fn congruence_sweep() -> Check {
    for p in [7u64, 11, 13, 17, 19] {
        for d in 2..=2 * p + 3 {
            let w = paper_witness(pm(p), d, DEFAULT_BUDGET).map_err(err)?;
            let xs = w.data.exponents();
            ensure!(xs.len() as u64 == d + 3, "p={p} d={d}: {} points", xs.len());
            ensure!(xs.iter().all(|&r| r >= 1 && (r as u64) < p), "p={p} d={d}: exponent out of range");
            ensure!(xs.iter().map(|&r| r as u64).sum::<u64>() % p == 0, "p={p} d={d}: sum not zero");
            ensure!(verdict_for(&w.data.profile()).is_isolated(), "p={p} d={d}: {} not isolated", w.data);
        }
    }
    Ok(())
}

fn pentagonal_isolated() -> Check {
    ensure!(is_isolated(5, &[1, 1, 1, 2, 3, 3, 4])?, "(1,1,1,2,3,3,4) not isolated");
    ensure!(is_isolated(5, &[1, 1, 1, 1, 1, 1, 2, 3, 4])?, "(1^6,2,3,4) not isolated");
    ensure!(isolated(5, 10)? >= 1, "no isolated class at g=16");
    let theta3 = BranchData::validate(pm(5), &[1, 2, 3, 3, 3, 4, 4, 4, 4, 4]);
    ensure!(matches!(theta3, Err(Error::SumNotZero { .. })), "printed theta_3 gave {theta3:?}");
    let errata = paper_check().errata;
    ensure!(errata.iter().any(|e| e.item.contains("theta_3")), "theta_3 missing from errata");
    Ok(())
}

fn genus_twelve_pentagonal() -> Check {
    let classes = census(pm(5), 8, DEFAULT_BUDGET).map_err(err)?;
    ensure!(classes.len() == 10, "{} classes", classes.len());
    ensure!(brute_classes(5, 8).len() == 10, "brute force disagrees");
    ensure!(burnside_count(pm(5), 8).map_err(err)? == 10, "Burnside disagrees");
    ensure!(classes.iter().all(|c| !isolation_verdict(c).is_isolated()), "an isolated class at g=12");
    let ix = BranchData::validate(pm(5), &[1, 1, 2, 2, 3, 3, 4, 4]).map_err(err)?.canonical();
    let ws = prove_extension(&ix, 4).map_err(err)?;
    let shapes: HashSet<GroupShape> = ws.iter().map(|w| w.group.shape()).collect();
    for want in [GroupShape::Cyclic { order: 10 }, GroupShape::Dihedral { p: 5 }, GroupShape::Semidirect { p: 5, n: 4 }] {
        ensure!(shapes.contains(&want), "no {want} witness for class ix");
    }
    Ok(())
}

fn isolated_by_prime(k: usize, none: &[u64], some: &[u64]) -> Check {
    for &p in none {
        let n = isolated(p, k)?;
        ensure!(n == 0, "p={p} k={k}: {n} isolated");
    }
    for &p in some {
        ensure!(isolated(p, k)? >= 1, "p={p} k={k}: none isolated");
    }
    Ok(())
}

fn atlas_examples() -> Check {
    let table: [(u64, &[(u32, u64)]); 10] = [
        (10, &[(5, 4), (11, 1)]),
        (12, &[(7, 3), (13, 1)]),
        (20, &[(5, 9), (11, 3), (41, 0)]),
        (24, &[(5, 11), (7, 7), (13, 3), (17, 2)]),
        (30, &[(5, 14), (7, 9), (11, 5), (13, 4), (31, 1), (61, 0)]),
        (60, &[(5, 29), (7, 19), (11, 11), (13, 9), (31, 3), (41, 2), (61, 1)]),
        (1000, &[(5, 499), (11, 199), (17, 124), (41, 49), (101, 19), (251, 7), (401, 4)]),
        (2012, &[(5, 1005)]),
        (15, &[(7, 4), (11, 2), (31, 0)]),
        (18, &[(5, 8), (7, 5), (13, 2), (19, 1), (37, 0)]),
    ];
    for (g, want) in table {
        let report = atlas(g, AtlasMode::Witness, DEFAULT_BUDGET).map_err(err)?;
        ensure!(report.isolated_dims() == want, "g={g}: {:?}", report.isolated_dims());
        for e in &report.entries {
            ensure!(e.g * 2 == (e.d + 1) * (e.p.get() as u64 - 1), "g={g} p={}: g != (d+1)(p-1)/2", e.p);
        }
    }
    let twelve = atlas(12, AtlasMode::Witness, DEFAULT_BUDGET).map_err(err)?;
    ensure!(twelve.entry(5).is_some_and(|e| !e.is_isolated()), "pentagonal g=12 reported isolated");
    let errata = paper_check().errata;
    for (g, p, d) in [(15, "heptagonal", 4), (18, "13-gonal", 2)] {
        let hit = errata
            .iter()
            .any(|e| e.item.contains(p) && e.item.contains(&format!("g={g}")) && e.printed == "3" && e.computed.starts_with(&d.to_string()));
        ensure!(hit, "no erratum for the {p} dimension at g={g}");
    }
    Ok(())
}

fn multiprime_five_seven() -> Check {
    let r = multiprime(&[pm(5), pm(7)], 2..=6, DEFAULT_BUDGET).map_err(err)?;
    ensure!(r.lambda == 6, "lambda {}", r.lambda);
    for x in &r.genera {
        if x.g == 12 {
            ensure!(x.pentagonal_exception && x.isolated_primes == [7], "g=12: {:?}", x.isolated_primes);
        } else {
            ensure!(x.r == 2 && !x.pentagonal_exception, "g={}: r={}", x.g, x.r);
        }
    }
    let gs: Vec<u64> = r.genera.iter().map(|x| x.g).collect();
    ensure!(gs == [12, 18, 24, 30, 36], "genera {gs:?}");
    Ok(())
}

/// Rebuilds a witness from its images alone: product one, generation,
/// periods, and the lifted exponents at the cone points.
fn recheck_witness(w: &ExtensionWitness) -> Check {
    let p = w.group.p().get() as u64;
    let n = w.group.n() as u64;
    let u = w.group.u().value() as u64;
    let upow = |t: u64| (0..t % n).fold(1u64, |acc, _| acc * u % p);
    let mul = |x: (u64, u64), y: (u64, u64)| ((x.0 + upow(x.1) * y.0) % p, (x.1 + y.1) % n);
    let id = (0u64, 0u64);
    let xs: Vec<(u64, u64)> = w.images.iter().map(|e| (e.a as u64, e.b as u64)).collect();
    ensure!(xs.iter().fold(id, |acc, &x| mul(acc, x)) == id, "product is not the identity");

    let mut seen: HashSet<(u64, u64)> = HashSet::from([id]);
    let mut frontier = vec![id];
    while let Some(y) = frontier.pop() {
        for &x in &xs {
            let z = mul(y, x);
            if seen.insert(z) {
                frontier.push(z);
            }
        }
    }
    ensure!(seen.len() as u64 == p * n, "images generate {} of {} elements", seen.len(), p * n);

    let mut lifted = Vec::new();
    for (&x, &m) in xs.iter().zip(w.quotient_signature.periods()) {
        let mut y = x;
        let mut order = 1;
        while y != id {
            y = mul(y, x);
            order += 1;
        }
        ensure!(order == m, "image of order {order} on period {m}");
        let s = n / x.1.gcd(&n);
        let c = (0..s).fold(id, |acc, _| mul(acc, x)).0;
        if c != 0 {
            lifted.extend((0..x.1.gcd(&n)).map(|t| (c * upow(t) % p) as u32));
        }
    }
    let pp = p as u32;
    ensure!(canonical(pp, &lifted) == w.induced_class.exponents(), "lifted exponents {lifted:?}");
    Ok(())
}

fn properties() -> Check {
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    let data = || common::branch_data(vec![5, 7, 11, 13, 17, 19, 23], 3..15);

    let moved = data().prop_flat_map(|bd| {
        let xs: Vec<i64> = bd.exponents().iter().map(|&r| r as i64).collect();
        let p = bd.p().get();
        (Just(bd), 1..p, Just(xs).prop_shuffle())
    });
    runner
        .run(&moved, |(bd, u, xs)| {
            let c = canonical_form(&bd);
            prop_assert_eq!(&canonical_form(&c.branch_data()), &c);
            let oracle = canonical(bd.p().get(), bd.exponents());
            prop_assert_eq!(c.exponents(), oracle.as_slice());
            let other = BranchData::validate(bd.p(), &xs).unwrap().scaled(bd.p().unit(u as u64).unwrap());
            prop_assert_eq!(&canonical_form(&other), &c);
            prop_assert_eq!(verdict_for(&other.profile()), verdict_for(&bd.profile()));
            Ok(())
        })
        .map_err(|e| format!("canonical form: {e}"))?;

    let mut cases: Vec<(u64, usize)> = (3..=10).map(|k| (5, k)).collect();
    cases.extend((3..=6).map(|k| (7, k)));
    cases.extend([(11, 3), (11, 4), (13, 3)]);
    for &(p, k) in &cases {
        let n = census(pm(p), k, DEFAULT_BUDGET).map_err(err)?.len() as u128;
        ensure!(n == burnside_count(pm(p), k).map_err(err)?, "census({p},{k}) != Burnside");
    }
    for (p, k) in brute_range() {
        let got: Vec<Vec<u32>> =
            census(pm(p as u64), k, DEFAULT_BUDGET).map_err(err)?.iter().map(|c| c.exponents().to_vec()).collect();
        ensure!(got.into_iter().eq(brute_classes(p, k)), "census({p},{k}) != brute force");
    }

    let reps = (2u64..40, prop::collection::vec((1u64..1000, 1u64..4), 2..8));
    let rh = runner.run(&reps, |(n, raw)| {
        let mut pairs: Vec<(u64, u64)> = raw.iter().map(|&(s, c)| (s % n, c)).filter(|&(s, _)| s != 0).collect();
        let total: u64 = pairs.iter().map(|&(s, _)| s).sum();
        if total % n != 0 {
            pairs.push((n - total % n, 1));
        }
        if pairs.len() < 2 {
            return Ok(());
        }
        pairs.sort_by_key(|&(s, c)| n / s.gcd(&n) * c);
        let shifts: Vec<u64> = pairs.iter().map(|&(s, _)| s).collect();
        let sig = Signature::genus0(pairs.iter().map(|&(s, c)| n / s.gcd(&n) * c).collect()).unwrap();
        if let Ok(sub) = induced_subgroup_signature(&sig, &PermutationRep::cyclic_regular(n as usize, &shifts)) {
            let area = |s: &Signature| s.normalized_area_in::<i128>().unwrap();
            prop_assert_eq!(area(&sub), area(&sig) * Rational128::from_integer(n as i128));
        }
        Ok(())
    });
    rh.map_err(|e| format!("Riemann-Hurwitz: {e}"))?;

    let mut witnesses = 0;
    let mut sweep: Vec<(u64, usize)> = (3..=10).map(|k| (5, k)).collect();
    sweep.extend((3..=6).map(|k| (7, k)));
    sweep.extend([(11, 3), (11, 4), (13, 3), (13, 4)]);
    for (p, k) in sweep {
        for cls in census(pm(p), k, DEFAULT_BUDGET).map_err(err)? {
            let ws = prove_extension(&cls, 6).map_err(err)?;
            if isolation_verdict(&cls).is_isolated() {
                ensure!(ws.is_empty(), "isolated {cls} at p={p} extends");
            } else if ws.is_empty() {
                // Only a rotation of order p fixing labels can need the non-split C_{p^2}.
                let split_only = isolation_verdict(&cls).candidates().iter().any(|c| c.q as u64 != p || !c.u.is_one());
                ensure!(!split_only, "{cls} at p={p} has a split candidate but no witness with n <= 6");
            }
            if k <= 7 {
                ensure!(ws.is_empty() || has_rotation(p as u32, cls.exponents()), "{cls} extends without a rotation");
            }
            for w in &ws {
                verify_witness(w).map_err(|e| format!("{w}: {e}"))?;
                recheck_witness(w).map_err(|e| format!("{w}: {e}"))?;
                witnesses += 1;
            }
        }
    }
    ensure!(witnesses > 0, "no witnesses checked");
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Duration, fn() -> Check); 8] = [
        (1, "isolated strata for p in {7,11,13,17,19}, 2 <= d <= 2p+3", Duration::from_secs(1), congruence_sweep),
        (2, "pentagonal isolated strata at g = 10, 14, 16; theta_3 rejected", Duration::from_secs(1), pentagonal_isolated),
        (3, "g = 12 pentagonal: 10 classes, none isolated, class ix extends", Duration::from_secs(10), genus_twelve_pentagonal),
        (4, "isolated points exist exactly for p >= 11", Duration::from_secs(1), || isolated_by_prime(3, &[5, 7], &[11, 13, 17, 19])),
        (5, "isolated curves exist exactly for p >= 11", Duration::from_secs(5), || isolated_by_prime(4, &[5, 7], &[11, 13])),
        (6, "atlas prime lists and dimensions", Duration::from_secs(5), atlas_examples),
        (7, "multiprime {5,7} with the g = 12 exception", Duration::from_secs(5), multiprime_five_seven),
        (8, "property suites and oracles", Duration::from_secs(30), properties),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > limit {
            result = Err(format!("took {elapsed:?}, limit {limit:?}"));
        }
        match result {
            Ok(()) => println!("criterion {id}: PASS ({} ms) {name}", elapsed.as_millis()),
            Err(e) => {
                failed += 1;
                println!("criterion {id}: FAIL ({} ms) {name}: {e}", elapsed.as_millis());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
