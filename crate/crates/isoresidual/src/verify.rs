//! The end-to-end verification suite behind `isoresidual verify` and the
//! acceptance test target.
//!
//! Each numbered check compares enumerated data against a closed form or a
//! published anchor, exactly (no tolerances: everything here is integer or
//! exact rational). Two sub-checks are expected to fail and say so in their
//! detail text: the four-wall claim for the probe chamber at four poles,
//! and the disjoint-transposition shape of one commutator family; both
//! record genuine discrepancies between the predicted and computed
//! structures (see the library tests asserting the computed values).

use std::collections::BTreeSet;
use std::time::Instant;

use num::BigUint;
use rayon::prelude::*;

use crate::arrangement::{
    chamber_graph, is_simplicial, rng_from_seed, sample_chambers, sample_wall,
    sample_wall_variants, Chamber,
};
use crate::error::Result;
use crate::fiber::{
    add_simple_pole, deep_resonance_count, deep_resonance_psi, enumerate_fiber,
    generic_degree, remove_simple_pole, single_resonance_count, weight_transfer,
    weight_transfer_back,
};
use crate::monodromy::{
    all_generators_even_predicted, commutator_structure, crossing_composition_matches,
    meridian_on, monodromy_group, predicted_meridian_cycle_type, topological_class_partition,
    CommutatorClass, PredictedCommutator,
};
use crate::perm::{factorial_big, GroupKind, PermGroup, Permutation};
use crate::report::Check;
use crate::stratum::{canonical_subsets, PoleSubset, Sign, SignFunction, StratumSignature};

/// Suite size: the quick suite trims the sweeps for fast feedback, the full
/// suite runs the complete desk-scale ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

/// All signatures with zero order up to `a_max` and between 2 and `p_max`
/// labeled poles.
pub fn stratum_family(a_max: u32, p_max: usize) -> Vec<StratumSignature> {
    let mut out = Vec::new();
    for a in 1..=a_max {
        let total = a + 2;
        for p in 2..=p_max.min(total as usize) {
            let mut b = vec![1u32; p];
            compositions_into(total, 0, &mut b, &mut out, a);
        }
    }
    out
}

fn compositions_into(
    remaining: u32,
    idx: usize,
    b: &mut Vec<u32>,
    out: &mut Vec<StratumSignature>,
    a: u32,
) {
    let parts = b.len();
    if idx + 1 == parts {
        b[idx] = remaining;
        if remaining >= 1 {
            out.push(StratumSignature::new(a, b.clone()).expect("composition"));
        }
        return;
    }
    let spare = remaining - (parts - idx - 1) as u32;
    for x in 1..=spare {
        b[idx] = x;
        compositions_into(remaining - x, idx + 1, b, out, a);
    }
}

/// Whether the meridian of `subset` is trivial by the published shape list:
/// two-pole strata, two-element subsets of H(2;-1,-1,-1,-1), and the
/// hyperplane isolating a pole of order `a` whose two companions are
/// simple.
fn trivial_by_shape(sig: &StratumSignature, subset: &PoleSubset) -> bool {
    let p = sig.num_poles();
    if p == 2 {
        return true;
    }
    let b = sig.pole_orders();
    if sig.zero_order() == 2 && b == [1, 1, 1, 1] && subset.len() == 2 {
        return true;
    }
    if p == 3 {
        // the singleton side of the partition
        let single = if subset.len() == 1 {
            subset.iter().next().unwrap()
        } else {
            (1..=3u32).find(|&l| !subset.contains(l)).unwrap()
        };
        let others: Vec<u32> =
            (1..=3u32).filter(|&l| l != single).map(|l| sig.pole_order(l)).collect();
        return sig.pole_order(single) == sig.zero_order() && others == [1, 1];
    }
    false
}

struct StratumFindings {
    degree_ok: bool,
    degree_detail: Option<String>,
    wall_independence_ok: bool,
    wall_count_ok: bool,
    deep_ok: bool,
    origin_ok: bool,
    cycle_types_ok: bool,
    triviality_ok: bool,
    crossing_ok: bool,
    parity_ok: bool,
    failures: Vec<String>,
}

/// The shared sweep: degree formula, wall counts, meridian cycle types,
/// crossing composition and parity, for one stratum.
fn sweep_stratum(sig: &StratumSignature, seed: u64) -> Result<StratumFindings> {
    let p = sig.num_poles();
    let mut rng = rng_from_seed(seed);
    let mut f = StratumFindings {
        degree_ok: true,
        degree_detail: None,
        wall_independence_ok: true,
        wall_count_ok: true,
        deep_ok: true,
        origin_ok: true,
        cycle_types_ok: true,
        triviality_ok: true,
        crossing_ok: true,
        parity_ok: true,
        failures: Vec::new(),
    };

    // criterion 1: generic degree over sampled chambers
    let expected = generic_degree(sig);
    for chamber in sample_chambers(p, 3, &mut rng) {
        let n = enumerate_fiber(sig, &chamber.psi)?.len() as u128;
        if n != expected {
            f.degree_ok = false;
            f.failures.push(format!("{sig}: fiber {n} != {expected} over {}", chamber.psi.key()));
        }
    }
    f.degree_detail = Some(format!("degree {expected}"));

    // criterion 5: origin fiber empty; deep-resonance chain count
    let zero = SignFunction::new(p, vec![Sign::Zero; (1 << (p - 1)) - 1])?;
    if !enumerate_fiber(sig, &zero)?.is_empty() {
        f.origin_ok = false;
        f.failures.push(format!("{sig}: origin fiber not empty"));
    }
    let deep = enumerate_fiber(sig, &deep_resonance_psi(p))?.len() as u128;
    if deep != deep_resonance_count(sig) {
        f.deep_ok = false;
        f.failures.push(format!(
            "{sig}: deep fiber {deep} != {}",
            deep_resonance_count(sig)
        ));
    }

    let mut all_meridians_even = true;
    for subset in canonical_subsets(p) {
        // criteria 2 + 3: counts over single-wall sign functions
        let variants = sample_wall_variants(p, &subset, 3, &mut rng)?;
        let closed = single_resonance_count(sig, &subset);
        let mut counts = BTreeSet::new();
        for wall_psi in &variants {
            counts.insert(enumerate_fiber(sig, wall_psi)?.len() as u128);
        }
        if counts.len() != 1 {
            f.wall_independence_ok = false;
            f.failures.push(format!("{sig} I={subset}: wall counts differ: {counts:?}"));
        }
        if counts.iter().next() != Some(&closed) {
            f.wall_count_ok = false;
            f.failures.push(format!(
                "{sig} I={subset}: wall count {:?} != formula {closed}",
                counts.iter().next()
            ));
        }

        // criteria 6 + 7 + 9: meridians on both adjacent chambers
        let wall = sample_wall(p, &subset, &mut rng)?;
        let predicted = predicted_meridian_cycle_type(sig, &subset);
        let minus_fiber = enumerate_fiber(sig, &wall.minus.psi)?;
        let plus_fiber = enumerate_fiber(sig, &wall.plus.psi)?;
        for fiber in [&minus_fiber, &plus_fiber] {
            let gamma = meridian_on(fiber, &subset);
            if gamma.cycle_type() != predicted {
                f.cycle_types_ok = false;
                f.failures.push(format!(
                    "{sig} I={subset}: cycle type {:?} != predicted {predicted:?}",
                    gamma.cycle_type()
                ));
            }
            if gamma.is_identity() != trivial_by_shape(sig, &subset) {
                f.triviality_ok = false;
                f.failures.push(format!(
                    "{sig} I={subset}: triviality {} breaks the shape list",
                    gamma.is_identity()
                ));
            }
            if !gamma.is_even() {
                all_meridians_even = false;
            }
        }
        if p > 2 && !crossing_composition_matches(sig, &wall.minus, &subset)? {
            f.crossing_ok = false;
            f.failures.push(format!("{sig} I={subset}: lower-back after upper != meridian"));
        }
    }

    // criterion 9: the parity predicate
    if all_meridians_even != all_generators_even_predicted(sig) {
        f.parity_ok = false;
        f.failures.push(format!(
            "{sig}: all-even {} != parity case analysis {}",
            all_meridians_even,
            all_generators_even_predicted(sig)
        ));
    }
    Ok(f)
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check { name: name.into(), pass, detail }
}

/// Runs the named checks of the verification suite. Deterministic for a
/// given seed; `threads` parallelizes the stratum sweep.
pub fn run_suite(suite: Suite, threads: usize, seed: u64) -> Vec<Check> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| run_suite_inner(suite, seed))
}

fn run_suite_inner(suite: Suite, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    let a_max = match suite {
        Suite::Quick => 5,
        Suite::Full => 7,
    };
    let family = stratum_family(a_max, 5);

    // ---- shared sweep: criteria 1, 2, 3, 5, 6, 7 and 9 ----
    let started = Instant::now();
    let findings: Vec<(String, Result<StratumFindings>)> = family
        .par_iter()
        .enumerate()
        .map(|(i, sig)| (sig.to_string(), sweep_stratum(sig, seed.wrapping_add(i as u64 * 7919))))
        .collect();
    let sweep_time = started.elapsed();
    let agg = |pick: fn(&StratumFindings) -> bool, name: &str, extra: &str| {
        let mut pass = true;
        let mut failures = Vec::new();
        for (label, f) in &findings {
            match f {
                Ok(f) => {
                    if !pick(f) {
                        pass = false;
                        failures.extend(f.failures.iter().cloned());
                    }
                }
                Err(e) => {
                    pass = false;
                    failures.push(format!("{label}: {e}"));
                }
            }
        }
        let detail = if pass {
            format!("{} strata; {extra}", findings.len())
        } else {
            failures.truncate(4);
            failures.join("; ")
        };
        check(name, pass, detail)
    };
    checks.push(agg(
        |f| f.degree_ok,
        "1-degree-formula",
        &format!("each over 3 sampled chambers; {} ms", sweep_time.as_millis()),
    ));
    checks.push(agg(
        |f| f.wall_independence_ok,
        "2-chamber-independence",
        "single-wall counts agree across sampled sign functions",
    ));
    checks.push(agg(
        |f| f.wall_count_ok,
        "3-single-resonance-count",
        "wall fibers match the closed form for every hyperplane",
    ));
    checks.push(agg(
        |f| f.deep_ok && f.origin_ok,
        "5-deep-resonance",
        "origin fibers empty; chain counts match the closed form",
    ));
    checks.push(agg(
        |f| f.cycle_types_ok && f.triviality_ok,
        "6-meridian-cycle-types",
        "cycle types match the closed forms; triviality exactly on the shape list",
    ));
    checks.push(agg(
        |f| f.crossing_ok,
        "7b-crossing-composition",
        "lower-back after upper equals the local meridian on every sampled wall",
    ));
    checks.push(agg(
        |f| f.parity_ok,
        "9-parity-criterion",
        "all-even predicate matches the case analysis",
    ));
    if suite == Suite::Full && sweep_time.as_secs() > 120 {
        checks.push(check(
            "1-degree-formula-runtime",
            false,
            format!("sweep took {} s, budget 120 s", sweep_time.as_secs()),
        ));
    }

    // sanity: the known tiny wall count
    {
        let sig = StratumSignature::new(4, vec![2, 2, 2]).unwrap();
        let i2 = PoleSubset::new(3, &[2]).unwrap();
        let pass = single_resonance_count(&sig, &i2) == 1;
        checks.push(check("3a-known-wall-count", pass, "H(4;-2,-2,-2) over the wall of pole 2".into()));
    }

    // ---- criterion 4: recurrence and weight transfer ----
    checks.push(criterion_4(suite));

    // ---- criterion 7a: the published transport table ----
    checks.push(criterion_7_table());

    // ---- criterion 8: group identifications ----
    checks.push(criterion_8(suite));

    // ---- criterion 9, p = 6 samples ----
    checks.push(criterion_9_six_poles(seed));

    // ---- criterion 10: commutators ----
    checks.extend(criterion_10());

    // ---- criterion 11: topological classes ----
    checks.push(criterion_11());

    // ---- criterion 12: arrangement facts and the permutation oracle ----
    checks.extend(criterion_12(suite));

    checks
}

fn criterion_4(suite: Suite) -> Check {
    let a_max = match suite {
        Suite::Quick => 4,
        Suite::Full => 6,
    };
    let mut failures = Vec::new();
    for sig in stratum_family(a_max, 5) {
        let p = sig.num_poles();
        let psi = SignFunction::standard(p);
        let fiber = match enumerate_fiber(&sig, &psi) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{sig}: {e}"));
                continue;
            }
        };
        let mut b_ext = sig.pole_orders().to_vec();
        b_ext.push(1);
        let sig_ext = StratumSignature::new(sig.zero_order() + 1, b_ext).unwrap();
        let ext = enumerate_fiber(&sig_ext, &SignFunction::standard(p + 1)).unwrap();
        let mut images = BTreeSet::new();
        let mut ok = true;
        for t in fiber.trees() {
            let legal: Vec<_> = t.corners().into_iter().filter(|c| c.legal_incoming).collect();
            if legal.len() != sig.zero_order() as usize + 1 {
                ok = false;
                failures.push(format!("{sig}: {} legal corners", legal.len()));
                break;
            }
            for c in legal {
                let bigger = add_simple_pole(t, &c).unwrap();
                if remove_simple_pole(&bigger).unwrap().canonical_key() != t.canonical_key() {
                    ok = false;
                    failures.push(format!("{sig}: leaf removal does not invert"));
                }
                images.insert(bigger.canonical_key());
            }
        }
        if ok && (images.len() != ext.len() || ext.keys().iter().any(|k| !images.contains(k))) {
            failures.push(format!(
                "{sig}: simple-pole surgery images {} != extended fiber {}",
                images.len(),
                ext.len()
            ));
        }
    }
    // weight transfer across all redistributions of fixed (a, p)
    for (a, p) in [(4u32, 3usize), (5, 3), (6, 3), (5, 4)] {
        let strata: Vec<StratumSignature> = stratum_family(a, p)
            .into_iter()
            .filter(|s| s.zero_order() == a && s.num_poles() == p)
            .collect();
        let psi = SignFunction::standard(p);
        for sig in &strata {
            let fiber = enumerate_fiber(sig, &psi).unwrap();
            for i in 2..=p as u32 {
                if sig.pole_order(i) < 2 {
                    continue;
                }
                let mut b2 = sig.pole_orders().to_vec();
                b2[0] += 1;
                b2[i as usize - 1] -= 1;
                let sig2 = StratumSignature::new(a, b2).unwrap();
                let target = enumerate_fiber(&sig2, &psi).unwrap();
                let mut images = BTreeSet::new();
                for t in fiber.trees() {
                    let moved = weight_transfer(t, i, sig).unwrap();
                    if weight_transfer_back(&moved, i, &sig2).unwrap().canonical_key()
                        != t.canonical_key()
                    {
                        failures.push(format!("{sig} i={i}: transfer does not invert"));
                    }
                    images.insert(moved.canonical_key());
                }
                if images.len() != target.len()
                    || target.keys().iter().any(|k| !images.contains(k))
                {
                    failures.push(format!("{sig} i={i}: transfer not onto the target fiber"));
                }
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        "simple-pole surgery bijective with factor a+1; weight transfer bijective".into()
    } else {
        failures.truncate(4);
        failures.join("; ")
    };
    check("4-recurrence-and-transfer", pass, detail)
}

fn criterion_7_table() -> Check {
    // the six-element fiber of H(6;-2,-3,-3) and its published crossing
    use crate::monodromy::{wall_cross, Half};
    use crate::tree::DecoratedTree;
    let sig = StratumSignature::new(6, vec![2, 3, 3]).unwrap();
    let near = Chamber::from_residues(
        &crate::stratum::ResidueConfig::from_integers(&[-2, -3, 5]).unwrap(),
    )
    .unwrap();
    let t = |edges: Vec<(u32, u32)>, rots: &[(u32, Vec<(u32, u32)>)]| {
        DecoratedTree::from_parts(edges, rots).unwrap()
    };
    let near_trees = [
        t(vec![(2, 1), (1, 3)], &[(1, vec![(3, 1), (2, 1)]), (2, vec![(1, 4)]), (3, vec![(1, 4)])]),
        t(vec![(1, 3), (2, 3)], &[(3, vec![(2, 4), (1, 0)]), (1, vec![(3, 2)]), (2, vec![(3, 4)])]),
        t(vec![(1, 3), (2, 3)], &[(3, vec![(2, 2), (1, 2)]), (1, vec![(3, 2)]), (2, vec![(3, 4)])]),
        t(vec![(1, 3), (2, 3)], &[(3, vec![(2, 0), (1, 4)]), (1, vec![(3, 2)]), (2, vec![(3, 4)])]),
        t(vec![(1, 2), (2, 3)], &[(2, vec![(3, 3), (1, 1)]), (1, vec![(2, 2)]), (3, vec![(2, 4)])]),
        t(vec![(1, 2), (2, 3)], &[(2, vec![(3, 1), (1, 3)]), (1, vec![(2, 2)]), (3, vec![(2, 4)])]),
    ];
    let far_trees = [
        t(vec![(2, 1), (1, 3)], &[(1, vec![(3, 1), (2, 1)]), (2, vec![(1, 4)]), (3, vec![(1, 4)])]),
        t(vec![(2, 1), (2, 3)], &[(2, vec![(3, 4), (1, 0)]), (1, vec![(2, 2)]), (3, vec![(2, 4)])]),
        t(vec![(2, 1), (2, 3)], &[(2, vec![(3, 2), (1, 2)]), (1, vec![(2, 2)]), (3, vec![(2, 4)])]),
        t(vec![(2, 1), (2, 3)], &[(2, vec![(3, 0), (1, 4)]), (1, vec![(2, 2)]), (3, vec![(2, 4)])]),
        t(vec![(3, 1), (2, 3)], &[(3, vec![(2, 3), (1, 1)]), (1, vec![(3, 2)]), (2, vec![(3, 4)])]),
        t(vec![(3, 1), (2, 3)], &[(3, vec![(2, 1), (1, 3)]), (1, vec![(3, 2)]), (2, vec![(3, 4)])]),
    ];
    let i1 = PoleSubset::new(3, &[1]).unwrap();
    let crossing = match wall_cross(&sig, &near, &i1, Half::Upper) {
        Ok(c) => c,
        Err(e) => return check("7-wall-crossing-table", false, e.to_string()),
    };
    // A->A', B->D', C->E', D->F', E->B', F->C'
    let table = [(0usize, 0usize), (1, 3), (2, 4), (3, 5), (4, 1), (5, 2)];
    let mut pass = true;
    let mut detail = String::new();
    for (x, y) in table {
        let from = crossing.from_fiber.index_of(&near_trees[x].canonical_key());
        let to = crossing.to_fiber.index_of(&far_trees[y].canonical_key());
        match (from, to) {
            (Some(fi), Some(ti)) if crossing.map[fi] == ti => {}
            _ => {
                pass = false;
                detail = format!("entry {x} -> {y} of the table broke");
                break;
            }
        }
    }
    if pass {
        detail = "upper crossing reproduces the published six-tree table".into();
    }
    check("7-wall-crossing-table", pass, detail)
}

fn criterion_8(suite: Suite) -> Check {
    let started = Instant::now();
    let base3 = SignFunction::standard(3);
    let mut failures = Vec::new();
    let mut cases = 0usize;

    let mut expect = |sig: StratumSignature, want: GroupKind, failures: &mut Vec<String>| {
        cases += 1;
        match monodromy_group(&sig, &base3) {
            Ok((_, _, report)) => {
                if report.kind != want {
                    failures.push(format!("{sig}: {} != {want}", report.kind));
                }
            }
            Err(e) => failures.push(format!("{sig}: {e}")),
        }
    };

    for a in 2..=6u32 {
        expect(
            StratumSignature::new(a, vec![a, 1, 1]).unwrap(),
            GroupKind::Cyclic(a as usize),
            &mut failures,
        );
    }
    for s in 2..=4u32 {
        for t in 2..=4u32 {
            let sig = StratumSignature::new(s + t - 1, vec![s, t, 1]).unwrap();
            let want = if s % 2 == 1 && t % 2 == 1 {
                GroupKind::Alternating((s + t - 1) as usize)
            } else {
                GroupKind::Symmetric((s + t - 1) as usize)
            };
            expect(sig, want, &mut failures);
        }
    }
    let a_cap = match suite {
        Suite::Quick => 6,
        Suite::Full => 8,
    };
    for sig in stratum_family(a_cap, 3) {
        if sig.num_poles() != 3 || sig.pole_orders().iter().any(|&x| x < 2) {
            continue;
        }
        // the exceptional stratum, in any pole labeling
        let mut sorted = sig.pole_orders().to_vec();
        sorted.sort_unstable();
        if sorted == [2, 3, 3] {
            continue;
        }
        let b = sig.pole_orders();
        let want = if b.iter().all(|&x| x % 2 == b[0] % 2) {
            GroupKind::Alternating(sig.zero_order() as usize)
        } else {
            GroupKind::Symmetric(sig.zero_order() as usize)
        };
        expect(sig, want, &mut failures);
    }
    // the exceptional stratum
    cases += 1;
    match monodromy_group(&StratumSignature::new(6, vec![2, 3, 3]).unwrap(), &base3) {
        Ok((_, group, report)) => {
            if report.order != BigUint::from(120u32)
                || !report.transitive
                || group.point_stabilizer_order() != BigUint::from(20u32)
                || report.kind != GroupKind::ExoticS5InS6
            {
                failures.push(format!(
                    "H(6;-2,-3,-3): order {} stabilizer {}",
                    report.order,
                    group.point_stabilizer_order()
                ));
            }
        }
        Err(e) => failures.push(format!("H(6;-2,-3,-3): {e}")),
    }
    let elapsed = started.elapsed();
    let mut pass = failures.is_empty();
    let mut detail = if pass {
        format!("{cases} identifications in {} ms", elapsed.as_millis())
    } else {
        failures.truncate(4);
        failures.join("; ")
    };
    if suite == Suite::Full && elapsed.as_secs() > 300 {
        pass = false;
        detail = format!("{detail}; exceeded the 300 s budget");
    }
    check("8-group-identifications", pass, detail)
}

fn criterion_9_six_poles(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed ^ 0x6666);
    let mut failures = Vec::new();
    for b in [vec![3u32, 1, 1, 1, 1, 1], vec![2, 2, 1, 1, 1, 1]] {
        let sig = StratumSignature::new(6, b).unwrap();
        for subset in canonical_subsets(6) {
            match sample_wall(6, &subset, &mut rng) {
                Ok(wall) => {
                    let fiber = enumerate_fiber(&sig, &wall.minus.psi).unwrap();
                    let gamma = meridian_on(&fiber, &subset);
                    if !gamma.is_even() {
                        failures.push(format!("{sig} I={subset}: odd meridian"));
                    }
                }
                Err(e) => failures.push(format!("{sig} I={subset}: {e}")),
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        "every sampled meridian is even for the six-pole strata with even zero order".into()
    } else {
        failures.truncate(4);
        failures.join("; ")
    };
    check("9b-six-pole-parity", pass, detail)
}

fn criterion_10() -> Vec<Check> {
    let mut checks = Vec::new();

    // secant pairs commute in four- and five-pole test strata
    let mut failures = Vec::new();
    let strata = [
        StratumSignature::new(2, vec![1, 1, 1, 1]).unwrap(),
        StratumSignature::new(5, vec![2, 2, 2, 1]).unwrap(),
        StratumSignature::new(6, vec![2, 2, 3, 1]).unwrap(),
        StratumSignature::new(3, vec![1, 1, 1, 1, 1]).unwrap(),
        StratumSignature::new(5, vec![2, 1, 1, 2, 1]).unwrap(),
    ];
    for sig in &strata {
        let p = sig.num_poles();
        let subsets = canonical_subsets(p);
        for (x, i) in subsets.iter().enumerate() {
            for j in subsets.iter().skip(x + 1) {
                if crate::monodromy::pair_kind(p, i, j) != Ok(crate::monodromy::PairKind::Secant) {
                    continue;
                }
                match commutator_structure(sig, i, j) {
                    Ok(r) => {
                        if r.observed != CommutatorClass::Commute {
                            failures.push(format!("{sig} [{i}],[{j}]: {:?}", r.observed));
                        }
                    }
                    Err(e) => failures.push(format!("{sig} [{i}],[{j}]: {e}")),
                }
            }
        }
    }
    let pass = failures.is_empty();
    checks.push(check(
        "10a-secant-pairs-commute",
        pass,
        if pass {
            "all secant meridian pairs commute".into()
        } else {
            failures.truncate(4);
            failures.join("; ")
        },
    ));

    // the published eight-shaped orbit pair: one three-cycle
    let sig = StratumSignature::new(4, vec![1, 2, 3]).unwrap();
    let i = PoleSubset::new(3, &[2]).unwrap();
    let j = PoleSubset::new(3, &[3]).unwrap();
    let r = commutator_structure(&sig, &i, &j);
    let pass = matches!(
        &r,
        Ok(r) if r.observed == CommutatorClass::ThreeCycles(1)
            && r.predicted == PredictedCommutator::ThreeCycles(1)
    );
    checks.push(check(
        "10b-three-cycle-commutator",
        pass,
        "H(4;-1,-2,-3) meridians of poles 2 and 3".into(),
    ));

    // the disjoint-transposition prediction: implemented as stated, and it
    // fails against the computed commutator
    let sig = StratumSignature::new(5, vec![2, 2, 2, 1]).unwrap();
    let i = PoleSubset::new(4, &[1]).unwrap();
    let j = PoleSubset::new(4, &[2]).unwrap();
    let r = commutator_structure(&sig, &i, &j);
    let (pass, detail) = match &r {
        Ok(r) => (
            matches!(r.observed, CommutatorClass::EvenTranspositions(n) if n % 2 == 0 && n > 0),
            format!(
                "expected an even product of disjoint transpositions; computed {:?} on every \
                 chamber adjacent to both walls and for every transported generator pair — the \
                 predicting lemma's chamber cannot touch both walls",
                r.observed
            ),
        ),
        Err(e) => (false, e.to_string()),
    };
    checks.push(check("10c-transposition-commutator", pass, detail));
    checks
}

fn criterion_11() -> Check {
    let mut failures = Vec::new();
    let mut expect = |sig: StratumSignature, k: usize, class_size: usize| {
        match topological_class_partition(&sig) {
            Ok(tc) => {
                if tc.k != k
                    || tc.classes.len() != k
                    || tc.classes.iter().any(|c| c.len() != class_size)
                    || tc.shift.cycle_type() != vec![k]
                {
                    failures.push(format!(
                        "{sig}: {} classes of {:?}",
                        tc.classes.len(),
                        tc.classes.first().map(|c| c.len())
                    ));
                }
            }
            Err(e) => failures.push(format!("{sig}: {e}")),
        }
    };
    expect(StratumSignature::new(4, vec![2, 2, 1, 1]).unwrap(), 2, 6);
    expect(StratumSignature::new(6, vec![3, 3, 1, 1]).unwrap(), 3, 10);
    for a in 2..=6u32 {
        expect(StratumSignature::new(a, vec![a, 1, 1]).unwrap(), a as usize, 1);
    }
    let pass = failures.is_empty();
    let detail = if pass {
        "class counts, sizes and the cyclic quotient all match".into()
    } else {
        failures.truncate(4);
        failures.join("; ")
    };
    check("11-topological-classes", pass, detail)
}

fn criterion_12(suite: Suite) -> Vec<Check> {
    let mut checks = Vec::new();

    // the probe chamber of the non-simpliciality argument: stated to have
    // four walls, computed to have three
    {
        let psi = crate::stratum::ResidueConfig::from_integers(&[5, 1, -2, -4])
            .unwrap()
            .sign_function();
        let chamber = Chamber::from_psi(&psi).unwrap();
        let walls = crate::arrangement::chamber_walls(&chamber);
        let pass = walls.len() == 4 && !is_simplicial(&chamber);
        checks.push(check(
            "12a-probe-chamber-four-walls",
            pass,
            format!(
                "expected 4 walls (non-simplicial); computed {} facets ({}) — in the residual \
                 space the probe chamber is a simplicial cone and every four-pole chamber is \
                 simplicial (non-simplicial chambers first appear at five poles); confirmed by \
                 an independent sampling oracle",
                walls.len(),
                walls.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" | ")
            ),
        ));
    }

    // all three-pole chambers simplicial; graphs connected
    {
        let mut pass = true;
        let mut detail = Vec::new();
        for p in 2..=3 {
            let g = chamber_graph(p).unwrap();
            if !g.chambers.iter().all(is_simplicial) {
                pass = false;
                detail.push(format!("p={p}: non-simplicial chamber"));
            }
        }
        checks.push(check(
            "12b-small-chambers-simplicial",
            pass,
            if pass { "all chambers at two and three poles are simplicial".into() } else { detail.join("; ") },
        ));
    }
    {
        let p_max = match suite {
            Suite::Quick => 4,
            Suite::Full => 5,
        };
        let mut pass = true;
        let mut sizes = Vec::new();
        for p in 2..=p_max {
            let g = chamber_graph(p).unwrap();
            pass &= g.is_connected();
            sizes.push(format!("p={p}: {}", g.chambers.len()));
        }
        checks.push(check(
            "12c-chamber-graph-connected",
            pass,
            sizes.join(", "),
        ));
    }

    // the cycle-pair generation oracle with its three exceptions
    checks.push(piccard_oracle());
    checks
}

fn piccard_oracle() -> Check {
    let mut failures = Vec::new();
    let exceptions: [(usize, usize, usize); 3] = [(4, 3, 6), (4, 2, 6), (5, 3, 6)];
    for n in 3..=8usize {
        // first family: (1..k) with (1..n)
        for k in 2..n {
            let g = PermGroup::new(
                n,
                vec![
                    Permutation::from_cycle(n, &(0..k).collect::<Vec<_>>()).unwrap(),
                    Permutation::from_cycle(n, &(0..n).collect::<Vec<_>>()).unwrap(),
                ],
            )
            .unwrap();
            let order = g.order();
            let want_alternating = k % 2 == 1 && n % 2 == 1;
            let expected =
                if want_alternating { factorial_big(n) / 2u32 } else { factorial_big(n) };
            if order != expected {
                failures.push(format!("cycles (1..{k}),(1..{n}): order {order}"));
            }
        }
        // second family: (1..k) with (l..n)
        for l in 2..n {
            for k in l..n {
                let g = PermGroup::new(
                    n,
                    vec![
                        Permutation::from_cycle(n, &(0..k).collect::<Vec<_>>()).unwrap(),
                        Permutation::from_cycle(n, &((l - 1)..n).collect::<Vec<_>>()).unwrap(),
                    ],
                )
                .unwrap();
                let order = g.order();
                let both_even = k % 2 == 1 && (n - l + 1) % 2 == 1;
                let expected = if both_even { factorial_big(n) / 2u32 } else { factorial_big(n) };
                if exceptions.contains(&(k, l, n)) {
                    if order == factorial_big(n) || order == factorial_big(n) / 2u32 {
                        failures.push(format!(
                            "exception (1..{k}),({l}..{n}) unexpectedly generates order {order}"
                        ));
                    }
                } else if order != expected {
                    failures.push(format!("cycles (1..{k}),({l}..{n}): order {order}"));
                }
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        "cycle pairs generate alternating/symmetric as predicted, with exactly the three exceptions".into()
    } else {
        failures.truncate(4);
        failures.join("; ")
    };
    check("12d-cycle-pair-generation", pass, detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_enumeration_counts() {
        // compositions of a+2 into p parts
        let fam = stratum_family(4, 5);
        let count_a4 = fam.iter().filter(|s| s.zero_order() == 4).count();
        assert_eq!(count_a4, 5 + 10 + 10 + 5);
        assert!(fam.iter().all(|s| s.num_poles() <= 5));
    }

    #[test]
    fn trivial_shape_predicate() {
        let s = StratumSignature::new(2, vec![1, 1, 1, 1]).unwrap();
        assert!(trivial_by_shape(&s, &PoleSubset::new(4, &[1, 2]).unwrap()));
        assert!(!trivial_by_shape(&s, &PoleSubset::new(4, &[1]).unwrap()));
        let t = StratumSignature::new(4, vec![4, 1, 1]).unwrap();
        assert!(trivial_by_shape(&t, &PoleSubset::new(3, &[1]).unwrap()));
        assert!(!trivial_by_shape(&t, &PoleSubset::new(3, &[2]).unwrap()));
        let one = StratumSignature::new(1, vec![1, 1, 1]).unwrap();
        assert!(trivial_by_shape(&one, &PoleSubset::new(3, &[2]).unwrap()));
    }

    #[test]
    fn piccard_oracle_passes() {
        let c = piccard_oracle();
        assert!(c.pass, "{}", c.detail);
    }
}
