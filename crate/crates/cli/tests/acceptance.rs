//! Acceptance suite: one line per criterion, exit status 1 if any fails.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::time::Instant;

use exitpath_core::complex::{
    build_exhaustion, nerve_chain_simplex, reentering_path, validate_exit_simplex, verify_exhaustion, PlSimplexMap,
    StratifiedComplex, WitnessKind,
};
use exitpath_core::devissage::{verify_devissage, DevissageConfig};
use exitpath_core::metric::{
    colimit_convergence_check, cone_triangle_scan, exp_distance, metric_axiom_suite, ConePoint, Configuration,
    Distance, FiniteMetricSpace,
};
use exitpath_core::poset::naturally_labeled_posets;
use exitpath_core::quasicat::{idempotent_check, inner_horn_check, nerve, union_colimit};
use exitpath_core::random;
use exitpath_core::rational::{int, ratio, Rational};
use exitpath_core::sheaf::{
    functor_round_trip, proper_base_change_check, pushforward_closed, sheaf_from_functor, sheaf_round_trip,
    verify_adjunction, Side, ValueKind,
};
use exitpath_core::{Inclusion, OmegaFiltration};
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// Outcome of one criterion: pass flag and a one-line summary.
type Outcome = (bool, String);

type Criterion = (&'static str, fn() -> Outcome);

fn representation() -> Outcome {
    let mut failures = 0;
    for seed in 0..200u64 {
        let mut rng = random::rng(seed);
        let n = rng.gen_range(0..=6);
        let density = rng.gen_range(0.1..0.7);
        let p = random::random_poset(&mut rng, n, density);
        let f = random::random_functor(&mut rng, &p, ValueKind::Set, 4);
        let there = functor_round_trip(&f).unwrap();
        let back = sheaf_round_trip(&sheaf_from_functor(&f)).unwrap();
        failures += usize::from(!(there.is_iso() && back.is_iso()));
    }
    (failures == 0, format!("200 posets (|A| <= 6), SET values <= 4: {failures} round-trip failures"))
}

fn devissage() -> Outcome {
    let mut total = 0;
    let mut failed = 0;
    for n in 0..=4 {
        let f = OmegaFiltration::omega_truncations(n);
        for kind in [ValueKind::Set, ValueKind::Vect] {
            let max_size = if kind == ValueKind::Set { 3 } else { 2 };
            let r = verify_devissage(&f, &DevissageConfig { samples: 100, seed: 42, kind, max_size, corrupt: false });
            total += r.checks.iter().map(|c| c.passed + c.failed).sum::<usize>();
            failed += r.failures.len();
        }
    }
    (failed == 0, format!("lengths 1..=5, 100 samples, SET and VECT: {failed}/{total} checks failed"))
}

fn adjunction() -> Outcome {
    let (mut failed, mut not_iso) = (0, 0);
    for seed in 0..100u64 {
        let mut rng = random::rng(1000 + seed);
        let n = rng.gen_range(1..=6);
        let amb = random::random_poset(&mut rng, n, 0.4);
        let members = random::random_down_set(&mut rng, &amb, 0.5);
        let inc = Inclusion::of_subset(&amb, &members);
        let kind = if seed % 2 == 0 { ValueKind::Set } else { ValueKind::Vect };
        let f = random::random_functor(&mut rng, inc.sub(), kind, 2);
        let g = random::random_functor(&mut rng, &amb, kind, 2);
        let r = verify_adjunction(&inc, Side::Right, &f, &g).unwrap();
        failed += usize::from(!(r.passed() && r.triangle_identities && r.hom_bijection));
        not_iso += usize::from(!r.fully_faithful_iso);
    }
    let ok = failed == 0 && not_iso == 0;
    (ok, format!("100 closed inclusions: {failed} triangle/hom failures, {not_iso} non-invertible counits"))
}

fn base_change() -> Outcome {
    let (mut cases, mut wrong, mut findings) = (0, 0, 0);
    for seed in 0..60u64 {
        let mut rng = random::rng(2000 + seed);
        let n = rng.gen_range(1..=6);
        let amb = random::random_poset(&mut rng, n, 0.4);
        let members = random::random_down_set(&mut rng, &amb, 0.4);
        let inc = Inclusion::of_subset(&amb, &members);
        let kind = if seed % 3 == 0 { ValueKind::Vect } else { ValueKind::Set };
        let f = random::random_functor(&mut rng, inc.sub(), kind, 3);
        let pushed = pushforward_closed(&f, &inc).unwrap();
        for q in 0..amb.len() {
            cases += 1;
            let r = proper_base_change_check(&f, &inc, amb.name(q)).unwrap();
            // inside: the original value; outside: one point (SET) or zero (VECT)
            let right = match inc.preimage(q) {
                Some(p) => pushed.value(q) == f.value(p),
                None => pushed.value(q).size() == usize::from(kind == ValueKind::Set),
            };
            wrong += usize::from(!right || !r.matches || r.inside != inc.preimage(q).is_some());
            findings += usize::from(r.terminal_not_initial);
        }
    }
    let detail = format!(
        "{cases} (F, j, a) cases: {wrong} mismatches; FINDING logged: outside stalk is terminal, not initial, in {findings} SET cases"
    );
    (wrong == 0 && findings > 0, detail)
}

fn quasicategory() -> Outcome {
    let (mut posets, mut unfillable, mut bad_idempotents) = (0, 0, 0);
    for n in 0..=5 {
        for p in naturally_labeled_posets(n) {
            posets += 1;
            let s = nerve(&p, 3).unwrap();
            for dim in [2, 3] {
                unfillable += inner_horn_check(&s, dim).unwrap().unfillable.len();
            }
            bad_idempotents += usize::from(!idempotent_check(&s).unwrap().only_degenerate());
        }
    }
    let ok = posets == 408 && unfillable == 0 && bad_idempotents == 0;
    (ok, format!("{posets} posets (|P| <= 5): {unfillable} unfillable horns, {bad_idempotents} nondegenerate idempotents"))
}

fn filtered_colimit() -> Outcome {
    let (mut unassigned, mut misplaced, mut simplices) = (0, 0, 0);
    for seed in 0..50u64 {
        let mut rng = random::rng(3000 + seed);
        let n = rng.gen_range(2..=7);
        let top = random::random_poset(&mut rng, n, 0.35);
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut acc = BTreeSet::new();
        for _ in 0..rng.gen_range(1..=3) {
            acc.extend(random::random_down_set(&mut rng, &top, 0.3));
            members.push(acc.iter().copied().collect());
        }
        members.dedup();
        let f = OmegaFiltration::from_members(&top, &members).unwrap();
        let r = union_colimit(&f, 2).unwrap();
        unassigned += r.unassigned.len();
        simplices += r.simplices;
        for a in &r.assignments {
            // a chain appears at the first level containing all its entries
            let chain: Vec<String> = serde_json::from_str(&a.simplex).unwrap();
            let least = chain.iter().map(|e| f.level_of(e).unwrap()).max().unwrap();
            misplaced += usize::from(least != a.level);
        }
    }
    let ok = unassigned == 0 && misplaced == 0;
    (ok, format!("50 filtrations, {simplices} simplices: {unassigned} unassigned, {misplaced} at the wrong level"))
}

fn exhaustion() -> Outcome {
    let mut failed = 0;
    for seed in 0..50u64 {
        let mut rng = random::rng(4000 + seed);
        let nv = rng.gen_range(3..=9);
        let faces = rng.gen_range(2..=8);
        let k = random::random_complex(&mut rng, nv, faces, 3);
        let e = random::random_edge_enumeration(&mut rng, &k);
        let ex = build_exhaustion(&k, &e).unwrap();
        let r = verify_exhaustion(&k, &e, &ex);
        failed += usize::from(!(r.subcomplexes && r.nested && r.downward_closed && r.exhaustive));
    }
    (failed == 0, format!("50 complexes with random edge enumerations: {failed} fail a conclusion"))
}

/// Stratum of the cell carrying the image of `x`, read off the PL map.
fn stratum_at(m: &PlSimplexMap, x: &[Rational]) -> String {
    let weights = m.evaluate(x).unwrap();
    let face: Vec<usize> = weights.iter().filter(|(_, w)| !w.is_zero()).map(|(&v, _)| v).collect();
    let t = m.target();
    t.target().name(t.stratum_of(&face)).to_string()
}

fn exit_simplices() -> Outcome {
    let (mut bad_chains, mut bad_paths, mut paths) = (0, 0, 0);
    for seed in 0..50u64 {
        let mut rng = random::rng(5000 + seed);
        let k = random::random_complex(&mut rng, 6, 4, 3);
        let s = random::random_stratification(&mut rng, k, 3);
        let mut top = s.complex().maximal_faces().choose(&mut rng).unwrap().clone();
        top.shuffle(&mut rng);
        // flag of faces grown one vertex at a time, then thinned out
        let flag: Vec<Vec<usize>> = (1..=top.len()).map(|i| top[..i].to_vec()).filter(|_| rng.gen_bool(0.7)).collect();
        let flag = if flag.is_empty() { vec![top.clone()] } else { flag };
        let keys: Vec<String> = flag.iter().map(|f| s.complex().face_key(f)).collect();
        let refs: Vec<&str> = keys.iter().map(String::as_str).collect();
        let m = nerve_chain_simplex(&s, &refs).unwrap();
        let want: Vec<String> = flag.iter().map(|f| s.target().name(s.stratum_of(f)).to_string()).collect();
        bad_chains += usize::from(validate_exit_simplex(&m).chain() != Some(&want[..]));
    }
    let mut seed = 0u64;
    while paths < 50 {
        let mut rng = random::rng(6000 + seed);
        seed += 1;
        let s = StratifiedComplex::face_stratification(random::random_complex(&mut rng, 6, 4, 3));
        let Some(top) = s.complex().maximal_faces().into_iter().find(|f| f.len() > 1) else { continue };
        let cut = rng.gen_range(1..top.len());
        let lower = s.complex().face_key(&top[..cut]);
        let upper = s.complex().face_key(&top);
        let p = rng.gen_range(1..=4);
        let (m, expected) = reentering_path(&s, &lower, &upper, p).unwrap();
        paths += 1;
        let ok = match validate_exit_simplex(&m).witness() {
            Some(w) => {
                w.kind == WitnessKind::Reentry
                    && w.point == expected
                    && w.stratum == lower
                    && w.expected == upper
                    && stratum_at(&m, &w.point) == lower
            }
            None => false,
        };
        bad_paths += usize::from(!ok);
    }
    let ok = bad_chains == 0 && bad_paths == 0;
    (ok, format!("50 nerve chains: {bad_chains} not accepted as their strata; 50 re-entering paths: {bad_paths} without the right witness"))
}

/// `sup_x |d(x, S) - d(x, T)|` over the whole space.
fn hausdorff(sp: &FiniteMetricSpace, s: &[usize], t: &[usize]) -> Distance {
    if s.is_empty() || t.is_empty() {
        return if s.is_empty() && t.is_empty() { Distance::Finite(int(0)) } else { Distance::Infinite };
    }
    let to = |x: usize, set: &[usize]| set.iter().map(|&y| sp.d(x, y).clone()).min().unwrap();
    Distance::Finite((0..sp.len()).map(|x| (to(x, s) - to(x, t)).abs()).max().unwrap())
}

fn exponential_metric() -> Outcome {
    let mut mismatches = 0;
    let mut axiom_failures = 0;
    for space_seed in 0..10u64 {
        let mut rng = random::rng(7000 + space_seed);
        let sp = random::random_metric_space(&mut rng, 8);
        for _ in 0..100 {
            let s: Vec<usize> = (0..8).filter(|_| rng.gen_bool(0.4)).collect();
            let t: Vec<usize> = (0..8).filter(|_| rng.gen_bool(0.4)).collect();
            let d = exp_distance(&Configuration::new(&sp, s.clone()), &Configuration::new(&sp, t.clone())).unwrap();
            mismatches += usize::from(d != hausdorff(&sp, &s, &t));
        }
    }
    let sp = random::random_metric_space(&mut random::rng(7100), 8);
    let axioms = metric_axiom_suite(&sp, 1000, 7);
    axiom_failures += axioms.violations.len();
    let empty = Configuration::empty(&sp);
    let infinite = (0..8).all(|x| exp_distance(&empty, &Configuration::new(&sp, vec![x])).unwrap() == Distance::Infinite)
        && exp_distance(&empty, &empty).unwrap() == Distance::Finite(int(0));
    let ok = mismatches == 0 && axiom_failures == 0 && axioms.trials == 1000 && infinite;
    (ok, format!("1000 pairs: {mismatches} oracle mismatches; 1000 axiom trials: {axiom_failures} violations; D(∅, S) = +inf: {infinite}"))
}

fn cone_metric() -> Outcome {
    let pair = FiniteMetricSpace::on_line(&[int(0), int(10)]).unwrap();
    let r = cone_triangle_scan(&pair, &[ratio(1, 10)]).unwrap();
    let reproduced = r.violations.iter().any(|v| {
        v.y == ConePoint::Apex && v.d_xz == int(10) && v.d_xy == ratio(1, 10) && v.d_yz == ratio(1, 10)
    });
    let mut dirty = 0;
    for seed in 0..10u64 {
        let sp = random::random_metric_space(&mut random::rng(8000 + seed), 5);
        let min = sp.diameter() / int(2);
        let grid = [min.clone(), &min + ratio(1, 3), &min * int(3)];
        dirty += usize::from(!cone_triangle_scan(&sp, &grid).unwrap().is_metric());
    }
    let ok = reproduced && dirty == 0;
    (ok, format!("λ = μ = 1/10, d = 10 violation reproduced: {reproduced}; {dirty}/10 small-diameter scans with violations"))
}

fn impossibility() -> Outcome {
    let mut xs = vec![int(0)];
    xs.extend((1..=80).map(|j| ratio(1, j)));
    let sp = FiniteMetricSpace::on_line(&xs).unwrap();
    // point 1/j has index j, 0 has index 0
    let conf = |m: Vec<usize>| Configuration::new(&sp, m);
    let cluster = |lo: usize, len: usize| -> Vec<usize> { std::iter::once(0).chain(lo..lo + len).collect() };
    let mut cases: Vec<(Vec<Configuration<'_>>, bool)> = Vec::new();
    // metrically convergent to {0}, cardinality k + 1 growing without bound
    for (i, len) in (16..=25).enumerate() {
        let c = 1 + i % 2;
        cases.push(((1..=len).map(|k| conf(cluster(c * k, k))).collect(), true));
    }
    cases.push((vec![conf(vec![0]); 16], false));
    cases.push((vec![conf(vec![0, 2]); 16], false));
    cases.push(((1..=20).map(|k| conf(vec![0, k])).collect(), false));
    cases.push(((1..=20).map(|k| conf(vec![k])).collect(), false));
    cases.push(((0..20).map(|k| conf(vec![if k % 2 == 0 { 0 } else { 1 }])).collect(), false));
    cases.push(((1..=20).map(|k| conf([vec![1], cluster(k + 1, k)].concat())).collect(), false));
    cases.push(((1..=20).map(|k| conf(cluster(10, k.min(8)))).collect(), false));
    cases.push(((1..=20).map(|k| conf(cluster(20, 21 - k))).collect(), false));
    cases.push(((0..20).map(|_| conf(vec![])).collect(), false));
    cases.push(((1..=20).map(|k| conf([cluster(10 + k, 1), if k % 2 == 0 { vec![40 + k] } else { vec![] }].concat())).collect(), false));
    let schedule = [int(1), ratio(1, 2), ratio(1, 4), ratio(1, 8)];
    let limit = conf(vec![0]);
    let wrong = cases
        .iter()
        .filter(|(seq, flag)| colimit_convergence_check(seq, &limit, &schedule).unwrap().flagged != *flag)
        .count();
    (wrong == 0 && cases.len() == 20, format!("{} constructed sequences: {wrong} misclassified", cases.len()))
}

fn determinism() -> Outcome {
    let dir = common::fixtures();
    let mut differing = Vec::new();
    let invocations = common::invocations();
    for (args, _) in &invocations {
        let read_out = || {
            args.iter().position(|a| *a == "--out").map(|i| fs::read(dir.path().join(args[i + 1])).unwrap())
        };
        let a = common::exitpath(dir.path(), args);
        let fa = read_out();
        let b = common::exitpath(dir.path(), args);
        let fb = read_out();
        if a.stdout != b.stdout || a.code != b.code || fa != fb || a.stdout.is_empty() {
            differing.push(args[0]);
        }
    }
    (differing.is_empty(), format!("{} verbs run twice: differing {differing:?}", invocations.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("representation round trips", representation),
        ("devissage", devissage),
        ("adjunction", adjunction),
        ("proper base change", base_change),
        ("quasi-category checks", quasicategory),
        ("filtered colimit", filtered_colimit),
        ("exhaustion", exhaustion),
        ("exit simplices", exit_simplices),
        ("exponential metric", exponential_metric),
        ("cone-metric finding", cone_metric),
        ("impossibility shadow", impossibility),
        ("determinism", determinism),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = check();
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict} {name}: {detail} [{:.1}s]", i + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/12 passed in {:.1}s", 12 - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
