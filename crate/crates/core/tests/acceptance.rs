//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use fotheory::axioms::{check_beck_chevalley, check_model, check_theory, check_vibrant, ModelMode};
use fotheory::builtin::{builtin, classifying_space, cyclic_group};
use fotheory::cohomology::snf::{determinant, multiply, to_big};
use fotheory::cohomology::{build_complex, cohomology, smith_normal_form};
use fotheory::stability::{divides_at_level, indiscernible_gap, order_property};
use fotheory::structures::{definable_closure, orbit_theory};
use fotheory::{decalage, TruncatedSymSS, Verdict};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

const THEORY_LIMIT: Duration = Duration::from_secs(60);
const STABILITY_LIMIT: Duration = Duration::from_secs(120);
const EQUIVALENCE_BOUND: usize = 5;
const SNF_SAMPLES: usize = 100;
const SNF_MAX_SIDE: usize = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<T, String> {
    let start = Instant::now();
    let value = f();
    let spent = start.elapsed();
    ensure(spent < limit, || format!("{what} took {spent:.1?}, limit {limit:?}"))?;
    Ok(value)
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn theory_axiom_on_builtins() -> Outcome {
    let mut times = Vec::new();
    for (name, bound) in [("equality", 5), ("dlo", 5), ("random_graph", 5), ("vect_f2", 4)] {
        let t = builtin(name, bound).unwrap();
        let start = Instant::now();
        let (theory, bc) = timed(THEORY_LIMIT, name, || {
            single_threaded(|| (check_theory(&t, bound).unwrap(), check_beck_chevalley(&t, bound).unwrap()))
        })?;
        ensure(theory.passed(), || format!("{name}: check_theory failed: {:?}", theory.first_witness()))?;
        ensure(bc.passed(), || format!("{name}: check_beck_chevalley failed: {:?}", bc.first_witness()))?;
        times.push(format!("{name}@{bound} {:.2?}", start.elapsed()));
    }
    Ok(times.join(", "))
}

fn theory_axiom_on_punctured_dlo() -> Outcome {
    let t = common::punctured_dlo(5);
    let theory = check_theory(&t, 5).unwrap();
    let bc = check_beck_chevalley(&t, 5).unwrap();
    ensure(theory.verdict == Verdict::Fail && bc.verdict == Verdict::Fail, || "a check passed".into())?;
    let key = |r: &fotheory::Report| {
        let w = r.first_witness().unwrap();
        (w.get("k"), w.get("m"), w.get("n"), w.elements.clone())
    };
    ensure(key(&theory) == key(&bc), || format!("witnesses differ: {:?} vs {:?}", key(&theory), key(&bc)))?;
    let (k, m, n, _) = key(&theory);
    ensure((k, m, n) == (Some(1), Some(1), Some(1)), || format!("witness at {:?}", (k, m, n)))?;
    Ok(format!("both fail at k=m=n=1 with {:?}", key(&theory).3))
}

fn corpus(max_dim: usize) -> Vec<(String, TruncatedSymSS)> {
    let mut out: Vec<(String, TruncatedSymSS)> = ["point", "equality", "dlo", "random_graph", "vect_f2"]
        .iter()
        .map(|n| (n.to_string(), builtin(n, max_dim).unwrap()))
        .collect();
    out.push(("punctured_dlo".into(), common::punctured_dlo(max_dim)));
    let (elements, table) = cyclic_group(2);
    out.push(("classifying_space_z2".into(), classifying_space(&elements, &table, max_dim).unwrap()));
    for (name, m) in common::structures() {
        out.push((name, orbit_theory(&m, max_dim).unwrap().theory.as_ref().clone()));
    }
    out
}

fn equivalence_suite() -> Outcome {
    let mut checked = 0;
    let mut failing = 0;
    for (name, t) in corpus(EQUIVALENCE_BOUND) {
        let t = Arc::new(t);
        let projection = decalage(&t, 1).unwrap().head_projections[0].clone();
        for bound in 1..=EQUIVALENCE_BOUND {
            let a = check_theory(&t, bound).unwrap().verdict;
            let b = check_beck_chevalley(&t, bound).unwrap().verdict;
            let c = check_vibrant(&projection, bound - 1).unwrap().verdict;
            ensure(a == b && b == c, || format!("{name} at bound {bound}: {a:?} {b:?} {c:?}"))?;
            checked += 1;
            failing += usize::from(a == Verdict::Fail);
        }
    }
    Ok(format!("{checked} functor/bound pairs agree ({failing} failing in all three)"))
}

fn orbit_closure_equivalence() -> Outcome {
    let structures = common::structures();
    ensure(structures.len() >= 10, || "fewer than 10 structures".into())?;
    for (name, m) in &structures {
        ensure(m.size() <= 6, || format!("{name} is too large"))?;
        let o = orbit_theory(m, 4).unwrap();
        let c = definable_closure(m, 4, 1_000_000).unwrap();
        ensure(common::same_by_labels(&o.theory, &c.theory), || format!("{name} differs"))?;
    }
    Ok(format!("{} structures at truncation 4", structures.len()))
}

fn model_checks_on_orbit_projections() -> Outcome {
    let structures = common::structures();
    for (name, m) in &structures {
        let o = orbit_theory(m, 3).unwrap();
        for mode in [ModelMode::TarskiVaught, ModelMode::Saturated] {
            let r = check_model(&o.projection, 3, mode).unwrap();
            ensure(r.passed(), || format!("{name} {mode:?}: {:?}", r.first_witness()))?;
        }
    }
    Ok(format!("{} projections pass both modes at bound 3", structures.len()))
}

fn model_check_point_into_equality() -> Outcome {
    let r = check_model(&common::point_into_equality(3), 3, ModelMode::TarskiVaught).unwrap();
    let w = r.first_witness().ok_or("no witness")?;
    let params = (w.get("k"), w.get("m"), w.get("n"));
    ensure(
        params == (Some(1), Some(1), Some(0)) && w.elements == ["{1}{2}", "(a)"],
        || format!("unexpected witness {params:?} {:?}", w.elements),
    )?;
    Ok("tarski_vaught fails with y={1}{2}, x=(a), k=1, m=1, n=0".into())
}

fn stability_order_property() -> Outcome {
    let dlo = builtin("dlo", 6).unwrap();
    let lt = dlo.lookup(2, "x1<x2").unwrap();
    let found = timed(STABILITY_LIMIT, "dlo order property", || order_property(&dlo, 2, &[lt], 3).unwrap())?;
    ensure(found.is_some(), || "no witness for dlo".into())?;
    let eq = builtin("equality", 6).unwrap();
    for mask in 0..4u32 {
        let phi: Vec<u32> = (0..2).filter(|b| mask & (1 << b) != 0).collect();
        let r = timed(STABILITY_LIMIT, "equality order property", || order_property(&eq, 2, &phi, 3).unwrap())?;
        ensure(r.is_none(), || format!("equality has a witness for {phi:?}"))?;
    }
    Ok(format!("dlo witness {}, equality none for all four formulas", found.unwrap().label))
}

fn stability_indiscernible_dlo_and_equality() -> Outcome {
    let dlo = builtin("dlo", 6).unwrap();
    let w = timed(STABILITY_LIMIT, "dlo", || indiscernible_gap(&dlo, 1, 3).unwrap())?;
    let w = w.ok_or("no witness for dlo")?;
    let eq = builtin("equality", 6).unwrap();
    let none = timed(STABILITY_LIMIT, "equality", || indiscernible_gap(&eq, 1, 3).unwrap())?;
    ensure(none.is_none(), || "equality has a gap".into())?;
    Ok(format!("dlo witness {} -> {}, equality none", w.label, w.permuted_label))
}

fn stability_indiscernible_random_graph() -> Outcome {
    let rg = builtin("random_graph", 6).unwrap();
    let w = timed(STABILITY_LIMIT, "random_graph", || indiscernible_gap(&rg, 1, 3).unwrap())?;
    match w {
        Some(w) => Ok(format!("witness {}", w.label)),
        None => Err("no order-coherent element of level 3 is moved by a transposition; \
                     every pair type of the random graph is symmetric"
            .into()),
    }
}

fn stability_indiscernible_random_graph_pairs() -> Outcome {
    let rg = builtin("random_graph", 6).unwrap();
    let w = timed(STABILITY_LIMIT, "random_graph", || indiscernible_gap(&rg, 2, 3).unwrap())?;
    let w = w.ok_or("no witness at width 2")?;
    Ok(format!("width 2: {} -> {}", w.label, w.permuted_label))
}

fn stability_dividing() -> Outcome {
    let eq = builtin("equality", 6).unwrap();
    let same = eq.lookup(2, "{1,2}").unwrap();
    let different = eq.lookup(2, "{1}{2}").unwrap();
    let a = timed(STABILITY_LIMIT, "x=y", || divides_at_level(&eq, &same, 1, 1, 2, 2).unwrap())?;
    let b = timed(STABILITY_LIMIT, "x!=y", || divides_at_level(&eq, &different, 1, 1, 3, 3).unwrap())?;
    ensure(a.divides, || "x=y does not divide".into())?;
    ensure(!b.divides, || "x!=y divides".into())?;
    Ok("x=y divides (L=2, k=2); x!=y does not (L=3, k=3)".into())
}

fn cohomology_composition() -> Outcome {
    let mut built = 0;
    for (name, t) in corpus(6) {
        for k in 0..=3 {
            build_complex(&t, k)
                .and_then(|c| c.verify())
                .map_err(|e| format!("{name} K={k}: {e}"))?;
            built += 1;
        }
    }
    Ok(format!("{built} complexes with zero composite coboundaries"))
}

fn cohomology_degree_zero() -> Outcome {
    for name in ["equality", "dlo"] {
        let c = build_complex(&builtin(name, 6).unwrap(), 3).unwrap();
        ensure(c.rank(0) == 1, || format!("{name} has degree-0 rank {}", c.rank(0)))?;
    }
    Ok("rank 1 for equality and dlo at truncation 6".into())
}

fn cohomology_snf_round_trip() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let entry = prop_oneof![2 => Just(0i64), 3 => -50i64..=50];
    let strategy = (1..=SNF_MAX_SIDE, 1..=SNF_MAX_SIDE).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(entry.clone(), c), r)
    });
    for sample in 0..SNF_SAMPLES {
        let a = strategy.new_tree(&mut runner).unwrap().current();
        let big = to_big(&a);
        let r = smith_normal_form(&big);
        let d = multiply(&multiply(&r.u, &big), &r.v);
        let diagonal_ok = d.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, x)| if i == j { *x == r.diagonal[i] } else { x.is_zero() })
        });
        let chain_ok = r
            .diagonal
            .windows(2)
            .all(|w| w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        let unimodular = determinant(&r.u).abs() == BigInt::one() && determinant(&r.v).abs() == BigInt::one();
        ensure(diagonal_ok && chain_ok && unimodular && r.diagonal.iter().all(|x| !x.is_negative()), || {
            format!("sample {sample} ({}x{})", a.len(), a[0].len())
        })?;
    }
    Ok(format!("{SNF_SAMPLES} matrices up to {SNF_MAX_SIDE}x{SNF_MAX_SIDE}"))
}

fn cohomology_pinned() -> Outcome {
    let text = std::fs::read_to_string(common::data_dir().join("../cohomology_pinned.json")).unwrap();
    let pinned: Vec<serde_json::Value> = serde_json::from_str(&text).unwrap();
    let mut torsion = Vec::new();
    for entry in &pinned {
        let name = entry["name"].as_str().unwrap();
        let truncation = entry["truncation"].as_u64().unwrap() as usize;
        let t = match entry["source"].as_str().unwrap() {
            "builtin" => builtin(name, truncation).unwrap(),
            _ => orbit_theory(&common::structure(name), truncation).unwrap().theory.as_ref().clone(),
        };
        let k = entry["max_degree"].as_u64().unwrap() as usize;
        let groups = cohomology(&build_complex(&t, k).unwrap()).unwrap();
        let value = serde_json::to_value(&groups).unwrap();
        ensure(value == entry["groups"], || format!("{name}: computed {value}"))?;
        if groups.iter().any(|g| !g.torsion.is_empty()) {
            torsion.push(name.to_string());
        }
    }
    Ok(format!(
        "{} fixtures match at truncation 6; torsion in {}",
        pinned.len(),
        torsion.join(", ")
    ))
}

fn determinism_and_serialization() -> Outcome {
    let t = common::punctured_dlo(5);
    let one = single_threaded(|| check_theory(&t, 5).unwrap().to_json());
    let many = check_theory(&t, 5).unwrap().to_json();
    let again = check_theory(&t, 5).unwrap().to_json();
    ensure(one == many && many == again, || "reports differ between runs".into())?;
    let m = common::structure("square");
    let o1 = orbit_theory(&m, 4).unwrap();
    let o2 = orbit_theory(&m, 4).unwrap();
    ensure(o1.theory.to_json() == o2.theory.to_json(), || "orbit theory JSON differs".into())?;
    let mut round_trips = 0;
    for (name, t) in corpus(4) {
        let back = TruncatedSymSS::from_json(&t.to_json()).map_err(|e| format!("{name}: {e}"))?;
        ensure(back.level_sizes() == t.level_sizes(), || format!("{name}: sizes changed"))?;
        ensure(back.validate_functor().passed(), || format!("{name}: reloaded functor fails validation"))?;
        round_trips += 1;
    }
    Ok(format!("reports byte-identical; {round_trips} functors round-trip"))
}

fn main() {
    let criteria: [Criterion; 16] = [
        ("theory_axiom.builtins", theory_axiom_on_builtins),
        ("theory_axiom.punctured_dlo", theory_axiom_on_punctured_dlo),
        ("equivalence_suite", equivalence_suite),
        ("orbit_closure_equivalence", orbit_closure_equivalence),
        ("model_checks.orbit_projections", model_checks_on_orbit_projections),
        ("model_checks.point_into_equality", model_check_point_into_equality),
        ("stability.order_property", stability_order_property),
        ("stability.indiscernible.dlo_equality", stability_indiscernible_dlo_and_equality),
        ("stability.indiscernible.random_graph", stability_indiscernible_random_graph),
        ("stability.indiscernible.random_graph_width_2", stability_indiscernible_random_graph_pairs),
        ("stability.dividing", stability_dividing),
        ("cohomology.composition", cohomology_composition),
        ("cohomology.degree_zero", cohomology_degree_zero),
        ("cohomology.snf_round_trip", cohomology_snf_round_trip),
        ("cohomology.pinned", cohomology_pinned),
        ("determinism_and_serialization", determinism_and_serialization),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let spent = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{spent:.2?}]"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason} [{spent:.2?}]");
            }
        }
    }
    println!("{failed} of {} criteria failed", criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
