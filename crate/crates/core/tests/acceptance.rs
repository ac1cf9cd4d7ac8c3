//! Acceptance run: one line per criterion. Pass criterion numbers as arguments
//! to run a subset, e.g. `cargo test --test acceptance -- 1 8`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use iolog_core::deontic::{obligation_ok, obligation_oh, Betterness};
use iolog_core::engine::ConsequenceEngine;
use iolog_core::harness::{
    random_term, run_closure_laws, run_deontic_checks, run_equivalence, run_rule_matrix,
    run_set_level, DeonticOptions, EquivalenceReport, InstancePool,
};
use iolog_core::hol::{emit_theory, render_theory, HolOptions};
use iolog_core::ops::out_membership;
use iolog_core::term::{render_term, SemanticForm};
use iolog_core::{
    ClassicalEngine, FiniteLogic, FiniteLogicSpec, Formula, NormativeSystem, OutOp, Term,
    VariableUniverse,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BUDGET_1: Duration = Duration::from_secs(5);
const BUDGET_2: Duration = Duration::from_secs(10 * 60);
const BUDGET_3: Duration = Duration::from_secs(15 * 60);
const BUDGET_4: Duration = Duration::from_secs(5 * 60);
/// Norm bound of the exhaustive two-variable pools.
const EXHAUSTIVE_NORMS: usize = 3;
const CLOSURE_RANDOM_INSTANCES: usize = 200;
const CLOSURE_RANDOM_VARS: usize = 3;
const CLOSURE_RANDOM_TERMS: usize = 8;
const CLOSURE_SEED: u64 = 4;
const SET_LEVEL_MAX_INPUTS: usize = 2;
const DEONTIC_INSTANCES: usize = 500;
const DEONTIC_MAX_VARS: usize = 4;
const DEONTIC_SEED: u64 = 10;
const PROPERTY_CASES: usize = 1000;
const PROPERTY_SEED: u64 = 9;
const PROPERTY_VARS: usize = 4;
const PROPERTY_DEPTH: usize = 4;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn from_report(report: &EquivalenceReport, elapsed: Duration, budget: Duration) -> Outcome {
    let mut detail = format!("{}; {:.1}s", report.summary(), elapsed.as_secs_f64());
    if budget != Duration::MAX {
        detail.push_str(&format!(" (budget {}s)", budget.as_secs()));
    }
    if let Some(m) = report.mismatches.first() {
        detail.push_str(&format!(
            "; first: {} {} N={:?} A={:?} x={} semantic={} other={} {}",
            m.check, m.operation, m.norms, m.inputs, m.query, m.semantic, m.syntactic, m.witness
        ));
    }
    outcome(report.passed() && elapsed <= budget, detail)
}

fn holds(e: &ClassicalEngine, op: OutOp, n: &NormativeSystem<Formula>, inputs: &[&str], x: &Formula) -> bool {
    let inputs: Vec<Formula> = inputs.iter().map(|s| e.f(s)).collect();
    out_membership(e, op, n, &inputs, x).expect("classical engine")
}

/// Independent oracle: `x` lies above one of the generators, by truth tables.
fn up_oracle(e: &ClassicalEngine, gens: &[&str], x: &Formula) -> bool {
    gens.iter().any(|g| {
        let g = e.universe().form(&e.universe().parse(g).unwrap());
        e.universe().valuations().all(|v| !g.contains(v) || x.term().evaluate(e.universe(), v))
    })
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();

    // (a)
    let e = ClassicalEngine::from_names(&["g", "t"]).unwrap();
    let n = NormativeSystem::from_pairs([(e.f("1"), e.f("g")), (e.f("g"), e.f("t"))]);
    for x in e.elements().unwrap() {
        if holds(&e, OutOp::I, &n, &[], &x) {
            failures.push(format!("(a) out_I with no input contains {x}"));
        }
        if holds(&e, OutOp::II, &n, &["g"], &x) != up_oracle(&e, &["t"], &x) {
            failures.push(format!("(a) out_II from g disagrees on {x}"));
        }
    }

    // (b) over every term of connective depth at most two.
    let e = ClassicalEngine::from_names(&["g", "t", "a", "b"]).unwrap();
    let n = NormativeSystem::from_pairs([
        (e.f("1"), e.f("g")),
        (e.f("g"), e.f("t")),
        (e.f("~g"), e.f("~t")),
        (e.f("a"), e.f("b")),
    ]);
    let mut pool = vec![e.formula(Term::Top), e.formula(Term::Bot)];
    for v in ["g", "t", "a", "b"] {
        pool.push(e.f(v));
    }
    for _ in 0..2 {
        let mut next = pool.clone();
        for x in &pool {
            next.push(e.formula(Term::not(x.term().clone())));
            for y in &pool {
                next.push(e.formula(Term::and(x.term().clone(), y.term().clone())));
                next.push(e.formula(Term::or(x.term().clone(), y.term().clone())));
            }
        }
        next.sort();
        next.dedup();
        pool = next;
    }
    for x in &pool {
        if holds(&e, OutOp::Three, &n, &["~g"], x) != up_oracle(&e, &["g", "t", "~t"], x) {
            failures.push(format!("(b) out_3 disagrees on {x}"));
        }
    }
    let b_count = pool.len();

    // (c)
    let spec = FiniteLogicSpec {
        elements: ["p", "□q", "q", "r", "s", "t"].iter().map(|s| s.to_string()).collect(),
        leq: vec![("□q".into(), "q".into())],
        ..Default::default()
    };
    let kt = FiniteLogic::build(&spec).unwrap();
    let el = |s: &str| kt.element(s).unwrap();
    let n = NormativeSystem::from_pairs([(el("p"), el("□q")), (el("q"), el("r")), (el("s"), el("t"))]);
    for x in 0..kt.len() {
        let got = out_membership(&kt, OutOp::Three, &n, &[el("p")], &x).unwrap();
        let want = ["□q", "q", "r"].contains(&kt.name(x));
        if got != want {
            failures.push(format!("(c) out_3 disagrees on {}", kt.name(x)));
        }
    }

    // (d)
    let e = ClassicalEngine::from_names(&["g", "t"]).unwrap();
    let n = NormativeSystem::from_pairs([
        (e.f("1"), e.f("g")),
        (e.f("g"), e.f("t")),
        (e.f("~g"), e.f("~t")),
    ]);
    for x in e.elements().unwrap() {
        if holds(&e, OutOp::Three, &n, &["~g"], &x) != up_oracle(&e, &["t", "~t", "g"], &x) {
            failures.push(format!("(d) out_3 disagrees on {x}"));
        }
    }

    // (e)
    let v = |s: &str| e.universe().parse_valuation(s).unwrap();
    let tiers = Betterness::from_tiers(
        e.universe(),
        &[vec![v("g & t")], vec![v("g & ~t"), v("~g & ~t")], vec![v("~g & t")]],
    )
    .unwrap();
    for (phi, psi) in [("1", "g"), ("g", "t"), ("~g", "~t")] {
        for op in OutOp::BASE {
            let expected = out_membership(&e, op, &n, &[e.f(phi)], &e.f(psi)).unwrap();
            if op == OutOp::One && !expected {
                failures.push(format!("(e) ({phi}, {psi}) not derivable"));
            }
            if obligation_oh(&e, op, &n, &tiers, &e.f(phi), &e.f(psi)).unwrap() != expected {
                failures.push(format!("(e) {phi} > O {psi} under {op}"));
            }
        }
    }

    // (f)
    let premises = [e.f("~g"), e.f("~g -> ~t")];
    if !obligation_ok(&e, OutOp::One, &n, &premises, &e.f("~g"), &e.f("~t")).unwrap() {
        failures.push("(f) ~g > O ~t".into());
    }

    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && elapsed <= BUDGET_1,
        format!(
            "examples (a)-(f), {b_count} queries in (b); {:.2}s (budget {}s){}",
            elapsed.as_secs_f64(),
            BUDGET_1.as_secs(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {}", failures.join("; "))
            }
        ),
    )
}

fn equivalence(ops: &[OutOp], budget: Duration) -> Outcome {
    let start = Instant::now();
    let pool = InstancePool::default_exhaustive(EXHAUSTIVE_NORMS);
    let systems: Vec<_> = ops.iter().map(|op| (*op, op.rule_system())).collect();
    let report = run_equivalence(&pool, &systems).unwrap();
    from_report(&report, start.elapsed(), budget)
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let small = InstancePool::default_exhaustive(EXHAUSTIVE_NORMS);
    let mut report = run_closure_laws(&small, &OutOp::ALL).unwrap();
    let random = InstancePool::random(
        CLOSURE_RANDOM_VARS,
        CLOSURE_RANDOM_TERMS,
        EXHAUSTIVE_NORMS,
        CLOSURE_RANDOM_INSTANCES,
        CLOSURE_SEED,
    )
    .unwrap();
    report.merge(run_closure_laws(&random, &OutOp::ALL).unwrap());
    from_report(&report, start.elapsed(), BUDGET_4)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let pool = InstancePool::default_exhaustive(EXHAUSTIVE_NORMS);
    let report = run_set_level(&pool, SET_LEVEL_MAX_INPUTS).unwrap();
    let mut out = from_report(&report, start.elapsed(), Duration::MAX);
    out.detail = format!("|A| <= {SET_LEVEL_MAX_INPUTS}: {}", out.detail);
    out
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let pool = InstancePool::default_exhaustive(EXHAUSTIVE_NORMS);
    let matrix = run_rule_matrix(&pool, &OutOp::ALL).unwrap();
    let own_broken: Vec<String> = matrix
        .cells
        .iter()
        .filter(|c| c.own && c.violating_instances > 0)
        .map(|c| format!("{}/{}", c.operation, c.rule))
        .collect();
    let no_counterexample: Vec<String> = matrix
        .cells
        .iter()
        .filter(|c| !c.own && c.violating_instances == 0)
        .map(|c| format!("{}/{}", c.operation, c.rule))
        .collect();
    let found = matrix
        .cells
        .iter()
        .filter(|c| !c.own && c.violating_instances > 0)
        .count();
    let mut detail = format!(
        "{} cells; own rules violated: {}; omitted rules with a counterexample: {found}; without: {} [{}]; {:.1}s",
        matrix.cells.len(),
        if own_broken.is_empty() { "none".to_string() } else { own_broken.join(", ") },
        no_counterexample.len(),
        no_counterexample.join(", "),
        start.elapsed().as_secs_f64()
    );
    for (op, rule) in [(OutOp::One, "OR"), (OutOp::I, "WO")] {
        if let Some(w) = matrix.cells.iter().find(|c| c.operation == op.name() && c.rule == rule).and_then(|c| c.witness.as_ref()) {
            detail.push_str(&format!(
                "; {} vs {rule}: N={:?}, ({}, {}) missing, {}",
                op.name(),
                w.norms,
                w.inputs[0],
                w.query,
                w.witness
            ));
        }
    }
    outcome(matrix.passed(), detail)
}

fn criterion_7() -> Outcome {
    let opts = DeonticOptions {
        max_vars: DEONTIC_MAX_VARS,
        instances: DEONTIC_INSTANCES,
        seed: DEONTIC_SEED,
        corrupt_rewrite: false,
    };
    let start = Instant::now();
    let report = run_deontic_checks(&opts).unwrap();
    from_report(&report, start.elapsed(), Duration::MAX)
}

fn fixture_system(e: &ClassicalEngine, pairs: &[(&str, &str, &str)]) -> NormativeSystem<Formula> {
    NormativeSystem::new(
        pairs
            .iter()
            .map(|(id, b, h)| iolog_core::Norm::new(*id, e.f(b), e.f(h)))
            .collect(),
    )
    .unwrap()
}

fn criterion_8() -> Outcome {
    use iolog_core::deontic::ConditionalQuery;
    let mut failures = Vec::new();

    let e = ClassicalEngine::from_names(&["g", "t"]).unwrap();
    let n = fixture_system(&e, &[("n1", "1", "g"), ("n2", "g", "t"), ("n3", "~g", "~t")]);
    let queries = vec![
        ConditionalQuery::parse(e.universe(), "~g > O ~t", OutOp::Three).unwrap(),
        ConditionalQuery::parse(e.universe(), "g > P t", OutOp::One).unwrap(),
    ];
    let opts = HolOptions {
        theory_name: "OutOps".into(),
        ..Default::default()
    };
    let first = emit_theory(&n, e.universe(), &queries, &opts).unwrap();
    let text = render_theory(&first);
    if text != render_theory(&emit_theory(&n, e.universe(), &queries, &opts).unwrap()) {
        failures.push("out_ops not deterministic".to_string());
    }
    if text != include_str!("../fixtures/out_ops.thy") {
        failures.push("out_ops.thy differs from golden".to_string());
    }
    if first.entry_count("algebra") != 10 {
        failures.push(format!("{} algebra axioms", first.entry_count("algebra")));
    }

    let e = ClassicalEngine::from_names(&["a", "b", "x"]).unwrap();
    let n = fixture_system(&e, &[("r1", "a", "x"), ("r2", "b", "x"), ("r3", "a & b", "~x | b")]);
    let opts = HolOptions {
        theory_name: "Basic".into(),
        ops: vec![OutOp::One, OutOp::Two, OutOp::Three],
    };
    let doc = emit_theory(&n, e.universe(), &[], &opts).unwrap();
    let text = render_theory(&doc);
    if text != include_str!("../fixtures/basic.thy") {
        failures.push("basic.thy differs from golden".to_string());
    }
    if doc.entry_count("algebra") != 10 || doc.section("queries").is_some() {
        failures.push("basic.thy structure".to_string());
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "2 golden files byte-identical, 10 algebra axioms, deterministic".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn form(u: &VariableUniverse, t: &Term) -> SemanticForm {
    u.form(t)
}

fn criterion_9() -> Outcome {
    let names: Vec<String> = iolog_core::harness::variable_names(PROPERTY_VARS);
    let u = VariableUniverse::new(&names).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let mut failures = Vec::new();
    for _ in 0..PROPERTY_CASES {
        let t = random_term(&mut rng, &names, PROPERTY_DEPTH);
        let text = render_term(&t);
        match u.parse(&text) {
            Ok(back) if back == t => {}
            Ok(back) => failures.push(format!("`{text}` reparsed as {back:?}")),
            Err(err) => failures.push(format!("`{text}`: {err}")),
        }
    }
    let mut identities = 0;
    for _ in 0..PROPERTY_CASES {
        let x = random_term(&mut rng, &names, PROPERTY_DEPTH);
        let y = random_term(&mut rng, &names, PROPERTY_DEPTH);
        let z = random_term(&mut rng, &names, PROPERTY_DEPTH);
        let (a, o, neg) = (Term::and, Term::or, Term::not);
        let (xc, yc, zc) = (|| x.clone(), || y.clone(), || z.clone());
        let laws: [(&str, Term, Term); 10] = [
            ("COM_or", o(xc(), yc()), o(yc(), xc())),
            ("COM_and", a(xc(), yc()), a(yc(), xc())),
            ("ASS_or", o(xc(), o(yc(), zc())), o(o(xc(), yc()), zc())),
            ("ASS_and", a(xc(), a(yc(), zc())), a(a(xc(), yc()), zc())),
            ("IDE_or", o(xc(), Term::Bot), xc()),
            ("IDE_and", a(xc(), Term::Top), xc()),
            ("COMP_or", o(xc(), neg(xc())), Term::Top),
            ("COMP_and", a(xc(), neg(xc())), Term::Bot),
            ("DIS_or_and", o(xc(), a(yc(), zc())), a(o(xc(), yc()), o(xc(), zc()))),
            ("DIS_and_or", a(xc(), o(yc(), zc())), o(a(xc(), yc()), a(xc(), zc()))),
        ];
        for (name, l, r) in laws {
            identities += 1;
            let lf = form(&u, &l);
            // Truth-table oracle independent of the bitset forms.
            let by_table = u.valuations().all(|v| l.evaluate(&u, v) == r.evaluate(&u, v));
            if lf != form(&u, &r) || !by_table {
                failures.push(format!("{name} fails on {}", render_term(&x)));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{PROPERTY_CASES} round trips, {identities} identity instances{}",
            failures.first().map(|f| format!("; first failure: {f}")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let run = |k: u32| selected.is_empty() || selected.contains(&k);
    let criteria: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| equivalence(&OutOp::BASE, BUDGET_2))),
        (
            3,
            Box::new(|| {
                let mut ops = OutOp::ITERATED.to_vec();
                ops.push(OutOp::OrI);
                equivalence(&ops, BUDGET_3)
            }),
        ),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (k, f) in criteria {
        if !run(k) {
            continue;
        }
        let o = f();
        println!("criterion {k}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
