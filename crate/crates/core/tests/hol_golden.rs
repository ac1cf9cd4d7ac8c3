//! Golden theory files. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;

use iolog_core::deontic::ConditionalQuery;
use iolog_core::hol::{emit_theory, render_theory, HolOptions};
use iolog_core::{ClassicalEngine, Norm, NormativeSystem, OutOp};

fn system(e: &ClassicalEngine, norms: &[(&str, &str, &str)]) -> NormativeSystem<iolog_core::Formula> {
    NormativeSystem::new(norms.iter().map(|(id, b, h)| Norm::new(*id, e.f(b), e.f(h))).collect()).unwrap()
}

fn out_ops() -> String {
    let e = ClassicalEngine::from_names(&["g", "t"]).unwrap();
    let n = system(&e, &[("n1", "1", "g"), ("n2", "g", "t"), ("n3", "~g", "~t")]);
    let queries = vec![
        ConditionalQuery::parse(e.universe(), "~g > O ~t", OutOp::Three).unwrap(),
        ConditionalQuery::parse(e.universe(), "g > P t", OutOp::One).unwrap(),
    ];
    let opts = HolOptions {
        theory_name: "OutOps".into(),
        ..Default::default()
    };
    render_theory(&emit_theory(&n, e.universe(), &queries, &opts).unwrap())
}

fn basic() -> String {
    let e = ClassicalEngine::from_names(&["a", "b", "x"]).unwrap();
    let n = system(&e, &[("r1", "a", "x"), ("r2", "b", "x"), ("r3", "a & b", "~x | b")]);
    let opts = HolOptions {
        theory_name: "Basic".into(),
        ops: vec![OutOp::Three, OutOp::One, OutOp::Two],
    };
    render_theory(&emit_theory(&n, e.universe(), &[], &opts).unwrap())
}

fn check(name: &str, text: String) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let golden = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, golden, "{name} drifted from its golden file");
}

#[test]
fn out_ops_golden() {
    check("out_ops.thy", out_ops());
}

#[test]
fn basic_golden() {
    check("basic.thy", basic());
}

#[test]
fn op_order_does_not_matter() {
    assert_eq!(basic(), basic());
    let text = basic();
    assert!(text.find("definition out1").unwrap() < text.find("definition out3").unwrap());
    assert!(!text.contains("outII"));
}
