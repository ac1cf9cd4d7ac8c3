//! Isabelle/HOL theory text for a normative system: the algebra as an
//! axiomatized type `i`, the output operations as abbreviations over a norm
//! constant `N`, one axiom per norm and optional lemma stubs.

use std::fmt::Write as _;

use crate::deontic::{ConditionalQuery, Modality};
use crate::error::{Error, Result};
use crate::ops::{NormativeSystem, OutOp};
use crate::term::{Formula, Term, VariableUniverse};

/// Operations with a direct encoding.
pub const EMITTABLE: [OutOp; 5] = [OutOp::I, OutOp::II, OutOp::One, OutOp::Two, OutOp::Three];

const AXIOMS: [(&str, &str); 10] = [
    ("COM_or", "\\<forall>X Y. X \\<squnion> Y = Y \\<squnion> X"),
    ("COM_and", "\\<forall>X Y. X \\<sqinter> Y = Y \\<sqinter> X"),
    (
        "ASS_or",
        "\\<forall>X Y Z. X \\<squnion> (Y \\<squnion> Z) = (X \\<squnion> Y) \\<squnion> Z",
    ),
    (
        "ASS_and",
        "\\<forall>X Y Z. X \\<sqinter> (Y \\<sqinter> Z) = (X \\<sqinter> Y) \\<sqinter> Z",
    ),
    ("IDE_or", "\\<forall>X. X \\<squnion> \\<bottom>\\<^sub>i = X"),
    ("IDE_and", "\\<forall>X. X \\<sqinter> \\<top>\\<^sub>i = X"),
    ("COMP_or", "\\<forall>X. X \\<squnion> neg X = \\<top>\\<^sub>i"),
    ("COMP_and", "\\<forall>X. X \\<sqinter> neg X = \\<bottom>\\<^sub>i"),
    (
        "Dis_or_and",
        "\\<forall>X Y Z. X \\<squnion> (Y \\<sqinter> Z) = (X \\<squnion> Y) \\<sqinter> (X \\<squnion> Z)",
    ),
    (
        "Dis_and_or",
        "\\<forall>X Y Z. X \\<sqinter> (Y \\<squnion> Z) = (X \\<sqinter> Y) \\<squnion> (X \\<sqinter> Z)",
    ),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolOptions {
    pub theory_name: String,
    /// Subset of [`EMITTABLE`]; emitted in that order regardless of the order given.
    pub ops: Vec<OutOp>,
}

impl Default for HolOptions {
    fn default() -> Self {
        HolOptions {
            theory_name: "Norms".into(),
            ops: EMITTABLE.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryDocument {
    pub name: String,
    pub sections: Vec<Section>,
}

impl TheoryDocument {
    pub fn section(&self, title: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.title == title)
    }

    /// Named entries (`name: "..."`) in a section.
    pub fn entry_count(&self, title: &str) -> usize {
        self.section(title).map_or(0, |s| {
            s.lines
                .iter()
                .filter(|l| l.trim_start().split_once(": \"").is_some())
                .count()
        })
    }
}

fn atom(name: &str) -> String {
    format!("p_{name}")
}

/// Translation of a term into a HOL term of type `i`.
pub fn hol_term(t: &Term) -> String {
    match t {
        Term::Var(v) => atom(v),
        Term::Top => "\\<top>\\<^sub>i".into(),
        Term::Bot => "\\<bottom>\\<^sub>i".into(),
        Term::Not(a) => format!("neg {}", hol_operand(a)),
        Term::And(a, b) => format!("{} \\<sqinter> {}", hol_operand(a), hol_operand(b)),
        Term::Or(a, b) => format!("{} \\<squnion> {}", hol_operand(a), hol_operand(b)),
    }
}

fn hol_operand(t: &Term) -> String {
    match t {
        Term::And(..) | Term::Or(..) | Term::Not(..) => format!("({})", hol_term(t)),
        _ => hol_term(t),
    }
}

fn op_name(op: OutOp) -> &'static str {
    match op {
        OutOp::I => "outI",
        OutOp::II => "outII",
        OutOp::One => "out1",
        OutOp::Two => "out2",
        _ => "out3",
    }
}

fn op_body(op: OutOp) -> &'static str {
    match op {
        OutOp::I => "\\<exists>U Y Z. A Z \\<and> Z \\<preceq> Y \\<and> N Y U \\<and> U = X",
        OutOp::II => "\\<exists>U Y Z. A Z \\<and> Z = Y \\<and> N Y U \\<and> U \\<preceq> X",
        OutOp::One => "\\<exists>U Y Z. A Z \\<and> Z \\<preceq> Y \\<and> N Y U \\<and> U \\<preceq> X",
        OutOp::Two => {
            "\\<forall>V. Saturated V \\<and> (\\<forall>U. A U \\<longrightarrow> V U) \\<longrightarrow> (\\<exists>Y Z. Z \\<preceq> X \\<and> N Y Z \\<and> V Y)"
        }
        _ => {
            "\\<forall>V. (\\<forall>U. A U \\<longrightarrow> V U) \\<and> V = Up V \\<and> (\\<forall>W. (\\<exists>Y. V Y \\<and> N Y W) \\<longrightarrow> V W) \\<longrightarrow> (\\<exists>Y Z. Z \\<preceq> X \\<and> N Y Z \\<and> V Y)"
        }
    }
}

fn check_vars(universe: &VariableUniverse, f: &Formula, what: &str) -> Result<()> {
    for v in f.term().variables() {
        if universe.index_of(v).is_none() {
            return Err(Error::Invalid(format!("{what} uses undeclared variable `{v}`")));
        }
    }
    Ok(())
}

pub fn emit_theory(
    n: &NormativeSystem<Formula>,
    universe: &VariableUniverse,
    queries: &[ConditionalQuery],
    options: &HolOptions,
) -> Result<TheoryDocument> {
    for op in &options.ops {
        if !EMITTABLE.contains(op) {
            return Err(Error::Unsupported(format!("no HOL encoding for {op}")));
        }
    }
    let ops: Vec<OutOp> = EMITTABLE
        .iter()
        .copied()
        .filter(|op| options.ops.contains(op))
        .collect();
    if !options
        .theory_name
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_')
        || !options.theory_name.starts_with(|c: char| c.is_ascii_alphabetic())
    {
        return Err(Error::Invalid(format!(
            "`{}` is not a valid theory name",
            options.theory_name
        )));
    }

    let mut sections = Vec::new();

    let mut sig = vec![
        "typedecl i".to_string(),
        "type_synonym \\<tau> = \"i \\<Rightarrow> bool\"".to_string(),
        String::new(),
        "consts".to_string(),
        "  N :: \"i \\<Rightarrow> \\<tau>\"".to_string(),
        "  neg :: \"i \\<Rightarrow> i\"".to_string(),
        "  join :: \"i \\<Rightarrow> i \\<Rightarrow> i\" (infixr \"\\<squnion>\" 65)".to_string(),
        "  meet :: \"i \\<Rightarrow> i \\<Rightarrow> i\" (infixr \"\\<sqinter>\" 70)".to_string(),
        "  one :: i (\"\\<top>\\<^sub>i\")".to_string(),
        "  zero :: i (\"\\<bottom>\\<^sub>i\")".to_string(),
    ];
    for name in universe.names() {
        sig.push(format!("  {} :: i", atom(name)));
    }
    sections.push(Section {
        title: "signature".into(),
        lines: sig,
    });

    let mut ax = vec!["axiomatization where".to_string()];
    for (k, (name, body)) in AXIOMS.iter().enumerate() {
        let sep = if k + 1 < AXIOMS.len() { " and" } else { "" };
        ax.push(format!("  {name}: \"{body}\"{sep}"));
    }
    sections.push(Section {
        title: "algebra".into(),
        lines: ax,
    });

    let mut defs = vec![
        "definition leq :: \"i \\<Rightarrow> i \\<Rightarrow> bool\" (infix \"\\<preceq>\" 50) where".to_string(),
        "  \"X \\<preceq> Y \\<equiv> X \\<sqinter> Y = X\"".to_string(),
        String::new(),
        "definition Up :: \"\\<tau> \\<Rightarrow> \\<tau>\" where".to_string(),
        "  \"Up A \\<equiv> \\<lambda>X. \\<exists>Z. A Z \\<and> Z \\<preceq> X\"".to_string(),
        String::new(),
        "definition Saturated :: \"\\<tau> \\<Rightarrow> bool\" where".to_string(),
        "  \"Saturated A \\<equiv> \\<forall>X Y. (A (X \\<squnion> Y) \\<longrightarrow> A X \\<or> A Y) \\<and> (A X \\<and> X \\<preceq> Y \\<longrightarrow> A Y)\"".to_string(),
    ];
    for op in &ops {
        defs.push(String::new());
        defs.push(format!(
            "definition {} :: \"\\<tau> \\<Rightarrow> \\<tau>\" where",
            op_name(*op)
        ));
        defs.push(format!(
            "  \"{} A \\<equiv> \\<lambda>X. {}\"",
            op_name(*op),
            op_body(*op)
        ));
    }
    sections.push(Section {
        title: "operations".into(),
        lines: defs,
    });

    let mut norms = Vec::new();
    if !n.is_empty() {
        norms.push("axiomatization where".to_string());
        for (k, m) in n.norms().iter().enumerate() {
            check_vars(universe, &m.body, &format!("norm {}", m.id))?;
            check_vars(universe, &m.head, &format!("norm {}", m.id))?;
            let sep = if k + 1 < n.len() { " and" } else { "" };
            norms.push(format!(
                "  norm_{}: \"N ({}) ({})\"{sep}",
                sanitize(&m.id),
                hol_term(m.body.term()),
                hol_term(m.head.term())
            ));
        }
    }
    sections.push(Section {
        title: "norms".into(),
        lines: norms,
    });

    if !queries.is_empty() {
        let mut lemmas = Vec::new();
        for (k, q) in queries.iter().enumerate() {
            check_vars(universe, &q.antecedent, "query")?;
            check_vars(universe, &q.consequent, "query")?;
            if !ops.contains(&q.op) {
                return Err(Error::Invalid(format!(
                    "query `{q}` uses {} which is not emitted",
                    q.op
                )));
            }
            if k > 0 {
                lemmas.push(String::new());
            }
            let kind = match q.modality {
                Modality::Obligation => "obligation",
                Modality::Permission => "permission",
            };
            lemmas.push(format!("(* {kind} {q}: detachment part *)"));
            lemmas.push(format!(
                "lemma query_{}: \"{} (\\<lambda>Z. Z = {}) ({})\"",
                k + 1,
                op_name(q.op),
                hol_operand(q.antecedent.term()),
                hol_term(q.consequent.term())
            ));
            lemmas.push("  nitpick [user_axioms] sledgehammer [verbose] oops".to_string());
        }
        sections.push(Section {
            title: "queries".into(),
            lines: lemmas,
        });
    }

    Ok(TheoryDocument {
        name: options.theory_name.clone(),
        sections,
    })
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

pub fn render_theory(doc: &TheoryDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "theory {}", doc.name);
    out.push_str("  imports Main\nbegin\n");
    for s in &doc.sections {
        if s.lines.is_empty() {
            continue;
        }
        let _ = writeln!(out, "\n(* {} *)\n", s.title);
        for l in &s.lines {
            out.push_str(l);
            out.push('\n');
        }
    }
    out.push_str("\nend\n");
    out
}
