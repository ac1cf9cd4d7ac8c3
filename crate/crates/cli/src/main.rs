mod system;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use iolog_core::deontic::{self, ConditionalQuery, Modality};
use iolog_core::harness::{self, InstancePool};
use iolog_core::hol::{self, HolOptions};
use iolog_core::ops::{out_generators, out_membership, Closure};
use iolog_core::proof::{self, default_depth};
use iolog_core::{ConsequenceEngine, NormativeSystem, OutOp, RuleSystem};

use system::System;

#[derive(Parser)]
#[command(name = "iolog", version, about = "Input/output logic: output operations, derivations, deontic queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a query is in the output of a set of inputs.
    Check {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        op: String,
        /// Semicolon-separated inputs; the empty string is the empty set.
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        query: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the minimal generators of the output of one input.
    Outset {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for a derivation of a pair.
    Derive {
        #[arg(long)]
        system: PathBuf,
        /// Comma-separated rule names, or an operation name for its rule set.
        #[arg(long)]
        rules: String,
        /// `PHI => PSI`
        #[arg(long, allow_hyphen_values = true)]
        goal: String,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long)]
        tree: bool,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a conditional obligation or permission.
    Deontic {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        mode: Mode,
        /// `PHI > O PSI` or `PHI > P PSI`
        #[arg(long, allow_hyphen_values = true)]
        cond: String,
        #[arg(long, default_value = "out1")]
        op: String,
        #[arg(long)]
        json: bool,
    },
    /// Write an Isabelle/HOL theory for the system.
    EmitHol {
        #[arg(long)]
        system: PathBuf,
        /// Comma-separated operations, e.g. `1,2,3` or `out1,out3`.
        #[arg(long, default_value = "1,2,3")]
        ops: String,
        /// Conditional queries to state as lemmas.
        #[arg(long = "cond", allow_hyphen_values = true)]
        conds: Vec<String>,
        #[arg(long, default_value = "out1")]
        cond_op: String,
        #[arg(long, default_value = "Norms")]
        theory: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare semantic and proof-search verdicts on generated instances.
    Fuzz {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        norms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Enumerate every system over the term pool instead of sampling.
        #[arg(long)]
        exhaustive: bool,
        /// Connective depth of the exhaustive term pool (ignored with two
        /// variables, which use the fixed ten-term pool).
        #[arg(long, default_value_t = 1)]
        depth: usize,
        #[arg(long, default_value_t = 8)]
        terms: usize,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Comma-separated operations; all of them by default.
        #[arg(long)]
        ops: Option<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(name = "OH")]
    Oh,
    #[value(name = "OK")]
    Ok,
    #[value(name = "PH")]
    Ph,
    #[value(name = "PK")]
    Pk,
    #[value(name = "CON")]
    Con,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Check {
            system,
            op,
            input,
            query,
            json,
        } => {
            let sys = load(&system)?;
            let op = parse_op(&op)?;
            match &sys {
                System::Classical(s) => check(&s.engine, &s.norms, op, &input, &query, json),
                System::Finite(s) => check(&s.logic, &s.norms, op, &input, &query, json),
            }
        }
        Command::Outset {
            system,
            op,
            input,
            json,
        } => {
            let sys = load(&system)?;
            let op = parse_op(&op)?;
            match &sys {
                System::Classical(s) => outset(&s.engine, &s.norms, op, &input, json),
                System::Finite(s) => outset(&s.logic, &s.norms, op, &input, json),
            }
        }
        Command::Derive {
            system,
            rules,
            goal,
            max_depth,
            tree,
            json,
        } => {
            let sys = load(&system)?;
            let rules = parse_rules(&rules)?;
            match &sys {
                System::Classical(s) => derive(&s.engine, &s.norms, &rules, &goal, max_depth, tree, json),
                System::Finite(s) => derive(&s.logic, &s.norms, &rules, &goal, max_depth, tree, json),
            }
        }
        Command::Deontic {
            system,
            mode,
            cond,
            op,
            json,
        } => {
            let sys = load(&system)?;
            deontic_query(sys.classical("deontic")?, mode, &cond, parse_op(&op)?, json)
        }
        Command::EmitHol {
            system,
            ops,
            conds,
            cond_op,
            theory,
            output,
        } => {
            let sys = load(&system)?;
            let s = sys.classical("emit-hol")?;
            let cond_op = parse_op(&cond_op)?;
            let queries = conds
                .iter()
                .map(|c| ConditionalQuery::parse(s.engine.universe(), c, cond_op))
                .collect::<Result<Vec<_>, _>>()?;
            let options = HolOptions {
                theory_name: theory,
                ops: parse_ops(&ops)?,
            };
            let doc = hol::emit_theory(&s.norms, s.engine.universe(), &queries, &options)?;
            let text = hol::render_theory(&doc);
            match output {
                Some(path) => {
                    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Fuzz {
            vars,
            norms,
            seed,
            exhaustive,
            depth,
            terms,
            instances,
            ops,
            json,
        } => {
            let pool = if exhaustive && vars == 2 {
                InstancePool::default_exhaustive(norms)
            } else if exhaustive {
                InstancePool::by_depth(vars, depth, norms)?
            } else {
                InstancePool::random(vars, terms, norms, instances, seed)?
            };
            let ops = match ops {
                Some(list) => parse_ops(&list)?,
                None => OutOp::ALL.to_vec(),
            };
            let systems: Vec<_> = ops.iter().map(|op| (*op, op.rule_system())).collect();
            let report = harness::run_equivalence(&pool, &systems)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                println!("{}", report.summary());
                for m in &report.mismatches {
                    println!(
                        "{} {}: N = {:?}, A = {:?}, query {}: semantic {}, derivable {} ({})",
                        m.check, m.operation, m.norms, m.inputs, m.query, m.semantic, m.syntactic, m.witness
                    );
                }
            }
            Ok(report.passed())
        }
    }
}

fn load(path: &std::path::Path) -> Result<System> {
    let sys = system::load(path)?;
    for w in sys.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(sys)
}

fn parse_op(s: &str) -> Result<OutOp> {
    Ok(s.parse::<OutOp>()?)
}

/// Accepts full names and the short `1`, `II`, ... forms.
fn parse_ops(list: &str) -> Result<Vec<OutOp>> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let op = part
            .parse::<OutOp>()
            .or_else(|_| format!("out{part}").parse::<OutOp>())?;
        if !out.contains(&op) {
            out.push(op);
        }
    }
    if out.is_empty() {
        bail!("no operations given");
    }
    Ok(out)
}

fn parse_rules(s: &str) -> Result<RuleSystem> {
    if let Ok(op) = s.trim().parse::<OutOp>() {
        return Ok(op.rule_system());
    }
    Ok(s.parse::<RuleSystem>()?)
}

fn parse_inputs<E: ConsequenceEngine>(engine: &E, text: &str) -> Result<Vec<E::Elem>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| engine.parse_element(s).with_context(|| format!("input `{s}`")))
        .collect()
}

fn check<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    op: OutOp,
    input: &str,
    query: &str,
    json: bool,
) -> Result<bool> {
    let inputs = parse_inputs(engine, input)?;
    let x = engine.parse_element(query).with_context(|| format!("query `{query}`"))?;
    let holds = out_membership(engine, op, n, &inputs, &x)?;
    if json {
        let inputs: Vec<String> = inputs.iter().map(|a| engine.render(a)).collect();
        let out = json!({ "op": op.name(), "inputs": inputs, "query": engine.render(&x), "holds": holds });
        println!("{out}");
    } else {
        println!("{holds}");
    }
    Ok(holds)
}

fn outset<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    op: OutOp,
    input: &str,
    json: bool,
) -> Result<bool> {
    let inputs = parse_inputs(engine, input)?;
    if inputs.len() > 1 {
        bail!("outset takes a single input; use `check` for input sets");
    }
    let (closure, gens) = match inputs.first() {
        None => (Closure::Exact, Vec::new()),
        Some(a) => {
            let g = out_generators(engine, op, n, a)?;
            (g.closure, g.elements.iter().map(|x| engine.render(x)).collect::<Vec<_>>())
        }
    };
    let closure_name = match closure {
        Closure::Exact => "exact",
        Closure::Upward => "upward",
    };
    if json {
        let out = json!({ "op": op.name(), "input": input.trim(), "closure": closure_name, "generators": gens });
        println!("{out}");
    } else {
        match closure {
            Closure::Exact => println!("{{{}}}", gens.join(", ")),
            Closure::Upward => println!("Up({})", gens.join(", ")),
        }
    }
    Ok(true)
}

fn derive<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    rules: &RuleSystem,
    goal: &str,
    max_depth: Option<usize>,
    tree: bool,
    json: bool,
) -> Result<bool> {
    let Some((body, head)) = goal.split_once("=>") else {
        bail!("goal `{goal}` must have the form `PHI => PSI`");
    };
    let a = engine.parse_element(body.trim()).with_context(|| format!("goal body `{}`", body.trim()))?;
    let x = engine.parse_element(head.trim()).with_context(|| format!("goal head `{}`", head.trim()))?;
    let depth = max_depth.unwrap_or_else(|| default_depth(n.len()));
    let found = proof::derive(engine, rules, n, (&a, &x), depth)?;
    if let Some(t) = &found {
        if let Err(e) = proof::check_tree(engine, t, rules, n) {
            bail!("internal error: derivation failed its own check: {e}");
        }
    }
    if json {
        let out = json!({
            "goal": [engine.render(&a), engine.render(&x)],
            "rules": rules.to_string(),
            "max_depth": depth,
            "found": found.is_some(),
            "tree": found.as_ref().map(|t| proof::tree_json(engine, t)),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        match &found {
            Some(t) if tree => print!("{}", proof::render_tree(engine, t)),
            Some(t) => println!("derivable in {rules}: height {}, {} nodes", t.height(), t.size()),
            None => println!("not found \u{2264} depth {depth} in {rules}"),
        }
    }
    Ok(found.is_some())
}

fn deontic_query(
    s: &system::ClassicalSystem,
    mode: Mode,
    cond: &str,
    op: OutOp,
    json: bool,
) -> Result<bool> {
    let q = ConditionalQuery::parse(s.engine.universe(), cond, op)?;
    let wanted = match mode {
        Mode::Oh | Mode::Ok | Mode::Con => Modality::Obligation,
        Mode::Ph | Mode::Pk => Modality::Permission,
    };
    if q.modality != wanted {
        let form = if wanted == Modality::Obligation { "PHI > O PSI" } else { "PHI > P PSI" };
        bail!("mode {} takes `{form}`", mode_name(mode));
    }
    let explicit = || {
        s.explicit
            .as_ref()
            .context("this mode needs an explicit preference in the system file")
    };
    let (e, n, phi, psi) = (&s.engine, &s.norms, &q.antecedent, &q.consequent);
    let holds = match mode {
        Mode::Oh => deontic::obligation_oh(e, op, n, explicit()?, phi, psi)?,
        Mode::Ph => deontic::permission_ph(e, op, n, explicit()?, phi, psi)?,
        Mode::Ok => deontic::obligation_ok(e, op, n, &s.premises, phi, psi)?,
        Mode::Pk => deontic::permission_pk(e, op, n, &s.premises, phi, psi)?,
        Mode::Con => deontic::derive_con(e, op, n, &s.constraints, phi, psi)?,
    };
    if json {
        let out = json!({ "mode": mode_name(mode), "op": op.name(), "cond": q.to_string(), "holds": holds });
        println!("{out}");
    } else {
        println!("{holds}");
    }
    Ok(holds)
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Oh => "OH",
        Mode::Ok => "OK",
        Mode::Ph => "PH",
        Mode::Pk => "PK",
        Mode::Con => "CON",
    }
}
