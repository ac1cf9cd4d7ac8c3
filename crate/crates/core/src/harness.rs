//! Cross-checks over small instance pools: semantic operations against proof
//! search, closure laws, rule validity, set-level against lifted evaluation and
//! the deontic characterizations.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::deontic::{
    obligation_ok, obligation_ok_rewrite, obligation_oh, obligation_oh_mcs, opt, Betterness,
    PreferenceModel,
};
use crate::engine::classical::ClassicalEngine;
use crate::engine::ConsequenceEngine;
use crate::error::{Error, Result};
use crate::ops::{out_generators, out_membership, out_set_semantic, NormativeSystem, OutOp};
use crate::proof::{CandidatePool, Rule, RuleSystem, POOL_CAP};
use crate::term::{Formula, Term, Valuation};

/// The fixed two-variable term pool of the default exhaustive run.
pub const DEFAULT_TERMS: [&str; 10] = [
    "0", "1", "p", "q", "~p", "~q", "p & q", "p | q", "p & ~q", "~p | q",
];

/// Height bound for proof search in equivalence runs.
pub const EQUIVALENCE_DEPTH: usize = 8;

/// Mismatches kept per check and operation; the count is always exact.
const KEPT_PER_KIND: usize = 20;

const NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

pub fn variable_names(vars: usize) -> Vec<String> {
    (0..vars)
        .map(|i| match NAMES.get(i) {
            Some(n) => n.to_string(),
            None => format!("v{i}"),
        })
        .collect()
}

pub fn random_term<R: Rng>(rng: &mut R, names: &[String], depth: usize) -> Term {
    if depth == 0 || rng.gen_ratio(1, 3) {
        return match rng.gen_range(0..10) {
            0 => Term::Top,
            1 => Term::Bot,
            _ => Term::var(names[rng.gen_range(0..names.len())].clone()),
        };
    }
    match rng.gen_range(0..3) {
        0 => Term::not(random_term(rng, names, depth - 1)),
        1 => Term::and(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1)),
        _ => Term::or(random_term(rng, names, depth - 1), random_term(rng, names, depth - 1)),
    }
}

/// Every term up to `depth` connectives deep, keeping the first of each
/// semantic class.
fn terms_by_depth(engine: &ClassicalEngine, depth: usize) -> Vec<Formula> {
    let mut layers: Vec<Formula> = vec![engine.formula(Term::Bot), engine.formula(Term::Top)];
    for name in engine.universe().names() {
        layers.push(engine.formula(Term::var(name.clone())));
    }
    let mut all = dedup(layers);
    for _ in 0..depth {
        let mut next = all.clone();
        for a in &all {
            next.push(engine.formula(Term::not(a.term().clone())));
            for b in &all {
                next.push(engine.formula(Term::and(a.term().clone(), b.term().clone())));
                next.push(engine.formula(Term::or(a.term().clone(), b.term().clone())));
            }
        }
        all = dedup(next);
    }
    all
}

fn dedup(items: Vec<Formula>) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    items.into_iter().filter(|f| seen.insert(f.clone())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Systems {
    /// Every set of at most `max_norms` distinct pairs over the term pool.
    Exhaustive,
    /// `count` sets of one to `max_norms` pairs, drawn from the seed.
    Random { count: usize },
}

/// Terms, the normative systems over them and the seed that drew them.
#[derive(Debug, Clone)]
pub struct InstancePool {
    engine: ClassicalEngine,
    terms: Vec<Formula>,
    max_norms: usize,
    systems: Systems,
    seed: u64,
}

pub type PairIndex = (usize, usize);

impl InstancePool {
    pub fn new(
        engine: ClassicalEngine,
        terms: Vec<Formula>,
        max_norms: usize,
        systems: Systems,
        seed: u64,
    ) -> Self {
        InstancePool {
            engine,
            terms: dedup(terms),
            max_norms,
            systems,
            seed,
        }
    }

    /// Two variables, the ten fixed terms, every system of up to `max_norms` norms.
    pub fn default_exhaustive(max_norms: usize) -> Self {
        let engine = ClassicalEngine::from_names(&["p", "q"]).expect("valid universe");
        let terms = DEFAULT_TERMS.iter().map(|t| engine.f(t)).collect();
        Self::new(engine, terms, max_norms, Systems::Exhaustive, 0)
    }

    pub fn by_depth(vars: usize, depth: usize, max_norms: usize) -> Result<Self> {
        let engine = ClassicalEngine::from_names(&variable_names(vars))?;
        let terms = terms_by_depth(&engine, depth);
        Ok(Self::new(engine, terms, max_norms, Systems::Exhaustive, 0))
    }

    /// `term_count` random terms (semantically distinct, so possibly fewer)
    /// and `count` random systems.
    pub fn random(
        vars: usize,
        term_count: usize,
        max_norms: usize,
        count: usize,
        seed: u64,
    ) -> Result<Self> {
        let names = variable_names(vars);
        let engine = ClassicalEngine::from_names(&names)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms = Vec::new();
        for _ in 0..term_count * 4 {
            if terms.len() == term_count {
                break;
            }
            let f = engine.formula(random_term(&mut rng, &names, 3));
            if !terms.contains(&f) {
                terms.push(f);
            }
        }
        Ok(Self::new(engine, terms, max_norms, Systems::Random { count }, seed))
    }

    pub fn engine(&self) -> &ClassicalEngine {
        &self.engine
    }

    pub fn terms(&self) -> &[Formula] {
        &self.terms
    }

    pub fn max_norms(&self) -> usize {
        self.max_norms
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Systems as lists of term-index pairs, in a fixed order.
    pub fn systems(&self) -> Vec<Vec<PairIndex>> {
        let t = self.terms.len();
        let pairs: Vec<PairIndex> = (0..t).flat_map(|i| (0..t).map(move |j| (i, j))).collect();
        match self.systems {
            Systems::Exhaustive => {
                let mut out = vec![Vec::new()];
                let mut frontier: Vec<(Vec<PairIndex>, usize)> = vec![(Vec::new(), 0)];
                for _ in 0..self.max_norms {
                    let mut next = Vec::new();
                    for (s, from) in &frontier {
                        for (k, p) in pairs.iter().enumerate().skip(*from) {
                            let mut s2 = s.clone();
                            s2.push(*p);
                            out.push(s2.clone());
                            next.push((s2, k + 1));
                        }
                    }
                    frontier = next;
                }
                out
            }
            Systems::Random { count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x5157_3e3d);
                (0..count)
                    .map(|_| {
                        let size = rng.gen_range(1..=self.max_norms.max(1));
                        let mut s: Vec<PairIndex> =
                            pairs.choose_multiple(&mut rng, size).copied().collect();
                        s.sort();
                        s
                    })
                    .collect()
            }
        }
    }

    pub fn system(&self, pairs: &[PairIndex]) -> NormativeSystem<Formula> {
        NormativeSystem::from_pairs(
            pairs
                .iter()
                .map(|&(b, h)| (self.terms[b].clone(), self.terms[h].clone())),
        )
    }
}

/// One disagreement, with enough context to re-run it alone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Mismatch {
    pub check: String,
    pub operation: String,
    pub rules: String,
    pub norms: Vec<(String, String)>,
    pub inputs: Vec<String>,
    pub query: String,
    pub semantic: bool,
    pub syntactic: bool,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub checked: usize,
    pub mismatch_count: usize,
    /// A bounded, sorted sample of the mismatches.
    pub mismatches: Vec<Mismatch>,
    #[serde(skip)]
    kept: HashMap<(String, String), usize>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }

    fn record(&mut self, m: Mismatch) {
        self.mismatch_count += 1;
        let kept = self.kept.entry((m.check.clone(), m.operation.clone())).or_default();
        if *kept < KEPT_PER_KIND {
            *kept += 1;
            self.mismatches.push(m);
        }
    }

    fn finish(mut self) -> Self {
        self.mismatches.sort();
        self
    }

    pub fn merge(&mut self, other: EquivalenceReport) {
        self.checked += other.checked;
        for m in other.mismatches {
            self.record(m);
            self.mismatch_count -= 1;
        }
        self.mismatch_count += other.mismatch_count;
        self.mismatches.sort();
    }

    pub fn summary(&self) -> String {
        format!("{} checked, {} mismatches", self.checked, self.mismatch_count)
    }
}

fn render_norms(engine: &ClassicalEngine, n: &NormativeSystem<Formula>) -> Vec<(String, String)> {
    n.norms()
        .iter()
        .map(|m| (engine.render(&m.body), engine.render(&m.head)))
        .collect()
}

fn rule_list(rules: &RuleSystem) -> String {
    rules
        .rules()
        .iter()
        .map(|r| r.name())
        .collect::<Vec<_>>()
        .join(",")
}

fn saturation_verdict(
    engine: &ClassicalEngine,
    rules: &RuleSystem,
    n: &NormativeSystem<Formula>,
    a: &Formula,
    x: &Formula,
) -> Result<bool> {
    let mut seeds: Vec<Formula> = engine
        .elements()
        .unwrap_or_else(|| n.bodies().into_iter().chain(n.heads()).collect());
    seeds.push(a.clone());
    seeds.push(x.clone());
    let pool = CandidatePool::closure(engine, &seeds, POOL_CAP);
    let sat = pool.saturate(engine, rules, n, EQUIVALENCE_DEPTH)?;
    Ok(sat.contains(pool.index_of(a).expect("seeded"), pool.index_of(x).expect("seeded")))
}

/// Drops norms while the disagreement persists.
fn minimize(
    engine: &ClassicalEngine,
    op: OutOp,
    rules: &RuleSystem,
    n: &NormativeSystem<Formula>,
    a: &Formula,
    x: &Formula,
) -> Result<NormativeSystem<Formula>> {
    let mut pairs: Vec<(Formula, Formula)> =
        n.pairs().map(|(b, h)| (b.clone(), h.clone())).collect();
    let mut i = 0;
    while i < pairs.len() {
        let mut fewer = pairs.clone();
        fewer.remove(i);
        let m = NormativeSystem::from_pairs(fewer.clone());
        let sem = out_membership(engine, op, &m, std::slice::from_ref(a), x)?;
        let syn = saturation_verdict(engine, rules, &m, a, x)?;
        if sem != syn {
            pairs = fewer;
        } else {
            i += 1;
        }
    }
    Ok(NormativeSystem::from_pairs(pairs))
}

/// Re-runs a mismatch from its recorded strings. Returns true when the
/// disagreement is reproduced with the recorded verdicts.
pub fn recheck(engine: &ClassicalEngine, m: &Mismatch) -> Result<bool> {
    let parse = |s: &str| engine.parse_element(s);
    let n = NormativeSystem::from_pairs(
        m.norms
            .iter()
            .map(|(b, h)| Ok((parse(b)?, parse(h)?)))
            .collect::<Result<Vec<_>>>()?,
    );
    let inputs: Vec<Formula> = m.inputs.iter().map(|s| parse(s)).collect::<Result<_>>()?;
    let x = parse(&m.query)?;
    let op: OutOp = m.operation.parse()?;
    match m.check.as_str() {
        "equivalence" => {
            let rules: RuleSystem = m.rules.parse()?;
            let sem = out_membership(engine, op, &n, &inputs, &x)?;
            let syn = saturation_verdict(engine, &rules, &n, &inputs[0], &x)?;
            Ok(sem == m.semantic && syn == m.syntactic)
        }
        "set-level" => {
            let set = out_set_semantic(engine, op, &n, &inputs, &x)?;
            let lift = out_membership(engine, op, &n, &inputs, &x)?;
            Ok(set == m.semantic && lift == m.syntactic)
        }
        other => Err(Error::Unsupported(format!("no standalone recheck for `{other}`"))),
    }
}

/// Semantic verdicts against proof-search verdicts for every system of the
/// pool, every single input and every query drawn from the terms.
pub fn run_equivalence(
    pool: &InstancePool,
    systems: &[(OutOp, RuleSystem)],
) -> Result<EquivalenceReport> {
    let engine = pool.engine();
    let terms = pool.terms();
    let cand = CandidatePool::closure(engine, terms, POOL_CAP);
    if cand.truncated() {
        return Err(Error::Unsupported("term pool closure exceeds the candidate cap".into()));
    }
    let at: Vec<usize> = terms.iter().map(|t| cand.index_of(t).expect("seeded")).collect();
    let mut report = EquivalenceReport::default();
    for sys in pool.systems() {
        let n = pool.system(&sys);
        for (op, rules) in systems {
            let sat = cand.saturate(engine, rules, &n, EQUIVALENCE_DEPTH)?;
            for (ai, a) in terms.iter().enumerate() {
                let gens = out_generators(engine, *op, &n, a)?;
                for (xi, x) in terms.iter().enumerate() {
                    report.checked += 1;
                    let sem = gens.contains(engine, x);
                    let syn = sat.contains(at[ai], at[xi]);
                    if sem != syn {
                        let small = minimize(engine, *op, rules, &n, a, x)?;
                        let witness = if sem {
                            let g = out_generators(engine, *op, &small, a)?;
                            format!(
                                "semantic generators: {}",
                                g.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
                            )
                        } else {
                            "derivable by the rules but not in the output".to_string()
                        };
                        report.record(Mismatch {
                            check: "equivalence".into(),
                            operation: op.name().into(),
                            rules: rule_list(rules),
                            norms: render_norms(engine, &small),
                            inputs: vec![engine.render(a)],
                            query: engine.render(x),
                            semantic: sem,
                            syntactic: syn,
                            witness,
                        });
                    }
                }
            }
        }
    }
    Ok(report.finish())
}

/// `(a, x)` pairs over the terms with `x ∈ out_op(N, {a})`.
fn pair_closure(
    pool: &InstancePool,
    op: OutOp,
    pairs: &BTreeSet<PairIndex>,
) -> Result<BTreeSet<PairIndex>> {
    let engine = pool.engine();
    let terms = pool.terms();
    let n = pool.system(&pairs.iter().copied().collect::<Vec<_>>());
    let mut out = BTreeSet::new();
    for (ai, a) in terms.iter().enumerate() {
        let gens = out_generators(engine, op, &n, a)?;
        for (xi, x) in terms.iter().enumerate() {
            if gens.contains(engine, x) {
                out.insert((ai, xi));
            }
        }
    }
    Ok(out)
}

/// Inclusion, monotony and idempotence of `N ↦ {(a, x) : x ∈ out(N, {a})}`
/// restricted to pairs over the terms. Monotony is checked against every
/// system with one norm removed.
pub fn run_closure_laws(pool: &InstancePool, ops: &[OutOp]) -> Result<EquivalenceReport> {
    let engine = pool.engine();
    let render = |set: &BTreeSet<PairIndex>| -> Vec<(String, String)> {
        set.iter()
            .map(|&(b, h)| (engine.render(&pool.terms()[b]), engine.render(&pool.terms()[h])))
            .collect()
    };
    let mut report = EquivalenceReport::default();
    for &op in ops {
        let mut memo: HashMap<BTreeSet<PairIndex>, BTreeSet<PairIndex>> = HashMap::new();
        let mut closure = |s: &BTreeSet<PairIndex>| -> Result<BTreeSet<PairIndex>> {
            if let Some(c) = memo.get(s) {
                return Ok(c.clone());
            }
            let c = pair_closure(pool, op, s)?;
            memo.insert(s.clone(), c.clone());
            Ok(c)
        };
        for sys in pool.systems() {
            let s: BTreeSet<PairIndex> = sys.into_iter().collect();
            let c = closure(&s)?;
            let mut law = |name: &str, holds: bool, other: &BTreeSet<PairIndex>| {
                report.checked += 1;
                if !holds {
                    report.record(Mismatch {
                        check: name.into(),
                        operation: op.name().into(),
                        rules: String::new(),
                        norms: render(&s),
                        inputs: Vec::new(),
                        query: String::new(),
                        semantic: false,
                        syntactic: true,
                        witness: format!("{:?}", render(other)),
                    });
                }
            };
            law("inclusion", s.is_subset(&c), &c);
            let cc = closure(&c)?;
            law("idempotence", cc == c, &cc);
            for p in &s {
                let mut smaller = s.clone();
                smaller.remove(p);
                let cs = closure(&smaller)?;
                law("monotony", cs.is_subset(&c), &smaller);
            }
        }
    }
    Ok(report.finish())
}

/// Outcome of checking one operation's output against one rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCell {
    pub operation: String,
    pub rule: String,
    /// The rule belongs to the operation's own system.
    pub own: bool,
    pub instances: usize,
    pub violating_instances: usize,
    pub witness: Option<Mismatch>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RuleMatrix {
    pub cells: Vec<RuleCell>,
}

impl RuleMatrix {
    /// Own rules never violated, omitted rules violated somewhere.
    pub fn passed(&self) -> bool {
        self.cells
            .iter()
            .all(|c| (c.violating_instances == 0) == c.own)
    }

    pub fn cell(&self, op: OutOp, rule: Rule) -> Option<&RuleCell> {
        self.cells
            .iter()
            .find(|c| c.operation == op.name() && c.rule == rule.name())
    }
}

pub const ALL_RULES: [Rule; 8] = [
    Rule::EQI,
    Rule::EQO,
    Rule::SI,
    Rule::WO,
    Rule::OR,
    Rule::T,
    Rule::AND,
    Rule::CT,
];

/// First application of `rule` whose premises are in `table` and whose
/// conclusion is not. Indices are candidate-pool positions.
fn rule_violation(
    cand: &CandidatePool<Formula>,
    table: &[Vec<bool>],
    rule: Rule,
) -> Option<(Vec<PairIndex>, PairIndex)> {
    let k = table.len();
    let has = |a: usize, x: usize| table[a][x];
    for a in 0..k {
        for x in 0..k {
            if !has(a, x) {
                continue;
            }
            match rule {
                // Pool positions are semantic classes, so equivalence is identity.
                Rule::EQI | Rule::EQO => {}
                Rule::SI => {
                    if let Some(b) = (0..k).find(|&b| cand.leq(b, a) && !has(b, x)) {
                        return Some((vec![(a, x)], (b, x)));
                    }
                }
                Rule::WO => {
                    if let Some(y) = (0..k).find(|&y| cand.leq(x, y) && !has(a, y)) {
                        return Some((vec![(a, x)], (a, y)));
                    }
                }
                Rule::OR => {
                    for b in 0..k {
                        if has(b, x) {
                            let j = cand.join_idx(a, b).expect("closed pool");
                            if !has(j, x) {
                                return Some((vec![(a, x), (b, x)], (j, x)));
                            }
                        }
                    }
                }
                Rule::T => {
                    if let Some(y) = (0..k).find(|&y| has(x, y) && !has(a, y)) {
                        return Some((vec![(a, x), (x, y)], (a, y)));
                    }
                }
                Rule::AND => {
                    for y in 0..k {
                        if has(a, y) {
                            let m = cand.meet_idx(x, y).expect("closed pool");
                            if !has(a, m) {
                                return Some((vec![(a, x), (a, y)], (a, m)));
                            }
                        }
                    }
                }
                Rule::CT => {
                    let c = cand.meet_idx(a, x).expect("closed pool");
                    if let Some(y) = (0..k).find(|&y| has(c, y) && !has(a, y)) {
                        return Some((vec![(a, x), (c, y)], (a, y)));
                    }
                }
            }
        }
    }
    None
}

/// For each operation and rule, whether the operation's pair-level output over
/// the whole (finite) algebra is closed under the rule on every system.
pub fn run_rule_matrix(pool: &InstancePool, ops: &[OutOp]) -> Result<RuleMatrix> {
    let engine = pool.engine();
    let seeds: Vec<Formula> = engine
        .elements()
        .ok_or_else(|| Error::Unsupported("rule matrix needs an enumerable algebra".into()))?;
    let cand = CandidatePool::closure(engine, &seeds, POOL_CAP);
    let elems = cand.elements();
    let k = elems.len();
    let systems = pool.systems();
    let mut matrix = RuleMatrix::default();
    for &op in ops {
        let own = op.rule_system();
        let mut cells: Vec<RuleCell> = ALL_RULES
            .iter()
            .map(|r| RuleCell {
                operation: op.name().into(),
                rule: r.name().into(),
                own: own.contains(*r),
                instances: 0,
                violating_instances: 0,
                witness: None,
            })
            .collect();
        for sys in &systems {
            let n = pool.system(sys);
            let mut table = vec![vec![false; k]; k];
            for (a, row) in table.iter_mut().enumerate() {
                let gens = out_generators(engine, op, &n, &elems[a])?;
                for (x, cell) in row.iter_mut().enumerate() {
                    *cell = gens.contains(engine, &elems[x]);
                }
            }
            for (cell, &rule) in cells.iter_mut().zip(ALL_RULES.iter()) {
                cell.instances += 1;
                if let Some((premises, (c, z))) = rule_violation(&cand, &table, rule) {
                    cell.violating_instances += 1;
                    if cell.witness.is_none() {
                        let shown: Vec<String> = premises
                            .iter()
                            .map(|&(a, x)| format!("({}, {})", elems[a], elems[x]))
                            .collect();
                        cell.witness = Some(Mismatch {
                            check: "rule".into(),
                            operation: op.name().into(),
                            rules: rule.name().into(),
                            norms: render_norms(engine, &n),
                            inputs: vec![engine.render(&elems[c])],
                            query: engine.render(&elems[z]),
                            semantic: false,
                            syntactic: true,
                            witness: format!("premises {} in the output", shown.join(", ")),
                        });
                    }
                }
            }
        }
        matrix.cells.extend(cells);
    }
    Ok(matrix)
}

/// Set-level `out_2`/`out_3` against the existential lift over single inputs,
/// for every input set of at most `max_inputs` terms.
pub fn run_set_level(pool: &InstancePool, max_inputs: usize) -> Result<EquivalenceReport> {
    let engine = pool.engine();
    let terms = pool.terms();
    let mut input_sets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = input_sets.clone();
    for _ in 0..max_inputs {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().map_or(0, |&i| i + 1);
            for i in from..terms.len() {
                let mut s2 = s.clone();
                s2.push(i);
                next.push(s2);
            }
        }
        input_sets.extend(next.iter().cloned());
        frontier = next;
    }
    let mut report = EquivalenceReport::default();
    for sys in pool.systems() {
        let n = pool.system(&sys);
        for set in &input_sets {
            let inputs: Vec<Formula> = set.iter().map(|&i| terms[i].clone()).collect();
            for x in terms {
                for op in [OutOp::Two, OutOp::Three] {
                    report.checked += 1;
                    let at_once = out_set_semantic(engine, op, &n, &inputs, x)?;
                    let lifted = out_membership(engine, op, &n, &inputs, x)?;
                    if at_once != lifted {
                        report.record(Mismatch {
                            check: "set-level".into(),
                            operation: op.name().into(),
                            rules: String::new(),
                            norms: render_norms(engine, &n),
                            inputs: inputs.iter().map(|f| engine.render(f)).collect(),
                            query: engine.render(x),
                            semantic: at_once,
                            syntactic: lifted,
                            witness: String::new(),
                        });
                    }
                }
            }
        }
    }
    Ok(report.finish())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeonticOptions {
    /// Random instances use between one and this many variables.
    pub max_vars: usize,
    pub instances: usize,
    pub seed: u64,
    /// Negative control: evaluate the rewrite without its inconsistent-input
    /// branch, so `A, φ ⊢ ψ` is used even when `φ` contradicts `A`.
    pub corrupt_rewrite: bool,
}

impl Default for DeonticOptions {
    fn default() -> Self {
        DeonticOptions {
            max_vars: 4,
            instances: 500,
            seed: 7,
            corrupt_rewrite: false,
        }
    }
}

struct DeonticInstance {
    engine: ClassicalEngine,
    op: OutOp,
    n: NormativeSystem<Formula>,
    premises: Vec<Formula>,
    relation: Betterness,
    phi: Formula,
    psi: Formula,
}

fn worked_instance() -> DeonticInstance {
    let e = ClassicalEngine::from_names(&["g", "t"]).expect("valid universe");
    let n = NormativeSystem::from_pairs([
        (e.f("1"), e.f("g")),
        (e.f("g"), e.f("t")),
        (e.f("~g"), e.f("~t")),
    ]);
    let v = |s: &str| e.universe().parse_valuation(s).expect("valuation");
    let relation = Betterness::from_tiers(
        e.universe(),
        &[vec![v("g & t")], vec![v("g & ~t"), v("~g & ~t")], vec![v("~g & t")]],
    )
    .expect("tiers");
    DeonticInstance {
        op: OutOp::One,
        premises: vec![e.f("~g"), e.f("~g -> ~t")],
        phi: e.f("~g"),
        psi: e.f("~t"),
        n,
        relation,
        engine: e,
    }
}

fn random_instance(rng: &mut ChaCha8Rng, max_vars: usize) -> Result<DeonticInstance> {
    let vars = rng.gen_range(1..=max_vars.max(1));
    let names = variable_names(vars);
    let e = ClassicalEngine::from_names(&names)?;
    let term = |rng: &mut ChaCha8Rng| e.formula(random_term(rng, &names, 2));
    let phi = term(rng);
    let psi = term(rng);
    let mut pairs = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        pairs.push((term(rng), term(rng)));
    }
    if rng.gen_bool(0.5) {
        pairs.push((phi.clone(), psi.clone()));
    }
    let premises = (0..rng.gen_range(0..=3)).map(|_| term(rng)).collect();
    let count = e.universe().valuation_count() as u32;
    let mut rel = Vec::new();
    for v in 0..count {
        for w in 0..count {
            if rng.gen_bool(0.6) {
                rel.push((Valuation(v), Valuation(w)));
            }
        }
    }
    let op = [OutOp::I, OutOp::II, OutOp::One, OutOp::Two, OutOp::Three][rng.gen_range(0..5)];
    Ok(DeonticInstance {
        relation: Betterness::from_pairs(e.universe(), &rel)?,
        n: NormativeSystem::from_pairs(pairs),
        engine: e,
        op,
        premises,
        phi,
        psi,
    })
}

fn corrupted_rewrite(d: &DeonticInstance) -> Result<bool> {
    let e = &d.engine;
    if !out_membership(e, d.op, &d.n, std::slice::from_ref(&d.phi), &d.psi)? {
        return Ok(false);
    }
    let mut with_phi: Vec<&Formula> = d.premises.iter().collect();
    with_phi.push(&d.phi);
    Ok(e.entails(&with_phi, &d.psi))
}

/// The definition of premise-based obligation against its consistency-split
/// rewrite, and relation-based obligation against its set-algebraic reading,
/// on the worked instance followed by `instances` random ones.
pub fn run_deontic_checks(options: &DeonticOptions) -> Result<EquivalenceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut all = vec![worked_instance()];
    for _ in 0..options.instances {
        all.push(random_instance(&mut rng, options.max_vars)?);
    }
    let mut report = EquivalenceReport::default();
    for d in &all {
        let e = &d.engine;
        let base = |check: &str, semantic: bool, syntactic: bool, witness: String| Mismatch {
            check: check.into(),
            operation: d.op.name().into(),
            rules: String::new(),
            norms: render_norms(e, &d.n),
            inputs: vec![e.render(&d.phi)],
            query: e.render(&d.psi),
            semantic,
            syntactic,
            witness,
        };

        let direct = obligation_ok(e, d.op, &d.n, &d.premises, &d.phi, &d.psi)?;
        let rewrite = if options.corrupt_rewrite {
            corrupted_rewrite(d)?
        } else {
            obligation_ok_rewrite(e, d.op, &d.n, &d.premises, &d.phi, &d.psi)?
        };
        report.checked += 1;
        if direct != rewrite {
            let best = opt(e, &PreferenceModel::Premises(d.premises.clone()), &d.phi);
            let shown: Vec<String> = best.iter().map(|v| e.universe().render_valuation(*v)).collect();
            let premises: Vec<String> = d.premises.iter().map(|p| e.render(p)).collect();
            report.record(base(
                "premise-rewrite",
                direct,
                rewrite,
                format!("A = {{{}}}; opt = {{{}}}", premises.join(", "), shown.join("; ")),
            ));
        }

        let by_valuations = obligation_oh(e, d.op, &d.n, &d.relation, &d.phi, &d.psi)?;
        let by_sets = obligation_oh_mcs(e, d.op, &d.n, &d.relation, &d.phi, &d.psi)?;
        report.checked += 1;
        if by_valuations != by_sets {
            report.record(base("two-valued", by_valuations, by_sets, String::new()));
        }
    }
    Ok(report.finish())
}
