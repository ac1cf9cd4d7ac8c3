//! Rule-based derivability of pairs: goal-directed search producing
//! derivation trees, an independent tree checker, and a forward layered
//! saturation that computes every derivable pair over a finite candidate pool.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::ConsequenceEngine;
use crate::error::{missing, Error, Result};
use crate::ops::NormativeSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum Rule {
    EQI,
    EQO,
    SI,
    WO,
    OR,
    T,
    AND,
    CT,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::EQI,
        Rule::EQO,
        Rule::SI,
        Rule::WO,
        Rule::OR,
        Rule::T,
        Rule::AND,
        Rule::CT,
    ];

    /// Structural rules first and AND last.
    const SEARCH_ORDER: [Rule; 6] = [Rule::SI, Rule::WO, Rule::OR, Rule::T, Rule::CT, Rule::AND];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::EQI => "EQI",
            Rule::EQO => "EQO",
            Rule::SI => "SI",
            Rule::WO => "WO",
            Rule::OR => "OR",
            Rule::T => "T",
            Rule::AND => "AND",
            Rule::CT => "CT",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Invalid(format!("unknown rule `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleSystem {
    mask: u8,
    name: Option<String>,
}

impl RuleSystem {
    pub fn new(rules: &[Rule]) -> Self {
        RuleSystem {
            mask: rules.iter().fold(0, |m, r| m | r.bit()),
            name: None,
        }
    }

    pub fn named(rules: &[Rule], name: &str) -> Self {
        RuleSystem {
            name: Some(name.to_string()),
            ..Self::new(rules)
        }
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.mask & rule.bit() != 0
    }

    pub fn rules(&self) -> Vec<Rule> {
        Rule::ALL.into_iter().filter(|r| self.contains(*r)).collect()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn without(&self, rule: Rule) -> Self {
        RuleSystem {
            mask: self.mask & !rule.bit(),
            name: None,
        }
    }

    pub fn with(&self, rule: Rule) -> Self {
        RuleSystem {
            mask: self.mask | rule.bit(),
            name: None,
        }
    }

    fn check_capabilities<E: ConsequenceEngine>(&self, engine: &E) -> Result<()> {
        let caps = engine.capabilities();
        if self.contains(Rule::OR) && !caps.has_join {
            return Err(missing("join", "rule OR"));
        }
        for r in [Rule::AND, Rule::CT] {
            if self.contains(r) && !caps.has_meet {
                return Err(missing("meet", format!("rule {r}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for RuleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.rules().iter().map(|r| r.name()).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl FromStr for RuleSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            rules.push(part.parse()?);
        }
        Ok(RuleSystem::new(&rules))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SideCondition<T> {
    Leq(T, T),
    Equiv(T, T),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationTree<T> {
    pub conclusion: (T, T),
    /// `None` marks a leaf, i.e. a norm of the system.
    pub rule: Option<Rule>,
    pub norm_id: Option<String>,
    pub premises: Vec<DerivationTree<T>>,
    pub side: Option<SideCondition<T>>,
}

impl<T> DerivationTree<T> {
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(|p| p.height()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }
}

pub fn default_depth(norms: usize) -> usize {
    2 * norms + 4
}

/// Upper bound on the candidate pool used for side-condition synthesis.
pub const POOL_CAP: usize = 512;

/// The finite set of intermediate elements proof search may introduce: the
/// given seeds and the constants, closed under the engine's meets and joins.
#[derive(Debug, Clone)]
pub struct CandidatePool<T> {
    elems: Vec<T>,
    index: HashMap<T, usize>,
    words: usize,
    up: Vec<u64>,
    meet: Vec<u32>,
    join: Vec<u32>,
    truncated: bool,
}

const NONE: u32 = u32::MAX;

impl<T: Clone + Eq + std::hash::Hash + Ord + fmt::Debug> CandidatePool<T> {
    pub fn closure<E: ConsequenceEngine<Elem = T>>(engine: &E, seeds: &[T], cap: usize) -> Self {
        let mut elems: Vec<T> = Vec::new();
        let mut index: HashMap<T, usize> = HashMap::new();
        let push = |x: T, elems: &mut Vec<T>, index: &mut HashMap<T, usize>| {
            if !index.contains_key(&x) {
                index.insert(x.clone(), elems.len());
                elems.push(x);
            }
        };
        for s in seeds {
            push(s.clone(), &mut elems, &mut index);
        }
        if let Ok(t) = engine.top() {
            push(t, &mut elems, &mut index);
        }
        if let Ok(b) = engine.bottom() {
            push(b, &mut elems, &mut index);
        }
        let mut truncated = false;
        let mut done = 0;
        'grow: while done < elems.len() {
            let i = done;
            done += 1;
            for j in 0..=i {
                for r in [engine.meet(&elems[i], &elems[j]), engine.join(&elems[i], &elems[j])]
                    .into_iter()
                    .flatten()
                {
                    if !index.contains_key(&r) {
                        if elems.len() >= cap {
                            truncated = true;
                            break 'grow;
                        }
                        push(r, &mut elems, &mut index);
                    }
                }
            }
        }
        let k = elems.len();
        let words = k.div_ceil(64).max(1);
        let mut up = vec![0u64; k * words];
        let mut meet = vec![NONE; k * k];
        let mut join = vec![NONE; k * k];
        for a in 0..k {
            for b in 0..k {
                if engine.leq(&elems[a], &elems[b]) {
                    up[a * words + b / 64] |= 1 << (b % 64);
                }
                if let Ok(m) = engine.meet(&elems[a], &elems[b]) {
                    meet[a * k + b] = index.get(&m).map_or(NONE, |&i| i as u32);
                }
                if let Ok(j) = engine.join(&elems[a], &elems[b]) {
                    join[a * k + b] = index.get(&j).map_or(NONE, |&i| i as u32);
                }
            }
        }
        CandidatePool {
            elems,
            index,
            words,
            up,
            meet,
            join,
            truncated,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elems
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// True when the cap stopped the closure early.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        (self.up[a * self.words + b / 64] >> (b % 64)) & 1 == 1
    }

    pub fn meet_idx(&self, a: usize, b: usize) -> Option<usize> {
        let m = self.meet[a * self.len() + b];
        (m != NONE).then_some(m as usize)
    }

    pub fn join_idx(&self, a: usize, b: usize) -> Option<usize> {
        let j = self.join[a * self.len() + b];
        (j != NONE).then_some(j as usize)
    }

    /// All pairs over the pool derivable from `n` by trees of height at most
    /// `depth` (a leaf has height 1). Layer `d` applies one rule, synchronously,
    /// to the pairs of layer `d - 1`.
    pub fn saturate<E: ConsequenceEngine<Elem = T>>(
        &self,
        engine: &E,
        rules: &RuleSystem,
        n: &NormativeSystem<T>,
        depth: usize,
    ) -> Result<Saturation> {
        rules.check_capabilities(engine)?;
        let k = self.len();
        let w = self.words;
        let mut rows = vec![0u64; k * w];
        for norm in n.norms() {
            let (Some(a), Some(x)) = (self.index_of(&norm.body), self.index_of(&norm.head)) else {
                return Err(Error::Invalid(format!(
                    "norm `{}` lies outside the candidate pool",
                    norm.id
                )));
            };
            rows[a * w + x / 64] |= 1 << (x % 64);
        }
        let si = rules.contains(Rule::SI);
        let wo = rules.contains(Rule::WO);
        let t = rules.contains(Rule::T);
        let ct = rules.contains(Rule::CT);
        let and = rules.contains(Rule::AND);
        let or = rules.contains(Rule::OR);
        let mut layers = 1;
        let mut fixpoint = false;
        let mut members: Vec<usize> = Vec::with_capacity(k);
        for _ in 2..=depth {
            let prev = rows.clone();
            for a in 0..k {
                if si {
                    for c in 0..k {
                        if c != a && self.leq(a, c) {
                            for i in 0..w {
                                rows[a * w + i] |= prev[c * w + i];
                            }
                        }
                    }
                }
                if wo || t || ct || and {
                    members.clear();
                    for x in 0..k {
                        if (prev[a * w + x / 64] >> (x % 64)) & 1 == 1 {
                            members.push(x);
                        }
                    }
                    for &x in &members {
                        if wo {
                            for i in 0..w {
                                rows[a * w + i] |= self.up[x * w + i];
                            }
                        }
                        if t {
                            for i in 0..w {
                                rows[a * w + i] |= prev[x * w + i];
                            }
                        }
                        if ct {
                            if let Some(m) = self.meet_idx(a, x) {
                                for i in 0..w {
                                    rows[a * w + i] |= prev[m * w + i];
                                }
                            }
                        }
                    }
                    if and {
                        for (i, &x) in members.iter().enumerate() {
                            for &y in &members[i + 1..] {
                                if let Some(m) = self.meet_idx(x, y) {
                                    rows[a * w + m / 64] |= 1 << (m % 64);
                                }
                            }
                        }
                    }
                }
            }
            if or {
                for a in 0..k {
                    for b in a + 1..k {
                        if let Some(j) = self.join_idx(a, b) {
                            for i in 0..w {
                                rows[j * w + i] |= prev[a * w + i] & prev[b * w + i];
                            }
                        }
                    }
                }
            }
            layers += 1;
            if rows == prev {
                fixpoint = true;
                break;
            }
        }
        Ok(Saturation {
            k,
            words: w,
            rows,
            layers,
            fixpoint,
        })
    }
}

/// The derivable pairs computed by [`CandidatePool::saturate`], indexed by pool
/// position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Saturation {
    k: usize,
    words: usize,
    rows: Vec<u64>,
    layers: usize,
    fixpoint: bool,
}

impl Saturation {
    pub fn contains(&self, a: usize, x: usize) -> bool {
        (self.rows[a * self.words + x / 64] >> (x % 64)) & 1 == 1
    }

    /// Number of layers computed before stopping.
    pub fn layers(&self) -> usize {
        self.layers
    }

    /// True if saturation stopped because a layer added nothing.
    pub fn reached_fixpoint(&self) -> bool {
        self.fixpoint
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.k).flat_map(move |a| (0..self.k).filter(move |&x| self.contains(a, x)).map(move |x| (a, x)))
    }
}

enum Memo<T> {
    Proved(DerivationTree<T>),
    /// No tree of height at most this depth exists.
    Failed(usize),
}

struct Search<'a, E: ConsequenceEngine> {
    rules: &'a RuleSystem,
    n: &'a NormativeSystem<E::Elem>,
    pool: CandidatePool<E::Elem>,
    memo: HashMap<(usize, usize), Memo<E::Elem>>,
}

impl<E: ConsequenceEngine> Search<'_, E> {
    fn tree(&self, a: usize, x: usize, rule: Rule, premises: Vec<DerivationTree<E::Elem>>, side: Option<SideCondition<E::Elem>>) -> DerivationTree<E::Elem> {
        DerivationTree {
            conclusion: (self.pool.elems[a].clone(), self.pool.elems[x].clone()),
            rule: Some(rule),
            norm_id: None,
            premises,
            side,
        }
    }

    fn prove(&mut self, a: usize, x: usize, depth: usize) -> Option<DerivationTree<E::Elem>> {
        match self.memo.get(&(a, x)) {
            Some(Memo::Proved(t)) if t.height() <= depth => return Some(t.clone()),
            Some(Memo::Failed(d)) if *d >= depth => return None,
            _ => {}
        }
        let found = self.search(a, x, depth);
        match &found {
            Some(t) => {
                self.memo.insert((a, x), Memo::Proved(t.clone()));
            }
            None => {
                self.memo.insert((a, x), Memo::Failed(depth));
            }
        }
        found
    }

    fn search(&mut self, a: usize, x: usize, depth: usize) -> Option<DerivationTree<E::Elem>> {
        if depth == 0 {
            return None;
        }
        let (ea, ex) = (self.pool.elems[a].clone(), self.pool.elems[x].clone());
        if let Some(norm) = self.n.find(&ea, &ex) {
            return Some(DerivationTree {
                conclusion: (ea, ex),
                rule: None,
                norm_id: Some(norm.id.clone()),
                premises: Vec::new(),
                side: None,
            });
        }
        if depth == 1 {
            return None;
        }
        let k = self.pool.len();
        let d = depth - 1;
        let el = |i: usize, s: &Self| s.pool.elems[i].clone();
        for rule in Rule::SEARCH_ORDER {
            if !self.rules.contains(rule) {
                continue;
            }
            match rule {
                Rule::SI => {
                    for c in 0..k {
                        if c != a && self.pool.leq(a, c) {
                            if let Some(p) = self.prove(c, x, d) {
                                let side = SideCondition::Leq(el(a, self), el(c, self));
                                return Some(self.tree(a, x, rule, vec![p], Some(side)));
                            }
                        }
                    }
                }
                Rule::WO => {
                    for y in 0..k {
                        if y != x && self.pool.leq(y, x) {
                            if let Some(p) = self.prove(a, y, d) {
                                let side = SideCondition::Leq(el(y, self), el(x, self));
                                return Some(self.tree(a, x, rule, vec![p], Some(side)));
                            }
                        }
                    }
                }
                Rule::OR => {
                    for b in 0..k {
                        for c in b + 1..k {
                            if b == a || c == a || self.pool.join_idx(b, c) != Some(a) {
                                continue;
                            }
                            let Some(p) = self.prove(b, x, d) else { continue };
                            let Some(q) = self.prove(c, x, d) else { continue };
                            return Some(self.tree(a, x, rule, vec![p, q], None));
                        }
                    }
                }
                Rule::T => {
                    for y in 0..k {
                        if y == x || y == a {
                            continue;
                        }
                        let Some(p) = self.prove(a, y, d) else { continue };
                        let Some(q) = self.prove(y, x, d) else { continue };
                        return Some(self.tree(a, x, rule, vec![p, q], None));
                    }
                }
                Rule::CT => {
                    for y in 0..k {
                        let Some(m) = self.pool.meet_idx(a, y) else { continue };
                        if y == x || m == a {
                            continue;
                        }
                        let Some(p) = self.prove(a, y, d) else { continue };
                        let Some(q) = self.prove(m, x, d) else { continue };
                        return Some(self.tree(a, x, rule, vec![p, q], None));
                    }
                }
                Rule::AND => {
                    for y in 0..k {
                        for z in y + 1..k {
                            if y == x || z == x || self.pool.meet_idx(y, z) != Some(x) {
                                continue;
                            }
                            let Some(p) = self.prove(a, y, d) else { continue };
                            let Some(q) = self.prove(a, z, d) else { continue };
                            return Some(self.tree(a, x, rule, vec![p, q], None));
                        }
                    }
                }
                Rule::EQI | Rule::EQO => {}
            }
        }
        None
    }
}

/// Seeds for the candidate pool of a single goal.
fn seeds<T: Clone + Eq + std::hash::Hash + Ord + fmt::Debug>(n: &NormativeSystem<T>, extra: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for m in n.norms() {
        for x in [&m.body, &m.head] {
            if !out.contains(x) {
                out.push(x.clone());
            }
        }
    }
    for x in extra {
        if !out.contains(x) {
            out.push(x.clone());
        }
    }
    out
}

/// Searches for a derivation of `goal` of height at most `max_depth`, by
/// iterative deepening. `None` means "not found within the bound".
pub fn derive<E: ConsequenceEngine>(
    engine: &E,
    rules: &RuleSystem,
    n: &NormativeSystem<E::Elem>,
    goal: (&E::Elem, &E::Elem),
    max_depth: usize,
) -> Result<Option<DerivationTree<E::Elem>>> {
    if max_depth == 0 {
        return Err(Error::Invalid("max depth must be at least 1".into()));
    }
    rules.check_capabilities(engine)?;
    let pool = CandidatePool::closure(engine, &seeds(n, &[goal.0.clone(), goal.1.clone()]), POOL_CAP);
    let a = pool.index_of(goal.0).expect("seeded");
    let x = pool.index_of(goal.1).expect("seeded");
    let mut search: Search<'_, E> = Search {
        rules,
        n,
        pool,
        memo: HashMap::new(),
    };
    for d in 1..=max_depth {
        if let Some(t) = search.prove(a, x, d) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Tries each input in order; returns the first derivation found with the
/// index of the input it uses.
pub fn derive_lifted<E: ConsequenceEngine>(
    engine: &E,
    rules: &RuleSystem,
    n: &NormativeSystem<E::Elem>,
    inputs: &[E::Elem],
    x: &E::Elem,
    max_depth: usize,
) -> Result<Option<(usize, DerivationTree<E::Elem>)>> {
    for (i, a) in inputs.iter().enumerate() {
        if let Some(t) = derive(engine, rules, n, (a, x), max_depth)? {
            return Ok(Some((i, t)));
        }
    }
    Ok(None)
}

/// Checks every node of `tree` against its rule schema and side condition,
/// every leaf against `n`, and every rule against `rules`.
pub fn check_tree<E: ConsequenceEngine>(
    engine: &E,
    tree: &DerivationTree<E::Elem>,
    rules: &RuleSystem,
    n: &NormativeSystem<E::Elem>,
) -> std::result::Result<(), String> {
    let (a, x) = (&tree.conclusion.0, &tree.conclusion.1);
    let show = |t: &E::Elem| engine.render(t);
    let bad = |what: &str| {
        Err(format!(
            "({}, {}): {what}",
            show(a),
            show(x)
        ))
    };
    let Some(rule) = tree.rule else {
        if !tree.premises.is_empty() {
            return bad("leaf with premises");
        }
        return match n.find(a, x) {
            None => bad("leaf is not a norm"),
            Some(norm) => match &tree.norm_id {
                Some(id) if *id != norm.id => bad("leaf cites the wrong norm id"),
                _ => Ok(()),
            },
        };
    };
    if !rules.contains(rule) {
        return bad(&format!("rule {rule} is not in {rules}"));
    }
    for p in &tree.premises {
        check_tree(engine, p, rules, n)?;
    }
    let arity = match rule {
        Rule::EQI | Rule::EQO | Rule::SI | Rule::WO => 1,
        _ => 2,
    };
    if tree.premises.len() != arity {
        return bad(&format!("{rule} needs {arity} premises"));
    }
    let p0 = &tree.premises[0].conclusion;
    let p1 = tree.premises.get(1).map(|p| &p.conclusion);
    let side_leq = |lo: &E::Elem, hi: &E::Elem| -> bool {
        matches!(&tree.side, Some(SideCondition::Leq(l, h)) if engine.equiv(l, lo) && engine.equiv(h, hi))
            && engine.leq(lo, hi)
    };
    let side_equiv = |l0: &E::Elem, r0: &E::Elem| -> bool {
        matches!(&tree.side, Some(SideCondition::Equiv(l, r)) if engine.equiv(l, l0) && engine.equiv(r, r0))
            && engine.equiv(l0, r0)
    };
    let ok = match rule {
        Rule::SI => engine.equiv(&p0.1, x) && side_leq(a, &p0.0),
        Rule::WO => engine.equiv(&p0.0, a) && side_leq(&p0.1, x),
        Rule::EQI => engine.equiv(&p0.1, x) && side_equiv(&p0.0, a),
        Rule::EQO => engine.equiv(&p0.0, a) && side_equiv(&p0.1, x),
        Rule::OR => {
            let p1 = p1.expect("arity");
            engine.equiv(&p0.1, x)
                && engine.equiv(&p1.1, x)
                && engine.join(&p0.0, &p1.0).is_ok_and(|j| engine.equiv(&j, a))
        }
        Rule::T => {
            let p1 = p1.expect("arity");
            engine.equiv(&p0.0, a) && engine.equiv(&p0.1, &p1.0) && engine.equiv(&p1.1, x)
        }
        Rule::AND => {
            let p1 = p1.expect("arity");
            engine.equiv(&p0.0, a)
                && engine.equiv(&p1.0, a)
                && engine.meet(&p0.1, &p1.1).is_ok_and(|m| engine.equiv(&m, x))
        }
        Rule::CT => {
            let p1 = p1.expect("arity");
            engine.equiv(&p0.0, a)
                && engine.meet(a, &p0.1).is_ok_and(|m| engine.equiv(&m, &p1.0))
                && engine.equiv(&p1.1, x)
        }
    };
    if ok {
        Ok(())
    } else {
        bad(&format!("{rule} schema or side condition violated"))
    }
}

pub fn verify_tree<E: ConsequenceEngine>(
    engine: &E,
    tree: &DerivationTree<E::Elem>,
    rules: &RuleSystem,
    n: &NormativeSystem<E::Elem>,
) -> bool {
    check_tree(engine, tree, rules, n).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeJson {
    pub conclusion: [String; 2],
    pub rule: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    pub children: Vec<TreeJson>,
}

pub fn tree_json<E: ConsequenceEngine>(engine: &E, tree: &DerivationTree<E::Elem>) -> TreeJson {
    TreeJson {
        conclusion: [engine.render(&tree.conclusion.0), engine.render(&tree.conclusion.1)],
        rule: tree.rule.map_or("LEAF".to_string(), |r| r.name().to_string()),
        norm: tree.norm_id.clone(),
        side: tree.side.as_ref().map(|s| match s {
            SideCondition::Leq(a, b) => format!("{} <= {}", engine.render(a), engine.render(b)),
            SideCondition::Equiv(a, b) => format!("{} = {}", engine.render(a), engine.render(b)),
        }),
        children: tree.premises.iter().map(|p| tree_json(engine, p)).collect(),
    }
}

/// Indented text rendering, conclusion first, premises below.
pub fn render_tree<E: ConsequenceEngine>(engine: &E, tree: &DerivationTree<E::Elem>) -> String {
    fn go<E: ConsequenceEngine>(engine: &E, t: &DerivationTree<E::Elem>, indent: usize, out: &mut String) {
        let j = tree_json(engine, t);
        out.push_str(&"  ".repeat(indent));
        out.push_str(&format!("({}, {})  [{}", j.conclusion[0], j.conclusion[1], j.rule));
        if let Some(n) = &j.norm {
            out.push_str(&format!(" {n}"));
        }
        if let Some(s) = &j.side {
            out.push_str(&format!("; {s}"));
        }
        out.push_str("]\n");
        for p in &t.premises {
            go(engine, p, indent + 1, out);
        }
    }
    let mut out = String::new();
    go(engine, tree, 0, &mut out);
    out
}
