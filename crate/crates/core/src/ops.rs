//! Output operations: membership decisions and finite generator sets for the
//! base operations and their AND/CT/OR iterations.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::classical::ClassicalEngine;
use crate::engine::{join_all, meet_all, minimal, up_membership, ConsequenceEngine};
use crate::error::{missing, Error, Result};
use crate::proof::{Rule, RuleSystem};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Norm<T> {
    pub id: String,
    pub body: T,
    pub head: T,
}

impl<T> Norm<T> {
    pub fn new(id: impl Into<String>, body: T, head: T) -> Self {
        Norm {
            id: id.into(),
            body,
            head,
        }
    }
}

/// A finite set of norms. Pairs are kept once per semantic class; ids stay
/// unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormativeSystem<T> {
    norms: Vec<Norm<T>>,
    warnings: Vec<String>,
}

impl<T: Clone + Eq + Hash + fmt::Debug> NormativeSystem<T> {
    pub fn new(norms: Vec<Norm<T>>) -> Result<Self> {
        let mut ids = HashSet::new();
        let mut seen: HashMap<(T, T), String> = HashMap::new();
        let mut kept = Vec::with_capacity(norms.len());
        let mut warnings = Vec::new();
        for norm in norms {
            if !ids.insert(norm.id.clone()) {
                return Err(Error::DuplicateNormId(norm.id));
            }
            let key = (norm.body.clone(), norm.head.clone());
            if let Some(first) = seen.get(&key) {
                warnings.push(format!(
                    "norm `{}` duplicates `{first}`; dropped",
                    norm.id
                ));
                continue;
            }
            seen.insert(key, norm.id.clone());
            kept.push(norm);
        }
        Ok(NormativeSystem {
            norms: kept,
            warnings,
        })
    }

    /// Builds a system with ids `n1`, `n2`, ... in order.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (T, T)>) -> Self {
        let norms = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (b, h))| Norm::new(format!("n{}", i + 1), b, h))
            .collect();
        Self::new(norms).expect("generated ids are unique")
    }

    pub fn empty() -> Self {
        NormativeSystem {
            norms: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn norms(&self) -> &[Norm<T>] {
        &self.norms
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn contains_pair(&self, body: &T, head: &T) -> bool {
        self.find(body, head).is_some()
    }

    pub fn find(&self, body: &T, head: &T) -> Option<&Norm<T>> {
        self.norms
            .iter()
            .find(|n| &n.body == body && &n.head == head)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&T, &T)> {
        self.norms.iter().map(|n| (&n.body, &n.head))
    }

    pub fn heads(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for n in &self.norms {
            if !out.contains(&n.head) {
                out.push(n.head.clone());
            }
        }
        out
    }

    pub fn bodies(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for n in &self.norms {
            if !out.contains(&n.body) {
                out.push(n.body.clone());
            }
        }
        out
    }

    /// The system extended by one pair (a no-op if the pair is present).
    pub fn with_pair(&self, body: T, head: T) -> Self {
        let mut norms = self.norms.clone();
        let mut k = norms.len() + 1;
        while norms.iter().any(|n| n.id == format!("n{k}")) {
            k += 1;
        }
        norms.push(Norm::new(format!("n{k}"), body, head));
        let mut out = Self::new(norms).expect("fresh id");
        out.warnings.clear();
        out.warnings.extend(self.warnings.iter().cloned());
        out
    }
}

/// Output operations. The first eight are the base operations; the rest
/// iterate AND, CT or OR on top of a base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutOp {
    R,
    L,
    Zero,
    I,
    II,
    One,
    Two,
    Three,
    AndII,
    And1,
    And2,
    CtI,
    CtII,
    Ct1,
    CtAnd1,
    OrI,
}

impl OutOp {
    pub const BASE: [OutOp; 8] = [
        OutOp::R,
        OutOp::L,
        OutOp::Zero,
        OutOp::I,
        OutOp::II,
        OutOp::One,
        OutOp::Two,
        OutOp::Three,
    ];

    pub const ITERATED: [OutOp; 7] = [
        OutOp::AndII,
        OutOp::And1,
        OutOp::And2,
        OutOp::CtI,
        OutOp::CtII,
        OutOp::Ct1,
        OutOp::CtAnd1,
    ];

    pub const ALL: [OutOp; 16] = [
        OutOp::R,
        OutOp::L,
        OutOp::Zero,
        OutOp::I,
        OutOp::II,
        OutOp::One,
        OutOp::Two,
        OutOp::Three,
        OutOp::AndII,
        OutOp::And1,
        OutOp::And2,
        OutOp::CtI,
        OutOp::CtII,
        OutOp::Ct1,
        OutOp::CtAnd1,
        OutOp::OrI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OutOp::R => "outR",
            OutOp::L => "outL",
            OutOp::Zero => "out0",
            OutOp::I => "outI",
            OutOp::II => "outII",
            OutOp::One => "out1",
            OutOp::Two => "out2",
            OutOp::Three => "out3",
            OutOp::AndII => "andII",
            OutOp::And1 => "and1",
            OutOp::And2 => "and2",
            OutOp::CtI => "ctI",
            OutOp::CtII => "ctII",
            OutOp::Ct1 => "ct1",
            OutOp::CtAnd1 => "ctand1",
            OutOp::OrI => "orI",
        }
    }

    /// The rule system this operation is paired with.
    pub fn rule_system(self) -> RuleSystem {
        use Rule::*;
        let (rules, name): (&[Rule], &str) = match self {
            OutOp::R => (&[EQO], "derive_R"),
            OutOp::L => (&[EQI], "derive_L"),
            OutOp::Zero => (&[EQI, EQO], "derive_0"),
            OutOp::I => (&[SI, EQO], "derive_I"),
            OutOp::II => (&[WO, EQI], "derive_II"),
            OutOp::One => (&[SI, WO], "derive_1"),
            OutOp::Two => (&[SI, WO, OR], "derive_2"),
            OutOp::Three => (&[SI, WO, T], "derive_3"),
            OutOp::AndII => (&[WO, EQI, AND], "derive_AND_II"),
            OutOp::And1 => (&[SI, WO, AND], "derive_AND_1"),
            OutOp::And2 => (&[SI, WO, OR, AND], "derive_AND_2"),
            OutOp::CtI => (&[SI, EQO, CT], "derive_CT_I"),
            OutOp::CtII => (&[WO, EQI, CT], "derive_CT_II"),
            OutOp::Ct1 => (&[SI, WO, CT], "derive_CT_1"),
            OutOp::CtAnd1 => (&[SI, WO, CT, AND], "derive_CT_AND_1"),
            OutOp::OrI => (&[SI, EQO, OR], "derive_OR_I"),
        };
        RuleSystem::named(rules, name)
    }

    fn check_capabilities<E: ConsequenceEngine>(self, engine: &E) -> Result<()> {
        let caps = engine.capabilities();
        let needs_join = matches!(self, OutOp::Two | OutOp::And2 | OutOp::OrI);
        let needs_meet = matches!(
            self,
            OutOp::AndII
                | OutOp::And1
                | OutOp::And2
                | OutOp::CtI
                | OutOp::CtII
                | OutOp::Ct1
                | OutOp::CtAnd1
        );
        if needs_join && !caps.has_join {
            return Err(missing("join", self.name()));
        }
        if needs_meet && !caps.has_meet {
            return Err(missing("meet", self.name()));
        }
        Ok(())
    }
}

impl fmt::Display for OutOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OutOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OutOp::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown operation `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    /// The output is exactly the listed elements (up to equivalence).
    Exact,
    /// The output is everything above some listed element.
    Upward,
}

/// A finite presentation of a single-input output set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet<T> {
    pub elements: Vec<T>,
    pub closure: Closure,
}

impl<T: Clone + Eq + Ord> GeneratorSet<T> {
    pub fn contains<E: ConsequenceEngine<Elem = T>>(&self, engine: &E, x: &T) -> bool {
        match self.closure {
            Closure::Exact => self.elements.contains(x),
            Closure::Upward => up_membership(engine, &self.elements, x),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn exact(mut elements: Vec<T>) -> Self {
        elements.sort();
        elements.dedup();
        GeneratorSet {
            elements,
            closure: Closure::Exact,
        }
    }

    fn upward<E: ConsequenceEngine<Elem = T>>(engine: &E, elements: Vec<T>) -> Self {
        let mut elements = minimal(engine, &elements);
        elements.sort();
        GeneratorSet {
            elements,
            closure: Closure::Upward,
        }
    }
}

/// `x ∈ out_op(N, A)`, lifting single inputs existentially over `A`.
pub fn out_membership<E: ConsequenceEngine>(
    engine: &E,
    op: OutOp,
    n: &NormativeSystem<E::Elem>,
    inputs: &[E::Elem],
    x: &E::Elem,
) -> Result<bool> {
    op.check_capabilities(engine)?;
    if op == OutOp::Two && inputs.len() > 1 && !engine.capabilities().has_atoms {
        return Err(missing("atoms", "out2 over an input set"));
    }
    for a in inputs {
        if single_membership(engine, op, n, a, x)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn single_membership<E: ConsequenceEngine>(
    engine: &E,
    op: OutOp,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    let norms = n.norms();
    Ok(match op {
        OutOp::R | OutOp::L | OutOp::Zero => norms
            .iter()
            .any(|m| engine.equiv(a, &m.body) && engine.equiv(&m.head, x)),
        OutOp::I => norms
            .iter()
            .any(|m| engine.leq(a, &m.body) && engine.equiv(&m.head, x)),
        OutOp::II => norms
            .iter()
            .any(|m| engine.equiv(a, &m.body) && engine.leq(&m.head, x)),
        OutOp::One => norms
            .iter()
            .any(|m| engine.leq(a, &m.body) && engine.leq(&m.head, x)),
        OutOp::Two => {
            if engine.capabilities().has_atoms {
                out2_by_atoms(engine, n, a, x)?
            } else {
                out2_by_cover(engine, n, a, x)?
            }
        }
        OutOp::Three => {
            let fired = out3_fired(engine, n, std::slice::from_ref(a));
            fired.iter().any(|y| engine.leq(y, x))
        }
        OutOp::AndII | OutOp::And1 | OutOp::And2 => {
            and_membership(engine, and_base(op), n, a, x)?
        }
        OutOp::CtI | OutOp::CtII | OutOp::Ct1 => ct_membership(engine, ct_base(op), n, a, x)?,
        OutOp::CtAnd1 => ct_and_membership(engine, n, a, x)?,
        OutOp::OrI => or_membership(engine, OutOp::I, n, a, x)?,
    })
}

fn and_base(op: OutOp) -> OutOp {
    match op {
        OutOp::AndII => OutOp::II,
        OutOp::And1 => OutOp::One,
        _ => OutOp::Two,
    }
}

fn ct_base(op: OutOp) -> OutOp {
    match op {
        OutOp::CtI => OutOp::I,
        OutOp::CtII => OutOp::II,
        _ => OutOp::One,
    }
}

/// Every atom below `a` triggers some norm whose head is below `x`; with no
/// atoms (a = 0) any norm with a head below `x` will do.
fn out2_by_atoms<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    let atoms = engine.atoms_below(a)?;
    let useful: Vec<&Norm<E::Elem>> = n
        .norms()
        .iter()
        .filter(|m| engine.leq(&m.head, x))
        .collect();
    if useful.is_empty() {
        return Ok(false);
    }
    Ok(atoms
        .iter()
        .all(|p| useful.iter().any(|m| engine.leq(p, &m.body))))
}

/// `a` lies below the join of the bodies of all norms whose head is below `x`.
fn out2_by_cover<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    let bodies: Vec<E::Elem> = n
        .norms()
        .iter()
        .filter(|m| engine.leq(&m.head, x))
        .map(|m| m.body.clone())
        .collect();
    Ok(match join_all(engine, &bodies)? {
        Some(j) => engine.leq(a, &j),
        None => false,
    })
}

/// Public form of the join-cover criterion, usable on any engine with joins.
pub fn out2_cover_membership<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    OutOp::Two.check_capabilities(engine)?;
    out2_by_cover(engine, n, a, x)
}

/// Heads of the norms fired in the least `V = Up(A ∪ T)` closed under `N`.
fn out3_fired<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    inputs: &[E::Elem],
) -> Vec<E::Elem> {
    let mut base: Vec<E::Elem> = inputs.to_vec();
    let mut fired = vec![false; n.len()];
    let mut heads = Vec::new();
    loop {
        let mut changed = false;
        for (i, m) in n.norms().iter().enumerate() {
            if !fired[i] && up_membership(engine, &base, &m.body) {
                fired[i] = true;
                base.push(m.head.clone());
                heads.push(m.head.clone());
                changed = true;
            }
        }
        if !changed {
            return heads;
        }
    }
}

/// Generators of `out_op(N, {a})`.
pub fn out_generators<E: ConsequenceEngine>(
    engine: &E,
    op: OutOp,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
) -> Result<GeneratorSet<E::Elem>> {
    op.check_capabilities(engine)?;
    let norms = n.norms();
    let heads_where = |pred: &dyn Fn(&Norm<E::Elem>) -> bool| -> Vec<E::Elem> {
        norms
            .iter()
            .filter(|m| pred(m))
            .map(|m| m.head.clone())
            .collect()
    };
    Ok(match op {
        OutOp::R | OutOp::L | OutOp::Zero => {
            GeneratorSet::exact(heads_where(&|m| engine.equiv(a, &m.body)))
        }
        OutOp::I => GeneratorSet::exact(heads_where(&|m| engine.leq(a, &m.body))),
        OutOp::II => GeneratorSet::upward(engine, heads_where(&|m| engine.equiv(a, &m.body))),
        OutOp::One => GeneratorSet::upward(engine, heads_where(&|m| engine.leq(a, &m.body))),
        OutOp::Two => {
            let gens = if engine.capabilities().has_atoms {
                out2_generators_by_atoms(engine, n, a)?
            } else {
                out2_generators_by_joins(engine, n, a)?
            };
            GeneratorSet::upward(engine, gens)
        }
        OutOp::Three => GeneratorSet::upward(engine, out3_fired(engine, n, std::slice::from_ref(a))),
        OutOp::AndII | OutOp::And1 | OutOp::And2 => {
            let base = out_generators(engine, and_base(op), n, a)?;
            GeneratorSet::upward(engine, meet_all(engine, &base.elements)?.into_iter().collect())
        }
        OutOp::CtI => GeneratorSet::exact(ct_generators(engine, OutOp::I, n, a)?),
        OutOp::CtII => GeneratorSet::upward(engine, ct_generators(engine, OutOp::II, n, a)?),
        OutOp::Ct1 => GeneratorSet::upward(engine, ct_generators(engine, OutOp::One, n, a)?),
        OutOp::CtAnd1 => {
            let base = ct_generators(engine, OutOp::One, n, a)?;
            GeneratorSet::upward(engine, meet_all(engine, &base)?.into_iter().collect())
        }
        OutOp::OrI => {
            let mut out = Vec::new();
            for y in n.heads() {
                if or_i_holds(engine, n, a, &y)? {
                    out.push(y);
                }
            }
            GeneratorSet::exact(out)
        }
    })
}

/// Minimal joins over choice functions picking, for every atom below `a`, the
/// head of a norm that atom triggers.
fn out2_generators_by_atoms<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
) -> Result<Vec<E::Elem>> {
    let atoms = engine.atoms_below(a)?;
    if atoms.is_empty() {
        return Ok(minimal(engine, &n.heads()));
    }
    let mut choices: Vec<Vec<E::Elem>> = Vec::new();
    for p in &atoms {
        let mut hs: Vec<E::Elem> = n
            .norms()
            .iter()
            .filter(|m| engine.leq(p, &m.body))
            .map(|m| m.head.clone())
            .collect();
        if hs.is_empty() {
            return Ok(Vec::new());
        }
        hs.sort();
        hs.dedup();
        if !choices.contains(&hs) {
            choices.push(hs);
        }
    }
    let mut partial: Vec<E::Elem> = minimal(engine, &choices[0]);
    for hs in &choices[1..] {
        let mut next = Vec::with_capacity(partial.len() * hs.len());
        for j in &partial {
            for h in hs {
                next.push(engine.join(j, h)?);
            }
        }
        partial = minimal(engine, &next);
    }
    Ok(partial)
}

/// Above this many norms the subset enumeration is refused.
const MAX_COVER_NORMS: usize = 20;

/// Minimal `∨heads(T)` over non-empty `T ⊆ N` whose bodies' join covers `a`.
pub fn out2_generators_by_joins<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
) -> Result<Vec<E::Elem>> {
    OutOp::Two.check_capabilities(engine)?;
    let norms = n.norms();
    if norms.len() > MAX_COVER_NORMS {
        return Err(Error::Unsupported(format!(
            "join-cover generators limited to {MAX_COVER_NORMS} norms"
        )));
    }
    let mut found = Vec::new();
    for mask in 1u32..(1u32 << norms.len()) {
        let chosen: Vec<&Norm<E::Elem>> = norms
            .iter()
            .enumerate()
            .filter(|(i, _)| (mask >> i) & 1 == 1)
            .map(|(_, m)| m)
            .collect();
        let bodies: Vec<E::Elem> = chosen.iter().map(|m| m.body.clone()).collect();
        let cover = join_all(engine, &bodies)?.expect("non-empty");
        if engine.leq(a, &cover) {
            let heads: Vec<E::Elem> = chosen.iter().map(|m| m.head.clone()).collect();
            found.push(join_all(engine, &heads)?.expect("non-empty"));
        }
    }
    Ok(minimal(engine, &found))
}

/// `x` in the AND-iteration of `out_base(N, {a})`: the meet of all generators
/// lies below `x`.
pub fn and_membership<E: ConsequenceEngine>(
    engine: &E,
    base: OutOp,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    if !matches!(base, OutOp::II | OutOp::One | OutOp::Two) {
        return Err(Error::Unsupported(format!("AND iteration over {base}")));
    }
    if !engine.capabilities().has_meet {
        return Err(missing("meet", "AND iteration"));
    }
    let gens = out_generators(engine, base, n, a)?;
    Ok(match meet_all(engine, &gens.elements)? {
        Some(m) => engine.leq(&m, x),
        None => false,
    })
}

pub fn ct_membership<E: ConsequenceEngine>(
    engine: &E,
    base: OutOp,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    let gens = ct_generators(engine, base, n, a)?;
    Ok(match base {
        OutOp::I => gens.contains(x),
        _ => up_membership(engine, &gens, x),
    })
}

pub fn ct_and_membership<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    let gens = ct_generators(engine, OutOp::One, n, a)?;
    Ok(match meet_all(engine, &gens)? {
        Some(m) => engine.leq(&m, x),
        None => false,
    })
}

/// OR-iteration over `out_I`: `x` is a head, and `a` lies below the join of the
/// bodies of the norms with that head.
pub fn or_membership<E: ConsequenceEngine>(
    engine: &E,
    base: OutOp,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    if base != OutOp::I {
        return Err(Error::Unsupported(format!(
            "OR iteration over {base} has no semantic procedure; use proof search"
        )));
    }
    OutOp::OrI.check_capabilities(engine)?;
    or_i_holds(engine, n, a, x)
}

fn or_i_holds<E: ConsequenceEngine>(
    engine: &E,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
    x: &E::Elem,
) -> Result<bool> {
    let bodies: Vec<E::Elem> = n
        .norms()
        .iter()
        .filter(|m| engine.equiv(&m.head, x))
        .map(|m| m.body.clone())
        .collect();
    Ok(match join_all(engine, &bodies)? {
        Some(j) => engine.leq(a, &j),
        None => false,
    })
}

/// Generators of the CT-iteration of `out_base(N, {a})`. For base I the result
/// is the exact output set; otherwise the output is its upward closure.
pub fn ct_generators<E: ConsequenceEngine>(
    engine: &E,
    base: OutOp,
    n: &NormativeSystem<E::Elem>,
    a: &E::Elem,
) -> Result<Vec<E::Elem>> {
    if !matches!(base, OutOp::I | OutOp::II | OutOp::One) {
        return Err(Error::Unsupported(format!("CT iteration over {base}")));
    }
    if !engine.capabilities().has_meet {
        return Err(missing("meet", "CT iteration"));
    }
    let mut memo = HashMap::new();
    ct_context(engine, base, n, a, &mut memo)
}

// Contexts passed to recursive calls are strictly below `c`, so the recursion
// is well founded on a finite algebra.
fn ct_context<E: ConsequenceEngine>(
    engine: &E,
    base: OutOp,
    n: &NormativeSystem<E::Elem>,
    c: &E::Elem,
    memo: &mut HashMap<E::Elem, Vec<E::Elem>>,
) -> Result<Vec<E::Elem>> {
    if let Some(g) = memo.get(c) {
        return Ok(g.clone());
    }
    let norms = n.norms();
    let mut gens: Vec<E::Elem> = match base {
        OutOp::II => norms
            .iter()
            .filter(|m| engine.equiv(c, &m.body))
            .map(|m| m.head.clone())
            .collect(),
        _ => norms
            .iter()
            .filter(|m| engine.leq(c, &m.body))
            .map(|m| m.head.clone())
            .collect(),
    };
    gens = normalize(engine, base, gens);
    if gens.is_empty() {
        memo.insert(c.clone(), gens.clone());
        return Ok(gens);
    }
    loop {
        let mut next = gens.clone();
        match base {
            OutOp::II => {
                // F(b) is empty unless b is a body; reach b = c ∧ y for some
                // y above a generator g exactly when c ∧ g ≤ b ≤ c.
                for b in n.bodies() {
                    if b == *c || !engine.leq(&b, c) {
                        continue;
                    }
                    let mut reachable = false;
                    for g in &gens {
                        if engine.leq(&engine.meet(c, g)?, &b) {
                            reachable = true;
                            break;
                        }
                    }
                    if reachable {
                        next.extend(ct_context(engine, base, n, &b, memo)?);
                    }
                }
            }
            _ => {
                for y in &gens {
                    let c2 = engine.meet(c, y)?;
                    if c2 == *c {
                        continue;
                    }
                    next.extend(ct_context(engine, base, n, &c2, memo)?);
                }
            }
        }
        let next = normalize(engine, base, next);
        if next == gens {
            break;
        }
        gens = next;
    }
    memo.insert(c.clone(), gens.clone());
    Ok(gens)
}

fn normalize<E: ConsequenceEngine>(engine: &E, base: OutOp, items: Vec<E::Elem>) -> Vec<E::Elem> {
    let mut out = match base {
        OutOp::I => items,
        _ => minimal(engine, &items),
    };
    out.sort();
    out.dedup();
    out
}

/// Above this many variables the saturated-set enumeration is refused.
const MAX_SATURATED_VARIABLES: usize = 4;

/// Set-level evaluation of `out_2` and `out_3` on the classical engine, without
/// lifting over single inputs.
///
/// `out_2`: every saturated set of the free algebra is `Up(S)` for a set `S` of
/// atoms, or the whole algebra; all of them are enumerated. `out_3`: the least
/// `V` with `A ⊆ V = Up(V) ⊇ N(V)` is computed for the whole input set at once.
pub fn out_set_semantic(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<crate::term::Formula>,
    inputs: &[crate::term::Formula],
    x: &crate::term::Formula,
) -> Result<bool> {
    match op {
        OutOp::Three => {
            let fired = out3_fired(engine, n, inputs);
            Ok(fired.iter().any(|y| engine.leq(y, x)))
        }
        OutOp::Two => {
            let vars = engine.universe().len();
            if vars > MAX_SATURATED_VARIABLES {
                return Err(Error::Unsupported(format!(
                    "saturated-set enumeration limited to {MAX_SATURATED_VARIABLES} variables"
                )));
            }
            let atoms = 1usize << vars;
            let mask = |f: &crate::term::Formula| f.form().words()[0];
            let useful: Vec<u64> = n
                .norms()
                .iter()
                .filter(|m| engine.leq(&m.head, x))
                .map(|m| mask(&m.body))
                .collect();
            // The whole algebra is saturated and contains every input.
            if useful.is_empty() {
                return Ok(false);
            }
            let input_masks: Vec<u64> = inputs.iter().map(mask).collect();
            for s in 0u64..(1u64 << atoms) {
                let contains_inputs = input_masks.iter().all(|a| a & s != 0);
                if contains_inputs && !useful.iter().any(|b| b & s != 0) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        other => Err(Error::Unsupported(format!(
            "set-level evaluation is defined for out2 and out3, not {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Formula;

    fn engine(vars: &[&str]) -> ClassicalEngine {
        ClassicalEngine::from_names(vars).unwrap()
    }

    fn system(e: &ClassicalEngine, pairs: &[(&str, &str)]) -> NormativeSystem<Formula> {
        NormativeSystem::from_pairs(pairs.iter().map(|(b, h)| (e.f(b), e.f(h))))
    }

    fn holds(e: &ClassicalEngine, op: OutOp, n: &NormativeSystem<Formula>, a: &[&str], x: &str) -> bool {
        let inputs: Vec<Formula> = a.iter().map(|s| e.f(s)).collect();
        out_membership(e, op, n, &inputs, &e.f(x)).unwrap()
    }

    #[test]
    fn simple_operations_on_small_example() {
        let e = engine(&["g", "t"]);
        let n = system(&e, &[("1", "g"), ("g", "t")]);
        for x in ["g", "t", "1", "0"] {
            assert!(!holds(&e, OutOp::I, &n, &[], x));
        }
        assert!(holds(&e, OutOp::II, &n, &["g"], "t"));
        assert!(holds(&e, OutOp::II, &n, &["g"], "t | g"));
        assert!(!holds(&e, OutOp::II, &n, &["g"], "g"));
        assert!(holds(&e, OutOp::I, &n, &["g"], "g"));
        assert!(!holds(&e, OutOp::I, &n, &["g"], "g | t"));
    }

    #[test]
    fn reusable_output() {
        let e = engine(&["g", "t", "a", "b"]);
        let n = system(&e, &[("1", "g"), ("g", "t"), ("~g", "~t"), ("a", "b")]);
        for x in ["t", "~t", "g"] {
            assert!(holds(&e, OutOp::Three, &n, &["~g"], x));
        }
        assert!(!holds(&e, OutOp::Three, &n, &["~g"], "g & t"));
        assert!(!holds(&e, OutOp::Three, &n, &["~g"], "b"));
        let gens = out_generators(&e, OutOp::Three, &n, &e.f("~g")).unwrap();
        let mut expect = vec![e.f("g"), e.f("t"), e.f("~t")];
        expect.sort();
        assert_eq!(gens.elements, expect);
    }

    #[test]
    fn basic_output_uses_disjunction() {
        let e = engine(&["a", "b", "x"]);
        let n = system(&e, &[("a", "x"), ("b", "x")]);
        assert!(holds(&e, OutOp::Two, &n, &["a | b"], "x"));
        assert!(!holds(&e, OutOp::One, &n, &["a | b"], "x"));
        assert!(out2_cover_membership(&e, &n, &e.f("a | b"), &e.f("x")).unwrap());
        assert!(out_set_semantic(&e, OutOp::Two, &n, &[e.f("a"), e.f("b")], &e.f("x")).unwrap());
        // inconsistent input: only the whole algebra is a saturated superset
        assert!(holds(&e, OutOp::Two, &n, &["a & ~a"], "x"));
        assert!(!holds(&e, OutOp::Two, &n, &["a & ~a"], "a"));
    }

    #[test]
    fn and_iteration() {
        let e = engine(&["a", "x", "y"]);
        let n = system(&e, &[("a", "x"), ("a", "y")]);
        assert!(and_membership(&e, OutOp::One, &n, &e.f("a"), &e.f("x & y")).unwrap());
        assert!(!holds(&e, OutOp::One, &n, &["a"], "x & y"));
        let empty = NormativeSystem::empty();
        for x in ["x", "1", "0"] {
            assert!(!and_membership(&e, OutOp::One, &empty, &e.f("a"), &e.f(x)).unwrap());
        }
    }

    #[test]
    fn ct_iteration() {
        let e = engine(&["a", "x", "y"]);
        let n = system(&e, &[("a", "x"), ("a & x", "y")]);
        assert!(ct_membership(&e, OutOp::One, &n, &e.f("a"), &e.f("y")).unwrap());
        assert!(!holds(&e, OutOp::One, &n, &["a"], "y"));
        assert!(ct_and_membership(&e, &n, &e.f("a"), &e.f("x & y")).unwrap());
        assert!(!ct_membership(&e, OutOp::One, &NormativeSystem::empty(), &e.f("a"), &e.f("y")).unwrap());
        let single = system(&e, &[("a", "x")]);
        assert!(ct_and_membership(&e, &single, &e.f("a"), &e.f("x")).unwrap());
        assert!(!ct_and_membership(&e, &single, &e.f("a"), &e.f("y")).unwrap());
        // CT over the exact base keeps heads exact
        assert!(ct_membership(&e, OutOp::I, &n, &e.f("a"), &e.f("y")).unwrap());
        assert!(!ct_membership(&e, OutOp::I, &n, &e.f("a"), &e.f("y | x")).unwrap());
        // CT over II needs an input equal to a body at every step
        assert!(ct_membership(&e, OutOp::II, &n, &e.f("a"), &e.f("y")).unwrap());
        assert!(!ct_membership(&e, OutOp::II, &n, &e.f("a & y"), &e.f("x")).unwrap());
    }

    #[test]
    fn or_iteration() {
        let e = engine(&["a", "b", "x"]);
        let n = system(&e, &[("a", "x"), ("b", "x")]);
        assert!(or_membership(&e, OutOp::I, &n, &e.f("a | b"), &e.f("x")).unwrap());
        let single = system(&e, &[("a", "x")]);
        assert!(or_membership(&e, OutOp::I, &single, &e.f("a"), &e.f("x")).unwrap());
        assert!(!or_membership(&e, OutOp::I, &single, &e.f("b"), &e.f("x")).unwrap());
        assert!(or_membership(&e, OutOp::One, &single, &e.f("a"), &e.f("x")).is_err());
    }

    #[test]
    fn generator_sets() {
        let e = engine(&["a", "x"]);
        let n = system(&e, &[("a", "x")]);
        let g = out_generators(&e, OutOp::One, &n, &e.f("a")).unwrap();
        assert_eq!(g.elements, vec![e.f("x")]);
        let g = out_generators(&e, OutOp::One, &NormativeSystem::empty(), &e.f("a")).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn out2_generator_routes_agree() {
        let e = engine(&["a", "b", "x"]);
        let n = system(&e, &[("a", "x"), ("b", "x | a"), ("a | b", "b"), ("~a", "a")]);
        for input in ["a", "b", "a | b", "1", "0", "~b", "a & b"] {
            let mut by_atoms = out2_generators_by_atoms(&e, &n, &e.f(input)).unwrap();
            let mut by_joins = out2_generators_by_joins(&e, &n, &e.f(input)).unwrap();
            by_atoms.sort();
            by_joins.sort();
            assert_eq!(by_atoms, by_joins, "input {input}");
        }
    }

    #[test]
    fn duplicate_norms() {
        let e = engine(&["g", "t"]);
        let n = NormativeSystem::new(vec![
            Norm::new("a", e.f("g"), e.f("t")),
            Norm::new("b", e.f("g & g"), e.f("~~t")),
        ])
        .unwrap();
        assert_eq!(n.len(), 1);
        assert_eq!(n.warnings().len(), 1);
        assert!(matches!(
            NormativeSystem::new(vec![
                Norm::new("a", e.f("g"), e.f("t")),
                Norm::new("a", e.f("t"), e.f("t")),
            ]),
            Err(Error::DuplicateNormId(_))
        ));
    }

    #[test]
    fn op_names_round_trip() {
        for op in OutOp::ALL {
            assert_eq!(op.name().parse::<OutOp>().unwrap(), op);
        }
        assert!("out9".parse::<OutOp>().is_err());
    }
}
