//! Norms as the elements of an abstract logic whose consequence operation is a
//! base output operation. Used to evaluate nested output operations.

use std::hash::Hash;

use crate::engine::finite::{FiniteLogic, FiniteLogicSpec};
use crate::engine::{Capabilities, ConsequenceEngine};
use crate::error::{Error, Result};
use crate::ops::{out_membership, NormativeSystem, OutOp};

/// A finite pool of norms ordered by `p ≤ q` iff `q` is derivable from
/// `N ∪ {p}` under the base operation.
#[derive(Debug, Clone)]
pub struct MetaNormLogic<T> {
    logic: FiniteLogic,
    pairs: Vec<(T, T)>,
    names: Vec<String>,
}

impl<T: Clone + Eq + Hash + Ord + std::fmt::Debug> MetaNormLogic<T> {
    pub fn build<E: ConsequenceEngine<Elem = T>>(
        engine: &E,
        op: OutOp,
        n: &NormativeSystem<T>,
        pool: &[(T, T)],
    ) -> Result<Self> {
        let mut pairs: Vec<(T, T)> = Vec::new();
        for p in pool {
            if !pairs.contains(p) {
                pairs.push(p.clone());
            }
        }
        if pairs.is_empty() {
            return Err(Error::Invalid("meta pool is empty".into()));
        }
        let mut names: Vec<String> = Vec::new();
        for (i, (b, h)) in pairs.iter().enumerate() {
            let mut name = format!("({}, {})", engine.render(b), engine.render(h));
            if names.contains(&name) {
                name = format!("{name}#{i}");
            }
            names.push(name);
        }
        let mut leq = Vec::new();
        for (i, p) in pairs.iter().enumerate() {
            let extended = n.with_pair(p.0.clone(), p.1.clone());
            for (j, q) in pairs.iter().enumerate() {
                if i != j && out_membership(engine, op, &extended, std::slice::from_ref(&q.0), &q.1)? {
                    leq.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let logic = FiniteLogic::build(&FiniteLogicSpec {
            elements: names.clone(),
            leq,
            ..Default::default()
        })?;
        Ok(MetaNormLogic {
            logic,
            pairs,
            names,
        })
    }

    pub fn element(&self, pair: &(T, T)) -> Option<usize> {
        let i = self.pairs.iter().position(|p| p == pair)?;
        self.logic.element(&self.names[i]).ok()
    }

    pub fn logic(&self) -> &FiniteLogic {
        &self.logic
    }

    pub fn warnings(&self) -> &[String] {
        self.logic.warnings()
    }
}

impl<T> ConsequenceEngine for MetaNormLogic<T> {
    type Elem = usize;

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.logic.leq(a, b)
    }

    fn equiv(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_atoms: false,
            ..self.logic.capabilities()
        }
    }

    fn join(&self, a: &usize, b: &usize) -> Result<usize> {
        self.logic.join(a, b)
    }

    fn meet(&self, a: &usize, b: &usize) -> Result<usize> {
        self.logic.meet(a, b)
    }

    fn top(&self) -> Result<usize> {
        self.logic.top()
    }

    fn bottom(&self) -> Result<usize> {
        self.logic.bottom()
    }

    fn elements(&self) -> Option<Vec<usize>> {
        self.logic.elements()
    }

    fn parse_element(&self, text: &str) -> Result<usize> {
        self.logic.element(text)
    }

    fn render(&self, a: &usize) -> String {
        self.logic.render(a)
    }
}

/// A norm over norms: `(body, head)` with each side a pair.
pub type MetaNorm<T> = ((T, T), (T, T));

/// `target ∈ out_j(M, A_meta)` where the norms of `M` and `A_meta` are ordered
/// by `out_i` over `N`.
pub fn nested_out<E: ConsequenceEngine>(
    engine: &E,
    j: OutOp,
    m: &[MetaNorm<E::Elem>],
    i: OutOp,
    n: &NormativeSystem<E::Elem>,
    inputs: &[(E::Elem, E::Elem)],
    target: &(E::Elem, E::Elem),
) -> Result<bool> {
    let allowed = [OutOp::Zero, OutOp::I, OutOp::II, OutOp::One, OutOp::Three];
    for op in [i, j] {
        if !allowed.contains(&op) {
            return Err(Error::Unsupported(format!("nested evaluation of {op}")));
        }
    }
    let mut pool: Vec<(E::Elem, E::Elem)> = inputs.to_vec();
    for (p, q) in m {
        pool.push(p.clone());
        pool.push(q.clone());
    }
    pool.push(target.clone());
    let meta = MetaNormLogic::build(engine, i, n, &pool)?;
    let id = |p: &(E::Elem, E::Elem)| meta.element(p).expect("pooled");
    let meta_norms = NormativeSystem::from_pairs(m.iter().map(|(p, q)| (id(p), id(q))));
    let meta_inputs: Vec<usize> = inputs.iter().map(id).collect();
    out_membership(&meta, j, &meta_norms, &meta_inputs, &id(target))
}
