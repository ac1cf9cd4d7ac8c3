//! The consequence-engine contract: an ordered element domain with optional
//! lattice operations. Output operations and proof search are written against
//! this trait only.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{missing, Result};

pub mod classical;
pub mod finite;
pub mod meta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Capabilities {
    pub has_join: bool,
    pub has_meet: bool,
    pub has_atoms: bool,
    pub has_constants: bool,
}

/// An abstract logic seen through its induced order.
///
/// Contract: `Elem`'s `Eq`/`Hash` must coincide with `equiv`, so elements can
/// key hash maps directly.
pub trait ConsequenceEngine {
    type Elem: Clone + Eq + Hash + Ord + Debug;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn equiv(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    fn capabilities(&self) -> Capabilities;

    fn join(&self, _a: &Self::Elem, _b: &Self::Elem) -> Result<Self::Elem> {
        Err(missing("join", "join"))
    }

    fn meet(&self, _a: &Self::Elem, _b: &Self::Elem) -> Result<Self::Elem> {
        Err(missing("meet", "meet"))
    }

    fn top(&self) -> Result<Self::Elem> {
        Err(missing("constants", "top"))
    }

    fn bottom(&self) -> Result<Self::Elem> {
        Err(missing("constants", "bottom"))
    }

    /// Atoms of the algebra below `a`.
    fn atoms_below(&self, _a: &Self::Elem) -> Result<Vec<Self::Elem>> {
        Err(missing("atoms", "atoms_below"))
    }

    /// The whole domain, when it is finite and small enough to list.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn parse_element(&self, text: &str) -> Result<Self::Elem>;

    fn render(&self, a: &Self::Elem) -> String;
}

/// Membership in `Up(generators)`.
pub fn up_membership<E: ConsequenceEngine>(
    engine: &E,
    generators: &[E::Elem],
    x: &E::Elem,
) -> bool {
    generators.iter().any(|g| engine.leq(g, x))
}

/// Drops generators that are above another one (keeping the first of equals).
pub fn minimal<E: ConsequenceEngine>(engine: &E, items: &[E::Elem]) -> Vec<E::Elem> {
    let mut out: Vec<E::Elem> = Vec::new();
    for x in items {
        if out.iter().any(|y| engine.leq(y, x)) {
            continue;
        }
        out.retain(|y| !engine.leq(x, y));
        out.push(x.clone());
    }
    out
}

/// Meet of a non-empty list.
pub fn meet_all<E: ConsequenceEngine>(engine: &E, items: &[E::Elem]) -> Result<Option<E::Elem>> {
    let mut it = items.iter();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    let mut acc = first.clone();
    for x in it {
        acc = engine.meet(&acc, x)?;
    }
    Ok(Some(acc))
}

/// Join of a non-empty list.
pub fn join_all<E: ConsequenceEngine>(engine: &E, items: &[E::Elem]) -> Result<Option<E::Elem>> {
    let mut it = items.iter();
    let Some(first) = it.next() else {
        return Ok(None);
    };
    let mut acc = first.clone();
    for x in it {
        acc = engine.join(&acc, x)?;
    }
    Ok(Some(acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClosureLaw {
    Inclusion,
    Monotony,
    Idempotence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureViolation<T> {
    pub law: ClosureLaw,
    pub input: BTreeSet<T>,
    /// The larger set for monotony, `C(input)` otherwise.
    pub other: BTreeSet<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport<T> {
    pub checked: usize,
    pub violations: Vec<ClosureViolation<T>>,
}

impl<T> ClosureReport<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks inclusion, monotony and idempotence of `c` on every set of the pool
/// (monotony on every pool pair `A ⊆ B`).
pub fn closure_laws_check<T, F>(c: F, pool: &[BTreeSet<T>]) -> ClosureReport<T>
where
    T: Ord + Clone,
    F: Fn(&BTreeSet<T>) -> BTreeSet<T>,
{
    let images: Vec<BTreeSet<T>> = pool.iter().map(&c).collect();
    let mut violations = Vec::new();
    let mut checked = 0;
    for (a, ca) in pool.iter().zip(&images) {
        checked += 2;
        if !a.is_subset(ca) {
            violations.push(ClosureViolation {
                law: ClosureLaw::Inclusion,
                input: a.clone(),
                other: ca.clone(),
            });
        }
        if c(ca) != *ca {
            violations.push(ClosureViolation {
                law: ClosureLaw::Idempotence,
                input: a.clone(),
                other: ca.clone(),
            });
        }
    }
    for (a, ca) in pool.iter().zip(&images) {
        for (b, cb) in pool.iter().zip(&images) {
            if a.is_subset(b) {
                checked += 1;
                if !ca.is_subset(cb) {
                    violations.push(ClosureViolation {
                        law: ClosureLaw::Monotony,
                        input: a.clone(),
                        other: b.clone(),
                    });
                }
            }
        }
    }
    ClosureReport {
        checked,
        violations,
    }
}
