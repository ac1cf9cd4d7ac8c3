//! The free Boolean algebra over a declared universe, backed by semantic forms.

use std::sync::OnceLock;

use crate::engine::{Capabilities, ConsequenceEngine};
use crate::error::Result;
use crate::term::{Formula, SemanticForm, Term, Valuation, VariableUniverse};

/// Above this size `elements()` declines to list the domain.
const MAX_LISTED_VARIABLES: usize = 3;

/// Above this many valuations atoms are built on demand instead of cached.
const MAX_CACHED_ATOMS: usize = 1 << 10;

#[derive(Debug, Clone)]
pub struct ClassicalEngine {
    universe: VariableUniverse,
    atoms: OnceLock<Vec<Formula>>,
}

impl ClassicalEngine {
    pub fn new(universe: VariableUniverse) -> Self {
        ClassicalEngine {
            universe,
            atoms: OnceLock::new(),
        }
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Ok(Self::new(VariableUniverse::new(names)?))
    }

    pub fn universe(&self) -> &VariableUniverse {
        &self.universe
    }

    pub fn formula(&self, term: Term) -> Formula {
        Formula::new(term, &self.universe)
    }

    /// Parses a formula; panics on bad input. Meant for tests and fixtures.
    pub fn f(&self, text: &str) -> Formula {
        match self.parse_element(text) {
            Ok(f) => f,
            Err(e) => panic!("bad formula `{text}`: {e}"),
        }
    }

    /// The atom true exactly at `v`, written as a conjunction of literals.
    pub fn atom(&self, v: Valuation) -> Formula {
        if self.universe.valuation_count() <= MAX_CACHED_ATOMS {
            let all = self.atoms.get_or_init(|| {
                self.universe.valuations().map(|v| self.build_atom(v)).collect()
            });
            return all[v.0 as usize].clone();
        }
        self.build_atom(v)
    }

    fn build_atom(&self, v: Valuation) -> Formula {
        let n = self.universe.len();
        let mut term: Option<Term> = None;
        for (i, name) in self.universe.names().iter().enumerate() {
            let lit = if v.value(i) {
                Term::var(name.clone())
            } else {
                Term::not(Term::var(name.clone()))
            };
            term = Some(match term {
                None => lit,
                Some(t) => Term::and(t, lit),
            });
        }
        Formula::from_parts(term.unwrap_or(Term::Top), SemanticForm::singleton(n, v))
    }

    /// A formula denoting `form`, as a disjunction of atoms (or `0`/`1`).
    pub fn from_form(&self, form: &SemanticForm) -> Formula {
        if form.is_bottom() {
            return Formula::from_parts(Term::Bot, form.clone());
        }
        if form.is_top() {
            return Formula::from_parts(Term::Top, form.clone());
        }
        let mut term: Option<Term> = None;
        for v in form.valuations() {
            let atom = self.atom(v).term().clone();
            term = Some(match term {
                None => atom,
                Some(t) => Term::or(t, atom),
            });
        }
        Formula::from_parts(term.unwrap_or(Term::Bot), form.clone())
    }

    pub fn satisfiable(&self, formulas: &[&Formula]) -> bool {
        let n = self.universe.len();
        let mut acc = SemanticForm::top(n);
        for f in formulas {
            acc = acc.meet(f.form());
        }
        !acc.is_bottom()
    }

    /// `premises ⊢ conclusion` in classical propositional logic.
    pub fn entails(&self, premises: &[&Formula], conclusion: &Formula) -> bool {
        let n = self.universe.len();
        let mut acc = SemanticForm::top(n);
        for f in premises {
            acc = acc.meet(f.form());
        }
        acc.is_subset(conclusion.form())
    }
}

impl ConsequenceEngine for ClassicalEngine {
    type Elem = Formula;

    fn leq(&self, a: &Formula, b: &Formula) -> bool {
        a.form().is_subset(b.form())
    }

    fn equiv(&self, a: &Formula, b: &Formula) -> bool {
        a.form() == b.form()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_join: true,
            has_meet: true,
            has_atoms: true,
            has_constants: true,
        }
    }

    fn join(&self, a: &Formula, b: &Formula) -> Result<Formula> {
        // Keep terms short when one side already absorbs the other.
        if self.leq(a, b) {
            return Ok(b.clone());
        }
        if self.leq(b, a) {
            return Ok(a.clone());
        }
        Ok(Formula::from_parts(
            Term::or(a.term().clone(), b.term().clone()),
            a.form().join(b.form()),
        ))
    }

    fn meet(&self, a: &Formula, b: &Formula) -> Result<Formula> {
        if self.leq(a, b) {
            return Ok(a.clone());
        }
        if self.leq(b, a) {
            return Ok(b.clone());
        }
        Ok(Formula::from_parts(
            Term::and(a.term().clone(), b.term().clone()),
            a.form().meet(b.form()),
        ))
    }

    fn top(&self) -> Result<Formula> {
        Ok(self.formula(Term::Top))
    }

    fn bottom(&self) -> Result<Formula> {
        Ok(self.formula(Term::Bot))
    }

    fn atoms_below(&self, a: &Formula) -> Result<Vec<Formula>> {
        Ok(a.form().valuations().map(|v| self.atom(v)).collect())
    }

    fn elements(&self) -> Option<Vec<Formula>> {
        let n = self.universe.len();
        if n > MAX_LISTED_VARIABLES {
            return None;
        }
        let size = 1usize << n;
        let mut out = Vec::with_capacity(1 << size);
        for mask in 0u64..(1u64 << size) {
            let mut form = SemanticForm::bottom(n);
            for v in 0..size {
                if (mask >> v) & 1 == 1 {
                    form = form.join(&SemanticForm::singleton(n, Valuation(v as u32)));
                }
            }
            out.push(self.from_form(&form));
        }
        Some(out)
    }

    fn parse_element(&self, text: &str) -> Result<Formula> {
        Ok(self.formula(self.universe.parse(text)?))
    }

    fn render(&self, a: &Formula) -> String {
        a.term().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::up_membership;

    fn engine() -> ClassicalEngine {
        ClassicalEngine::from_names(&["g", "t"]).unwrap()
    }

    #[test]
    fn up_membership_examples() {
        let e = engine();
        let gens = [e.f("g"), e.f("t"), e.f("~t")];
        assert!(up_membership(&e, &gens, &e.f("t")));
        assert!(up_membership(&e, &gens, &e.f("g | ~t")));
        assert!(!up_membership(&e, &gens, &e.f("g & t")));
        assert!(!up_membership(&e, &[], &e.f("1")));
    }

    #[test]
    fn join_and_meet_absorb() {
        let e = engine();
        assert_eq!(e.render(&e.join(&e.f("g & t"), &e.f("g")).unwrap()), "g");
        assert_eq!(e.render(&e.meet(&e.f("g & t"), &e.f("g")).unwrap()), "g & t");
        assert_eq!(e.render(&e.join(&e.f("g"), &e.f("t")).unwrap()), "g | t");
    }

    #[test]
    fn atoms_and_elements() {
        let e = engine();
        assert_eq!(e.atoms_below(&e.f("1")).unwrap().len(), 4);
        assert_eq!(e.atoms_below(&e.f("g")).unwrap().len(), 2);
        assert!(e.atoms_below(&e.f("0")).unwrap().is_empty());
        let all = e.elements().unwrap();
        assert_eq!(all.len(), 16);
        let distinct: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 16);
        for f in &all {
            assert_eq!(&e.f(&e.render(f)), f);
        }
    }

    #[test]
    fn entailment() {
        let e = engine();
        assert!(e.entails(&[&e.f("g"), &e.f("g -> t")], &e.f("t")));
        assert!(!e.entails(&[&e.f("g")], &e.f("t")));
        assert!(e.satisfiable(&[&e.f("g"), &e.f("~t")]));
        assert!(!e.satisfiable(&[&e.f("g"), &e.f("~g")]));
    }
}
