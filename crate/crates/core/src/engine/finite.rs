//! Finitely presented logics: a named element set ordered by the
//! reflexive-transitive closure of declared pairs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::engine::{Capabilities, ConsequenceEngine};
use crate::error::{missing, Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteLogicSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
    #[serde(default)]
    pub join: Vec<(String, String, String)>,
    #[serde(default)]
    pub meet: Vec<(String, String, String)>,
}

/// Elements are equivalence classes of declared names, identified by index.
#[derive(Debug, Clone)]
pub struct FiniteLogic {
    class_names: Vec<Vec<String>>,
    by_name: HashMap<String, usize>,
    order: Vec<Vec<bool>>,
    join: Vec<Vec<Option<usize>>>,
    meet: Vec<Vec<Option<usize>>>,
    top: Option<usize>,
    bottom: Option<usize>,
    warnings: Vec<String>,
}

impl FiniteLogic {
    pub fn build(spec: &FiniteLogicSpec) -> Result<Self> {
        let n = spec.elements.len();
        if n == 0 {
            return Err(Error::Invalid("finite logic has no elements".into()));
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, name) in spec.elements.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("element `{name}` declared twice")));
            }
        }
        let lookup = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownElement(name.to_string()))
        };

        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &spec.leq {
            reach[lookup(a)?][lookup(b)?] = true;
        }
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut() {
                if row[k] {
                    for (cell, &through) in row.iter_mut().zip(&via) {
                        *cell |= through;
                    }
                }
            }
        }

        let mut class_of = vec![usize::MAX; n];
        let mut class_names: Vec<Vec<String>> = Vec::new();
        let mut members: Vec<usize> = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = class_names.len();
            let mut names = Vec::new();
            for j in i..n {
                if reach[i][j] && reach[j][i] {
                    class_of[j] = c;
                    names.push(spec.elements[j].clone());
                }
            }
            class_names.push(names);
            members.push(i);
        }
        let mut warnings = Vec::new();
        for names in &class_names {
            if names.len() > 1 {
                warnings.push(format!(
                    "elements {} are equivalent under the declared order; merged",
                    names.join(", ")
                ));
            }
        }

        let k = class_names.len();
        let order: Vec<Vec<bool>> = (0..k)
            .map(|a| (0..k).map(|b| reach[members[a]][members[b]]).collect())
            .collect();

        let mut logic = FiniteLogic {
            by_name: spec
                .elements
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), class_of[i]))
                .collect(),
            class_names,
            join: vec![vec![None; k]; k],
            meet: vec![vec![None; k]; k],
            top: None,
            bottom: None,
            order,
            warnings,
        };

        for a in 0..k {
            for b in 0..k {
                logic.join[a][b] = logic.least_upper_bound(a, b);
                logic.meet[a][b] = logic.greatest_lower_bound(a, b);
            }
        }
        for (entries, is_join) in [(&spec.join, true), (&spec.meet, false)] {
            for (x, y, z) in entries {
                let (x, y, z) = (
                    class_of[lookup(x)?],
                    class_of[lookup(y)?],
                    class_of[lookup(z)?],
                );
                let bound = if is_join {
                    logic.order[x][z] && logic.order[y][z]
                } else {
                    logic.order[z][x] && logic.order[z][y]
                };
                let derived = if is_join {
                    logic.join[x][y]
                } else {
                    logic.meet[x][y]
                };
                let what = if is_join { "join" } else { "meet" };
                if !bound || derived.is_some_and(|d| d != z) {
                    return Err(Error::Invalid(format!(
                        "declared {what} of `{}` and `{}` as `{}` contradicts the order",
                        logic.name(x),
                        logic.name(y),
                        logic.name(z)
                    )));
                }
                let t = if is_join {
                    &mut logic.join
                } else {
                    &mut logic.meet
                };
                t[x][y] = Some(z);
                t[y][x] = Some(z);
            }
        }
        logic.top = (0..k).find(|&t| (0..k).all(|a| logic.order[a][t]));
        logic.bottom = (0..k).find(|&b| (0..k).all(|a| logic.order[b][a]));
        Ok(logic)
    }

    fn least_upper_bound(&self, a: usize, b: usize) -> Option<usize> {
        let k = self.order.len();
        let ubs: Vec<usize> = (0..k)
            .filter(|&z| self.order[a][z] && self.order[b][z])
            .collect();
        ubs.iter()
            .copied()
            .find(|&z| ubs.iter().all(|&w| self.order[z][w]))
    }

    fn greatest_lower_bound(&self, a: usize, b: usize) -> Option<usize> {
        let k = self.order.len();
        let lbs: Vec<usize> = (0..k)
            .filter(|&z| self.order[z][a] && self.order[z][b])
            .collect();
        lbs.iter()
            .copied()
            .find(|&z| lbs.iter().all(|&w| self.order[w][z]))
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.class_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_names.is_empty()
    }

    pub fn name(&self, a: usize) -> &str {
        &self.class_names[a][0]
    }

    pub fn class_members(&self, a: usize) -> &[String] {
        &self.class_names[a]
    }

    pub fn element(&self, name: &str) -> Result<usize> {
        self.by_name
            .get(name.trim())
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.trim().to_string()))
    }

    fn all_defined(table: &[Vec<Option<usize>>]) -> bool {
        table.iter().all(|row| row.iter().all(Option::is_some))
    }
}

impl ConsequenceEngine for FiniteLogic {
    type Elem = usize;

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.order[*a][*b]
    }

    fn equiv(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_join: Self::all_defined(&self.join),
            has_meet: Self::all_defined(&self.meet),
            has_atoms: false,
            has_constants: self.top.is_some() && self.bottom.is_some(),
        }
    }

    fn join(&self, a: &usize, b: &usize) -> Result<usize> {
        self.join[*a][*b].ok_or_else(|| Error::Undefined {
            op: "join",
            left: self.name(*a).to_string(),
            right: self.name(*b).to_string(),
        })
    }

    fn meet(&self, a: &usize, b: &usize) -> Result<usize> {
        self.meet[*a][*b].ok_or_else(|| Error::Undefined {
            op: "meet",
            left: self.name(*a).to_string(),
            right: self.name(*b).to_string(),
        })
    }

    fn top(&self) -> Result<usize> {
        self.top.ok_or_else(|| missing("constants", "top"))
    }

    fn bottom(&self) -> Result<usize> {
        self.bottom.ok_or_else(|| missing("constants", "bottom"))
    }

    fn elements(&self) -> Option<Vec<usize>> {
        Some((0..self.len()).collect())
    }

    fn parse_element(&self, text: &str) -> Result<usize> {
        self.element(text)
    }

    fn render(&self, a: &usize) -> String {
        self.name(*a).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::up_membership;

    fn spec(elements: &[&str], leq: &[(&str, &str)]) -> FiniteLogicSpec {
        FiniteLogicSpec {
            elements: elements.iter().map(|s| s.to_string()).collect(),
            leq: leq
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn kt_fragment() {
        let l = FiniteLogic::build(&spec(&["p", "□q", "q", "r", "s", "t"], &[("□q", "q")])).unwrap();
        let bq = l.element("□q").unwrap();
        let q = l.element("q").unwrap();
        assert!(l.leq(&bq, &q));
        assert!(!l.leq(&q, &bq));
        assert!(up_membership(&l, &[bq], &q));
        assert!(!l.capabilities().has_join);
        assert!(!l.capabilities().has_constants);
    }

    #[test]
    fn discrete_and_chain_orders() {
        let l = FiniteLogic::build(&spec(&["a", "b"], &[])).unwrap();
        assert!(!l.leq(&0, &1) && !l.leq(&1, &0) && l.leq(&0, &0));

        let l = FiniteLogic::build(&spec(&["a", "b", "c"], &[("a", "b"), ("b", "c")])).unwrap();
        let (a, c) = (l.element("a").unwrap(), l.element("c").unwrap());
        assert!(l.leq(&a, &c));
        let caps = l.capabilities();
        assert!(caps.has_join && caps.has_meet && caps.has_constants);
        assert_eq!(l.join(&a, &c).unwrap(), c);
        assert_eq!(l.meet(&a, &c).unwrap(), a);
    }

    #[test]
    fn cycles_merge_with_warning() {
        let l = FiniteLogic::build(&spec(&["a", "b", "c"], &[("a", "b"), ("b", "a")])).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.element("a").unwrap(), l.element("b").unwrap());
        assert_eq!(l.warnings().len(), 1);
    }

    #[test]
    fn declared_tables_are_checked() {
        let mut s = spec(&["a", "b", "c"], &[("a", "c"), ("b", "c")]);
        s.join = vec![("a".into(), "b".into(), "c".into())];
        let l = FiniteLogic::build(&s).unwrap();
        assert_eq!(l.join(&0, &1).unwrap(), 2);

        s.join = vec![("a".into(), "b".into(), "a".into())];
        assert!(FiniteLogic::build(&s).is_err());
    }

    #[test]
    fn unknown_names_are_errors() {
        assert!(matches!(
            FiniteLogic::build(&spec(&["a"], &[("a", "z")])),
            Err(Error::UnknownElement(_))
        ));
        let l = FiniteLogic::build(&spec(&["a"], &[])).unwrap();
        assert!(l.element("z").is_err());
    }

    #[test]
    fn order_laws_hold_exhaustively() {
        let l = FiniteLogic::build(&spec(
            &["a", "b", "c", "d", "e"],
            &[("a", "b"), ("b", "c"), ("d", "c"), ("e", "a"), ("c", "b")],
        ))
        .unwrap();
        let k = l.len();
        for x in 0..k {
            assert!(l.leq(&x, &x));
            for y in 0..k {
                assert_eq!(l.equiv(&x, &y), l.leq(&x, &y) && l.leq(&y, &x));
                for z in 0..k {
                    if l.leq(&x, &y) && l.leq(&y, &z) {
                        assert!(l.leq(&x, &z));
                    }
                }
                if let Ok(j) = l.join(&x, &y) {
                    assert!(l.leq(&x, &j) && l.leq(&y, &j));
                    for z in 0..k {
                        if l.leq(&x, &z) && l.leq(&y, &z) {
                            assert!(l.leq(&j, &z));
                        }
                    }
                }
            }
        }
    }
}
