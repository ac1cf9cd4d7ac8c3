//! Conditional obligations and permissions over the classical engine:
//! derivability filtered by a constraint set or by a betterness ordering of
//! valuations.
//!
//! Maximal consistent sets of the declared universe are identified with its
//! valuations throughout.

use std::collections::BTreeSet;
use std::fmt;

use crate::engine::classical::ClassicalEngine;
use crate::error::{Error, Result};
use crate::ops::{out_membership, NormativeSystem, OutOp};
use crate::term::{Formula, SemanticForm, Valuation, VariableUniverse};

/// `(φ, ψ)` derivable and `Con ∪ {ψ}` jointly satisfiable.
pub fn derive_con(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    constraints: &[Formula],
    phi: &Formula,
    psi: &Formula,
) -> Result<bool> {
    if !out_membership(engine, op, n, std::slice::from_ref(phi), psi)? {
        return Ok(false);
    }
    let mut all: Vec<&Formula> = constraints.iter().collect();
    all.push(psi);
    Ok(engine.satisfiable(&all))
}

/// An extensional betterness relation: `(v, w)` present means `v ⪰ w`.
/// No properties are imposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Betterness {
    vars: usize,
    pairs: BTreeSet<(u32, u32)>,
}

impl Betterness {
    pub fn from_pairs(universe: &VariableUniverse, pairs: &[(Valuation, Valuation)]) -> Result<Self> {
        let count = universe.valuation_count() as u32;
        let mut set = BTreeSet::new();
        for &(v, w) in pairs {
            if v.0 >= count || w.0 >= count {
                return Err(Error::Invalid(format!(
                    "valuation index {} outside a universe of {count} valuations",
                    v.0.max(w.0)
                )));
            }
            set.insert((v.0, w.0));
        }
        Ok(Betterness {
            vars: universe.len(),
            pairs: set,
        })
    }

    /// Ranked tiers, best first: `v ⪰ w` iff `v`'s tier is no worse than
    /// `w`'s. Valuations listed in no tier are incomparable to everything.
    pub fn from_tiers(universe: &VariableUniverse, tiers: &[Vec<Valuation>]) -> Result<Self> {
        let mut rank: Vec<Option<usize>> = vec![None; universe.valuation_count()];
        for (t, tier) in tiers.iter().enumerate() {
            for v in tier {
                let slot = rank.get_mut(v.0 as usize).ok_or_else(|| {
                    Error::Invalid(format!("valuation index {} outside the universe", v.0))
                })?;
                if slot.is_some() {
                    return Err(Error::Invalid(format!(
                        "valuation `{}` listed in two tiers",
                        universe.render_valuation(*v)
                    )));
                }
                *slot = Some(t);
            }
        }
        let mut pairs = Vec::new();
        for (v, rv) in rank.iter().enumerate() {
            for (w, rw) in rank.iter().enumerate() {
                if let (Some(rv), Some(rw)) = (rv, rw) {
                    if rv <= rw {
                        pairs.push((Valuation(v as u32), Valuation(w as u32)));
                    }
                }
            }
        }
        Self::from_pairs(universe, &pairs)
    }

    pub fn better(&self, v: Valuation, w: Valuation) -> bool {
        self.pairs.contains(&(v.0, w.0))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Valuation, Valuation)> + '_ {
        self.pairs.iter().map(|&(v, w)| (Valuation(v), Valuation(w)))
    }

    /// The valuations `v` is at least as good as, as a form.
    fn dominated_by(&self, v: Valuation) -> SemanticForm {
        let mut out = SemanticForm::bottom(self.vars);
        for &(a, b) in self.pairs.range((v.0, 0)..=(v.0, u32::MAX)) {
            debug_assert_eq!(a, v.0);
            out = out.join(&SemanticForm::singleton(self.vars, Valuation(b)));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub enum PreferenceModel {
    Explicit(Betterness),
    /// `v ⪰ w` iff every premise true at `w` is true at `v`.
    Premises(Vec<Formula>),
}

impl PreferenceModel {
    pub fn better(&self, v: Valuation, w: Valuation) -> bool {
        match self {
            PreferenceModel::Explicit(rel) => rel.better(v, w),
            PreferenceModel::Premises(a) => a
                .iter()
                .all(|p| !p.form().contains(w) || p.form().contains(v)),
        }
    }
}

/// Models of `φ` that are at least as good as every model of `φ`.
pub fn opt(engine: &ClassicalEngine, pref: &PreferenceModel, phi: &Formula) -> Vec<Valuation> {
    let models: Vec<Valuation> = engine
        .universe()
        .valuations()
        .filter(|v| phi.form().contains(*v))
        .collect();
    models
        .iter()
        .copied()
        .filter(|&v| models.iter().all(|&w| pref.better(v, w)))
        .collect()
}

fn conditional(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    pref: &PreferenceModel,
    phi: &Formula,
    psi: &Formula,
    universal: bool,
) -> Result<bool> {
    if !out_membership(engine, op, n, std::slice::from_ref(phi), psi)? {
        return Ok(false);
    }
    let best = opt(engine, pref, phi);
    Ok(if universal {
        best.iter().all(|v| psi.form().contains(*v))
    } else {
        best.iter().any(|v| psi.form().contains(*v))
    })
}

/// `φ > ○ψ` under an explicit betterness relation.
pub fn obligation_oh(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    rel: &Betterness,
    phi: &Formula,
    psi: &Formula,
) -> Result<bool> {
    conditional(engine, op, n, &PreferenceModel::Explicit(rel.clone()), phi, psi, true)
}

/// The same condition read over maximal consistent sets as a set computation:
/// `opt(φ) = {M ∈ ‖φ‖ : ‖φ‖ ⊆ f(M)}` and `opt(φ) ⊆ ‖ψ‖`.
pub fn obligation_oh_mcs(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    rel: &Betterness,
    phi: &Formula,
    psi: &Formula,
) -> Result<bool> {
    if !out_membership(engine, op, n, std::slice::from_ref(phi), psi)? {
        return Ok(false);
    }
    let mut best = SemanticForm::bottom(engine.universe().len());
    for m in phi.form().valuations() {
        if phi.form().is_subset(&rel.dominated_by(m)) {
            best = best.join(&SemanticForm::singleton(engine.universe().len(), m));
        }
    }
    Ok(best.is_subset(psi.form()))
}

/// `φ > ○ψ` under the premise-induced preference, by the definition.
pub fn obligation_ok(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    premises: &[Formula],
    phi: &Formula,
    psi: &Formula,
) -> Result<bool> {
    conditional(engine, op, n, &PreferenceModel::Premises(premises.to_vec()), phi, psi, true)
}

/// Consistency-split characterization: with `φ` consistent with `A`,
/// `A, φ ⊢ ψ`; otherwise `φ ⊢ ψ`.
pub fn obligation_ok_rewrite(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    premises: &[Formula],
    phi: &Formula,
    psi: &Formula,
) -> Result<bool> {
    if !out_membership(engine, op, n, std::slice::from_ref(phi), psi)? {
        return Ok(false);
    }
    let mut with_phi: Vec<&Formula> = premises.iter().collect();
    with_phi.push(phi);
    Ok(if engine.satisfiable(&with_phi) {
        engine.entails(&with_phi, psi)
    } else {
        engine.entails(&[phi], psi)
    })
}

/// `φ > Pψ` under an explicit betterness relation.
pub fn permission_ph(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    rel: &Betterness,
    phi: &Formula,
    psi: &Formula,
) -> Result<bool> {
    conditional(engine, op, n, &PreferenceModel::Explicit(rel.clone()), phi, psi, false)
}

/// `φ > Pψ` under the premise-induced preference.
pub fn permission_pk(
    engine: &ClassicalEngine,
    op: OutOp,
    n: &NormativeSystem<Formula>,
    premises: &[Formula],
    phi: &Formula,
    psi: &Formula,
) -> Result<bool> {
    conditional(engine, op, n, &PreferenceModel::Premises(premises.to_vec()), phi, psi, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Modality {
    Obligation,
    Permission,
}

/// `φ > O ψ` or `φ > P ψ`, evaluated with a base operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalQuery {
    pub antecedent: Formula,
    pub modality: Modality,
    pub consequent: Formula,
    pub op: OutOp,
}

impl ConditionalQuery {
    /// Parses `PHI > O PSI` or `PHI > P PSI`. The `>` of `->` is not a separator.
    pub fn parse(universe: &VariableUniverse, text: &str, op: OutOp) -> Result<Self> {
        let bytes = text.as_bytes();
        let sep = (0..bytes.len())
            .find(|&i| bytes[i] == b'>' && (i == 0 || bytes[i - 1] != b'-'))
            .ok_or_else(|| Error::Invalid(format!("`{text}`: expected `PHI > O PSI` or `PHI > P PSI`")))?;
        let rest = text[sep + 1..].trim_start();
        let (modality, tail) = match rest.split_once(char::is_whitespace) {
            Some(("O", tail)) => (Modality::Obligation, tail),
            Some(("P", tail)) => (Modality::Permission, tail),
            _ => {
                return Err(Error::Invalid(format!(
                    "`{text}`: modality after `>` must be `O` or `P`"
                )))
            }
        };
        Ok(ConditionalQuery {
            antecedent: Formula::new(universe.parse(&text[..sep])?, universe),
            modality,
            consequent: Formula::new(universe.parse(tail)?, universe),
            op,
        })
    }
}

impl fmt::Display for ConditionalQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.modality {
            Modality::Obligation => "O",
            Modality::Permission => "P",
        };
        write!(f, "{} > {m} {}", self.antecedent, self.consequent)
    }
}
