//! The JSON system file and its validation.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use iolog_core::deontic::Betterness;
use iolog_core::{
    ClassicalEngine, ConsequenceEngine, FiniteLogic, FiniteLogicSpec, Formula, Norm,
    NormativeSystem, VariableUniverse,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub schema: u32,
    #[serde(default)]
    pub variables: Vec<String>,
    pub norms: Vec<NormSpec>,
    #[serde(default)]
    pub constraints: Vec<String>,
    #[serde(default)]
    pub premises: Vec<String>,
    #[serde(default)]
    pub preference: Option<PreferenceSpec>,
    #[serde(default)]
    pub finite_logic: Option<FiniteLogicSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub id: String,
    pub body: String,
    pub head: String,
}

/// Valuations are written as total conjunctions of literals, e.g. `g & ~t`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PreferenceSpec {
    /// Either `tiers` (best first) or explicit `pairs` `[better, worse]`.
    Explicit {
        #[serde(default)]
        tiers: Vec<Vec<String>>,
        #[serde(default)]
        pairs: Vec<(String, String)>,
    },
    /// Induced by the top-level `premises`. This is also the reading used
    /// when no preference is declared.
    Premise,
}

pub struct ClassicalSystem {
    pub engine: ClassicalEngine,
    pub norms: NormativeSystem<Formula>,
    pub constraints: Vec<Formula>,
    pub premises: Vec<Formula>,
    pub explicit: Option<Betterness>,
}

pub struct FiniteSystem {
    pub logic: FiniteLogic,
    pub norms: NormativeSystem<usize>,
}

pub enum System {
    Classical(ClassicalSystem),
    Finite(FiniteSystem),
}

impl System {
    pub fn warnings(&self) -> Vec<String> {
        match self {
            System::Classical(s) => s.norms.warnings().to_vec(),
            System::Finite(s) => {
                let mut w = s.logic.warnings().to_vec();
                w.extend(s.norms.warnings().iter().cloned());
                w
            }
        }
    }

    pub fn classical(&self, command: &str) -> Result<&ClassicalSystem> {
        match self {
            System::Classical(s) => Ok(s),
            System::Finite(_) => bail!("`{command}` needs a system over variables, not a finite logic"),
        }
    }
}

pub fn load(path: &Path) -> Result<System> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SystemFile =
        serde_json::from_str(&text).with_context(|| format!("{}: invalid system file", path.display()))?;
    build(file).with_context(|| format!("{}", path.display()))
}

pub fn build(file: SystemFile) -> Result<System> {
    if file.schema != SCHEMA_VERSION {
        bail!("unsupported schema {} (expected {SCHEMA_VERSION})", file.schema);
    }
    if let Some(spec) = &file.finite_logic {
        if !file.variables.is_empty() {
            bail!("`variables` and `finite_logic` are exclusive");
        }
        if !file.constraints.is_empty() || !file.premises.is_empty() || file.preference.is_some() {
            bail!("constraints, premises and preferences need a system over variables");
        }
        let logic = FiniteLogic::build(spec)?;
        let norms = norms(&file.norms, |s| Ok(logic.parse_element(s)?))?;
        return Ok(System::Finite(FiniteSystem { logic, norms }));
    }
    let universe = VariableUniverse::new(&file.variables)?;
    let engine = ClassicalEngine::new(universe);
    let formula = |s: &str| -> Result<Formula> {
        engine.parse_element(s).with_context(|| format!("formula `{s}`"))
    };
    let norms = norms(&file.norms, formula)?;
    let constraints = file.constraints.iter().map(|s| formula(s)).collect::<Result<Vec<_>>>()?;
    let premises = file.premises.iter().map(|s| formula(s)).collect::<Result<Vec<_>>>()?;
    let explicit = match &file.preference {
        None | Some(PreferenceSpec::Premise) => None,
        Some(PreferenceSpec::Explicit { tiers, pairs }) => {
            let u = engine.universe();
            let v = |s: &String| u.parse_valuation(s).with_context(|| format!("valuation `{s}`"));
            let rel = match (tiers.is_empty(), pairs.is_empty()) {
                (false, true) => {
                    let tiers = tiers
                        .iter()
                        .map(|t| t.iter().map(v).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    Betterness::from_tiers(u, &tiers)?
                }
                (true, false) => {
                    let pairs = pairs
                        .iter()
                        .map(|(a, b)| Ok((v(a)?, v(b)?)))
                        .collect::<Result<Vec<_>>>()?;
                    Betterness::from_pairs(u, &pairs)?
                }
                _ => bail!("an explicit preference needs exactly one of `tiers` and `pairs`"),
            };
            Some(rel)
        }
    };
    Ok(System::Classical(ClassicalSystem {
        engine,
        norms,
        constraints,
        premises,
        explicit,
    }))
}

fn norms<T, F>(specs: &[NormSpec], parse: F) -> Result<NormativeSystem<T>>
where
    T: Clone + Eq + std::hash::Hash + std::fmt::Debug,
    F: Fn(&str) -> Result<T>,
{
    let mut out = Vec::with_capacity(specs.len());
    for s in specs {
        let body = parse(&s.body).with_context(|| format!("norm {}", s.id))?;
        let head = parse(&s.head).with_context(|| format!("norm {}", s.id))?;
        out.push(Norm::new(s.id.clone(), body, head));
    }
    Ok(NormativeSystem::new(out)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<System> {
        build(serde_json::from_str(json)?)
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse(r#"{"schema": 2, "variables": ["p"], "norms": []}"#).is_err());
        assert!(parse(r#"{"schema": 1, "variables": ["p"], "norms": [], "extra": 1}"#).is_err());
        assert!(parse(r#"{"schema": 1, "variables": ["p"], "norms": [{"id": "n", "body": "q", "head": "p"}]}"#).is_err());
        assert!(parse(
            r#"{"schema": 1, "variables": ["p"], "norms": [
                {"id": "n", "body": "p", "head": "p"}, {"id": "n", "body": "1", "head": "p"}]}"#
        )
        .is_err());
        assert!(parse(
            r#"{"schema": 1, "variables": ["p"], "norms": [],
                "preference": {"kind": "explicit", "tiers": [["p"]], "pairs": [["p", "~p"]]}}"#
        )
        .is_err());
    }

    #[test]
    fn loads_both_kinds() {
        let s = parse(
            r#"{"schema": 1, "variables": ["p", "q"], "norms": [{"id": "n", "body": "p", "head": "q"}],
                "preference": {"kind": "explicit", "pairs": [["p & q", "~p & q"]]}}"#,
        )
        .unwrap();
        let c = s.classical("test").unwrap();
        assert_eq!(c.norms.len(), 1);
        assert!(c.explicit.is_some());

        let s = parse(
            r#"{"schema": 1, "norms": [{"id": "n", "body": "a", "head": "b"}],
                "finite_logic": {"elements": ["a", "b"], "leq": [["a", "b"]]}}"#,
        )
        .unwrap();
        assert!(matches!(s, System::Finite(_)));
        assert!(s.classical("deontic").is_err());
    }
}
