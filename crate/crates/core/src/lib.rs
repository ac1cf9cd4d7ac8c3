//! Input/output logic: output operations over Boolean algebras and finite
//! abstract logics, a rule-based proof search for the same systems, deontic
//! conditionals with constraints and preferences, and an Isabelle/HOL emitter.

pub mod deontic;
pub mod engine;
pub mod error;
pub mod harness;
pub mod hol;
pub mod ops;
pub mod proof;
pub mod term;

pub use engine::classical::ClassicalEngine;
pub use engine::finite::{FiniteLogic, FiniteLogicSpec};
pub use engine::meta::MetaNormLogic;
pub use engine::{Capabilities, ConsequenceEngine};
pub use error::Error;
pub use ops::{GeneratorSet, Norm, NormativeSystem, OutOp};
pub use proof::{DerivationTree, Rule, RuleSystem};
pub use term::{Formula, SemanticForm, Term, Valuation, VariableUniverse};
