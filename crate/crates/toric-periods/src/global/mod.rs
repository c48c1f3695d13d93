//! The global layer over Q with K = Q(sqrt d) imaginary of class number
//! one and E = Q^n.

pub mod decision;
pub mod hecke;
#[cfg(feature = "lvalue")]
pub mod lvalue;
pub mod quadratic;
pub mod reciprocity;

pub use decision::{
    bad_set, epsilon_targets, global_decision, parse_rational, Conditions, DecisionInput, DecisionInputJson,
    DecisionOptions, DecisionReport, GlobalSetup, GlobalSetupJson, PlaceReport,
};
pub use hecke::{GlobalHeckeCharacter, HeckeCharacterJson, LocalComponent, PrimeComponent, UnitCharacter};
pub use quadratic::{place_decomposition, Decomposition, OkElement, Place, CLASS_NUMBER_ONE};
pub use reciprocity::{find_lambda, product_formula_check, rational_symbol, ProductFormulaReport, Rational, Targets};
