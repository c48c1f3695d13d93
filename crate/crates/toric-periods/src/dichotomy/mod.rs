//! The local decision: character compatibility, the root-number criterion,
//! the theta-lift character and the sum over embedding classes.

pub mod corpus;
pub mod local;

pub use local::{
    alpha_restriction, character_compatibility, epsilon_vector, k_over_base, local_hom_dimension, required_beta,
    sum_check, theta_lift_character, BreakdownRow, CharacterData, DichotomyInput, DichotomyResult, LiftedCharacter,
    SplittingData, SumReport,
};
