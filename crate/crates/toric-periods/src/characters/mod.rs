//! Finite-level characters, additive characters and epsilon factors.

pub mod additive;
pub mod epsilon;
pub mod mult;
pub mod toric;

pub use additive::{psi_delta_k, psi_delta_l, AdditiveCharacter};
pub use epsilon::{
    archimedean_epsilon, component_character, epsilon_sign_vector, epsilon_values, pull_back_norm, tate_epsilon,
    EpsilonValue,
};
pub use mult::{
    enumerate_characters, parse_rotation, presentation, CharacterJson, Constraint, MultiplicativeCharacter, Rot,
};
pub use toric::{embed_rational, enumerate_norm_one, enumerate_splitting, over_generators, KCharacter, NormOneCharacter};
