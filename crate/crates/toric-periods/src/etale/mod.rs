//! Etale algebras with involution, hermitian-space invariants and the
//! classes of admissible embeddings.

pub mod algebra;
pub mod hermitian;
pub mod quad;
pub mod selftest;

pub use algebra::{disc_etale, ArchComponent, Discriminant, EtaleAlgebra, Lambda};
pub use hermitian::{
    classify_hermitian_spaces, BaseQuadratic, DiscInfo, EtaleSetting, HermitianClass, HermitianInvariant,
    LambdaClass, SignVector,
};
pub use quad::{ExtensionKind, QuadKind, QuadraticEtale, QuadraticExtension, SignAutomorphism, SubfieldEmbedding, TraceZeroDelta};
pub use selftest::{q_delta_selftest, QValue};
