//! Combinatorial NEC group machinery for realizing cyclic anticonformal
//! actions on real Riemann surfaces.
//!
//! Starting from the branch data of an anticonformal automorphism of order
//! `2n` (a non-orientable quotient signature `(γ; −; [n_1, ..., n_r])` and a
//! surface-kernel epimorphism onto `C_2n`), the pipeline in [`realization`]
//! builds the bordered disc group `K`, its index-two reflection-free subgroup,
//! transports the epimorphism, extends it to a dihedral quotient of `K`, and
//! records every step in a [`realization::RealizationCertificate`].

pub mod cli;
pub mod finite;
pub mod kernel;
pub mod presentation;
pub mod realization;
pub mod signature;
pub mod word;

pub use signature::{NecSignature, Rational};
pub use word::Word;
