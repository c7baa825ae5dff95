//! The realization chain: validate the action datum, build the disc group
//! `K`, its index-two subgroup `Δ̂ = ker θ`, transport `ρ` to `η: Δ̂ → C_2n`,
//! and extend `η` to `Θ: K → D_2n`.

pub mod action;
pub mod certificate;
pub mod delta_hat;
pub mod dihedral;
pub mod eta;
pub mod lemma;
pub mod theta;

pub use action::{
    enumerate_smooth_epimorphisms, first_smooth_epimorphism, for_each_smooth_epimorphism,
    structural_issues, validate_action, ActionDatum, Enumeration, RhoImages, ValidationIssue,
};
pub use certificate::{realize, RealizationCertificate, RealizeError};
pub use delta_hat::{derive_delta_hat, DeltaHat, DeltaHatError};
pub use dihedral::{extend_to_dihedral, DihedralExtension, ExtensionError};
pub use eta::{construct_eta, Eta, EtaError};
pub use lemma::{lemma1_check, Lemma1Report};
pub use theta::{build_theta, check_theta, printed_theta, DiscGroup, ThetaCheck};
