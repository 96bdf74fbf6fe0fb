//! Irreducibility certificates from several independent engines.

pub mod certificate;
pub mod elimination;

pub use certificate::{
    prove_by_elimination, prove_irreducible, prove_irreducible_with, verify_certificate, check_certificate,
    Engine, IrreducibilityCertificate, Payload, ProveOptions, Verdict,
};
pub use elimination::{
    coefficient_system, eliminate, eliminate_all_splits, replay, CoefficientSystem, EliminationOptions,
    EliminationStep, EliminationTrace, Normalization, Outcome, Witness,
};
