//! Exact invariants and obstruction certificates for contact-type
//! embeddings of Brieskorn homology spheres `Σ(a₁,…,aₙ)` in `(ℝ⁴, ω_std)`.
//!
//! The pipeline runs Seifert invariants → plumbing → intersection form →
//! lattice searches → the τ / twist-number inequality chain, and ends in an
//! [`obstruction::ObstructionReport`].

pub mod arith;
pub mod cli;
pub mod error;
pub mod families;
pub mod lattice;
pub mod linalg;
pub mod obstruction;
pub mod plumbing;
pub mod report;
pub mod seifert;

pub use error::{Error, Result};
pub use lattice::SearchConfig;
pub use obstruction::{verdict, ObstructionReport, PipelineConfig, Verdict};
pub use seifert::Multiplicities;
