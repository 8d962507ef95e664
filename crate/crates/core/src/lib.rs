//! Inductive and coinductive validity of judgements defined by proof rules.
//!
//! * [`ruleset`]: finite rule systems, their least and greatest fixpoints and
//!   proof extraction.
//! * [`proofcert`]: proof certificates (well-founded, circular, fragments),
//!   their checkers and text format.
//! * [`syntax`], [`lts`], [`equiv`]: a guarded process language, its
//!   bisimilarity oracle and a coinductive prover for process equivalence.
//! * [`cli`]: the `coind` command.

pub mod cli;
pub mod equiv;
pub mod lts;
pub mod proofcert;
pub mod ruleset;
pub mod syntax;

pub use equiv::{prove_equiv, EquivJudgement, EquivSchemata, MatchMode, Prover};
pub use proofcert::{check_circular, check_fragment, check_wellfounded, ProofCert};
pub use syntax::{parse, render, ProcessExpr};
