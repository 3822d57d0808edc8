//! Conditional term rewriting toolkit: term algebra, rule classification,
//! bounded rewrite engines, the unraveling `U`, the linearization `T`, the
//! SR transformation, the `Φ` correspondence and executable soundness and
//! completeness oracles.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod engine;
pub mod error;
pub mod harness;
pub mod system;
pub mod phi;
pub mod term;
pub mod transform;

#[cfg(test)]
pub(crate) mod testing;

/// Version of this crate, recorded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use classify::{classify_rule, classify_system, is_ultra_wll, is_wll_system, RuleReport, SystemReport};
pub use engine::{ctrs_reachable, ctrs_step, trs_reachable, trs_successors, DerivationGraph, EngineCaps};
pub use error::{EngineError, PlacementError, SystemError, TermError, TransformError};
pub use system::{Condition, RewriteSystem, Role, Rule, Signature, SystemKind};
pub use phi::{evaluation_state, is_well_placed, phi, EvaluationState, PhiResult};
pub use transform::{linearize, sr_transform, unravel, Method, TransformContext};
pub use term::{count_var_occurrences, is_linear, match_term, FreshVars, Position, Substitution, Symbol, Term, Var};
