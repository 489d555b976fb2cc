//! Reasoning core for an ethically guarded actuator.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! * [`syntax`], [`sexpr`], [`parse`], [`print`], [`subst`]: a sorted,
//!   quantified, multi-operator modal language (knowledge, belief, desire,
//!   intention, perception, obligation) over event-calculus atoms.
//! * [`prover`]: a refutation prover that shadows modal subformulas into
//!   first-order atoms, saturates with ordered resolution and emits proofs
//!   that [`prover::verify_proof`] re-checks step by step.
//! * [`model`]: a bounded finite-model finder used for countermodels.
//! * [`event`]: discrete event-calculus projection with provenance.
//! * [`ethics`]: ethical hierarchy, utilities and the double-effect clauses.
//! * [`scenario`]: the in-memory scenario the guard adjudicates.
//! * [`guard`]: the prevention predicate, the goal-deprivation obligation
//!   and LOCK/ALLOW adjudication.
//!
//! Wall-clock limits are read through the [`Clock`] trait so that hosts
//! with a real timer can plug one in.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod ethics;
pub mod event;
pub mod guard;
pub mod model;
pub mod parse;
pub mod print;
pub mod prover;
pub mod scenario;
pub mod sexpr;
pub mod subst;
pub mod syntax;

pub use error::{Pos, SortError, SyntaxError};
pub use parse::{parse_formula, parse_term};
pub use prover::{prove, verify_proof, Budget, Proof, ProveOutcome, Prover};
pub use syntax::{Formula, Modality, Signature, Sort, Term, Var};

/// Monotonic millisecond time source.
pub trait Clock {
    fn now_ms(&self) -> u64;
}

/// A clock that never advances. Searches driven by it are bounded only by
/// their clause and depth limits.
#[derive(Debug, Default, Clone, Copy)]
pub struct FrozenClock;

impl Clock for FrozenClock {
    fn now_ms(&self) -> u64 {
        0
    }
}
