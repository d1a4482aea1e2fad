//! Permissive-nominal sets, terms, models and logic.
//!
//! Atoms live in two zones per sort, the comb `A<` and the reservoir `A>`.
//! Elements carry supports that may be infinite, bounded by permission sets
//! such as `A<`. On top of the element universe sit sorted terms, their
//! interpretations, equation checking, the support-reducing transform
//! `[m]H`, and an evaluator for permissive-nominal logic.

pub mod atoms;
pub mod demos;
pub mod error;
pub mod permission;
pub mod pnl;
pub mod semantics;
pub mod syntax;
pub mod terms;
pub mod universe;

pub use error::{NomError, Result};
