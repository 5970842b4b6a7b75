//! Quantum invariants of 3-manifolds from spherical fusion category data.
//!
//! The crate is `no_std` with `alloc`; the companion `alterfold` crate adds
//! text formats, threads and a command-line interface.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod builtins;
pub mod error;
pub mod fusion;
pub mod linalg;
pub mod morphism;
pub mod triangulation;
pub mod state_sum;
pub mod census;
pub mod tube;
pub mod center;
pub mod surgery;
pub mod fs;

pub use builtins::builtin_category;
pub use error::{Error, Result};
pub use fusion::{verify_category, CategoryData, FKey, FusionCategory, RKey, VerificationReport};
pub use linalg::{Mat, C64};
