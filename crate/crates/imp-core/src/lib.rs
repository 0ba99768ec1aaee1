//! Core of the IMP toolchain.
//!
//! IMP is a minimal imperative language (skip, assignment, sequencing,
//! conditionals, while loops) over unbounded integers. This crate bundles
//! everything needed to execute, verify, compile, and optimize IMP programs,
//! together with the differential-testing campaigns that cross-check those
//! engines against each other:
//!
//! - [`syntax`] — abstract syntax, parser, pretty-printer, annotation
//!   erasure, free variables
//! - [`semantics`] — expression evaluation (exact, 32-bit wrapping, strict),
//!   small-step reduction, the fuel-bounded interpreter, and the joint
//!   classifier
//! - [`hoare`] — deep-embedded assertions, weakest liberal preconditions,
//!   verification-condition generation (partial correctness and
//!   termination), bounded counterexample search, SMT-LIB export
//! - [`vm`] — a stack virtual machine with relative branches
//! - [`compiler`] — the compilation scheme from commands to VM code
//! - [`optim`] — liveness analysis and dead-code elimination
//! - [`difftest`] — seeded random program generation and the campaign
//!   drivers
//!
//! The crate is `no_std` (alloc only); IO, file formats, and the CLI live in
//! the companion `imp-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod compiler;
pub mod difftest;
pub mod hoare;
pub mod optim;
pub mod semantics;
pub mod syntax;
pub mod vm;

pub use num_bigint::BigInt;
