//! Exact and high-precision machinery for shifted G-function series.
//!
//! Given a linear differential operator `L` annihilating a power series
//! `F(z) = Σ A_k z^k`, the crate
//!
//! - rewrites `L` in θ-form and extracts its indicial data ([`operator`]),
//! - generates `A_k` exactly and evaluates `F_n^{[s]}(z) = Σ A_k z^{k+n}/(k+n)^s` ([`series`]),
//! - builds the inhomogeneous recurrences satisfied by `F_n^{[s]}` and the
//!   casoratian apparatus of the homogeneous one ([`recurrence`]),
//! - expresses every `F_n^{[s]}` on a finite basis ([`decomposition`]),
//! - assembles the Padé-type linear forms `T_{S,r,n}` ([`linear_forms`]),
//! - predicts and measures their growth ([`asymptotics`]),
//! - and turns the measurements into heuristic dimension certificates ([`criterion`]).

pub mod asymptotics;
pub mod bigcomplex;
pub mod corpus;
pub mod criterion;
pub mod decomposition;
pub mod error;
pub mod linear_forms;
pub mod operator;
pub mod parse;
pub mod poly;
pub mod recurrence;
pub mod roots;
pub mod serde_util;
pub mod series;

pub use bigcomplex::BigComplex;
pub use error::{Error, Result};
pub use operator::{DiffOperator, ExponentReport, ThetaForm};
pub use poly::RationalPoly;
pub use series::{CoefficientStream, ComplexApprox, GFunctionSpec};

/// Report schema version written into every serialized document.
pub const REPORT_VERSION: u32 = 1;
