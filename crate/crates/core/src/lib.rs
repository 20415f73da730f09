//! Minimum guesswork of quantum ensembles under balanced cost functions.
//!
//! A guesser measures an ensemble state once, obtains a numbering of the
//! labels, and queries labels in that order paying `gamma(t)` when the
//! `t`-th query is correct. For balanced costs the crate builds effective
//! operators, certifies optimal two-outcome measurements, and for qubit
//! ensembles with a uniform prior solves the problem exactly as a
//! quadratic assignment problem.

pub mod cli;
pub mod costs;
pub mod ensembles;
pub mod enumerate;
pub mod error;
pub mod guesswork;
pub mod io;
pub mod measurement;
pub mod numbering;
pub mod operators;
pub mod qap;
pub mod simulate;

pub use costs::CostFunction;
pub use ensembles::{Ensemble, EnsembleFamilySpec, Family, Lambda};
pub use error::{Error, Result};
pub use guesswork::{GuessworkReport, Method, SolveMethod, SolverConfig};
pub use measurement::NumberingMeasurement;
pub use numbering::Numbering;
pub use operators::{BlochVector, HermitianOperator};
pub use simulate::{simulate, SimulationResult};
