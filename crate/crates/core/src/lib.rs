//! Finite-dimensional toolkit for EPR correlations and CHSH (Bell)
//! correlations between two commuting tensor factors.
//!
//! The crate verifies perfect-correlation (EPR) conditions for projection
//! pairs, measures how badly a state lets two projections fail to commute,
//! finds CHSH witnesses both constructively and by see-saw optimization,
//! and runs the perturbative construction that turns any vector into a
//! nearby vector state carrying incommensurable EPR pairs.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices, Jacobi eigensolver, sign function
//! - [`state`]: bipartite states, expectations, partial traces, Schmidt form
//! - [`epr`]: EPR defects, joint distributions, commutator dispersion
//! - [`chsh`]: CHSH functional, see-saw, witness constructions
//! - [`density`]: level-shift model and the approximating vectors
//! - [`scenario`], [`report`], [`repro`], [`cli`]: the command-line surface

pub mod chsh;
pub mod cli;
pub mod density;
pub mod epr;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod report;
pub mod repro;
pub mod sampling;
pub mod scenario;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use state::{BipartiteSpace, QuantumState, Side, SideOperator};
pub use tol::Tolerances;
