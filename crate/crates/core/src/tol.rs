//! Numerical tolerances shared across the crate.
//!
//! All comparisons of matrices use the max-entry absolute difference, so the
//! thresholds below do not scale with dimension.

/// Structural checks: Hermiticity, idempotence, unitarity, reconstruction.
pub const STRUCT: f64 = 1e-9;

/// Eigenvalue cutoff for membership in the support of a density operator.
pub const SUPPORT: f64 = 1e-10;

/// Threshold for EPR defects and commutator dispersions.
pub const EPR: f64 = 1e-9;

/// Eigenvalue clustering width when forming joint-distribution atoms.
pub const SPECTRAL: f64 = 1e-8;

/// Acceptance width for "CHSH value equals the Tsirelson bound".
pub const MAXIMAL: f64 = 1e-6;

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the matrix norm.
pub const JACOBI_OFF_DIAGONAL: f64 = 1e-13;

pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Largest dense operator dimension any routine will build.
pub const MAX_DIM: usize = 4096;

/// Largest bipartite space. Vector states beyond [`MAX_DIM`] are fine as
/// long as nothing asks for their density matrix.
pub const MAX_SPACE_DIM: usize = 16384;

/// The tolerances a caller may override (the CLI surfaces these as flags).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub epr: f64,
    pub maximal: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            epr: EPR,
            maximal: MAXIMAL,
        }
    }
}
