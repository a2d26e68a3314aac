//! The worked example states and operators used throughout the test corpus,
//! the repro cases and the bundled scenarios.

use crate::linalg::{basis_vector, kron_vec, ComplexMatrix, C64, ZERO};
use crate::state::{BipartiteSpace, QuantumState, Side, SideOperator};

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// diag(1, 0, 0).
pub fn p1() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, 0.0, 0.0])
}

/// ½[[1,1,0],[1,1,0],[0,0,0]], the projection onto (e₀+e₁)/√2.
pub fn half_block() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.5, 0.5, 0.0], &[0.5, 0.5, 0.0], &[0.0, 0.0, 0.0]])
}

/// The single-system vector e₂ ∈ C³, as a state on C³ ⊗ C¹.
pub fn psi0_state() -> QuantumState {
    let space = BipartiteSpace::new(3, 1).unwrap();
    QuantumState::pure(space, basis_vector(3, 2)).unwrap()
}

/// Non-commuting A = diag(1,0,1) and B = ½[[1,1,0],[1,1,0],[0,0,2]], both
/// fixing e₂.
pub fn psi0_operators() -> (ComplexMatrix, ComplexMatrix) {
    let a = ComplexMatrix::diag_real(&[1.0, 0.0, 1.0]);
    let b = ComplexMatrix::from_real_rows(&[&[0.5, 0.5, 0.0], &[0.5, 0.5, 0.0], &[0.0, 0.0, 1.0]]);
    (a, b)
}

/// (1/3) e₀⊗e₀ + (1/3) e₁⊗e₁ + (√7/3) e₂⊗e₂.
pub fn psi1_state() -> QuantumState {
    let space = BipartiteSpace::new(3, 3).unwrap();
    let mut psi = vec![ZERO; 9];
    psi[0] = real(1.0 / 3.0);
    psi[4] = real(1.0 / 3.0);
    psi[8] = real(7f64.sqrt() / 3.0);
    QuantumState::pure(space, psi).unwrap()
}

/// The two perfectly correlated projection pairs of [`psi1_state`]:
/// (E₁, F₁) on side 1 and (E₂, F₂) on side 2.
pub fn psi1_pairs() -> [SideOperator; 4] {
    let space = BipartiteSpace::new(3, 3).unwrap();
    [
        SideOperator::new(space, Side::One, p1()).unwrap(),
        SideOperator::new(space, Side::One, half_block()).unwrap(),
        SideOperator::new(space, Side::Two, p1()).unwrap(),
        SideOperator::new(space, Side::Two, half_block()).unwrap(),
    ]
}

/// (1/2) e₀⊗e₀ + (√3/2) e₁⊗e₁.
pub fn psi2_state() -> QuantumState {
    let space = BipartiteSpace::new(2, 2).unwrap();
    QuantumState::pure(space, vec![real(0.5), ZERO, ZERO, real(3f64.sqrt() / 2.0)]).unwrap()
}

/// Bohm's singlet (e₀⊗e₁ − e₁⊗e₀)/√2.
pub fn singlet_state() -> QuantumState {
    let space = BipartiteSpace::new(2, 2).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    QuantumState::pure(space, vec![ZERO, real(h), real(-h), ZERO]).unwrap()
}

/// Σᵢ sᵢ eᵢ ⊗ eᵢ for the given (normalized) Schmidt coefficients.
pub fn schmidt_diagonal_state(coefficients: &[f64]) -> QuantumState {
    let d = coefficients.len();
    let space = BipartiteSpace::new(d, d).unwrap();
    let mut psi = vec![ZERO; d * d];
    for (i, &s) in coefficients.iter().enumerate() {
        psi[i * d + i] = real(s);
    }
    QuantumState::pure_normalized(space, psi).unwrap()
}

/// e_i ⊗ e_j on C^d1 ⊗ C^d2.
pub fn product_vector(d1: usize, d2: usize, i: usize, j: usize) -> Vec<C64> {
    kron_vec(&basis_vector(d1, i), &basis_vector(d2, j))
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    let mut y = ComplexMatrix::zeros(2);
    y[(0, 1)] = C64::new(0.0, -1.0);
    y[(1, 0)] = C64::new(0.0, 1.0);
    y
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}
