//! The level-shift model on Cᴺ ⊗ Cᴺ and the vectors Ψₙ that approximate a
//! given vector while carrying incommensurable EPR pairs.
//!
//! Side k has level projections Eₖ,ᵢ = |i⟩⟨i| and shifts Vₖ,ᵢ = |i+1⟩⟨i|.
//! For a unit vector Ψ and a cut level n,
//!
//! Ψₙ = (1 − 1/n)^{1/2} PΨ/‖PΨ‖ + (1/2n)^{1/2} (Φₙ + V₁,ₙV₂,ₙΦₙ),
//!
//! where P removes levels n and n+1 on both sides and Φₙ = eₙ ⊗ eₙ. The
//! pairs (E₁,ₙ, E₂,ₙ) and (F₁,ₙ, F₂,ₙ) with
//! Fₖ,ₙ = ½(Eₖ,ₙ + Eₖ,ₙ₊₁ + Vₖ,ₙ + Vₖ,ₙ*) are perfectly correlated in Ψₙ,
//! and ‖Ψ − Ψₙ‖ → 0 as n grows.

use rayon::prelude::*;

use crate::chsh::witness_from_epr;
use crate::epr::{verify_incommensurable_epr, EprPairReport};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, C64, ONE, ZERO};
use crate::state::{BipartiteSpace, QuantumState, Side, SideOperator};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct ShiftModel {
    pub n_levels: usize,
    pub space: BipartiteSpace,
    /// E₁,ᵢ = |i⟩⟨i| ⊗ I
    pub e1: Vec<SideOperator>,
    /// E₂,ᵢ = I ⊗ |i⟩⟨i|
    pub e2: Vec<SideOperator>,
    /// V₁,ᵢ = |i+1⟩⟨i| ⊗ I, for i < N − 1
    pub v1: Vec<SideOperator>,
    /// V₂,ᵢ = I ⊗ |i+1⟩⟨i|, for i < N − 1
    pub v2: Vec<SideOperator>,
}

impl ShiftModel {
    pub fn levels(&self, side: Side) -> &[SideOperator] {
        match side {
            Side::One => &self.e1,
            Side::Two => &self.e2,
        }
    }

    pub fn shifts(&self, side: Side) -> &[SideOperator] {
        match side {
            Side::One => &self.v1,
            Side::Two => &self.v2,
        }
    }

    /// Fₖ,ₙ = ½(Eₖ,ₙ + Eₖ,ₙ₊₁ + Vₖ,ₙ + Vₖ,ₙ*), the projection onto
    /// (eₙ + eₙ₊₁)/√2 on side k.
    pub fn flip_projection(&self, side: Side, n: usize) -> SideOperator {
        let e = self.levels(side);
        let v = self.shifts(side)[n].local();
        let sum = &(&(e[n].local() + e[n + 1].local()) + v) + &v.adjoint();
        e[n].with_local(sum.scale_real(0.5))
    }
}

pub fn build_shift_model(n_levels: usize) -> Result<ShiftModel> {
    if n_levels < 4 {
        return Err(Error::Precondition(format!(
            "the shift model needs at least 4 levels, got {n_levels}"
        )));
    }
    let space = BipartiteSpace::new(n_levels, n_levels)?;
    let level = |i: usize| ComplexMatrix::unit(n_levels, i, i);
    let shift = |i: usize| ComplexMatrix::unit(n_levels, i + 1, i);
    let family = |side: Side, f: &dyn Fn(usize) -> ComplexMatrix, count: usize| {
        (0..count)
            .map(|i| SideOperator::new(space, side, f(i)).expect("local dimension matches the space"))
            .collect::<Vec<_>>()
    };
    Ok(ShiftModel {
        n_levels,
        space,
        e1: family(Side::One, &level, n_levels),
        e2: family(Side::Two, &level, n_levels),
        v1: family(Side::One, &shift, n_levels - 1),
        v2: family(Side::Two, &shift, n_levels - 1),
    })
}

/// One approximating vector Ψₙ with its two projection pairs.
#[derive(Debug, Clone)]
pub struct DensityStep {
    pub n: usize,
    pub psi_n: Vec<C64>,
    pub phi_n: Vec<C64>,
    /// (E₁,ₙ, F₁,ₙ, E₂,ₙ, F₂,ₙ)
    pub pairs: [SideOperator; 4],
    /// ‖Ψ − Ψₙ‖
    pub distance: f64,
}

impl DensityStep {
    pub fn state(&self, model: &ShiftModel) -> Result<QuantumState> {
        QuantumState::pure(model.space, self.psi_n.clone())
    }
}

pub fn construct_psi_n(psi: &[C64], n: usize, model: &ShiftModel) -> Result<DensityStep> {
    let big_n = model.n_levels;
    if psi.len() != big_n * big_n {
        return Err(Error::DimensionMismatch {
            expected: big_n * big_n,
            got: psi.len(),
        });
    }
    let norm = linalg::vec_norm(psi);
    if (norm - 1.0).abs() > crate::tol::STRUCT {
        return Err(Error::Precondition(format!("Ψ must be a unit vector, norm is {norm:.12}")));
    }
    if n < 2 || n + 2 > big_n {
        return Err(Error::Precondition(format!(
            "cut level n = {n} must satisfy 2 ≤ n ≤ N − 2 = {}",
            big_n.saturating_sub(2)
        )));
    }

    // PΨ: zero every component with either index at level n or n+1.
    let cut = |i: usize| i == n || i == n + 1;
    let projected: Vec<C64> = psi
        .iter()
        .enumerate()
        .map(|(idx, &z)| if cut(idx / big_n) || cut(idx % big_n) { ZERO } else { z })
        .collect();
    let p_norm = linalg::vec_norm(&projected);
    if p_norm <= crate::tol::SUPPORT {
        return Err(Error::Degenerate(format!(
            "removing levels {n} and {} annihilates Ψ",
            n + 1
        )));
    }

    let phi_n = linalg::kron_vec(&linalg::basis_vector(big_n, n), &linalg::basis_vector(big_n, n));
    let bulk = (1.0 - 1.0 / n as f64).sqrt() / p_norm;
    let tail = (1.0 / (2.0 * n as f64)).sqrt();
    let mut psi_n: Vec<C64> = projected.iter().map(|z| z * bulk).collect();
    psi_n[n * big_n + n] += tail * ONE;
    // V₁,ₙV₂,ₙΦₙ = eₙ₊₁ ⊗ eₙ₊₁
    psi_n[(n + 1) * big_n + n + 1] += tail * ONE;

    let distance = psi
        .iter()
        .zip(&psi_n)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let pairs = [
        model.e1[n].clone(),
        model.flip_projection(Side::One, n),
        model.e2[n].clone(),
        model.flip_projection(Side::Two, n),
    ];
    Ok(DensityStep {
        n,
        psi_n,
        phi_n,
        pairs,
        distance,
    })
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: usize,
    pub distance: f64,
    pub epr: EprPairReport,
    /// Coefficient c of the witness built from the pairs.
    pub c: f64,
    pub witness_value: f64,
}

/// Builds Ψₙ for every n, checks its pairs and feeds them to the EPR-pair
/// witness construction. Rows come back in the order of `n_values`.
pub fn density_sweep(psi: &[C64], n_values: &[usize], model: &ShiftModel, tol: &Tolerances) -> Result<Vec<SweepRow>> {
    n_values
        .par_iter()
        .map(|&n| {
            let step = construct_psi_n(psi, n, model)?;
            let state = step.state(model)?;
            let [e1, f1, e2, f2] = &step.pairs;
            let epr = verify_incommensurable_epr(&state, e1, f1, e2, f2, tol)?;
            let witness = witness_from_epr(&state, e1, f1, e2, f2, tol)?;
            Ok(SweepRow {
                n,
                distance: step.distance,
                epr,
                c: witness.c.unwrap_or(f64::NAN),
                witness_value: witness.value,
            })
        })
        .collect()
}

/// Smallest truncation admitting every requested cut level.
pub fn default_levels(n_values: &[usize]) -> usize {
    n_values.iter().copied().max().unwrap_or(2).max(2) + 2
}

/// e₀ ⊗ e₀ on Cᴺ ⊗ Cᴺ.
pub fn ground_vector(n_levels: usize) -> Vec<C64> {
    linalg::basis_vector(n_levels * n_levels, 0)
}
