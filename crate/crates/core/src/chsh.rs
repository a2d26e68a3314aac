//! The CHSH functional ½ω(A₁A₂ + A₁B₂ + B₁A₂ − B₁B₂) over self-adjoint
//! contractions, its see-saw maximization, and the explicit witnesses built
//! from EPR pairs and from anticommuting projections.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::epr::{self, verify_incommensurable_epr};
use crate::error::{Error, Result};
use crate::fixtures::{pauli_x, pauli_y, pauli_z};
use crate::linalg::{self, operator_sign, round_to_projection, ComplexMatrix, StructureKind};
use crate::sampling;
use crate::state::{self, partial_trace, support_projection, BipartiteSpace, QuantumState, Side, SideOperator};
use crate::tol::{self, Tolerances};

/// Four side operators and the CHSH half-value they reach in some state.
#[derive(Debug, Clone)]
pub struct ChshWitness {
    pub a1: SideOperator,
    pub b1: SideOperator,
    pub a2: SideOperator,
    pub b2: SideOperator,
    pub value: f64,
    /// Coefficient of the EPR-pair construction, when that built the witness.
    pub c: Option<f64>,
    /// Seed of the optimizer run that found the witness.
    pub seed: Option<u64>,
}

impl ChshWitness {
    pub fn operators(&self) -> [&SideOperator; 4] {
        [&self.a1, &self.b1, &self.a2, &self.b2]
    }
}

/// ½ Re ω(A₁A₂ + A₁B₂ + B₁A₂ − B₁B₂), without the absolute value.
pub fn chsh_signed(
    state: &QuantumState,
    a1: &SideOperator,
    b1: &SideOperator,
    a2: &SideOperator,
    b2: &SideOperator,
) -> Result<f64> {
    let sum = a2.local() + b2.local();
    let diff = a2.local() - b2.local();
    let first = state::expectation_product(state, a1.local(), &sum)?;
    let second = state::expectation_product(state, b1.local(), &diff)?;
    Ok(0.5 * (first.re + second.re))
}

fn check_witness_operators(ops: [&SideOperator; 4]) -> Result<()> {
    let names = ["a1", "b1", "a2", "b2"];
    let sides = [Side::One, Side::One, Side::Two, Side::Two];
    for ((op, name), side) in ops.into_iter().zip(names).zip(sides) {
        if op.side() != side {
            return Err(Error::SideMismatch(format!("{name} must act on side {side}")));
        }
        let v = linalg::validate(StructureKind::Contraction, op.local());
        if !v.ok {
            return Err(Error::Structure(format!(
                "{name} is not a self-adjoint contraction (residual {:.3e})",
                v.residual
            )));
        }
    }
    Ok(())
}

/// ½|ω(A₁A₂ + A₁B₂ + B₁A₂ − B₁B₂)| for validated contractions.
pub fn chsh_value(
    state: &QuantumState,
    a1: &SideOperator,
    b1: &SideOperator,
    a2: &SideOperator,
    b2: &SideOperator,
) -> Result<f64> {
    check_witness_operators([a1, b1, a2, b2])?;
    for op in [a1, b1, a2, b2] {
        state::check_space(state, op)?;
    }
    Ok(chsh_signed(state, a1, b1, a2, b2)?.abs())
}

/// Local operator X on side 1 with tr(A·X) = ω(A ⊗ m) for every A.
fn contract_with_side2(state: &QuantumState, m: &ComplexMatrix) -> ComplexMatrix {
    let BipartiteSpace { d1, d2 } = state.space();
    if let Some(psi) = state.vector() {
        // X[k,i] = Σⱼₗ ψ[k,l] m[j,l] ψ̄[i,j]
        let mut t = vec![linalg::ZERO; d1 * d2];
        for k in 0..d1 {
            for j in 0..d2 {
                t[k * d2 + j] = (0..d2).map(|l| psi[k * d2 + l] * m[(j, l)]).sum();
            }
        }
        let mut x = ComplexMatrix::zeros(d1);
        for k in 0..d1 {
            for i in 0..d1 {
                x[(k, i)] = (0..d2).map(|j| t[k * d2 + j] * psi[i * d2 + j].conj()).sum();
            }
        }
        return x.hermitian_part();
    }
    let n = d1 * d2;
    let r = state.density().entries();
    let mut x = ComplexMatrix::zeros(d1);
    for k in 0..d1 {
        for i in 0..d1 {
            let mut acc = linalg::ZERO;
            for l in 0..d2 {
                let row = (k * d2 + l) * n + i * d2;
                for j in 0..d2 {
                    acc += r[row + j] * m[(j, l)];
                }
            }
            x[(k, i)] = acc;
        }
    }
    x.hermitian_part()
}

/// Local operator Y on side 2 with tr(B·Y) = ω(m ⊗ B) for every B.
fn contract_with_side1(state: &QuantumState, m: &ComplexMatrix) -> ComplexMatrix {
    let BipartiteSpace { d1, d2 } = state.space();
    if let Some(psi) = state.vector() {
        // Y[l,j] = Σᵢₖ ψ[k,l] m[i,k] ψ̄[i,j]
        let mut t = vec![linalg::ZERO; d1 * d2];
        for i in 0..d1 {
            for l in 0..d2 {
                t[i * d2 + l] = (0..d1).map(|k| m[(i, k)] * psi[k * d2 + l]).sum();
            }
        }
        let mut y = ComplexMatrix::zeros(d2);
        for l in 0..d2 {
            for j in 0..d2 {
                y[(l, j)] = (0..d1).map(|i| t[i * d2 + l] * psi[i * d2 + j].conj()).sum();
            }
        }
        return y.hermitian_part();
    }
    let n = d1 * d2;
    let r = state.density().entries();
    let mut y = ComplexMatrix::zeros(d2);
    for l in 0..d2 {
        for j in 0..d2 {
            let mut acc = linalg::ZERO;
            for k in 0..d1 {
                for i in 0..d1 {
                    acc += r[(k * d2 + l) * n + i * d2 + j] * m[(i, k)];
                }
            }
            y[(l, j)] = acc;
        }
    }
    y.hermitian_part()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawParams {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once a full sweep improves the objective by less than this.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SeesawParams {
    fn default() -> Self {
        Self {
            restarts: 20,
            max_iterations: 500,
            tolerance: 1e-10,
            seed: 0,
        }
    }
}

/// Full record of a see-saw run.
#[derive(Debug, Clone)]
pub struct SeesawRun {
    pub witness: ChshWitness,
    pub best_restart: usize,
    /// Objective after initialization and after every half-step, per restart.
    pub histories: Vec<Vec<f64>>,
}

impl SeesawRun {
    /// Largest decrease between consecutive recorded objectives, over all
    /// restarts (zero when every history is nondecreasing).
    pub fn worst_decrease(&self) -> f64 {
        self.histories
            .iter()
            .flat_map(|h| h.windows(2).map(|w| w[0] - w[1]))
            .fold(0.0, f64::max)
    }
}

struct RestartOutcome {
    ops: [ComplexMatrix; 4],
    value: f64,
    history: Vec<f64>,
}

fn run_restart(state: &QuantumState, params: &SeesawParams, index: usize) -> Result<RestartOutcome> {
    let BipartiteSpace { d1, d2 } = state.space();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index as u64);
    let mut a1 = operator_sign(&sampling::hermitian_from(d1, &mut rng))?;
    let mut b1 = operator_sign(&sampling::hermitian_from(d1, &mut rng))?;
    let mut a2 = operator_sign(&sampling::hermitian_from(d2, &mut rng))?;
    let mut b2 = operator_sign(&sampling::hermitian_from(d2, &mut rng))?;

    let objective = |a1: &ComplexMatrix, b1: &ComplexMatrix, a2: &ComplexMatrix, b2: &ComplexMatrix| -> Result<f64> {
        let first = state::expectation_product(state, a1, &(a2 + b2))?;
        let second = state::expectation_product(state, b1, &(a2 - b2))?;
        Ok(0.5 * (first.re + second.re))
    };

    let mut history = vec![objective(&a1, &b1, &a2, &b2)?];
    for _ in 0..params.max_iterations {
        let before = *history.last().unwrap();
        // Side 1 against the fixed side 2: argmax of tr(A·X) is sign(X).
        a1 = operator_sign(&contract_with_side2(state, &(&a2 + &b2)))?;
        b1 = operator_sign(&contract_with_side2(state, &(&a2 - &b2)))?;
        history.push(objective(&a1, &b1, &a2, &b2)?);
        a2 = operator_sign(&contract_with_side1(state, &(&a1 + &b1)))?;
        b2 = operator_sign(&contract_with_side1(state, &(&a1 - &b1)))?;
        let after = objective(&a1, &b1, &a2, &b2)?;
        history.push(after);
        if after - before < params.tolerance {
            break;
        }
    }
    let value = *history.last().unwrap();
    Ok(RestartOutcome {
        ops: [a1, b1, a2, b2],
        value,
        history,
    })
}

/// Multi-restart see-saw. Restarts run in parallel; each draws from its own
/// stream of the seeded generator and the best value wins, ties going to
/// the lowest restart index, so the result does not depend on scheduling.
pub fn seesaw(state: &QuantumState, params: &SeesawParams) -> Result<SeesawRun> {
    let restarts = params.restarts.max(1);
    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|i| run_restart(state, params, i))
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = i;
        }
    }
    let histories = outcomes.iter().map(|o| o.history.clone()).collect();
    let winner = &outcomes[best];
    let space = state.space();
    let [a1, b1, a2, b2] = winner.ops.clone();
    let a1 = SideOperator::new(space, Side::One, a1)?;
    let b1 = SideOperator::new(space, Side::One, b1)?;
    let a2 = SideOperator::new(space, Side::Two, a2)?;
    let b2 = SideOperator::new(space, Side::Two, b2)?;
    let value = chsh_value(state, &a1, &b1, &a2, &b2)?;
    Ok(SeesawRun {
        witness: ChshWitness {
            a1,
            b1,
            a2,
            b2,
            value,
            c: None,
            seed: Some(params.seed),
        },
        best_restart: best,
        histories,
    })
}

/// Best CHSH witness the see-saw finds.
pub fn chsh_optimize(state: &QuantumState, params: &SeesawParams) -> Result<ChshWitness> {
    Ok(seesaw(state, params)?.witness)
}

/// Builds a CHSH witness from incommensurable EPR pairs (E₁,E₂), (F₁,F₂).
///
/// With c = ‖E₁⊥F₁E₁Ψ‖² + ‖E₁F₁E₁⊥Ψ‖² (written with ω for mixed states),
/// A₁ = E₁ − E₁⊥, B₁ = E₁F₁E₁⊥ + E₁⊥F₁E₁, and A₂, B₂ the normalized
/// combinations (E₂ − E₂⊥ ± c·(E₂F₂E₂⊥ + E₂⊥F₂E₂))/√(1+c²), the half-value
/// is √(1+c²) > 1.
pub fn witness_from_epr(
    state: &QuantumState,
    e1: &SideOperator,
    f1: &SideOperator,
    e2: &SideOperator,
    f2: &SideOperator,
    tol: &Tolerances,
) -> Result<ChshWitness> {
    let report = verify_incommensurable_epr(state, e1, f1, e2, f2, tol)?;
    if !report.verdict {
        return Err(Error::NotIncommensurable(Box::new(report)));
    }
    let flip_part = |e: &ComplexMatrix, f: &ComplexMatrix| {
        let perp = &ComplexMatrix::identity(e.dim()) - e;
        let lower = perp.matmul(f).matmul(e); // E⊥FE
        let upper = e.matmul(f).matmul(&perp); // EFE⊥
        (perp, lower, upper)
    };

    let (e1_perp, lower, upper) = flip_part(e1.local(), f1.local());
    let weight1 = lower.adjoint().matmul(&lower);
    let weight2 = upper.adjoint().matmul(&upper);
    let c = state::expectation_side(state, &e1.with_local(&weight1 + &weight2))?.re;

    let a1 = e1.with_local(e1.local() - &e1_perp);
    let b1 = e1.with_local(&upper + &lower);

    let (e2_perp, lower2, upper2) = flip_part(e2.local(), f2.local());
    let sign2 = e2.local() - &e2_perp;
    let flip2 = &upper2 + &lower2;
    let norm = (1.0 + c * c).sqrt();
    let a2 = e2.with_local(&sign2.scale_real(1.0 / norm) + &flip2.scale_real(c / norm));
    let b2 = e2.with_local(&sign2.scale_real(1.0 / norm) - &flip2.scale_real(c / norm));

    let value = chsh_value(state, &a1, &b1, &a2, &b2)?;
    Ok(ChshWitness {
        a1,
        b1,
        a2,
        b2,
        value,
        c: Some(c),
        seed: None,
    })
}

/// Support projections and the two projection pairs of a maximal witness.
#[derive(Debug, Clone)]
pub struct MaximalProjections {
    pub s1: SideOperator,
    pub s2: SideOperator,
    pub e1: SideOperator,
    pub f1: SideOperator,
    pub e2: SideOperator,
    pub f2: SideOperator,
}

#[derive(Debug, Clone)]
pub struct MaximalCertificate {
    pub projections: MaximalProjections,
    /// ‖(2E₁−S₁)(2F₁−S₁) + (2F₁−S₁)(2E₁−S₁)‖, max-entry norm.
    pub anticommutator_residual: f64,
    /// (ω((E₁−E₂)²), ω((F₁−F₂)²))
    pub defects: (f64, f64),
}

fn anticommutator_residual(s: &ComplexMatrix, e: &ComplexMatrix, f: &ComplexMatrix) -> f64 {
    let x = &e.scale_real(2.0) - s;
    let y = &f.scale_real(2.0) - s;
    x.anticommutator(&y).max_abs()
}

/// Extracts the anticommuting projection pairs carried by a witness whose
/// half-value is √2.
///
/// With S₁, S₂ the supports of the reduced states and compressions
/// Â = S A S, the projections are E₁ = ½((Â₁ + B̂₁)/√2 + S₁),
/// F₁ = ½((Â₁ − B̂₁)/√2 + S₁), E₂ = ½(Â₂ + S₂), F₂ = ½(B̂₂ + S₂). Each is
/// spectrally rounded to an exact projection.
pub fn maximal_projections(state: &QuantumState, witness: &ChshWitness, tol: &Tolerances) -> Result<MaximalCertificate> {
    check_witness_operators(witness.operators())?;
    let signed = chsh_signed(state, &witness.a1, &witness.b1, &witness.a2, &witness.b2)?;
    // A negative half-sum is turned positive by negating both side-2 operators.
    let (a2, b2) = if signed < 0.0 {
        (witness.a2.local().scale_real(-1.0), witness.b2.local().scale_real(-1.0))
    } else {
        (witness.a2.local().clone(), witness.b2.local().clone())
    };
    if (signed.abs() - SQRT_2).abs() > tol.maximal {
        return Err(Error::Precondition(format!(
            "witness value {:.9} is not within {:.1e} of √2",
            signed.abs(),
            tol.maximal
        )));
    }
    let space = state.space();
    let s1 = support_projection(&partial_trace(state, Side::One))?;
    let s2 = support_projection(&partial_trace(state, Side::Two))?;
    let compress = |s: &ComplexMatrix, m: &ComplexMatrix| s.matmul(m).matmul(s);
    let a1c = compress(&s1, witness.a1.local());
    let b1c = compress(&s1, witness.b1.local());
    let a2c = compress(&s2, &a2);
    let b2c = compress(&s2, &b2);

    let e1 = round_to_projection(&(&(&a1c + &b1c).scale_real(FRAC_1_SQRT_2) + &s1).scale_real(0.5))?;
    let f1 = round_to_projection(&(&(&a1c - &b1c).scale_real(FRAC_1_SQRT_2) + &s1).scale_real(0.5))?;
    let e2 = round_to_projection(&(&a2c + &s2).scale_real(0.5))?;
    let f2 = round_to_projection(&(&b2c + &s2).scale_real(0.5))?;

    let residual = anticommutator_residual(&s1, &e1, &f1);
    let projections = MaximalProjections {
        s1: SideOperator::new(space, Side::One, s1)?,
        s2: SideOperator::new(space, Side::Two, s2)?,
        e1: SideOperator::new(space, Side::One, e1)?,
        f1: SideOperator::new(space, Side::One, f1)?,
        e2: SideOperator::new(space, Side::Two, e2)?,
        f2: SideOperator::new(space, Side::Two, f2)?,
    };
    let defects = (
        epr::epr_defect(state, &projections.e1, &projections.e2)?,
        epr::epr_defect(state, &projections.f1, &projections.f2)?,
    );
    Ok(MaximalCertificate {
        projections,
        anticommutator_residual: residual,
        defects,
    })
}

/// Scales a Hermitian matrix into the unit ball when rounding pushed its
/// spectrum marginally outside.
fn clamp_to_contraction(m: ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = m.hermitian_norm()?;
    Ok(if norm > 1.0 { m.scale_real(1.0 / norm) } else { m })
}

/// Builds the √2 witness from anticommuting projection pairs:
/// A₁, B₁ = ((2E₁−S₁) ± (2F₁−S₁))/√2, A₂ = 2E₂−S₂, B₂ = 2F₂−S₂.
pub fn witness_from_projections(
    state: &QuantumState,
    projections: &MaximalProjections,
    tol: &Tolerances,
) -> Result<ChshWitness> {
    let MaximalProjections { s1, s2, e1, f1, e2, f2 } = projections;
    let checks = [(s1, Side::One, "s1"), (s2, Side::Two, "s2"), (e1, Side::One, "e1"), (f1, Side::One, "f1"), (e2, Side::Two, "e2"), (f2, Side::Two, "f2")];
    for (op, side, name) in checks {
        state::check_space(state, op)?;
        if op.side() != side {
            return Err(Error::SideMismatch(format!("{name} must act on side {side}")));
        }
        if !linalg::validate(StructureKind::Projection, op.local()).ok {
            return Err(Error::Precondition(format!("{name} is not a projection")));
        }
    }
    for (s, op, name) in [(s1, e1, "e1"), (s1, f1, "f1"), (s2, e2, "e2"), (s2, f2, "f2")] {
        let compressed = s.local().matmul(op.local()).matmul(s.local());
        if compressed.max_abs_diff(op.local()) > tol::STRUCT {
            return Err(Error::Precondition(format!("{name} is not dominated by its support projection")));
        }
    }
    let residual = anticommutator_residual(s1.local(), e1.local(), f1.local());
    if residual > tol.maximal {
        return Err(Error::Precondition(format!(
            "(2E₁−S₁) and (2F₁−S₁) do not anticommute (residual {residual:.3e})"
        )));
    }
    let defect_e = epr::epr_defect(state, e1, e2)?;
    let defect_f = epr::epr_defect(state, f1, f2)?;
    if defect_e > tol.epr || defect_f > tol.epr {
        return Err(Error::Precondition(format!(
            "projection pairs are not perfectly correlated (defects {defect_e:.3e}, {defect_f:.3e})"
        )));
    }
    let x = &e1.local().scale_real(2.0) - s1.local();
    let y = &f1.local().scale_real(2.0) - s1.local();
    let a1 = e1.with_local(clamp_to_contraction((&x + &y).scale_real(FRAC_1_SQRT_2))?);
    let b1 = e1.with_local(clamp_to_contraction((&x - &y).scale_real(FRAC_1_SQRT_2))?);
    let a2 = e2.with_local(&e2.local().scale_real(2.0) - s2.local());
    let b2 = e2.with_local(&f2.local().scale_real(2.0) - s2.local());
    let value = chsh_value(state, &a1, &b1, &a2, &b2)?;
    Ok(ChshWitness {
        a1,
        b1,
        a2,
        b2,
        value,
        c: None,
        seed: None,
    })
}

/// Exact maximum of the CHSH half-value for a two-qubit state.
///
/// With Tᵢⱼ = ω(σᵢ ⊗ σⱼ) and m₁ ≥ m₂ the two largest eigenvalues of TᵀT,
/// traceless ±1 observables reach √(m₁ + m₂). Choices involving ±I never
/// exceed 1 and all four equal to I reach exactly 1, so the maximum over
/// all self-adjoint contractions is max(1, √(m₁ + m₂)).
pub fn horodecki_bound(state: &QuantumState) -> Result<f64> {
    let space = state.space();
    if space.d1 != 2 || space.d2 != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: space.total(),
        });
    }
    let paulis = [pauli_x(), pauli_y(), pauli_z()];
    let mut t = [[0.0; 3]; 3];
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            t[i][j] = state::expectation_product(state, si, sj)?.re;
        }
    }
    let mut gram = ComplexMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            gram[(i, j)] = linalg::C64::new((0..3).map(|k| t[k][i] * t[k][j]).sum(), 0.0);
        }
    }
    let spec = linalg::eig_hermitian(&gram)?;
    let top_two = (spec.eigenvalues[1] + spec.eigenvalues[2]).max(0.0);
    Ok(top_two.sqrt().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn on(space: BipartiteSpace, side: Side, m: ComplexMatrix) -> SideOperator {
        SideOperator::new(space, side, m).unwrap()
    }

    fn singlet_optimal_settings() -> [SideOperator; 4] {
        let s = BipartiteSpace::new(2, 2).unwrap();
        let h = FRAC_1_SQRT_2;
        [
            on(s, Side::One, pauli_z()),
            on(s, Side::One, pauli_x()),
            on(s, Side::Two, (&pauli_z() + &pauli_x()).scale_real(-h)),
            on(s, Side::Two, (&pauli_z() - &pauli_x()).scale_real(-h)),
        ]
    }

    #[test]
    fn identities_give_one() {
        let state = sampling::random_mixed_state(BipartiteSpace::new(2, 3).unwrap(), 5);
        let s = state.space();
        let id1 = SideOperator::identity(s, Side::One);
        let id2 = SideOperator::identity(s, Side::Two);
        let v = chsh_value(&state, &id1, &id1, &id2, &id2).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn singlet_reaches_tsirelson_with_textbook_settings() {
        let [a1, b1, a2, b2] = singlet_optimal_settings();
        let v = chsh_value(&singlet_state(), &a1, &b1, &a2, &b2).unwrap();
        assert!((v - SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn chsh_value_rejects_non_contractions() {
        let s = BipartiteSpace::new(2, 2).unwrap();
        let big = on(s, Side::One, ComplexMatrix::diag_real(&[2.0, 0.0]));
        let id2 = SideOperator::identity(s, Side::Two);
        assert!(chsh_value(&singlet_state(), &big, &big, &id2, &id2).is_err());
        let id1 = SideOperator::identity(s, Side::One);
        assert!(matches!(
            chsh_value(&singlet_state(), &id2, &id1, &id2, &id2),
            Err(Error::SideMismatch(_))
        ));
    }

    #[test]
    fn partial_contractions_reproduce_expectations() {
        let space = BipartiteSpace::new(2, 3).unwrap();
        let state = sampling::random_mixed_state(space, 8);
        let a = sampling::random_hermitian(2, 1);
        let b = sampling::random_hermitian(3, 2);
        let direct = state::expectation_product(&state, &a, &b).unwrap().re;
        let via_x = a.matmul(&contract_with_side2(&state, &b)).trace().re;
        let via_y = b.matmul(&contract_with_side1(&state, &a)).trace().re;
        assert!((direct - via_x).abs() < 1e-13);
        assert!((direct - via_y).abs() < 1e-13);
    }

    #[test]
    fn partial_contractions_agree_for_vector_and_density() {
        for (d1, d2) in [(2, 3), (3, 2), (3, 3)] {
            let space = BipartiteSpace::new(d1, d2).unwrap();
            let pure = sampling::random_pure_state(space, (d1 * 10 + d2) as u64);
            let dense = QuantumState::from_density(space, pure.density().clone()).unwrap();
            let a = sampling::random_hermitian(d1, 4);
            let b = sampling::random_hermitian(d2, 5);
            let x = contract_with_side2(&pure, &b).max_abs_diff(&contract_with_side2(&dense, &b));
            let y = contract_with_side1(&pure, &a).max_abs_diff(&contract_with_side1(&dense, &a));
            assert!(x < 1e-13 && y < 1e-13);
        }
    }

    #[test]
    fn optimizer_on_product_state_plateaus_at_one() {
        let space = BipartiteSpace::new(2, 2).unwrap();
        let state = QuantumState::product_basis(space, 0, 0).unwrap();
        let w = chsh_optimize(&state, &SeesawParams::default()).unwrap();
        assert!((w.value - 1.0).abs() < 1e-9, "{}", w.value);
    }

    #[test]
    fn optimizer_on_singlet_reaches_sqrt2() {
        let run = seesaw(&singlet_state(), &SeesawParams::default()).unwrap();
        assert!((run.witness.value - SQRT_2).abs() < 1e-6);
        assert!(run.worst_decrease() <= 1e-12);
        assert_eq!(run.witness.seed, Some(0));
    }

    #[test]
    fn optimizer_on_psi2_matches_oracle() {
        let w = chsh_optimize(&psi2_state(), &SeesawParams::default()).unwrap();
        let bound = horodecki_bound(&psi2_state()).unwrap();
        assert!((bound - 7f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((w.value - bound).abs() < 1e-6, "{} vs {}", w.value, bound);
    }

    #[test]
    fn optimizer_is_reproducible() {
        let params = SeesawParams {
            seed: 7,
            restarts: 6,
            ..SeesawParams::default()
        };
        let a = seesaw(&psi1_state(), &params).unwrap();
        let b = seesaw(&psi1_state(), &params).unwrap();
        assert_eq!(a.witness.value.to_bits(), b.witness.value.to_bits());
        assert_eq!(a.best_restart, b.best_restart);
        assert_eq!(a.witness.a1, b.witness.a1);
    }

    #[test]
    fn horodecki_examples() {
        assert!((horodecki_bound(&singlet_state()).unwrap() - SQRT_2).abs() < 1e-14);
        let space = BipartiteSpace::new(2, 2).unwrap();
        let product = QuantumState::product_basis(space, 0, 1).unwrap();
        assert!((horodecki_bound(&product).unwrap() - 1.0).abs() < 1e-14);
        assert!(horodecki_bound(&psi1_state()).is_err());
    }

    #[test]
    fn psi1_witness_from_pairs() {
        let [e1, f1, e2, f2] = psi1_pairs();
        let w = witness_from_epr(&psi1_state(), &e1, &f1, &e2, &f2, &Tolerances::default()).unwrap();
        let c = w.c.unwrap();
        assert!((c - 1.0 / 18.0).abs() < 1e-15);
        assert!((w.value - (1.0 + c * c).sqrt()).abs() < tol::STRUCT);
    }

    #[test]
    fn witness_from_epr_needs_incommensurable_pairs() {
        let s = BipartiteSpace::new(2, 2).unwrap();
        let e1 = on(s, Side::One, ComplexMatrix::diag_real(&[1.0, 0.0]));
        let e2 = on(s, Side::Two, ComplexMatrix::diag_real(&[1.0, 0.0]));
        let err = witness_from_epr(&psi2_state(), &e1, &e1, &e2, &e2, &Tolerances::default()).unwrap_err();
        match err {
            Error::NotIncommensurable(report) => assert_eq!(report.dispersion1, 0.0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn maximal_round_trip_on_singlet() {
        let [a1, b1, a2, b2] = singlet_optimal_settings();
        let state = singlet_state();
        let value = chsh_value(&state, &a1, &b1, &a2, &b2).unwrap();
        let w = ChshWitness { a1, b1, a2, b2, value, c: None, seed: None };
        let tol = Tolerances::default();
        let cert = maximal_projections(&state, &w, &tol).unwrap();
        assert!(cert.anticommutator_residual <= 1e-12);
        assert!(cert.defects.0 <= 1e-12 && cert.defects.1 <= 1e-12);
        let p = &cert.projections;
        let d = epr::side_commutator_dispersion(&state, &p.e1, &p.f1).unwrap();
        assert!((d - 0.25).abs() < 1e-12);
        let back = witness_from_projections(&state, p, &tol).unwrap();
        assert!((back.value - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn negative_witness_is_normalized() {
        let [a1, b1, a2, b2] = singlet_optimal_settings();
        let state = singlet_state();
        let a2 = a2.with_local(a2.local().scale_real(-1.0));
        let b2 = b2.with_local(b2.local().scale_real(-1.0));
        assert!(chsh_signed(&state, &a1, &b1, &a2, &b2).unwrap() < 0.0);
        let w = ChshWitness { a1, b1, a2, b2, value: SQRT_2, c: None, seed: None };
        let cert = maximal_projections(&state, &w, &Tolerances::default()).unwrap();
        assert!(cert.defects.0 <= 1e-12 && cert.defects.1 <= 1e-12);
    }

    #[test]
    fn non_maximal_witness_is_rejected() {
        // Shrinking side 1 scales the half-value from √2 down to 1.2.
        let t = 1.2 / SQRT_2;
        let [a1, b1, a2, b2] = singlet_optimal_settings();
        let a1 = a1.with_local(a1.local().scale_real(t));
        let b1 = b1.with_local(b1.local().scale_real(t));
        let state = singlet_state();
        let value = chsh_value(&state, &a1, &b1, &a2, &b2).unwrap();
        assert!((value - 1.2).abs() < 1e-12);
        let w = ChshWitness { a1, b1, a2, b2, value, c: None, seed: None };
        assert!(matches!(
            maximal_projections(&state, &w, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn witness_from_projections_rejects_commuting_pairs() {
        let s = BipartiteSpace::new(2, 2).unwrap();
        let e1 = on(s, Side::One, ComplexMatrix::diag_real(&[1.0, 0.0]));
        let e2 = on(s, Side::Two, ComplexMatrix::diag_real(&[1.0, 0.0]));
        let p = MaximalProjections {
            s1: SideOperator::identity(s, Side::One),
            s2: SideOperator::identity(s, Side::Two),
            e1: e1.clone(),
            f1: e1,
            e2: e2.clone(),
            f2: e2,
        };
        assert!(matches!(
            witness_from_projections(&psi2_state(), &p, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));

        let s3 = BipartiteSpace::new(3, 3).unwrap();
        let [e1, f1, e2, f2] = psi1_pairs();
        let p = MaximalProjections {
            s1: SideOperator::identity(s3, Side::One),
            s2: SideOperator::identity(s3, Side::Two),
            e1,
            f1,
            e2,
            f2,
        };
        assert!(matches!(
            witness_from_projections(&psi1_state(), &p, &Tolerances::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn direct_matrix_route_agrees_for_psi1_witness() {
        let [e1, f1, e2, f2] = psi1_pairs();
        let state = psi1_state();
        let w = witness_from_epr(&state, &e1, &f1, &e2, &f2, &Tolerances::default()).unwrap();
        let full = |x: &SideOperator| x.embedded();
        let (a1, b1, a2, b2) = (full(&w.a1), full(&w.b1), full(&w.a2), full(&w.b2));
        let sum = &(&(&a1.matmul(&a2) + &a1.matmul(&b2)) + &b1.matmul(&a2)) - &b1.matmul(&b2);
        let direct = 0.5 * state::expectation(&state, &sum).unwrap().re;
        assert!((direct - w.value).abs() < 1e-12);
    }
}
