//! EPR correlations between commuting observables on the two sides.
//!
//! A state is EPR for a pair (A₁, A₂) when ω((A₁ − A₂)²) = 0, equivalently
//! when the joint distribution of the pair sits on the diagonal. It is EPR
//! for incommensurable pairs when two projection pairs are perfectly
//! correlated while each side's projections fail to commute in the state,
//! i.e. ω(|[E₁, F₁]|²) > 0 and ω(|[E₂, F₂]|²) > 0.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, StructureKind, C64, ZERO};
use crate::state::{self, apply_side, partial_trace, BipartiteSpace, QuantumState, Side, SideOperator};
use crate::tol::{self, Tolerances};

/// Probabilities below this are treated as rounding noise and not reported
/// as atoms.
const ATOM_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

/// Joint distribution of a commuting pair in a state.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    pub atoms: Vec<Atom>,
    pub diagonal_mass: f64,
}

impl JointDistribution {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.p).sum()
    }

    /// ∫ f dμ.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.p * f(a.x, a.y)).sum()
    }
}

/// Outcome of checking the four conditions for incommensurable EPR pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EprPairReport {
    /// ω((E₁ − E₂)²)
    pub defect_e: f64,
    /// ω((F₁ − F₂)²)
    pub defect_f: f64,
    /// ω(|[E₁, F₁]|²)
    pub dispersion1: f64,
    /// ω(|[E₂, F₂]|²)
    pub dispersion2: f64,
    pub verdict: bool,
    pub tol_epr: f64,
}

impl EprPairReport {
    fn new(defect_e: f64, defect_f: f64, dispersion1: f64, dispersion2: f64, tol_epr: f64) -> Self {
        let verdict =
            defect_e <= tol_epr && defect_f <= tol_epr && dispersion1 > tol_epr && dispersion2 > tol_epr;
        Self {
            defect_e,
            defect_f,
            dispersion1,
            dispersion2,
            verdict,
            tol_epr,
        }
    }
}

fn require_side(op: &SideOperator, side: Side, name: &str) -> Result<()> {
    if op.side() != side {
        return Err(Error::SideMismatch(format!(
            "{name} must act on side {side}, found side {}",
            op.side()
        )));
    }
    Ok(())
}

fn require_kind(op: &SideOperator, kind: StructureKind, name: &str) -> Result<()> {
    let v = linalg::validate(kind, op.local());
    if !v.ok {
        return Err(Error::Structure(format!(
            "{name} is not a {kind} (residual {:.3e})",
            v.residual
        )));
    }
    Ok(())
}

/// ω((a₁ − a₂)²) for a₁ on side 1 and a₂ on side 2, clamped at zero.
pub fn epr_defect(state: &QuantumState, a1: &SideOperator, a2: &SideOperator) -> Result<f64> {
    require_side(a1, Side::One, "a1")?;
    require_side(a2, Side::Two, "a2")?;
    require_kind(a1, StructureKind::Hermitian, "a1")?;
    require_kind(a2, StructureKind::Hermitian, "a2")?;
    state::check_space(state, a1)?;
    state::check_space(state, a2)?;
    // (a₁ − a₂)² = a₁² + a₂² − 2 a₁a₂ since the two sides commute.
    let sq1 = state::expectation_side(state, &a1.with_local(a1.local().matmul(a1.local())))?;
    let sq2 = state::expectation_side(state, &a2.with_local(a2.local().matmul(a2.local())))?;
    let cross = state::expectation_product(state, a1.local(), a2.local())?;
    Ok((sq1.re + sq2.re - 2.0 * cross.re).max(0.0))
}

/// Joint distribution of (a₁, a₂) built from their spectral projections.
pub fn joint_distribution(state: &QuantumState, a1: &SideOperator, a2: &SideOperator) -> Result<JointDistribution> {
    require_side(a1, Side::One, "a1")?;
    require_side(a2, Side::Two, "a2")?;
    state::check_space(state, a1)?;
    state::check_space(state, a2)?;
    let left = linalg::eig_hermitian(a1.local())?.clustered_projections(tol::SPECTRAL);
    let right = linalg::eig_hermitian(a2.local())?.clustered_projections(tol::SPECTRAL);
    let mut atoms = Vec::new();
    for (x, p) in &left {
        for (y, q) in &right {
            let prob = state::expectation_product(state, p, q)?.re;
            if prob > ATOM_FLOOR {
                atoms.push(Atom { x: *x, y: *y, p: prob });
            }
        }
    }
    let diagonal_mass = atoms
        .iter()
        .filter(|a| (a.x - a.y).abs() <= tol::SPECTRAL)
        .map(|a| a.p)
        .sum();
    Ok(JointDistribution { atoms, diagonal_mass })
}

/// ω([a, b]* [a, b]) for operators on the full space.
pub fn commutator_dispersion(state: &QuantumState, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let n = state.space().total();
    for m in [a, b] {
        if m.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.dim(),
            });
        }
    }
    let c = a.commutator(b);
    let value = state::expectation(state, &c.adjoint().matmul(&c))?;
    Ok(value.re.max(0.0))
}

/// [`commutator_dispersion`] for side operators, evaluated locally.
/// Operators on opposite sides commute, giving exactly zero.
pub fn side_commutator_dispersion(state: &QuantumState, a: &SideOperator, b: &SideOperator) -> Result<f64> {
    state::check_space(state, a)?;
    state::check_space(state, b)?;
    if a.side() != b.side() {
        return Ok(0.0);
    }
    let c = a.local().commutator(b.local());
    let value = state::expectation_side(state, &a.with_local(c.adjoint().matmul(&c)))?;
    Ok(value.re.max(0.0))
}

/// Checks whether (e₁, e₂) and (f₁, f₂) are perfectly correlated in the
/// state while e₁, f₁ (and e₂, f₂) fail to commute in it.
pub fn verify_incommensurable_epr(
    state: &QuantumState,
    e1: &SideOperator,
    f1: &SideOperator,
    e2: &SideOperator,
    f2: &SideOperator,
    tol: &Tolerances,
) -> Result<EprPairReport> {
    for (op, side, name) in [(e1, Side::One, "e1"), (f1, Side::One, "f1"), (e2, Side::Two, "e2"), (f2, Side::Two, "f2")] {
        require_side(op, side, name)?;
        require_kind(op, StructureKind::Projection, name)?;
    }
    let defect_e = epr_defect(state, e1, e2)?;
    let defect_f = epr_defect(state, f1, f2)?;
    let dispersion1 = side_commutator_dispersion(state, e1, f1)?;
    let dispersion2 = side_commutator_dispersion(state, e2, f2)?;
    Ok(EprPairReport::new(defect_e, defect_f, dispersion1, dispersion2, tol.epr))
}

/// Finds the projection f on the other side with (e ⊗ I)Ψ = (I ⊗ f)Ψ (or
/// the mirrored relation when e acts on side 2).
///
/// In Schmidt coordinates Ψ = Σ sₖ uₖ ⊗ vₖ the only candidate is
/// f = Σₖₗ (sₗ/sₖ) ⟨uₖ|e|uₗ⟩ |vₗ⟩⟨vₖ|, i.e. D·eᵀ·D⁻¹ with D = diag(s); it is
/// zero off the support. The candidate is returned only when it is a
/// projection and actually satisfies the relation, which happens exactly
/// when e commutes with the reduced density on the support.
pub fn epr_partner_projection(state: &QuantumState, e: &SideOperator) -> Result<Option<SideOperator>> {
    state::check_space(state, e)?;
    let psi = state.vector().ok_or(Error::MixedState)?;
    require_kind(e, StructureKind::Projection, "e")?;
    let form = state::schmidt(state)?;
    let space = state.space();
    let (from, to) = match e.side() {
        Side::One => (&form.left, &form.right),
        Side::Two => (&form.right, &form.left),
    };
    let to_dim = space.side_dim(e.side().other());
    let s = &form.coefficients;
    let mut f = ComplexMatrix::zeros(to_dim);
    for k in 0..s.len() {
        let e_uk = e.local().apply(&from[k]);
        for l in 0..s.len() {
            // ⟨u_k| e |u_l⟩ = conj(⟨u_l| e |u_k⟩) for Hermitian e
            let elem = linalg::inner(&from[l], &e_uk).conj();
            if elem == ZERO {
                continue;
            }
            let w = elem * (s[l] / s[k]);
            for a in 0..to_dim {
                for b in 0..to_dim {
                    f[(a, b)] += w * to[l][a] * to[k][b].conj();
                }
            }
        }
    }
    let partner = SideOperator::new(space, e.side().other(), f)?;
    if !linalg::validate(StructureKind::Projection, partner.local()).ok {
        return Ok(None);
    }
    let lhs = apply_side(space, e.side(), e.local(), psi);
    let rhs = apply_side(space, partner.side(), partner.local(), psi);
    let residual = lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((residual <= tol::STRUCT).then_some(partner))
}

/// Block structure of the projections on one side that admit a projection
/// partner in a pure state.
///
/// Those projections are exactly the ones that leave the support invariant
/// and commute with the reduced density there, so on the support they are
/// block diagonal over its eigenspaces. Two such projections can be
/// non-commuting in the state only inside a block of dimension ≥ 2, and
/// (2E − S)(2F − S) can anticommute only if every block has even dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorStructure {
    pub side: Side,
    /// (eigenvalue of the reduced density, eigenspace dimension), descending.
    pub blocks: Vec<(f64, usize)>,
    pub kernel_dim: usize,
}

impl MirrorStructure {
    /// Some pair of mirror projections can have nonzero commutator
    /// dispersion.
    pub fn admits_incommensurable_pairs(&self) -> bool {
        self.blocks.iter().any(|&(_, d)| d >= 2)
    }

    /// Some pair of mirror projections can satisfy the anticommutation
    /// relation on the support.
    pub fn admits_anticommuting_pair(&self) -> bool {
        self.blocks.iter().all(|&(_, d)| d % 2 == 0)
    }
}

pub fn mirror_structure(state: &QuantumState, side: Side) -> Result<MirrorStructure> {
    if !state.is_pure() {
        return Err(Error::MixedState);
    }
    let reduced = partial_trace(state, side);
    let spec = linalg::eig_hermitian(&reduced)?;
    let mut blocks: Vec<(f64, usize)> = spec
        .clustered_projections(tol::SPECTRAL)
        .into_iter()
        .filter(|(x, _)| *x > tol::SUPPORT)
        .map(|(x, p)| (x, p.trace().re.round() as usize))
        .collect();
    blocks.reverse();
    let support: usize = blocks.iter().map(|&(_, d)| d).sum();
    Ok(MirrorStructure {
        side,
        blocks,
        kernel_dim: reduced.dim() - support,
    })
}

/// Draws a random projection that commutes with the reduced density on
/// `side` and vanishes off its support: a random subspace inside each
/// eigenspace. Every such projection has a projection partner.
pub fn sample_mirror_projection<R: Rng>(state: &QuantumState, side: Side, rng: &mut R) -> Result<SideOperator> {
    let space: BipartiteSpace = state.space();
    let reduced = partial_trace(state, side);
    let spec = linalg::eig_hermitian(&reduced)?;
    let dim = reduced.dim();
    let mut projection = ComplexMatrix::zeros(dim);
    let mut k = 0;
    while k < dim {
        let start = k;
        while k + 1 < dim && (spec.eigenvalues[k + 1] - spec.eigenvalues[start]).abs() <= tol::SPECTRAL {
            k += 1;
        }
        k += 1;
        if spec.eigenvalues[start] <= tol::SUPPORT {
            continue;
        }
        let block: Vec<Vec<C64>> = (start..k).map(|c| spec.eigenvectors.column(c)).collect();
        let size = block.len();
        let rank = rng.gen_range(0..=size);
        let mix = crate::sampling::unitary_from(size, rng);
        for r in 0..rank {
            let v: Vec<C64> = (0..dim)
                .map(|i| (0..size).map(|b| block[b][i] * mix[(b, r)]).sum())
                .collect();
            projection = &projection + &ComplexMatrix::outer(&v, &v);
        }
    }
    SideOperator::new(space, side, projection)
}
