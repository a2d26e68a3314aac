//! Bipartite states, local observables and their reductions.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{self, kron, ComplexMatrix, C64, ZERO};
use crate::tol;

/// Dimensions of the two commuting tensor factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteSpace {
    pub d1: usize,
    pub d2: usize,
}

impl BipartiteSpace {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::Structure("factor dimensions must be positive".into()));
        }
        let total = d1.saturating_mul(d2);
        if total > tol::MAX_SPACE_DIM {
            return Err(Error::Size {
                dim: total,
                max: tol::MAX_SPACE_DIM,
            });
        }
        Ok(Self { d1, d2 })
    }

    pub fn total(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn side_dim(&self, side: Side) -> usize {
        match side {
            Side::One => self.d1,
            Side::Two => self.d2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    One,
    Two,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::One => Side::Two,
            Side::Two => Side::One,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Side::One),
            2 => Some(Side::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::One => "1",
            Side::Two => "2",
        })
    }
}

/// An operator living in one tensor factor.
///
/// Only the local matrix is stored; [`SideOperator::embedded`] builds
/// `local ⊗ I` or `I ⊗ local` on request. Everything that evaluates states
/// against side operators works from the local matrices directly.
#[derive(Debug, Clone, PartialEq)]
pub struct SideOperator {
    side: Side,
    local: ComplexMatrix,
    space: BipartiteSpace,
}

impl SideOperator {
    pub fn new(space: BipartiteSpace, side: Side, local: ComplexMatrix) -> Result<Self> {
        let expected = space.side_dim(side);
        if local.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: local.dim(),
            });
        }
        Ok(Self { side, local, space })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn local(&self) -> &ComplexMatrix {
        &self.local
    }

    pub fn space(&self) -> BipartiteSpace {
        self.space
    }

    pub fn embedded(&self) -> ComplexMatrix {
        let (id, local) = (
            ComplexMatrix::identity(self.space.side_dim(self.side.other())),
            &self.local,
        );
        match self.side {
            Side::One => kron(local, &id),
            Side::Two => kron(&id, local),
        }
        .expect("space dimensions were checked on construction")
    }

    /// Same side, new local matrix.
    pub fn with_local(&self, local: ComplexMatrix) -> Self {
        assert_eq!(local.dim(), self.local.dim());
        Self {
            side: self.side,
            local,
            space: self.space,
        }
    }

    pub fn identity(space: BipartiteSpace, side: Side) -> Self {
        Self {
            side,
            local: ComplexMatrix::identity(space.side_dim(side)),
            space,
        }
    }
}

/// A normal state on the bipartite space.
///
/// Mixed states hold their density operator. Vector states hold the vector
/// and evaluate expectations as ⟨ψ, Xψ⟩, which is independent of the global
/// phase; their density |ψ⟩⟨ψ| is only built if [`QuantumState::density`]
/// is called.
#[derive(Debug, Clone)]
pub struct QuantumState {
    space: BipartiteSpace,
    rho: OnceLock<ComplexMatrix>,
    vector: Option<Vec<C64>>,
}

impl QuantumState {
    /// Vector state. The vector must already be normalized.
    pub fn pure(space: BipartiteSpace, psi: Vec<C64>) -> Result<Self> {
        if psi.len() != space.total() {
            return Err(Error::DimensionMismatch {
                expected: space.total(),
                got: psi.len(),
            });
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Structure("state vector has non-finite entries".into()));
        }
        let norm = linalg::vec_norm(&psi);
        if (norm - 1.0).abs() > tol::STRUCT {
            return Err(Error::Structure(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(Self {
            space,
            rho: OnceLock::new(),
            vector: Some(psi),
        })
    }

    /// Normalizes `psi` first.
    pub fn pure_normalized(space: BipartiteSpace, mut psi: Vec<C64>) -> Result<Self> {
        let norm = linalg::vec_norm(&psi);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        psi.iter_mut().for_each(|z| *z /= norm);
        Self::pure(space, psi)
    }

    /// Product of basis vectors e_i ⊗ e_j.
    pub fn product_basis(space: BipartiteSpace, i: usize, j: usize) -> Result<Self> {
        if i >= space.d1 || j >= space.d2 {
            return Err(Error::Structure(format!(
                "basis index ({i}, {j}) outside {}x{}",
                space.d1, space.d2
            )));
        }
        Self::pure(
            space,
            linalg::kron_vec(&linalg::basis_vector(space.d1, i), &linalg::basis_vector(space.d2, j)),
        )
    }

    pub fn from_density(space: BipartiteSpace, rho: ComplexMatrix) -> Result<Self> {
        if rho.dim() != space.total() {
            return Err(Error::DimensionMismatch {
                expected: space.total(),
                got: rho.dim(),
            });
        }
        if !rho.is_finite() {
            return Err(Error::Structure("density has non-finite entries".into()));
        }
        let herm = rho.hermitian_residual();
        if herm > tol::STRUCT {
            return Err(Error::Structure(format!("density is not Hermitian (residual {herm:.3e})")));
        }
        let trace = rho.trace();
        if (trace - linalg::ONE).norm() > tol::STRUCT {
            return Err(Error::Structure(format!("density has trace {trace}, expected 1")));
        }
        let spec = linalg::eig_hermitian(&rho)?;
        if spec.eigenvalues[0] < -tol::STRUCT {
            return Err(Error::Structure(format!(
                "density is not positive (eigenvalue {:.3e})",
                spec.eigenvalues[0]
            )));
        }
        Ok(Self {
            space,
            rho: OnceLock::from(rho.hermitian_part()),
            vector: None,
        })
    }

    pub fn maximally_mixed(space: BipartiteSpace) -> Self {
        let n = space.total();
        Self {
            space,
            rho: OnceLock::from(ComplexMatrix::identity(n).scale_real(1.0 / n as f64)),
            vector: None,
        }
    }

    pub fn space(&self) -> BipartiteSpace {
        self.space
    }

    pub fn density(&self) -> &ComplexMatrix {
        self.rho.get_or_init(|| {
            let psi = self.vector.as_ref().expect("mixed states always carry a density");
            ComplexMatrix::outer(psi, psi)
        })
    }

    pub fn vector(&self) -> Option<&[C64]> {
        self.vector.as_deref()
    }

    pub fn is_pure(&self) -> bool {
        self.vector.is_some()
    }
}

impl QuantumState {
    /// The same state with the two tensor factors exchanged.
    pub fn swapped(&self) -> QuantumState {
        let BipartiteSpace { d1, d2 } = self.space;
        let n = d1 * d2;
        let swap = |idx: usize| (idx % d2) * d1 + idx / d2;
        let space = BipartiteSpace { d1: d2, d2: d1 };
        if let Some(psi) = &self.vector {
            let mut out = vec![ZERO; n];
            for (idx, &z) in psi.iter().enumerate() {
                out[swap(idx)] = z;
            }
            return QuantumState {
                space,
                rho: OnceLock::new(),
                vector: Some(out),
            };
        }
        let old = self.density();
        let mut rho = ComplexMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                rho[(swap(r), swap(c))] = old[(r, c)];
            }
        }
        QuantumState {
            space,
            rho: OnceLock::from(rho),
            vector: None,
        }
    }
}

/// (local ⊗ I)ψ or (I ⊗ local)ψ.
pub fn apply_side(space: BipartiteSpace, side: Side, local: &ComplexMatrix, psi: &[C64]) -> Vec<C64> {
    let BipartiteSpace { d1, d2 } = space;
    let mut out = vec![ZERO; d1 * d2];
    match side {
        Side::One => {
            for i in 0..d1 {
                for k in 0..d1 {
                    let a = local[(i, k)];
                    if a == ZERO {
                        continue;
                    }
                    for j in 0..d2 {
                        out[i * d2 + j] += a * psi[k * d2 + j];
                    }
                }
            }
        }
        Side::Two => {
            for i in 0..d1 {
                for j in 0..d2 {
                    out[i * d2 + j] = (0..d2).map(|l| local[(j, l)] * psi[i * d2 + l]).sum();
                }
            }
        }
    }
    out
}

/// ω(x) = tr(ρ x).
pub fn expectation(state: &QuantumState, x: &ComplexMatrix) -> Result<C64> {
    let n = state.space.total();
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.dim(),
        });
    }
    if let Some(psi) = state.vector() {
        return Ok(linalg::inner(psi, &x.apply(psi)));
    }
    let (r, m) = (state.density().entries(), x.entries());
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += r[i * n + j] * m[j * n + i];
        }
    }
    Ok(acc)
}

/// ω(left ⊗ right) computed from the local factors, without forming the
/// Kronecker product.
pub fn expectation_product(state: &QuantumState, left: &ComplexMatrix, right: &ComplexMatrix) -> Result<C64> {
    let space = state.space;
    let BipartiteSpace { d1, d2 } = space;
    if left.dim() != d1 {
        return Err(Error::DimensionMismatch {
            expected: d1,
            got: left.dim(),
        });
    }
    if right.dim() != d2 {
        return Err(Error::DimensionMismatch {
            expected: d2,
            got: right.dim(),
        });
    }
    if let Some(psi) = state.vector() {
        let w = apply_side(space, Side::Two, right, &apply_side(space, Side::One, left, psi));
        return Ok(linalg::inner(psi, &w));
    }
    Ok(density_product_expectation(state.density(), space, left, right))
}

/// tr(ρ (L⊗R)) = Σ ρ[(i j),(k l)] L[k,i] R[l,j]
fn density_product_expectation(
    rho: &ComplexMatrix,
    space: BipartiteSpace,
    left: &ComplexMatrix,
    right: &ComplexMatrix,
) -> C64 {
    let BipartiteSpace { d1, d2 } = space;
    let n = d1 * d2;
    let r = rho.entries();
    let (l, m) = (left.entries(), right.entries());
    let mut acc = ZERO;
    for i in 0..d1 {
        for k in 0..d1 {
            let lki = l[k * d1 + i];
            if lki == ZERO {
                continue;
            }
            let mut inner = ZERO;
            for j in 0..d2 {
                let row = &r[(i * d2 + j) * n + k * d2..(i * d2 + j) * n + k * d2 + d2];
                for (q, &rho) in row.iter().enumerate() {
                    inner += rho * m[q * d2 + j];
                }
            }
            acc += lki * inner;
        }
    }
    acc
}

/// ω of a single side operator.
pub fn expectation_side(state: &QuantumState, op: &SideOperator) -> Result<C64> {
    check_space(state, op)?;
    let id1 = ComplexMatrix::identity(state.space.d1);
    let id2 = ComplexMatrix::identity(state.space.d2);
    match op.side {
        Side::One => expectation_product(state, &op.local, &id2),
        Side::Two => expectation_product(state, &id1, &op.local),
    }
}

/// ω(a·b) for side operators on opposite sides (or either side, in which
/// case the product is formed locally).
pub fn expectation_pair(state: &QuantumState, a: &SideOperator, b: &SideOperator) -> Result<C64> {
    check_space(state, a)?;
    check_space(state, b)?;
    match (a.side, b.side) {
        (Side::One, Side::Two) => expectation_product(state, &a.local, &b.local),
        (Side::Two, Side::One) => expectation_product(state, &b.local, &a.local),
        _ => expectation_side(state, &a.with_local(a.local.matmul(&b.local))),
    }
}

pub(crate) fn check_space(state: &QuantumState, op: &SideOperator) -> Result<()> {
    if op.space != state.space {
        return Err(Error::DimensionMismatch {
            expected: state.space.total(),
            got: op.space.total(),
        });
    }
    Ok(())
}

/// Reduced density on the kept side.
pub fn partial_trace(state: &QuantumState, keep: Side) -> ComplexMatrix {
    let BipartiteSpace { d1, d2 } = state.space;
    if let Some(psi) = state.vector() {
        // ρ₁ = C·C*, ρ₂ = (C*·C)ᵀ for the coefficient matrix C[i][j] = ψ[i·d2 + j]
        return match keep {
            Side::One => {
                let mut out = ComplexMatrix::zeros(d1);
                for i in 0..d1 {
                    for k in 0..d1 {
                        out[(i, k)] = (0..d2).map(|j| psi[i * d2 + j] * psi[k * d2 + j].conj()).sum();
                    }
                }
                out
            }
            Side::Two => {
                let mut out = ComplexMatrix::zeros(d2);
                for j in 0..d2 {
                    for l in 0..d2 {
                        out[(j, l)] = (0..d1).map(|i| psi[i * d2 + j] * psi[i * d2 + l].conj()).sum();
                    }
                }
                out
            }
        };
    }
    let n = d1 * d2;
    let r = state.density().entries();
    match keep {
        Side::One => {
            let mut out = ComplexMatrix::zeros(d1);
            for i in 0..d1 {
                for k in 0..d1 {
                    out[(i, k)] = (0..d2).map(|j| r[(i * d2 + j) * n + k * d2 + j]).sum();
                }
            }
            out
        }
        Side::Two => {
            let mut out = ComplexMatrix::zeros(d2);
            for j in 0..d2 {
                for l in 0..d2 {
                    out[(j, l)] = (0..d1).map(|i| r[(i * d2 + j) * n + i * d2 + l]).sum();
                }
            }
            out
        }
    }
}

/// Projection onto the eigenvectors of `density` with eigenvalue above the
/// support cutoff.
pub fn support_projection(density: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = linalg::eig_hermitian(density)?;
    let cols: Vec<Vec<C64>> = spec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > tol::SUPPORT)
        .map(|(k, _)| spec.eigenvectors.column(k))
        .collect();
    Ok(linalg::projector_onto(&cols, density.dim()))
}

/// Ψ = Σₖ sₖ uₖ ⊗ vₖ with s nonincreasing and positive.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
}

impl SchmidtForm {
    pub fn reconstruct(&self) -> Vec<C64> {
        let n = self.left[0].len() * self.right[0].len();
        let mut psi = vec![ZERO; n];
        for ((s, u), v) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for (acc, z) in psi.iter_mut().zip(linalg::kron_vec(u, v)) {
                *acc += z * s;
            }
        }
        psi
    }
}

/// Schmidt decomposition of a pure state, via the eigen-decomposition of
/// C·C* where C is the d1×d2 coefficient matrix.
pub fn schmidt(state: &QuantumState) -> Result<SchmidtForm> {
    let psi = state.vector().ok_or(Error::MixedState)?;
    let BipartiteSpace { d1, d2 } = state.space;
    let coeff = |i: usize, j: usize| psi[i * d2 + j];
    let mut gram = ComplexMatrix::zeros(d1);
    for i in 0..d1 {
        for k in 0..d1 {
            gram[(i, k)] = (0..d2).map(|j| coeff(i, j) * coeff(k, j).conj()).sum();
        }
    }
    let spec = linalg::eig_hermitian(&gram)?;
    let mut coefficients = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in (0..d1).rev() {
        let lambda = spec.eigenvalues[k];
        if lambda <= tol::SUPPORT {
            continue;
        }
        let s = lambda.sqrt();
        let u = spec.eigenvectors.column(k);
        // v = Cᵀ ū / s
        let v: Vec<C64> = (0..d2)
            .map(|j| (0..d1).map(|i| coeff(i, j) * u[i].conj()).sum::<C64>() / s)
            .collect();
        coefficients.push(s);
        left.push(u);
        right.push(v);
    }
    Ok(SchmidtForm {
        coefficients,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::*;
    use proptest::prelude::*;

    #[test]
    fn normalization_and_psi0_expectation() {
        let psi2 = psi2_state();
        let one = expectation(&psi2, &ComplexMatrix::identity(4)).unwrap();
        assert!((one.re - 1.0).abs() < 1e-15 && one.im.abs() < 1e-15);

        let (a, _) = psi0_operators();
        let psi0 = psi0_state();
        let v = expectation(&psi0, &a).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn psi1_first_projection_expectation() {
        let psi1 = psi1_state();
        let e1 = kron(&p1(), &ComplexMatrix::identity(3)).unwrap();
        let v = expectation(&psi1, &e1).unwrap();
        assert!((v.re - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_wrong_dimension() {
        let err = expectation(&psi1_state(), &ComplexMatrix::identity(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 9, got: 3 }));
    }

    #[test]
    fn partial_traces() {
        let r = partial_trace(&psi2_state(), Side::One);
        assert!(r.max_abs_diff(&ComplexMatrix::diag_real(&[0.25, 0.75])) < 1e-15);

        let space = BipartiteSpace::new(3, 3).unwrap();
        let prod = QuantumState::product_basis(space, 0, 0).unwrap();
        let r = partial_trace(&prod, Side::Two);
        assert_eq!(r, ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]));

        let r = partial_trace(&psi1_state(), Side::One);
        assert!(r.max_abs_diff(&ComplexMatrix::diag_real(&[1.0 / 9.0, 1.0 / 9.0, 7.0 / 9.0])) < 1e-15);
    }

    #[test]
    fn supports() {
        let s = support_projection(&ComplexMatrix::diag_real(&[0.5, 0.5, 0.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 1.0, 0.0])) < 1e-15);
        let s = support_projection(&ComplexMatrix::diag_real(&[0.2, 0.3, 0.5])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let s = support_projection(&partial_trace(&psi2_state(), Side::One)).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn schmidt_examples() {
        let form = schmidt(&psi2_state()).unwrap();
        assert_eq!(form.coefficients.len(), 2);
        assert!((form.coefficients[0] - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert!((form.coefficients[1] - 0.5).abs() < 1e-14);

        let space = BipartiteSpace::new(2, 2).unwrap();
        let form = schmidt(&QuantumState::product_basis(space, 0, 1).unwrap()).unwrap();
        assert_eq!(form.coefficients.len(), 1);
        assert!((form.coefficients[0] - 1.0).abs() < 1e-15);

        let form = schmidt(&psi1_state()).unwrap();
        let want = [7f64.sqrt() / 3.0, 1.0 / 3.0, 1.0 / 3.0];
        for (got, want) in form.coefficients.iter().zip(want) {
            assert!((got - want).abs() < 1e-14);
        }
        let psi = psi1_state();
        let back = form.reconstruct();
        for (a, b) in back.iter().zip(psi.vector().unwrap()) {
            assert!((a - b).norm() < tol::STRUCT);
        }
    }

    #[test]
    fn schmidt_rejects_mixed_states() {
        let mixed = QuantumState::maximally_mixed(BipartiteSpace::new(2, 2).unwrap());
        assert!(matches!(schmidt(&mixed), Err(Error::MixedState)));
    }

    #[test]
    fn density_validation() {
        let space = BipartiteSpace::new(1, 2).unwrap();
        assert!(QuantumState::from_density(space, ComplexMatrix::diag_real(&[1.5, -0.5])).is_err());
        assert!(QuantumState::from_density(space, ComplexMatrix::diag_real(&[0.5, 0.6])).is_err());
        assert!(QuantumState::from_density(space, ComplexMatrix::diag_real(&[0.25, 0.75])).is_ok());
        assert!(QuantumState::pure(space, vec![linalg::ONE, linalg::ONE]).is_err());
        assert!(BipartiteSpace::new(200, 200).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn pure_reductions_share_spectra(d1 in 1usize..=6, d2 in 1usize..=6, seed in any::<u64>()) {
            let space = BipartiteSpace::new(d1, d2).unwrap();
            let state = random_pure_state(space, seed);
            let s1 = linalg::eig_hermitian(&partial_trace(&state, Side::One)).unwrap();
            let s2 = linalg::eig_hermitian(&partial_trace(&state, Side::Two)).unwrap();
            let nz = |v: &[f64]| -> Vec<f64> { v.iter().rev().copied().filter(|&x| x > 1e-9).collect() };
            let (a, b) = (nz(&s1.eigenvalues), nz(&s2.eigenvalues));
            prop_assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= tol::STRUCT);
            }
        }

        #[test]
        fn local_expectation_matches_reduced_density(d1 in 1usize..=8, d2 in 1usize..=8, seed in any::<u64>()) {
            let space = BipartiteSpace::new(d1, d2).unwrap();
            let state = random_mixed_state(space, seed);
            let a = random_hermitian(d1, seed ^ 0x5555);
            let full = expectation(&state, &kron(&a, &ComplexMatrix::identity(d2)).unwrap()).unwrap();
            let reduced = partial_trace(&state, Side::One).matmul(&a).trace();
            prop_assert!((full - reduced).norm() <= tol::STRUCT);
            let b = random_hermitian(d2, seed ^ 0xaaaa);
            let via_product = expectation_product(&state, &a, &b).unwrap();
            let via_full = expectation(&state, &kron(&a, &b).unwrap()).unwrap();
            prop_assert!((via_product - via_full).norm() <= tol::STRUCT);
        }

        #[test]
        fn vector_and_density_routes_agree(d1 in 1usize..=5, d2 in 1usize..=5, seed in any::<u64>()) {
            let space = BipartiteSpace::new(d1, d2).unwrap();
            let pure = random_pure_state(space, seed);
            let dense = QuantumState::from_density(space, pure.density().clone()).unwrap();
            let a = random_hermitian(d1, seed ^ 3);
            let b = random_hermitian(d2, seed ^ 4);
            let x = random_hermitian(d1 * d2, seed ^ 5);
            let via_vector = expectation_product(&pure, &a, &b).unwrap();
            let via_density = expectation_product(&dense, &a, &b).unwrap();
            prop_assert!((via_vector - via_density).norm() <= tol::STRUCT);
            let full_v = expectation(&pure, &x).unwrap();
            let full_d = expectation(&dense, &x).unwrap();
            prop_assert!((full_v - full_d).norm() <= tol::STRUCT);
            for side in [Side::One, Side::Two] {
                let r = partial_trace(&pure, side).max_abs_diff(&partial_trace(&dense, side));
                prop_assert!(r <= tol::STRUCT);
            }
            let sw = pure.swapped().density().max_abs_diff(dense.swapped().density());
            prop_assert!(sw <= tol::STRUCT);
        }

        #[test]
        fn support_fixes_density(d in 1usize..=6, rank in 1usize..=6, seed in any::<u64>()) {
            let rho = random_density_of_rank(d, rank.min(d), seed);
            let s = support_projection(&rho).unwrap();
            prop_assert!(s.matmul(&rho).max_abs_diff(&rho) <= 1e3 * tol::SUPPORT);
            prop_assert!(linalg::validate(linalg::StructureKind::Projection, &s).ok);
        }
    }
}
