//! Dense complex linear algebra at desk scale.
//!
//! Everything here works on square [`ComplexMatrix`] values stored row-major.
//! The Hermitian eigensolver is a cyclic complex Jacobi method, which is all
//! the crate needs for sign functions, supports, spectral projections and
//! Schmidt forms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix with row-major entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting bad lengths and
    /// non-finite values.
    pub fn from_entries(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Structure("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Structure("matrix has non-finite entries".into()));
        }
        Ok(Self { dim, data })
    }

    /// Convenience constructor for real matrices given as rows. Panics on
    /// ragged input; meant for literals in code and tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "ragged matrix literal");
            data.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self { dim, data }
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Rank-one projector |v⟩⟨v| (v is used as given, not normalized).
    pub fn outer(v: &[C64], w: &[C64]) -> Self {
        let dim = v.len();
        assert_eq!(dim, w.len());
        let data = v.iter().flat_map(|a| w.iter().map(move |b| a * b.conj())).collect();
        Self { dim, data }
    }

    /// The matrix unit |row⟩⟨col|.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(row, col)] = ONE;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "apply dimension mismatch");
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &self.matmul(other) + &other.matmul(self)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖m − m*‖ in max-entry norm.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                r = r.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        r
    }

    /// (m + m*)/2.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
            }
        }
        out
    }

    /// Operator norm for Hermitian matrices (largest |eigenvalue|).
    pub fn hermitian_norm(&self) -> Result<f64> {
        let spec = eig_hermitian(self)?;
        Ok(spec
            .eigenvalues
            .iter()
            .fold(0.0_f64, |acc, &x| acc.max(x.abs())))
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.data[i * self.dim + j]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Kronecker product with the default dimension cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_with_limit(a, b, tol::MAX_DIM)
}

pub fn kron_with_limit(a: &ComplexMatrix, b: &ComplexMatrix, max_dim: usize) -> Result<ComplexMatrix> {
    let (na, nb) = (a.dim, b.dim);
    let dim = na.checked_mul(nb).ok_or(Error::Size {
        dim: usize::MAX,
        max: max_dim,
    })?;
    if dim > max_dim {
        return Err(Error::Size { dim, max: max_dim });
    }
    let mut out = ComplexMatrix::zeros(dim);
    for i in 0..na {
        for j in 0..na {
            let s = a.data[i * na + j];
            if s == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out.data[(i * nb + k) * dim + j * nb + l] = s * b.data[k * nb + l];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn basis_vector(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[i] = ONE;
    v
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// ⟨v, w⟩, antilinear in the first argument.
pub fn inner(v: &[C64], w: &[C64]) -> C64 {
    v.iter().zip(w).map(|(a, b)| a.conj() * b).sum()
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// U·f(Λ)·U*.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors.dim;
        let u = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &w) in weights.iter().enumerate() {
                    if w != 0.0 {
                        acc += u.data[i * n + k] * u.data[j * n + k].conj() * w;
                    }
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }

    /// Groups eigenvalues closer than `width` (single-linkage on the sorted
    /// spectrum) and returns each cluster's mean value with its spectral
    /// projection.
    pub fn clustered_projections(&self, width: f64) -> Vec<(f64, ComplexMatrix)> {
        let n = self.eigenvalues.len();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for k in 0..n {
            match groups.last_mut() {
                Some(g) if (self.eigenvalues[k] - self.eigenvalues[*g.last().unwrap()]).abs() <= width => {
                    g.push(k)
                }
                _ => groups.push(vec![k]),
            }
        }
        groups
            .into_iter()
            .map(|g| {
                let value = g.iter().map(|&k| self.eigenvalues[k]).sum::<f64>() / g.len() as f64;
                let cols: Vec<Vec<C64>> = g.iter().map(|&k| self.eigenvectors.column(k)).collect();
                (value, projector_onto(&cols, n))
            })
            .collect()
    }
}

/// Σ |v⟩⟨v| over the given orthonormal vectors.
pub fn projector_onto(vectors: &[Vec<C64>], dim: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(dim);
    for v in vectors {
        for i in 0..dim {
            if v[i] == ZERO {
                continue;
            }
            for j in 0..dim {
                p.data[i * dim + j] += v[i] * v[j].conj();
            }
        }
    }
    p
}

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let scale = h.max_abs().max(1.0);
    let residual = h.hermitian_residual();
    if residual > tol::STRUCT * scale {
        return Err(Error::Structure(format!(
            "matrix is not Hermitian (residual {residual:.3e})"
        )));
    }
    let n = h.dim;
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol::JACOBI_OFF_DIAGONAL * a.frobenius();

    let off_norm = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.data[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == tol::JACOBI_MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi eigensolver did not converge in {} sweeps",
                tol::JACOBI_MAX_SWEEPS
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.data[i * n + i].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors.data[i * n + new] = v.data[i * n + old];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating a[p][q].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim;
    let g = a.data[p * n + q];
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let app = a.data[p * n + p].re;
    let aqq = a.data[q * n + q].re;
    // Phase e turns the pair into a real symmetric 2x2 block.
    let e = g / abs_g;
    let zeta = (aqq - app) / (2.0 * abs_g);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let e_bar = e.conj();

    // Columns: A ← A·J with J = [[c, s], [−s ē, c ē]].
    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * c - akq * e_bar * s;
        a.data[k * n + q] = akp * s + akq * e_bar * c;
    }
    // Rows: A ← J*·A.
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = apk * c - aqk * e * s;
        a.data[q * n + k] = apk * s + aqk * e * c;
    }
    for k in 0..n {
        let vkp = v.data[k * n + p];
        let vkq = v.data[k * n + q];
        v.data[k * n + p] = vkp * c - vkq * e_bar * s;
        v.data[k * n + q] = vkp * s + vkq * e_bar * c;
    }
    a.data[p * n + p] = C64::new(app - t * abs_g, 0.0);
    a.data[q * n + q] = C64::new(aqq + t * abs_g, 0.0);
    a.data[p * n + q] = ZERO;
    a.data[q * n + p] = ZERO;
}

/// Hermitian sign function; zero eigenvalues map to +1.
pub fn operator_sign(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(h)?;
    Ok(spec.map(|x| if x >= 0.0 { 1.0 } else { -1.0 }))
}

/// Rounds a nearly-projection Hermitian matrix to an exact projection:
/// eigenvalues at or above ½ become 1, the rest 0.
pub fn round_to_projection(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = eig_hermitian(h)?;
    let n = h.dim;
    let cols: Vec<Vec<C64>> = spec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &x)| x >= 0.5)
        .map(|(k, _)| spec.eigenvectors.column(k))
        .collect();
    Ok(projector_onto(&cols, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Hermitian,
    Projection,
    Contraction,
    PartialIsometry,
}

impl std::str::FromStr for StructureKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hermitian" => Ok(Self::Hermitian),
            "projection" => Ok(Self::Projection),
            "contraction" => Ok(Self::Contraction),
            "partial_isometry" | "partial-isometry" => Ok(Self::PartialIsometry),
            other => Err(format!("unknown operator kind `{other}`")),
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hermitian => "hermitian",
            Self::Projection => "projection",
            Self::Contraction => "contraction",
            Self::PartialIsometry => "partial_isometry",
        })
    }
}

/// Verdict of a structural check along with the largest residual it saw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation {
    pub ok: bool,
    pub residual: f64,
}

pub fn validate(kind: StructureKind, m: &ComplexMatrix) -> Validation {
    let verdict = |residual: f64| Validation {
        ok: residual <= tol::STRUCT,
        residual,
    };
    match kind {
        StructureKind::Hermitian => verdict(m.hermitian_residual()),
        StructureKind::Projection => {
            let herm = m.hermitian_residual();
            let idem = m.matmul(m).max_abs_diff(m);
            verdict(herm.max(idem))
        }
        StructureKind::Contraction => {
            let herm = m.hermitian_residual();
            if herm > tol::STRUCT {
                return verdict(herm);
            }
            match eig_hermitian(m) {
                Ok(spec) => {
                    let excess = spec
                        .eigenvalues
                        .iter()
                        .map(|x| (x.abs() - 1.0).max(0.0))
                        .fold(0.0, f64::max);
                    verdict(herm.max(excess))
                }
                Err(_) => Validation {
                    ok: false,
                    residual: f64::INFINITY,
                },
            }
        }
        StructureKind::PartialIsometry => {
            let p = m.adjoint().matmul(m);
            verdict(p.matmul(&p).max_abs_diff(&p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    fn random_hermitian(dim: usize, entries: &[f64]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim);
        let mut it = entries.iter().cycle();
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = C64::new(*it.next().unwrap(), *it.next().unwrap());
            }
        }
        m.hermitian_part()
    }

    #[test]
    fn kron_identity_and_diagonal() {
        let i6 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)).unwrap();
        assert_eq!(i6, ComplexMatrix::identity(6));
        let d = kron(&ComplexMatrix::diag_real(&[1.0, 0.0]), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(d, ComplexMatrix::diag_real(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_of_rank_one_projections() {
        let p1 = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]);
        let k = kron(&p1, &p1).unwrap();
        assert_eq!(k.dim(), 9);
        for i in 0..9 {
            for j in 0..9 {
                let expected = if (i, j) == (0, 0) { ONE } else { ZERO };
                assert_eq!(k[(i, j)], expected);
            }
        }
    }

    #[test]
    fn kron_rejects_oversized_products() {
        let a = ComplexMatrix::identity(70);
        assert!(matches!(kron(&a, &a), Err(Error::Size { dim: 4900, .. })));
        assert!(kron_with_limit(&a, &ComplexMatrix::identity(2), 100).is_err());
    }

    #[test]
    fn eig_diagonal_and_pauli() {
        let spec = eig_hermitian(&ComplexMatrix::diag_real(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(spec.eigenvalues, vec![1.0, 2.0, 3.0]);
        let spec = eig_hermitian(&pauli_x()).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_of_block_projection_example() {
        // ½[[1,1,0],[1,1,0],[0,0,2]]: characteristic polynomial −λ(λ−1)².
        let f = ComplexMatrix::from_real_rows(&[&[0.5, 0.5, 0.0], &[0.5, 0.5, 0.0], &[0.0, 0.0, 1.0]]);
        let spec = eig_hermitian(&f).unwrap();
        for (got, want) in spec.eigenvalues.iter().zip([0.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-13, "{got} vs {want}");
        }
        assert!(spec.reconstruct().max_abs_diff(&f) < 1e-13);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::Structure(_))));
    }

    #[test]
    fn eig_complex_entries() {
        // Pauli-Y has eigenvalues ±1.
        let mut y = ComplexMatrix::zeros(2);
        y[(0, 1)] = -I;
        y[(1, 0)] = I;
        let spec = eig_hermitian(&y).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!(spec.reconstruct().max_abs_diff(&y) < 1e-14);
    }

    #[test]
    fn sign_examples() {
        let s = operator_sign(&ComplexMatrix::diag_real(&[2.0, -3.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::diag_real(&[1.0, -1.0])) < 1e-15);
        let s = operator_sign(&ComplexMatrix::zeros(2)).unwrap();
        assert_eq!(s, ComplexMatrix::identity(2));
        let s = operator_sign(&pauli_x()).unwrap();
        assert!(s.max_abs_diff(&pauli_x()) < 1e-14);
    }

    #[test]
    fn validate_examples() {
        let v = validate(StructureKind::Projection, &ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]));
        assert!(v.ok);
        assert_eq!(v.residual, 0.0);

        let shift = ComplexMatrix::unit(3, 1, 0);
        assert!(validate(StructureKind::PartialIsometry, &shift).ok);
        assert_eq!(shift.adjoint().matmul(&shift), ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]));

        let v = validate(StructureKind::Contraction, &ComplexMatrix::diag_real(&[1.5, 0.0]));
        assert!(!v.ok);
        assert!((v.residual - 0.5).abs() < 1e-12);

        assert!(!validate(StructureKind::Hermitian, &ComplexMatrix::unit(2, 0, 1)).ok);
        assert!(!validate(StructureKind::Projection, &ComplexMatrix::diag_real(&[0.5, 1.0])).ok);
        assert!(!validate(StructureKind::PartialIsometry, &ComplexMatrix::diag_real(&[0.5, 1.0])).ok);
    }

    #[test]
    fn rounding_restores_idempotence() {
        let noisy = &ComplexMatrix::diag_real(&[1.0 - 1e-7, 1e-7, 0.6]) + &ComplexMatrix::zeros(3);
        let p = round_to_projection(&noisy).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 0.0, 1.0])) < 1e-15);
    }

    #[test]
    fn clustering_merges_twins() {
        let spec = eig_hermitian(&ComplexMatrix::diag_real(&[1.0, 1.0 + 1e-12, -1.0])).unwrap();
        let groups = spec.clustered_projections(tol::SPECTRAL);
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[1].1.trace().re.round(), 2.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn eig_round_trips(dim in 1usize..=64, entries in prop::collection::vec(-1.0f64..1.0, 64)) {
            let h = random_hermitian(dim, &entries);
            let spec = eig_hermitian(&h).unwrap();
            let scale = h.max_abs().max(1.0);
            prop_assert!(spec.reconstruct().max_abs_diff(&h) <= tol::STRUCT * scale);
            let u = &spec.eigenvectors;
            prop_assert!(u.adjoint().matmul(u).max_abs_diff(&ComplexMatrix::identity(dim)) <= tol::STRUCT);
            prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn sign_is_an_involution(dim in 1usize..=12, entries in prop::collection::vec(-1.0f64..1.0, 40)) {
            let s = operator_sign(&random_hermitian(dim, &entries)).unwrap();
            prop_assert!(s.matmul(&s).max_abs_diff(&ComplexMatrix::identity(dim)) <= tol::STRUCT);
            prop_assert!(s.hermitian_residual() <= tol::STRUCT);
        }

        #[test]
        fn kron_mixed_product_and_commuting_embeddings(
            da in 1usize..=4, db in 1usize..=4,
            entries in prop::collection::vec(-1.0f64..1.0, 50),
        ) {
            let a = random_hermitian(da, &entries);
            let c = random_hermitian(da, &entries[7..]);
            let b = random_hermitian(db, &entries[13..]);
            let d = random_hermitian(db, &entries[21..]);
            let lhs = kron(&a, &b).unwrap().matmul(&kron(&c, &d).unwrap());
            let rhs = kron(&a.matmul(&c), &b.matmul(&d)).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) <= tol::STRUCT);

            let left = kron(&a, &ComplexMatrix::identity(db)).unwrap();
            let right = kron(&ComplexMatrix::identity(da), &b).unwrap();
            prop_assert_eq!(left.commutator(&right).max_abs(), 0.0);

            // Associativity is exact: each entry is the same triple product.
            let abc = kron(&kron(&a, &b).unwrap(), &c).unwrap();
            let a_bc = kron(&a, &kron(&b, &c).unwrap()).unwrap();
            prop_assert!(abc.max_abs_diff(&a_bc) <= 1e-15);
        }
    }
}
