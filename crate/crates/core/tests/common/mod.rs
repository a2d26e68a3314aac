//! Plain dense arithmetic used as an oracle by the integration tests. It
//! shares nothing with the library beyond the complex number type.

#![allow(dead_code)]

use epr_bell::{ComplexMatrix, C64};

pub type Dense = Vec<Vec<C64>>;

pub fn dense(m: &ComplexMatrix) -> Dense {
    let d = m.dim();
    (0..d).map(|i| (0..d).map(|j| m[(i, j)]).collect()).collect()
}

pub fn identity(d: usize) -> Dense {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }).collect())
        .collect()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![C64::new(0.0, 0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn add(a: &Dense, b: &Dense, s: f64) -> Dense {
    a.iter()
        .zip(b)
        .map(|(r, q)| r.iter().zip(q).map(|(x, y)| x + y * s).collect())
        .collect()
}

/// ⟨ψ, Xψ⟩
pub fn vector_expectation(psi: &[C64], x: &Dense) -> C64 {
    let n = psi.len();
    (0..n)
        .map(|i| psi[i].conj() * (0..n).map(|j| x[i][j] * psi[j]).sum::<C64>())
        .sum()
}

/// tr(ρX)
pub fn trace_product(rho: &Dense, x: &Dense) -> C64 {
    let n = rho.len();
    (0..n).map(|i| (0..n).map(|j| rho[i][j] * x[j][i]).sum::<C64>()).sum()
}

/// ½ ω(A₁A₂ + A₁B₂ + B₁A₂ − B₁B₂) with the operators given locally.
pub fn chsh_oracle(rho: &Dense, a1: &Dense, b1: &Dense, a2: &Dense, b2: &Dense) -> f64 {
    let (i1, i2) = (identity(a1.len()), identity(a2.len()));
    let (a1, b1) = (kron(a1, &i2), kron(b1, &i2));
    let (a2, b2) = (kron(&i1, a2), kron(&i1, b2));
    let sum = add(&add(&mul(&a1, &a2), &mul(&a1, &b2), 1.0), &add(&mul(&b1, &a2), &mul(&b1, &b2), -1.0), 1.0);
    0.5 * trace_product(rho, &sum).re
}

pub fn outer(psi: &[C64]) -> Dense {
    psi.iter().map(|a| psi.iter().map(|b| a * b.conj()).collect()).collect()
}
