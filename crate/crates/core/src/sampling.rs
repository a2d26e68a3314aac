//! Seeded random matrices and states for restarts and property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, ComplexMatrix, C64};
use crate::state::{BipartiteSpace, QuantumState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal_c64<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with independent standard-normal real and imaginary parts.
pub fn ginibre<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| normal_c64(rng)).collect();
    ComplexMatrix::from_entries(dim, data).expect("finite samples")
}

/// (G + G*)/2 for a Ginibre G.
pub fn hermitian_from<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, rng).hermitian_part()
}

pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    hermitian_from(dim, &mut rng(seed))
}

/// Gram–Schmidt on the columns of a Ginibre matrix.
pub fn unitary_from<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for u in &cols {
            let proj = linalg::inner(u, &v);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let n = linalg::vec_norm(&v);
        v.iter_mut().for_each(|x| *x /= n);
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            u[(i, j)] = x;
        }
    }
    u
}

pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    unitary_from(dim, &mut rng(seed))
}

/// Hermitian with spectrum drawn uniformly from [−1, 1].
pub fn contraction_from<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let u = unitary_from(dim, rng);
    let spectrum: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    u.matmul(&ComplexMatrix::diag_real(&spectrum)).matmul(&u.adjoint())
}

pub fn random_contraction(dim: usize, seed: u64) -> ComplexMatrix {
    contraction_from(dim, &mut rng(seed))
}

pub fn pure_state_from<R: Rng>(space: BipartiteSpace, rng: &mut R) -> QuantumState {
    let psi: Vec<C64> = (0..space.total()).map(|_| normal_c64(rng)).collect();
    QuantumState::pure_normalized(space, psi).expect("nonzero sample")
}

pub fn random_pure_state(space: BipartiteSpace, seed: u64) -> QuantumState {
    pure_state_from(space, &mut rng(seed))
}

/// G·G*/tr for a d×rank Ginibre block.
pub fn density_of_rank<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = (0..rank).map(|k| g[(i, k)] * g[(j, k)].conj()).sum();
        }
    }
    let t = m.trace().re;
    m.scale_real(1.0 / t).hermitian_part()
}

pub fn random_density_of_rank(dim: usize, rank: usize, seed: u64) -> ComplexMatrix {
    density_of_rank(dim, rank, &mut rng(seed))
}

/// Full-rank Hilbert–Schmidt random state.
pub fn mixed_state_from<R: Rng>(space: BipartiteSpace, rng: &mut R) -> QuantumState {
    let n = space.total();
    QuantumState::from_density(space, density_of_rank(n, n, rng)).expect("valid density")
}

pub fn random_mixed_state(space: BipartiteSpace, seed: u64) -> QuantumState {
    mixed_state_from(space, &mut rng(seed))
}
