//! Seeded random operators for tests, benchmarks and Monte-Carlo studies.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::operator::{CMatrix, CVector, DensityOperator, HermitianOperator, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Ginibre matrix with standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}

/// `(G + G^dagger) / 2` for a Ginibre `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianOperator {
    HermitianOperator::symmetrized(ginibre(rng, dim))
}

/// Normalized Haar-random state vector.
pub fn pure_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    DensityOperator::from_pure(&pure_vector(rng, dim)).expect("nonzero vector")
}

/// Hilbert-Schmidt random state `G G^dagger / Tr(G G^dagger)`; full rank almost surely.
pub fn density<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityOperator {
    let g = ginibre(rng, dim);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.unscale(tr)).expect("Ginibre state is valid")
}

/// Random state whose spectrum is bounded below by `floor / dim`.
pub fn full_rank_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, floor: f64) -> DensityOperator {
    let rho = density(rng, dim);
    rho.mix(&DensityOperator::maximally_mixed(dim), 1.0 - floor)
        .expect("valid weight")
}
