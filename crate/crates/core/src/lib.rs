//! Quantum statistical functions on finite-dimensional dense operators.
//!
//! The crate covers moment- and characteristic-generating functions of
//! observables in a state, their multivariable versions under a chosen
//! operator ordering, post-selected (conditional) variants and weak values,
//! Kirkwood-Dirac and Margenau-Hill quasiprobability tables, discrete Wigner
//! functions for odd dimensions, geometric-mean and Chernoff functionals,
//! and moment-matching estimation of Hamiltonian parameters.
//!
//! All expectation values `<Psi|(X (x) 1)|Psi>` over the canonical
//! purification are evaluated as `Tr(X rho)`; the purified vector is never
//! materialized.

pub mod error;
pub mod estimation;
pub mod geo;
pub mod io;
pub mod operator;
pub mod ordering;
pub mod pauli;
pub mod quasiprob;
pub mod random;
pub mod spectral;
pub mod statfuncs;
pub mod wigner;

pub use error::{Error, Result};
pub use estimation::{
    EstimationOptions, EstimationResult, Model, MomentVariant, TfimModel, TfimObservable,
};
pub use geo::PositiveOperator;
pub use operator::{
    canonical_amplitude, make_density, CMatrix, CVector, DensityOperator, HermitianOperator,
    PovmElement, Tolerances, C64,
};
pub use ordering::{OrderingSpec, Permutation, Preset, Repetitions};
pub use quasiprob::{BochnerReport, BochnerVerdict, QuasiProbTable};
pub use spectral::{MatrixFunction, ProjectorFamily, SpectralDecomposition};
pub use wigner::{PhasePoint, WignerTable};
