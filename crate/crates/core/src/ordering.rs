//! Generalized operator ordering: weighted sums of ordered products of
//! exponentials, raised to the `N`-th power, with Kirkwood-Dirac,
//! Margenau-Hill and Wigner (symmetric, `N -> infinity`) presets.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::operator::{identity, same_dim, CMatrix, HermitianOperator, C64, I, ONE};
use crate::spectral::{spectral_decompose, SpectralDecomposition};

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A permutation of `0..n`, stored as its images: `sigma(j) = self[j]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &k in &images {
            if k >= n || seen[k] {
                return Err(Error::InvalidWeights(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[k] = true;
        }
        Ok(Self(images))
    }

    /// Builds from 1-based images, e.g. `[2, 1]` for the transposition.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidWeights(
                "1-based permutation contains 0".into(),
            ));
        }
        Self::new(images.iter().map(|k| k - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn reversal(n: usize) -> Self {
        Self((0..n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| (k + 1).to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of repetitions `N`, or the symmetric limit `N -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repetitions {
    Finite(u32),
    WignerLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    KirkwoodDirac,
    MargenauHill,
    Wigner,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kd" | "kirkwood-dirac" => Ok(Preset::KirkwoodDirac),
            "mh" | "margenau-hill" => Ok(Preset::MargenauHill),
            "wigner" | "w" => Ok(Preset::Wigner),
            other => Err(Error::InvalidArgument(format!(
                "unknown ordering '{other}'"
            ))),
        }
    }
}

/// The pair `(N, w)` with `w` a complex weight over permutations summing to one.
/// Weights are stored sparsely; absent permutations carry weight zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingSpec {
    n_vars: usize,
    repetitions: Repetitions,
    weights: BTreeMap<Permutation, C64>,
}

impl OrderingSpec {
    pub fn new(
        n_vars: usize,
        repetitions: Repetitions,
        weights: BTreeMap<Permutation, C64>,
    ) -> Result<Self> {
        if n_vars == 0 {
            return Err(Error::InvalidArgument(
                "ordering needs at least one variable".into(),
            ));
        }
        if let Repetitions::Finite(0) = repetitions {
            return Err(Error::InvalidArgument(
                "repetition count must be positive".into(),
            ));
        }
        if let Some(bad) = weights.keys().find(|p| p.len() != n_vars) {
            return Err(Error::InvalidWeights(format!(
                "permutation {bad} does not act on {n_vars} variables"
            )));
        }
        let total: C64 = weights.values().sum();
        if (total - ONE).norm() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            n_vars,
            repetitions,
            weights,
        })
    }

    pub fn preset(kind: Preset, n_vars: usize) -> Result<Self> {
        let mut weights = BTreeMap::new();
        let repetitions = match kind {
            Preset::KirkwoodDirac => {
                weights.insert(Permutation::identity(n_vars), ONE);
                Repetitions::Finite(1)
            }
            Preset::MargenauHill => {
                if n_vars < 2 {
                    return Err(Error::UnsupportedArity {
                        min: 2,
                        got: n_vars,
                    });
                }
                let half = C64::new(0.5, 0.0);
                weights.insert(Permutation::identity(n_vars), half);
                weights.insert(Permutation::reversal(n_vars), half);
                Repetitions::Finite(1)
            }
            Preset::Wigner => {
                weights.insert(Permutation::identity(n_vars), ONE);
                Repetitions::WignerLimit
            }
        };
        Self::new(n_vars, repetitions, weights)
    }

    /// Same weights with a different repetition count.
    pub fn with_repetitions(&self, repetitions: Repetitions) -> Result<Self> {
        Self::new(self.n_vars, repetitions, self.weights.clone())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn repetitions(&self) -> Repetitions {
        self.repetitions
    }

    pub fn weights(&self) -> &BTreeMap<Permutation, C64> {
        &self.weights
    }
}

/// An ordering bound to a fixed list of observables, with their spectral
/// decompositions cached for repeated evaluation over a parameter grid.
#[derive(Debug, Clone)]
pub struct BoundOrdering {
    spec: OrderingSpec,
    observables: Vec<HermitianOperator>,
    spectra: Vec<SpectralDecomposition>,
}

impl BoundOrdering {
    pub fn new(spec: &OrderingSpec, observables: &[HermitianOperator]) -> Result<Self> {
        if observables.len() != spec.n_vars {
            return Err(Error::ArityMismatch {
                expected: spec.n_vars,
                found: observables.len(),
            });
        }
        let dim = observables[0].dim();
        for a in observables {
            same_dim(dim, a.dim())?;
        }
        let spectra = match spec.repetitions {
            Repetitions::Finite(_) => observables
                .iter()
                .map(spectral_decompose)
                .collect::<Result<Vec<_>>>()?,
            Repetitions::WignerLimit => Vec::new(),
        };
        Ok(Self {
            spec: spec.clone(),
            observables: observables.to_vec(),
            spectra,
        })
    }

    pub fn dim(&self) -> usize {
        self.observables[0].dim()
    }

    pub fn spec(&self) -> &OrderingSpec {
        &self.spec
    }

    pub fn observables(&self) -> &[HermitianOperator] {
        &self.observables
    }

    /// `[sum_sigma w(sigma) prod_j exp(s theta_sigma(j) A_sigma(j) / N)]^N`,
    /// or `exp(s sum_j theta_j A_j)` in the Wigner limit.
    pub fn evaluate(&self, theta: &[f64], scale: C64) -> Result<CMatrix> {
        if theta.len() != self.spec.n_vars {
            return Err(Error::ArityMismatch {
                expected: self.spec.n_vars,
                found: theta.len(),
            });
        }
        let dim = self.dim();
        match self.spec.repetitions {
            Repetitions::WignerLimit => {
                let mut sum = CMatrix::zeros(dim, dim);
                for (a, &t) in self.observables.iter().zip(theta) {
                    sum += a.matrix().scale(t);
                }
                let spec = spectral_decompose(&HermitianOperator::symmetrized(sum))?;
                Ok(spec.map(|l| (scale * l).exp()))
            }
            Repetitions::Finite(n) => {
                let inv_n = 1.0 / f64::from(n);
                let factors: Vec<CMatrix> = self
                    .spectra
                    .iter()
                    .zip(theta)
                    .map(|(s, &t)| s.map(|l| (scale * (t * inv_n * l)).exp()))
                    .collect();
                let mut step = CMatrix::zeros(dim, dim);
                for (perm, &w) in &self.spec.weights {
                    let mut prod = identity(dim);
                    for &k in perm.images() {
                        prod *= &factors[k];
                    }
                    step += prod * w;
                }
                Ok(matrix_power(&step, n))
            }
        }
    }
}

fn matrix_power(m: &CMatrix, mut n: u32) -> CMatrix {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    while n > 0 {
        if n & 1 == 1 {
            result = &result * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    result
}

/// The ordering function with real exponents.
pub fn ordering_function(
    spec: &OrderingSpec,
    observables: &[HermitianOperator],
    theta: &[f64],
) -> Result<CMatrix> {
    BoundOrdering::new(spec, observables)?.evaluate(theta, ONE)
}

/// The ordering function with exponents `i theta_j A_j`.
pub fn unitary_ordering_function(
    spec: &OrderingSpec,
    observables: &[HermitianOperator],
    theta: &[f64],
) -> Result<CMatrix> {
    BoundOrdering::new(spec, observables)?.evaluate(theta, I)
}
