//! Shot-noise simulation of projective measurements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::operator::{same_dim, trace_product, DensityOperator, HermitianOperator};
use crate::spectral::spectral_projectors;

const CLUSTER_TOL: f64 = 1e-9;

/// Sample mean of a batch of shots and its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSummary {
    pub mean: f64,
    pub stderr: f64,
}

/// The Born distribution `{(a, Tr(P(a) rho))}` of one observable, cached for
/// repeated sampling.
#[derive(Debug, Clone)]
pub struct MeasurementSampler {
    outcomes: Vec<f64>,
    probabilities: Vec<f64>,
}

impl MeasurementSampler {
    pub fn new(rho: &DensityOperator, o: &HermitianOperator) -> Result<Self> {
        same_dim(rho.dim(), o.dim())?;
        let family = spectral_projectors(o, CLUSTER_TOL)?;
        let mut probabilities: Vec<f64> = family
            .entries()
            .iter()
            .map(|e| {
                trace_product(e.projector.matrix(), rho.matrix())
                    .re
                    .max(0.0)
            })
            .collect();
        let total: f64 = probabilities.iter().sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::SamplerFailure("Born probabilities vanish".into()));
        }
        probabilities.iter_mut().for_each(|p| *p /= total);
        Ok(Self {
            outcomes: family.values(),
            probabilities,
        })
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Exact mean of the distribution.
    pub fn expectation(&self) -> f64 {
        self.outcomes
            .iter()
            .zip(&self.probabilities)
            .map(|(a, p)| a * p)
            .sum()
    }

    /// Multinomial outcome counts drawn as a chain of conditional binomials.
    pub fn counts<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<Vec<u64>> {
        let mut remaining = shots;
        let mut mass = 1.0;
        let mut counts = Vec::with_capacity(self.outcomes.len());
        for (k, &p) in self.probabilities.iter().enumerate() {
            let c = if k + 1 == self.probabilities.len() {
                remaining
            } else if remaining == 0 || p <= 0.0 {
                0
            } else {
                let q = (p / mass).clamp(0.0, 1.0);
                Binomial::new(remaining, q)
                    .map_err(|e| Error::SamplerFailure(e.to_string()))?
                    .sample(rng)
            };
            counts.push(c);
            remaining -= c;
            mass -= p;
        }
        Ok(counts)
    }

    pub fn sample<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<MeasurementSummary> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        let counts = self.counts(shots, rng)?;
        let n = shots as f64;
        let mean = self
            .outcomes
            .iter()
            .zip(&counts)
            .map(|(a, &c)| a * c as f64)
            .sum::<f64>()
            / n;
        let ss: f64 = self
            .outcomes
            .iter()
            .zip(&counts)
            .map(|(a, &c)| (a - mean).powi(2) * c as f64)
            .sum();
        let stderr = if shots > 1 {
            (ss / (n - 1.0)).sqrt() / n.sqrt()
        } else {
            0.0
        };
        Ok(MeasurementSummary { mean, stderr })
    }
}

/// Measures `o` on `shots` fresh copies of `rho` with a seeded generator.
pub fn simulate_measurements(
    rho: &DensityOperator,
    o: &HermitianOperator,
    shots: u64,
    rng_seed: u64,
) -> Result<MeasurementSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    MeasurementSampler::new(rho, o)?.sample(shots, &mut rng)
}

/// Empirical means of several observables, each measured on its own copies,
/// drawn in order from one seeded stream.
pub fn simulate_moments(
    samplers: &[MeasurementSampler],
    shots: u64,
    rng_seed: u64,
) -> Result<Vec<MeasurementSummary>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    samplers.iter().map(|s| s.sample(shots, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli;

    #[test]
    fn eigenstate_has_no_noise() {
        let rho = DensityOperator::from_pure(&pauli::ket1()).unwrap();
        let s = simulate_measurements(&rho, &pauli::z(), 1000, 7).unwrap();
        assert_eq!(s.mean, -1.0);
        assert_eq!(s.stderr, 0.0);
    }

    #[test]
    fn binomial_statistics() {
        let rho = DensityOperator::maximally_mixed(2);
        let s = simulate_measurements(&rho, &pauli::z(), 100_000, 8).unwrap();
        assert!((s.stderr - 1.0 / 100_000f64.sqrt()).abs() < 1e-4, "{s:?}");
        assert!(s.mean.abs() < 3.0 * s.stderr);
    }

    #[test]
    fn deterministic_given_seed() {
        let rho = DensityOperator::from_pure(&pauli::ket_plus()).unwrap();
        let obs = HermitianOperator::from_real_diagonal(&[0.3, -1.7]);
        let a = simulate_measurements(&rho, &obs, 5000, 42).unwrap();
        let b = simulate_measurements(&rho, &obs, 5000, 42).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        let c = simulate_measurements(&rho, &obs, 5000, 43).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn counts_sum_to_shots() {
        let rho = DensityOperator::maximally_mixed(3);
        let o = HermitianOperator::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let sampler = MeasurementSampler::new(&rho, &o).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = sampler.counts(999, &mut rng).unwrap();
        assert_eq!(c.iter().sum::<u64>(), 999);
        assert!((sampler.expectation() - 2.0).abs() < 1e-14);
        assert!(sampler.sample(0, &mut rng).is_err());
    }
}
