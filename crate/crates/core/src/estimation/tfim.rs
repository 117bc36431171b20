//! Transverse-field Ising chain: Hamiltonian, moment observables, thermal
//! states and the high-temperature moment formulas.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{quantum_covariance_matrix, Model};
use crate::error::{Error, Result};
use crate::operator::{kron, trace_product, CMatrix, DensityOperator, HermitianOperator, C64};
use crate::pauli;
use crate::spectral::spectral_decompose;

/// Largest chain handled by dense exact diagonalization.
pub const MAX_SPINS: usize = 10;

fn check_spins(n: usize) -> Result<()> {
    if n > MAX_SPINS {
        return Err(Error::TooLarge {
            n_spins: n,
            max: MAX_SPINS,
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "a chain needs at least 2 spins, got {n}"
        )));
    }
    Ok(())
}

/// `op` acting on each listed site, identity elsewhere.
fn site_product(n: usize, sites: &[usize], op: &CMatrix) -> CMatrix {
    let id = CMatrix::identity(2, 2);
    let mut out = CMatrix::identity(1, 1);
    for k in 0..n {
        out = kron(&out, if sites.contains(&k) { op } else { &id });
    }
    out
}

/// `sum_i Z_i Z_{i+dist}` (wrapping when periodic).
fn zz_sum(n: usize, dist: usize, periodic: bool) -> CMatrix {
    let z = pauli::z().into_matrix();
    let dim = 1 << n;
    let mut out = CMatrix::zeros(dim, dim);
    let last = if periodic { n } else { n.saturating_sub(dist) };
    for i in 0..last {
        out += site_product(n, &[i, (i + dist) % n], &z);
    }
    out
}

fn x_sum(n: usize) -> CMatrix {
    let x = pauli::x().into_matrix();
    let dim = 1 << n;
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..n {
        out += site_product(n, &[i], &x);
    }
    out
}

/// `H = -J sum Z_i Z_{i+1} - h sum X_i`.
pub fn tfim_hamiltonian(
    n_spins: usize,
    j: f64,
    h: f64,
    periodic: bool,
) -> Result<HermitianOperator> {
    check_spins(n_spins)?;
    let m = zz_sum(n_spins, 1, periodic) * C64::new(-j, 0.0) + x_sum(n_spins) * C64::new(-h, 0.0);
    HermitianOperator::new(m)
}

/// Moment observables of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TfimObservable {
    /// Nearest-neighbor correlation `(1/N) sum Z_i Z_{i+1}`.
    O1,
    /// Transverse magnetization `(1/N) sum X_i`.
    O2,
    /// Next-nearest-neighbor correlation `(1/N) sum Z_i Z_{i+2}`.
    O3,
}

impl FromStr for TfimObservable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "O1" => Ok(Self::O1),
            "O2" => Ok(Self::O2),
            "O3" => Ok(Self::O3),
            other => Err(Error::InvalidArgument(format!(
                "unknown TFIM observable `{other}`"
            ))),
        }
    }
}

impl TfimObservable {
    pub fn operator(self, n_spins: usize, periodic: bool) -> Result<HermitianOperator> {
        check_spins(n_spins)?;
        let m = match self {
            Self::O1 => zz_sum(n_spins, 1, periodic),
            Self::O2 => x_sum(n_spins),
            Self::O3 => zz_sum(n_spins, 2, periodic),
        };
        HermitianOperator::new(m / C64::new(n_spins as f64, 0.0))
    }
}

/// `[O1, O2, O3]`.
pub fn tfim_observables(n_spins: usize, periodic: bool) -> Result<Vec<HermitianOperator>> {
    [TfimObservable::O1, TfimObservable::O2, TfimObservable::O3]
        .iter()
        .map(|o| o.operator(n_spins, periodic))
        .collect()
}

/// `exp(-beta H) / Z`, shifted by the ground energy for stability.
pub fn thermal_state(h: &HermitianOperator, beta: f64) -> Result<DensityOperator> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "inverse temperature {beta} must be finite and >= 0"
        )));
    }
    let spec = spectral_decompose(h)?;
    let e0 = spec.min_eigenvalue();
    let z: f64 = spec
        .eigenvalues()
        .iter()
        .map(|e| (-beta * (e - e0)).exp())
        .sum();
    DensityOperator::new(spec.map_real(|e| (-beta * (e - e0)).exp() / z))
}

/// High-temperature approximations of the three moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighTempMoments {
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
}

/// `mu1 = beta J`, `mu2 = beta h`, `mu3 = (beta J)^2 / 2`.
pub fn high_temp_moments(j: f64, h: f64, beta: f64) -> HighTempMoments {
    HighTempMoments {
        mu1: beta * j,
        mu2: beta * h,
        mu3: (beta * j).powi(2) / 2.0,
    }
}

/// How model moments are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MomentVariant {
    /// Exact diagonalization of the thermal state.
    #[default]
    Exact,
    /// Closed-form high-temperature moments with `Sigma = I / N`.
    HighTemp,
}

impl FromStr for MomentVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "high_temp" => Ok(Self::HighTemp),
            other => Err(Error::InvalidArgument(format!(
                "unknown moment variant `{other}`"
            ))),
        }
    }
}

/// Thermal TFIM chain with parameters `(J, h)` at known `beta`.
#[derive(Debug, Clone)]
pub struct TfimModel {
    n_spins: usize,
    beta: f64,
    variant: MomentVariant,
    kinds: Vec<TfimObservable>,
    observables: Vec<HermitianOperator>,
    zz: CMatrix,
    x: CMatrix,
}

impl TfimModel {
    pub fn new(
        n_spins: usize,
        beta: f64,
        periodic: bool,
        kinds: &[TfimObservable],
        variant: MomentVariant,
    ) -> Result<Self> {
        check_spins(n_spins)?;
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "estimation needs beta > 0, got {beta}"
            )));
        }
        if kinds.len() < 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: kinds.len(),
            });
        }
        let observables = kinds
            .iter()
            .map(|k| k.operator(n_spins, periodic))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_spins,
            beta,
            variant,
            kinds: kinds.to_vec(),
            observables,
            zz: zz_sum(n_spins, 1, periodic),
            x: x_sum(n_spins),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn variant(&self) -> MomentVariant {
        self.variant
    }

    pub fn kinds(&self) -> &[TfimObservable] {
        &self.kinds
    }

    pub fn hamiltonian(&self, phi: &[f64]) -> Result<HermitianOperator> {
        let [j, h] = params(phi)?;
        HermitianOperator::new(&self.zz * C64::new(-j, 0.0) + &self.x * C64::new(-h, 0.0))
    }

    fn position(&self, kind: TfimObservable) -> Option<usize> {
        self.kinds.iter().position(|&k| k == kind)
    }
}

fn params(phi: &[f64]) -> Result<[f64; 2]> {
    match phi {
        [j, h] => Ok([*j, *h]),
        _ => Err(Error::ArityMismatch {
            expected: 2,
            found: phi.len(),
        }),
    }
}

impl Model for TfimModel {
    fn param_names(&self) -> Vec<String> {
        vec!["J".into(), "h".into()]
    }

    fn state(&self, phi: &[f64]) -> Result<DensityOperator> {
        thermal_state(&self.hamiltonian(phi)?, self.beta)
    }

    fn observables(&self) -> &[HermitianOperator] {
        &self.observables
    }

    fn moments(&self, phi: &[f64]) -> Result<DVector<f64>> {
        match self.variant {
            MomentVariant::Exact => {
                let rho = self.state(phi)?;
                Ok(DVector::from_iterator(
                    self.observables.len(),
                    self.observables
                        .iter()
                        .map(|o| trace_product(o.matrix(), rho.matrix()).re),
                ))
            }
            MomentVariant::HighTemp => {
                let [j, h] = params(phi)?;
                let m = high_temp_moments(j, h, self.beta);
                Ok(DVector::from_iterator(
                    self.kinds.len(),
                    self.kinds.iter().map(|k| match k {
                        TfimObservable::O1 => m.mu1,
                        TfimObservable::O2 => m.mu2,
                        TfimObservable::O3 => m.mu3,
                    }),
                ))
            }
        }
    }

    fn jacobian(&self, phi: &[f64], step: f64) -> Result<DMatrix<f64>> {
        match self.variant {
            MomentVariant::Exact => super::numerical_jacobian(self, phi, step),
            MomentVariant::HighTemp => {
                let [j, _] = params(phi)?;
                let b = self.beta;
                let mut d = DMatrix::zeros(self.kinds.len(), 2);
                for (r, k) in self.kinds.iter().enumerate() {
                    match k {
                        TfimObservable::O1 => d[(r, 0)] = b,
                        TfimObservable::O2 => d[(r, 1)] = b,
                        TfimObservable::O3 => d[(r, 0)] = b * b * j,
                    }
                }
                Ok(d)
            }
        }
    }

    fn covariance(&self, phi: &[f64]) -> Result<DMatrix<f64>> {
        match self.variant {
            MomentVariant::Exact => quantum_covariance_matrix(&self.state(phi)?, &self.observables),
            MomentVariant::HighTemp => {
                let l = self.kinds.len();
                Ok(DMatrix::identity(l, l) / self.n_spins as f64)
            }
        }
    }

    /// `(mu1 / beta, mu2 / beta)`, falling back to `(1, 1)` for a missing moment.
    fn initial_guess(&self, empirical: &[f64]) -> Vec<f64> {
        let pick = |k| self.position(k).map_or(1.0, |i| empirical[i] / self.beta);
        vec![pick(TfimObservable::O1), pick(TfimObservable::O2)]
    }
}
