//! JSON run configuration and result for a TFIM estimation experiment.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::{
    qgmm_estimate, qmm_solve, simulate_moments, EstimationOptions, EstimationResult,
    MeasurementSampler, Model, MomentVariant, TfimModel, TfimObservable,
};
use crate::error::{Error, Result};
use crate::io::round_output;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrueParams {
    #[serde(rename = "J")]
    pub j: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimationMethod {
    Qmm,
    Qgmm,
}

fn default_periodic() -> bool {
    true
}

/// `{"model": "tfim", "n_spins", "beta", "true_params": {"J", "h"},
/// "observables": ["O1", ...], "shots", "seed", "method", "moment_variant"}`.
/// `shots: 0` uses the exact moments of the true state as data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimationConfig {
    pub model: String,
    pub n_spins: usize,
    pub beta: f64,
    pub true_params: TrueParams,
    pub observables: Vec<String>,
    pub shots: u64,
    pub seed: u64,
    pub method: EstimationMethod,
    #[serde(default)]
    pub moment_variant: MomentVariant,
    #[serde(default = "default_periodic")]
    pub periodic: bool,
}

impl EstimationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn build_model(&self) -> Result<TfimModel> {
        if self.model != "tfim" {
            return Err(Error::InvalidArgument(format!(
                "unknown model `{}`",
                self.model
            )));
        }
        let kinds = self
            .observables
            .iter()
            .map(|s| s.parse::<TfimObservable>())
            .collect::<Result<Vec<_>>>()?;
        TfimModel::new(
            self.n_spins,
            self.beta,
            self.periodic,
            &kinds,
            self.moment_variant,
        )
    }
}

/// Data and estimate of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub empirical: Vec<f64>,
    pub result: EstimationResult,
}

impl EstimationReport {
    /// `{"phi_hat": {...}, "std_errors": {...}, "objective", "iterations"}`
    /// with numbers rounded for stable output.
    pub fn to_json(&self) -> Value {
        let named = |values: &[f64]| -> Value {
            let mut m = Map::new();
            for (name, v) in self.result.param_names.iter().zip(values) {
                m.insert(name.clone(), json!(round_output(*v)));
            }
            Value::Object(m)
        };
        json!({
            "phi_hat": named(&self.result.phi_hat),
            "std_errors": named(&self.result.std_errors),
            "objective": round_output(self.result.objective_value),
            "iterations": self.result.iterations,
        })
    }
}

/// Simulates the data described by `config` and runs the chosen estimator.
pub fn run_config(config: &EstimationConfig) -> Result<EstimationReport> {
    let model = config.build_model()?;
    let truth = [config.true_params.j, config.true_params.h];
    let rho = model.state(&truth)?;
    let samplers = model
        .observables()
        .iter()
        .map(|o| MeasurementSampler::new(&rho, o))
        .collect::<Result<Vec<_>>>()?;
    let empirical: Vec<f64> = if config.shots == 0 {
        samplers
            .iter()
            .map(MeasurementSampler::expectation)
            .collect()
    } else {
        simulate_moments(&samplers, config.shots, config.seed)?
            .iter()
            .map(|s| s.mean)
            .collect()
    };
    let opts = EstimationOptions {
        shots: config.shots,
        ..Default::default()
    };
    let result = match config.method {
        EstimationMethod::Qmm => {
            qmm_solve(&model, &empirical, &model.initial_guess(&empirical), &opts)?
        }
        EstimationMethod::Qgmm => qgmm_estimate(&model, &empirical, &opts)?,
    };
    Ok(EstimationReport { empirical, result })
}
