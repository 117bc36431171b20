//! Quantum method of moments (QMM) and generalized method of moments (QGMM).
//!
//! A [`Model`] maps parameters `phi` to a state and a vector of theoretical
//! moments `mu(phi)`. QMM solves `mu(phi) = mu_hat` by damped Newton; QGMM
//! minimizes `g^T W g` with `g = mu_hat - mu(phi)` by damped Gauss-Newton,
//! first with `W = I` and then with `W = Sigma(phi_bar)^{-1}`.

mod config;
mod sampling;
mod tfim;

pub use config::{run_config, EstimationConfig, EstimationMethod, EstimationReport, TrueParams};
pub use sampling::{
    simulate_measurements, simulate_moments, MeasurementSampler, MeasurementSummary,
};
pub use tfim::{
    high_temp_moments, tfim_hamiltonian, tfim_observables, thermal_state, HighTempMoments,
    MomentVariant, TfimModel, TfimObservable, MAX_SPINS,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::{same_dim, trace_product, DensityOperator, HermitianOperator};

/// Relative smallest singular value below which a linear system is singular.
const SINGULAR_RCOND: f64 = 1e-13;

/// A parameterized family of states with moment conditions.
pub trait Model: Sync {
    fn param_names(&self) -> Vec<String>;

    fn state(&self, phi: &[f64]) -> Result<DensityOperator>;

    /// The moment observables `O_1..O_L`.
    fn observables(&self) -> &[HermitianOperator];

    fn n_params(&self) -> usize {
        self.param_names().len()
    }

    fn n_moments(&self) -> usize {
        self.observables().len()
    }

    /// `mu_k(phi) = Tr(O_k rho_phi)` unless overridden.
    fn moments(&self, phi: &[f64]) -> Result<DVector<f64>> {
        let rho = self.state(phi)?;
        Ok(DVector::from_iterator(
            self.n_moments(),
            self.observables()
                .iter()
                .map(|o| trace_product(o.matrix(), rho.matrix()).re),
        ))
    }

    /// `D_kj = d mu_k / d phi_j`; central differences unless overridden.
    fn jacobian(&self, phi: &[f64], step: f64) -> Result<DMatrix<f64>> {
        numerical_jacobian(self, phi, step)
    }

    /// Covariance of the moment observables at `phi`.
    fn covariance(&self, phi: &[f64]) -> Result<DMatrix<f64>> {
        quantum_covariance_matrix(&self.state(phi)?, self.observables())
    }

    /// Starting point for the solvers given empirical moments.
    fn initial_guess(&self, empirical: &[f64]) -> Vec<f64>;
}

/// Central differences with step `step * max(1, |phi_j|)`.
pub fn numerical_jacobian<M: Model + ?Sized>(
    model: &M,
    phi: &[f64],
    step: f64,
) -> Result<DMatrix<f64>> {
    let l = model.n_moments();
    let mut d = DMatrix::zeros(l, phi.len());
    let mut shifted = phi.to_vec();
    for j in 0..phi.len() {
        let h = step * phi[j].abs().max(1.0);
        shifted[j] = phi[j] + h;
        let plus = model.moments(&shifted)?;
        shifted[j] = phi[j] - h;
        let minus = model.moments(&shifted)?;
        shifted[j] = phi[j];
        d.set_column(j, &((plus - minus) / (2.0 * h)));
    }
    Ok(d)
}

/// `Sigma_jk = Tr({O_j, O_k} rho) / 2 - Tr(O_j rho) Tr(O_k rho)`.
pub fn quantum_covariance_matrix(
    rho: &DensityOperator,
    observables: &[HermitianOperator],
) -> Result<DMatrix<f64>> {
    for o in observables {
        same_dim(rho.dim(), o.dim())?;
    }
    let l = observables.len();
    let o_rho: Vec<_> = observables
        .iter()
        .map(|o| o.matrix() * rho.matrix())
        .collect();
    let means: Vec<f64> = o_rho.iter().map(|m| m.trace().re).collect();
    let mut sigma = DMatrix::zeros(l, l);
    for j in 0..l {
        for k in j..l {
            let c = trace_product(observables[j].matrix(), &o_rho[k]).re - means[j] * means[k];
            sigma[(j, k)] = c;
            sigma[(k, j)] = c;
        }
    }
    Ok(sigma)
}

/// Solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationOptions {
    /// QMM stops once `max |mu(phi) - mu_hat| <= newton_tol`.
    pub newton_tol: f64,
    /// QGMM stops once the objective gradient norm is `<= grad_tol`.
    pub grad_tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Relative finite-difference step for numerical Jacobians.
    pub fd_step: f64,
    /// Shots per observable behind the empirical moments; `0` reports
    /// per-shot standard errors.
    pub shots: u64,
    /// Starting point; the model's guess when absent.
    pub init: Option<Vec<f64>>,
}

impl Default for EstimationOptions {
    fn default() -> Self {
        Self {
            newton_tol: 1e-10,
            grad_tol: 1e-8,
            max_iter: 100,
            max_halvings: 30,
            fd_step: 1e-5,
            shots: 0,
            init: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub param_names: Vec<String>,
    pub phi_hat: Vec<f64>,
    pub objective_value: f64,
    pub weighting: DMatrix<f64>,
    pub iterations: usize,
    pub std_errors: Vec<f64>,
}

fn check_moments<M: Model + ?Sized>(model: &M, empirical: &[f64]) -> Result<()> {
    if empirical.len() != model.n_moments() {
        return Err(Error::ArityMismatch {
            expected: model.n_moments(),
            found: empirical.len(),
        });
    }
    if empirical.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "empirical moments must be finite".into(),
        ));
    }
    Ok(())
}

fn is_singular(m: &DMatrix<f64>) -> bool {
    let sv = m.singular_values();
    let max = sv.max();
    max.is_nan()
        || max <= 0.0
        || sv.min() <= SINGULAR_RCOND * max
        || sv.iter().any(|s| !s.is_finite())
}

fn solve(m: &DMatrix<f64>, rhs: &DVector<f64>, err: Error) -> Result<DVector<f64>> {
    if is_singular(m) {
        return Err(err);
    }
    m.clone().lu().solve(rhs).ok_or(err)
}

fn invert_spd(m: &DMatrix<f64>, err: Error) -> Result<DMatrix<f64>> {
    let sym = (m + m.transpose()) * 0.5;
    if is_singular(&sym) {
        return Err(err);
    }
    sym.cholesky().map(|c| c.inverse()).ok_or(err)
}

/// `sqrt(diag((D^T Sigma^{-1} D)^{-1}) / shots)`.
fn asymptotic_std_errors<M: Model + ?Sized>(
    model: &M,
    phi: &[f64],
    opts: &EstimationOptions,
) -> Result<Vec<f64>> {
    let d = model.jacobian(phi, opts.fd_step)?;
    let w = invert_spd(&model.covariance(phi)?, Error::SingularWeighting)?;
    let info = d.transpose() * &w * &d;
    let cov = invert_spd(&info, Error::SingularJacobian)?;
    let shots = opts.shots.max(1) as f64;
    Ok(cov
        .diagonal()
        .iter()
        .map(|v| (v.max(0.0) / shots).sqrt())
        .collect())
}

/// Asymptotic parameter covariance `(D^T Sigma^{-1} D)^{-1}` (per shot).
pub fn sandwich_covariance<M: Model + ?Sized>(
    model: &M,
    phi: &[f64],
    fd_step: f64,
) -> Result<DMatrix<f64>> {
    let d = model.jacobian(phi, fd_step)?;
    let w = invert_spd(&model.covariance(phi)?, Error::SingularWeighting)?;
    invert_spd(&(d.transpose() * &w * &d), Error::SingularJacobian)
}

/// Newton's method with backtracking on `mu(phi) = mu_hat` (requires `L = K`).
pub fn qmm_solve<M: Model + ?Sized>(
    model: &M,
    empirical: &[f64],
    init: &[f64],
    opts: &EstimationOptions,
) -> Result<EstimationResult> {
    check_moments(model, empirical)?;
    let k = model.n_params();
    if model.n_moments() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: model.n_moments(),
        });
    }
    if init.len() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: init.len(),
        });
    }
    let target = DVector::from_column_slice(empirical);
    let mut phi = DVector::from_column_slice(init);
    let mut residual = model.moments(phi.as_slice())? - &target;
    let mut iterations = 0;
    while residual.amax() > opts.newton_tol {
        if iterations == opts.max_iter {
            return Err(Error::MaxIterations {
                iterations,
                residual: residual.amax(),
            });
        }
        iterations += 1;
        let d = model.jacobian(phi.as_slice(), opts.fd_step)?;
        let step = solve(&d, &(-&residual), Error::SingularJacobian)?;
        let current = residual.norm();
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial = &phi + &step * t;
            let r = model.moments(trial.as_slice())? - &target;
            if r.norm() < current {
                accepted = Some((trial, r));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((p, r)) => {
                phi = p;
                residual = r;
            }
            // No decrease along the Newton direction: the residual is at
            // round-off level or the model is not locally invertible.
            None => {
                return Err(Error::MaxIterations {
                    iterations,
                    residual: residual.amax(),
                })
            }
        }
    }
    let phi_hat = phi.as_slice().to_vec();
    Ok(EstimationResult {
        param_names: model.param_names(),
        std_errors: asymptotic_std_errors(model, &phi_hat, opts)?,
        phi_hat,
        objective_value: residual.norm_squared(),
        weighting: DMatrix::identity(k, k),
        iterations,
    })
}

/// `J(phi) = g^T W g` with `g = mu_hat - mu(phi)`.
pub fn gmm_objective<M: Model + ?Sized>(
    model: &M,
    phi: &[f64],
    empirical: &[f64],
    w: &DMatrix<f64>,
) -> Result<f64> {
    let g = DVector::from_column_slice(empirical) - model.moments(phi)?;
    Ok((g.transpose() * w * &g)[(0, 0)])
}

/// Damped Gauss-Newton minimization of `g^T W g` from `init`.
/// Returns the minimizer, its objective and the iteration count.
pub fn minimize_gmm<M: Model + ?Sized>(
    model: &M,
    empirical: &[f64],
    w: &DMatrix<f64>,
    init: &[f64],
    opts: &EstimationOptions,
) -> Result<(Vec<f64>, f64, usize)> {
    let target = DVector::from_column_slice(empirical);
    let mut phi = DVector::from_column_slice(init);
    let mut g = &target - model.moments(phi.as_slice())?;
    let mut objective = (g.transpose() * w * &g)[(0, 0)];
    let mut iterations = 0;
    loop {
        let d = model.jacobian(phi.as_slice(), opts.fd_step)?;
        let dtw = d.transpose() * w;
        let gradient = (&dtw * &g) * -2.0;
        if gradient.norm() <= opts.grad_tol {
            break;
        }
        if iterations == opts.max_iter {
            return Err(Error::MaxIterations {
                iterations,
                residual: gradient.norm(),
            });
        }
        iterations += 1;
        let step = solve(&(&dtw * &d), &(&dtw * &g), Error::SingularJacobian)?;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=opts.max_halvings {
            let trial = &phi + &step * t;
            let gt = &target - model.moments(trial.as_slice())?;
            let jt = (gt.transpose() * w * &gt)[(0, 0)];
            if jt < objective {
                accepted = Some((trial, gt, jt));
                break;
            }
            t *= 0.5;
        }
        match accepted {
            Some((p, gt, jt)) => {
                let moved = (&p - &phi).amax();
                phi = p;
                g = gt;
                objective = jt;
                if moved <= f64::EPSILON * phi.amax().max(1.0) {
                    break;
                }
            }
            // The objective cannot decrease further at double precision.
            None => break,
        }
    }
    Ok((phi.as_slice().to_vec(), objective, iterations))
}

/// Two-step QGMM: `W = I`, then `W = Sigma(phi_bar)^{-1}` (requires `L > K`).
pub fn qgmm_estimate<M: Model + ?Sized>(
    model: &M,
    empirical: &[f64],
    opts: &EstimationOptions,
) -> Result<EstimationResult> {
    check_moments(model, empirical)?;
    let (k, l) = (model.n_params(), model.n_moments());
    if l <= k {
        return Err(Error::ArityMismatch {
            expected: k + 1,
            found: l,
        });
    }
    let init = opts
        .init
        .clone()
        .unwrap_or_else(|| model.initial_guess(empirical));
    if init.len() != k {
        return Err(Error::ArityMismatch {
            expected: k,
            found: init.len(),
        });
    }
    let identity = DMatrix::identity(l, l);
    let (phi_bar, _, it1) = minimize_gmm(model, empirical, &identity, &init, opts)?;
    let w = invert_spd(&model.covariance(&phi_bar)?, Error::SingularWeighting)?;
    let (phi_hat, objective, it2) = minimize_gmm(model, empirical, &w, &phi_bar, opts)?;
    Ok(EstimationResult {
        param_names: model.param_names(),
        std_errors: asymptotic_std_errors(model, &phi_hat, opts)?,
        phi_hat,
        objective_value: objective,
        weighting: w,
        iterations: it1 + it2,
    })
}

/// `phi_bar + (D^T Sigma^{-1} D)^{-1} D^T Sigma^{-1} (mu_hat - mu(phi_bar))`,
/// with `D` and `Sigma` evaluated at `phi_bar`.
pub fn qgmm_onestep_update<M: Model + ?Sized>(
    model: &M,
    phi_bar: &[f64],
    empirical: &[f64],
) -> Result<Vec<f64>> {
    check_moments(model, empirical)?;
    let d = model.jacobian(phi_bar, EstimationOptions::default().fd_step)?;
    let w = invert_spd(&model.covariance(phi_bar)?, Error::SingularWeighting)?;
    let g = DVector::from_column_slice(empirical) - model.moments(phi_bar)?;
    let dtw = d.transpose() * w;
    let delta = solve(&(&dtw * &d), &(&dtw * g), Error::SingularJacobian)?;
    Ok(phi_bar
        .iter()
        .zip(delta.iter())
        .map(|(p, s)| p + s)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli;
    use crate::statfuncs::covariance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use TfimObservable::{O1, O2, O3};

    fn model(kinds: &[TfimObservable], variant: MomentVariant, n: usize, beta: f64) -> TfimModel {
        TfimModel::new(n, beta, true, kinds, variant).unwrap()
    }

    #[test]
    fn covariance_examples() {
        let rho = DensityOperator::from_pure(&pauli::ket0()).unwrap();
        let s = quantum_covariance_matrix(&rho, &[pauli::x(), pauli::y()]).unwrap();
        assert!(s[(0, 1)].abs() < 1e-15 && s[(1, 0)].abs() < 1e-15);
        assert!((s[(0, 0)] - 1.0).abs() < 1e-15);
        let single = quantum_covariance_matrix(&rho, &[pauli::z()]).unwrap();
        assert!(single[(0, 0)].abs() < 1e-15);
    }

    #[test]
    fn covariance_matches_statfuncs_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let rho = crate::random::density(&mut rng, 4);
        let obs: Vec<_> = (0..3)
            .map(|_| crate::random::hermitian(&mut rng, 4))
            .collect();
        let s = quantum_covariance_matrix(&rho, &obs).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                assert!((s[(j, k)] - covariance(&rho, &obs[j], &obs[k]).unwrap()).abs() < 1e-10);
            }
        }
        let min = s.clone().symmetric_eigen().eigenvalues.min();
        assert!(min >= -1e-9);
    }

    #[test]
    fn tfim_covariance_at_infinite_temperature() {
        let obs = tfim_observables(6, true).unwrap();
        let rho = DensityOperator::maximally_mixed(64);
        let s = quantum_covariance_matrix(&rho, &obs).unwrap();
        assert!((s - DMatrix::identity(3, 3) / 6.0).amax() < 1e-12);
    }

    #[test]
    fn qmm_high_temp_is_linear_inversion() {
        let m = model(&[O1, O2], MomentVariant::HighTemp, 6, 0.1);
        let r = qmm_solve(&m, &[0.1, 0.05], &[0.3, 0.3], &EstimationOptions::default()).unwrap();
        assert!((r.phi_hat[0] - 1.0).abs() < 1e-12 && (r.phi_hat[1] - 0.5).abs() < 1e-12);
        assert!(r.objective_value >= -1e-12);
    }

    #[test]
    fn qmm_exact_self_consistency() {
        let m = model(&[O1, O2], MomentVariant::Exact, 6, 0.05);
        let truth = [1.0, 0.5];
        let mu = m.moments(&truth).unwrap();
        let init = m.initial_guess(mu.as_slice());
        let r = qmm_solve(&m, mu.as_slice(), &init, &EstimationOptions::default()).unwrap();
        assert!(
            (r.phi_hat[0] - 1.0).abs() < 1e-8 && (r.phi_hat[1] - 0.5).abs() < 1e-8,
            "{r:?}"
        );
        assert!(r.iterations >= 1);
    }

    #[test]
    fn qmm_arity_and_singularity() {
        let over = model(&[O1, O2, O3], MomentVariant::HighTemp, 6, 0.1);
        assert!(matches!(
            qmm_solve(
                &over,
                &[0.1, 0.05, 0.005],
                &[1.0, 1.0],
                &EstimationOptions::default()
            ),
            Err(Error::ArityMismatch { .. })
        ));
        // O1 and O3 only constrain J: the Jacobian has a zero column.
        let blind = model(&[O1, O3], MomentVariant::HighTemp, 6, 0.1);
        assert_eq!(
            qmm_solve(
                &blind,
                &[0.1, 0.005],
                &[0.5, 0.5],
                &EstimationOptions::default()
            )
            .unwrap_err(),
            Error::SingularJacobian
        );
    }

    #[test]
    fn qmm_with_shot_noise_lands_within_standard_errors() {
        let m = model(&[O1, O2], MomentVariant::Exact, 6, 0.05);
        let truth = [1.0, 0.5];
        let rho = m.state(&truth).unwrap();
        let samplers: Vec<_> = m
            .observables()
            .iter()
            .map(|o| MeasurementSampler::new(&rho, o).unwrap())
            .collect();
        let shots = 100_000;
        let mu_hat: Vec<f64> = simulate_moments(&samplers, shots, 5)
            .unwrap()
            .iter()
            .map(|s| s.mean)
            .collect();
        let opts = EstimationOptions {
            shots,
            ..Default::default()
        };
        let r = qmm_solve(&m, &mu_hat, &m.initial_guess(&mu_hat), &opts).unwrap();
        let z2: f64 = (0..2)
            .map(|i| ((r.phi_hat[i] - truth[i]) / r.std_errors[i]).powi(2))
            .sum();
        assert!(z2.sqrt() < 5.0, "{r:?}");
    }

    #[test]
    fn qgmm_consistent_high_temp_data() {
        let m = model(&[O1, O2, O3], MomentVariant::HighTemp, 6, 0.1);
        let r = qgmm_estimate(&m, &[0.1, 0.05, 0.005], &EstimationOptions::default()).unwrap();
        assert!(
            (r.phi_hat[0] - 1.0).abs() < 1e-9 && (r.phi_hat[1] - 0.5).abs() < 1e-9,
            "{r:?}"
        );
        assert!(r.objective_value < 1e-18);
        assert!((r.weighting.clone() - DMatrix::identity(3, 3) * 6.0).amax() < 1e-12);
    }

    #[test]
    fn qgmm_exact_self_consistency() {
        let m = model(&[O1, O2, O3], MomentVariant::Exact, 6, 0.05);
        let mu = m.moments(&[1.0, 0.5]).unwrap();
        let r = qgmm_estimate(&m, mu.as_slice(), &EstimationOptions::default()).unwrap();
        assert!(
            (r.phi_hat[0] - 1.0).abs() < 1e-8 && (r.phi_hat[1] - 0.5).abs() < 1e-8,
            "{r:?}"
        );
    }

    #[test]
    fn onestep_matches_closed_form() {
        let beta = 0.1;
        let (mu1, mu2, mu3) = (0.12, 0.07, 0.005);
        let m = model(&[O1, O2, O3], MomentVariant::HighTemp, 6, beta);
        let phi_bar = [mu1 / beta, mu2 / beta];
        let phi = qgmm_onestep_update(&m, &phi_bar, &[mu1, mu2, mu3]).unwrap();
        let closed = mu1 / beta + mu1 / (beta * (1.0 + mu1 * mu1)) * (mu3 - mu1 * mu1 / 2.0);
        assert!((phi[0] - closed).abs() < 1e-12, "{} vs {closed}", phi[0]);
        assert!((closed - 1.197397).abs() < 1e-6);
        assert!((phi[1] - mu2 / beta).abs() < 1e-12);
    }

    #[test]
    fn onestep_tracks_full_minimizer_in_linear_regime() {
        let m = model(&[O1, O2, O3], MomentVariant::HighTemp, 6, 0.1);
        let data = [0.1, 0.05, 0.005];
        let full = qgmm_estimate(&m, &data, &EstimationOptions::default()).unwrap();
        let one = qgmm_onestep_update(&m, &m.initial_guess(&data), &data).unwrap();
        for (a, b) in one.iter().zip(&full.phi_hat) {
            assert!((a - b).abs() < 2e-3);
        }
        let noisy = [0.12, 0.05, 0.005];
        let full = qgmm_estimate(&m, &noisy, &EstimationOptions::default()).unwrap();
        let one = qgmm_onestep_update(&m, &m.initial_guess(&noisy), &noisy).unwrap();
        for (a, b) in one.iter().zip(&full.phi_hat) {
            assert!((a - b).abs() < 2e-3, "{one:?} vs {:?}", full.phi_hat);
        }
    }

    #[test]
    fn qgmm_objective_not_above_qmm_point() {
        let m = model(&[O1, O2, O3], MomentVariant::HighTemp, 6, 0.1);
        let data = [0.12, 0.06, 0.004];
        let r = qgmm_estimate(&m, &data, &EstimationOptions::default()).unwrap();
        let qmm_point = m.initial_guess(&data);
        let at_qmm = gmm_objective(&m, &qmm_point, &data, &r.weighting).unwrap();
        assert!(r.objective_value <= at_qmm);
    }

    #[test]
    fn variance_reduction_ratio() {
        let beta = 0.1;
        let mu1 = 0.12;
        let phi = [mu1 / beta, 0.5];
        let over = model(&[O1, O2, O3], MomentVariant::HighTemp, 6, beta);
        let just = model(&[O1, O2], MomentVariant::HighTemp, 6, beta);
        let v_gmm = sandwich_covariance(&over, &phi, 1e-5).unwrap()[(0, 0)];
        let v_mm = sandwich_covariance(&just, &phi, 1e-5).unwrap()[(0, 0)];
        assert!((v_mm - 1.0 / (6.0 * beta * beta)).abs() < 1e-9);
        assert!((v_gmm / v_mm - 1.0 / (1.0 + mu1 * mu1)).abs() < 1e-6);
    }

    #[test]
    fn singular_weighting_is_reported() {
        struct Degenerate(Vec<HermitianOperator>);
        impl Model for Degenerate {
            fn param_names(&self) -> Vec<String> {
                vec!["a".into()]
            }
            fn state(&self, _: &[f64]) -> Result<DensityOperator> {
                DensityOperator::from_pure(&pauli::ket0())
            }
            fn observables(&self) -> &[HermitianOperator] {
                &self.0
            }
            fn moments(&self, phi: &[f64]) -> Result<DVector<f64>> {
                Ok(DVector::from_vec(vec![phi[0], 2.0 * phi[0]]))
            }
            fn initial_guess(&self, _: &[f64]) -> Vec<f64> {
                vec![0.0]
            }
        }
        // |0> is an eigenstate of Z, so Sigma vanishes.
        let m = Degenerate(vec![pauli::z(), pauli::z()]);
        assert_eq!(
            qgmm_estimate(&m, &[1.0, 2.0], &EstimationOptions::default()).unwrap_err(),
            Error::SingularWeighting
        );
    }
}
