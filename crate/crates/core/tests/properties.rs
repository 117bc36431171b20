use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qstatfn::estimation::{run_config, EstimationConfig};
use qstatfn::geo::{fidelity, geometric_mean, PositiveOperator};
use qstatfn::operator::max_abs_diff;
use qstatfn::quasiprob::{
    kd_distribution, mh_distribution, npoint_correlation, DEFAULT_CLUSTER_TOL,
};
use qstatfn::statfuncs::{qcf, qmgf};
use qstatfn::wigner::{reconstruct_state, wigner_function};
use qstatfn::{random, QuasiProbTable, WignerTable};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kd_table_normalizes_and_matches_born_marginal(seed in any::<u64>(), dim in 2usize..5) {
        let mut g = rng(seed);
        let rho = random::density(&mut g, dim);
        let a = random::hermitian(&mut g, dim);
        let b = random::hermitian(&mut g, dim);
        let table = kd_distribution(&rho, &[a.clone(), b.clone()], DEFAULT_CLUSTER_TOL).unwrap();
        prop_assert!((table.total().re - 1.0).abs() < 1e-10 && table.total().im.abs() < 1e-10);

        // Born probabilities of A from its eigenvectors.
        let spec = a.spectral().unwrap();
        let u = spec.eigenvectors();
        let born: Vec<f64> = (0..dim).map(|k| (u.column(k).adjoint() * rho.matrix() * u.column(k))[(0, 0)].re).collect();
        for (p, q) in table.first_marginal().iter().zip(&born) {
            prop_assert!((p.re - q).abs() < 1e-10 && p.im.abs() < 1e-10);
        }

        // Sum of a * b * KD(a, b) is Tr(B A rho).
        let direct = npoint_correlation(&rho, &[b.clone(), a.clone()]).unwrap().direct;
        prop_assert!((table.product_moment() - direct).norm() < 1e-9);

        let mh = mh_distribution(&rho, &[a, b], DEFAULT_CLUSTER_TOL).unwrap();
        for (x, y) in mh.values().iter().zip(table.values()) {
            prop_assert!((x.re - y.re).abs() < 1e-12 && x.im == 0.0);
        }
    }

    #[test]
    fn quasiprob_csv_round_trips(seed in any::<u64>()) {
        let mut g = rng(seed);
        let rho = random::density(&mut g, 3);
        let obs = [random::hermitian(&mut g, 3), random::hermitian(&mut g, 3)];
        let table = kd_distribution(&rho, &obs, DEFAULT_CLUSTER_TOL).unwrap();
        let back = QuasiProbTable::from_csv(&table.to_csv()).unwrap();
        for (x, y) in back.values().iter().zip(table.values()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn generating_functions_are_normalized_and_symmetric(seed in any::<u64>(), t in -3.0f64..3.0) {
        let mut g = rng(seed);
        let rho = random::density(&mut g, 4);
        let a = random::hermitian(&mut g, 4);
        prop_assert!((qmgf(&rho, &a, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let plus = qcf(&rho, &a, t).unwrap();
        let minus = qcf(&rho, &a, -t).unwrap();
        prop_assert!((plus - minus.conj()).norm() < 1e-12);
        prop_assert!(plus.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn wigner_marginal_is_the_diagonal(seed in any::<u64>(), d in prop::sample::select(vec![3usize, 5, 7])) {
        let mut g = rng(seed);
        let rho = random::density(&mut g, d);
        let w = wigner_function(&rho).unwrap();
        for (p, m) in w.computational_marginal().iter().enumerate() {
            prop_assert!((m - rho.matrix()[(p, p)].re).abs() < 1e-10);
        }
        let parsed = WignerTable::from_csv(&w.to_csv()).unwrap();
        let back = reconstruct_state(&parsed).unwrap();
        prop_assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-9);
    }

    #[test]
    fn geodesic_endpoints_and_fidelity_bounds(seed in any::<u64>()) {
        let mut g = rng(seed);
        let rho = random::full_rank_density(&mut g, 3, 0.1);
        let sigma = random::full_rank_density(&mut g, 3, 0.1);
        let a = PositiveOperator::from_density(&rho).unwrap();
        let b = PositiveOperator::from_density(&sigma).unwrap();
        prop_assert!(max_abs_diff(geometric_mean(&a, &b, 0.0).unwrap().matrix(), a.matrix()) < 1e-10);
        prop_assert!(max_abs_diff(geometric_mean(&a, &b, 1.0).unwrap().matrix(), b.matrix()) < 1e-10);
        let f = fidelity(&rho, &sigma).unwrap();
        prop_assert!((f - fidelity(&sigma, &rho).unwrap()).abs() < 1e-10);
        prop_assert!(f > 0.0 && f <= 1.0 + 1e-12);
    }
}

#[test]
fn estimation_config_end_to_end() {
    let config = EstimationConfig::from_json(
        r#"{"model": "tfim", "n_spins": 4, "beta": 0.1, "true_params": {"J": 0.8, "h": 0.3},
            "observables": ["O1", "O2", "O3"], "shots": 0, "seed": 1, "method": "qgmm"}"#,
    )
    .unwrap();
    let report = run_config(&config).unwrap();
    assert!((report.result.phi_hat[0] - 0.8).abs() < 1e-8);
    assert!((report.result.phi_hat[1] - 0.3).abs() < 1e-8);
    let json = report.to_json();
    assert!(json["phi_hat"]["J"].is_number() && json["std_errors"]["h"].is_number());
}

#[test]
fn estimation_config_rejects_unknown_fields() {
    let err = EstimationConfig::from_json(
        r#"{"model": "tfim", "n_spins": 4, "beta": 0.1, "true_params": {"J": 1, "h": 1},
            "observables": ["O1", "O2"], "shots": 0, "seed": 1, "method": "qmm", "extra": 1}"#,
    );
    assert!(err.is_err());
}
