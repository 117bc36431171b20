//! Quantum moment-generating, characteristic, cumulant-generating and second
//! characteristic functions, their multivariable and post-selected variants,
//! and closed-form low-order moments.

use std::ops::{Add, Div, Sub};

use crate::error::{Error, Result};
use crate::operator::{
    same_dim, trace_product, DensityOperator, HermitianOperator, PovmElement, C64, I, ONE,
};
use crate::ordering::{BoundOrdering, OrderingSpec};
use crate::spectral::spectral_decompose;

/// Below this post-selection probability a conditional quantity is rejected.
pub const POSTSELECT_TOL: f64 = 1e-12;
/// Below this modulus the phase of a characteristic function is undefined.
pub const ZERO_TOL: f64 = 1e-12;
/// Rank-one test for pre- and post-selected states.
pub const PURITY_TOL: f64 = 1e-9;

pub const DEFAULT_STEP_FIRST: f64 = 1e-5;
pub const DEFAULT_STEP_SECOND: f64 = 1e-4;

/// `Tr(exp(z A) rho)` for complex `z`; the shared path for the QMGF and QCF.
pub fn qmgf_complex(rho: &DensityOperator, a: &HermitianOperator, z: C64) -> Result<C64> {
    same_dim(rho.dim(), a.dim())?;
    let spec = spectral_decompose(a)?;
    // Tr(U f(L) U^+ rho) = sum_k f(l_k) <u_k|rho|u_k>
    let u = spec.eigenvectors();
    let rho_m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for (k, &l) in spec.eigenvalues().iter().enumerate() {
        let col = u.column(k);
        let weight = (col.adjoint() * rho_m * col)[(0, 0)];
        acc += (z * l).exp() * weight;
    }
    Ok(acc)
}

/// `Tr(exp(theta A) rho)`, real and strictly positive.
pub fn qmgf(rho: &DensityOperator, a: &HermitianOperator, theta: f64) -> Result<f64> {
    Ok(qmgf_complex(rho, a, C64::new(theta, 0.0))?.re)
}

/// `Tr(exp(i theta A) rho)`.
pub fn qcf(rho: &DensityOperator, a: &HermitianOperator, theta: f64) -> Result<C64> {
    qmgf_complex(rho, a, I * theta)
}

/// `log Tr(exp(theta A) rho)`.
pub fn qcgf(rho: &DensityOperator, a: &HermitianOperator, theta: f64) -> Result<f64> {
    Ok(qmgf(rho, a, theta)?.ln())
}

/// Sorted sample points containing `0`, used to track the logarithm branch.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaPath {
    points: Vec<f64>,
    origin: usize,
}

impl ThetaPath {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument(
                "theta path has non-finite points".into(),
            ));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "theta path must be strictly increasing".into(),
            ));
        }
        let origin = points
            .iter()
            .position(|&t| t == 0.0)
            .ok_or_else(|| Error::InvalidArgument("theta path must contain 0".into()))?;
        Ok(Self { points, origin })
    }

    /// `n` evenly spaced points on `[lo, hi]` with `0` inserted if absent.
    pub fn uniform(lo: f64, hi: f64, n: usize) -> Result<Self> {
        let mut pts = crate::statfuncs::linspace(lo, hi, n);
        if !pts.contains(&0.0) {
            pts.push(0.0);
            pts.sort_by(f64::total_cmp);
        }
        Self::new(pts)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn origin(&self) -> usize {
        self.origin
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive (`[lo]` when `n == 1`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { hi } else { lo + step * k as f64 })
                .collect()
        }
    }
}

/// Continuous logarithm of `values` sampled along `path`, anchored on the
/// principal branch at the origin and continued to the nearest branch.
///
/// Fails where the modulus drops below [`ZERO_TOL`], or where consecutive
/// phases are antipodal so that the nearest branch is not unique.
pub fn unwrap_log(path: &ThetaPath, values: &[C64]) -> Result<Vec<C64>> {
    let pts = path.points();
    if values.len() != pts.len() {
        return Err(Error::DimensionMismatch {
            expected: pts.len(),
            found: values.len(),
        });
    }
    let check = |k: usize| -> Result<()> {
        let modulus = values[k].norm();
        if modulus < ZERO_TOL {
            Err(Error::BranchAmbiguity {
                theta: pts[k],
                modulus,
            })
        } else {
            Ok(())
        }
    };
    let mut out = vec![C64::new(0.0, 0.0); values.len()];
    let o = path.origin();
    check(o)?;
    out[o] = values[o].ln();
    let mut step = |k: usize, prev: usize| -> Result<()> {
        check(k)?;
        let arg = values[k].arg();
        let prev_phase = out[prev].im;
        let turns = ((prev_phase - arg) / std::f64::consts::TAU).round();
        let phase = arg + turns * std::f64::consts::TAU;
        let jump = (phase - prev_phase).abs();
        if (jump - std::f64::consts::PI).abs() < 1e-9 {
            return Err(Error::BranchAmbiguity {
                theta: pts[k],
                modulus: values[k].norm(),
            });
        }
        out[k] = C64::new(values[k].norm().ln(), phase);
        Ok(())
    };
    for k in o + 1..values.len() {
        step(k, k - 1)?;
    }
    for k in (0..o).rev() {
        step(k, k + 1)?;
    }
    Ok(out)
}

/// `log Tr(exp(i theta A) rho)` along `path` with continuous phase.
pub fn qscf(rho: &DensityOperator, a: &HermitianOperator, path: &ThetaPath) -> Result<Vec<C64>> {
    let values = path
        .points()
        .iter()
        .map(|&t| qcf(rho, a, t))
        .collect::<Result<Vec<_>>>()?;
    unwrap_log(path, &values)
}

/// `Tr(f(theta) rho)` for the ordering `spec`.
pub fn multivariable_qmgf(
    rho: &DensityOperator,
    observables: &[HermitianOperator],
    theta: &[f64],
    spec: &OrderingSpec,
) -> Result<C64> {
    let bound = BoundOrdering::new(spec, observables)?;
    bound_expectation(rho, &bound, theta, ONE)
}

/// `Tr(f~(theta) rho)` for the ordering `spec`.
pub fn multivariable_qcf(
    rho: &DensityOperator,
    observables: &[HermitianOperator],
    theta: &[f64],
    spec: &OrderingSpec,
) -> Result<C64> {
    let bound = BoundOrdering::new(spec, observables)?;
    bound_expectation(rho, &bound, theta, I)
}

/// Expectation of a pre-bound ordering; cheap to call over a grid.
pub fn bound_expectation(
    rho: &DensityOperator,
    bound: &BoundOrdering,
    theta: &[f64],
    scale: C64,
) -> Result<C64> {
    same_dim(bound.dim(), rho.dim())?;
    let f = bound.evaluate(theta, scale)?;
    Ok(trace_product(&f, rho.matrix()))
}

fn postselection_probability(rho: &DensityOperator, pi: &PovmElement) -> Result<f64> {
    same_dim(rho.dim(), pi.dim())?;
    let p = trace_product(pi.matrix(), rho.matrix()).re;
    if p <= POSTSELECT_TOL {
        return Err(Error::ZeroPostSelection { probability: p });
    }
    Ok(p)
}

/// `Tr(Pi exp(z A) rho) / Tr(Pi rho)` for complex `z`.
pub fn conditional_qmgf_complex(
    rho: &DensityOperator,
    pi: &PovmElement,
    a: &HermitianOperator,
    z: C64,
) -> Result<C64> {
    let norm = postselection_probability(rho, pi)?;
    same_dim(rho.dim(), a.dim())?;
    let e = spectral_decompose(a)?.map(|l| (z * l).exp());
    let num = trace_product(&(pi.matrix() * e), rho.matrix());
    Ok(num / norm)
}

/// `Tr(Pi exp(theta A) rho) / Tr(Pi rho)`; complex in general.
pub fn conditional_qmgf(
    rho: &DensityOperator,
    pi: &PovmElement,
    a: &HermitianOperator,
    theta: f64,
) -> Result<C64> {
    conditional_qmgf_complex(rho, pi, a, C64::new(theta, 0.0))
}

/// `<phi| exp(-i theta A) |psi> / <phi|psi>` for pure `psi`, `phi`.
pub fn modular_value(
    psi: &DensityOperator,
    phi: &DensityOperator,
    a: &HermitianOperator,
    theta: f64,
) -> Result<C64> {
    same_dim(psi.dim(), phi.dim())?;
    same_dim(psi.dim(), a.dim())?;
    let pre = psi.pure_vector(PURITY_TOL)?;
    let post = phi.pure_vector(PURITY_TOL)?;
    let overlap = post.dotc(&pre);
    if overlap.norm_sqr() <= POSTSELECT_TOL {
        return Err(Error::OrthogonalSelection {
            overlap: overlap.norm(),
        });
    }
    let u = spectral_decompose(a)?.map(|l| (-I * theta * l).exp());
    Ok(post.dotc(&(u * pre)) / overlap)
}

/// Expectation and variance of an observable in a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub expectation: f64,
    pub variance: f64,
}

/// `Tr(A rho)` and `Tr((A - <A>)^2 rho)` in closed form.
pub fn moments(rho: &DensityOperator, a: &HermitianOperator) -> Result<MomentReport> {
    same_dim(rho.dim(), a.dim())?;
    let expectation = trace_product(a.matrix(), rho.matrix()).re;
    let centered = a.shifted(expectation);
    let variance = trace_product(centered.square().matrix(), rho.matrix()).re;
    Ok(MomentReport {
        expectation,
        variance,
    })
}

/// Symmetrized covariance `Tr((AB + BA) rho) / 2 - Tr(A rho) Tr(B rho)`.
pub fn covariance(
    rho: &DensityOperator,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<f64> {
    same_dim(rho.dim(), a.dim())?;
    same_dim(rho.dim(), b.dim())?;
    let ab = a.jordan_product(b)?;
    let ea = trace_product(a.matrix(), rho.matrix()).re;
    let eb = trace_product(b.matrix(), rho.matrix()).re;
    Ok(trace_product(ab.matrix(), rho.matrix()).re - ea * eb)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    First,
    Second,
}

/// Central finite difference of order one or two. Works for real and complex
/// valued functions alike.
pub fn finite_difference<T, F>(mut f: F, order: DerivativeOrder, at: f64, step: f64) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Div<f64, Output = T>,
    F: FnMut(f64) -> T,
{
    assert!(step > 0.0, "finite-difference step must be positive");
    let plus = f(at + step);
    let minus = f(at - step);
    match order {
        DerivativeOrder::First => (plus - minus) / (2.0 * step),
        DerivativeOrder::Second => {
            let mid = f(at);
            (plus - mid - mid + minus) / (step * step)
        }
    }
}

/// Central estimate of `d^2 f / dx dy` at `at`.
pub fn mixed_partial<T, F>(mut f: F, at: (f64, f64), step: f64) -> T
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Div<f64, Output = T>,
    F: FnMut(f64, f64) -> T,
{
    assert!(step > 0.0, "finite-difference step must be positive");
    let (x, y) = at;
    let pp = f(x + step, y + step);
    let pm = f(x + step, y - step);
    let mp = f(x - step, y + step);
    let mm = f(x - step, y - step);
    (pp - pm - mp + mm) / (4.0 * step * step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{make_density, CMatrix};
    use crate::ordering::Preset;
    use crate::pauli;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn diag_state(p: &[f64]) -> DensityOperator {
        make_density(HermitianOperator::from_real_diagonal(p).into_matrix()).unwrap()
    }

    fn pure(v: crate::operator::CVector) -> DensityOperator {
        DensityOperator::from_pure(&v).unwrap()
    }

    #[test]
    fn qmgf_examples() {
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((qmgf(&mixed, &pauli::z(), 0.5).unwrap() - 0.5f64.cosh()).abs() < 1e-14);
        assert!((qmgf(&mixed, &pauli::x(), 0.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qmgf_against_hand_eigenbasis() {
        // sigma_x eigenvectors |+>, |->: weights <+|rho|+> = <-|rho|-> = 1/2 for diagonal rho.
        let rho = diag_state(&[0.7, 0.3]);
        let expected = 0.5 * 0.4f64.exp() + 0.5 * (-0.4f64).exp();
        assert!((qmgf(&rho, &pauli::x(), 0.4).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn qcf_examples() {
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((qcf(&mixed, &pauli::z(), 0.0).unwrap() - ONE).norm() < 1e-15);
        assert!(qcf(&mixed, &pauli::z(), FRAC_PI_2).unwrap().norm() < 1e-15);
        let rho = diag_state(&[0.7, 0.3]);
        let expected = I.exp() * 0.7 + (-I).exp() * 0.3;
        assert!((qcf(&rho, &pauli::z(), 1.0).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn qcf_is_qmgf_at_imaginary_argument() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random::density(&mut rng, 3);
        let a = random::hermitian(&mut rng, 3);
        for &t in &[-1.3, 0.2, 2.5] {
            assert_eq!(
                qcf(&rho, &a, t).unwrap(),
                qmgf_complex(&rho, &a, I * t).unwrap()
            );
        }
    }

    #[test]
    fn log_functions_vanish_at_origin() {
        let mixed = DensityOperator::maximally_mixed(2);
        assert_eq!(qcgf(&mixed, &pauli::z(), 0.0).unwrap(), 0.0);
        assert!((qcgf(&mixed, &pauli::z(), 0.5).unwrap() - 0.5f64.cosh().ln()).abs() < 1e-14);
        let path = ThetaPath::new(vec![-0.5, 0.0, 0.5]).unwrap();
        let h = qscf(&mixed, &pauli::z(), &path).unwrap();
        assert!(h[1].norm() < 1e-15);
        assert!((h[2].re - 0.5f64.cos().ln()).abs() < 1e-14);
    }

    #[test]
    fn qscf_zero_crossing_is_ambiguous() {
        let mixed = DensityOperator::maximally_mixed(2);
        let path = ThetaPath::new(vec![0.0, 0.5, 1.0, FRAC_PI_2, 2.0]).unwrap();
        assert!(matches!(
            qscf(&mixed, &pauli::z(), &path),
            Err(Error::BranchAmbiguity { .. })
        ));
    }

    #[test]
    fn qscf_unwraps_phase_beyond_pi() {
        // rho = |0><0|, A = sigma_z: C(theta) = e^{i theta}, so H(theta) = i theta exactly.
        let rho = pure(pauli::ket0());
        let path = ThetaPath::uniform(-10.0, 10.0, 201).unwrap();
        let h = qscf(&rho, &pauli::z(), &path).unwrap();
        for (&t, v) in path.points().iter().zip(&h) {
            assert!((v - I * t).norm() < 1e-12, "theta {t}: {v}");
        }
    }

    #[test]
    fn theta_path_validation() {
        assert!(ThetaPath::new(vec![0.1, 0.2]).is_err());
        assert!(ThetaPath::new(vec![0.0, 0.0]).is_err());
        assert!(ThetaPath::new(vec![-1.0, 0.0, f64::NAN]).is_err());
    }

    #[test]
    fn multivariable_origin_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random::density(&mut rng, 3);
        let obs = vec![
            random::hermitian(&mut rng, 3),
            random::hermitian(&mut rng, 3),
        ];
        for kind in [Preset::KirkwoodDirac, Preset::MargenauHill, Preset::Wigner] {
            let spec = OrderingSpec::preset(kind, 2).unwrap();
            let v = multivariable_qmgf(&rho, &obs, &[0.0, 0.0], &spec).unwrap();
            assert!((v - ONE).norm() < 1e-13);
        }
    }

    #[test]
    fn mh_is_average_of_both_kd_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random::density(&mut rng, 3);
        let a = random::hermitian(&mut rng, 3);
        let b = random::hermitian(&mut rng, 3);
        let kd = OrderingSpec::preset(Preset::KirkwoodDirac, 2).unwrap();
        let mh = OrderingSpec::preset(Preset::MargenauHill, 2).unwrap();
        let (t1, t2) = (0.3, -0.7);
        let fwd = multivariable_qmgf(&rho, &[a.clone(), b.clone()], &[t1, t2], &kd).unwrap();
        let rev = multivariable_qmgf(&rho, &[b.clone(), a.clone()], &[t2, t1], &kd).unwrap();
        let sym = multivariable_qmgf(&rho, &[a, b], &[t1, t2], &mh).unwrap();
        assert!((sym - (fwd + rev) * 0.5).norm() < 1e-13);
        assert!(sym.im.abs() < 1e-13);
    }

    #[test]
    fn conditional_qmgf_examples() {
        let plus = pure(pauli::ket_plus());
        let p0 = PovmElement::projector_onto(&pauli::ket0()).unwrap();
        let v = conditional_qmgf(&plus, &p0, &pauli::z(), 0.3).unwrap();
        assert!((v - C64::new(0.3f64.exp(), 0.0)).norm() < 1e-13);
        assert!((conditional_qmgf(&plus, &p0, &pauli::x(), 0.0).unwrap() - ONE).norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random::density(&mut rng, 3);
        let a = random::hermitian(&mut rng, 3);
        let id = PovmElement::identity(3);
        let c = conditional_qmgf(&rho, &id, &a, 0.8).unwrap();
        assert!((c.re - qmgf(&rho, &a, 0.8).unwrap()).abs() < 1e-12);
        assert!(c.im.abs() < 1e-12);
    }

    #[test]
    fn conditional_qmgf_rejects_impossible_postselection() {
        let zero = pure(pauli::ket0());
        let p1 = PovmElement::projector_onto(&pauli::ket1()).unwrap();
        assert!(matches!(
            conditional_qmgf(&zero, &p1, &pauli::x(), 0.1),
            Err(Error::ZeroPostSelection { .. })
        ));
    }

    #[test]
    fn modular_value_examples() {
        let zero = pure(pauli::ket0());
        let plus = pure(pauli::ket_plus());
        assert!((modular_value(&plus, &zero, &pauli::z(), 0.0).unwrap() - ONE).norm() < 1e-14);
        let v = modular_value(&zero, &zero, &pauli::z(), 0.9).unwrap();
        assert!((v - (-I * 0.9).exp()).norm() < 1e-13);
        let v = modular_value(&plus, &zero, &pauli::z(), FRAC_PI_2).unwrap();
        assert!((v + I).norm() < 1e-13);
    }

    #[test]
    fn modular_value_errors() {
        let zero = pure(pauli::ket0());
        let one = pure(pauli::ket1());
        assert!(matches!(
            modular_value(&zero, &one, &pauli::z(), 0.1),
            Err(Error::OrthogonalSelection { .. })
        ));
        let mixed = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            modular_value(&mixed, &zero, &pauli::z(), 0.1),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn moment_examples() {
        let zero = pure(pauli::ket0());
        let m = moments(&zero, &pauli::z()).unwrap();
        assert!((m.expectation - 1.0).abs() < 1e-15 && m.variance.abs() < 1e-15);
        assert!(covariance(&zero, &pauli::x(), &pauli::y()).unwrap().abs() < 1e-15);
        let m = moments(&DensityOperator::maximally_mixed(2), &pauli::x()).unwrap();
        assert!(m.expectation.abs() < 1e-15 && (m.variance - 1.0).abs() < 1e-14);
    }

    #[test]
    fn finite_difference_of_square() {
        let d = finite_difference(|t| t * t, DerivativeOrder::Second, 0.0, 1e-3);
        assert!((d - 2.0).abs() < 1e-6);
        let d: C64 = finite_difference(|t| (I * t).exp(), DerivativeOrder::First, 0.0, 1e-5);
        assert!((d - I).norm() < 1e-9);
        let m = mixed_partial(|x, y| x * y * y, (1.0, 2.0), 1e-3);
        assert!((m - 4.0).abs() < 1e-8);
    }

    #[test]
    fn qmgf_derivative_is_expectation_on_qutrit() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random::density(&mut rng, 3);
        let a = random::hermitian(&mut rng, 3);
        let d = finite_difference(
            |t| qmgf(&rho, &a, t).unwrap(),
            DerivativeOrder::First,
            0.0,
            DEFAULT_STEP_FIRST,
        );
        assert!((d - moments(&rho, &a).unwrap().expectation).abs() < 1e-6);
    }

    #[test]
    fn qmgf_positive_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..10 {
            let rho = random::pure_state(&mut rng, 3);
            let a = random::hermitian(&mut rng, 3);
            for t in linspace(-5.0, 5.0, 101) {
                assert!(qmgf(&rho, &a, t).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn qcf_bounded_by_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random::density(&mut rng, 4);
        let a = random::hermitian(&mut rng, 4);
        for t in linspace(-3.0 * PI, 3.0 * PI, 61) {
            assert!(qcf(&rho, &a, t).unwrap().norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            qmgf(&rho, &pauli::z(), 0.1),
            Err(Error::DimensionMismatch { .. })
        ));
        let _ = CMatrix::zeros(1, 1);
    }
}
