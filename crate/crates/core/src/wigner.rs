//! Discrete phase space for odd dimension `d`: clock and shift operators,
//! displacement operators, the discrete characteristic function, the Wigner
//! function and its phase-point operators.
//!
//! Normalization: `A_x = (1/d) sum_u w^{<x,u>} D_u` is Hermitian with unit
//! trace, `W(x) = Tr(rho A_x) / d` sums to one, and `rho = sum_x W(x) A_x`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::io::format_number;
use crate::operator::{same_dim, trace_product, CMatrix, DensityOperator, C64, ZERO};

const TABLE_SUM_TOL: f64 = 1e-10;
const PRINTED_HALF_ULP: f64 = 5e-11;

/// A point `(q, p)` of the `Z_d x Z_d` grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhasePoint {
    pub q: usize,
    pub p: usize,
}

impl PhasePoint {
    pub fn new(d: usize, q: usize, p: usize) -> Result<Self> {
        if q >= d || p >= d {
            return Err(Error::InvalidArgument(format!(
                "phase point ({q},{p}) outside Z_{d} x Z_{d}"
            )));
        }
        Ok(Self { q, p })
    }

    /// Reduces arbitrary integers mod `d`.
    pub fn wrapping(d: usize, q: i64, p: i64) -> Self {
        let m = d as i64;
        Self {
            q: q.rem_euclid(m) as usize,
            p: p.rem_euclid(m) as usize,
        }
    }

    /// All `d^2` points in lexicographic `(q, p)` order.
    pub fn grid(d: usize) -> impl Iterator<Item = PhasePoint> {
        (0..d).flat_map(move |q| (0..d).map(move |p| PhasePoint { q, p }))
    }
}

fn check_odd(d: usize) -> Result<()> {
    if d.is_multiple_of(2) {
        return Err(Error::EvenDimension(d));
    }
    if d < 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension {d} is too small for a phase space"
        )));
    }
    Ok(())
}

/// `w^k = exp(2 pi i k / d)` with `k` reduced mod `d` first.
fn root(d: usize, k: i64) -> C64 {
    let k = k.rem_euclid(d as i64);
    C64::from_polar(1.0, TAU * k as f64 / d as f64)
}

/// Exponent of `tau = w^{(d+1)/2}`, the square root of `w` for odd `d`.
fn tau_exponent(d: usize) -> i64 {
    (d as i64 + 1) / 2
}

/// Symplectic form `<x, u> = x_q u_p - x_p u_q`.
fn symplectic(x: PhasePoint, u: PhasePoint) -> i64 {
    x.q as i64 * u.p as i64 - x.p as i64 * u.q as i64
}

/// Shift `X|k> = |k+1>` and clock `Z|k> = w^k |k>`.
pub fn clock_shift(d: usize) -> Result<(CMatrix, CMatrix)> {
    check_odd(d)?;
    let x = CMatrix::from_fn(d, d, |r, c| {
        if r == (c + 1) % d {
            C64::new(1.0, 0.0)
        } else {
            ZERO
        }
    });
    let z = CMatrix::from_fn(d, d, |r, c| if r == c { root(d, r as i64) } else { ZERO });
    Ok((x, z))
}

/// `D_u = tau^{-qp} Z^q X^p`.
pub fn displacement(d: usize, u: PhasePoint) -> Result<CMatrix> {
    check_odd(d)?;
    PhasePoint::new(d, u.q, u.p)?;
    let (q, p) = (u.q as i64, u.p as i64);
    let phase = -q * p * tau_exponent(d);
    // Z^q X^p |k> = w^{q(k+p)} |k+p>
    Ok(CMatrix::from_fn(d, d, |r, c| {
        if r == (c + u.p) % d {
            root(d, phase + q * (c as i64 + p))
        } else {
            ZERO
        }
    }))
}

/// `chi(u) = Tr(rho D_u)`.
pub fn discrete_qcf(rho: &DensityOperator, u: PhasePoint) -> Result<C64> {
    let d = rho.dim();
    check_odd(d)?;
    Ok(trace_product(rho.matrix(), &displacement(d, u)?))
}

fn phase_point_operator(d: usize, x: PhasePoint, displacements: &[CMatrix]) -> CMatrix {
    let mut a = CMatrix::zeros(d, d);
    for (u, du) in PhasePoint::grid(d).zip(displacements) {
        a += du * root(d, symplectic(x, u));
    }
    a / C64::new(d as f64, 0.0)
}

/// The `d^2` phase-point (Fano) operators in lexicographic order.
pub fn phase_point_operators(d: usize) -> Result<Vec<(PhasePoint, CMatrix)>> {
    check_odd(d)?;
    let displacements = PhasePoint::grid(d)
        .map(|u| displacement(d, u))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhasePoint::grid(d)
        .map(|x| (x, phase_point_operator(d, x, &displacements)))
        .collect())
}

/// Real `d x d` Wigner grid, indexed by `q * d + p`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerTable {
    d: usize,
    values: Vec<f64>,
}

impl WignerTable {
    pub fn new(d: usize, values: Vec<f64>) -> Result<Self> {
        Self::with_sum_tolerance(d, values, TABLE_SUM_TOL)
    }

    fn with_sum_tolerance(d: usize, values: Vec<f64>, tol: f64) -> Result<Self> {
        check_odd(d)?;
        if values.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: values.len(),
            });
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!(
                "Wigner table sums to {total}, not 1"
            )));
        }
        Ok(Self { d, values })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: PhasePoint) -> f64 {
        self.values[x.q * self.d + x.p]
    }

    pub fn iter(&self) -> impl Iterator<Item = (PhasePoint, f64)> + '_ {
        PhasePoint::grid(self.d).zip(self.values.iter().copied())
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `sum_q W(q, p)` for each `p`: the computational-basis distribution.
    pub fn computational_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        for (x, w) in self.iter() {
            out[x.p] += w;
        }
        out
    }

    /// `sum_p W(q, p)` for each `q`: the Fourier-basis distribution.
    pub fn conjugate_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.d];
        for (x, w) in self.iter() {
            out[x.q] += w;
        }
        out
    }

    /// Header `q,p,w`, then one row per point in lexicographic order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,p,w\n");
        for (x, w) in self.iter() {
            out.push_str(&format!("{},{},{}\n", x.q, x.p, format_number(w)));
        }
        out
    }

    /// Parses `q,p,w` rows (header optional, any row order). The dimension
    /// is inferred from the row count.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line.starts_with('q') {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("expected q,p,w but got `{line}`")));
            }
            let q = f[0]
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{}: {e}", f[0])))?;
            let p = f[1]
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{}: {e}", f[1])))?;
            let w = f[2]
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{}: {e}", f[2])))?;
            rows.push((q, p, w));
        }
        let d = (rows.len() as f64).sqrt().round() as usize;
        if d * d != rows.len() {
            return Err(Error::Parse(format!(
                "{} rows is not a square grid",
                rows.len()
            )));
        }
        check_odd(d)?;
        let mut values = vec![f64::NAN; d * d];
        for (q, p, w) in rows {
            let x = PhasePoint::new(d, q, p)?;
            values[x.q * d + x.p] = w;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Parse("Wigner table has duplicate points".into()));
        }
        // Each printed entry carries up to half a unit in the last decimal.
        Self::with_sum_tolerance(d, values, TABLE_SUM_TOL + (d * d) as f64 * PRINTED_HALF_ULP)
    }
}

/// `W(x) = (1/d^2) sum_u w^{<x,u>} chi(u)`.
pub fn wigner_function(rho: &DensityOperator) -> Result<WignerTable> {
    let d = rho.dim();
    check_odd(d)?;
    let chi = PhasePoint::grid(d)
        .map(|u| discrete_qcf(rho, u))
        .collect::<Result<Vec<_>>>()?;
    let norm = (d * d) as f64;
    let values = PhasePoint::grid(d)
        .map(|x| {
            let s: C64 = PhasePoint::grid(d)
                .zip(&chi)
                .map(|(u, c)| root(d, symplectic(x, u)) * c)
                .sum();
            s.re / norm
        })
        .collect();
    WignerTable::new(d, values)
}

/// `rho = sum_x W(x) A_x`, validated as a density operator.
pub fn reconstruct_state(w: &WignerTable) -> Result<DensityOperator> {
    let d = w.dim();
    let mut m = CMatrix::zeros(d, d);
    for ((x, a), (y, wx)) in phase_point_operators(d)?.into_iter().zip(w.iter()) {
        debug_assert_eq!(x, y);
        m += a * C64::new(wx, 0.0);
    }
    DensityOperator::new(m).map_err(|e| Error::NotAState(e.to_string()))
}

/// `W` evaluated from `Tr(rho A_x) / d` directly; used as a cross-check.
pub fn wigner_from_phase_points(rho: &DensityOperator) -> Result<WignerTable> {
    let d = rho.dim();
    let ops = phase_point_operators(d)?;
    let values = ops
        .iter()
        .map(|(_, a)| {
            same_dim(d, a.nrows())?;
            Ok(trace_product(rho.matrix(), a).re / d as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    WignerTable::new(d, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{identity, max_abs, max_abs_diff, ONE};
    use crate::pauli::basis;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn clock_and_shift_for_three() {
        let (x, z) = clock_shift(3).unwrap();
        let w = C64::from_polar(1.0, TAU / 3.0);
        let expected_x =
            CMatrix::from_row_slice(3, 3, &[ZERO, ZERO, ONE, ONE, ZERO, ZERO, ZERO, ONE, ZERO]);
        assert_eq!(x, expected_x);
        let expected_z = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, w, w * w]));
        assert!(max_abs_diff(&z, &expected_z) < 1e-15);
    }

    #[test]
    fn weyl_relation_and_orders() {
        for d in [3, 5, 7] {
            let (x, z) = clock_shift(d).unwrap();
            let w = C64::from_polar(1.0, TAU / d as f64);
            assert!(max_abs(&(&z * &x - (&x * &z) * w)) < 1e-12);
            assert!(max_abs_diff(&x.pow(d as u32), &identity(d)) < 1e-12);
            assert!(max_abs_diff(&z.pow(d as u32), &identity(d)) < 1e-12);
        }
    }

    #[test]
    fn even_dimension_is_rejected() {
        assert_eq!(clock_shift(4).unwrap_err(), Error::EvenDimension(4));
        assert!(matches!(
            displacement(2, PhasePoint { q: 0, p: 0 }),
            Err(Error::EvenDimension(2))
        ));
    }

    #[test]
    fn tau_squares_to_omega() {
        for d in [3usize, 5, 9] {
            let tau = C64::from_polar(1.0, (d as f64 + 1.0) * std::f64::consts::PI / d as f64);
            assert!((tau * tau - root(d, 1)).norm() < 1e-14);
            assert!((root(d, tau_exponent(d)) - tau).norm() < 1e-14);
        }
    }

    #[test]
    fn displacements_form_orthogonal_unitary_basis() {
        let d = 3;
        let ds: Vec<_> = PhasePoint::grid(d)
            .map(|u| displacement(d, u).unwrap())
            .collect();
        assert!(max_abs_diff(&ds[0], &identity(d)) < 1e-15);
        for (i, a) in ds.iter().enumerate() {
            assert!(max_abs_diff(&(a.adjoint() * a), &identity(d)) < 1e-12);
            for (j, b) in ds.iter().enumerate() {
                let ip = trace_product(&a.adjoint(), b);
                let expected = if i == j { d as f64 } else { 0.0 };
                assert!(
                    (ip - C64::new(expected, 0.0)).norm() < 1e-12,
                    "{i},{j}: {ip}"
                );
            }
        }
    }

    #[test]
    fn displacement_adjoint_is_negated_point() {
        let d = 5;
        for u in PhasePoint::grid(d) {
            let neg = PhasePoint::wrapping(d, -(u.q as i64), -(u.p as i64));
            let a = displacement(d, u).unwrap().adjoint();
            assert!(max_abs_diff(&a, &displacement(d, neg).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn discrete_qcf_examples() {
        let d = 3;
        let mixed = DensityOperator::maximally_mixed(d);
        for u in PhasePoint::grid(d) {
            let c = discrete_qcf(&mixed, u).unwrap();
            let expected = if u == (PhasePoint { q: 0, p: 0 }) {
                1.0
            } else {
                0.0
            };
            assert!((c - C64::new(expected, 0.0)).norm() < 1e-14);
        }
        let zero = DensityOperator::from_pure(&basis(3, 0)).unwrap();
        assert!((discrete_qcf(&zero, PhasePoint { q: 1, p: 0 }).unwrap() - ONE).norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let rho = random::density(&mut rng, 5);
            for u in PhasePoint::grid(5) {
                assert!(discrete_qcf(&rho, u).unwrap().norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn phase_point_operators_are_hermitian_unit_trace() {
        for d in [3, 5] {
            for (_, a) in phase_point_operators(d).unwrap() {
                assert!(max_abs_diff(&a, &a.adjoint()) < 1e-12);
                assert!((a.trace() - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wigner_of_maximally_mixed_is_uniform() {
        let w = wigner_function(&DensityOperator::maximally_mixed(3)).unwrap();
        assert!(w.values().iter().all(|v| (v - 1.0 / 9.0).abs() < 1e-14));
        let rho = reconstruct_state(&WignerTable::new(3, vec![1.0 / 9.0; 9]).unwrap()).unwrap();
        assert!(max_abs_diff(rho.matrix(), &(identity(3) / C64::new(3.0, 0.0))) < 1e-14);
    }

    #[test]
    fn wigner_of_ground_state_matches_brute_force() {
        let rho = DensityOperator::from_pure(&basis(3, 0)).unwrap();
        let w = wigner_function(&rho).unwrap();
        let brute = wigner_from_phase_points(&rho).unwrap();
        for (a, b) in w.values().iter().zip(brute.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((w.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // |0><0| lives on the p = 0 column.
        for (x, v) in w.iter() {
            let expected = if x.p == 0 { 1.0 / 3.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-12, "{x:?}: {v}");
        }
    }

    #[test]
    fn round_trips_and_marginals() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..20 {
            let rho = random::density(&mut rng, 3);
            let w = wigner_function(&rho).unwrap();
            let back = reconstruct_state(&w).unwrap();
            assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-9);
            for (k, m) in w.computational_marginal().iter().enumerate() {
                assert!((m - rho.matrix()[(k, k)].re).abs() < 1e-10);
            }
        }
        for _ in 0..5 {
            let rho = random::pure_state(&mut rng, 5);
            let back = reconstruct_state(&wigner_function(&rho).unwrap()).unwrap();
            assert!(max_abs_diff(back.matrix(), rho.matrix()) < 1e-9);
        }
    }

    #[test]
    fn linearity_and_negativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let r1 = random::density(&mut rng, 3);
        let r2 = random::density(&mut rng, 3);
        let alpha = 0.3;
        let mixed = wigner_function(&r1.mix(&r2, alpha).unwrap()).unwrap();
        let (w1, w2) = (wigner_function(&r1).unwrap(), wigner_function(&r2).unwrap());
        for k in 0..9 {
            let lin = alpha * w1.values()[k] + (1.0 - alpha) * w2.values()[k];
            assert!((mixed.values()[k] - lin).abs() < 1e-12);
        }
        let psi = random::pure_state(&mut rng, 3);
        assert!(wigner_function(&psi).unwrap().min() < -1e-3);
    }

    #[test]
    fn csv_round_trip_and_bad_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let w = wigner_function(&random::density(&mut rng, 3)).unwrap();
        let csv = w.to_csv();
        assert!(csv.starts_with("q,p,w\n0,0,"));
        let back = WignerTable::from_csv(&csv).unwrap();
        for (a, b) in back.values().iter().zip(w.values()) {
            assert!((a - b).abs() <= 1e-10);
        }
        assert!(WignerTable::new(3, vec![0.5; 9]).is_err());
        assert!(WignerTable::new(3, vec![1.0 / 9.0; 8]).is_err());
        let mut bad = vec![0.0; 9];
        bad[0] = 2.0;
        bad[1] = -1.0;
        assert!(matches!(
            reconstruct_state(&WignerTable::new(3, bad).unwrap()),
            Err(Error::NotAState(_))
        ));
    }
}
