//! Kirkwood-Dirac and Margenau-Hill quasiprobability tables, weak values,
//! the n-point weak-value chain and a finite-grid Bochner classicality test.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::format_number;
use crate::operator::{
    same_dim, trace_product, CMatrix, CVector, DensityOperator, HermitianOperator, PovmElement,
    C64, ONE, ZERO,
};
use crate::spectral::{spectral_decompose, spectral_projectors, ProjectorFamily};
use crate::statfuncs::POSTSELECT_TOL;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;
/// Chain branches with a smaller post-selection amplitude are skipped.
pub const AMPLITUDE_TOL: f64 = 1e-12;
const TABLE_SUM_TOL: f64 = 1e-10;
const PRINTED_HALF_ULP: f64 = 5e-11;

/// One observable's outcomes (eigenvalue cluster centers, ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub label: String,
    pub outcomes: Vec<f64>,
}

/// Complex quasiprobabilities over joint outcome tuples, stored densely in
/// lexicographic order of outcome indices.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiProbTable {
    axes: Vec<Axis>,
    values: Vec<C64>,
}

impl QuasiProbTable {
    pub fn new(axes: Vec<Axis>, values: Vec<C64>) -> Result<Self> {
        Self::with_sum_tolerance(axes, values, TABLE_SUM_TOL)
    }

    fn with_sum_tolerance(axes: Vec<Axis>, values: Vec<C64>, tol: f64) -> Result<Self> {
        let size: usize = axes.iter().map(|a| a.outcomes.len()).product();
        if axes.is_empty() || size != values.len() {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: values.len(),
            });
        }
        let total: C64 = values.iter().sum();
        if (total - ONE).norm() > tol {
            return Err(Error::InvalidArgument(format!(
                "quasiprobabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { axes, values })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn total(&self) -> C64 {
        self.values.iter().sum()
    }

    fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.outcomes.len()).collect()
    }

    fn flat_index(&self, index: &[usize]) -> Option<usize> {
        if index.len() != self.axes.len() {
            return None;
        }
        let mut flat = 0;
        for (&i, n) in index.iter().zip(self.shape()) {
            if i >= n {
                return None;
            }
            flat = flat * n + i;
        }
        Some(flat)
    }

    pub fn get(&self, index: &[usize]) -> Option<C64> {
        self.flat_index(index).map(|k| self.values[k])
    }

    /// Looks up an entry by outcome values (within `tol`).
    pub fn get_by_outcomes(&self, outcomes: &[f64], tol: f64) -> Option<C64> {
        let index: Option<Vec<usize>> = self
            .axes
            .iter()
            .zip(outcomes)
            .map(|(axis, &x)| axis.outcomes.iter().position(|&o| (o - x).abs() <= tol))
            .collect();
        self.get(&index?)
    }

    /// `(index tuple, value)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, C64)> + '_ {
        let shape = self.shape();
        self.values.iter().enumerate().map(move |(mut flat, &v)| {
            let mut idx = vec![0; shape.len()];
            for k in (0..shape.len()).rev() {
                idx[k] = flat % shape[k];
                flat /= shape[k];
            }
            (idx, v)
        })
    }

    /// Distribution of the first axis after summing out all later axes.
    pub fn first_marginal(&self) -> Vec<C64> {
        let mut out = vec![ZERO; self.axes[0].outcomes.len()];
        for (idx, v) in self.iter() {
            out[idx[0]] += v;
        }
        out
    }

    /// `sum prod_k x_k * Pr(x)`.
    pub fn product_moment(&self) -> C64 {
        self.iter()
            .map(|(idx, v)| {
                let w: f64 = idx
                    .iter()
                    .zip(&self.axes)
                    .map(|(&i, axis)| axis.outcomes[i])
                    .product();
                v * w
            })
            .sum()
    }

    pub fn real_part(&self) -> Self {
        Self {
            axes: self.axes.clone(),
            values: self.values.iter().map(|v| C64::new(v.re, 0.0)).collect(),
        }
    }

    /// CSV with header `outcome_1,...,outcome_n,re,im`.
    pub fn to_csv(&self) -> String {
        let n = self.axes.len();
        let mut out = String::new();
        let header: Vec<String> = (1..=n).map(|k| format!("outcome_{k}")).collect();
        out.push_str(&header.join(","));
        out.push_str(",re,im\n");
        for (idx, v) in self.iter() {
            let mut row: Vec<String> = idx
                .iter()
                .zip(&self.axes)
                .map(|(&i, axis)| format_number(axis.outcomes[i]))
                .collect();
            row.push(format_number(v.re));
            row.push(format_number(v.im));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`QuasiProbTable::to_csv`]. Axis labels are not
    /// part of the format and come back as `A1..An`.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty table".into()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 3 || cols[cols.len() - 2] != "re" || cols[cols.len() - 1] != "im" {
            return Err(Error::Parse("bad quasiprobability header".into()));
        }
        let n = cols.len() - 2;
        let mut outcomes: Vec<Vec<f64>> = vec![Vec::new(); n];
        let mut rows = Vec::new();
        for line in lines {
            let fields = line
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("{s}: {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if fields.len() != n + 2 {
                return Err(Error::Parse(format!("row has {} fields", fields.len())));
            }
            for k in 0..n {
                if !outcomes[k].contains(&fields[k]) {
                    outcomes[k].push(fields[k]);
                }
            }
            rows.push(fields);
        }
        for o in &mut outcomes {
            o.sort_by(f64::total_cmp);
        }
        let axes: Vec<Axis> = outcomes
            .into_iter()
            .enumerate()
            .map(|(k, outcomes)| Axis {
                label: format!("A{}", k + 1),
                outcomes,
            })
            .collect();
        let size: usize = axes.iter().map(|a| a.outcomes.len()).product();
        let mut values = vec![ZERO; size];
        let table = Self {
            axes,
            values: Vec::new(),
        };
        for row in &rows {
            let idx: Vec<usize> = (0..n)
                .map(|k| {
                    table.axes[k]
                        .outcomes
                        .iter()
                        .position(|&o| o == row[k])
                        .expect("seen")
                })
                .collect();
            let flat_shape: Vec<usize> = table.shape();
            let mut flat = 0;
            for (&i, s) in idx.iter().zip(flat_shape) {
                flat = flat * s + i;
            }
            values[flat] = C64::new(row[n], row[n + 1]);
        }
        // Each printed entry carries up to half a unit in the last decimal.
        let tol = TABLE_SUM_TOL + 2.0 * values.len() as f64 * PRINTED_HALF_ULP;
        Self::with_sum_tolerance(table.axes, values, tol)
    }
}

fn families(
    observables: &[HermitianOperator],
    dim: usize,
    cluster_tol: f64,
) -> Result<Vec<ProjectorFamily>> {
    observables
        .iter()
        .map(|a| {
            same_dim(dim, a.dim())?;
            spectral_projectors(a, cluster_tol)
        })
        .collect()
}

/// `Pr(a_1, ..., a_n) = Tr[P_n(a_n) ... P_1(a_1) rho]`: the first listed
/// observable is measured first and sits rightmost, next to the state.
pub fn kd_distribution(
    rho: &DensityOperator,
    observables: &[HermitianOperator],
    cluster_tol: f64,
) -> Result<QuasiProbTable> {
    if observables.len() < 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: observables.len(),
        });
    }
    let fams = families(observables, rho.dim(), cluster_tol)?;
    let mut values = Vec::new();
    fill_kd(&fams, 0, rho.matrix().clone(), &mut values);
    let axes = fams
        .iter()
        .enumerate()
        .map(|(k, f)| Axis {
            label: format!("A{}", k + 1),
            outcomes: f.values(),
        })
        .collect();
    QuasiProbTable::new(axes, values)
}

fn fill_kd(fams: &[ProjectorFamily], depth: usize, acc: CMatrix, out: &mut Vec<C64>) {
    if depth == fams.len() {
        out.push(acc.trace());
        return;
    }
    for entry in fams[depth].entries() {
        fill_kd(fams, depth + 1, entry.projector.matrix() * &acc, out);
    }
}

/// Real part of the Kirkwood-Dirac table.
pub fn mh_distribution(
    rho: &DensityOperator,
    observables: &[HermitianOperator],
    cluster_tol: f64,
) -> Result<QuasiProbTable> {
    Ok(kd_distribution(rho, observables, cluster_tol)?.real_part())
}

/// `Pr(A = a | B = b) = Tr[P_B(b) P_A(a) psi] / Tr[P_B(b) psi]` for every
/// outcome `a`, ascending. For a pure state this is `<b|a><a|psi> / <b|psi>`.
pub fn conditional_kd(
    psi: &DensityOperator,
    a: &HermitianOperator,
    b: &HermitianOperator,
    outcome_b: f64,
    cluster_tol: f64,
) -> Result<Vec<(f64, C64)>> {
    same_dim(psi.dim(), a.dim())?;
    same_dim(psi.dim(), b.dim())?;
    let fam_a = spectral_projectors(a, cluster_tol)?;
    let fam_b = spectral_projectors(b, cluster_tol)?;
    let ib = fam_b
        .index_of(outcome_b, cluster_tol.max(1e-8))
        .ok_or(Error::UnknownOutcome(outcome_b))?;
    let pb = fam_b.entries()[ib].projector.matrix();
    let norm = trace_product(pb, psi.matrix());
    if norm.re <= POSTSELECT_TOL {
        return Err(Error::ZeroPostSelection {
            probability: norm.re,
        });
    }
    Ok(fam_a
        .entries()
        .iter()
        .map(|e| {
            let joint = trace_product(&(pb * e.projector.matrix()), psi.matrix());
            (e.value, joint / norm)
        })
        .collect())
}

fn postselected(rho: &DensityOperator, pi: &PovmElement) -> Result<C64> {
    same_dim(rho.dim(), pi.dim())?;
    let p = trace_product(pi.matrix(), rho.matrix());
    if p.re <= POSTSELECT_TOL {
        return Err(Error::ZeroPostSelection { probability: p.re });
    }
    Ok(p)
}

/// `Tr(Pi A rho) / Tr(Pi rho)`.
pub fn weak_value(rho: &DensityOperator, pi: &PovmElement, a: &HermitianOperator) -> Result<C64> {
    let norm = postselected(rho, pi)?;
    same_dim(rho.dim(), a.dim())?;
    Ok(trace_product(&(pi.matrix() * a.matrix()), rho.matrix()) / norm)
}

/// `Ex(A^2 | Pi) - Ex(A | Pi)^2`; complex, and possibly negative when real.
pub fn weak_variance(
    rho: &DensityOperator,
    pi: &PovmElement,
    a: &HermitianOperator,
) -> Result<C64> {
    let first = weak_value(rho, pi, a)?;
    let second = weak_value(rho, pi, &a.square())?;
    Ok(second - first * first)
}

/// Both evaluations of `Tr(A_1 A_2 ... A_n rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NPointCorrelation {
    pub direct: C64,
    pub chain: C64,
    pub skipped_branches: usize,
}

/// `<post|op|pre> / <post|pre>`, or `None` below [`AMPLITUDE_TOL`].
fn pure_weak_value(pre: &CVector, post: &CVector, op_on_pre: &CVector) -> Option<C64> {
    let denom = post.dotc(pre);
    (denom.norm() >= AMPLITUDE_TOL).then(|| post.dotc(op_on_pre) / denom)
}

/// `Tr(A_1 ... A_n rho)` directly, and as a sum over the eigenbasis
/// `{lambda_i, |alpha_i>}` of `rho` of Born probabilities of `A_1` times a
/// chain of weak values of the later projectors, each pre-selected in
/// `|alpha_i>` and post-selected on the previous outcome.
///
/// Degenerate eigenspaces are refined into an orthonormal eigenbasis so every
/// post-selection is onto a vector.
pub fn npoint_correlation(
    rho: &DensityOperator,
    observables: &[HermitianOperator],
) -> Result<NPointCorrelation> {
    let n = observables.len();
    if n < 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: n,
        });
    }
    let dim = rho.dim();
    let mut product = CMatrix::identity(dim, dim);
    for a in observables {
        same_dim(dim, a.dim())?;
        product *= a.matrix();
    }
    let direct = trace_product(&product, rho.matrix());

    let spectra = observables
        .iter()
        .map(spectral_decompose)
        .collect::<Result<Vec<_>>>()?;
    let state = rho.spectral()?;
    let mut chain = ZERO;
    let mut skipped = 0;
    let mut idx = vec![0usize; n];
    for (i, &lambda) in state.eigenvalues().iter().enumerate() {
        let alpha: CVector = state.eigenvectors().column(i).into_owned();
        // Enumerate eigenvector tuples (v_1, ..., v_n) in odometer order.
        idx.iter_mut().for_each(|k| *k = 0);
        'tuples: loop {
            let vec_of =
                |k: usize| -> CVector { spectra[k].eigenvectors().column(idx[k]).into_owned() };
            let v1 = vec_of(0);
            let born = v1.dotc(&alpha).norm_sqr();
            let mut term = C64::new(lambda * born * spectra[0].eigenvalues()[idx[0]], 0.0);
            let mut prev = v1;
            let mut complete = true;
            for k in 1..n {
                let vk = vec_of(k);
                // P_k alpha with P_k = |v_k><v_k|.
                let projected = &vk * vk.dotc(&alpha);
                match pure_weak_value(&alpha, &prev, &projected) {
                    Some(w) => term *= w * spectra[k].eigenvalues()[idx[k]],
                    None => {
                        complete = false;
                        break;
                    }
                }
                prev = vk;
            }
            if complete {
                chain += term;
            } else {
                skipped += 1;
            }
            for k in (0..n).rev() {
                idx[k] += 1;
                if idx[k] < dim {
                    continue 'tuples;
                }
                idx[k] = 0;
            }
            break;
        }
    }
    Ok(NPointCorrelation {
        direct,
        chain,
        skipped_branches: skipped,
    })
}

/// Thresholds deciding the Bochner verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BochnerThresholds {
    pub sym_tol: f64,
    pub pd_tol: f64,
}

impl Default for BochnerThresholds {
    fn default() -> Self {
        Self {
            sym_tol: 1e-8,
            pd_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BochnerVerdict {
    /// Hermitian and positive semi-definite on this grid; classicality not refuted.
    ClassicalCandidate,
    /// `C(-t) != conj C(t)`: the underlying quasiprobability is complex.
    ComplexValued,
    /// Hermitian but not positive definite: the quasiprobability has negative parts.
    NegativeOrNonPD,
}

impl BochnerVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            BochnerVerdict::ClassicalCandidate => "ClassicalCandidate",
            BochnerVerdict::ComplexValued => "ComplexValued",
            BochnerVerdict::NegativeOrNonPD => "NegativeOrNonPD",
        }
    }
}

impl std::fmt::Display for BochnerVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BochnerReport {
    pub hermitian_symmetry_violation: f64,
    pub min_gram_eigenvalue: f64,
    pub grid: Vec<Vec<f64>>,
    pub verdict: BochnerVerdict,
}

impl BochnerReport {
    /// One-line JSON with the verdict and both diagnostics.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "verdict": self.verdict.as_str(),
            "hermitian_symmetry_violation": self.hermitian_symmetry_violation,
            "min_gram_eigenvalue": self.min_gram_eigenvalue,
            "grid_points": self.grid.len(),
        })
        .to_string()
    }
}

/// Cartesian product of `axis` with itself `n_vars` times, lexicographic.
pub fn product_grid(axis: &[f64], n_vars: usize) -> Vec<Vec<f64>> {
    let mut grid = vec![Vec::new()];
    for _ in 0..n_vars {
        grid = grid
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&t| {
                    let mut q = p.clone();
                    q.push(t);
                    q
                })
            })
            .collect();
    }
    grid
}

/// Builds the Gram matrix `G_jk = C(t_j - t_k)` over `grid` and reports its
/// Hermitian-symmetry defect and the least eigenvalue of its Hermitian part.
///
/// A violation on any grid is conclusive; passing only makes the function a
/// candidate for being classical.
pub fn bochner_check<F>(
    sampler: F,
    grid: &[Vec<f64>],
    thresholds: BochnerThresholds,
) -> Result<BochnerReport>
where
    F: Fn(&[f64]) -> Result<C64> + Sync,
{
    let m = grid.len();
    if m == 0 {
        return Err(Error::InvalidArgument("Bochner grid is empty".into()));
    }
    let n_vars = grid[0].len();
    if grid.iter().any(|p| p.len() != n_vars) {
        return Err(Error::InvalidArgument(
            "grid points have mixed arity".into(),
        ));
    }
    let entries: Vec<C64> = (0..m * m)
        .into_par_iter()
        .map(|flat| {
            let (j, k) = (flat / m, flat % m);
            let diff: Vec<f64> = grid[j].iter().zip(&grid[k]).map(|(a, b)| a - b).collect();
            sampler(&diff).map_err(|e| match e {
                Error::SamplerFailure(s) => Error::SamplerFailure(s),
                other => Error::SamplerFailure(other.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gram = CMatrix::from_row_slice(m, m, &entries);

    let mut violation: f64 = 0.0;
    for j in 0..m {
        for k in 0..m {
            violation = violation.max((gram[(k, j)] - gram[(j, k)].conj()).norm());
        }
    }
    let hermitian_part = HermitianOperator::new((&gram + gram.adjoint()).scale(0.5))?;
    let min_eig = spectral_decompose(&hermitian_part)?.min_eigenvalue();
    let verdict = if violation > thresholds.sym_tol {
        BochnerVerdict::ComplexValued
    } else if min_eig < -thresholds.pd_tol {
        BochnerVerdict::NegativeOrNonPD
    } else {
        BochnerVerdict::ClassicalCandidate
    };
    Ok(BochnerReport {
        hermitian_symmetry_violation: violation,
        min_gram_eigenvalue: min_eig,
        grid: grid.to_vec(),
        verdict,
    })
}
