//! Spectral decomposition of Hermitian operators, matrix functions and
//! spectral projector families.

use nalgebra::{DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::operator::{identity, max_abs, max_abs_diff, CMatrix, HermitianOperator, C64};

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;
const RECON_TOL: f64 = 1e-9;

/// `H = U diag(eigenvalues) U^dagger`, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary with eigenvectors as columns.
    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `U f(Lambda) U^dagger` for a complex-valued scalar function.
    pub fn map<F: Fn(f64) -> C64>(&self, f: F) -> CMatrix {
        let u = &self.eigenvectors;
        let n = self.dim();
        let mut scaled = u.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let fj = f(l);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled * u.adjoint()
    }

    /// `U f(Lambda) U^dagger` for a real-valued function; Hermitian output.
    pub fn map_real<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        let m = self.map(|l| C64::new(f(l), 0.0));
        let adj = m.adjoint();
        (m + adj).scale(0.5)
    }
}

/// Eigendecomposition with a reconstruction and unitarity check.
pub fn spectral_decompose(h: &HermitianOperator) -> Result<SpectralDecomposition> {
    let m = h.matrix();
    let n = h.dim();
    let eig = SymmetricEigen::try_new(m.clone(), EIGEN_EPS, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::EigensolverFailure("QR iteration did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::EigensolverFailure("non-finite eigenvalue".into()));
    }

    let decomposition = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };
    let scale = max_abs(m).max(1.0);
    let recon = decomposition.map_real(|l| l);
    let err = max_abs_diff(&recon, m);
    if err > RECON_TOL * scale {
        return Err(Error::EigensolverFailure(format!(
            "reconstruction error {err:e}"
        )));
    }
    let u = &decomposition.eigenvectors;
    let gram = u.adjoint() * u;
    let err = max_abs_diff(&gram, &identity(n));
    if err > RECON_TOL {
        return Err(Error::EigensolverFailure(format!(
            "eigenvectors not orthonormal ({err:e})"
        )));
    }
    Ok(decomposition)
}

/// Scalar functions available through [`matrix_function`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixFunction {
    Exp,
    Log,
    Sqrt,
    Power(f64),
}

/// `U f(Lambda) U^dagger`.
///
/// `Log`, `Sqrt` and non-integer `Power` require a strictly positive spectrum.
pub fn matrix_function(h: &HermitianOperator, f: MatrixFunction) -> Result<CMatrix> {
    let spec = spectral_decompose(h)?;
    let needs_positive = match f {
        MatrixFunction::Exp => false,
        MatrixFunction::Log | MatrixFunction::Sqrt => true,
        MatrixFunction::Power(u) => u.fract() != 0.0,
    };
    if needs_positive && spec.min_eigenvalue() <= 0.0 {
        return Err(Error::NonPositiveSpectrum {
            eigenvalue: spec.min_eigenvalue(),
        });
    }
    Ok(match f {
        MatrixFunction::Exp => spec.map_real(f64::exp),
        MatrixFunction::Log => spec.map_real(f64::ln),
        MatrixFunction::Sqrt => spec.map_real(f64::sqrt),
        MatrixFunction::Power(u) if u.fract() == 0.0 => spec.map_real(|l| l.powi(u as i32)),
        MatrixFunction::Power(u) => spec.map_real(|l| l.powf(u)),
    })
}

/// `exp(z H)` for complex `z`.
pub fn exp_scaled(h: &HermitianOperator, z: C64) -> Result<CMatrix> {
    let spec = spectral_decompose(h)?;
    Ok(spec.map(|l| (z * l).exp()))
}

/// One eigenspace: the cluster center and its orthogonal projector.
#[derive(Debug, Clone)]
pub struct SpectralProjector {
    pub value: f64,
    pub rank: usize,
    pub projector: HermitianOperator,
    /// Orthonormal basis of the eigenspace, as columns.
    pub basis: CMatrix,
}

/// Complete family of orthogonal spectral projectors, values ascending.
#[derive(Debug, Clone)]
pub struct ProjectorFamily {
    entries: Vec<SpectralProjector>,
}

impl ProjectorFamily {
    pub fn entries(&self) -> &[SpectralProjector] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    /// Index of the eigenspace whose value is within `tol` of `value`.
    pub fn index_of(&self, value: f64, tol: f64) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| (e.value - value).abs() <= tol)
    }
}

/// Groups eigenvalues into eigenspaces by single-linkage: consecutive sorted
/// eigenvalues closer than `cluster_tol` share a projector.
pub fn spectral_projectors(h: &HermitianOperator, cluster_tol: f64) -> Result<ProjectorFamily> {
    let spec = spectral_decompose(h)?;
    Ok(projectors_from(&spec, cluster_tol))
}

pub(crate) fn projectors_from(spec: &SpectralDecomposition, cluster_tol: f64) -> ProjectorFamily {
    let vals = spec.eigenvalues();
    let u = spec.eigenvectors();
    let n = vals.len();
    let mut entries = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || vals[k] - vals[k - 1] > cluster_tol {
            let cols: Vec<usize> = (start..k).collect();
            let basis = u.select_columns(cols.iter());
            let p = &basis * basis.adjoint();
            let center = vals[start..k].iter().sum::<f64>() / (k - start) as f64;
            entries.push(SpectralProjector {
                value: center,
                rank: k - start,
                projector: HermitianOperator::symmetrized(p),
                basis,
            });
            start = k;
        }
    }
    ProjectorFamily { entries }
}

/// Real eigenvalues as an owned vector (ascending).
pub fn eigenvalues(h: &HermitianOperator) -> Result<DVector<f64>> {
    Ok(DVector::from_vec(spectral_decompose(h)?.eigenvalues))
}
