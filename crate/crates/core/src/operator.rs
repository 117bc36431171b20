//! Dense complex operators and the validated wrappers used throughout the crate.
//!
//! Every wrapper is an immutable value. Construction checks the defining
//! property (Hermiticity, positivity, unit trace) once, under a configurable
//! [`Tolerances`], and stores an exactly Hermitian copy of the input.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{spectral_decompose, SpectralDecomposition};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Validation thresholds for operator construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub psd: f64,
    pub recon: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-9,
            trace: 1e-9,
            psd: 1e-10,
            recon: 1e-9,
        }
    }
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max |a - b|` over entries.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product of complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_square_finite(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    Ok(())
}

/// A self-adjoint operator: observables, Hamiltonians, POVM elements.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, &Tolerances::default())
    }

    pub fn with_tolerance(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_square_finite(&matrix)?;
        let deviation = hermitian_deviation(&matrix);
        if deviation > tol.hermitian {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self::symmetrized(matrix))
    }

    /// Wraps `(m + m^dagger) / 2` without any check. Callers guarantee the input
    /// is Hermitian up to round-off.
    pub(crate) fn symmetrized(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        Self {
            matrix: (matrix + adj).scale(0.5),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        Self { matrix: m }
    }

    pub fn from_real(rows: usize, data: &[f64]) -> Result<Self> {
        if data.len() != rows * rows {
            return Err(Error::DimensionMismatch {
                expected: rows * rows,
                found: data.len(),
            });
        }
        Self::new(CMatrix::from_row_iterator(
            rows,
            rows,
            data.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: identity(dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        spectral_decompose(self)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// `self - shift * 1`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= C64::new(shift, 0.0);
        }
        Self { matrix: m }
    }

    /// Square of the operator, Hermitian by construction.
    pub fn square(&self) -> Self {
        Self::symmetrized(&self.matrix * &self.matrix)
    }

    /// Symmetrized product `(AB + BA) / 2`.
    pub fn jordan_product(&self, other: &Self) -> Result<Self> {
        same_dim(self.dim(), other.dim())?;
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Ok(Self::symmetrized((ab + ba).scale(0.5)))
    }

    /// Whether `[self, other] = 0` up to `tol` entrywise.
    pub fn commutes_with(&self, other: &Self, tol: f64) -> bool {
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        max_abs_diff(&ab, &ba) <= tol
    }
}

pub(crate) fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

/// A quantum state: positive semi-definite with unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
}

/// Validates `m` as a density operator under default tolerances.
///
/// Eigenvalues in `[-psd, 0)` are clamped to zero and the result renormalized.
pub fn make_density(m: CMatrix) -> Result<DensityOperator> {
    DensityOperator::with_tolerance(m, &Tolerances::default())
}

impl DensityOperator {
    pub fn new(m: CMatrix) -> Result<Self> {
        make_density(m)
    }

    pub fn with_tolerance(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        let op = HermitianOperator::with_tolerance(m, tol)?;
        let trace = op.matrix.trace().re;
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::TraceNotOne { trace });
        }
        let spec = spectral_decompose(&op)?;
        let min = spec.min_eigenvalue();
        if min < -tol.psd {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        if min < 0.0 {
            let total: f64 = spec.eigenvalues().iter().map(|&l| l.max(0.0)).sum();
            let m = spec.map_real(|l| l.max(0.0) / total);
            return Ok(Self {
                op: HermitianOperator::symmetrized(m),
            });
        }
        Ok(Self { op })
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn from_pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self {
            op: HermitianOperator::symmetrized(&v * v.adjoint()),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOperator {
                matrix: identity(dim).unscale(dim as f64),
            },
        }
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, other: &Self, w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidArgument(format!(
                "mixing weight {w} outside [0, 1]"
            )));
        }
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            op: HermitianOperator::symmetrized(
                self.matrix().scale(w) + other.matrix().scale(1.0 - w),
            ),
        })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.op.matrix
    }

    pub fn as_hermitian(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        spectral_decompose(&self.op)
    }

    /// `Tr(x rho)`.
    pub fn expectation(&self, x: &CMatrix) -> Result<C64> {
        same_dim(self.dim(), x.nrows())?;
        Ok(trace_product(x, self.matrix()))
    }

    /// Purity `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        trace_product(self.matrix(), self.matrix()).re
    }

    /// The dominant eigenvector if the state is rank one within `tol`
    /// (total weight outside the top eigenvalue).
    pub fn pure_vector(&self, tol: f64) -> Result<CVector> {
        let spec = self.spectral()?;
        let n = self.dim();
        let mixedness: f64 = spec.eigenvalues()[..n - 1].iter().map(|l| l.abs()).sum();
        if mixedness > tol {
            return Err(Error::NotPure { mixedness });
        }
        Ok(spec.eigenvectors().column(n - 1).into_owned())
    }
}

/// The canonical amplitude `W = rho^{1/2}`, satisfying `W W^dagger = rho`.
pub fn canonical_amplitude(rho: &DensityOperator) -> Result<CMatrix> {
    let spec = rho.spectral()?;
    Ok(spec.map_real(|l| l.max(0.0).sqrt()))
}

/// A POVM element: `0 <= Pi <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmElement {
    op: HermitianOperator,
}

impl PovmElement {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::with_tolerance(m, &Tolerances::default())
    }

    pub fn with_tolerance(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        let op = HermitianOperator::with_tolerance(m, tol)?;
        let spec = spectral_decompose(&op)?;
        let min = spec.min_eigenvalue();
        let max = spec.max_eigenvalue();
        if min < -tol.psd {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        if max > 1.0 + tol.psd {
            return Err(Error::InvalidArgument(format!(
                "POVM element has eigenvalue {max} > 1"
            )));
        }
        Ok(Self { op })
    }

    /// Rank-one projector onto the normalized `phi`.
    pub fn projector_onto(phi: &CVector) -> Result<Self> {
        let rho = DensityOperator::from_pure(phi)?;
        Ok(Self { op: rho.op })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.op.matrix
    }
}

impl From<DensityOperator> for HermitianOperator {
    fn from(rho: DensityOperator) -> Self {
        rho.op
    }
}
