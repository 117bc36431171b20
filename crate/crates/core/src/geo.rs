//! Matrix geometric mean, fidelity, the geometric-mean generating function,
//! the Golden-Thompson comparison and the Chernoff functional.

use crate::error::{Error, Result};
use crate::operator::{same_dim, trace_product, CMatrix, DensityOperator, HermitianOperator};
use crate::spectral::{spectral_decompose, SpectralDecomposition};

/// Smallest eigenvalue accepted as strictly positive.
pub const PD_FLOOR: f64 = 1e-12;

/// A strictly positive definite operator with its spectrum cached.
#[derive(Debug, Clone)]
pub struct PositiveOperator {
    op: HermitianOperator,
    spectrum: SpectralDecomposition,
}

impl PositiveOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let spectrum = spectral_decompose(&op)?;
        let min = spectrum.min_eigenvalue();
        if min < PD_FLOOR {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: min,
            });
        }
        Ok(Self { op, spectrum })
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    pub fn from_density(rho: &DensityOperator) -> Result<Self> {
        Self::new(rho.as_hermitian().clone())
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn as_hermitian(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn sqrt(&self) -> CMatrix {
        self.spectrum.map_real(f64::sqrt)
    }

    pub fn power(&self, s: f64) -> CMatrix {
        self.spectrum.map_real(|l| l.powf(s))
    }

    pub fn log(&self) -> CMatrix {
        self.spectrum.map_real(f64::ln)
    }
}

/// `A #_u B = A^{1/2} (A^{-1/2} B A^{-1/2})^u A^{1/2}`.
pub fn geometric_mean(
    a: &PositiveOperator,
    b: &PositiveOperator,
    u: f64,
) -> Result<PositiveOperator> {
    same_dim(a.dim(), b.dim())?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("weight {u} outside [0, 1]")));
    }
    let half = a.sqrt();
    let inv_half = a.power(-0.5);
    let inner = HermitianOperator::symmetrized(&inv_half * b.matrix() * &inv_half);
    let inner = PositiveOperator::new(inner)?;
    PositiveOperator::new(HermitianOperator::symmetrized(
        &half * inner.power(u) * &half,
    ))
}

/// `Tr sqrt(A) sqrt(B)` singular-value sum, computed as `Tr sqrt(sqrt(A) B sqrt(A))`.
/// Accepts rank-deficient states.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho.dim(), sigma.dim())?;
    let root = rho.spectral()?.map_real(|l| l.max(0.0).sqrt());
    let m = HermitianOperator::symmetrized(&root * sigma.matrix() * &root);
    Ok(spectral_decompose(&m)?
        .eigenvalues()
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoMeanBound {
    pub tr_geo: f64,
    pub fid: f64,
}

/// `Tr(rho # sigma)` next to the fidelity it is bounded by.
pub fn geo_mean_trace_bound(
    rho: &DensityOperator,
    sigma: &DensityOperator,
) -> Result<GeoMeanBound> {
    let g = geometric_mean(
        &PositiveOperator::from_density(rho)?,
        &PositiveOperator::from_density(sigma)?,
        0.5,
    )?;
    Ok(GeoMeanBound {
        tr_geo: g.matrix().trace().re,
        fid: fidelity(rho, sigma)?,
    })
}

/// `Tr(rho # exp(theta V))`.
pub fn geo_mgf(rho: &DensityOperator, v: &HermitianOperator, theta: f64) -> Result<f64> {
    same_dim(rho.dim(), v.dim())?;
    let r = PositiveOperator::from_density(rho)?;
    let e = PositiveOperator::new(HermitianOperator::symmetrized(
        spectral_decompose(v)?.map_real(|l| (theta * l).exp()),
    ))?;
    Ok(geometric_mean(&r, &e, 0.5)?.matrix().trace().re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoDerivatives {
    pub first: f64,
    pub second: f64,
}

/// Closed-form derivatives of [`geo_mgf`] at zero, in the eigenbasis
/// `{p_k, |k>}` of `rho`:
/// `first = Tr(sqrt(rho) V) / 2` and
/// `second = Tr(sqrt(rho) V^2) / 2 - sum_{kj} p_k^{3/2} |V_kj|^2 / (sqrt p_k + sqrt p_j)^2`.
pub fn geo_mgf_derivatives(rho: &DensityOperator, v: &HermitianOperator) -> Result<GeoDerivatives> {
    same_dim(rho.dim(), v.dim())?;
    let r = PositiveOperator::from_density(rho)?;
    let spec = r.spectral();
    let root = r.sqrt();
    let first = 0.5 * trace_product(&root, v.matrix()).re;
    let v2 = v.square();
    let mut second = 0.5 * trace_product(&root, v2.matrix()).re;
    let u = spec.eigenvectors();
    let vk = u.adjoint() * v.matrix() * u;
    let roots: Vec<f64> = spec.eigenvalues().iter().map(|p| p.sqrt()).collect();
    for (k, &sk) in roots.iter().enumerate() {
        for (j, &sj) in roots.iter().enumerate() {
            second -= sk.powi(3) * vk[(k, j)].norm_sqr() / (sk + sj).powi(2);
        }
    }
    Ok(GeoDerivatives { first, second })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenThompson {
    pub lhs: f64,
    pub rhs: f64,
}

/// `Tr exp(A + B)` and `Tr(exp(A) exp(B))`.
pub fn golden_thompson_gap(a: &HermitianOperator, b: &HermitianOperator) -> Result<GoldenThompson> {
    let sum = a.add(b)?;
    let lhs = spectral_decompose(&sum)?
        .eigenvalues()
        .iter()
        .map(|l| l.exp())
        .sum();
    let ea = spectral_decompose(a)?.map_real(f64::exp);
    let eb = spectral_decompose(b)?.map_real(f64::exp);
    Ok(GoldenThompson {
        lhs,
        rhs: trace_product(&ea, &eb).re,
    })
}

fn positive_pair(
    rho: &DensityOperator,
    sigma: &DensityOperator,
) -> Result<(PositiveOperator, PositiveOperator)> {
    same_dim(rho.dim(), sigma.dim())?;
    Ok((
        PositiveOperator::from_density(rho)?,
        PositiveOperator::from_density(sigma)?,
    ))
}

/// `psi(theta) = log Tr(rho^{1-theta} sigma^theta)` for `theta` in `[0, 1]`.
pub fn chernoff(rho: &DensityOperator, sigma: &DensityOperator, theta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidArgument(format!(
            "theta {theta} outside [0, 1]"
        )));
    }
    let (r, s) = positive_pair(rho, sigma)?;
    Ok(trace_product(&r.power(1.0 - theta), &s.power(theta))
        .re
        .ln())
}

/// `D(rho || sigma) = Tr rho (log rho - log sigma)` in nats.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let (r, s) = positive_pair(rho, sigma)?;
    Ok(trace_product(rho.matrix(), &(r.log() - s.log())).re)
}

/// `Tr rho (log sigma - log rho)^2 - D(rho || sigma)^2`.
pub fn relative_entropy_variance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let (r, s) = positive_pair(rho, sigma)?;
    let diff = s.log() - r.log();
    let d = trace_product(rho.matrix(), &diff).re;
    Ok(trace_product(rho.matrix(), &(&diff * &diff)).re - d * d)
}
