//! Pauli matrices and a few standard kets.

use crate::operator::{CVector, HermitianOperator, C64};

pub fn x() -> HermitianOperator {
    HermitianOperator::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("sigma_x")
}

pub fn y() -> HermitianOperator {
    let m = nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    );
    HermitianOperator::new(m).expect("sigma_y")
}

pub fn z() -> HermitianOperator {
    HermitianOperator::from_real_diagonal(&[1.0, -1.0])
}

/// Computational basis vector `|k>` in dimension `dim`.
pub fn basis(dim: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[k] = C64::new(1.0, 0.0);
    v
}

pub fn ket0() -> CVector {
    basis(2, 0)
}

pub fn ket1() -> CVector {
    basis(2, 1)
}

pub fn ket_plus() -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)])
}

pub fn ket_minus() -> CVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CVector::from_vec(vec![C64::new(s, 0.0), C64::new(-s, 0.0)])
}
