//! Power iteration for the dominant eigenpair of a dense complex matrix
//! and the spectral norm via the Gram matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::FockError;

type CMat = DMatrix<Complex64>;
type CVec = DVector<Complex64>;

const MAX_ITERATIONS: usize = 20_000;
const RESIDUAL_TOL: f64 = 1e-12;

/// Dominant eigenpair by power iteration with a Rayleigh estimate.
///
/// Converges at the ratio of the two largest eigenvalue moduli; the
/// kernels this crate builds have a healthy gap, so a few hundred
/// iterations suffice. Errors out if the residual target is never met.
pub fn power_iterate(m: &CMat) -> Result<(Complex64, CVec), FockError> {
    let dim = m.nrows();
    let mut x = CVec::from_element(dim, Complex64::new(1.0, 0.0));
    x /= Complex64::new(x.norm(), 0.0);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let y = m * &x;
        let mu = x.dotc(&y);
        residual = (&y - &x * mu).norm();
        let scale = y.norm();
        if scale == 0.0 {
            // The matrix annihilates the iterate: eigenvalue 0.
            return Ok((Complex64::new(0.0, 0.0), x));
        }
        x = y / Complex64::new(scale, 0.0);
        if residual <= RESIDUAL_TOL * mu.norm().max(f64::MIN_POSITIVE) {
            return Ok((mu, x));
        }
    }
    Err(FockError::NotConverged { residual })
}

/// Largest singular value, from power iteration on M†M.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let dim = gram.nrows();
    let mut x = CVec::from_element(dim, Complex64::new(1.0, 0.0));
    x /= Complex64::new(x.norm(), 0.0);
    let mut value = 0.0_f64;
    for _ in 0..MAX_ITERATIONS {
        let y = &gram * &x;
        let next = x.dotc(&y).re.max(0.0);
        let scale = y.norm();
        if scale == 0.0 {
            return 0.0;
        }
        x = y / Complex64::new(scale, 0.0);
        if (next - value).abs() <= 1e-14 * next.max(1e-300) {
            return next.sqrt();
        }
        value = next;
    }
    value.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn diagonal_dominant_pair() {
        let m = CMat::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new(0.0, -(1.0 + i as f64))
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let (mu, v) = power_iterate(&m).unwrap();
        assert_abs_diff_eq!((mu - Complex64::new(0.0, -4.0)).norm(), 0.0, epsilon = 1e-10);
        assert_relative_eq!(v[3].norm(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn spectral_norm_of_scaled_identity() {
        let m = CMat::identity(6, 6) * Complex64::new(0.0, -2.5);
        assert_relative_eq!(spectral_norm(&m), 2.5, max_relative = 1e-12);
    }

    #[test]
    fn spectral_norm_of_rank_one() {
        // ||u v^T||₂ = ||u||·||v||.
        let u = CVec::from_fn(5, |i, _| Complex64::new(i as f64, 1.0));
        let v = CVec::from_fn(5, |i, _| Complex64::new(1.0, -(i as f64)));
        let m = &u * v.transpose();
        assert_relative_eq!(spectral_norm(&m), u.norm() * v.norm(), max_relative = 1e-10);
    }
}
