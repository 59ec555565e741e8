//! Dense complex matrix exponential: [13/13] Padé with scaling and
//! squaring. The generators in this crate are anti-Hermitian with
//! 1-norms up to a few hundred, well inside the method's comfort zone;
//! unitarity of the results is gated by the callers, not assumed.

use nalgebra::DMatrix;
use num_complex::Complex64;

type CMat = DMatrix<Complex64>;

// Padé-13 numerator coefficients (denominator is the same with
// alternating signs, handled via the odd/even split below).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371_920_351_148_152;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Maximum column sum of moduli.
pub fn one_norm(a: &CMat) -> f64 {
    let mut best = 0.0_f64;
    for j in 0..a.ncols() {
        let s: f64 = a.column(j).iter().map(|x| x.norm()).sum();
        best = best.max(s);
    }
    best
}

/// exp(A) for a square complex matrix.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");

    let norm1 = one_norm(a);
    let squarings = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a * c(0.5_f64.powi(squarings as i32));

    let id = CMat::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_hi = &a6 * c(PADE13[13]) + &a4 * c(PADE13[11]) + &a2 * c(PADE13[9]);
    let u_lo = &a6 * c(PADE13[7]) + &a4 * c(PADE13[5]) + &a2 * c(PADE13[3]) + &id * c(PADE13[1]);
    let odd = &scaled * (&a6 * u_hi + u_lo);

    let v_hi = &a6 * c(PADE13[12]) + &a4 * c(PADE13[10]) + &a2 * c(PADE13[8]);
    let even = &a6 * v_hi + &a6 * c(PADE13[6]) + &a4 * c(PADE13[4]) + &a2 * c(PADE13[2]) + &id * c(PADE13[0]);

    let numerator = &even + &odd;
    let denominator = &even - &odd;
    let mut f = denominator
        .lu()
        .solve(&numerator)
        .expect("Padé denominator of a scaled matrix is nonsingular");

    for _ in 0..squarings {
        f = &f * &f;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn maxabs(m: &CMat) -> f64 {
        m.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let z = CMat::zeros(5, 5);
        let e = expm(&z);
        assert_abs_diff_eq!(maxabs(&(e - CMat::identity(5, 5))), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_matrices_exponentiate_entrywise() {
        let d = CMat::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new(0.3 * i as f64, -1.1 + i as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let e = expm(&d);
        for i in 0..4 {
            let expect = d[(i, i)].exp();
            assert_abs_diff_eq!((e[(i, i)] - expect).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn nilpotent_block_is_exact() {
        // exp([[0,1],[0,0]]) = [[1,1],[0,1]].
        let mut a = CMat::zeros(2, 2);
        a[(0, 1)] = Complex64::new(1.0, 0.0);
        let e = expm(&a);
        assert_abs_diff_eq!((e[(0, 0)] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((e[(0, 1)] - Complex64::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[(1, 0)].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn large_norm_anti_hermitian_stays_unitary() {
        // Generator norm ~ 200 forces several squarings.
        let n = 40;
        let h = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(5.0 * i as f64, 0.0)
            } else if i + 1 == j {
                Complex64::new(1.5, 0.7)
            } else if j + 1 == i {
                Complex64::new(1.5, -0.7)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let u = expm(&(h * Complex64::new(0.0, -1.0)));
        let defect = &u.adjoint() * &u - CMat::identity(n, n);
        assert!(maxabs(&defect) < 1e-11, "defect {}", maxabs(&defect));
    }

    #[test]
    fn group_property_on_random_like_matrix() {
        let a = CMat::from_fn(6, 6, |i, j| {
            Complex64::new(
                ((3 * i + 5 * j + 1) % 7) as f64 / 7.0 - 0.5,
                ((2 * i + j) % 5) as f64 / 5.0 - 0.4,
            )
        });
        let whole = expm(&a);
        let half = expm(&(&a * Complex64::new(0.5, 0.0)));
        assert!(maxabs(&(&half * &half - whole)) < 1e-12);
    }
}
