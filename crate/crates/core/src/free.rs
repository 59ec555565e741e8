//! No-measurement baseline: the same system left alone for a time t̄.
//!
//! With no projections the probe and the mode just entangle and
//! exchange energy. Three quantities matter for comparison with the
//! measured evolution:
//!
//! * the survival probability P⁰(t̄) of the probe packet, evaluated
//!   from the single-interval constants M, G built at t̄:
//!   P⁰ = |M|²/√(1+2Re G) · exp[−Re G/(1+2Re G)·(α e^{-it̄/2} + α* e^{it̄/2})²]
//!   averaged over Π;
//! * the reduced field state, a Π- and momentum-averaged family of
//!   coherent states (α + p̄ḡ(1−e^{it̄}))·e^{-it̄} — trace preserving;
//! * the mean quantum number ⟨â†â⟩⁰ = ∫d²α Π(α)(|α|² + 4ḡ²Δ̄_p² sin²(t̄/2)),
//!   which oscillates instead of plateauing.
//!
//! t̄ = 0 is allowed everywhere (M = 1, G = 0: nothing has happened).

use num_complex::Complex64;

use crate::coherent::SqueezedCoherentLabel;
use crate::error::EnsembleError;
use crate::params::{norm_and_squeeze, SystemParams};
use crate::pfunc::{EnsembleRow, FieldEnsemble, PFunction, QUAD_GATE_REL};
use crate::quad::GaussHermite;

/// Default momentum-quadrature order for the p-averaged field state.
pub const DEFAULT_P_QUAD_ORDER: usize = 64;

/// One point of the no-measurement baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeRecord {
    pub t_bar: f64,
    pub survival: f64,
    pub mean_quanta: f64,
}

/// Survival factor of a single coherent label α at elapsed phase t̄.
fn survival_factor(params: &SystemParams, t_bar: f64, alpha: Complex64) -> f64 {
    let (m, g) = norm_and_squeeze(params.g_bar(), params.dp_bar(), t_bar);
    let re_g = g.re;
    // α e^{-it̄/2} + α* e^{it̄/2} is real: twice the rotated real part.
    let u = 2.0 * (alpha * Complex64::from_polar(1.0, -t_bar / 2.0)).re;
    m.norm_sqr() / (1.0 + 2.0 * re_g).sqrt() * (-re_g / (1.0 + 2.0 * re_g) * u * u).exp()
}

/// P⁰(t̄): probe survival with no intermediate measurements.
///
/// Point-mass Π is closed form; the thermal Gaussian is integrated by
/// a tensor Gauss–Hermite rule with an order-doubling gate. Re G ≥ 0,
/// so the integrand never grows and the result lands in [0, 1].
pub fn free_survival(
    params: &SystemParams,
    pfunc: &PFunction,
    t_bar: f64,
) -> Result<f64, EnsembleError> {
    assert!(t_bar >= 0.0, "elapsed phase must be nonnegative");
    match pfunc {
        PFunction::Delta { alpha0 } => Ok(survival_factor(params, t_bar, *alpha0)),
        PFunction::CoherentMixture { parts } => Ok(parts
            .iter()
            .map(|&(w, a)| w * survival_factor(params, t_bar, a))
            .sum()),
        PFunction::ThermalGaussian { .. } => {
            let average = |order: usize| -> f64 {
                pfunc
                    .quadrature_points(order)
                    .iter()
                    .map(|&(w, a)| w * survival_factor(params, t_bar, a))
                    .sum()
            };
            let coarse = average(32);
            let fine = average(64);
            let change = (coarse - fine).abs() / fine.max(f64::MIN_POSITIVE);
            if change > QUAD_GATE_REL {
                return Err(EnsembleError::QuadratureNotConverged {
                    order: 32,
                    detail: format!("free survival moved by {change:.3e} under order doubling"),
                });
            }
            Ok(fine)
        }
    }
}

/// Reduced field state at t̄ with no measurements: coherent labels
/// (α + p̄ḡ(1−e^{it̄}))·e^{-it̄}, weights Π-weight × Gaussian momentum
/// weight. Trace preserving: normalization is exactly 1.
pub fn free_field_ensemble(
    params: &SystemParams,
    pfunc: &PFunction,
    t_bar: f64,
    p_quad_order: usize,
) -> Result<FieldEnsemble, EnsembleError> {
    assert!(t_bar >= 0.0, "elapsed phase must be nonnegative");
    let kick = params.g_bar() * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t_bar));
    let rotate = Complex64::from_polar(1.0, -t_bar);
    let momentum = GaussHermite::new(p_quad_order).gaussian_abscissae(params.dp_bar());

    let alpha_points = match pfunc {
        // The thermal rule needs an explicit order; the field ensemble is
        // smooth in α so the default is plenty.
        PFunction::ThermalGaussian { .. } => {
            pfunc.quadrature_points(crate::pfunc::DEFAULT_ALPHA_QUAD_ORDER)
        }
        _ => pfunc.quadrature_points(0),
    };

    let mut rows = Vec::with_capacity(alpha_points.len() * momentum.len());
    for &(wa, alpha) in &alpha_points {
        for &(p_bar, wp) in &momentum {
            rows.push(EnsembleRow {
                weight: wa * wp,
                label: SqueezedCoherentLabel::coherent((alpha + p_bar * kick) * rotate),
            });
        }
    }
    Ok(FieldEnsemble {
        rows,
        normalization: 1.0,
    })
}

/// ⟨â†â⟩⁰(t̄) = ∫d²α Π(α)|α|² + 4ḡ²Δ̄_p² sin²(t̄/2), exactly.
///
/// The Π moment is closed form for every supported P-function, so no
/// quadrature is involved; the test suite re-derives this value from
/// [`free_field_ensemble`] to pin the two routes together.
pub fn free_mean_quanta(params: &SystemParams, pfunc: &PFunction, t_bar: f64) -> f64 {
    let half = (t_bar / 2.0).sin();
    let g2 = params.g_bar() * params.g_bar();
    let dp2 = params.dp_bar() * params.dp_bar();
    pfunc.second_moment() + 4.0 * g2 * dp2 * half * half
}

/// Baseline record (survival + mean quanta) at one elapsed phase.
pub fn free_record(
    params: &SystemParams,
    pfunc: &PFunction,
    t_bar: f64,
) -> Result<FreeRecord, EnsembleError> {
    Ok(FreeRecord {
        t_bar,
        survival: free_survival(params, pfunc, t_bar)?,
        mean_quanta: free_mean_quanta(params, pfunc, t_bar),
    })
}
