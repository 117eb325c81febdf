//! Boolean-cumulant series for subordination functions, the regression
//! equations of the free Matsumoto-Yor pair, and the inverse maps of the
//! characterization theorems.

mod characterization;
mod regression;
mod series;

pub use characterization::{
    case_quadratic_residual, characterize_from_constants, Case, Characterization, RationalR,
};
pub use regression::{derive_constants, CaseConstants, MatsumotoYorSetup, Residual};
pub use series::{
    series_a_b, series_all, series_c, series_d, SeriesReport, SeriesSet, MAX_ORDER, MAX_ORDER_AB,
};

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cumulants::{Algebra, Letter, MomentContext, SpectralFunction};
use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::scalar::Real;
use crate::transforms::{eta_f_transform, eta_fg_transform, eta_transform};

/// Evenly spaced points `start..=end` shifted by `i·im`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZGrid {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    pub im: f64,
}

impl ZGrid {
    pub fn points(&self) -> Vec<Complex<f64>> {
        match self.count {
            0 => Vec::new(),
            1 => vec![Complex::new(self.start, self.im)],
            n => (0..n)
                .map(|j| {
                    let t = j as f64 / (n - 1) as f64;
                    Complex::new(self.start + t * (self.end - self.start), self.im)
                })
                .collect(),
        }
    }
}

/// One verified equation, as emitted in JSON summaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    pub z: Option<[f64; 2]>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        check: impl Into<String>,
        params: &[(&str, f64)],
        z: Option<Complex<f64>>,
        lhs: Complex<f64>,
        rhs: Complex<f64>,
        bound: f64,
    ) -> Self {
        let residual = (lhs - rhs).norm();
        CheckRecord {
            check: check.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            z: z.map(|z| [z.re, z.im]),
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            residual,
            bound,
            pass: residual <= bound,
        }
    }
}

/// Both sides of the `η^h` and `η^{h,h}` formulas for `h(y) = y⁻¹`, at one
/// point `w`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaInverseReport<T> {
    pub w: Complex<T>,
    /// `η^h(w)` summed in closed form.
    pub eta_h: Complex<T>,
    /// Truncated Boolean-cumulant series of `η^h(w)`.
    pub eta_h_series: Complex<T>,
    /// `w + (1 - η(w))φ(Y⁻¹)`.
    pub eta_h_formula: Complex<T>,
    pub eta_hh: Complex<T>,
    pub eta_hh_series: Complex<T>,
    /// `φ(Y⁻²) - wφ(Y⁻¹) + φ(Y⁻¹)²(η(w) - 1)`.
    pub eta_hh_formula: Complex<T>,
}

/// Evaluates the `η^h`, `η^{h,h}` formulas for `h(y) = y⁻¹`. The series use
/// Boolean cumulants up to word length 13.
pub fn eta_inverse_identities<T: Real>(
    mu_y: &SpectralMeasure<T>,
    w: Complex<T>,
) -> Result<EtaInverseReport<T>> {
    if mu_y.atom0() > T::zero() || mu_y.distance_from_zero() < T::lit(1e-6) {
        return Err(Error::domain("η^h with h(y) = 1/y needs Y invertible"));
    }
    let inv = SpectralFunction::Power(-1);
    let eta = eta_transform(mu_y, w)?;
    let eta_h = eta_f_transform(mu_y, &inv, w)?;
    let eta_hh = eta_fg_transform(mu_y, &inv, &inv, w)?;

    let mut ctx = MomentContext::new(mu_y.clone(), mu_y.clone());
    let phi1 = ctx.marginal_moment(std::slice::from_ref(&inv), Algebra::B)?;
    let phi2 = ctx.marginal_moment(&[SpectralFunction::Power(-2)], Algebra::B)?;
    let y = Letter::b(SpectralFunction::Identity);
    let y_inv = Letter::b(inv);
    let zero = Complex::new(T::zero(), T::zero());
    let mut eta_h_series = zero;
    let mut eta_hh_series = zero;
    let mut wk = Complex::new(T::one(), T::zero());
    for k in 0..crate::cumulants::MAX_WORD_LEN - 1 {
        let mut word = vec![y_inv.clone()];
        word.extend(std::iter::repeat_n(y.clone(), k));
        eta_h_series += ctx.boolean_cumulant(&word)? * wk;
        word.push(y_inv.clone());
        eta_hh_series += ctx.boolean_cumulant(&word)? * wk;
        wk *= w;
    }
    let one = Complex::new(T::one(), T::zero());
    Ok(EtaInverseReport {
        w,
        eta_h,
        eta_h_series,
        eta_h_formula: w + (one - eta) * phi1,
        eta_hh,
        eta_hh_series,
        eta_hh_formula: phi2 - w * phi1 + phi1 * phi1 * (eta - one),
    })
}
