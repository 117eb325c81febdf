use num_complex::Complex;

use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::scalar::{cplx, Real};

/// Default stopping tolerance of the fixed-point iteration.
pub const DEFAULT_SUBORDINATION_TOL: f64 = 1e-13;

const MAX_FIXED_POINT: usize = 20_000;
const NEWTON_AFTER: usize = 50;

/// Subordination functions and `G_{X⊞Y}` at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubordinationPoint<T> {
    pub z: Complex<T>,
    pub omega1: Complex<T>,
    pub omega2: Complex<T>,
    /// `G_{X⊞Y}(z)`, the mean of `G_X(ω₁)` and `G_Y(ω₂)`.
    pub g: Complex<T>,
    /// `|G_X(ω₁) - G|`, `|G_Y(ω₂) - G|`, `|z - ω₁ - ω₂ + 1/G|`.
    pub residuals: [T; 3],
}

impl<T: Real> SubordinationPoint<T> {
    pub fn max_residual(&self) -> T {
        self.residuals.iter().copied().fold(T::zero(), T::max)
    }
}

/// `h(w) = 1/G(w) - w` and `h'(w) = -G'(w)/G(w)² - 1`, for `Im w > 0`.
fn h<T: Real>(mu: &SpectralMeasure<T>, w: Complex<T>) -> Complex<T> {
    mu.cauchy_unchecked(w).inv() - w
}

fn h_prime<T: Real>(mu: &SpectralMeasure<T>, w: Complex<T>) -> Complex<T> {
    let g = mu.cauchy_unchecked(w);
    -mu.cauchy_derivative_unchecked(w) / (g * g) - T::one()
}

fn in_domain<T: Real>(w: Complex<T>, z: Complex<T>) -> bool {
    w.re.is_finite() && w.im.is_finite() && w.im >= z.im * (T::one() - T::lit(1e-9))
}

/// Solves `ω₁ = z + h_Y(z + h_X(ω₁))`, then `ω₂ = z + h_X(ω₁)`.
///
/// Plain iteration (damped by 1/2 when successive steps grow) brings the
/// iterate close; Newton on `f(w) - w` then finishes. If Newton leaves the
/// half-plane or stalls, the iteration simply continues.
pub fn subordination<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
    tol: f64,
) -> Result<SubordinationPoint<T>> {
    if !(z.im > T::zero()) {
        return Err(Error::domain(format!(
            "subordination needs Im z > 0, got {z}"
        )));
    }
    let tol_t = T::tol(tol);
    let f = |w: Complex<T>| z + h(mu_y, z + h(mu_x, w));
    let mean_y = mu_y.integrate(cplx)?;
    let mut w = z - mean_y;
    let mut damped = false;
    let mut prev_step = T::infinity();
    let mut trace: Vec<String> = Vec::new();
    let mut converged = false;
    for it in 0..MAX_FIXED_POINT {
        let fw = f(w);
        let mut next = if damped { (w + fw) * T::lit(0.5) } else { fw };
        if !in_domain(next, z) {
            next = Complex::new(next.re, z.im);
        }
        let step = (next - w).norm();
        if trace.len() >= 16 {
            trace.remove(0);
        }
        trace.push(format!("iter {it}: w={next} step={step:e}"));
        if !step.is_finite() {
            return Err(Error::numeric(
                format!("subordination iterate diverged at z={z}"),
                trace,
            ));
        }
        if step > prev_step && !damped {
            damped = true;
        }
        prev_step = step;
        w = next;
        if step <= tol_t * T::one().max(w.norm()) {
            converged = true;
            break;
        }
        if it >= NEWTON_AFTER && it % NEWTON_AFTER == 0 {
            if let Some(polished) = newton(mu_x, mu_y, z, w, tol_t) {
                w = polished;
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::numeric(
            format!("subordination did not converge at z={z}"),
            trace,
        ));
    }
    // A final Newton pass tightens plain-iteration stops near the edges.
    if let Some(polished) = newton(mu_x, mu_y, z, w, tol_t) {
        w = polished;
    }
    let omega1 = w;
    let omega2 = z + h(mu_x, omega1);
    let gx = mu_x.cauchy_unchecked(omega1);
    let gy = mu_y.cauchy_unchecked(omega2);
    let g = (gx + gy) * T::lit(0.5);
    let residuals = [
        (gx - g).norm(),
        (gy - g).norm(),
        (z - omega1 - omega2 + g.inv()).norm(),
    ];
    Ok(SubordinationPoint {
        z,
        omega1,
        omega2,
        g,
        residuals,
    })
}

fn newton<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
    mut w: Complex<T>,
    tol: T,
) -> Option<Complex<T>> {
    let phi = |w: Complex<T>| {
        let inner = z + h(mu_x, w);
        (z + h(mu_y, inner) - w, inner)
    };
    let (mut r, mut inner) = phi(w);
    for _ in 0..60 {
        if r.norm() <= tol * T::one().max(w.norm()) {
            return Some(w);
        }
        if !in_domain(inner, z) {
            return None;
        }
        let d = h_prime(mu_y, inner) * h_prime(mu_x, w) - T::one();
        let step = r / d;
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..30 {
            let cand = w - step * t;
            if in_domain(cand, z) {
                let (rc, ic) = phi(cand);
                if rc.norm() < r.norm() && in_domain(ic, z) {
                    w = cand;
                    r = rc;
                    inner = ic;
                    accepted = true;
                    break;
                }
            }
            t *= T::lit(0.5);
        }
        if !accepted {
            return if r.norm() <= tol * T::lit(16.0) * T::one().max(w.norm()) {
                Some(w)
            } else {
                None
            };
        }
    }
    None
}
