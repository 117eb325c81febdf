//! Cauchy, r, moment and η transforms; subordination; free additive
//! convolution.

mod convolve;
mod subordination;

pub use convolve::{free_convolve, neville_at_zero, FreeConvolution, DEFAULT_EPS_LADDER};
pub use subordination::{subordination, SubordinationPoint, DEFAULT_SUBORDINATION_TOL};

use num_complex::Complex;

use crate::cumulants::SpectralFunction;
use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::scalar::{cplx, Real};

/// `G_μ(z) = ∫ dμ(x)/(z - x)`.
pub fn cauchy<T: Real>(mu: &SpectralMeasure<T>, z: Complex<T>) -> Result<Complex<T>> {
    mu.cauchy(z)
}

/// `r(w) = G⁻¹(w) - 1/w`, with `G⁻¹(w)` found by Newton from `1/w + φ(x)`.
pub fn r_transform<T: Real>(mu: &SpectralMeasure<T>, w: Complex<T>) -> Result<Complex<T>> {
    if w.norm() == T::zero() {
        return Err(Error::domain("r-transform is evaluated at w != 0"));
    }
    let mean = mu.integrate(cplx)?;
    let mut z = w.inv() + mean;
    let mut trace = Vec::new();
    let scale = w.norm();
    for it in 0..100 {
        let g = mu.cauchy(z).map_err(|e| {
            Error::numeric(format!("Newton left the domain of G: {e}"), trace.clone())
        })?;
        let f = g - w;
        trace.push(format!("iter {it}: z={z} |G(z)-w|={}", f.norm()));
        if f.norm() <= T::tol(1e-15) * scale {
            return Ok(z - w.inv());
        }
        let dg = mu.cauchy_derivative(z)?;
        let step = f / dg;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= T::epsilon() * T::lit(4.0) * z.norm() {
            let g = mu.cauchy(z)?;
            if (g - w).norm() <= T::tol(1e-12) * scale {
                return Ok(z - w.inv());
            }
            break;
        }
    }
    if trace.len() > 8 {
        trace.drain(..trace.len() - 8);
    }
    Err(Error::numeric(
        format!("inverse of G did not converge at w={w}"),
        trace,
    ))
}

fn check_shift<T: Real>(mu: &SpectralMeasure<T>, w: Complex<T>) -> Result<()> {
    if w.norm() > T::zero() {
        mu.check_regular(&[w.inv()])?;
    }
    Ok(())
}

/// Moment transform `M(w) = ∫ wx/(1 - wx) dμ(x)`.
pub fn moment_transform<T: Real>(mu: &SpectralMeasure<T>, w: Complex<T>) -> Result<Complex<T>> {
    check_shift(mu, w)?;
    mu.integrate(|x| w * x / (cplx(T::one()) - w * x))
}

/// `η(w) = M(w)/(M(w) + 1) = 1 - 1/φ((1 - wx)⁻¹)`.
pub fn eta_transform<T: Real>(mu: &SpectralMeasure<T>, w: Complex<T>) -> Result<Complex<T>> {
    let m = moment_transform(mu, w)?;
    Ok(m / (m + T::one()))
}

/// `η^f(w) = Σ_k β_{k+1}(f(x), x, …, x) w^k`, summed as
/// `φ(f(x)(1 - wx)⁻¹) / φ((1 - wx)⁻¹)`.
pub fn eta_f_transform<T: Real>(
    mu: &SpectralMeasure<T>,
    f: &SpectralFunction<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    check_shift(mu, w)?;
    mu.check_regular(&f.singular_points())?;
    let one = cplx(T::one());
    let num = mu.integrate(|x| f.eval(x) / (one - w * x))?;
    let den = mu.integrate(|x| one / (one - w * x))?;
    Ok(num / den)
}

/// `η^{f,g}(w) = Σ_k β_{k+2}(f(x), x, …, x, g(x)) w^k`, summed as
/// `φ(fg(1 - wx)⁻¹) - η^f(w) φ(g(1 - wx)⁻¹)`.
pub fn eta_fg_transform<T: Real>(
    mu: &SpectralMeasure<T>,
    f: &SpectralFunction<T>,
    g: &SpectralFunction<T>,
    w: Complex<T>,
) -> Result<Complex<T>> {
    check_shift(mu, w)?;
    mu.check_regular(&g.singular_points())?;
    let one = cplx(T::one());
    let eta_f = eta_f_transform(mu, f, w)?;
    let fg = mu.integrate(|x| f.eval(x) * g.eval(x) / (one - w * x))?;
    let gg = mu.integrate(|x| g.eval(x) / (one - w * x))?;
    Ok(fg - eta_f * gg)
}

/// Taylor coefficients `c₀, …, c_order` of `f` at 0 from `samples` values on
/// the circle of the given radius (discrete Cauchy integral).
pub fn taylor_coefficients<T: Real>(
    f: impl Fn(Complex<T>) -> Result<Complex<T>>,
    radius: T,
    order: usize,
    samples: usize,
) -> Result<Vec<Complex<T>>> {
    if samples <= order {
        return Err(Error::domain("need more samples than coefficients"));
    }
    let n = T::from_usize(samples).unwrap();
    let values: Vec<(Complex<T>, Complex<T>)> = (0..samples)
        .map(|j| {
            let theta = T::lit(2.0) * T::PI() * T::from_usize(j).unwrap() / n;
            let unit = Complex::from_polar(T::one(), theta);
            f(unit * radius).map(|v| (unit, v))
        })
        .collect::<Result<_>>()?;
    Ok((0..=order)
        .map(|k| {
            let s: Complex<T> = values.iter().map(|(u, v)| *v * u.powi(-(k as i32))).sum();
            s / (n * radius.powi(k as i32))
        })
        .collect())
}

/// Coefficients of `η_μ` at 0, orders `0..=order`. These are the Boolean
/// cumulants `β_k(x, …, x)`.
pub fn eta_coefficients<T: Real>(mu: &SpectralMeasure<T>, order: usize) -> Result<Vec<Complex<T>>> {
    let radius = T::lit(0.5) / mu.norm().max(T::lit(1e-3));
    taylor_coefficients(|w| eta_transform(mu, w), radius, order, 64.max(4 * order))
}
