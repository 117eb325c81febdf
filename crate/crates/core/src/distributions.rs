//! Free Poisson and free-GIG laws.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{MeasureKind, SpectralMeasure};
use crate::scalar::{cplx, Real};

/// Parameters of the free Poisson law `ν(λ, γ)`: rate `λ`, jump size `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreePoissonParams<T> {
    pub lambda: T,
    pub gamma: T,
}

impl<T: Real> FreePoissonParams<T> {
    pub fn new(lambda: T, gamma: T) -> Result<Self> {
        if !(lambda > T::zero() && gamma > T::zero() && lambda.is_finite() && gamma.is_finite()) {
            return Err(Error::domain(format!(
                "free Poisson needs lambda > 0 and gamma > 0, got ({lambda}, {gamma})"
            )));
        }
        Ok(FreePoissonParams { lambda, gamma })
    }

    /// Edges of the absolutely continuous part.
    pub fn edges(&self) -> (T, T) {
        let s = self.lambda.sqrt();
        let lo = T::one() - s;
        let hi = T::one() + s;
        (self.gamma * lo * lo, self.gamma * hi * hi)
    }

    /// Mass of the atom at 0.
    pub fn atom(&self) -> T {
        (T::one() - self.lambda).max(T::zero())
    }
}

/// Parameters of the free-GIG law `μ(λ, α, β)` together with the solved
/// support `[a, b]` and the constant `δ` of its Cauchy transform equation
/// `z²G² - (αz² - (λ-1)z - β)G + αz + δ = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeGigParams<T> {
    pub lambda: T,
    pub alpha: T,
    pub beta: T,
    pub a: T,
    pub b: T,
    pub delta: T,
}

/// Residuals of the edge system in `u = √(ab)`, `v = a + b`:
/// `1 - λ + αu - βv/(2u²)` and `1 + λ + β/u - αv/2`.
fn edge_system<T: Real>(lambda: T, alpha: T, beta: T, u: T, v: T) -> (T, T) {
    let two = T::lit(2.0);
    (
        T::one() - lambda + alpha * u - beta * v / (two * u * u),
        T::one() + lambda + beta / u - alpha * v / two,
    )
}

/// Damped Newton on the edge system, keeping `u > 0` and `v > 2u`.
fn edge_newton<T: Real>(
    lambda: T,
    alpha: T,
    beta: T,
    mut u: T,
    mut v: T,
    trace: &mut Vec<String>,
) -> Option<(T, T)> {
    let two = T::lit(2.0);
    let scale = T::one() + lambda.abs() + alpha * u.abs() + beta / u.abs();
    let tol = T::tol(1e-14) * scale;
    let norm = |f: (T, T)| f.0.abs().max(f.1.abs());
    let mut f = edge_system(lambda, alpha, beta, u, v);
    for it in 0..100 {
        if !(norm(f) > tol) {
            return if norm(f).is_finite() {
                Some((u, v))
            } else {
                None
            };
        }
        let j11 = alpha + beta * v / (u * u * u);
        let j12 = -beta / (two * u * u);
        let j21 = -beta / (u * u);
        let j22 = -alpha / two;
        let det = j11 * j22 - j12 * j21;
        if det == T::zero() || !det.is_finite() {
            trace.push(format!("iter {it}: singular Jacobian at u={u} v={v}"));
            return None;
        }
        let du = -(f.0 * j22 - j12 * f.1) / det;
        let dv = -(j11 * f.1 - j21 * f.0) / det;
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..60 {
            let (un, vn) = (u + t * du, v + t * dv);
            if un > T::zero() && vn > two * un {
                let fnew = edge_system(lambda, alpha, beta, un, vn);
                if norm(fnew) < norm(f) || t == T::one() && norm(fnew) <= norm(f) * T::lit(2.0) {
                    u = un;
                    v = vn;
                    f = fnew;
                    accepted = true;
                    break;
                }
            }
            t /= two;
        }
        if !accepted {
            trace.push(format!(
                "iter {it}: line search failed at u={u} v={v} |F|={}",
                norm(f)
            ));
            return None;
        }
    }
    trace.push(format!("no convergence: u={u} v={v} |F|={}", norm(f)));
    None
}

impl<T: Real> FreeGigParams<T> {
    /// Solves for the support `[a, b]` of `μ(λ, α, β)`.
    ///
    /// Newton starts from the `β → 0` limit `u = (λ-1)/α`, `v = 2(1+λ)/α`.
    /// When that fails (or `λ ≤ 1`), the solution is continued in `β` from a
    /// tiny value at a rate where the limit is accurate, then in `λ`.
    pub fn solve(lambda: T, alpha: T, beta: T) -> Result<Self> {
        if !(alpha > T::zero()
            && beta > T::zero()
            && lambda.is_finite()
            && alpha.is_finite()
            && beta.is_finite())
        {
            return Err(Error::domain(format!(
                "free-GIG needs alpha > 0 and beta > 0, got (lambda, alpha, beta) = ({lambda}, {alpha}, {beta})"
            )));
        }
        let two = T::lit(2.0);
        let mut trace = Vec::new();
        let guess = |lam: T| ((lam - T::one()) / alpha, two * (T::one() + lam) / alpha);
        let mut solution = None;
        if lambda > T::one() {
            let (u0, v0) = guess(lambda);
            solution = edge_newton(lambda, alpha, beta, u0, v0, &mut trace);
        }
        if solution.is_none() {
            solution = Self::continuation(lambda, alpha, beta, &mut trace);
        }
        let (u, v) =
            solution.ok_or_else(|| Error::numeric("free-GIG edge solve failed", trace.clone()))?;
        let disc = v * v - T::lit(4.0) * u * u;
        if !(disc > T::zero()) {
            return Err(Error::domain(format!(
                "free-GIG edges are not real and distinct: u={u} v={v}"
            )));
        }
        let root = disc.sqrt();
        let a = two * u * u / (v + root);
        let b = (v + root) / two;
        if !(a > T::zero() && a < b) {
            return Err(Error::domain(format!(
                "free-GIG edges violate 0 < a < b: a={a} b={b}"
            )));
        }
        let mut params = FreeGigParams {
            lambda,
            alpha,
            beta,
            a,
            b,
            delta: T::zero(),
        };
        params.delta = params.delta_from_edges();
        let (r1, r2) = params.residuals();
        if r1.abs().max(r2.abs()) > T::tol(1e-10) * (T::one() + lambda.abs()) {
            return Err(Error::numeric(
                "free-GIG edge residual too large",
                vec![format!("a={a} b={b} residuals=({r1}, {r2})")],
            ));
        }
        Ok(params)
    }

    fn continuation(lambda: T, alpha: T, beta: T, trace: &mut Vec<String>) -> Option<(T, T)> {
        let two = T::lit(2.0);
        let lam0 = lambda.max(two);
        // Tiny β: the β → 0 limit is an excellent starting point.
        let mut b_cur = beta * T::lit(1e-8);
        let (mut u, mut v) = ((lam0 - T::one()) / alpha, two * (T::one() + lam0) / alpha);
        let (u1, v1) = edge_newton(lam0, alpha, b_cur, u, v, trace)?;
        u = u1;
        v = v1;
        let mut ratio = T::lit(2.0);
        while b_cur < beta {
            let b_next = (b_cur * ratio).min(beta);
            match edge_newton(lam0, alpha, b_next, u, v, trace) {
                Some((un, vn)) => {
                    u = un;
                    v = vn;
                    b_cur = b_next;
                }
                None => {
                    ratio = ratio.sqrt();
                    if ratio < T::lit(1.0001) {
                        return None;
                    }
                }
            }
        }
        let mut lam_cur = lam0;
        let mut step = (lambda - lam0) / T::lit(16.0);
        while lam_cur != lambda {
            let lam_next = if (lambda - lam_cur).abs() <= step.abs() {
                lambda
            } else {
                lam_cur + step
            };
            match edge_newton(lam_next, alpha, beta, u, v, trace) {
                Some((un, vn)) => {
                    u = un;
                    v = vn;
                    lam_cur = lam_next;
                }
                None => {
                    step /= two;
                    if step.abs() < T::lit(1e-10) {
                        return None;
                    }
                }
            }
        }
        Some((u, v))
    }

    /// Residuals of the two edge equations at the stored `(a, b)`.
    pub fn residuals(&self) -> (T, T) {
        let u = (self.a * self.b).sqrt();
        edge_system(self.lambda, self.alpha, self.beta, u, self.a + self.b)
    }

    /// `δ` read off the `z²` coefficient of `P² - Q²(z-a)(z-b) = 4z²(αz + δ)`.
    fn delta_from_edges(&self) -> T {
        let (l, al, be) = (self.lambda, self.alpha, self.beta);
        let p = self.a * self.b;
        let s = self.a + self.b;
        let two = T::lit(2.0);
        ((l - T::one()) * (l - T::one()) - two * al * be - al * al * p
            + two * al * be * s / p.sqrt()
            - be * be / p)
            / T::lit(4.0)
    }

    /// Residual of `z²G² - (αz² - (λ-1)z - β)G + αz + δ` at `G`.
    pub fn quadratic_residual(&self, z: Complex<T>, g: Complex<T>) -> Complex<T> {
        let p = z * z * self.alpha - z * (self.lambda - T::one()) - self.beta;
        z * z * g * g - p * g + z * self.alpha + self.delta
    }
}

/// The free Poisson law `ν(λ, γ) = max(0, 1-λ)δ₀ + (density part)`.
pub fn make_free_poisson<T: Real>(lambda: T, gamma: T) -> Result<SpectralMeasure<T>> {
    let p = FreePoissonParams::new(lambda, gamma)?;
    Ok(SpectralMeasure::from_parts(
        MeasureKind::FreePoisson(p),
        p.atom(),
        p.edges(),
    ))
}

/// The free-GIG law `μ(λ, α, β)`.
pub fn make_free_gig<T: Real>(lambda: T, alpha: T, beta: T) -> Result<SpectralMeasure<T>> {
    let p = FreeGigParams::solve(lambda, alpha, beta)?;
    let mu = SpectralMeasure::from_parts(MeasureKind::FreeGig(p), T::zero(), (p.a, p.b));
    let mass = mu.integrate(|_| cplx(T::one()))?.re;
    if (mass - T::one()).abs() > T::tol(1e-8) {
        return Err(Error::numeric(
            "free-GIG density does not integrate to 1",
            vec![format!("a={} b={} mass={mass}", p.a, p.b)],
        ));
    }
    Ok(mu)
}

/// `∫ x^k dμ`. Negative `k` needs the law to stay at distance at least 1e-6
/// from 0 with no atom there.
pub fn moment<T: Real>(mu: &SpectralMeasure<T>, k: i32) -> Result<T> {
    if k == 0 {
        return Ok(T::one());
    }
    if k < 0 && (mu.atom0() > T::zero() || mu.distance_from_zero() < T::lit(1e-6)) {
        return Err(Error::domain(format!(
            "negative moment of order {k} needs the law bounded away from 0 (support {:?}, atom {})",
            mu.support(),
            mu.atom0()
        )));
    }
    Ok(mu.integrate(|x| cplx(x.powi(k)))?.re)
}

/// `(∫ x^{-k} dμ(λ,α,β), ∫ x^k dμ(-λ,β,α))` for `k = 0..=k_max`. The two
/// sequences coincide because `(X+Y)^{-1}` of the free pair has the second law.
pub fn gig_inversion_moments<T: Real>(
    lambda: T,
    alpha: T,
    beta: T,
    k_max: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let forward = make_free_gig(lambda, alpha, beta)?;
    let inverse = make_free_gig(-lambda, beta, alpha)?;
    let mut neg = Vec::with_capacity(k_max + 1);
    let mut pos = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max as i32 {
        neg.push(moment(&forward, -k)?);
        pos.push(moment(&inverse, k)?);
    }
    Ok((neg, pos))
}

/// `X ~ μ(-λ, α, β)` and `Y ~ ν(λ, 1/α)`, the free pair whose sum is `μ(λ, α, β)`.
pub fn matsumoto_yor_pair<T: Real>(
    lambda: T,
    alpha: T,
    beta: T,
) -> Result<(SpectralMeasure<T>, SpectralMeasure<T>)> {
    Ok((
        make_free_gig(-lambda, alpha, beta)?,
        make_free_poisson(lambda, T::one() / alpha)?,
    ))
}

/// Serializable description of a measure, as used in run configurations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    PointMass { c: f64 },
    Semicircle { mean: f64, radius: f64 },
    FreePoisson { lambda: f64, gamma: f64 },
    FreeGig { lambda: f64, alpha: f64, beta: f64 },
}

impl MeasureSpec {
    pub fn build<T: Real>(&self) -> Result<SpectralMeasure<T>> {
        let t = |x: f64| T::lit(x);
        match *self {
            MeasureSpec::PointMass { c } => Ok(SpectralMeasure::point_mass(t(c))),
            MeasureSpec::Semicircle { mean, radius } => {
                SpectralMeasure::semicircle(t(mean), t(radius))
            }
            MeasureSpec::FreePoisson { lambda, gamma } => make_free_poisson(t(lambda), t(gamma)),
            MeasureSpec::FreeGig {
                lambda,
                alpha,
                beta,
            } => make_free_gig(t(lambda), t(alpha), t(beta)),
        }
    }
}
