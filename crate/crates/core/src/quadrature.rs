//! Quadrature for densities with square-root edges.
//!
//! Densities on `[a, b]` of the form `√((x-a)(b-x)) g(x)` with `g` smooth are
//! integrated after the substitution `x = m - r cos θ` (`m`, `r` the midpoint
//! and half-width). The edge factor becomes `r sin θ`, the integrand
//! `r² sin²θ g(x(θ)) f(x(θ))` is smooth and even-periodic in `θ`, and the
//! midpoint rule converges geometrically.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Initial node count of the adaptive rule.
pub const DEFAULT_NODES: usize = 400;
/// Node-count ceiling of the adaptive rule.
pub const MAX_NODES: usize = DEFAULT_NODES << 10;

fn node<T: Real>(a: T, b: T, j: usize, n: usize) -> (T, T) {
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let theta = T::PI() * (T::from_usize(j).unwrap() + T::lit(0.5)) / T::from_usize(n).unwrap();
    let (s, c) = theta.sin_cos();
    (
        mid - half * c,
        half * half * s * s * T::PI() / T::from_usize(n).unwrap(),
    )
}

/// Midpoint rule with `n` nodes for `∫_a^b √((x-a)(b-x)) h(x) dx`. Also returns
/// the sum of absolute contributions.
pub fn edge_rule<T: Real>(a: T, b: T, n: usize, h: &impl Fn(T) -> Complex<T>) -> (Complex<T>, T) {
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut l1 = T::zero();
    for j in 0..n {
        let (x, w) = node(a, b, j, n);
        let v = h(x) * w;
        l1 += v.norm();
        sum += v;
    }
    (sum, l1)
}

/// Adaptive version of [`edge_rule`]: starts at [`DEFAULT_NODES`] and doubles
/// until two successive estimates agree to `tol` relative to the L1 mass of
/// the integrand.
pub fn edge_integral<T: Real>(
    a: T,
    b: T,
    h: impl Fn(T) -> Complex<T>,
    tol: f64,
) -> Result<Complex<T>> {
    let tol = T::tol(tol);
    let mut n = DEFAULT_NODES;
    let (mut prev, _) = edge_rule(a, b, n, &h);
    let mut trace = Vec::new();
    while n < MAX_NODES {
        n *= 2;
        let (cur, l1) = edge_rule(a, b, n, &h);
        let change = (cur - prev).norm();
        trace.push(format!("nodes={n} change={change:e}"));
        if !change.is_finite() {
            return Err(Error::numeric(
                "quadrature produced a non-finite value",
                trace,
            ));
        }
        if change <= tol * l1.max(T::min_positive_value()) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::numeric("edge quadrature did not converge", trace))
}

/// Antiderivative of an edge density, as a cosine series in `θ`.
///
/// With `F(θ) = r² sin²θ g(x(θ))`, the mass of `[a, x(θ)]` is `∫₀^θ F`. `F` is
/// sampled at midpoints and expanded by a discrete cosine transform, which
/// integrates term by term.
#[derive(Clone, Debug)]
pub struct EdgeCdf<T> {
    a: T,
    b: T,
    coeffs: Vec<T>,
}

impl<T: Real> EdgeCdf<T> {
    /// Builds the expansion with `n` terms.
    pub fn new(a: T, b: T, n: usize, g: impl Fn(T) -> T) -> Self {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let nt = T::from_usize(n).unwrap();
        let samples: Vec<(T, T)> = (0..n)
            .map(|j| {
                let theta = T::PI() * (T::from_usize(j).unwrap() + T::lit(0.5)) / nt;
                let (s, c) = theta.sin_cos();
                (theta, half * half * s * s * g(mid - half * c))
            })
            .collect();
        let coeffs = (0..n)
            .map(|k| {
                let kt = T::from_usize(k).unwrap();
                let s: T = samples.iter().map(|&(th, f)| f * (kt * th).cos()).sum();
                s * T::lit(2.0) / nt
            })
            .collect();
        EdgeCdf { a, b, coeffs }
    }

    pub fn theta_of(&self, x: T) -> T {
        let half = (self.b - self.a) / T::lit(2.0);
        let mid = (self.a + self.b) / T::lit(2.0);
        let c = ((mid - x) / half).max(-T::one()).min(T::one());
        c.acos()
    }

    pub fn x_of(&self, theta: T) -> T {
        let half = (self.b - self.a) / T::lit(2.0);
        let mid = (self.a + self.b) / T::lit(2.0);
        mid - half * theta.cos()
    }

    /// Mass of `[a, x(θ)]`.
    pub fn mass_to_theta(&self, theta: T) -> T {
        let mut s = self.coeffs[0] * theta / T::lit(2.0);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            let kt = T::from_usize(k).unwrap();
            s += c * (kt * theta).sin() / kt;
        }
        s
    }

    /// `dM/dθ`.
    pub fn weight_at_theta(&self, theta: T) -> T {
        let mut s = self.coeffs[0] / T::lit(2.0);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            s += c * (T::from_usize(k).unwrap() * theta).cos();
        }
        s
    }

    /// Total mass of the density.
    pub fn total(&self) -> T {
        self.coeffs[0] * T::PI() / T::lit(2.0)
    }

    /// Mass of `[a, x]`.
    pub fn mass_below(&self, x: T) -> T {
        if x <= self.a {
            T::zero()
        } else if x >= self.b {
            self.total()
        } else {
            self.mass_to_theta(self.theta_of(x))
        }
    }

    /// Smallest `x` with `mass_below(x) = target`, by safeguarded Newton in `θ`.
    pub fn invert(&self, target: T) -> T {
        let total = self.total();
        if target <= T::zero() {
            return self.a;
        }
        if target >= total {
            return self.b;
        }
        let (mut lo, mut hi) = (T::zero(), T::PI());
        let mut theta = T::PI() * target / total;
        for _ in 0..100 {
            let f = self.mass_to_theta(theta) - target;
            if f > T::zero() {
                hi = theta;
            } else {
                lo = theta;
            }
            let d = self.weight_at_theta(theta);
            let mut next = theta - f / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = (lo + hi) / T::lit(2.0);
            }
            if (next - theta).abs() <= T::epsilon() * T::lit(4.0) {
                theta = next;
                break;
            }
            theta = next;
        }
        self.x_of(theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn semicircle_mass_and_moments() {
        // √(4 - x²)/(2π) on [-2, 2]: mass 1, second moment 1, fourth moment 2.
        let g = 1.0 / (2.0 * std::f64::consts::PI);
        let m0 = edge_integral(-2.0, 2.0, |_| Complex::new(g, 0.0), 1e-13).unwrap();
        let m2 = edge_integral(-2.0, 2.0, |x| Complex::new(g * x * x, 0.0), 1e-13).unwrap();
        let m4 =
            edge_integral(-2.0, 2.0, |x: f64| Complex::new(g * x.powi(4), 0.0), 1e-13).unwrap();
        assert!((m0.re - 1.0).abs() < 1e-14);
        assert!((m2.re - 1.0).abs() < 1e-14);
        assert!((m4.re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn cdf_series_matches_arcsine_free_formula() {
        let g = |_x: f64| 1.0 / (2.0 * std::f64::consts::PI);
        let cdf = EdgeCdf::new(-2.0, 2.0, 64, g);
        assert!((cdf.total() - 1.0).abs() < 1e-14);
        assert!((cdf.mass_below(0.0) - 0.5).abs() < 1e-14);
        let q = cdf.invert(0.25);
        assert!((cdf.mass_below(q) - 0.25).abs() < 1e-13);
    }

    #[test]
    fn f32_is_supported() {
        let m = edge_integral(0.0f32, 4.0, |_| Complex::new(1.0f32, 0.0), 1e-6).unwrap();
        assert!((m.re - 2.0 * std::f32::consts::PI).abs() < 1e-4);
    }
}
