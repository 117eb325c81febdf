//! Compactly supported probability laws on the real line.

use num_complex::Complex;

use crate::cumulants::{MarginalLaw, SpectralFunction};
use crate::distributions::{FreeGigParams, FreePoissonParams};
use crate::error::{Error, Result};
use crate::quadrature::{edge_integral, EdgeCdf};
use crate::scalar::{cplx, Real};

/// Relative tolerance used for quadrature unless a caller asks otherwise.
pub const QUAD_TOL: f64 = 1e-13;

/// Parametric family or explicit atoms.
#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind<T> {
    PointMass(T),
    Semicircle {
        mean: T,
        radius: T,
    },
    FreePoisson(FreePoissonParams<T>),
    FreeGig(FreeGigParams<T>),
    /// Finitely many atoms (weights sum to 1).
    Empirical {
        nodes: Vec<T>,
        weights: Vec<T>,
    },
}

/// A probability measure with compact support, an optional atom at 0 and,
/// for the continuous families, a density with square-root edges.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMeasure<T> {
    kind: MeasureKind<T>,
    atom0: T,
    support: (T, T),
}

impl<T: Real> SpectralMeasure<T> {
    pub(crate) fn from_parts(kind: MeasureKind<T>, atom0: T, support: (T, T)) -> Self {
        SpectralMeasure {
            kind,
            atom0,
            support,
        }
    }

    pub fn point_mass(c: T) -> Self {
        SpectralMeasure {
            kind: MeasureKind::PointMass(c),
            atom0: T::zero(),
            support: (c, c),
        }
    }

    pub fn semicircle(mean: T, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !mean.is_finite() || !radius.is_finite() {
            return Err(Error::domain(format!(
                "semicircle needs a positive radius, got {radius}"
            )));
        }
        Ok(SpectralMeasure {
            kind: MeasureKind::Semicircle { mean, radius },
            atom0: T::zero(),
            support: (mean - radius, mean + radius),
        })
    }

    /// Atoms at `nodes` with the given weights, renormalized to mass 1.
    pub fn empirical(nodes: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::domain(
                "empirical measure needs matching nonempty nodes and weights",
            ));
        }
        if weights.iter().any(|w| *w < T::zero() || !w.is_finite())
            || nodes.iter().any(|x| !x.is_finite())
        {
            return Err(Error::domain(
                "empirical weights must be finite and nonnegative",
            ));
        }
        let total: T = weights.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::domain("empirical weights sum to zero"));
        }
        let weights: Vec<T> = weights.into_iter().map(|w| w / total).collect();
        let lo = nodes.iter().copied().fold(T::infinity(), T::min);
        let hi = nodes.iter().copied().fold(T::neg_infinity(), T::max);
        Ok(SpectralMeasure {
            kind: MeasureKind::Empirical { nodes, weights },
            atom0: T::zero(),
            support: (lo, hi),
        })
    }

    pub fn kind(&self) -> &MeasureKind<T> {
        &self.kind
    }

    /// Mass of the atom at 0 (free Poisson with rate below 1).
    pub fn atom0(&self) -> T {
        self.atom0
    }

    /// Smallest closed interval carrying the measure, atoms included.
    pub fn support(&self) -> (T, T) {
        let (lo, hi) = self.support;
        if self.atom0 > T::zero() {
            (lo.min(T::zero()), hi.max(T::zero()))
        } else {
            (lo, hi)
        }
    }

    /// Operator norm of an element with this law.
    pub fn norm(&self) -> T {
        let (lo, hi) = self.support();
        lo.abs().max(hi.abs())
    }

    /// Distance from 0 to the support, atoms included.
    pub fn distance_from_zero(&self) -> T {
        let (lo, hi) = self.support();
        if lo > T::zero() {
            lo
        } else if hi < T::zero() {
            -hi
        } else {
            T::zero()
        }
    }

    /// Interval and smooth factor `g` of the absolutely continuous part, whose
    /// density is `√((x-a)(b-x)) g(x)`.
    fn edge_part(&self) -> Option<(T, T)> {
        match &self.kind {
            MeasureKind::Semicircle { .. }
            | MeasureKind::FreePoisson(_)
            | MeasureKind::FreeGig(_) => Some(self.support),
            _ => None,
        }
    }

    fn edge_factor(&self, x: T) -> T {
        let two_pi = T::lit(2.0) * T::PI();
        match &self.kind {
            MeasureKind::Semicircle { radius, .. } => T::lit(2.0) / (T::PI() * *radius * *radius),
            MeasureKind::FreePoisson(p) => T::one() / (two_pi * p.gamma * x),
            MeasureKind::FreeGig(p) => {
                (p.alpha / x + p.beta / ((p.a * p.b).sqrt() * x * x)) / two_pi
            }
            _ => T::zero(),
        }
    }

    /// Density of the absolutely continuous part (0 for atomic measures).
    pub fn density(&self, x: T) -> T {
        match self.edge_part() {
            Some((a, b)) if x > a && x < b => ((x - a) * (b - x)).sqrt() * self.edge_factor(x),
            _ => T::zero(),
        }
    }

    /// `∫ h dμ`, with the continuous part by adaptive edge quadrature.
    pub fn integrate(&self, h: impl Fn(T) -> Complex<T>) -> Result<Complex<T>> {
        self.integrate_tol(h, QUAD_TOL)
    }

    pub fn integrate_tol(&self, h: impl Fn(T) -> Complex<T>, tol: f64) -> Result<Complex<T>> {
        let mut total = Complex::new(T::zero(), T::zero());
        if self.atom0 > T::zero() {
            total += h(T::zero()) * self.atom0;
        }
        match &self.kind {
            MeasureKind::PointMass(c) => total += h(*c),
            MeasureKind::Empirical { nodes, weights } => {
                for (x, w) in nodes.iter().zip(weights) {
                    total += h(*x) * *w;
                }
            }
            _ => {
                let (a, b) = self.support;
                total += edge_integral(a, b, |x| h(x) * self.edge_factor(x), tol)?;
            }
        }
        Ok(total)
    }

    /// Checks that `points` stay away from the support and atoms.
    pub fn check_regular(&self, points: &[Complex<T>]) -> Result<()> {
        let guard = T::lit(1e-6);
        let (lo, hi) = self.support;
        for p in points {
            let near_atom0 = self.atom0 > T::zero() && p.norm() < guard;
            let off_axis = p.im.abs() >= guard;
            let dist_real = if p.re < lo {
                lo - p.re
            } else if p.re > hi {
                p.re - hi
            } else {
                T::zero()
            };
            let near = !off_axis
                && match &self.kind {
                    MeasureKind::Empirical { nodes, .. } => {
                        nodes.iter().any(|x| (p.re - *x).abs() < guard)
                    }
                    _ => dist_real < guard,
                };
            if near || near_atom0 {
                return Err(Error::domain(format!(
                    "singular point {p} meets the support [{lo}, {hi}] (atom at 0: {})",
                    self.atom0
                )));
            }
        }
        Ok(())
    }

    /// Cauchy transform `G(z) = ∫ dμ(x)/(z-x)` by closed form.
    pub fn cauchy(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_regular(&[z])?;
        Ok(self.cauchy_unchecked(z))
    }

    /// Closed-form Cauchy transform without the support check. Callers must
    /// keep `z` off the support.
    pub(crate) fn cauchy_unchecked(&self, z: Complex<T>) -> Complex<T> {
        let one = cplx(T::one());
        let two = T::lit(2.0);
        match &self.kind {
            MeasureKind::PointMass(c) => one / (z - *c),
            MeasureKind::Empirical { nodes, weights } => nodes
                .iter()
                .zip(weights)
                .map(|(x, w)| cplx(*w) / (z - *x))
                .sum(),
            MeasureKind::Semicircle { mean, radius } => {
                let u = z - *mean;
                let s = sqrt_pair(z, *mean - *radius, *mean + *radius);
                cplx(two) / (u + s)
            }
            MeasureKind::FreePoisson(p) => {
                let (a, b) = self.support;
                let s = sqrt_pair(z, a, b);
                let n = z + p.gamma * (T::one() - p.lambda);
                cplx(two) / (n + s)
            }
            MeasureKind::FreeGig(p) => {
                let (pp, q, s) = gig_parts(p, z);
                let plus = pp + q * s;
                let minus = pp - q * s;
                if plus.norm() >= minus.norm() {
                    (z * p.alpha + p.delta) * two / plus
                } else {
                    minus / (z * z * two)
                }
            }
        }
    }

    /// `G'(z)`.
    pub fn cauchy_derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_regular(&[z])?;
        Ok(self.cauchy_derivative_unchecked(z))
    }

    pub(crate) fn cauchy_derivative_unchecked(&self, z: Complex<T>) -> Complex<T> {
        let one = cplx(T::one());
        let two = T::lit(2.0);
        match &self.kind {
            MeasureKind::PointMass(c) => -one / ((z - *c) * (z - *c)),
            MeasureKind::Empirical { nodes, weights } => nodes
                .iter()
                .zip(weights)
                .map(|(x, w)| -cplx(*w) / ((z - *x) * (z - *x)))
                .sum(),
            MeasureKind::Semicircle { mean, radius } => {
                let s = sqrt_pair(z, *mean - *radius, *mean + *radius);
                -self.cauchy_unchecked(z) / s
            }
            MeasureKind::FreePoisson(_) => {
                let (a, b) = self.support;
                let s = sqrt_pair(z, a, b);
                let g = self.cauchy_unchecked(z);
                let ds = (z - (a + b) / two) / s;
                -g * g * (one + ds) / two
            }
            MeasureKind::FreeGig(p) => {
                let (_, q, s) = gig_parts(p, z);
                let g = self.cauchy_unchecked(z);
                let dp = z * (two * p.alpha) - (p.lambda - T::one());
                (dp * g - z * g * g * two - p.alpha) / (-(q * s))
            }
        }
    }

    /// Cauchy transform by quadrature (the closed forms are cross-checked
    /// against this).
    pub fn cauchy_quadrature(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.check_regular(&[z])?;
        self.integrate(|x| (z - x).inv())
    }

    /// Antiderivative of the continuous part, for quantiles.
    pub fn quantile_function(&self) -> Result<Quantiles<T>> {
        match &self.kind {
            MeasureKind::PointMass(c) => Ok(Quantiles::Atom(*c)),
            MeasureKind::Empirical { nodes, weights } => {
                let mut pairs: Vec<(T, T)> =
                    nodes.iter().copied().zip(weights.iter().copied()).collect();
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                Ok(Quantiles::Steps(pairs))
            }
            _ => {
                let (a, b) = self.support;
                let mut n = 256;
                let mut cdf = EdgeCdf::new(a, b, n, |x| self.edge_factor(x));
                let mass = T::one() - self.atom0;
                while (cdf.total() - mass).abs() > T::tol(1e-12) {
                    n *= 2;
                    if n > 1 << 16 {
                        return Err(Error::numeric(
                            "cosine expansion of the density did not converge",
                            vec![format!("terms={n} mass={} expected={mass}", cdf.total())],
                        ));
                    }
                    cdf = EdgeCdf::new(a, b, n, |x| self.edge_factor(x));
                }
                Ok(Quantiles::Edge {
                    atom0: self.atom0,
                    cdf,
                })
            }
        }
    }

    /// `μ((-∞, x])`.
    pub fn cdf(&self, x: T) -> Result<T> {
        Ok(self.quantile_function()?.cdf(x))
    }

    /// Left-continuous inverse of the distribution function.
    pub fn quantile(&self, p: T) -> Result<T> {
        self.quantile_function()?.quantile(p)
    }
}

/// `√(z-a)·√(z-b)`: the branch of `√((z-a)(z-b))` that behaves like `z` at
/// infinity, with its cut on `[a, b]`.
pub(crate) fn sqrt_pair<T: Real>(z: Complex<T>, a: T, b: T) -> Complex<T> {
    (z - a).sqrt() * (z - b).sqrt()
}

/// `P(z) = αz² - (λ-1)z - β`, `Q(z) = αz + β/√(ab)` and the square root, so that
/// `G = (P - QS)/(2z²)`.
fn gig_parts<T: Real>(p: &FreeGigParams<T>, z: Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
    let pp = z * z * p.alpha - z * (p.lambda - T::one()) - p.beta;
    let q = z * p.alpha + p.beta / (p.a * p.b).sqrt();
    (pp, q, sqrt_pair(z, p.a, p.b))
}

/// Quantile function of a measure.
#[derive(Clone, Debug)]
pub enum Quantiles<T> {
    Atom(T),
    Steps(Vec<(T, T)>),
    Edge { atom0: T, cdf: EdgeCdf<T> },
}

impl<T: Real> Quantiles<T> {
    pub fn cdf(&self, x: T) -> T {
        match self {
            Quantiles::Atom(c) => {
                if x >= *c {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Quantiles::Steps(pairs) => pairs.iter().filter(|(n, _)| *n <= x).map(|(_, w)| *w).sum(),
            Quantiles::Edge { atom0, cdf } => {
                let atom = if x >= T::zero() { *atom0 } else { T::zero() };
                atom + cdf.mass_below(x)
            }
        }
    }

    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::domain(format!("quantile level {p} outside [0, 1]")));
        }
        Ok(match self {
            Quantiles::Atom(c) => *c,
            Quantiles::Steps(pairs) => {
                let mut acc = T::zero();
                let mut out = pairs.last().map(|x| x.0).unwrap_or_else(T::zero);
                for (x, w) in pairs {
                    acc += *w;
                    if acc >= p {
                        out = *x;
                        break;
                    }
                }
                out
            }
            Quantiles::Edge { atom0, cdf } => {
                // The atom at 0 sits below the continuous part for the laws we
                // build (free Poisson lives on [0, ∞)).
                if p <= *atom0 {
                    T::zero()
                } else {
                    cdf.invert(p - *atom0)
                }
            }
        })
    }
}

impl<T: Real> MarginalLaw for SpectralMeasure<T> {
    type Function = SpectralFunction<T>;
    type Value = Complex<T>;

    fn function_key(&self, f: &SpectralFunction<T>) -> String {
        f.key()
    }

    fn unit(&self) -> SpectralFunction<T> {
        SpectralFunction::One
    }

    fn joint_moment(&self, fs: &[SpectralFunction<T>]) -> Result<Complex<T>> {
        let singular: Vec<Complex<T>> = fs.iter().flat_map(|f| f.singular_points()).collect();
        self.check_regular(&singular)?;
        self.integrate(|x| fs.iter().fold(cplx(T::one()), |acc, f| acc * f.eval(x)))
    }
}
