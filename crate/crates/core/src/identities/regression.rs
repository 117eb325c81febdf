use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::distributions::{make_free_gig, make_free_poisson, matsumoto_yor_pair, moment};
use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::scalar::Real;
use crate::transforms::{subordination, SubordinationPoint, DEFAULT_SUBORDINATION_TOL};

/// Regression constants of `V` given `U`, and the moments entering the
/// characterization theorems.
///
/// For `X ~ μ(-λ, α, β)` free of `Y ~ ν(λ, 1/α)`, with `U = (X+Y)⁻¹` and
/// `V = X⁻¹ - (X+Y)⁻¹`: `c = φ(V)`, `b = φ(V²)`, `d = φ(V⁻¹)`, `h = φ(V⁻²)`.
/// `phi_u`, `phi_u2` and `gamma` are `φ(U)`, `φ(U²)` and `φ(Y⁻¹)` (written
/// β, α and γ in the theorems, not to be confused with the law parameters).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseConstants<T> {
    pub c: T,
    pub d: T,
    pub b: T,
    pub h: T,
    pub phi_u: T,
    pub phi_u2: T,
    pub gamma: T,
}

impl<T: Real> CaseConstants<T> {
    /// `ρ = 2φ(U)c² + φ(U²)c - φ(U)b`.
    pub fn rho(&self) -> T {
        T::lit(2.0) * self.phi_u * self.c * self.c + self.phi_u2 * self.c - self.phi_u * self.b
    }

    /// `δ = b + 2cφ(U) + φ(U²)`, which equals `φ(X⁻²)`.
    pub fn delta(&self) -> T {
        self.b + T::lit(2.0) * self.c * self.phi_u + self.phi_u2
    }
}

fn require_invertible<T: Real>(lambda: T) -> Result<()> {
    if !(lambda > T::one()) {
        return Err(Error::domain(format!(
            "need lambda > 1 so that Y is invertible, got {lambda}"
        )));
    }
    Ok(())
}

/// Constants for the free Matsumoto-Yor pair with parameters `(λ, α, β)`.
///
/// `c, b, d, h` are moments of `ν(λ, 1/β)`, the law of `V`; `φ(U)` and
/// `φ(U²)` are negative moments of `μ(λ, α, β)`, the law of `X + Y`; `γ` is
/// the mean of `Y⁻¹` under `ν(λ, 1/α)`. All by quadrature.
pub fn derive_constants<T: Real>(lambda: T, alpha: T, beta: T) -> Result<CaseConstants<T>> {
    require_invertible(lambda)?;
    let v = make_free_poisson(lambda, T::one() / beta)?;
    let t = make_free_gig(lambda, alpha, beta)?;
    let y = make_free_poisson(lambda, T::one() / alpha)?;
    Ok(CaseConstants {
        c: moment(&v, 1)?,
        b: moment(&v, 2)?,
        d: moment(&v, -1)?,
        h: moment(&v, -2)?,
        phi_u: moment(&t, -1)?,
        phi_u2: moment(&t, -2)?,
        gamma: moment(&y, -1)?,
    })
}

/// One side-by-side evaluation of an equation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Residual<T> {
    pub z: Complex<T>,
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    pub residual: T,
}

impl<T: Real> Residual<T> {
    fn new(z: Complex<T>, lhs: Complex<T>, rhs: Complex<T>) -> Self {
        Residual {
            z,
            lhs,
            rhs,
            residual: (lhs - rhs).norm(),
        }
    }
}

/// The free Matsumoto-Yor pair with the moments and constants needed by the
/// regression equations.
#[derive(Clone, Debug)]
pub struct MatsumotoYorSetup<T> {
    pub lambda: T,
    pub alpha: T,
    pub beta: T,
    pub x: SpectralMeasure<T>,
    pub y: SpectralMeasure<T>,
    pub constants: CaseConstants<T>,
    /// `φ(X^k)` for `k = -2, -1, 1, 2`.
    pub phi_x: [T; 4],
    /// `φ(Y⁻²)`.
    pub phi_y_inv2: T,
}

impl<T: Real> MatsumotoYorSetup<T> {
    pub fn new(lambda: T, alpha: T, beta: T) -> Result<Self> {
        require_invertible(lambda)?;
        let (x, y) = matsumoto_yor_pair(lambda, alpha, beta)?;
        let constants = derive_constants(lambda, alpha, beta)?;
        let phi_x = [
            moment(&x, -2)?,
            moment(&x, -1)?,
            moment(&x, 1)?,
            moment(&x, 2)?,
        ];
        let phi_y_inv2 = moment(&y, -2)?;
        Ok(MatsumotoYorSetup {
            lambda,
            alpha,
            beta,
            x,
            y,
            constants,
            phi_x,
            phi_y_inv2,
        })
    }

    pub fn subordination(&self, z: Complex<T>) -> Result<SubordinationPoint<T>> {
        subordination(&self.x, &self.y, z, DEFAULT_SUBORDINATION_TOL)
    }

    /// Both sides of the equation implied by `φ(V^k | U) = const`, for
    /// `k ∈ {1, -1, 2, -2}`.
    pub fn regression(&self, k: i32, z: Complex<T>) -> Result<Residual<T>> {
        let p = self.subordination(z)?;
        self.regression_at(k, &p)
    }

    pub fn regression_at(&self, k: i32, p: &SubordinationPoint<T>) -> Result<Residual<T>> {
        let CaseConstants {
            c,
            d,
            b,
            h,
            phi_u,
            phi_u2,
            gamma,
        } = self.constants;
        let (z, w1, w2, g) = (p.z, p.omega1, p.omega2, p.g);
        let one = Complex::new(T::one(), T::zero());
        let two = T::lit(2.0);
        let [x_m2, x_m1, x_1, x_2] = self.phi_x;
        let (lhs, rhs) = match k {
            1 => ((g + phi_u + c) / w1, (one / z + c) * g + (one * phi_u) / z),
            -1 => (
                (g + gamma) / w2,
                (one * d * phi_u) / (z * z)
                    + (one * gamma) / z
                    + ((one * d) / (z * z) + one / z) * g,
            ),
            2 => (
                (one * x_m2) / w1 + (g + x_m1) * (one / w1 - one * two / z) / w1,
                (one * (x_m2 - b)) / z - (one * phi_u) / (z * z) + (one * b - one / (z * z)) * g,
            ),
            -2 => {
                let a = one / w2 + (one * gamma) / (w2 * g);
                let bb = (one * self.phi_y_inv2 - a * gamma) / w2;
                (
                    bb * x_2 + a * a * (w1 * w1 * g - w1 - x_1),
                    (one * phi_u2 / z + one * phi_u / (z * z) + g / (z * z)) * h,
                )
            }
            _ => {
                return Err(Error::domain(format!(
                    "regression order must be one of 1, -1, 2, -2, got {k}"
                )))
            }
        };
        Ok(Residual::new(z, lhs, rhs))
    }

    /// Scalar identities linking the regression constants to marginal
    /// moments, as `(name, lhs, rhs)`.
    pub fn consistency(&self) -> Vec<(&'static str, T, T)> {
        let CaseConstants {
            c,
            d,
            b,
            h,
            phi_u,
            phi_u2,
            gamma,
        } = self.constants;
        let [x_m2, x_m1, x_1, x_2] = self.phi_x;
        vec![
            ("phi(X^-1) = c + phi(U)", x_m1, c + phi_u),
            ("phi(Y^-1) = phi(U) + d phi(U^2)", gamma, phi_u + d * phi_u2),
            (
                "phi(U^2) = (phi(Y^-1) - phi(U))/d",
                phi_u2,
                (gamma - phi_u) / d,
            ),
            (
                "phi(X^2) phi(Y^-1) = d (1 - phi(U)/phi(Y^-1))",
                x_2 * gamma,
                d * (T::one() - phi_u / gamma),
            ),
            (
                "phi(X^2) phi(Y^-2) = h phi(U^2)",
                x_2 * self.phi_y_inv2,
                h * phi_u2,
            ),
            ("phi(X) = d phi(U)/phi(Y^-1)", x_1, d * phi_u / gamma),
            (
                "phi(X^-2) = b + 2c phi(U) + phi(U^2)",
                x_m2,
                b + T::lit(2.0) * c * phi_u + phi_u2,
            ),
        ]
    }
}
