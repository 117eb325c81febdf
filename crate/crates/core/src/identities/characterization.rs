use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::regression::CaseConstants;
use crate::distributions::FreePoissonParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Pair of regression orders `(k, l)` for `φ(V^k | U)` and `φ(V^l | U)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `φ(V | U) = c`, `φ(V⁻¹ | U) = d`.
    #[serde(rename = "1,-1")]
    OneMinusOne,
    /// `φ(V | U) = c`, `φ(V² | U) = b`.
    #[serde(rename = "1,2")]
    OneTwo,
    /// `φ(V⁻¹ | U) = d`, `φ(V⁻² | U) = h`.
    #[serde(rename = "-1,-2")]
    MinusOneMinusTwo,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::OneMinusOne, Case::OneTwo, Case::MinusOneMinusTwo];
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::OneMinusOne => "1,-1",
            Case::OneTwo => "1,2",
            Case::MinusOneMinusTwo => "-1,-2",
        })
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        match t.as_str() {
            "1,-1" => Ok(Case::OneMinusOne),
            "1,2" => Ok(Case::OneTwo),
            "-1,-2" => Ok(Case::MinusOneMinusTwo),
            _ => Err(Error::domain(format!(
                "unknown case {s:?}; expected one of 1,-1 / 1,2 / -1,-2"
            ))),
        }
    }
}

/// `r(w) = numerator / (intercept - slope·w)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalR<T> {
    pub numerator: T,
    pub intercept: T,
    pub slope: T,
}

impl<T: Real> RationalR<T> {
    pub fn eval(&self, w: Complex<T>) -> Complex<T> {
        Complex::new(self.numerator, T::zero())
            / (Complex::new(self.intercept, T::zero()) - w * self.slope)
    }

    /// The free Poisson law with this r-transform.
    pub fn free_poisson(&self) -> Result<FreePoissonParams<T>> {
        FreePoissonParams::new(self.numerator / self.slope, self.slope / self.intercept)
    }
}

/// Laws recovered from the regression constants: `X + Y ~ μ(λ, α, β)`,
/// `X ~ μ(-λ, α, β)`, `Y ~ ν(λ, 1/α)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Characterization<T> {
    pub case: Case,
    pub lambda: T,
    pub alpha: T,
    pub beta: T,
    pub r_y: RationalR<T>,
    pub y_law: FreePoissonParams<T>,
}

/// Inverse maps from regression constants to the parameters of the laws.
///
/// Errors with a domain error when the Cauchy-Schwarz inequality of the case
/// (`cd > 1`, `b > c²`, `h > d²`) fails.
pub fn characterize_from_constants<T: Real>(
    case: Case,
    k: &CaseConstants<T>,
) -> Result<Characterization<T>> {
    let (lambda, alpha, beta, r_y) = match case {
        Case::OneMinusOne => {
            let cd = k.c * k.d;
            if !(cd > T::one()) {
                return Err(Error::domain(format!(
                    "cd>1 violated (Cauchy-Schwarz): cd = {cd}"
                )));
            }
            let e = cd - T::one();
            (
                cd / e,
                k.gamma / e,
                k.d / e,
                RationalR {
                    numerator: cd,
                    intercept: k.gamma,
                    slope: e,
                },
            )
        }
        Case::OneTwo => {
            let c2 = k.c * k.c;
            if !(k.b > c2) {
                return Err(Error::domain(format!(
                    "b>c^2 violated (Cauchy-Schwarz): b = {}, c^2 = {c2}",
                    k.b
                )));
            }
            let e = k.b - c2;
            let rho = k.rho();
            (
                c2 / e,
                rho / e,
                k.c / e,
                RationalR {
                    numerator: c2,
                    intercept: rho,
                    slope: e,
                },
            )
        }
        Case::MinusOneMinusTwo => {
            let d2 = k.d * k.d;
            if !(k.h > d2) {
                return Err(Error::domain(format!(
                    "h>d^2 violated (Cauchy-Schwarz): h = {}, d^2 = {d2}",
                    k.h
                )));
            }
            let e = k.h - d2;
            (
                k.h / e,
                k.gamma * d2 / e,
                d2 * k.d / e,
                RationalR {
                    numerator: k.h,
                    intercept: d2 * k.gamma,
                    slope: e,
                },
            )
        }
    };
    let y_law = r_y.free_poisson()?;
    Ok(Characterization {
        case,
        lambda,
        alpha,
        beta,
        r_y,
        y_law,
    })
}

/// Residual of the quadratic equation for `G_{X+Y}` derived in each case.
pub fn case_quadratic_residual<T: Real>(
    case: Case,
    k: &CaseConstants<T>,
    z: Complex<T>,
    g: Complex<T>,
) -> Complex<T> {
    let z2 = z * z;
    let one = Complex::new(T::one(), T::zero());
    match case {
        Case::OneMinusOne => {
            let e = k.c * k.d - T::one();
            z2 * g * g * e - (z2 * k.gamma - z - k.d) * g + z * k.gamma + one * (k.d * k.phi_u)
        }
        Case::OneTwo => {
            let c2 = k.c * k.c;
            let rho = k.rho();
            z2 * g * g * (k.b - c2) - (z2 * rho - z * (T::lit(2.0) * c2 - k.b) - k.c) * g
                + z * rho
                + one * (k.phi_u * k.c)
        }
        Case::MinusOneMinusTwo => {
            let d2 = k.d * k.d;
            z2 * g * g * (k.h - d2) - (z2 * k.gamma - z - k.d) * g * d2
                + (z * k.gamma + one * (k.d * k.phi_u)) * d2
        }
    }
}
