use num_complex::Complex;

use crate::cumulants::{Letter, MomentContext, SpectralFunction};
use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::scalar::Real;
use crate::transforms::{subordination, SubordinationPoint, DEFAULT_SUBORDINATION_TOL};

/// Largest truncation order of the `D` and `C` series (word length 13).
pub const MAX_ORDER: usize = 6;
/// Largest truncation order of the `A` and `B` series.
pub const MAX_ORDER_AB: usize = 5;

/// Partial sums of a Boolean-cumulant series against its closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport<T> {
    pub z: Complex<T>,
    /// Truncation order: terms `0..=order` (`1..=order` for `B`).
    pub order: usize,
    pub partial_sums: Vec<Complex<T>>,
    pub closed_form: Complex<T>,
    /// Geometric bound on the omitted tail; infinite when the ratio is `≥ 1`.
    pub tail_bound: T,
    /// `|partial sum - closed form|` at the full order.
    pub residual: T,
    /// `4‖Y‖/(|z| - ‖X‖)`.
    pub ratio: T,
}

impl<T: Real> SeriesReport<T> {
    fn new(
        z: Complex<T>,
        order: usize,
        terms: Vec<Complex<T>>,
        closed_form: Complex<T>,
        scale: T,
        ratio: T,
    ) -> Self {
        let mut acc = Complex::new(T::zero(), T::zero());
        let partial_sums: Vec<Complex<T>> = terms
            .into_iter()
            .map(|t| {
                acc += t;
                acc
            })
            .collect();
        let tail_bound = if ratio < T::one() {
            scale * ratio.powi(order as i32 + 1) / (T::one() - ratio)
        } else {
            T::infinity()
        };
        let residual = (*partial_sums.last().unwrap() - closed_form).norm();
        SeriesReport {
            z,
            order,
            partial_sums,
            closed_form,
            tail_bound,
            residual,
            ratio,
        }
    }

    /// `residual ≤ tail_bound + slack`.
    pub fn within_bound(&self, slack: T) -> bool {
        self.residual <= self.tail_bound + slack
    }
}

/// All four series at one point, sharing one moment context and one
/// subordination solve.
#[derive(Clone, Debug)]
pub struct SeriesSet<T> {
    pub point: SubordinationPoint<T>,
    pub d: SeriesReport<T>,
    pub c: SeriesReport<T>,
    pub a: Option<SeriesReport<T>>,
    pub b: Option<SeriesReport<T>>,
}

struct Setup<T: Real> {
    ctx: MomentContext<SpectralMeasure<T>>,
    point: SubordinationPoint<T>,
    gap: T,
    norm_y: T,
    ratio: T,
}

fn setup<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
) -> Result<Setup<T>> {
    if !(z.im > T::zero()) {
        return Err(Error::domain(format!("series need Im z > 0, got {z}")));
    }
    let norm_x = mu_x.norm();
    let norm_y = mu_y.norm();
    let gap = z.norm() - norm_x;
    if !(gap > T::zero()) {
        return Err(Error::domain(format!(
            "series need |z| > ‖X‖ = {norm_x}, got |z| = {}",
            z.norm()
        )));
    }
    let ratio = T::lit(4.0) * norm_y / gap;
    let point = subordination(mu_x, mu_y, z, DEFAULT_SUBORDINATION_TOL)?;
    Ok(Setup {
        ctx: MomentContext::new(mu_x.clone(), mu_y.clone()),
        point,
        gap,
        norm_y,
        ratio,
    })
}

type L<T> = Letter<SpectralFunction<T>>;

fn resolvent<T: Real>(z: Complex<T>) -> L<T> {
    Letter::a(SpectralFunction::Resolvent(z))
}

fn y<T: Real>() -> L<T> {
    Letter::b(SpectralFunction::Identity)
}

fn y_inv<T: Real>() -> L<T> {
    Letter::b(SpectralFunction::Power(-1))
}

fn check_order(order: usize, max: usize) -> Result<()> {
    if order > max {
        return Err(Error::domain(format!(
            "truncation order {order} exceeds {max}"
        )));
    }
    Ok(())
}

fn d_series<T: Real>(s: &mut Setup<T>, z: Complex<T>, order: usize) -> Result<SeriesReport<T>> {
    let r = resolvent(z);
    let mut terms = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut w = vec![r.clone()];
        for _ in 0..n {
            w.push(y());
            w.push(r.clone());
        }
        terms.push(s.ctx.boolean_cumulant(&w)?);
    }
    let closed = s.point.omega2.inv();
    Ok(SeriesReport::new(
        z,
        order,
        terms,
        closed,
        T::one() / s.gap,
        s.ratio,
    ))
}

fn c_series<T: Real>(s: &mut Setup<T>, z: Complex<T>, order: usize) -> Result<SeriesReport<T>> {
    let r = resolvent(z);
    let mut terms = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut w = vec![y()];
        for _ in 0..n {
            w.push(r.clone());
            w.push(y());
        }
        terms.push(s.ctx.boolean_cumulant(&w)?);
    }
    let closed = z - s.point.omega1;
    Ok(SeriesReport::new(
        z, order, terms, closed, s.norm_y, s.ratio,
    ))
}

fn ab_series<T: Real>(
    s: &mut Setup<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
    order: usize,
) -> Result<(SeriesReport<T>, SeriesReport<T>)> {
    let lo = mu_y.distance_from_zero();
    if mu_y.atom0() > T::zero() || lo < T::lit(1e-6) {
        return Err(Error::domain(
            "A and B series need Y invertible (support away from 0, no atom at 0)",
        ));
    }
    let inv_norm = T::one() / lo;
    let r = resolvent(z);
    let phi_inv = s
        .ctx
        .marginal_moment(&[SpectralFunction::Power(-1)], crate::cumulants::Algebra::B)?;
    let phi_inv2 = s
        .ctx
        .marginal_moment(&[SpectralFunction::Power(-2)], crate::cumulants::Algebra::B)?;
    let (omega2, g) = (s.point.omega2, s.point.g);

    let mut a_terms = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut w = vec![y_inv()];
        for _ in 0..n {
            w.push(r.clone());
            w.push(y());
        }
        a_terms.push(s.ctx.boolean_cumulant(&w)?);
    }
    let a_closed = omega2.inv() + phi_inv / (omega2 * g);
    let a = SeriesReport::new(z, order, a_terms, a_closed, inv_norm, s.ratio);

    let mut b_terms = Vec::with_capacity(order);
    for n in 1..=order {
        let mut w = vec![y_inv(), r.clone()];
        for _ in 1..n {
            w.push(y());
            w.push(r.clone());
        }
        w.push(y_inv());
        b_terms.push(s.ctx.boolean_cumulant(&w)?);
    }
    let b_closed = (phi_inv2 - phi_inv * a_closed) / omega2;
    let b_scale = inv_norm * inv_norm / s.norm_y.max(T::min_positive_value());
    let b = SeriesReport::new(z, order, b_terms, b_closed, b_scale, s.ratio);
    Ok((a, b))
}

/// `Σ_{n≤N} β_{2n+1}(R, Y, R, …, Y, R)` against `1/ω₂(z)`, with
/// `R = (z - X)⁻¹`. Tail bound `q^{N+1}/((1-q)(|z| - ‖X‖))`.
pub fn series_d<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
    order: usize,
) -> Result<SeriesReport<T>> {
    check_order(order, MAX_ORDER)?;
    let mut s = setup(mu_x, mu_y, z)?;
    d_series(&mut s, z, order)
}

/// `Σ_{n≤N} β_{2n+1}(Y, R, Y, …, R, Y)` against `z - ω₁(z)`. Tail bound
/// `‖Y‖q^{N+1}/(1-q)`.
pub fn series_c<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
    order: usize,
) -> Result<SeriesReport<T>> {
    check_order(order, MAX_ORDER)?;
    let mut s = setup(mu_x, mu_y, z)?;
    c_series(&mut s, z, order)
}

/// `A(z) = Σ β_{2n+1}(Y⁻¹, R, Y, …, R, Y)` against `1/ω₂ + φ(Y⁻¹)/(ω₂G)` and
/// `B(z) = Σ_{n≥1} β_{2n+1}(Y⁻¹, R, Y, …, Y, R, Y⁻¹)` against
/// `(φ(Y⁻²) - φ(Y⁻¹)A(z))/ω₂`. Tail bounds carry `‖Y⁻¹‖` and `‖Y⁻¹‖²/‖Y‖`.
pub fn series_a_b<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
    order: usize,
) -> Result<(SeriesReport<T>, SeriesReport<T>)> {
    check_order(order, MAX_ORDER_AB)?;
    if order == 0 {
        return Err(Error::domain(
            "the B series starts at n = 1; order must be at least 1",
        ));
    }
    let mut s = setup(mu_x, mu_y, z)?;
    ab_series(&mut s, mu_y, z, order)
}

/// All series at once: `D` and `C` to `order`, `A` and `B` to
/// `min(order, 5)` when `Y` is invertible.
pub fn series_all<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    z: Complex<T>,
    order: usize,
) -> Result<SeriesSet<T>> {
    check_order(order, MAX_ORDER)?;
    let mut s = setup(mu_x, mu_y, z)?;
    let d = d_series(&mut s, z, order)?;
    let c = c_series(&mut s, z, order)?;
    let invertible = mu_y.atom0() == T::zero() && mu_y.distance_from_zero() >= T::lit(1e-6);
    let (a, b) = if invertible && order >= 1 {
        let (a, b) = ab_series(&mut s, mu_y, z, order.min(MAX_ORDER_AB))?;
        (Some(a), Some(b))
    } else {
        (None, None)
    };
    Ok(SeriesSet {
        point: s.point,
        d,
        c,
        a,
        b,
    })
}
