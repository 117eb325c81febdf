use num_complex::Complex;
use rayon::prelude::*;

use super::subordination::{subordination, DEFAULT_SUBORDINATION_TOL};
use crate::error::{Error, Result};
use crate::measure::SpectralMeasure;
use crate::scalar::Real;

/// Default distances from the real axis for Stieltjes inversion.
pub const DEFAULT_EPS_LADDER: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

const EDGE_EPS: f64 = 1e-12;
const NODES_PER_INTERVAL: usize = 256;

/// Density of `X ⊞ Y` on a grid, plus the law itself as weighted atoms.
#[derive(Clone, Debug)]
pub struct FreeConvolution<T> {
    pub grid: Vec<T>,
    /// Extrapolated density at the grid points.
    pub density: Vec<T>,
    /// Support intervals found from the grid and refined by bisection.
    pub intervals: Vec<(T, T)>,
    /// Mass of the recovered density before renormalization.
    pub raw_mass: T,
    /// Atoms at Chebyshev-type nodes of each interval, weights renormalized
    /// to 1.
    pub measure: SpectralMeasure<T>,
}

/// Polynomial extrapolation of `(x_i, y_i)` to `x = 0` (Neville).
pub fn neville_at_zero<T: Real>(xs: &[T], ys: &[T]) -> T {
    let mut p = ys.to_vec();
    let n = xs.len();
    for k in 1..n {
        for i in 0..n - k {
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i]);
        }
    }
    p[0]
}

fn raw_density<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    x: T,
    eps: T,
) -> Result<T> {
    let p = subordination(mu_x, mu_y, Complex::new(x, eps), DEFAULT_SUBORDINATION_TOL)?;
    Ok(-p.g.im / T::PI())
}

/// Density of `X ⊞ Y` at `x`: `-Im G(x + iε)/π` extrapolated to `ε = 0`
/// along the ladder. Falls back to the smallest-ε value when the
/// extrapolation turns negative.
fn extrapolated_density<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    x: T,
    ladder: &[T],
) -> Result<T> {
    let values: Vec<T> = ladder
        .iter()
        .map(|&e| raw_density(mu_x, mu_y, x, e))
        .collect::<Result<_>>()?;
    let finest = *values.last().unwrap();
    if finest < -T::lit(1e-8) {
        return Err(Error::numeric(
            format!("negative density {finest} at x={x}"),
            values
                .iter()
                .zip(ladder)
                .map(|(v, e)| format!("eps={e} density={v}"))
                .collect(),
        ));
    }
    let ex = neville_at_zero(ladder, &values);
    Ok(if ex >= T::zero() {
        ex
    } else {
        finest.max(T::zero())
    })
}

/// Free additive convolution by subordination and Stieltjes inversion.
///
/// The grid should cover the support of `X ⊞ Y`. Each run of grid points
/// with visible density becomes an interval whose edges are then located by
/// bisection on the density at distance 1e-12 from the axis; the output law
/// puts `256` weighted atoms on each interval, at the nodes of the edge
/// quadrature rule.
pub fn free_convolve<T: Real>(
    mu_x: &SpectralMeasure<T>,
    mu_y: &SpectralMeasure<T>,
    grid: &[T],
    eps_ladder: &[T],
) -> Result<FreeConvolution<T>> {
    if grid.len() < 2 || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(
            "grid must be strictly increasing with at least two points",
        ));
    }
    if eps_ladder.is_empty() || eps_ladder.iter().any(|e| !(*e > T::zero())) {
        return Err(Error::domain(
            "epsilon ladder must be nonempty and positive",
        ));
    }
    let density: Vec<T> = grid
        .par_iter()
        .map(|&x| extrapolated_density(mu_x, mu_y, x, eps_ladder))
        .collect::<Result<_>>()?;
    let peak = density.iter().copied().fold(T::zero(), T::max);
    if !(peak > T::zero()) {
        return Err(Error::numeric("no density found on the grid", Vec::new()));
    }

    let eps = T::lit(EDGE_EPS);
    let tiny = |x: T| raw_density(mu_x, mu_y, x, eps);
    let visible = peak * T::lit(1e-4);
    let edge_level = peak * T::lit(1e-6);
    let mut runs = Vec::new();
    let mut i = 0;
    while i < grid.len() {
        if density[i] > visible {
            let start = i;
            while i + 1 < grid.len() && density[i + 1] > visible {
                i += 1;
            }
            runs.push((start, i));
        }
        i += 1;
    }
    let h = (grid[grid.len() - 1] - grid[0]) / T::from_usize(grid.len() - 1).unwrap();
    let mut intervals: Vec<(T, T)> = Vec::new();
    for (start, end) in runs {
        let inner = (start..=end)
            .map(|k| grid[k])
            .find(|&x| tiny(x).map(|d| d > edge_level).unwrap_or(false));
        let Some(x_in) = inner else { continue };
        let lo = find_edge(&tiny, x_in, -h, edge_level)?;
        let x_in_right = (start..=end)
            .rev()
            .map(|k| grid[k])
            .find(|&x| tiny(x).map(|d| d > edge_level).unwrap_or(false));
        let hi = find_edge(&tiny, x_in_right.unwrap_or(x_in), h, edge_level)?;
        match intervals.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => intervals.push((lo, hi)),
        }
    }
    if intervals.is_empty() {
        return Err(Error::numeric(
            "could not locate the support of the convolution",
            Vec::new(),
        ));
    }

    let n = NODES_PER_INTERVAL;
    let nt = T::from_usize(n).unwrap();
    let mut nodes = Vec::with_capacity(n * intervals.len());
    let mut weights = Vec::with_capacity(n * intervals.len());
    for &(a, b) in &intervals {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let pts: Vec<(T, T)> = (0..n)
            .map(|j| {
                let theta = T::PI() * (T::from_usize(j).unwrap() + T::lit(0.5)) / nt;
                let (s, c) = theta.sin_cos();
                (mid - half * c, half * s * T::PI() / nt)
            })
            .collect();
        let rho: Vec<T> = pts
            .par_iter()
            .map(|&(x, _)| tiny(x))
            .collect::<Result<_>>()?;
        for ((x, w), r) in pts.into_iter().zip(rho) {
            nodes.push(x);
            weights.push(r.max(T::zero()) * w);
        }
    }
    let raw_mass: T = weights.iter().copied().sum();
    let measure = SpectralMeasure::empirical(nodes, weights)?;
    Ok(FreeConvolution {
        grid: grid.to_vec(),
        density,
        intervals,
        raw_mass,
        measure,
    })
}

/// Walks from `inside` in steps of `step` until the density drops below
/// `level`, then bisects.
fn find_edge<T: Real>(
    density: &impl Fn(T) -> Result<T>,
    inside: T,
    step: T,
    level: T,
) -> Result<T> {
    let mut a = inside;
    let mut b = inside + step;
    let mut guard = 0;
    while density(b)? > level {
        a = b;
        b += step;
        guard += 1;
        if guard > 100_000 {
            return Err(Error::numeric(
                "support edge search ran away",
                vec![format!("at x={b}")],
            ));
        }
    }
    for _ in 0..200 {
        let m = (a + b) / T::lit(2.0);
        if m == a || m == b {
            break;
        }
        if density(m)? > level {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a + b) / T::lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [0.4, 0.2, 0.1];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + 5.0 * x * x).collect();
        assert!((neville_at_zero(&xs, &ys) - 3.0).abs() < 1e-13);
    }

    #[test]
    fn shift_by_point_mass() {
        let x = SpectralMeasure::semicircle(0.0, 1.0).unwrap();
        let y = SpectralMeasure::point_mass(2.0);
        let grid: Vec<f64> = (0..81).map(|i| 0.5 + i as f64 * 0.0375).collect();
        let out = free_convolve(&x, &y, &grid, &[1e-4, 5e-5, 2.5e-5]).unwrap();
        assert_eq!(out.intervals.len(), 1);
        let (a, b) = out.intervals[0];
        assert!((a - 1.0).abs() < 1e-8 && (b - 3.0).abs() < 1e-8, "{a} {b}");
        assert!((out.raw_mass - 1.0).abs() < 1e-6);
        let m1 = out.measure.integrate(|t| Complex::new(t, 0.0)).unwrap().re;
        assert!((m1 - 2.0).abs() < 1e-8);
    }
}
