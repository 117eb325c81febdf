//! Random-matrix oracle.
//!
//! Two free elements are modelled by `X = diag(spectrum)` and `Y = Q·diag·Qᵀ`
//! with `Q` Haar orthogonal. Spectra are deterministic quantiles, so all the
//! randomness comes from the rotation. Replicate `r` draws its rotation from
//! a ChaCha stream `r` of the master seed, and means are reduced in replicate
//! order, so results do not depend on the thread count.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{make_free_poisson, matsumoto_yor_pair};
use crate::error::{Error, Result};
use crate::identities::derive_constants;
use crate::measure::SpectralMeasure;

/// Condition number above which an inverse is refused.
pub const MAX_CONDITION: f64 = 1e10;

/// A law, a matrix size and a seed.
#[derive(Clone, Debug)]
pub struct MatrixEnsembleSpec {
    pub measure: SpectralMeasure<f64>,
    pub dim: usize,
    pub seed: u64,
}

impl MatrixEnsembleSpec {
    pub fn new(measure: SpectralMeasure<f64>, dim: usize, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(format!(
                "matrix dimension must be at least 2, got {dim}"
            )));
        }
        Ok(MatrixEnsembleSpec { measure, dim, seed })
    }
}

/// Quantiles of `mu` at the midpoints `(i - 1/2)/dim`.
pub fn quantile_spectrum(mu: &SpectralMeasure<f64>, dim: usize) -> Result<Vec<f64>> {
    let q = mu.quantile_function()?;
    (0..dim)
        .map(|i| q.quantile((i as f64 + 0.5) / dim as f64))
        .collect()
}

/// Haar orthogonal matrix: QR of a Gaussian matrix with the signs of `R`'s
/// diagonal moved into `Q`.
pub fn haar_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

fn rep_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// `Q·diag(d)·Qᵀ`.
fn conjugate(q: &DMatrix<f64>, d: &[f64]) -> DMatrix<f64> {
    let mut qd = q.clone();
    for (j, dj) in d.iter().enumerate() {
        qd.column_mut(j).scale_mut(*dj);
    }
    let mut out = &qd * q.transpose();
    symmetrize(&mut out);
    out
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = s;
            m[(j, i)] = s;
        }
    }
}

/// `tr(AB)/n` for symmetric `A`, `B`.
fn trace_prod(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.dot(b) / a.nrows() as f64
}

fn trace(a: &DMatrix<f64>) -> f64 {
    a.trace() / a.nrows() as f64
}

fn check_condition(spectrum: &[f64], what: &str) -> Result<()> {
    let lo = spectrum.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    let hi = spectrum.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(lo > 0.0) || hi / lo > MAX_CONDITION {
        return Err(Error::numeric(
            format!("{what} is too ill-conditioned to invert"),
            vec![format!("min |eigenvalue| = {lo:e}, max = {hi:e}")],
        ));
    }
    Ok(())
}

/// One draw of the pair.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPair {
    pub x_spectrum: Vec<f64>,
    pub y_spectrum: Vec<f64>,
    pub rotation: DMatrix<f64>,
    pub y: DMatrix<f64>,
}

impl MatrixPair {
    pub fn dim(&self) -> usize {
        self.x_spectrum.len()
    }

    pub fn x(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(&self.x_spectrum))
    }

    fn power(&self, element: Element, p: i32) -> Result<DMatrix<f64>> {
        if p == 0 {
            return Ok(DMatrix::identity(self.dim(), self.dim()));
        }
        match element {
            Element::X => {
                if p < 0 {
                    check_condition(&self.x_spectrum, "X")?;
                }
                let d: Vec<f64> = self.x_spectrum.iter().map(|x| x.powi(p)).collect();
                Ok(DMatrix::from_diagonal(&DVector::from_vec(d)))
            }
            Element::Y => {
                if p == 1 {
                    return Ok(self.y.clone());
                }
                if p < 0 {
                    check_condition(&self.y_spectrum, "Y")?;
                }
                let d: Vec<f64> = self.y_spectrum.iter().map(|y| y.powi(p)).collect();
                Ok(conjugate(&self.rotation, &d))
            }
            Element::Sum => {
                let s = self.x() + &self.y;
                if p == 1 {
                    return Ok(s);
                }
                let e = SymmetricEigen::new(s);
                if p < 0 {
                    check_condition(e.eigenvalues.as_slice(), "X+Y")?;
                }
                let d: Vec<f64> = e.eigenvalues.iter().map(|x| x.powi(p)).collect();
                Ok(conjugate(&e.eigenvectors, &d))
            }
        }
    }
}

/// Draws replicate `rep` of the pair. The rotation uses the seed of `spec_y`.
pub fn sample_pair_rep(
    spec_x: &MatrixEnsembleSpec,
    spec_y: &MatrixEnsembleSpec,
    rep: u64,
) -> Result<MatrixPair> {
    if spec_x.dim != spec_y.dim {
        return Err(Error::domain(format!(
            "matrix dimensions differ: {} vs {}",
            spec_x.dim, spec_y.dim
        )));
    }
    let x_spectrum = quantile_spectrum(&spec_x.measure, spec_x.dim)?;
    let y_spectrum = quantile_spectrum(&spec_y.measure, spec_y.dim)?;
    let rotation = haar_orthogonal(spec_y.dim, &mut rep_rng(spec_y.seed, rep));
    let y = conjugate(&rotation, &y_spectrum);
    Ok(MatrixPair {
        x_spectrum,
        y_spectrum,
        rotation,
        y,
    })
}

/// Replicate 0 of the pair.
pub fn sample_pair(spec_x: &MatrixEnsembleSpec, spec_y: &MatrixEnsembleSpec) -> Result<MatrixPair> {
    sample_pair_rep(spec_x, spec_y, 0)
}

/// Building blocks of matrix words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Element {
    X,
    Y,
    /// `X + Y`; power `-1` is `(X+Y)⁻¹`.
    Sum,
}

/// `element^power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Factor {
    pub element: Element,
    pub power: i32,
}

impl Factor {
    pub fn new(element: Element, power: i32) -> Self {
        Factor { element, power }
    }
}

/// Normalized trace of a product of powers.
pub fn empirical_phi(pair: &MatrixPair, word: &[Factor]) -> Result<f64> {
    let n = pair.dim();
    let mut acc = DMatrix::<f64>::identity(n, n);
    for f in word {
        acc = &acc * pair.power(f.element, f.power)?;
    }
    Ok(trace(&acc))
}

/// Mean and standard error over replicates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            se: (var / n).sqrt(),
        }
    }
}

/// `empirical_phi` averaged over `reps` replicates.
pub fn empirical_phi_mean(
    spec_x: &MatrixEnsembleSpec,
    spec_y: &MatrixEnsembleSpec,
    word: &[Factor],
    reps: usize,
) -> Result<Estimate> {
    let xs: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| sample_pair_rep(spec_x, spec_y, r).and_then(|p| empirical_phi(&p, word)))
        .collect::<Result<_>>()?;
    Ok(Estimate::from_samples(&xs))
}

/// Per-replicate statistics of the transformed pair, in a fixed order.
pub const MY_STATISTICS: [&str; 9] = [
    "c",
    "b",
    "d",
    "h",
    "phi_u",
    "phi_u2",
    "kappa2_uv",
    "kappa3_uuv",
    "kappa3_uvv",
];

/// Traces of `U = (X+Y)⁻¹`, `V = X⁻¹ - U` for one replicate, in the order of
/// [`MY_STATISTICS`], and the spectrum of `V`.
fn my_replicate(pair: &MatrixPair) -> Result<([f64; 9], Vec<f64>)> {
    let n = pair.dim();
    let x = &pair.x_spectrum;
    check_condition(x, "X")?;
    check_condition(&pair.y_spectrum, "Y")?;
    let u = pair.power(Element::Sum, -1)?;
    let mut v = -u.clone();
    for i in 0..n {
        v[(i, i)] += 1.0 / x[i];
    }
    // V⁻¹ = X Y⁻¹ X + X.
    let y_inv_d: Vec<f64> = pair.y_spectrum.iter().map(|y| 1.0 / y).collect();
    let mut w = conjugate(&pair.rotation, &y_inv_d);
    for i in 0..n {
        for j in 0..n {
            w[(i, j)] *= x[i] * x[j];
        }
        w[(i, i)] += x[i];
    }
    let u2 = &u * &u;
    let v2 = &v * &v;
    let (pu, pv) = (trace(&u), trace(&v));
    let (puu, pvv, puv) = (trace(&u2), trace(&v2), trace_prod(&u, &v));
    let puuv = trace_prod(&u2, &v);
    let puvv = trace_prod(&u, &v2);
    let stats = [
        pv,
        pvv,
        trace(&w),
        trace_prod(&w, &w),
        pu,
        puu,
        puv - pu * pv,
        puuv - puu * pv - 2.0 * pu * puv + 2.0 * pu * pu * pv,
        puvv - pvv * pu - 2.0 * pv * puv + 2.0 * pv * pv * pu,
    ];
    let spectrum = SymmetricEigen::new(v).eigenvalues.as_slice().to_vec();
    Ok((stats, spectrum))
}

/// Histogram of eigenvalues against the bin averages of a density.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralHistogram {
    pub edges: Vec<f64>,
    pub empirical: Vec<f64>,
    pub target: Vec<f64>,
    /// `max |empirical - target|` over bins.
    pub sup_distance: f64,
}

/// Histogram of `eigenvalues` with `bins` equal bins on the support of `mu`.
pub fn spectral_histogram(
    eigenvalues: &[f64],
    mu: &SpectralMeasure<f64>,
    bins: usize,
) -> Result<SpectralHistogram> {
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let (lo, hi) = mu.support();
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|k| lo + width * k as f64).collect();
    let mut counts = vec![0usize; bins];
    for &e in eigenvalues {
        let k = ((e - lo) / width).floor();
        if k >= 0.0 && (k as usize) < bins {
            counts[k as usize] += 1;
        } else if e == hi {
            counts[bins - 1] += 1;
        }
    }
    let total = eigenvalues.len() as f64;
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / (total * width)).collect();
    let q = mu.quantile_function()?;
    let target: Vec<f64> = edges
        .windows(2)
        .map(|w| (q.cdf(w[1]) - q.cdf(w[0])) / width)
        .collect();
    let sup_distance = empirical
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SpectralHistogram {
        edges,
        empirical,
        target,
        sup_distance,
    })
}

/// One statistic of the Matsumoto-Yor check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatisticCheck {
    pub statistic: String,
    pub estimate: Estimate,
    pub target: f64,
    /// `|mean - target| / SE`.
    pub z_score: f64,
    pub pass: bool,
}

/// Output of [`my_empirical_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MyDiagnostics {
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub dim: usize,
    pub reps: usize,
    pub seed: u64,
    pub checks: Vec<StatisticCheck>,
    /// `per_rep[r][k]` is statistic `MY_STATISTICS[k]` of replicate `r`.
    pub per_rep: Vec<[f64; 9]>,
    /// Spectrum of `V` pooled over replicates, against `ν(λ, 1/β)`.
    pub histogram: SpectralHistogram,
    pub pass: bool,
}

/// Number of histogram bins used by [`my_empirical_check`].
pub const HISTOGRAM_BINS: usize = 32;

/// Monte Carlo test of the free Matsumoto-Yor property at `(λ, α, β)`:
/// `X` with law `μ(-λ, α, β)`, `Y` with law `ν(λ, 1/α)`, `U = (X+Y)⁻¹` and
/// `V = X⁻¹ - (X+Y)⁻¹`. Each statistic passes when its mean lies within three
/// standard errors of its target: the moments of `ν(λ, 1/β)` and of
/// `μ(λ, α, β)` for `c, b, d, h, φ(U), φ(U²)`, and 0 for the mixed free
/// cumulants.
pub fn my_empirical_check(
    lambda: f64,
    alpha: f64,
    beta: f64,
    dim: usize,
    reps: usize,
    seed: u64,
) -> Result<MyDiagnostics> {
    if !(lambda > 1.0) {
        return Err(Error::domain(format!("need lambda > 1, got {lambda}")));
    }
    if dim < 256 {
        return Err(Error::domain(format!("need dim >= 256, got {dim}")));
    }
    if reps < 10 {
        return Err(Error::domain(format!("need reps >= 10, got {reps}")));
    }
    let k = derive_constants(lambda, alpha, beta)?;
    let (mu_x, mu_y) = matsumoto_yor_pair(lambda, alpha, beta)?;
    let spec_x = MatrixEnsembleSpec::new(mu_x, dim, seed)?;
    let spec_y = MatrixEnsembleSpec::new(mu_y, dim, seed)?;
    let x_spectrum = quantile_spectrum(&spec_x.measure, dim)?;
    let y_spectrum = quantile_spectrum(&spec_y.measure, dim)?;
    let results: Vec<([f64; 9], Vec<f64>)> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let rotation = haar_orthogonal(dim, &mut rep_rng(seed, r));
            let y = conjugate(&rotation, &y_spectrum);
            let pair = MatrixPair {
                x_spectrum: x_spectrum.clone(),
                y_spectrum: y_spectrum.clone(),
                rotation,
                y,
            };
            my_replicate(&pair)
        })
        .collect::<Result<_>>()?;

    let targets = [k.c, k.b, k.d, k.h, k.phi_u, k.phi_u2, 0.0, 0.0, 0.0];
    let per_rep: Vec<[f64; 9]> = results.iter().map(|r| r.0).collect();
    let checks: Vec<StatisticCheck> = MY_STATISTICS
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let xs: Vec<f64> = per_rep.iter().map(|s| s[i]).collect();
            let estimate = Estimate::from_samples(&xs);
            let dev = (estimate.mean - targets[i]).abs();
            StatisticCheck {
                statistic: name.to_string(),
                estimate,
                target: targets[i],
                z_score: dev / estimate.se,
                pass: dev <= 3.0 * estimate.se,
            }
        })
        .collect();
    let pooled: Vec<f64> = results.into_iter().flat_map(|r| r.1).collect();
    let v_law = make_free_poisson(lambda, 1.0 / beta)?;
    let histogram = spectral_histogram(&pooled, &v_law, HISTOGRAM_BINS)?;
    let pass = checks.iter().all(|c| c.pass);
    Ok(MyDiagnostics {
        lambda,
        alpha,
        beta,
        dim,
        reps,
        seed,
        checks,
        per_rep,
        histogram,
        pass,
    })
}
