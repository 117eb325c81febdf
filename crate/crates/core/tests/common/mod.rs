//! Oracles shared by the integration tests. None of them go through the
//! code paths they check.

#![allow(dead_code)]

use freeprob::partitions::noncrossing_partitions;
use freeprob::{Algebra, Field};
use num_complex::Complex;

/// Law given by its moments `m[k] = φ(x^k)`.
pub type Moments<V> = Vec<V>;

/// Moments `0..=kmax` of a finitely supported law given as `(numerator,
/// denominator)` atoms and weights.
pub fn atomic_moments<V: Field>(atoms: &[((i64, i64), (i64, i64))], kmax: usize) -> Moments<V> {
    let q = |(n, d): (i64, i64)| V::from_i64(n).unwrap() / V::from_i64(d).unwrap();
    (0..=kmax)
        .map(|k| {
            atoms.iter().fold(V::zero(), |acc, &(x, w)| {
                let mut p = V::one();
                for _ in 0..k {
                    p = p * q(x);
                }
                acc + q(w) * p
            })
        })
        .collect()
}

/// A letter of the centering oracle: a polynomial in the generator of one
/// algebra, coefficients in increasing degree.
#[derive(Clone, Debug)]
pub struct PolyLetter<V> {
    pub algebra: Algebra,
    pub coeffs: Vec<V>,
}

impl<V: Field> PolyLetter<V> {
    pub fn power(algebra: Algebra, k: usize) -> Self {
        let mut coeffs = vec![V::zero(); k + 1];
        coeffs[k] = V::one();
        PolyLetter { algebra, coeffs }
    }
}

fn poly_mul<V: Field>(p: &[V], q: &[V]) -> Vec<V> {
    let mut out = vec![V::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + a.clone() * b.clone();
        }
    }
    out
}

fn state<V: Field>(m: &Moments<V>, p: &[V]) -> V {
    p.iter()
        .enumerate()
        .fold(V::zero(), |acc, (k, c)| acc + c.clone() * m[k].clone())
}

/// `φ(p₁⋯p_n)` for free generators with the given moments, by the defining
/// property of freeness: write each letter as its centered part plus its
/// mean, expand, drop the fully centered alternating product and recurse.
pub fn centering_moment<V: Field>(laws: &[Moments<V>; 2], word: &[PolyLetter<V>]) -> V {
    let mut merged: Vec<PolyLetter<V>> = Vec::new();
    for l in word {
        match merged.last_mut() {
            Some(last) if last.algebra == l.algebra => {
                last.coeffs = poly_mul(&last.coeffs, &l.coeffs)
            }
            _ => merged.push(l.clone()),
        }
    }
    let idx = |a: Algebra| if a == Algebra::A { 0 } else { 1 };
    match merged.len() {
        0 => return V::one(),
        1 => return state(&laws[idx(merged[0].algebra)], &merged[0].coeffs),
        _ => {}
    }
    let n = merged.len();
    let means: Vec<V> = merged
        .iter()
        .map(|l| state(&laws[idx(l.algebra)], &l.coeffs))
        .collect();
    let centered: Vec<PolyLetter<V>> = merged
        .iter()
        .zip(&means)
        .map(|(l, m)| {
            let mut c = l.coeffs.clone();
            c[0] = c[0].clone() - m.clone();
            PolyLetter {
                algebra: l.algebra,
                coeffs: c,
            }
        })
        .collect();
    let mut total = V::zero();
    for mask in 0u32..(1 << n) - 1 {
        let mut coef = V::one();
        let mut sub = Vec::new();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                sub.push(centered[i].clone());
            } else {
                coef = coef * means[i].clone();
            }
        }
        total = total + coef * centering_moment(laws, &sub);
    }
    total
}

/// `Σ_{π ∈ NC(n)} ∏_{B ∈ π} κ(B)`, where `kappa(indices)` returns the free
/// cumulant of the letters at those positions.
pub fn moment_from_cumulants<V: Field>(n: usize, mut kappa: impl FnMut(&[usize]) -> V) -> V {
    let mut total = V::zero();
    for p in noncrossing_partitions(n).unwrap() {
        let mut term = V::one();
        for b in p.blocks() {
            term = term * kappa(&b);
        }
        total = total + term;
    }
    total
}

/// All words of length `1..=max_len` over `alphabet`.
pub fn all_words<T: Clone>(alphabet: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Edges `(a, b)` of `μ(λ, α, β)` by bisection on the scalar equation for
/// `u = √(ab)`: `α²u⁴ + α(1-λ)u³ - β(1+λ)u - β² = 0`, which has exactly one
/// positive root. Then `a + b = 2(1 + λ + β/u)/α`.
pub fn gig_edges_by_bisection(lambda: f64, alpha: f64, beta: f64) -> (f64, f64) {
    let f = |u: f64| {
        alpha * alpha * u.powi(4) + alpha * (1.0 - lambda) * u.powi(3)
            - beta * (1.0 + lambda) * u
            - beta * beta
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) <= 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m) > 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    let u = 0.5 * (lo + hi);
    let v = 2.0 * (1.0 + lambda + beta / u) / alpha;
    let disc = (v * v - 4.0 * u * u).sqrt();
    ((v - disc) / 2.0, (v + disc) / 2.0)
}

/// Semicircle density with the given mean and radius.
pub fn semicircle_density(mean: f64, radius: f64, x: f64) -> f64 {
    let t = radius * radius - (x - mean) * (x - mean);
    if t <= 0.0 {
        0.0
    } else {
        2.0 * t.sqrt() / (std::f64::consts::PI * radius * radius)
    }
}

/// `count` points spread over the upper half-plane, from near the real axis
/// to far away.
pub fn upper_half_plane_points(count: usize, center: f64, spread: f64) -> Vec<Complex<f64>> {
    (0..count)
        .map(|j| {
            let t = j as f64 / count as f64;
            let re = center + spread * (2.0 * std::f64::consts::PI * t * 3.0).cos();
            let im = 0.05 + 4.0 * t * t + 0.3 * (j % 3) as f64;
            Complex::new(re, im)
        })
        .collect()
}

/// The parameter grid `{1.5, 2, 3} × {0.5, 1, 2} × {0.5, 1, 2}`.
pub fn parameter_grid() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &l in &[1.5, 2.0, 3.0] {
        for &a in &[0.5, 1.0, 2.0] {
            for &b in &[0.5, 1.0, 2.0] {
                out.push((l, a, b));
            }
        }
    }
    out
}
