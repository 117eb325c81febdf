//! Acceptance suite. Prints one line per criterion and exits non-zero when
//! any of them fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    all_words, atomic_moments, centering_moment, parameter_grid, semicircle_density,
};
use common::{upper_half_plane_points, PolyLetter};
use freeprob::identities::{
    characterize_from_constants, derive_constants, eta_inverse_identities, series_all, Case,
    MatsumotoYorSetup,
};
use freeprob::partitions::{catalan, count_noncrossing, interval_partitions, noncrossing_partitions};
use freeprob::rmt::my_empirical_check;
use freeprob::transforms::{cauchy, subordination, DEFAULT_SUBORDINATION_TOL};
use freeprob::{
    check_factorization_formulas, free_convolve, make_free_gig, make_free_poisson,
    matsumoto_yor_pair, Algebra, Error, FreeGigParams, Letter, LetterPool, Measure, MeasureKind,
    MomentContext, MomentSequence,
};
use num_complex::Complex;

type C = Complex<f64>;
type Outcome = Result<String, String>;

const ATOMS_X: [((i64, i64), (i64, i64)); 3] =
    [((0, 1), (1, 2)), ((1, 1), (1, 3)), ((3, 1), (1, 6))];
const ATOMS_Y: [((i64, i64), (i64, i64)); 3] =
    [((-1, 1), (1, 4)), ((1, 2), (1, 2)), ((2, 1), (1, 4))];

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(t: Duration, limit: Duration) -> Result<(), String> {
    ensure(t <= limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn atomic_context() -> MomentContext<MomentSequence<f64>> {
    MomentContext::new(
        MomentSequence {
            moments: atomic_moments(&ATOMS_X, 24),
        },
        MomentSequence {
            moments: atomic_moments(&ATOMS_Y, 24),
        },
    )
}

fn pool() -> Vec<Letter<usize>> {
    vec![Letter::a(1), Letter::a(2), Letter::b(1), Letter::b(2)]
}

fn atom_norm(atoms: &[((i64, i64), (i64, i64))]) -> f64 {
    atoms.iter().map(|&((p, q), _)| (p as f64 / q as f64).abs()).fold(0.0, f64::max)
}

/// Operator norm of a letter `X^f` or `Y^f`.
fn letter_norm(l: &Letter<usize>) -> f64 {
    let base = match l.algebra {
        Algebra::A => atom_norm(&ATOMS_X),
        Algebra::B => atom_norm(&ATOMS_Y),
    };
    base.powi(l.f as i32)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 1..=16 {
        let k = interval_partitions(n).map_err(|e| e.to_string())?.len();
        ensure(k == 1 << (n - 1), || format!("|Int({n})| = {k}"))?;
    }
    for n in 1..=14 {
        let k = count_noncrossing(n).map_err(|e| e.to_string())?;
        ensure(k == catalan(n), || format!("|NC({n})| = {k}"))?;
    }
    within_time(start.elapsed(), Duration::from_secs(10))?;
    Ok("Int(n) for n <= 16, NC(n) for n <= 14".into())
}

fn criterion_2() -> Outcome {
    const MAX_LEN: usize = 8;
    let start = Instant::now();
    let mut ctx = atomic_context();
    let letters = pool();
    let q = letters.len();
    // A word of length n is the base-q code Σ digit_i q^i of its letter
    // indices; cumulants of every word are tabulated once.
    let decode = |n: usize, mut code: usize| -> Vec<Letter<usize>> {
        (0..n)
            .map(|_| {
                let l = letters[code % q].clone();
                code /= q;
                l
            })
            .collect()
    };
    let mut kappa: Vec<Vec<f64>> = vec![Vec::new()];
    for n in 1..=MAX_LEN {
        let row = (0..q.pow(n as u32))
            .map(|code| ctx.free_cumulant(&decode(n, code)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        kappa.push(row);
    }
    let (mut round_trip, mut reflection, mut mixed) = (0.0f64, 0.0f64, 0.0f64);
    let (mut reflection_rel, mut mixed_abs) = (0.0f64, 0.0f64);
    let mut count = 0usize;
    for n in 1..=MAX_LEN {
        let blocks: Vec<Vec<Vec<usize>>> =
            noncrossing_partitions(n).map_err(|e| e.to_string())?.iter().map(|p| p.blocks()).collect();
        for code in 0..q.pow(n as u32) {
            let w = decode(n, code);
            let digits: Vec<usize> = (0..n).map(|i| (code / q.pow(i as u32)) % q).collect();
            let back: f64 = blocks
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|b| {
                            let sub = b.iter().rev().fold(0, |acc, &i| acc * q + digits[i]);
                            kappa[b.len()][sub]
                        })
                        .product::<f64>()
                })
                .sum();
            let m = ctx.mixed_moment(&w).map_err(|e| e.to_string())?;
            round_trip = round_trip.max((m - back).abs() / m.abs().max(1.0));
            let b = ctx.boolean_cumulant(&w).map_err(|e| e.to_string())?;
            let r: Vec<_> = w.iter().rev().cloned().collect();
            let diff = (b - ctx.boolean_cumulant(&r).map_err(|e| e.to_string())?).abs();
            let scale = w.iter().map(letter_norm).product::<f64>().max(1.0);
            reflection = reflection.max(diff / scale);
            reflection_rel = reflection_rel.max(diff / b.abs().max(1.0));
            if w.iter().any(|l| l.algebra == Algebra::A) && w.iter().any(|l| l.algebra == Algebra::B) {
                mixed = mixed.max(kappa[n][code].abs() / scale);
                mixed_abs = mixed_abs.max(kappa[n][code].abs());
            }
            count += 1;
        }
    }
    let laws = [atomic_moments::<f64>(&ATOMS_X, 24), atomic_moments::<f64>(&ATOMS_Y, 24)];
    let mut oracle = 0.0f64;
    for w in all_words(&letters, 6) {
        let poly: Vec<PolyLetter<f64>> = w.iter().map(|l| PolyLetter::power(l.algebra, l.f)).collect();
        let o = centering_moment(&laws, &poly);
        oracle = oracle.max((ctx.mixed_moment(&w).unwrap() - o).abs() / o.abs().max(1.0));
    }
    ensure(round_trip <= 1e-11, || format!("round trip {round_trip:e}"))?;
    ensure(reflection <= 1e-11, || format!("reflection {reflection:e}"))?;
    ensure(mixed <= 1e-10, || format!("mixed cumulants {mixed:e}"))?;
    ensure(oracle <= 1e-10, || format!("centering oracle {oracle:e}"))?;
    within_time(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{count} words; round trip {round_trip:.1e}, reflection {reflection:.1e} (normwise; {reflection_rel:.1e} entrywise), mixed {mixed:.1e} (normwise; {mixed_abs:.1e} absolute), oracle {oracle:.1e}"
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut ctx = atomic_context();
    let pool = LetterPool {
        a: vec![1usize, 2, 3],
        b: vec![1usize, 2, 3],
    };
    let r = check_factorization_formulas(&mut ctx, 4, &pool).map_err(|e| e.to_string())?;
    ensure(r.max() <= 1e-9, || format!("{r:?}"))?;
    within_time(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("max discrepancy {:.1e}", r.max()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let pairs = [
        (
            Measure::semicircle(0.0, 1.0).unwrap(),
            make_free_poisson(2.0, 0.5).unwrap(),
        ),
        (
            make_free_gig(-2.0, 1.0, 1.0).unwrap(),
            make_free_poisson(2.0, 1.0).unwrap(),
        ),
        (
            make_free_poisson(0.5, 1.0).unwrap(),
            Measure::semicircle(1.0, 0.5).unwrap(),
        ),
    ];
    let mut worst = 0.0f64;
    for (x, y) in &pairs {
        for z in upper_half_plane_points(20, 1.0, 4.0) {
            let p = subordination(x, y, z, DEFAULT_SUBORDINATION_TOL).map_err(|e| e.to_string())?;
            let gx = cauchy(x, p.omega1).map_err(|e| e.to_string())?;
            let gy = cauchy(y, p.omega2).map_err(|e| e.to_string())?;
            let res = [
                (gx - p.g).norm(),
                (gy - p.g).norm(),
                (z - (p.omega1 + p.omega2 - p.g.inv())).norm(),
            ];
            worst = res.iter().copied().fold(worst, f64::max);
        }
    }
    ensure(worst <= 1e-9, || {
        format!("subordination residual {worst:e}")
    })?;
    let sc = Measure::semicircle(0.0, 2.0).unwrap();
    let r = 2.0 * 2f64.sqrt();
    let grid: Vec<f64> = (0..=200).map(|i| -3.2 + 6.4 * i as f64 / 200.0).collect();
    let out = free_convolve(&sc, &sc, &grid, &[4e-6, 2e-6, 1e-6]).map_err(|e| e.to_string())?;
    let sup = grid
        .iter()
        .zip(&out.density)
        .map(|(&t, &d)| (d - semicircle_density(0.0, r, t)).abs())
        .fold(0.0, f64::max);
    ensure(sup <= 1e-4, || format!("density sup error {sup:e}"))?;
    within_time(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("residual {worst:.1e}, density sup error {sup:.1e}"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (l, a, b) in parameter_grid() {
        let (x, y) = matsumoto_yor_pair(l, a, b).map_err(|e| e.to_string())?;
        let t = make_free_gig(l, a, b).map_err(|e| e.to_string())?;
        for z in upper_half_plane_points(20, 3.0, 5.0) {
            let p =
                subordination(&x, &y, z, DEFAULT_SUBORDINATION_TOL).map_err(|e| e.to_string())?;
            let d = (p.g - cauchy(&t, z).unwrap()).norm();
            ensure(d <= 1e-6, || format!("({l},{a},{b}) z={z}: {d:e}"))?;
            worst = worst.max(d);
        }
    }
    within_time(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("27 parameter sets x 20 points, max {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let mut worst = 0.0f64;
    for (l, a, b) in parameter_grid() {
        let mu = make_free_gig(l, a, b).map_err(|e| e.to_string())?;
        let p: FreeGigParams<f64> = match mu.kind() {
            MeasureKind::FreeGig(p) => *p,
            _ => return Err("not a free GIG law".into()),
        };
        for z in upper_half_plane_points(20, 3.0, 5.0) {
            let r = p.quadratic_residual(z, cauchy(&mu, z).unwrap()).norm();
            ensure(r <= 1e-9, || format!("({l},{a},{b}) z={z}: {r:e}"))?;
            worst = worst.max(r);
        }
    }
    Ok(format!("max quadratic residual {worst:.1e}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let (x, y) = matsumoto_yor_pair(2.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let z = C::new(0.0, x.norm() + 4.0 * y.norm() + 1.0);
    let s = series_all(&x, &y, z, 6).map_err(|e| e.to_string())?;
    let (a, b) = (
        s.a.ok_or("A series missing")?,
        s.b.ok_or("B series missing")?,
    );
    let mut parts = Vec::new();
    for (name, r) in [("D", &s.d), ("C", &s.c), ("A", &a), ("B", &b)] {
        ensure(r.within_bound(1e-8), || {
            format!(
                "{name}: residual {:e} > bound {:e}",
                r.residual, r.tail_bound
            )
        })?;
        parts.push(format!(
            "{name} {:.1e}<={:.1e}",
            r.residual,
            r.tail_bound + 1e-8
        ));
    }
    ensure(a.order == 5 && s.d.order == 6, || {
        "wrong truncation order".into()
    })?;
    within_time(start.elapsed(), Duration::from_secs(600))?;
    Ok(parts.join(", "))
}

fn criterion_8() -> Outcome {
    let y = make_free_poisson(2.0, 1.0).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for j in 0..10 {
        let w = C::from_polar(0.02, (j as f64 + 0.5) * std::f64::consts::TAU / 10.0);
        let r = eta_inverse_identities(&y, w).map_err(|e| e.to_string())?;
        let d = (r.eta_h - r.eta_h_formula)
            .norm()
            .max((r.eta_hh - r.eta_hh_formula).norm());
        ensure(d <= 1e-7, || format!("w={w}: {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("max {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let (mut reg, mut cons) = (0.0f64, 0.0f64);
    for &(l, a, b) in &[(2.0, 1.0, 1.0), (3.0, 2.0, 1.0)] {
        let s = MatsumotoYorSetup::new(l, a, b).map_err(|e| e.to_string())?;
        for z in upper_half_plane_points(10, 2.0, 3.0) {
            let p = s.subordination(z).map_err(|e| e.to_string())?;
            for k in [1, -1, 2, -2] {
                let r = s.regression_at(k, &p).map_err(|e| e.to_string())?.residual;
                ensure(r <= 1e-6, || format!("({l},{a},{b}) k={k} z={z}: {r:e}"))?;
                reg = reg.max(r);
            }
        }
        for (name, lhs, rhs) in s.consistency() {
            let d = (lhs - rhs).abs();
            ensure(d <= 1e-7, || format!("({l},{a},{b}) {name}: {d:e}"))?;
            cons = cons.max(d);
        }
    }
    Ok(format!("regression {reg:.1e}, consistency {cons:.1e}"))
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    for (l, a, b) in parameter_grid() {
        let k = derive_constants(l, a, b).map_err(|e| e.to_string())?;
        for case in Case::ALL {
            let ch = characterize_from_constants(case, &k).map_err(|e| e.to_string())?;
            let d = (ch.lambda - l)
                .abs()
                .max((ch.alpha - a).abs())
                .max((ch.beta - b).abs());
            ensure(d <= 1e-6, || format!("{case} ({l},{a},{b}): {d:e}"))?;
            worst = worst.max(d);
        }
    }
    let mut k = derive_constants(2.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    k.d = 0.5 / k.c;
    k.b = k.c * k.c;
    k.h = k.d * k.d;
    for (case, msg) in [
        (Case::OneMinusOne, "cd>1 violated"),
        (Case::OneTwo, "b>c^2 violated"),
        (Case::MinusOneMinusTwo, "h>d^2 violated"),
    ] {
        match characterize_from_constants(case, &k) {
            Err(Error::Domain(m)) if m.contains(msg) => {}
            other => {
                return Err(format!(
                    "{case}: expected domain error {msg:?}, got {other:?}"
                ))
            }
        }
    }
    Ok(format!(
        "round trip max {worst:.1e}; guards raise domain errors"
    ))
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?
            .install(|| my_empirical_check(2.0, 1.0, 1.0, 512, 50, 42))
            .map_err(|e| e.to_string())
    };
    let d = run(1)?;
    let mut parts = Vec::new();
    for name in ["kappa2_uv", "c", "d", "b", "h"] {
        let c = d
            .checks
            .iter()
            .find(|c| c.statistic == name)
            .ok_or(format!("{name} missing"))?;
        ensure(c.pass, || {
            format!(
                "{name}: {} vs {} (se {})",
                c.estimate.mean, c.target, c.estimate.se
            )
        })?;
        parts.push(format!("{name} z={:.2}", c.z_score));
    }
    let k2 = d
        .checks
        .iter()
        .find(|c| c.statistic == "kappa2_uv")
        .unwrap();
    ensure(k2.estimate.se <= 0.02, || {
        format!("kappa2 se {}", k2.estimate.se)
    })?;
    let again = run(3)?;
    ensure(again.per_rep == d.per_rep, || {
        "results depend on the thread count".into()
    })?;
    within_time(start.elapsed(), Duration::from_secs(600))?;
    Ok(format!(
        "{}; kappa2 se {:.1e}; identical with 1 and 3 threads",
        parts.join(", "),
        k2.estimate.se
    ))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let filter: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (n, f) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({t:.1?}) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL ({t:.1?}) {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
