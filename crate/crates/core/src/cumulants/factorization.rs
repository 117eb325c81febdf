//! Boolean-cumulant factorization formulas for alternating words in two free
//! families, checked against direct evaluation.

use super::{Algebra, Fun, Letter, MarginalLaw, MomentContext, Val};
use crate::error::{Error, Result};
use crate::scalar::Modulus;
use num_traits::Zero;

/// Letters used to build the alternating test words. The i-th letter of the
/// first family is `a[i % a.len()]`, and likewise for `b`.
#[derive(Clone, Debug)]
pub struct LetterPool<F> {
    pub a: Vec<F>,
    pub b: Vec<F>,
}

/// Largest absolute discrepancy of each formula over word sizes `1..=n`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FactorizationReport {
    pub n: usize,
    /// `φ(X₁Y₁⋯XₙYₙ)` expanded over splittings of the `Y`'s.
    pub moment_expansion: f64,
    /// `β_{2n+1}(X₁,Y₁,…,Yₙ,X_{n+1})` expanded over the `X` subsequences.
    pub boolean_expansion: f64,
    /// The same expansion with `X₁ = Z₁`, `X_{n+1} = Z₂` and all other letters equal.
    pub boolean_expansion_special: f64,
    /// `β_n` with the unit in the first or last slot.
    pub unit_slot: f64,
    /// `β_n(X₁X₂, X₃, …) - β_{n+1}(X₁, X₂, X₃, …) - β₁(X₁)β_n(X₂, X₃, …)`.
    pub product_rule: f64,
}

impl FactorizationReport {
    pub fn max(&self) -> f64 {
        [
            self.moment_expansion,
            self.boolean_expansion,
            self.boolean_expansion_special,
            self.unit_slot,
            self.product_rule,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Evaluates both sides of every factorization formula for alternating words
/// of size `1..=n` built from `pool`.
pub fn check_factorization_formulas<L>(
    ctx: &mut MomentContext<L>,
    n: usize,
    pool: &LetterPool<Fun<L>>,
) -> Result<FactorizationReport>
where
    L: MarginalLaw,
    Val<L>: Modulus,
{
    if n == 0 || n > 6 {
        return Err(Error::domain(format!(
            "factorization checks need 1 <= n <= 6, got {n}"
        )));
    }
    if pool.a.is_empty() || pool.b.is_empty() {
        return Err(Error::domain("letter pool needs letters for both algebras"));
    }
    let x = |i: usize| Letter::a(pool.a[(i - 1) % pool.a.len()].clone());
    let y = |i: usize| Letter::b(pool.b[(i - 1) % pool.b.len()].clone());
    let mut report = FactorizationReport {
        n,
        ..Default::default()
    };

    for m in 1..=n {
        // φ(X₁Y₁⋯X_mY_m) = Σ φ(Y_{j₁}⋯Y_{j_{k+1}}) ∏ β(X_{j_l+1}, Y_{j_l+1}, …, X_{j_{l+1}}).
        let lhs = {
            let w: Vec<_> = (1..=m).flat_map(|i| [x(i), y(i)]).collect();
            ctx.mixed_moment(&w)?
        };
        let mut rhs = Val::<L>::zero();
        for mask in 0u32..(1 << (m - 1)) {
            let mut js = vec![0usize];
            js.extend((1..m).filter(|j| mask & (1 << (j - 1)) != 0));
            js.push(m);
            let ys: Vec<_> = js[1..].iter().map(|&j| y(j)).collect();
            let mut term = ctx.mixed_moment(&ys)?;
            for pair in js.windows(2) {
                let (lo, hi) = (pair[0] + 1, pair[1]);
                let mut w = vec![x(lo)];
                for i in lo..hi {
                    w.push(y(i));
                    w.push(x(i + 1));
                }
                term = term * ctx.boolean_cumulant(&w)?;
            }
            rhs = rhs + term;
        }
        report.moment_expansion = report.moment_expansion.max((lhs - rhs).modulus());

        // β_{2m+1}(X₁,Y₁,…,Y_m,X_{m+1}) = Σ β_k(X_{j₁},…,X_{j_k}) ∏ β(Y_{j_l}, X_{j_l+1}, …, Y_{j_{l+1}-1}),
        // with 1 = j₁ < … < j_k = m+1.
        let lhs = {
            let mut w = vec![x(1)];
            for i in 1..=m {
                w.push(y(i));
                w.push(x(i + 1));
            }
            ctx.boolean_cumulant(&w)?
        };
        let mut rhs = Val::<L>::zero();
        for mask in 0u32..(1 << (m - 1)) {
            let mut js = vec![1usize];
            js.extend((2..=m).filter(|j| mask & (1 << (j - 2)) != 0));
            js.push(m + 1);
            let xs: Vec<_> = js.iter().map(|&j| x(j)).collect();
            let mut term = ctx.boolean_cumulant(&xs)?;
            for pair in js.windows(2) {
                let (lo, hi) = (pair[0], pair[1]);
                let mut w = vec![y(lo)];
                for i in (lo + 1)..hi {
                    w.push(x(i));
                    w.push(y(i));
                }
                term = term * ctx.boolean_cumulant(&w)?;
            }
            rhs = rhs + term;
        }
        report.boolean_expansion = report.boolean_expansion.max((lhs - rhs).modulus());

        // Special case: β_{2m+1}(Z₁,Y,X,…,X,Y,Z₂)
        //   = Σ_k β_{k+1}(Z₁,X,…,X,Z₂) Σ_{i₁+…+i_k=m-k} ∏ β_{2i_l+1}(Y,X,…,X,Y).
        let z1 = Letter::a(pool.a[0].clone());
        let xs = Letter::a(pool.a[1 % pool.a.len()].clone());
        let z2 = Letter::a(pool.a[2 % pool.a.len()].clone());
        let ys = Letter::b(pool.b[0].clone());
        let lhs = {
            let mut w = vec![z1.clone(), ys.clone()];
            for _ in 1..m {
                w.push(xs.clone());
                w.push(ys.clone());
            }
            w.push(z2.clone());
            ctx.boolean_cumulant(&w)?
        };
        let mut inner = Vec::with_capacity(m);
        for i in 0..m {
            let mut w = vec![ys.clone()];
            for _ in 0..i {
                w.push(xs.clone());
                w.push(ys.clone());
            }
            inner.push(ctx.boolean_cumulant(&w)?);
        }
        let mut rhs = Val::<L>::zero();
        for k in 1..=m {
            let mut w = vec![z1.clone()];
            w.extend(std::iter::repeat_n(xs.clone(), k - 1));
            w.push(z2.clone());
            let outer = ctx.boolean_cumulant(&w)?;
            rhs = rhs + outer * convolution_power(&inner, k, m - k);
        }
        report.boolean_expansion_special =
            report.boolean_expansion_special.max((lhs - rhs).modulus());

        // Unit in the first or last slot.
        if m >= 2 {
            let unit_a = Letter::a(ctx.law(Algebra::A).unit());
            let unit_b = Letter::b(ctx.law(Algebra::B).unit());
            let body: Vec<_> = (1..m)
                .map(|i| if i % 2 == 1 { y(i) } else { x(i) })
                .collect();
            let mut first = vec![unit_a];
            first.extend(body.iter().cloned());
            let mut last = body.clone();
            last.push(unit_b);
            let r = ctx
                .boolean_cumulant(&first)?
                .modulus()
                .max(ctx.boolean_cumulant(&last)?.modulus());
            report.unit_slot = report.unit_slot.max(r);
        }

        // Product rule with X₁ ∈ A and X₂ ∈ B.
        let tail: Vec<_> = (2..=m)
            .map(|i| if i % 2 == 0 { x(i) } else { y(i) })
            .collect();
        let mut groups = vec![vec![x(1), y(1)]];
        groups.extend(tail.iter().map(|l| vec![l.clone()]));
        let lhs = ctx.boolean_cumulant_grouped(&groups)?;
        let mut full = vec![x(1), y(1)];
        full.extend(tail.iter().cloned());
        let mut shifted = vec![y(1)];
        shifted.extend(tail.iter().cloned());
        let rhs = ctx.boolean_cumulant(&full)?
            + ctx.mixed_moment(&[x(1)])? * ctx.boolean_cumulant(&shifted)?;
        report.product_rule = report.product_rule.max((lhs - rhs).modulus());
    }
    Ok(report)
}

/// `Σ_{i₁+…+i_k = total} c_{i₁}⋯c_{i_k}`.
fn convolution_power<V: crate::scalar::Field>(c: &[V], k: usize, total: usize) -> V {
    let mut conv = vec![V::zero(); total + 1];
    conv[0] = V::one();
    for _ in 0..k {
        let mut next = vec![V::zero(); total + 1];
        for (i, ci) in conv.iter().enumerate() {
            for j in 0..=(total - i) {
                next[i + j] = next[i + j].clone() + ci.clone() * c[j].clone();
            }
        }
        conv = next;
    }
    conv[total].clone()
}
