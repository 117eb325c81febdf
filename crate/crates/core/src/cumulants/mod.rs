//! Moments and cumulants of words in two free algebras.
//!
//! A [`Letter`] is a function of one of two free self-adjoint elements, tagged
//! by [`Algebra`]. Everything is evaluated from the two marginal laws: mixed
//! moments are sums over non-crossing partitions whose blocks stay inside one
//! algebra (mixed free cumulants vanish), and the within-algebra free cumulants
//! come from marginal joint moments.
//!
//! The engine is generic over the value field, so the same code runs on
//! complex numbers (resolvent letters) and on exact rationals.

mod factorization;

use std::collections::HashMap;
use std::fmt::Debug;
use std::sync::OnceLock;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{catalan, visit_compositions, visit_noncrossing};
use crate::scalar::{from_int, Field, Real};

pub use factorization::{check_factorization_formulas, FactorizationReport, LetterPool};

/// Longest word accepted by the engine.
pub const MAX_WORD_LEN: usize = 13;

/// Which of the two free algebras a letter belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    A,
    B,
}

impl Algebra {
    fn index(self) -> usize {
        match self {
            Algebra::A => 0,
            Algebra::B => 1,
        }
    }

    fn tag(self) -> char {
        match self {
            Algebra::A => 'A',
            Algebra::B => 'B',
        }
    }
}

/// A function applied to a self-adjoint element.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralFunction<T> {
    /// The unit.
    One,
    Identity,
    /// `x^k`; negative `k` needs the law to stay away from 0.
    Power(i32),
    /// `(z - x)^{-1}`.
    Resolvent(Complex<T>),
    /// `(1 - w x)^{-1}`.
    ShiftedResolvent(Complex<T>),
    /// Pointwise product of the listed functions.
    Product(Vec<SpectralFunction<T>>),
}

impl<T: Real> SpectralFunction<T> {
    pub fn eval(&self, x: T) -> Complex<T> {
        let one = Complex::new(T::one(), T::zero());
        let xc = Complex::new(x, T::zero());
        match self {
            SpectralFunction::One => one,
            SpectralFunction::Identity => xc,
            SpectralFunction::Power(k) => Complex::new(x.powi(*k), T::zero()),
            SpectralFunction::Resolvent(z) => one / (*z - xc),
            SpectralFunction::ShiftedResolvent(w) => one / (one - *w * xc),
            SpectralFunction::Product(fs) => fs.iter().fold(one, |acc, f| acc * f.eval(x)),
        }
    }

    /// Points of the real line or complex plane where the function blows up.
    pub fn singular_points(&self) -> Vec<Complex<T>> {
        match self {
            SpectralFunction::Power(k) if *k < 0 => vec![Complex::new(T::zero(), T::zero())],
            SpectralFunction::Resolvent(z) => vec![*z],
            SpectralFunction::ShiftedResolvent(w) if w.norm() > T::zero() => vec![w.inv()],
            SpectralFunction::Product(fs) => fs.iter().flat_map(|f| f.singular_points()).collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            SpectralFunction::One | SpectralFunction::Power(0) => true,
            SpectralFunction::Product(fs) => fs.iter().all(|f| f.is_one()),
            _ => false,
        }
    }

    /// Canonical memo key; parameters rounded to 15 significant digits.
    pub fn key(&self) -> String {
        fn num<T: Real>(v: T) -> String {
            format!("{:.14e}", v.to_f64().unwrap_or(f64::NAN))
        }
        fn cnum<T: Real>(z: &Complex<T>) -> String {
            format!("{},{}", num(z.re), num(z.im))
        }
        match self {
            SpectralFunction::One => "1".into(),
            SpectralFunction::Identity => "x".into(),
            SpectralFunction::Power(k) => format!("p{k}"),
            SpectralFunction::Resolvent(z) => format!("r({})", cnum(z)),
            SpectralFunction::ShiftedResolvent(w) => format!("s({})", cnum(w)),
            SpectralFunction::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| f.key()).collect();
                format!("[{}]", parts.join("*"))
            }
        }
    }
}

/// A letter: a function of the element generating one algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Letter<F> {
    pub algebra: Algebra,
    pub f: F,
}

impl<F> Letter<F> {
    pub fn new(algebra: Algebra, f: F) -> Self {
        Letter { algebra, f }
    }

    pub fn a(f: F) -> Self {
        Letter {
            algebra: Algebra::A,
            f,
        }
    }

    pub fn b(f: F) -> Self {
        Letter {
            algebra: Algebra::B,
            f,
        }
    }
}

/// A nonempty word of at most [`MAX_WORD_LEN`] letters.
#[derive(Clone, Debug, PartialEq)]
pub struct Word<F>(Vec<Letter<F>>);

impl<F> Word<F> {
    pub fn new(letters: Vec<Letter<F>>) -> Result<Self> {
        check_len(letters.len())?;
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter<F>] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter<F>> {
        self.0
    }
}

impl<F> std::ops::Deref for Word<F> {
    type Target = [Letter<F>];
    fn deref(&self) -> &[Letter<F>] {
        &self.0
    }
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > MAX_WORD_LEN {
        return Err(Error::domain(format!(
            "word length must be in 1..={MAX_WORD_LEN}, got {n}"
        )));
    }
    Ok(())
}

/// A law of a single self-adjoint element, able to integrate products of
/// functions of that element.
pub trait MarginalLaw {
    type Function: Clone + Debug;
    type Value: Field;

    fn function_key(&self, f: &Self::Function) -> String;

    /// The constant function 1.
    fn unit(&self) -> Self::Function;

    /// `φ(f₁(x)⋯f_k(x))`. Functions of one element commute, so order is
    /// irrelevant.
    fn joint_moment(&self, fs: &[Self::Function]) -> Result<Self::Value>;
}

/// A law given by its moment sequence, with letters `x^k`.
///
/// Used with exact rationals to test the combinatorics without quadrature.
#[derive(Clone, Debug)]
pub struct MomentSequence<V> {
    /// `moments[k] = φ(x^k)`, with `moments[0] = 1`.
    pub moments: Vec<V>,
}

impl<V: Field> MarginalLaw for MomentSequence<V> {
    type Function = usize;
    type Value = V;

    fn function_key(&self, f: &usize) -> String {
        f.to_string()
    }

    fn unit(&self) -> usize {
        0
    }

    fn joint_moment(&self, fs: &[usize]) -> Result<V> {
        let k: usize = fs.iter().sum();
        self.moments
            .get(k)
            .cloned()
            .ok_or_else(|| Error::domain(format!("moment of order {k} not available")))
    }
}

/// `φ(w[l..r])` for every subinterval of a word.
#[derive(Clone, Debug)]
pub struct IntervalMoments<V> {
    n: usize,
    table: Vec<V>,
}

impl<V: Clone> IntervalMoments<V> {
    /// Moment of the letters `l..r` (`l < r`).
    pub fn get(&self, l: usize, r: usize) -> V {
        self.table[l * (self.n + 1) + r].clone()
    }
}

/// State `φ` on the free product of two algebras with given marginals, plus
/// memo tables.
pub struct MomentContext<L: MarginalLaw> {
    laws: [L; 2],
    marginal_memo: HashMap<String, L::Value>,
    cumulant_memo: HashMap<String, L::Value>,
    word_memo: HashMap<String, L::Value>,
}

type Fun<L> = <L as MarginalLaw>::Function;
type Val<L> = <L as MarginalLaw>::Value;

impl<L: MarginalLaw> MomentContext<L> {
    pub fn new(law_a: L, law_b: L) -> Self {
        MomentContext {
            laws: [law_a, law_b],
            marginal_memo: HashMap::new(),
            cumulant_memo: HashMap::new(),
            word_memo: HashMap::new(),
        }
    }

    pub fn law(&self, algebra: Algebra) -> &L {
        &self.laws[algebra.index()]
    }

    /// Drops all memoized values.
    pub fn clear_cache(&mut self) {
        self.marginal_memo.clear();
        self.cumulant_memo.clear();
        self.word_memo.clear();
    }

    fn letter_key(&self, l: &Letter<Fun<L>>) -> String {
        format!(
            "{}:{}",
            l.algebra.tag(),
            self.law(l.algebra).function_key(&l.f)
        )
    }

    fn word_key(&self, w: &[Letter<Fun<L>>]) -> String {
        let keys: Vec<String> = w.iter().map(|l| self.letter_key(l)).collect();
        keys.join("|")
    }

    /// `∫ ∏ fᵢ dμ` for the law of `algebra`.
    pub fn marginal_moment(&mut self, fs: &[Fun<L>], algebra: Algebra) -> Result<Val<L>> {
        let law = &self.laws[algebra.index()];
        let mut keys: Vec<String> = fs.iter().map(|f| law.function_key(f)).collect();
        keys.sort();
        let key = format!("{}:{}", algebra.tag(), keys.join("*"));
        if let Some(v) = self.marginal_memo.get(&key) {
            return Ok(v.clone());
        }
        let v = law.joint_moment(fs)?;
        self.marginal_memo.insert(key, v.clone());
        Ok(v)
    }

    /// Free cumulant of letters that all belong to `algebra`.
    fn block_cumulant(&mut self, algebra: Algebra, fs: &[Fun<L>], key: &str) -> Result<Val<L>> {
        if let Some(v) = self.cumulant_memo.get(key) {
            return Ok(v.clone());
        }
        let m = fs.len();
        let mut kappa = self.marginal_moment(fs, algebra)?;
        if m > 1 {
            // φ(f₁⋯f_m) = Σ over the block B ∋ 1 of κ_B · ∏ φ(gap), so peel off
            // every block other than the full one.
            let tail = m - 1;
            for mask in 0u32..((1u32 << tail) - 1) {
                let mut block = vec![0usize];
                block.extend((0..tail).filter(|j| mask & (1 << j) != 0).map(|j| j + 1));
                let mut term = {
                    let sub: Vec<Fun<L>> = block.iter().map(|&i| fs[i].clone()).collect();
                    let sub_key = sub_key(key, &block);
                    self.block_cumulant(algebra, &sub, &sub_key)?
                };
                let mut ends = block.clone();
                ends.push(m);
                for pair in ends.windows(2) {
                    let (lo, hi) = (pair[0] + 1, pair[1]);
                    if lo < hi {
                        term = term * self.marginal_moment(&fs[lo..hi], algebra)?;
                    }
                }
                kappa = kappa - term;
            }
        }
        self.cumulant_memo.insert(key.to_string(), kappa.clone());
        Ok(kappa)
    }

    /// `φ(w[l..r])` for all `l < r`, by summing over non-crossing partitions
    /// with single-algebra blocks. The block containing the first letter of
    /// an interval splits the rest into independent gaps.
    pub fn interval_moments(&mut self, w: &[Letter<Fun<L>>]) -> Result<IntervalMoments<Val<L>>> {
        check_len(w.len())?;
        let n = w.len();
        let idx = |l: usize, r: usize| l * (n + 1) + r;
        let keys: Vec<String> = w.iter().map(|l| self.letter_key(l)).collect();
        let one = Val::<L>::one();
        let mut table = vec![one; (n + 1) * (n + 1)];
        for len in 1..=n {
            for l in 0..=(n - len) {
                let r = l + len;
                let algebra = w[l].algebra;
                let cand: Vec<usize> = ((l + 1)..r).filter(|&p| w[p].algebra == algebra).collect();
                let mut sum = Val::<L>::zero();
                for mask in 0u32..(1u32 << cand.len()) {
                    let mut block = vec![l];
                    block.extend(
                        cand.iter()
                            .enumerate()
                            .filter(|(j, _)| mask & (1 << j) != 0)
                            .map(|(_, &p)| p),
                    );
                    let fs: Vec<Fun<L>> = block.iter().map(|&p| w[p].f.clone()).collect();
                    let key: Vec<&str> = block.iter().map(|&p| keys[p].as_str()).collect();
                    let mut term = self.block_cumulant(algebra, &fs, &key.join("|"))?;
                    let mut ends = block;
                    ends.push(r);
                    for pair in ends.windows(2) {
                        let (lo, hi) = (pair[0] + 1, pair[1]);
                        if lo < hi {
                            term = term * table[idx(lo, hi)].clone();
                        }
                    }
                    sum = sum + term;
                }
                table[idx(l, r)] = sum;
            }
        }
        Ok(IntervalMoments { n, table })
    }

    /// `φ(w)` for a word mixing letters of both algebras.
    pub fn mixed_moment(&mut self, w: &[Letter<Fun<L>>]) -> Result<Val<L>> {
        check_len(w.len())?;
        let key = self.word_key(w);
        self.mixed_moment_keyed(w, key)
    }

    fn mixed_moment_keyed(&mut self, w: &[Letter<Fun<L>>], key: String) -> Result<Val<L>> {
        if let Some(v) = self.word_memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.interval_moments(w)?.get(0, w.len());
        self.word_memo.insert(key, v.clone());
        Ok(v)
    }

    /// Multivariate free cumulant `κ_n(w)` by Möbius inversion over `NC(n)`.
    pub fn free_cumulant(&mut self, w: &[Letter<Fun<L>>]) -> Result<Val<L>> {
        check_len(w.len())?;
        let n = w.len();
        let keys: Vec<String> = w.iter().map(|l| self.letter_key(l)).collect();
        let mut sub_moments: Vec<Option<Val<L>>> = vec![None; 1 << n];
        free_cumulant_from_moments(n, |mask| {
            if let Some(v) = &sub_moments[mask as usize] {
                return Ok(v.clone());
            }
            let selected = || (0..n).filter(|i| mask & (1 << i) != 0);
            let sub: Vec<Letter<Fun<L>>> = selected().map(|i| w[i].clone()).collect();
            let key = selected().map(|i| keys[i].as_str()).collect::<Vec<_>>().join("|");
            let v = self.mixed_moment_keyed(&sub, key)?;
            sub_moments[mask as usize] = Some(v.clone());
            Ok(v)
        })
    }

    /// Boolean cumulant `β_n(w) = Σ_{π ∈ Int(n)} (-1)^{|π|+1} φ_π(w)`.
    pub fn boolean_cumulant(&mut self, w: &[Letter<Fun<L>>]) -> Result<Val<L>> {
        let table = self.interval_moments(w)?;
        Ok(boolean_from_intervals(w.len(), |l, r| table.get(l, r)))
    }

    /// Boolean cumulant from the defining recursion
    /// `φ(w₁⋯w_n) = Σ_k β_k(w₁,…,w_k) φ(w_{k+1}⋯w_n)`.
    pub fn boolean_cumulant_recursive(&mut self, w: &[Letter<Fun<L>>]) -> Result<Val<L>> {
        let table = self.interval_moments(w)?;
        let n = w.len();
        let mut prefix: Vec<Val<L>> = Vec::with_capacity(n + 1);
        prefix.push(Val::<L>::zero());
        for k in 1..=n {
            let mut b = table.get(0, k);
            for (j, bj) in prefix.iter().enumerate().take(k).skip(1) {
                b = b - bj.clone() * table.get(j, k);
            }
            prefix.push(b);
        }
        Ok(prefix[n].clone())
    }

    /// `β_k(W₁,…,W_k)` where each argument is itself a product of letters.
    pub fn boolean_cumulant_grouped(&mut self, groups: &[Vec<Letter<Fun<L>>>]) -> Result<Val<L>> {
        if groups.is_empty() || groups.iter().any(|g| g.is_empty()) {
            return Err(Error::domain(
                "grouped Boolean cumulant needs nonempty groups",
            ));
        }
        let mut starts = vec![0usize];
        let mut flat = Vec::new();
        for g in groups {
            flat.extend(g.iter().cloned());
            starts.push(flat.len());
        }
        let table = self.interval_moments(&flat)?;
        Ok(boolean_from_intervals(groups.len(), |l, r| {
            table.get(starts[l], starts[r])
        }))
    }
}

fn sub_key(key: &str, block: &[usize]) -> String {
    let parts: Vec<&str> = key.split('|').collect();
    let sub: Vec<&str> = block.iter().map(|&i| parts[i]).collect();
    sub.join("|")
}

fn boolean_from_intervals<V: Field>(n: usize, phi: impl Fn(usize, usize) -> V) -> V {
    let mut total = V::zero();
    visit_compositions(n, &mut |sizes| {
        let mut term = V::one();
        let mut start = 0;
        for &s in sizes {
            term = term * phi(start, start + s);
            start += s;
        }
        if sizes.len() % 2 == 1 {
            total = total.clone() + term;
        } else {
            total = total.clone() - term;
        }
    });
    total
}

/// `μ(π, 1_n)` for the partition with the given canonical labels: the product
/// over Kreweras blocks `V` of `(-1)^{|V|-1} Cat(|V|-1)`.
fn moebius_from_labels(
    labels: &[u8],
    pred: &mut [usize],
    seen: &mut [bool],
    last: &mut [usize],
) -> i64 {
    let n = labels.len();
    for l in last.iter_mut() {
        *l = usize::MAX;
    }
    let mut first = [usize::MAX; 32];
    for (i, &b) in labels.iter().enumerate() {
        let b = b as usize;
        if first[b] == usize::MAX {
            first[b] = i;
        } else {
            pred[i] = last[b];
        }
        last[b] = i;
    }
    for (b, &f) in first.iter().enumerate() {
        if f == usize::MAX {
            break;
        }
        pred[f] = last[b];
    }
    seen.fill(false);
    let mut coeff: i64 = 1;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut size = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            size += 1;
            i = pred[(i + 1) % n];
        }
        let c = catalan(size - 1) as i64;
        coeff *= if size % 2 == 1 { c } else { -c };
    }
    coeff
}

/// Longest `n` whose `NC(n)` Möbius table is kept after first use.
const CACHED_NC_MAX: usize = 10;

/// `NC(n)` as Möbius coefficients and block masks; partition `j` owns
/// `masks[offsets[j]..offsets[j + 1]]`.
struct MoebiusTable {
    coeffs: Vec<i64>,
    offsets: Vec<usize>,
    masks: Vec<u32>,
}

fn build_moebius_table(n: usize) -> Result<MoebiusTable> {
    let mut pred = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut last = vec![0usize; n];
    let mut t = MoebiusTable { coeffs: Vec::new(), offsets: vec![0], masks: Vec::new() };
    let mut block = [0u32; 32];
    visit_noncrossing(n, &mut |labels| {
        let k = *labels.iter().max().unwrap() as usize + 1;
        block[..k].fill(0);
        for (i, &b) in labels.iter().enumerate() {
            block[b as usize] |= 1 << i;
        }
        t.coeffs.push(moebius_from_labels(labels, &mut pred, &mut seen, &mut last));
        t.masks.extend_from_slice(&block[..k]);
        t.offsets.push(t.masks.len());
    })?;
    Ok(t)
}

fn moebius_table(n: usize) -> Option<&'static MoebiusTable> {
    static TABLES: [OnceLock<MoebiusTable>; CACHED_NC_MAX + 1] = [const { OnceLock::new() }; CACHED_NC_MAX + 1];
    let cell = TABLES.get(n).filter(|_| n >= 1)?;
    Some(cell.get_or_init(|| build_moebius_table(n).expect("1 <= n <= CACHED_NC_MAX")))
}

/// `κ_n = Σ_{π ∈ NC(n)} μ(π, 1_n) ∏_{B ∈ π} φ(B)`, where `phi(mask)` returns the
/// moment of the letters selected by a bitmask (in order).
pub fn free_cumulant_from_moments<V: Field>(
    n: usize,
    mut phi: impl FnMut(u32) -> Result<V>,
) -> Result<V> {
    if n == 1 {
        return phi(1);
    }
    let owned;
    let t = match moebius_table(n) {
        Some(t) => t,
        None => {
            owned = build_moebius_table(n)?;
            &owned
        }
    };
    let mut total = V::zero();
    for (j, &mu) in t.coeffs.iter().enumerate() {
        let mut term: V = from_int(mu);
        for &m in &t.masks[t.offsets[j]..t.offsets[j + 1]] {
            term = term * phi(m)?;
        }
        total = total + term;
    }
    Ok(total)
}

/// Moments `m₀..m_n` (with `m₀ = 1`) from free cumulants `κ₁..κ_n`
/// (`kappa[0]` is ignored).
pub fn free_cumulants_to_moments<V: Field>(kappa: &[V]) -> Vec<V> {
    let n = kappa.len().saturating_sub(1);
    let mut m = vec![V::one()];
    for k in 1..=n {
        // The block containing 1 has size s; the s gaps carry independent moments.
        let mut total = V::zero();
        for s in 1..=k {
            total = total + kappa[s].clone() * gap_sum(&m, s, k - s);
        }
        m.push(total);
    }
    m
}

/// Free cumulants `κ₀..κ_n` (with `κ₀ = 0`) from moments `m₀..m_n`.
pub fn moments_to_free_cumulants<V: Field>(m: &[V]) -> Vec<V> {
    let n = m.len().saturating_sub(1);
    let mut kappa = vec![V::zero()];
    for k in 1..=n {
        let mut rest = V::zero();
        for s in 1..k {
            rest = rest + kappa[s].clone() * gap_sum(m, s, k - s);
        }
        kappa.push(m[k].clone() - rest);
    }
    kappa
}

/// Boolean cumulants `β₀..β_n` (with `β₀ = 0`) from moments `m₀..m_n`.
pub fn moments_to_boolean_cumulants<V: Field>(m: &[V]) -> Vec<V> {
    let n = m.len().saturating_sub(1);
    let mut beta = vec![V::zero()];
    for k in 1..=n {
        let mut b = m[k].clone();
        for j in 1..k {
            b = b - beta[j].clone() * m[k - j].clone();
        }
        beta.push(b);
    }
    beta
}

/// `Σ_{i₁+…+i_s = total} m_{i₁}⋯m_{i_s}`.
fn gap_sum<V: Field>(m: &[V], s: usize, total: usize) -> V {
    let mut conv = vec![V::zero(); total + 1];
    conv[0] = V::one();
    for _ in 0..s {
        let mut next = vec![V::zero(); total + 1];
        for (i, ci) in conv.iter().enumerate() {
            for j in 0..=(total - i) {
                next[i + j] = next[i + j].clone() + ci.clone() * m[j].clone();
            }
        }
        conv = next;
    }
    conv[total].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(moments: &[i64]) -> MomentSequence<f64> {
        MomentSequence {
            moments: moments.iter().map(|&m| m as f64).collect(),
        }
    }

    // Standard semicircle: Catalan numbers at even orders.
    fn semicircle() -> MomentSequence<f64> {
        seq(&[
            1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42, 0, 132, 0, 429, 0, 1430, 0, 4862, 0, 16796, 0,
            58786, 0, 208012, 0, 742900,
        ])
    }

    // Free Poisson ν(1,1): Catalan numbers.
    fn free_poisson() -> MomentSequence<f64> {
        seq(&[
            1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012, 742900, 2674440,
        ])
    }

    #[test]
    fn single_algebra_word_is_marginal_moment() {
        let mut ctx = MomentContext::new(free_poisson(), semicircle());
        let w = vec![Letter::a(1), Letter::a(2), Letter::a(1)];
        assert_eq!(ctx.mixed_moment(&w).unwrap(), 14.0);
    }

    #[test]
    fn length_two_factorizes() {
        let mut ctx = MomentContext::new(free_poisson(), free_poisson());
        let w = vec![Letter::a(2), Letter::b(3)];
        assert_eq!(ctx.mixed_moment(&w).unwrap(), 2.0 * 5.0);
    }

    #[test]
    fn alternating_semicircles() {
        // φ(XYXY) = 0 for free standard semicircles; φ(XXYY) = 1.
        let mut ctx = MomentContext::new(semicircle(), semicircle());
        let xyxy = vec![Letter::a(1), Letter::b(1), Letter::a(1), Letter::b(1)];
        assert_eq!(ctx.mixed_moment(&xyxy).unwrap(), 0.0);
        let xxyy = vec![Letter::a(1), Letter::a(1), Letter::b(1), Letter::b(1)];
        assert_eq!(ctx.mixed_moment(&xxyy).unwrap(), 1.0);
    }

    #[test]
    fn free_poisson_cumulants_are_one() {
        let mut ctx = MomentContext::new(free_poisson(), free_poisson());
        for n in 1..=8 {
            let w = vec![Letter::a(1); n];
            assert!(
                (ctx.free_cumulant(&w).unwrap() - 1.0).abs() < 1e-9,
                "n = {n}"
            );
        }
    }

    #[test]
    fn mixed_cumulant_vanishes() {
        let mut ctx = MomentContext::new(free_poisson(), semicircle());
        let w = vec![Letter::a(1), Letter::b(2), Letter::a(1), Letter::b(1)];
        assert!(ctx.free_cumulant(&w).unwrap().abs() < 1e-10);
    }

    #[test]
    fn boolean_low_orders() {
        let mut ctx = MomentContext::new(free_poisson(), free_poisson());
        let w = vec![Letter::a(1), Letter::b(1)];
        // β₂(X,Y) = φ(XY) - φ(X)φ(Y) = 0 for free X, Y.
        assert_eq!(ctx.boolean_cumulant(&w).unwrap(), 0.0);
        let w = vec![Letter::a(1), Letter::a(1)];
        assert_eq!(ctx.boolean_cumulant(&w).unwrap(), 1.0);
        assert_eq!(ctx.boolean_cumulant_recursive(&w).unwrap(), 1.0);
    }

    #[test]
    fn unit_slot_kills_boolean_cumulant() {
        let mut ctx = MomentContext::new(free_poisson(), semicircle());
        let w = vec![Letter::a(0), Letter::b(1), Letter::a(2)];
        assert_eq!(ctx.boolean_cumulant(&w).unwrap(), 0.0);
        let w = vec![Letter::a(1), Letter::b(2), Letter::b(0)];
        assert_eq!(ctx.boolean_cumulant(&w).unwrap(), 0.0);
    }

    #[test]
    fn univariate_conversions_round_trip() {
        let m: Vec<f64> = free_poisson().moments[..9].to_vec();
        let k = moments_to_free_cumulants(&m);
        assert!(k[1..].iter().all(|&c| (c - 1.0).abs() < 1e-12));
        let back = free_cumulants_to_moments(&k);
        for (a, b) in back.iter().zip(&m) {
            assert!((a - b).abs() < 1e-9);
        }
        let beta = moments_to_boolean_cumulants(&m);
        assert_eq!(beta[1], 1.0);
        assert_eq!(beta[2], 1.0);
    }

    #[test]
    fn length_guard() {
        let mut ctx = MomentContext::new(free_poisson(), free_poisson());
        assert!(matches!(ctx.mixed_moment(&[]), Err(Error::Domain(_))));
        let long = vec![Letter::a(1); 14];
        assert!(matches!(ctx.mixed_moment(&long), Err(Error::Domain(_))));
    }

    #[test]
    fn spectral_function_keys_round() {
        let f: SpectralFunction<f64> = SpectralFunction::Resolvent(Complex::new(1.0, 0.1 + 0.2));
        let g: SpectralFunction<f64> = SpectralFunction::Resolvent(Complex::new(1.0, 0.3));
        assert_eq!(f.key(), g.key());
        assert!(SpectralFunction::<f64>::Product(vec![
            SpectralFunction::One,
            SpectralFunction::Power(0)
        ])
        .is_one());
    }
}
