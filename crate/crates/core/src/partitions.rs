//! Interval and non-crossing partitions of a finite ordered set.
//!
//! Ground sets are `{0, .., n-1}` internally; [`Partition`]'s `Display` prints
//! the usual 1-based block notation. A partition is stored as a restricted
//! growth string: `labels[i]` is the index of the block containing `i`, with
//! blocks numbered in order of their minimum element. This keeps NC(14)
//! (2.6 million partitions) enumerable in memory.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest ground set accepted by [`interval_partitions`].
pub const MAX_INTERVAL_N: usize = 20;
/// Largest ground set accepted by [`noncrossing_partitions`].
pub const MAX_NONCROSSING_N: usize = 16;

/// A set partition in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Box<[u8]>,
}

impl Partition {
    /// Builds a partition of `{0, .., n-1}` from explicit blocks, checking that
    /// the blocks are nonempty, disjoint and cover the ground set.
    pub fn new(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::Invariant(format!(
                "ground set size {n} out of range"
            )));
        }
        let mut labels = vec![u8::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::Invariant(format!("block {b} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::Invariant(format!(
                        "element {i} outside ground set of size {n}"
                    )));
                }
                if labels[i] != u8::MAX {
                    return Err(Error::Invariant(format!(
                        "element {i} appears in two blocks"
                    )));
                }
                labels[i] = b as u8;
            }
        }
        if let Some(i) = labels.iter().position(|&l| l == u8::MAX) {
            return Err(Error::Invariant(format!(
                "element {i} not covered by any block"
            )));
        }
        Ok(Self::from_raw_labels(&labels))
    }

    /// Builds a partition from arbitrary block labels (equal label, same block).
    pub fn from_labels(labels: &[u8]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Invariant("empty ground set".into()));
        }
        Ok(Self::from_raw_labels(labels))
    }

    fn from_raw_labels(labels: &[u8]) -> Self {
        let mut out = vec![0u8; labels.len()];
        normalize_labels(labels, &mut out);
        Partition {
            labels: out.into_boxed_slice(),
        }
    }

    /// The partition with one block.
    pub fn one(n: usize) -> Self {
        Partition {
            labels: vec![0u8; n].into_boxed_slice(),
        }
    }

    /// The partition into singletons.
    pub fn zero(n: usize) -> Self {
        Partition {
            labels: (0..n as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Canonical block labels (restricted growth string).
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.labels
            .iter()
            .copied()
            .max()
            .map_or(0, |m| m as usize + 1)
    }

    /// Blocks sorted internally and ordered by minimum element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(i);
        }
        blocks
    }

    /// Block sizes in canonical block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.num_blocks()];
        for &l in self.labels.iter() {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Blocks as bitmasks over the ground set.
    pub fn block_masks(&self) -> Vec<u32> {
        let mut masks = vec![0u32; self.num_blocks()];
        for (i, &l) in self.labels.iter().enumerate() {
            masks[l as usize] |= 1 << i;
        }
        masks
    }

    /// True iff every block is a run of consecutive elements.
    pub fn is_interval(&self) -> bool {
        self.labels
            .windows(2)
            .all(|w| w[1] == w[0] || w[1] == w[0] + 1)
    }

    /// True iff no two blocks cross.
    pub fn is_noncrossing(&self) -> bool {
        let k = self.num_blocks();
        let mut last = vec![0usize; k];
        for (i, &l) in self.labels.iter().enumerate() {
            last[l as usize] = i;
        }
        let mut seen = vec![false; k];
        let mut open: Vec<u8> = Vec::with_capacity(k);
        for (i, &l) in self.labels.iter().enumerate() {
            if !seen[l as usize] {
                seen[l as usize] = true;
                open.push(l);
            } else if open.last() != Some(&l) {
                return false;
            }
            if last[l as usize] == i {
                open.pop();
            }
        }
        true
    }

    /// Kreweras complement, computed as the cycles of `P⁻¹ ∘ γ` where `P`
    /// cycles each block in increasing order and `γ = (0 1 .. n-1)`.
    pub fn kreweras_complement(&self) -> Partition {
        let n = self.n();
        let mut pred = vec![0usize; n];
        for block in self.blocks() {
            let m = block.len();
            for j in 0..m {
                pred[block[(j + 1) % m]] = block[j];
            }
        }
        let mut labels = vec![u8::MAX; n];
        let mut next = 0u8;
        for start in 0..n {
            if labels[start] != u8::MAX {
                continue;
            }
            let mut i = start;
            while labels[i] == u8::MAX {
                labels[i] = next;
                i = pred[(i + 1) % n];
            }
            next += 1;
        }
        Partition::from_raw_labels(&labels)
    }
}

impl Ord for Partition {
    /// Block-size composition first, then block contents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.block_sizes()
            .cmp(&other.block_sizes())
            .then_with(|| self.blocks().cmp(&other.blocks()))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (b, block) in self.blocks().iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, i) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

/// Relabels blocks in order of first appearance.
fn normalize_labels(raw: &[u8], out: &mut [u8]) {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    for (o, &r) in out.iter_mut().zip(raw) {
        if map[r as usize] == u8::MAX {
            map[r as usize] = next;
            next += 1;
        }
        *o = map[r as usize];
    }
}

/// Number of non-crossing partitions of an `n`-set.
pub fn catalan(n: usize) -> u128 {
    let mut c: u128 = 1;
    for k in 0..n as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// All interval partitions of `{0, .., n-1}`, ordered lexicographically by
/// block-size composition.
pub fn interval_partitions(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > MAX_INTERVAL_N {
        return Err(Error::domain(format!(
            "interval partitions need 1 <= n <= {MAX_INTERVAL_N}, got {n}"
        )));
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    visit_compositions(n, &mut |sizes| {
        let mut labels = Vec::with_capacity(n);
        for (b, &s) in sizes.iter().enumerate() {
            labels.extend(std::iter::repeat_n(b as u8, s));
        }
        out.push(Partition {
            labels: labels.into_boxed_slice(),
        });
    });
    Ok(out)
}

/// Calls `f` with every composition of `n` (ordered positive parts) in
/// lexicographic order.
pub fn visit_compositions(n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rest: usize, parts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if rest == 0 {
            f(parts);
            return;
        }
        for first in 1..=rest {
            parts.push(first);
            rec(rest - first, parts, f);
            parts.pop();
        }
    }
    rec(n, &mut Vec::with_capacity(n), f);
}

/// All non-crossing partitions of `{0, .., n-1}` in canonical order.
pub fn noncrossing_partitions(n: usize) -> Result<Vec<Partition>> {
    check_nc_range(n)?;
    let mut out = Vec::with_capacity(catalan(n) as usize);
    visit_noncrossing(n, &mut |labels| {
        out.push(Partition {
            labels: labels.into(),
        })
    })?;
    out.sort_by_cached_key(|p| (p.block_sizes(), p.blocks()));
    Ok(out)
}

/// Counts NC(n) by enumeration without materializing the list.
pub fn count_noncrossing(n: usize) -> Result<u128> {
    check_nc_range(n)?;
    let mut count = 0u128;
    visit_noncrossing(n, &mut |_| count += 1)?;
    Ok(count)
}

fn check_nc_range(n: usize) -> Result<()> {
    if n == 0 || n > MAX_NONCROSSING_N {
        return Err(Error::domain(format!(
            "non-crossing partitions need 1 <= n <= {MAX_NONCROSSING_N}, got {n}"
        )));
    }
    Ok(())
}

/// Calls `f` with the canonical labels of every non-crossing partition of
/// `{0, .., n-1}`, in generation order (not canonical order).
///
/// The block containing the first element of an interval is placed first; its
/// gaps are then independent intervals.
pub fn visit_noncrossing(n: usize, f: &mut impl FnMut(&[u8])) -> Result<()> {
    check_nc_range(n)?;
    struct Gen<'a, F> {
        labels: Vec<u8>,
        canon: Vec<u8>,
        pending: Vec<(usize, usize)>,
        next: u8,
        f: &'a mut F,
    }
    impl<F: FnMut(&[u8])> Gen<'_, F> {
        fn rec(&mut self) {
            let Some((lo, hi)) = self.pending.pop() else {
                normalize_labels(&self.labels, &mut self.canon);
                (self.f)(&self.canon);
                return;
            };
            if lo >= hi {
                self.rec();
                self.pending.push((lo, hi));
                return;
            }
            let id = self.next;
            self.next += 1;
            self.labels[lo] = id;
            let m = hi - lo - 1;
            for mask in 0u32..(1 << m) {
                let saved = self.pending.len();
                let mut prev = lo;
                for j in 0..m {
                    if mask & (1 << j) != 0 {
                        let p = lo + 1 + j;
                        self.labels[p] = id;
                        self.pending.push((prev + 1, p));
                        prev = p;
                    }
                }
                self.pending.push((prev + 1, hi));
                self.rec();
                self.pending.truncate(saved);
            }
            self.next -= 1;
            self.pending.push((lo, hi));
        }
    }
    let mut gen = Gen {
        labels: vec![0; n],
        canon: vec![0; n],
        pending: vec![(0, n)],
        next: 0,
        f,
    };
    gen.rec();
    Ok(())
}

/// Free-cumulant Möbius coefficient `μ(π, 1_n)`: the product over blocks `V`
/// of the Kreweras complement of `(-1)^{|V|-1} Cat(|V|-1)`.
pub fn moebius_to_top(p: &Partition) -> i64 {
    p.kreweras_complement()
        .block_sizes()
        .iter()
        .map(|&s| {
            let c = catalan(s - 1) as i64;
            if s % 2 == 1 {
                c
            } else {
                -c
            }
        })
        .product()
}
