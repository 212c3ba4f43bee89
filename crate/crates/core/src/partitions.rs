//! Integer partitions, hook lengths, t-cores and the crank statistic.
//!
//! Everything here is computed directly from partitions and never touches
//! the series code, so it can serve as an independent oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

/// A partition as a nonincreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(pub Vec<u64>);

impl Partition {
    pub fn new(mut parts: Vec<u64>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn size(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn largest(&self) -> u64 {
        self.0.first().copied().unwrap_or(0)
    }

    /// Conjugate partition.
    pub fn conjugate(&self) -> Partition {
        let mut out = Vec::with_capacity(self.largest() as usize);
        for k in 1..=self.largest() {
            out.push(self.0.iter().filter(|&&p| p >= k).count() as u64);
        }
        Partition(out)
    }

    /// Hook lengths of all cells, row by row.
    pub fn hook_lengths(&self) -> Vec<u64> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.size() as usize);
        for (i, &row) in self.0.iter().enumerate() {
            for j in 0..row as usize {
                let arm = row - 1 - j as u64;
                let leg = conj.0[j] - 1 - i as u64;
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// No hook of length exactly `t`.
    pub fn is_t_core(&self, t: u64) -> bool {
        !self.hook_lengths().contains(&t)
    }

    /// No hook length divisible by `t`.
    pub fn is_t_core_divisible(&self, t: u64) -> bool {
        self.hook_lengths().iter().all(|h| h % t != 0)
    }

    /// Largest part if there are no ones; otherwise the number of parts
    /// larger than the number of ones, minus the number of ones.
    pub fn crank(&self) -> i64 {
        let ones = self.0.iter().filter(|&&p| p == 1).count() as i64;
        if ones == 0 {
            self.largest() as i64
        } else {
            self.0.iter().filter(|&&p| p as i64 > ones).count() as i64 - ones
        }
    }
}

pub fn crank_of(p: &Partition) -> i64 {
    p.crank()
}

/// Partitions of `n` in reverse lexicographic order, starting from `(n)`.
pub struct Partitions {
    current: Option<Vec<u64>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let out = Partition(cur.clone());
        self.current = successor(cur);
        Some(out)
    }
}

fn successor(mut p: Vec<u64>) -> Option<Vec<u64>> {
    // strip trailing ones, decrement the last part > 1, refill greedily
    let mut ones = 0u64;
    while p.last() == Some(&1) {
        p.pop();
        ones += 1;
    }
    let last = p.pop()?;
    let k = last - 1;
    let mut rem = ones + 1 + k;
    while rem > 0 {
        let part = k.min(rem);
        p.push(part);
        rem -= part;
    }
    Some(p)
}

pub fn partitions_of(n: u64) -> Partitions {
    Partitions {
        current: Some(if n == 0 { Vec::new() } else { vec![n] }),
    }
}

pub fn count_t_cores(t: u64, n: u64) -> u64 {
    partitions_of(n).filter(|p| p.is_t_core(t)).count() as u64
}

pub fn count_t_cores_divisible(t: u64, n: u64) -> u64 {
    partitions_of(n).filter(|p| p.is_t_core_divisible(t)).count() as u64
}

/// `m -> M(m, n)` by enumerating every partition of `n`.
pub fn crank_counts(n: u64) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for p in partitions_of(n) {
        *out.entry(p.crank()).or_insert(0) += 1;
    }
    out
}

/// `m -> M(m, n)` by counting rather than listing.
///
/// A partition with `w` ones splits into parts in `[2, w]` and `c` parts
/// larger than `w`; its crank is `c - w` (or the largest part when `w = 0`).
pub fn crank_counts_dp(n: u64) -> BTreeMap<i64, BigInt> {
    let n = n as usize;
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    if n == 0 {
        out.insert(0, BigInt::from(1));
        return out;
    }
    // exact[s][c]: partitions of s into exactly c parts
    let mut exact = vec![vec![BigInt::zero(); n + 1]; n + 1];
    exact[0][0] = BigInt::from(1);
    for s in 1..=n {
        for c in 1..=s {
            let mut v = exact[s - 1][c - 1].clone();
            if s >= 2 * c {
                v += &exact[s - c][c];
            }
            exact[s][c] = v;
        }
    }
    // no ones: partitions of n - l into parts in [2, l]
    for l in 2..=n {
        let rest = bounded_parts(n - l, 2, l);
        let v = rest[n - l].clone();
        if !v.is_zero() {
            *out.entry(l as i64).or_insert_with(BigInt::zero) += v;
        }
    }
    for w in 1..=n {
        let m = n - w;
        let small = bounded_parts(m, 2, w);
        for (k, a) in small.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let s = m - k;
            for c in 0..=s {
                if c * w > s {
                    break;
                }
                let b = &exact[s - c * w][c];
                if b.is_zero() {
                    continue;
                }
                *out.entry(c as i64 - w as i64).or_insert_with(BigInt::zero) += a * b;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Counts of partitions of `0..=n` into parts in `[lo, hi]`.
fn bounded_parts(n: usize, lo: usize, hi: usize) -> Vec<BigInt> {
    let mut f = vec![BigInt::zero(); n + 1];
    f[0] = BigInt::from(1);
    for part in lo..=hi.min(n) {
        for s in part..=n {
            let add = f[s - part].clone();
            f[s] += add;
        }
    }
    f
}

/// `k -> M(k, t, n)` for `k` in `0..t`.
pub fn crank_counts_mod(t: u64, n: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); t as usize];
    for (m, c) in crank_counts_dp(n) {
        out[m.rem_euclid(t as i64) as usize] += c;
    }
    out
}

/// `p(n)` by counting.
pub fn partition_count(n: u64) -> BigInt {
    bounded_parts(n as usize, 1, n as usize)[n as usize].clone()
}

/// Partitions of `total` with at most `m` parts, each at most `n`.
pub fn box_partitions(m: u64, n: u64, total: u64) -> u64 {
    partitions_of(total)
        .filter(|p| p.len() as u64 <= m && p.largest() <= n)
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(partitions_of(0).collect::<Vec<_>>(), vec![Partition(vec![])]);
        assert_eq!(partitions_of(4).count(), 5);
        assert_eq!(partitions_of(10).count(), 42);
        let four: Vec<Vec<u64>> = partitions_of(4).map(|p| p.0).collect();
        assert_eq!(four, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        for n in 0..=20 {
            assert_eq!(BigInt::from(partitions_of(n).count()), partition_count(n));
        }
    }

    #[test]
    fn hooks_and_cores() {
        assert_eq!(Partition::new(vec![2, 1]).hook_lengths(), vec![3, 1, 1]);
        assert_eq!(count_t_cores(2, 3), 1);
        for t in 1..=5 {
            assert_eq!(count_t_cores(t, 0), 1);
        }
        for t in 2..=6 {
            for n in 0..=14 {
                assert_eq!(count_t_cores(t, n), count_t_cores_divisible(t, n), "t={t} n={n}");
            }
        }
    }

    #[test]
    fn crank_definition() {
        assert_eq!(Partition::new(vec![4]).crank(), 4);
        assert_eq!(Partition::new(vec![1]).crank(), -1);
        assert_eq!(Partition::new(vec![3, 1, 1]).crank(), 1 - 2);
        assert_eq!(Partition::new(vec![4, 3, 1]).crank(), 2 - 1);
    }

    #[test]
    fn crank_totals_and_dp() {
        for n in 0..=20u64 {
            let enumerated = crank_counts(n);
            let total: u64 = enumerated.values().sum();
            assert_eq!(BigInt::from(total), partition_count(n));
            let dp = crank_counts_dp(n);
            let as_big: BTreeMap<i64, BigInt> =
                enumerated.into_iter().map(|(k, v)| (k, BigInt::from(v))).collect();
            assert_eq!(dp, as_big, "n={n}");
        }
    }

    #[test]
    fn box_counts() {
        // 2x2 box: 1,1,2,1,1
        let v: Vec<u64> = (0..=4).map(|k| box_partitions(2, 2, k)).collect();
        assert_eq!(v, vec![1, 1, 2, 1, 1]);
    }
}
