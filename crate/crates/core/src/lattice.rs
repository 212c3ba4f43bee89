//! Zero-sum lattice enumeration and the theta sums built on it.
//!
//! All forms here have the shape `2Q(n) = s * n·n + 2 Σ_i l_i n_i` restricted
//! to `n ∈ Z^a` with `Σ n_i = 0`. Enumeration fixes `n_0 .. n_{a-2}` and
//! solves for the last coordinate; each coordinate is pruned with the exact
//! integer minimum of its own term `s x^2 + 2 l_i x`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::bivar::{ZBound, ZqSeries};
use crate::cyclo::{CycInt, CycSeries};
use crate::error::{Error, Result};
use crate::series::QSeries;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LatticePoint {
    pub n: Vec<i64>,
    /// `Q_a(n)`
    pub qexp: i64,
}

/// `2 Q_a(n) = a n·n + 2 b_a·n` with `b_a = (0, 1, ..., a-1)`; defined for any
/// `n`, not only zero-sum vectors.
pub fn q_form_twice(n: &[i64]) -> i64 {
    let a = n.len() as i64;
    let nn: i64 = n.iter().map(|x| x * x).sum();
    let bn: i64 = n.iter().enumerate().map(|(i, x)| i as i64 * x).sum();
    a * nn + 2 * bn
}

/// `n' = (n_1, ..., n_{a-1}, n_0) + e_{j-1} - e_{a-1}` for `1 <= j <= a-1`;
/// with `j = 0` the pure rotation `(n_1, ..., n_{a-1}, n_0)`.
pub fn cyclic_step(n: &[i64], j: usize) -> Vec<i64> {
    let a = n.len();
    let mut out: Vec<i64> = n[1..].iter().copied().chain(std::iter::once(n[0])).collect();
    if j >= 1 {
        out[j - 1] += 1;
        out[a - 1] -= 1;
    }
    out
}

fn min_term(scale: i64, lin: i64) -> i64 {
    // integer minimum of scale x^2 + 2 lin x
    let x0 = (-lin).div_euclid(scale);
    [x0 - 1, x0, x0 + 1, x0 + 2]
        .iter()
        .map(|&x| scale * x * x + 2 * lin * x)
        .min()
        .unwrap()
}

/// Visit every zero-sum `n ∈ Z^a` with `scale n·n + 2 lin·n <= twice_bound`,
/// passing `n` and the value of the form.
pub fn enumerate_form<F>(a: usize, scale: i64, lin: &[i64], twice_bound: i64, mut visit: F)
where
    F: FnMut(&[i64], i64),
{
    assert!(a >= 1 && scale > 0 && lin.len() == a);
    let mins: Vec<i64> = lin.iter().map(|&l| min_term(scale, l)).collect();
    // suffix_min[k] = Σ_{i >= k} mins[i]
    let mut suffix_min = vec![0i64; a + 1];
    for k in (0..a).rev() {
        suffix_min[k] = suffix_min[k + 1] + mins[k];
    }
    let mut n = vec![0i64; a];
    fn rec<F: FnMut(&[i64], i64)>(
        k: usize,
        partial: i64,
        sum: i64,
        n: &mut [i64],
        scale: i64,
        lin: &[i64],
        suffix_min: &[i64],
        twice_bound: i64,
        visit: &mut F,
    ) {
        let a = n.len();
        if k == a - 1 {
            let x = -sum;
            let total = partial + scale * x * x + 2 * lin[k] * x;
            if total <= twice_bound {
                n[k] = x;
                visit(n, total);
            }
            return;
        }
        let rem = twice_bound - partial - suffix_min[k + 1];
        let term = |x: i64| scale * x * x + 2 * lin[k] * x;
        let x0 = (-lin[k]).div_euclid(scale);
        // ascend from the vertex, then descend
        let mut x = x0;
        while term(x) <= rem || x <= x0 + 1 {
            if term(x) <= rem {
                n[k] = x;
                rec(k + 1, partial + term(x), sum + x, n, scale, lin, suffix_min, twice_bound, visit);
            }
            x += 1;
        }
        let mut x = x0 - 1;
        while term(x) <= rem || x >= x0 - 1 {
            if term(x) <= rem {
                n[k] = x;
                rec(k + 1, partial + term(x), sum + x, n, scale, lin, suffix_min, twice_bound, visit);
            }
            x -= 1;
        }
    }
    if a == 1 {
        if 0 <= twice_bound {
            visit(&[0], 0);
        }
        return;
    }
    rec(0, 0, 0, &mut n, scale, lin, &suffix_min, twice_bound, &mut visit);
}

fn b_vector(a: usize) -> Vec<i64> {
    (0..a as i64).collect()
}

/// All zero-sum `n ∈ Z^a` with `Q_a(n) <= bound`, sorted by `(Q_a, n)`.
pub fn enumerate_zero_sum(a: usize, bound: i64) -> Vec<LatticePoint> {
    let mut pts = Vec::new();
    enumerate_form(a, a as i64, &b_vector(a), 2 * bound, |n, twice| {
        pts.push(LatticePoint { n: n.to_vec(), qexp: twice / 2 });
    });
    pts.sort_by(|x, y| (x.qexp, &x.n).cmp(&(y.qexp, &y.n)));
    pts
}

/// Growth bound for `C_a` and `F_j`: `(a n_j + j)^2 <= 4a Q_a(n) + β` with
/// `β = ⌈a²(a-1)²/2⌉ + 2(a-1)²`, from `|b·n| <= (a-1)/2 Σ|n_i|` on the
/// zero-sum lattice and `n_j² <= (a-1)/a n·n`.
pub fn theta_c_bound(a: usize) -> ZBound {
    let a = a as u64;
    let beta = (a * a * (a - 1) * (a - 1)).div_ceil(2) + 2 * (a - 1) * (a - 1);
    ZBound::Quadratic { num: 4 * a, den: 1, beta }
}

/// Growth bound for `B_{j,a}`: `n_j^2 <= (a-1)/a n·n = 2(a-1)/a e` on the
/// zero-sum lattice.
pub fn theta_b_bound(a: usize) -> ZBound {
    ZBound::Quadratic { num: 2 * (a as u64 - 1), den: a as u64, beta: 0 }
}

fn check_a(a: usize) -> Result<()> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!("lattice dimension a = {a} must be >= 2")));
    }
    Ok(())
}

fn theta_c_terms(a: usize, qprec: usize, only_j: Option<usize>) -> ZqSeries {
    let mut s = ZqSeries::zero(qprec).with_bound(theta_c_bound(a));
    if qprec == 0 {
        return s;
    }
    let one = BigInt::one();
    enumerate_form(a, a as i64, &b_vector(a), 2 * (qprec as i64 - 1), |n, twice| {
        let e = (twice / 2) as usize;
        for j in 0..a {
            if only_j.is_some_and(|o| o != j) {
                continue;
            }
            s.add_term(a as i64 * n[j] + j as i64, e, &one);
        }
    });
    s
}

/// `C_a(z;q) = Σ_n q^{Q_a(n)} Σ_j z^{a n_j + j}` truncated at `qprec`.
pub fn theta_c(a: usize, qprec: usize) -> Result<ZqSeries> {
    check_a(a)?;
    Ok(theta_c_terms(a, qprec, None))
}

/// `F_j(z;q) = Σ_n z^{a n_j + j} q^{Q_a(n)}`.
pub fn theta_f(j: usize, a: usize, qprec: usize) -> Result<ZqSeries> {
    check_a(a)?;
    if j >= a {
        return Err(Error::InvalidParameter(format!("j = {j} out of range 0..{a}")));
    }
    Ok(theta_c_terms(a, qprec, Some(j)))
}

/// `B_{j,a}(z;q) = Σ_n z^{n_j} ω_a^{b_a·n} q^{n·n/2}` with coefficients in `Z[ω_a]`.
pub fn theta_b(j: usize, a: usize, qprec: usize) -> Result<ZqSeries<CycInt>> {
    check_a(a)?;
    if j >= a {
        return Err(Error::InvalidParameter(format!("j = {j} out of range 0..{a}")));
    }
    let mut counts: BTreeMap<(usize, i64), Vec<BigInt>> = BTreeMap::new();
    if qprec > 0 {
        let b = b_vector(a);
        enumerate_form(a, 1, &vec![0; a], 2 * (qprec as i64 - 1), |n, twice| {
            let e = (twice / 2) as usize;
            let r = n.iter().zip(&b).map(|(x, y)| x * y).sum::<i64>().rem_euclid(a as i64);
            let slot = counts
                .entry((e, n[j]))
                .or_insert_with(|| vec![BigInt::from(0); a]);
            slot[r as usize] += 1;
        });
    }
    Ok(ZqSeries::from_terms(
        qprec,
        theta_b_bound(a),
        counts
            .into_iter()
            .map(|((e, d), c)| (d, e, CycInt::from_residue_counts(a as u64, &c))),
    ))
}

/// `Σ_{n·1_t = 0} q^{(t/2) n·n + b_t·n}`.
pub fn klyachko_lhs(t: usize, qprec: usize) -> Result<QSeries> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    let mut coeffs = vec![BigInt::from(0); qprec];
    if qprec > 0 {
        enumerate_form(t, t as i64, &b_vector(t), 2 * (qprec as i64 - 1), |_, twice| {
            coeffs[(twice / 2) as usize] += 1;
        });
    }
    Ok(QSeries::from_coeffs(coeffs))
}

/// `Σ_{n·1_t = 0} ω_t^{b_t·n} q^{n·n/2}`.
pub fn klyachko_cyc(t: usize, qprec: usize) -> Result<CycSeries> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    let mut counts: BTreeMap<usize, Vec<BigInt>> = BTreeMap::new();
    if qprec > 0 {
        let b = b_vector(t);
        enumerate_form(t, 1, &vec![0; t], 2 * (qprec as i64 - 1), |n, twice| {
            let r = n.iter().zip(&b).map(|(x, y)| x * y).sum::<i64>().rem_euclid(t as i64);
            counts.entry((twice / 2) as usize).or_insert_with(|| vec![BigInt::from(0); t])[r as usize] += 1;
        });
    }
    CycSeries::from_terms(
        t as u64,
        qprec as i64,
        counts
            .into_iter()
            .map(|(e, c)| (e as i64, CycInt::from_residue_counts(t as u64, &c))),
    )
}

/// Smallest inner precision whose landing floor under `e -> e + k d` reaches
/// `target`.
pub fn precision_for_shift(bound: ZBound, target: usize, k: u64) -> Option<usize> {
    let mut p = target;
    for _ in 0..100_000 {
        if bound.landing_floor(p as i64, k)? >= target as i64 {
            return Some(p);
        }
        p += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(a: usize, bound: i64) -> Vec<LatticePoint> {
        // box scan |n_i| <= bound (Q_a(n) >= (a/2)n_i^2 - (a-1)|n_i| keeps
        // every point with Q <= bound inside it)
        let mut out = Vec::new();
        let r = bound + 2;
        let mut n = vec![-r; a - 1];
        loop {
            let last = -n.iter().sum::<i64>();
            let mut full = n.clone();
            full.push(last);
            let t = q_form_twice(&full);
            if t <= 2 * bound && last.abs() <= r {
                out.push(LatticePoint { n: full, qexp: t / 2 });
            }
            let mut k = 0;
            loop {
                if k == a - 1 {
                    out.sort_by(|x, y| (x.qexp, &x.n).cmp(&(y.qexp, &y.n)));
                    return out;
                }
                n[k] += 1;
                if n[k] > r {
                    n[k] = -r;
                    k += 1;
                } else {
                    break;
                }
            }
        }
    }

    #[test]
    fn small_enumerations() {
        let p = enumerate_zero_sum(2, 0);
        assert_eq!(p, vec![LatticePoint { n: vec![0, 0], qexp: 0 }]);
        let p: Vec<(Vec<i64>, i64)> = enumerate_zero_sum(2, 3).into_iter().map(|p| (p.n, p.qexp)).collect();
        assert_eq!(p, vec![(vec![0, 0], 0), (vec![1, -1], 1), (vec![-1, 1], 3)]);
        let p: Vec<(Vec<i64>, i64)> = enumerate_zero_sum(3, 2).into_iter().map(|p| (p.n, p.qexp)).collect();
        assert_eq!(
            p,
            vec![(vec![0, 0, 0], 0), (vec![1, 0, -1], 1), (vec![0, 1, -1], 2), (vec![1, -1, 0], 2)]
        );
    }

    #[test]
    fn enumeration_matches_box_scan_small() {
        for a in 2..=4 {
            for bound in [0, 1, 5, 12] {
                assert_eq!(enumerate_zero_sum(a, bound), naive(a, bound), "a={a} bound={bound}");
            }
        }
    }

    #[test]
    fn q_differences() {
        for a in 2..=5usize {
            for p in enumerate_zero_sum(a, 15) {
                for j in 1..a {
                    let np = cyclic_step(&p.n, j);
                    assert_eq!(q_form_twice(&np) - q_form_twice(&p.n), 2 * (a as i64 * p.n[j] + j as i64));
                }
                let np = cyclic_step(&p.n, 0);
                assert_eq!(q_form_twice(&np) - q_form_twice(&p.n), 2 * a as i64 * p.n[0]);
            }
        }
    }

    #[test]
    fn theta_bounds_hold_on_points() {
        for a in 2..=6usize {
            let b = theta_c_bound(a);
            for p in enumerate_zero_sum(a, 30) {
                for j in 0..a {
                    assert!(b.admits(a as i64 * p.n[j] + j as i64, p.qexp));
                }
            }
        }
    }

    #[test]
    fn theta_b_bound_holds_on_points() {
        for a in 2..=5usize {
            let b = theta_b_bound(a);
            enumerate_form(a, 1, &vec![0; a], 60, |n, twice| {
                for j in 0..a {
                    assert!(b.admits(n[j], twice / 2));
                }
            });
        }
    }

    #[test]
    fn klyachko_small() {
        assert_eq!(klyachko_lhs(1, 6).unwrap(), QSeries::one(6));
        let tri = klyachko_lhs(2, 30).unwrap();
        for (e, c) in tri.coeffs().iter().enumerate() {
            let is_tri = (0..10).any(|k| k * (k + 1) / 2 == e);
            assert_eq!(c, &BigInt::from(is_tri as i64), "e={e}");
        }
    }

    #[test]
    fn theta_j_range() {
        assert!(theta_f(3, 3, 5).is_err());
        assert!(theta_b(4, 3, 5).is_err());
        assert!(theta_c(1, 5).is_err());
    }
}
