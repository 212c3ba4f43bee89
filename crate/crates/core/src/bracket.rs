//! Symbolic products of q-Pochhammer symbols and their expansion.
//!
//! A [`BracketSpec`] is `sign * z^a q^b * prod (c z^s q^j; q^m)_{len}^{exp}` with
//! `c = ±1`. Before expansion the product is normalized:
//!
//! 1. Factors with a negative q-offset are peeled using
//!    `(1 - c z^s q^{-u}) = -c z^s q^{-u} (1 - c z^{-s} q^u)`.
//! 2. The `q^0` factor of each symbol is split off as a zero-offset binomial
//!    `(1 - c z^s)`; finite symbols are split into single binomials.
//! 3. Identical factors cancel; a zero-offset denominator `(1 - c z^t)` is
//!    divided into a numerator `(1 - c^k z^{kt})` when possible, leaving the
//!    polynomial `sum_{i<k} (c z^t)^i`.
//!
//! Whatever zero-offset denominators survive force windowed expansion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bivar::{Mode, ZBound, ZqSeries};
use crate::error::{Error, Result};
use crate::series::QSeries;

/// `(c z^s q^j; q^m)_len ^ exp`; `len = None` is the infinite product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PochFactor {
    pub coeff: i8,
    pub zpow: i64,
    pub qoff: i64,
    pub step: u64,
    pub len: Option<u64>,
    pub exp: i64,
}

impl PochFactor {
    pub fn inf(coeff: i8, zpow: i64, qoff: i64, step: u64) -> Self {
        PochFactor { coeff, zpow, qoff, step, len: None, exp: 1 }
    }

    pub fn finite(coeff: i8, zpow: i64, qoff: i64, step: u64, len: u64) -> Self {
        PochFactor { coeff, zpow, qoff, step, len: Some(len), exp: 1 }
    }

    pub fn pow(mut self, e: i64) -> Self {
        self.exp *= e;
        self
    }
}

/// A signed monomial `sign * z^z q^q` (the q-exponent may be negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Monomial {
    pub sign: i8,
    pub z: i64,
    pub q: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { sign: 1, z: 0, q: 0 };

    pub fn new(sign: i8, z: i64, q: i64) -> Self {
        Monomial { sign, z, q }
    }

    pub fn mul(self, o: Monomial) -> Monomial {
        Monomial { sign: self.sign * o.sign, z: self.z + o.z, q: self.q + o.q }
    }

    pub fn pow(self, e: i64) -> Monomial {
        Monomial {
            sign: if e.rem_euclid(2) == 1 { self.sign } else { 1 },
            z: self.z * e,
            q: self.q * e,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketSpec {
    pub monomial: Monomial,
    pub factors: Vec<PochFactor>,
}

impl Default for BracketSpec {
    fn default() -> Self {
        BracketSpec { monomial: Monomial::ONE, factors: Vec::new() }
    }
}

impl BracketSpec {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors(factors: Vec<PochFactor>) -> Self {
        BracketSpec { monomial: Monomial::ONE, factors }
    }

    /// `(c z^s q^j; q^m)_inf`
    pub fn poch(c: i8, s: i64, j: i64, m: u64) -> Self {
        Self::from_factors(vec![PochFactor::inf(c, s, j, m)])
    }

    /// `(c z^s q^j; q^m)_n`
    pub fn poch_finite(c: i8, s: i64, j: i64, m: u64, n: u64) -> Self {
        Self::from_factors(vec![PochFactor::finite(c, s, j, m, n)])
    }

    /// `[c z^s q^j; q^m]_inf = (c z^s q^j; q^m)(c z^{-s} q^{m-j}; q^m)`
    pub fn bracket(c: i8, s: i64, j: i64, m: u64) -> Self {
        Self::from_factors(vec![
            PochFactor::inf(c, s, j, m),
            PochFactor::inf(c, -s, m as i64 - j, m),
        ])
    }

    /// `E(q^k) = (q^k; q^k)_inf`
    pub fn euler(k: u64) -> Self {
        Self::poch(1, 0, k as i64, k)
    }

    pub fn monomial(sign: i8, z: i64, q: i64) -> Self {
        BracketSpec { monomial: Monomial::new(sign, z, q), factors: Vec::new() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        BracketSpec { monomial: self.monomial.mul(other.monomial), factors }
    }

    pub fn pow(&self, e: i64) -> Self {
        BracketSpec {
            monomial: self.monomial.pow(e),
            factors: self.factors.iter().map(|f| f.pow(e)).collect(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// `z -> z q^k` applied symbolically.
    pub fn shift_z(&self, k: i64) -> Self {
        BracketSpec {
            monomial: Monomial {
                sign: self.monomial.sign,
                z: self.monomial.z,
                q: self.monomial.q + k * self.monomial.z,
            },
            factors: self
                .factors
                .iter()
                .map(|f| PochFactor { qoff: f.qoff + k * f.zpow, ..*f })
                .collect(),
        }
    }

    /// `z -> z^{-1}` applied symbolically.
    pub fn invert_z(&self) -> Self {
        BracketSpec {
            monomial: Monomial { z: -self.monomial.z, ..self.monomial },
            factors: self.factors.iter().map(|f| PochFactor { zpow: -f.zpow, ..*f }).collect(),
        }
    }

    /// `z -> q^r` followed by `q -> q^m`, giving a product in `q` alone.
    pub fn specialize_monomial(&self, r: i64, m: u64) -> Self {
        let m_i = m as i64;
        BracketSpec {
            monomial: Monomial {
                sign: self.monomial.sign,
                z: 0,
                q: self.monomial.q * m_i + r * self.monomial.z,
            },
            factors: self
                .factors
                .iter()
                .map(|f| PochFactor {
                    zpow: 0,
                    qoff: f.qoff * m_i + r * f.zpow,
                    step: f.step * m,
                    ..*f
                })
                .collect(),
        }
    }

    /// `q -> q^m`.
    pub fn subst_q(&self, m: u64) -> Self {
        self.specialize_monomial(0, m).with_z_from(self)
    }

    fn with_z_from(mut self, orig: &Self) -> Self {
        self.monomial.z = orig.monomial.z;
        for (f, o) in self.factors.iter_mut().zip(&orig.factors) {
            f.zpow = o.zpow;
        }
        self
    }

    pub fn normalize(&self) -> Result<NormalForm> {
        NormalForm::build(self)
    }

    /// Expand to a bivariate series. `window` is required when a zero-offset
    /// reciprocal survives cancellation; it is the certified upper z-exponent
    /// of the result.
    pub fn expand(&self, qprec: usize, window: Option<i64>) -> Result<ZqSeries> {
        self.normalize()?.expand(qprec, window)
    }

    /// Expand a product free of `z`.
    pub fn expand_q(&self, qprec: usize) -> Result<QSeries> {
        self.normalize()?.expand_q(qprec)
    }
}

/// Key of a single positive-offset binomial `(1 - c z^s q^j)`.
type BinKey = (i8, i64, i64);
/// Key of an infinite symbol `(c z^s q^j; q^m)_inf` with `j >= 1`.
type InfKey = (i8, i64, i64, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub monomial: Monomial,
    /// Integer scalar from `(1 + 1)` factors.
    pub scalar_pow2: i64,
    /// The whole product vanishes (a `(1 - 1)` numerator factor).
    pub vanishes: bool,
    pub infinite: BTreeMap<InfKey, i64>,
    pub binomials: BTreeMap<BinKey, i64>,
    /// Zero-offset numerator polynomials `sum_{i<k} (c z^t)^i`, as `(c, t, k)`.
    pub polys: Vec<(i8, i64, i64)>,
    /// Zero-offset binomials `(1 - c z^t)`, `t > 0`, with exponent.
    pub zero_offset: BTreeMap<(i8, i64), i64>,
}

impl NormalForm {
    fn build(spec: &BracketSpec) -> Result<Self> {
        let mut nf = NormalForm {
            monomial: spec.monomial,
            scalar_pow2: 0,
            vanishes: false,
            infinite: BTreeMap::new(),
            binomials: BTreeMap::new(),
            polys: Vec::new(),
            zero_offset: BTreeMap::new(),
        };
        if spec.monomial.sign == 0 {
            nf.vanishes = true;
        }
        let mut zero_raw: Vec<(i8, i64, i64)> = Vec::new();
        for f in &spec.factors {
            if f.coeff != 1 && f.coeff != -1 {
                return Err(Error::InvalidParameter(format!(
                    "factor coefficient must be ±1, got {}",
                    f.coeff
                )));
            }
            if f.exp == 0 {
                continue;
            }
            if f.step == 0 {
                return Err(Error::InvalidParameter("q-step must be positive".into()));
            }
            let step = f.step as i64;
            let mut qoff = f.qoff;
            let mut remaining = f.len;
            // Peel factors at or below q^0.
            while qoff <= 0 && remaining != Some(0) {
                if qoff < 0 {
                    // (1 - c z^s q^{-u}) = -c z^s q^{-u} (1 - c z^{-s} q^u)
                    let mono = Monomial::new(-f.coeff, f.zpow, qoff);
                    nf.monomial = nf.monomial.mul(mono.pow(f.exp));
                    *nf.binomials.entry((f.coeff, -f.zpow, -qoff)).or_default() += f.exp;
                } else {
                    zero_raw.push((f.coeff, f.zpow, f.exp));
                }
                qoff += step;
                remaining = remaining.map(|n| n - 1);
            }
            match remaining {
                None => *nf.infinite.entry((f.coeff, f.zpow, qoff, f.step)).or_default() += f.exp,
                Some(n) => {
                    for i in 0..n as i64 {
                        *nf.binomials.entry((f.coeff, f.zpow, qoff + i * step)).or_default() += f.exp;
                    }
                }
            }
        }
        nf.infinite.retain(|_, e| *e != 0);
        nf.binomials.retain(|_, e| *e != 0);

        for (c, s, e) in zero_raw {
            if s == 0 {
                if c == 1 {
                    if e > 0 {
                        nf.vanishes = true;
                    } else {
                        return Err(Error::DivisionByZero("factor (1 - 1) in a denominator".into()));
                    }
                } else {
                    nf.scalar_pow2 += e;
                }
                continue;
            }
            let (c, t) = if s < 0 {
                // (1 - c z^{-t}) = -c z^{-t} (1 - c z^t)
                nf.monomial = nf.monomial.mul(Monomial::new(-c, s, 0).pow(e));
                (c, -s)
            } else {
                (c, s)
            };
            *nf.zero_offset.entry((c, t)).or_default() += e;
        }
        nf.zero_offset.retain(|_, e| *e != 0);
        if nf.scalar_pow2 < 0 {
            return Err(Error::NonUnit("division by (1 + 1)".into()));
        }
        nf.match_polynomials();
        Ok(nf)
    }

    /// Pair zero-offset denominators with numerators they divide, maximizing
    /// the number of pairs.
    fn match_polynomials(&mut self) {
        let mut dens: Vec<(i8, i64)> = Vec::new();
        let mut nums: Vec<(i8, i64)> = Vec::new();
        for (&(c, t), &e) in &self.zero_offset {
            let target = if e < 0 { &mut dens } else { &mut nums };
            for _ in 0..e.unsigned_abs() {
                target.push((c, t));
            }
        }
        if dens.is_empty() {
            return;
        }
        let divides = |d: (i8, i64), n: (i8, i64)| -> bool {
            if n.1 % d.1 != 0 {
                return false;
            }
            let k = n.1 / d.1;
            let ck = if d.0 == -1 && k % 2 == 1 { -1 } else { 1 };
            ck == n.0
        };
        let mut best: Vec<Option<usize>> = vec![None; dens.len()];
        let mut best_count = 0;
        let mut current: Vec<Option<usize>> = vec![None; dens.len()];
        let mut used = vec![false; nums.len()];
        #[allow(clippy::too_many_arguments)]
        fn search(
            i: usize,
            count: usize,
            dens: &[(i8, i64)],
            nums: &[(i8, i64)],
            used: &mut [bool],
            current: &mut [Option<usize>],
            best: &mut Vec<Option<usize>>,
            best_count: &mut usize,
            divides: &dyn Fn((i8, i64), (i8, i64)) -> bool,
        ) {
            if count + (dens.len() - i) <= *best_count {
                return;
            }
            if i == dens.len() {
                *best_count = count;
                *best = current.to_vec();
                return;
            }
            for j in 0..nums.len() {
                if !used[j] && divides(dens[i], nums[j]) {
                    used[j] = true;
                    current[i] = Some(j);
                    search(i + 1, count + 1, dens, nums, used, current, best, best_count, divides);
                    current[i] = None;
                    used[j] = false;
                }
            }
            search(i + 1, count, dens, nums, used, current, best, best_count, divides);
        }
        search(0, 0, &dens, &nums, &mut used, &mut current, &mut best, &mut best_count, &divides);
        for (i, m) in best.iter().enumerate() {
            if let Some(j) = m {
                let (c, t) = dens[i];
                let n = nums[*j];
                *self.zero_offset.get_mut(&(c, t)).unwrap() += 1;
                *self.zero_offset.get_mut(&n).unwrap() -= 1;
                self.polys.push((c, t, n.1 / t));
            }
        }
        self.zero_offset.retain(|_, e| *e != 0);
        self.polys.sort();
    }

    /// Zero-offset reciprocals left after cancellation.
    pub fn unbounded_denominators(&self) -> Vec<(i8, i64)> {
        self.zero_offset.iter().filter(|(_, &e)| e < 0).map(|(&k, _)| k).collect()
    }

    pub fn is_univariate(&self) -> bool {
        self.monomial.z == 0
            && self.polys.is_empty()
            && self.zero_offset.is_empty()
            && self.infinite.keys().all(|k| k.1 == 0)
            && self.binomials.keys().all(|k| k.1 == 0)
    }

    fn linear_bound(&self) -> ZBound {
        // |d| <= max(|s|/j) * e + (z-degree of polynomial parts and monomial)
        let mut ratio = (0u64, 1u64);
        let mut consider = |s: i64, j: i64| {
            let (n, d) = (s.unsigned_abs(), j as u64);
            if (n as u128) * (ratio.1 as u128) > (ratio.0 as u128) * (d as u128) {
                ratio = (n, d);
            }
        };
        for &(_, s, j, _) in self.infinite.keys() {
            consider(s, j);
        }
        for &(_, s, j) in self.binomials.keys() {
            consider(s, j);
        }
        let mut c = self.monomial.z.unsigned_abs();
        for &(_, t, k) in &self.polys {
            c += t.unsigned_abs() * (k as u64 - 1);
        }
        for (&(_, t), &e) in &self.zero_offset {
            if e > 0 {
                c += t.unsigned_abs() * e as u64;
            }
        }
        ZBound::Linear { num: ratio.0, den: ratio.1, c }
    }

    /// Expand the product without the monomial prefactor.
    pub fn expand_body(&self, qprec: usize, window: Option<i64>) -> Result<ZqSeries> {
        let mut s = ZqSeries::one(qprec);
        if self.vanishes {
            return Ok(ZqSeries::zero(qprec));
        }
        let mut ordered: Vec<(InfKey, i64)> = self.infinite.iter().map(|(k, e)| (*k, *e)).collect();
        // Numerators first keeps intermediate rows small.
        ordered.sort_by_key(|(_, e)| std::cmp::Reverse(*e));
        for ((c, z, j, m), e) in ordered {
            let mut off = j;
            while (off as usize) < qprec {
                s.apply_binomial(c, z, off as usize, e);
                off += m as i64;
            }
        }
        for (&(c, z, j), &e) in &self.binomials {
            s.apply_binomial(c, z, j as usize, e);
        }
        let mut poly_terms: Vec<(i64, BigInt)> = vec![(0, BigInt::one())];
        for &(c, t, k) in &self.polys {
            poly_terms = poly_mul(&poly_terms, &geometric_poly(c, t, k));
        }
        for (&(c, t), &e) in &self.zero_offset {
            if e > 0 {
                for _ in 0..e {
                    poly_terms = poly_mul(&poly_terms, &[(0, BigInt::one()), (t, BigInt::from(-c))]);
                }
            }
        }
        if poly_terms.len() > 1 || poly_terms[0] != (0, BigInt::one()) {
            let poly = ZqSeries::from_terms(qprec, ZBound::Unknown, poly_terms.into_iter().map(|(d, c)| (d, 0, c)));
            s = s.mul(&poly);
        }
        if self.scalar_pow2 > 0 {
            s = s.scale(&(BigInt::one() << self.scalar_pow2 as usize));
        }
        let dens = self.unbounded_denominators();
        if dens.is_empty() {
            return Ok(s.with_bound(self.linear_bound()));
        }
        let Some(w) = window else {
            let desc: Vec<String> = dens.iter().map(|(c, t)| format!("1/(1 {} z^{t})", if *c == 1 { "-" } else { "+" })).collect();
            return Err(Error::UnboundedZSupport(desc.join(", ")));
        };
        // Target window is for the final series, after the monomial shift.
        let hi = w - self.monomial.z;
        for (&(c, t), &e) in &self.zero_offset {
            for _ in 0..(-e).max(0) {
                s.divide_zero_offset(c, t, hi);
            }
        }
        Ok(s)
    }

    pub fn expand(&self, qprec: usize, window: Option<i64>) -> Result<ZqSeries> {
        if self.monomial.q < 0 {
            return Err(Error::NegativeExponent(self.monomial.q));
        }
        let body = self.expand_body(qprec, window)?;
        let mut out = body.mul_monomial(self.monomial.z, self.monomial.q as usize);
        if self.monomial.sign < 0 {
            out = out.neg();
        }
        if let Mode::Windowed { .. } = out.mode() {
            debug_assert!(window.is_some_and(|w| out.window() == Some(w)));
        }
        Ok(out)
    }

    pub fn expand_q(&self, qprec: usize) -> Result<QSeries> {
        if !self.is_univariate() {
            return Err(Error::InvalidParameter("product depends on z".into()));
        }
        if self.monomial.q < 0 {
            return Err(Error::NegativeExponent(self.monomial.q));
        }
        if self.vanishes {
            return Ok(QSeries::zero(qprec));
        }
        let mut s = QSeries::one(qprec);
        let mut ordered: Vec<(InfKey, i64)> = self.infinite.iter().map(|(k, e)| (*k, *e)).collect();
        ordered.sort_by_key(|(_, e)| std::cmp::Reverse(*e));
        for ((c, _, j, m), e) in ordered {
            let mut off = j as usize;
            while off < qprec {
                s.apply_binomial(c, off, e);
                off += m as usize;
            }
        }
        for (&(c, _, j), &e) in &self.binomials {
            s.apply_binomial(c, j as usize, e);
        }
        if self.scalar_pow2 > 0 {
            s = s.scale(&(BigInt::one() << self.scalar_pow2 as usize));
        }
        s = s.shift(self.monomial.q as usize);
        if self.monomial.sign < 0 {
            s = s.neg();
        }
        Ok(s)
    }
}

fn geometric_poly(c: i8, t: i64, k: i64) -> Vec<(i64, BigInt)> {
    (0..k)
        .map(|i| {
            let sign = if c == -1 && i % 2 == 1 { -1 } else { 1 };
            (t * i, BigInt::from(sign))
        })
        .collect()
}

fn poly_mul(a: &[(i64, BigInt)], b: &[(i64, BigInt)]) -> Vec<(i64, BigInt)> {
    let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (da, ca) in a {
        for (db, cb) in b {
            *acc.entry(da + db).or_default() += ca * cb;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{euler_e, pochhammer_inf};

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    /// Oracle: multiply out finitely many binomials with the generic product.
    fn brute_bracket_z(qprec: usize) -> ZqSeries {
        let mut acc = ZqSeries::one(qprec);
        for n in 0..qprec as i64 {
            let f1 = ZqSeries::from_terms(qprec, ZBound::Unknown, vec![(0, 0, big(1)), (1, n as usize, big(-1))]);
            acc = acc.mul(&f1);
            if n >= 1 {
                let f2 = ZqSeries::from_terms(qprec, ZBound::Unknown, vec![(0, 0, big(1)), (-1, n as usize, big(-1))]);
                acc = acc.mul(&f2);
            }
        }
        acc
    }

    #[test]
    fn bracket_z_two_terms() {
        let s = BracketSpec::bracket(1, 1, 0, 1).expand(2, None).unwrap();
        let got: BTreeMap<(i64, usize), BigInt> = s.terms().map(|(d, e, c)| ((d, e), c.clone())).collect();
        let want: BTreeMap<(i64, usize), BigInt> = [
            ((0, 0), 1),
            ((1, 0), -1),
            ((-1, 1), -1),
            ((0, 1), 1),
            ((1, 1), -1),
            ((2, 1), 1),
        ]
        .into_iter()
        .map(|(k, v)| (k, big(v)))
        .collect();
        assert_eq!(got, want);
        assert_eq!(s, brute_bracket_z(2).with_bound(s.bound()));
        let s12 = BracketSpec::bracket(1, 1, 0, 1).expand(12, None).unwrap();
        assert!(s12.first_mismatch(&brute_bracket_z(12)).is_none());
    }

    #[test]
    fn univariate_reduction() {
        let s = BracketSpec::euler(1).expand(15, None).unwrap();
        assert_eq!(s.specialize_one().unwrap(), euler_e(15).unwrap());
        assert_eq!(BracketSpec::euler(1).expand_q(15).unwrap(), euler_e(15).unwrap());
        assert_eq!(BracketSpec::poch(1, 0, 2, 3).expand_q(20).unwrap(), pochhammer_inf(2, 3, 20).unwrap());
    }

    #[test]
    fn cancellation_to_one() {
        let b = BracketSpec::bracket(1, 1, 0, 1);
        let s = b.div(&b).expand(10, None).unwrap();
        assert_eq!(s.mode(), Mode::Exact);
        assert_eq!(s, ZqSeries::one(10).with_bound(s.bound()));
    }

    #[test]
    fn unbounded_reciprocal_needs_window() {
        let spec = BracketSpec::one().div(&BracketSpec::bracket(1, 1, 0, 1));
        assert!(matches!(spec.expand(5, None), Err(Error::UnboundedZSupport(_))));
        let s = spec.expand(5, Some(6)).unwrap();
        assert_eq!(s.window(), Some(6));
        // (q;q) zero offset reciprocal: division by zero.
        let bad = BracketSpec::one().div(&BracketSpec::poch(1, 0, 0, 1));
        assert!(matches!(bad.expand(5, None), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn polynomial_division_of_zero_offsets() {
        // (z^3; q)/(z; q) = (1 + z + z^2) (z^3 q; q)/(z q; q)
        let spec = BracketSpec::poch(1, 3, 0, 1).div(&BracketSpec::poch(1, 1, 0, 1));
        let nf = spec.normalize().unwrap();
        assert_eq!(nf.polys, vec![(1, 1, 3)]);
        assert!(nf.unbounded_denominators().is_empty());
        // (1-z^{k(a+1)})(1-z^a)/((1-z)(1-z^{a+1})) needs the right pairing.
        let spec = BracketSpec::poch_finite(1, 12, 0, 1, 1)
            .mul(&BracketSpec::poch_finite(1, 3, 0, 1, 1))
            .div(&BracketSpec::poch_finite(1, 1, 0, 1, 1))
            .div(&BracketSpec::poch_finite(1, 4, 0, 1, 1));
        assert!(spec.normalize().unwrap().unbounded_denominators().is_empty());
    }

    #[test]
    fn negative_offsets_are_peeled() {
        // (z q^{-1}; q)_2 = (1 - z/q)(1 - z) = -z q^{-1} (1 - q/z)(1 - z)
        let nf = BracketSpec::poch_finite(1, 1, -1, 1, 2).normalize().unwrap();
        assert_eq!(nf.monomial, Monomial::new(-1, 1, -1));
        let s = BracketSpec::poch_finite(1, 1, -1, 1, 2)
            .mul(&BracketSpec::monomial(1, 0, 1))
            .expand(4, None)
            .unwrap();
        // q (1 - z/q)(1 - z) = q - z - z q + z^2
        let got: BTreeMap<(i64, usize), BigInt> = s.terms().map(|(d, e, c)| ((d, e), c.clone())).collect();
        let want: BTreeMap<(i64, usize), BigInt> =
            [((1, 0), -1), ((2, 0), 1), ((0, 1), 1), ((1, 1), -1)].into_iter().map(|(k, v)| (k, big(v))).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn scalar_two_and_vanishing() {
        let s = BracketSpec::poch_finite(-1, 0, 0, 1, 1).expand_q(3).unwrap();
        assert_eq!(s, QSeries::from_i64s(&[2, 0, 0]));
        assert!(BracketSpec::poch(1, 0, 0, 1).expand_q(3).unwrap().is_zero());
    }
}
