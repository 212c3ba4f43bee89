//! Arithmetic in `Z[ζ_a]`, represented as integer polynomials reduced modulo the
//! `a`-th cyclotomic polynomial.
//!
//! `ζ_a` is the residue class of `x`; no complex embedding is ever chosen.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::QSeries;

/// Coefficients of `Φ_a(x)`, constant term first.
pub fn cyclotomic_poly(a: u64) -> Vec<i64> {
    assert!(a >= 1, "cyclotomic_poly: order must be positive");
    // x^a - 1
    let mut num = vec![0i64; a as usize + 1];
    num[0] = -1;
    num[a as usize] = 1;
    for d in 1..a {
        if a % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        for (k, &dk) in den.iter().enumerate() {
            rem[i + k] -= c * dk;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Element of `Z[ζ_a]` in the power basis `1, ζ, ..., ζ^(φ(a)-1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(order: u64) -> Self {
        CycInt {
            order,
            coeffs: vec![BigInt::zero(); euler_phi(order) as usize],
        }
    }

    pub fn from_int(order: u64, n: BigInt) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = n;
        z
    }

    pub fn one(order: u64) -> Self {
        Self::from_int(order, BigInt::one())
    }

    /// Reduce an arbitrary polynomial in `ζ` modulo `Φ_a`.
    pub fn from_poly(order: u64, poly: &[BigInt]) -> Self {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        let mut rem: Vec<BigInt> = poly.to_vec();
        if rem.len() < deg {
            rem.resize(deg, BigInt::zero());
        }
        for i in (deg..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut rem[i]);
            for (k, &pk) in phi.iter().enumerate().take(deg) {
                if pk != 0 {
                    rem[i - deg + k] -= &c * pk;
                }
            }
        }
        rem.truncate(deg);
        CycInt { order, coeffs: rem }
    }

    /// `ζ_a^k` with `k` reduced mod `a`.
    pub fn zeta_pow(order: u64, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![BigInt::zero(); e + 1];
        poly[e] = BigInt::one();
        Self::from_poly(order, &poly)
    }

    /// `Σ_r counts[r] ζ^r` reduced; `counts` is indexed by residue mod `a`.
    pub fn from_residue_counts(order: u64, counts: &[BigInt]) -> Self {
        Self::from_poly(order, counts)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational_integer(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    /// The integer value when [`CycInt::is_rational_integer`] holds.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.is_rational_integer().then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len();
        let mut prod = vec![BigInt::zero(); 2 * n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_poly(self.order, &prod))
    }

    pub fn neg(&self) -> Self {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        CycInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}*w{}", self.order),
                _ => format!("{c}*w{}^{i}", self.order),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Series in `q` (Laurent allowed) with coefficients in `Z[ζ_a]`, certified for
/// exponents below `prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycSeries {
    order: u64,
    prec: i64,
    terms: BTreeMap<i64, CycInt>,
}

impl CycSeries {
    pub fn new(order: u64, prec: i64) -> Self {
        CycSeries {
            order,
            prec,
            terms: BTreeMap::new(),
        }
    }

    /// Collect terms; rejects any coefficient of a different order.
    pub fn from_terms<I>(order: u64, prec: i64, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, CycInt)>,
    {
        let mut s = Self::new(order, prec);
        for (e, c) in terms {
            if c.order != order {
                return Err(Error::OrderMismatch(order, c.order));
            }
            s.add_term(e, &c);
        }
        Ok(s)
    }

    pub fn from_qseries(order: u64, s: &QSeries) -> Self {
        let mut out = Self::new(order, s.precision() as i64);
        for (e, c) in s.terms() {
            out.terms.insert(e as i64, CycInt::from_int(order, c.clone()));
        }
        out
    }

    pub(crate) fn add_term(&mut self, e: i64, c: &CycInt) {
        if e >= self.prec || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.try_add(c).expect("order checked");
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn terms(&self) -> &BTreeMap<i64, CycInt> {
        &self.terms
    }

    pub fn coeff(&self, e: i64) -> CycInt {
        self.terms.get(&e).cloned().unwrap_or_else(|| CycInt::zero(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Integer series when every coefficient is a rational integer and no
    /// exponent is negative.
    pub fn to_integer_series(&self) -> Option<QSeries> {
        if self.prec < 0 {
            return None;
        }
        let mut out = QSeries::zero(self.prec as usize);
        let mut coeffs = out.clone().into_coeffs();
        for (&e, c) in &self.terms {
            if e < 0 {
                return None;
            }
            coeffs[e as usize] = c.as_integer()?;
        }
        out = QSeries::from_coeffs(coeffs);
        Some(out)
    }

    /// First exponent (below both precisions) with differing coefficients.
    pub fn first_mismatch(&self, other: &Self) -> Option<(i64, CycInt, CycInt)> {
        let p = self.prec.min(other.prec);
        let keys: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(other.terms.keys()).copied().filter(|&e| e < p).collect();
        keys.into_iter().find_map(|e| {
            let a = self.coeff(e);
            let b = other.coeff(e);
            (a != b).then_some((e, a, b))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small_cases() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        for a in 1..40 {
            assert_eq!(cyclotomic_poly(a).len() as u64 - 1, euler_phi(a));
        }
    }

    #[test]
    fn zeta_powers() {
        assert_eq!(CycInt::zeta_pow(3, 3), CycInt::one(3));
        let z2 = CycInt::zeta_pow(3, 2);
        assert_eq!(z2.coeffs(), &[BigInt::from(-1), BigInt::from(-1)]);
        let mut sum = CycInt::zero(5);
        for k in 0..5 {
            sum = sum.try_add(&CycInt::zeta_pow(5, k)).unwrap();
        }
        assert!(sum.is_zero());
        assert_eq!(CycInt::zeta_pow(7, -1), CycInt::zeta_pow(7, 6));
    }

    #[test]
    fn zeta_is_a_root_of_phi() {
        for a in 1..30u64 {
            let phi = cyclotomic_poly(a);
            let mut acc = CycInt::zero(a);
            for (k, &c) in phi.iter().enumerate() {
                acc = acc.try_add(&CycInt::zeta_pow(a, k as i64).scale(&BigInt::from(c))).unwrap();
            }
            assert!(acc.is_zero(), "Φ_{a}(ζ) != 0");
        }
    }

    #[test]
    fn multiplication_respects_exponents() {
        for a in [3u64, 4, 5, 6, 8, 9, 12] {
            for i in -3..(a as i64 + 2) {
                for j in 0..(a as i64) {
                    let p = CycInt::zeta_pow(a, i).try_mul(&CycInt::zeta_pow(a, j)).unwrap();
                    assert_eq!(p, CycInt::zeta_pow(a, i + j));
                }
            }
        }
    }

    #[test]
    fn rational_integer_predicate() {
        assert!(CycInt::from_int(5, BigInt::from(7)).is_rational_integer());
        assert!(!CycInt::zeta_pow(5, 1).is_rational_integer());
        assert!(CycInt::zeta_pow(2, 1).is_rational_integer());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = CycInt::one(3);
        let b = CycInt::one(4);
        assert_eq!(a.try_add(&b), Err(Error::OrderMismatch(3, 4)));
        assert!(a.try_mul(&b).is_err());
        assert!(CycSeries::from_terms(3, 5, vec![(0, b)]).is_err());
    }

    #[test]
    fn integer_series_round_trip() {
        let s = crate::series::euler_e(12).unwrap();
        let c = CycSeries::from_qseries(5, &s);
        assert_eq!(c.to_integer_series().unwrap(), s);
    }
}
