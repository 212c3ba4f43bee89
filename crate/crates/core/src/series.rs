//! Truncated power series in `q` with arbitrary-precision integer coefficients.
//!
//! A [`QSeries`] of precision `N` certifies the coefficients of `q^0 .. q^(N-1)`.
//! Binary operations return the smaller of the two precisions, so a value never
//! carries a coefficient that its inputs could not determine.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    // Dense: `coeffs.len()` is the precision.
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(prec: usize) -> Self {
        QSeries {
            coeffs: vec![BigInt::zero(); prec],
        }
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(BigInt::one(), prec)
    }

    pub fn constant(c: BigInt, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c * q^e` at precision `prec` (dropped when `e >= prec`).
    pub fn monomial(c: BigInt, e: usize, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if e < prec {
            s.coeffs[e] = c;
        }
        s
    }

    /// Coefficients for `q^0 ..`, precision taken from the vector length.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        QSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        QSeries {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Build from sparse `(exponent, coefficient)` pairs; exponents at or past
    /// `prec` are discarded.
    pub fn from_sparse<I>(terms: I, prec: usize) -> Self
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut s = Self::zero(prec);
        for (e, c) in terms {
            if e < prec {
                s.coeffs[e] += c;
            }
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `q^n`, or `None` when `n` is not certified.
    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        let p = prec.min(self.precision());
        QSeries {
            coeffs: self.coeffs[..p].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        QSeries {
            coeffs: (0..p).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        QSeries {
            coeffs: (0..p).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Schoolbook product at the minimum of both precisions.
    pub fn mul(&self, other: &Self) -> Self {
        let p = self.precision().min(other.precision());
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs[..p].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..p - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    /// Multiply by `q^e`; precision is unchanged.
    pub fn shift(&self, e: usize) -> Self {
        let p = self.precision();
        let mut out = vec![BigInt::zero(); p];
        for i in 0..p.saturating_sub(e) {
            out[i + e] = self.coeffs[i].clone();
        }
        QSeries { coeffs: out }
    }

    /// Multiplicative inverse; requires a constant term of `1` or `-1`.
    pub fn invert(&self) -> Result<Self> {
        let p = self.precision();
        if p == 0 {
            return Ok(self.clone());
        }
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::NonUnit(c0.to_string()));
        }
        let c0_inv = c0.clone();
        let mut out: Vec<BigInt> = Vec::with_capacity(p);
        out.push(c0_inv.clone());
        for n in 1..p {
            let mut acc = BigInt::zero();
            for k in 1..=n {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc += a * &out[n - k];
                }
            }
            out.push(-(acc * &c0_inv));
        }
        Ok(QSeries { coeffs: out })
    }

    /// Integer power; negative exponents go through [`QSeries::invert`].
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.invert()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut result = QSeries::one(self.precision());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(result)
    }

    /// `f(q) -> f(q^k)`; the precision grows to `k * N`.
    pub fn subst_q_to_qk(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("substitution q -> q^0".into()));
        }
        let p = self.precision() * k;
        let mut out = vec![BigInt::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Ok(QSeries { coeffs: out })
    }

    /// Coefficients at exponents `offset, offset + k, offset + 2k, ...`.
    pub fn extract_progression(&self, k: usize, offset: usize) -> Self {
        assert!(k > 0);
        QSeries {
            coeffs: self.coeffs.iter().skip(offset).step_by(k).cloned().collect(),
        }
    }

    /// In place `self *= (1 - c q^j)^exp` with `c = ±1`, `j >= 1`.
    pub fn apply_binomial(&mut self, c: i8, j: usize, exp: i64) {
        debug_assert!(j >= 1 && (c == 1 || c == -1));
        let p = self.precision();
        if j >= p {
            return;
        }
        if exp >= 0 {
            for _ in 0..exp {
                for e in (j..p).rev() {
                    let (lo, hi) = self.coeffs.split_at_mut(e);
                    if lo[e - j].is_zero() {
                        continue;
                    }
                    if c == 1 {
                        hi[0] -= &lo[e - j];
                    } else {
                        hi[0] += &lo[e - j];
                    }
                }
            }
        } else {
            for _ in 0..(-exp) {
                for e in j..p {
                    let (lo, hi) = self.coeffs.split_at_mut(e);
                    if lo[e - j].is_zero() {
                        continue;
                    }
                    if c == 1 {
                        hi[0] += &lo[e - j];
                    } else {
                        hi[0] -= &lo[e - j];
                    }
                }
            }
        }
    }

    /// First exponent with a negative coefficient.
    pub fn first_negative(&self) -> Option<(usize, &BigInt)> {
        self.coeffs.iter().enumerate().find(|(_, c)| c.is_negative())
    }

    pub fn is_nonneg(&self) -> bool {
        self.first_negative().is_none()
    }

    /// First exponent below the shared precision where the two series differ.
    pub fn first_mismatch<'a>(&'a self, other: &'a Self) -> Option<(usize, &'a BigInt, &'a BigInt)> {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(i, (a, b))| (i, a, b))
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (sign, abs) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{abs}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{abs}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision())
    }
}

/// `E(q) = prod_{n>=1} (1 - q^n)` truncated to `prec`, via Euler's pentagonal
/// number theorem.
pub fn euler_e(prec: usize) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::InvalidPrecision("E(q) needs precision >= 1".into()));
    }
    let mut coeffs = vec![BigInt::zero(); prec];
    coeffs[0] = BigInt::one();
    let mut k: usize = 1;
    loop {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 >= prec {
            break;
        }
        coeffs[e1] = BigInt::from(sign);
        if e2 < prec {
            coeffs[e2] = BigInt::from(sign);
        }
        k += 1;
    }
    Ok(QSeries { coeffs })
}

/// `E(q^k)` truncated to `prec`.
pub fn euler_e_at(k: usize, prec: usize) -> Result<QSeries> {
    if k == 0 {
        return Err(Error::InvalidParameter("E(q^0) is not defined".into()));
    }
    if prec == 0 {
        return Err(Error::InvalidPrecision("E(q^k) needs precision >= 1".into()));
    }
    let inner = euler_e(prec.div_ceil(k))?;
    Ok(inner.subst_q_to_qk(k)?.truncate(prec))
}

/// `(q^j; q^m)_inf` truncated to `prec`.
pub fn pochhammer_inf(j: usize, m: usize, prec: usize) -> Result<QSeries> {
    if j == 0 {
        return Err(Error::InvalidParameter(
            "(q^0; q^m) has the zero factor (1 - 1)".into(),
        ));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("q-step must be positive".into()));
    }
    if prec == 0 {
        return Err(Error::InvalidPrecision("precision must be >= 1".into()));
    }
    let mut s = QSeries::one(prec);
    let mut e = j;
    while e < prec {
        s.apply_binomial(1, e, 1);
        e += m;
    }
    Ok(s)
}

/// Product `prod_k E(q^k)^{e_k}` at precision `prec`.
pub fn euler_product(factors: &[(usize, i64)], prec: usize) -> Result<QSeries> {
    if prec == 0 {
        return Err(Error::InvalidPrecision("precision must be >= 1".into()));
    }
    let mut s = QSeries::one(prec);
    for &(k, e) in factors {
        if k == 0 {
            return Err(Error::InvalidParameter("E(q^0) is not defined".into()));
        }
        if e == 0 {
            continue;
        }
        let mut n = k;
        while n < prec {
            s.apply_binomial(1, n, e);
            n += k;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_product(prec: usize) -> QSeries {
        // Oracle: multiply (1 - q^n) one factor at a time with plain mul.
        let mut s = QSeries::one(prec);
        for n in 1..prec {
            let mut f = QSeries::one(prec);
            f.coeffs[n] = BigInt::from(-1);
            s = s.mul(&f);
        }
        s
    }

    #[test]
    fn euler_small_cases() {
        assert_eq!(euler_e(1).unwrap(), QSeries::from_i64s(&[1]));
        assert_eq!(euler_e(8).unwrap(), QSeries::from_i64s(&[1, -1, -1, 0, 0, 1, 0, 1]));
        assert_eq!(euler_e(13).unwrap().coeff(12).unwrap(), &BigInt::from(-1));
        assert!(matches!(euler_e(0), Err(Error::InvalidPrecision(_))));
    }

    #[test]
    fn pentagonal_sparsity_against_direct_product() {
        let prec = 500;
        let direct = direct_product(prec);
        assert_eq!(euler_e(prec).unwrap(), direct);
        let pent: std::collections::BTreeSet<usize> = (0..40i64)
            .flat_map(|k| [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2])
            .map(|e| e as usize)
            .collect();
        for (e, c) in direct.terms() {
            assert!(pent.contains(&e), "exponent {e} is not pentagonal");
            assert!(c.abs().is_one());
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer_inf(1, 1, 8).unwrap(), euler_e(8).unwrap());
        assert_eq!(
            pochhammer_inf(1, 2, 6).unwrap(),
            QSeries::from_i64s(&[1, -1, 0, -1, 1, -1])
        );
        assert_eq!(pochhammer_inf(2, 2, 3).unwrap(), QSeries::from_i64s(&[1, 0, -1]));
        assert!(pochhammer_inf(0, 1, 5).is_err());
    }

    #[test]
    fn ring_examples() {
        let a = QSeries::from_i64s(&[1, -1, 0]);
        let b = QSeries::from_i64s(&[1, 1, 0]);
        assert_eq!(a.mul(&b), QSeries::from_i64s(&[1, 0, -1]));
        let e = euler_e(20).unwrap();
        assert_eq!(e.mul(&e.invert().unwrap()), QSeries::one(20));
        let e3 = euler_e(5).unwrap().subst_q_to_qk(3).unwrap();
        assert_eq!(e3.precision(), 15);
        assert_eq!(e3.coeff(3).unwrap(), &BigInt::from(-1));
        assert_eq!(e3.coeff(6).unwrap(), &BigInt::from(-1));
        assert_eq!(e3, euler_e_at(3, 15).unwrap());
    }

    #[test]
    fn precision_is_minimum() {
        let a = euler_e(10).unwrap();
        let b = euler_e(6).unwrap();
        assert_eq!(a.add(&b).precision(), 6);
        assert_eq!(a.mul(&b).precision(), 6);
    }

    #[test]
    fn invert_rejects_non_units() {
        let s = QSeries::from_i64s(&[2, 1]);
        assert!(matches!(s.invert(), Err(Error::NonUnit(_))));
        assert!(matches!(s.pow(-1), Err(Error::NonUnit(_))));
        let m = QSeries::from_i64s(&[-1, 3, 0, 1]);
        assert_eq!(m.mul(&m.invert().unwrap()), QSeries::one(4));
    }

    #[test]
    fn binomial_application_matches_mul() {
        let prec = 30;
        let mut s = euler_e(prec).unwrap();
        s.apply_binomial(-1, 3, 2);
        let mut f = QSeries::one(prec);
        f.coeffs[3] = BigInt::one();
        let expected = euler_e(prec).unwrap().mul(&f).mul(&f);
        assert_eq!(s, expected);
        s.apply_binomial(-1, 3, -2);
        assert_eq!(s, euler_e(prec).unwrap());
    }

    #[test]
    fn euler_product_matches_powers() {
        let prec = 40;
        let got = euler_product(&[(2, 3), (1, -1)], prec).unwrap();
        let e2 = euler_e_at(2, prec).unwrap().pow(3).unwrap();
        let e1 = euler_e(prec).unwrap().pow(-1).unwrap();
        assert_eq!(got, e2.mul(&e1));
    }
}
