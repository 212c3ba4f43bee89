//! Eta quotients and the named product sides: `R_a`, `D_a`, `S̃_N`, coprime
//! products, the generalized quintuple product, crank generating functions
//! and Gaussian polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::bivar::ZqSeries;
use crate::bracket::BracketSpec;
use crate::cyclo::euler_phi;
use crate::error::{Error, Result};
use crate::series::{euler_product, QSeries};

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `∏_k E(q^k)^{e(k)}`, stored as `k -> e(k)` with zero exponents removed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EtaQuotient {
    exps: BTreeMap<u64, i64>,
}

impl EtaQuotient {
    pub fn one() -> Self {
        Self::default()
    }

    /// `E(q^k)^e`
    pub fn e(k: u64, e: i64) -> Self {
        let mut s = Self::default();
        s.push(k, e);
        s
    }

    pub fn from_pairs(pairs: &[(u64, i64)]) -> Self {
        let mut s = Self::default();
        for &(k, e) in pairs {
            s.push(k, e);
        }
        s
    }

    fn push(&mut self, k: u64, e: i64) {
        assert!(k >= 1);
        let v = self.exps.entry(k).or_insert(0);
        *v += e;
        if *v == 0 {
            self.exps.remove(&k);
        }
    }

    pub fn exponents(&self) -> &BTreeMap<u64, i64> {
        &self.exps
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (&k, &e) in &other.exps {
            s.push(k, e);
        }
        s
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut s = Self::default();
        for (&k, &e) in &self.exps {
            s.push(k, e * n);
        }
        s
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// `q -> q^m`
    pub fn subst(&self, m: u64) -> Self {
        let mut s = Self::default();
        for (&k, &e) in &self.exps {
            s.push(k * m, e);
        }
        s
    }

    /// `Σ k e(k)`: the matching eta quotient carries `q^{prefactor24/24}`.
    pub fn prefactor24(&self) -> i64 {
        self.exps.iter().map(|(&k, &e)| k as i64 * e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn expand(&self, qprec: usize) -> Result<QSeries> {
        let pairs: Vec<(usize, i64)> = self.exps.iter().map(|(&k, &e)| (k as usize, e)).collect();
        euler_product(&pairs, qprec)
    }

    pub fn to_bracket(&self) -> BracketSpec {
        let mut b = BracketSpec::one();
        for (&k, &e) in &self.exps {
            b = b.mul(&BracketSpec::euler(k).pow(e));
        }
        b
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(&k, &e)| {
                let base = if k == 1 { "E(q)".to_string() } else { format!("E(q^{k})") };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `N`, with `φ(N)` and the Möbius values on the divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaitoSpec {
    pub n: u64,
    pub phi: u64,
    pub divisors: Vec<(u64, i64)>,
}

impl SaitoSpec {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be >= 1".into()));
        }
        Ok(SaitoSpec {
            n,
            phi: euler_phi(n),
            divisors: divisors(n).into_iter().map(|d| (d, mobius(d))).collect(),
        })
    }

    /// `E(q^N)^{φ(N)} / ∏_{d|N} E(q^d)^{μ(d)}`
    pub fn eta_quotient(&self) -> EtaQuotient {
        let den = coprime_eta(self.n);
        EtaQuotient::e(self.n, self.phi as i64).div(&den)
    }

    pub fn prefactor24(&self) -> i64 {
        let s: i64 = self.divisors.iter().map(|&(d, mu)| mu * d as i64).sum();
        (self.n * self.phi) as i64 - s
    }
}

pub fn saito_tilde(n: u64, qprec: usize) -> Result<QSeries> {
    SaitoSpec::new(n)?.eta_quotient().expand(qprec)
}

pub fn saito_prefactor24(n: u64) -> Result<i64> {
    Ok(SaitoSpec::new(n)?.prefactor24())
}

/// `∏_{d|M} E(q^d)^{μ(d)}`
pub fn coprime_eta(m: u64) -> EtaQuotient {
    let mut s = EtaQuotient::one();
    for d in divisors(m) {
        s = s.mul(&EtaQuotient::e(d, mobius(d)));
    }
    s
}

/// `∏_{n >= 1, (n, M) = 1} (1 - q^n)` multiplied out directly.
pub fn coprime_e(m: u64, qprec: usize) -> Result<QSeries> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be >= 1".into()));
    }
    let mut s = QSeries::one(qprec);
    for n in 1..qprec {
        if (n as u64).gcd(&m) == 1 {
            s.apply_binomial(1, n, 1);
        }
    }
    Ok(s)
}

/// `E(q) E(q^a)^{a-2} [z^a;q^a] / [z;q]`
pub fn rhs_c_spec(a: u64) -> BracketSpec {
    BracketSpec::euler(1)
        .mul(&BracketSpec::euler(a).pow(a as i64 - 2))
        .mul(&BracketSpec::bracket(1, a as i64, 0, a))
        .div(&BracketSpec::bracket(1, 1, 0, 1))
}

pub fn rhs_c(a: u64, qprec: usize) -> Result<ZqSeries> {
    if a < 2 {
        return Err(Error::InvalidParameter(format!("a = {a} must be >= 2")));
    }
    rhs_c_spec(a).expand(qprec, None)
}

/// `E(q)^{a-2} E(q^a) [z;q] / [z;q^a]`
pub fn rhs_b_spec(a: u64) -> BracketSpec {
    BracketSpec::euler(1)
        .pow(a as i64 - 2)
        .mul(&BracketSpec::euler(a))
        .mul(&BracketSpec::bracket(1, 1, 0, 1))
        .div(&BracketSpec::bracket(1, 1, 0, a))
}

/// `D_a(z;q) = E(q^a)^{2a-2} [z^a;q^a] / [z;q]`
pub fn d_spec(a: u64) -> BracketSpec {
    BracketSpec::euler(a)
        .pow(2 * a as i64 - 2)
        .mul(&BracketSpec::bracket(1, a as i64, 0, a))
        .div(&BracketSpec::bracket(1, 1, 0, 1))
}

/// `D_a(q^r; q^M)`
pub fn d_series(a: u64, r: u64, m: u64, qprec: usize) -> Result<QSeries> {
    if r == 0 || r >= m {
        return Err(Error::InvalidParameter(format!("need 1 <= r < M, got r = {r}, M = {m}")));
    }
    d_spec(a).specialize_monomial(r as i64, m).expand_q(qprec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `[z^a;q] / [z, z^{a+1};q]`
pub fn gqpi_left_spec(a: u64) -> BracketSpec {
    let a = a as i64;
    BracketSpec::bracket(1, a, 0, 1)
        .div(&BracketSpec::bracket(1, 1, 0, 1))
        .div(&BracketSpec::bracket(1, a + 1, 0, 1))
}

/// The `j`-th summand `z^j E(q^{a+1})^2/E(q)^2 [q^{a-j};q^{a+1}] / [z^{a+1}, z^{a+1}q^{a-j};q^{a+1}]`.
pub fn gqpi_right_term_spec(a: u64, j: u64) -> BracketSpec {
    let (ai, ji) = (a as i64, j as i64);
    let m = a + 1;
    BracketSpec::monomial(1, ji, 0)
        .mul(&BracketSpec::euler(m).pow(2))
        .div(&BracketSpec::euler(1).pow(2))
        .mul(&BracketSpec::bracket(1, 0, ai - ji, m))
        .div(&BracketSpec::bracket(1, ai + 1, 0, m))
        .div(&BracketSpec::bracket(1, ai + 1, ai - ji, m))
}

fn check_gqpi(a: u64) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidParameter("a must be >= 1".into()));
    }
    Ok(())
}

/// One side of the generalized quintuple product identity, in windowed mode.
pub fn gqpi_side(a: u64, side: Side, qprec: usize, window: i64) -> Result<ZqSeries> {
    check_gqpi(a)?;
    match side {
        Side::Left => gqpi_left_spec(a).expand(qprec, Some(window)),
        Side::Right => {
            let mut acc: Option<ZqSeries> = None;
            for j in 0..a {
                let t = gqpi_right_term_spec(a, j).expand(qprec, Some(window))?;
                acc = Some(match acc {
                    None => t,
                    Some(s) => s.add(&t),
                });
            }
            Ok(acc.expect("a >= 1"))
        }
    }
}

/// `E(q)^2/E(q^{a+1})^2 [z^a;q]/[z;q]`, free of reciprocal zero-offset factors.
pub fn gqpib_left_spec(a: u64) -> BracketSpec {
    BracketSpec::euler(1)
        .pow(2)
        .div(&BracketSpec::euler(a + 1).pow(2))
        .mul(&BracketSpec::bracket(1, a as i64, 0, 1))
        .div(&BracketSpec::bracket(1, 1, 0, 1))
}

/// The `j`-th summand of the cross-multiplied right side.
pub fn gqpib_right_term_spec(a: u64, j: u64) -> BracketSpec {
    let (ai, ji) = (a as i64, j as i64);
    let m = a + 1;
    let mut b = BracketSpec::monomial(1, ji, 0);
    for k in 1..=ai {
        b = b.mul(&BracketSpec::bracket(1, ai + 1, k, m));
    }
    b.mul(&BracketSpec::bracket(1, 0, ai - ji, m))
        .div(&BracketSpec::bracket(1, ai + 1, ai - ji, m))
}

/// One side of the cross-multiplied identity, in exact mode.
pub fn gqpib_side(a: u64, side: Side, qprec: usize) -> Result<ZqSeries> {
    check_gqpi(a)?;
    match side {
        Side::Left => gqpib_left_spec(a).expand(qprec, None),
        Side::Right => {
            let mut acc = ZqSeries::zero(qprec);
            for j in 0..a {
                acc = acc.add(&gqpib_right_term_spec(a, j).expand(qprec, None)?);
            }
            Ok(acc)
        }
    }
}

/// `(1-z) E(q) / [z;q]`
pub fn crank_gen_spec() -> BracketSpec {
    BracketSpec::poch_finite(1, 1, 0, 1, 1)
        .mul(&BracketSpec::euler(1))
        .div(&BracketSpec::bracket(1, 1, 0, 1))
}

pub fn crank_gen(qprec: usize) -> Result<ZqSeries> {
    crank_gen_spec().expand(qprec, None)
}

/// `(q)_{m+n} / ((q)_n (q)_m)` as a polynomial of degree `nm`.
pub fn gaussian_poly(n: u64, m: u64) -> QSeries {
    let prec = (n * m + 1) as usize;
    let mut s = QSeries::one(prec);
    for i in 1..=m as usize {
        s.apply_binomial(1, n as usize + i, 1);
    }
    for i in 1..=m as usize {
        s.apply_binomial(1, i, -1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::euler_e_at;
    use num_bigint::BigInt;

    #[test]
    fn mobius_and_divisors() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn prefactors() {
        assert_eq!(saito_prefactor24(5).unwrap(), 24);
        assert_eq!(saito_prefactor24(2).unwrap(), 3);
        assert_eq!(saito_prefactor24(1).unwrap(), 0);
        // prime p: (p^2 - 1)
        for p in [3u64, 7, 11, 13] {
            assert_eq!(saito_prefactor24(p).unwrap(), (p * p - 1) as i64);
        }
    }

    #[test]
    fn prefactors_up_to_200() {
        let all: Vec<i64> = (1..=200).map(|n| saito_prefactor24(n).unwrap()).collect();
        let negative = all.iter().filter(|&&p| p < 0).count();
        let integral = all.iter().filter(|&&p| p % 24 == 0).count();
        println!("N <= 200: {negative} negative prefactors, {integral} multiples of 24");
        assert_eq!(all[1], 3);
    }

    #[test]
    fn saito_small() {
        assert_eq!(saito_tilde(1, 20).unwrap(), QSeries::one(20));
        // N = 2: E(q^2)^2/E(q)
        let direct = euler_e_at(2, 30)
            .unwrap()
            .pow(2)
            .unwrap()
            .mul(&euler_e_at(1, 30).unwrap().invert().unwrap());
        assert_eq!(saito_tilde(2, 30).unwrap(), direct);
        assert!(saito_tilde(6, 50).unwrap().is_nonneg());
    }

    #[test]
    fn coprime_products() {
        assert_eq!(coprime_e(1, 30).unwrap(), euler_e_at(1, 30).unwrap());
        assert_eq!(coprime_e(6, 40).unwrap(), coprime_eta(6).expand(40).unwrap());
    }

    #[test]
    fn gaussian_small() {
        assert_eq!(gaussian_poly(5, 0), QSeries::one(1));
        assert_eq!(gaussian_poly(1, 1), QSeries::from_i64s(&[1, 1]));
        assert_eq!(gaussian_poly(2, 2), QSeries::from_i64s(&[1, 1, 2, 1, 1]));
    }

    #[test]
    fn crank_gen_low_terms() {
        let s = crank_gen(4).unwrap();
        assert_eq!(s.coeff(0, 0), Some(&BigInt::from(1)));
        let row1: Vec<(i64, i64)> = s.rows()[1].iter().map(|(d, c)| (*d, i64::try_from(c).unwrap())).collect();
        assert_eq!(row1, vec![(-1, 1), (0, -1), (1, 1)]);
    }

    #[test]
    fn d_series_rejects_large_r() {
        assert!(d_series(2, 3, 3, 10).is_err());
        assert!(d_series(2, 1, 3, 20).unwrap().is_nonneg());
    }
}
