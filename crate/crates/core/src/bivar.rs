//! Bivariate series: finite Laurent polynomials in `z` whose coefficients are
//! truncated power series in `q`.
//!
//! A [`ZqSeries`] is in one of two validity modes:
//!
//! * [`Mode::Exact`]: every nonzero coefficient with q-exponent below `qprec` is
//!   stored.
//! * [`Mode::Windowed`]: the true series is a power series in `z` bounded below
//!   (its support satisfies `zexp >= lo`) but only coefficients with
//!   `zexp <= hi` are certified. This arises from expanding reciprocals such as
//!   `1/(1 - z)` in the annulus `|q| < |z| < 1`.
//!
//! Substitutions that move q-exponents (`z -> z q^k`, `z -> q^r`) need to know
//! where the *uncomputed* terms can land; [`ZBound`] records a growth bound on
//! `|zexp|` in terms of the q-exponent for that purpose.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cyclo::{CycInt, CycSeries};
use crate::error::{Error, Result};
use crate::series::QSeries;

/// Coefficient ring for [`ZqSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn mul_int(&self, k: &BigInt) -> Self;
    fn neg_ref(&self) -> Self;
}

impl Coeff for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self * k
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Coeff for CycInt {
    fn is_zero(&self) -> bool {
        CycInt::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.try_add(other).expect("mixed cyclotomic orders in one series");
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self = self.try_add(&other.neg()).expect("mixed cyclotomic orders in one series");
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.try_mul(other).expect("mixed cyclotomic orders in one series")
    }
    fn mul_int(&self, k: &BigInt) -> Self {
        self.scale(k)
    }
    fn neg_ref(&self) -> Self {
        self.neg()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// True support has `zexp >= lo`; coefficients are certified for `zexp <= hi`.
    Windowed { lo: i64, hi: i64 },
}

/// Growth bound satisfied by *every* term `(d, e)` of the true series,
/// including the ones beyond the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZBound {
    /// `|d| * den <= num * e + den * c`
    Linear { num: u64, den: u64, c: u64 },
    /// `d^2 * den <= num * e + den * beta`
    Quadratic { num: u64, den: u64, beta: u64 },
    Unknown,
}

impl ZBound {
    pub fn constant_z(c: u64) -> Self {
        ZBound::Linear { num: 0, den: 1, c }
    }

    fn as_linear(self) -> Option<(u64, u64, u64)> {
        match self {
            ZBound::Linear { num, den, c } => Some((num, den, c)),
            // sqrt(x) <= (x + 1) / 2
            ZBound::Quadratic { num, den, beta } => Some((num, 2 * den, beta.div_ceil(2) + 1)),
            ZBound::Unknown => None,
        }
    }

    fn combine_mul(self, other: ZBound) -> ZBound {
        match (self, other) {
            (ZBound::Unknown, _) | (_, ZBound::Unknown) => ZBound::Unknown,
            (
                ZBound::Quadratic { num: n1, den: d1, beta: b1 },
                ZBound::Quadratic { num: n2, den: d2, beta: b2 },
            ) => {
                // (sqrt(x) + sqrt(y))^2 <= 2(x + y), and e1 + e2 = e.
                let (n, d) = max_ratio((n1, d1), (n2, d2));
                ZBound::Quadratic { num: 2 * n, den: d, beta: 2 * (b1 + b2) }
            }
            (a, b) => {
                let (n1, d1, c1) = a.as_linear().unwrap();
                let (n2, d2, c2) = b.as_linear().unwrap();
                let (n, d) = max_ratio((n1, d1), (n2, d2));
                ZBound::Linear { num: n, den: d, c: c1 + c2 }
            }
        }
    }

    fn combine_add(self, other: ZBound) -> ZBound {
        match (self, other) {
            (ZBound::Unknown, _) | (_, ZBound::Unknown) => ZBound::Unknown,
            (
                ZBound::Quadratic { num: n1, den: d1, beta: b1 },
                ZBound::Quadratic { num: n2, den: d2, beta: b2 },
            ) => {
                let (n, d) = max_ratio((n1, d1), (n2, d2));
                ZBound::Quadratic { num: n, den: d, beta: b1.max(b2) }
            }
            (a, b) => {
                let (n1, d1, c1) = a.as_linear().unwrap();
                let (n2, d2, c2) = b.as_linear().unwrap();
                let (n, d) = max_ratio((n1, d1), (n2, d2));
                ZBound::Linear { num: n, den: d, c: c1.max(c2) }
            }
        }
    }

    /// Smallest exponent any term with `e >= qprec` can reach under
    /// `e -> e + k*d`. `None` means no bound exists.
    pub fn landing_floor(self, qprec: i64, k: u64) -> Option<i64> {
        let k = k as i128;
        let p = qprec as i128;
        match self {
            ZBound::Unknown => None,
            ZBound::Linear { num, den, c } => {
                let (num, den, c) = (num as i128, den as i128, c as i128);
                // e + k d >= e (den - k num)/den - k c, increasing in e iff k num < den
                if k * num >= den && num != 0 {
                    return None;
                }
                let val_num = p * (den - k * num) - k * c * den;
                Some(div_ceil_i128(val_num, den) as i64)
            }
            ZBound::Quadratic { num, den, beta } => {
                let (num, den, beta) = (num as i128, den as i128, beta as i128);
                // Need t = P - L with 2 t den >= k^2 num (P past the vertex) and
                // t^2 den >= k^2 (num P + den beta).
                let mut t: i128 = 0;
                while 2 * t * den < k * k * num || t * t * den < k * k * (num * p + den * beta) {
                    t += 1;
                }
                Some((p - t) as i64)
            }
        }
    }

    /// Bound after `q -> q^m`.
    pub fn scaled_q(self, m: u64) -> ZBound {
        match self {
            ZBound::Linear { num, den, c } => ZBound::Linear { num, den: den * m, c },
            ZBound::Quadratic { num, den, beta } => ZBound::Quadratic { num, den: den * m, beta },
            ZBound::Unknown => ZBound::Unknown,
        }
    }

    /// Bound after `z -> z q^k` (terms move from `e` to `e + k d`).
    fn after_shift(self, k: u64) -> ZBound {
        match self {
            ZBound::Linear { num: 0, den, c } => ZBound::Linear { num: 0, den, c },
            ZBound::Quadratic { num, den, beta } => {
                // d^2 <= a(e' - k d) + b  =>  d^2 <= 2 a e' + 2 b + a^2 k^2
                let a_ceil = num.div_ceil(den);
                ZBound::Quadratic {
                    num: 2 * num,
                    den,
                    beta: 2 * beta + a_ceil * a_ceil * k * k,
                }
            }
            _ => ZBound::Unknown,
        }
    }

    /// Whether the term `(d, e)` satisfies the bound.
    pub fn admits(self, d: i64, e: i64) -> bool {
        let (d, e) = (d as i128, e as i128);
        match self {
            ZBound::Linear { num, den, c } => d.abs() * den as i128 <= num as i128 * e + den as i128 * c as i128,
            ZBound::Quadratic { num, den, beta } => {
                d * d * den as i128 <= num as i128 * e + den as i128 * beta as i128
            }
            ZBound::Unknown => true,
        }
    }
}

fn max_ratio(a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    if (a.0 as u128) * (b.1 as u128) >= (b.0 as u128) * (a.1 as u128) {
        a
    } else {
        b
    }
}

fn div_ceil_i128(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

/// Specialization targets for `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZTarget {
    One,
    MonomialQ(u64),
    RootOfUnity(u64, i64),
}

/// Result of a specialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specialized {
    Q(QSeries),
    Cyc(CycSeries),
}

/// Outcome of [`ZqSeries::nonneg_scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanVerdict {
    Pass,
    Negative { zexp: i64, qexp: usize, value: BigInt },
}

/// A coordinate where two series differ; `None` stands for a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch<R> {
    pub zexp: i64,
    pub qexp: usize,
    pub left: Option<R>,
    pub right: Option<R>,
}

#[derive(Clone, PartialEq)]
pub struct ZqSeries<R: Coeff = BigInt> {
    qprec: usize,
    rows: Vec<BTreeMap<i64, R>>,
    mode: Mode,
    bound: ZBound,
}

type Row<R> = BTreeMap<i64, R>;

fn row_add<R: Coeff>(row: &mut Row<R>, d: i64, c: &R) {
    if c.is_zero() {
        return;
    }
    if let Some(v) = row.get_mut(&d) {
        v.add_assign_ref(c);
        if v.is_zero() {
            row.remove(&d);
        }
    } else {
        row.insert(d, c.clone());
    }
}

fn row_sub<R: Coeff>(row: &mut Row<R>, d: i64, c: &R) {
    if c.is_zero() {
        return;
    }
    if let Some(v) = row.get_mut(&d) {
        v.sub_assign_ref(c);
        if v.is_zero() {
            row.remove(&d);
        }
    } else {
        row.insert(d, c.neg_ref());
    }
}

impl ZqSeries<BigInt> {
    pub fn one(qprec: usize) -> Self {
        Self::constant(BigInt::one(), qprec)
    }

    /// Constant-in-`z` lift of a univariate series.
    pub fn from_qseries(s: &QSeries) -> Self {
        let mut out = Self::zero(s.precision());
        out.bound = ZBound::constant_z(0);
        for (e, c) in s.terms() {
            out.rows[e].insert(0, c.clone());
        }
        out
    }

    /// Lift into `Z[ζ_a]` coefficients.
    pub fn to_cyc(&self, order: u64) -> ZqSeries<CycInt> {
        self.map_coeffs(|c| CycInt::from_int(order, c.clone()))
    }

    /// Sum of all coefficients at each q-exponent (`z = 1`).
    pub fn specialize_one(&self) -> Result<QSeries> {
        self.require_exact("z = 1")?;
        let coeffs = self
            .rows
            .iter()
            .map(|row| row.values().fold(BigInt::zero(), |acc, c| acc + c))
            .collect();
        Ok(QSeries::from_coeffs(coeffs))
    }

    /// `z -> q^r`; the precision drops to the certified landing floor.
    pub fn specialize_monomial(&self, r: u64) -> Result<QSeries> {
        let (prec, terms) = self.monomial_terms(r)?;
        let mut out = QSeries::zero(prec);
        let mut coeffs = out.clone().into_coeffs();
        for (e, c) in terms {
            if e < 0 {
                return Err(Error::NegativeExponent(e));
            }
            coeffs[e as usize] += c;
        }
        out = QSeries::from_coeffs(coeffs);
        Ok(out)
    }

    /// `z -> ζ_a^k`.
    pub fn specialize_root(&self, a: u64, k: i64) -> Result<CycSeries> {
        if a == 0 {
            return Err(Error::InvalidParameter("root of unity of order 0".into()));
        }
        self.require_exact("z = root of unity")?;
        let mut out = CycSeries::new(a, self.qprec as i64);
        for (e, row) in self.rows.iter().enumerate() {
            let mut counts = vec![BigInt::zero(); a as usize];
            for (d, c) in row {
                counts[(k * d).rem_euclid(a as i64) as usize] += c;
            }
            out.add_term(e as i64, &CycInt::from_residue_counts(a, &counts));
        }
        Ok(out)
    }

    pub fn specialize_z(&self, target: ZTarget) -> Result<Specialized> {
        match target {
            ZTarget::One => self.specialize_one().map(Specialized::Q),
            ZTarget::MonomialQ(r) => self.specialize_monomial(r).map(Specialized::Q),
            ZTarget::RootOfUnity(a, k) => self.specialize_root(a, k).map(Specialized::Cyc),
        }
    }

    /// First negative coefficient inside the certified region, optionally
    /// restricted to `|zexp| <= window`. Scans by q-exponent, then z-exponent.
    pub fn nonneg_scan(&self, window: Option<i64>) -> Result<ScanVerdict> {
        if let (Some(w), Mode::Windowed { hi, .. }) = (window, self.mode) {
            if w > hi {
                return Err(Error::InsufficientWindow(format!(
                    "scan window {w} exceeds certified window {hi}"
                )));
            }
        }
        let hi = self.certified_hi();
        for (e, row) in self.rows.iter().enumerate() {
            for (&d, c) in row {
                if d > hi || window.is_some_and(|w| d.abs() > w) {
                    continue;
                }
                if c.is_negative() {
                    return Ok(ScanVerdict::Negative { zexp: d, qexp: e, value: c.clone() });
                }
            }
        }
        Ok(ScanVerdict::Pass)
    }

    /// Coefficient of `z^d` as a univariate series.
    pub fn extract_z_coeff(&self, d: i64) -> Result<QSeries> {
        if d > self.certified_hi() {
            return Err(Error::InsufficientWindow(format!(
                "z^{d} lies outside the certified window"
            )));
        }
        Ok(QSeries::from_coeffs(
            self.rows
                .iter()
                .map(|row| row.get(&d).cloned().unwrap_or_default())
                .collect(),
        ))
    }

    pub fn mul_qseries(&self, s: &QSeries) -> Self {
        self.mul(&Self::from_qseries(s))
    }
}

impl ZqSeries<CycInt> {
    pub fn specialize_one(&self, order: u64) -> Result<CycSeries> {
        self.require_exact("z = 1")?;
        let mut out = CycSeries::new(order, self.qprec as i64);
        for (e, row) in self.rows.iter().enumerate() {
            for c in row.values() {
                out.add_term(e as i64, c);
            }
        }
        Ok(out)
    }

    pub fn specialize_monomial(&self, order: u64, r: u64) -> Result<CycSeries> {
        let (prec, terms) = self.monomial_terms(r)?;
        let mut out = CycSeries::new(order, prec as i64);
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        Ok(out)
    }
}

impl<R: Coeff> ZqSeries<R> {
    pub fn zero(qprec: usize) -> Self {
        ZqSeries {
            qprec,
            rows: vec![BTreeMap::new(); qprec],
            mode: Mode::Exact,
            bound: ZBound::constant_z(0),
        }
    }

    pub fn constant(c: R, qprec: usize) -> Self {
        let mut s = Self::zero(qprec);
        if qprec > 0 && !c.is_zero() {
            s.rows[0].insert(0, c);
        }
        s
    }

    /// Exact series from explicit terms `(zexp, qexp, coeff)`; terms at or past
    /// `qprec` are dropped. The caller supplies the growth bound.
    pub fn from_terms<I>(qprec: usize, bound: ZBound, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, usize, R)>,
    {
        let mut s = Self::zero(qprec);
        s.bound = bound;
        for (d, e, c) in terms {
            if e < qprec {
                row_add(&mut s.rows[e], d, &c);
            }
        }
        s
    }

    pub(crate) fn add_term(&mut self, d: i64, e: usize, c: &R) {
        if e < self.qprec {
            row_add(&mut self.rows[e], d, c);
        }
    }

    pub fn qprec(&self) -> usize {
        self.qprec
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Upper end of the certified z-window (`None` in exact mode).
    pub fn window(&self) -> Option<i64> {
        match self.mode {
            Mode::Exact => None,
            Mode::Windowed { hi, .. } => Some(hi),
        }
    }

    pub fn bound(&self) -> ZBound {
        self.bound
    }

    pub fn with_bound(mut self, bound: ZBound) -> Self {
        self.bound = bound;
        self
    }

    pub(crate) fn set_windowed(&mut self, lo: i64, hi: i64) {
        self.mode = Mode::Windowed { lo, hi };
        self.bound = ZBound::Unknown;
        for row in &mut self.rows {
            row.retain(|&d, _| d <= hi);
        }
    }

    pub fn rows(&self) -> &[BTreeMap<i64, R>] {
        &self.rows
    }

    pub fn coeff(&self, d: i64, e: usize) -> Option<&R> {
        self.rows.get(e).and_then(|row| row.get(&d))
    }

    /// Nonzero terms `(zexp, qexp, coeff)` sorted by `(qexp, zexp)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, usize, &R)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(e, row)| row.iter().map(move |(&d, c)| (d, e, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    /// Smallest and largest stored z-exponent.
    pub fn z_range(&self) -> Option<(i64, i64)> {
        let lo = self.rows.iter().filter_map(|r| r.keys().next().copied()).min()?;
        let hi = self.rows.iter().filter_map(|r| r.keys().next_back().copied()).max()?;
        Some((lo, hi))
    }

    fn support_lo(&self) -> i64 {
        match self.mode {
            Mode::Windowed { lo, .. } => lo,
            Mode::Exact => self.z_range().map_or(0, |r| r.0),
        }
    }

    pub(crate) fn certified_hi(&self) -> i64 {
        match self.mode {
            Mode::Exact => i64::MAX,
            Mode::Windowed { hi, .. } => hi,
        }
    }

    fn require_exact(&self, what: &str) -> Result<()> {
        match self.mode {
            Mode::Exact => Ok(()),
            Mode::Windowed { hi, .. } => Err(Error::InsufficientWindow(format!(
                "{what} needs every z-coefficient but only z^d with d <= {hi} are certified"
            ))),
        }
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> ZqSeries<S> {
        ZqSeries {
            qprec: self.qprec,
            rows: self
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(&d, c)| (d, f(c)))
                        .filter(|(_, c)| !c.is_zero())
                        .collect()
                })
                .collect(),
            mode: self.mode,
            bound: self.bound,
        }
    }

    pub fn truncate_q(&self, qprec: usize) -> Self {
        let mut s = self.clone();
        s.qprec = qprec.min(self.qprec);
        s.rows.truncate(s.qprec);
        s
    }

    fn combined_mode_add(&self, other: &Self) -> Mode {
        match (self.mode, other.mode) {
            (Mode::Exact, Mode::Exact) => Mode::Exact,
            _ => Mode::Windowed {
                lo: self.support_lo().min(other.support_lo()),
                hi: self.certified_hi().min(other.certified_hi()),
            },
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let qprec = self.qprec.min(other.qprec);
        let mut out = self.truncate_q(qprec);
        for (e, row) in other.rows.iter().take(qprec).enumerate() {
            for (&d, c) in row {
                row_add(&mut out.rows[e], d, c);
            }
        }
        out.mode = self.combined_mode_add(other);
        out.bound = self.bound.combine_add(other.bound);
        if let Mode::Windowed { hi, .. } = out.mode {
            for row in &mut out.rows {
                row.retain(|&d, _| d <= hi);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for c in row.values_mut() {
                *c = c.neg_ref();
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        self.map_coeffs(|c| c.mul_int(k))
    }

    /// Product. A windowed operand certifies `zexp <= min(U1 + L2, U2 + L1)`
    /// where `U` is the certified upper end and `L` the support lower bound.
    pub fn mul(&self, other: &Self) -> Self {
        let qprec = self.qprec.min(other.qprec);
        let mode = match (self.mode, other.mode) {
            (Mode::Exact, Mode::Exact) => Mode::Exact,
            _ => {
                let (l1, l2) = (self.support_lo(), other.support_lo());
                let (u1, u2) = (self.certified_hi(), other.certified_hi());
                let hi = u1.saturating_add(l2).min(u2.saturating_add(l1));
                Mode::Windowed { lo: l1 + l2, hi }
            }
        };
        let hi = match mode {
            Mode::Exact => i64::MAX,
            Mode::Windowed { hi, .. } => hi,
        };
        let mut rows: Vec<Row<R>> = vec![BTreeMap::new(); qprec];
        for (e1, r1) in self.rows.iter().take(qprec).enumerate() {
            if r1.is_empty() {
                continue;
            }
            for (e2, r2) in other.rows.iter().take(qprec - e1).enumerate() {
                if r2.is_empty() {
                    continue;
                }
                let target = &mut rows[e1 + e2];
                for (&d1, c1) in r1 {
                    for (&d2, c2) in r2 {
                        let d = d1 + d2;
                        if d <= hi {
                            row_add(target, d, &c1.mul_ref(c2));
                        }
                    }
                }
            }
        }
        ZqSeries {
            qprec,
            rows,
            mode,
            bound: match mode {
                Mode::Exact => self.bound.combine_mul(other.bound),
                Mode::Windowed { .. } => ZBound::Unknown,
            },
        }
    }

    /// Multiply by `z^s q^j`.
    pub fn mul_monomial(&self, s: i64, j: usize) -> Self {
        let mut rows: Vec<Row<R>> = vec![BTreeMap::new(); self.qprec];
        for (e, row) in self.rows.iter().enumerate() {
            if e + j >= self.qprec {
                break;
            }
            rows[e + j] = row.iter().map(|(&d, c)| (d + s, c.clone())).collect();
        }
        let mode = match self.mode {
            Mode::Exact => Mode::Exact,
            Mode::Windowed { lo, hi } => Mode::Windowed { lo: lo + s, hi: hi + s },
        };
        let bound = match self.bound {
            ZBound::Linear { num, den, c } => ZBound::Linear { num, den, c: c + s.unsigned_abs() },
            ZBound::Quadratic { num, den, beta } if s == 0 && j == 0 => {
                ZBound::Quadratic { num, den, beta }
            }
            b @ ZBound::Quadratic { .. } => match b.as_linear() {
                Some((n, d, c)) => ZBound::Linear { num: n, den: d, c: c + s.unsigned_abs() },
                None => ZBound::Unknown,
            },
            ZBound::Unknown => ZBound::Unknown,
        };
        ZqSeries { qprec: self.qprec, rows, mode, bound }
    }

    /// In place `self *= (1 - c z^s q^j)^exp` for `j >= 1` (exact for any sign
    /// of `exp`: division by such a factor is a geometric series in `q`).
    pub fn apply_binomial(&mut self, c: i8, s: i64, j: usize, exp: i64) {
        debug_assert!(j >= 1);
        let p = self.qprec;
        if j >= p || exp == 0 {
            return;
        }
        let hi = self.certified_hi();
        let neg = c == -1;
        for _ in 0..exp.unsigned_abs() {
            if exp > 0 {
                for e in (j..p).rev() {
                    let (lo_rows, hi_rows) = self.rows.split_at_mut(e);
                    let src = &lo_rows[e - j];
                    let dst = &mut hi_rows[0];
                    for (&d, v) in src {
                        if d + s > hi {
                            continue;
                        }
                        if neg {
                            row_add(dst, d + s, v);
                        } else {
                            row_sub(dst, d + s, v);
                        }
                    }
                }
            } else {
                for e in j..p {
                    let (lo_rows, hi_rows) = self.rows.split_at_mut(e);
                    let src = &lo_rows[e - j];
                    let dst = &mut hi_rows[0];
                    for (&d, v) in src {
                        if d + s > hi {
                            continue;
                        }
                        if neg {
                            row_sub(dst, d + s, v);
                        } else {
                            row_add(dst, d + s, v);
                        }
                    }
                }
            }
        }
    }

    /// In place division by `(1 - c z^t)` with `t > 0`, expanded as a power
    /// series in `z` and certified up to `zexp <= hi`. Switches to windowed mode.
    pub(crate) fn divide_zero_offset(&mut self, c: i8, t: i64, hi: i64) {
        debug_assert!(t > 0);
        let lo = self.support_lo();
        let hi = hi.min(self.certified_hi());
        for row in &mut self.rows {
            let Some(&start) = row.keys().next() else { continue };
            let mut d = start + t;
            while d <= hi {
                if let Some(prev) = row.get(&(d - t)).cloned() {
                    if c == 1 {
                        row_add(row, d, &prev);
                    } else {
                        row_sub(row, d, &prev);
                    }
                }
                d += 1;
            }
        }
        self.set_windowed(lo, hi);
    }

    /// `z -> z^{-1}` (exact mode only).
    pub fn invert_z(&self) -> Result<Self> {
        self.require_exact("z -> 1/z")?;
        let mut out = self.clone();
        for row in &mut out.rows {
            *row = row.iter().map(|(&d, c)| (-d, c.clone())).collect();
        }
        Ok(out)
    }

    /// `q -> q^m`: q-precision becomes `m * qprec`.
    pub fn subst_q_to_qk(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("substitution q -> q^0".into()));
        }
        let qprec = self.qprec * m;
        let mut rows: Vec<Row<R>> = vec![BTreeMap::new(); qprec];
        for (e, row) in self.rows.iter().enumerate() {
            rows[e * m] = row.clone();
        }
        Ok(ZqSeries {
            qprec,
            rows,
            mode: self.mode,
            bound: self.bound.scaled_q(m as u64),
        })
    }

    /// Certified precision after `e -> e + k d`, clamped at zero.
    fn landing_precision(&self, k: u64) -> usize {
        self.bound
            .landing_floor(self.qprec as i64, k)
            .map_or(0, |l| l.max(0) as usize)
    }

    /// `z -> z q^k`. Terms past the certified floor are dropped; the result
    /// records the reduced precision.
    pub fn shift_z(&self, k: u64) -> Result<Self> {
        self.shift_z_times_q(k, 0)
    }

    /// `q^m * F(z q^k)`; a term landing at a negative exponent is an error.
    pub fn shift_z_times_q(&self, k: u64, m: u64) -> Result<Self> {
        self.require_exact("z -> z q^k")?;
        let new_prec = self
            .bound
            .landing_floor(self.qprec as i64, k)
            .map_or(0, |l| (l + m as i64).max(0) as usize);
        let mut rows: Vec<Row<R>> = vec![BTreeMap::new(); new_prec];
        for (d, e, c) in self.terms() {
            let e2 = e as i64 + k as i64 * d + m as i64;
            if e2 < 0 {
                return Err(Error::NegativeExponent(e2));
            }
            if (e2 as usize) < new_prec {
                row_add(&mut rows[e2 as usize], d, c);
            }
        }
        Ok(ZqSeries {
            qprec: new_prec,
            rows,
            mode: Mode::Exact,
            bound: self.bound.after_shift(k),
        })
    }

    fn monomial_terms(&self, r: u64) -> Result<(usize, Vec<(i64, R)>)> {
        self.require_exact("z -> q^r")?;
        let prec = self.landing_precision(r);
        let mut acc: BTreeMap<i64, R> = BTreeMap::new();
        for (d, e, c) in self.terms() {
            let e2 = e as i64 + r as i64 * d;
            if e2 < prec as i64 {
                row_add(&mut acc, e2, c);
            }
        }
        Ok((prec, acc.into_iter().collect()))
    }

    /// First coordinate in the shared certified region where the two series
    /// differ (scan order: q-exponent, then z-exponent).
    pub fn first_mismatch(&self, other: &Self) -> Option<Mismatch<R>> {
        let qprec = self.qprec.min(other.qprec);
        let hi = self.certified_hi().min(other.certified_hi());
        for e in 0..qprec {
            let (a, b) = (&self.rows[e], &other.rows[e]);
            let keys: std::collections::BTreeSet<i64> =
                a.keys().chain(b.keys()).copied().filter(|&d| d <= hi).collect();
            for d in keys {
                let (x, y) = (a.get(&d), b.get(&d));
                if x != y {
                    return Some(Mismatch { zexp: d, qexp: e, left: x.cloned(), right: y.cloned() });
                }
            }
        }
        None
    }
}

impl<R: Coeff> fmt::Debug for ZqSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZqSeries[{:?}, qprec={}]{{", self.mode, self.qprec)?;
        for (d, e, c) in self.terms() {
            write!(f, " ({d},{e}):{c}")?;
        }
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn shift_of_constant_is_identity() {
        let one = ZqSeries::one(10);
        let shifted = one.shift_z(1).unwrap();
        assert_eq!(shifted.qprec(), 10);
        assert_eq!(shifted, one);
    }

    #[test]
    fn monomial_specialization_of_constant() {
        let s = crate::series::euler_e(12).unwrap();
        let z = ZqSeries::from_qseries(&s);
        assert_eq!(z.specialize_monomial(3).unwrap(), s);
        assert_eq!(z.specialize_one().unwrap(), s);
    }

    #[test]
    fn extract_constant() {
        assert_eq!(ZqSeries::one(5).extract_z_coeff(0).unwrap(), QSeries::one(5));
    }

    #[test]
    fn windowed_division_is_geometric() {
        let mut s = ZqSeries::one(3);
        s.divide_zero_offset(1, 2, 7);
        assert_eq!(s.mode(), Mode::Windowed { lo: 0, hi: 7 });
        let got: Vec<_> = s.terms().map(|(d, e, c)| (d, e, c.clone())).collect();
        assert_eq!(got, vec![(0, 0, big(1)), (2, 0, big(1)), (4, 0, big(1)), (6, 0, big(1))]);
        assert!(s.specialize_one().is_err());
        assert!(s.extract_z_coeff(8).is_err());
    }

    #[test]
    fn windowed_product_rule() {
        let mut w = ZqSeries::one(4);
        w.divide_zero_offset(1, 1, 10);
        let exact = ZqSeries::from_terms(4, ZBound::Unknown, vec![(-3, 1, big(1)), (2, 0, big(1))]);
        let p = w.mul(&exact);
        assert_eq!(p.mode(), Mode::Windowed { lo: -3, hi: 7 });
        assert_eq!(w.mul(&w).mode(), Mode::Windowed { lo: 0, hi: 10 });
    }

    #[test]
    fn landing_floor_quadratic() {
        // d^2 <= 2e, k = 1, P = 10: t >= 1 and t^2 >= 20 -> t = 5.
        let b = ZBound::Quadratic { num: 2, den: 1, beta: 0 };
        assert_eq!(b.landing_floor(10, 1), Some(5));
        let lin = ZBound::Linear { num: 1, den: 1, c: 0 };
        assert_eq!(lin.landing_floor(10, 1), None);
        let lin = ZBound::Linear { num: 1, den: 3, c: 1 };
        assert_eq!(lin.landing_floor(10, 1), Some(6));
    }

    #[test]
    fn root_of_unity_specialization() {
        // 1 + z at z = -1 is zero.
        let s = ZqSeries::from_terms(3, ZBound::constant_z(1), vec![(0, 0, big(1)), (1, 0, big(1))]);
        assert!(s.specialize_root(2, 1).unwrap().is_zero());
        let r3 = s.specialize_root(3, 1).unwrap();
        assert_eq!(r3.coeff(0), CycInt::one(3).try_add(&CycInt::zeta_pow(3, 1)).unwrap());
    }

    #[test]
    fn nonneg_scan_reports_first_negative() {
        let s = ZqSeries::from_terms(
            4,
            ZBound::Unknown,
            vec![(0, 0, big(1)), (1, 1, big(2)), (-1, 2, big(-1)), (0, 2, big(-4))],
        );
        assert_eq!(
            s.nonneg_scan(None).unwrap(),
            ScanVerdict::Negative { zexp: -1, qexp: 2, value: big(-1) }
        );
        assert_eq!(s.nonneg_scan(Some(0)).unwrap(), ScanVerdict::Negative { zexp: 0, qexp: 2, value: big(-4) });
    }
}
