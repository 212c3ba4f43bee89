//! Entries for the product inequalities: q-binomial positivity, the crank
//! generating function, the generalized quintuple product identity and the
//! eta quotients built from `C_t`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::catalog::{eta, inner_prec};
use super::{grid1, grid2, grid_n, none, CatalogEntry, Ctx, Kind, Probe, Step, Stop, Strategy};
use crate::bivar::{ZBound, ZqSeries};
use crate::bracket::BracketSpec;
use crate::error::Error;
use crate::lattice::{theta_c, theta_c_bound};
use crate::partitions::{box_partitions, crank_counts, crank_counts_dp, crank_counts_mod};
use crate::products::{crank_gen, d_series, gaussian_poly, gqpi_side, gqpib_left_spec, gqpib_right_term_spec, gqpib_side, rhs_c, Side};
use crate::series::QSeries;

type B = BracketSpec;

fn bad(msg: String) -> Stop {
    Stop::Err(Error::InvalidParameter(msg))
}

fn sign(c: &Ctx, name: &str) -> Step<i8> {
    match c.get(name)? {
        1 => Ok(1),
        -1 => Ok(-1),
        v => Err(bad(format!("{name} = {v} must be 1 or -1"))),
    }
}

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// `(q^j; q^m)_n` style finite product with no z.
fn qpoch(j: i64, m: u64, n: u64) -> B {
    B::poch_finite(1, 0, j, m, n)
}

fn sum_exact(specs: impl IntoIterator<Item = B>, qprec: usize) -> crate::Result<ZqSeries> {
    let mut acc = ZqSeries::zero(qprec);
    for s in specs {
        acc = acc.add(&s.expand(qprec, None)?);
    }
    Ok(acc)
}

fn sum_windowed(specs: impl IntoIterator<Item = B>, qprec: usize, w: i64) -> crate::Result<ZqSeries> {
    let mut acc: Option<ZqSeries> = None;
    for s in specs {
        let t = s.expand(qprec, Some(w))?;
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    Ok(acc.unwrap_or_else(|| ZqSeries::zero(qprec)))
}

/// `C_t(z,q) = E(q)E(q^t)^{t-2}[z^t;q^t]/[z;q]`
fn c_product(t: u64) -> B {
    B::euler(1)
        .mul(&B::euler(t).pow(t as i64 - 2))
        .mul(&B::bracket(1, t as i64, 0, t))
        .div(&B::bracket(1, 1, 0, 1))
}

/// `C_n(q^r; q^m)` from the lattice sum, certified to `target`.
fn c_lattice_at(n: u64, r: u64, m: u64, target: usize) -> Step<QSeries> {
    let bound = theta_c_bound(n as usize).scaled_q(m);
    let need = inner_prec(bound, target, r)?;
    let inner = need.div_ceil(m as usize);
    let s = theta_c(n as usize, inner)?.subst_q_to_qk(m as usize)?;
    Ok(s.specialize_monomial(r)?.truncate(target))
}

pub(crate) fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "atq",
            labels: &["atineq", "atq"],
            anchor: "\\frac{ (at;q)_\\infty}{(a;q)_\\infty (t;q)_\\infty}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["alpha", "beta", "s1", "s2"],
            grid: || grid_n(&["alpha", "beta", "s1", "s2"], &[&[1, 2, 3], &[1, 2, 3], &[1, -1], &[1, -1]]),
            default_order: 40,
            default_window: None,
            check: check_atq,
        },
        CatalogEntry {
            id: "coratq1",
            labels: &["atcor", "coratq1"],
            anchor: "\\frac{ (1 - q^{Mn+a+b}) }{ (1-q^{Mn+a}) (1-q^{Mn+b}) } \\succeq 0",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["a", "b", "M"],
            grid: || grid_n(&["a", "b", "M"], &[&[1, 2, 3], &[1, 2, 3], &[1, 2, 3]]),
            default_order: 60,
            default_window: None,
            check: check_coratq1,
        },
        CatalogEntry {
            id: "gauss",
            labels: &["gpdef"],
            anchor: "\\frac{ (q)_{m+n}}{(q)_n (q)_m}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["n", "m"],
            grid: || grid2("n", 0..=5, "m", 0..=5),
            default_order: 1,
            default_window: None,
            check: check_gauss,
        },
        CatalogEntry {
            id: "atqfin",
            labels: &["atfinite", "atqfin"],
            anchor: "\\frac{ (z_1 z_2;q)_L }{ (z_1;q)_L (z_2;q)_L }",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["L", "alpha", "beta", "s1", "s2"],
            grid: || {
                grid_n(
                    &["L", "alpha", "beta", "s1", "s2"],
                    &[&[0, 1, 2, 4], &[1, 2, 3], &[1, 2, 3], &[1, -1], &[1, -1]],
                )
            },
            default_order: 40,
            default_window: None,
            check: check_atqfin,
        },
        CatalogEntry {
            id: "zq",
            labels: &["zq"],
            anchor: "\\frac{z^n}{(q)_n (z^{-1}q^{n+1};q)_\\infty} \\succeq 0",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &[],
            grid: none,
            default_order: 30,
            default_window: Some(12),
            check: check_zq,
        },
        CatalogEntry {
            id: "crankgen",
            labels: &["crankgen"],
            anchor: "\\prod_{n=1}^\\infty \\frac{(1 - q^n)}{(1-zq^n)(1-z^{-1}q^n)}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &[],
            grid: none,
            default_order: 30,
            default_window: None,
            check: check_crankgen,
        },
        CatalogEntry {
            id: "crankgen-nonneg",
            labels: &[],
            anchor: "nonnegative except for the coefficient of $z^0q^1$",
            kind: Kind::Theorem,
            strategy: Strategy::NonnegExpectException,
            param_names: &[],
            grid: none,
            default_order: 40,
            default_window: None,
            check: check_crankgen_nonneg,
        },
        CatalogEntry {
            id: "aci",
            labels: &["aci"],
            anchor: "(1-z^m) \\frac{E(q)}{[z;q]_\\infty}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["m"],
            grid: || grid1("m", 2..=6),
            default_order: 30,
            default_window: None,
            check: check_aci,
        },
        CatalogEntry {
            id: "quin",
            labels: &["quin"],
            anchor: "\\frac{[z^2;q]_\\infty E(q)}{[z,z^3;q]_\\infty}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &[],
            grid: none,
            default_order: 40,
            default_window: Some(12),
            check: check_quin,
        },
        CatalogEntry {
            id: "gqpi",
            labels: &["GQPI", "gqpi"],
            anchor: "Generalization of the Quintuple Product Identity",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 1..=5),
            default_order: 50,
            default_window: Some(12),
            check: check_gqpi,
        },
        CatalogEntry {
            id: "gqpib",
            labels: &["gqpib"],
            anchor: "[z^{a+1}q,z^{a+1}q^2, \\dots, z^{a+1}q^a;q^{a+1}]_\\infty",
            kind: Kind::Theorem,
            strategy: Strategy::EqualCrossMultiplied,
            param_names: &["a"],
            grid: || grid1("a", 1..=5),
            default_order: 50,
            default_window: None,
            check: check_gqpib,
        },
        CatalogEntry {
            id: "jactrans",
            labels: &["jactrans"],
            anchor: "[zq^k;q]_\\infty = (-1)^k z^{-k} q^{-\\binom{k}{2}} [z;q]_\\infty",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["k"],
            grid: || grid1("k", -3..=6),
            default_order: 40,
            default_window: None,
            check: check_jactrans,
        },
        CatalogEntry {
            id: "gqpi-fe",
            labels: &["Phitrans2"],
            anchor: "\\Phi_{a}(zq;q) = (-1)^{a-1}q^{-\\binom{a}{2}} z^{1-a^2} \\Phi_{a}(z;q)",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 1..=5),
            default_order: 40,
            default_window: None,
            check: check_gqpi_fe,
        },
        CatalogEntry {
            id: "ekin1",
            labels: &["EkinId1"],
            anchor: "\\frac{1}{[z^2;q^2]_\\infty} \\sum_{n=-\\infty}^\\infty z^n q^{n(n-1)/2}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &[],
            grid: none,
            default_order: 40,
            default_window: Some(12),
            check: check_ekin1,
        },
        CatalogEntry {
            id: "ekin2",
            labels: &["EkinId2"],
            anchor: "\\frac{E(q)E(q^2)}{[z;q]_\\infty}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &[],
            grid: none,
            default_order: 40,
            default_window: Some(12),
            check: check_ekin2,
        },
        CatalogEntry {
            id: "ekin-iter",
            labels: &["EkinIt"],
            anchor: "\\frac{E(q)E(q^2)E(q^4)E(q^8)\\cdots}{[z;q]_\\infty} \\succeq 0",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["depth"],
            grid: || grid1("depth", 3..=5),
            default_order: 32,
            default_window: Some(12),
            check: check_ekin_iter,
        },
        CatalogEntry {
            id: "corgqpi",
            labels: &["cor:gqpi", "corgqpi1", "gqpic"],
            anchor: "(1-z^{k(a+1)}) E(q) E(q^{a+1})^{\\lfloor (a+1)/2\\rfloor}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["a", "k"],
            grid: || grid2("a", 2..=5, "k", 2..=3),
            default_order: 30,
            default_window: None,
            check: check_corgqpi,
        },
        CatalogEntry {
            id: "crank5",
            labels: &["crank5a", "crank5b", "crank5c"],
            anchor: "M(0,5,5n) >  M(1,5,5n)",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &[],
            grid: none,
            default_order: 20,
            default_window: None,
            check: check_crank5,
        },
        CatalogEntry {
            id: "crank11",
            labels: &["crank11a", "crank11b"],
            anchor: "M(2,11,11n+2) >   M(1,11,11n+2)",
            kind: Kind::Theorem,
            strategy: Strategy::NonnegExpectException,
            param_names: &[],
            grid: none,
            default_order: 11,
            default_window: None,
            check: check_crank11,
        },
        CatalogEntry {
            id: "res1",
            labels: &["res", "res1", "res2d"],
            anchor: "\\frac{E(q^2)[z^4;q^2]_\\infty}{[z^2;q^2]_\\infty [qz^3;q^2]_\\infty}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &[],
            grid: none,
            default_order: 40,
            default_window: None,
            check: check_res1,
        },
        CatalogEntry {
            id: "res2",
            labels: &["res2", "res2b", "res2c", "res2e"],
            anchor: "\\frac{E(q^3) (z^2;q^3)_\\infty}{ (q^3 z^{-1};q^3)_\\infty (z;q)_\\infty}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &[],
            grid: none,
            default_order: 40,
            default_window: None,
            check: check_res2,
        },
        CatalogEntry {
            id: "eta1a",
            labels: &["prop:eta1", "eta1a", "Ctzq", "Bev", "eta1aid"],
            anchor: "\\frac{E(q^{mn})^{n(m-1)/2 -m} E(q^m)^{(m+1)/2} E(q^n)}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["m", "n"],
            grid: || grid2("m", [1, 3, 5, 7], "n", 1..=4),
            default_order: 40,
            default_window: None,
            check: check_eta1a,
        },
        CatalogEntry {
            id: "eta1b",
            labels: &["eta1b", "Bodd", "eta1bid"],
            anchor: "\\frac{E(q^{mn})^{(n-2)(m/2-1)} E(q^m)^{m/2-1} E(q^n)E(q^{m/2})}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["m", "n"],
            grid: || grid2("m", [2, 4, 6, 8], "n", 1..=4),
            default_order: 40,
            default_window: None,
            check: check_eta1b,
        },
        CatalogEntry {
            id: "eta2",
            labels: &["cor:eta1", "eta2", "eta2id1", "eta2id2", "eta2alt"],
            anchor: "\\frac{E(q^{mn})^{mn-m-n} E(q^m) E(q^n)}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["m", "n"],
            grid: || grid2("m", 1..=5, "n", 1..=5),
            default_order: 40,
            default_window: None,
            check: check_eta2,
        },
        CatalogEntry {
            id: "vn",
            labels: &["Vn"],
            anchor: "V_n(q) :=",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["n"],
            grid: || grid1("n", 1..=6),
            default_order: 60,
            default_window: None,
            check: check_vn,
        },
    ]
}

fn check_atq(c: &Ctx, p: &mut Probe) -> Step {
    let al = c.get_u("alpha", 1)? as i64;
    let be = c.get_u("beta", 1)? as i64;
    let (s1, s2) = (sign(c, "s1")?, sign(c, "s2")?);
    let lhs = B::poch(s1 * s2, 1, al + be, 1)
        .div(&B::poch(s1, 1, al, 1))
        .div(&B::poch(s2, 0, be, 1))
        .expand(c.qprec, None)?;
    let terms = (0..).take_while(|n| (be * n) < c.qprec as i64).map(|n| {
        let t = if n % 2 == 1 { s2 } else { 1 };
        B::monomial(t, 0, be * n)
            .div(&B::poch(s1, 1, al + n, 1))
            .div(&qpoch(1, 1, n as u64))
    });
    let rhs = sum_exact(terms, c.qprec)?;
    p.eq_zq("product vs sum", &lhs, &rhs)?;
    if s1 == 1 && s2 == 1 {
        p.nonneg_zq("product", &lhs, &[])?;
    } else {
        p.note("signed specialization: equality only");
    }
    Ok(())
}

fn check_coratq1(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 1)? as i64;
    let b = c.get_u("b", 1)? as i64;
    let m = c.get_u("M", 1)?;
    let lhs = B::poch(1, 0, a + b, m)
        .div(&B::poch(1, 0, a, m))
        .div(&B::poch(1, 0, b, m))
        .expand_q(c.qprec)?;
    p.nonneg_q("product", &lhs)?;
    let mut rhs = QSeries::zero(c.qprec);
    let mut n = 0i64;
    while b * n < c.qprec as i64 {
        let t = B::monomial(1, 0, b * n)
            .div(&B::poch(1, 0, a + m as i64 * n, m))
            .div(&qpoch(m as i64, m, n as u64))
            .expand_q(c.qprec)?;
        rhs = rhs.add(&t);
        n += 1;
    }
    p.eq_q("product vs q-binomial sum", &lhs, &rhs)
}

fn check_gauss(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 0)?;
    let m = c.get_u("m", 0)?;
    let deg = (n * m) as usize;
    let prec = c.qprec.max(deg + 4);
    let poly = gaussian_poly(n, m);
    let boxes = QSeries::from_coeffs((0..=deg as u64).map(|k| BigInt::from(box_partitions(m, n, k))).collect());
    p.eq_q("Gaussian polynomial vs partitions in a box", &poly, &boxes)?;
    let full = qpoch(1, 1, m + n).div(&qpoch(1, 1, n)).div(&qpoch(1, 1, m)).expand_q(prec)?;
    p.eq_q("(q)_{m+n}/((q)_n (q)_m) vs polynomial", &full.truncate(deg + 1), &poly)?;
    let tail = full.coeffs().iter().enumerate().skip(deg + 1).find(|(_, v)| !v.is_zero());
    p.holds("degree of the Gaussian polynomial", tail.is_none(), || {
        let (e, v) = tail.unwrap();
        (format!("q^{e}: {v}"), "0".into())
    })?;
    p.eq_q("symmetry in n and m", &poly, &gaussian_poly(m, n))?;
    p.nonneg_q("Gaussian polynomial", &poly)
}

fn check_atqfin(c: &Ctx, p: &mut Probe) -> Step {
    let l = c.get_u("L", 0)?;
    let al = c.get_u("alpha", 1)? as i64;
    let be = c.get_u("beta", 1)? as i64;
    let (s1, s2) = (sign(c, "s1")?, sign(c, "s2")?);
    let lhs = B::poch_finite(s1 * s2, 1, al + be, 1, l)
        .div(&B::poch_finite(s1, 1, al, 1, l))
        .div(&B::poch_finite(s2, 0, be, 1, l))
        .expand(c.qprec, None)?;
    let terms = (0..=l).map(|j| {
        let ji = j as i64;
        let lead = if j % 2 == 1 { s1 } else { 1 };
        B::monomial(lead, ji, al * ji)
            .mul(&qpoch(1, 1, l))
            .div(&qpoch(1, 1, j))
            .div(&qpoch(1, 1, l - j))
            .div(&B::poch_finite(s1, 1, al + l as i64 - ji, 1, j))
            .div(&B::poch_finite(s2, 0, be + ji, 1, l - j))
    });
    let rhs = sum_exact(terms, c.qprec)?;
    p.eq_zq("finite product vs sum", &lhs, &rhs)?;
    for j in 0..=l {
        let g = gaussian_poly(l - j, j);
        let spec = qpoch(1, 1, l).div(&qpoch(1, 1, j)).div(&qpoch(1, 1, l - j));
        let e = spec.expand_q(g.precision())?;
        p.eq_q(&format!("[{l};{j}] as a product"), &e, &g)?;
    }
    if s1 == 1 && s2 == 1 {
        p.nonneg_zq("finite product", &lhs, &[])?;
    }
    Ok(())
}

fn check_zq(c: &Ctx, p: &mut Probe) -> Step {
    let w = c.window();
    let lhs = B::euler(1).div(&B::bracket(1, 1, 0, 1)).expand(c.qprec, Some(w))?;
    // the n-th summand only reaches z^d, d <= w, at q-exponents >= n - w
    let top = w.max(0) as u64 + c.qprec as u64;
    let terms = (0..=top).map(|n| B::monomial(1, n as i64, 0).div(&qpoch(1, 1, n)).div(&B::poch(1, -1, n as i64 + 1, 1)));
    let mut rhs = sum_exact(terms, c.qprec)?;
    rhs.set_windowed(-(c.qprec as i64), w);
    p.eq_zq("E(q)/[z;q] vs sum", &lhs, &rhs)?;
    p.nonneg_zq("E(q)/[z;q]", &lhs, &[])
}

fn crank_oracle(qprec: usize) -> ZqSeries {
    let mut terms = vec![(0, 0, BigInt::from(1))];
    if qprec > 1 {
        terms.extend([(-1, 1, BigInt::from(1)), (0, 1, BigInt::from(-1)), (1, 1, BigInt::from(1))]);
    }
    for n in 2..qprec as u64 {
        let row: BTreeMap<i64, BigInt> = if n <= 30 {
            crank_counts(n).into_iter().map(|(k, v)| (k, BigInt::from(v))).collect()
        } else {
            crank_counts_dp(n)
        };
        terms.extend(row.into_iter().map(|(m, v)| (m, n as usize, v)));
    }
    ZqSeries::from_terms(qprec, ZBound::Linear { num: 1, den: 1, c: 0 }, terms)
}

fn check_crankgen(c: &Ctx, p: &mut Probe) -> Step {
    let s = crank_gen(c.qprec)?;
    let alt = B::euler(1)
        .div(&B::poch(1, 1, 1, 1))
        .div(&B::poch(1, -1, 1, 1))
        .expand(c.qprec, None)?;
    p.eq_zq("(1-z)E(q)/[z;q] vs infinite product", &s, &alt)?;
    p.eq_zq("product vs crank counts", &s, &crank_oracle(c.qprec))
}

fn check_crankgen_nonneg(c: &Ctx, p: &mut Probe) -> Step {
    p.nonneg_zq("crank generating function", &crank_gen(c.qprec)?, &[(0, 1)])
}

fn check_aci(c: &Ctx, p: &mut Probe) -> Step {
    let m = c.get_u("m", 2)?;
    let lhs = B::poch_finite(1, m as i64, 0, 1, 1)
        .mul(&B::euler(1))
        .div(&B::bracket(1, 1, 0, 1))
        .expand(c.qprec, None)?;
    let geo = ZqSeries::from_terms(c.qprec, ZBound::constant_z(m), (0..m as i64).map(|i| (i, 0, BigInt::from(1))));
    let rhs = geo.mul(&crank_gen(c.qprec)?);
    p.eq_zq("(1-z^m)E(q)/[z;q] vs geometric sum times crank product", &lhs, &rhs)?;
    if c.qprec > 1 {
        let mut want: BTreeMap<i64, BigInt> = BTreeMap::new();
        want.insert(-1, BigInt::from(1));
        for j in 1..=m as i64 - 2 {
            want.insert(j, BigInt::from(1));
        }
        want.insert(m as i64, BigInt::from(1));
        let got = &rhs.rows()[1];
        p.holds("coefficient of q^1", *got == want, || (format!("{got:?}"), format!("{want:?}")))?;
    }
    p.nonneg_zq("(1-z^m)E(q)/[z;q]", &lhs, &[])
}

fn quin_sides(qprec: usize, w: i64) -> crate::Result<(ZqSeries, ZqSeries)> {
    let lhs = B::bracket(1, 2, 0, 1)
        .mul(&B::euler(1))
        .div(&B::bracket(1, 1, 0, 1))
        .div(&B::bracket(1, 3, 0, 1))
        .expand(qprec, Some(w))?;
    let t0 = B::euler(3).div(&B::bracket(1, 3, 0, 3)).div(&B::bracket(1, 3, 2, 3));
    let t1 = B::monomial(1, 1, 0).mul(&B::euler(3)).div(&B::bracket(1, 3, 0, 3)).div(&B::bracket(1, 3, 1, 3));
    Ok((lhs, sum_windowed([t0, t1], qprec, w)?))
}

fn check_quin(c: &Ctx, p: &mut Probe) -> Step {
    let w = c.window();
    let (lhs, rhs) = quin_sides(c.qprec, w)?;
    p.eq_zq("quintuple product", &lhs, &rhs)?;
    let e = eta(&[(1, 1)], c.qprec)?;
    p.eq_zq("left side vs E(q) times a=2 case", &lhs, &gqpi_side(2, Side::Left, c.qprec, w)?.mul_qseries(&e))?;
    p.eq_zq("right side vs E(q) times a=2 case", &rhs, &gqpi_side(2, Side::Right, c.qprec, w)?.mul_qseries(&e))
}

fn check_gqpi(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 1)?;
    let w = c.window();
    let lhs = gqpi_side(a, Side::Left, c.qprec, w)?;
    let rhs = gqpi_side(a, Side::Right, c.qprec, w)?;
    p.eq_zq("quotient vs sum", &lhs, &rhs)
}

fn check_gqpib(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 1)?;
    let lhs = gqpib_side(a, Side::Left, c.qprec)?;
    let rhs = gqpib_side(a, Side::Right, c.qprec)?;
    p.eq_zq("cross-multiplied sides", &lhs, &rhs)
}

fn check_jactrans(c: &Ctx, p: &mut Probe) -> Step {
    let k = c.get("k")?;
    let lhs = B::monomial(1, 0, binom2(k)).mul(&B::bracket(1, 1, k, 1)).expand(c.qprec, None)?;
    let s = if k.rem_euclid(2) == 1 { -1 } else { 1 };
    let rhs = B::monomial(s, -k, 0).mul(&B::bracket(1, 1, 0, 1)).expand(c.qprec, None)?;
    p.eq_zq("q^C(k,2) [zq^k;q] vs (-1)^k z^-k [z;q]", &lhs, &rhs)
}

fn check_gqpi_fe(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 1)?;
    let ai = a as i64;
    let s = if (a - 1) % 2 == 1 { -1 } else { 1 };
    let lead = B::monomial(1, 0, binom2(ai));
    let factor = B::monomial(s, 1 - ai * ai, 0);
    let left = gqpib_left_spec(a);
    p.eq_zq(
        "left side",
        &lead.mul(&left.shift_z(1)).expand(c.qprec, None)?,
        &factor.mul(&left).expand(c.qprec, None)?,
    )?;
    let terms: Vec<B> = (0..a).map(|j| gqpib_right_term_spec(a, j)).collect();
    let shifted = sum_exact(terms.iter().map(|t| lead.mul(&t.shift_z(1))), c.qprec)?;
    let scaled = sum_exact(terms.iter().map(|t| factor.mul(t)), c.qprec)?;
    p.eq_zq("right side", &shifted, &scaled)
}

/// `sum_n z^n q^{n(n-1)/2}`
fn ekin_theta(qprec: usize) -> ZqSeries {
    let lim = qprec as i64 + 1;
    let terms = (-lim..=lim)
        .map(|n| (n, n * (n - 1) / 2))
        .filter(|&(_, e)| (e as usize) < qprec)
        .map(|(n, e)| (n, e as usize, BigInt::from(1)));
    ZqSeries::from_terms(qprec, ZBound::Linear { num: 1, den: 1, c: 1 }, terms)
}

fn isqrt_ceil(x: usize) -> i64 {
    let mut r = 0i64;
    while (r * r) < x as i64 {
        r += 1;
    }
    r
}

fn check_ekin1(c: &Ctx, p: &mut Probe) -> Step {
    let theta = ekin_theta(c.qprec);
    let lhs = B::euler(1)
        .mul(&B::bracket(1, 2, 0, 2))
        .div(&B::bracket(1, 1, 0, 1))
        .expand(c.qprec, None)?;
    p.eq_zq("E(q)[z^2;q^2]/[z;q] vs theta sum", &lhs, &theta)?;
    let w = c.window();
    let quot = B::euler(1).div(&B::bracket(1, 1, 0, 1)).expand(c.qprec, Some(w))?;
    let wide = w + isqrt_ceil(2 * c.qprec) + 2;
    let rhs = B::bracket(1, 2, 0, 2).inv().expand(c.qprec, Some(wide))?.mul(&theta);
    p.eq_zq("E(q)/[z;q] vs theta sum over [z^2;q^2]", &quot, &rhs)
}

fn check_ekin2(c: &Ctx, p: &mut Probe) -> Step {
    let mut terms = Vec::new();
    let lim = c.qprec as i64 + 2;
    for n1 in -lim..=lim {
        let e1 = n1 * (n1 - 1) / 2;
        if e1 as usize >= c.qprec {
            continue;
        }
        for n2 in -lim..=lim {
            let e = e1 + n2 * (n2 - 1);
            if (e as usize) < c.qprec {
                terms.push((n1 + 2 * n2, e as usize, BigInt::from(1)));
            }
        }
    }
    let sum = ZqSeries::from_terms(c.qprec, ZBound::Linear { num: 1, den: 1, c: 3 }, terms);
    let lhs = B::euler(1)
        .mul(&B::euler(2))
        .mul(&B::bracket(1, 4, 0, 4))
        .div(&B::bracket(1, 1, 0, 1))
        .expand(c.qprec, None)?;
    p.eq_zq("E(q)E(q^2)[z^4;q^4]/[z;q] vs double sum", &lhs, &sum)?;
    let quot = B::euler(1).mul(&B::euler(2)).div(&B::bracket(1, 1, 0, 1)).expand(c.qprec, Some(c.window()))?;
    p.nonneg_zq("E(q)E(q^2)/[z;q]", &quot, &[])
}

fn check_ekin_iter(c: &Ctx, p: &mut Probe) -> Step {
    let d = c.get_u("depth", 1)?;
    if d > 20 {
        return Err(bad(format!("depth = {d} is too large")));
    }
    // E(q^{2^d}) and later factors are 1 below q^{2^d}
    let prec = c.qprec.min(1usize << d);
    let mut spec = B::one();
    for i in 0..d {
        spec = spec.mul(&B::euler(1 << i));
    }
    let s = spec.div(&B::bracket(1, 1, 0, 1)).expand(prec, Some(c.window()))?;
    if prec < c.qprec {
        p.note(format!("depth {d} certifies q^e for e < {prec}"));
    }
    p.nonneg_zq("E(q)E(q^2)E(q^4).../[z;q]", &s, &[])
}

fn corgqpi_spec(a: u64, k: u64) -> B {
    let ai = a as i64;
    B::poch_finite(1, (k * (a + 1)) as i64, 0, 1, 1)
        .mul(&B::euler(1))
        .mul(&B::euler(a + 1).pow(((a + 1) / 2) as i64))
        .mul(&B::bracket(1, ai, 0, 1))
        .div(&B::bracket(1, 1, 0, 1))
        .div(&B::bracket(1, ai + 1, 0, 1))
}

/// `prod_{j=1..top, j not in {a-i, i+1}} E(q^{a+1})/[q^j;q^{a+1}]`
fn a_product(a: u64, i: u64, top: u64) -> B {
    let mut s = B::one();
    for j in 1..=top {
        if j != a - i && j != i + 1 {
            s = s.mul(&B::euler(a + 1)).div(&B::bracket(1, 0, j as i64, a + 1));
        }
    }
    s
}

fn check_corgqpi(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let k = c.get_u("k", 2)?;
    let m = a + 1;
    let lhs = corgqpi_spec(a, k).expand(c.qprec, None)?;
    p.nonneg_zq("corollary product", &lhs, &[])?;
    let mut sum = ZqSeries::zero(c.qprec);
    for i in 0..a {
        let a_spec = B::euler(m).pow((m / 2) as i64).mul(&B::bracket(1, 0, (a - i) as i64, m)).div(&B::euler(1));
        let a_ser = a_spec.expand_q(c.qprec)?;
        p.nonneg_q(&format!("A_{i}"), &a_ser)?;
        let closed = if a % 2 == 0 {
            a_product(a, i, a / 2)
        } else if i != (a - 1) / 2 {
            B::euler(m).pow(2).div(&B::euler(m / 2)).mul(&a_product(a, i, (a - 1) / 2))
        } else {
            B::euler(m / 2)
                .pow((m / 2) as i64)
                .div(&B::euler(1))
                .mul(&B::euler(m).div(&B::euler(m / 2)).pow((a as i64 - 3) / 2))
        };
        p.eq_q(&format!("A_{i} closed form"), &a_ser, &closed.expand_q(c.qprec)?)?;
        let b_ser = B::poch_finite(1, (k * m) as i64, 0, 1, 1)
            .mul(&B::euler(m).pow(2))
            .div(&B::bracket(1, m as i64, 0, m))
            .div(&B::bracket(1, m as i64, (a - i) as i64, m))
            .expand(c.qprec, None)?;
        p.nonneg_zq(&format!("B_{i}"), &b_ser, &[])?;
        sum = sum.add(&b_ser.mul_qseries(&a_ser).mul_monomial(i as i64, 0));
    }
    p.eq_zq("product vs sum of z^i A_i B_i", &lhs, &sum)
}

/// `n -> M(r1, t, t n + s) - M(r2, t, t n + s)` from the counting oracle.
fn crank_diff(t: u64, s: u64, r1: usize, r2: usize, qprec: usize) -> QSeries {
    QSeries::from_coeffs(
        (0..qprec as u64)
            .map(|n| {
                let v = crank_counts_mod(t, t * n + s);
                &v[r1] - &v[r2]
            })
            .collect(),
    )
}

fn check_crank5(c: &Ctx, p: &mut Probe) -> Step {
    let prod = B::euler(5).mul(&B::bracket(1, 0, 2, 5)).div(&B::bracket(1, 0, 1, 5).pow(2));
    let s = prod.expand_q(c.qprec)?;
    p.eq_q("M(0,5,5n)-M(1,5,5n) vs product", &crank_diff(5, 0, 0, 1, c.qprec), &s)?;
    let bound = qpoch(8, 1, 1).mul(&B::euler(20).pow(2)).mul(&prod);
    let bound_ser = bound.expand_q(c.qprec)?;
    p.nonneg_q("(1-q^8)E(q^5)E(q^20)^2[q^2;q^5]/[q;q^5]^2", &bound_ser)?;
    let spec = corgqpi_spec(3, 2).specialize_monomial(1, 5).expand_q(c.qprec)?;
    p.eq_q("corollary at a=3, k=2, z=q, q->q^5", &bound_ser, &spec)?;
    for n in 0..=8u64 {
        let counts = crank_counts(5 * n);
        let r = |k: i64| counts.iter().filter(|(m, _)| m.rem_euclid(5) == k).map(|(_, v)| *v).sum::<u64>();
        let (m0, m1) = (r(0), r(1));
        p.holds(&format!("M(0,5,{}) > M(1,5,{})", 5 * n, 5 * n), m0 > m1, || (m0.to_string(), m1.to_string()))?;
    }
    p.positive_q("M(0,5,5n)-M(1,5,5n)", &s, 0)
}

fn check_crank11(c: &Ctx, p: &mut Probe) -> Step {
    let prod = B::euler(11)
        .mul(&B::bracket(1, 0, 3, 11))
        .div(&B::bracket(1, 0, 1, 11))
        .div(&B::bracket(1, 0, 4, 11));
    let s = prod.expand_q(c.qprec)?;
    let oracle = crank_diff(11, 2, 2, 1, c.qprec);
    p.eq_q("M(2,11,11n+2)-M(1,11,11n+2) vs product", &oracle, &s)?;
    let spec = corgqpi_spec(3, 2).specialize_monomial(1, 11).expand_q(c.qprec)?;
    let bound = qpoch(8, 1, 1).mul(&B::euler(44).pow(2)).mul(&prod).expand_q(c.qprec)?;
    p.eq_q("corollary at a=3, k=2, z=q, q->q^11", &spec, &bound)?;
    p.nonneg_q("corollary at a=3, k=2, z=q, q->q^11", &spec)?;
    let fails: Vec<usize> = oracle.coeffs().iter().enumerate().filter(|(_, v)| !v.is_positive()).map(|(n, _)| n).collect();
    let want: Vec<usize> = [3].into_iter().filter(|&n| n < c.qprec).collect();
    p.holds("strict inequality fails exactly at n = 3", fails == want, || {
        (format!("{fails:?}"), format!("{want:?}"))
    })?;
    if let Some(v) = oracle.coeff(3) {
        p.note(format!("M(2,11,35) - M(1,11,35) = {v}"));
    }
    Ok(())
}

fn check_res1(c: &Ctx, p: &mut Probe) -> Step {
    let lhs = B::euler(2)
        .mul(&B::bracket(1, 4, 0, 2))
        .div(&B::bracket(1, 2, 0, 2))
        .div(&B::bracket(1, 3, 1, 2))
        .expand(c.qprec, None)?;
    p.nonneg_zq("E(q^2)[z^4;q^2]/([z^2;q^2][qz^3;q^2])", &lhs, &[])?;
    let t0 = B::euler(6).mul(&B::bracket(1, 6, 2, 6)).div(&B::bracket(1, 3, 1, 2)).expand(c.qprec, None)?;
    let t1 = B::monomial(1, 2, 0)
        .mul(&B::euler(6))
        .mul(&B::bracket(1, -6, 2, 6))
        .div(&B::bracket(1, -3, 1, 2))
        .expand(c.qprec, None)?;
    p.nonneg_zq("first quintuple term", &t0, &[])?;
    p.nonneg_zq("second quintuple term", &t1, &[])?;
    p.eq_zq("quintuple split", &lhs, &t0.add(&t1))
}

fn check_res2(c: &Ctx, p: &mut Probe) -> Step {
    let lhs = B::euler(3)
        .mul(&B::poch(1, 2, 0, 3))
        .div(&B::poch(1, -1, 3, 3))
        .div(&B::poch(1, 1, 0, 1))
        .expand(c.qprec, None)?;
    let f1 = B::poch_finite(1, 2, 0, 1, 1)
        .mul(&B::euler(3))
        .div(&B::bracket(1, 1, 0, 3))
        .expand(c.qprec, None)?;
    let f2 = B::poch(1, 2, 3, 3).div(&B::poch(1, 1, 1, 3)).div(&B::poch(1, 1, 2, 3)).expand(c.qprec, None)?;
    let f3 = B::poch(1, -2, 3, 3).div(&B::poch(1, -1, 1, 3)).div(&B::poch(1, -1, 2, 3)).expand(c.qprec, None)?;
    for (name, f) in [("(1-z^2)E(q^3)/[z;q^3]", &f1), ("(z^2q^3;q^3)/(zq,zq^2;q^3)", &f2), ("(q^3/z^2;q^3)/(q/z,q^2/z;q^3)", &f3)] {
        p.nonneg_zq(name, f, &[])?;
    }
    p.eq_zq("two-factor split", &lhs, &f1.mul(&f2))?;
    p.nonneg_zq("E(q^3)(z^2;q^3)/((q^3/z;q^3)(z;q))", &lhs, &[])?;
    let b = B::euler(3).mul(&B::bracket(1, 2, 0, 3)).div(&B::bracket(1, 1, 0, 1)).expand(c.qprec, None)?;
    p.eq_zq("three-factor split", &b, &f1.mul(&f2).mul(&f3))?;
    p.nonneg_zq("E(q^3)[z^2;q^3]/[z;q]", &b, &[])
}

fn eta1a_quotient(m: u64, n: u64) -> Vec<(u64, i64)> {
    let (mi, ni) = (m as i64, n as i64);
    vec![(m * n, ni * (mi - 1) / 2 - mi), (m, (mi + 1) / 2), (n, 1), (1, -1)]
}

fn eta1b_quotient(m: u64, n: u64) -> Vec<(u64, i64)> {
    let (mi, ni) = (m as i64, n as i64);
    vec![
        (m * n, (ni - 2) * (mi / 2 - 1)),
        (m, mi / 2 - 1),
        (n, 1),
        (m / 2, 1),
        (1, -1),
        (m * n / 2, -1),
    ]
}

/// `prod_r C_n(q^r; q^m)` two ways: product form and lattice sum.
fn c_products(c: &Ctx, p: &mut Probe, n: u64, m: u64, rs: std::ops::RangeInclusive<u64>, target: &QSeries) -> Step {
    let mut by_product = QSeries::one(c.qprec);
    for r in rs.clone() {
        by_product = by_product.mul(&c_product(n).specialize_monomial(r as i64, m).expand_q(c.qprec)?);
    }
    p.eq_q("product of C_n(q^r,q^m) vs quotient", &by_product, target)?;
    if n >= 2 {
        let mut by_lattice = QSeries::one(c.qprec);
        for r in rs {
            by_lattice = by_lattice.mul(&c_lattice_at(n, r, m, c.qprec)?);
        }
        p.eq_q("product of lattice sums C_n(q^r,q^m) vs quotient", &by_lattice, target)?;
    }
    Ok(())
}

fn check_ctzq(c: &Ctx, p: &mut Probe, t: u64) -> Step {
    if t >= 2 {
        p.nonneg_zq(&format!("C_{t}(z,q)"), &rhs_c(t, c.qprec)?, &[])?;
    } else {
        let one = c_product(1).expand(c.qprec, None)?;
        p.eq_zq("C_1(z,q) = 1", &one, &ZqSeries::one(c.qprec))?;
    }
    Ok(())
}

fn check_eta1a(c: &Ctx, p: &mut Probe) -> Step {
    let m = c.get_u("m", 1)?;
    let n = c.get_u("n", 1)?;
    if m % 2 == 0 {
        return Err(bad(format!("m = {m} must be odd")));
    }
    let q = eta(&eta1a_quotient(m, n), c.qprec)?;
    p.nonneg_q("quotient", &q)?;
    check_ctzq(c, p, n)?;
    if m >= 3 {
        let mut bev = QSeries::one(c.qprec);
        for r in 1..=(m - 1) / 2 {
            bev = bev.mul(&B::bracket(1, 0, r as i64, m).expand_q(c.qprec)?);
        }
        p.eq_q("prod [q^r;q^m] vs E(q)/E(q^m)", &bev, &eta(&[(1, 1), (m, -1)], c.qprec)?)?;
        c_products(c, p, n, m, 1..=(m - 1) / 2, &q)?;
    } else {
        p.eq_q("m = 1 quotient", &q, &QSeries::one(c.qprec))?;
    }
    Ok(())
}

fn check_eta1b(c: &Ctx, p: &mut Probe) -> Step {
    let m = c.get_u("m", 2)?;
    let n = c.get_u("n", 1)?;
    if m % 2 == 1 {
        return Err(bad(format!("m = {m} must be even")));
    }
    let q = eta(&eta1b_quotient(m, n), c.qprec)?;
    p.nonneg_q("quotient", &q)?;
    if m >= 4 {
        let mut bodd = QSeries::one(c.qprec);
        for r in 1..m / 2 {
            bodd = bodd.mul(&B::bracket(1, 0, r as i64, m).expand_q(c.qprec)?);
        }
        p.eq_q("prod [q^r;q^m] vs E(q)/E(q^{m/2})", &bodd, &eta(&[(1, 1), (m / 2, -1)], c.qprec)?)?;
        c_products(c, p, n, m, 1..=m / 2 - 1, &q)?;
    }
    Ok(())
}

fn check_eta2(c: &Ctx, p: &mut Probe) -> Step {
    let m = c.get_u("m", 1)?;
    let n = c.get_u("n", 1)?;
    let (mi, ni) = (m as i64, n as i64);
    let target = eta(&[(m * n, mi * ni - mi - ni), (m, 1), (n, 1), (1, -1)], c.qprec)?;
    p.nonneg_q("quotient", &target)?;
    let core = eta(&[(m * n, ni), (m, -1)], c.qprec)?;
    if m % 2 == 1 {
        let mut rhs = eta(&eta1a_quotient(m, n), c.qprec)?;
        for _ in 0..(m - 1) / 2 {
            rhs = rhs.mul(&core);
        }
        p.eq_q("odd m factorization", &target, &rhs)?;
        if m >= 3 {
            let mut alt = QSeries::one(c.qprec);
            for r in 1..=(m - 1) / 2 {
                alt = alt.mul(&d_series(n, r, m, c.qprec)?);
            }
            p.eq_q("prod D_n(q^r,q^m) vs quotient", &alt, &target)?;
        }
    } else {
        let mut rhs = eta(&eta1b_quotient(m, n), c.qprec)?;
        for _ in 0..m / 2 - 1 {
            rhs = rhs.mul(&core);
        }
        let vn = eta(&vn_quotient(n), c.qprec)?;
        rhs = rhs.mul(&vn.subst_q_to_qk((m / 2) as usize)?);
        p.eq_q("even m factorization", &target, &rhs)?;
    }
    Ok(())
}

fn vn_quotient(n: u64) -> Vec<(u64, i64)> {
    vec![(2 * n, n as i64 - 2), (2, 1), (n, 1), (1, -1)]
}

fn check_vn(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 1)?;
    let v = eta(&vn_quotient(n), c.qprec)?;
    p.nonneg_q("V_n", &v)?;
    p.eq_q("V_n vs eta1b quotient at m=2n, n=2", &v, &eta(&eta1b_quotient(2 * n, 2), c.qprec)?)?;
    if n == 1 {
        p.eq_q("V_1 = 1", &v, &QSeries::one(c.qprec))?;
    }
    Ok(())
}
