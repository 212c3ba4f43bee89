//! Finite scans of the open nonnegativity conjectures, and the subcases that
//! reduce to proved product identities.

use super::catalog::eta;
use super::{grid1, grid_n, none, CatalogEntry, Ctx, Kind, Probe, Step, Stop, Strategy};
use crate::bivar::ZqSeries;
use crate::bracket::BracketSpec;
use crate::error::Error;

type B = BracketSpec;

fn bad(msg: String) -> Stop {
    Stop::Err(Error::InvalidParameter(msg))
}

/// `P_n(z,q) = (z, z^{n-1}q^n; q^n) / (z;q)`
fn pn_spec(n: u64) -> B {
    B::poch(1, 1, 0, n).mul(&B::poch(1, n as i64 - 1, n as i64, n)).div(&B::poch(1, 1, 0, 1))
}

/// `E(q^n)[z^{n-1};q^n]/[z;q]`
fn conj2e_spec(n: u64) -> B {
    B::euler(n).mul(&B::bracket(1, n as i64 - 1, 0, n)).div(&B::bracket(1, 1, 0, 1))
}

/// `E(q^m)[z^2;q^m] / ([z;q^m] (zq, q/z; q^m))`
fn conj2g_spec(m: u64) -> B {
    B::euler(m)
        .mul(&B::bracket(1, 2, 0, m))
        .div(&B::bracket(1, 1, 0, m))
        .div(&B::poch(1, 1, 1, m))
        .div(&B::poch(1, -1, 1, m))
}

fn conjecture(
    id: &'static str,
    labels: &'static [&'static str],
    anchor: &'static str,
    param_names: &'static [&'static str],
    grid: fn() -> Vec<super::Params>,
    default_window: Option<i64>,
    check: super::CheckFn,
) -> CatalogEntry {
    CatalogEntry {
        id,
        labels,
        anchor,
        kind: Kind::Conjecture,
        strategy: Strategy::Nonneg,
        param_names,
        grid,
        default_order: 60,
        default_window,
        check,
    }
}

fn subcase(
    id: &'static str,
    labels: &'static [&'static str],
    anchor: &'static str,
    param_names: &'static [&'static str],
    grid: fn() -> Vec<super::Params>,
    check: super::CheckFn,
) -> CatalogEntry {
    CatalogEntry {
        id,
        labels,
        anchor,
        kind: Kind::Theorem,
        strategy: Strategy::Equal,
        param_names,
        grid,
        default_order: 40,
        default_window: None,
        check,
    }
}

pub(crate) fn entries() -> Vec<CatalogEntry> {
    vec![
        conjecture(
            "conj2a",
            &["conj2", "conj2a"],
            "\\frac{ E(q) } {(z;q)_\\infty (qz^{-p};q)_\\infty} \\succeq 0",
            &["p"],
            || grid1("p", 1..=6),
            Some(20),
            check_conj2a,
        ),
        conjecture(
            "conj2b",
            &["conj2b"],
            "\\frac{E(q^{ma + nb})}{(q^a;q^{ma+nb})_\\infty (q^b;q^{ma+nb})_\\infty} \\succeq 0",
            &["a", "b", "m", "n"],
            || grid_n(&["a", "b", "m", "n"], &[&[1, 2, 3, 4], &[1, 2, 3, 4], &[1, 2, 3, 4], &[1, 2, 3, 4]]),
            None,
            check_conj2b,
        ),
        conjecture(
            "conj2c",
            &["conj2c"],
            "\\frac{(z, z^{n-1}q^n;q^n)_\\infty}{(z;q)_\\infty} \\succeq 0",
            &["n"],
            || grid1("n", 3..=8),
            None,
            check_conj2c,
        ),
        conjecture(
            "conj2d",
            &["conj2d"],
            "\\frac{(z^{n-1}q^n;q^n)_\\infty}{(zq,zq^2,zq^3;q^n)_\\infty} \\succeq 0",
            &["n"],
            || grid1("n", 4..=8),
            None,
            check_conj2d,
        ),
        conjecture(
            "conj2e",
            &["conj2e"],
            "E(q^n) \\, \\frac{[z^{n-1};q^n]_\\infty}{[z;q]_\\infty} \\succeq 0",
            &["n"],
            || grid1("n", 2..=8),
            None,
            check_conj2e,
        ),
        conjecture(
            "conj2f",
            &["conj2f"],
            "\\frac{E(q^{nm})}{(q^a;q^m)_\\infty} \\succeq 0",
            &["a", "m", "n"],
            || grid_n(&["a", "m", "n"], &[&[1, 2], &[2, 3, 4, 5, 6], &[2, 3, 4, 5, 6]]),
            None,
            check_conj2f,
        ),
        conjecture(
            "conj2g",
            &["conj2g"],
            "E(q^m) \\, \\frac{[z^2;q^m]_\\infty}{[z;q^m]_\\infty (zq,q/z;q^m)_\\infty} \\succeq 0",
            &["m"],
            || grid1("m", 2..=6),
            None,
            check_conj2g,
        ),
        conjecture(
            "conj2h",
            &["conj2h"],
            "\\frac{[z^{n+1}q^n;q^n]_\\infty}{[z^{n+1}q;q]_\\infty} \\succeq 0",
            &["n"],
            || grid1("n", 2..=4),
            None,
            check_conj2h,
        ),
        subcase(
            "conj2c3",
            &["Pnzq", "conj2c3"],
            "P_3(z,q) = \\frac{(z^2q^3;q^3)_\\infty}{(zq,zq^2;q^3)_\\infty} \\succeq 0",
            &[],
            none,
            check_conj2c3,
        ),
        subcase(
            "conj2c4",
            &["conj2c4"],
            "(-zq;q^2)_\\infty \\frac{(z^3q^4;q^4)_\\infty}{(zq^2;q^4)_\\infty (z^2q^2;q^4)_\\infty}",
            &[],
            none,
            check_conj2c4,
        ),
        subcase(
            "conj2ea",
            &["conj2ea"],
            "(1 - z^{n-1})\\frac{E(q^n)}{[z;q^n]_\\infty} \\cdot P_n(z,q) P_n(z^{-1},q)",
            &["n"],
            || grid1("n", 2..=6),
            check_conj2ea,
        ),
        subcase(
            "conj2e2",
            &["conj2e2"],
            "= \\frac{E(q^2)}{[zq;q^2]_\\infty} \\succeq 0",
            &[],
            none,
            check_conj2e2,
        ),
        subcase(
            "conj2f2",
            &["conj2f2"],
            "\\frac{E(q^2)^2}{E(q)} \\cdot \\frac{E(q^{2n})}{E(q^2)}",
            &["n"],
            || grid1("n", 2..=6),
            check_conj2f2,
        ),
        subcase(
            "conj2g2",
            &["conj2g2"],
            "\\frac{E(q^2)}{E(q)} \\cdot (q,-z,-q/z;q)_\\infty \\succeq 0",
            &[],
            none,
            check_conj2g2,
        ),
    ]
}

fn check_conj2a(c: &Ctx, p: &mut Probe) -> Step {
    let pp = c.get_u("p", 1)? as i64;
    let s = B::euler(1)
        .div(&B::poch(1, 1, 0, 1))
        .div(&B::poch(1, -pp, 1, 1))
        .expand(c.qprec, Some(c.window()))?;
    p.nonneg_zq("E(q)/((z;q)(q z^-p;q))", &s, &[])
}

fn check_conj2b(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 1)?;
    let b = c.get_u("b", 1)?;
    let m = c.get_u("m", 1)?;
    let n = c.get_u("n", 1)?;
    let l = m * a + n * b;
    let s = B::euler(l)
        .div(&B::poch(1, 0, a as i64, l))
        .div(&B::poch(1, 0, b as i64, l))
        .expand_q(c.qprec)?;
    p.nonneg_q(&format!("E(q^{l})/((q^{a};q^{l})(q^{b};q^{l}))"), &s)
}

fn check_conj2c(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 3)?;
    p.nonneg_zq("P_n(z,q)", &pn_spec(n).expand(c.qprec, None)?, &[])
}

fn check_conj2d(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 4)?;
    let s = B::poch(1, n as i64 - 1, n as i64, n)
        .div(&B::poch(1, 1, 1, n))
        .div(&B::poch(1, 1, 2, n))
        .div(&B::poch(1, 1, 3, n))
        .expand(c.qprec, None)?;
    p.nonneg_zq("(z^{n-1}q^n;q^n)/(zq,zq^2,zq^3;q^n)", &s, &[])
}

fn check_conj2e(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 2)?;
    p.nonneg_zq("E(q^n)[z^{n-1};q^n]/[z;q]", &conj2e_spec(n).expand(c.qprec, None)?, &[])
}

fn check_conj2f(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 1)?;
    let m = c.get_u("m", 1)?;
    let n = c.get_u("n", 2)?;
    if a > 2 {
        return Err(bad(format!("a = {a} must be 1 or 2")));
    }
    let s = B::euler(n * m).div(&B::poch(1, 0, a as i64, m)).expand_q(c.qprec)?;
    p.nonneg_q("E(q^{nm})/(q^a;q^m)", &s)
}

fn check_conj2g(c: &Ctx, p: &mut Probe) -> Step {
    let m = c.get_u("m", 2)?;
    p.nonneg_zq("E(q^m)[z^2;q^m]/([z;q^m](zq,q/z;q^m))", &conj2g_spec(m).expand(c.qprec, None)?, &[])
}

fn check_conj2h(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 2)?;
    let ni = n as i64;
    let s = B::euler(n)
        .mul(&B::bracket(1, ni * ni, 0, n))
        .div(&B::bracket(1, ni, 0, n))
        .mul(&B::bracket(1, ni + 1, ni, n))
        .div(&B::bracket(1, ni + 1, 1, 1))
        .expand(c.qprec, None)?;
    p.nonneg_zq("conj2h product", &s, &[])
}

fn check_conj2c3(c: &Ctx, p: &mut Probe) -> Step {
    let lhs = pn_spec(3).expand(c.qprec, None)?;
    let rhs = B::poch(1, 2, 3, 3)
        .div(&B::poch(1, 1, 1, 3))
        .div(&B::poch(1, 1, 2, 3))
        .expand(c.qprec, None)?;
    p.eq_zq("P_3 vs reduced product", &lhs, &rhs)?;
    p.nonneg_zq("P_3", &lhs, &[])
}

fn check_conj2c4(c: &Ctx, p: &mut Probe) -> Step {
    let lhs = pn_spec(4).expand(c.qprec, None)?;
    let mid = B::poch(1, 3, 4, 4)
        .div(&B::poch(1, 1, 1, 2))
        .div(&B::poch(1, 1, 2, 4))
        .expand(c.qprec, None)?;
    let rhs = B::poch(-1, 1, 1, 2)
        .mul(&B::poch(1, 3, 4, 4))
        .div(&B::poch(1, 1, 2, 4))
        .div(&B::poch(1, 2, 2, 4))
        .expand(c.qprec, None)?;
    p.eq_zq("P_4 vs first form", &lhs, &mid)?;
    p.eq_zq("P_4 vs second form", &lhs, &rhs)?;
    p.nonneg_zq("P_4", &lhs, &[])
}

fn check_conj2ea(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 2)?;
    let lhs = conj2e_spec(n).expand(c.qprec, None)?;
    let lead = B::poch_finite(1, n as i64 - 1, 0, 1, 1)
        .mul(&B::euler(n))
        .div(&B::bracket(1, 1, 0, n))
        .expand(c.qprec, None)?;
    let pz = pn_spec(n).expand(c.qprec, None)?;
    let pinv = pn_spec(n).invert_z().expand(c.qprec, None)?;
    p.eq_zq("factorization through P_n(z) P_n(1/z)", &lhs, &lead.mul(&pz).mul(&pinv))?;
    if n >= 3 {
        p.nonneg_zq("(1-z^{n-1})E(q^n)/[z;q^n]", &lead, &[])?;
    }
    Ok(())
}

fn check_conj2e2(c: &Ctx, p: &mut Probe) -> Step {
    let lhs = conj2e_spec(2).expand(c.qprec, None)?;
    let rhs = B::euler(2).div(&B::bracket(1, 1, 1, 2)).expand(c.qprec, None)?;
    p.eq_zq("E(q^2)[z;q^2]/[z;q] vs E(q^2)/[zq;q^2]", &lhs, &rhs)?;
    p.nonneg_zq("E(q^2)/[zq;q^2]", &rhs, &[])
}

fn check_conj2f2(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("n", 1)?;
    let lhs = B::euler(2 * n).div(&B::poch(1, 0, 1, 2)).expand_q(c.qprec)?;
    let rhs = eta(&[(2, 2), (1, -1)], c.qprec)?.mul(&eta(&[(2 * n, 1), (2, -1)], c.qprec)?);
    p.eq_q("E(q^{2n})/(q;q^2) vs E(q^2)^2/E(q) E(q^{2n})/E(q^2)", &lhs, &rhs)?;
    p.nonneg_q("E(q^2)^2/E(q)", &eta(&[(2, 2), (1, -1)], c.qprec)?)?;
    p.nonneg_q("E(q^{2n})/(q;q^2)", &lhs)
}

fn check_conj2g2(c: &Ctx, p: &mut Probe) -> Step {
    let lhs = conj2g_spec(2).expand(c.qprec, None)?;
    let mid = B::euler(2).mul(&B::bracket(1, 2, 0, 2)).div(&B::bracket(1, 1, 0, 1)).expand(c.qprec, None)?;
    let rhs = B::euler(2)
        .div(&B::euler(1))
        .mul(&B::poch(1, 0, 1, 1))
        .mul(&B::poch(-1, 1, 0, 1))
        .mul(&B::poch(-1, -1, 1, 1))
        .expand(c.qprec, None)?;
    p.eq_zq("m = 2 case vs E(q^2)[z^2;q^2]/[z;q]", &lhs, &mid)?;
    p.eq_zq("m = 2 case vs E(q^2)/E(q) (q,-z,-q/z;q)", &lhs, &rhs)?;
    let e21 = ZqSeries::from_qseries(&eta(&[(2, 1), (1, -1)], c.qprec)?);
    p.nonneg_zq("E(q^2)/E(q)", &e21, &[])?;
    p.nonneg_zq("m = 2 case", &lhs, &[])
}
