//! Entries for the lattice theta identities and the Saito eta products, plus
//! the assembled catalog.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;

use super::{grid1, none, params, CatalogEntry, Ctx, Kind, Probe, Step, Stop, Strategy};
use crate::bivar::ZqSeries;
use crate::bracket::BracketSpec;
use crate::cyclo::{CycInt, CycSeries};
use crate::lattice::{
    cyclic_step, enumerate_zero_sum, klyachko_cyc, klyachko_lhs, precision_for_shift, q_form_twice, theta_b,
    theta_b_bound, theta_c, theta_c_bound, theta_f,
};
use crate::partitions::count_t_cores;
use crate::products::{
    coprime_e, coprime_eta, d_series, d_spec, divisors, mobius, rhs_b_spec, rhs_c, rhs_c_spec, saito_tilde, EtaQuotient,
    SaitoSpec,
};
use crate::series::{euler_e_at, QSeries};

pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut v = theta_entries();
        v.extend(saito_entries());
        v.extend(super::products_entries::entries());
        v.extend(super::conjecture_entries::entries());
        v
    })
}

pub(crate) fn eta(pairs: &[(u64, i64)], prec: usize) -> crate::error::Result<QSeries> {
    EtaQuotient::from_pairs(pairs).expand(prec)
}

/// Smallest inner precision that still certifies `target` after `z -> z q^k`.
pub(crate) fn inner_prec(bound: crate::bivar::ZBound, target: usize, k: u64) -> Step<usize> {
    precision_for_shift(bound, target, k)
        .ok_or_else(|| Stop::Unknown("no precision certifies the shifted series".into()))
}

fn binom2(a: u64) -> u64 {
    a * a.saturating_sub(1) / 2
}

fn theta_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "euler",
            labels: &["etadef", "Edef"],
            anchor: "q^{1/24} \\prod_{n=1}^\\infty(1-q^n)",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["k"],
            grid: || grid1("k", 1..=3),
            default_order: 200,
            default_window: None,
            check: check_euler,
        },
        CatalogEntry {
            id: "eta-product",
            labels: &["etaproddef", "setaproddef"],
            anchor: "\\frac{ \\eta(N\\tau)^{\\phi(N)}}{\\prod_{d\\mid N} \\eta(d\\tau)^{\\mu(d)}}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["N"],
            grid: || grid1("N", 1..=12),
            default_order: 80,
            default_window: None,
            check: check_eta_product,
        },
        CatalogEntry {
            id: "pcore",
            labels: &["pcore1"],
            anchor: "let $a_t(n)$ denote the number of partitions of $n$ that are $t$-cores",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["t"],
            grid: || grid1("t", 1..=7),
            default_order: 26,
            default_window: None,
            check: check_pcore,
        },
        CatalogEntry {
            id: "tcore",
            labels: &["tcore"],
            anchor: "\\frac{E(q^t)^t}{E(q)} \\succeq 0,\\quad\\mbox{for any positive integer $t$.}",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["t"],
            grid: || grid1("t", 1..=8),
            default_order: 100,
            default_window: None,
            check: check_tcore,
        },
        CatalogEntry {
            id: "klyachko",
            labels: &["kid"],
            anchor: "We also need the following identity due to Klyachko",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["t"],
            grid: || grid1("t", 1..=7),
            default_order: 80,
            default_window: None,
            check: check_klyachko,
        },
        CatalogEntry {
            id: "klyachko-cyc",
            labels: &["ckid"],
            anchor: "\\omega_t^{\\vec b_t\\cdot\\vec{n}} q^{\\frac{1}{2} \\vec n\\cdot\\vec{n}} = \\frac{E(q)^t}{E(q^t)}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["t"],
            grid: || grid1("t", 1..=7),
            default_order: 80,
            default_window: None,
            check: check_klyachko_cyc,
        },
        CatalogEntry {
            id: "thm1",
            labels: &["thm1", "Cazq", "Radef"],
            anchor: "Let $a\\ge 2$ be an integer. Then for $z\\ne0$ and $\\abs{q}<1$",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 2..=6),
            default_order: 60,
            default_window: None,
            check: check_thm1,
        },
        CatalogEntry {
            id: "thm1-a2",
            labels: &["Cazq2"],
            anchor: "The case $a=2$ can be written as",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &[],
            grid: none,
            default_order: 60,
            default_window: None,
            check: check_thm1_a2,
        },
        CatalogEntry {
            id: "thm1-z1",
            labels: &["C_a(1;q)"],
            anchor: "C_a(1;q) = a \\sum",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 2..=6),
            default_order: 60,
            default_window: None,
            check: check_thm1_z1,
        },
        CatalogEntry {
            id: "thm1-roots",
            labels: &["Cazqzero"],
            anchor: "for $z=\\exp(2\\pi ik/a)$ for $1 \\le k \\le a-1$",
            kind: Kind::Theorem,
            strategy: Strategy::ZeroSeries,
            param_names: &["a", "k"],
            grid: || {
                (2..=6)
                    .flat_map(|a| (1..a).map(move |k| params(&[("a", a), ("k", k)])))
                    .collect()
            },
            default_order: 40,
            default_window: None,
            check: check_thm1_roots,
        },
        CatalogEntry {
            id: "theta-sum",
            labels: &["Fjdef", "Casum"],
            anchor: "C_a(z;q) = \\sum_{j=0}^{a-1} F_j(z;q)",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 2..=6),
            default_order: 40,
            default_window: None,
            check: check_theta_sum,
        },
        CatalogEntry {
            id: "qdiff",
            labels: &["Qadef", "Qdiff", "Qdiff0"],
            anchor: "An easy calculation gives",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 2..=6),
            default_order: 40,
            default_window: None,
            check: check_qdiff,
        },
        CatalogEntry {
            id: "theta-fe",
            labels: &["Fjm1", "Fjfe", "F0fe", "Cafe"],
            anchor: "F_j(zq;q) = z^{-(a-1)} F_{j-1}(z;q)",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 2..=5),
            default_order: 40,
            default_window: None,
            check: check_theta_fe,
        },
        CatalogEntry {
            id: "rhs-fe",
            labels: &["Rafe"],
            anchor: "R_a(zq;q) = z^{-(a-1)} R_a(z;q)",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 2..=6),
            default_order: 50,
            default_window: None,
            check: check_rhs_fe,
        },
        CatalogEntry {
            id: "thm2",
            labels: &["thm2", "Bjazq"],
            anchor: "Let $a$ and $j$ be integers where $a\\ge2$ and $0\\le j \\le a-1$",
            kind: Kind::Theorem,
            strategy: Strategy::EqualCrossMultiplied,
            param_names: &["a", "j"],
            grid: || {
                (2..=5)
                    .flat_map(|a| (0..a).map(move |j| params(&[("a", a), ("j", j)])))
                    .collect()
            },
            default_order: 40,
            default_window: None,
            check: check_thm2,
        },
        CatalogEntry {
            id: "thm2-fe",
            labels: &["Phitrans"],
            anchor: "\\Phi_{a}(zq^a;q) = q^{-\\binom{a}{2}} (-z)^{-(a-1)} \\Phi_{a}(z;q)",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["a"],
            grid: || grid1("a", 2..=5),
            default_order: 30,
            default_window: None,
            check: check_thm2_fe,
        },
        CatalogEntry {
            id: "vanishB",
            labels: &["Bzero0", "Bzero1"],
            anchor: "B_{j,a}(q^k;q)=0",
            kind: Kind::Theorem,
            strategy: Strategy::ZeroSeries,
            param_names: &["a", "k"],
            grid: || {
                (2..=5)
                    .flat_map(|a| (1..a).map(move |k| params(&[("a", a), ("k", k)])))
                    .collect()
            },
            default_order: 30,
            default_window: None,
            check: check_vanish_b,
        },
    ]
}

fn check_euler(c: &Ctx, p: &mut Probe) -> Step {
    let k = c.get_u("k", 1)? as usize;
    let pent = euler_e_at(k, c.qprec)?;
    let mut direct = QSeries::one(c.qprec);
    let mut n = k;
    while n < c.qprec {
        direct.apply_binomial(1, n, 1);
        n += k;
    }
    p.eq_q("pentagonal vs product", &pent, &direct)
}

fn check_eta_product(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("N", 1)?;
    let spec = SaitoSpec::new(n)?;
    let q = spec.eta_quotient();
    let mut direct = QSeries::one(c.qprec);
    for (&k, &e) in q.exponents() {
        let mut m = k as usize;
        while m < c.qprec {
            direct.apply_binomial(1, m, e);
            m += k as usize;
        }
    }
    p.eq_q("eta quotient vs product", &q.expand(c.qprec)?, &direct)?;
    let (a, b) = (q.prefactor24(), spec.prefactor24());
    p.holds("prefactor24", a == b, || (a.to_string(), b.to_string()))?;
    p.note(format!("prefactor q^({a}/24)"));
    Ok(())
}

fn check_pcore(c: &Ctx, p: &mut Probe) -> Step {
    let t = c.get_u("t", 1)?;
    let series = eta(&[(t, t as i64), (1, -1)], c.qprec)?;
    let counts = QSeries::from_coeffs((0..c.qprec as u64).map(|n| BigInt::from(count_t_cores(t, n))).collect());
    p.eq_q("t-core counts vs product", &counts, &series)
}

fn check_tcore(c: &Ctx, p: &mut Probe) -> Step {
    let t = c.get_u("t", 1)?;
    let s = eta(&[(t, t as i64), (1, -1)], c.qprec)?;
    p.nonneg_q("E(q^t)^t/E(q)", &s)?;
    if t >= 4 {
        p.positive_q("E(q^t)^t/E(q) positivity", &s, 0)?;
    }
    Ok(())
}

fn check_klyachko(c: &Ctx, p: &mut Probe) -> Step {
    let t = c.get_u("t", 1)?;
    let lhs = klyachko_lhs(t as usize, c.qprec)?;
    let rhs = eta(&[(t, t as i64), (1, -1)], c.qprec)?;
    p.eq_q("lattice sum vs E(q^t)^t/E(q)", &lhs, &rhs)
}

fn check_klyachko_cyc(c: &Ctx, p: &mut Probe) -> Step {
    let t = c.get_u("t", 1)?;
    let lhs = klyachko_cyc(t as usize, c.qprec)?;
    if let Some((e, v)) = lhs.terms().iter().find(|(_, v)| !v.is_rational_integer()) {
        return Err(Stop::Broken(super::Witness {
            at: format!("rational coefficients: q^{e}"),
            left: v.to_string(),
            right: "rational integer".into(),
        }));
    }
    let rhs = CycSeries::from_qseries(t, &eta(&[(1, t as i64), (t, -1)], c.qprec)?);
    p.eq_cyc("lattice sum vs E(q)^t/E(q^t)", &lhs, &rhs)
}

fn check_thm1(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let lhs = theta_c(a as usize, c.qprec)?;
    let rhs = rhs_c(a, c.qprec)?;
    p.eq_zq("lattice sum vs product", &lhs, &rhs)
}

/// `sum_n q^{2n^2 + s n} z^{2n + t}` over the terms below `qprec`.
fn half_theta(qprec: usize, s: i64, t: i64) -> Vec<(i64, usize, BigInt)> {
    let lim = qprec as i64 + 1;
    (-lim..=lim)
        .map(|n| (2 * n + t, 2 * n * n + s * n))
        .filter(|&(_, e)| (e as usize) < qprec)
        .map(|(d, e)| (d, e as usize, BigInt::from(1)))
        .collect()
}

fn check_thm1_a2(c: &Ctx, p: &mut Probe) -> Step {
    let mut terms = half_theta(c.qprec, -1, 0);
    terms.extend(half_theta(c.qprec, 1, 1));
    let single = ZqSeries::from_terms(c.qprec, theta_c_bound(2), terms);
    let product = BracketSpec::bracket(-1, 1, 0, 1).mul(&BracketSpec::euler(1)).expand(c.qprec, None)?;
    p.eq_zq("single sum vs triple product", &single, &product)?;
    p.eq_zq("single sum vs lattice sum", &single, &theta_c(2, c.qprec)?)?;
    let mut printed = half_theta(c.qprec, 1, 0);
    printed.extend(half_theta(c.qprec, 1, 1));
    let printed = ZqSeries::from_terms(c.qprec, theta_c_bound(2), printed);
    if let Some(m) = printed.first_mismatch(&product) {
        p.note(format!(
            "the form with q^(2n^2+n) on z^(2n) differs from the product at z^{} q^{}; the even terms carry q^(2n^2-n)",
            m.zexp, m.qexp
        ));
    }
    Ok(())
}

fn check_thm1_z1(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let target = eta(&[(a, a as i64), (1, -1)], c.qprec)?.scale(&BigInt::from(a));
    let lhs = theta_c(a as usize, c.qprec)?.specialize_one()?;
    p.eq_q("C_a(1;q) vs a E(q^a)^a/E(q)", &lhs, &target)?;
    let sum = klyachko_lhs(a as usize, c.qprec)?.scale(&BigInt::from(a));
    p.eq_q("C_a(1;q) vs a times the lattice sum", &lhs, &sum)?;
    let rhs = rhs_c(a, c.qprec)?.specialize_one()?;
    p.eq_q("R_a(1;q) vs a E(q^a)^a/E(q)", &rhs, &target)
}

fn check_thm1_roots(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let k = c.get_u("k", 1)?;
    if k >= a {
        return Err(Stop::Err(crate::Error::InvalidParameter(format!("k = {k} must be < a = {a}"))));
    }
    let lhs = theta_c(a as usize, c.qprec)?.specialize_root(a, k as i64)?;
    p.zero_cyc("C_a at a root of unity", &lhs)?;
    let rhs = rhs_c(a, c.qprec)?.specialize_root(a, k as i64)?;
    p.zero_cyc("R_a at a root of unity", &rhs)
}

fn check_theta_sum(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)? as usize;
    let mut sum = ZqSeries::zero(c.qprec);
    for j in 0..a {
        sum = sum.add(&theta_f(j, a, c.qprec)?);
    }
    p.eq_zq("sum of F_j vs C_a", &sum, &theta_c(a, c.qprec)?)
}

fn check_qdiff(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)? as usize;
    let ai = a as i64;
    let pts = enumerate_zero_sum(a, c.qprec as i64);
    p.certify("lattice points", c.qprec)?;
    for pt in &pts {
        p.holds(&format!("Q_a at {:?}", pt.n), q_form_twice(&pt.n) == 2 * pt.qexp, || {
            (q_form_twice(&pt.n).to_string(), (2 * pt.qexp).to_string())
        })?;
    }
    // the differences hold for every integer vector, not only zero-sum ones
    let r = 2i64;
    let mut vecs: Vec<Vec<i64>> = pts.iter().map(|p| p.n.clone()).collect();
    if a <= 5 {
        let side = (2 * r + 1) as usize;
        for mut idx in 0..side.pow(a as u32) {
            let mut v = Vec::with_capacity(a);
            for _ in 0..a {
                v.push((idx % side) as i64 - r);
                idx /= side;
            }
            vecs.push(v);
        }
    }
    for n in &vecs {
        let s: i64 = n.iter().sum();
        for j in 1..a {
            let np = cyclic_step(n, j);
            let got = q_form_twice(&np) - q_form_twice(n);
            let want = 2 * (ai * n[j] + j as i64 - s);
            p.holds(&format!("Q_a(n') - Q_a(n) at n={n:?}, j={j}"), got == want, || {
                (got.to_string(), want.to_string())
            })?;
        }
        let np = cyclic_step(n, 0);
        let got = q_form_twice(&np) - q_form_twice(n);
        let want = 2 * (ai * n[0] - s);
        p.holds(&format!("rotation difference at n={n:?}"), got == want, || (got.to_string(), want.to_string()))?;
    }
    p.note(format!("{} lattice points, {} vectors", pts.len(), vecs.len()));
    Ok(())
}

fn check_theta_fe(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)? as usize;
    let inner = inner_prec(theta_c_bound(a), c.qprec, 1)?;
    let back = -(a as i64 - 1);
    let f: Vec<ZqSeries> = (0..a).map(|j| theta_f(j, a, inner)).collect::<crate::Result<_>>()?;
    for j in 0..a {
        let prev = if j == 0 { a - 1 } else { j - 1 };
        let lhs = f[j].shift_z(1)?;
        let rhs = f[prev].mul_monomial(back, 0);
        p.eq_zq(&format!("F_{j}(zq) vs z^(1-a) F_{prev}(z)"), &lhs, &rhs)?;
    }
    let ca = theta_c(a, inner)?;
    p.eq_zq("C_a(zq) vs z^(1-a) C_a(z)", &ca.shift_z(1)?, &ca.mul_monomial(back, 0))?;
    p.note(format!("inner precision {inner}"));
    Ok(())
}

fn check_rhs_fe(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let spec = rhs_c_spec(a);
    let lhs = spec.shift_z(1).expand(c.qprec, None)?;
    let rhs = BracketSpec::monomial(1, -(a as i64 - 1), 0).mul(&spec).expand(c.qprec, None)?;
    p.eq_zq("R_a(zq) vs z^(1-a) R_a(z)", &lhs, &rhs)
}

fn check_thm2(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let j = c.get_u("j", 0)?;
    if j >= a {
        return Err(Stop::Err(crate::Error::InvalidParameter(format!("j = {j} must be < a = {a}"))));
    }
    let b = theta_b(j as usize, a as usize, c.qprec)?;
    let den = BracketSpec::bracket(1, 1, 0, a).expand(c.qprec, None)?.to_cyc(a);
    let num = BracketSpec::euler(1)
        .pow(a as i64 - 2)
        .mul(&BracketSpec::euler(a))
        .mul(&BracketSpec::bracket(1, 1, 0, 1))
        .expand(c.qprec, None)?
        .to_cyc(a);
    p.eq_zq("B_{j,a} [z;q^a] vs E(q)^(a-2) E(q^a) [z;q]", &b.mul(&den), &num)?;
    let direct = rhs_b_spec(a).expand(c.qprec, None)?.to_cyc(a);
    p.eq_zq("B_{j,a} vs quotient", &b, &direct)?;
    if j != 0 {
        p.eq_zq("B_{j,a} vs B_{0,a}", &b, &theta_b(0, a as usize, c.qprec)?)?;
    }
    Ok(())
}

fn check_thm2_fe(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let m = binom2(a);
    let sign_neg = (a - 1) % 2 == 1;
    let inner = inner_prec(theta_b_bound(a as usize), c.qprec, a)?;
    for j in 0..a as usize {
        let b = theta_b(j, a as usize, inner)?;
        let lhs = b.shift_z_times_q(a, m)?;
        let mut rhs = b.mul_monomial(-(a as i64 - 1), 0);
        if sign_neg {
            rhs = rhs.neg();
        }
        p.eq_zq(&format!("q^C(a,2) B_{j},a(zq^a) vs (-z)^(1-a) B_{j},a(z)"), &lhs, &rhs)?;
    }
    let spec = rhs_b_spec(a);
    let lhs = BracketSpec::monomial(1, 0, m as i64).mul(&spec.shift_z(a as i64)).expand(c.qprec, None)?;
    let rhs = BracketSpec::monomial(if sign_neg { -1 } else { 1 }, -(a as i64 - 1), 0)
        .mul(&spec)
        .expand(c.qprec, None)?;
    p.eq_zq("product side functional equation", &lhs, &rhs)?;
    p.note(format!("inner precision {inner}"));
    Ok(())
}

fn times_cyc(s: &CycSeries, k: &CycInt) -> Step<CycSeries> {
    let terms: Vec<(i64, CycInt)> = s
        .terms()
        .iter()
        .map(|(&e, v)| v.try_mul(k).map(|x| (e, x)))
        .collect::<crate::Result<_>>()?;
    Ok(CycSeries::from_terms(s.order(), s.precision(), terms)?)
}

fn check_vanish_b(c: &Ctx, p: &mut Probe) -> Step {
    let a = c.get_u("a", 2)?;
    let k = c.get_u("k", 1)?;
    if k >= a {
        return Err(Stop::Err(crate::Error::InvalidParameter(format!("k = {k} must be < a = {a}"))));
    }
    let inner = inner_prec(theta_b_bound(a as usize), c.qprec, k)?;
    let spec: Vec<CycSeries> = (0..a as usize)
        .map(|j| theta_b(j, a as usize, inner).and_then(|b| b.specialize_monomial(a, k)))
        .collect::<crate::Result<_>>()?;
    let zk = CycInt::zeta_pow(a, k as i64);
    for j in 0..a as usize {
        let next = (j + 1) % a as usize;
        p.eq_cyc(
            &format!("B_{j},a(q^k) vs w^k B_{next},a(q^k)"),
            &spec[j],
            &times_cyc(&spec[next], &zk)?,
        )?;
        p.zero_cyc(&format!("B_{j},a(q^k)"), &spec[j])?;
    }
    p.note(format!("inner precision {inner}"));
    Ok(())
}

fn saito_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            id: "saito",
            labels: &["conj1", "SNdef"],
            anchor: "has nonnegative Fourier coefficients",
            kind: Kind::Theorem,
            strategy: Strategy::Nonneg,
            param_names: &["N"],
            grid: || grid1("N", 1..=60),
            default_order: 200,
            default_window: None,
            check: check_saito,
        },
        CatalogEntry {
            id: "saito-prime",
            labels: &["Sp"],
            anchor: "S_p(\\tau) = \\frac{\\eta(p\\tau)^p}{\\eta(\\tau)} = q^{(p^2-1)/24} \\frac{E(q^p)^p}{E(q)}",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["p"],
            grid: || grid1("p", [2, 3, 5, 7, 11, 13]),
            default_order: 80,
            default_window: None,
            check: check_saito_prime,
        },
        CatalogEntry {
            id: "saito-coprime",
            labels: &["Eprop", "Eep", "epsimp"],
            anchor: "by a well known property of the M\\\"obius function",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["M"],
            grid: || grid1("M", 1..=30),
            default_order: 80,
            default_window: None,
            check: check_coprime,
        },
        CatalogEntry {
            id: "saito-case1",
            labels: &["Case 1"],
            anchor: "the case $\\alpha=1$ follows from \\eqn{pcore1} and then use an easy induction on $\\alpha$",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["p", "alpha"],
            grid: || {
                [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2)]
                    .iter()
                    .map(|&(p, a)| params(&[("p", p), ("alpha", a)]))
                    .collect()
            },
            default_order: 100,
            default_window: None,
            check: check_case1,
        },
        CatalogEntry {
            id: "saito-case2",
            labels: &["Eprod", "Eprod2", "Dazq", "Dprod"],
            anchor: "K.~Saito's Conjecture holds in this case",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["p", "M"],
            grid: || {
                [(5, 3), (2, 3), (7, 5), (3, 5), (2, 5), (2, 7), (3, 7), (5, 7), (2, 9), (2, 15)]
                    .iter()
                    .map(|&(p, m)| params(&[("p", p), ("M", m)]))
                    .collect()
            },
            default_order: 60,
            default_window: None,
            check: check_case2,
        },
        CatalogEntry {
            id: "saito-case3",
            labels: &["Eprop2", "Sprop"],
            anchor: "Here $\\mytwid{S}_N(q)$ is the product of two terms",
            kind: Kind::Theorem,
            strategy: Strategy::Equal,
            param_names: &["p", "alpha", "M"],
            grid: || {
                [(2, 2, 3), (3, 2, 2), (3, 2, 1), (2, 3, 1), (2, 2, 5), (2, 3, 3), (5, 2, 1)]
                    .iter()
                    .map(|&(p, a, m)| params(&[("p", p), ("alpha", a), ("M", m)]))
                    .collect()
            },
            default_order: 40,
            default_window: None,
            check: check_case3,
        },
    ]
}

fn check_saito(c: &Ctx, p: &mut Probe) -> Step {
    let n = c.get_u("N", 1)?;
    let s = saito_tilde(n, c.qprec)?;
    p.nonneg_q("S~_N", &s)?;
    let pf = SaitoSpec::new(n)?.prefactor24();
    p.note(format!("prefactor q^({pf}/24)"));
    Ok(())
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check_saito_prime(c: &Ctx, p: &mut Probe) -> Step {
    let pr = c.get_u("p", 2)?;
    if !is_prime(pr) {
        return Err(Stop::Err(crate::Error::InvalidParameter(format!("{pr} is not prime"))));
    }
    let s = saito_tilde(pr, c.qprec)?;
    p.eq_q("S~_p vs E(q^p)^p/E(q)", &s, &eta(&[(pr, pr as i64), (1, -1)], c.qprec)?)?;
    let pf = SaitoSpec::new(pr)?.prefactor24();
    let want = (pr * pr - 1) as i64;
    p.holds("prefactor24", pf == want, || (pf.to_string(), want.to_string()))
}

fn check_coprime(c: &Ctx, p: &mut Probe) -> Step {
    let m = c.get_u("M", 1)?;
    let direct = coprime_e(m, c.qprec)?;
    p.eq_q("divisor product vs coprime product", &coprime_eta(m).expand(c.qprec)?, &direct)?;
    let mut via_eps = QSeries::one(c.qprec);
    for n in 1..c.qprec as u64 {
        let eps: i64 = divisors(m).into_iter().filter(|d| n % d == 0).map(mobius).sum();
        let want = i64::from(n.gcd(&m) == 1);
        p.holds(&format!("exponent at n={n}"), eps == want, || (eps.to_string(), want.to_string()))?;
        via_eps.apply_binomial(1, n as usize, eps);
    }
    p.eq_q("product with Mobius exponents vs coprime product", &via_eps, &direct)
}

fn check_case1(c: &Ctx, p: &mut Probe) -> Step {
    let pr = c.get_u("p", 2)?;
    let alpha = c.get_u("alpha", 1)? as u32;
    let n = pr.pow(alpha);
    let s = saito_tilde(n, c.qprec)?;
    p.nonneg_q("S~_{p^alpha}", &s)?;
    let step = pr.pow(alpha - 1);
    let factor = EtaQuotient::from_pairs(&[(n, step as i64), (pr, -1)]).pow(pr as i64 - 1);
    let rebuilt = factor.expand(c.qprec)?.mul(&saito_tilde(pr, c.qprec)?);
    p.eq_q("S~_{p^alpha} vs lifted t-core factor times S~_p", &s, &rebuilt)
}

fn check_case2(c: &Ctx, p: &mut Probe) -> Step {
    let pr = c.get_u("p", 2)?;
    let m = c.get_u("M", 1)?;
    if !is_prime(pr) || m % 2 == 0 || m % pr == 0 {
        return Err(Stop::Err(crate::Error::InvalidParameter(format!(
            "need p prime, M odd and p not dividing M (p = {pr}, M = {m})"
        ))));
    }
    let n = pr * m;
    let qp = c.qprec;
    // divisor product over N regrouped over M
    let mut regrouped = EtaQuotient::one();
    for d in divisors(m) {
        regrouped = regrouped.mul(&EtaQuotient::from_pairs(&[(d, 1), (pr * d, -1)]).pow(mobius(d)));
    }
    p.eq_q("divisor product over N vs over M", &coprime_eta(n).expand(qp)?, &regrouped.expand(qp)?)?;
    let mut brackets = BracketSpec::one();
    for r in (1..=(m - 1) / 2).filter(|r| r.gcd(&m) == 1) {
        brackets = brackets.mul(&BracketSpec::bracket(1, 0, r as i64, m));
    }
    p.eq_q("coprime product vs brackets", &coprime_eta(m).expand(qp)?, &brackets.expand_q(qp)?)?;
    let d_full = d_spec(pr).expand(qp, None)?;
    let d_via_c = theta_c(pr as usize, qp)?.mul_qseries(&eta(&[(pr, pr as i64), (1, -1)], qp)?);
    p.eq_zq("D_p vs E(q^p)^p/E(q) C_p", &d_full, &d_via_c)?;
    let mut prod = QSeries::one(qp);
    for r in (1..=(m - 1) / 2).filter(|r| r.gcd(&m) == 1) {
        let d = d_series(pr, r, m, qp)?;
        p.nonneg_q(&format!("D_p(q^{r};q^M)"), &d)?;
        prod = prod.mul(&d);
    }
    let middle = EtaQuotient::e(n, SaitoSpec::new(n)?.phi as i64)
        .mul(&coprime_eta(m).subst(pr))
        .div(&coprime_eta(m));
    p.eq_q("product of D_p vs middle expression", &prod, &middle.expand(qp)?)?;
    p.eq_q("product of D_p vs S~_N", &prod, &saito_tilde(n, qp)?)
}

fn check_case3(c: &Ctx, p: &mut Probe) -> Step {
    let pr = c.get_u("p", 2)?;
    let alpha = c.get_u("alpha", 2)? as u32;
    let m = c.get_u("M", 1)?;
    if !is_prime(pr) || m % pr == 0 {
        return Err(Stop::Err(crate::Error::InvalidParameter(format!(
            "need p prime not dividing M (p = {pr}, M = {m})"
        ))));
    }
    if m % 2 == 0 {
        p.note("M even: the factorization is checked although the case split assumes M odd");
    }
    let qp = c.qprec;
    let n = pr.pow(alpha) * m;
    let n1 = pr * m;
    p.eq_q("divisor product over N vs over N'", &coprime_eta(n).expand(qp)?, &coprime_eta(n1).expand(qp)?)?;
    let k = pr.pow(alpha - 1);
    let phi_m = SaitoSpec::new(m)?.phi as i64;
    let factor = EtaQuotient::from_pairs(&[(k * n1, k as i64), (n1, -1)]).pow((pr as i64 - 1) * phi_m);
    let f = factor.expand(qp)?;
    p.nonneg_q("first factor", &f)?;
    p.eq_q("S~_N vs factor times S~_N'", &saito_tilde(n, qp)?, &f.mul(&saito_tilde(n1, qp)?))?;
    let ratio = EtaQuotient::e(n, SaitoSpec::new(n)?.phi as i64).div(&EtaQuotient::e(n1, SaitoSpec::new(n1)?.phi as i64));
    p.eq_q("first factor vs E(q^N)^phi(N)/E(q^N')^phi(N')", &f, &ratio.expand(qp)?)
}
