//! Identity catalog: every entry builds both sides of a claim (or a single
//! series for a nonnegativity claim), compares them on the certified region
//! and reports a verdict with the first witness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::bivar::{Coeff, Mode, ZqSeries};
use crate::cyclo::CycSeries;
use crate::error::{Error, Result};
use crate::series::QSeries;

mod catalog;
mod products_entries;
mod conjecture_entries;

pub use catalog::catalog;

pub type Params = BTreeMap<String, i64>;

pub fn params(pairs: &[(&str, i64)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn format_params(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

/// Parse `a=3,k=2`.
pub fn parse_params(s: &str) -> Result<Params> {
    let mut out = Params::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got `{part}`")))?;
        let v: i64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("`{v}` is not an integer")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Theorem,
    Conjecture,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Equal,
    EqualCrossMultiplied,
    Nonneg,
    NonnegExpectException,
    ZeroSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    Evidence,
    Violation,
}

impl Verdict {
    pub fn is_ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Evidence)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Evidence => "EVIDENCE (no violation found)",
            Verdict::Violation => "VIOLATION",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub at: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub id: String,
    pub params: Params,
    pub qprec: usize,
    /// Smallest q-precision any comparison was certified to.
    pub certified: usize,
    pub window: Option<i64>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} [{}] order={}", self.verdict, self.id, format_params(&self.params), self.qprec)?;
        if self.certified != self.qprec {
            write!(f, " certified={}", self.certified)?;
        }
        if let Some(w) = self.window {
            write!(f, " window={w}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " at {}: left={} right={}", w.at, w.left, w.right)?;
        }
        for n in &self.notes {
            write!(f, "; {n}")?;
        }
        Ok(())
    }
}

pub struct Ctx<'a> {
    pub params: &'a Params,
    pub qprec: usize,
    pub window: Option<i64>,
}

impl Ctx<'_> {
    pub fn get(&self, name: &str) -> Result<i64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{name}`")))
    }

    pub fn get_u(&self, name: &str, min: i64) -> Result<u64> {
        let v = self.get(name)?;
        if v < min {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be >= {min}")));
        }
        Ok(v as u64)
    }

    pub fn window(&self) -> i64 {
        self.window.unwrap_or(self.qprec as i64)
    }
}

/// Early exit from a check.
pub enum Stop {
    Broken(Witness),
    Unknown(String),
    Err(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Err(e)
    }
}

pub type Step<T = ()> = std::result::Result<T, Stop>;

/// Collects the certified precision and notes while sub-checks run.
pub struct Probe {
    certified: Option<usize>,
    notes: Vec<String>,
}

fn show<R: fmt::Display>(c: Option<&R>) -> String {
    c.map_or_else(|| "0".to_string(), |c| c.to_string())
}

impl Probe {
    fn new() -> Self {
        Probe { certified: None, notes: Vec::new() }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn record(&mut self, what: &str, prec: usize) -> Step {
        if prec == 0 {
            return Err(Stop::Unknown(format!("{what}: empty certified region")));
        }
        self.certified = Some(self.certified.map_or(prec, |c| c.min(prec)));
        Ok(())
    }

    pub fn eq_q(&mut self, what: &str, l: &QSeries, r: &QSeries) -> Step {
        self.record(what, l.precision().min(r.precision()))?;
        match l.first_mismatch(r) {
            None => Ok(()),
            Some((e, a, b)) => Err(Stop::Broken(Witness {
                at: format!("{what}: q^{e}"),
                left: a.to_string(),
                right: b.to_string(),
            })),
        }
    }

    pub fn eq_zq<R: Coeff>(&mut self, what: &str, l: &ZqSeries<R>, r: &ZqSeries<R>) -> Step {
        self.record(what, l.qprec().min(r.qprec()))?;
        match l.first_mismatch(r) {
            None => Ok(()),
            Some(m) => Err(Stop::Broken(Witness {
                at: format!("{what}: z^{} q^{}", m.zexp, m.qexp),
                left: show(m.left.as_ref()),
                right: show(m.right.as_ref()),
            })),
        }
    }

    pub fn eq_cyc(&mut self, what: &str, l: &CycSeries, r: &CycSeries) -> Step {
        let p = l.precision().min(r.precision());
        self.record(what, p.max(0) as usize)?;
        match l.first_mismatch(r) {
            None => Ok(()),
            Some((e, a, b)) => Err(Stop::Broken(Witness {
                at: format!("{what}: q^{e}"),
                left: a.to_string(),
                right: b.to_string(),
            })),
        }
    }

    pub fn zero_cyc(&mut self, what: &str, s: &CycSeries) -> Step {
        self.record(what, s.precision().max(0) as usize)?;
        match s.terms().iter().find(|(&e, _)| e < s.precision()) {
            None => Ok(()),
            Some((e, c)) => Err(Stop::Broken(Witness {
                at: format!("{what}: q^{e}"),
                left: c.to_string(),
                right: "0".into(),
            })),
        }
    }

    pub fn nonneg_q(&mut self, what: &str, s: &QSeries) -> Step {
        self.record(what, s.precision())?;
        match s.first_negative() {
            None => Ok(()),
            Some((e, c)) => Err(Stop::Broken(Witness {
                at: format!("{what}: q^{e}"),
                left: c.to_string(),
                right: ">= 0".into(),
            })),
        }
    }

    /// Every coefficient from `q^from` on is strictly positive.
    pub fn positive_q(&mut self, what: &str, s: &QSeries, from: usize) -> Step {
        self.record(what, s.precision())?;
        match s.coeffs().iter().enumerate().skip(from).find(|(_, c)| !c.is_positive()) {
            None => Ok(()),
            Some((e, c)) => Err(Stop::Broken(Witness {
                at: format!("{what}: q^{e}"),
                left: c.to_string(),
                right: "> 0".into(),
            })),
        }
    }

    /// Negative coefficients in the certified region are exactly `expected`.
    pub fn nonneg_zq(&mut self, what: &str, s: &ZqSeries, expected: &[(i64, usize)]) -> Step {
        self.record(what, s.qprec())?;
        let hi = match s.mode() {
            Mode::Exact => i64::MAX,
            Mode::Windowed { hi, .. } => hi,
        };
        let found: Vec<(i64, usize, &BigInt)> = s
            .terms()
            .filter(|(d, _, c)| *d <= hi && c.is_negative())
            .collect();
        let want: BTreeSet<(i64, usize)> = expected.iter().copied().filter(|&(_, e)| e < s.qprec()).collect();
        for &(d, e, c) in &found {
            if !want.contains(&(d, e)) {
                return Err(Stop::Broken(Witness {
                    at: format!("{what}: z^{d} q^{e}"),
                    left: c.to_string(),
                    right: ">= 0".into(),
                }));
            }
        }
        for &(d, e) in &want {
            if !found.iter().any(|&(d2, e2, _)| (d2, e2) == (d, e)) {
                return Err(Stop::Broken(Witness {
                    at: format!("{what}: z^{d} q^{e}"),
                    left: show(s.coeff(d, e)),
                    right: "< 0 expected".into(),
                }));
            }
        }
        if !want.is_empty() {
            let list: Vec<String> = want.iter().map(|(d, e)| format!("z^{d} q^{e}")).collect();
            self.note(format!("{what}: expected negatives found at {}", list.join(", ")));
        }
        Ok(())
    }

    /// A pointwise fact; `detail` describes the failure.
    pub fn holds(&mut self, what: &str, ok: bool, detail: impl FnOnce() -> (String, String)) -> Step {
        if ok {
            return Ok(());
        }
        let (left, right) = detail();
        Err(Stop::Broken(Witness { at: what.to_string(), left, right }))
    }

    /// Record a precision for checks that do not go through a comparison.
    pub fn certify(&mut self, what: &str, prec: usize) -> Step {
        self.record(what, prec)
    }
}

pub type CheckFn = fn(&Ctx, &mut Probe) -> Step;

pub struct CatalogEntry {
    pub id: &'static str,
    pub labels: &'static [&'static str],
    pub anchor: &'static str,
    pub kind: Kind,
    pub strategy: Strategy,
    pub param_names: &'static [&'static str],
    pub grid: fn() -> Vec<Params>,
    pub default_order: usize,
    pub default_window: Option<i64>,
    pub check: CheckFn,
}

pub fn find_entry(id: &str) -> Result<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

pub fn run_entry(id: &str, params: &Params, qprec: Option<usize>, window: Option<i64>) -> Result<IdentityReport> {
    let entry = find_entry(id)?;
    run_with(entry, params, qprec.unwrap_or(entry.default_order), window.or(entry.default_window))
}

fn run_with(entry: &CatalogEntry, params: &Params, qprec: usize, window: Option<i64>) -> Result<IdentityReport> {
    for k in params.keys() {
        if !entry.param_names.contains(&k.as_str()) {
            return Err(Error::InvalidParameter(format!("{} takes no parameter `{k}`", entry.id)));
        }
    }
    let start = Instant::now();
    let ctx = Ctx { params, qprec, window };
    let mut probe = Probe::new();
    let outcome = (entry.check)(&ctx, &mut probe);
    let (verdict, witness, extra) = match outcome {
        Ok(()) => (
            match entry.kind {
                Kind::Theorem => Verdict::Pass,
                Kind::Conjecture => Verdict::Evidence,
            },
            None,
            None,
        ),
        Err(Stop::Broken(w)) => (
            match entry.kind {
                Kind::Theorem => Verdict::Fail,
                Kind::Conjecture => Verdict::Violation,
            },
            Some(w),
            None,
        ),
        Err(Stop::Unknown(msg)) => (Verdict::Inconclusive, None, Some(msg)),
        Err(Stop::Err(e @ (Error::InvalidParameter(_) | Error::UnknownId(_) | Error::Parse(_)))) => return Err(e),
        Err(Stop::Err(e)) => (Verdict::Inconclusive, None, Some(e.to_string())),
    };
    let mut notes = probe.notes;
    notes.extend(extra);
    Ok(IdentityReport {
        id: entry.id.to_string(),
        params: params.clone(),
        qprec,
        certified: probe.certified.unwrap_or(0),
        window,
        verdict,
        witness,
        notes,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Entries whose id starts with `filter`, or every entry for `all`.
pub fn matching_entries(filter: &str) -> Vec<&'static CatalogEntry> {
    catalog()
        .iter()
        .filter(|e| filter == "all" || e.id.starts_with(filter))
        .collect()
}

/// Run every matching entry over its grid; reports come back in catalog
/// order. Invalid parameters surface as inconclusive reports.
pub fn run_catalog(filter: &str, qprec: Option<usize>) -> Vec<IdentityReport> {
    let jobs: Vec<(&CatalogEntry, Params)> = matching_entries(filter)
        .into_iter()
        .flat_map(|e| (e.grid)().into_iter().map(move |p| (e, p)))
        .collect();
    run_jobs(&jobs, qprec, None)
}

/// Run one entry (exact id) over its grid.
pub fn run_grid(id: &str, qprec: Option<usize>, window: Option<i64>) -> Result<Vec<IdentityReport>> {
    let e = find_entry(id)?;
    let jobs: Vec<(&CatalogEntry, Params)> = (e.grid)().into_iter().map(|p| (e, p)).collect();
    Ok(run_jobs(&jobs, qprec, window))
}

fn run_jobs(jobs: &[(&CatalogEntry, Params)], qprec: Option<usize>, window: Option<i64>) -> Vec<IdentityReport> {
    jobs.par_iter()
        .map(|(e, p)| {
            let order = qprec.unwrap_or(e.default_order);
            let window = window.or(e.default_window);
            run_with(e, p, order, window).unwrap_or_else(|err| IdentityReport {
                id: e.id.to_string(),
                params: p.clone(),
                qprec: order,
                certified: 0,
                window,
                verdict: Verdict::Inconclusive,
                witness: None,
                notes: vec![err.to_string()],
                elapsed_ms: 0,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    id: &'a str,
    kind: Kind,
    strategy: Strategy,
    labels: &'a [&'a str],
    anchor: &'a str,
    params: &'a [&'a str],
    grid: Vec<String>,
    default_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    default_window: Option<i64>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    entry: Vec<ManifestEntry<'a>>,
}

/// The catalog as TOML: ids, labels, anchors, grids and default orders.
pub fn manifest_toml() -> String {
    let m = Manifest {
        entry: catalog()
            .iter()
            .map(|e| ManifestEntry {
                id: e.id,
                kind: e.kind,
                strategy: e.strategy,
                labels: e.labels,
                anchor: e.anchor,
                params: e.param_names,
                grid: (e.grid)().iter().map(format_params).collect(),
                default_order: e.default_order,
                default_window: e.default_window,
            })
            .collect(),
    };
    toml::to_string(&m).expect("manifest serializes")
}

/// Grid helpers.
pub(crate) fn none() -> Vec<Params> {
    vec![Params::new()]
}

pub(crate) fn grid1(name: &str, values: impl IntoIterator<Item = i64>) -> Vec<Params> {
    values.into_iter().map(|v| params(&[(name, v)])).collect()
}

pub(crate) fn grid2(
    a: &str,
    av: impl IntoIterator<Item = i64>,
    b: &str,
    bv: impl IntoIterator<Item = i64> + Clone,
) -> Vec<Params> {
    let mut out = Vec::new();
    for x in av {
        for y in bv.clone() {
            out.push(params(&[(a, x), (b, y)]));
        }
    }
    out
}

/// Cartesian product of per-name value lists.
pub(crate) fn grid_n(names: &[&str], values: &[&[i64]]) -> Vec<Params> {
    let mut out = vec![Params::new()];
    for (name, vals) in names.iter().zip(values) {
        let mut next = Vec::with_capacity(out.len() * vals.len());
        for p in &out {
            for &v in *vals {
                let mut q = p.clone();
                q.insert(name.to_string(), v);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
