//! The `verify` suite: every tabulated value, the oracle cross-check, the
//! ratio sweeps, the count sandwich and the entropy constants.
//!
//! Check failures become report rows; nothing here aborts the run.

use std::fmt;

use dimers::asymptotics::bounds::entropy_bounds_from;
use dimers::asymptotics::checks::ratio_sweep_on;
use dimers::asymptotics::{
    bound_m_hanoi, entropy, entropy_from_seed, AsymptoticsError, MAX_PRECISION_BITS,
};
use dimers::hp::{self, Hp};
use dimers::oracle::{count_by_boundary_with, count_matchings, Budget};
use dimers::recursion::{self, RecursionError, DEFAULT_EXACT_CAP};
use dimers::{build, BoundaryCountVector, Family, StageRecord};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::golden::{Entry, Golden, Kind};

/// One recursion step; swapped out in tests to corrupt the ledger.
pub type StepFn = fn(Family, &BoundaryCountVector) -> Result<BoundaryCountVector, RecursionError>;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub families: Vec<Family>,
    /// Compare against the values as tabulated, without corrections.
    pub strict: bool,
    pub budget: Budget,
    pub parallel: bool,
    pub sweep_max: u32,
    pub sandwich_max: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            families: Family::ALL.to_vec(),
            strict: false,
            budget: Budget::default(),
            parallel: false,
            sweep_max: DEFAULT_EXACT_CAP,
            sandwich_max: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub reference: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl fmt::Display for CheckRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "{} = {}, pass", self.name, self.actual)
        } else {
            write!(
                f,
                "{} = {}, FAIL (expected {})",
                self.name, self.actual, self.expected
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub passed: usize,
    pub total: usize,
    pub rows: Vec<CheckRow>,
}

impl VerifyReport {
    fn new(rows: Vec<CheckRow>) -> Self {
        let passed = rows.iter().filter(|r| r.pass).count();
        VerifyReport {
            pass: passed == rows.len(),
            passed,
            total: rows.len(),
            rows,
        }
    }

    pub fn row(&self, name: &str) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        writeln!(f, "verify: {}/{} checks passed", self.passed, self.total)
    }
}

pub fn run_verify(cfg: &VerifyConfig) -> VerifyReport {
    run_verify_with(cfg, recursion::step)
}

pub fn run_verify_with(cfg: &VerifyConfig, step: StepFn) -> VerifyReport {
    let mut s = Suite {
        cfg,
        golden: Golden::embedded(),
        rows: Vec::new(),
    };
    for &family in &cfg.families {
        s.family(family, step);
    }
    VerifyReport::new(s.rows)
}

struct Suite<'a> {
    cfg: &'a VerifyConfig,
    golden: &'static Golden,
    rows: Vec<CheckRow>,
}

fn component(v: &BoundaryCountVector, c: &str) -> BigUint {
    match c {
        "x" => v.x.clone(),
        "y" => v.y.clone(),
        "z" => v.z.clone(),
        "w" => v.w.clone(),
        other => panic!("golden entry names unknown component {other}"),
    }
}

/// Numerator and denominator components of a ratio.
fn ratio_parts(c: &str) -> (&'static str, &'static str) {
    match c {
        "alpha" => ("y", "x"),
        "beta" => ("z", "y"),
        "gamma" => ("w", "z"),
        other => panic!("golden entry names unknown ratio {other}"),
    }
}

fn decimals(s: &str) -> u32 {
    s.split_once('.').map_or(0, |(_, f)| f.len() as u32)
}

fn violations(stages: &[u32]) -> String {
    if stages.is_empty() {
        "0 violations".to_string()
    } else {
        let list: Vec<String> = stages.iter().map(u32::to_string).collect();
        format!("violations at n = {}", list.join(", "))
    }
}

fn ledger_with(
    family: Family,
    n_max: u32,
    step: StepFn,
) -> Result<Vec<StageRecord>, RecursionError> {
    let mut v = BoundaryCountVector::initial();
    let mut out = vec![StageRecord::new(family, 0, v.clone())];
    for n in 1..=n_max {
        v = step(family, &v)?;
        out.push(StageRecord::new(family, n, v.clone()));
    }
    Ok(out)
}

impl Suite<'_> {
    fn push(
        &mut self,
        name: impl Into<String>,
        reference: &str,
        expected: impl Into<String>,
        actual: impl Into<String>,
        pass: bool,
    ) {
        self.rows.push(CheckRow {
            name: name.into(),
            reference: reference.into(),
            expected: expected.into(),
            actual: actual.into(),
            pass,
        });
    }

    fn family(&mut self, family: Family, step: StepFn) {
        let ledger = match ledger_with(family, self.cfg.sweep_max, step) {
            Ok(l) => l,
            Err(e) => {
                self.push(
                    format!("Recursion.{family}"),
                    "",
                    "a ledger",
                    format!("error: {e}"),
                    false,
                );
                return;
            }
        };
        let entries: Vec<&Entry> = self.golden.for_family(family).collect();
        self.divergence(family, &ledger, &entries);
        for e in &entries {
            match e.kind {
                Kind::Count => self.count(e, &ledger),
                Kind::Ratio => self.ratio(e, &ledger),
                _ => {}
            }
        }
        self.oracle(family, &ledger);
        self.sweep(family, &ledger);
        if family == Family::Hanoi {
            self.sandwich(&ledger);
        }
        for e in &entries {
            match e.kind {
                Kind::Entropy => self.entropy(e),
                Kind::Gap => self.gap(e),
                _ => {}
            }
        }
    }

    /// Names the first stage at which the ledger leaves the tabulated counts.
    fn divergence(&mut self, family: Family, ledger: &[StageRecord], entries: &[&Entry]) {
        let strict = self.cfg.strict;
        let stages: Vec<u32> = {
            let mut s: Vec<u32> = entries
                .iter()
                .filter(|e| e.kind == Kind::Count)
                .filter_map(|e| e.n)
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let Some(&last) = stages.last() else { return };
        let first_bad = stages.iter().copied().find(|&n| {
            entries
                .iter()
                .filter(|e| e.kind == Kind::Count && e.n == Some(n))
                .any(|e| {
                    component(&ledger[n as usize].counts, e.component()).to_string()
                        != e.expected(strict)
                })
        });
        let expected = format!("stages 0..={last} agree");
        match first_bad {
            None => self.push(
                format!("Recursion.{family}"),
                "",
                expected.clone(),
                expected,
                true,
            ),
            Some(n) => self.push(
                format!("Recursion.{family}"),
                "",
                expected,
                format!("first divergent stage n = {n}"),
                false,
            ),
        }
    }

    fn count(&mut self, e: &Entry, ledger: &[StageRecord]) {
        let n = e.n.expect("count entry has a stage");
        let actual = component(&ledger[n as usize].counts, e.component()).to_string();
        let expected = e.expected(self.cfg.strict);
        self.push(
            &e.name,
            &e.reference,
            expected,
            actual.clone(),
            actual == expected,
        );
        if e.corrected.is_some() && !self.cfg.strict {
            // The tabulated value should be a binary64 number within a couple
            // of ulps of the exact count.
            let printed: f64 = e.printed.parse().unwrap_or(f64::NAN);
            let exact: f64 = actual.parse().unwrap_or(f64::NAN);
            let representable = format!("{printed:.0}") == e.printed;
            let ulps = (printed.to_bits() as i64 - exact.to_bits() as i64).unsigned_abs();
            self.push(
                format!("{}.printed", e.name),
                &e.reference,
                "binary64, at most 2 ulp from exact",
                format!(
                    "{} {ulps} ulp from exact",
                    if representable {
                        "binary64,"
                    } else {
                        "not binary64,"
                    }
                ),
                representable && ulps <= 2,
            );
        }
    }

    fn ratio(&mut self, e: &Entry, ledger: &[StageRecord]) {
        let n = e.n.expect("ratio entry has a stage");
        let (num, den) = ratio_parts(e.component());
        let v = &ledger[n as usize].counts;
        let expected = e.expected(self.cfg.strict);
        let hp = Hp::new(256);
        let actual = hp::format_rounded(
            &hp.ratio(&component(v, num), &component(v, den)),
            decimals(expected),
        );
        self.push(
            &e.name,
            &e.reference,
            expected,
            actual.clone(),
            actual == expected,
        );
        if e.corrected.is_some() && !self.cfg.strict {
            // The tabulated value should be the shortest binary64 quotient of
            // the tabulated counts.
            let printed = |c: &str| {
                self.golden
                    .count(e.family, n, c)
                    .and_then(|c| c.printed.parse::<f64>().ok())
                    .unwrap_or(f64::NAN)
            };
            let q = printed(num) / printed(den);
            self.push(
                format!("{}.printed", e.name),
                &e.reference,
                e.printed.clone(),
                format!("{q}"),
                format!("{q}") == e.printed,
            );
        }
    }

    fn oracle(&mut self, family: Family, ledger: &[StageRecord]) {
        let n_max = match family {
            Family::Hanoi => 3,
            Family::SierpX => 1,
        };
        let fmt_counts = |v: &BoundaryCountVector| format!("({}, {}, {}, {})", v.x, v.y, v.z, v.w);
        for n in 0..=n_max {
            let expected = fmt_counts(&ledger[n as usize].counts);
            let actual = build(family, n)
                .map_err(|e| e.to_string())
                .and_then(|g| {
                    count_by_boundary_with(&g, &self.cfg.budget, self.cfg.parallel)
                        .map_err(|e| e.to_string())
                })
                .map_or_else(|e| e, |c| fmt_counts(&c.counts));
            let pass = actual == expected;
            self.push(format!("Oracle.{family}.n{n}"), "", expected, actual, pass);
        }
        if family == Family::SierpX {
            let expected = ledger[2].m.to_string();
            let actual = build(family, 2)
                .map_err(|e| e.to_string())
                .and_then(|g| count_matchings(&g, &self.cfg.budget).map_err(|e| e.to_string()))
                .map_or_else(|e| e, |c| c.total.to_string());
            let pass = actual == expected;
            self.push(
                format!("Oracle.{family}.n2.total"),
                "",
                expected,
                actual,
                pass,
            );
        }
    }

    fn sweep(&mut self, family: Family, ledger: &[StageRecord]) {
        let s = ratio_sweep_on(family, ledger);
        let n = s.n_max;
        for (what, stages) in [
            ("ordering", &s.ordering),
            ("alpha_increasing", &s.alpha_increasing),
            ("gamma_decreasing", &s.gamma_decreasing),
            ("contraction", &s.contraction),
        ] {
            self.push(
                format!("Ratios.{family}.{what}"),
                "",
                "0 violations",
                format!("n <= {n}, {}", violations(stages)),
                stages.is_empty(),
            );
        }
    }

    fn sandwich(&mut self, ledger: &[StageRecord]) {
        let n_max = self.cfg.sandwich_max.min(ledger.len() as u32 - 1);
        let mut pairs = 0;
        let mut bad = Vec::new();
        for n in 1..=n_max {
            for k in 1..=n {
                pairs += 1;
                match bound_m_hanoi(ledger, k, n, 128) {
                    Ok(b) if b.sandwiched() => {}
                    _ => bad.push(format!("(k={k}, n={n})")),
                }
            }
        }
        let actual = if bad.is_empty() {
            format!("{pairs} pairs with k <= n <= {n_max}, 0 violations")
        } else {
            format!("violations at {}", bad.join(", "))
        };
        self.push("Sandwich.hanoi", "", "0 violations", actual, bad.is_empty());
    }

    fn entropy(&mut self, e: &Entry) {
        let digits = e.digits.expect("entropy entry has digits");
        let expected = e.expected(self.cfg.strict);
        let actual = entropy(e.family, digits).map_or_else(
            |err| format!("error: {err}"),
            |est| est.mu_per_vertex_digits(),
        );
        self.push(
            &e.name,
            &e.reference,
            expected,
            actual.clone(),
            actual == expected,
        );
        if e.corrected.is_some() && !self.cfg.strict {
            // Iterating from the tabulated (rounded) counts should land on the
            // tabulated constant.
            let actual = self.rounded_seed(e.family).and_then(|(stage, seed)| {
                entropy_from_seed(e.family, stage, seed, digits, 512, DEFAULT_EXACT_CAP)
                    .map(|est| est.mu_per_vertex_digits())
                    .map_err(|err| err.to_string())
            });
            let actual = actual.unwrap_or_else(|err| format!("error: {err}"));
            let pass = actual == e.printed;
            self.push(
                format!("{}.printed", e.name),
                &e.reference,
                e.printed.clone(),
                actual,
                pass,
            );
        }
    }

    /// The last tabulated count row of `family`, as printed.
    fn rounded_seed(&self, family: Family) -> Result<(u32, BoundaryCountVector), String> {
        let stage = self
            .golden
            .for_family(family)
            .filter(|e| e.kind == Kind::Count)
            .filter_map(|e| e.n)
            .max()
            .ok_or("no tabulated counts")?;
        let get = |c: &str| {
            self.golden
                .count(family, stage, c)
                .map(|e| e.printed.as_str())
                .unwrap_or("")
        };
        BoundaryCountVector::parse(get("x"), get("y"), get("z"), get("w"))
            .map(|v| (stage, v))
            .ok_or_else(|| "unparsable tabulated counts".to_string())
    }

    fn gap(&mut self, e: &Entry) {
        let (k, digits) = (
            e.k.expect("gap entry has k"),
            e.digits.expect("gap entry has digits"),
        );
        let expected = format!("gap < 1e-{digits}");
        let result = gap_digits(e.family, k);
        let pass = matches!(result, Ok(d) if d >= digits);
        let actual = result.map_or_else(
            |err| format!("error: {err}"),
            |d| format!("gap < 1e-{d} at k = {k}"),
        );
        self.push(&e.name, &e.reference, expected, actual, pass);
    }
}

/// Largest `d` with `upper - lower < 10^-d` at stage `k`.
fn gap_digits(family: Family, k: u32) -> Result<u32, AsymptoticsError> {
    let ledger = recursion::iterate(family, k)?;
    let record = &ledger[k as usize];
    let mut bits = 512;
    loop {
        match entropy_bounds_from(record, bits) {
            Ok(b) => {
                return Ok(hp::digits_below(
                    &b.gap(),
                    Hp::new(bits).decimal_digits() as u32,
                ))
            }
            Err(AsymptoticsError::PrecisionInsufficient { .. }) if bits < MAX_PRECISION_BITS => {
                bits *= 2
            }
            Err(e) => return Err(e),
        }
    }
}
