//! Exact boundary-count recursions for `H_n` and `X_n`.
//!
//! Stage `n + 1` is three copies of stage `n` plus connecting edges (and, for
//! `X`, a hub). Classifying the matchings of the new graph by which connecting
//! edges they use, each copy contributes one of `x, y, S, R, T, P` depending on
//! how many of its inner corners are forced free and whether its outer corner
//! is covered. These case sums are the *structural* forms below. Their
//! expansions as cubic polynomials in `(x, y, z, w)` are tabulated separately
//! and cross-checked, numerically at every step and symbolically once.

use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::counts::{decimal, AggregateCounts, BoundaryCountVector};
use crate::family::Family;
use crate::graphs::{self, GraphError};
use crate::oracle::{self, Budget, OracleError};
use crate::poly::{format_monomial, Monomial, Poly, Semiring};

/// Largest stage [`iterate`] computes unless asked otherwise.
pub const DEFAULT_EXACT_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecursionError {
    #[error(
        "{family} {component}': structural form gives {structural}, expanded form gives {expanded}"
    )]
    CoefficientDiscrepancy {
        family: Family,
        component: char,
        structural: String,
        expanded: String,
    },
    #[error("stage {stage} exceeds the exact cap of {cap}")]
    ResourceLimit { stage: u32, cap: u32 },
    #[error("recursion input must not be the zero vector")]
    ZeroInput,
    #[error("{family} stage {stage}: oracle counts {oracle} but recursion gives {recursion}")]
    OracleMismatch {
        family: Family,
        stage: u32,
        oracle: String,
        recursion: String,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One stage of the exact ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub family: Family,
    pub n: u32,
    pub counts: BoundaryCountVector,
    pub aggregates: AggregateCounts,
    #[serde(with = "decimal")]
    pub m: BigUint,
}

impl StageRecord {
    pub fn new(family: Family, n: u32, counts: BoundaryCountVector) -> Self {
        StageRecord {
            family,
            n,
            aggregates: counts.aggregates(),
            m: counts.total(),
            counts,
        }
    }

    /// `m` and the aggregates agree with the stored counts.
    pub fn is_consistent(&self) -> bool {
        self.m == self.counts.total() && self.aggregates == self.counts.aggregates()
    }
}

pub fn total_count(v: &BoundaryCountVector) -> BigUint {
    v.total()
}

fn prod<R: Semiring>(factors: &[&R]) -> R {
    let (first, rest) = factors.split_first().expect("non-empty product");
    rest.iter().fold((*first).clone(), |acc, f| acc.mul(f))
}

fn sum<R: Semiring>(terms: Vec<R>) -> R {
    let mut it = terms.into_iter();
    let first = it.next().expect("non-empty sum");
    it.fold(first, |acc, t| acc.add(&t))
}

struct Parts<R> {
    x: R,
    y: R,
    s: R,
    r: R,
    t: R,
    p: R,
}

impl<R: Semiring> Parts<R> {
    fn of([x, y, z, w]: &[R; 4]) -> Self {
        Parts {
            s: x.add(y),
            r: y.add(z),
            t: x.add(&y.times(2)).add(z),
            p: y.add(&z.times(2)).add(w),
            x: x.clone(),
            y: y.clone(),
        }
    }
}

/// Structural recursion for `H_{n+1}`.
pub fn hanoi_structural<R: Semiring>(v: &[R; 4]) -> [R; 4] {
    let Parts { x, y, s, r, t, p } = Parts::of(v);
    [
        sum(vec![
            prod(&[&t, &t, &t]),
            prod(&[&s, &s, &t]).times(3),
            prod(&[&x, &s, &s]).times(3),
            prod(&[&x, &x, &x]),
        ]),
        sum(vec![
            prod(&[&p, &t, &t]),
            prod(&[&r, &s, &t]).times(2),
            prod(&[&p, &s, &s]),
            prod(&[&y, &s, &s]),
            prod(&[&x, &r, &s]).times(2),
            prod(&[&x, &x, &y]),
        ]),
        sum(vec![
            prod(&[&p, &p, &t]),
            prod(&[&r, &r, &t]),
            prod(&[&p, &r, &s]).times(2),
            prod(&[&y, &r, &s]).times(2),
            prod(&[&x, &r, &r]),
            prod(&[&x, &y, &y]),
        ]),
        sum(vec![
            prod(&[&p, &p, &p]),
            prod(&[&r, &r, &p]).times(3),
            prod(&[&y, &r, &r]).times(3),
            prod(&[&y, &y, &y]),
        ]),
    ]
}

/// Structural recursion for `X_{n+1}`: the Hanoi cases with the hub free,
/// plus the cases with the hub matched to one of the six inner corners.
pub fn sierpx_structural<R: Semiring>(v: &[R; 4]) -> [R; 4] {
    let Parts { x, y, s, r, t, p } = Parts::of(v);
    [
        sum(vec![
            prod(&[&t, &t, &t]),
            prod(&[&s, &s, &t]).times(3),
            prod(&[&s, &t, &t]).times(6),
            prod(&[&x, &s, &s]).times(3),
            prod(&[&x, &s, &t]).times(6),
            prod(&[&s, &s, &s]).times(6),
            prod(&[&x, &x, &s]).times(6),
            prod(&[&x, &x, &x]),
        ]),
        sum(vec![
            prod(&[&t, &t, &p]),
            prod(&[&s, &r, &t]).times(2),
            prod(&[&s, &s, &p]),
            prod(&[&r, &t, &t]).times(2),
            prod(&[&s, &t, &p]).times(4),
            prod(&[&x, &s, &r]).times(2),
            prod(&[&y, &s, &s]),
            prod(&[&x, &r, &t]).times(2),
            prod(&[&s, &s, &r]).times(6),
            prod(&[&y, &s, &t]).times(2),
            prod(&[&x, &s, &p]).times(2),
            prod(&[&x, &y, &s]).times(4),
            prod(&[&x, &x, &r]).times(2),
            prod(&[&x, &x, &y]),
        ]),
        sum(vec![
            prod(&[&t, &p, &p]),
            prod(&[&s, &r, &p]).times(2),
            prod(&[&r, &r, &t]),
            prod(&[&s, &p, &p]).times(2),
            prod(&[&r, &t, &p]).times(4),
            prod(&[&y, &s, &r]).times(2),
            prod(&[&x, &r, &r]),
            prod(&[&y, &s, &p]).times(2),
            prod(&[&s, &r, &r]).times(6),
            prod(&[&x, &r, &p]).times(2),
            prod(&[&y, &r, &t]).times(2),
            prod(&[&x, &y, &r]).times(4),
            prod(&[&y, &y, &s]).times(2),
            prod(&[&x, &y, &y]),
        ]),
        sum(vec![
            prod(&[&p, &p, &p]),
            prod(&[&r, &r, &p]).times(3),
            prod(&[&r, &p, &p]).times(6),
            prod(&[&y, &r, &r]).times(3),
            prod(&[&y, &r, &p]).times(6),
            prod(&[&r, &r, &r]).times(6),
            prod(&[&y, &y, &r]).times(6),
            prod(&[&y, &y, &y]),
        ]),
    ]
}

pub fn structural<R: Semiring>(family: Family, v: &[R; 4]) -> [R; 4] {
    match family {
        Family::Hanoi => hanoi_structural(v),
        Family::SierpX => sierpx_structural(v),
    }
}

type Table = &'static [(u32, Monomial)];

const X: u8 = 1;

// Monomials are written as exponents of [x, y, z, w].
const fn m(x: u8, y: u8, z: u8, w: u8) -> Monomial {
    [x, y, z, w]
}

/// Expanded Hanoi recursions.
pub const HANOI_EXPANDED: [Table; 4] = [
    &[
        (8, m(3, 0, 0, 0)),
        (24, m(2, X, 0, 0)),
        (6, m(2, 0, X, 0)),
        (30, m(X, 2, 0, 0)),
        (18, m(X, X, X, 0)),
        (3, m(X, 0, 2, 0)),
        (14, m(0, 3, 0, 0)),
        (15, m(0, 2, X, 0)),
        (6, m(0, X, 2, 0)),
        (1, m(0, 0, 3, 0)),
    ],
    &[
        (8, m(2, X, 0, 0)),
        (8, m(2, 0, X, 0)),
        (2, m(2, 0, 0, X)),
        (16, m(X, 2, 0, 0)),
        (24, m(X, X, X, 0)),
        (6, m(X, X, 0, X)),
        (6, m(X, 0, 2, 0)),
        (2, m(X, 0, X, X)),
        (10, m(0, 3, 0, 0)),
        (20, m(0, 2, X, 0)),
        (5, m(0, 2, 0, X)),
        (11, m(0, X, 2, 0)),
        (4, m(0, X, X, X)),
        (2, m(0, 0, 3, 0)),
        (1, m(0, 0, 2, X)),
    ],
    &[
        (8, m(X, 2, 0, 0)),
        (16, m(X, X, X, 0)),
        (4, m(X, X, 0, X)),
        (10, m(X, 0, 2, 0)),
        (6, m(X, 0, X, X)),
        (1, m(X, 0, 0, 2)),
        (8, m(0, 3, 0, 0)),
        (22, m(0, 2, X, 0)),
        (6, m(0, 2, 0, X)),
        (20, m(0, X, 2, 0)),
        (12, m(0, X, X, X)),
        (2, m(0, X, 0, 2)),
        (5, m(0, 0, 3, 0)),
        (4, m(0, 0, 2, X)),
        (1, m(0, 0, X, 2)),
    ],
    &[
        (8, m(0, 3, 0, 0)),
        (24, m(0, 2, X, 0)),
        (6, m(0, 2, 0, X)),
        (30, m(0, X, 2, 0)),
        (18, m(0, X, X, X)),
        (3, m(0, X, 0, 2)),
        (14, m(0, 0, 3, 0)),
        (15, m(0, 0, 2, X)),
        (6, m(0, 0, X, 2)),
        (1, m(0, 0, 0, 3)),
    ],
];

/// Expanded `X` recursions exactly as they appear in the published appendix,
/// including the misprinted `y` term (see [`SIERPX_EMENDATIONS`]).
pub const SIERPX_EXPANDED_AS_PRINTED: [Table; 4] = [
    &[
        (32, m(3, 0, 0, 0)),
        (96, m(2, X, 0, 0)),
        (24, m(2, 0, X, 0)),
        (108, m(X, 2, 0, 0)),
        (60, m(X, X, X, 0)),
        (9, m(X, 0, 2, 0)),
        (44, m(0, 3, 0, 0)),
        (39, m(0, 2, X, 0)),
        (12, m(0, X, 2, 0)),
        (1, m(0, 0, 3, 0)),
    ],
    &[
        (32, m(2, X, 0, 0)),
        (32, m(2, 0, X, 0)),
        (8, m(2, 0, 0, X)),
        (64, m(X, 2, 0, 0)),
        (88, m(X, X, X, 0)),
        (20, m(X, 2, 0, 0)),
        (20, m(X, 0, 2, 0)),
        (6, m(X, 0, X, X)),
        (36, m(0, 3, 0, 0)),
        (64, m(0, 2, X, 0)),
        (13, m(0, 2, 0, X)),
        (29, m(0, X, 2, 0)),
        (8, m(0, X, X, X)),
        (4, m(0, 0, 3, 0)),
        (1, m(0, 0, 2, X)),
    ],
    &[
        (32, m(X, 2, 0, 0)),
        (64, m(X, X, X, 0)),
        (16, m(X, X, 0, X)),
        (36, m(X, 0, 2, 0)),
        (20, m(X, 0, X, X)),
        (1, m(0, 0, X, 2)),
        (32, m(0, 3, 0, 0)),
        (80, m(0, 2, X, 0)),
        (20, m(0, 2, 0, X)),
        (64, m(0, X, 2, 0)),
        (32, m(0, X, X, X)),
        (4, m(0, X, 0, 2)),
        (13, m(0, 0, 3, 0)),
        (8, m(0, 0, 2, X)),
        (3, m(X, 0, 0, 2)),
    ],
    &[
        (32, m(0, 3, 0, 0)),
        (96, m(0, 2, X, 0)),
        (24, m(0, 2, 0, X)),
        (108, m(0, X, 2, 0)),
        (60, m(0, X, X, X)),
        (9, m(0, X, 0, 2)),
        (44, m(0, 0, 3, 0)),
        (39, m(0, 0, 2, X)),
        (12, m(0, 0, X, 2)),
        (1, m(0, 0, 0, 3)),
    ],
];

/// A single-term correction to a printed expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emendation {
    pub component: usize,
    pub term: usize,
    pub printed: Monomial,
    pub corrected: Monomial,
}

/// In the printed `y'`, the second `20xy^2` (right after `88xyz`) must be `20xyw`.
pub const SIERPX_EMENDATIONS: &[Emendation] = &[Emendation {
    component: 1,
    term: 5,
    printed: m(X, 2, 0, 0),
    corrected: m(X, X, 0, X),
}];

const NAMES: [char; 4] = ['x', 'y', 'z', 'w'];

fn corrected_sierpx() -> &'static [Vec<(u32, Monomial)>; 4] {
    static CORRECTED: OnceLock<[Vec<(u32, Monomial)>; 4]> = OnceLock::new();
    CORRECTED.get_or_init(|| {
        let mut tables = SIERPX_EXPANDED_AS_PRINTED.map(|t| t.to_vec());
        for e in SIERPX_EMENDATIONS {
            let term = &mut tables[e.component][e.term];
            assert_eq!(
                term.1, e.printed,
                "emendation does not match the printed table"
            );
            term.1 = e.corrected;
        }
        tables
    })
}

/// Expanded recursions used for cross-checking: printed for Hanoi, emended for `X`.
pub fn expanded_tables(family: Family) -> [&'static [(u32, Monomial)]; 4] {
    match family {
        Family::Hanoi => HANOI_EXPANDED,
        Family::SierpX => {
            let t = corrected_sierpx();
            [&t[0][..], &t[1][..], &t[2][..], &t[3][..]]
        }
    }
}

pub fn eval_table(table: &[(u32, Monomial)], v: &[BigUint; 4]) -> BigUint {
    table
        .iter()
        .map(|&(c, mono)| {
            mono.iter()
                .zip(v)
                .fold(BigUint::from(c), |acc, (&e, base)| {
                    acc * base.pow(u32::from(e))
                })
        })
        .sum()
}

fn as_array(v: &BoundaryCountVector) -> [BigUint; 4] {
    [v.x.clone(), v.y.clone(), v.z.clone(), v.w.clone()]
}

fn from_array([x, y, z, w]: [BigUint; 4]) -> BoundaryCountVector {
    BoundaryCountVector { x, y, z, w }
}

fn step_checked(
    family: Family,
    v: &BoundaryCountVector,
) -> Result<BoundaryCountVector, RecursionError> {
    if v.is_zero() {
        return Err(RecursionError::ZeroInput);
    }
    let input = as_array(v);
    let next = structural(family, &input);
    for ((component, value), table) in NAMES.iter().zip(&next).zip(expanded_tables(family)) {
        let expanded = eval_table(table, &input);
        if &expanded != value {
            return Err(RecursionError::CoefficientDiscrepancy {
                family,
                component: *component,
                structural: value.to_string(),
                expanded: expanded.to_string(),
            });
        }
    }
    Ok(from_array(next))
}

/// One Hanoi step; the structural and expanded forms must agree.
pub fn step_hanoi(v: &BoundaryCountVector) -> Result<BoundaryCountVector, RecursionError> {
    step_checked(Family::Hanoi, v)
}

/// One `X` step from the structural form, cross-checked against the emended
/// expansion.
pub fn step_sierpx(v: &BoundaryCountVector) -> Result<BoundaryCountVector, RecursionError> {
    step_checked(Family::SierpX, v)
}

pub fn step(
    family: Family,
    v: &BoundaryCountVector,
) -> Result<BoundaryCountVector, RecursionError> {
    step_checked(family, v)
}

pub fn iterate(family: Family, n_max: u32) -> Result<Vec<StageRecord>, RecursionError> {
    iterate_capped(family, n_max, DEFAULT_EXACT_CAP)
}

/// Stage records `0..=n_max`, starting from the triangle counts `(1, 0, 1, 0)`.
pub fn iterate_capped(
    family: Family,
    n_max: u32,
    cap: u32,
) -> Result<Vec<StageRecord>, RecursionError> {
    if n_max > cap {
        return Err(RecursionError::ResourceLimit { stage: n_max, cap });
    }
    let mut records = Vec::with_capacity(n_max as usize + 1);
    let mut v = BoundaryCountVector::initial();
    for n in 0..=n_max {
        if n > 0 {
            v = step(family, &v)?;
        }
        records.push(StageRecord::new(family, n, v.clone()));
    }
    Ok(records)
}

/// Disagreement between a tabulated expansion and the structural form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionDiagnostic {
    pub family: Family,
    pub component: char,
    pub monomial: String,
    pub structural: u64,
    pub tabulated: u64,
}

impl std::fmt::Display for ExpansionDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}': coefficient of {} is {} in the structural form, {} as tabulated",
            self.family, self.component, self.monomial, self.structural, self.tabulated
        )
    }
}

fn diagnose(family: Family, tables: [&[(u32, Monomial)]; 4]) -> Vec<ExpansionDiagnostic> {
    let symbolic = structural(family, &Poly::vars());
    symbolic
        .iter()
        .zip(tables)
        .zip(NAMES)
        .flat_map(|((poly, table), component)| {
            poly.differences(&Poly::from_terms(table)).into_iter().map(
                move |(mono, structural, tabulated)| ExpansionDiagnostic {
                    family,
                    component,
                    monomial: format_monomial(mono),
                    structural,
                    tabulated,
                },
            )
        })
        .collect()
}

/// Symbolic comparison of the structural forms with the tables used in
/// [`step`]. Empty for a correct build.
pub fn expansion_mismatches(family: Family) -> Vec<ExpansionDiagnostic> {
    diagnose(family, expanded_tables(family))
}

/// Symbolic differences between the `X` structural forms and the appendix
/// expansion as printed, before emendation. Reported, never asserted.
pub fn printed_sierpx_diagnostics() -> Vec<ExpansionDiagnostic> {
    diagnose(Family::SierpX, SIERPX_EXPANDED_AS_PRINTED)
}

/// Compares the recursion ledger with direct oracle counts for stages `0..=n_max`.
pub fn cross_check_oracle(
    family: Family,
    n_max: u32,
    budget: &Budget,
) -> Result<(), RecursionError> {
    let records = iterate(family, n_max)?;
    for record in &records {
        let g = graphs::build(family, record.n)?;
        let counted = oracle::count_by_boundary(&g, budget)?.counts;
        if counted != record.counts {
            return Err(RecursionError::OracleMismatch {
                family,
                stage: record.n,
                oracle: format!("{:?}", counted.components().map(ToString::to_string)),
                recursion: format!("{:?}", record.counts.components().map(ToString::to_string)),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u64, y: u64, z: u64, w: u64) -> BoundaryCountVector {
        BoundaryCountVector::new(x, y, z, w)
    }

    #[test]
    fn hanoi_first_steps() {
        assert_eq!(
            step_hanoi(&BoundaryCountVector::initial()).unwrap(),
            v(18, 16, 15, 14)
        );
        assert_eq!(
            step_hanoi(&v(18, 16, 15, 14)).unwrap(),
            v(568301, 521504, 478579, 439204)
        );
    }

    #[test]
    fn sierpx_first_steps() {
        assert_eq!(
            step_sierpx(&BoundaryCountVector::initial()).unwrap(),
            v(66, 56, 49, 44)
        );
        assert_eq!(
            step_sierpx(&v(66, 56, 49, 44)).unwrap(),
            v(87837347, 76020480, 65794261, 56944448)
        );
    }

    #[test]
    fn zero_input_rejected() {
        assert_eq!(step_hanoi(&v(0, 0, 0, 0)), Err(RecursionError::ZeroInput));
    }

    #[test]
    fn iterate_respects_cap() {
        assert!(matches!(
            iterate(Family::Hanoi, 13),
            Err(RecursionError::ResourceLimit { stage: 13, cap: 12 })
        ));
        let records = iterate(Family::Hanoi, 0).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].m, 4u32.into());
    }

    #[test]
    fn tabulated_expansions_match_structural_forms() {
        assert!(expansion_mismatches(Family::Hanoi).is_empty());
        assert!(expansion_mismatches(Family::SierpX).is_empty());
    }

    #[test]
    fn printed_sierpx_expansion_has_one_misprint() {
        let diags = printed_sierpx_diagnostics();
        let summary: Vec<(char, &str, u64, u64)> = diags
            .iter()
            .map(|d| (d.component, d.monomial.as_str(), d.structural, d.tabulated))
            .collect();
        assert_eq!(summary, vec![('y', "xyw", 20, 0), ('y', "xy^2", 64, 84)]);
    }

    #[test]
    fn corrupted_table_is_reported() {
        // Evaluating a mis-transcribed table against the structural form must differ.
        let mut table = HANOI_EXPANDED[0].to_vec();
        table[0].0 = 7;
        let input = [18u32, 16, 15, 14].map(BigUint::from);
        assert_ne!(eval_table(&table, &input), hanoi_structural(&input)[0]);
    }
}
