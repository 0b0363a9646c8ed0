//! The ratios `alpha = y/x`, `beta = z/y`, `gamma = w/z` and their update map
//! `alpha' = alpha B/A`, `beta' = alpha C/B`, `gamma' = alpha D/C`.
//!
//! `A, B, C, D` are the recursions for `x', y', z', w'` divided by `x^3`,
//! `x^2 y`, `x y^2`, `y^3` and written in terms of the ratios.

use std::sync::OnceLock;

use num_bigint::BigUint;

use super::{AsymptoticsError, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};
use crate::counts::BoundaryCountVector;
use crate::family::Family;
use crate::hp::{self, Float, Hp};
use crate::poly::Poly;
use crate::recursion;

/// `(coefficient, [exp alpha, exp beta, exp gamma])`.
pub type RatioTerm = (u64, [u8; 3]);

const fn t(c: u64, a: u8, b: u8, g: u8) -> RatioTerm {
    (c, [a, b, g])
}

/// Hanoi `A_n`.
pub const HANOI_A: &[RatioTerm] = &[
    t(8, 0, 0, 0),
    t(24, 1, 0, 0),
    t(6, 1, 1, 0),
    t(30, 2, 0, 0),
    t(18, 2, 1, 0),
    t(3, 2, 2, 0),
    t(14, 3, 0, 0),
    t(15, 3, 1, 0),
    t(6, 3, 2, 0),
    t(1, 3, 3, 0),
];

/// Hanoi `B_n`.
pub const HANOI_B: &[RatioTerm] = &[
    t(8, 0, 0, 0),
    t(8, 0, 1, 0),
    t(2, 0, 1, 1),
    t(16, 1, 0, 0),
    t(24, 1, 1, 0),
    t(6, 1, 1, 1),
    t(6, 1, 2, 0),
    t(2, 1, 2, 1),
    t(10, 2, 0, 0),
    t(20, 2, 1, 0),
    t(5, 2, 1, 1),
    t(11, 2, 2, 0),
    t(4, 2, 2, 1),
    t(2, 2, 3, 0),
    t(1, 2, 3, 1),
];

/// Hanoi `C_n`.
pub const HANOI_C: &[RatioTerm] = &[
    t(8, 0, 0, 0),
    t(16, 0, 1, 0),
    t(4, 0, 1, 1),
    t(10, 0, 2, 0),
    t(6, 0, 2, 1),
    t(1, 0, 2, 2),
    t(8, 1, 0, 0),
    t(22, 1, 1, 0),
    t(6, 1, 1, 1),
    t(20, 1, 2, 0),
    t(12, 1, 2, 1),
    t(2, 1, 2, 2),
    t(5, 1, 3, 0),
    t(4, 1, 3, 1),
    t(1, 1, 3, 2),
];

/// Hanoi `D_n`.
pub const HANOI_D: &[RatioTerm] = &[
    t(8, 0, 0, 0),
    t(24, 0, 1, 0),
    t(6, 0, 1, 1),
    t(30, 0, 2, 0),
    t(18, 0, 2, 1),
    t(3, 0, 2, 2),
    t(14, 0, 3, 0),
    t(15, 0, 3, 1),
    t(6, 0, 3, 2),
    t(1, 0, 3, 3),
];

/// The four update polynomials of one family, terms sorted by exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioPolynomials {
    pub a: Vec<RatioTerm>,
    pub b: Vec<RatioTerm>,
    pub c: Vec<RatioTerm>,
    pub d: Vec<RatioTerm>,
}

fn normalized(terms: &[RatioTerm]) -> Vec<RatioTerm> {
    let mut v: Vec<RatioTerm> = terms
        .iter()
        .map(|&(c, e)| (e, c))
        .fold(std::collections::BTreeMap::new(), |mut acc, (e, c)| {
            *acc.entry(e).or_insert(0) += c;
            acc
        })
        .into_iter()
        .map(|(e, c)| (c, e))
        .collect();
    v.retain(|&(c, _)| c != 0);
    v
}

impl RatioPolynomials {
    pub fn printed_hanoi() -> Self {
        RatioPolynomials {
            a: normalized(HANOI_A),
            b: normalized(HANOI_B),
            c: normalized(HANOI_C),
            d: normalized(HANOI_D),
        }
    }

    /// Normalizes the structural recursions: with `y = alpha x`,
    /// `z = alpha beta x`, `w = alpha beta gamma x`, the monomial
    /// `x^a y^b z^c w^d` becomes `x^3 alpha^(b+c+d) beta^(c+d) gamma^d`, and
    /// component `k` is divided by `x^3 alpha^k`.
    pub fn derived(family: Family) -> Self {
        let symbolic = recursion::structural(family, &Poly::vars());
        let [a, b, c, d] = [0usize, 1, 2, 3].map(|k| {
            let terms: Vec<RatioTerm> = symbolic[k]
                .terms()
                .map(|([_, y, z, w], coef)| {
                    let alpha = y + z + w;
                    assert!(
                        alpha as usize >= k,
                        "{family} component {k} has a term without enough ratio factors"
                    );
                    (coef, [alpha - k as u8, z + w, w])
                })
                .collect();
            normalized(&terms)
        });
        RatioPolynomials { a, b, c, d }
    }

    /// Printed polynomials for Hanoi, derived ones for `X`.
    pub fn for_family(family: Family) -> &'static RatioPolynomials {
        static HANOI: OnceLock<RatioPolynomials> = OnceLock::new();
        static SIERPX: OnceLock<RatioPolynomials> = OnceLock::new();
        match family {
            Family::Hanoi => HANOI.get_or_init(RatioPolynomials::printed_hanoi),
            Family::SierpX => SIERPX.get_or_init(|| RatioPolynomials::derived(Family::SierpX)),
        }
    }
}

pub fn eval_ratio_poly(
    terms: &[RatioTerm],
    alpha: &Float,
    beta: &Float,
    gamma: &Float,
    hp: &Hp,
) -> Float {
    let powers = |x: &Float| {
        let mut p = vec![hp.int(1)];
        for i in 1..4 {
            p.push(hp.mul(&p[i - 1], x));
        }
        p
    };
    let (pa, pb, pg) = (powers(alpha), powers(beta), powers(gamma));
    terms.iter().fold(hp.int(0), |acc, &(c, [i, j, k])| {
        let term = hp.mul(&hp.mul(&pa[i as usize], &pb[j as usize]), &pg[k as usize]);
        hp.add(&acc, &hp.mul(&term, &hp.int(c)))
    })
}

/// Ratios at one stage.
#[derive(Debug, Clone)]
pub struct RatioState {
    pub family: Family,
    pub n: u32,
    pub alpha: Float,
    pub beta: Float,
    pub gamma: Float,
    /// `gamma - alpha`.
    pub epsilon: Float,
    pub precision_bits: usize,
}

#[derive(Debug, Clone)]
pub struct RatioUpdateCoefficients {
    pub a: Float,
    pub b: Float,
    pub c: Float,
    pub d: Float,
}

impl RatioState {
    fn new(family: Family, n: u32, alpha: Float, beta: Float, gamma: Float, hp: &Hp) -> Self {
        RatioState {
            family,
            n,
            epsilon: hp.sub(&gamma, &alpha),
            alpha,
            beta,
            gamma,
            precision_bits: hp.bits(),
        }
    }

    /// `1/2 < alpha <= beta <= gamma < 1`, with order violations up to `tol` tolerated.
    pub fn ordering_holds(&self, tol: &Float) -> bool {
        let hp = Hp::new(self.precision_bits);
        let half = hp.div(&hp.int(1), &hp.int(2));
        self.alpha > half
            && hp.sub(&self.alpha, &self.beta) <= *tol
            && hp.sub(&self.beta, &self.gamma) <= *tol
            && self.gamma < hp.int(1)
    }

    /// The three ratios rounded to `digits` decimal places.
    pub fn rounded(&self, digits: u32) -> [String; 3] {
        [&self.alpha, &self.beta, &self.gamma].map(|r| hp::format_rounded(r, digits))
    }
}

/// Ratios from exact counts. Defined from stage 1 on; stage 0 has `y = 0`.
pub fn ratios_from_counts(
    family: Family,
    n: u32,
    v: &BoundaryCountVector,
    precision_bits: usize,
) -> Result<RatioState, AsymptoticsError> {
    let zero = BigUint::default();
    if v.x == zero || v.y == zero || v.z == zero {
        return Err(AsymptoticsError::Domain(format!(
            "ratios need x, y, z > 0 and are defined for n >= 1 only (got stage {n})"
        )));
    }
    let hp = Hp::new(precision_bits);
    Ok(RatioState::new(
        family,
        n,
        hp.ratio(&v.y, &v.x),
        hp.ratio(&v.z, &v.y),
        hp.ratio(&v.w, &v.z),
        &hp,
    ))
}

pub fn update_coefficients(s: &RatioState) -> RatioUpdateCoefficients {
    let hp = Hp::new(s.precision_bits);
    let polys = RatioPolynomials::for_family(s.family);
    let eval = |terms: &[RatioTerm]| eval_ratio_poly(terms, &s.alpha, &s.beta, &s.gamma, &hp);
    RatioUpdateCoefficients {
        a: eval(&polys.a),
        b: eval(&polys.b),
        c: eval(&polys.c),
        d: eval(&polys.d),
    }
}

/// Advances the ratios one stage in floating point.
pub fn ratio_step(s: &RatioState) -> Result<RatioState, AsymptoticsError> {
    let hp = Hp::new(s.precision_bits);
    let RatioUpdateCoefficients { a, b, c, d } = update_coefficients(s);
    let next = RatioState::new(
        s.family,
        s.n + 1,
        hp.mul(&s.alpha, &hp.div(&b, &a)),
        hp.mul(&s.alpha, &hp.div(&c, &b)),
        hp.mul(&s.alpha, &hp.div(&d, &c)),
        &hp,
    );
    if !next.ordering_holds(&hp.tolerance()) {
        return Err(AsymptoticsError::PrecisionInsufficient {
            bits: hp.bits(),
            detail: format!("the ratio ordering at stage {}", next.n),
        });
    }
    Ok(next)
}

/// Exact-integer ratios for stages `1..=n_max`.
pub fn exact_ratio_path(
    family: Family,
    n_max: u32,
    precision_bits: usize,
) -> Result<Vec<RatioState>, AsymptoticsError> {
    let ledger = recursion::iterate(family, n_max)?;
    ledger
        .iter()
        .skip(1)
        .map(|r| ratios_from_counts(family, r.n, &r.counts, precision_bits))
        .collect()
}

/// Floating-point ratios for stages `1..=n_max`, seeded with the exact stage-1 ratios.
pub fn float_ratio_path(
    family: Family,
    n_max: u32,
    precision_bits: usize,
) -> Result<Vec<RatioState>, AsymptoticsError> {
    let first = recursion::iterate(family, 1)?.pop().expect("stage 1");
    let mut path = vec![ratios_from_counts(
        family,
        1,
        &first.counts,
        precision_bits,
    )?];
    while path.len() < n_max as usize {
        let next = ratio_step(path.last().expect("non-empty"))?;
        path.push(next);
    }
    Ok(path)
}

/// Common limit of the ratios, enclosed by `[alpha_n, gamma_n]` once the
/// ordering `alpha_n < beta_n < gamma_n` holds (from stage 2 on).
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub family: Family,
    pub value: Float,
    pub radius: Float,
    pub stage: u32,
    pub precision_bits: usize,
    /// `gamma_n - alpha_n` for every stage visited, starting at stage 1.
    pub widths: Vec<Float>,
}

const MAX_RATIO_STEPS: u32 = 64;

pub fn ratio_fixed_point(
    family: Family,
    target_digits: u32,
) -> Result<FixedPoint, AsymptoticsError> {
    if target_digits == 0 {
        return Err(AsymptoticsError::Domain(
            "target digits must be at least 1".into(),
        ));
    }
    let mut bits = DEFAULT_PRECISION_BITS.max((f64::from(target_digits) * 3.33) as usize + 128);
    loop {
        match fixed_point_at(family, target_digits, bits) {
            Err(AsymptoticsError::PrecisionInsufficient { .. }) if bits < MAX_PRECISION_BITS => {
                bits *= 2
            }
            other => return other,
        }
    }
}

fn fixed_point_at(
    family: Family,
    target_digits: u32,
    bits: usize,
) -> Result<FixedPoint, AsymptoticsError> {
    let hp = Hp::new(bits);
    let threshold = hp.pow10_neg(target_digits);
    let first = recursion::iterate(family, 1)?.pop().expect("stage 1");
    let mut s = ratios_from_counts(family, 1, &first.counts, bits)?;
    let mut widths = vec![s.epsilon.clone()];
    for _ in 0..MAX_RATIO_STEPS {
        if s.n >= 2 && s.epsilon < threshold {
            let two = hp.int(2);
            let radius = hp.add(&hp.div(&s.epsilon, &two), &hp.tolerance());
            return Ok(FixedPoint {
                family,
                value: hp.div(&hp.add(&s.alpha, &s.gamma), &two),
                radius,
                stage: s.n,
                precision_bits: bits,
                widths,
            });
        }
        s = ratio_step(&s)?;
        widths.push(s.epsilon.clone());
    }
    Err(AsymptoticsError::ConvergenceFailure {
        iterations: MAX_RATIO_STEPS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hanoi_printed_polynomials_match_derivation() {
        assert_eq!(
            RatioPolynomials::printed_hanoi(),
            RatioPolynomials::derived(Family::Hanoi)
        );
    }

    #[test]
    fn hanoi_constant_terms_are_eight() {
        let hp = Hp::new(128);
        let zero = hp.int(0);
        let polys = RatioPolynomials::for_family(Family::Hanoi);
        for terms in [&polys.a, &polys.b, &polys.c, &polys.d] {
            let v = eval_ratio_poly(terms, &zero, &zero, &zero, &hp);
            assert_eq!(hp::format_truncated(&v, 0), "8");
        }
    }

    #[test]
    fn stage_zero_is_out_of_domain() {
        let err =
            ratios_from_counts(Family::Hanoi, 0, &BoundaryCountVector::initial(), 128).unwrap_err();
        assert!(matches!(err, AsymptoticsError::Domain(_)));
    }

    #[test]
    fn zero_target_rejected() {
        assert!(ratio_fixed_point(Family::Hanoi, 0).is_err());
    }
}
