//! Entropy per site to a requested number of digits.

use num_bigint::BigUint;

use super::bounds::{entropy_bounds_from, EntropyBounds};
use super::{AsymptoticsError, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS, MAX_TARGET_DIGITS};
use crate::counts::BoundaryCountVector;
use crate::family::Family;
use crate::hp::{self, Float, Hp};
use crate::recursion::{self, StageRecord, DEFAULT_EXACT_CAP};

#[derive(Debug, Clone)]
pub struct EntropyEstimate {
    pub family: Family,
    /// Midpoint of the bounds at stage `k`.
    pub mu_per_vertex: Float,
    /// `mu_per_vertex` times the limit of `v/e`.
    pub mu_per_edge: Float,
    pub digits: u32,
    pub bounds: EntropyBounds,
}

impl EntropyEstimate {
    pub fn k(&self) -> u32 {
        self.bounds.k
    }

    /// `mu_v` truncated to the certified digits.
    pub fn mu_per_vertex_digits(&self) -> String {
        hp::format_truncated(&self.mu_per_vertex, self.digits)
    }

    pub fn mu_per_edge_digits(&self) -> String {
        hp::format_truncated(&self.mu_per_edge, self.digits)
    }
}

/// Smallest `k` whose bounds agree to `target_digits`, starting from the
/// default precision.
pub fn entropy(family: Family, target_digits: u32) -> Result<EntropyEstimate, AsymptoticsError> {
    entropy_with(
        family,
        target_digits,
        DEFAULT_PRECISION_BITS,
        DEFAULT_EXACT_CAP,
    )
}

pub fn entropy_with(
    family: Family,
    target_digits: u32,
    start_bits: usize,
    exact_cap: u32,
) -> Result<EntropyEstimate, AsymptoticsError> {
    entropy_from_seed(
        family,
        0,
        BoundaryCountVector::initial(),
        target_digits,
        start_bits,
        exact_cap,
    )
}

/// As [`entropy_with`], but iterating from an arbitrary vector taken to be
/// stage `seed_stage`. Useful for seeing what rounded counts lead to.
pub fn entropy_from_seed(
    family: Family,
    seed_stage: u32,
    seed: BoundaryCountVector,
    target_digits: u32,
    start_bits: usize,
    exact_cap: u32,
) -> Result<EntropyEstimate, AsymptoticsError> {
    if target_digits > MAX_TARGET_DIGITS {
        return Err(AsymptoticsError::ResourceLimit {
            what: "target digits",
            requested: target_digits.into(),
            limit: MAX_TARGET_DIGITS.into(),
        });
    }
    if target_digits == 0 {
        return Err(AsymptoticsError::Domain(
            "target digits must be at least 1".into(),
        ));
    }
    let needed = ((f64::from(target_digits) + 12.0) / std::f64::consts::LOG10_2) as usize;
    let mut bits = start_bits.max(needed).max(64);

    let mut v = seed;
    for k in seed_stage + 1..=exact_cap {
        v = recursion::step(family, &v)?;
        let record = StageRecord::new(family, k, v.clone());
        let bounds = loop {
            match entropy_bounds_from(&record, bits) {
                Err(AsymptoticsError::PrecisionInsufficient { .. })
                    if bits < MAX_PRECISION_BITS =>
                {
                    bits *= 2
                }
                other => break other?,
            }
        };
        if bounds.agreed_digits >= target_digits {
            return Ok(EntropyEstimate::from_bounds(bounds, target_digits));
        }
    }
    Err(AsymptoticsError::ResourceLimit {
        what: "stage k",
        requested: u64::from(exact_cap) + 1,
        limit: exact_cap.into(),
    })
}

impl EntropyEstimate {
    /// Midpoint estimate from bounds, reported to `digits` places.
    pub fn from_bounds(bounds: EntropyBounds, digits: u32) -> EntropyEstimate {
        let hp = Hp::new(bounds.precision_bits);
        let mid = hp.div(&hp.add(&bounds.lower, &bounds.upper), &hp.int(2));
        let (num, den) = bounds.family.vertex_over_edge_limit();
        let per_edge = hp.div_int(&hp.mul_int(&mid, &BigUint::from(num)), &BigUint::from(den));
        EntropyEstimate {
            family: bounds.family,
            mu_per_vertex: mid,
            mu_per_edge: per_edge,
            digits,
            bounds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_guard() {
        assert!(matches!(
            entropy(Family::Hanoi, 121),
            Err(AsymptoticsError::ResourceLimit { .. })
        ));
        assert!(entropy(Family::Hanoi, 0).is_err());
    }

    #[test]
    fn few_digits_need_small_k() {
        let e = entropy(Family::Hanoi, 3).unwrap();
        assert_eq!(e.k(), 2);
        assert_eq!(e.mu_per_vertex_digits(), "0.576");
    }
}
