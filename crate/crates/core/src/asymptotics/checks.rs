//! Exact-integer sweeps over the ledger: ratio ordering and monotonicity,
//! the contraction of `gamma - alpha`, and the count sandwich.

use num_bigint::BigInt;
use serde::Serialize;

use super::bounds::bound_m_hanoi;
use super::AsymptoticsError;
use crate::family::Family;
use crate::recursion::{self, StageRecord};

/// Stages at which each property fails. Empty lists mean no violations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioSweep {
    pub family: Family,
    pub n_max: u32,
    /// `1/2 < alpha < beta < gamma < 1`, checked for `2 <= n <= n_max`.
    pub ordering: Vec<u32>,
    /// `alpha_(n+1) > alpha_n` for `1 <= n < n_max`.
    pub alpha_increasing: Vec<u32>,
    /// `gamma_(n+1) < gamma_n` for `1 <= n < n_max`.
    pub gamma_decreasing: Vec<u32>,
    /// `eps_(n+1) < 2 eps_n^2` for `2 <= n < n_max`.
    pub contraction: Vec<u32>,
}

impl RatioSweep {
    pub fn clean(&self) -> bool {
        self.ordering.is_empty()
            && self.alpha_increasing.is_empty()
            && self.gamma_decreasing.is_empty()
            && self.contraction.is_empty()
    }
}

pub fn ratio_sweep(family: Family, n_max: u32) -> Result<RatioSweep, AsymptoticsError> {
    let ledger = recursion::iterate(family, n_max)?;
    Ok(ratio_sweep_on(family, &ledger))
}

/// As [`ratio_sweep`] on a ledger supplied by the caller.
pub fn ratio_sweep_on(family: Family, ledger: &[StageRecord]) -> RatioSweep {
    let mut out = RatioSweep {
        family,
        n_max: ledger.last().map_or(0, |r| r.n),
        ordering: Vec::new(),
        alpha_increasing: Vec::new(),
        gamma_decreasing: Vec::new(),
        contraction: Vec::new(),
    };
    let stages: Vec<&StageRecord> = ledger.iter().filter(|r| r.n >= 1).collect();
    for r in &stages {
        let v = &r.counts;
        if r.n >= 2 {
            let ok = &v.y * 2u32 > v.x
                && &v.y * &v.y < &v.x * &v.z
                && &v.z * &v.z < &v.y * &v.w
                && v.w < v.z;
            if !ok {
                out.ordering.push(r.n);
            }
        }
    }
    for pair in stages.windows(2) {
        let (a, b, n) = (&pair[0].counts, &pair[1].counts, pair[0].n);
        if &b.y * &a.x <= &a.y * &b.x {
            out.alpha_increasing.push(n);
        }
        if &b.w * &a.z >= &a.w * &b.z {
            out.gamma_decreasing.push(n);
        }
        if n >= 2 {
            // eps = (w x - y z) / (x z); both sides scaled by the positive denominators.
            // Signed, since a corrupted ledger may have gamma < alpha.
            let signed = |u: num_bigint::BigUint| BigInt::from(u);
            let ea = signed(&a.w * &a.x) - signed(&a.y * &a.z);
            let eb = signed(&b.w * &b.x) - signed(&b.y * &b.z);
            let da = signed(&a.x * &a.z);
            if eb * &da * &da >= ea.pow(2) * 2 * signed(&b.x * &b.z) {
                out.contraction.push(n);
            }
        }
    }
    out
}

/// Pairs `(k, n)` with `1 <= k <= n <= n_max` where the count sandwich fails.
pub fn sandwich_violations(n_max: u32) -> Result<Vec<(u32, u32)>, AsymptoticsError> {
    let ledger = recursion::iterate(Family::Hanoi, n_max)?;
    let mut bad = Vec::new();
    for n in 1..=n_max {
        for k in 1..=n {
            if !bound_m_hanoi(&ledger, k, n, 128)?.sandwiched() {
                bad.push((k, n));
            }
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counts::BoundaryCountVector;

    #[test]
    fn sweeps_are_clean() {
        for family in Family::ALL {
            let s = ratio_sweep(family, 8).unwrap();
            assert!(s.clean(), "{s:?}");
        }
        assert!(sandwich_violations(6).unwrap().is_empty());
    }

    #[test]
    fn broken_ledger_is_reported() {
        let mut ledger = recursion::iterate(Family::Hanoi, 4).unwrap();
        let v = &ledger[3].counts;
        ledger[3] = StageRecord::new(
            Family::Hanoi,
            3,
            BoundaryCountVector::new(v.x.clone(), v.x.clone(), v.z.clone(), v.w.clone()),
        );
        let s = ratio_sweep_on(Family::Hanoi, &ledger);
        assert_eq!(s.ordering, vec![3]);
        assert!(!s.clean());
    }
}
