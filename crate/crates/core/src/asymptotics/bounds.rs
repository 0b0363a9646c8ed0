//! Two-sided bounds on `m(H_n)` and on the entropy per site.

use num_bigint::BigUint;

use super::{stage, AsymptoticsError, GUARD_DIGITS};
use crate::family::Family;
use crate::hp::{self, Float, Hp};
use crate::recursion::{self, StageRecord};

use super::ratios::{eval_ratio_poly, RatioPolynomials};

/// Bounds on `m(H_n)` built from stage `k`, in natural-log space, plus the
/// exact verdict against the ledger's `m(H_n)`.
#[derive(Debug, Clone)]
pub struct CountBounds {
    pub k: u32,
    pub n: u32,
    pub ln_lower: Float,
    pub ln_upper: Float,
    pub ln_m: Float,
    pub m: BigUint,
    /// `lower < m(H_n)`, decided in exact integer arithmetic.
    pub lower_holds: bool,
    /// `m(H_n) < upper`, decided in exact integer arithmetic.
    pub upper_holds: bool,
}

impl CountBounds {
    pub fn sandwiched(&self) -> bool {
        self.lower_holds && self.upper_holds
    }

    /// `(lower, upper)` as plain floats, for quick inspection.
    pub fn approx(&self) -> (f64, f64) {
        (
            hp::to_f64(&self.ln_lower).exp(),
            hp::to_f64(&self.ln_upper).exp(),
        )
    }
}

/// For `1 <= k <= n`:
/// `x_k^(3^(n-k)) (a_k^2 + 2a_k + 2)^e (1 + a_n)^3 < m(H_n) < x_k^(3^(n-k)) (b_k^2 + 2b_k + 2)^e (1 + g_n)^3`
/// with `e = 3(3^(n-k) - 1)/2`, `a = alpha`, `b = beta`, `g = gamma`.
pub fn bound_m_hanoi(
    ledger: &[StageRecord],
    k: u32,
    n: u32,
    precision_bits: usize,
) -> Result<CountBounds, AsymptoticsError> {
    if k == 0 || k > n {
        return Err(AsymptoticsError::Domain(format!(
            "count bounds need 1 <= k <= n (got k = {k}, n = {n})"
        )));
    }
    let (rk, rn) = (stage(ledger, k)?, stage(ledger, n)?);
    if rk.family != Family::Hanoi || rn.family != Family::Hanoi {
        return Err(AsymptoticsError::Domain(
            "count bounds are stated for the Hanoi family".into(),
        ));
    }
    let (xk, yk, zk) = (&rk.counts.x, &rk.counts.y, &rk.counts.z);
    let (xn, yn, zn, wn) = (&rn.counts.x, &rn.counts.y, &rn.counts.z, &rn.counts.w);
    let m = &rn.m;

    let power = 3u32.pow(n - k);
    let e = 3 * (power - 1) / 2;

    // alpha_k^2 + 2 alpha_k + 2 = (y^2 + 2xy + 2x^2) / x^2, likewise for beta_k over y.
    let q_alpha_num = yk * yk + xk * yk * 2u32 + xk * xk * 2u32;
    let q_beta_num = zk * zk + yk * zk * 2u32 + yk * yk * 2u32;
    let xk_pow = xk.pow(power);

    let lower_lhs = &xk_pow * q_alpha_num.pow(e) * (xn + yn).pow(3);
    let lower_rhs = m * xk.pow(2 * e) * xn.pow(3);
    let upper_lhs = m * yk.pow(2 * e) * zn.pow(3);
    let upper_rhs = &xk_pow * q_beta_num.pow(e) * (zn + wn).pow(3);

    let mut hp = Hp::new(precision_bits);
    let ln_xk = hp.ln_big(xk);
    let ln_q_alpha = {
        let q = hp.ratio(&q_alpha_num, &(xk * xk));
        hp.ln(&q)
    };
    let ln_q_beta = {
        let q = hp.ratio(&q_beta_num, &(yk * yk));
        hp.ln(&q)
    };
    let ln_one_plus_alpha_n = {
        let q = hp.ratio(&(xn + yn), xn);
        hp.ln(&q)
    };
    let ln_one_plus_gamma_n = {
        let q = hp.ratio(&(zn + wn), zn);
        hp.ln(&q)
    };
    let three = hp.int(3);
    let base = hp.mul_int(&ln_xk, &BigUint::from(power));
    let ln_lower = hp.add(
        &hp.add(&base, &hp.mul_int(&ln_q_alpha, &BigUint::from(e))),
        &hp.mul(&three, &ln_one_plus_alpha_n),
    );
    let ln_upper = hp.add(
        &hp.add(&base, &hp.mul_int(&ln_q_beta, &BigUint::from(e))),
        &hp.mul(&three, &ln_one_plus_gamma_n),
    );
    Ok(CountBounds {
        k,
        n,
        ln_lower,
        ln_upper,
        ln_m: hp.ln_big(m),
        m: m.clone(),
        lower_holds: lower_lhs < lower_rhs,
        upper_holds: upper_lhs < upper_rhs,
    })
}

/// Rigorous bounds on the entropy per vertex from stage `k`.
#[derive(Debug, Clone)]
pub struct EntropyBounds {
    pub family: Family,
    pub k: u32,
    pub lower: Float,
    pub upper: Float,
    /// Leading decimal places certified by both the bound gap and the
    /// precision-doubling check, less [`GUARD_DIGITS`].
    pub agreed_digits: u32,
    pub precision_bits: usize,
}

impl EntropyBounds {
    pub fn gap(&self) -> Float {
        Hp::new(self.precision_bits).sub(&self.upper, &self.lower)
    }
}

/// Lower and upper entropy bounds at stage `k`, before any rigor checks.
///
/// Hanoi: `ln x_k / 3^(k+1) + ln(t^2 + 2t + 2) / (2 * 3^k)`.
/// `X`: `(2 ln x_k + ln(t^2 + 8t + 8) + 2 ln(t^2 + 2t + 2)) / (7 * 3^k)`.
/// `t = alpha_k` gives the lower bound and `t = beta_k` the upper one.
pub fn raw_entropy_bounds(record: &StageRecord, hp: &mut Hp) -> (Float, Float) {
    let v = &record.counts;
    let k = record.n;
    let ln_x = hp.ln_big(&v.x);
    let alpha = hp.ratio(&v.y, &v.x);
    let beta = hp.ratio(&v.z, &v.y);
    let pow3 = |e: u32| BigUint::from(3u32).pow(e);
    let quadratic = |hp: &Hp, t: &Float, b: u64, c: u64| {
        hp.add(&hp.add(&hp.mul(t, t), &hp.mul(&hp.int(b), t)), &hp.int(c))
    };
    let mut bound = |t: &Float| match record.family {
        Family::Hanoi => {
            let q = quadratic(hp, t, 2, 2);
            let ln_q = hp.ln(&q);
            hp.add(
                &hp.div_int(&ln_x, &pow3(k + 1)),
                &hp.div_int(&ln_q, &(pow3(k) * 2u32)),
            )
        }
        Family::SierpX => {
            let (q8, q2) = (quadratic(hp, t, 8, 8), quadratic(hp, t, 2, 2));
            let (ln8, ln2) = (hp.ln(&q8), hp.ln(&q2));
            let two = hp.int(2);
            let num = hp.add(&hp.add(&hp.mul(&two, &ln_x), &ln8), &hp.mul(&two, &ln2));
            hp.div_int(&num, &(pow3(k) * 7u32))
        }
    };
    (bound(&alpha), bound(&beta))
}

/// Entropy bounds at stage `k` with rigor checks, computed from a fresh ledger.
pub fn entropy_bounds(
    family: Family,
    k: u32,
    precision_bits: usize,
) -> Result<EntropyBounds, AsymptoticsError> {
    if k == 0 {
        return Err(AsymptoticsError::Domain(
            "entropy bounds need k >= 1".into(),
        ));
    }
    let ledger = recursion::iterate(family, k)?;
    entropy_bounds_from(stage(&ledger, k)?, precision_bits)
}

/// Entropy bounds from one ledger record. Evaluates at `precision_bits` and at
/// twice that; fails if the bound gap does not clear the rounding noise.
pub fn entropy_bounds_from(
    record: &StageRecord,
    precision_bits: usize,
) -> Result<EntropyBounds, AsymptoticsError> {
    if record.n == 0 {
        return Err(AsymptoticsError::Domain(
            "entropy bounds need k >= 1".into(),
        ));
    }
    let mut hp = Hp::new(precision_bits);
    let (lower, upper) = raw_entropy_bounds(record, &mut hp);
    let mut fine = Hp::new(2 * hp.bits());
    let (lower2, upper2) = raw_entropy_bounds(record, &mut fine);

    let drift = |a: &Float, b: &Float| fine.sub(a, b).abs();
    let noise = {
        let (dl, du) = (drift(&lower, &lower2), drift(&upper, &upper2));
        let worst = if dl > du { dl } else { du };
        fine.add(&worst, &hp.tolerance())
    };
    let gap = fine.sub(&upper2, &lower2);
    if gap <= noise || upper <= lower {
        return Err(AsymptoticsError::PrecisionInsufficient {
            bits: hp.bits(),
            detail: format!("the entropy bound gap at k = {}", record.n),
        });
    }
    let max = hp.decimal_digits() as u32;
    let agreed = hp::agreed_digits(&lower, &upper, max).min(hp::digits_below(&noise, max));
    Ok(EntropyBounds {
        family: record.family,
        k: record.n,
        lower,
        upper,
        agreed_digits: agreed.saturating_sub(GUARD_DIGITS),
        precision_bits: hp.bits(),
    })
}

/// `ln x_k` accumulated as `L_1 = ln x_1`, `L_(n+1) = 3 L_n + ln A_n`, with
/// `A_n` evaluated at the exact-integer ratios of stage `n`.
pub fn ln_x_incremental(
    family: Family,
    k: u32,
    precision_bits: usize,
) -> Result<Float, AsymptoticsError> {
    if k == 0 {
        return Err(AsymptoticsError::Domain(
            "the accumulator starts at k = 1".into(),
        ));
    }
    let ledger = recursion::iterate(family, k)?;
    let mut hp = Hp::new(precision_bits);
    let polys = RatioPolynomials::for_family(family);
    let mut acc = hp.ln_big(&stage(&ledger, 1)?.counts.x);
    for n in 1..k {
        let v = &stage(&ledger, n)?.counts;
        let (alpha, beta, gamma) = (
            hp.ratio(&v.y, &v.x),
            hp.ratio(&v.z, &v.y),
            hp.ratio(&v.w, &v.z),
        );
        let a = eval_ratio_poly(&polys.a, &alpha, &beta, &gamma, &hp);
        let ln_a = hp.ln(&a);
        acc = hp.add(&hp.mul(&hp.int(3), &acc), &ln_a);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_bounds_domain() {
        let ledger = recursion::iterate(Family::Hanoi, 2).unwrap();
        assert!(bound_m_hanoi(&ledger, 2, 1, 256).is_err());
        assert!(bound_m_hanoi(&ledger, 0, 1, 256).is_err());
        assert!(bound_m_hanoi(&ledger, 1, 3, 256).is_err());
        let x = recursion::iterate(Family::SierpX, 2).unwrap();
        assert!(bound_m_hanoi(&x, 1, 2, 256).is_err());
    }

    #[test]
    fn entropy_bounds_need_positive_stage() {
        assert!(entropy_bounds(Family::Hanoi, 0, 256).is_err());
    }

    #[test]
    fn unresolvable_gap_asks_for_precision() {
        // At k = 7 the Hanoi gap is about 1e-189, far below 512-bit resolution.
        match entropy_bounds(Family::Hanoi, 7, 512) {
            Err(AsymptoticsError::PrecisionInsufficient { bits, .. }) => assert_eq!(bits, 512),
            other => panic!("expected a precision error, got {other:?}"),
        }
    }
}
