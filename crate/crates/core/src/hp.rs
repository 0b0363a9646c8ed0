//! Multiprecision helpers on top of `astro_float`.
//!
//! Conversions between big integers and floats, and decimal rendering, are
//! done exactly from the float's raw mantissa so that printed digits never
//! depend on the library's own radix conversion.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use astro_float::BigFloat as Float;

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = 64;

/// A working precision plus the constant cache `astro_float` needs for `ln`.
pub struct Hp {
    bits: usize,
    consts: Consts,
}

impl std::fmt::Debug for Hp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hp").field("bits", &self.bits).finish()
    }
}

impl Hp {
    pub fn new(bits: usize) -> Self {
        // Round up to whole words so every precision is representable exactly.
        let bits = bits.max(WORD_BITS).div_ceil(WORD_BITS) * WORD_BITS;
        Hp {
            bits,
            consts: Consts::new().expect("allocate astro-float constant cache"),
        }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    /// Decimal digits the working precision represents, ignoring guard bits.
    pub fn decimal_digits(&self) -> usize {
        decimal_digits_for(self.bits)
    }

    pub fn int(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits)
    }

    pub fn big(&self, v: &BigUint) -> BigFloat {
        from_biguint(v, self.bits)
    }

    pub fn ratio(&self, num: &BigUint, den: &BigUint) -> BigFloat {
        self.div(&self.big(num), &self.big(den))
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn mul_int(&self, a: &BigFloat, k: &BigUint) -> BigFloat {
        self.mul(a, &self.big(k))
    }

    pub fn div_int(&self, a: &BigFloat, k: &BigUint) -> BigFloat {
        self.div(a, &self.big(k))
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts)
    }

    pub fn ln_big(&mut self, v: &BigUint) -> BigFloat {
        let f = self.big(v);
        self.ln(&f)
    }

    /// `2^-e`.
    pub fn pow2_neg(&self, e: usize) -> BigFloat {
        let words = [1u64 << 63];
        // 0.1b * 2^(1-e) = 2^-e
        BigFloat::from_raw_parts(&words, WORD_BITS, Sign::Pos, 1 - e as i32, false)
    }

    /// `10^-d` rounded to the working precision.
    pub fn pow10_neg(&self, d: u32) -> BigFloat {
        self.div(&self.int(1), &self.big(&BigUint::from(10u32).pow(d)))
    }

    /// Rounding tolerance for a quantity of magnitude about one: `2^-(bits - 16)`.
    pub fn tolerance(&self) -> BigFloat {
        self.pow2_neg(self.bits - 16)
    }

    pub fn abs(&self, a: &BigFloat) -> BigFloat {
        a.abs()
    }
}

pub fn decimal_digits_for(bits: usize) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).floor() as usize
}

/// Big integer to float, keeping the top `bits + 64` bits of the integer.
pub fn from_biguint(v: &BigUint, bits: usize) -> BigFloat {
    if v.is_zero() {
        return BigFloat::from_u64(0, bits);
    }
    let total_bits = v.bits() as usize;
    let keep_words = bits.div_ceil(WORD_BITS) + 1;
    let shift = total_bits.saturating_sub(keep_words * WORD_BITS);
    let top = v >> shift;
    let inexact = shift > 0 && (top.clone() << shift) != *v;
    let mut words = top.to_u64_digits();
    let pad = words.len() * WORD_BITS - top.bits() as usize;
    if pad > 0 {
        words = (top << pad).to_u64_digits();
    }
    let exponent = i32::try_from(total_bits).expect("integer too large for float exponent");
    let f = BigFloat::from_raw_parts(
        &words,
        words.len() * WORD_BITS,
        Sign::Pos,
        exponent,
        inexact,
    );
    f.round(bits.max(WORD_BITS), RM)
}

/// `(sign, mantissa, shift)` with `|x| = mantissa * 2^shift` exactly.
fn decompose(x: &BigFloat) -> Option<(Sign, BigUint, i64)> {
    if x.is_zero() {
        return None;
    }
    let (words, mbits, sign, exponent, _) = x.as_raw_parts()?;
    let mantissa = BigUint::from_slice(
        &words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect::<Vec<_>>(),
    );
    Some((sign, mantissa, i64::from(exponent) - mbits as i64))
}

/// `floor(x * 10^digits)`, exactly.
pub fn scaled_floor(x: &BigFloat, digits: u32) -> BigInt {
    let Some((sign, mantissa, shift)) = decompose(x) else {
        return BigInt::zero();
    };
    let scaled = BigInt::from(mantissa * BigUint::from(10u32).pow(digits));
    let scaled = if sign == Sign::Neg { -scaled } else { scaled };
    if shift >= 0 {
        scaled << shift as usize
    } else {
        scaled.div_floor(&(BigInt::one() << (-shift) as usize))
    }
}

/// `x * 10^digits` rounded half away from zero, exactly.
pub fn scaled_round(x: &BigFloat, digits: u32) -> BigInt {
    let (q, r) = scaled_floor(&x.abs(), digits + 1).div_mod_floor(&BigInt::from(10));
    let magnitude = if r >= BigInt::from(5) { q + 1 } else { q };
    if x.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

fn render(v: BigInt, digits: u32) -> String {
    let negative = v.is_negative();
    let mut s = v.abs().to_string();
    let d = digits as usize;
    if s.len() <= d {
        s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
    }
    let (int, frac) = s.split_at(s.len() - d);
    let sign = if negative { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Fixed-point decimal with `digits` places, truncated toward minus infinity.
pub fn format_truncated(x: &BigFloat, digits: u32) -> String {
    render(scaled_floor(x, digits), digits)
}

/// Fixed-point decimal with `digits` places, rounded toward plus infinity.
pub fn format_ceil(x: &BigFloat, digits: u32) -> String {
    render(-scaled_floor(&x.neg(), digits), digits)
}

/// Fixed-point decimal with `digits` places, rounded half away from zero.
pub fn format_rounded(x: &BigFloat, digits: u32) -> String {
    render(scaled_round(x, digits), digits)
}

/// Number of leading fractional digits on which `a` and `b` agree, up to `max`.
pub fn agreed_digits(a: &BigFloat, b: &BigFloat, max: u32) -> u32 {
    let (sa, sb) = (format_truncated(a, max), format_truncated(b, max));
    let (Some((ia, fa)), Some((ib, fb))) = (sa.split_once('.'), sb.split_once('.')) else {
        return 0;
    };
    if ia != ib {
        return 0;
    }
    fa.bytes()
        .zip(fb.bytes())
        .take_while(|(x, y)| x == y)
        .count() as u32
}

/// Number of correct decimal places an absolute error of `err` allows:
/// the largest `d` with `err < 10^-d`, capped at `max`.
pub fn digits_below(err: &BigFloat, max: u32) -> u32 {
    if err.is_zero() {
        return max;
    }
    let scaled = scaled_floor(&err.abs(), max);
    if scaled.is_zero() {
        return max;
    }
    // err * 10^max >= 1 with `len` integer digits means err >= 10^(len - 1 - max).
    let len = scaled.to_string().len() as u32;
    max.saturating_sub(len)
}

pub fn to_f64(x: &BigFloat) -> f64 {
    format_rounded(x, 20).parse().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_round_trip() {
        let hp = Hp::new(256);
        let v: BigUint = "18782596680434060148".parse().unwrap();
        assert_eq!(format_truncated(&hp.big(&v), 0), "18782596680434060148");
        let huge = BigUint::from(3u32).pow(2000) + 1u32;
        // Only the top bits survive, so the float is slightly below the integer.
        let f = hp.big(&huge);
        let back = scaled_floor(&f, 0).to_biguint().unwrap();
        assert!(back <= huge);
        assert!((&huge - &back).bits() < huge.bits() - 250);
    }

    #[test]
    fn exact_decimal_rendering() {
        let hp = Hp::new(128);
        let x = hp.ratio(&8u32.into(), &9u32.into());
        assert_eq!(format_rounded(&x, 15), "0.888888888888889");
        assert_eq!(format_truncated(&x, 15), "0.888888888888888");
        assert_eq!(format_ceil(&x, 15), "0.888888888888889");
        assert_eq!(format_ceil(&hp.int(2), 2), "2.00");
        let q = hp.ratio(&15u32.into(), &16u32.into());
        assert_eq!(format_rounded(&q, 4), "0.9375");
        assert_eq!(format_rounded(&q, 3), "0.938");
        let neg = hp.sub(&hp.int(0), &q);
        assert_eq!(format_truncated(&neg, 2), "-0.94");
        assert_eq!(format_rounded(&neg, 3), "-0.938");
        assert_eq!(format_rounded(&hp.int(0), 3), "0.000");
    }

    #[test]
    fn ln_and_agreement() {
        let mut hp = Hp::new(256);
        let l = hp.ln_big(&BigUint::from(18u32));
        assert_eq!(format_truncated(&l, 20), "2.89037175789616469220");
        let a = hp.ratio(&1u32.into(), &3u32.into());
        let b = hp.add(&a, &hp.pow10_neg(12));
        assert_eq!(agreed_digits(&a, &b, 40), 11);
        assert_eq!(digits_below(&hp.mul(&hp.int(2), &hp.pow10_neg(12)), 40), 11);
        assert_eq!(digits_below(&hp.int(0), 40), 40);
    }

    #[test]
    fn powers_of_two() {
        let hp = Hp::new(128);
        assert_eq!(format_truncated(&hp.pow2_neg(3), 5), "0.12500");
        assert_eq!(hp.bits(), 128);
        assert_eq!(Hp::new(100).bits(), 128);
    }
}
