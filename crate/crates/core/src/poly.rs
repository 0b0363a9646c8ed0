//! Polynomials in the four boundary counts `x, y, z, w` with non-negative
//! integer coefficients, used to expand the structural recursions symbolically.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

/// Exponents of `(x, y, z, w)`.
pub type Monomial = [u8; 4];

/// Arithmetic needed to evaluate a recursion: `+`, `*` and small integer multiples.
pub trait Semiring: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn times(&self, k: u32) -> Self;
    fn from_u32(k: u32) -> Self;
}

impl Semiring for BigUint {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn times(&self, k: u32) -> Self {
        self * k
    }
    fn from_u32(k: u32) -> Self {
        BigUint::from(k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, u64>,
}

impl Poly {
    pub fn var(i: usize) -> Self {
        let mut m = [0; 4];
        m[i] = 1;
        Poly::from_terms(&[(1, m)])
    }

    /// `[x, y, z, w]` as polynomials.
    pub fn vars() -> [Poly; 4] {
        [0, 1, 2, 3].map(Poly::var)
    }

    /// Sums `(coefficient, monomial)` pairs; repeated monomials accumulate.
    pub fn from_terms(terms: &[(u32, Monomial)]) -> Self {
        let mut p = Poly::default();
        for &(c, m) in terms {
            if c != 0 {
                *p.terms.entry(m).or_insert(0) += u64::from(c);
            }
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coefficient(&self, m: Monomial) -> u64 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    /// Monomials whose coefficients differ, with `(self, other)` coefficients.
    pub fn differences(&self, other: &Poly) -> Vec<(Monomial, u64, u64)> {
        let mut keys: Vec<Monomial> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter_map(|m| {
                let (a, b) = (self.coefficient(m), other.coefficient(m));
                (a != b).then_some((m, a, b))
            })
            .collect()
    }
}

impl Semiring for Poly {
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            *out.terms.entry(*m).or_insert(0) += c;
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = [0, 1, 2, 3].map(|i| ma[i] + mb[i]);
                *out.terms.entry(m).or_insert(0) += ca * cb;
            }
        }
        out
    }

    fn times(&self, k: u32) -> Self {
        if k == 0 {
            return Poly::default();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * u64::from(k)))
                .collect(),
        }
    }

    fn from_u32(k: u32) -> Self {
        Poly::from_terms(&[(k, [0; 4])])
    }
}

pub fn format_monomial(m: Monomial) -> String {
    let mut s = String::new();
    for (name, e) in ["x", "y", "z", "w"].iter().zip(m) {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}^{e}")),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest powers of x first, matching the usual written order.
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *c != 1 {
                write!(f, "{c}")?;
            }
            f.write_str(&format_monomial(*m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_cube() {
        let [x, y, ..] = Poly::vars();
        let s = x.add(&y);
        let cube = s.mul(&s).mul(&s);
        assert_eq!(cube.coefficient([3, 0, 0, 0]), 1);
        assert_eq!(cube.coefficient([2, 1, 0, 0]), 3);
        assert_eq!(cube.coefficient([1, 2, 0, 0]), 3);
        assert_eq!(cube.to_string(), "x^3 + 3x^2y + 3xy^2 + y^3");
    }

    #[test]
    fn differences_report_both_sides() {
        let a = Poly::from_terms(&[(2, [1, 0, 0, 0]), (1, [0, 1, 0, 0])]);
        let b = Poly::from_terms(&[(2, [1, 0, 0, 0]), (1, [0, 0, 1, 0])]);
        assert_eq!(
            a.differences(&b),
            vec![([0, 0, 1, 0], 0, 1), ([0, 1, 0, 0], 1, 0)]
        );
    }
}
