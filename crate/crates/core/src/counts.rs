//! Boundary-classified matching counts.
//!
//! A matching of a graph with three outmost vertices is classified by which
//! outmost vertices it covers. By rotational symmetry only the number of
//! covered outmost vertices matters: `x` (none), `y` (one given vertex),
//! `z` (two given vertices), `w` (all three).

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Matched/unmatched status of the three outmost vertices; bit `i` set means
/// outmost vertex `i` is covered by a matching edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundaryClass(u8);

impl BoundaryClass {
    pub fn all() -> impl Iterator<Item = BoundaryClass> {
        (0..8).map(BoundaryClass)
    }

    pub fn from_covered(covered: [bool; 3]) -> Self {
        BoundaryClass(
            covered
                .iter()
                .enumerate()
                .map(|(i, &c)| (c as u8) << i)
                .sum(),
        )
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_covered(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn covered(self) -> [bool; 3] {
        [0, 1, 2].map(|i| self.is_covered(i))
    }

    /// Number of covered outmost vertices: 0 for `x`, 1 for `y`, 2 for `z`, 3 for `w`.
    pub fn dimer_count(self) -> u32 {
        self.0.count_ones()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryCountVector {
    #[serde(with = "decimal")]
    pub x: BigUint,
    #[serde(with = "decimal")]
    pub y: BigUint,
    #[serde(with = "decimal")]
    pub z: BigUint,
    #[serde(with = "decimal")]
    pub w: BigUint,
}

impl BoundaryCountVector {
    pub fn new(
        x: impl Into<BigUint>,
        y: impl Into<BigUint>,
        z: impl Into<BigUint>,
        w: impl Into<BigUint>,
    ) -> Self {
        BoundaryCountVector {
            x: x.into(),
            y: y.into(),
            z: z.into(),
            w: w.into(),
        }
    }

    /// Counts of the base triangle `K_3`: `(1, 0, 1, 0)`.
    pub fn initial() -> Self {
        Self::new(1u32, 0u32, 1u32, 0u32)
    }

    pub fn parse(x: &str, y: &str, z: &str, w: &str) -> Option<Self> {
        let p = |s: &str| s.replace(',', "").parse::<BigUint>().ok();
        Some(Self::new(p(x)?, p(y)?, p(z)?, p(w)?))
    }

    pub fn components(&self) -> [&BigUint; 4] {
        [&self.x, &self.y, &self.z, &self.w]
    }

    /// Total matching count `m = x + 3y + 3z + w`.
    pub fn total(&self) -> BigUint {
        &self.x + (&self.y + &self.z) * 3u32 + &self.w
    }

    pub fn aggregates(&self) -> AggregateCounts {
        AggregateCounts::from_counts(self)
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.bits() == 0)
    }

    /// `x > y > z > w > 0`.
    pub fn is_strictly_ordered(&self) -> bool {
        self.x > self.y && self.y > self.z && self.z > self.w && self.w.bits() > 0
    }

    pub fn scaled(&self, c: &BigUint) -> Self {
        Self::new(&self.x * c, &self.y * c, &self.z * c, &self.w * c)
    }
}

/// The aggregates `S`, `R`, `T`, `P`: matching counts where some outmost
/// vertices are left unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregateCounts {
    #[serde(with = "decimal")]
    pub s: BigUint,
    #[serde(with = "decimal")]
    pub r: BigUint,
    #[serde(with = "decimal")]
    pub t: BigUint,
    #[serde(with = "decimal")]
    pub p: BigUint,
}

impl AggregateCounts {
    pub fn from_counts(v: &BoundaryCountVector) -> Self {
        AggregateCounts {
            s: &v.x + &v.y,
            r: &v.y + &v.z,
            t: &v.x + &v.y * 2u32 + &v.z,
            p: &v.y + &v.z * 2u32 + &v.w,
        }
    }
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
