use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The two self-similar graph families handled by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Tower of Hanoi graphs `H_n`: three copies of `H_{n-1}` joined by three edges.
    Hanoi,
    /// Sierpinski variant `X_n`: three copies of `X_{n-1}` joined by three edges
    /// plus a hub vertex adjacent to the six inner corners.
    SierpX,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Hanoi, Family::SierpX];

    pub fn name(self) -> &'static str {
        match self {
            Family::Hanoi => "hanoi",
            Family::SierpX => "sierpx",
        }
    }

    /// Limit of `v(G)/e(G)` as the stage grows, as `(numerator, denominator)`.
    pub fn vertex_over_edge_limit(self) -> (u32, u32) {
        match self {
            Family::Hanoi => (2, 3),
            Family::SierpX => (7, 15),
        }
    }

    pub fn has_hub(self) -> bool {
        matches!(self, Family::SierpX)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown graph family `{0}` (expected `hanoi` or `sierpx`)")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hanoi" | "h" => Ok(Family::Hanoi),
            "sierpx" | "x" => Ok(Family::SierpX),
            _ => Err(UnknownFamily(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for family in Family::ALL {
            assert_eq!(family.name().parse::<Family>().unwrap(), family);
        }
        assert!("sierpinski".parse::<Family>().is_err());
    }
}
