//! Expected values for `verify`, embedded at compile time.

use std::sync::OnceLock;

use dimers::Family;
use serde::Deserialize;

const EMBEDDED: &str = include_str!("../golden/verify.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// One component of a boundary-count vector.
    Count,
    /// One of `alpha`, `beta`, `gamma`, to the printed decimals.
    Ratio,
    /// Entropy per vertex, truncated to `digits`.
    Entropy,
    /// Entropy bound gap at stage `k` below `10^-digits`.
    Gap,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Entry {
    pub name: String,
    pub reference: String,
    pub kind: Kind,
    pub family: Family,
    #[serde(default)]
    pub n: Option<u32>,
    #[serde(default)]
    pub k: Option<u32>,
    #[serde(default)]
    pub component: Option<String>,
    #[serde(default)]
    pub digits: Option<u32>,
    /// The value as originally tabulated.
    pub printed: String,
    /// Exact replacement when the tabulated value is a rounding artifact.
    #[serde(default)]
    pub corrected: Option<String>,
    #[serde(default)]
    pub note: Option<String>,
}

impl Entry {
    /// The value checked by default: the correction if there is one.
    pub fn expected(&self, strict: bool) -> &str {
        match (&self.corrected, strict) {
            (Some(c), false) => c,
            _ => &self.printed,
        }
    }

    pub fn component(&self) -> &str {
        self.component.as_deref().unwrap_or("")
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Golden {
    pub entries: Vec<Entry>,
}

impl Golden {
    pub fn embedded() -> &'static Golden {
        static GOLDEN: OnceLock<Golden> = OnceLock::new();
        GOLDEN
            .get_or_init(|| serde_json::from_str(EMBEDDED).expect("embedded golden file is valid"))
    }

    pub fn for_family(&self, family: Family) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(move |e| e.family == family)
    }

    /// The count entry for `family`, stage `n`, component `c`.
    pub fn count(&self, family: Family, n: u32, c: &str) -> Option<&Entry> {
        self.for_family(family)
            .find(|e| e.kind == Kind::Count && e.n == Some(n) && e.component() == c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_is_complete() {
        let g = Golden::embedded();
        for family in Family::ALL {
            let counts = g
                .for_family(family)
                .filter(|e| e.kind == Kind::Count)
                .count();
            let ratios = g
                .for_family(family)
                .filter(|e| e.kind == Kind::Ratio)
                .count();
            assert_eq!((counts, ratios), (16, 9));
        }
        let mut names: Vec<&str> = g.entries.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), g.entries.len());
        assert!(g
            .entries
            .iter()
            .all(|e| e.corrected.is_some() == e.note.is_some()));
    }
}
