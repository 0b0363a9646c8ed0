//! Explicit construction of `H_n` and `X_n`.
//!
//! Both families start from the triangle `K_3`. Stage `n` takes three copies
//! of stage `n - 1`, numbered 0, 1, 2, and joins copy `i`'s corner `j` to copy
//! `j`'s corner `i` for each pair `i < j`. Copy `i` contributes its corner `i`
//! as the new outer corner `i`. For `X_n` a hub vertex is added and joined to
//! the six inner corners.
//!
//! A vertex label is the copy path from the root (digits `0`-`2`) followed by a
//! local id: `a`, `b`, `c` for the corners of an elementary triangle, `h` for a
//! hub. The outer corner `i` of `H_n` is therefore `iii…i` followed by the
//! letter for `i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::family::Family;

/// Largest stage [`build`] materializes unless asked otherwise.
pub const DEFAULT_BUILD_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("stage {stage} exceeds the build cap of {cap}; explicit instances are limited to n <= {cap}")]
    ResourceLimit { stage: u32, cap: u32 },
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid vertex label `{0}`")]
    BadLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalId {
    Corner(u8),
    Hub,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexLabel {
    pub path: Vec<u8>,
    pub local: LocalId,
}

impl VertexLabel {
    fn corner(c: u8) -> Self {
        VertexLabel {
            path: Vec::new(),
            local: LocalId::Corner(c),
        }
    }

    fn hub() -> Self {
        VertexLabel {
            path: Vec::new(),
            local: LocalId::Hub,
        }
    }

    fn prefixed(&self, copy: u8) -> Self {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.push(copy);
        path.extend_from_slice(&self.path);
        VertexLabel {
            path,
            local: self.local,
        }
    }

    /// Canonical label of outer corner `i` at stage `n`.
    pub fn outer_corner(i: u8, n: u32) -> Self {
        VertexLabel {
            path: vec![i; n as usize],
            local: LocalId::Corner(i),
        }
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.path {
            write!(f, "{d}")?;
        }
        match self.local {
            LocalId::Corner(c) => write!(f, "{}", (b'a' + c) as char),
            LocalId::Hub => f.write_str("h"),
        }
    }
}

impl FromStr for VertexLabel {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadLabel(s.to_string());
        let (last, digits) = s.as_bytes().split_last().ok_or_else(bad)?;
        let local = match last {
            b'a' | b'b' | b'c' => LocalId::Corner(last - b'a'),
            b'h' => LocalId::Hub,
            _ => return Err(bad()),
        };
        let path = digits
            .iter()
            .map(|d| match d {
                b'0'..=b'2' => Ok(d - b'0'),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VertexLabel { path, local })
    }
}

/// An explicit simple graph with three marked outmost vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphInstance {
    pub family: Family,
    pub stage: u32,
    pub vertices: Vec<VertexLabel>,
    /// Index pairs `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    pub outmost: [usize; 3],
}

pub fn build(family: Family, n: u32) -> Result<GraphInstance, GraphError> {
    build_capped(family, n, DEFAULT_BUILD_CAP)
}

pub fn build_capped(family: Family, n: u32, cap: u32) -> Result<GraphInstance, GraphError> {
    if n > cap {
        return Err(GraphError::ResourceLimit { stage: n, cap });
    }
    let mut g = GraphInstance {
        family,
        stage: 0,
        vertices: (0..3).map(VertexLabel::corner).collect(),
        edges: vec![(0, 1), (0, 2), (1, 2)],
        outmost: [0, 1, 2],
    };
    for _ in 0..n {
        g = g.next_stage();
    }
    Ok(g)
}

impl GraphInstance {
    fn next_stage(&self) -> GraphInstance {
        let v = self.vertices.len();
        let hub = self.family.has_hub();
        let mut vertices = Vec::with_capacity(3 * v + usize::from(hub));
        let mut edges = Vec::with_capacity(3 * self.edges.len() + if hub { 9 } else { 3 });
        for copy in 0..3u8 {
            vertices.extend(self.vertices.iter().map(|l| l.prefixed(copy)));
            let off = copy as usize * v;
            edges.extend(self.edges.iter().map(|&(a, b)| (a + off, b + off)));
        }
        let corner = |copy: usize, j: usize| copy * v + self.outmost[j];
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let (a, b) = (corner(i, j), corner(j, i));
            edges.push((a.min(b), a.max(b)));
        }
        if hub {
            let h = vertices.len();
            vertices.push(VertexLabel::hub());
            for i in 0..3 {
                for j in (0..3).filter(|&j| j != i) {
                    edges.push((corner(i, j), h));
                }
            }
        }
        GraphInstance {
            family: self.family,
            stage: self.stage + 1,
            vertices,
            edges,
            outmost: [corner(0, 0), corner(1, 1), corner(2, 2)],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        adjacency(self.vertices.len(), &self.edges)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Degree -> number of vertices with that degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for d in self.degrees() {
            *hist.entry(d).or_insert(0) += 1;
        }
        hist
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());
        self.edges
            .iter()
            .all(|&(a, b)| a != b && seen.insert((a.min(b), a.max(b))))
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; adj.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == adj.len()
    }

    /// Edge-list text: a `family n |V| |E|` header, then one `u v` label pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.family,
            self.stage,
            self.vertices.len(),
            self.edges.len()
        );
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", self.vertices[a], self.vertices[b]));
        }
        out
    }

    pub fn to_document(&self) -> GraphDocument {
        let label = |i: usize| self.vertices[i].to_string();
        GraphDocument {
            family: self.family,
            stage: self.stage,
            vertices: self.vertices.iter().map(ToString::to_string).collect(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [label(a), label(b)])
                .collect(),
            outmost: self.outmost.map(label),
        }
    }

    /// Parses the edge-list text emitted by [`GraphInstance::to_edge_list`].
    ///
    /// Vertices are indexed in order of first appearance; the outmost vertices
    /// are recovered from their canonical labels.
    pub fn from_edge_list(text: &str) -> Result<GraphInstance, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let parse_err = |line: usize, message: String| GraphError::Parse { line, message };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(
                1,
                format!("expected `family n |V| |E|`, got `{header}`"),
            ));
        }
        let family: Family = fields[0]
            .parse()
            .map_err(|e| parse_err(1, format!("{e}")))?;
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(1, format!("{s}: {e}")))
        };
        let stage = num(fields[1])? as u32;
        let (nv, ne) = (num(fields[2])?, num(fields[3])?);

        let mut index: HashMap<VertexLabel, usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (line, text) in lines {
            let mut it = text.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(parse_err(line, format!("expected `u v`, got `{text}`")));
            };
            let mut id = |s: &str| -> Result<usize, GraphError> {
                let label: VertexLabel = s.parse()?;
                Ok(*index.entry(label.clone()).or_insert_with(|| {
                    vertices.push(label);
                    vertices.len() - 1
                }))
            };
            let (u, v) = (id(a)?, id(b)?);
            if u == v {
                return Err(parse_err(line, format!("loop at `{a}`")));
            }
            edges.push((u.min(v), u.max(v)));
        }
        if vertices.len() != nv || edges.len() != ne {
            return Err(parse_err(
                1,
                format!(
                    "header declares {nv} vertices / {ne} edges, body has {} / {}",
                    vertices.len(),
                    edges.len()
                ),
            ));
        }
        let mut outmost = [0; 3];
        for (i, slot) in outmost.iter_mut().enumerate() {
            let label = VertexLabel::outer_corner(i as u8, stage);
            *slot = *index
                .get(&label)
                .ok_or_else(|| parse_err(1, format!("outmost vertex `{label}` not present")))?;
        }
        let g = GraphInstance {
            family,
            stage,
            vertices,
            edges,
            outmost,
        };
        if !g.is_simple() {
            return Err(parse_err(1, "graph has repeated edges".into()));
        }
        Ok(g)
    }
}

pub(crate) fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

/// JSON form of a [`GraphInstance`], with vertices referenced by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub family: Family,
    pub stage: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub outmost: [String; 3],
}

/// Closed-form size data for a stage, valid for any `n` (no instance is built).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFamilyMeta {
    pub family: Family,
    pub stage: u32,
    pub vertex_count: BigUint,
    pub edge_count: BigUint,
    pub vertex_over_edge_limit: (u32, u32),
}

pub fn meta(family: Family, n: u32) -> GraphFamilyMeta {
    let three = BigUint::from(3u32);
    let (vertex_count, edge_count) = match family {
        Family::Hanoi => (three.pow(n + 1), (three.pow(n + 2) - 3u32) / 2u32),
        Family::SierpX => (
            (three.pow(n) * 7u32 - 1u32) / 2u32,
            (three.pow(n + 1) * 5u32 - 9u32) / 2u32,
        ),
    };
    GraphFamilyMeta {
        family,
        stage: n,
        vertex_count,
        edge_count,
        vertex_over_edge_limit: family.vertex_over_edge_limit(),
    }
}
