//! Independent matching counter for explicit graphs.
//!
//! Counts every independent edge subset (the empty matching included) by
//! eliminating the lowest-indexed remaining vertex: either it stays unmatched,
//! or it is matched to one of its remaining neighbors. Residual graphs are
//! always induced subgraphs of the input, so the remaining vertex set is a
//! canonical memo key. Disconnected residuals are split into components and
//! counted as a product.
//!
//! This module shares nothing with the recursion engine; it exists to ground
//! the recursions against direct counts.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::counts::{BoundaryClass, BoundaryCountVector};
use crate::graphs::{adjacency, GraphInstance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(
        "oracle budget exhausted after {steps} steps ({reason}); no partial count is reported"
    )]
    BudgetExhausted { steps: u64, reason: BudgetLimit },
    #[error("boundary classes with {dimers} covered outmost vertices disagree: {counts:?}; the graph is not rotationally symmetric")]
    SymmetryMismatch { dimers: u32, counts: Vec<String> },
    #[error("graph is not simple: {0}")]
    NotSimple(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetLimit {
    Steps,
    WallClock,
}

impl std::fmt::Display for BudgetLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BudgetLimit::Steps => "step ceiling",
            BudgetLimit::WallClock => "wall-clock limit",
        })
    }
}

/// Work limit for a count. A step is one memo miss.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: u64,
    pub max_duration: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: 20_000_000,
            max_duration: None,
        }
    }
}

impl Budget {
    pub fn steps(max_steps: u64) -> Self {
        Budget {
            max_steps,
            max_duration: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingCount {
    pub total: BigUint,
    pub steps: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryCount {
    pub counts: BoundaryCountVector,
    /// Count for each [`BoundaryClass`], indexed by [`BoundaryClass::index`].
    pub classes: Vec<BigUint>,
    pub steps: u64,
    pub elapsed: Duration,
}

/// Number of matchings of the simple graph on `n` vertices with the given edges.
pub fn count_matchings_edges(
    n: usize,
    edges: &[(usize, usize)],
    budget: &Budget,
) -> Result<MatchingCount, OracleError> {
    let adj = checked_adjacency(n, edges)?;
    let clock = Clock::new(*budget);
    let total = on_big_stack(|| Counter::new(&adj, &clock).count(&Mask::full(n)))?;
    Ok(MatchingCount {
        total,
        steps: clock.steps(),
        elapsed: clock.start.elapsed(),
    })
}

pub fn count_matchings(g: &GraphInstance, budget: &Budget) -> Result<MatchingCount, OracleError> {
    count_matchings_edges(g.vertex_count(), &g.edges, budget)
}

/// Counts matchings of `g` in each of the eight boundary classes and collapses
/// them to `(x, y, z, w)` after checking rotational symmetry.
pub fn count_by_boundary(g: &GraphInstance, budget: &Budget) -> Result<BoundaryCount, OracleError> {
    count_by_boundary_with(g, budget, false)
}

/// As [`count_by_boundary`], optionally counting the eight classes on separate
/// threads with per-thread memo tables. Results do not depend on scheduling.
pub fn count_by_boundary_with(
    g: &GraphInstance,
    budget: &Budget,
    parallel: bool,
) -> Result<BoundaryCount, OracleError> {
    let adj = checked_adjacency(g.vertex_count(), &g.edges)?;
    let clock = Clock::new(*budget);
    let full = Mask::full(g.vertex_count());
    let classes: Vec<BoundaryClass> = BoundaryClass::all().collect();

    let results: Vec<Result<BigUint, OracleError>> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = classes
                .iter()
                .map(|&class| {
                    let (adj, clock, full) = (&adj, &clock, &full);
                    std::thread::Builder::new()
                        .stack_size(STACK_SIZE)
                        .spawn_scoped(s, move || {
                            Counter::new(adj, clock).count_class(full, g.outmost, class)
                        })
                        .expect("spawn oracle worker")
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("oracle worker panicked"))
                .collect()
        })
    } else {
        on_big_stack(|| {
            let mut counter = Counter::new(&adj, &clock);
            classes
                .iter()
                .map(|&class| counter.count_class(&full, g.outmost, class))
                .collect()
        })
    };
    let counts: Vec<BigUint> = results.into_iter().collect::<Result<_, _>>()?;

    for (dimers, idx) in [(1, [0b001, 0b010, 0b100]), (2, [0b011, 0b101, 0b110])] {
        let group = idx.map(|i| &counts[i]);
        if group[0] != group[1] || group[1] != group[2] {
            return Err(OracleError::SymmetryMismatch {
                dimers,
                counts: group.iter().map(|c| c.to_string()).collect(),
            });
        }
    }
    Ok(BoundaryCount {
        counts: BoundaryCountVector::new(
            counts[0].clone(),
            counts[0b001].clone(),
            counts[0b011].clone(),
            counts[0b111].clone(),
        ),
        classes: counts,
        steps: clock.steps(),
        elapsed: clock.start.elapsed(),
    })
}

fn checked_adjacency(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, OracleError> {
    for &(a, b) in edges {
        if a == b {
            return Err(OracleError::NotSimple(format!("loop at vertex {a}")));
        }
        if a >= n || b >= n {
            return Err(OracleError::NotSimple(format!(
                "edge ({a}, {b}) out of range for {n} vertices"
            )));
        }
    }
    let adj = adjacency(n, edges);
    for (v, list) in adj.iter().enumerate() {
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(OracleError::NotSimple(format!(
                "repeated edge at vertex {v}"
            )));
        }
    }
    Ok(adj)
}

const STACK_SIZE: usize = 1 << 30;

// Recursion depth is bounded by the vertex count, which can exceed what a
// default thread stack holds.
fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK_SIZE)
            .spawn_scoped(s, f)
            .expect("spawn oracle thread")
            .join()
            .expect("oracle thread panicked")
    })
}

struct Clock {
    budget: Budget,
    start: Instant,
    steps: AtomicU64,
}

impl Clock {
    fn new(budget: Budget) -> Self {
        Clock {
            budget,
            start: Instant::now(),
            steps: AtomicU64::new(0),
        }
    }

    fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    fn tick(&self) -> Result<(), OracleError> {
        let steps = self.steps.fetch_add(1, Ordering::Relaxed) + 1;
        if steps > self.budget.max_steps {
            return Err(OracleError::BudgetExhausted {
                steps,
                reason: BudgetLimit::Steps,
            });
        }
        if let Some(limit) = self.budget.max_duration {
            if steps.is_multiple_of(1024) && self.start.elapsed() > limit {
                return Err(OracleError::BudgetExhausted {
                    steps,
                    reason: BudgetLimit::WallClock,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Mask(Box<[u64]>);

impl Mask {
    fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        Mask(words.into_boxed_slice())
    }

    fn empty_like(&self) -> Self {
        Mask(vec![0; self.0.len()].into_boxed_slice())
    }

    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn insert(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn remove(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn without(&self, v: usize) -> Self {
        let mut m = self.clone();
        m.remove(v);
        m
    }

    fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn minus(&self, other: &Mask) -> Self {
        Mask(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a & !b)
                .collect(),
        )
    }
}

struct Counter<'a> {
    adj: &'a [Vec<usize>],
    clock: &'a Clock,
    memo: HashMap<Mask, BigUint>,
}

impl<'a> Counter<'a> {
    fn new(adj: &'a [Vec<usize>], clock: &'a Clock) -> Self {
        Counter {
            adj,
            clock,
            memo: HashMap::new(),
        }
    }

    /// Matchings consistent with the prescribed status of each outmost vertex.
    fn count_class(
        &mut self,
        mask: &Mask,
        outmost: [usize; 3],
        class: BoundaryClass,
    ) -> Result<BigUint, OracleError> {
        self.constrain(mask.clone(), &outmost, class, 0)
    }

    fn constrain(
        &mut self,
        mask: Mask,
        outmost: &[usize; 3],
        class: BoundaryClass,
        i: usize,
    ) -> Result<BigUint, OracleError> {
        if i == 3 {
            return self.count(&mask);
        }
        let o = outmost[i];
        if !mask.contains(o) {
            // Already matched to an earlier outmost vertex.
            return if class.is_covered(i) {
                self.constrain(mask, outmost, class, i + 1)
            } else {
                Ok(BigUint::zero())
            };
        }
        let rest = mask.without(o);
        if !class.is_covered(i) {
            return self.constrain(rest, outmost, class, i + 1);
        }
        let mut total = BigUint::zero();
        for &u in &self.adj[o] {
            if !rest.contains(u) {
                continue;
            }
            if let Some(j) = outmost.iter().position(|&v| v == u) {
                if !class.is_covered(j) {
                    continue;
                }
            }
            total += self.constrain(rest.without(u), outmost, class, i + 1)?;
        }
        Ok(total)
    }

    fn count(&mut self, mask: &Mask) -> Result<BigUint, OracleError> {
        let Some(v) = mask.lowest() else {
            return Ok(BigUint::one());
        };
        if let Some(hit) = self.memo.get(mask) {
            return Ok(hit.clone());
        }
        self.clock.tick()?;

        let component = self.component_of(v, mask);
        let result = if &component != mask {
            let rest = mask.minus(&component);
            self.count(&component)? * self.count(&rest)?
        } else {
            let rest = mask.without(v);
            let mut total = self.count(&rest)?;
            for &u in &self.adj[v] {
                if rest.contains(u) {
                    total += self.count(&rest.without(u))?;
                }
            }
            total
        };
        self.memo.insert(mask.clone(), result.clone());
        Ok(result)
    }

    fn component_of(&self, v: usize, mask: &Mask) -> Mask {
        let mut seen = mask.empty_like();
        seen.insert(v);
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if mask.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Family;
    use crate::graphs::build;

    fn total(n: usize, edges: &[(usize, usize)]) -> u64 {
        count_matchings_edges(n, edges, &Budget::default())
            .unwrap()
            .total
            .try_into()
            .unwrap()
    }

    #[test]
    fn tiny_graphs() {
        assert_eq!(total(0, &[]), 1);
        assert_eq!(total(2, &[(0, 1)]), 2);
        assert_eq!(total(3, &[(0, 1), (1, 2), (0, 2)]), 4);
        // Path on 4 vertices: empty, 3 singles, 1 pair.
        assert_eq!(total(4, &[(0, 1), (1, 2), (2, 3)]), 5);
        // Isolated vertices contribute a factor of 1.
        assert_eq!(total(5, &[(0, 1)]), 2);
    }

    #[test]
    fn triangle_boundary_vector() {
        let g = build(Family::Hanoi, 0).unwrap();
        let b = count_by_boundary(&g, &Budget::default()).unwrap();
        assert_eq!(b.counts, BoundaryCountVector::new(1u32, 0u32, 1u32, 0u32));
    }

    #[test]
    fn rejects_non_simple_input() {
        let budget = Budget::default();
        assert!(matches!(
            count_matchings_edges(2, &[(0, 0)], &budget),
            Err(OracleError::NotSimple(_))
        ));
        assert!(matches!(
            count_matchings_edges(2, &[(0, 1), (1, 0)], &budget),
            Err(OracleError::NotSimple(_))
        ));
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let g = build(Family::Hanoi, 2).unwrap();
        match count_matchings(&g, &Budget::steps(10)) {
            Err(OracleError::BudgetExhausted { steps, reason }) => {
                assert_eq!(steps, 11);
                assert_eq!(reason, BudgetLimit::Steps);
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn asymmetric_marking_is_detected() {
        let mut g = build(Family::Hanoi, 1).unwrap();
        // Mark a non-corner vertex as outmost; the symmetry check must trip.
        g.outmost[2] = 1;
        assert!(matches!(
            count_by_boundary(&g, &Budget::default()),
            Err(OracleError::SymmetryMismatch { .. })
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = build(Family::SierpX, 1).unwrap();
        let a = count_by_boundary_with(&g, &Budget::default(), false).unwrap();
        let b = count_by_boundary_with(&g, &Budget::default(), true).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.classes, b.classes);
    }
}
