//! Randomized matching algorithms on bipartite graphs.
//!
//! * [`lovasz_matching_test`] decides whether a perfect matching exists by
//!   evaluating the Edmonds matrix at random points of GF(q).
//! * [`sample_semi_matching`] draws a multiset `C` of right vertices with
//!   probability proportional to the number of semi-matchings onto `C`, by
//!   letting every left vertex pick a uniform neighbour.
//! * [`count_semi_matchings`] is the exponential-time counting oracle.

pub mod field;

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{self, Tag};

/// Default field size, the Mersenne prime `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Largest left side the counting oracle accepts.
pub const COUNT_MAX_LEFT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    right: usize,
    neighbors: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a graph from per-left-vertex neighbour lists. Duplicates are
    /// removed and lists sorted.
    pub fn new(right: usize, mut neighbors: Vec<Vec<usize>>) -> Result<Self> {
        for (a, list) in neighbors.iter_mut().enumerate() {
            if let Some(&b) = list.iter().find(|&&b| b >= right) {
                return Err(Error::Bounds(format!("vertex a{a} lists b{b}, but |B| = {right}")));
            }
            list.sort_unstable();
            list.dedup();
        }
        Ok(BipartiteGraph { right, neighbors })
    }

    pub fn left_size(&self) -> usize {
        self.neighbors.len()
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn neighbors(&self, a: usize) -> &[usize] {
        &self.neighbors[a]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].binary_search(&b).is_ok()
    }

    /// Text form: `na=<int> nb=<int>`, then one line of neighbour indices per
    /// left vertex.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim_start().starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let mut na = None;
        let mut nb = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("na", v)) => na = v.parse::<usize>().ok(),
                Some(("nb", v)) => nb = v.parse::<usize>().ok(),
                _ => return Err(Error::parse(1, format!("unexpected header token `{tok}`"))),
            }
        }
        let (Some(na), Some(nb)) = (na, nb) else {
            return Err(Error::parse(1, "header must be `na=<int> nb=<int>`"));
        };
        let mut neighbors = Vec::with_capacity(na);
        for (i, line) in lines {
            if neighbors.len() == na {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::parse(i + 1, "more neighbour lines than na"));
            }
            let list = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::parse(i + 1, "neighbour indices must be integers"))?;
            neighbors.push(list);
        }
        if neighbors.len() != na {
            return Err(Error::parse(0, format!("expected {na} neighbour lines, found {}", neighbors.len())));
        }
        BipartiteGraph::new(nb, neighbors)
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "na={} nb={}", self.left_size(), self.right)?;
        for list in &self.neighbors {
            let parts: Vec<String> = list.iter().map(usize::to_string).collect();
            writeln!(f, "{}", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Multiplicities over the right side.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiSubset {
    counts: Vec<u32>,
}

impl MultiSubset {
    pub fn new(counts: Vec<u32>) -> Self {
        MultiSubset { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    /// Sorted list of elements with repetition.
    pub fn elements(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(b, &c)| std::iter::repeat_n(b, c as usize))
            .collect()
    }
}

impl fmt::Display for MultiSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// The multiset hit when left vertex `a` picks its `choices[a]`-th
/// neighbour.
pub fn semi_matching_from_choices(g: &BipartiteGraph, choices: &[usize]) -> Result<MultiSubset> {
    if choices.len() != g.left_size() {
        return Err(Error::Dimension {
            expected: g.left_size(),
            found: choices.len(),
        });
    }
    let mut counts = vec![0u32; g.right_size()];
    for (a, &c) in choices.iter().enumerate() {
        let b = *g
            .neighbors(a)
            .get(c)
            .ok_or_else(|| Error::Bounds(format!("choice {c} for a{a} exceeds its degree")))?;
        counts[b] += 1;
    }
    Ok(MultiSubset::new(counts))
}

fn check_no_isolated(g: &BipartiteGraph) -> Result<()> {
    match (0..g.left_size()).find(|&a| g.neighbors(a).is_empty()) {
        Some(a) => Err(Error::Parameter(format!("left vertex a{a} has no neighbours"))),
        None => Ok(()),
    }
}

/// One draw: each left vertex picks a uniform neighbour. Each semi-matching
/// onto `C` is exactly one choice tuple, so `C` has probability
/// `n(A, C) / prod_a |B_a|`.
pub fn sample_semi_matching(g: &BipartiteGraph, seed: u64) -> Result<MultiSubset> {
    let mut rng = rng::stream(seed, Tag::SemiMatching, 0);
    sample_semi_matching_with(g, &mut rng)
}

pub fn sample_semi_matching_with(g: &BipartiteGraph, rng: &mut rng::StreamRng) -> Result<MultiSubset> {
    check_no_isolated(g)?;
    let choices: Vec<usize> = (0..g.left_size())
        .map(|a| rng.random_range(0..g.neighbors(a).len()))
        .collect();
    semi_matching_from_choices(g, &choices)
}

/// `k` independent draws from one seeded stream.
pub fn sample_semi_matchings(g: &BipartiteGraph, k: usize, seed: u64) -> Result<Vec<MultiSubset>> {
    check_no_isolated(g)?;
    let mut rng = rng::stream(seed, Tag::SemiMatching, 0);
    (0..k).map(|_| sample_semi_matching_with(g, &mut rng)).collect()
}

/// Number of maps `A -> C` sending each left vertex to a neighbour and hitting
/// each right vertex exactly its multiplicity in `C`.
///
/// Dynamic programming over left vertices with the remaining multiplicities
/// as state; at most `prod_b (c_b + 1) <= 2^{|A|}` states per level.
pub fn count_semi_matchings(g: &BipartiteGraph, c: &MultiSubset) -> Result<u64> {
    let na = g.left_size();
    if na > COUNT_MAX_LEFT {
        return Err(Error::Resource(format!(
            "counting is exponential; |A| = {na} exceeds {COUNT_MAX_LEFT}"
        )));
    }
    if c.counts().len() != g.right_size() {
        return Err(Error::Dimension {
            expected: g.right_size(),
            found: c.counts().len(),
        });
    }
    if c.total() != na {
        return Ok(0);
    }
    let mut layer: HashMap<Vec<u32>, u64> = HashMap::from([(c.counts().to_vec(), 1)]);
    for a in 0..na {
        let mut next: HashMap<Vec<u32>, u64> = HashMap::new();
        for (remaining, ways) in layer {
            for &b in g.neighbors(a) {
                if remaining[b] > 0 {
                    let mut r = remaining.clone();
                    r[b] -= 1;
                    *next.entry(r).or_insert(0) += ways;
                }
            }
        }
        layer = next;
    }
    Ok(layer.values().sum())
}

/// Size of a maximum matching (augmenting paths).
pub fn maximum_matching(g: &BipartiteGraph) -> usize {
    fn augment(g: &BipartiteGraph, a: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &b in g.neighbors(a) {
            if seen[b] {
                continue;
            }
            seen[b] = true;
            if owner[b].is_none_or(|other| augment(g, other, seen, owner)) {
                owner[b] = Some(a);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; g.right_size()];
    (0..g.left_size())
        .filter(|&a| augment(g, a, &mut vec![false; g.right_size()], &mut owner))
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchingVerdict {
    /// Some trial gave a nonzero determinant; a perfect matching exists.
    PerfectMatching,
    /// Every trial gave zero. Wrong with probability at most `(n/q)^k`.
    ProbablyNone,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingTestOutcome {
    pub verdict: MatchingVerdict,
    /// Trials run before stopping (stops at the first nonzero determinant).
    pub trials: usize,
    /// Bound on the probability that `ProbablyNone` is wrong.
    pub error_bound: f64,
}

/// Randomized perfect-matching test: fill the Edmonds matrix with uniform
/// nonzero elements of GF(q) at edge positions, compute the determinant by
/// elimination, repeat up to `k` times.
pub fn lovasz_matching_test(g: &BipartiteGraph, q: u64, k: usize, seed: u64) -> Result<MatchingTestOutcome> {
    let n = g.left_size();
    if g.right_size() != n {
        return Err(Error::Parameter(format!(
            "perfect matching test needs |A| = |B|, got {n} and {}",
            g.right_size()
        )));
    }
    if k == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    if q >= 1 << 63 || !field::is_prime(q) {
        return Err(Error::Parameter(format!("field size {q} is not a prime below 2^63")));
    }
    if (q as u128) <= (n as u128) * (n as u128) {
        return Err(Error::Parameter(format!("field size {q} must exceed n^2 = {}", n * n)));
    }
    let error_bound = (n as f64 / q as f64).powi(k as i32);
    for trial in 0..k {
        let mut rng = rng::stream(seed, Tag::MatchingTrial, trial as u64);
        let matrix: Vec<Vec<u64>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| if g.has_edge(a, b) { rng.random_range(1..q) } else { 0 })
                    .collect()
            })
            .collect();
        if field::determinant_mod(matrix, q)? != 0 {
            return Ok(MatchingTestOutcome {
                verdict: MatchingVerdict::PerfectMatching,
                trials: trial + 1,
                error_bound,
            });
        }
    }
    Ok(MatchingTestOutcome {
        verdict: MatchingVerdict::ProbablyNone,
        trials: k,
        error_bound,
    })
}
