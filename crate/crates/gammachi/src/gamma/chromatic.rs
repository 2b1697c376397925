//! Exact graph coloring.
//!
//! Exact mode runs a DSATUR-ordered branch and bound seeded with an exact
//! maximum clique; the reported witness is the lexicographically least
//! proper coloring (vertex order fixed, colors tried in increasing
//! order), so results do not depend on search internals. Bounds mode
//! returns (maximum clique size, greedy upper bound) without the full
//! search. Every search shares one node budget and reports exhaustion as
//! a distinct error.

use crate::error::{Error, Result};

use super::FiniteGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColoringMode {
    Exact,
    Bounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChromaticOutcome {
    /// The graph has a loop; no proper coloring exists.
    Uncolorable,
    Exact { chi: u32, witness: Vec<u32> },
    Bounds { lower: u32, upper: u32 },
}

impl ChromaticOutcome {
    pub fn chi(&self) -> Option<u32> {
        match self {
            ChromaticOutcome::Exact { chi, .. } => Some(*chi),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ChromaticOutcome::Uncolorable => "uncolorable".into(),
            ChromaticOutcome::Exact { chi, .. } => chi.to_string(),
            ChromaticOutcome::Bounds { lower, upper } => format!("[{lower}, {upper}]"),
        }
    }
}

struct AdjBits {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl AdjBits {
    fn new(g: &FiniteGraph) -> Self {
        let n = g.vertex_count();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for &(u, v) in g.edges() {
            let (u, v) = (u as usize, v as usize);
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        Self { n, words, bits }
    }

    #[inline]
    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    fn degree(&self, u: usize) -> u32 {
        self.row(u).iter().map(|w| w.count_ones()).sum()
    }
}

struct Budget {
    used: u64,
    cap: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.cap {
            Err(Error::ResourceLimit {
                what: "coloring search nodes",
                value: self.used,
                limit: self.cap,
            })
        } else {
            Ok(())
        }
    }
}

pub(super) fn solve(g: &FiniteGraph, mode: ColoringMode, node_budget: u64) -> Result<ChromaticOutcome> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(match mode {
            ColoringMode::Exact => ChromaticOutcome::Exact { chi: 0, witness: vec![] },
            ColoringMode::Bounds => ChromaticOutcome::Bounds { lower: 0, upper: 0 },
        });
    }
    let adj = AdjBits::new(g);
    let mut budget = Budget { used: 0, cap: node_budget };

    let clique = max_clique(&adj, &mut budget)?;
    let greedy = greedy_coloring(&adj);
    let upper = greedy.iter().max().map_or(0, |&c| c + 1);
    let lower = clique.len() as u32;

    if let ColoringMode::Bounds = mode {
        return Ok(ChromaticOutcome::Bounds { lower, upper });
    }

    let chi = if lower == upper {
        lower
    } else {
        dsatur_chromatic(&adj, &clique, upper, &mut budget)?
    };
    let witness = lex_least_coloring(&adj, chi, &mut budget)?;
    Ok(ChromaticOutcome::Exact { chi, witness })
}

/// Greedy hint used by callers that only want a quick sanity number.
pub fn brute_force_upper_bound_hint(g: &FiniteGraph) -> u32 {
    if g.vertex_count() == 0 {
        return 0;
    }
    let adj = AdjBits::new(g);
    greedy_coloring(&adj).iter().max().map_or(0, |&c| c + 1)
}

fn greedy_coloring(adj: &AdjBits) -> Vec<u32> {
    let n = adj.n;
    let mut colors = vec![u32::MAX; n];
    let mut used = vec![false; n + 1];
    for v in 0..n {
        for u in 0..v {
            if adj.adjacent(v, u) {
                used[colors[u] as usize] = true;
            }
        }
        let c = (0..).find(|&c| !used[c as usize]).unwrap();
        colors[v] = c;
        used.iter_mut().for_each(|u| *u = false);
    }
    colors
}

/// Exact maximum clique, deterministic: candidates scanned in index order
/// with the usual size-bound prune.
fn max_clique(adj: &AdjBits, budget: &mut Budget) -> Result<Vec<u32>> {
    let n = adj.n;
    let words = adj.words;
    let mut best: Vec<u32> = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    let mut full = vec![u64::MAX; words];
    if n % 64 != 0 {
        full[words - 1] = (1u64 << (n % 64)) - 1;
    }

    fn count(bits: &[u64]) -> u32 {
        bits.iter().map(|w| w.count_ones()).sum()
    }

    fn expand(
        adj: &AdjBits,
        candidates: &[u64],
        current: &mut Vec<u32>,
        best: &mut Vec<u32>,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick()?;
        let mut cands = candidates.to_vec();
        while count(&cands) > 0 {
            if current.len() as u32 + count(&cands) <= best.len() as u32 {
                return Ok(());
            }
            let v = cands
                .iter()
                .enumerate()
                .find(|(_, w)| **w != 0)
                .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
                .unwrap();
            cands[v / 64] &= !(1u64 << (v % 64));
            current.push(v as u32);
            let next: Vec<u64> =
                cands.iter().zip(adj.row(v)).map(|(c, a)| c & a).collect();
            if count(&next) == 0 {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                expand(adj, &next, current, best, budget)?;
            }
            current.pop();
        }
        Ok(())
    }

    expand(adj, &full, &mut current, &mut best, budget)?;
    Ok(best)
}

/// Exact chromatic number by DSATUR-ordered branch and bound. The clique
/// is pre-colored; any proper coloring can be permuted to agree with that
/// assignment, so optimality is unaffected.
fn dsatur_chromatic(
    adj: &AdjBits,
    clique: &[u32],
    upper: u32,
    budget: &mut Budget,
) -> Result<u32> {
    let n = adj.n;
    let mut best = upper;
    let mut colors: Vec<i32> = vec![-1; n];
    for (i, &v) in clique.iter().enumerate() {
        colors[v as usize] = i as i32;
    }
    let lower = clique.len() as u32;

    struct S<'a> {
        adj: &'a AdjBits,
        colors: Vec<i32>,
        best: u32,
        lower: u32,
        degrees: Vec<u32>,
    }

    fn select(s: &S) -> Option<usize> {
        let n = s.adj.n;
        let mut pick: Option<(u32, u32, usize)> = None; // (saturation, degree, vertex)
        let mut seen = vec![false; n + 1];
        for v in 0..n {
            if s.colors[v] >= 0 {
                continue;
            }
            let mut sat = 0;
            for u in 0..n {
                if s.adj.adjacent(v, u) && s.colors[u] >= 0 && !seen[s.colors[u] as usize] {
                    seen[s.colors[u] as usize] = true;
                    sat += 1;
                }
            }
            for u in 0..n {
                if s.adj.adjacent(v, u) && s.colors[u] >= 0 {
                    seen[s.colors[u] as usize] = false;
                }
            }
            let key = (sat, s.degrees[v], v);
            let better = match pick {
                None => true,
                Some((ps, pd, pv)) => {
                    key.0 > ps || (key.0 == ps && (key.1 > pd || (key.1 == pd && v < pv)))
                }
            };
            if better {
                pick = Some(key);
            }
        }
        pick.map(|(_, _, v)| v)
    }

    fn dfs(s: &mut S, colored: usize, used: u32, budget: &mut Budget) -> Result<()> {
        budget.tick()?;
        if used >= s.best {
            return Ok(());
        }
        if colored == s.adj.n {
            s.best = used;
            return Ok(());
        }
        let Some(v) = select(s) else {
            s.best = s.best.min(used);
            return Ok(());
        };
        let cap = (used + 1).min(s.best.saturating_sub(1));
        for c in 0..cap {
            let conflict =
                (0..s.adj.n).any(|u| s.adj.adjacent(v, u) && s.colors[u] == c as i32);
            if conflict {
                continue;
            }
            s.colors[v] = c as i32;
            dfs(s, colored + 1, used.max(c + 1), budget)?;
            s.colors[v] = -1;
            if s.best == s.lower {
                return Ok(()); // cannot go below the clique bound
            }
        }
        Ok(())
    }

    let degrees = (0..n).map(|v| adj.degree(v)).collect();
    let mut state = S { adj, colors, best, lower, degrees };
    let colored = clique.len();
    dfs(&mut state, colored, lower, budget)?;
    best = state.best;
    Ok(best)
}

/// First proper coloring in lexicographic order with colors `0..chi`;
/// the canonical witness reported to callers.
fn lex_least_coloring(adj: &AdjBits, chi: u32, budget: &mut Budget) -> Result<Vec<u32>> {
    let n = adj.n;
    let mut colors = vec![u32::MAX; n];

    fn dfs(adj: &AdjBits, colors: &mut Vec<u32>, v: usize, chi: u32, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        if v == adj.n {
            return Ok(true);
        }
        for c in 0..chi {
            let conflict = (0..v).any(|u| adj.adjacent(v, u) && colors[u] == c);
            if conflict {
                continue;
            }
            colors[v] = c;
            if dfs(adj, colors, v + 1, chi, budget)? {
                return Ok(true);
            }
            colors[v] = u32::MAX;
        }
        Ok(false)
    }

    let ok = dfs(adj, &mut colors, 0, chi, budget)?;
    debug_assert!(ok || n == 0, "a chi-coloring must exist");
    Ok(colors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> FiniteGraph {
        let edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        FiniteGraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn odd_and_even_cycles() {
        assert_eq!(cycle(5).chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(3));
        assert_eq!(cycle(6).chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(2));
        assert_eq!(cycle(9).chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(3));
    }

    #[test]
    fn empty_and_edgeless() {
        let none = FiniteGraph::from_edges(0, &[]).unwrap();
        assert_eq!(none.chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(0));
        let three = FiniteGraph::from_edges(3, &[]).unwrap();
        assert_eq!(three.chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(1));
    }

    #[test]
    fn witness_is_proper_and_lex_least() {
        let g = FiniteGraph::from_edges(6, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
            .unwrap();
        match g.chromatic_number(ColoringMode::Exact).unwrap() {
            ChromaticOutcome::Exact { chi, witness } => {
                assert_eq!(chi, 3);
                for &(u, v) in g.edges() {
                    assert_ne!(witness[u as usize], witness[v as usize]);
                }
                assert_eq!(witness[0], 0);
                assert_eq!(witness[1], 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn loops_are_uncolorable() {
        let g = FiniteGraph::from_edges(2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(
            g.chromatic_number(ColoringMode::Exact).unwrap(),
            ChromaticOutcome::Uncolorable
        );
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let g = cycle(12);
        match g.chromatic_number_with_budget(ColoringMode::Exact, 2) {
            Err(Error::ResourceLimit { what, .. }) => {
                assert_eq!(what, "coloring search nodes")
            }
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn petersen_graph_needs_three() {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0), // outer cycle
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5), // inner star
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9), // spokes
        ];
        let g = FiniteGraph::from_edges(10, &edges).unwrap();
        assert_eq!(g.chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(3));
    }
}
