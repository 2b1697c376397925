//! Graphs attached to a submeasure, a partition and a threshold.
//!
//! The infinite graph lives on all integer vectors indexed by the blocks
//! of the partition: `k` and `l` are adjacent when the union of blocks on
//! which `k != l + 1` fails has submeasure below epsilon. Two finite
//! surrogates bracket its chromatic number:
//!
//! * an induced box on `{0,...,B-1}^P` (chromatic number from below),
//! * a quotient on `(Z/m)^P` (chromatic number from above, because
//!   coordinatewise reduction mod m is a graph homomorphism: reducing can
//!   only shrink the violating block set, and the submeasure is monotone).
//!
//! The edge relation is symmetrized: an edge is present when either
//! orientation of the defining condition holds. Any proper coloring of
//! the symmetrized graph properly colors the one-sided graph as well, so
//! lower bounds transfer.

mod chromatic;

pub use chromatic::{brute_force_upper_bound_hint, ChromaticOutcome, ColoringMode};

use num::BigRational;
use num::Signed;

use crate::error::{Error, Result};
use crate::limits::ResourceLimits;
use crate::submeasure::{block_union_values, AtomSet, FiniteSubmeasure, Partition};

/// Parameters of the graph: a submeasure, a partition of its ground set
/// and a positive threshold.
#[derive(Debug, Clone)]
pub struct GammaSpec {
    mu: FiniteSubmeasure,
    partition: Partition,
    epsilon: BigRational,
    limits: ResourceLimits,
}

impl GammaSpec {
    pub fn new(mu: FiniteSubmeasure, partition: Partition, epsilon: BigRational) -> Result<Self> {
        if partition.atom_count() != mu.atom_count() {
            return Err(Error::MismatchedGroundSets {
                left: mu.atom_count(),
                right: partition.atom_count(),
            });
        }
        if !epsilon.is_positive() {
            return Err(Error::InvalidSubmeasure("epsilon must be positive".into()));
        }
        Ok(Self { mu, partition, epsilon, limits: ResourceLimits::default() })
    }

    pub fn with_limits(mut self, limits: ResourceLimits) -> Self {
        self.limits = limits;
        self
    }

    pub fn mu(&self) -> &FiniteSubmeasure {
        &self.mu
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn block_count(&self) -> usize {
        self.partition.block_count()
    }

    /// Union of the blocks on which `k = l + 1` fails, as an atom set.
    pub fn bad_set(&self, k: &[i64], l: &[i64]) -> Result<AtomSet> {
        let p = self.block_count();
        if k.len() != p || l.len() != p {
            return Err(Error::LengthMismatch { expected: p, got: k.len().max(l.len()) });
        }
        let mut bad: AtomSet = 0;
        for i in 0..p {
            if k[i] != l[i] + 1 {
                bad |= self.partition.block(i);
            }
        }
        Ok(bad)
    }

    /// Symmetrized adjacency; for `k = l` this reports whether the vertex
    /// carries a loop (which happens exactly when `mu(X) < epsilon`).
    pub fn is_edge(&self, k: &[i64], l: &[i64]) -> Result<bool> {
        let fwd = self.mu.eval(self.bad_set(k, l)?)?;
        if fwd < self.epsilon {
            return Ok(true);
        }
        let bwd = self.mu.eval(self.bad_set(l, k)?)?;
        Ok(bwd < self.epsilon)
    }

    /// Whether vertices of any truncation carry loops.
    pub fn has_loops(&self) -> bool {
        self.mu.total() < self.epsilon
    }

    /// Block-subset admissibility table: entry `pat` says whether the
    /// union of the blocks in `pat` has submeasure below epsilon. Edge
    /// tests against the table are pure bit operations.
    fn admissible_patterns(&self) -> Result<Vec<bool>> {
        let values = block_union_values(&self.mu, &self.partition)?;
        Ok(values.into_iter().map(|v| v < self.epsilon).collect())
    }

    /// Induced subgraph on `{0,...,side-1}^P`. Being an induced subgraph
    /// of the full graph, its chromatic number bounds the full one from
    /// below.
    pub fn box_subgraph(&self, side: u32) -> Result<FiniteGraph> {
        if side < 2 {
            return Err(Error::InvalidSubmeasure("box side must be at least 2".into()));
        }
        self.materialize(side, Provenance::Box { side })
    }

    /// Quotient graph on `(Z/m)^P`: adjacency uses `k != l + 1 (mod m)`.
    /// Reduction mod m is a graph homomorphism from the full graph, so the
    /// quotient's chromatic number bounds the full one from above.
    pub fn quotient_graph(&self, modulus: u32) -> Result<FiniteGraph> {
        if modulus < 2 {
            return Err(Error::InvalidSubmeasure("quotient modulus must be at least 2".into()));
        }
        self.materialize(modulus, Provenance::Quotient { modulus })
    }

    fn materialize(&self, side: u32, provenance: Provenance) -> Result<FiniteGraph> {
        let p = self.block_count();
        let count = (side as u64).checked_pow(p as u32).filter(|&c| c <= self.limits.max_graph_vertices);
        let Some(count) = count else {
            return Err(Error::ResourceLimit {
                what: "graph vertices",
                value: (side as u64).pow(p.min(32) as u32),
                limit: self.limits.max_graph_vertices,
            });
        };
        let admissible = self.admissible_patterns()?;
        let full_pattern = (1u32 << p) - 1;
        let modular = matches!(provenance, Provenance::Quotient { .. });

        let labels: Vec<Vec<i64>> = lex_vectors(side, p);
        let mut edges = Vec::new();
        let loops = vec![admissible[full_pattern as usize]; count as usize];
        for i in 0..count as usize {
            for j in (i + 1)..count as usize {
                let (k, l) = (&labels[i], &labels[j]);
                if pattern_edge(k, l, side, modular, &admissible)
                    || pattern_edge(l, k, side, modular, &admissible)
                {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Ok(FiniteGraph { labels, edges, loops, provenance })
    }
}

fn pattern_edge(k: &[i64], l: &[i64], side: u32, modular: bool, admissible: &[bool]) -> bool {
    let mut pat: u32 = 0;
    for i in 0..k.len() {
        let successor = if modular { (l[i] + 1).rem_euclid(i64::from(side)) } else { l[i] + 1 };
        if k[i] != successor {
            pat |= 1 << i;
        }
    }
    admissible[pat as usize]
}

fn lex_vectors(side: u32, len: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; len];
    loop {
        out.push(cur.clone());
        // Odometer increment on the last coordinate keeps lexicographic order.
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < i64::from(side) {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Where a finite graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Box { side: u32 },
    Quotient { modulus: u32 },
    Adhoc,
}

/// A concrete undirected graph with vector-labelled vertices.
///
/// Loops are tracked per vertex; a graph with a loop admits no proper
/// coloring and is reported `Uncolorable` rather than given a number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    labels: Vec<Vec<i64>>,
    edges: Vec<(u32, u32)>,
    loops: Vec<bool>,
    provenance: Provenance,
}

impl FiniteGraph {
    /// Builds an ad-hoc graph on `n` vertices labelled `0..n-1`; pairs
    /// with equal endpoints become loops.
    pub fn from_edges(n: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        let mut edges = Vec::new();
        let mut loops = vec![false; n as usize];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::AtomOutOfRange { index: a.max(b), atom_count: n });
            }
            if a == b {
                loops[a as usize] = true;
            } else {
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self {
            labels: (0..n).map(|v| vec![i64::from(v)]).collect(),
            edges,
            loops,
            provenance: Provenance::Adhoc,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn labels(&self) -> &[Vec<i64>] {
        &self.labels
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn has_loops(&self) -> bool {
        self.loops.iter().any(|&l| l)
    }

    pub fn label_string(&self, v: usize) -> String {
        self.labels[v].iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Exact or bounded chromatic number; see [`ColoringMode`].
    pub fn chromatic_number(&self, mode: ColoringMode) -> Result<ChromaticOutcome> {
        self.chromatic_number_with_budget(mode, ResourceLimits::default().max_solver_nodes)
    }

    pub fn chromatic_number_with_budget(
        &self,
        mode: ColoringMode,
        node_budget: u64,
    ) -> Result<ChromaticOutcome> {
        if self.has_loops() {
            return Ok(ChromaticOutcome::Uncolorable);
        }
        chromatic::solve(self, mode, node_budget)
    }

    /// Plain edge list, one `u v` line per edge, endpoints rendered as
    /// comma-joined coordinates.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&self.label_string(u as usize));
            out.push(' ');
            out.push_str(&self.label_string(v as usize));
            out.push('\n');
        }
        for (v, &l) in self.loops.iter().enumerate() {
            if l {
                let s = self.label_string(v);
                out.push_str(&format!("{s} {s}\n"));
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gamma {\n");
        for v in 0..self.vertex_count() {
            out.push_str(&format!("  \"{}\";\n", self.label_string(v)));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                self.label_string(u as usize),
                self.label_string(v as usize)
            ));
        }
        for (v, &l) in self.loops.iter().enumerate() {
            if l {
                let s = self.label_string(v);
                out.push_str(&format!("  \"{s}\" -- \"{s}\";\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    /// CSV of a coloring, vertices quoted because labels contain commas.
    pub fn coloring_csv(&self, coloring: &[u32]) -> String {
        let mut out = String::from("vertex,color\n");
        for v in 0..self.vertex_count() {
            out.push_str(&format!("\"{}\",{}\n", self.label_string(v), coloring[v]));
        }
        out
    }
}

/// Outcome of checking that the constant-on-subblocks embedding carries
/// edges of the coarse graph to edges of the fine graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RefinementCheck {
    Ok { edges_checked: u64 },
    Counterexample { coarse_k: Vec<i64>, coarse_l: Vec<i64> },
}

impl RefinementCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, RefinementCheck::Ok { .. })
    }
}

/// Checks on a box of the given side that the diagonal embedding
/// (constant on sub-blocks) is a graph homomorphism from the coarse graph
/// into the fine one; consequently the coarse chromatic number is at most
/// the fine one.
pub fn diagonal_refinement_hom(
    coarse: &GammaSpec,
    fine: &GammaSpec,
    box_side: u32,
) -> Result<RefinementCheck> {
    if coarse.mu != fine.mu || coarse.epsilon != fine.epsilon {
        return Err(Error::InvalidSubmeasure(
            "refinement check needs identical submeasure and epsilon".into(),
        ));
    }
    if !fine.partition.refines(&coarse.partition) {
        return Err(Error::NotARefinement);
    }
    let p0 = coarse.block_count();
    let p1 = fine.block_count();
    // Which coarse block each fine block sits inside.
    let mut parent = Vec::with_capacity(p1);
    for i in 0..p1 {
        let atom = fine.partition.block(i).trailing_zeros() + 1;
        parent.push(coarse.partition.block_containing(atom).expect("refinement checked"));
    }
    let vectors = lex_vectors(box_side, p0);
    let lift = |k: &[i64]| -> Vec<i64> { parent.iter().map(|&b| k[b]).collect() };
    let mut checked = 0u64;
    for k in &vectors {
        for l in &vectors {
            if k == l {
                continue;
            }
            if coarse.is_edge(k, l)? {
                checked += 1;
                if !fine.is_edge(&lift(k), &lift(l))? {
                    return Ok(RefinementCheck::Counterexample {
                        coarse_k: k.clone(),
                        coarse_l: l.clone(),
                    });
                }
            }
        }
    }
    Ok(RefinementCheck::Ok { edges_checked: checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};
    use crate::submeasure::atom_set;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_prob(n: u32) -> FiniteSubmeasure {
        FiniteSubmeasure::uniform(n, rat(1, i64::from(n))).unwrap()
    }

    // Single uniform block of total mass 1.
    fn single_block(eps: BigRational) -> GammaSpec {
        GammaSpec::new(uniform_prob(2), Partition::whole(2), eps).unwrap()
    }

    fn two_halves(eps: BigRational) -> GammaSpec {
        let p = Partition::from_index_lists(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        GammaSpec::new(uniform_prob(4), p, eps).unwrap()
    }

    #[test]
    fn bad_set_examples() {
        let spec = two_halves(rat(3, 10));
        // k = l + 1 everywhere: nothing violates.
        assert_eq!(spec.bad_set(&[5, 8], &[4, 7]).unwrap(), 0);
        // k = l: every block violates.
        assert_eq!(spec.bad_set(&[3, 3], &[3, 3]).unwrap(), spec.mu().full_set());
        // Second block violates only.
        assert_eq!(spec.bad_set(&[5, 7], &[4, 7]).unwrap(), atom_set(&[3, 4]));
    }

    #[test]
    fn bad_set_rejects_length_mismatch() {
        let spec = two_halves(rat(3, 10));
        assert!(spec.bad_set(&[1], &[1, 2]).is_err());
    }

    #[test]
    fn edge_examples() {
        let spec = two_halves(rat(3, 10));
        assert!(spec.is_edge(&[5, 7], &[4, 6]).unwrap());
        assert!(!spec.is_edge(&[5, 7], &[4, 7]).unwrap());
    }

    #[test]
    fn edge_symmetry_and_translation_invariance() {
        let spec = two_halves(rat(3, 10));
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let k: Vec<i64> = (0..2).map(|_| rng.gen_range(-6..6)).collect();
            let l: Vec<i64> = (0..2).map(|_| rng.gen_range(-6..6)).collect();
            let c: Vec<i64> = (0..2).map(|_| rng.gen_range(-6..6)).collect();
            if k == l {
                continue;
            }
            let e = spec.is_edge(&k, &l).unwrap();
            assert_eq!(e, spec.is_edge(&l, &k).unwrap());
            let kc: Vec<i64> = k.iter().zip(&c).map(|(a, b)| a + b).collect();
            let lc: Vec<i64> = l.iter().zip(&c).map(|(a, b)| a + b).collect();
            assert_eq!(e, spec.is_edge(&kc, &lc).unwrap());
        }
    }

    #[test]
    fn box_single_block_is_path() {
        let spec = single_block(rat(1, 2));
        let g = spec.box_subgraph(4).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert!(!g.has_loops());
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn box_two_halves_single_diagonal_edge() {
        let spec = two_halves(rat(3, 10));
        let g = spec.box_subgraph(2).unwrap();
        assert_eq!(g.vertex_count(), 4);
        // Lex order: (0,0), (0,1), (1,0), (1,1); the only edge joins the
        // all-zero and all-one vectors.
        assert_eq!(g.edges(), &[(0, 3)]);
    }

    #[test]
    fn large_epsilon_gives_loops_everywhere() {
        let spec = single_block(rat_int(2));
        let g = spec.box_subgraph(3).unwrap();
        assert!(g.has_loops());
        assert_eq!(g.edge_count(), 3); // complete on 3 vertices
        assert_eq!(
            g.chromatic_number(ColoringMode::Exact).unwrap(),
            ChromaticOutcome::Uncolorable
        );
    }

    #[test]
    fn quotient_single_block_cycle_and_edge() {
        let spec = single_block(rat(1, 2));
        let five = spec.quotient_graph(5).unwrap();
        assert_eq!(five.vertex_count(), 5);
        assert_eq!(five.edges(), &[(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        let two = spec.quotient_graph(2).unwrap();
        assert_eq!(two.edges(), &[(0, 1)]);
    }

    #[test]
    fn quotient_large_epsilon_uncolorable() {
        let spec = single_block(rat_int(2));
        for m in [2u32, 3, 5] {
            let g = spec.quotient_graph(m).unwrap();
            assert!(g.has_loops());
        }
    }

    #[test]
    fn chromatic_small_classics() {
        let c5 = FiniteGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        match c5.chromatic_number(ColoringMode::Exact).unwrap() {
            ChromaticOutcome::Exact { chi, witness } => {
                assert_eq!(chi, 3);
                // Lexicographically least proper 3-coloring of the 5-cycle.
                assert_eq!(witness, vec![0, 1, 0, 1, 2]);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
        let p4 = FiniteGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(p4.chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(2));
        let k4 = FiniteGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        assert_eq!(k4.chromatic_number(ColoringMode::Exact).unwrap().chi(), Some(4));
    }

    #[test]
    fn chromatic_bounds_mode_brackets_exact() {
        let g = FiniteGraph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)],
        )
        .unwrap();
        let exact = g.chromatic_number(ColoringMode::Exact).unwrap().chi().unwrap();
        match g.chromatic_number(ColoringMode::Bounds).unwrap() {
            ChromaticOutcome::Bounds { lower, upper } => {
                assert!(lower <= exact && exact <= upper);
                assert_eq!(lower, 3); // contains a triangle
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn epsilon_monotonicity_adds_edges() {
        let small = two_halves(rat(3, 10)).box_subgraph(3).unwrap();
        let large = two_halves(rat(3, 5)).box_subgraph(3).unwrap();
        for e in small.edges() {
            assert!(large.edges().contains(e));
        }
        assert!(large.edge_count() > small.edge_count());
    }

    #[test]
    fn box_chi_at_most_quotient_chi() {
        let eps_grid = [rat(1, 5), rat(3, 10), rat(1, 2), rat(3, 5)];
        for eps in eps_grid {
            let spec = two_halves(eps);
            let b = spec.box_subgraph(3).unwrap();
            let q = spec.quotient_graph(4).unwrap();
            let chi_b = b.chromatic_number(ColoringMode::Exact).unwrap().chi().unwrap();
            let chi_q = q.chromatic_number(ColoringMode::Exact).unwrap().chi().unwrap();
            assert!(chi_b <= chi_q, "box {chi_b} vs quotient {chi_q}");
        }
    }

    #[test]
    fn refinement_hom_whole_to_halves() {
        let mu = uniform_prob(4);
        let coarse = GammaSpec::new(mu.clone(), Partition::whole(4), rat(3, 10)).unwrap();
        let fine = GammaSpec::new(
            mu,
            Partition::from_index_lists(4, &[vec![1, 2], vec![3, 4]]).unwrap(),
            rat(3, 10),
        )
        .unwrap();
        let check = diagonal_refinement_hom(&coarse, &fine, 3).unwrap();
        assert!(check.is_ok(), "{check:?}");
    }

    #[test]
    fn refinement_hom_identity() {
        let spec = two_halves(rat(3, 10));
        let check = diagonal_refinement_hom(&spec, &spec, 3).unwrap();
        assert!(check.is_ok());
    }

    #[test]
    fn refinement_hom_rejects_non_refinement() {
        let mu = uniform_prob(4);
        let a = GammaSpec::new(
            mu.clone(),
            Partition::from_index_lists(4, &[vec![1, 2], vec![3, 4]]).unwrap(),
            rat(3, 10),
        )
        .unwrap();
        let b = GammaSpec::new(
            mu,
            Partition::from_index_lists(4, &[vec![1, 3], vec![2, 4]]).unwrap(),
            rat(3, 10),
        )
        .unwrap();
        assert!(matches!(diagonal_refinement_hom(&a, &b, 3), Err(Error::NotARefinement)));
    }

    #[test]
    fn box_respects_vertex_cap() {
        let spec = two_halves(rat(3, 10)).with_limits(ResourceLimits::scaled_to(3));
        assert!(matches!(
            spec.box_subgraph(2),
            Err(Error::ResourceLimit { what: "graph vertices", .. })
        ));
    }

    #[test]
    fn exports_are_deterministic_and_labelled() {
        let spec = two_halves(rat(3, 10));
        let g = spec.box_subgraph(2).unwrap();
        assert_eq!(g.to_edge_list(), "0,0 1,1\n");
        let dot = g.to_dot();
        assert!(dot.contains("\"0,1\";"));
        assert!(dot.contains("\"0,0\" -- \"1,1\";"));
    }
}
