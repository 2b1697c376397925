//! Finite submeasures, partitions, covering numbers.
//!
//! A submeasure here is a monotone, subadditive set function with
//! `mu(empty) = 0` on the full power set of a finite ground set
//! `{1, ..., N}`. Subsets travel as bitmasks (`AtomSet`), atom `i`
//! occupying bit `i - 1`; user-facing formats use 1-based index lists.
//!
//! Everything is exact: values are `BigRational` and every comparison the
//! covering solver makes is an integer or rational comparison.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::{format_rat, parse_rat, rat, strict_multiple_bound};

/// Subset of the ground set as a bitmask; atom `i` (1-based) is bit `i-1`.
pub type AtomSet = u32;

/// Hard cap on ground-set size for mask-enumerating operations.
pub const MAX_ENUMERATION_ATOMS: u32 = 24;

/// Ground sets larger than this cannot be represented at all.
pub const MAX_ATOMS: u32 = 32;

pub fn atom_set(atoms: &[u32]) -> AtomSet {
    atoms.iter().fold(0, |m, &a| m | (1 << (a - 1)))
}

pub fn atoms_of(mask: AtomSet) -> Vec<u32> {
    (0..MAX_ATOMS).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

fn full_mask(atoms: u32) -> AtomSet {
    if atoms == 32 {
        u32::MAX
    } else {
        (1u32 << atoms) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kind {
    /// Every atom carries the same weight; `mu(A) = |A| * weight`.
    Uniform { weight: BigRational },
    /// `mu(A) = sum of weights over A`.
    Weighted { weights: Vec<BigRational> },
    /// `mu(A) = min(cap, slope * |A|)`. Subadditive but not additive.
    Capped { cap: BigRational, slope: BigRational },
    /// Explicit value per subset, indexed by bitmask.
    Table { values: Vec<BigRational> },
}

/// A set function on the power set of `{1, ..., atoms}`.
///
/// The builder kinds are all genuine submeasures by construction except
/// `table`, which stores arbitrary nonnegative values and is validated
/// (or refuted) by [`FiniteSubmeasure::verify_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubmeasure {
    atoms: u32,
    kind: Kind,
}

impl FiniteSubmeasure {
    pub fn uniform(atoms: u32, weight: BigRational) -> Result<Self> {
        check_atom_count(atoms)?;
        if weight.is_negative() {
            return Err(Error::InvalidSubmeasure("negative atom weight".into()));
        }
        Ok(Self { atoms, kind: Kind::Uniform { weight } })
    }

    pub fn weighted(weights: Vec<BigRational>) -> Result<Self> {
        let atoms = weights.len() as u32;
        check_atom_count(atoms)?;
        if atoms == 0 {
            return Err(Error::InvalidSubmeasure("no atoms".into()));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidSubmeasure("negative atom weight".into()));
        }
        Ok(Self { atoms, kind: Kind::Weighted { weights } })
    }

    pub fn capped(atoms: u32, cap: BigRational, slope: BigRational) -> Result<Self> {
        check_atom_count(atoms)?;
        if cap.is_negative() || slope.is_negative() {
            return Err(Error::InvalidSubmeasure("negative cap or slope".into()));
        }
        Ok(Self { atoms, kind: Kind::Capped { cap, slope } })
    }

    /// `values[mask]` is the value of the subset `mask`; length must be `2^atoms`.
    pub fn from_table(atoms: u32, values: Vec<BigRational>) -> Result<Self> {
        if atoms == 0 || atoms > 20 {
            return Err(Error::InvalidSubmeasure(format!(
                "table kind supports 1..=20 atoms, got {atoms}"
            )));
        }
        if values.len() != 1usize << atoms {
            return Err(Error::InvalidSubmeasure(format!(
                "table needs {} entries, got {}",
                1usize << atoms,
                values.len()
            )));
        }
        if values.iter().any(|v| v.is_negative()) {
            return Err(Error::InvalidSubmeasure("negative table value".into()));
        }
        Ok(Self { atoms, kind: Kind::Table { values } })
    }

    pub fn atom_count(&self) -> u32 {
        self.atoms
    }

    pub fn full_set(&self) -> AtomSet {
        full_mask(self.atoms)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            Kind::Uniform { .. } => "uniform",
            Kind::Weighted { .. } => "weighted",
            Kind::Capped { .. } => "capped",
            Kind::Table { .. } => "table",
        }
    }

    /// Whether the kind is additive by construction (a measure).
    pub fn is_measure_kind(&self) -> bool {
        matches!(self.kind, Kind::Uniform { .. } | Kind::Weighted { .. })
    }

    fn value_of(&self, mask: AtomSet) -> BigRational {
        match &self.kind {
            Kind::Uniform { weight } => weight * BigInt::from(mask.count_ones()),
            Kind::Weighted { weights } => {
                let mut acc = BigRational::zero();
                let mut m = mask;
                while m != 0 {
                    let b = m.trailing_zeros();
                    acc += &weights[b as usize];
                    m &= m - 1;
                }
                acc
            }
            Kind::Capped { cap, slope } => {
                let linear = slope * BigInt::from(mask.count_ones());
                if &linear < cap {
                    linear
                } else {
                    cap.clone()
                }
            }
            Kind::Table { values } => values[mask as usize].clone(),
        }
    }

    /// Evaluates the submeasure on a subset given as a bitmask.
    pub fn eval(&self, mask: AtomSet) -> Result<BigRational> {
        if u64::from(mask) > u64::from(self.full_set()) {
            return Err(Error::MaskOutOfRange { mask: mask.into(), atom_count: self.atoms });
        }
        Ok(self.value_of(mask))
    }

    pub fn eval_atoms(&self, atoms: &[u32]) -> Result<BigRational> {
        for &a in atoms {
            if a == 0 || a > self.atoms {
                return Err(Error::AtomOutOfRange { index: a, atom_count: self.atoms });
            }
        }
        Ok(self.value_of(atom_set(atoms)))
    }

    /// `mu(X)` for the whole ground set.
    pub fn total(&self) -> BigRational {
        self.value_of(self.full_set())
    }

    /// Exhaustively checks `mu(empty) = 0`, monotonicity and
    /// subadditivity. Monotonicity is checked on all nested pairs and
    /// subadditivity on all disjoint pairs; together with monotonicity
    /// the disjoint case implies the general one, so a clean report
    /// certifies the axioms on every pair of subsets.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        if self.atoms > 12 {
            return Err(Error::ResourceLimit {
                what: "exhaustive axiom check atoms",
                value: self.atoms.into(),
                limit: 12,
            });
        }
        let n = 1usize << self.atoms;
        let values: Vec<BigRational> = (0..n).map(|m| self.value_of(m as AtomSet)).collect();
        if !values[0].is_zero() {
            return Ok(AxiomReport::EmptySetNonzero { value: values[0].clone() });
        }
        let mut pairs = 0u64;
        for b in 0..n as u32 {
            // Proper submasks of b, descending.
            let mut a = b;
            while a > 0 {
                a = (a - 1) & b;
                pairs += 1;
                if values[a as usize] > values[b as usize] {
                    return Ok(AxiomReport::MonotonicityViolation {
                        subset: a,
                        superset: b,
                        subset_value: values[a as usize].clone(),
                        superset_value: values[b as usize].clone(),
                    });
                }
                if a == 0 {
                    break;
                }
            }
        }
        let full = full_mask(self.atoms);
        for u in 0..=full {
            let comp = full & !u;
            let mut v = comp;
            loop {
                pairs += 1;
                let sum = &values[u as usize] + &values[v as usize];
                if values[(u | v) as usize] > sum {
                    return Ok(AxiomReport::SubadditivityViolation {
                        left: u,
                        right: v,
                        union_value: values[(u | v) as usize].clone(),
                        sum,
                    });
                }
                if v == 0 {
                    break;
                }
                v = (v - 1) & comp;
            }
        }
        Ok(AxiomReport::Ok { pairs_checked: pairs })
    }

    /// Seeded random spot-check of the axioms for ground sets too large
    /// to enumerate. Subadditivity is sampled on arbitrary (not
    /// necessarily disjoint) pairs.
    pub fn verify_axioms_sampled(&self, seed: u64, samples: u64) -> AxiomReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = u64::from(self.full_set());
        let empty = self.value_of(0);
        if !empty.is_zero() {
            return AxiomReport::EmptySetNonzero { value: empty };
        }
        let mut pairs = 0u64;
        for _ in 0..samples {
            let b = (rng.gen::<u64>() & full) as AtomSet;
            let a = (rng.gen::<u64>() as AtomSet) & b;
            pairs += 1;
            let va = self.value_of(a);
            let vb = self.value_of(b);
            if va > vb {
                return AxiomReport::MonotonicityViolation {
                    subset: a,
                    superset: b,
                    subset_value: va,
                    superset_value: vb,
                };
            }
            let u = (rng.gen::<u64>() & full) as AtomSet;
            let v = (rng.gen::<u64>() & full) as AtomSet;
            pairs += 1;
            let sum = self.value_of(u) + self.value_of(v);
            let union = self.value_of(u | v);
            if union > sum {
                return AxiomReport::SubadditivityViolation { left: u, right: v, union_value: union, sum };
            }
        }
        AxiomReport::Ok { pairs_checked: pairs }
    }

    /// Minimum number of sets of submeasure strictly below `delta` whose
    /// union is the ground set, together with a witness cover.
    ///
    /// Search: greedy cover first for an upper bound, then depth-first
    /// branch-and-bound on the lowest uncovered atom, candidates being
    /// the maximal admissible sets containing it in lexicographic order.
    pub fn covering_number(&self, delta: &BigRational) -> Result<Cover> {
        if !delta.is_positive() {
            return Err(Error::InvalidSubmeasure("covering threshold must be positive".into()));
        }
        if self.atoms > MAX_ENUMERATION_ATOMS {
            return Err(Error::ResourceLimit {
                what: "covering search atoms",
                value: self.atoms.into(),
                limit: MAX_ENUMERATION_ATOMS.into(),
            });
        }
        for a in 0..self.atoms {
            let v = self.value_of(1 << a);
            if &v >= delta {
                return Err(Error::Infeasible {
                    atom: a + 1,
                    value: format_rat(&v),
                    threshold: format_rat(delta),
                });
            }
        }
        let admissible = self.admissible_masks(delta)?;
        let full = full_mask(self.atoms);
        if admissible[full as usize] {
            return Ok(Cover { size: 1, sets: vec![full] });
        }
        let maximal = maximal_sets(&admissible, self.atoms);
        Ok(branch_and_bound_cover(&maximal, self.atoms))
    }

    /// Per-mask admissibility (`mu(mask) < delta`), via a kind-specific
    /// fast path where one exists.
    fn admissible_masks(&self, delta: &BigRational) -> Result<Vec<bool>> {
        let n = 1usize << self.atoms;
        let by_popcount_threshold = |t: Option<BigInt>| -> Vec<bool> {
            let t = t.map(|t| t.max(BigInt::zero())).unwrap_or_default();
            let t: u32 = t.min(BigInt::from(self.atoms)).try_into().unwrap_or(self.atoms);
            (0..n).map(|m| (m as AtomSet).count_ones() <= t).collect()
        };
        Ok(match &self.kind {
            Kind::Uniform { weight } => {
                if weight.is_zero() {
                    vec![true; n]
                } else {
                    by_popcount_threshold(strict_multiple_bound(weight, delta))
                }
            }
            Kind::Capped { cap, slope } => {
                if cap < delta || slope.is_zero() {
                    vec![true; n]
                } else {
                    by_popcount_threshold(strict_multiple_bound(slope, delta))
                }
            }
            Kind::Weighted { .. } | Kind::Table { .. } => {
                if self.atoms > 20 {
                    return Err(Error::ResourceLimit {
                        what: "per-mask admissibility atoms",
                        value: self.atoms.into(),
                        limit: 20,
                    });
                }
                match &self.kind {
                    Kind::Weighted { weights } => weighted_admissibility(weights, delta),
                    Kind::Table { values } => values.iter().map(|v| v < delta).collect(),
                    _ => unreachable!(),
                }
            }
        })
    }

    /// Pushes the submeasure forward along a partition: block `i` of the
    /// partition becomes atom `i` of the result, with
    /// `mu_P(B) = mu(union of blocks in B)`. The result is a table.
    pub fn induced(&self, partition: &Partition) -> Result<FiniteSubmeasure> {
        if partition.atom_count() != self.atoms {
            return Err(Error::MismatchedGroundSets {
                left: self.atoms,
                right: partition.atom_count(),
            });
        }
        let p = partition.block_count() as u32;
        if p > 20 {
            return Err(Error::ResourceLimit {
                what: "induced submeasure blocks",
                value: p.into(),
                limit: 20,
            });
        }
        let mut values = Vec::with_capacity(1 << p);
        for bmask in 0..(1u32 << p) {
            let mut union: AtomSet = 0;
            for (i, &block) in partition.blocks().iter().enumerate() {
                if bmask & (1 << i) != 0 {
                    union |= block;
                }
            }
            values.push(self.value_of(union));
        }
        FiniteSubmeasure::from_table(p, values)
    }
}

fn check_atom_count(atoms: u32) -> Result<()> {
    if atoms == 0 || atoms > MAX_ATOMS {
        return Err(Error::InvalidSubmeasure(format!(
            "atom count must be in 1..={MAX_ATOMS}, got {atoms}"
        )));
    }
    Ok(())
}

fn weighted_admissibility(weights: &[BigRational], delta: &BigRational) -> Vec<bool> {
    // Scale to integers over the common denominator, then subset-sum DP.
    let mut denom_lcm = BigInt::from(1);
    for w in weights {
        denom_lcm = num::integer::lcm(denom_lcm, w.denom().clone());
    }
    let scaled: Vec<BigInt> =
        weights.iter().map(|w| (w * &denom_lcm).to_integer()).collect();
    let threshold = {
        // sum < delta * lcm  <=>  sum <= ceil(delta * lcm) - 1
        let t: BigInt = (delta * &denom_lcm).ceil().to_integer() - 1;
        t.max(BigInt::from(-1))
    };
    let n = weights.len();
    let fits_u128 = scaled.iter().all(|s| u128::try_from(s.clone()).is_ok())
        && u128::try_from(threshold.clone()).is_ok()
        && {
            let total: BigInt = scaled.iter().sum();
            u128::try_from(total).is_ok()
        };
    if fits_u128 {
        let scaled: Vec<u128> = scaled.into_iter().map(|s| u128::try_from(s).unwrap()).collect();
        let threshold = u128::try_from(threshold).unwrap_or(0);
        let mut sums = vec![0u128; 1 << n];
        let mut out = vec![false; 1 << n];
        out[0] = true;
        for m in 1..(1usize << n) {
            let b = m.trailing_zeros() as usize;
            sums[m] = sums[m & (m - 1)] + scaled[b];
            out[m] = sums[m] <= threshold;
        }
        out
    } else {
        let mut sums = vec![BigInt::zero(); 1 << n];
        let mut out = vec![false; 1 << n];
        out[0] = true;
        for m in 1..(1usize << n) {
            let b = m.trailing_zeros() as usize;
            sums[m] = &sums[m & (m - 1)] + &scaled[b];
            out[m] = sums[m] <= threshold;
        }
        out
    }
}

fn maximal_sets(admissible: &[bool], atoms: u32) -> Vec<AtomSet> {
    let full = full_mask(atoms);
    let mut out = Vec::new();
    for m in 1..=full {
        if !admissible[m as usize] {
            continue;
        }
        let mut rest = full & !m;
        let mut maximal = true;
        while rest != 0 {
            let b = rest.trailing_zeros();
            if admissible[(m | (1 << b)) as usize] {
                maximal = false;
                break;
            }
            rest &= rest - 1;
        }
        if maximal {
            out.push(m);
        }
    }
    out.sort_by(|a, b| cmp_sets_lex(*a, *b));
    out
}

/// Lexicographic order on the sorted element lists of two sets.
fn cmp_sets_lex(a: AtomSet, b: AtomSet) -> std::cmp::Ordering {
    let (mut x, mut y) = (a, b);
    while x != 0 && y != 0 {
        let (ba, bb) = (x.trailing_zeros(), y.trailing_zeros());
        match ba.cmp(&bb) {
            std::cmp::Ordering::Equal => {
                x &= x - 1;
                y &= y - 1;
            }
            other => return other,
        }
    }
    x.count_ones().cmp(&y.count_ones())
}

/// Result of an exact set-cover search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub size: u32,
    pub sets: Vec<AtomSet>,
}

fn branch_and_bound_cover(maximal: &[AtomSet], atoms: u32) -> Cover {
    let full = full_mask(atoms);
    // Candidate lists per atom, in lexicographic set order.
    let mut per_atom: Vec<Vec<AtomSet>> = vec![Vec::new(); atoms as usize];
    for &m in maximal {
        let mut rest = m;
        while rest != 0 {
            let b = rest.trailing_zeros();
            per_atom[b as usize].push(m);
            rest &= rest - 1;
        }
    }
    let max_size = maximal.iter().map(|m| m.count_ones()).max().unwrap_or(1);

    // Greedy upper bound: repeatedly take the candidate covering the most
    // uncovered atoms, ties to the lexicographically smallest set.
    let mut greedy = Vec::new();
    let mut uncovered = full;
    while uncovered != 0 {
        let mut best: Option<(u32, AtomSet)> = None;
        for &m in maximal {
            let gain = (m & uncovered).count_ones();
            if gain == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((g, s)) => {
                    gain > g || (gain == g && cmp_sets_lex(m, s) == std::cmp::Ordering::Less)
                }
            };
            if better {
                best = Some((gain, m));
            }
        }
        let (_, pick) = best.expect("maximal sets cover every atom");
        greedy.push(pick);
        uncovered &= !pick;
    }

    let mut best_cover = greedy.clone();
    let mut best_size = greedy.len() as u32;
    let mut current: Vec<AtomSet> = Vec::new();

    fn dfs(
        uncovered: AtomSet,
        current: &mut Vec<AtomSet>,
        best_size: &mut u32,
        best_cover: &mut Vec<AtomSet>,
        per_atom: &[Vec<AtomSet>],
        max_size: u32,
    ) {
        if uncovered == 0 {
            if (current.len() as u32) < *best_size {
                *best_size = current.len() as u32;
                *best_cover = current.clone();
            }
            return;
        }
        let lower = (uncovered.count_ones() + max_size - 1) / max_size;
        if current.len() as u32 + lower >= *best_size {
            return;
        }
        let atom = uncovered.trailing_zeros() as usize;
        for &cand in &per_atom[atom] {
            current.push(cand);
            dfs(uncovered & !cand, current, best_size, best_cover, per_atom, max_size);
            current.pop();
        }
    }
    dfs(full, &mut current, &mut best_size, &mut best_cover, &per_atom, max_size);

    Cover { size: best_size, sets: best_cover }
}

/// Outcome of an axiom verification pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomReport {
    Ok { pairs_checked: u64 },
    EmptySetNonzero { value: BigRational },
    MonotonicityViolation {
        subset: AtomSet,
        superset: AtomSet,
        subset_value: BigRational,
        superset_value: BigRational,
    },
    SubadditivityViolation {
        left: AtomSet,
        right: AtomSet,
        union_value: BigRational,
        sum: BigRational,
    },
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, AxiomReport::Ok { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            AxiomReport::Ok { pairs_checked } => format!("ok ({pairs_checked} pairs checked)"),
            AxiomReport::EmptySetNonzero { value } => {
                format!("mu(empty) = {} != 0", format_rat(value))
            }
            AxiomReport::MonotonicityViolation {
                subset,
                superset,
                subset_value,
                superset_value,
            } => format!(
                "monotonicity fails: mu({:?}) = {} > mu({:?}) = {}",
                atoms_of(*subset),
                format_rat(subset_value),
                atoms_of(*superset),
                format_rat(superset_value)
            ),
            AxiomReport::SubadditivityViolation { left, right, union_value, sum } => format!(
                "subadditivity fails: mu({:?} u {:?}) = {} > {}",
                atoms_of(*left),
                atoms_of(*right),
                format_rat(union_value),
                format_rat(sum)
            ),
        }
    }
}

/// Ordered list of disjoint nonempty blocks covering the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    atoms: u32,
    blocks: Vec<AtomSet>,
}

impl Partition {
    pub fn new(atoms: u32, blocks: Vec<AtomSet>) -> Result<Self> {
        check_atom_count(atoms)?;
        let full = full_mask(atoms);
        let mut seen: AtomSet = 0;
        for &b in &blocks {
            if b == 0 {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if b & !full != 0 {
                return Err(Error::InvalidPartition("block mentions atoms outside the ground set".into()));
            }
            if b & seen != 0 {
                return Err(Error::InvalidPartition("blocks overlap".into()));
            }
            seen |= b;
        }
        if seen != full {
            return Err(Error::InvalidPartition("blocks do not cover the ground set".into()));
        }
        Ok(Self { atoms, blocks })
    }

    pub fn from_index_lists(atoms: u32, lists: &[Vec<u32>]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(lists.len());
        for list in lists {
            for &a in list {
                if a == 0 || a > atoms {
                    return Err(Error::AtomOutOfRange { index: a, atom_count: atoms });
                }
            }
            blocks.push(atom_set(list));
        }
        Partition::new(atoms, blocks)
    }

    pub fn singletons(atoms: u32) -> Self {
        Self { atoms, blocks: (0..atoms).map(|a| 1 << a).collect() }
    }

    pub fn whole(atoms: u32) -> Self {
        Self { atoms, blocks: vec![full_mask(atoms)] }
    }

    pub fn atom_count(&self) -> u32 {
        self.atoms
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[AtomSet] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> AtomSet {
        self.blocks[i]
    }

    pub fn to_index_lists(&self) -> Vec<Vec<u32>> {
        self.blocks.iter().map(|&b| atoms_of(b)).collect()
    }

    /// Index of the block containing the atom.
    pub fn block_containing(&self, atom: u32) -> Option<usize> {
        let bit = 1u32 << (atom - 1);
        self.blocks.iter().position(|&b| b & bit != 0)
    }

    /// Every block of `self` sits inside a single block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.atoms == coarser.atoms
            && self
                .blocks
                .iter()
                .all(|&fine| coarser.blocks.iter().any(|&c| fine & !c == 0))
    }

    /// Coarsest partition refining every input: all nonempty
    /// intersections, ordered lexicographically by block-index tuple.
    pub fn common_refinement(parts: &[Partition]) -> Result<Partition> {
        let Some(first) = parts.first() else {
            return Err(Error::InvalidPartition("no partitions given".into()));
        };
        for p in parts {
            if p.atoms != first.atoms {
                return Err(Error::MismatchedGroundSets { left: first.atoms, right: p.atoms });
            }
        }
        let mut acc = first.clone();
        for p in &parts[1..] {
            let mut blocks = Vec::new();
            for &a in &acc.blocks {
                for &b in &p.blocks {
                    let cut = a & b;
                    if cut != 0 {
                        blocks.push(cut);
                    }
                }
            }
            acc = Partition { atoms: first.atoms, blocks };
        }
        Ok(acc)
    }
}

/// Resolution-indexed family of submeasures: the member at resolution
/// `r` has every atom of submeasure at most `1/r`. Asymptotic statements
/// about ever-finer covers are checked along such a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmeasureFamily {
    kind: FamilyKind,
    resolution: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// Member at resolution `r`: uniform probability weights `1/r` on `r` atoms.
    Uniform,
    /// Member at resolution `r`: `min(cap, |A|/r)` on `r` atoms.
    Capped { cap: BigRational },
}

impl SubmeasureFamily {
    pub fn uniform(resolution: u32) -> Result<Self> {
        check_atom_count(resolution)?;
        Ok(Self { kind: FamilyKind::Uniform, resolution })
    }

    pub fn capped(cap: BigRational, resolution: u32) -> Result<Self> {
        check_atom_count(resolution)?;
        if cap.is_negative() {
            return Err(Error::InvalidSubmeasure("negative cap".into()));
        }
        Ok(Self { kind: FamilyKind::Capped { cap }, resolution })
    }

    pub fn member(&self, resolution: u32) -> Result<FiniteSubmeasure> {
        let unit = rat(1, i64::from(resolution.max(1)));
        match &self.kind {
            FamilyKind::Uniform => FiniteSubmeasure::uniform(resolution, unit),
            FamilyKind::Capped { cap } => FiniteSubmeasure::capped(resolution, cap.clone(), unit),
        }
    }

    pub fn working_member(&self) -> FiniteSubmeasure {
        self.member(self.resolution).expect("resolution validated at construction")
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Uniform => "uniform",
            FamilyKind::Capped { .. } => "capped",
        }
    }
}

// ---------------------------------------------------------------------------
// File formats

#[derive(Serialize, Deserialize)]
struct SubmeasureDto {
    atoms: u32,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    slope: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    values: Option<std::collections::BTreeMap<String, String>>,
}

/// Reads `{"atoms": N, "kind": "...", ...}` with rationals as `"a/b"`
/// strings; table values are keyed by subset bitmask in hex.
pub fn read_submeasure_json(text: &str) -> Result<FiniteSubmeasure> {
    let dto: SubmeasureDto = serde_json::from_str(text)?;
    let missing = |f: &str| Error::Parse(format!("missing field {f:?} for kind {:?}", dto.kind));
    match dto.kind.as_str() {
        "uniform" => {
            let w = dto.weight.as_ref().ok_or_else(|| missing("weight"))?;
            FiniteSubmeasure::uniform(dto.atoms, parse_rat(w)?)
        }
        "weighted" => {
            let ws = dto.weights.as_ref().ok_or_else(|| missing("weights"))?;
            if ws.len() as u32 != dto.atoms {
                return Err(Error::Parse(format!(
                    "expected {} weights, got {}",
                    dto.atoms,
                    ws.len()
                )));
            }
            let ws = ws.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>()?;
            FiniteSubmeasure::weighted(ws)
        }
        "capped" => {
            let cap = dto.cap.as_ref().ok_or_else(|| missing("cap"))?;
            let slope = dto.slope.as_ref().ok_or_else(|| missing("slope"))?;
            FiniteSubmeasure::capped(dto.atoms, parse_rat(cap)?, parse_rat(slope)?)
        }
        "table" => {
            let entries = dto.values.as_ref().ok_or_else(|| missing("values"))?;
            let n = 1usize << dto.atoms;
            let mut values = vec![BigRational::zero(); n];
            let mut seen = vec![false; n];
            for (key, val) in entries {
                let raw = key.trim_start_matches("0x").trim_start_matches("0X");
                let mask = usize::from_str_radix(raw, 16)
                    .map_err(|e| Error::Parse(format!("bad mask key {key:?}: {e}")))?;
                if mask >= n {
                    return Err(Error::MaskOutOfRange { mask: mask as u64, atom_count: dto.atoms });
                }
                values[mask] = parse_rat(val)?;
                seen[mask] = true;
            }
            if let Some(miss) = seen.iter().position(|s| !s) {
                return Err(Error::Parse(format!("table is missing mask {miss:#x}")));
            }
            FiniteSubmeasure::from_table(dto.atoms, values)
        }
        other => Err(Error::Parse(format!("unknown submeasure kind {other:?}"))),
    }
}

pub fn write_submeasure_json(mu: &FiniteSubmeasure) -> String {
    let mut dto = SubmeasureDto {
        atoms: mu.atoms,
        kind: mu.kind_name().into(),
        weight: None,
        weights: None,
        cap: None,
        slope: None,
        values: None,
    };
    match &mu.kind {
        Kind::Uniform { weight } => dto.weight = Some(format_rat(weight)),
        Kind::Weighted { weights } => {
            dto.weights = Some(weights.iter().map(format_rat).collect())
        }
        Kind::Capped { cap, slope } => {
            dto.cap = Some(format_rat(cap));
            dto.slope = Some(format_rat(slope));
        }
        Kind::Table { values } => {
            dto.values = Some(
                values
                    .iter()
                    .enumerate()
                    .map(|(m, v)| (format!("{m:#x}"), format_rat(v)))
                    .collect(),
            )
        }
    }
    serde_json::to_string_pretty(&dto).expect("static shape")
}

/// Partitions serialize as a JSON list of lists of 1-based atom indices.
pub fn read_partition_json(atoms: u32, text: &str) -> Result<Partition> {
    let lists: Vec<Vec<u32>> = serde_json::from_str(text)?;
    Partition::from_index_lists(atoms, &lists)
}

pub fn write_partition_json(p: &Partition) -> String {
    serde_json::to_string(&p.to_index_lists()).expect("static shape")
}

/// All distinct block-union values of a partition under a submeasure,
/// indexed by block subset; used by graph construction to make edge tests
/// integer-cheap.
pub fn block_union_values(
    mu: &FiniteSubmeasure,
    partition: &Partition,
) -> Result<Vec<BigRational>> {
    if partition.atom_count() != mu.atom_count() {
        return Err(Error::MismatchedGroundSets {
            left: mu.atom_count(),
            right: partition.atom_count(),
        });
    }
    let p = partition.block_count();
    if p > 20 {
        return Err(Error::ResourceLimit {
            what: "block union table blocks",
            value: p as u64,
            limit: 20,
        });
    }
    let mut out = Vec::with_capacity(1 << p);
    for bmask in 0..(1u32 << p) {
        let mut union: AtomSet = 0;
        for (i, &block) in partition.blocks().iter().enumerate() {
            if bmask & (1 << i) != 0 {
                union |= block;
            }
        }
        out.push(mu.value_of(union));
    }
    Ok(out)
}

/// Deduplicated, sorted atom sets — handy when reporting covers.
pub fn canonical_cover(sets: &[AtomSet]) -> Vec<AtomSet> {
    let set: BTreeSet<AtomSet> = sets.iter().copied().collect();
    let mut v: Vec<AtomSet> = set.into_iter().collect();
    v.sort_by(|a, b| cmp_sets_lex(*a, *b));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat_int;

    fn uniform_prob(n: u32) -> FiniteSubmeasure {
        FiniteSubmeasure::uniform(n, rat(1, i64::from(n))).unwrap()
    }

    #[test]
    fn eval_uniform_and_empty() {
        let mu = uniform_prob(4);
        assert_eq!(mu.eval(atom_set(&[1, 2])).unwrap(), rat(1, 2));
        assert_eq!(mu.eval(0).unwrap(), rat_int(0));
    }

    #[test]
    fn eval_capped() {
        let mu = FiniteSubmeasure::capped(4, rat_int(1), rat(1, 2)).unwrap();
        assert_eq!(mu.eval(atom_set(&[1, 2, 3])).unwrap(), rat_int(1));
        assert_eq!(mu.eval(atom_set(&[1])).unwrap(), rat(1, 2));
    }

    #[test]
    fn eval_rejects_out_of_range() {
        let mu = uniform_prob(2);
        assert!(mu.eval(0b100).is_err());
        assert!(mu.eval_atoms(&[3]).is_err());
    }

    #[test]
    fn axioms_hold_for_builders() {
        assert!(uniform_prob(3).verify_axioms().unwrap().is_ok());
        assert!(FiniteSubmeasure::capped(5, rat_int(1), rat_int(1))
            .unwrap()
            .verify_axioms()
            .unwrap()
            .is_ok());
        let w = FiniteSubmeasure::weighted(vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        assert!(w.verify_axioms().unwrap().is_ok());
    }

    #[test]
    fn axioms_catch_monotonicity_violation() {
        // mu({1}) = 2 but mu({1,2}) = 1.
        let values = vec![rat_int(0), rat_int(2), rat_int(1), rat_int(1)];
        let mu = FiniteSubmeasure::from_table(2, values).unwrap();
        match mu.verify_axioms().unwrap() {
            AxiomReport::MonotonicityViolation { subset, superset, .. } => {
                assert_eq!(subset, 0b01);
                assert_eq!(superset, 0b11);
            }
            other => panic!("expected monotonicity violation, got {other:?}"),
        }
    }

    #[test]
    fn axioms_catch_subadditivity_violation() {
        let values = vec![rat_int(0), rat_int(1), rat_int(1), rat_int(3)];
        let mu = FiniteSubmeasure::from_table(2, values).unwrap();
        match mu.verify_axioms().unwrap() {
            AxiomReport::SubadditivityViolation { union_value, sum, .. } => {
                assert_eq!(union_value, rat_int(3));
                assert_eq!(sum, rat_int(2));
            }
            other => panic!("expected subadditivity violation, got {other:?}"),
        }
    }

    #[test]
    fn sampled_axioms_agree_on_small_instances() {
        let mu = uniform_prob(4);
        assert!(mu.verify_axioms_sampled(7, 500).is_ok());
    }

    #[test]
    fn covering_uniform_singletons() {
        let mu = uniform_prob(4);
        let cover = mu.covering_number(&rat(1, 2)).unwrap();
        assert_eq!(cover.size, 4);
        assert_eq!(cover.sets.len(), 4);
    }

    #[test]
    fn covering_uniform_pairs() {
        let mu = uniform_prob(4);
        let cover = mu.covering_number(&rat(3, 5)).unwrap();
        assert_eq!(cover.size, 2);
        let union = cover.sets.iter().fold(0, |m, s| m | s);
        assert_eq!(union, mu.full_set());
    }

    #[test]
    fn covering_infeasible_when_singleton_too_big() {
        let mu = uniform_prob(2);
        match mu.covering_number(&rat(1, 4)) {
            Err(Error::Infeasible { atom, .. }) => assert_eq!(atom, 1),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn covering_whole_set_when_total_below_delta() {
        let mu = uniform_prob(4);
        let cover = mu.covering_number(&rat_int(2)).unwrap();
        assert_eq!(cover.size, 1);
        assert_eq!(cover.sets, vec![mu.full_set()]);
    }

    #[test]
    fn covering_is_antitone_in_delta() {
        let mu = FiniteSubmeasure::weighted(vec![
            rat(1, 8),
            rat(1, 8),
            rat(1, 4),
            rat(1, 4),
            rat(1, 4),
        ])
        .unwrap();
        let deltas = [rat(3, 8), rat(1, 2), rat(5, 8), rat_int(1), rat_int(2)];
        let mut last = u32::MAX;
        for d in &deltas {
            let k = mu.covering_number(d).unwrap().size;
            assert!(k <= last, "covering number must not grow with delta");
            last = k;
        }
    }

    #[test]
    fn induced_uniform_halves() {
        let mu = uniform_prob(4);
        let p = Partition::from_index_lists(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        let ind = mu.induced(&p).unwrap();
        assert_eq!(ind.atom_count(), 2);
        assert_eq!(ind.eval(0b01).unwrap(), rat(1, 2));
        assert_eq!(ind.eval(0b10).unwrap(), rat(1, 2));
        assert_eq!(ind.eval(0b11).unwrap(), rat_int(1));
        assert!(ind.verify_axioms().unwrap().is_ok());
    }

    #[test]
    fn induced_by_singletons_is_identity() {
        let mu = FiniteSubmeasure::weighted(vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap();
        let ind = mu.induced(&Partition::singletons(3)).unwrap();
        for mask in 0..8u32 {
            assert_eq!(ind.eval(mask).unwrap(), mu.eval(mask).unwrap());
        }
    }

    #[test]
    fn induced_capped_example() {
        let mu = FiniteSubmeasure::capped(4, rat_int(1), rat(1, 2)).unwrap();
        let p = Partition::from_index_lists(4, &[vec![1, 2, 3], vec![4]]).unwrap();
        let ind = mu.induced(&p).unwrap();
        assert_eq!(ind.eval(0b01).unwrap(), rat_int(1));
        assert_eq!(ind.eval(0b10).unwrap(), rat(1, 2));
        assert_eq!(ind.eval(0b11).unwrap(), rat_int(1));
    }

    #[test]
    fn induced_of_measure_is_additive_on_blocks() {
        let mu = uniform_prob(6);
        let p = Partition::from_index_lists(6, &[vec![1, 4], vec![2, 3], vec![5, 6]]).unwrap();
        let ind = mu.induced(&p).unwrap();
        for a in 0..8u32 {
            for b in 0..8u32 {
                if a & b == 0 {
                    assert_eq!(
                        ind.eval(a | b).unwrap(),
                        ind.eval(a).unwrap() + ind.eval(b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn common_refinement_crosscut() {
        let a = Partition::from_index_lists(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = Partition::from_index_lists(4, &[vec![1, 3], vec![2, 4]]).unwrap();
        let r = Partition::common_refinement(&[a, b]).unwrap();
        assert_eq!(r.block_count(), 4);
        assert_eq!(r, Partition::from_index_lists(4, &[vec![1], vec![2], vec![3], vec![4]]).unwrap());
    }

    #[test]
    fn common_refinement_single_input_is_identity() {
        let a = Partition::from_index_lists(4, &[vec![1, 2, 3], vec![4]]).unwrap();
        let r = Partition::common_refinement(std::slice::from_ref(&a)).unwrap();
        assert_eq!(r, a);
    }

    #[test]
    fn common_refinement_example() {
        let a = Partition::from_index_lists(4, &[vec![1, 2, 3], vec![4]]).unwrap();
        let b = Partition::from_index_lists(4, &[vec![1], vec![2, 3, 4]]).unwrap();
        let r = Partition::common_refinement(&[a, b]).unwrap();
        assert_eq!(
            r,
            Partition::from_index_lists(4, &[vec![1], vec![2, 3], vec![4]]).unwrap()
        );
    }

    #[test]
    fn refinement_checks() {
        let coarse = Partition::whole(4);
        let fine = Partition::from_index_lists(4, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(fine.refines(&fine));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::from_index_lists(3, &[vec![1, 2]]).is_err());
        assert!(Partition::from_index_lists(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Partition::from_index_lists(3, &[vec![1, 2], vec![], vec![3]]).is_err());
    }

    #[test]
    fn family_members_respect_resolution() {
        for family in [
            SubmeasureFamily::uniform(8).unwrap(),
            SubmeasureFamily::capped(rat_int(1), 8).unwrap(),
        ] {
            for r in [2u32, 5, 8, 16] {
                let mu = family.member(r).unwrap();
                for a in 0..mu.atom_count() {
                    assert!(mu.eval(1 << a).unwrap() <= rat(1, i64::from(r)));
                }
            }
        }
    }

    #[test]
    fn submeasure_json_round_trip() {
        let mus = vec![
            uniform_prob(4),
            FiniteSubmeasure::weighted(vec![rat(1, 2), rat(1, 3), rat(1, 6)]).unwrap(),
            FiniteSubmeasure::capped(4, rat_int(1), rat(1, 2)).unwrap(),
            FiniteSubmeasure::from_table(2, vec![rat_int(0), rat(1, 2), rat(1, 2), rat_int(1)])
                .unwrap(),
        ];
        for mu in mus {
            let text = write_submeasure_json(&mu);
            let back = read_submeasure_json(&text).unwrap();
            assert_eq!(back, mu);
        }
    }

    #[test]
    fn partition_json_round_trip() {
        let p = Partition::from_index_lists(5, &[vec![1, 3], vec![2], vec![4, 5]]).unwrap();
        let text = write_partition_json(&p);
        assert_eq!(read_partition_json(5, &text).unwrap(), p);
    }
}
