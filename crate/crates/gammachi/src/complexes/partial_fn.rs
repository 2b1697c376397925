//! Nonempty partial functions from `{1,...,n}` into residues mod p.
//!
//! These are the vertices of the order complexes built in
//! [`super::builders`]. A partial function is stored as its sorted
//! `(position, value)` entries plus the ambient domain size `n`; the
//! ambient matters because the codomain-deficit constraint
//! `n - |dom| <= l` references it.

use std::cmp::Ordering;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialFn {
    ambient: u32,
    entries: Vec<(u32, u32)>,
}

impl PartialFn {
    /// `entries` are `(position, value)` pairs, positions 1-based within
    /// `{1,...,ambient}`; they are sorted internally. The domain must be
    /// nonempty and positions distinct.
    pub fn new(ambient: u32, mut entries: Vec<(u32, u32)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDomain);
        }
        entries.sort_unstable();
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Parse(format!("duplicate position {}", w[0].0)));
            }
        }
        for &(pos, _) in &entries {
            if pos == 0 || pos > ambient {
                return Err(Error::AtomOutOfRange { index: pos, atom_count: ambient });
            }
        }
        Ok(Self { ambient, entries })
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn domain_size(&self) -> u32 {
        self.entries.len() as u32
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn value_at(&self, pos: u32) -> Option<u32> {
        self.entries
            .binary_search_by_key(&pos, |&(p, _)| p)
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn max_dom(&self) -> u32 {
        self.entries.last().expect("domain nonempty").0
    }

    /// Number of maximal constant runs of the domain-ordered value
    /// sequence, and the value taken at the last of them. The run count
    /// equals the number of maximal intervals on which the function is
    /// constant; interval boundaries at gap positions are never needed,
    /// so they are not materialized.
    pub fn component_intervals(&self) -> (u32, u32) {
        let mut count = 1u32;
        for w in self.entries.windows(2) {
            if w[0].1 != w[1].1 {
                count += 1;
            }
        }
        (count, self.entries.last().expect("domain nonempty").1)
    }

    /// Membership test for the vertex set with parameters `(n, l)`:
    /// ambient matches, the domain misses at most `l` points, and there
    /// are at most `l` component intervals.
    pub fn satisfies_constraints(&self, n: u32, l: u32) -> bool {
        self.ambient == n
            && n - self.domain_size() <= l
            && self.component_intervals().0 <= l
    }

    pub fn values_below(&self, p: u32) -> bool {
        self.entries.iter().all(|&(_, v)| v < p)
    }

    /// Adds `q` to every value mod `p`.
    pub fn shift(&self, q: u32, p: u32) -> PartialFn {
        PartialFn {
            ambient: self.ambient,
            entries: self.entries.iter().map(|&(pos, v)| (pos, (v + q) % p)).collect(),
        }
    }

    /// Whether `self` extends `other` (i.e. `other` is a restriction).
    pub fn extends(&self, other: &PartialFn) -> bool {
        self.ambient == other.ambient
            && other.entries.iter().all(|&(pos, v)| self.value_at(pos) == Some(v))
    }

    /// Same entries reinterpreted inside a larger ambient domain.
    pub fn with_ambient(&self, ambient: u32) -> Result<PartialFn> {
        if ambient < self.max_dom() {
            return Err(Error::AtomOutOfRange { index: self.max_dom(), atom_count: ambient });
        }
        Ok(PartialFn { ambient, entries: self.entries.clone() })
    }

    /// Extends the function by one point; fails on occupied positions.
    pub fn extended(&self, pos: u32, value: u32) -> Result<PartialFn> {
        if self.value_at(pos).is_some() {
            return Err(Error::Parse(format!("position {pos} already in the domain")));
        }
        let mut entries = self.entries.clone();
        entries.push((pos, value));
        PartialFn::new(self.ambient.max(pos), entries)
    }

    /// Drops one point from the domain; fails if it would become empty.
    pub fn restricted_without(&self, pos: u32) -> Result<PartialFn> {
        let entries: Vec<(u32, u32)> =
            self.entries.iter().copied().filter(|&(p, _)| p != pos).collect();
        if entries.len() == self.entries.len() {
            return Err(Error::Parse(format!("position {pos} not in the domain")));
        }
        if entries.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Ok(PartialFn { ambient: self.ambient, entries })
    }

    /// `positions:values`, e.g. `1,2:0,1`.
    pub fn canonical_string(&self) -> String {
        let dom: Vec<String> = self.entries.iter().map(|&(p, _)| p.to_string()).collect();
        let vals: Vec<String> = self.entries.iter().map(|&(_, v)| v.to_string()).collect();
        format!("{}:{}", dom.join(","), vals.join(","))
    }

    /// Parses the canonical string form; the ambient becomes the largest
    /// mentioned position unless a larger one is supplied.
    pub fn parse(s: &str, ambient: Option<u32>) -> Result<PartialFn> {
        let (dom, vals) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected positions:values, got {s:?}")))?;
        let parse_list = |t: &str| -> Result<Vec<u32>> {
            t.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad index {x:?}: {e}")))
                })
                .collect()
        };
        let dom = parse_list(dom)?;
        let vals = parse_list(vals)?;
        if dom.len() != vals.len() {
            return Err(Error::Parse(format!("{s:?} has mismatched positions and values")));
        }
        let max = dom.iter().copied().max().unwrap_or(0);
        let ambient = ambient.unwrap_or(max).max(max);
        PartialFn::new(ambient, dom.into_iter().zip(vals).collect())
    }
}

/// Canonical order: ambient, then domain size, then entries.
impl Ord for PartialFn {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient, self.entries.len(), &self.entries).cmp(&(
            other.ambient,
            other.entries.len(),
            &other.entries,
        ))
    }
}

impl PartialOrd for PartialFn {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for PartialFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical_string())
    }
}
