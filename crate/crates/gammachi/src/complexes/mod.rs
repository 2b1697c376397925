//! Finite abstract simplicial complexes with value-shift group actions.
//!
//! A complex stores its vertices (payload-labelled, canonically sorted)
//! and its maximal simplices; faces are regenerated on demand, which
//! keeps iterated subdivisions tractable. The optional action is the
//! shift of residues mod p applied structurally to payloads, which is
//! exactly how the cyclic action moves through builders, joins and
//! subdivisions.

mod builders;
mod partial_fn;

pub use builders::{build_k, build_s, compose_tower, map_s, map_s_map};
pub use partial_fn::PartialFn;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::limits::ResourceLimits;

/// Vertex label: a partial function, a set of payloads (one subdivision
/// deep per nesting level), or a tagged payload used to force disjoint
/// vertex sets before a join.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Fn(PartialFn),
    Set(Vec<Payload>),
    Tagged(u32, Box<Payload>),
}

impl Payload {
    /// Applies the residue shift structurally.
    pub fn shift(&self, q: u32, p: u32) -> Payload {
        match self {
            Payload::Fn(f) => Payload::Fn(f.shift(q, p)),
            Payload::Set(members) => {
                let mut shifted: Vec<Payload> =
                    members.iter().map(|m| m.shift(q, p)).collect();
                shifted.sort();
                Payload::Set(shifted)
            }
            Payload::Tagged(tag, inner) => Payload::Tagged(*tag, Box::new(inner.shift(q, p))),
        }
    }

    pub fn as_partial_fn(&self) -> Option<&PartialFn> {
        match self {
            Payload::Fn(f) => Some(f),
            _ => None,
        }
    }

    pub fn canonical_string(&self) -> String {
        match self {
            Payload::Fn(f) => f.canonical_string(),
            Payload::Set(members) => {
                format!("{{{}}}", members.iter().map(|m| m.canonical_string()).join("|"))
            }
            Payload::Tagged(tag, inner) => format!("#{tag}({})", inner.canonical_string()),
        }
    }

    /// Parses the canonical string form back into a payload.
    pub fn parse(s: &str) -> Result<Payload> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('#') {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::Parse(format!("bad tagged payload {s:?}")))?;
            let tag: u32 = rest[..open]
                .parse()
                .map_err(|e| Error::Parse(format!("bad tag in {s:?}: {e}")))?;
            let inner = rest[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unclosed tag in {s:?}")))?;
            return Ok(Payload::Tagged(tag, Box::new(Payload::parse(inner)?)));
        }
        if let Some(body) = s.strip_prefix('{') {
            let body = body
                .strip_suffix('}')
                .ok_or_else(|| Error::Parse(format!("unclosed set payload {s:?}")))?;
            let mut members = Vec::new();
            let mut depth = 0usize;
            let mut start = 0usize;
            for (i, c) in body.char_indices() {
                match c {
                    '{' => depth += 1,
                    '}' => depth -= 1,
                    '|' if depth == 0 => {
                        members.push(Payload::parse(&body[start..i])?);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            members.push(Payload::parse(&body[start..])?);
            members.sort();
            return Ok(Payload::Set(members));
        }
        Ok(Payload::Fn(PartialFn::parse(s, None)?))
    }
}

/// Residue-shift action: `perms[q]` sends vertex `v` to `q + v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    p: u32,
    perms: Vec<Vec<u32>>,
}

impl Action {
    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn apply(&self, q: u32, v: u32) -> u32 {
        self.perms[(q % self.p) as usize][v as usize]
    }
}

/// A finite abstract simplicial complex stored by its facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    vertices: Vec<Payload>,
    facets: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
    action: Option<Action>,
}

impl Complex {
    /// Canonicalizes and validates: vertices are sorted (duplicates are
    /// an error), facets are remapped, deduplicated and pruned to the
    /// maximal ones, and every vertex must lie in some facet. The empty
    /// complex (vertex-free, whose only simplex is the empty set) is
    /// `Complex::new(vec![], vec![])`.
    pub fn new(vertices: Vec<Payload>, facets: Vec<Vec<u32>>) -> Result<Complex> {
        let n = vertices.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&a, &b| vertices[a as usize].cmp(&vertices[b as usize]));
        for w in order.windows(2) {
            if vertices[w[0] as usize] == vertices[w[1] as usize] {
                return Err(Error::VertexCollision);
            }
        }
        let mut rank = vec![0u32; n];
        for (new_id, &old_id) in order.iter().enumerate() {
            rank[old_id as usize] = new_id as u32;
        }
        let mut sorted_vertices: Vec<Payload> = Vec::with_capacity(n);
        for &old_id in &order {
            sorted_vertices.push(vertices[old_id as usize].clone());
        }

        let mut remapped: Vec<Vec<u32>> = Vec::with_capacity(facets.len());
        for f in facets {
            let mut g: Vec<u32> = Vec::with_capacity(f.len());
            for id in f {
                if id as usize >= n {
                    return Err(Error::Parse(format!("facet mentions unknown vertex id {id}")));
                }
                g.push(rank[id as usize]);
            }
            g.sort_unstable();
            g.dedup();
            if !g.is_empty() {
                remapped.push(g);
            }
        }
        remapped.sort();
        remapped.dedup();
        let facets = prune_non_maximal(remapped);

        let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (fi, f) in facets.iter().enumerate() {
            for &v in f {
                incidence[v as usize].push(fi as u32);
            }
        }
        if let Some(orphan) = incidence.iter().position(|inc| inc.is_empty()) {
            return Err(Error::Parse(format!(
                "vertex {} lies in no facet; pass isolated vertices as singleton facets",
                sorted_vertices[orphan].canonical_string()
            )));
        }

        Ok(Complex { vertices: sorted_vertices, facets, incidence, action: None })
    }

    /// Attaches the residue-shift action mod `p`, verifying that shifting
    /// payloads permutes the vertex set and maps facets to facets.
    pub fn with_shift_action(mut self, p: u32) -> Result<Complex> {
        let mut perms = Vec::with_capacity(p as usize);
        let facet_set: HashSet<&[u32]> = self.facets.iter().map(|f| f.as_slice()).collect();
        for q in 0..p {
            let mut perm = Vec::with_capacity(self.vertices.len());
            for v in &self.vertices {
                let image = v.shift(q, p);
                let id = self
                    .vertex_id(&image)
                    .ok_or_else(|| Error::NotAVertex { payload: image.canonical_string() })?;
                perm.push(id);
            }
            let mut seen = vec![false; perm.len()];
            for &t in &perm {
                if std::mem::replace(&mut seen[t as usize], true) {
                    return Err(Error::MissingAction);
                }
            }
            for f in &self.facets {
                let mut image: Vec<u32> = f.iter().map(|&v| perm[v as usize]).collect();
                image.sort_unstable();
                if !facet_set.contains(image.as_slice()) {
                    return Err(Error::NotSimplicial { facet: self.facet_string(f) });
                }
            }
            perms.push(perm);
        }
        self.action = Some(Action { p, perms });
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Payload] {
        &self.vertices
    }

    pub fn payload(&self, v: u32) -> &Payload {
        &self.vertices[v as usize]
    }

    pub fn vertex_id(&self, payload: &Payload) -> Option<u32> {
        self.vertices.binary_search(payload).ok().map(|i| i as u32)
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn action(&self) -> Option<&Action> {
        self.action.as_ref()
    }

    /// Dimension of the complex, `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    fn facet_string(&self, f: &[u32]) -> String {
        f.iter().map(|&v| self.payload(v).canonical_string()).join(" ")
    }

    /// Every nonempty simplex, canonically ordered. Guarded: iterated
    /// subdivision towers explode, so callers pass an explicit cap.
    pub fn simplices(&self, cap: u64) -> Result<Vec<Vec<u32>>> {
        let mut set: BTreeSet<Vec<u32>> = BTreeSet::new();
        for f in &self.facets {
            let k = f.len();
            if k > 25 {
                return Err(Error::ResourceLimit {
                    what: "facet size for subset enumeration",
                    value: k as u64,
                    limit: 25,
                });
            }
            for mask in 1u32..(1 << k) {
                let sub: Vec<u32> =
                    (0..k).filter(|i| mask & (1 << i) != 0).map(|i| f[i]).collect();
                set.insert(sub);
                if set.len() as u64 > cap {
                    return Err(Error::ResourceLimit {
                        what: "simplex enumeration",
                        value: set.len() as u64,
                        limit: cap,
                    });
                }
            }
        }
        Ok(set.into_iter().collect())
    }

    /// Simplex counts per dimension (index = dimension).
    pub fn simplex_counts(&self, cap: u64) -> Result<Vec<u64>> {
        let mut counts: Vec<u64> = Vec::new();
        for s in self.simplices(cap)? {
            let d = s.len() - 1;
            if counts.len() <= d {
                counts.resize(d + 1, 0);
            }
            counts[d] += 1;
        }
        Ok(counts)
    }

    /// Reduced Euler characteristic (the empty simplex contributes -1).
    pub fn euler_reduced(&self, cap: u64) -> Result<i64> {
        let mut chi: i64 = -1;
        for (d, c) in self.simplex_counts(cap)?.iter().enumerate() {
            let signed = *c as i64;
            chi += if d % 2 == 0 { signed } else { -signed };
        }
        Ok(chi)
    }

    /// Membership test via the facet incidence of the least-incident
    /// vertex of the candidate.
    pub fn contains_simplex(&self, simplex: &[u32]) -> bool {
        if simplex.is_empty() {
            return true;
        }
        let mut ids: Vec<u32> = simplex.to_vec();
        ids.sort_unstable();
        ids.dedup();
        if ids.iter().any(|&v| v as usize >= self.vertices.len()) {
            return false;
        }
        let pivot = *ids
            .iter()
            .min_by_key(|&&v| self.incidence[v as usize].len())
            .expect("nonempty");
        self.incidence[pivot as usize]
            .iter()
            .any(|&f| is_subset(&ids, &self.facets[f as usize]))
    }

    /// Join `{F u G : F in self, G in other}`. Vertex payloads must be
    /// disjoint (tag first if they are not); joining with the empty
    /// complex returns the other side unchanged. When both sides carry
    /// actions of the same order, the product action rides along.
    pub fn join(&self, other: &Complex, limits: &ResourceLimits) -> Result<Complex> {
        if self.vertices.is_empty() {
            return Ok(other.clone());
        }
        if other.vertices.is_empty() {
            return Ok(self.clone());
        }
        let pairs = self.facets.len() as u64 * other.facets.len() as u64;
        if pairs > limits.max_complex_facets {
            return Err(Error::ResourceLimit {
                what: "join facet pairs",
                value: pairs,
                limit: limits.max_complex_facets,
            });
        }
        // Both vertex lists are sorted; a merge detects collisions.
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.vertices.len() && j < other.vertices.len() {
            match self.vertices[i].cmp(&other.vertices[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return Err(Error::VertexCollision),
            }
        }
        let offset = self.vertices.len() as u32;
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().cloned());
        let mut facets = Vec::with_capacity(pairs as usize);
        for f in &self.facets {
            for g in &other.facets {
                let mut h = f.clone();
                h.extend(g.iter().map(|&v| v + offset));
                facets.push(h);
            }
        }
        let joined = Complex::new(vertices, facets)?;
        match (&self.action, &other.action) {
            (Some(a), Some(b)) if a.p == b.p => joined.with_shift_action(a.p),
            _ => Ok(joined),
        }
    }

    /// Wraps every payload in a tag, making vertex sets disjoint across
    /// differently-tagged complexes.
    pub fn tagged(&self, tag: u32) -> Result<Complex> {
        let vertices: Vec<Payload> = self
            .vertices
            .iter()
            .map(|v| Payload::Tagged(tag, Box::new(v.clone())))
            .collect();
        let relabeled = Complex::new(vertices, self.facets.clone())?;
        match &self.action {
            Some(a) => relabeled.with_shift_action(a.p),
            None => Ok(relabeled),
        }
    }

    /// Barycentric subdivision: vertices are the nonempty simplices,
    /// simplices the chains among them; the action is transported.
    pub fn barycentric(&self, limits: &ResourceLimits) -> Result<Complex> {
        let simplices = self.simplices(limits.max_simplices)?;
        if simplices.len() as u64 > limits.max_complex_vertices {
            return Err(Error::ResourceLimit {
                what: "subdivision vertices",
                value: simplices.len() as u64,
                limit: limits.max_complex_vertices,
            });
        }
        let index: HashMap<&[u32], u32> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i as u32))
            .collect();
        let payloads: Vec<Payload> = simplices
            .iter()
            .map(|s| {
                // Vertex ids ascend with payload order, so this member
                // list is already sorted.
                Payload::Set(s.iter().map(|&v| self.vertices[v as usize].clone()).collect())
            })
            .collect();

        let mut flag_count: u64 = 0;
        for f in &self.facets {
            let mut perms = 1u64;
            for i in 1..=f.len() as u64 {
                perms = perms.saturating_mul(i);
            }
            flag_count = flag_count.saturating_add(perms);
        }
        if flag_count > limits.max_complex_facets {
            return Err(Error::ResourceLimit {
                what: "subdivision facets",
                value: flag_count,
                limit: limits.max_complex_facets,
            });
        }

        let mut facets: Vec<Vec<u32>> = Vec::with_capacity(flag_count as usize);
        for f in &self.facets {
            for perm in f.iter().permutations(f.len()) {
                let mut prefix: Vec<u32> = Vec::with_capacity(f.len());
                let mut chain: Vec<u32> = Vec::with_capacity(f.len());
                for &&v in &perm {
                    let pos = prefix.binary_search(&v).unwrap_err();
                    prefix.insert(pos, v);
                    chain.push(index[prefix.as_slice()]);
                }
                facets.push(chain);
            }
        }
        let sd = Complex::new(payloads, facets)?;
        match &self.action {
            Some(a) => sd.with_shift_action(a.p),
            None => Ok(sd),
        }
    }

    /// One facet per line, vertices as canonical payload strings.
    pub fn to_facet_text(&self) -> String {
        let mut out = String::new();
        for f in &self.facets {
            out.push_str(&self.facet_string(f));
            out.push('\n');
        }
        out
    }

    /// Parses the facet-list format written by [`Complex::to_facet_text`].
    pub fn from_facet_text(text: &str) -> Result<Complex> {
        let mut vertices: Vec<Payload> = Vec::new();
        let mut ids: HashMap<Payload, u32> = HashMap::new();
        let mut facets: Vec<Vec<u32>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut facet = Vec::new();
            for token in line.split_whitespace() {
                let payload = Payload::parse(token)?;
                let id = *ids.entry(payload.clone()).or_insert_with(|| {
                    vertices.push(payload);
                    (vertices.len() - 1) as u32
                });
                facet.push(id);
            }
            facets.push(facet);
        }
        Complex::new(vertices, facets)
    }
}

fn is_subset(needle: &[u32], haystack: &[u32]) -> bool {
    let mut i = 0;
    for &x in needle {
        while i < haystack.len() && haystack[i] < x {
            i += 1;
        }
        if i == haystack.len() || haystack[i] != x {
            return false;
        }
        i += 1;
    }
    true
}

/// Drops faces contained in strictly larger facets. Facets of equal size
/// never contain each other, so only larger ones are consulted.
fn prune_non_maximal(mut facets: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    facets.sort_by_key(|f| std::cmp::Reverse(f.len()));
    let mut kept: Vec<Vec<u32>> = Vec::with_capacity(facets.len());
    let mut incidence: HashMap<u32, Vec<u32>> = HashMap::new();
    for f in facets {
        let dominated = f
            .iter()
            .filter_map(|v| incidence.get(v))
            .min_by_key(|inc| inc.len())
            .map(|inc| inc.iter().any(|&ki| is_subset(&f, &kept[ki as usize])))
            .unwrap_or(false);
        if dominated {
            continue;
        }
        let id = kept.len() as u32;
        for &v in &f {
            incidence.entry(v).or_default().push(id);
        }
        kept.push(f);
    }
    kept.sort();
    kept
}

/// A simplicial map: a vertex assignment under which every source
/// simplex lands on a target simplex.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: Arc<Complex>,
    target: Arc<Complex>,
    vertex_map: Vec<u32>,
}

/// Verdict of [`SimplicialMap::verify_simplicial`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplicialCheck {
    Ok { facets_checked: u64 },
    Counterexample { facet: Vec<u32> },
}

impl SimplicialCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, SimplicialCheck::Ok { .. })
    }
}

/// Verdict of [`SimplicialMap::verify_equivariant`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivariantCheck {
    Ok { pairs_checked: u64 },
    Counterexample { vertex: u32, shift: u32 },
}

impl EquivariantCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, EquivariantCheck::Ok { .. })
    }
}

impl SimplicialMap {
    pub fn new(source: Arc<Complex>, target: Arc<Complex>, vertex_map: Vec<u32>) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: source.vertex_count(),
                got: vertex_map.len(),
            });
        }
        if vertex_map.iter().any(|&t| t as usize >= target.vertex_count()) {
            return Err(Error::Parse("vertex map hits ids outside the target".into()));
        }
        Ok(Self { source, target, vertex_map })
    }

    /// The map sending each source vertex to the target vertex with the
    /// identical payload; fails if some payload is missing.
    pub fn identity_inclusion(source: Arc<Complex>, target: Arc<Complex>) -> Result<Self> {
        let mut vertex_map = Vec::with_capacity(source.vertex_count());
        for v in source.vertices() {
            let id = target
                .vertex_id(v)
                .ok_or_else(|| Error::NotAVertex { payload: v.canonical_string() })?;
            vertex_map.push(id);
        }
        Ok(Self { source, target, vertex_map })
    }

    pub fn source(&self) -> &Arc<Complex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex> {
        &self.target
    }

    pub fn vertex_map(&self) -> &[u32] {
        &self.vertex_map
    }

    pub fn apply(&self, v: u32) -> u32 {
        self.vertex_map[v as usize]
    }

    /// Image of a simplex: vertexwise image, deduplicated.
    pub fn apply_simplex(&self, simplex: &[u32]) -> Vec<u32> {
        let mut image: Vec<u32> = simplex.iter().map(|&v| self.apply(v)).collect();
        image.sort_unstable();
        image.dedup();
        image
    }

    /// Checks facet by facet that images are target simplices; checking
    /// facets suffices because faces of simplices are simplices.
    pub fn verify_simplicial(&self) -> SimplicialCheck {
        for f in self.source.facets() {
            let image = self.apply_simplex(f);
            if !self.target.contains_simplex(&image) {
                return SimplicialCheck::Counterexample { facet: f.clone() };
            }
        }
        SimplicialCheck::Ok { facets_checked: self.source.facet_count() as u64 }
    }

    /// Checks `f(q + v) = q + f(v)` for every vertex and residue.
    pub fn verify_equivariant(&self) -> Result<EquivariantCheck> {
        let (Some(sa), Some(ta)) = (self.source.action(), self.target.action()) else {
            return Err(Error::MissingAction);
        };
        if sa.order() != ta.order() {
            return Err(Error::MissingAction);
        }
        let p = sa.order();
        let mut pairs = 0u64;
        for v in 0..self.source.vertex_count() as u32 {
            for q in 0..p {
                pairs += 1;
                if self.apply(sa.apply(q, v)) != ta.apply(q, self.apply(v)) {
                    return Ok(EquivariantCheck::Counterexample { vertex: v, shift: q });
                }
            }
        }
        Ok(EquivariantCheck::Ok { pairs_checked: pairs })
    }

    /// The induced map between barycentric subdivisions: the vertex for a
    /// source simplex goes to the vertex for its image simplex.
    pub fn subdivide(&self, limits: &ResourceLimits) -> Result<SimplicialMap> {
        let sd_source = Arc::new(self.source.barycentric(limits)?);
        let sd_target = Arc::new(self.target.barycentric(limits)?);
        let mut vertex_map = Vec::with_capacity(sd_source.vertex_count());
        for v in sd_source.vertices() {
            let Payload::Set(members) = v else {
                return Err(Error::NotAVertex { payload: v.canonical_string() });
            };
            let ids: Vec<u32> = members
                .iter()
                .map(|m| {
                    self.source
                        .vertex_id(m)
                        .ok_or_else(|| Error::NotAVertex { payload: m.canonical_string() })
                })
                .collect::<Result<_>>()?;
            let image = self.apply_simplex(&ids);
            let mut image_members: Vec<Payload> = image
                .iter()
                .map(|&t| self.target.payload(t).clone())
                .collect();
            image_members.sort();
            let image_payload = Payload::Set(image_members);
            let id = sd_target
                .vertex_id(&image_payload)
                .ok_or_else(|| Error::NotAVertex { payload: image_payload.canonical_string() })?;
            vertex_map.push(id);
        }
        SimplicialMap::new(sd_source, sd_target, vertex_map)
    }

    /// Composition `outer(self(v))`; the target of `self` must be the
    /// source of `outer`, compared structurally.
    pub fn then(&self, outer: &SimplicialMap) -> Result<SimplicialMap> {
        if self.target.vertices() != outer.source.vertices()
            || self.target.facets() != outer.source.facets()
        {
            return Err(Error::CompositionMismatch);
        }
        let vertex_map = self.vertex_map.iter().map(|&v| outer.apply(v)).collect();
        SimplicialMap::new(self.source.clone(), outer.target.clone(), vertex_map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(label: u32) -> Complex {
        let f = PartialFn::new(label, vec![(label, 0)]).unwrap();
        Complex::new(vec![Payload::Fn(f)], vec![vec![0]]).unwrap()
    }

    fn default_limits() -> ResourceLimits {
        ResourceLimits::default()
    }

    #[test]
    fn join_of_points_is_edge() {
        let j = point(1).join(&point(2), &default_limits()).unwrap();
        assert_eq!(j.vertex_count(), 2);
        assert_eq!(j.facets(), &[vec![0, 1]]);
    }

    #[test]
    fn join_with_empty_is_identity() {
        let empty = Complex::new(vec![], vec![]).unwrap();
        let p = point(3);
        assert_eq!(p.join(&empty, &default_limits()).unwrap(), p);
        assert_eq!(empty.join(&p, &default_limits()).unwrap(), p);
    }

    #[test]
    fn join_detects_collisions_and_tagging_fixes_them() {
        let p = point(1);
        assert!(matches!(p.join(&p, &default_limits()), Err(Error::VertexCollision)));
        let left = p.tagged(0).unwrap();
        let right = p.tagged(1).unwrap();
        let j = left.join(&right, &default_limits()).unwrap();
        assert_eq!(j.vertex_count(), 2);
    }

    #[test]
    fn barycentric_of_edge_is_path() {
        let edge = point(1).join(&point(2), &default_limits()).unwrap();
        let sd = edge.barycentric(&default_limits()).unwrap();
        assert_eq!(sd.vertex_count(), 3);
        assert_eq!(sd.facet_count(), 2);
        assert_eq!(sd.dimension(), Some(1));
    }

    #[test]
    fn barycentric_of_triangle_boundary_is_hexagon() {
        // Boundary of a triangle: three edges on three vertices.
        let vs: Vec<Payload> = (1..=3)
            .map(|i| Payload::Fn(PartialFn::new(3, vec![(i, 0)]).unwrap()))
            .collect();
        let tri = Complex::new(vs, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let sd = tri.barycentric(&default_limits()).unwrap();
        assert_eq!(sd.vertex_count(), 6);
        assert_eq!(sd.facet_count(), 6);
        assert!(sd.facets().iter().all(|f| f.len() == 2));
    }

    #[test]
    fn subdivision_vertex_count_is_simplex_count() {
        let edge = point(1).join(&point(2), &default_limits()).unwrap();
        let simplices = edge.simplices(1000).unwrap();
        let sd = edge.barycentric(&default_limits()).unwrap();
        assert_eq!(sd.vertex_count(), simplices.len());
    }

    #[test]
    fn contains_simplex_faces_only() {
        let edge = point(1).join(&point(2), &default_limits()).unwrap();
        assert!(edge.contains_simplex(&[0, 1]));
        assert!(edge.contains_simplex(&[1]));
        assert!(edge.contains_simplex(&[]));
        let two_points = {
            let vs: Vec<Payload> = (1..=2)
                .map(|i| Payload::Fn(PartialFn::new(2, vec![(i, 0)]).unwrap()))
                .collect();
            Complex::new(vs, vec![vec![0], vec![1]]).unwrap()
        };
        assert!(!two_points.contains_simplex(&[0, 1]));
    }

    #[test]
    fn euler_characteristic_of_join_multiplies() {
        // Two 2-point complexes: reduced Euler characteristic 1 each;
        // their join is a 4-cycle with reduced Euler characteristic -1.
        let two = |base: u32| {
            let vs: Vec<Payload> = (0..2)
                .map(|v| Payload::Fn(PartialFn::new(base, vec![(base, v)]).unwrap()))
                .collect();
            Complex::new(vs, vec![vec![0], vec![1]]).unwrap()
        };
        let a = two(1);
        let b = two(2);
        let j = a.join(&b, &default_limits()).unwrap();
        let cap = 10_000;
        assert_eq!(
            j.euler_reduced(cap).unwrap(),
            -a.euler_reduced(cap).unwrap() * b.euler_reduced(cap).unwrap()
        );
    }

    #[test]
    fn facet_text_round_trip() {
        let edge = point(1).join(&point(2), &default_limits()).unwrap();
        let sd = edge.barycentric(&default_limits()).unwrap();
        let text = sd.to_facet_text();
        let back = Complex::from_facet_text(&text).unwrap();
        assert_eq!(back.facet_count(), sd.facet_count());
        assert_eq!(back.vertex_count(), sd.vertex_count());
    }

    #[test]
    fn payload_parsing_round_trip() {
        let f = Payload::Fn(PartialFn::new(3, vec![(1, 0), (3, 2)]).unwrap());
        let set = Payload::Set(vec![f.clone(), Payload::Fn(PartialFn::new(3, vec![(2, 1)]).unwrap())]);
        let tagged = Payload::Tagged(4, Box::new(set.clone()));
        for payload in [f, set, tagged] {
            let s = payload.canonical_string();
            let back = Payload::parse(&s).unwrap();
            assert_eq!(back.canonical_string(), s);
        }
    }

    #[test]
    fn non_maximal_facets_are_pruned() {
        let vs: Vec<Payload> = (1..=3)
            .map(|i| Payload::Fn(PartialFn::new(3, vec![(i, 0)]).unwrap()))
            .collect();
        let c = Complex::new(vs, vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![1, 2]]).unwrap();
        assert_eq!(c.facets(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn duplicate_payloads_rejected() {
        let f = Payload::Fn(PartialFn::new(1, vec![(1, 0)]).unwrap());
        assert!(matches!(
            Complex::new(vec![f.clone(), f], vec![vec![0, 1]]),
            Err(Error::VertexCollision)
        ));
    }
}
