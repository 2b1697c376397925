//! The two complex families and the collapse map between subdivisions.
//!
//! `build_k(n, l, p)` is the order complex of the nonempty partial
//! functions from `{1,...,n}` to residues mod p that miss at most `l`
//! points and have at most `l` component intervals, ordered by inclusion.
//! `build_s(l+1, p)` is the `(l+1)`-fold join of `p` isolated points,
//! realized as singleton partial functions whose unions stay functions.
//! `map_s` sends a chain of such functions to a vertex one ambient point
//! up: the top of a nontrivial chain, or the unique element extended at
//! the new point by the value of its last component interval. Composing
//! subdivision steps with `map_s` yields an equivariant simplicial map
//! from an iterated subdivision of the join complex into a large order
//! complex; that composite is `compose_tower`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::limits::ResourceLimits;

use super::{Complex, PartialFn, Payload, SimplicialMap};

fn require_prime(p: u32) -> Result<()> {
    if !is_prime(u64::from(p)) {
        return Err(Error::NotPrime(u64::from(p)));
    }
    Ok(())
}

/// Order complex of constrained partial functions; carries the shift
/// action mod `p`.
pub fn build_k(n: u32, l: u32, p: u32, limits: &ResourceLimits) -> Result<Complex> {
    require_prime(p)?;
    if n < l {
        return Err(Error::BadComplexParams { n, l });
    }
    if n == 0 {
        return Err(Error::BadComplexParams { n, l });
    }
    let min_dom = (n.saturating_sub(l)).max(1);

    // Vertices: domains of size >= min_dom, all value assignments with at
    // most l runs.
    let mut vertices: Vec<PartialFn> = Vec::new();
    for dom_mask in 1u32..(1 << n) {
        let size = dom_mask.count_ones();
        if size < min_dom {
            continue;
        }
        let positions: Vec<u32> =
            (0..n).filter(|b| dom_mask & (1 << b) != 0).map(|b| b + 1).collect();
        let mut values = vec![0u32; positions.len()];
        loop {
            let entries: Vec<(u32, u32)> =
                positions.iter().copied().zip(values.iter().copied()).collect();
            let f = PartialFn::new(n, entries).expect("nonempty by construction");
            if f.component_intervals().0 <= l {
                vertices.push(f);
            }
            // Odometer over values base p.
            let mut i = values.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                values[i] += 1;
                if values[i] < p {
                    break;
                }
                values[i] = 0;
            }
            if values.iter().all(|&v| v == 0) {
                break;
            }
        }
        if vertices.len() as u64 > limits.max_complex_vertices {
            return Err(Error::ResourceLimit {
                what: "order complex vertices",
                value: vertices.len() as u64,
                limit: limits.max_complex_vertices,
            });
        }
    }
    if vertices.is_empty() {
        return Complex::new(vec![], vec![]);
    }

    let ids: HashMap<PartialFn, u32> =
        vertices.iter().cloned().enumerate().map(|(i, f)| (f, i as u32)).collect();

    // Facets are the maximal chains. Restriction never increases the run
    // count, so from each total function every removal order down to
    // min_dom stays inside the vertex set, and those paths are exactly
    // the maximal chains.
    let mut facets: Vec<Vec<u32>> = Vec::new();
    let tops: Vec<&PartialFn> =
        vertices.iter().filter(|f| f.domain_size() == n).collect();

    fn descend(
        current: &PartialFn,
        chain: &mut Vec<u32>,
        min_dom: u32,
        ids: &HashMap<PartialFn, u32>,
        facets: &mut Vec<Vec<u32>>,
        cap: u64,
    ) -> Result<()> {
        if current.domain_size() == min_dom {
            facets.push(chain.clone());
            if facets.len() as u64 > cap {
                return Err(Error::ResourceLimit {
                    what: "order complex facets",
                    value: facets.len() as u64,
                    limit: cap,
                });
            }
            return Ok(());
        }
        for &(pos, _) in current.entries() {
            let smaller = current.restricted_without(pos).expect("size checked");
            let id = ids[&smaller];
            chain.push(id);
            descend(&smaller, chain, min_dom, ids, facets, cap)?;
            chain.pop();
        }
        Ok(())
    }

    for top in tops {
        let mut chain = vec![ids[top]];
        descend(top, &mut chain, min_dom, &ids, &mut facets, limits.max_complex_facets)?;
    }

    let payloads: Vec<Payload> = vertices.into_iter().map(Payload::Fn).collect();
    Complex::new(payloads, facets)?.with_shift_action(p)
}

/// Join of `arity` copies of `p` isolated points: vertices are singleton
/// partial functions on `{1,...,arity}`, simplices the vertex sets whose
/// union is still a function. Carries the shift action mod `p`.
pub fn build_s(arity: u32, p: u32, limits: &ResourceLimits) -> Result<Complex> {
    require_prime(p)?;
    if arity == 0 {
        return Err(Error::BadComplexParams { n: 0, l: 0 });
    }
    let facet_count = (u64::from(p)).checked_pow(arity).unwrap_or(u64::MAX);
    if facet_count > limits.max_complex_facets {
        return Err(Error::ResourceLimit {
            what: "join complex facets",
            value: facet_count,
            limit: limits.max_complex_facets,
        });
    }
    let mut vertices: Vec<PartialFn> = Vec::new();
    for pos in 1..=arity {
        for v in 0..p {
            vertices.push(PartialFn::new(arity, vec![(pos, v)])?);
        }
    }
    let ids: HashMap<PartialFn, u32> =
        vertices.iter().cloned().enumerate().map(|(i, f)| (f, i as u32)).collect();

    // One facet per total function.
    let mut facets = Vec::with_capacity(facet_count as usize);
    let mut values = vec![0u32; arity as usize];
    loop {
        let facet: Vec<u32> = (0..arity)
            .map(|i| ids[&PartialFn::new(arity, vec![(i + 1, values[i as usize])]).unwrap()])
            .collect();
        facets.push(facet);
        let mut i = values.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            values[i] += 1;
            if values[i] < p {
                break;
            }
            values[i] = 0;
        }
        if values.iter().all(|&v| v == 0) {
            break;
        }
    }

    let payloads: Vec<Payload> = vertices.into_iter().map(Payload::Fn).collect();
    Complex::new(payloads, facets)?.with_shift_action(p)
}

/// Collapse of a chain to a single function one ambient point up.
///
/// A nontrivial chain goes to its maximal element (which misses at most
/// `l - 1` points of `{1,...,n}`, hence at most `l` of `{1,...,n+1}`);
/// a singleton chain is extended at `n + 1` by the value of its last
/// component interval, which leaves the run count unchanged.
pub fn map_s(chain: &[PartialFn], n: u32, l: u32, p: u32) -> Result<PartialFn> {
    require_prime(p)?;
    if chain.is_empty() {
        return Err(Error::NotAChain);
    }
    let mut sorted: Vec<&PartialFn> = chain.iter().collect();
    sorted.sort();
    sorted.dedup();
    for f in &sorted {
        if !f.values_below(p) || !f.satisfies_constraints(n, l) {
            return Err(Error::NotAVertex { payload: f.canonical_string() });
        }
    }
    for w in sorted.windows(2) {
        if !w[1].extends(w[0]) {
            return Err(Error::NotAChain);
        }
    }
    if sorted.len() > 1 {
        sorted.last().expect("nonempty").with_ambient(n + 1)
    } else {
        let f = sorted[0];
        let (_, last_value) = f.component_intervals();
        f.with_ambient(n + 1)?.extended(n + 1, last_value)
    }
}

/// The collapse as a full simplicial map from the subdivision of the
/// order complex with ambient `n` into the one with ambient `n + 1`.
pub fn map_s_map(n: u32, l: u32, p: u32, limits: &ResourceLimits) -> Result<SimplicialMap> {
    let k = build_k(n, l, p, limits)?;
    let sd_k = Arc::new(k.barycentric(limits)?);
    let k_next = Arc::new(build_k(n + 1, l, p, limits)?);
    let mut vertex_map = Vec::with_capacity(sd_k.vertex_count());
    for v in sd_k.vertices() {
        let chain = payload_chain(v)?;
        let image = map_s(&chain, n, l, p)?;
        let payload = Payload::Fn(image);
        let id = k_next
            .vertex_id(&payload)
            .ok_or_else(|| Error::NotAVertex { payload: payload.canonical_string() })?;
        vertex_map.push(id);
    }
    SimplicialMap::new(sd_k, k_next, vertex_map)
}

fn payload_chain(v: &Payload) -> Result<Vec<PartialFn>> {
    let Payload::Set(members) = v else {
        return Err(Error::NotAVertex { payload: v.canonical_string() });
    };
    members
        .iter()
        .map(|m| {
            m.as_partial_fn()
                .cloned()
                .ok_or_else(|| Error::NotAVertex { payload: m.canonical_string() })
        })
        .collect()
}

/// Equivariant simplicial map from the `tower`-fold subdivision of the
/// join complex with `l + 1` factors into the order complex with ambient
/// `l + 1 + tower`: the identity inclusion followed by alternating
/// subdivision and collapse steps.
pub fn compose_tower(l: u32, p: u32, tower: u32, limits: &ResourceLimits) -> Result<SimplicialMap> {
    let s = Arc::new(build_s(l + 1, p, limits)?);
    let k0 = Arc::new(build_k(l + 1, l + 1, p, limits)?);
    let mut map = SimplicialMap::identity_inclusion(s, k0)?;
    for j in 1..=tower {
        let step = map_s_map(l + j, l + 1, p, limits)?;
        map = map.subdivide(limits)?.then(&step)?;
    }
    Ok(map)
}
