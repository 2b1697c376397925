//! Resource guards.
//!
//! Box powers, quotient powers, subdivision towers and chromatic searches
//! all grow quickly; every operation that can blow up takes its caps from
//! here and reports `Error::ResourceLimit` instead of running away.

/// Caps for size- and work-bounded operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceLimits {
    /// Largest vertex count a box or quotient graph may materialize.
    pub max_graph_vertices: u64,
    /// Node budget shared by the clique, chromatic and witness searches.
    pub max_solver_nodes: u64,
    /// Largest vertex count a constructed complex may have.
    pub max_complex_vertices: u64,
    /// Largest facet count a constructed complex may have.
    pub max_complex_facets: u64,
    /// Largest number of simplices enumerated for subdivision or homology.
    pub max_simplices: u64,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        Self {
            max_graph_vertices: 20_000,
            max_solver_nodes: 50_000_000,
            max_complex_vertices: 1_000_000,
            max_complex_facets: 2_000_000,
            max_simplices: 2_000_000,
        }
    }
}

impl ResourceLimits {
    /// Uniform override used by the CLI cap flag / environment variable.
    pub fn scaled_to(cap: u64) -> Self {
        Self {
            max_graph_vertices: cap,
            max_solver_nodes: cap.saturating_mul(2_500),
            max_complex_vertices: cap,
            max_complex_facets: cap.saturating_mul(2),
            max_simplices: cap.saturating_mul(2),
        }
    }
}
