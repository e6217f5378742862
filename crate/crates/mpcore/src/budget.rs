//! Resource caps for the exponential parts of the procedures.

/// Caps on enumeration sizes. Exceeding any cap yields
/// [`Error::Budget`](crate::Error::Budget), never an approximate answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Simple cycles enumerated per strongly connected component.
    pub max_cycles: usize,
    /// Memoryless counter-strategies enumerated for one explicit value set.
    pub max_p2_strategies: usize,
    /// Parts kept while distributing intersections over unions.
    pub max_parts: usize,
    /// Largest dimension handed to facet enumeration.
    pub max_facet_dim: usize,
    /// State subsets examined by the GR(1) procedures.
    pub max_subsets: usize,
    /// Nodes explored by the counter-strategy and half-space searches.
    pub max_search_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cycles: 100_000,
            max_p2_strategies: 100_000,
            max_parts: 20_000,
            max_facet_dim: 8,
            max_subsets: 1 << 16,
            max_search_nodes: 2_000_000,
        }
    }
}
