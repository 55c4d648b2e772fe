//! Simplicial machinery for graph-coloring bounds.
//!
//! From a finite connected graph this crate builds the neighborhood complex,
//! the Lovász complex of closed common-neighborhood sets, the box complex
//! with its shore-swapping involution, the shore subdivision, the doubled
//! Lovász complex and its halved quotient-by-section, and the simplicial
//! maps connecting them. Every structural claim about those objects is
//! re-checked at construction time and surfaces as a typed error when it
//! fails, so a successfully built object doubles as a certificate. On top
//! sit GF(2) homology, complete-bipartite subgraph obstructions, and
//! certified lower bounds for the chromatic number.

pub mod bounds;
pub mod complexes;
pub mod graph;
pub mod homology;
pub mod simplicial;

pub use complexes::{
    box_complex, collapse_sequence, doubled_lovasz, halved_doubled_lovasz, jump_map,
    jump_partition, lovasz_complex, lovasz_to_hdl_iso, neighborhood_complex, phi_map, precedes,
    scn2_map, ssd_box, ClosedSetPoset, CollapseSequence, CollapseStep, ComplexError,
    GraphComplexes, JumpPartition,
};
pub use graph::{connected_graphs_up_to_iso, parse_family, Graph, GraphError, NodeSet};
pub use homology::{betti_gf2, homological_connectivity, BettiProfile};
pub use simplicial::{Chain, Complex, Label, Shore, SimplicialError, VertexMap, Z2Complex};
