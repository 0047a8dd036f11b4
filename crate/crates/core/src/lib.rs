//! Node reliability polynomials of small graphs, in exact arithmetic.
//!
//! The node reliability `nRel(G; p)` is the probability that the vertices
//! surviving independently with probability `p` form a nonempty connected
//! induced subgraph. This crate counts connected sets, builds the
//! polynomial, isolates the roots of its derivatives and of `f(p) - p` on
//! `(0, 1)`, and aggregates shape statistics over all small graphs.

pub mod canon;
pub mod census;
pub mod connsets;
pub mod error;
pub mod family;
pub mod format;
pub mod graph;
pub mod graph6;
pub mod montecarlo;
pub mod parallel;
pub mod polynomial;
pub mod reliability;
pub mod roots;
pub mod serde_util;
pub mod shape;
pub mod verify;

pub use canon::{are_isomorphic, canonical_form, canonical_key, CanonicalKey};
pub use census::{
    census_of_order, generate_connected, run_census, run_census_stream, stream_graph6,
    CensusSummary,
};
pub use connsets::{count_connected_sets, profile_closed_form, ConnSetProfile};
pub use error::{Error, Result};
pub use family::{make_family, FamilySpec};
pub use graph::{parse_edge_list, to_edge_list, Graph, StructuralStats};
pub use graph6::{parse_graph6, to_graph6};
pub use montecarlo::{monte_carlo_estimate, Estimate};
pub use parallel::Execution;
pub use polynomial::Poly;
pub use reliability::{d_coefficients, DCoeffs, ReliabilityPoly};
pub use roots::{isolate_roots, RootRecord};
pub use shape::{analyze, analyze_graph, ShapeClass, ShapeReport};
