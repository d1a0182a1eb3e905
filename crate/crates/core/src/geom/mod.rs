//! Exact polytope geometry: hulls, LP digraphs, sensitive orientations,
//! truncations and pyramids, and the line-shelling factory that turns a
//! sensitive LP digraph into a non-HK* oriented matroid.

pub mod catalog;
pub mod construct;
pub mod lp;
pub mod polytope;

pub use catalog::{five_vertex_polytopes, six_vertex_catalog, simplex_3, CatalogPolytope};
pub use construct::{build_non_hkstar, line_shelling, simplex_hyperplanes, LineShelling, NonHkStarCertificate};
pub use lp::{
    find_sensitive_objective, is_sensitive, lp_digraph, pyramid, sensitive_after_truncation, truncate,
    MarkedLPDigraph,
};
pub use polytope::{hull_facets, polar_dual, Facet, Polytope};
