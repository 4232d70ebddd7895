//! Newton–Okounkov polygons of big classes for flags `S > C > {p}`.
//!
//! Along `D_t = D - tC` the Zariski decomposition `D_t = P_t + N_t` is
//! piecewise affine in `t`. The polygon is the region
//! `nu <= t <= mu, alpha(t) <= y <= beta(t)` with `alpha(t) = ord_p(N_t|C)`
//! and `beta(t) = alpha(t) + C.P_t`, where `nu` is the coefficient of `C` in
//! `N_0` and `mu` the end of the big range.

mod polygon;
pub mod render;
mod trace;

pub use polygon::{
    boundary_functions, polygon, vertex_census, BoundaryFunctions, Census, KinkCause,
    OkounkovPolygon, Piece, Side, Vertex, VertexClass,
};
pub use trace::{trace_path, trace_path_idx, AffineCoeff, ChamberSegment, PathTrace};
