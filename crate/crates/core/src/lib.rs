//! Exact Newton–Okounkov polygons of big divisors on surfaces.
//!
//! A surface is modeled by its intersection lattice together with a list of
//! declared irreducible curves (see [`model`]). On top of that the crate
//! computes Zariski decompositions ([`zariski`]), traces the path `D - tC`
//! through Zariski chambers to assemble the polygon for a flag
//! ([`okounkov`]), evaluates the vertex-count invariants ([`invariants`]) and
//! builds blowups and nodal towers ([`birational`]). Everything is exact:
//! rationals, plus one quadratic surd for the right endpoint of the polygon.

pub mod birational;
pub mod error;
pub mod exactnum;
pub mod invariants;
pub mod model;
pub mod okounkov;
pub mod suite;
pub mod zariski;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    struct Introduction;
    #[doc = include_str!("../../../book/src/models.md")]
    struct Models;
    #[doc = include_str!("../../../book/src/zariski.md")]
    struct Zariski;
    #[doc = include_str!("../../../book/src/polygons.md")]
    struct Polygons;
    #[doc = include_str!("../../../book/src/invariants.md")]
    struct Invariants;
    #[doc = include_str!("../../../book/src/towers.md")]
    struct Towers;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
