//! The square-tiling of the modular curve X(d).
//!
//! For d = 2 or d an odd prime, the modular curve X(d) carries a canonical
//! tiling by unit squares.  The surface is swept out by horizontal cylinders,
//! one for each unordered pair of horizontal components (w1, s1), (w2, s2)
//! with w1·s1 + w2·s2 = d; each cylinder is a grid of unit squares of width
//! lcm(w1, w2, w1 + w2) and height min(s1, s2), and the grids are glued along
//! their boundaries by translations and rotations by π.
//!
//! This crate constructs that tiling exactly and exposes:
//!
//! * the squares, the edge gluing, and the vertex classes (simple zeroes,
//!   cusp and non-cusp simple poles, regular points) with their censuses;
//! * the pagoda decomposition into stories (vertical stacks of cylinders,
//!   eave at the bottom, lighthouse on top) and the trivalent graph spanned
//!   by the zeroes sitting on the eave bottoms;
//! * the vertical degenerations of a one-cylinder surface to two-cylinder
//!   coordinates (zipping the boundary of a cylinder up or down);
//! * the rational points of bounded denominator and their images on the
//!   pillowcase, including the spin value for odd denominators;
//! * deterministic SVG and JSON emission, with a JSON round-trip loader.

mod build;
mod emit;
mod points;
mod stories;
mod zip;

pub use build::{
    build, tiling_from_json_str, Parity, Side, Square, Tiling, VertexCensus, VertexClass,
    VertexRecord,
};
pub use emit::EmitFormat;
pub use points::PillowPoint;
pub use stories::{Story, TrivalentGraph};
pub use zip::{zip, TwoCylCoords, TwoCylKind, ZipDirection};

use thiserror::Error;

/// Errors raised while constructing or querying the tiling.
#[derive(Debug, Error)]
pub enum TilingError {
    /// The tiling is only constructed for d = 2 and d prime, and the pagoda
    /// decomposition additionally requires d odd.
    #[error("unsupported degree {0}")]
    UnsupportedDegree(u64),
    /// A vertical degeneration was requested at a point with an integral
    /// twist coordinate; the degeneration is defined only off that locus.
    #[error("integral twist: vertical degeneration undefined")]
    IntegralTwist,
    /// Zipping down a cylinder with s1 = s2 collapses the surface entirely.
    #[error("cannot zip down an eave cylinder (s1 = s2)")]
    EaveBottom,
    /// One of the eight structural properties of the pagoda decomposition
    /// failed; this indicates an inconsistent gluing and never occurs for
    /// tilings produced by [`build`].
    #[error("pagoda property {property} violated")]
    PagodaViolation {
        /// Index of the violated property, 1 through 8.
        property: u8,
    },
    /// The mod-2 development of the squares onto the pillowcase is
    /// inconsistent; never occurs for tilings produced by [`build`].
    #[error("parity conflict in the mod-2 development")]
    ParityConflict,
    /// An emission target could not be written or read.
    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
    /// A JSON document did not describe a consistent tiling.
    #[error("malformed tiling document: {0}")]
    Format(String),
}
