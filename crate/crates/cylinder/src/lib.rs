//! Three-cylinder coordinates for genus-2 square-tiled surfaces, the square
//! tiling they sweep out, and the bridge between cylinder coordinates and the
//! permutation-pair model.
//!
//! A generic surface of type `(d, n)` decomposes into three horizontal
//! cylinders: `C1 = w1 × h1` and `C2 = w2 × h2` sit above the wrap cylinder
//! `C3 = (w1 + w2) × h3`.  Coordinates are the widths, the column sums
//! `s_i = h_i + h3`, three twists `t1, t2, t3`, and `h = h3`; the surface is
//! recovered by [`to_origami`] after an integral re-marking.

mod assemble;
mod bridge;
mod coords;
mod enumerate;
mod spec;

pub use assemble::{assemble, AssemblyData};
pub use bridge::{from_origami, marking_family, to_origami, transform_coords, MarkingFamily};
pub use coords::{CylCoords, CylModel, SurfPoint};
pub use enumerate::{enumerate, enumerate_with_budget, reduced_images, DEFAULT_SQUARE_BUDGET};
pub use spec::{cylinders, CylKind, CylSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CylError {
    #[error("coordinates are not admissible: {0}")]
    Inadmissible(String),
    #[error("twists must be rational")]
    NonRationalTwist,
    #[error("surface is not a generic three-cylinder form: {0}")]
    NonGeneric(String),
    #[error("square budget exceeded: need {needed}, cap {cap}")]
    BudgetExceeded { needed: u64, cap: u64 },
}
