//! Exact straight-line tracing on the square-tiling in the flat metric and
//! bounded illumination-witness search from the cusp poles.
//!
//! A ray is launched from a surface point in a primitive integer direction
//! `(p, q)`, read in the chart of the point's cylinder with the x axis
//! pointing right and the y axis pointing down (row 0 of a cylinder is its
//! top row).  The ray is advanced with exact rational arithmetic; crossing a
//! gluing of rotation-by-π parity negates the direction vector.  Length is
//! measured by the parameter of the motion `(x, y) ↦ (x + t·p, y + t·q)`,
//! so for axis directions it agrees with the Euclidean length.
//!
//! Zeros and poles of the metric block a ray; regular vertices are
//! transparent and the ray continues straight through them.  A trace may
//! start at a pole (poles are the light sources of the illumination
//! questions) but not at a zero, whose cone angle leaves no canonical chart
//! launch.

mod geodesic;
mod witness;

pub use geodesic::{
    default_cap, descriptions, trace, vertex_positions, Crossing, Segment, Stop, TraceError,
    TraceResult,
};
pub use witness::{cusp_sources, directions, witness, Witness};
