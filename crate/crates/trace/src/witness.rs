//! Bounded illumination-witness search: try primitive directions from each
//! light source in a fixed order and report the first segment that reaches
//! the target unobstructed.

use crate::geodesic::{descriptions, trace, Segment, Stop, TraceError, TraceResult};
use cylinder::SurfPoint;
use exactnum::rat_int;
use num_integer::Integer;
use rayon::prelude::*;
use tiling::{Tiling, VertexClass};

/// Result of a witness search: a segment, or no verdict.  `Unknown` means
/// the bounded search was exhausted — it is consistent with, but does not
/// prove, non-illumination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Found(Segment),
    Unknown,
}

impl Witness {
    pub fn found(&self) -> Option<&Segment> {
        match self {
            Witness::Found(seg) => Some(seg),
            Witness::Unknown => None,
        }
    }
}

/// All primitive directions (p, q) with |p|, |q| ≤ bound, in the search
/// order: increasing |p| + |q|, then p, then q.
pub fn directions(bound: u32) -> Vec<(i64, i64)> {
    let b = bound as i64;
    let mut out = Vec::new();
    for p in -b..=b {
        for q in -b..=b {
            if p.unsigned_abs().gcd(&q.unsigned_abs()) == 1 {
                out.push((p, q));
            }
        }
    }
    out.sort_by_key(|&(p, q)| (p.abs() + q.abs(), p, q));
    out
}

/// Chart positions of the cusp poles, in vertex order.  Each pole carries
/// both of its corners at a single chart position.
pub fn cusp_sources(t: &Tiling) -> Vec<SurfPoint> {
    t.vertices
        .iter()
        .filter(|v| v.class == VertexClass::CuspPole)
        .map(|v| SurfPoint {
            cyl: v.position.0,
            x: rat_int(v.position.1 as i64),
            y: rat_int(v.position.2 as i64),
        })
        .collect()
}

/// Search for a segment from one of `sources` to `target` along a primitive
/// direction with |p|, |q| ≤ bound.  Directions are tried in the order of
/// [`directions`] and sources in the given order within each direction; the
/// first hit in that order is returned, so the result does not depend on
/// the worker count.
pub fn witness(
    t: &Tiling,
    target: &SurfPoint,
    sources: &[SurfPoint],
    bound: u32,
) -> Result<Witness, TraceError> {
    descriptions(t, target)?;
    let stop = Stop::Target(target.clone());
    let dirs = directions(bound);
    // Early exit by blocks while keeping the deterministic minimum: every
    // index in a block precedes every index in later blocks.
    for block in dirs.chunks(64) {
        let hit = block
            .par_iter()
            .enumerate()
            .filter_map(|(di, &dir)| {
                for (si, src) in sources.iter().enumerate() {
                    match trace(t, src, dir, &stop) {
                        Ok(TraceResult::ReachedTarget { segment, .. }) => {
                            return Some(((di, si), segment))
                        }
                        Ok(_) => {}
                        Err(_) => return None,
                    }
                }
                None
            })
            .min_by_key(|(key, _)| *key);
        if let Some((_, segment)) = hit {
            return Ok(Witness::Found(segment));
        }
    }
    Ok(Witness::Unknown)
}
