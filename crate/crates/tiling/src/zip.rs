//! Vertical degenerations of a one-cylinder surface: zipping the boundary of
//! the cylinder up or down produces a two-cylinder square-tiled surface.

use crate::TilingError;
use cylinder::CylCoords;
use exactnum::{rat_int, rat_mod_pos, Rational};

/// Direction of the vertical degeneration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZipDirection {
    /// Close the zipper at the top boundary (h → 0).
    Up,
    /// Close the zipper at the bottom boundary (h → min(s1, s2)).
    Down,
}

/// Combinatorial type of a two-cylinder surface in the boundary of the
/// stratum: in type 1 the smaller cylinder is glued into one end of the
/// larger one's boundary; in type 2 its two boundary circles are glued into
/// both ends of the larger one's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoCylKind {
    Type1,
    Type2,
}

/// Exact coordinates of a two-cylinder surface: widths, heights and twists,
/// normalized so that w1 ≤ w2 (and h1 < h2 on ties).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCylCoords {
    pub kind: TwoCylKind,
    pub w1: u64,
    pub h1: u64,
    pub w2: u64,
    pub h2: u64,
    pub t1: Rational,
    pub t2: Rational,
    pub t3: Rational,
}

impl TwoCylCoords {
    /// Total number of unit squares (the degree d).
    pub fn d(&self) -> u64 {
        self.w1 * self.h1 + self.w2 * self.h2
    }
}

/// Degenerate a one-cylinder surface vertically.
///
/// The input cylinder has components (w1, s1), (w2, s2) and twists
/// (t1, t2, t3); the height coordinate h is immaterial here since the
/// degeneration moves it to a boundary value.  All three twists must be
/// non-integral, and zipping down additionally requires s1 ≠ s2.
pub fn zip(c: &CylCoords, dir: ZipDirection) -> Result<TwoCylCoords, TilingError> {
    // Normalize the twists into their fundamental ranges first.
    let reduce = |c: &CylCoords| CylCoords {
        t1: rat_mod_pos(&c.t1, &rat_int(c.w1 as i64)),
        t2: rat_mod_pos(&c.t2, &rat_int(c.w2 as i64)),
        t3: rat_mod_pos(&c.t3, &rat_int(c.w3() as i64)),
        ..c.clone()
    };
    let c = reduce(c);
    if c.t1.is_integer() || c.t2.is_integer() || c.t3.is_integer() {
        return Err(TilingError::IntegralTwist);
    }
    match dir {
        ZipDirection::Up => {
            // Order the components by width (ties by height).
            let c = if (c.w2, c.s2) < (c.w1, c.s1) {
                reduce(&c.swapped())
            } else {
                c
            };
            let (w1, w2) = (c.w1, c.w2);
            let w1r = rat_int(w1 as i64);
            let w2r = rat_int(w2 as i64);
            let w3r = rat_int((w1 + w2) as i64);
            let (kind, t1, t2, t3) = if c.t3 < w1r {
                (
                    TwoCylKind::Type1,
                    c.t1.clone(),
                    rat_mod_pos(&(&w2r - &c.t2 + &c.t3), &w2r),
                    c.t3.clone(),
                )
            } else if c.t3 < w2r {
                (
                    TwoCylKind::Type2,
                    c.t1.clone(),
                    &c.t3 - &w1r,
                    rat_mod_pos(&(&c.t3 + &c.t3 - &c.t2 - &w1r), &w2r),
                )
            } else {
                (
                    TwoCylKind::Type1,
                    rat_mod_pos(&(&w3r + &c.t1 - &c.t3), &w1r),
                    rat_mod_pos(&(&c.t3 - &c.t1 - &w1r), &w2r),
                    &w3r - &c.t3,
                )
            };
            Ok(TwoCylCoords {
                kind,
                w1,
                h1: c.s1,
                w2,
                h2: c.s2,
                t1,
                t2,
                t3,
            })
        }
        ZipDirection::Down => {
            if c.s1 == c.s2 {
                return Err(TilingError::EaveBottom);
            }
            // Order the components by height, larger first.
            let c = if c.s1 < c.s2 { reduce(&c.swapped()) } else { c };
            Ok(TwoCylCoords {
                kind: TwoCylKind::Type2,
                w1: c.w1,
                h1: c.s1 - c.s2,
                w2: c.w1 + c.w2,
                h2: c.s2,
                t1: c.t1,
                t2: c.t2,
                t3: c.t3,
            })
        }
    }
}
