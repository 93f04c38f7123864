//! Rational points of the tiled surface, the development onto the
//! pillowcase, and spin values.

use crate::build::{corner_offset, Side};
use crate::{Parity, Tiling, TilingError};
use cylinder::SurfPoint;
use exactnum::{rat, rat_int, rat_mod_pos, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::VecDeque;

/// A point of the pillowcase ℂ/({±1} ⋉ 2ℤ[i]), in the fundamental domain
/// [0, 2] × [0, 1], stored as exact fractions a/n, b/n with 0 ≤ a < 2n and
/// 0 ≤ b ≤ n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PillowPoint {
    pub a: u64,
    pub b: u64,
    pub n: u64,
}

impl PillowPoint {
    /// Canonical representative of (x, y) on the pillowcase, with common
    /// denominator n (the denominators of x and y must divide n).
    pub fn new(x: &Rational, y: &Rational, n: u64) -> PillowPoint {
        let two = rat_int(2);
        let one = Rational::one();
        let mut x = rat_mod_pos(x, &two);
        let mut y = rat_mod_pos(y, &two);
        if y > one {
            x = rat_mod_pos(&(-&x), &two);
            y = &two - &y;
        }
        if y.is_zero() || y == one {
            let mirrored = rat_mod_pos(&(-&x), &two);
            if mirrored < x {
                x = mirrored;
            }
        }
        let nr = rat_int(n as i64);
        let ax = &x * &nr;
        let by = &y * &nr;
        assert!(
            ax.is_integer() && by.is_integer(),
            "denominators must divide n"
        );
        let a = u64::try_from(&ax.to_integer()).expect("pillow numerator fits in u64");
        let b = u64::try_from(&by.to_integer()).expect("pillow numerator fits in u64");
        debug_assert!(a < 2 * n && b <= n);
        PillowPoint { a, b, n }
    }

    /// Spin of the point for odd n: 0 on the even half-lattice, 1 otherwise.
    /// `None` when n is even (the spin is defined only for odd denominator).
    pub fn spin(&self) -> Option<u8> {
        if self.n.is_multiple_of(2) {
            None
        } else if self.a.is_multiple_of(2) && self.b.is_multiple_of(2) {
            Some(0)
        } else {
            Some(1)
        }
    }
}

/// Develop the squares onto the pillowcase modulo 2: breadth-first from
/// square 0, each square receives the mod-2 translation that its chart
/// differs from the developing map by.  Crossing a glued edge adds the sum
/// of the two unwrapped corner positions (the start of the edge and the end
/// of its partner), regardless of the parity of the gluing, because the
/// deck group is generated by the point reflections in the half-integral
/// lattice together with translations by 2ℤ².
pub(crate) fn develop(t: &Tiling) -> Option<Vec<(u8, u8)>> {
    let n = t.squares.len();
    let mut offsets: Vec<Option<(u8, u8)>> = vec![None; n];
    offsets[0] = Some((0, 0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(sq) = queue.pop_front() {
        let (ox, oy) = offsets[sq].expect("queued squares have offsets");
        for side in 0..4 {
            let e = 4 * sq + side;
            let (p, _) = t.gluing[e];
            let p = p as usize;
            let sq2 = p / 4;
            let (dx, dy) = corner_offset(Side::from_index(side));
            let here = (t.squares[sq].col + dx, t.squares[sq].row + dy);
            let after = 4 * sq2 + (p % 4 + 1) % 4;
            let (dx2, dy2) = corner_offset(Side::from_index(after % 4));
            let there = (t.squares[sq2].col + dx2, t.squares[sq2].row + dy2);
            let step = (
                ((here.0 + there.0) % 2) as u8,
                ((here.1 + there.1) % 2) as u8,
            );
            let cand = ((ox + step.0) % 2, (oy + step.1) % 2);
            match offsets[sq2] {
                None => {
                    offsets[sq2] = Some(cand);
                    queue.push_back(sq2);
                }
                Some(existing) => {
                    if existing != cand {
                        return None;
                    }
                }
            }
        }
    }
    offsets.into_iter().collect()
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    num_integer::gcd(num_integer::gcd(a, b), c)
}

/// All points of the surface with coordinates in (1/n)ℤ that are not
/// vertices of the tiling, each listed once, sorted.  Points on the top or
/// bottom boundary of a cylinder appear under the lexicographically least of
/// their two descriptions.  Requires n ≥ 2 (for n = 1 every candidate is a
/// vertex).
pub(crate) fn rational_points(t: &Tiling, n: u64) -> Vec<SurfPoint> {
    assert!(n >= 2, "rational points are enumerated for denominator n >= 2");
    let mut out = Vec::new();
    for ci in 0..t.cyls.len() {
        let (w, h) = (t.width(ci), t.height(ci));
        for a in 0..n * w {
            for b in 0..=n * h {
                if gcd3(a % n, b % n, n) != 1 {
                    continue;
                }
                if b == 0 || b == n * h {
                    // Boundary point: the gluing provides a second
                    // description; keep the lexicographically least.
                    let (col, rem) = (a / n, a % n);
                    debug_assert!(rem != 0, "corner points are not primitive");
                    let (side, row) = if b == 0 {
                        (Side::Top, 0)
                    } else {
                        (Side::Bottom, h - 1)
                    };
                    let (sq2, side2, parity) = t.partner(t.square_id(ci, col, row), side);
                    let psq = t.squares[sq2];
                    let rem2 = match parity {
                        Parity::Translation => rem,
                        Parity::RotationByPi => n - rem,
                    };
                    let a2 = psq.col * n + rem2;
                    let b2 = match side2 {
                        Side::Top => 0,
                        Side::Bottom => n * t.height(psq.cyl),
                        _ => unreachable!("horizontal boundaries glue to horizontal boundaries"),
                    };
                    if (ci, a, b) <= (psq.cyl, a2, b2) {
                        out.push(point(ci, a, b, n));
                    }
                } else {
                    out.push(point(ci, a, b, n));
                }
            }
        }
    }
    debug_assert!(out.windows(2).all(|p| p[0] < p[1]), "points are sorted");
    out
}

fn point(cyl: usize, a: u64, b: u64, n: u64) -> SurfPoint {
    SurfPoint {
        cyl,
        x: rat(a as i64, n as i64),
        y: rat(b as i64, n as i64),
    }
}

/// Image of a surface point under the degree-d covering of the pillowcase,
/// together with its spin when the denominator is odd.
pub(crate) fn delta_image(
    t: &Tiling,
    p: &SurfPoint,
) -> Result<(PillowPoint, Option<u8>), TilingError> {
    let offsets = t.dev_offsets.as_ref().ok_or(TilingError::ParityConflict)?;
    let w = t.width(p.cyl);
    let h = t.height(p.cyl);
    let x = rat_mod_pos(&p.x, &rat_int(w as i64));
    let y = p.y.clone();
    assert!(
        !y.is_negative() && y <= rat_int(h as i64),
        "point must lie on its cylinder"
    );
    let col = u64::try_from(&x.floor().to_integer()).expect("column fits in u64") % w;
    let row = u64::try_from(&y.floor().to_integer()).expect("row fits in u64").min(h - 1);
    let (ox, oy) = offsets[t.square_id(p.cyl, col, row)];
    let xt = &x + rat_int(ox as i64);
    let yt = &y + rat_int(oy as i64);
    let pillow = PillowPoint::new(&xt, &yt, p.denom());
    let spin = pillow.spin();
    Ok((pillow, spin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    #[test]
    fn pillow_point_canonicalization() {
        // (3/2, 3/2) ~ (1/2, 1/2) by the point reflection.
        let p = PillowPoint::new(&rat(3, 2), &rat(3, 2), 2);
        assert_eq!(p, PillowPoint { a: 1, b: 1, n: 2 });
        // On the fold line y = 0 the two x values are identified.
        let q = PillowPoint::new(&rat(7, 4), &rat_int(0), 4);
        assert_eq!(q, PillowPoint { a: 1, b: 0, n: 4 });
        // Involution invariance at a generic point.
        let r1 = PillowPoint::new(&rat(5, 3), &rat(1, 3), 3);
        let r2 = PillowPoint::new(&rat(-5, 3), &rat(-1, 3), 3);
        assert_eq!(r1, r2);
    }

    #[test]
    fn x2_rational_points_count_matches_the_pillowcase() {
        let t = build(2).unwrap();
        assert_eq!(t.rational_points(2).len(), 6);
        assert_eq!(t.rational_points(3).len(), 16);
        assert_eq!(t.rational_points(4).len(), 24);
    }

    #[test]
    fn x2_delta_is_the_identity_off_the_corners() {
        let t = build(2).unwrap();
        let p = SurfPoint {
            cyl: 0,
            x: rat(2, 5),
            y: rat(2, 5),
        };
        let (pp, spin) = t.delta_image(&p).unwrap();
        assert_eq!(pp, PillowPoint { a: 2, b: 2, n: 5 });
        assert_eq!(spin, Some(0));
    }

    #[test]
    fn spin_is_defined_exactly_for_odd_denominators() {
        assert_eq!(PillowPoint { a: 2, b: 2, n: 4 }.spin(), None);
        assert_eq!(PillowPoint { a: 2, b: 2, n: 5 }.spin(), Some(0));
        assert_eq!(PillowPoint { a: 2, b: 1, n: 5 }.spin(), Some(1));
    }
}
