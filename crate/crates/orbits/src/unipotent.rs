//! Closed-form shear and rotation moves on the eave and lighthouse
//! cylinders of the square-tiled modular curve X(d), for prime d.

use crate::{is_prime, OrbitsError};
use cylinder::{cylinders, CylSpec, SurfPoint};
use exactnum::{rat_int, rat_mod_pos};
use num_integer::Integer;

/// The twist constant `T_k` of the eave `(k, 1), (d−k, 1)`: the unique
/// residue `0 ≤ T_k < k(d−k)` with `T_k·d ≡ −1 (mod k(d−k))`.
///
/// Defined for prime `d` and `1 ≤ k ≤ d−k`; the degenerate modulus for
/// `d = 2` gives `T_1 = 0`.
pub fn twist_t(d: u64, k: u64) -> u64 {
    assert!(is_prime(d), "degree {d} must be prime");
    assert!(k >= 1 && k <= d - k, "k = {k} out of range for d = {d}");
    let m = (k * (d - k)) as i128;
    let e = (d as i128).extended_gcd(&m);
    assert_eq!(e.gcd, 1, "d is prime and exceeds both eave widths");
    // e.x solves d·x ≡ 1 (mod m); the twist constant inverts the sign.
    (-e.x).rem_euclid(m) as u64
}

/// The number of shear orbits on the eave row `y = b/n` of the eave
/// `E_k ⊂ X(d)`: `gcd(b − n, k(d−k)) · gcd(b, d)`.
pub fn nu(d: u64, k: u64, b: u64, n: u64) -> Result<u64, OrbitsError> {
    assert!(is_prime(d), "degree {d} must be prime");
    assert!(k >= 1 && k <= d - k, "k = {k} out of range for d = {d}");
    let g = b.gcd(&n);
    if g != 1 {
        return Err(OrbitsError::GcdPrecondition { b, n, g });
    }
    Ok(b.abs_diff(n).gcd(&(k * (d - k))) * b.gcd(&d))
}

/// Look up the cylinder of a point, if the point addresses one.
fn spec_of(d: u64, p: &SurfPoint) -> Option<CylSpec> {
    cylinders(d).get(p.cyl).copied()
}

/// Apply the basic shear to a point of an eave cylinder of X(d):
/// `(x, y) ↦ (x + y + T_k·d, y)` modulo the circumference `k(d−k)·d`.
///
/// The `y = 0` row of poles is shifted along itself; interior rows advance
/// by the generic shear step.  Points of non-eave cylinders are rejected.
pub fn eave_shift(d: u64, p: &SurfPoint) -> Result<SurfPoint, OrbitsError> {
    assert!(is_prime(d), "degree {d} must be prime");
    let c = spec_of(d, p).ok_or(OrbitsError::NotAnEave)?;
    if c.s1 != c.s2 {
        return Err(OrbitsError::NotAnEave);
    }
    let k = c.w1.min(c.w2);
    let w = c.circumference();
    debug_assert_eq!(w, k * (d - k) * d);
    let step = rat_int((twist_t(d, k) * d) as i64) + &p.y;
    Ok(SurfPoint {
        cyl: p.cyl,
        x: rat_mod_pos(&(&p.x + &step), &rat_int(w as i64)),
        y: p.y.clone(),
    })
}

/// Apply the quarter turn to a point of a lighthouse cylinder `L_k ⊂ X(d)`,
/// landing in the eave `E_k` of the same story.
///
/// The left column of `L_k` is rotated by −π/2 onto the `k` squares of
/// `E_k` left of the pole at `x = 0` (wrapping around the circumference),
/// and the right column by +π/2 onto the `k` squares right of it:
/// `(x, y) ↦ (−y, x) mod W` for `x ≤ 1`, and `(x, y) ↦ (y, 2 − x)` for
/// `1 < x < 2`.  The two branches agree on the surface along the shared
/// column edge because the eave boundary folds at its poles.
pub fn rotate_lighthouse(d: u64, p: &SurfPoint) -> Result<SurfPoint, OrbitsError> {
    assert!(is_prime(d), "degree {d} must be prime");
    let c = spec_of(d, p).ok_or(OrbitsError::NotALighthouse)?;
    if c.w1 != 1 || c.w2 != 1 {
        return Err(OrbitsError::NotALighthouse);
    }
    let k = c.s1.min(c.s2);
    let eave = CylSpec::new(k, 1, 0, d - k, 1, 0);
    let target = cylinders(d)
        .iter()
        .position(|e| *e == eave)
        .expect("every lighthouse has an eave of the same story");
    let w = rat_int(eave.circumference() as i64);
    let xm = rat_mod_pos(&p.x, &rat_int(2));
    let (x, y) = if xm <= rat_int(1) {
        (rat_mod_pos(&(-&p.y), &w), xm)
    } else {
        (rat_mod_pos(&p.y, &w), rat_int(2) - xm)
    };
    Ok(SurfPoint {
        cyl: target,
        x,
        y,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactnum::rat;

    fn point(cyl: usize, x: exactnum::Rational, y: exactnum::Rational) -> SurfPoint {
        SurfPoint { cyl, x, y }
    }

    fn cyl_index(d: u64, spec: CylSpec) -> usize {
        cylinders(d).iter().position(|c| *c == spec).unwrap()
    }

    #[test]
    fn twist_constants_match_hand_computations() {
        assert_eq!(twist_t(3, 1), 1);
        assert_eq!(twist_t(5, 2), 1);
        assert_eq!(twist_t(7, 3), 5);
        assert_eq!(twist_t(2, 1), 0);
        for (d, k) in [(5, 1), (5, 2), (7, 1), (7, 2), (7, 3), (19, 4)] {
            let t = twist_t(d, k);
            assert!(t < k * (d - k));
            assert_eq!((t * d + 1) % (k * (d - k)), 0);
        }
    }

    #[test]
    fn shear_orbit_counts_match_hand_computations() {
        assert_eq!(nu(7, 3, 1, 9).unwrap(), 4);
        assert_eq!(nu(7, 3, 7, 9).unwrap(), 14);
        assert_eq!(nu(19, 4, 5, 21).unwrap(), 4);
        assert_eq!(nu(19, 4, 11, 21).unwrap(), 10);
    }

    #[test]
    fn shear_orbit_count_requires_a_coprime_row() {
        match nu(7, 3, 6, 9) {
            Err(OrbitsError::GcdPrecondition { b: 6, n: 9, g: 3 }) => {}
            other => panic!("expected a gcd error, got {other:?}"),
        }
    }

    #[test]
    fn eave_shift_moves_a_sample_point_on_x5() {
        let eave = cyl_index(5, CylSpec::new(2, 1, 0, 3, 1, 0));
        let p = point(eave, rat_int(0), rat(1, 3));
        let q = eave_shift(5, &p).unwrap();
        assert_eq!(q, point(eave, rat(16, 3), rat(1, 3)));
        // Iterating 30·3 / gcd-many times returns to the start.
        let mut r = p.clone();
        let count = nu(5, 2, 1, 3).unwrap();
        let period = 30 * 3 / count;
        for _ in 0..period {
            r = eave_shift(5, &r).unwrap();
        }
        assert_eq!(r, p);
    }

    #[test]
    fn eave_shift_rejects_body_cylinders() {
        let body = cyl_index(5, CylSpec::new(1, 1, 0, 2, 2, 0));
        let p = point(body, rat(1, 2), rat(1, 2));
        assert!(matches!(eave_shift(5, &p), Err(OrbitsError::NotAnEave)));
    }

    #[test]
    fn rotation_sends_the_lighthouse_cusp_pole_to_the_eave_cusp_pole() {
        for d in [5, 7] {
            for k in 1..=(d - 1) / 2 {
                let lh = cyl_index(d, CylSpec::new(1, k, 0, 1, d - k, 0));
                let eave = cyl_index(d, CylSpec::new(k, 1, 0, d - k, 1, 0));
                let cusp = point(lh, rat_int(1), rat_int(0));
                let image = rotate_lighthouse(d, &cusp).unwrap();
                assert_eq!(image, point(eave, rat_int(0), rat_int(1)));
                // The non-cusp pole at x = 0 lands on the eave-top pole.
                let ncp = point(lh, rat_int(0), rat_int(0));
                let image = rotate_lighthouse(d, &ncp).unwrap();
                assert_eq!(image, point(eave, rat_int(0), rat_int(0)));
            }
        }
    }

    #[test]
    fn rotation_on_the_pillowcase_swaps_the_two_squares() {
        let p = point(0, rat(1, 3), rat(1, 4));
        let q = rotate_lighthouse(2, &p).unwrap();
        assert_eq!(q, point(0, rat(7, 4), rat(1, 3)));
        let r = rotate_lighthouse(2, &q).unwrap();
        assert_eq!(r, p, "two quarter turns fix every pillowcase point");
    }

    #[test]
    fn rotation_rejects_eave_and_body_cylinders() {
        for spec in [CylSpec::new(2, 1, 0, 3, 1, 0), CylSpec::new(1, 1, 0, 2, 2, 0)] {
            let idx = cyl_index(5, spec);
            let p = point(idx, rat(1, 2), rat(1, 2));
            assert!(matches!(
                rotate_lighthouse(5, &p),
                Err(OrbitsError::NotALighthouse)
            ));
        }
    }
}
