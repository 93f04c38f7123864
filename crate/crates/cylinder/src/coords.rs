//! Points of the tiling and their three-cylinder coordinates.

use crate::spec::{cylinders, CylSpec};
use exactnum::{rat_int, rat_mod_pos, GaussVec, Lattice2, Rational};
use num_integer::Integer;
use num_traits::Signed;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Coordinates of a generic (or limiting) three-cylinder surface of area
/// `d = s1·w1 + s2·w2`.  Heights are `h1 = s1 - h`, `h2 = s2 - h`, `h3 = h`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylCoords {
    pub w1: u64,
    pub s1: u64,
    pub w2: u64,
    pub s2: u64,
    pub t1: Rational,
    pub t2: Rational,
    pub t3: Rational,
    pub h: Rational,
}

impl CylCoords {
    pub fn d(&self) -> u64 {
        self.s1 * self.w1 + self.s2 * self.w2
    }

    pub fn w3(&self) -> u64 {
        self.w1 + self.w2
    }

    pub fn h1(&self) -> Rational {
        rat_int(self.s1 as i64) - &self.h
    }

    pub fn h2(&self) -> Rational {
        rat_int(self.s2 as i64) - &self.h
    }

    pub fn h3(&self) -> Rational {
        self.h.clone()
    }

    /// Relative period between the two cone points, `(t3, -h3)`.
    pub fn rho(&self) -> GaussVec {
        GaussVec::new(self.t3.clone(), -self.h.clone())
    }

    /// Torsion order of the relative period modulo ℤ².
    pub fn torsion(&self) -> u64 {
        let n = exactnum::torsion_order(&self.rho(), &Lattice2::unit());
        (&n).try_into().expect("torsion order fits in u64")
    }

    /// The same surface with the two upper cylinders swapped.
    pub fn swapped(&self) -> CylCoords {
        CylCoords {
            w1: self.w2,
            s1: self.s2,
            w2: self.w1,
            s2: self.s1,
            t1: self.t2.clone(),
            t2: self.t1.clone(),
            t3: self.t3.clone(),
            h: self.h.clone(),
        }
    }

    /// Lexicographically least of the two orderings of the upper cylinders.
    pub fn canonical(&self) -> CylCoords {
        let sw = self.swapped();
        if self.key() <= sw.key() {
            self.clone()
        } else {
            sw
        }
    }

    fn key(&self) -> (u64, u64, u64, u64, Rational, Rational) {
        (
            self.w1,
            self.s1,
            self.w2,
            self.s2,
            self.t1.clone(),
            self.t2.clone(),
        )
    }

    /// Check the admissibility conditions for a point of the locus of
    /// integral periods: positive heights, integral twist differences,
    /// coprime column sums, and the primitivity gcd.
    pub fn admissible(&self) -> Result<(), String> {
        if self.s1.gcd(&self.s2) != 1 {
            return Err(format!("gcd(s1, s2) = {}", self.s1.gcd(&self.s2)));
        }
        for (name, hgt) in [("h1", self.h1()), ("h2", self.h2()), ("h3", self.h3())] {
            if !hgt.is_positive() {
                return Err(format!("height {name} = {hgt} is not positive"));
            }
        }
        let d13 = &self.t1 - &self.t3;
        let d23 = &self.t2 - &self.t3;
        if !d13.is_integer() || !d23.is_integer() {
            return Err("twist differences t1 - t3, t2 - t3 must be integers".into());
        }
        for (name, t, w) in [
            ("t1", &self.t1, self.w1),
            ("t2", &self.t2, self.w2),
            ("t3", &self.t3, self.w3()),
        ] {
            if t.is_negative() || *t >= rat_int(w as i64) {
                return Err(format!("twist {name} = {t} outside [0, {w})"));
            }
        }
        let mix = d13.to_integer() * exactnum::int(self.s2 as i64)
            - d23.to_integer() * exactnum::int(self.s1 as i64);
        let g = mix
            .gcd(&exactnum::int(self.w1 as i64))
            .gcd(&exactnum::int(self.w2 as i64));
        if g != exactnum::int(1) {
            return Err(format!("primitivity gcd is {g}"));
        }
        Ok(())
    }
}

impl fmt::Display for CylCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(w1={}, s1={}, w2={}, s2={}, t=({}, {}, {}), h={})",
            self.w1, self.s1, self.w2, self.s2, self.t1, self.t2, self.t3, self.h
        )
    }
}

#[derive(Serialize, Deserialize)]
struct CylCoordsJson {
    w1: u64,
    s1: u64,
    w2: u64,
    s2: u64,
    t: [String; 3],
    h: String,
    denom: u64,
}

impl Serialize for CylCoords {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let denom = self
            .t1
            .denom()
            .lcm(self.t2.denom())
            .lcm(self.t3.denom())
            .lcm(self.h.denom());
        CylCoordsJson {
            w1: self.w1,
            s1: self.s1,
            w2: self.w2,
            s2: self.s2,
            t: [
                exactnum::rat_to_string(&self.t1),
                exactnum::rat_to_string(&self.t2),
                exactnum::rat_to_string(&self.t3),
            ],
            h: exactnum::rat_to_string(&self.h),
            denom: (&denom).try_into().unwrap_or(0),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CylCoords {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CylCoordsJson::deserialize(d)?;
        let parse = |s: &str| exactnum::rat_from_string(s).map_err(serde::de::Error::custom);
        Ok(CylCoords {
            w1: raw.w1,
            s1: raw.s1,
            w2: raw.w2,
            s2: raw.s2,
            t1: parse(&raw.t[0])?,
            t2: parse(&raw.t[1])?,
            t3: parse(&raw.t[2])?,
            h: parse(&raw.h)?,
        })
    }
}

/// A point of the tiling: cylinder index into [`CylModel::cyls`], horizontal
/// position `x ∈ [0, circumference)`, and depth `y ∈ [0, height]` measured
/// downward from the top boundary of the cylinder.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SurfPoint {
    pub cyl: usize,
    pub x: Rational,
    pub y: Rational,
}

impl SurfPoint {
    pub fn new_int(cyl: usize, x: i64, y: i64) -> Self {
        SurfPoint {
            cyl,
            x: rat_int(x),
            y: rat_int(y),
        }
    }

    /// Least common denominator of the coordinates.
    pub fn denom(&self) -> u64 {
        let d = self.x.denom().lcm(self.y.denom());
        (&d).try_into().expect("denominator fits in u64")
    }
}

impl Serialize for SurfPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SurfPoint", 4)?;
        st.serialize_field("cyl", &self.cyl)?;
        st.serialize_field("x", &exactnum::rat_to_string(&self.x))?;
        st.serialize_field("y", &exactnum::rat_to_string(&self.y))?;
        st.serialize_field("denom", &self.denom())?;
        st.end()
    }
}

impl fmt::Display for SurfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cyl {} at ({}, {})", self.cyl, self.x, self.y)
    }
}

/// Solve `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)` for not necessarily coprime
/// moduli.  Returns `(x, lcm)` or `None` when inconsistent.
pub(crate) fn crt(r1: i128, m1: i128, r2: i128, m2: i128) -> Option<(i128, i128)> {
    let e = m1.extended_gcd(&m2);
    let g = e.gcd;
    if (r2 - r1) % g != 0 {
        return None;
    }
    let l = m1 / g * m2;
    // x = r1 + m1 * t where t ≡ (r2 - r1)/g * inv(m1/g) (mod m2/g).
    let t = ((r2 - r1) / g % (m2 / g) * (e.x % (m2 / g))) % (m2 / g);
    let x = (r1 + m1 * t).rem_euclid(l);
    debug_assert_eq!(x.rem_euclid(m1), r1.rem_euclid(m1));
    debug_assert_eq!(x.rem_euclid(m2), r2.rem_euclid(m2));
    Some((x, l))
}

/// The full cylinder list of the tiling of X(d), with point conversions.
#[derive(Debug, Clone)]
pub struct CylModel {
    pub d: u64,
    pub cyls: Vec<CylSpec>,
}

impl CylModel {
    pub fn new(d: u64) -> Self {
        CylModel {
            d,
            cyls: cylinders(d),
        }
    }

    /// Three-cylinder coordinates of a point: twists follow the offsets of
    /// the cylinder, the depth is the wrap height.
    pub fn coords(&self, p: &SurfPoint) -> CylCoords {
        let spec = &self.cyls[p.cyl];
        let t1 = rat_mod_pos(
            &(rat_int(spec.t1 as i64) + &p.x),
            &rat_int(spec.w1 as i64),
        );
        let t2 = rat_mod_pos(
            &(rat_int(spec.t2 as i64) + &p.x),
            &rat_int(spec.w2 as i64),
        );
        let t3 = rat_mod_pos(&p.x, &rat_int((spec.w1 + spec.w2) as i64));
        CylCoords {
            w1: spec.w1,
            s1: spec.s1,
            w2: spec.w2,
            s2: spec.s2,
            t1,
            t2,
            t3,
            h: p.y.clone(),
        }
    }

    /// Locate the point of the tiling with the given coordinates (inverse of
    /// [`CylModel::coords`] up to the swap symmetry).  Returns `None` when the
    /// coordinates do not belong to this tiling.
    pub fn find_point(&self, c: &CylCoords) -> Option<SurfPoint> {
        if c.d() != self.d {
            return None;
        }
        // Common fractional part of the twists.
        let f = &c.t3 - c.t3.floor();
        let int_part = |t: &Rational| -> Option<i128> {
            let a = t - &f;
            if a.is_integer() {
                (&a.to_integer()).try_into().ok()
            } else {
                None
            }
        };
        let a1 = int_part(&c.t1)?;
        let a2 = int_part(&c.t2)?;
        let a3 = int_part(&c.t3)?;
        let gamma = c.w1.gcd(&c.w2) as i128;
        let cap_t1 = (a1 - a3).rem_euclid(gamma) as u64;
        let cap_t2 = (a2 - a3).rem_euclid(gamma) as u64;
        // The containing cylinder, up to swapping the upper pair.
        let spec = CylSpec::new(c.w1, c.s1, cap_t1, c.w2, c.s2, cap_t2);
        let cyl = self.cyls.iter().position(|s| *s == spec)?;
        // Solve x = ξ + f with ξ ≡ a3 (mod w3), ξ ≡ a_i - T_i (mod w_i);
        // the solution is unique modulo the circumference.
        let w3 = (c.w1 + c.w2) as i128;
        let (x0, l0) = crt(a3, w3, a1 - cap_t1 as i128, c.w1 as i128)?;
        let (x1, _) = crt(x0, l0, a2 - cap_t2 as i128, c.w2 as i128)?;
        let x = x1.rem_euclid(spec.circumference() as i128);
        let p = SurfPoint {
            cyl,
            x: Rational::from_integer(exactnum::int(x as i64)) + &f,
            y: c.h.clone(),
        };
        if self.coords(&p).canonical() == c.canonical() {
            Some(p)
        } else {
            None
        }
    }

    /// Apply `e` steps of the integral shear to a point: twists move by the
    /// heights, `t3` against the wrap height, then the point is re-located.
    pub fn shear_point(&self, p: &SurfPoint, e: i64) -> SurfPoint {
        let c = self.coords(p);
        let ee = rat_int(e);
        let moved = CylCoords {
            t1: rat_mod_pos(&(&c.t1 + &ee * c.h1()), &rat_int(c.w1 as i64)),
            t2: rat_mod_pos(&(&c.t2 + &ee * c.h2()), &rat_int(c.w2 as i64)),
            t3: rat_mod_pos(&(&c.t3 - &ee * c.h3()), &rat_int(c.w3() as i64)),
            ..c
        };
        let q = self
            .find_point(&moved)
            .expect("sheared coordinates stay in the tiling");
        debug_assert_eq!(self.coords(&q).canonical(), moved.canonical());
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactnum::rat;

    #[test]
    fn crt_basics() {
        assert_eq!(crt(1, 2, 2, 3), Some((5, 6)));
        assert_eq!(crt(1, 4, 3, 6), Some((9, 12)));
        assert_eq!(crt(1, 4, 2, 6), None);
        assert_eq!(crt(0, 5, 0, 5), Some((0, 5)));
    }

    #[test]
    fn coords_round_trip_integer_points() {
        for d in [2u64, 3, 4, 5] {
            let model = CylModel::new(d);
            for (ci, spec) in model.cyls.iter().enumerate() {
                for x in 0..spec.circumference() {
                    for y in 0..=spec.height() {
                        let p = SurfPoint::new_int(ci, x as i64, y as i64);
                        let c = model.coords(&p);
                        let q = model.find_point(&c).expect("point found");
                        assert_eq!(model.coords(&q).canonical(), c.canonical());
                        assert_eq!(q.y, p.y);
                    }
                }
            }
        }
    }

    #[test]
    fn coords_round_trip_rational_points() {
        let model = CylModel::new(5);
        for ci in 0..model.cyls.len() {
            let spec = &model.cyls[ci];
            for num in 0..3 * spec.circumference() {
                let p = SurfPoint {
                    cyl: ci,
                    x: rat(num as i64, 3),
                    y: rat(1, 3),
                };
                let c = model.coords(&p);
                let q = model.find_point(&c).expect("found");
                assert_eq!(model.coords(&q).canonical(), c.canonical());
            }
        }
    }

    #[test]
    fn shear_fixes_heights_and_is_invertible() {
        let model = CylModel::new(5);
        for ci in 0..model.cyls.len() {
            let p = SurfPoint {
                cyl: ci,
                x: rat(1, 3),
                y: rat(1, 3),
            };
            let q = model.shear_point(&p, 1);
            assert_eq!(model.coords(&q).h, rat(1, 3));
            let back = model.shear_point(&q, -1);
            assert_eq!(model.coords(&back).canonical(), model.coords(&p).canonical());
        }
    }

    #[test]
    fn admissibility_examples() {
        let model = CylModel::new(5);
        // Interior fractional point on some cylinder is admissible.
        let p = SurfPoint {
            cyl: 0,
            x: rat(1, 3),
            y: rat(1, 3),
        };
        assert!(model.coords(&p).admissible().is_ok());
        // Boundary point has a zero height.
        let b = SurfPoint::new_int(0, 0, 0);
        assert!(model.coords(&b).admissible().is_err());
    }
}
