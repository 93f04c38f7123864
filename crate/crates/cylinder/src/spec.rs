//! Cylinders of the square tiling of the modular curve X(d).

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

/// One horizontal cylinder of the tiling, described by an unordered pair of
/// triples `(w_i, s_i, T_i)`: widths and column sums of the two upper
/// cylinders swept along it, plus integer offsets `0 ≤ T_i < gcd(w1, w2)`.
/// The stored form is the lexicographically least of the two orderings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CylSpec {
    pub w1: u64,
    pub s1: u64,
    pub t1: u64,
    pub w2: u64,
    pub s2: u64,
    pub t2: u64,
}

/// Position of a cylinder inside its story.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CylKind {
    /// `w1 = w2 = 1`: the two-column cylinder ending a story.
    Lighthouse,
    /// `s1 = s2 = 1`: the long cylinder starting a story.
    Eave,
    Body,
}

impl CylSpec {
    pub fn new(w1: u64, s1: u64, t1: u64, w2: u64, s2: u64, t2: u64) -> Self {
        let a = (w1, s1, t1);
        let b = (w2, s2, t2);
        let ((w1, s1, t1), (w2, s2, t2)) = if a <= b { (a, b) } else { (b, a) };
        CylSpec { w1, s1, t1, w2, s2, t2 }
    }

    /// Total degree `d = s1·w1 + s2·w2`.
    pub fn d(&self) -> u64 {
        self.s1 * self.w1 + self.s2 * self.w2
    }

    /// Circumference of the cylinder in the tiling.
    pub fn circumference(&self) -> u64 {
        self.w1.lcm(&self.w2).lcm(&(self.w1 + self.w2))
    }

    /// Height of the cylinder in the tiling.
    pub fn height(&self) -> u64 {
        self.s1.min(self.s2)
    }

    pub fn kind(&self) -> CylKind {
        if self.w1 == 1 && self.w2 == 1 {
            CylKind::Lighthouse
        } else if self.s1 == 1 && self.s2 == 1 {
            CylKind::Eave
        } else {
            CylKind::Body
        }
    }
}

impl fmt::Display for CylSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{({},{},{}),({},{},{})}}",
            self.w1, self.s1, self.t1, self.w2, self.s2, self.t2
        )
    }
}

/// All cylinders of the tiling of X(d), sorted by their stored form.
///
/// A valid cylinder is an unordered pair `(w1, s1, T1), (w2, s2, T2)` with
/// `s1·w1 + s2·w2 = d`, `gcd(s1, s2) = 1`, `0 ≤ T_i < gcd(w1, w2)`, and
/// `gcd(T1·s2 - T2·s1, w1, w2) = 1`.
pub fn cylinders(d: u64) -> Vec<CylSpec> {
    let mut out = std::collections::BTreeSet::new();
    for w1 in 1..=d {
        for s1 in 1..=d / w1 {
            let rest = d - s1 * w1;
            if rest == 0 {
                continue;
            }
            for w2 in 1..=rest {
                if !rest.is_multiple_of(w2) {
                    continue;
                }
                let s2 = rest / w2;
                if s1.gcd(&s2) != 1 {
                    continue;
                }
                let g = w1.gcd(&w2);
                for t1 in 0..g {
                    for t2 in 0..g {
                        let mix = (t1 * s2) as i64 - (t2 * s1) as i64;
                        if mix.unsigned_abs().gcd(&w1).gcd(&w2) != 1 {
                            continue;
                        }
                        out.insert(CylSpec::new(w1, s1, t1, w2, s2, t2));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pillow_degree() {
        let cs = cylinders(2);
        assert_eq!(cs, vec![CylSpec::new(1, 1, 0, 1, 1, 0)]);
        assert_eq!(cs[0].circumference(), 2);
        assert_eq!(cs[0].height(), 1);
        assert_eq!(cs[0].kind(), CylKind::Lighthouse);
    }

    #[test]
    fn degree_three() {
        let cs = cylinders(3);
        assert_eq!(
            cs,
            vec![CylSpec::new(1, 1, 0, 1, 2, 0), CylSpec::new(1, 1, 0, 2, 1, 0)]
        );
        let dims: Vec<(u64, u64)> = cs.iter().map(|c| (c.circumference(), c.height())).collect();
        assert!(dims.contains(&(2, 1)) && dims.contains(&(6, 1)));
    }

    #[test]
    fn degree_five_matches_printed_list() {
        let cs = cylinders(5);
        assert_eq!(cs.len(), 7);
        let mut dims: Vec<(u64, u64)> = cs.iter().map(|c| (c.circumference(), c.height())).collect();
        dims.sort_unstable();
        let mut expected = vec![(2, 1), (6, 1), (12, 1), (20, 1), (2, 2), (6, 1), (30, 1)];
        expected.sort_unstable();
        assert_eq!(dims, expected);
        // Two lighthouses, two eaves, three bodies.
        let kinds: Vec<CylKind> = cs.iter().map(CylSpec::kind).collect();
        assert_eq!(kinds.iter().filter(|k| **k == CylKind::Lighthouse).count(), 2);
        assert_eq!(kinds.iter().filter(|k| **k == CylKind::Eave).count(), 2);
    }

    #[test]
    fn area_formula() {
        // Sum of circumference × height is twice the boundary degree:
        // 2, 8, 80, 336, 2200 for d = 2, 3, 5, 7, 11.
        for (d, total) in [(2, 2u64), (3, 8), (5, 80), (7, 336), (11, 2200)] {
            let sum: u64 = cylinders(d)
                .iter()
                .map(|c| c.circumference() * c.height())
                .sum();
            assert_eq!(sum, total, "d = {d}");
        }
    }

    #[test]
    fn composite_offsets_appear() {
        // d = 4 has cylinders with w1 = w2 = 2 and offset pairs filtered by
        // the coprimality condition.
        let cs = cylinders(4);
        assert!(cs.iter().all(|c| c.d() == 4));
        assert!(cs.iter().any(|c| c.t1 != 0 || c.t2 != 0));
        for c in &cs {
            let g = c.w1.gcd(&c.w2);
            assert!(c.t1 < g && c.t2 < g);
        }
    }
}
