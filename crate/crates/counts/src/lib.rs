//! Closed-form evaluators for the census of genus-2 elliptic covers: the
//! degree of the discriminant map, the genus and special-point counts of
//! the covering modular curve, the sizes of the square-tiled families of
//! every degree and torsion together with their spin refinements, and the
//! total count of reduced genus-2 tilings by a given number of squares.
//!
//! Everything here is exact integer arithmetic; each quotient is asserted
//! to divide before it is taken.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountsError {
    /// The spin refinement only exists for odd torsion.
    #[error("spin classes are only defined for odd torsion, got n = {n}")]
    EvenTorsion { n: u64 },
}

/// Distinct prime factors by trial division.
fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Orders of the special linear and projective special linear groups over
/// the integers modulo `m`: `|SL₂| = m³·Π_{p|m}(1 − 1/p²)`, and `|PSL₂|`
/// is 6 for m = 2, otherwise half of `|SL₂|`.
pub fn group_orders(m: u64) -> (u128, u128) {
    assert!(m >= 2, "matrix groups need a modulus of at least 2");
    let mut num = u128::from(m).pow(3);
    let mut den = 1u128;
    for p in prime_factors(m) {
        num *= u128::from(p * p - 1);
        den *= u128::from(p * p);
    }
    assert_eq!(num % den, 0);
    let sl = num / den;
    let psl = if m == 2 { sl } else { sl / 2 };
    (sl, psl)
}

/// `scale · num / den`, asserting exactness; signed to allow the genus
/// formula's negative intermediate values.
fn frac(num: i128, den: i128, scale: u128) -> i128 {
    let v = num * i128::try_from(scale).expect("scale fits in i128");
    assert_eq!(v % den, 0, "count formulas evaluate to integers");
    v / den
}

fn nonneg(v: i128) -> u128 {
    u128::try_from(v).expect("count is non-negative")
}

/// The exact census of a degree-`d` family, together with the torsion-`n`
/// counts when a torsion order is supplied.
///
/// All entries scale the order of `PSL₂(ℤ/d)`; the spin splits exist only
/// for odd degree (double-zero locus) respectively odd torsion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountTable {
    pub d: u64,
    pub n: Option<u64>,
    /// Degree of the discriminant map to the pillowcase.
    pub deg_delta: u128,
    /// Genus of the covering curve.
    pub genus: u128,
    /// Simple poles at cusps (surfaces with a non-separating node).
    pub cusp_poles: u128,
    /// Simple poles away from the cusps (separating node).
    pub non_cusp_poles: u128,
    /// Simple zeros: the double-zero square-tiled locus.
    pub zeros: u128,
    /// Spin-0 part of the double-zero locus (odd degree only).
    pub zeros_spin0: Option<u128>,
    /// Spin-1 part of the double-zero locus (odd degree only).
    pub zeros_spin1: Option<u128>,
    /// Integral points: the torsion-1 square-tiled locus.
    pub integral_points: u128,
    /// Exact torsion-`n` points (needs `n ≥ 2`).
    pub torsion_points: Option<u128>,
    /// Spin-0 part of the torsion locus (odd `n` only).
    pub torsion_spin0: Option<u128>,
    /// Spin-1 part of the torsion locus (odd `n` only).
    pub torsion_spin1: Option<u128>,
}

/// Evaluate the census for degree `d`, and for torsion `n` when given.
pub fn table(d: u64, n: Option<u64>) -> CountTable {
    assert!(d >= 2, "families start at degree 2");
    if let Some(n) = n {
        assert!(n >= 2, "torsion rows need n of at least 2");
    }
    let (_, psl) = group_orders(d);
    let di = i128::from(d);
    let deg_delta = nonneg(frac(di - 1, 6, psl));
    let genus = nonneg(frac(di - 6, 12 * di, psl) + 1);
    let cusp_poles = nonneg(frac(1, di, psl));
    let non_cusp_poles = nonneg(frac(5 * di - 6, 12 * di, psl));
    let zeros = nonneg(frac(3 * (di - 2), 4 * di, psl));
    let (zeros_spin0, zeros_spin1) = if d % 2 == 1 {
        (
            Some(nonneg(frac(3 * (di - 3), 8 * di, psl))),
            Some(nonneg(frac(3 * (di - 1), 8 * di, psl))),
        )
    } else {
        (None, None)
    };
    let integral_points = nonneg(frac((di - 2) * (di - 3), 3 * di, psl));
    let (torsion_points, torsion_spin0, torsion_spin1) = match n {
        None => (None, None, None),
        Some(n) => {
            let (sln, _) = group_orders(n);
            let ni = i128::from(n);
            let total = nonneg(frac(di - 1, 3 * ni, psl * sln));
            if n % 2 == 1 {
                (
                    Some(total),
                    Some(nonneg(frac(di - 1, 12 * ni, psl * sln))),
                    Some(nonneg(frac(di - 1, 4 * ni, psl * sln))),
                )
            } else {
                (Some(total), None, None)
            }
        }
    };
    CountTable {
        d,
        n,
        deg_delta,
        genus,
        cusp_poles,
        non_cusp_poles,
        zeros,
        zeros_spin0,
        zeros_spin1,
        integral_points,
        torsion_points,
        torsion_spin0,
        torsion_spin1,
    }
}

impl CountTable {
    /// The labelled entries in display order, skipping undefined ones.
    pub fn entries(&self) -> Vec<(&'static str, u128)> {
        let mut out = vec![
            ("deg delta", self.deg_delta),
            ("genus", self.genus),
            ("cusp poles", self.cusp_poles),
            ("non-cusp poles", self.non_cusp_poles),
            ("zeros", self.zeros),
        ];
        if let (Some(a), Some(b)) = (self.zeros_spin0, self.zeros_spin1) {
            out.push(("zeros, spin 0", a));
            out.push(("zeros, spin 1", b));
        }
        out.push(("integral points", self.integral_points));
        if let Some(t) = self.torsion_points {
            out.push(("torsion points", t));
        }
        if let (Some(a), Some(b)) = (self.torsion_spin0, self.torsion_spin1) {
            out.push(("torsion points, spin 0", a));
            out.push(("torsion points, spin 1", b));
        }
        out
    }

    /// The structural identities every table satisfies; callers may assert
    /// this after building a table from scratch.
    pub fn identities_hold(&self) -> bool {
        let g = i128::try_from(self.genus).unwrap();
        let zeros = i128::try_from(self.zeros).unwrap();
        let cusp = i128::try_from(self.cusp_poles).unwrap();
        let non_cusp = i128::try_from(self.non_cusp_poles).unwrap();
        let deg = i128::try_from(self.deg_delta).unwrap();
        let integral = i128::try_from(self.integral_points).unwrap();
        let quad_diff = zeros - cusp - non_cusp == 4 * g - 4;
        let riemann_hurwitz = 2 - 2 * g == 2 * deg - 2 * zeros - integral;
        let zero_split = match (self.zeros_spin0, self.zeros_spin1) {
            (Some(a), Some(b)) => a + b == self.zeros,
            _ => true,
        };
        let torsion_split = match (self.torsion_spin0, self.torsion_spin1, self.torsion_points) {
            (Some(a), Some(b), Some(t)) => a + b == t,
            _ => true,
        };
        quad_diff && riemann_hurwitz && zero_split && torsion_split
    }
}

/// Size of the spin-`epsilon` class of the degree-`d`, torsion-`n` family:
/// `(2ε+1)·(d−1)/(12n)·|PSL₂(ℤ/d)|·|SL₂(ℤ/n)|`.
pub fn t_count(d: u64, n: u64, epsilon: u8) -> Result<u128, CountsError> {
    assert!(d >= 2 && n > 1, "spin classes live in d ≥ 2, n > 1 families");
    assert!(epsilon <= 1, "spin takes the values 0 and 1");
    if n % 2 == 0 {
        return Err(CountsError::EvenTorsion { n });
    }
    let (_, psl) = group_orders(d);
    let (sln, _) = group_orders(n);
    Ok(nonneg(frac(
        i128::from(2 * epsilon + 1) * (i128::from(d) - 1),
        12 * i128::from(n),
        psl * sln,
    )))
}

/// The printed total of reduced genus-2 tilings by `N` squares:
/// `(N−2)(4N−3)/12·|PSL₂(ℤ/N)| + Σ_{d|N, d≠N} (d−1)d/(3N)·|PSL₂(ℤ/d)|·|SL₂(ℤ/(N/d))|`.
///
/// Evaluated verbatim.  The first term equals `N` times the combined size
/// of the double-zero and torsion-1 families of degree `N`, while each
/// divisor term equals the size of the degree-`d`, torsion-`N/d` family on
/// the nose; the comparison test records this measured relationship.
pub fn reduced_total(big_n: u64) -> u128 {
    assert!(big_n >= 3, "the total starts at three squares");
    let ni = i128::from(big_n);
    let (_, psl_n) = group_orders(big_n);
    let mut total = nonneg(frac((ni - 2) * (4 * ni - 3), 12, psl_n));
    for d in 2..big_n {
        if big_n % d != 0 {
            continue;
        }
        let (_, psl_d) = group_orders(d);
        let (sl_q, _) = group_orders(big_n / d);
        let di = i128::from(d);
        total += nonneg(frac(di * (di - 1), 3 * ni, psl_d * sl_q));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force matrix count over ℤ/m: all 2×2 matrices of determinant
    /// one, and the same modulo negation.
    fn brute_orders(m: u64) -> (u128, u128) {
        let mut sl = 0u128;
        let mut seen_pairs = std::collections::BTreeSet::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for e in 0..m {
                        if (a * e + m * m - (b * c) % (m * m)) % m == 1 % m {
                            sl += 1;
                            let neg = |x: u64| (m - x) % m;
                            let mat = [a, b, c, e];
                            let neg_mat = [neg(a), neg(b), neg(c), neg(e)];
                            seen_pairs.insert(std::cmp::min(mat, neg_mat));
                        }
                    }
                }
            }
        }
        (sl, seen_pairs.len() as u128)
    }

    #[test]
    fn group_orders_match_brute_force_matrix_counts() {
        for m in 2..=7 {
            assert_eq!(group_orders(m), brute_orders(m), "modulus {m}");
        }
    }

    #[test]
    fn group_orders_match_known_values() {
        assert_eq!(group_orders(2), (6, 6));
        assert_eq!(group_orders(5), (120, 60));
        assert_eq!(group_orders(7), (336, 168));
    }

    #[test]
    fn pillowcase_discriminant_has_degree_one() {
        assert_eq!(table(2, None).deg_delta, 1);
    }

    #[test]
    fn degree_five_curve_has_twelve_cusps() {
        assert_eq!(table(5, None).cusp_poles, 12);
    }

    #[test]
    fn degree_seven_census_matches_hand_computations() {
        let t = table(7, None);
        assert_eq!(t.genus, 3);
        assert_eq!(t.cusp_poles, 24);
        assert_eq!(t.non_cusp_poles, 58);
        assert_eq!(t.zeros, 90);
        assert_eq!(t.integral_points, 160);
        assert!(t.identities_hold());
        assert_eq!(t.zeros - t.cusp_poles - t.non_cusp_poles, 4 * t.genus - 4);
    }

    #[test]
    fn identities_hold_across_the_desk_range() {
        for d in 2..=23 {
            assert!(table(d, None).identities_hold(), "d = {d}");
            for n in 2..=9 {
                let t = table(d, Some(n));
                assert!(t.identities_hold(), "d = {d}, n = {n}");
                if n % 2 == 1 {
                    assert_eq!(
                        t.torsion_spin0.unwrap() * 3,
                        t.torsion_spin1.unwrap(),
                        "spin ratio at d = {d}, n = {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn spin_class_sizes_match_hand_computations() {
        assert_eq!(t_count(3, 5, 0), Ok(48));
        assert_eq!(t_count(3, 5, 1), Ok(144));
        assert_eq!(t_count(2, 3, 0), Ok(4));
        assert_eq!(t_count(2, 4, 0), Err(CountsError::EvenTorsion { n: 4 }));
    }

    #[test]
    fn spin_classes_sum_to_the_torsion_count() {
        for d in 2..=9 {
            for n in [3u64, 5, 7, 9] {
                let total = table(d, Some(n)).torsion_points.unwrap();
                assert_eq!(
                    t_count(d, n, 0).unwrap() + t_count(d, n, 1).unwrap(),
                    total
                );
            }
        }
    }

    #[test]
    fn reduced_totals_match_hand_evaluations() {
        // (4−2)(13)/12·24 + (1·2)/12·6·6 = 52 + 6
        assert_eq!(reduced_total(4), 58);
        // (5−2)(17)/12·60 = 255, no proper divisors beyond 1
        assert_eq!(reduced_total(5), 255);
        // (6−2)(21)/12·72 + 16 + 24
        assert_eq!(reduced_total(6), 544);
    }
}
