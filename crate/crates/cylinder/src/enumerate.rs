//! Enumeration of square-tiled surfaces by scanning tiling points.
//!
//! Every reduced pair of type `(d, n)` is the image of a torsion-`n` point
//! of the tiling of X(d) under a member of its marking family, and the
//! Hermite form of its period lattice exhibits one such member.  Scanning
//! all points with denominator `n` and applying every family member is
//! therefore exhaustive; duplicates collapse in the canonical form.

use crate::assemble::assemble;
use crate::bridge::{marking_family, transform_coords};
use crate::coords::{CylCoords, CylModel, SurfPoint};
use crate::CylError;
use exactnum::rat;
use num_integer::Integer;
use origami::{Origami, Stratum};
use std::collections::BTreeSet;

/// Default cap on the square count `d·n` of the enumerated surfaces.
pub const DEFAULT_SQUARE_BUDGET: u64 = 200;

/// All reduced pairs of type `(d, n)` for torsion `n ≥ 1`, or all reduced
/// double-zero pairs of degree `d` for `n = 0`, with the default budget.
pub fn enumerate(d: u64, n: u64) -> Result<BTreeSet<Origami>, CylError> {
    enumerate_with_budget(d, n, DEFAULT_SQUARE_BUDGET)
}

/// As [`enumerate`], refusing to build surfaces of more than `cap` squares.
pub fn enumerate_with_budget(d: u64, n: u64, cap: u64) -> Result<BTreeSet<Origami>, CylError> {
    let needed = d * n.max(1);
    if needed > cap {
        return Err(CylError::BudgetExceeded { needed, cap });
    }
    let model = CylModel::new(d);
    let denom = n.max(1);
    let mut out = BTreeSet::new();
    for (ci, spec) in model.cyls.iter().enumerate() {
        for alpha in 0..spec.circumference() * denom {
            for beta in 0..=spec.height() * denom {
                // Only points of exact denominator `denom` have torsion `n`.
                if denom > 1 && (alpha % denom).gcd(&(beta % denom)).gcd(&denom) != 1 {
                    continue;
                }
                let p = SurfPoint {
                    cyl: ci,
                    x: rat(alpha as i64, denom as i64),
                    y: rat(beta as i64, denom as i64),
                };
                out.extend(reduced_images(&model.coords(&p), n));
            }
        }
    }
    Ok(out)
}

/// The canonical reduced pairs of type `(d, n)` marked by one tiling point
/// (with `n = 0` selecting the degenerate double-zero pairs of degree `d`).
///
/// Every member of the point's marking family is assembled and the images
/// that validate as reduced pairs of the requested type are collected; on
/// the locus of exact torsion `n` the result is a single surface.
pub fn reduced_images(c: &CylCoords, n: u64) -> BTreeSet<Origami> {
    let d = c.d();
    let fam = marking_family(c);
    let mut out = BTreeSet::new();
    for &(pp, qq, rr) in &fam.members {
        let Some(data) = transform_coords(c, pp, qq, rr) else {
            debug_assert!(false, "family members produce integral data");
            continue;
        };
        if data.total_squares() == 0 {
            continue;
        }
        let o = assemble(&data);
        let Ok(sig) = o.validate() else { continue };
        let keep = if n == 0 {
            sig.stratum == Stratum::H2 && sig.degree == d && sig.reduced
        } else {
            sig.stratum == Stratum::H11 && sig.degree == d && sig.torsion == n && sig.reduced
        };
        if keep {
            out.insert(o.canonical());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_is_enforced() {
        assert_eq!(
            enumerate_with_budget(29, 7, 200),
            Err(CylError::BudgetExceeded {
                needed: 203,
                cap: 200
            })
        );
        assert!(enumerate_with_budget(2, 2, 4).is_ok());
    }

    #[test]
    fn smallest_families() {
        assert_eq!(enumerate(2, 2).unwrap().len(), 6);
        assert_eq!(enumerate(3, 0).unwrap().len(), 3);
        assert_eq!(enumerate(2, 1).unwrap().len(), 0);
    }

    #[test]
    fn enumerated_pairs_have_the_requested_type() {
        for o in enumerate(3, 2).unwrap() {
            let sig = o.validate().unwrap();
            assert_eq!(sig.stratum, Stratum::H11);
            assert_eq!((sig.degree, sig.torsion), (3, 2));
            assert!(sig.reduced);
            assert_eq!(o.n_squares(), 6);
        }
        for o in enumerate(4, 0).unwrap() {
            let sig = o.validate().unwrap();
            assert_eq!(sig.stratum, Stratum::H2);
            assert_eq!(sig.degree, 4);
            assert_eq!(o.n_squares(), 4);
        }
    }
}
