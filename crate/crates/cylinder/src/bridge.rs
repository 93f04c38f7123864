//! The bridge between tiling points and permutation pairs.
//!
//! A point with coordinates `(w, s, t, h)` and torsion `n` becomes a pair of
//! permutations on `d·n` squares after an integral re-marking: a matrix
//! `P = [[p, q], [0, r]]` of determinant `n` carrying `ℤ² + ℤρ` onto `ℤ²`,
//! where `ρ = (t3, -h3)` is the relative period.  Conversely, a reduced
//! three-cylinder pair is measured back to the point it marks.

use crate::assemble::{assemble, AssemblyData};
use crate::coords::CylCoords;
use crate::CylError;
use exactnum::{lattice_span, rat_mod_pos, Int, Rational};
use num_traits::Signed;
use origami::{Origami, Stratum};

fn ru(x: u64) -> Rational {
    Rational::from_integer(Int::from(x))
}

fn to_u64(x: &Int) -> u64 {
    x.try_into().expect("value fits in u64")
}

/// The integral re-markings available at a tiling point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkingFamily {
    /// Torsion order `n` of the relative period modulo ℤ².
    pub torsion: u64,
    /// Hermite entries `(a, b, c)` of the scaled lattice `n·(ℤ² + ℤρ)`,
    /// with column basis `(a, 0), (b, c)`.
    pub lattice: (u64, u64, u64),
    /// Upper-triangular members `(p, q, r)` meaning `[[p, q], [0, r]]`, in
    /// ascending shear order; never empty.  The first member is the
    /// preferred choice of [`to_origami`].
    pub members: Vec<(u64, u64, u64)>,
}

/// Compute the re-markings of a point: all upper-triangular `P` of
/// determinant `n` with `P·(ℤ² + ℤρ) = ℤ²`, listed with the Hermite-reduced
/// shear entries `q < c`; when no member has `q < c`, the single row-reduced
/// representative (`q < a`) stands in.
pub fn marking_family(coords: &CylCoords) -> MarkingFamily {
    let n = coords.torsion();
    let scale = |x: &Rational| -> Int {
        let y = ru(n) * x;
        assert!(y.is_integer(), "n·ρ is integral by the choice of n");
        y.to_integer()
    };
    let gens = [
        (Int::from(n), Int::from(0u64)),
        (Int::from(0u64), Int::from(n)),
        (scale(&coords.t3), -scale(&coords.h)),
    ];
    let lam = lattice_span(&gens).expect("scaled marking lattice has rank two");
    let (la, lb, lc) = lam.hnf_entries();
    let (a, b, c) = (to_u64(&la), to_u64(&lb), to_u64(&lc));
    debug_assert_eq!(a * c, n);
    // Members are [[c, q], [0, a]] with q ≡ -b (mod a).
    let q0 = (a - b % a) % a;
    let mut members: Vec<(u64, u64, u64)> = (q0..c)
        .step_by(a as usize)
        .map(|q| (c, q, a))
        .collect();
    if members.is_empty() {
        members.push((c, q0, a));
    }
    MarkingFamily {
        torsion: n,
        lattice: (a, b, c),
        members,
    }
}

/// Apply the re-marking `[[p, q], [0, r]]` to the coordinates: widths scale
/// by `p`, heights by `r`, and the twists shear by `q` times the heights.
/// Returns `None` when some entry fails to be a non-negative integer.
pub fn transform_coords(coords: &CylCoords, p: u64, q: u64, r: u64) -> Option<AssemblyData> {
    let (rp, rq, rr) = (ru(p), ru(q), ru(r));
    let w1 = p * coords.w1;
    let w2 = p * coords.w2;
    let w3 = w1 + w2;
    let as_u64 = |x: &Rational| -> Option<u64> {
        if x.is_integer() && !x.is_negative() {
            (&x.to_integer()).try_into().ok()
        } else {
            None
        }
    };
    let (hr1, hr2, hr3) = (coords.h1(), coords.h2(), coords.h3());
    let h1 = as_u64(&(&rr * &hr1))?;
    let h2 = as_u64(&(&rr * &hr2))?;
    let h3 = as_u64(&(&rr * &hr3))?;
    let t1 = as_u64(&rat_mod_pos(&(&rp * &coords.t1 + &rq * &hr1), &ru(w1)))?;
    let t2 = as_u64(&rat_mod_pos(&(&rp * &coords.t2 + &rq * &hr2), &ru(w2)))?;
    let t3 = as_u64(&rat_mod_pos(&(&rp * &coords.t3 - &rq * &hr3), &ru(w3)))?;
    Some(AssemblyData {
        w1,
        h1,
        w2,
        h2,
        h3,
        t1,
        t2,
        t3,
    })
}

/// Build the canonical permutation pair marking a point of the tiling,
/// using the preferred member of the marking family.
pub fn to_origami(coords: &CylCoords) -> Result<Origami, CylError> {
    coords.admissible().map_err(CylError::Inadmissible)?;
    let fam = marking_family(coords);
    let (p, q, r) = fam.members[0];
    let data = transform_coords(coords, p, q, r)
        .ok_or_else(|| CylError::Inadmissible("re-marked data is not integral".into()))?;
    let o = assemble(&data);
    if let Err(e) = o.validate() {
        return Err(CylError::NonGeneric(format!(
            "assembled surface is invalid: {e}"
        )));
    }
    Ok(o.canonical())
}

/// Measure the horizontal cylinder structure of a reduced pair with two
/// simple cone points and recover the tiling point it marks.
///
/// Succeeds exactly on the generic three-cylinder shape; single- and
/// double-cylinder pairs (markings of boundary points) are rejected with
/// [`CylError::NonGeneric`].
pub fn from_origami(o: &Origami) -> Result<CylCoords, CylError> {
    let fail = |m: String| CylError::NonGeneric(m);
    let sig = o
        .validate()
        .map_err(|e| CylError::NonGeneric(format!("not a valid surface: {e}")))?;
    if sig.stratum != Stratum::H11 {
        return Err(fail("expected two simple cone points".into()));
    }
    if !sig.reduced {
        return Err(fail("expected a reduced surface".into()));
    }
    let n_sq = o.n_squares();
    let hp = o.h();
    let vp = o.v();
    let vi = o.v_inv();
    let k = o.commutator();

    // Horizontal rows are the cycles of h, stored in h-order.
    let mut row_of = vec![usize::MAX; n_sq];
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for start in 0..n_sq {
        if row_of[start] != usize::MAX {
            continue;
        }
        let mut row = Vec::new();
        let mut i = start;
        loop {
            row_of[i] = rows.len();
            row.push(i);
            i = hp[i];
            if i == start {
                break;
            }
        }
        rows.push(row);
    }
    // The leaf above a row is singular when a cone corner sits on it.
    let singular_above: Vec<bool> = rows
        .iter()
        .map(|row| row.iter().any(|&i| k[vp[i]] != vp[i]))
        .collect();

    // Merge rows across regular leaves into cylinders.
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut parent: Vec<usize> = (0..rows.len()).collect();
    for r in 0..rows.len() {
        if !singular_above[r] {
            let up = row_of[vp[rows[r][0]]];
            let (x, y) = (find(&mut parent, r), find(&mut parent, up));
            parent[x] = y;
        }
    }
    let comp_ids: Vec<usize> = (0..rows.len())
        .map(|r| find(&mut parent, r))
        .collect();
    let mut comps: Vec<usize> = comp_ids.clone();
    comps.sort_unstable();
    comps.dedup();
    if comps.len() != 3 {
        return Err(fail(format!(
            "surface splits into {} horizontal cylinders, not three",
            comps.len()
        )));
    }
    let mut comp_slot = vec![usize::MAX; rows.len()];
    for (s, &c) in comps.iter().enumerate() {
        comp_slot[c] = s;
    }

    // Rows of each cylinder from bottom to top.
    let mut stacks: Vec<Vec<usize>> = Vec::new();
    for &c in &comps {
        let members: Vec<usize> = (0..rows.len()).filter(|&r| comp_ids[r] == c).collect();
        let tops: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&r| singular_above[r])
            .collect();
        if tops.len() != 1 {
            return Err(fail(
                "cylinder does not have a single singular top leaf".into(),
            ));
        }
        let top = tops[0];
        let width = rows[top].len();
        if members.iter().any(|&r| rows[r].len() != width) {
            return Err(fail("rows of unequal width inside one cylinder".into()));
        }
        let mut stack = vec![top];
        let mut cur = top;
        loop {
            let below = row_of[vi[rows[cur][0]]];
            if singular_above[below] {
                break;
            }
            stack.push(below);
            cur = below;
        }
        stack.reverse();
        if stack.len() != members.len() {
            return Err(fail("cylinder rows do not stack".into()));
        }
        stacks.push(stack);
    }

    // The wrap cylinder is the widest; the other two sit above it.
    let widths: Vec<usize> = stacks.iter().map(|s| rows[s[0]].len()).collect();
    let i3 = (0..3).max_by_key(|&i| widths[i]).expect("three cylinders");
    let w3m = widths[i3];
    let others: Vec<usize> = (0..3).filter(|&i| i != i3).collect();
    if widths[others[0]] + widths[others[1]] != w3m {
        return Err(fail("widths do not satisfy w3 = w1 + w2".into()));
    }

    // Cone corners on the seam (the top leaf of the wrap cylinder).
    let top3: Vec<usize> = rows[*stacks[i3].last().expect("nonempty stack")].clone();
    let cone_pos: Vec<usize> = (0..w3m)
        .filter(|&j| k[vp[top3[j]]] != vp[top3[j]])
        .collect();
    if cone_pos.len() != 2 {
        return Err(fail(format!(
            "{} cone corners on the seam, not two",
            cone_pos.len()
        )));
    }
    let (za, zb) = (cone_pos[0], cone_pos[1]);
    let slot_of = |sq: usize| comp_slot[comp_ids[row_of[sq]]];
    let s1a = slot_of(vp[top3[za]]);
    let s2a = slot_of(vp[top3[zb]]);
    if s1a == s2a || s1a == i3 || s2a == i3 {
        return Err(fail(
            "seam arcs do not bound two distinct upper cylinders".into(),
        ));
    }
    let w1m = zb - za;
    let w2m = w3m - w1m;
    if widths[s1a] != w1m || widths[s2a] != w2m {
        return Err(fail(
            "upper cylinder widths do not match the seam arcs".into(),
        ));
    }

    // Columns: the wrap cylinder is anchored at the first cone corner; the
    // upper cylinders at the squares over their seam arcs.
    let mut col = vec![usize::MAX; n_sq];
    for (j, &sq) in top3.iter().enumerate() {
        col[sq] = (j + w3m - za) % w3m;
    }
    let st3 = stacks[i3].clone();
    for idx in (1..st3.len()).rev() {
        for &sq in &rows[st3[idx]] {
            col[vi[sq]] = col[sq];
        }
    }
    let b1 = stacks[s1a][0];
    let b2 = stacks[s2a][0];
    for &sq in &top3 {
        let jj = col[sq];
        let expect_row = if jj < w1m { b1 } else { b2 };
        if row_of[vp[sq]] != expect_row {
            return Err(fail(
                "seam does not glue onto the bottoms of the upper cylinders".into(),
            ));
        }
    }
    for (slot, anchor) in [(s1a, za), (s2a, zb)] {
        let mut cur = vp[top3[anchor]];
        for u in 0..widths[slot] {
            col[cur] = u;
            cur = hp[cur];
        }
        let st = &stacks[slot];
        for idx in 0..st.len() - 1 {
            for &sq in &rows[st[idx]] {
                col[vp[sq]] = col[sq];
            }
        }
    }

    // Measure the wrap return of an upper cylinder: a single shifted arc,
    // cut where the column count restarts.
    let bot3 = st3[0];
    let measure = |slot: usize| -> Result<(usize, usize), CylError> {
        let w = widths[slot];
        let top = *stacks[slot].last().expect("nonempty stack");
        let mut m = vec![usize::MAX; w];
        for &sq in &rows[top] {
            let tgt = vp[sq];
            if row_of[tgt] != bot3 {
                return Err(CylError::NonGeneric(
                    "upper cylinder top does not return to the wrap".into(),
                ));
            }
            m[col[sq]] = col[tgt];
        }
        let cuts: Vec<usize> = (0..w)
            .filter(|&u| m[u] != (m[(u + w - 1) % w] + 1) % w3m)
            .collect();
        if cuts.len() != 1 {
            return Err(CylError::NonGeneric(
                "wrap return is not a single shifted arc".into(),
            ));
        }
        Ok((cuts[0], m[cuts[0]]))
    };
    let (ct1, ct3) = measure(s1a)?;
    let (ct2, t3b) = measure(s2a)?;
    if t3b != (ct3 + w1m) % w3m {
        return Err(fail(
            "wrap images of the upper cylinders are inconsistent".into(),
        ));
    }
    let (ch1, ch2, ch3) = (stacks[s1a].len(), stacks[s2a].len(), st3.len());

    // Undo the marking: the Hermite form of the period lattice.
    let (pa, pb, pc) = o.period_lattice().hnf_entries();
    let (a, b, c) = (to_u64(&pa), to_u64(&pb), to_u64(&pc));
    debug_assert_eq!(a * c, sig.torsion);
    let (w1m, w2m) = (w1m as u64, w2m as u64);
    if w1m % a != 0 || w2m % a != 0 {
        return Err(fail(
            "cylinder widths are not multiples of the horizontal period".into(),
        ));
    }
    let w1 = w1m / a;
    let w2 = w2m / a;
    let w3 = w1 + w2;
    let (ra, rb, rc) = (ru(a), ru(b), ru(c));
    let h1 = ru(ch1 as u64) / &rc;
    let h2 = ru(ch2 as u64) / &rc;
    let h3 = ru(ch3 as u64) / &rc;
    let s1 = &h1 + &h3;
    let s2 = &h2 + &h3;
    if !s1.is_integer() || !s2.is_integer() {
        return Err(fail("column sums are not integral".into()));
    }
    let t1 = rat_mod_pos(&((ru(ct1 as u64) - &rb * &h1) / &ra), &ru(w1));
    let t2 = rat_mod_pos(&((ru(ct2 as u64) - &rb * &h2) / &ra), &ru(w2));
    let t3 = rat_mod_pos(&((ru(ct3 as u64) + &rb * &h3) / &ra), &ru(w3));
    let coords = CylCoords {
        w1,
        s1: to_u64(&s1.to_integer()),
        w2,
        s2: to_u64(&s2.to_integer()),
        t1,
        t2,
        t3,
        h: h3,
    };
    if let Err(e) = coords.admissible() {
        return Err(fail(format!("measured coordinates are not admissible: {e}")));
    }
    Ok(coords.canonical())
}
