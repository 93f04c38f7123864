//! Square-tiled surfaces of genus 2 as permutation pairs.
//!
//! A surface on `N` unit squares is encoded by two permutations of
//! `{0, …, N-1}`: `h(i)` is the square to the right of `i`, `v(i)` the square
//! above `i` (y grows upward here).  Surfaces in the stratum H(1,1) carry a
//! type `(d, n)` — degree `d` over the torus that absolutely periods span,
//! torsion order `n` of the relative period; H(2) surfaces are typed `(d, 0)`.

use std::collections::VecDeque;
use std::fmt;

use exactnum::{int, Lattice2, Letter, SL2Word};
use serde::{Deserialize, Serialize};

/// Stratum of a genus-2 translation surface: two simple zeros or one double zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stratum {
    H11,
    H2,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stratum::H11 => write!(f, "H(1,1)"),
            Stratum::H2 => write!(f, "H(2)"),
        }
    }
}

/// Arithmetic type of a surface: degree over the period torus, torsion order
/// of the relative period (0 in H(2)), and the two saturation flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeSig {
    pub degree: u64,
    pub torsion: u64,
    pub stratum: Stratum,
    /// Relative periods span the full integer lattice.
    pub reduced: bool,
    /// Absolute periods span the full integer lattice.
    pub primitive: bool,
}

impl fmt::Display for TypeSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} type ({}, {}){}{}",
            self.stratum,
            self.degree,
            self.torsion,
            if self.reduced { "" } else { ", not reduced" },
            if self.primitive { ", primitive" } else { "" },
        )
    }
}

/// Parity of the spin structure together with the integer-Weierstrass-point count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinValue {
    pub epsilon: u8,
    pub iwp: u8,
}

/// Kind of a Weierstrass point relative to the square grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WpKind {
    /// A vertex of the tiling (fixed class of squares around a corner).
    Vertex,
    /// Midpoint of a vertical edge (between `k` and `h(k)`).
    RightMid,
    /// Midpoint of a horizontal edge (between `k` and `v(k)`).
    TopMid,
    /// Center of a square.
    Center,
}

/// One of the six Weierstrass points.  `pos2` is twice the developed position
/// of the point (so it is always an integer vector), anchored at the
/// bottom-left corner of square 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassPoint {
    pub kind: WpKind,
    pub square: usize,
    pub pos2: (i64, i64),
}

/// The affine involution data of a genus-2 surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeierstrassData {
    /// The square-level involution `sigma`.
    pub involution: Vec<usize>,
    /// The six fixed points, sorted by (kind, square).
    pub points: Vec<WeierstrassPoint>,
    /// Counts of Weierstrass points over the four fixed classes of the
    /// induced elliptic involution, sorted descending.
    pub profile: [usize; 4],
    /// Whether the involution exchanges the two zeros (always true in H(1,1),
    /// false in H(2) where the single zero is fixed).
    pub zeros_swapped: bool,
}

/// Developed presentation: integer position of each square's bottom-left
/// corner on a spanning tree, plus the lattice of absolute periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Developed {
    pub dev: Vec<(i64, i64)>,
    pub per: Lattice2,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrigamiError {
    #[error("malformed permutation data: {0}")]
    MalformedPermutation(String),
    #[error("surface is not connected")]
    NotConnected,
    #[error("commutator branching is [{0}], not a genus-2 pattern")]
    BadBranching(String),
    #[error("surface is not reduced ({0})")]
    NotReduced(TypeSig),
    #[error("no affine involution with derivative -I and six fixed points")]
    InvolutionNotFound,
    #[error("spin parity undefined: {0}")]
    SpinUndefined(String),
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: u64, got: u64 },
    #[error("projection degenerates: {0}")]
    Degenerate(String),
}

/// A square-tiled surface given by the right-neighbor and above-neighbor
/// permutations.  Equality is labelled equality; compare [`Origami::canonical`]
/// forms to test isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Origami {
    h: Vec<usize>,
    v: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct OrigamiJson {
    n_squares: usize,
    h: Vec<usize>,
    v: Vec<usize>,
}

impl Serialize for Origami {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        OrigamiJson {
            n_squares: self.h.len(),
            h: self.h.clone(),
            v: self.v.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Origami {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = OrigamiJson::deserialize(d)?;
        if raw.n_squares != raw.h.len() || raw.n_squares != raw.v.len() {
            return Err(serde::de::Error::custom("n_squares does not match array lengths"));
        }
        Origami::new(raw.h, raw.v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={:?} v={:?}", self.h, self.v)
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| {
        x < seen.len() && !std::mem::replace(&mut seen[x], true)
    })
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

/// `compose(f, g)[i] = f[g[i]]` (apply `g` first).
fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

/// Cycles of a permutation, each sorted to start at its least element,
/// listed by least element.
fn cycles_of(p: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut cur = p[start];
        while cur != start {
            seen[cur] = true;
            cyc.push(cur);
            cur = p[cur];
        }
        out.push(cyc);
    }
    out
}

impl Origami {
    pub fn new(h: Vec<usize>, v: Vec<usize>) -> Result<Self, OrigamiError> {
        if h.is_empty() || h.len() != v.len() {
            return Err(OrigamiError::MalformedPermutation(format!(
                "lengths {} and {}",
                h.len(),
                v.len()
            )));
        }
        if !is_permutation(&h) || !is_permutation(&v) {
            return Err(OrigamiError::MalformedPermutation(
                "arrays are not permutations".into(),
            ));
        }
        Ok(Origami { h, v })
    }

    pub fn n_squares(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn v(&self) -> &[usize] {
        &self.v
    }

    pub fn h_inv(&self) -> Vec<usize> {
        inverse_perm(&self.h)
    }

    pub fn v_inv(&self) -> Vec<usize> {
        inverse_perm(&self.v)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_squares();
        let hi = self.h_inv();
        let vi = self.v_inv();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for j in [self.h[i], self.v[i], hi[i], vi[i]] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == n
    }

    /// The commutator `K = v h v⁻¹ h⁻¹` (apply `h⁻¹` first).  Its nontrivial
    /// cycles are the cone points: each cycle of length `m` is a vertex of
    /// angle `2πm`, and `K(i)` walks the squares whose bottom-left corner is
    /// that vertex.
    pub fn commutator(&self) -> Vec<usize> {
        let hi = self.h_inv();
        let vi = self.v_inv();
        (0..self.n_squares())
            .map(|i| self.v[self.h[vi[hi[i]]]])
            .collect()
    }

    /// All vertex classes of the tiling, as cycles of the commutator
    /// (fixed squares are regular vertices).
    pub fn vertex_classes(&self) -> Vec<Vec<usize>> {
        cycles_of(&self.commutator())
    }

    /// The cone-point classes (commutator cycles of length > 1), by least square.
    pub fn zero_classes(&self) -> Vec<Vec<usize>> {
        self.vertex_classes()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    /// Develop the surface along a breadth-first spanning tree from square 0
    /// and return each square's corner position plus the absolute period
    /// lattice (spanned by the holonomy defects of non-tree edges).
    ///
    /// Panics if the surface is disconnected or its periods are degenerate;
    /// call [`Origami::validate`] first.
    pub fn develop(&self) -> Developed {
        let n = self.n_squares();
        let mut dev = vec![(i64::MAX, i64::MAX); n];
        dev[0] = (0, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = dev[i];
            for (j, pos) in [(self.h[i], (x + 1, y)), (self.v[i], (x, y + 1))] {
                if dev[j].0 == i64::MAX {
                    dev[j] = pos;
                    queue.push_back(j);
                }
            }
        }
        // Inverse edges reach everything forward edges do, since permutations
        // have finite order; still guard against a disconnected input.
        assert!(
            dev.iter().all(|p| p.0 != i64::MAX),
            "develop requires a connected surface"
        );
        let mut defects = Vec::new();
        for i in 0..n {
            let (x, y) = dev[i];
            let th = dev[self.h[i]];
            let dh = (x + 1 - th.0, y - th.1);
            if dh != (0, 0) {
                defects.push((int(dh.0), int(dh.1)));
            }
            let tv = dev[self.v[i]];
            let dv = (x - tv.0, y + 1 - tv.1);
            if dv != (0, 0) {
                defects.push((int(dv.0), int(dv.1)));
            }
        }
        let per = exactnum::lattice_span(&defects)
            .expect("absolute periods of a branched square-tiled surface span rank 2");
        Developed { dev, per }
    }

    /// The absolute period lattice (HNF sublattice of ℤ²).
    pub fn period_lattice(&self) -> Lattice2 {
        self.develop().per
    }

    /// Classify the surface: connectivity, genus-2 branching, stratum,
    /// type `(d, n)`, and the reduced/primitive flags.  Non-reduced surfaces
    /// are reported through `Err(NotReduced(sig))` where `sig` carries the
    /// type of the reduced model.
    pub fn validate(&self) -> Result<TypeSig, OrigamiError> {
        if !self.is_connected() {
            return Err(OrigamiError::NotConnected);
        }
        let k = self.commutator();
        let mut lens: Vec<usize> = cycles_of(&k)
            .into_iter()
            .map(|c| c.len())
            .filter(|&l| l > 1)
            .collect();
        lens.sort_unstable();
        let stratum = match lens.as_slice() {
            [] => return Err(OrigamiError::BadBranching("unbranched".into())),
            [2, 2] => Stratum::H11,
            [3] => Stratum::H2,
            other => {
                let s = other.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
                return Err(OrigamiError::BadBranching(s));
            }
        };
        let n_sq = self.n_squares() as u64;
        let devd = self.develop();
        let unit = Lattice2::unit();
        match stratum {
            Stratum::H2 => {
                let reduced = devd.per == unit;
                if !reduced {
                    let m = exactnum::lattice_index(&devd.per, &unit)
                        .expect("period lattice is a sublattice of ZxZ");
                    let m: u64 = m.try_into().expect("index fits in u64");
                    return Err(OrigamiError::NotReduced(TypeSig {
                        degree: n_sq / m,
                        torsion: 0,
                        stratum,
                        reduced: false,
                        primitive: false,
                    }));
                }
                Ok(TypeSig {
                    degree: n_sq,
                    torsion: 0,
                    stratum,
                    reduced: true,
                    primitive: true,
                })
            }
            Stratum::H11 => {
                let zeros = self.zero_classes();
                let (r1, r2) = (zeros[0][0], zeros[1][0]);
                let rho = (
                    int(devd.dev[r2].0 - devd.dev[r1].0),
                    int(devd.dev[r2].1 - devd.dev[r1].1),
                );
                let rper = devd
                    .per
                    .join(std::slice::from_ref(&rho))
                    .expect("relative periods keep rank 2");
                let reduced = rper == unit;
                let per_det: u64 = devd
                    .per
                    .det()
                    .try_into()
                    .expect("period index fits in u64");
                if !reduced {
                    let m: u64 = exactnum::lattice_index(&rper, &unit)
                        .expect("relative periods are integral")
                        .try_into()
                        .expect("index fits in u64");
                    let n_red = per_det / m;
                    return Err(OrigamiError::NotReduced(TypeSig {
                        degree: n_sq / (m * n_red),
                        torsion: n_red,
                        stratum,
                        reduced: false,
                        primitive: false,
                    }));
                }
                debug_assert_eq!(
                    exactnum::torsion_order(
                        &exactnum::GaussVec::new(
                            exactnum::Rational::from_integer(rho.0.clone()),
                            exactnum::Rational::from_integer(rho.1.clone()),
                        ),
                        &devd.per
                    ),
                    int(per_det as i64)
                );
                debug_assert_eq!(n_sq % per_det, 0);
                Ok(TypeSig {
                    degree: n_sq / per_det,
                    torsion: per_det,
                    stratum,
                    reduced: true,
                    primitive: per_det == 1,
                })
            }
        }
    }

    /// Lexicographically least relabeling over all breadth-first labelings
    /// (one per base square; neighbors are labelled right-then-above).
    /// Panics on disconnected input.
    pub fn canonical(&self) -> Origami {
        let n = self.n_squares();
        let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
        let mut label = vec![usize::MAX; n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        for base in 0..n {
            label.iter_mut().for_each(|l| *l = usize::MAX);
            order.clear();
            label[base] = 0;
            order.push(base);
            let mut cursor = 0;
            while cursor < order.len() {
                let old = order[cursor];
                cursor += 1;
                for j in [self.h[old], self.v[old]] {
                    if label[j] == usize::MAX {
                        label[j] = order.len();
                        order.push(j);
                    }
                }
            }
            assert_eq!(order.len(), n, "canonical requires a connected surface");
            let hh: Vec<usize> = order.iter().map(|&old| label[self.h[old]]).collect();
            let vv: Vec<usize> = order.iter().map(|&old| label[self.v[old]]).collect();
            let cand = (hh, vv);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        let (h, v) = best.unwrap();
        Origami { h, v }
    }

    /// Apply one generator (no relabeling).
    fn apply_letter(&self, letter: Letter) -> Origami {
        match letter {
            Letter::S => Origami {
                h: self.h.clone(),
                v: compose(&self.v, &self.h_inv()),
            },
            Letter::SInv => Origami {
                h: self.h.clone(),
                v: compose(&self.v, &self.h),
            },
            Letter::R => Origami {
                h: self.v_inv(),
                v: self.h.clone(),
            },
            Letter::RInv => Origami {
                h: self.v.clone(),
                v: self.h_inv(),
            },
        }
    }

    /// Act by a word in the generators (letters apply right to left, like a
    /// matrix product).  The result is canonicalized.
    pub fn act(&self, word: &SL2Word) -> Origami {
        let mut cur = self.clone();
        for &letter in word.letters().iter().rev() {
            cur = cur.apply_letter(letter);
        }
        cur.canonical()
    }

    /// Act by a single generator; result canonicalized.
    pub fn act_letter(&self, letter: Letter) -> Origami {
        self.apply_letter(letter).canonical()
    }

    /// Find the affine involution with derivative `-I` and its six fixed
    /// points.  Requires a valid genus-2 surface.
    pub fn weierstrass(&self) -> Result<WeierstrassData, OrigamiError> {
        let sig = self.validate()?;
        let n = self.n_squares();
        let hi = self.h_inv();
        let vi = self.v_inv();
        let devd = self.develop();
        let classes = self.vertex_classes();
        // class_of[i] = index of the vertex class whose corner walk contains i
        let mut class_of = vec![0usize; n];
        for (ci, c) in classes.iter().enumerate() {
            for &i in c {
                class_of[i] = ci;
            }
        }

        let mut found: Option<(Vec<usize>, Vec<WeierstrassPoint>)> = None;
        'cand: for j in 0..n {
            // Propagate sigma(0) = j along the square adjacencies: an affine
            // map with derivative -I sends the square right of i to the square
            // left of sigma(i), and the square above to the square below.
            let mut sigma = vec![usize::MAX; n];
            sigma[0] = j;
            let mut queue = VecDeque::from([0usize]);
            while let Some(i) = queue.pop_front() {
                let si = sigma[i];
                for (nb, img) in [(self.h[i], hi[si]), (self.v[i], vi[si])] {
                    if sigma[nb] == usize::MAX {
                        sigma[nb] = img;
                        queue.push_back(nb);
                    } else if sigma[nb] != img {
                        continue 'cand;
                    }
                }
            }
            // Global consistency (covers non-tree edges) and involutivity.
            for i in 0..n {
                if sigma[self.h[i]] != hi[sigma[i]]
                    || sigma[self.v[i]] != vi[sigma[i]]
                    || sigma[sigma[i]] != i
                {
                    continue 'cand;
                }
            }
            let mut pts = Vec::new();
            #[allow(clippy::needless_range_loop)] // sigma, h and dev share the index
            for i in 0..n {
                let (x, y) = devd.dev[i];
                if sigma[i] == i {
                    pts.push(WeierstrassPoint {
                        kind: WpKind::Center,
                        square: i,
                        pos2: (2 * x + 1, 2 * y + 1),
                    });
                }
                if sigma[i] == self.h[i] {
                    pts.push(WeierstrassPoint {
                        kind: WpKind::RightMid,
                        square: i,
                        pos2: (2 * x + 2, 2 * y + 1),
                    });
                }
                if sigma[i] == self.v[i] {
                    pts.push(WeierstrassPoint {
                        kind: WpKind::TopMid,
                        square: i,
                        pos2: (2 * x + 1, 2 * y + 2),
                    });
                }
            }
            // A vertex class (corners walked with NE-square i) maps to the
            // class whose SW-square is sigma(i), i.e. the class of h(v(sigma(i))).
            for c in &classes {
                let rep = c[0];
                let image = class_of[self.h[self.v[sigma[rep]]]];
                debug_assert!(c
                    .iter()
                    .all(|&i| class_of[self.h[self.v[sigma[i]]]] == image));
                if image == class_of[rep] {
                    let (x, y) = devd.dev[rep];
                    pts.push(WeierstrassPoint {
                        kind: WpKind::Vertex,
                        square: rep,
                        pos2: (2 * x, 2 * y),
                    });
                }
            }
            if pts.len() == 6 {
                assert!(
                    found.is_none(),
                    "involution with six fixed points must be unique"
                );
                pts.sort_by_key(|p| (p.kind, p.square));
                found = Some((sigma, pts));
            }
        }
        let (sigma, points) = found.ok_or(OrigamiError::InvolutionNotFound)?;

        // Profile: classify fixed points by the class of kappa = 2*pos - c
        // in Per/2Per, where c is the (mod-Per constant) involution center.
        let c0 = (
            devd.dev[0].0 + devd.dev[sigma[0]].0 + 1,
            devd.dev[0].1 + devd.dev[sigma[0]].1 + 1,
        );
        let (pa, pb, pc) = devd.per.hnf_entries();
        let mut counts = [0usize; 4];
        for p in &points {
            let kapx = int(p.pos2.0 - c0.0);
            let kapy = int(p.pos2.1 - c0.1);
            assert!(
                devd.per.contains(&kapx, &kapy),
                "fixed points lie over the involution center"
            );
            // Coordinates of kappa in the HNF basis [[a,b],[0,c]].
            let beta = &kapy / pc.clone();
            let alpha = (&kapx - &beta * pb.clone()) / pa.clone();
            let cls = (&alpha % int(2) != int(0), &beta % int(2) != int(0));
            counts[match cls {
                (false, false) => 0,
                (true, false) => 1,
                (false, true) => 2,
                (true, true) => 3,
            }] += 1;
        }
        counts.sort_unstable_by(|a, b| b.cmp(a));

        let zeros_swapped = match sig.stratum {
            Stratum::H2 => false,
            Stratum::H11 => {
                let zs = self.zero_classes();
                let img = class_of[self.h[self.v[sigma[zs[0][0]]]]];
                img == class_of[zs[1][0]]
            }
        };
        if sig.stratum == Stratum::H11 {
            assert!(zeros_swapped, "the involution exchanges the two simple zeros");
        }
        Ok(WeierstrassData {
            involution: sigma,
            points,
            profile: counts,
            zeros_swapped,
        })
    }

    /// Parity of the spin structure via the count of integer Weierstrass
    /// points.  Defined for H(1,1) of odd torsion and H(2) of odd degree.
    pub fn spin(&self) -> Result<SpinValue, OrigamiError> {
        let sig = self.validate()?;
        let devd = self.develop();
        let wd = self.weierstrass()?;
        let iwp = match sig.stratum {
            Stratum::H11 => {
                if sig.torsion % 2 == 0 {
                    return Err(OrigamiError::SpinUndefined(format!(
                        "torsion order {} is even",
                        sig.torsion
                    )));
                }
                let zs = self.zero_classes();
                let z1 = devd.dev[zs[0][0]];
                let n = sig.torsion as i64;
                let (pa, pb, pc) = devd.per.hnf_entries();
                let two_per = Lattice2::from_hnf(int(2) * pa, int(2) * pb, int(2) * pc);
                wd.points
                    .iter()
                    .filter(|p| {
                        let ux = int(n * (p.pos2.0 - 2 * z1.0));
                        let uy = int(n * (p.pos2.1 - 2 * z1.1));
                        two_per.contains(&ux, &uy)
                    })
                    .count()
            }
            Stratum::H2 => {
                if sig.degree % 2 == 0 {
                    return Err(OrigamiError::SpinUndefined(format!(
                        "degree {} is even",
                        sig.degree
                    )));
                }
                let z = devd.dev[self.zero_classes()[0][0]];
                wd.points
                    .iter()
                    .filter(|p| (p.pos2.0 - 2 * z.0) % 2 == 0 && (p.pos2.1 - 2 * z.1) % 2 == 0)
                    .count()
            }
        };
        assert!(iwp <= 3, "at most three integer Weierstrass points");
        let epsilon = u8::from(!(iwp == 0 || iwp == 3));
        Ok(SpinValue {
            epsilon,
            iwp: iwp as u8,
        })
    }

    /// Push a degree-4 surface through the exceptional map S4 -> S3 on the
    /// sheets of its intermediate torus cover.
    pub fn klein_project(&self) -> Result<Origami, OrigamiError> {
        let sig = self.validate()?;
        if sig.degree != 4 {
            return Err(OrigamiError::WrongDegree {
                expected: 4,
                got: sig.degree,
            });
        }
        let devd = self.develop();
        let (pa, pb, pc) = devd.per.hnf_entries();
        let (a, b, c): (i64, i64, i64) = (
            (&pa).try_into().unwrap(),
            (&pb).try_into().unwrap(),
            (&pc).try_into().unwrap(),
        );
        // Index squares of the torus E' = Z^2 / Per by coset representatives
        // (r, s) with 0 <= r < a, 0 <= s < c for the HNF basis [[a,b],[0,c]].
        let reduce = |x: i64, y: i64| -> (i64, i64) {
            let s = y.rem_euclid(c);
            let k = (y - s) / c;
            let r = (x - k * b).rem_euclid(a);
            (r, s)
        };
        let base_squares = (a * c) as usize;
        let coset_index = |x: i64, y: i64| -> usize {
            let (r, s) = reduce(x, y);
            (r * c + s) as usize
        };
        // Sheets over each torus square, ordered by square label.
        let mut sheets: Vec<Vec<usize>> = vec![Vec::new(); base_squares];
        for i in 0..self.n_squares() {
            sheets[coset_index(devd.dev[i].0, devd.dev[i].1)].push(i);
        }
        if sheets.iter().any(|s| s.len() != 4) {
            return Err(OrigamiError::Degenerate(
                "intermediate cover does not have four sheets everywhere".into(),
            ));
        }
        let sheet_no = |sq: usize| -> (usize, usize) {
            let e = coset_index(devd.dev[sq].0, devd.dev[sq].1);
            (e, sheets[e].iter().position(|&x| x == sq).unwrap())
        };
        // phi: S4 -> S3 by the action on the three pair-partitions
        // {01|23}, {02|13}, {03|12}; partition p is determined by the mate of 0.
        let mate = |perm: &[usize; 4], p: usize| -> usize {
            // Partition p pairs sheet 0 with sheet p+1; its image partition is
            // identified by the new mate of sheet 0.
            let pairs = match p {
                0 => [[0, 1], [2, 3]],
                1 => [[0, 2], [1, 3]],
                _ => [[0, 3], [1, 2]],
            };
            let img: Vec<[usize; 2]> = pairs
                .iter()
                .map(|&[x, y]| {
                    let (ix, iy) = (perm[x], perm[y]);
                    [ix.min(iy), ix.max(iy)]
                })
                .collect();
            img.iter().find(|pr| pr[0] == 0).expect("0 lies in one pair")[1] - 1
        };
        let mut new_h = vec![0usize; base_squares * 3];
        let mut new_v = vec![0usize; base_squares * 3];
        for e in 0..base_squares {
            for (perm_src, out) in [(&self.h, &mut new_h), (&self.v, &mut new_v)] {
                let mut pi = [0usize; 4];
                let mut target_e = usize::MAX;
                for (s, &sq) in sheets[e].iter().enumerate() {
                    let (te, ts) = sheet_no(perm_src[sq]);
                    if target_e == usize::MAX {
                        target_e = te;
                    } else if target_e != te {
                        return Err(OrigamiError::Degenerate(
                            "sheets over one square scatter over the base".into(),
                        ));
                    }
                    pi[s] = ts;
                }
                for p in 0..3 {
                    out[e * 3 + p] = target_e * 3 + mate(&pi, p);
                }
            }
        }
        let projected = Origami::new(new_h, new_v).expect("projection yields permutations");
        match projected.validate() {
            Ok(_) => Ok(projected.canonical()),
            Err(OrigamiError::BadBranching(msg)) => Err(OrigamiError::Degenerate(format!(
                "projected branching [{msg}]"
            ))),
            Err(OrigamiError::NotConnected) => {
                Err(OrigamiError::Degenerate("projected surface disconnects".into()))
            }
            Err(e) => Err(e),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("origami serializes")
    }

    pub fn from_json(s: &str) -> Result<Origami, OrigamiError> {
        serde_json::from_str(s)
            .map_err(|e| OrigamiError::MalformedPermutation(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exactnum::SL2Word;

    fn l_tromino() -> Origami {
        // Squares 0,1 on the bottom row, 2 above 0.
        Origami::new(vec![1, 0, 2], vec![2, 1, 0]).unwrap()
    }

    #[test]
    fn tromino_is_h2_degree_3() {
        let o = l_tromino();
        let sig = o.validate().unwrap();
        assert_eq!(
            sig,
            TypeSig {
                degree: 3,
                torsion: 0,
                stratum: Stratum::H2,
                reduced: true,
                primitive: true,
            }
        );
    }

    #[test]
    fn tromino_canonical_form() {
        // Hand-walked breadth-first relabelings: base 2 wins.
        let o = l_tromino();
        let c = o.canonical();
        assert_eq!(c.h(), &[0, 2, 1]);
        assert_eq!(c.v(), &[1, 0, 2]);
        assert_eq!(c.canonical(), c, "canonical is idempotent");
    }

    #[test]
    fn single_square_is_unbranched() {
        let o = Origami::new(vec![0], vec![0]).unwrap();
        assert!(matches!(o.validate(), Err(OrigamiError::BadBranching(_))));
    }

    #[test]
    fn disconnected_is_rejected() {
        let o = Origami::new(vec![0, 1], vec![0, 1]).unwrap();
        assert_eq!(o.validate(), Err(OrigamiError::NotConnected));
    }

    #[test]
    fn doubled_tromino_is_not_reduced() {
        // Pull back along the degree-2 isogeny that doubles horizontally:
        // squares (i, eps), eps in {0,1}; moving right flips eps and applies
        // h when wrapping past eps = 1.
        let base = l_tromino();
        let n = base.n_squares();
        let idx = |i: usize, e: usize| i + n * e;
        let mut h = vec![0; 2 * n];
        let mut v = vec![0; 2 * n];
        for i in 0..n {
            h[idx(i, 0)] = idx(i, 1);
            h[idx(i, 1)] = idx(base.h()[i], 0);
            v[idx(i, 0)] = idx(base.v()[i], 0);
            v[idx(i, 1)] = idx(base.v()[i], 1);
        }
        let o = Origami::new(h, v).unwrap();
        match o.validate() {
            Err(OrigamiError::NotReduced(sig)) => {
                assert!(!sig.reduced);
                assert_eq!(sig.stratum, Stratum::H2);
                assert_eq!(sig.degree, 3);
            }
            other => panic!("expected NotReduced, got {other:?}"),
        }
    }

    #[test]
    fn act_satisfies_group_relations() {
        let o = l_tromino().canonical();
        let r4 = o.act(&SL2Word::parse("RRRR").unwrap());
        assert_eq!(r4, o);
        let ss = o.act(&SL2Word::parse("Ss").unwrap());
        assert_eq!(ss, o);
        let r2 = o.act(&SL2Word::parse("RR").unwrap());
        assert_eq!(r2, o, "-I acts trivially up to relabeling");
        // Type is preserved along the action.
        let sig = o.validate().unwrap();
        for w in ["S", "R", "sR", "RSs", "SSRr"] {
            let moved = o.act(&SL2Word::parse(w).unwrap());
            assert_eq!(moved.validate().unwrap(), sig, "word {w}");
        }
    }

    #[test]
    fn tromino_weierstrass_structure() {
        let o = l_tromino();
        let wd = o.weierstrass().unwrap();
        assert_eq!(wd.points.len(), 6);
        assert!(!wd.zeros_swapped);
        // One double zero fixed by the involution, so exactly one vertex point.
        let vertex_pts = wd
            .points
            .iter()
            .filter(|p| p.kind == WpKind::Vertex)
            .count();
        assert_eq!(vertex_pts, 1);
        // The surface has a single vertex class (the triple zero), so the
        // only integral Weierstrass point is the zero itself.
        let spin = o.spin().unwrap();
        assert_eq!(spin.iwp, 1);
        assert_eq!(spin.epsilon, 1);
    }

    #[test]
    fn json_round_trip() {
        let o = l_tromino();
        let s = o.to_json();
        assert!(s.contains("\"n_squares\":3"));
        let back = Origami::from_json(&s).unwrap();
        assert_eq!(o, back);
        assert!(Origami::from_json("{\"n_squares\":2,\"h\":[0,1],\"v\":[1]}").is_err());
        assert!(Origami::from_json("{\"n_squares\":2,\"h\":[0,0],\"v\":[0,1]}").is_err());
    }

    #[test]
    fn klein_wrong_degree() {
        let o = l_tromino();
        assert_eq!(
            o.klein_project(),
            Err(OrigamiError::WrongDegree { expected: 4, got: 3 })
        );
    }
}
