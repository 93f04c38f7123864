//! The pagoda decomposition of the tiling into stories, and the trivalent
//! graph spanned by the zeroes on the eave bottoms.

use crate::build::{position_class, Side};
use crate::{Parity, Tiling, TilingError, VertexClass};
use cylinder::CylSpec;

/// One story of the pagoda: a maximal vertical stack of cylinders glued
/// bottom-to-top, listed from the eave (widest, at the bottom) to the
/// lighthouse (narrowest, on top).  Values index into `Tiling::cyls`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Story {
    pub cylinders: Vec<usize>,
}

/// The trivalent graph of X(d) for odd prime d: its vertices are the zeroes
/// lying on the eave bottoms, its edges the saddle connections joining two
/// such zeroes, and its legs the whisker arcs running from a zero into a
/// cusp (and folding back).  Every vertex has degree exactly 3, counting
/// edges with both endpoints there twice and legs once; the complement of
/// the graph in the surface is a disjoint union of disks, one per story.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivalentGraph {
    /// Indices into `Tiling::vertices` of the zeroes spanned by the graph.
    pub vertices: Vec<usize>,
    /// Saddle connections between two graph zeroes, as index pairs into
    /// `vertices` (unordered, stored lo ≤ hi).
    pub edges: Vec<(usize, usize)>,
    /// Whisker arcs, as (index into `vertices`, cusp vertex index into
    /// `Tiling::vertices`).
    pub legs: Vec<(usize, usize)>,
    /// Number of complement components; each is verified to be a disk.
    pub complement_disks: usize,
}

/// Predecessor of a non-eave cylinder within its story: one step closer to
/// the eave.  With components (wa, sa), (wb, sb), sa > sb, the predecessor
/// has components (wa + wb, sb), (wa, sa − sb).
fn story_predecessor(c: &CylSpec) -> CylSpec {
    debug_assert_ne!(c.s1, c.s2);
    let ((wa, sa), (wb, sb)) = if c.s1 > c.s2 {
        ((c.w1, c.s1), (c.w2, c.s2))
    } else {
        ((c.w2, c.s2), (c.w1, c.s1))
    };
    CylSpec::new(wa, sa - sb, 0, wa + wb, sb, 0)
}

pub(crate) fn build_stories(t: &Tiling) -> Result<Vec<Story>, TilingError> {
    if t.d == 2 {
        return Err(TilingError::UnsupportedDegree(2));
    }
    let d = t.d;
    let find = |spec: &CylSpec| -> usize {
        t.cyls
            .binary_search(spec)
            .expect("story member must be a cylinder of the tiling")
    };
    let mut stories = Vec::new();
    let mut seen = vec![false; t.cyls.len()];
    for i in 1..=(d - 1) / 2 {
        let lighthouse = CylSpec::new(1, i, 0, 1, d - i, 0);
        let mut chain = vec![find(&lighthouse)];
        let mut cur = lighthouse;
        while cur.s1 != cur.s2 {
            cur = story_predecessor(&cur);
            chain.push(find(&cur));
        }
        chain.reverse();
        for &ci in &chain {
            assert!(!seen[ci], "cylinder {ci} appears in two stories");
            seen[ci] = true;
        }
        stories.push(Story { cylinders: chain });
    }
    assert!(
        seen.iter().all(|&s| s),
        "stories must cover every cylinder of the tiling"
    );
    for story in &stories {
        check_story_properties(t, story)?;
    }
    Ok(stories)
}

/// Verify the eight structural properties of a story:
/// 1. cutting along the eave bottoms leaves a disk;
/// 2. widths strictly decrease going up;
/// 3. heights do not decrease going up;
/// 4. the story starts at an eave and ends at a lighthouse;
/// 5. consecutive cylinders are related by the story recurrence;
/// 6. top edges fold within their own cylinder or continue, by translation,
///    to the bottom of the next cylinder up;
/// 7. the lighthouse top folds entirely onto itself;
/// 8. eave bottoms are glued only to eave bottoms.
fn check_story_properties(t: &Tiling, story: &Story) -> Result<(), TilingError> {
    let violation = |property: u8| TilingError::PagodaViolation { property };
    let cyls = &story.cylinders;
    let eave = &t.cyls[cyls[0]];
    let lighthouse = &t.cyls[*cyls.last().expect("story is nonempty")];
    if !(eave.s1 == 1 && eave.s2 == 1 && lighthouse.w1 == 1 && lighthouse.w2 == 1) {
        return Err(violation(4));
    }
    for pair in cyls.windows(2) {
        let (lo, hi) = (&t.cyls[pair[0]], &t.cyls[pair[1]]);
        if lo.circumference() <= hi.circumference() {
            return Err(violation(2));
        }
        if lo.height() > hi.height() {
            return Err(violation(3));
        }
        if story_predecessor(hi) != *lo {
            return Err(violation(5));
        }
    }
    for (k, &ci) in cyls.iter().enumerate() {
        let w = t.width(ci);
        let is_last = k + 1 == cyls.len();
        for x in 0..w {
            let (sq, side, parity) = t.partner(t.square_id(ci, x, 0), Side::Top);
            let partner_cyl = t.squares[sq].cyl;
            match parity {
                Parity::RotationByPi => {
                    if !(partner_cyl == ci && side == Side::Top) {
                        return Err(violation(if is_last { 7 } else { 6 }));
                    }
                }
                Parity::Translation => {
                    if is_last {
                        return Err(violation(7));
                    }
                    if !(partner_cyl == cyls[k + 1] && side == Side::Bottom) {
                        return Err(violation(6));
                    }
                }
            }
        }
    }
    let eave_h = t.height(cyls[0]);
    for x in 0..t.width(cyls[0]) {
        let (sq, side, parity) = t.partner(t.square_id(cyls[0], x, eave_h - 1), Side::Bottom);
        let pc = &t.cyls[t.squares[sq].cyl];
        if !(side == Side::Bottom && parity == Parity::RotationByPi && pc.s1 == pc.s2) {
            return Err(violation(8));
        }
    }
    check_story_is_a_disk(t, story)?;
    Ok(())
}

/// Cut the surface along the eave bottoms and check that this story's
/// subcomplex is a disk: connected with Euler characteristic 1.
fn check_story_is_a_disk(t: &Tiling, story: &Story) -> Result<(), TilingError> {
    let in_story: Vec<bool> = {
        let mut v = vec![false; t.cyls.len()];
        for &ci in &story.cylinders {
            v[ci] = true;
        }
        v
    };
    // Collect this story's directed edges and whether their gluing is kept
    // (eave-bottom pairs are cut; so is anything leaving the story).
    let mut edge_ids = Vec::new();
    let mut kept_pairs = 0usize;
    let mut boundary_edges = 0usize;
    for (e, &(p, _)) in t.gluing.iter().enumerate() {
        let sq = t.squares[e / 4];
        if !in_story[sq.cyl] {
            continue;
        }
        edge_ids.push(e);
        let p = p as usize;
        let psq = t.squares[p / 4];
        let cut = !in_story[psq.cyl] || is_eave_bottom_edge(t, e) || is_eave_bottom_edge(t, p);
        if cut {
            boundary_edges += 1;
        } else if e < p {
            kept_pairs += 1;
        }
    }
    // Union-find over the story's corners: corners merge along kept gluings
    // (the start corner of e meets the end corner of its partner).
    let mut uf = UnionFind::new(t.gluing.len());
    let mut squares_uf = UnionFind::new(t.squares.len());
    for &e in &edge_ids {
        let (p, _) = t.gluing[e];
        let p = p as usize;
        let psq = t.squares[p / 4];
        if in_story[psq.cyl] && !is_eave_bottom_edge(t, e) && !is_eave_bottom_edge(t, p) {
            uf.union(e, face_next(p));
            squares_uf.union(e / 4, p / 4);
        }
    }
    let story_squares: Vec<usize> = (0..t.squares.len())
        .filter(|&s| in_story[t.squares[s].cyl])
        .collect();
    let components = {
        let mut roots: Vec<usize> = story_squares.iter().map(|&s| squares_uf.find(s)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    };
    let vertices = {
        let mut roots: Vec<usize> = edge_ids.iter().map(|&e| uf.find(e)).collect();
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    };
    let edges = kept_pairs + boundary_edges;
    let faces = story_squares.len();
    let chi = vertices as i64 - edges as i64 + faces as i64;
    if components != 1 || chi != 1 {
        return Err(TilingError::PagodaViolation { property: 1 });
    }
    Ok(())
}

fn face_next(e: usize) -> usize {
    4 * (e / 4) + (e % 4 + 1) % 4
}

fn is_eave_bottom_edge(t: &Tiling, e: usize) -> bool {
    let sq = t.squares[e / 4];
    let c = &t.cyls[sq.cyl];
    c.s1 == c.s2 && e % 4 == Side::Bottom.index() && sq.row + 1 == c.height()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Maximal runs of bottom edges of an eave between consecutive singular
/// corners, with the classes of the two bounding corners.
struct BottomRun {
    cyl: usize,
    /// First edge of the run (edges start..start+len, columns mod width).
    start: u64,
    len: u64,
    left_class: VertexClass,
    right_class: VertexClass,
    /// Corner positions bounding the run (x coordinates, mod width).
    left_x: u64,
    right_x: u64,
}

pub(crate) fn build_trivalent_graph(t: &Tiling) -> Result<TrivalentGraph, TilingError> {
    let stories = build_stories(t)?;
    let complement_disks = stories.len();

    // Carve each eave bottom into runs between consecutive singular corners.
    let mut runs: Vec<BottomRun> = Vec::new();
    // (cyl, edge) -> run index, for matching runs across the gluing.
    let mut run_of_edge: std::collections::BTreeMap<(usize, u64), usize> =
        std::collections::BTreeMap::new();
    for (ci, c) in t.cyls.iter().enumerate() {
        if c.s1 != c.s2 {
            continue;
        }
        let w = t.width(ci);
        let h = t.height(ci);
        let singular: Vec<u64> = (0..w)
            .filter(|&x| position_class(c, x, h) != VertexClass::Regular)
            .collect();
        assert!(!singular.is_empty(), "an eave bottom carries singular corners");
        for (j, &sx) in singular.iter().enumerate() {
            let next = if j + 1 < singular.len() {
                singular[j + 1]
            } else {
                singular[0] + w
            };
            let idx = runs.len();
            runs.push(BottomRun {
                cyl: ci,
                start: sx,
                len: next - sx,
                left_class: position_class(c, sx % w, h),
                right_class: position_class(c, next % w, h),
                left_x: sx % w,
                right_x: next % w,
            });
            for e in sx..next {
                run_of_edge.insert((ci, e % w), idx);
            }
        }
    }

    // Match runs across the bottom gluing: the image of a run is a run of
    // equal length traversed in reverse (the gluing is a rotation by π).
    let partner_run: Vec<usize> = runs
        .iter()
        .enumerate()
        .map(|(idx, run)| {
            let w = t.width(run.cyl);
            let h = t.height(run.cyl);
            let mut partners = Vec::new();
            for off in 0..run.len {
                let e = (run.start + off) % w;
                let (sq, side, parity) = t.partner(t.square_id(run.cyl, e, h - 1), Side::Bottom);
                assert_eq!((side, parity), (Side::Bottom, Parity::RotationByPi));
                let psq = t.squares[sq];
                partners.push(run_of_edge[&(psq.cyl, psq.col)]);
            }
            partners.sort_unstable();
            partners.dedup();
            assert_eq!(
                partners.len(),
                1,
                "a saddle-connection run must map onto a single run"
            );
            let pidx = partners[0];
            assert_eq!(runs[pidx].len, run.len, "matched runs must have equal length");
            assert_ne!(pidx, idx, "a run cannot fold onto itself");
            pidx
        })
        .collect();
    for (idx, &p) in partner_run.iter().enumerate() {
        assert_eq!(partner_run[p], idx, "run matching must be an involution");
    }

    // Graph vertices: the zero classes met by eave-bottom corners.
    let mut zero_ids: Vec<usize> = Vec::new();
    for run in &runs {
        let h = t.height(run.cyl);
        for (class, x) in [(run.left_class, run.left_x), (run.right_class, run.right_x)] {
            if class == VertexClass::Zero {
                zero_ids.push(t.vertex_at(run.cyl, x, h));
            }
        }
    }
    zero_ids.sort_unstable();
    zero_ids.dedup();
    let zero_index = |v: usize| -> usize {
        zero_ids
            .binary_search(&v)
            .expect("endpoint zero is a graph vertex")
    };

    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut legs: Vec<(usize, usize)> = Vec::new();
    for (idx, run) in runs.iter().enumerate() {
        let pidx = partner_run[idx];
        let h = t.height(run.cyl);
        match (run.left_class, run.right_class) {
            (VertexClass::Zero, VertexClass::Zero) => {
                // A zero-zero saddle connection; its two sides are glued, so
                // record it once per unordered run pair.
                if idx < pidx {
                    let a = zero_index(t.vertex_at(run.cyl, run.left_x, h));
                    let b = zero_index(t.vertex_at(run.cyl, run.right_x, h));
                    edges.push((a.min(b), a.max(b)));
                }
            }
            (VertexClass::Zero, VertexClass::CuspPole) => {
                // A whisker: this run and its mirror image fold together
                // around the cusp at its right end.  Record one leg per
                // cusp, from the left-of-cusp run.
                let partner = &runs[pidx];
                assert_eq!(partner.cyl, run.cyl, "whisker runs fold within their eave");
                assert_eq!(
                    partner.left_class,
                    VertexClass::CuspPole,
                    "the mirror of a left-of-cusp run starts at the cusp"
                );
                let zero_here = t.vertex_at(run.cyl, run.left_x, h);
                let zero_there = t.vertex_at(partner.cyl, partner.right_x, h);
                assert_eq!(
                    zero_here, zero_there,
                    "the two ends of a folded whisker reach the same zero"
                );
                let cusp = t.vertex_at(run.cyl, run.right_x, h);
                legs.push((zero_index(zero_here), cusp));
            }
            (VertexClass::CuspPole, VertexClass::Zero) => {
                // The mirror image of a left-of-cusp run; already recorded.
            }
            other => {
                panic!("unexpected run endpoint classes on an eave bottom: {other:?}")
            }
        }
    }
    edges.sort_unstable();
    legs.sort_unstable();

    // Every graph vertex has degree exactly 3.
    let mut degree = vec![0usize; zero_ids.len()];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    for &(v, _) in &legs {
        degree[v] += 1;
    }
    assert!(
        degree.iter().all(|&deg| deg == 3),
        "trivalent graph degrees: {degree:?}"
    );

    Ok(TrivalentGraph {
        vertices: zero_ids,
        edges,
        legs,
        complement_disks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;

    #[test]
    fn story_predecessor_matches_the_hand_computed_x5_chains() {
        // Story of the (1,1),(1,4) lighthouse in X(5):
        let lh = CylSpec::new(1, 1, 0, 1, 4, 0);
        let c3 = story_predecessor(&lh);
        assert_eq!(c3, CylSpec::new(1, 3, 0, 2, 1, 0));
        let c2 = story_predecessor(&c3);
        assert_eq!(c2, CylSpec::new(1, 2, 0, 3, 1, 0));
        let c1 = story_predecessor(&c2);
        assert_eq!(c1, CylSpec::new(1, 1, 0, 4, 1, 0));
        assert_eq!(c1.s1, c1.s2);
    }

    #[test]
    fn x3_has_one_story_with_a_tripod_graph() {
        let t = build(3).unwrap();
        let stories = t.stories().unwrap();
        assert_eq!(stories.len(), 1);
        assert_eq!(stories[0].cylinders.len(), 2);
        let g = t.trivalent_graph().unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(g.edges.is_empty());
        assert_eq!(g.legs.len(), 3);
        assert_eq!(g.complement_disks, 1);
    }

    #[test]
    fn stories_are_unsupported_for_d2() {
        let t = build(2).unwrap();
        assert!(matches!(t.stories(), Err(TilingError::UnsupportedDegree(2))));
        assert!(matches!(
            t.trivalent_graph(),
            Err(TilingError::UnsupportedDegree(2))
        ));
    }
}
