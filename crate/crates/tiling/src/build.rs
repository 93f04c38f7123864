//! Construction of the square-tiling: squares, edge gluing, vertex classes.

use crate::TilingError;
use cylinder::{cylinders, CylSpec};
use serde::{Deserialize, Serialize};

/// One side of a unit square, in counterclockwise face order starting at the
/// top.  As a directed edge, each side is traversed so that the square lies
/// to its right when drawn with the y axis pointing down: the top side runs
/// from the top-left corner to the top-right, the right side from top-right
/// to bottom-right, the bottom from bottom-right to bottom-left, and the left
/// from bottom-left to top-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Top,
    Right,
    Bottom,
    Left,
}

impl Side {
    pub(crate) fn from_index(i: usize) -> Side {
        match i {
            0 => Side::Top,
            1 => Side::Right,
            2 => Side::Bottom,
            3 => Side::Left,
            _ => unreachable!("side index out of range"),
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Side::Top => 0,
            Side::Right => 1,
            Side::Bottom => 2,
            Side::Left => 3,
        }
    }

    /// One-letter label used in the JSON encoding.
    pub fn letter(self) -> char {
        match self {
            Side::Top => 'T',
            Side::Right => 'R',
            Side::Bottom => 'B',
            Side::Left => 'L',
        }
    }

    pub(crate) fn from_letter(c: char) -> Option<Side> {
        match c {
            'T' => Some(Side::Top),
            'R' => Some(Side::Right),
            'B' => Some(Side::Bottom),
            'L' => Some(Side::Left),
            _ => None,
        }
    }
}

/// How two square edges are identified: by a translation or by a rotation
/// by π about the midpoint of the shared edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Translation,
    RotationByPi,
}

impl Parity {
    /// One-letter label used in the JSON encoding.
    pub fn letter(self) -> char {
        match self {
            Parity::Translation => 'T',
            Parity::RotationByPi => 'R',
        }
    }

    pub(crate) fn from_letter(c: char) -> Option<Parity> {
        match c {
            'T' => Some(Parity::Translation),
            'R' => Some(Parity::RotationByPi),
            _ => None,
        }
    }
}

/// A unit square of the tiling, addressed by its cylinder and its column and
/// row within that cylinder's grid.  Row 0 is the top row of the cylinder;
/// the y coordinate grows downwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Square {
    pub cyl: usize,
    pub col: u64,
    pub row: u64,
}

/// The class of a vertex of the tiling, as a point of the orbifold quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexClass {
    /// Simple zero of the quadratic differential (cone angle 3π, 6 corners).
    Zero,
    /// Simple pole that is not a cusp (cone angle π, 2 corners).
    NonCuspPole,
    /// Simple pole at a cusp of the modular curve (cone angle π, 2 corners).
    CuspPole,
    /// Regular point on the edge skeleton (cone angle 2π, 4 corners).
    Regular,
}

impl VertexClass {
    /// Number of square corners meeting at a vertex of this class.
    pub fn corner_count(self) -> u8 {
        match self {
            VertexClass::Zero => 6,
            VertexClass::NonCuspPole | VertexClass::CuspPole => 2,
            VertexClass::Regular => 4,
        }
    }

    pub(crate) fn label(self) -> &'static str {
        match self {
            VertexClass::Zero => "zero",
            VertexClass::NonCuspPole => "nonCuspPole",
            VertexClass::CuspPole => "cuspPole",
            VertexClass::Regular => "regular",
        }
    }

    pub(crate) fn from_label(s: &str) -> Option<VertexClass> {
        match s {
            "zero" => Some(VertexClass::Zero),
            "nonCuspPole" => Some(VertexClass::NonCuspPole),
            "cuspPole" => Some(VertexClass::CuspPole),
            "regular" => Some(VertexClass::Regular),
            _ => None,
        }
    }
}

/// A vertex of the tiling: an identified orbit of square corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRecord {
    pub class: VertexClass,
    /// Number of square corners in the orbit (2, 4 or 6).
    pub corner_count: u8,
    /// Lexicographically least (cylinder, x, y) among the corner positions.
    pub position: (usize, u64, u64),
}

/// Counts of the tiling's vertices by class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VertexCensus {
    pub zeros: usize,
    pub non_cusp_poles: usize,
    pub cusp_poles: usize,
    pub regular: usize,
}

/// The square-tiling of the modular curve X(d).
///
/// Squares are stored cylinder by cylinder in the canonical order of
/// [`cylinder::cylinders`], each cylinder row-major (row 0 = top row).
/// The gluing is a fixed-point-free involution on the directed square edges;
/// the directed edge with id `4·s + i` is side `i` (top, right, bottom,
/// left) of square `s`.
#[derive(Debug, Clone)]
pub struct Tiling {
    pub d: u64,
    /// Cylinders in the canonical sorted order.
    pub cyls: Vec<CylSpec>,
    /// All unit squares, in id order.
    pub squares: Vec<Square>,
    /// Vertices (corner orbits), sorted by representative position.
    pub vertices: Vec<VertexRecord>,
    /// `gluing[e] = (partner edge, parity)` for each directed edge id `e`.
    pub(crate) gluing: Vec<(u32, Parity)>,
    /// Vertex index of the corner at which directed edge `e` starts.
    pub(crate) corner_vertex: Vec<u32>,
    /// Mod-2 translation applied to each square by the development onto the
    /// pillowcase; `None` would indicate an inconsistent development.
    pub(crate) dev_offsets: Option<Vec<(u8, u8)>>,
    /// First square id of each cylinder.
    pub(crate) sq_start: Vec<usize>,
}

impl PartialEq for Tiling {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d
            && self.cyls == other.cyls
            && self.squares == other.squares
            && self.gluing == other.gluing
            && self.vertices == other.vertices
    }
}

impl Eq for Tiling {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Class of the point (x, y) of the cylinder `c` under the boundary rules.
///
/// Interior points of a cylinder (0 < y < height) are regular.  On the top
/// boundary (y = 0) the pattern is periodic of period w1 + w2: non-cusp
/// poles at multiples of the period, zeroes at offsets w1 and w2 — except on
/// a lighthouse (w1 = w2 = 1), whose top alternates non-cusp pole, cusp.
/// On the bottom boundary (y = height) of an eave (s1 = s2) the cusps sit at
/// multiples of w1·w2 and the zeroes at the remaining multiples of w1 or w2;
/// on a non-eave bottom the zeroes sit at multiples of the width of the
/// component with the smaller s, all other points being regular.
pub(crate) fn position_class(c: &CylSpec, x: u64, y: u64) -> VertexClass {
    let h = c.height();
    debug_assert!(y <= h && x < c.circumference());
    if y > 0 && y < h {
        return VertexClass::Regular;
    }
    if y == 0 {
        if c.w1 == 1 && c.w2 == 1 {
            return if x.is_multiple_of(2) {
                VertexClass::NonCuspPole
            } else {
                VertexClass::CuspPole
            };
        }
        let r = x % (c.w1 + c.w2);
        if r == 0 {
            VertexClass::NonCuspPole
        } else if r == c.w1 || r == c.w2 {
            VertexClass::Zero
        } else {
            VertexClass::Regular
        }
    } else if c.s1 == c.s2 {
        if x.is_multiple_of(c.w1 * c.w2) {
            VertexClass::CuspPole
        } else if x.is_multiple_of(c.w1) || x.is_multiple_of(c.w2) {
            VertexClass::Zero
        } else {
            VertexClass::Regular
        }
    } else {
        let w_small = if c.s1 < c.s2 { c.w1 } else { c.w2 };
        if x.is_multiple_of(w_small) {
            VertexClass::Zero
        } else {
            VertexClass::Regular
        }
    }
}

/// Smallest x ≥ r1 + ... with x ≡ r1 (mod m1) and x ≡ r2 (mod m2), for
/// coprime m1, m2.  The moduli here are at most a few dozen, so a linear
/// scan is plenty.
fn crt_coprime(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    debug_assert_eq!(num_integer::gcd(m1, m2), 1);
    let mut x = r1 % m1;
    while x % m2 != r2 % m2 {
        x += m1;
    }
    x
}

/// Partner of the bottom edge `[e, e+1]` of the eave cylinder `ci` under the
/// between-story gluing, as `(cylinder, edge)`.  Works at the edge midpoint
/// u = e + 1/2, carried through the twist formulas in half-integer units
/// (all quantities are doubled).
fn eave_bottom_partner(d: u64, cyls: &[CylSpec], ci: usize, e: u64) -> (usize, u64) {
    let c = &cyls[ci];
    debug_assert_eq!(c.s1, c.s2, "between-story gluing only applies to eaves");
    let (w1, w2) = (c.w1, c.w2);
    let u = 2 * e + 1;
    let u1 = u % (2 * w1);
    let u2 = u % (2 * w2);
    let u3 = u % (2 * d);
    // Width of the first component after regluing; u2 - u1 ∈ (-2w1, 2w2), so
    // 2w1' ∈ (0, 2d) and both new widths are positive.
    let two_w1p = (2 * w1 + u2) - u1;
    debug_assert!(two_w1p.is_multiple_of(2) && two_w1p > 0 && two_w1p < 2 * d);
    let mut w1p = two_w1p / 2;
    let mut w2p = d - w1p;
    let mut u1p = (2 * w1 - u1) % (2 * w1p);
    let mut u2p = (2 * w2 - u2) % (2 * w2p);
    let u3p = (u3 as i64 - u1 as i64 - u2 as i64).rem_euclid(2 * d as i64) as u64;
    if w1p > w2p {
        std::mem::swap(&mut w1p, &mut w2p);
        std::mem::swap(&mut u1p, &mut u2p);
    }
    let target = CylSpec::new(w1p, 1, 0, w2p, 1, 0);
    let cj = cyls
        .binary_search(&target)
        .expect("between-story partner eave must exist");
    // Recover the edge index e' from the three half-integer twists: the
    // midpoint u' = 2e' + 1 satisfies u' ≡ u1' (2w1'), u' ≡ u2' (2w2'),
    // u' ≡ u3' (2d); equivalently e' ≡ (ui' - 1)/2 modulo w1', w2', d, which
    // are pairwise coprime with product equal to the eave's width.
    debug_assert!(u1p % 2 == 1 && u2p % 2 == 1 && u3p % 2 == 1);
    let r1 = (u1p - 1) / 2;
    let r2 = (u2p - 1) / 2;
    let r3 = (u3p - 1) / 2;
    let e12 = crt_coprime(r1, w1p, r2, w2p);
    let ep = crt_coprime(e12, w1p * w2p, r3, d);
    debug_assert!(ep < cyls[cj].circumference());
    (cj, ep)
}

struct Builder {
    d: u64,
    cyls: Vec<CylSpec>,
    squares: Vec<Square>,
    sq_start: Vec<usize>,
    gluing: Vec<Option<(u32, Parity)>>,
}

impl Builder {
    fn square_id(&self, cyl: usize, col: u64, row: u64) -> usize {
        let w = self.cyls[cyl].circumference();
        debug_assert!(col < w && row < self.cyls[cyl].height());
        self.sq_start[cyl] + (row * w + col) as usize
    }

    fn top_edge(&self, cyl: usize, col: u64) -> usize {
        4 * self.square_id(cyl, col, 0) + Side::Top.index()
    }

    fn bottom_edge(&self, cyl: usize, col: u64) -> usize {
        let h = self.cyls[cyl].height();
        4 * self.square_id(cyl, col, h - 1) + Side::Bottom.index()
    }

    fn glue(&mut self, a: usize, b: usize, parity: Parity) {
        for (from, to) in [(a, b), (b, a)] {
            match self.gluing[from] {
                None => self.gluing[from] = Some((to as u32, parity)),
                Some(existing) => assert_eq!(
                    existing,
                    (to as u32, parity),
                    "conflicting gluing at directed edge {from}"
                ),
            }
        }
    }
}

/// Build the square-tiling of X(d).  Requires d = 2 or d prime.
pub fn build(d: u64) -> Result<Tiling, TilingError> {
    if !(d == 2 || is_prime(d)) {
        return Err(TilingError::UnsupportedDegree(d));
    }
    let cyls = cylinders(d);
    let mut squares = Vec::new();
    let mut sq_start = Vec::with_capacity(cyls.len());
    for (ci, c) in cyls.iter().enumerate() {
        sq_start.push(squares.len());
        for row in 0..c.height() {
            for col in 0..c.circumference() {
                squares.push(Square { cyl: ci, col, row });
            }
        }
    }
    let n_edges = 4 * squares.len();
    let mut b = Builder {
        d,
        cyls,
        squares,
        sq_start,
        gluing: vec![None; n_edges],
    };

    glue_cylinder_interiors(&mut b);
    glue_top_folds(&mut b);
    glue_within_stories(&mut b);
    glue_eave_bottoms(&mut b);

    let gluing: Vec<(u32, Parity)> = b
        .gluing
        .iter()
        .enumerate()
        .map(|(e, g)| g.unwrap_or_else(|| panic!("directed edge {e} left unglued")))
        .collect();
    for (e, &(p, parity)) in gluing.iter().enumerate() {
        assert_ne!(e, p as usize, "no edge is glued to itself");
        let (q, parity2) = gluing[p as usize];
        assert_eq!((q as usize, parity2), (e, parity), "gluing is not an involution");
    }

    let mut t = Tiling {
        d,
        cyls: b.cyls,
        squares: b.squares,
        vertices: Vec::new(),
        gluing,
        corner_vertex: vec![u32::MAX; n_edges],
        dev_offsets: None,
        sq_start: b.sq_start,
    };
    classify_vertices(&mut t).expect("built tilings classify consistently");
    t.dev_offsets = crate::points::develop(&t);
    assert!(
        t.dev_offsets.is_some(),
        "mod-2 development of X({d}) must be consistent"
    );
    Ok(t)
}

/// Vertical wrap-around gluings and the horizontal gluings interior to each
/// cylinder (all translations).
fn glue_cylinder_interiors(b: &mut Builder) {
    for ci in 0..b.cyls.len() {
        let (w, h) = (b.cyls[ci].circumference(), b.cyls[ci].height());
        for row in 0..h {
            for col in 0..w {
                let s = b.square_id(ci, col, row);
                let right = b.square_id(ci, (col + 1) % w, row);
                b.glue(
                    4 * s + Side::Right.index(),
                    4 * right + Side::Left.index(),
                    Parity::Translation,
                );
                if row + 1 < h {
                    let below = b.square_id(ci, col, row + 1);
                    b.glue(
                        4 * s + Side::Bottom.index(),
                        4 * below + Side::Top.index(),
                        Parity::Translation,
                    );
                }
            }
        }
    }
}

/// Fold the top boundary of every cylinder around its poles: around each
/// pole position p (multiples of w1 + w2) the min(w1, w2) edges on either
/// side are identified in pairs by rotation by π.
fn glue_top_folds(b: &mut Builder) {
    for ci in 0..b.cyls.len() {
        let c = b.cyls[ci];
        let w = c.circumference();
        let period = c.w1 + c.w2;
        let m = c.w1.min(c.w2);
        debug_assert_eq!(w % period, 0);
        for pole in (0..w).step_by(period as usize) {
            for j in 0..m {
                let a = b.top_edge(ci, (pole + j) % w);
                let z = b.top_edge(ci, (pole + w - 1 - j) % w);
                b.glue(a, z, Parity::RotationByPi);
            }
        }
    }
}

/// Glue the bottom of every non-eave cylinder to the top of its predecessor
/// in the same story (the cylinder one step closer to the eave), by
/// translations.  Writing the components of the cylinder as (wa, sa),
/// (wb, sb) with sa > sb, the predecessor is the cylinder with components
/// (wa, sa − sb), (wa + wb, sb); the bottom edge q·wb + k lands on the top
/// edge q·(2wa + wb) + wa + k of the predecessor.
fn glue_within_stories(b: &mut Builder) {
    for ci in 0..b.cyls.len() {
        let c = b.cyls[ci];
        if c.s1 == c.s2 {
            continue;
        }
        let ((wa, sa), (wb, sb)) = if c.s1 > c.s2 {
            ((c.w1, c.s1), (c.w2, c.s2))
        } else {
            ((c.w2, c.s2), (c.w1, c.s1))
        };
        let pred = CylSpec::new(wa, sa - sb, 0, wa + wb, sb, 0);
        let cj = b
            .cyls
            .binary_search(&pred)
            .expect("within-story predecessor cylinder must exist");
        let w = c.circumference();
        let w_pred = b.cyls[cj].circumference();
        for e in 0..w {
            let (q, k) = (e / wb, e % wb);
            let ep = q * (2 * wa + wb) + wa + k;
            debug_assert!(ep < w_pred);
            let bottom = b.bottom_edge(ci, e);
            let top = b.top_edge(cj, ep);
            b.glue(bottom, top, Parity::Translation);
        }
    }
}

/// Glue the bottoms of the eave cylinders among themselves by rotations by
/// π, following the between-story midpoint map.
fn glue_eave_bottoms(b: &mut Builder) {
    for ci in 0..b.cyls.len() {
        let c = b.cyls[ci];
        if c.s1 != c.s2 {
            continue;
        }
        for e in 0..c.circumference() {
            let (cj, ep) = eave_bottom_partner(b.d, &b.cyls, ci, e);
            let a = b.bottom_edge(ci, e);
            let z = b.bottom_edge(cj, ep);
            b.glue(a, z, Parity::RotationByPi);
        }
    }
}

/// Unwrapped position of the corner at which a directed edge starts, in the
/// chart of its own square (column may equal the cylinder width).
pub(crate) fn corner_offset(side: Side) -> (u64, u64) {
    match side {
        Side::Top => (0, 0),
        Side::Right => (1, 0),
        Side::Bottom => (1, 1),
        Side::Left => (0, 1),
    }
}

impl Tiling {
    /// Width (circumference) of a cylinder's grid.
    pub fn width(&self, cyl: usize) -> u64 {
        self.cyls[cyl].circumference()
    }

    /// Height of a cylinder's grid.
    pub fn height(&self, cyl: usize) -> u64 {
        self.cyls[cyl].height()
    }

    /// Id of the square at grid position (cyl, col, row).
    pub fn square_id(&self, cyl: usize, col: u64, row: u64) -> usize {
        let w = self.width(cyl);
        debug_assert!(col < w && row < self.height(cyl));
        self.sq_start[cyl] + (row * w + col) as usize
    }

    pub(crate) fn edge_id(&self, cyl: usize, col: u64, row: u64, side: Side) -> usize {
        4 * self.square_id(cyl, col, row) + side.index()
    }

    /// Partner of a directed edge under the gluing, with its parity.
    pub fn partner(&self, square: usize, side: Side) -> (usize, Side, Parity) {
        let (p, parity) = self.gluing[4 * square + side.index()];
        (p as usize / 4, Side::from_index(p as usize % 4), parity)
    }

    /// Every glued edge pair exactly once, in deterministic order.
    pub fn glued_pairs(&self) -> Vec<(Square, Side, Square, Side, Parity)> {
        let mut out = Vec::with_capacity(self.gluing.len() / 2);
        for (e, &(p, parity)) in self.gluing.iter().enumerate() {
            let p = p as usize;
            if e < p {
                out.push((
                    self.squares[e / 4],
                    Side::from_index(e % 4),
                    self.squares[p / 4],
                    Side::from_index(p % 4),
                    parity,
                ));
            }
        }
        out
    }

    /// Wrapped position (cylinder, x, y) of the corner at which directed
    /// edge `e` starts.
    pub(crate) fn corner_position(&self, e: usize) -> (usize, u64, u64) {
        let sq = self.squares[e / 4];
        let (dx, dy) = corner_offset(Side::from_index(e % 4));
        let w = self.width(sq.cyl);
        (sq.cyl, (sq.col + dx) % w, sq.row + dy)
    }

    /// Class of the vertex at the integral corner position (cyl, x, y).
    pub fn vertex_class_at(&self, cyl: usize, x: u64, y: u64) -> VertexClass {
        self.vertices[self.vertex_at(cyl, x, y)].class
    }

    /// Vertex index of the corner at position (cyl, x, y); x, y must be the
    /// integral coordinates of an actual corner.
    pub(crate) fn vertex_at(&self, cyl: usize, x: u64, y: u64) -> usize {
        let h = self.height(cyl);
        let e = if y < h {
            self.edge_id(cyl, x % self.width(cyl), y, Side::Top)
        } else {
            self.edge_id(cyl, x % self.width(cyl), h - 1, Side::Left)
        };
        self.corner_vertex[e] as usize
    }

    /// Counts of vertices by class.
    pub fn vertex_census(&self) -> VertexCensus {
        let mut census = VertexCensus::default();
        for v in &self.vertices {
            match v.class {
                VertexClass::Zero => census.zeros += 1,
                VertexClass::NonCuspPole => census.non_cusp_poles += 1,
                VertexClass::CuspPole => census.cusp_poles += 1,
                VertexClass::Regular => census.regular += 1,
            }
        }
        census
    }

    /// Genus of the tiled surface, via its Euler characteristic.  With F
    /// squares, 2F undirected edges and V vertices, χ = V − F.
    pub fn genus(&self) -> u64 {
        let v = self.vertices.len() as i64;
        let f = self.squares.len() as i64;
        let chi = v - f;
        let two_g = 2 - chi;
        assert!(two_g >= 0 && two_g % 2 == 0, "inconsistent Euler characteristic");
        (two_g / 2) as u64
    }

    /// The stories of the pagoda decomposition (d odd).
    pub fn stories(&self) -> Result<Vec<crate::Story>, TilingError> {
        crate::stories::build_stories(self)
    }

    /// The trivalent graph spanned by the zeroes on the eave bottoms (d odd).
    pub fn trivalent_graph(&self) -> Result<crate::TrivalentGraph, TilingError> {
        crate::stories::build_trivalent_graph(self)
    }

    /// All rational points of the tiled surface with denominator exactly or
    /// dividing n (n ≥ 2), excluding the vertices, sorted.
    pub fn rational_points(&self, n: u64) -> Vec<cylinder::SurfPoint> {
        crate::points::rational_points(self, n)
    }

    /// Image of a surface point on the pillowcase, together with its spin
    /// value (0 or 1) when the denominator is odd.
    pub fn delta_image(
        &self,
        p: &cylinder::SurfPoint,
    ) -> Result<(crate::PillowPoint, Option<u8>), TilingError> {
        crate::points::delta_image(self, p)
    }

    /// Serialize to the canonical JSON document.
    pub fn to_json_string(&self) -> String {
        crate::emit::to_json_string(self)
    }

    /// Deterministic SVG rendering.
    pub fn to_svg_string(&self) -> Result<String, TilingError> {
        crate::emit::to_svg_string(self)
    }

    /// Write the tiling to a file in the requested format.
    pub fn emit(&self, format: crate::EmitFormat, path: &std::path::Path) -> Result<(), TilingError> {
        crate::emit::emit(self, format, path)
    }
}

/// Parse the canonical JSON document produced by [`Tiling::to_json_string`].
pub fn tiling_from_json_str(s: &str) -> Result<Tiling, TilingError> {
    crate::emit::from_json_str(s)
}

/// Walk the corner orbits of the gluing and classify every vertex.
///
/// The successor of a directed edge e around the vertex at its start corner
/// is the face-successor of its partner; orbits of that permutation are the
/// vertices.  Every orbit's corner positions must agree on a single class
/// under the boundary position rules, and the orbit size must match the
/// cone angle of that class (2 corners at a pole, 4 at a regular point,
/// 6 at a zero); an inconsistency is reported as an error (it never occurs
/// for tilings produced by [`build`]).
pub(crate) fn classify_vertices(t: &mut Tiling) -> Result<(), String> {
    let n_edges = t.gluing.len();
    let mut orbit_of = vec![u32::MAX; n_edges];
    let mut orbits: Vec<(VertexClass, u8, (usize, u64, u64))> = Vec::new();
    for start in 0..n_edges {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        let mut corners = Vec::new();
        let mut e = start;
        loop {
            orbit_of[e] = id;
            corners.push(t.corner_position(e));
            let (p, _) = t.gluing[e];
            // Face successor of the partner: next side of the same square.
            let p = p as usize;
            e = 4 * (p / 4) + (p % 4 + 1) % 4;
            if e == start {
                break;
            }
            if corners.len() > n_edges {
                return Err("corner walk does not close up".into());
            }
        }
        let classes: Vec<VertexClass> = corners
            .iter()
            .map(|&(ci, x, y)| position_class(&t.cyls[ci], x, y))
            .collect();
        let class = classes[0];
        if !classes.iter().all(|&c| c == class) {
            return Err(format!(
                "corner orbit mixes vertex classes: {corners:?} -> {classes:?}"
            ));
        }
        if corners.len() != class.corner_count() as usize {
            return Err(format!(
                "corner orbit at {:?} has size {} but class {:?}",
                corners[0],
                corners.len(),
                class
            ));
        }
        let position = *corners.iter().min().expect("orbit is nonempty");
        orbits.push((class, corners.len() as u8, position));
    }
    // Sort vertex records by representative position (unique per vertex).
    let mut order: Vec<usize> = (0..orbits.len()).collect();
    order.sort_by_key(|&i| orbits[i].2);
    let mut rank = vec![0u32; orbits.len()];
    for (new_rank, &old) in order.iter().enumerate() {
        rank[old] = new_rank as u32;
    }
    t.vertices = order
        .iter()
        .map(|&i| VertexRecord {
            class: orbits[i].0,
            corner_count: orbits[i].1,
            position: orbits[i].2,
        })
        .collect();
    t.corner_vertex = orbit_of.iter().map(|&o| rank[o as usize]).collect();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_degenerate_degrees() {
        for d in [0, 1, 4, 6, 9, 15] {
            assert!(matches!(build(d), Err(TilingError::UnsupportedDegree(x)) if x == d));
        }
    }

    #[test]
    fn d2_is_the_standard_pillowcase() {
        let t = build(2).unwrap();
        assert_eq!(t.squares.len(), 2);
        assert_eq!(t.cyls.len(), 1);
        let census = t.vertex_census();
        assert_eq!(
            (census.zeros, census.non_cusp_poles, census.cusp_poles, census.regular),
            (0, 1, 3, 0)
        );
        assert_eq!(t.genus(), 0);
    }

    #[test]
    fn d3_squares_and_gluing_match_hand_computation() {
        let t = build(3).unwrap();
        assert_eq!(t.squares.len(), 8);
        // Cylinder 0 is the lighthouse (1,1),(1,2); cylinder 1 the eave (1,1),(2,1).
        assert_eq!(t.cyls[0], CylSpec::new(1, 1, 0, 1, 2, 0));
        assert_eq!(t.cyls[1], CylSpec::new(1, 1, 0, 2, 1, 0));
        // Lighthouse bottom edge 0 lands on eave top edge 1 by translation.
        let (sq, side, parity) = t.partner(t.square_id(0, 0, 0), Side::Bottom);
        assert_eq!(t.squares[sq], Square { cyl: 1, col: 1, row: 0 });
        assert_eq!((side, parity), (Side::Top, Parity::Translation));
        // Eave bottom edge 1 folds onto eave bottom edge 2 by rotation.
        let (sq, side, parity) = t.partner(t.square_id(1, 1, 0), Side::Bottom);
        assert_eq!(t.squares[sq], Square { cyl: 1, col: 2, row: 0 });
        assert_eq!((side, parity), (Side::Bottom, Parity::RotationByPi));
        let census = t.vertex_census();
        assert_eq!(
            (census.zeros, census.non_cusp_poles, census.cusp_poles, census.regular),
            (3, 3, 4, 0)
        );
        assert_eq!(t.genus(), 0);
    }

    #[test]
    fn eave_bottom_partner_is_an_involution_on_x5() {
        let t = build(5).unwrap();
        for (ci, c) in t.cyls.iter().enumerate() {
            if c.s1 != c.s2 {
                continue;
            }
            for e in 0..c.circumference() {
                let (cj, ep) = eave_bottom_partner(5, &t.cyls, ci, e);
                let (ci2, e2) = eave_bottom_partner(5, &t.cyls, cj, ep);
                assert_eq!((ci2, e2), (ci, e));
            }
        }
    }

    #[test]
    fn position_classes_on_the_x5_body_cylinder() {
        // The (1,1),(2,2) cylinder of X(5): width 6, height 1.
        let c = CylSpec::new(1, 1, 0, 2, 2, 0);
        assert_eq!(position_class(&c, 0, 0), VertexClass::NonCuspPole);
        assert_eq!(position_class(&c, 1, 0), VertexClass::Zero);
        assert_eq!(position_class(&c, 2, 0), VertexClass::Zero);
        assert_eq!(position_class(&c, 3, 0), VertexClass::NonCuspPole);
        // Bottom: s1 < s2, so zeroes at multiples of w1 = 1: every corner.
        for x in 0..6 {
            assert_eq!(position_class(&c, x, 1), VertexClass::Zero);
        }
    }
}
