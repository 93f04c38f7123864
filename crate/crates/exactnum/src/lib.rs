//! Exact integer, rational, Gaussian-lattice, and 2×2 unimodular-matrix
//! arithmetic underlying every other crate in the workspace.
//!
//! All arithmetic is arbitrary precision; there is no floating point anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

pub type Int = BigInt;
/// Reduced fraction with positive denominator (enforced by `num_rational`).
pub type Rational = num_rational::BigRational;

/// Convenience constructor for an integer `Int`.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Convenience constructor for a reduced rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

/// Rational from an integer.
pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(Int::from(v))
}

/// `v mod m` normalized into `[0, m)` for positive modulus `m`.
pub fn mod_pos(v: &Int, m: &Int) -> Int {
    debug_assert!(m.is_positive());
    let r = v.mod_floor(m);
    debug_assert!(!r.is_negative() && &r < m);
    r
}

/// `v mod m` for rationals, normalized into `[0, m)` for positive rational `m`.
pub fn rat_mod_pos(v: &Rational, m: &Rational) -> Rational {
    debug_assert!(m.is_positive());
    let q = (v / m).floor();
    let r = v - m * q;
    debug_assert!(!r.is_negative() && &r < m);
    r
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumError {
    #[error("vectors span a lattice of rank < 2")]
    RankDeficient,
    #[error("first lattice is not a sublattice of the second")]
    NotSublattice,
    #[error("matrix is not unimodular (determinant {0} != 1)")]
    NotUnimodular(String),
}

/// A vector with two exact rational components, thought of as `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussVec {
    pub re: Rational,
    pub im: Rational,
}

impl GaussVec {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussVec { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussVec::new(rat_int(re), rat_int(im))
    }

    pub fn zero() -> Self {
        GaussVec::new(Rational::zero(), Rational::zero())
    }

    pub fn is_integral(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn add(&self, other: &GaussVec) -> GaussVec {
        GaussVec::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &GaussVec) -> GaussVec {
        GaussVec::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn scale(&self, k: &Rational) -> GaussVec {
        GaussVec::new(&self.re * k, &self.im * k)
    }
}

impl fmt::Display for GaussVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.re, self.im)
    }
}

/// A finite-index sublattice of ℤ² in column Hermite normal form.
///
/// The basis matrix is `[[a, b], [0, c]]` (columns `(a,0)` and `(b,c)`) with
/// `a > 0`, `c > 0`, `0 ≤ b < a`. This normal form is unique per lattice, so
/// structural equality is lattice equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice2 {
    a: Int,
    b: Int,
    c: Int,
}

impl Lattice2 {
    /// The full lattice ℤ² = ℤ[i].
    pub fn unit() -> Self {
        Lattice2 {
            a: Int::one(),
            b: Int::zero(),
            c: Int::one(),
        }
    }

    /// Build from raw HNF entries, normalizing `b` into `[0, a)`.
    pub fn from_hnf(a: Int, b: Int, c: Int) -> Self {
        assert!(a.is_positive() && c.is_positive(), "HNF diagonal must be positive");
        let b = mod_pos(&b, &a);
        Lattice2 { a, b, c }
    }

    pub fn basis(&self) -> [(Int, Int); 2] {
        [(self.a.clone(), Int::zero()), (self.b.clone(), self.c.clone())]
    }

    pub fn hnf_entries(&self) -> (Int, Int, Int) {
        (self.a.clone(), self.b.clone(), self.c.clone())
    }

    pub fn det(&self) -> Int {
        &self.a * &self.c
    }

    /// Membership test for an integer vector.
    pub fn contains(&self, x: &Int, y: &Int) -> bool {
        if !y.mod_floor(&self.c).is_zero() {
            return false;
        }
        let k = y.div_floor(&self.c);
        (x - k * &self.b).mod_floor(&self.a).is_zero()
    }

    /// Membership test for a rational vector (false unless it is integral).
    pub fn contains_vec(&self, v: &GaussVec) -> bool {
        if !v.is_integral() {
            return false;
        }
        self.contains(v.re.numer(), v.im.numer())
    }

    /// The lattice `{k·v : k ∈ ℤ} + self` need not be integral; this instead
    /// returns the sum `self + span(extra)` for integer vectors `extra`.
    pub fn join(&self, extra: &[(Int, Int)]) -> Result<Lattice2, NumError> {
        let mut vs: Vec<(Int, Int)> = self
            .basis()
            .into_iter()
            .chain(extra.iter().cloned())
            .collect();
        lattice_span_ints(&mut vs)
    }

    /// Image of this lattice under an integer matrix with positive determinant.
    pub fn transform(&self, m: &Mat2) -> Lattice2 {
        let [(a0, a1), (b0, b1)] = self.basis();
        let v1 = m.apply(&a0, &a1);
        let v2 = m.apply(&b0, &b1);
        lattice_span_ints(&mut vec![v1, v2]).expect("unimodular image keeps rank 2")
    }
}

impl fmt::Display for Lattice2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [0, {}]]", self.a, self.b, self.c)
    }
}

fn lattice_span_ints(vectors: &mut Vec<(Int, Int)>) -> Result<Lattice2, NumError> {
    // Reduce to a vector with minimal positive y via gcd, then gcd the x parts.
    vectors.retain(|(x, y)| !(x.is_zero() && y.is_zero()));
    if vectors.is_empty() {
        return Err(NumError::RankDeficient);
    }
    // Combine all vectors into one with y = gcd of all y's.
    let mut pivot: Option<(Int, Int)> = None;
    let mut xs: Vec<Int> = Vec::new();
    for (x, y) in vectors.drain(..) {
        if y.is_zero() {
            xs.push(x);
            continue;
        }
        pivot = Some(match pivot {
            None => (x, y),
            Some((px, py)) => {
                // Extended gcd: g = s·py + t·y.
                let e = py.extended_gcd(&y);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let nx = &s * &px + &t * &x;
                // The two residual vectors have y divisible by g; push their
                // x-parts after clearing y with the new pivot.
                let q1 = &py / &g;
                let q2 = &y / &g;
                xs.push(&px - &q1 * &nx);
                xs.push(&x - &q2 * &nx);
                (nx, g)
            }
        });
    }
    let (px, py) = pivot.ok_or(NumError::RankDeficient)?;
    let mut a = Int::zero();
    for x in xs {
        a = a.gcd(&x);
    }
    if a.is_zero() {
        return Err(NumError::RankDeficient);
    }
    let c = py.abs();
    let px = if py.is_negative() { -px } else { px };
    let b = mod_pos(&px, &a);
    Ok(Lattice2 { a, b, c })
}

/// HNF basis of the sublattice of ℤ² spanned by the given integer vectors.
pub fn lattice_span(vectors: &[(Int, Int)]) -> Result<Lattice2, NumError> {
    let mut vs = vectors.to_vec();
    lattice_span_ints(&mut vs)
}

/// Index of `sub` inside `sup`; errors unless `sub ⊆ sup`.
pub fn lattice_index(sub: &Lattice2, sup: &Lattice2) -> Result<Int, NumError> {
    for (x, y) in sub.basis() {
        if !sup.contains(&x, &y) {
            return Err(NumError::NotSublattice);
        }
    }
    let (d_sub, d_sup) = (sub.det(), sup.det());
    debug_assert!((&d_sub % &d_sup).is_zero());
    Ok(d_sub / d_sup)
}

/// Least `m ≥ 1` with `m·v ∈ L` (always exists for rational `v`).
pub fn torsion_order(v: &GaussVec, l: &Lattice2) -> Int {
    // m·v ∈ L ⊆ ℤ² forces lcm(den re, den im) | m.
    let d = v.re.denom().lcm(v.im.denom());
    let wx = v.re.numer() * (&d / v.re.denom());
    let wy = v.im.numer() * (&d / v.im.denom());
    // Least k ≥ 1 with k·w ∈ L divides the group order |ℤ²/L|.
    let order = l.det();
    let mut best: Option<Int> = None;
    let mut k = Int::one();
    while &k * &k <= order {
        if (&order % &k).is_zero() {
            for cand in [k.clone(), &order / &k] {
                if l.contains(&(&wx * &cand), &(&wy * &cand)) {
                    best = Some(match best {
                        None => cand,
                        Some(b) => b.min(cand),
                    });
                }
            }
        }
        k += 1;
    }
    let k = best.expect("order·w is always in L");
    d * k
}

/// 2×2 integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub d: Int,
}

impl Mat2 {
    pub fn new(a: Int, b: Int, c: Int, d: Int) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    pub fn det(&self) -> Int {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn apply(&self, x: &Int, y: &Int) -> (Int, Int) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }

    pub fn apply_vec(&self, v: &GaussVec) -> GaussVec {
        let a = Rational::from_integer(self.a.clone());
        let b = Rational::from_integer(self.b.clone());
        let c = Rational::from_integer(self.c.clone());
        let d = Rational::from_integer(self.d.clone());
        GaussVec::new(&a * &v.re + &b * &v.im, &c * &v.re + &d * &v.im)
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    /// Inverse of a det-1 matrix.
    pub fn inverse_unimodular(&self) -> Result<Mat2, NumError> {
        if !self.det().is_one() {
            return Err(NumError::NotUnimodular(self.det().to_string()));
        }
        Ok(Mat2::new(
            self.d.clone(),
            -&self.b,
            -&self.c,
            self.a.clone(),
        ))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Generator letters for SL₂(ℤ) words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    S,
    SInv,
    R,
    RInv,
}

impl Letter {
    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::S => Mat2::from_i64(1, 1, 0, 1),
            Letter::SInv => Mat2::from_i64(1, -1, 0, 1),
            Letter::R => Mat2::from_i64(0, -1, 1, 0),
            Letter::RInv => Mat2::from_i64(0, 1, -1, 0),
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::SInv,
            Letter::SInv => Letter::S,
            Letter::R => Letter::RInv,
            Letter::RInv => Letter::R,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::S => 'S',
            Letter::SInv => 's',
            Letter::R => 'R',
            Letter::RInv => 'r',
        }
    }
}

/// A word in the generators S = (1 1; 0 1) and R = (0 −1; 1 0) together with
/// its product matrix (letters multiply left to right).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SL2Word {
    letters: Vec<Letter>,
    matrix: Mat2,
}

impl SL2Word {
    pub fn identity() -> Self {
        SL2Word {
            letters: Vec::new(),
            matrix: Mat2::identity(),
        }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        let mut matrix = Mat2::identity();
        for l in &letters {
            matrix = matrix.mul(&l.matrix());
        }
        SL2Word { letters, matrix }
    }

    pub fn single(l: Letter) -> Self {
        SL2Word::from_letters(vec![l])
    }

    /// Parse a compact word: `S` = S, `s` = S⁻¹, `R` = R, `r` = R⁻¹;
    /// whitespace ignored.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut letters = Vec::new();
        for ch in text.chars() {
            match ch {
                'S' => letters.push(Letter::S),
                's' => letters.push(Letter::SInv),
                'R' => letters.push(Letter::R),
                'r' => letters.push(Letter::RInv),
                c if c.is_whitespace() => {}
                other => return Err(format!("unknown generator letter '{other}'")),
            }
        }
        Ok(SL2Word::from_letters(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn concat(&self, other: &SL2Word) -> SL2Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        SL2Word {
            letters,
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    pub fn inverse(&self) -> SL2Word {
        let letters: Vec<Letter> = self.letters.iter().rev().map(|l| l.inverse()).collect();
        SL2Word::from_letters(letters)
    }

    /// Power of S as a word (negative exponents use S⁻¹).
    pub fn s_power(e: i64) -> SL2Word {
        let letter = if e >= 0 { Letter::S } else { Letter::SInv };
        SL2Word::from_letters(vec![letter; e.unsigned_abs() as usize])
    }

    /// Decompose a determinant-1 integer matrix into a word whose product is
    /// exactly the given matrix (continued-fraction algorithm; `−I = R²`).
    pub fn decompose(m: &Mat2) -> Result<SL2Word, NumError> {
        if !m.det().is_one() {
            return Err(NumError::NotUnimodular(m.det().to_string()));
        }
        // Peel letters off the left: maintain `rest` with m = prefix · rest.
        let mut rest = m.clone();
        let mut letters: Vec<Letter> = Vec::new();
        loop {
            if rest.c.is_zero() {
                break;
            }
            if rest.a.is_zero() || rest.a.magnitude() < rest.c.magnitude() {
                // Left-multiplying rest by R⁻¹ swaps rows with a sign; record
                // R on the prefix.
                letters.push(Letter::R);
                rest = Letter::RInv.matrix().mul(&rest);
                continue;
            }
            // Reduce |a| below |c| via a ← a − q·c; prefix gains S^q.
            let q = rest.a.div_floor(&rest.c);
            push_s_power(&mut letters, &q);
            let sq_inv = Mat2::new(Int::one(), -&q, Int::zero(), Int::one());
            rest = sq_inv.mul(&rest);
        }
        // rest is upper triangular with det 1: diag (1,1) or (−1,−1).
        if rest.a.is_one() {
            push_s_power(&mut letters, &rest.b.clone());
        } else {
            // rest = −S^{−b}: −I = R².
            letters.push(Letter::R);
            letters.push(Letter::R);
            push_s_power(&mut letters, &(-&rest.b));
        }
        let word = SL2Word::from_letters(letters);
        debug_assert_eq!(word.matrix(), m, "decomposition must reproduce the matrix");
        Ok(word)
    }
}

fn push_s_power(letters: &mut Vec<Letter>, e: &Int) {
    let letter = if e.is_negative() { Letter::SInv } else { Letter::S };
    let mut k = e.abs();
    while k.is_positive() {
        letters.push(letter);
        k -= 1;
    }
}

impl fmt::Display for SL2Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Format a rational as `a/b` (or `a` when integral) for JSON payloads.
pub fn rat_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `a/b` or `a`.
pub fn rat_from_string(s: &str) -> Result<Rational, String> {
    let parse_int = |t: &str| -> Result<Int, String> {
        t.trim().parse::<Int>().map_err(|e| format!("bad integer '{t}': {e}"))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Rational::new(parse_int(num)?, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(x: i64, y: i64) -> (Int, Int) {
        (int(x), int(y))
    }

    #[test]
    fn span_identity() {
        let l = lattice_span(&[iv(1, 0), iv(0, 1)]).unwrap();
        assert_eq!(l, Lattice2::unit());
    }

    #[test]
    fn span_index_two() {
        let l = lattice_span(&[iv(2, 0), iv(0, 1), iv(2, 1)]).unwrap();
        assert_eq!(l.hnf_entries(), (int(2), int(0), int(1)));
        assert_eq!(lattice_index(&l, &Lattice2::unit()).unwrap(), int(2));
    }

    #[test]
    fn span_rank_deficient() {
        assert_eq!(lattice_span(&[iv(2, 4), iv(1, 2)]), Err(NumError::RankDeficient));
        assert_eq!(lattice_span(&[iv(0, 0)]), Err(NumError::RankDeficient));
    }

    #[test]
    fn span_negative_and_offdiag_reduction() {
        // (3,0) and (5,2): b = 5 mod 3 = 2.
        let l = lattice_span(&[iv(3, 0), iv(5, 2)]).unwrap();
        assert_eq!(l.hnf_entries(), (int(3), int(2), int(2)));
        // Same lattice from messier generators: (2,2) = (5,2)-(3,0), (8,2) = (5,2)+(3,0).
        let l2 = lattice_span(&[iv(-3, 0), iv(2, 2), iv(8, 2)]).unwrap();
        assert_eq!(l, l2);
    }

    #[test]
    fn index_examples() {
        let unit = Lattice2::unit();
        assert_eq!(lattice_index(&unit, &unit).unwrap(), int(1));
        let two = lattice_span(&[iv(2, 0), iv(0, 2)]).unwrap();
        assert_eq!(lattice_index(&two, &unit).unwrap(), int(4));
        let half = lattice_span(&[iv(2, 0), iv(0, 1)]).unwrap();
        assert_eq!(lattice_index(&half, &unit).unwrap(), int(2));
        assert_eq!(lattice_index(&unit, &half), Err(NumError::NotSublattice));
    }

    #[test]
    fn index_multiplicative() {
        let a = lattice_span(&[iv(4, 0), iv(2, 2)]).unwrap();
        let b = lattice_span(&[iv(2, 0), iv(0, 2)]).unwrap();
        let c = Lattice2::unit();
        let iab = lattice_index(&a, &b).unwrap();
        let ibc = lattice_index(&b, &c).unwrap();
        let iac = lattice_index(&a, &c).unwrap();
        assert_eq!(iab * ibc, iac);
    }

    #[test]
    fn torsion_examples() {
        let unit = Lattice2::unit();
        assert_eq!(torsion_order(&GaussVec::zero(), &unit), int(1));
        let v = GaussVec::new(rat(1, 5), rat(2, 5));
        assert_eq!(torsion_order(&v, &unit), int(5));
        let l = lattice_span(&[iv(1, 1), iv(0, 2)]).unwrap();
        let w = GaussVec::new(rat(1, 2), rat(1, 2));
        // 1·w ∉ ℤ², 2·w = (1,1) ∈ L.
        assert_eq!(torsion_order(&w, &l), int(2));
        let u = GaussVec::new(rat(1, 2), rat(0, 1));
        // 2·u = (1,0) ∉ L (x-axis generator is (2,0)), 4·u = (2,0) ∈ L.
        assert_eq!(torsion_order(&u, &l), int(4));
    }

    #[test]
    fn word_matrices() {
        let s = SL2Word::single(Letter::S);
        assert_eq!(*s.matrix(), Mat2::from_i64(1, 1, 0, 1));
        let r = SL2Word::single(Letter::R);
        assert_eq!(*r.matrix(), Mat2::from_i64(0, -1, 1, 0));
        let r4 = SL2Word::parse("RRRR").unwrap();
        assert_eq!(*r4.matrix(), Mat2::identity());
        let ss_inv = SL2Word::parse("Ss").unwrap();
        assert_eq!(*ss_inv.matrix(), Mat2::identity());
        // Left-to-right product: SR = [[1,1],[0,1]]·[[0,-1],[1,0]] = [[1,-1],[1,0]].
        let sr = SL2Word::parse("SR").unwrap();
        assert_eq!(*sr.matrix(), Mat2::from_i64(1, -1, 1, 0));
    }

    #[test]
    fn word_parse_rejects() {
        assert!(SL2Word::parse("SxR").is_err());
    }

    #[test]
    fn decompose_reproduces() {
        for (a, b, c, d) in [
            (1i64, 0, 0, 1),
            (-1, 0, 0, -1),
            (0, -1, 1, 0),
            (1, 5, 0, 1),
            (-1, 3, 0, -1),
            (7, 3, 2, 1),
            (2, 5, 1, 3),
            (-4, -11, 3, 8),
            (13, 5, 5, 2),
        ] {
            let m = Mat2::from_i64(a, b, c, d);
            assert!(m.det().is_one(), "test case must be unimodular");
            let w = SL2Word::decompose(&m).unwrap();
            assert_eq!(w.matrix(), &m, "decompose({m})");
        }
    }

    #[test]
    fn mat_inverse() {
        let m = Mat2::from_i64(7, 3, 2, 1);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), Mat2::identity());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_to_string(&rat(3, 2)), "3/2");
        assert_eq!(rat_to_string(&rat(4, 2)), "2");
        assert_eq!(rat_from_string("3/2").unwrap(), rat(3, 2));
        assert_eq!(rat_from_string("-7").unwrap(), rat_int(-7));
        assert!(rat_from_string("1/0").is_err());
    }

    #[test]
    fn mod_helpers() {
        assert_eq!(mod_pos(&int(-7), &int(5)), int(3));
        assert_eq!(rat_mod_pos(&rat(-3, 2), &rat_int(2)), rat(1, 2));
    }
}
