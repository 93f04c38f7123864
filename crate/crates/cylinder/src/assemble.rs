//! Build a permutation-pair surface from integral three-cylinder data.

use origami::Origami;

/// Integral three-cylinder data: `C1 = w1 × h1` and `C2 = w2 × h2` above the
/// wrap cylinder `C3 = (w1 + w2) × h3`, with integer twists.  Heights may be
/// zero (boundary degenerations); widths must be positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssemblyData {
    pub w1: u64,
    pub h1: u64,
    pub w2: u64,
    pub h2: u64,
    pub h3: u64,
    pub t1: u64,
    pub t2: u64,
    pub t3: u64,
}

impl AssemblyData {
    pub fn w3(&self) -> u64 {
        self.w1 + self.w2
    }

    pub fn total_squares(&self) -> u64 {
        self.w1 * self.h1 + self.w2 * self.h2 + self.w3() * self.h3
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cyl {
    C1,
    C2,
    C3,
}

/// Glue the three cylinders into a permutation pair.
///
/// Square layout (row 0 at the bottom of each cylinder, y grows upward):
/// * seam: the bottom of `C1` at column `u` is the top of `C3` at column `u`,
///   the bottom of `C2` at `u` is the top of `C3` at `w1 + u`;
/// * wrap: the top of `C1` at column `u` returns to the bottom of `C3` at
///   column `(t3 + (u - t1 mod w1)) mod w3`, and the top of `C2` at `u` to
///   `(t3 + w1 + (u - t2 mod w2)) mod w3`.
///
/// Cylinders of height zero are passed through transparently.
pub fn assemble(data: &AssemblyData) -> Origami {
    let (w1, h1, w2, h2, h3) = (data.w1, data.h1, data.w2, data.h2, data.h3);
    let w3 = data.w3();
    let n1 = (w1 * h1) as usize;
    let n2 = (w2 * h2) as usize;
    let n3 = (w3 * h3) as usize;
    let total = n1 + n2 + n3;
    assert!(total > 0, "assembly needs at least one square");

    let width = |c: Cyl| match c {
        Cyl::C1 => w1,
        Cyl::C2 => w2,
        Cyl::C3 => w3,
    };
    let height = |c: Cyl| match c {
        Cyl::C1 => h1,
        Cyl::C2 => h2,
        Cyl::C3 => h3,
    };
    let base = |c: Cyl| match c {
        Cyl::C1 => 0,
        Cyl::C2 => n1,
        Cyl::C3 => n1 + n2,
    };
    let index = |c: Cyl, col: u64, row: u64| -> usize {
        base(c) + (row * width(c) + col) as usize
    };

    // Crossing the top of a cylinder at a column: where does the flow enter next?
    let exit_top = |c: Cyl, col: u64| -> (Cyl, u64) {
        match c {
            Cyl::C1 => (Cyl::C3, (data.t3 + (col + w1 - data.t1 % w1) % w1) % w3),
            Cyl::C2 => (Cyl::C3, (data.t3 + w1 + (col + w2 - data.t2 % w2) % w2) % w3),
            Cyl::C3 => {
                if col < w1 {
                    (Cyl::C1, col)
                } else {
                    (Cyl::C2, col - w1)
                }
            }
        }
    };
    // Enter a cylinder from below at a column, passing through empty ones.
    let enter_bottom = |mut c: Cyl, mut col: u64| -> usize {
        let mut hops = 0;
        while height(c) == 0 {
            let (nc, ncol) = exit_top(c, col);
            c = nc;
            col = ncol;
            hops += 1;
            assert!(hops <= 3, "zero-height pass-through must terminate");
        }
        index(c, col, 0)
    };

    let mut h = vec![usize::MAX; total];
    let mut v = vec![usize::MAX; total];
    for c in [Cyl::C1, Cyl::C2, Cyl::C3] {
        for row in 0..height(c) {
            for col in 0..width(c) {
                let i = index(c, col, row);
                h[i] = index(c, (col + 1) % width(c), row);
                v[i] = if row + 1 < height(c) {
                    index(c, col, row + 1)
                } else {
                    let (nc, ncol) = exit_top(c, col);
                    enter_bottom(nc, ncol)
                };
            }
        }
    }
    Origami::new(h, v).expect("assembly produces permutations")
}

#[cfg(test)]
mod tests {
    use super::*;
    use origami::Stratum;

    #[test]
    fn smallest_generic_surface() {
        // d = 2 at an interior half-integer point: all data scaled by the
        // re-marking; this instance is the four-square surface of type (2, 2).
        let data = AssemblyData {
            w1: 1,
            h1: 1,
            w2: 1,
            h2: 1,
            h3: 1,
            t1: 0,
            t2: 0,
            t3: 1,
        };
        let o = assemble(&data);
        assert_eq!(o.n_squares(), 4);
        let sig = o.validate().unwrap();
        assert_eq!(sig.stratum, Stratum::H11);
        assert_eq!((sig.degree, sig.torsion), (2, 2));
    }

    #[test]
    fn zero_wrap_height_gives_double_zero() {
        // Boundary point h3 = 0 of the degree-3 tiling at x = 1 (a zero of
        // the boundary graph): squares of C1 and C2 glue straight through the
        // empty wrap cylinder.
        let data = AssemblyData {
            w1: 1,
            h1: 1,
            w2: 2,
            h2: 1,
            h3: 0,
            t1: 0,
            t2: 1,
            t3: 1,
        };
        let o = assemble(&data);
        assert_eq!(o.n_squares(), 3);
        let sig = o.validate().unwrap();
        assert_eq!(sig.stratum, Stratum::H2);
        assert_eq!(sig.degree, 3);
    }

    #[test]
    fn pole_position_disconnects() {
        // The same boundary row at x = 0 is a pole: the complex falls apart
        // into two tori pinched at a point.
        let data = AssemblyData {
            w1: 1,
            h1: 1,
            w2: 2,
            h2: 1,
            h3: 0,
            t1: 0,
            t2: 0,
            t3: 0,
        };
        let o = assemble(&data);
        assert!(o.validate().is_err());
    }

    #[test]
    fn counts_squares() {
        let data = AssemblyData {
            w1: 2,
            h1: 1,
            w2: 3,
            h2: 2,
            h3: 1,
            t1: 1,
            t2: 0,
            t3: 4,
        };
        assert_eq!(data.total_squares(), 2 + 6 + 5);
        let o = assemble(&data);
        assert_eq!(o.n_squares(), 13);
    }
}
