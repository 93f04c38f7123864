//! Orbits of the integer shear group on square-tiled surfaces.
//!
//! The group generated by the shear `S = (1 1; 0 1)` and the quarter turn
//! `R = (0 −1; 1 0)` acts on the finite set `ST(d, n)` of reduced genus-2
//! pairs of degree `d` and torsion `n`, and equivalently on the primitive
//! `n`-rational points of the square-tiled modular curve X(d).  This crate
//! computes the orbit partition of either model, evaluates the closed-form
//! unipotent and rotation moves available on the eave and lighthouse
//! cylinders of X(d), and produces verification reports comparing the orbit
//! counts against the expected component counts.

mod partition;
mod report;
mod unipotent;

pub use partition::orbit_partition;
pub use report::{
    verify_parity, verify_parity_cached, OrbitReport, OrbitSummary, Verdict, Witness,
    ORBIT_ELEMENT_BUDGET, SQUARE_BUDGET,
};
pub use unipotent::{eave_shift, nu, rotate_lighthouse, twist_t};

/// Errors arising from orbit computation and the closed-form moves.
#[derive(Debug, thiserror::Error)]
pub enum OrbitsError {
    /// The requested `(d, n)` family is too large to enumerate or partition.
    #[error("budget exceeded for (d, n) = ({d}, {n}): need {needed} {unit}, cap {cap}")]
    BudgetExceeded {
        d: u64,
        n: u64,
        needed: u128,
        cap: u64,
        unit: &'static str,
    },
    /// A row parameter shares a factor with the denominator.
    #[error("gcd precondition failed: gcd({b}, {n}) = {g} is not 1")]
    GcdPrecondition { b: u64, n: u64, g: u64 },
    /// The point does not lie on an eave cylinder.
    #[error("point does not lie on an eave cylinder")]
    NotAnEave,
    /// The point does not lie in a lighthouse cylinder.
    #[error("point does not lie in a lighthouse cylinder")]
    NotALighthouse,
    /// Reading or writing a cached report failed.
    #[error("cache I/O failed")]
    Io(#[from] std::io::Error),
}

/// Deterministic primality test for the small degrees in play.
pub(crate) fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}
