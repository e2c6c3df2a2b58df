//! Lattice arithmetic for deciding when the moduli space `Y` of sheaves with
//! isotropic Mukai vector `(r, H, s)` on a K3 surface `X` of Picard rank 2 is
//! isomorphic to `X`, and for enumerating the divisorial conditions that
//! force it.
//!
//! Everything is exact integer arithmetic over [`num_bigint::BigInt`].
//! Searches over Pell-type equations are bounded; a negative answer is
//! always reported together with the bound that was used.

pub mod arith;
pub mod charmap;
pub mod criteria_x;
pub mod divisorial;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod pell;
pub mod selftest;
pub mod y_side;

pub use error::{Error, Result};
pub use lattice::{mukai_m, mukai_split, LatticeVector, MukaiShape, Series, Sign, XLattice};

/// Default `|q|` bound for the decision procedures.
pub const DEFAULT_Q_BOUND: u64 = 10_000;

/// Outcome of a bounded decision procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W> {
    /// Witnesses found; each one is checked exactly.
    Yes(Vec<W>),
    /// Nothing found with `|q| <= q_bound`. Not a proof of non-existence.
    NoWithinBound { q_bound: u64 },
    /// Ruled out without any search.
    No { reason: String },
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn witnesses(&self) -> &[W] {
        match self {
            Verdict::Yes(w) => w,
            _ => &[],
        }
    }
}
