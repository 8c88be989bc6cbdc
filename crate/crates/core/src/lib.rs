//! Sum-of-element-orders toolkit over dense Cayley tables.
//!
//! The crate computes ψ(G), the sum of the orders of the elements of a finite
//! group, and its normalization ψ′(G) = ψ(G)/ψ(C_|G|). It also tests
//! subgroup-lattice modularity, enumerates small groups up to isomorphism and
//! runs classification campaigns over the resulting catalogs.

pub mod classify;
pub mod constructions;
pub mod error;
pub mod group;
pub mod lattice;
pub mod limits;
pub mod numeric;
pub mod psi;
pub mod smallgroups;

pub use error::{Error, Result};
pub use group::{FiniteGroup, SubgroupSet};
pub use limits::Limits;
pub use numeric::{ExactRational, Factorization, Nat};
