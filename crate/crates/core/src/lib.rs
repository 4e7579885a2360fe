//! Exact algebra of Hermitian forms over the Laurent polynomial ring
//! `Λ = Z[t, t^-1]` with the involution `t -> t^-1`.
//!
//! - [`laurent`]: ring arithmetic, units and association.
//! - [`forms`]: Hermitian forms, congruence, and certified reduction of block
//!   forms to the standard surface form `H2^g`.
//! - [`wallcalc`]: Wall self-intersection numbers of surfaces given by their
//!   intersection events.
//! - [`homology`]: chain complexes, ranks over `Q(t)` and torsion orders.
//! - [`search`]: bounded congruence search and the stabilization probe.
//! - [`cli`] and [`io`]: the `lamforms` command and its JSON formats.

pub mod cli;
pub mod forms;
pub mod homology;
pub mod io;
pub mod laurent;
pub mod matrix;
pub mod search;
pub mod wallcalc;

pub use forms::{h2_sum, HermitianForm};
pub use laurent::{LaurentPoly, Sign, UnitWitness};
pub use matrix::Matrix;
