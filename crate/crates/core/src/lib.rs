//! Rank-width and pivot-minors of skew-symmetric or symmetric matrices over
//! small finite fields: Lagrangian chain-groups and their matrix
//! representations, connectivity and width parameters, the generalized
//! linking theorem with witnesses, boundaried sums, representable
//! delta-matroids, and the chain-group route from matroids — all exact, at
//! desk scale, with brute-force oracles next to every structural claim.

pub mod boundary;
pub mod chaingroup;
pub mod containment;
pub mod deltamatroid;
pub mod error;
pub mod fmatrix;
pub mod gf;
pub mod half;
pub mod linking;
pub mod subset;
pub mod tuttebridge;
pub mod widths;

pub(crate) mod linalg;

pub use error::{Error, Result};
pub use half::Half;
pub use subset::Subset;
