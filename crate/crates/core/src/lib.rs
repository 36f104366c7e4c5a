//! Exact dimension formulas for spaces of cusp forms `S_{2k}(Gamma0(N))`,
//! their newspaces and Atkin-Lehner sign-pattern subspaces, together with
//! certified searches over the level- and weight-indexed dimension sequences.

pub mod numthy;
pub mod dimension;
pub mod certify;
pub mod sequence;
pub mod signpattern;

pub use dimension::{SpaceKind, Weight};
pub use numthy::{Factorization, Rational};
