//! Exact computations for homology growth in towers of metabelian pro-p
//! groups `G = A x| Q` with `Q = Z_p^n`.
//!
//! The module `A` is given by generators and relations over the group ring
//! of `Q`. From it the crate computes torsion-free ranks and `F_p`-dimensions
//! of the coinvariants `A (x)_{Z_p[[Q^(p^s)]]} Z_p` along the tower
//! `Q > Q^p > Q^(p^2) > ...`, the `F_p`-dimensions of `A (x)_{Z_p[[H]]} F_p`
//! for corank-one subgroups `H`, and the generator-count bounds that tie
//! these quantities to `H_1` of finite-index subgroups.
//!
//! Everything is exact: integers are arbitrary precision, p-adic numbers
//! and power series carry their precision, and results that truncation
//! cannot certify are reported as lower bounds ([`ExtInt::AtLeast`]).

pub mod bounds;
pub mod error;
pub mod extint;
pub mod group_ring;
pub mod linalg;
pub mod padic;
pub mod primes;
pub mod series;
pub mod tower;

pub use error::{Error, Result};
pub use extint::ExtInt;
pub use group_ring::{
    expand_level, parse_presentation, LaurentPoly, LevelMatrix, ModulePresentation,
};
pub use linalg::{
    cokernel_fp_dim, dvr_snf, integer_snf, rank_over_fp, rank_over_q, DvrSnfResult, IntegerMatrix,
    SeriesMatrix,
};
pub use padic::{digit_split, padic_binomial, DigitSplit, PadicInt};
pub use series::{one_plus_t_pow, TruncatedSeries};
pub use tower::{Route, TowerOptions, Verdict};
