//! Exact linear algebra: integer matrices over `Z`, `Q` and `F_p`, and
//! matrices over the truncated discrete valuation ring `F_p[[t]]`.

mod dvr;
mod fp;
mod integer;

pub use dvr::{cokernel_fp_dim, dvr_snf, DvrSnfResult, SeriesMatrix};
pub use fp::rank_over_fp;
pub use integer::{integer_snf, rank_over_q, rank_over_q_modular, IntegerMatrix};
