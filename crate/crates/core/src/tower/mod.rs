//! Sequences of invariants along `Q > Q^p > Q^(p^2) > ...`, corank-one
//! scans, and the valuation analysis of
//! `f = (1+t)^lambda + (1+t)^-lambda + (1+t) + (1+t)^-1 - 4`.

mod king;
mod levels;
mod scan;

use serde::Serialize;

pub use king::{
    default_king_degree, king_g_poly, king_series, king_sweep, king_valuation, KingReport,
};
pub use levels::{
    fpdim_tower, full_tower, h1_fpdim_split, h1_rank_bound, level_fpdim, level_rank, rank_tower,
    stabilization_probe, LevelRecord, Route, StabilizationReport, TowerOptions, TowerReport,
};
pub use scan::{
    corank1_scan, default_lambda_grid, lambda_grid, HypothesisReport, SubgroupDim,
    DEFAULT_RANDOM_LAMBDAS,
};

/// What a finite range of observations supports. Nothing here claims
/// finiteness of a supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    BoundedOnRange,
    UnboundedGrowthDetected,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::BoundedOnRange => "bounded-on-range",
            Verdict::UnboundedGrowthDetected => "unbounded-growth-detected",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}
