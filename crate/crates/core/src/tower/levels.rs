use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::group_ring::{
    eliminate_to_one_variable, expand_level, level_columns, ModulePresentation, DEFAULT_SIZE_CAP,
};
use crate::linalg::{cokernel_fp_dim, integer_snf, rank_over_fp, rank_over_q, SeriesMatrix};
use crate::series::TruncatedSeries;

use super::Verdict;

/// How `dim_Fp` of a level is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Rank over `F_p` of the level matrix.
    Block,
    /// Reduction to `F_p[[t]]` through a relation linear in one variable.
    Series,
    /// Series when a relation allows it, block otherwise.
    Auto,
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "block" => Ok(Route::Block),
            "series" => Ok(Route::Series),
            "auto" => Ok(Route::Auto),
            other => Err(Error::InvalidArgument(format!(
                "unknown route {other:?} (expected block, series or auto)"
            ))),
        }
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Block => "block",
            Route::Series => "series",
            Route::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerOptions {
    pub size_cap: u64,
    /// Also report the `p`-primary torsion exponents of each level.
    pub torsion: bool,
    pub route: Route,
    /// Truncation degree for the series route; `p^s + 1` when unset.
    pub degree: Option<usize>,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            size_cap: DEFAULT_SIZE_CAP,
            torsion: false,
            route: Route::Auto,
            degree: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    pub s: u32,
    /// `rk (A (x)_{Z_p[[Q^(p^s)]]} Z_p)`.
    pub rank: Option<u64>,
    /// `dim_Fp (A (x)_{Z_p[[Q^(p^s)]]} F_p)`.
    pub fpdim: Option<ExtInt>,
    /// Route actually used for `fpdim`.
    pub route: Option<Route>,
    /// Exponents `e` of the summands `Z/p^e` of the torsion part.
    pub torsion_exponents: Option<Vec<u64>>,
    /// `n + rank`.
    pub h1_rank_bound: Option<u64>,
    /// `n + fpdim`, the generator count of `H_1(A x| Q^(p^s), F_p)`.
    pub h1_fpdim_split: Option<ExtInt>,
}

impl LevelRecord {
    fn empty(s: u32) -> Self {
        LevelRecord {
            s,
            rank: None,
            fpdim: None,
            route: None,
            torsion_exponents: None,
            h1_rank_bound: None,
            h1_fpdim_split: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub p: u64,
    pub n: usize,
    pub gens: usize,
    pub s_max: u32,
    /// Levels `1..=s_max` in order.
    pub levels: Vec<LevelRecord>,
}

impl TowerReport {
    pub fn ranks(&self) -> Vec<Option<u64>> {
        self.levels.iter().map(|l| l.rank).collect()
    }

    pub fn fpdims(&self) -> Vec<Option<ExtInt>> {
        self.levels.iter().map(|l| l.fpdim).collect()
    }
}

fn check_levels(s_max: u32) -> Result<()> {
    if s_max == 0 {
        return Err(Error::InvalidArgument("levels start at s = 1".into()));
    }
    Ok(())
}

/// Fails with the largest feasible level when level `s_max` exceeds the cap.
fn check_cap(pres: &ModulePresentation, s_max: u32, cap: u64) -> Result<()> {
    let cols = |s| level_columns(pres.p(), pres.n(), s, pres.gens()).unwrap_or(u64::MAX);
    let required = cols(s_max);
    if required <= cap {
        return Ok(());
    }
    let largest_feasible = (0..s_max).rev().find(|&s| cols(s) <= cap).unwrap_or(0);
    Err(Error::LevelCap {
        s: s_max,
        largest_feasible,
        required,
        cap,
    })
}

fn p_torsion_exponents(divisors: &[BigInt], p: u64) -> Vec<u64> {
    let p = BigInt::from(p);
    let mut out: Vec<u64> = divisors
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| {
            let mut d = d.abs();
            let mut e = 0;
            loop {
                let (q, r) = d.div_rem(&p);
                if !r.is_zero() {
                    break e;
                }
                d = q;
                e += 1;
            }
        })
        .filter(|&e| e > 0)
        .collect();
    out.sort_unstable();
    out
}

/// Rank of level `s` and, if requested, its `p`-primary torsion exponents.
pub fn level_rank(
    pres: &ModulePresentation,
    s: u32,
    opts: &TowerOptions,
) -> Result<(u64, Option<Vec<u64>>)> {
    check_levels(s)?;
    let level = expand_level(pres, s, opts.size_cap)?;
    let rank = (level.cols() - rank_over_q(&level.matrix)) as u64;
    let torsion = opts
        .torsion
        .then(|| p_torsion_exponents(&integer_snf(&level.matrix), pres.p()));
    Ok((rank, torsion))
}

fn series_fpdim(pres: &ModulePresentation, s: u32, degree: Option<usize>) -> Result<ExtInt> {
    let p = pres.p();
    let q = p.checked_pow(s).filter(|&q| q < (1 << 24)).ok_or_else(|| {
        Error::InvalidArgument(format!("level {s} is too deep for the series route"))
    })?;
    let d = degree.unwrap_or(q as usize + 1);
    let reduction = eliminate_to_one_variable(pres, d)?;
    let one = TruncatedSeries::constant(p, 1, d, 1)?;
    let mut rows = reduction.rows;
    for image in &reduction.images {
        rows.push(vec![image.pow(q).sub(&one)?]);
    }
    Ok(cokernel_fp_dim(&SeriesMatrix::from_rows(p, d, rows, 1)?))
}

/// `dim_Fp` of level `s` and the route that produced it.
pub fn level_fpdim(
    pres: &ModulePresentation,
    s: u32,
    opts: &TowerOptions,
) -> Result<(ExtInt, Route)> {
    check_levels(s)?;
    let block = || -> Result<(ExtInt, Route)> {
        let level = expand_level(pres, s, opts.size_cap)?;
        let dim = level.cols() - rank_over_fp(&level.matrix, pres.p());
        Ok((ExtInt::Exact(dim as u64), Route::Block))
    };
    match opts.route {
        Route::Block => block(),
        Route::Series => Ok((series_fpdim(pres, s, opts.degree)?, Route::Series)),
        Route::Auto => match series_fpdim(pres, s, opts.degree) {
            Ok(dim) => Ok((dim, Route::Series)),
            Err(Error::RouteInapplicable(_)) => block(),
            Err(e) => Err(e),
        },
    }
}

fn base_report(pres: &ModulePresentation, s_max: u32, levels: Vec<LevelRecord>) -> TowerReport {
    TowerReport {
        p: pres.p(),
        n: pres.n(),
        gens: pres.gens(),
        s_max,
        levels,
    }
}

fn fill_rank(rec: &mut LevelRecord, n: usize, rank: u64, torsion: Option<Vec<u64>>) {
    rec.rank = Some(rank);
    rec.torsion_exponents = torsion;
    rec.h1_rank_bound = Some(n as u64 + rank);
}

fn fill_fpdim(rec: &mut LevelRecord, n: usize, dim: ExtInt, route: Route) {
    rec.fpdim = Some(dim);
    rec.route = Some(route);
    rec.h1_fpdim_split = Some(dim.offset(n as u64));
}

/// Ranks of levels `1..=s_max`, computed concurrently and reported in order.
pub fn rank_tower(
    pres: &ModulePresentation,
    s_max: u32,
    opts: &TowerOptions,
) -> Result<TowerReport> {
    check_levels(s_max)?;
    check_cap(pres, s_max, opts.size_cap)?;
    let levels = (1..=s_max)
        .into_par_iter()
        .map(|s| {
            let (rank, torsion) = level_rank(pres, s, opts)?;
            let mut rec = LevelRecord::empty(s);
            fill_rank(&mut rec, pres.n(), rank, torsion);
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(base_report(pres, s_max, levels))
}

/// `F_p`-dimensions of levels `1..=s_max` by the route in `opts`.
pub fn fpdim_tower(
    pres: &ModulePresentation,
    s_max: u32,
    opts: &TowerOptions,
) -> Result<TowerReport> {
    check_levels(s_max)?;
    if opts.route == Route::Block {
        check_cap(pres, s_max, opts.size_cap)?;
    }
    let levels = (1..=s_max)
        .into_par_iter()
        .map(|s| {
            let (dim, route) = level_fpdim(pres, s, opts)?;
            let mut rec = LevelRecord::empty(s);
            fill_fpdim(&mut rec, pres.n(), dim, route);
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(base_report(pres, s_max, levels))
}

/// Ranks and `F_p`-dimensions together.
pub fn full_tower(
    pres: &ModulePresentation,
    s_max: u32,
    opts: &TowerOptions,
) -> Result<TowerReport> {
    let mut report = rank_tower(pres, s_max, opts)?;
    let dims = fpdim_tower(pres, s_max, opts)?;
    for (rec, other) in report.levels.iter_mut().zip(dims.levels) {
        fill_fpdim(
            rec,
            pres.n(),
            other.fpdim.expect("filled"),
            other.route.expect("filled"),
        );
    }
    Ok(report)
}

/// `n + dim_Fp` at level `s >= 1`; a lower bound stays a lower bound.
pub fn h1_fpdim_split(pres: &ModulePresentation, s: u32, opts: &TowerOptions) -> Result<ExtInt> {
    let (dim, _) = level_fpdim(pres, s, opts)?;
    Ok(dim.offset(pres.n() as u64))
}

/// `n + rank` at level `s >= 1`: an upper bound on
/// `dim_Q_p H_1(G_m, Z_p) (x) Q_p` for every `G_m` containing `A` whose image
/// in `Q` contains `Q^(p^s)`.
pub fn h1_rank_bound(pres: &ModulePresentation, s: u32, opts: &TowerOptions) -> Result<u64> {
    let (rank, _) = level_rank(pres, s, opts)?;
    Ok(pres.n() as u64 + rank)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    pub ranks: Vec<u64>,
    /// Least `s < s_max` with `rank_s = ... = rank_(s_max)`.
    pub stabilized_from: Option<u32>,
    pub verdict: Verdict,
}

impl StabilizationReport {
    pub fn from_ranks(ranks: Vec<u64>) -> Self {
        let s_max = ranks.len();
        let last = ranks.last().copied();
        let tail_start = ranks
            .iter()
            .rposition(|&r| Some(r) != last)
            .map_or(0, |i| i + 1);
        let stabilized_from =
            (s_max >= 2 && tail_start + 1 < s_max).then_some(tail_start as u32 + 1);
        let increasing = s_max >= 2 && ranks.windows(2).all(|w| w[0] < w[1]);
        let verdict = if stabilized_from.is_some() {
            Verdict::BoundedOnRange
        } else if increasing {
            Verdict::UnboundedGrowthDetected
        } else {
            Verdict::Inconclusive
        };
        StabilizationReport {
            ranks,
            stabilized_from,
            verdict,
        }
    }
}

pub fn stabilization_probe(
    pres: &ModulePresentation,
    s_max: u32,
    opts: &TowerOptions,
) -> Result<StabilizationReport> {
    let report = rank_tower(pres, s_max, opts)?;
    Ok(StabilizationReport::from_ranks(
        report
            .levels
            .iter()
            .map(|l| l.rank.expect("filled"))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::parse_presentation;

    fn pres(text: &str) -> ModulePresentation {
        parse_presentation(text).unwrap()
    }

    fn opts(route: Route) -> TowerOptions {
        TowerOptions {
            route,
            ..TowerOptions::default()
        }
    }

    #[test]
    fn free_module_ranks() {
        let m = pres("p=3; n=1");
        let r = rank_tower(&m, 3, &TowerOptions::default()).unwrap();
        assert_eq!(r.ranks(), vec![Some(3), Some(9), Some(27)]);
        let f = fpdim_tower(&m, 3, &opts(Route::Block)).unwrap();
        assert_eq!(
            f.fpdims(),
            vec![
                Some(ExtInt::Exact(3)),
                Some(ExtInt::Exact(9)),
                Some(ExtInt::Exact(27))
            ]
        );
        let f = fpdim_tower(&m, 3, &opts(Route::Series)).unwrap();
        assert_eq!(
            f.fpdims(),
            vec![
                Some(ExtInt::Exact(3)),
                Some(ExtInt::Exact(9)),
                Some(ExtInt::Exact(27))
            ]
        );
        assert_eq!(h1_rank_bound(&m, 2, &TowerOptions::default()).unwrap(), 10);
        assert!(h1_fpdim_split(&m, 0, &TowerOptions::default()).is_err());
        let free2 = pres("p=2; n=2");
        assert_eq!(
            rank_tower(&free2, 2, &TowerOptions::default())
                .unwrap()
                .ranks(),
            vec![Some(4), Some(16)]
        );
    }

    #[test]
    fn unit_twist_has_rank_zero() {
        let m = pres("p=3; n=1; rel: x - 4");
        let r = rank_tower(
            &m,
            3,
            &TowerOptions {
                torsion: true,
                ..TowerOptions::default()
            },
        )
        .unwrap();
        assert_eq!(r.ranks(), vec![Some(0); 3]);
        // |det| = (1+p)^(p^s) - 1 = 4^3 - 1 = 63 = 7 * 3^2 at level 1
        assert_eq!(r.levels[0].torsion_exponents, Some(vec![2]));
        assert_eq!(h1_rank_bound(&m, 2, &TowerOptions::default()).unwrap(), 1);
        let probe = stabilization_probe(&m, 3, &TowerOptions::default()).unwrap();
        assert_eq!(
            (probe.stabilized_from, probe.verdict),
            (Some(1), Verdict::BoundedOnRange)
        );
    }

    #[test]
    fn trivial_axis_grows() {
        let m = pres("p=3; n=2; rel: y - 1");
        let r = rank_tower(&m, 2, &TowerOptions::default()).unwrap();
        assert_eq!(r.ranks(), vec![Some(3), Some(9)]);
        let probe = stabilization_probe(&m, 2, &TowerOptions::default()).unwrap();
        assert_eq!(
            (probe.stabilized_from, probe.verdict),
            (None, Verdict::UnboundedGrowthDetected)
        );
    }

    #[test]
    fn sequences_of_the_examples() {
        let ex1 = pres("p=3; n=2; rel: p; rel: y - 2*x + 1");
        let series = fpdim_tower(&ex1, 4, &opts(Route::Series)).unwrap();
        let expect: Vec<_> = [3, 9, 27, 81]
            .iter()
            .map(|&d| Some(ExtInt::Exact(d)))
            .collect();
        assert_eq!(series.fpdims(), expect);
        let splits: Vec<_> = series
            .levels
            .iter()
            .map(|l| l.h1_fpdim_split.unwrap())
            .collect();
        assert_eq!(splits, [5, 11, 29, 83].map(ExtInt::Exact));
        let block = fpdim_tower(&ex1, 2, &opts(Route::Block)).unwrap();
        assert_eq!(block.fpdims(), expect[..2]);
        assert_eq!(h1_rank_bound(&ex1, 1, &TowerOptions::default()).unwrap(), 2);

        let ex2 = pres("p=2; n=2; rel: p; rel: y - x^2 + x - 1");
        let series = fpdim_tower(&ex2, 6, &opts(Route::Auto)).unwrap();
        let dims: Vec<_> = series
            .levels
            .iter()
            .map(|l| (l.fpdim.unwrap(), l.route.unwrap()))
            .collect();
        assert_eq!(
            dims,
            (1..=6)
                .map(|s| (ExtInt::Exact(1 << s), Route::Series))
                .collect::<Vec<_>>()
        );
        assert_eq!(
            h1_fpdim_split(&ex2, 3, &TowerOptions::default()).unwrap(),
            ExtInt::Exact(10)
        );
        let block = fpdim_tower(&ex2, 2, &opts(Route::Block)).unwrap();
        assert_eq!(block.fpdims(), [2, 4].map(|d| Some(ExtInt::Exact(d))));
    }

    #[test]
    fn auto_falls_back_to_block() {
        let m = pres("p=2; n=2; rel: x^2 + y^2 + 1");
        let (_, route) = level_fpdim(&m, 1, &TowerOptions::default()).unwrap();
        assert_eq!(route, Route::Block);
        assert!(matches!(
            level_fpdim(&m, 1, &opts(Route::Series)),
            Err(Error::RouteInapplicable(_))
        ));
    }

    #[test]
    fn truncated_series_route_reports_bounds() {
        let ex1 = pres("p=3; n=2; rel: p; rel: y - 2*x + 1");
        let o = TowerOptions {
            route: Route::Series,
            degree: Some(5),
            ..TowerOptions::default()
        };
        assert_eq!(level_fpdim(&ex1, 2, &o).unwrap().0, ExtInt::AtLeast(5));
        assert_eq!(h1_fpdim_split(&ex1, 2, &o).unwrap(), ExtInt::AtLeast(7));
    }

    #[test]
    fn cap_reports_feasible_level() {
        let m = pres("p=3; n=2; rel: y - 1");
        let o = TowerOptions {
            size_cap: 100,
            ..TowerOptions::default()
        };
        match rank_tower(&m, 4, &o) {
            Err(Error::LevelCap {
                largest_feasible,
                required,
                ..
            }) => {
                assert_eq!((largest_feasible, required), (2, 6561));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stabilization_vocabulary() {
        let r = StabilizationReport::from_ranks(vec![4, 2, 2, 2]);
        assert_eq!(
            (r.stabilized_from, r.verdict),
            (Some(2), Verdict::BoundedOnRange)
        );
        let r = StabilizationReport::from_ranks(vec![1, 2, 2, 3]);
        assert_eq!(
            (r.stabilized_from, r.verdict),
            (None, Verdict::Inconclusive)
        );
        let r = StabilizationReport::from_ranks(vec![5]);
        assert_eq!(
            (r.stabilized_from, r.verdict),
            (None, Verdict::Inconclusive)
        );
    }

    #[test]
    fn trivial_action_is_constant() {
        let m = pres("p=3; n=2; rel: x^3 - 1; rel: y^3 - 1");
        let probe = stabilization_probe(&m, 3, &TowerOptions::default()).unwrap();
        assert_eq!(probe.ranks, vec![9, 9, 9]);
        assert_eq!(probe.stabilized_from, Some(1));
    }
}
