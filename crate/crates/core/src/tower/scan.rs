use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::group_ring::{substitute_character, ModulePresentation};
use crate::linalg::{cokernel_fp_dim, SeriesMatrix};
use crate::padic::PadicInt;
use crate::primes::ensure_prime;
use crate::series::required_lambda_precision;

use super::Verdict;

pub const DEFAULT_RANDOM_LAMBDAS: usize = 20;

/// `dim_Fp (A (x)_{Z_p[[H]]} F_p)` for one corank-one subgroup `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupDim {
    pub lambda: PadicInt,
    pub axis_swap: bool,
    /// `H` written out, e.g. `<x*y^-(7)>`.
    pub subgroup: String,
    pub fp_dim: ExtInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub p: u64,
    #[serde(rename = "D")]
    pub trunc_degree: usize,
    pub lambdas: Vec<PadicInt>,
    /// Ordered by `lambda`, then unswapped before swapped.
    pub entries: Vec<SubgroupDim>,
    pub sup_observed: ExtInt,
    /// False exactly when some dimension is only known to be `>= D`.
    pub hypothesis_plausible: bool,
    pub verdict: Verdict,
}

fn subgroup_label(lam: &PadicInt, axis_swap: bool) -> String {
    let (a, b) = if axis_swap { ("y", "x") } else { ("x", "y") };
    format!("<{a}*{b}^-({})>", lam.residue())
}

/// Scans `H = <x y^-lambda>` and `H = <y x^-lambda>` for every `lambda`.
pub fn corank1_scan(
    pres: &ModulePresentation,
    lambdas: &[PadicInt],
    trunc_degree: usize,
) -> Result<HypothesisReport> {
    if pres.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "corank-one scans need rank 2, got {}",
            pres.n()
        )));
    }
    if trunc_degree == 0 {
        return Err(Error::InvalidArgument(
            "truncation degree must be positive".into(),
        ));
    }
    let p = pres.p();
    let jobs: Vec<(&PadicInt, bool)> = lambdas
        .iter()
        .flat_map(|l| [(l, false), (l, true)])
        .collect();
    let entries = jobs
        .into_par_iter()
        .map(|(lam, axis_swap)| {
            let rows = substitute_character(pres, lam, axis_swap, trunc_degree, 1)?;
            let m = SeriesMatrix::from_rows(p, trunc_degree, rows, pres.gens())?;
            Ok(SubgroupDim {
                lambda: lam.clone(),
                axis_swap,
                subgroup: subgroup_label(lam, axis_swap),
                fp_dim: cokernel_fp_dim(&m),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sup_observed = entries
        .iter()
        .map(|e| e.fp_dim)
        .max()
        .unwrap_or(ExtInt::Exact(0));
    let hypothesis_plausible = entries.iter().all(|e| e.fp_dim.is_exact());
    Ok(HypothesisReport {
        p,
        trunc_degree,
        lambdas: lambdas.to_vec(),
        entries,
        sup_observed,
        hypothesis_plausible,
        verdict: if hypothesis_plausible {
            Verdict::BoundedOnRange
        } else {
            Verdict::Inconclusive
        },
    })
}

/// `lambda = 0, ..., modulus - 1` followed by `random` seeded draws, all
/// with `precision` digits.
pub fn lambda_grid(
    p: u64,
    precision: u32,
    residues_mod: u64,
    random: usize,
    seed: u64,
) -> Result<Vec<PadicInt>> {
    ensure_prime(p)?;
    let mut out = (0..residues_mod)
        .map(|r| PadicInt::new(p, precision, BigUint::from(r)))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let digits: Vec<u64> = (0..precision).map(|_| rng.random_range(0..p)).collect();
        out.push(PadicInt::from_digits(p, &digits)?);
    }
    Ok(out)
}

/// All residues mod `p^2` and [`DEFAULT_RANDOM_LAMBDAS`] random values,
/// with enough digits for truncation degree `D` (at least 4).
pub fn default_lambda_grid(p: u64, trunc_degree: usize, seed: u64) -> Result<Vec<PadicInt>> {
    let precision = required_lambda_precision(p, trunc_degree, 1).max(4);
    lambda_grid(p, precision, p * p, DEFAULT_RANDOM_LAMBDAS, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::parse_presentation;

    #[test]
    fn king_module_dims_stay_below_p() {
        let m = parse_presentation("p=5; n=2; rel: p; rel: x + x^-1 + y + y^-1 - 4").unwrap();
        let lams = lambda_grid(5, 4, 25, 0, 0).unwrap();
        let report = corank1_scan(&m, &lams, 10).unwrap();
        assert_eq!(report.entries.len(), 50);
        assert!(report.hypothesis_plausible);
        assert!(report.sup_observed <= ExtInt::Exact(4));
        assert_eq!(report.verdict, Verdict::BoundedOnRange);
    }

    #[test]
    fn trivial_axis_is_flagged() {
        let m = parse_presentation("p=3; n=2; rel: y - 1").unwrap();
        let lams = default_lambda_grid(3, 8, 7).unwrap();
        let report = corank1_scan(&m, &lams, 8).unwrap();
        assert!(!report.hypothesis_plausible);
        assert_eq!(report.sup_observed, ExtInt::AtLeast(8));
        let flagged: Vec<_> = report
            .entries
            .iter()
            .filter(|e| !e.fp_dim.is_exact())
            .collect();
        assert!(flagged.iter().any(|e| e.subgroup == "<y*x^-(0)>"));
    }

    #[test]
    fn eliminating_relation_gives_finite_dims() {
        let m = parse_presentation("p=3; n=2; rel: p; rel: y - 2*x + 1").unwrap();
        let report = corank1_scan(&m, &default_lambda_grid(3, 6, 1).unwrap(), 6).unwrap();
        assert!(report.hypothesis_plausible);
    }

    #[test]
    fn grid_is_reproducible() {
        let a = default_lambda_grid(5, 10, 42).unwrap();
        let b = default_lambda_grid(5, 10, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 45);
        assert_ne!(a, default_lambda_grid(5, 10, 43).unwrap());
        assert!(corank1_scan(&parse_presentation("p=5; n=1").unwrap(), &a, 10).is_err());
    }
}
