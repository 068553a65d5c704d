use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::padic::{digit_split, DigitSplit, PadicInt};
use crate::series::{one_plus_t_pow, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KingReport {
    pub lambda: PadicInt,
    pub split: DigitSplit,
    /// `t`-adic valuation of `f` over `F_p`.
    pub valuation: ExtInt,
    /// `f = (1+t)^lambda + (1+t)^-lambda + (1+t) + (1+t)^-1 - 4` mod `p`.
    pub f_series: TruncatedSeries,
    /// `g = (1+t)^z0 + (1+t)^a0 + (1+t) + (1+t)^(p-1) - 4` mod `p`.
    pub g_poly: TruncatedSeries,
    /// `valuation < p`.
    pub bound_ok: bool,
}

/// Twice `p`: the valuation shows up below degree `p`, the rest is margin.
pub fn default_king_degree(p: u64) -> usize {
    2 * p as usize
}

fn check_odd(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::InvalidArgument(
            "this computation needs an odd prime".into(),
        ));
    }
    Ok(())
}

/// `f_lambda` modulo `(p, t^D)`.
pub fn king_series(lam: &PadicInt, trunc_degree: usize) -> Result<TruncatedSeries> {
    let p = lam.p();
    let x = one_plus_t_pow(lam, trunc_degree, 1)?;
    let x_inv = one_plus_t_pow(&lam.neg(), trunc_degree, 1)?;
    let y = TruncatedSeries::one_plus_t(p, 1, trunc_degree)?;
    let y_inv = y.inverse()?;
    let four = TruncatedSeries::constant(p, 1, trunc_degree, 4)?;
    x.add(&x_inv)?.add(&y)?.add(&y_inv)?.sub(&four)
}

/// `g_lambda` modulo `(p, t^D)`, a polynomial of degree below `p`.
pub fn king_g_poly(split: &DigitSplit, p: u64, trunc_degree: usize) -> Result<TruncatedSeries> {
    let y = TruncatedSeries::one_plus_t(p, 1, trunc_degree)?;
    let four = TruncatedSeries::constant(p, 1, trunc_degree, 4)?;
    y.pow(split.z0)
        .add(&y.pow(split.a0))?
        .add(&y)?
        .add(&y.pow(p - 1))?
        .sub(&four)
}

/// Valuation of `f_lambda`, checked against `g_lambda` modulo `t^p`.
pub fn king_valuation(lam: &PadicInt, p: u64, trunc_degree: usize) -> Result<KingReport> {
    check_odd(p)?;
    if lam.p() != p {
        return Err(Error::ParameterMismatch(format!(
            "lambda is {}-adic, expected p = {p}",
            lam.p()
        )));
    }
    if trunc_degree < p as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "truncation degree {trunc_degree} is below p + 1 = {}",
            p + 1
        )));
    }
    let split = digit_split(lam)?;
    let f_series = king_series(lam, trunc_degree)?;
    let g_poly = king_g_poly(&split, p, trunc_degree)?;
    if f_series.coeffs()[..p as usize] != g_poly.coeffs()[..p as usize] {
        return Err(Error::Invariant(format!(
            "f and g differ below degree {p} for lambda = {lam}"
        )));
    }
    let valuation = f_series.valuation();
    let bound_ok = matches!(valuation, ExtInt::Exact(v) if v < p);
    Ok(KingReport {
        lambda: lam.clone(),
        split,
        valuation,
        f_series,
        g_poly,
        bound_ok,
    })
}

/// [`king_valuation`] for every `lambda`, in input order.
pub fn king_sweep(lambdas: &[PadicInt], p: u64, trunc_degree: usize) -> Result<Vec<KingReport>> {
    lambdas
        .par_iter()
        .map(|lam| king_valuation(lam, p, trunc_degree))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::lambda_grid;

    fn lam(p: u64, v: i64) -> PadicInt {
        PadicInt::from_i64(p, 4, v).unwrap()
    }

    #[test]
    fn small_cases() {
        let r = king_valuation(&lam(5, 0), 5, 10).unwrap();
        assert_eq!(r.valuation, ExtInt::Exact(2));
        assert!(r.bound_ok);
        assert_eq!(
            king_valuation(&lam(5, 3), 5, 10).unwrap().valuation,
            ExtInt::Exact(4)
        );
        assert_eq!(
            king_valuation(&lam(5, 2), 5, 10).unwrap().valuation,
            ExtInt::Exact(4)
        );
        for v in 0..9 {
            assert_eq!(
                king_valuation(&lam(3, v), 3, 6).unwrap().valuation,
                ExtInt::Exact(2)
            );
        }
    }

    #[test]
    fn rejections() {
        assert!(king_valuation(&lam(2, 1), 2, 6).is_err());
        assert!(king_valuation(&lam(5, 1), 5, 5).is_err());
        assert!(matches!(
            king_valuation(&lam(5, 1), 7, 14),
            Err(Error::ParameterMismatch(_))
        ));
    }

    #[test]
    fn zero_lambda_is_t_squared_over_one_plus_t() {
        // f_0 = (1+t) + (1+t)^-1 - 2 = t^2 / (1+t)
        let f = king_series(&lam(7, 0), 12).unwrap();
        let expected: Vec<i64> = (0..12)
            .map(|j| {
                if j < 2 {
                    0
                } else if j % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
            .collect();
        assert_eq!(
            f,
            TruncatedSeries::from_coeffs(7, 1, 12, &expected).unwrap()
        );
    }

    #[test]
    fn symmetric_in_lambda() {
        for l in lambda_grid(7, 4, 49, 5, 3).unwrap() {
            assert_eq!(
                king_series(&l, 14).unwrap(),
                king_series(&l.neg(), 14).unwrap()
            );
        }
    }

    #[test]
    fn sweep_keeps_order() {
        let lams = lambda_grid(7, 4, 49, 0, 0).unwrap();
        let reports = king_sweep(&lams, 7, 14).unwrap();
        assert!(reports
            .iter()
            .zip(&lams)
            .all(|(r, l)| &r.lambda == l && r.bound_ok));
    }
}
