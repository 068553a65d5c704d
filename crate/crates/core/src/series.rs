//! Truncated univariate power series over `Z/p^K`.
//!
//! A [`TruncatedSeries`] is an element of `(Z/p^K)[[t]]` known modulo `t^D`.
//! With `K = 1` this is `F_p[[t]] / (t^D)`, the ring in which the coinvariant
//! modules of the corank-one subgroups live.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::padic::{representative_binomials, PadicInt};
use crate::primes::{ensure_prime, factorial_valuation, floor_log, inverse_mod};

const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TruncatedSeries {
    p: u64,
    #[serde(rename = "K")]
    coeff_precision: u32,
    #[serde(rename = "D")]
    trunc_degree: usize,
    #[serde(skip)]
    modulus: u64,
    coeffs: Vec<u64>,
}

fn modulus_for(p: u64, k: u32) -> Result<u64> {
    ensure_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "coefficient precision must be at least 1".into(),
        ));
    }
    match p.checked_pow(k) {
        Some(m) if m < MAX_MODULUS => Ok(m),
        _ => Err(Error::InvalidArgument(format!(
            "coefficient modulus {p}^{k} does not fit the series kernel (limit 2^62)"
        ))),
    }
}

impl TruncatedSeries {
    pub fn zero(p: u64, coeff_precision: u32, trunc_degree: usize) -> Result<Self> {
        if trunc_degree == 0 {
            return Err(Error::InvalidArgument(
                "truncation degree must be at least 1".into(),
            ));
        }
        let modulus = modulus_for(p, coeff_precision)?;
        Ok(TruncatedSeries {
            p,
            coeff_precision,
            trunc_degree,
            modulus,
            coeffs: vec![0; trunc_degree],
        })
    }

    /// Coefficients are reduced into `[0, p^K)`; missing ones are zero and
    /// those at degree `>= D` are dropped.
    pub fn from_coeffs(
        p: u64,
        coeff_precision: u32,
        trunc_degree: usize,
        coeffs: &[i64],
    ) -> Result<Self> {
        let mut s = Self::zero(p, coeff_precision, trunc_degree)?;
        for (c, &v) in s.coeffs.iter_mut().zip(coeffs) {
            *c = v.rem_euclid(s.modulus as i64) as u64;
        }
        Ok(s)
    }

    pub fn constant(p: u64, coeff_precision: u32, trunc_degree: usize, value: i64) -> Result<Self> {
        Self::from_coeffs(p, coeff_precision, trunc_degree, &[value])
    }

    /// `c * t^degree`.
    pub fn monomial(
        p: u64,
        coeff_precision: u32,
        trunc_degree: usize,
        c: i64,
        degree: usize,
    ) -> Result<Self> {
        let mut s = Self::zero(p, coeff_precision, trunc_degree)?;
        if degree < trunc_degree {
            s.coeffs[degree] = c.rem_euclid(s.modulus as i64) as u64;
        }
        Ok(s)
    }

    /// `1 + t`.
    pub fn one_plus_t(p: u64, coeff_precision: u32, trunc_degree: usize) -> Result<Self> {
        Self::from_coeffs(p, coeff_precision, trunc_degree, &[1, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeff_precision(&self) -> u32 {
        self.coeff_precision
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> u64 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.p != other.p
            || self.coeff_precision != other.coeff_precision
            || self.trunc_degree != other.trunc_degree
        {
            return Err(Error::ParameterMismatch(format!(
                "series parameters differ: (p={}, K={}, D={}) vs (p={}, K={}, D={})",
                self.p,
                self.coeff_precision,
                self.trunc_degree,
                other.p,
                other.coeff_precision,
                other.trunc_degree
            )));
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        TruncatedSeries {
            coeffs,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.modulus;
        Ok(self.with_coeffs(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| ((a as u128 + b as u128) % m as u128) as u64)
                .collect(),
        ))
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        self.with_coeffs(self.coeffs.iter().map(|&a| (m - a) % m).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, by: i64) -> Self {
        let m = self.modulus as i128;
        let by = (by as i128).rem_euclid(m);
        self.with_coeffs(
            self.coeffs
                .iter()
                .map(|&a| ((a as i128 * by) % m) as u64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.with_coeffs(mul_truncated(
            &self.coeffs,
            &other.coeffs,
            self.trunc_degree,
            self.modulus,
        )))
    }

    /// Multiplicative inverse; the constant term must be prime to `p`.
    pub fn inverse(&self) -> Result<Self> {
        let out = inverse_truncated(&self.coeffs, self.p, self.modulus)
            .ok_or(Error::NonUnit(self.coeffs[0]))?;
        Ok(self.with_coeffs(out))
    }

    /// Power with a non-negative exponent by repeated squaring.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = self.with_coeffs({
            let mut c = vec![0; self.trunc_degree];
            c[0] = 1 % self.modulus;
            c
        });
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc.coeffs =
                    mul_truncated(&acc.coeffs, &base.coeffs, self.trunc_degree, self.modulus);
            }
            exp >>= 1;
            if exp > 0 {
                base.coeffs =
                    mul_truncated(&base.coeffs, &base.coeffs, self.trunc_degree, self.modulus);
            }
        }
        acc
    }

    /// Power with a signed exponent; negative exponents need a unit.
    pub fn pow_signed(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.inverse()?.pow(exp.unsigned_abs()))
        }
    }

    /// t-adic order: the first degree whose coefficient is nonzero mod `p^K`,
    /// or `AtLeast(D)` when every stored coefficient vanishes.
    pub fn valuation(&self) -> ExtInt {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(j) => ExtInt::Exact(j as u64),
            None => ExtInt::AtLeast(self.trunc_degree as u64),
        }
    }

    /// Reduces the coefficients to `Z/p^k` for `k <= K`.
    pub fn reduce_coefficients(&self, k: u32) -> Result<Self> {
        if k == 0 || k > self.coeff_precision {
            return Err(Error::PrecisionExhausted(format!(
                "cannot reduce coefficients known mod {}^{} to mod {}^{k}",
                self.p, self.coeff_precision, self.p
            )));
        }
        let modulus = modulus_for(self.p, k)?;
        Ok(TruncatedSeries {
            p: self.p,
            coeff_precision: k,
            trunc_degree: self.trunc_degree,
            modulus,
            coeffs: self.coeffs.iter().map(|&c| c % modulus).collect(),
        })
    }

    /// Views the series modulo `t^d` for `d <= D`.
    pub fn truncate(&self, d: usize) -> Result<Self> {
        if d == 0 || d > self.trunc_degree {
            return Err(Error::PrecisionExhausted(format!(
                "cannot view a series known mod t^{} modulo t^{d}",
                self.trunc_degree
            )));
        }
        Ok(TruncatedSeries {
            trunc_degree: d,
            coeffs: self.coeffs[..d].to_vec(),
            ..self.clone()
        })
    }
}

/// Schoolbook product modulo `t^d` and `m`.
pub(crate) fn mul_truncated(a: &[u64], b: &[u64], d: usize, m: u64) -> Vec<u64> {
    let mut out = vec![0u64; d];
    let mm = m as u128;
    for (i, &ai) in a.iter().enumerate().take(d) {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(d - i) {
            if bj == 0 {
                continue;
            }
            let prod = (ai as u128 * bj as u128) % mm;
            out[i + j] = ((out[i + j] as u128 + prod) % mm) as u64;
        }
    }
    out
}

/// Inverse of a series given by its first `a.len()` coefficients, or `None`
/// if the constant term is divisible by `p`.
pub(crate) fn inverse_truncated(a: &[u64], p: u64, m: u64) -> Option<Vec<u64>> {
    let a0 = *a.first()?;
    if a0 % p == 0 {
        return None;
    }
    let inv0 = inverse_mod(a0, m)?;
    let d = a.len();
    let mm = m as u128;
    let mut out = vec![0u64; d];
    out[0] = inv0;
    for k in 1..d {
        let mut acc: u128 = 0;
        for i in 1..=k {
            acc = (acc + a[i] as u128 * out[k - i] as u128) % mm;
        }
        out[k] = ((mm - acc) % mm * inv0 as u128 % mm) as u64;
    }
    Some(out)
}

/// The λ-digit requirement for [`one_plus_t_pow`]: `K >= floor(log_p D) + 2`
/// (equivalently `p^K > D p`) and `K >= K_out + v_p((D-1)!)`.
pub fn required_lambda_precision(p: u64, trunc_degree: usize, coeff_precision: u32) -> u32 {
    let by_degree = floor_log(trunc_degree as u64, p) + 2;
    let by_loss =
        coeff_precision + factorial_valuation(trunc_degree.saturating_sub(1) as u64, p) as u32;
    by_degree.max(by_loss)
}

/// `(1 + t)^lambda` modulo `t^D` with coefficients in `Z/p^K_out`; the
/// coefficient of `t^j` is `C(lambda, j)`.
pub fn one_plus_t_pow(
    lam: &PadicInt,
    trunc_degree: usize,
    coeff_precision: u32,
) -> Result<TruncatedSeries> {
    let p = lam.p();
    let mut out = TruncatedSeries::zero(p, coeff_precision, trunc_degree)?;
    let needed = required_lambda_precision(p, trunc_degree, coeff_precision);
    if lam.precision() < needed {
        return Err(Error::PrecisionExhausted(format!(
            "(1+t)^lambda mod t^{trunc_degree} over Z/{p}^{coeff_precision} needs lambda to {needed} digits, got {}",
            lam.precision()
        )));
    }
    let modulus = BigUint::from(out.modulus);
    for (c, b) in out
        .coeffs
        .iter_mut()
        .zip(representative_binomials(lam, trunc_degree))
    {
        *c = (b % &modulus).to_u64().expect("reduced below modulus");
    }
    Ok(out)
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match (j, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}*t")?,
                (j, 1) => write!(f, "t^{j}")?,
                (j, c) => write!(f, "{c}*t^{j}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.trunc_degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(p: u64, k: u32, d: usize, c: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(p, k, d, c).unwrap()
    }

    fn lam(p: u64, k: u32, v: i64) -> PadicInt {
        PadicInt::from_i64(p, k, v).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let a = s(5, 1, 8, &[1, 1]);
        let b = s(5, 1, 8, &[1, -1]);
        assert_eq!(a.mul(&b).unwrap(), s(5, 1, 8, &[1, 0, -1]));
        assert_eq!(s(3, 1, 9, &[1, 1]).pow(3), s(3, 1, 9, &[1, 0, 0, 1]));
        assert!(a.mul(&s(5, 1, 7, &[1])).is_err());
        assert!(a.mul(&s(5, 2, 8, &[1])).is_err());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(s(7, 1, 5, &[1]).inverse().unwrap(), s(7, 1, 5, &[1]));
        assert_eq!(
            s(3, 1, 3, &[1, 1]).inverse().unwrap(),
            s(3, 1, 3, &[1, 2, 1])
        );
        assert_eq!(
            s(5, 2, 4, &[1, 1]).inverse().unwrap(),
            s(5, 2, 4, &[1, 24, 1, 24])
        );
        assert_eq!(s(5, 1, 4, &[5, 1]).inverse(), Err(Error::NonUnit(0)));
        assert_eq!(s(5, 2, 4, &[10, 1]).inverse(), Err(Error::NonUnit(10)));
    }

    #[test]
    fn binomial_expansion_examples() {
        assert_eq!(
            one_plus_t_pow(&lam(5, 4, 1), 6, 1).unwrap(),
            s(5, 1, 6, &[1, 1])
        );
        // 9 = 3^2 over F_3: K must cover v_3(26!) = 10 plus one coefficient digit.
        let nine = lam(3, 11, 9);
        let mut expected = vec![0i64; 27];
        expected[0] = 1;
        expected[9] = 1;
        assert_eq!(
            one_plus_t_pow(&nine, 27, 1).unwrap(),
            s(3, 1, 27, &expected)
        );
        assert!(matches!(
            one_plus_t_pow(&lam(3, 10, 9), 27, 1),
            Err(Error::PrecisionExhausted(_))
        ));
        assert_eq!(
            one_plus_t_pow(&lam(5, 3, -1), 5, 1).unwrap(),
            s(5, 1, 5, &[1, 4, 1, 4, 1])
        );
    }

    #[test]
    fn valuation_examples() {
        // f_0 = (1+t) + (1+t)^{-1} - 2 over F_5
        let one_plus_t = TruncatedSeries::one_plus_t(5, 1, 10).unwrap();
        let f0 = one_plus_t
            .add(&one_plus_t.inverse().unwrap())
            .unwrap()
            .sub(&TruncatedSeries::constant(5, 1, 10, 2).unwrap())
            .unwrap();
        assert_eq!(f0.valuation(), ExtInt::Exact(2));
        assert_eq!(f0.coeffs()[..4], [0, 0, 1, 4]);
        assert_eq!(
            TruncatedSeries::zero(5, 1, 10).unwrap().valuation(),
            ExtInt::AtLeast(10)
        );
        assert_eq!(
            s(7, 1, 9, &[0, 0, 0, 0, 3, 1, 2]).valuation(),
            ExtInt::Exact(4)
        );
    }

    #[test]
    fn display_and_json() {
        let a = s(3, 1, 4, &[1, 2, 1]);
        assert_eq!(a.to_string(), "1 + 2*t + t^2 + O(t^4)");
        assert_eq!(
            TruncatedSeries::zero(3, 1, 2).unwrap().to_string(),
            "0 + O(t^2)"
        );
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            r#"{"p":3,"K":1,"D":4,"coeffs":[1,2,1,0]}"#
        );
    }

    #[test]
    fn lambda_precision_rule() {
        assert_eq!(required_lambda_precision(5, 10, 1), 3);
        assert_eq!(required_lambda_precision(3, 27, 1), 11);
        assert_eq!(required_lambda_precision(7, 14, 1), 3);
    }

    /// Convolution written out over `i128` without any reduction tricks.
    fn convolution_oracle(a: &[i64], b: &[i64], d: usize, m: i64) -> Vec<i64> {
        (0..d)
            .map(|k| {
                let mut acc: i128 = 0;
                for i in 0..=k {
                    acc += a[i] as i128 * b[k - i] as i128;
                }
                (acc.rem_euclid(m as i128)) as i64
            })
            .collect()
    }

    proptest! {
        #[test]
        fn mul_matches_convolution(a in prop::collection::vec(0i64..125, 12), b in prop::collection::vec(0i64..125, 12)) {
            let (x, y) = (s(5, 3, 12, &a), s(5, 3, 12, &b));
            let got: Vec<i64> = x.mul(&y).unwrap().coeffs().iter().map(|&c| c as i64).collect();
            prop_assert_eq!(got, convolution_oracle(&a, &b, 12, 125));
        }

        #[test]
        fn frobenius(pidx in 0usize..4, i in 1u32..4) {
            let p = [2u64, 3, 5, 7][pidx];
            let q = p.pow(i);
            let d = (q + 1) as usize;
            prop_assume!(d <= 400);
            let k = required_lambda_precision(p, d, 1);
            let got = one_plus_t_pow(&lam(p, k, q as i64), d, 1).unwrap();
            prop_assert_eq!(got, TruncatedSeries::monomial(p, 1, d, 1, q as usize).unwrap()
                .add(&TruncatedSeries::constant(p, 1, d, 1).unwrap()).unwrap());
        }

        #[test]
        fn exponent_homomorphism(a in any::<i32>(), b in any::<i32>(), pidx in 0usize..3, kout in 1u32..3) {
            let p = [3u64, 5, 7][pidx];
            let d = 12;
            let k = required_lambda_precision(p, d, kout) + 2;
            let (la, lb) = (lam(p, k, a as i64), lam(p, k, b as i64));
            let prod = one_plus_t_pow(&la, d, kout).unwrap().mul(&one_plus_t_pow(&lb, d, kout).unwrap()).unwrap();
            prop_assert_eq!(prod, one_plus_t_pow(&la.add(&lb).unwrap(), d, kout).unwrap());
        }

        #[test]
        fn negated_exponent_is_inverse(a in any::<i64>(), pidx in 0usize..3) {
            let p = [2u64, 5, 7][pidx];
            let d = 15;
            let k = required_lambda_precision(p, d, 2);
            let la = lam(p, k, a);
            prop_assert_eq!(
                one_plus_t_pow(&la.neg(), d, 2).unwrap(),
                one_plus_t_pow(&la, d, 2).unwrap().inverse().unwrap()
            );
        }

        /// The t^2 coefficient of (1+t)^l + (1+t)^-l + (1+t) + (1+t)^-1 - 4 is l^2 + 1.
        #[test]
        fn king_quadratic_coefficient(l in -1000i64..1000, pidx in 0usize..3) {
            let p = [3u64, 5, 7][pidx];
            let d = 2 * p as usize;
            let k = required_lambda_precision(p, d, 1);
            let x = lam(p, k, l);
            let one_plus_t = TruncatedSeries::one_plus_t(p, 1, d).unwrap();
            let f = one_plus_t_pow(&x, d, 1).unwrap()
                .add(&one_plus_t_pow(&x.neg(), d, 1).unwrap()).unwrap()
                .add(&one_plus_t).unwrap()
                .add(&one_plus_t.inverse().unwrap()).unwrap()
                .sub(&TruncatedSeries::constant(p, 1, d, 4).unwrap()).unwrap();
            let expected = (l * l + 1).rem_euclid(p as i64) as u64;
            prop_assert_eq!(f.coeff(2), expected);
            prop_assert_eq!(f.valuation() == ExtInt::Exact(2), expected != 0);
        }
    }
}
