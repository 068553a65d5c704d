//! The integral group ring `Z[Q]` of a free abelian group `Q = Z^n`, used as
//! a dense stand-in for the Iwasawa algebra `Z_p[[Q]]` (with generator
//! `x_i = 1 + t_i`), and finitely presented modules over it.

mod character;
mod level;
mod parse;
mod presentation;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

pub use character::{
    eliminate_to_one_variable, substitute_character, substitute_poly, UnivariateReduction,
};
pub use level::{
    expand_level, level_columns, relative_augmentation_rows, LevelMatrix, DEFAULT_SIZE_CAP,
};
pub use parse::parse_presentation;
pub use presentation::{variable_names, ModulePresentation};

/// A Laurent polynomial in `n` commuting variables with integer
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    n: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    pub fn zero(n: usize) -> Self {
        LaurentPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; n], c)
    }

    pub fn monomial(exponents: Vec<i64>, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(exponents, c.into());
        p
    }

    /// The group element `x_i` (zero-based `i`).
    pub fn variable(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, exponents: Vec<i64>, c: BigInt) {
        assert_eq!(
            exponents.len(),
            self.n,
            "exponent vector of the wrong length"
        );
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponents).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; fails only if an exponent overflows.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea
                    .iter()
                    .zip(eb)
                    .map(|(a, b)| a.checked_add(*b))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| Error::InvalidArgument("exponent overflow in product".into()))?;
                out.add_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Substitutes a series for each variable and reduces the coefficients
    /// modulo the series coefficient modulus. Variables that occur with a
    /// negative exponent need unit values.
    pub fn evaluate(&self, values: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        if values.len() != self.n {
            return Err(Error::ParameterMismatch(format!(
                "{} values supplied for {} variables",
                values.len(),
                self.n
            )));
        }
        let first = values.first().ok_or_else(|| {
            Error::InvalidArgument("cannot evaluate a polynomial in zero variables".into())
        })?;
        let (p, k, d) = (first.p(), first.coeff_precision(), first.trunc_degree());
        let inverses = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if self.terms.keys().any(|e| e[i] < 0) {
                    v.inverse().map(Some)
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = TruncatedSeries::zero(p, k, d)?;
        for (e, c) in &self.terms {
            let mut term =
                TruncatedSeries::constant(p, k, d, reduce_coefficient(c, acc.modulus()))?;
            for (i, &ei) in e.iter().enumerate() {
                let factor = if ei >= 0 {
                    values[i].pow(ei as u64)
                } else {
                    inverses[i]
                        .as_ref()
                        .expect("computed for negative exponents")
                        .pow(ei.unsigned_abs())
                };
                term = term.mul(&factor)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// `c mod m` as a value in `[0, m)`, returned as `i64` (`m < 2^62`).
pub(crate) fn reduce_coefficient(c: &BigInt, m: u64) -> i64 {
    let mb = BigInt::from(m);
    let mut r = c % &mb;
    if r.is_negative() {
        r += &mb;
    }
    r.to_i64().expect("reduced below 2^62")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = variable_names(self.n);
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let factors: Vec<String> = e
                .iter()
                .zip(&names)
                .filter(|(&ei, _)| ei != 0)
                .map(|(&ei, name)| {
                    if ei == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{ei}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels_terms() {
        let x = LaurentPoly::variable(2, 0);
        let y = LaurentPoly::variable(2, 1);
        let one = LaurentPoly::constant(2, 1);
        let a = x.add(&one);
        let b = x.sub(&one);
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.num_terms(), 2);
        assert_eq!(prod.to_string(), "-1 + x^2");
        assert!(x.sub(&x).is_zero());
        let xinv = LaurentPoly::monomial(vec![-1, 0], 1);
        assert_eq!(x.mul(&xinv).unwrap(), one);
        assert_eq!(y.add(&x.neg()).to_string(), "y - x");
        let big = LaurentPoly::monomial(vec![i64::MAX, 0], 1);
        assert!(big.mul(&x).is_err());
    }

    #[test]
    fn evaluation_at_one_plus_t() {
        // y - 2x + 1 at x = 1 + t, y = 1: -2t
        let rel = LaurentPoly::variable(2, 1)
            .sub(&LaurentPoly::variable(2, 0).add(&LaurentPoly::variable(2, 0)))
            .add(&LaurentPoly::constant(2, 1));
        let vals = vec![
            TruncatedSeries::one_plus_t(3, 1, 5).unwrap(),
            TruncatedSeries::constant(3, 1, 5, 1).unwrap(),
        ];
        let s = rel.evaluate(&vals).unwrap();
        assert_eq!(s, TruncatedSeries::from_coeffs(3, 1, 5, &[0, -2]).unwrap());
    }
}
