//! p-adic integers at finite precision.
//!
//! A [`PadicInt`] is a residue modulo `p^K`. Every operation carries the
//! precision through explicitly: results are known modulo `p^min(K)` of the
//! operands, and the binomial coefficient `C(lambda, j)` loses `v_p(j!)`
//! digits.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::primes::{ensure_prime, factorial_valuation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    residue: BigUint,
}

impl PadicInt {
    pub fn new(p: u64, precision: u32, residue: BigUint) -> Result<Self> {
        ensure_prime(p)?;
        if precision == 0 {
            return Err(Error::InvalidArgument(
                "p-adic precision must be at least 1".into(),
            ));
        }
        Ok(Self::new_unchecked(p, precision, residue))
    }

    pub(crate) fn new_unchecked(p: u64, precision: u32, residue: BigUint) -> Self {
        let modulus = BigUint::from(p).pow(precision);
        PadicInt {
            p,
            precision,
            residue: residue % modulus,
        }
    }

    /// Image of an ordinary integer (possibly negative) in `Z/p^K`.
    pub fn from_integer(p: u64, precision: u32, value: &BigInt) -> Result<Self> {
        let zero = Self::new(p, precision, BigUint::zero())?;
        let modulus = BigInt::from(zero.modulus());
        let reduced = value.mod_floor(&modulus);
        Ok(Self::new_unchecked(
            p,
            precision,
            reduced.to_biguint().expect("mod_floor is non-negative"),
        ))
    }

    pub fn from_i64(p: u64, precision: u32, value: i64) -> Result<Self> {
        Self::from_integer(p, precision, &BigInt::from(value))
    }

    /// Builds `d0 + d1 p + ... + d_{K-1} p^{K-1}`; the precision is the
    /// number of digits.
    pub fn from_digits(p: u64, digits: &[u64]) -> Result<Self> {
        ensure_prime(p)?;
        if digits.is_empty() {
            return Err(Error::InvalidArgument("digit string is empty".into()));
        }
        let mut residue = BigUint::zero();
        for &d in digits.iter().rev() {
            if d >= p {
                return Err(Error::InvalidArgument(format!(
                    "digit {d} is not below p = {p}"
                )));
            }
            residue = residue * p + d;
        }
        Ok(Self::new_unchecked(p, digits.len() as u32, residue))
    }

    /// Accepts a decimal integer (precision `default_precision`) or a base-p
    /// digit string `d0,d1,...` written least significant first.
    pub fn parse(text: &str, p: u64, default_precision: u32) -> Result<Self> {
        let text = text.trim();
        if text.contains(',') {
            let digits = text
                .split(',')
                .map(|d| {
                    d.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::InvalidArgument(format!("bad p-adic digit {d:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            Self::from_digits(p, &digits)
        } else {
            let value: BigInt = text
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad p-adic integer {text:?}")))?;
            Self::from_integer(p, default_precision, &value)
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.precision)
    }

    /// Base-p digits, least significant first, exactly `precision` of them.
    pub fn digits(&self) -> Vec<u64> {
        let mut r = self.residue.clone();
        (0..self.precision)
            .map(|_| {
                let (q, d) = r.div_rem(&BigUint::from(self.p));
                r = q;
                d.to_u64().expect("digit below p")
            })
            .collect()
    }

    /// Drops to a lower precision.
    pub fn truncate(&self, precision: u32) -> Result<Self> {
        if precision == 0 || precision > self.precision {
            return Err(Error::PrecisionExhausted(format!(
                "cannot view a value known mod {}^{} modulo {}^{}",
                self.p, self.precision, self.p, precision
            )));
        }
        Ok(Self::new_unchecked(self.p, precision, self.residue.clone()))
    }

    /// The least residue in `(-p^K/2, p^K/2]`.
    pub fn signed_residue(&self) -> BigInt {
        let modulus = self.modulus();
        if &self.residue * 2u32 > modulus {
            BigInt::from(self.residue.clone()) - BigInt::from(modulus)
        } else {
            BigInt::from(self.residue.clone())
        }
    }

    fn check_same_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ParameterMismatch(format!(
                "p-adic primes differ ({} vs {})",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let k = self.precision.min(other.precision);
        Ok(Self::new_unchecked(
            self.p,
            k,
            &self.residue + &other.residue,
        ))
    }

    pub fn neg(&self) -> Self {
        let modulus = self.modulus();
        Self::new_unchecked(
            self.p,
            self.precision,
            (&modulus - &self.residue) % &modulus,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_prime(other)?;
        let k = self.precision.min(other.precision);
        Ok(Self::new_unchecked(
            self.p,
            k,
            &self.residue * &other.residue,
        ))
    }

    /// Multiplies by an ordinary integer, keeping the precision.
    pub fn scale(&self, by: i64) -> Self {
        let modulus = BigInt::from(self.modulus());
        let value = (BigInt::from(self.residue.clone()) * by).mod_floor(&modulus);
        Self::new_unchecked(
            self.p,
            self.precision,
            value.to_biguint().expect("non-negative"),
        )
    }

    /// Adds an ordinary integer, keeping the precision.
    pub fn shift(&self, by: i64) -> Self {
        let modulus = BigInt::from(self.modulus());
        let value = (BigInt::from(self.residue.clone()) + by).mod_floor(&modulus);
        Self::new_unchecked(
            self.p,
            self.precision,
            value.to_biguint().expect("non-negative"),
        )
    }

    /// Largest `v < K` with `p^v` dividing the residue, or `AtLeast(K)` for
    /// a zero residue.
    pub fn valuation(&self) -> ExtInt {
        if self.residue.is_zero() {
            return ExtInt::AtLeast(self.precision as u64);
        }
        let p = BigUint::from(self.p);
        let mut r = self.residue.clone();
        let mut v = 0;
        loop {
            let (q, rem) = r.div_rem(&p);
            if !rem.is_zero() {
                return ExtInt::Exact(v);
            }
            r = q;
            v += 1;
        }
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.residue, self.p, self.precision)
    }
}

impl Serialize for PadicInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PadicInt", 3)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("K", &self.precision)?;
        s.serialize_field("residue", &self.residue.to_string())?;
        s.end()
    }
}

/// `C(r, j)` for `j < count`, as exact integers, where `r` is the least
/// non-negative representative of `lam`.
///
/// Any two representatives of `lam` give binomials that agree modulo
/// `p^(K - v_p(j!))`, so these integers are valid lifts at that precision.
pub(crate) fn representative_binomials(lam: &PadicInt, count: usize) -> Vec<BigUint> {
    let r = &lam.residue;
    let mut out = Vec::with_capacity(count);
    let mut current = BigUint::one();
    for j in 0..count as u64 {
        out.push(current.clone());
        current = if *r > BigUint::from(j) {
            current * (r - BigUint::from(j)) / BigUint::from(j + 1)
        } else {
            BigUint::zero()
        };
    }
    out
}

/// `C(lam, j) = lam (lam - 1) ... (lam - j + 1) / j!`, known modulo
/// `p^(K - v_p(j!))`.
pub fn padic_binomial(lam: &PadicInt, j: u64) -> Result<PadicInt> {
    let loss = factorial_valuation(j, lam.p);
    if loss >= lam.precision as u64 {
        return Err(Error::PrecisionExhausted(format!(
            "C(lambda, {j}) needs more than {} digits of lambda (v_p({j}!) = {loss})",
            lam.precision
        )));
    }
    let precision = lam.precision - loss as u32;
    let value = representative_binomials(lam, j as usize + 1)
        .pop()
        .expect("non-empty");
    Ok(PadicInt::new_unchecked(lam.p, precision, value))
}

/// `lambda = z0 + p lambda1` and `-lambda = a0 + p lambda2` with base digits
/// `z0, a0` in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitSplit {
    pub z0: u64,
    pub a0: u64,
    pub lambda1: PadicInt,
    pub lambda2: PadicInt,
}

pub fn digit_split(lam: &PadicInt) -> Result<DigitSplit> {
    if lam.precision < 2 {
        return Err(Error::PrecisionExhausted(
            "digit split needs lambda to at least two digits".into(),
        ));
    }
    let split = |x: &PadicInt| -> (u64, PadicInt) {
        let (q, d) = x.residue.div_rem(&BigUint::from(x.p));
        let d = d.to_u64().expect("digit below p");
        (d, PadicInt::new_unchecked(x.p, x.precision - 1, q))
    };
    let (z0, lambda1) = split(lam);
    let (a0, lambda2) = split(&lam.neg());
    Ok(DigitSplit {
        z0,
        a0,
        lambda1,
        lambda2,
    })
}
