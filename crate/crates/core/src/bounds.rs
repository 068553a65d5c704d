//! Generator-count bookkeeping for split extensions.
//!
//! A finite module over `F_p[[t]]` decomposes as a sum of cyclic modules
//! `F_p[[t]]/(t^i_1) + ... + F_p[[t]]/(t^i_s)`, and its generator count
//! `d(H) = i_1 + ... + i_s`. For `U = H x| <q^(p^j)>` with `p^j > max i_k`
//! the element `q^(p^j)` (multiplication by `1 + t^(p^j)`) acts trivially,
//! so `d(U) = d(H) + 1`. This module computes that quantity two ways, checks
//! it against a bound `d(U) <= k [G:U]^(1/2)`, and evaluates the five-term
//! exact sequence bounds.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::linalg::{cokernel_fp_dim, dvr_snf, SeriesMatrix};
use crate::series::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicDecomposition {
    /// Sorted exponents `i_1 <= ... <= i_s`, all at least 1.
    pub exponents: Vec<u64>,
    /// The largest exponent (0 for the zero module).
    pub m: u64,
    pub d_h: u64,
}

impl CyclicDecomposition {
    pub fn new(mut exponents: Vec<u64>) -> Result<Self> {
        if exponents.contains(&0) {
            return Err(Error::InvalidArgument(
                "cyclic exponents must be positive".into(),
            ));
        }
        exponents.sort_unstable();
        let m = exponents.last().copied().unwrap_or(0);
        let d_h = exponents.iter().sum();
        Ok(CyclicDecomposition { exponents, m, d_h })
    }
}

fn not_finite(what: &str) -> Error {
    Error::InvalidArgument(format!(
        "{what}: module is not certified finite (raise the truncation degree?)"
    ))
}

/// Cyclic decomposition of the cokernel of a relation matrix over `F_p[[t]]`.
pub fn decompose_finite_module(m: &SeriesMatrix) -> Result<CyclicDecomposition> {
    let snf = dvr_snf(m);
    if !snf.certified || snf.free_rank > 0 {
        return Err(not_finite("cyclic decomposition"));
    }
    CyclicDecomposition::new(
        snf.exact_valuations()
            .into_iter()
            .filter(|&v| v > 0)
            .collect(),
    )
}

/// `d(U) = i_1 + ... + i_s + 1` for `U = <H, q^(p^j)>`; needs `p^j > m`.
pub fn d_of_u(dec: &CyclicDecomposition, p: u64, j: u32) -> Result<u64> {
    let exceeds = p.checked_pow(j).is_none_or(|q| q > dec.m);
    if !exceeds {
        return Err(Error::InvalidArgument(format!(
            "the closed formula needs p^j > m, but {p}^{j} <= {}",
            dec.m
        )));
    }
    Ok(dec.d_h + 1)
}

/// `d(U)` from its definition: `dim (M (x)_{F_p[[<q^(p^j)>]]} F_p) + 1`,
/// computed by adjoining `(1+t)^(p^j) - 1` times every generator.
pub fn d_of_u_direct(m: &SeriesMatrix, p: u64, j: u32) -> Result<u64> {
    decompose_finite_module(m)?;
    let d = m.trunc_degree();
    let zero = TruncatedSeries::zero(p, 1, d)?;
    let acting = match p.checked_pow(j) {
        Some(q) => TruncatedSeries::one_plus_t(p, 1, d)?
            .pow(q)
            .sub(&TruncatedSeries::constant(p, 1, d, 1)?)?,
        None => zero.clone(),
    };
    let extra = (0..m.cols())
        .map(|g| {
            let mut row = vec![zero.clone(); m.cols()];
            row[g] = acting.clone();
            row
        })
        .collect();
    match cokernel_fp_dim(&m.with_rows(extra)?) {
        ExtInt::Exact(v) => Ok(v + 1),
        ExtInt::AtLeast(_) => Err(not_finite("tensor with the trivial module")),
    }
}

/// A bound `d(U) <= k [G:U]^(1/2)` with a user-supplied constant `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WilsonBoundParams {
    pub k: BigRational,
    pub index: BigUint,
}

impl WilsonBoundParams {
    pub fn new(k: BigRational, index: BigUint) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::InvalidArgument(
                "the constant k must be positive".into(),
            ));
        }
        if index.is_zero() {
            return Err(Error::InvalidArgument("the index must be positive".into()));
        }
        Ok(WilsonBoundParams { k, index })
    }

    /// `k` as `"a"` or `"a/b"`, `index` as a decimal integer.
    pub fn parse(k: &str, index: &str) -> Result<Self> {
        let index = index
            .trim()
            .parse::<BigUint>()
            .map_err(|_| Error::InvalidArgument(format!("bad index {index:?}")))?;
        Self::new(Self::parse_k(k)?, index)
    }

    /// Parses `k` from `"a"` or `"a/b"`.
    pub fn parse_k(text: &str) -> Result<BigRational> {
        let bad = || Error::InvalidArgument(format!("bad rational constant {text:?}"));
        let (num, den) = match text.trim().split_once('/') {
            Some((a, b)) => (
                a.trim().parse::<BigInt>().map_err(|_| bad())?,
                b.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (
                text.trim().parse::<BigInt>().map_err(|_| bad())?,
                BigInt::from(1),
            ),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(BigRational::new(num, den))
    }
}

/// `d_U <= k sqrt(index)`, decided exactly as `d_U^2 <= k^2 index`.
pub fn wilson_check(d_u: u64, params: &WilsonBoundParams) -> bool {
    let lhs = BigRational::from_integer(BigInt::from(d_u) * BigInt::from(d_u));
    let rhs = &params.k * &params.k * BigRational::from_integer(BigInt::from(params.index.clone()));
    lhs <= rhs
}

/// Outcome of pushing a decomposition through the square-root bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WilsonChain {
    /// Least `j >= 1` with `p^j > m`.
    pub j: u32,
    pub index: String,
    pub d_u: u64,
    pub wilson_holds: bool,
    /// `d(H) < k^2 p`, evaluated only when the bound holds.
    pub chain_holds: Option<bool>,
}

/// Takes the least `j` with `p^j > m >= p^(j-1)`, sets `d(U) = d(H) + 1` and
/// checks whether the bound at index `p^j` forces `d(H) < k^2 p`.
pub fn wilson_chain(dec: &CyclicDecomposition, k: &BigRational, p: u64) -> Result<WilsonChain> {
    let mut j = 1u32;
    let mut q = BigUint::from(p);
    while q <= BigUint::from(dec.m) {
        q *= p;
        j += 1;
    }
    let d_u = d_of_u(dec, p, j)?;
    let params = WilsonBoundParams::new(k.clone(), q.clone())?;
    let wilson_holds = wilson_check(d_u, &params);
    let chain_holds = wilson_holds.then(|| {
        BigRational::from_integer(BigInt::from(dec.d_h))
            < k * k * BigRational::from_integer(BigInt::from(p))
    });
    Ok(WilsonChain {
        j,
        index: q.to_string(),
        d_u,
        wilson_holds,
        chain_holds,
    })
}

/// Inputs to the five-term sequence `H_2(Q) -> H_0(Q, H_1(N)) -> H_1(G) -> H_1(Q) -> 0`
/// with `F_p` coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiveTermInput {
    pub dim_h0: u64,
    pub dim_h1q: u64,
    pub dim_h2q: u64,
}

impl FiveTermInput {
    /// `Q = Z_p^r`: `dim H_1 = r`, `dim H_2 = C(r, 2)`.
    pub fn free_abelian_quotient(dim_h0: u64, r: u64) -> Self {
        FiveTermInput {
            dim_h0,
            dim_h1q: r,
            dim_h2q: r * r.saturating_sub(1) / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratorBounds {
    pub lower: u64,
    pub upper: u64,
}

/// `dim_h0 + dim_h1q - dim_h2q <= d(G) <= dim_h0 + dim_h1q`, lower clamped at 0.
pub fn five_term_bounds(inp: FiveTermInput) -> GeneratorBounds {
    let upper = inp.dim_h0 + inp.dim_h1q;
    GeneratorBounds {
        lower: upper.saturating_sub(inp.dim_h2q),
        upper,
    }
}

/// `d(H) + C(n-1, 2) - n + 1`, clamped at 0: the bound on
/// `dim_Fp (A (x)_{Z_p[[H]]} F_p)` for `H` of corank one in `G` with
/// `G/A = Z_p^n`.
pub fn coinvariant_dim_bound(d_h: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("rank n must be at least 1".into()));
    }
    let r = (n - 1) as i128;
    let value = d_h as i128 + r * (r - 1) / 2 - n as i128 + 1;
    Ok(value.max(0) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(p: u64, d: usize, e: &[usize]) -> SeriesMatrix {
        SeriesMatrix::diagonal_monomials(p, d, e).unwrap()
    }

    #[test]
    fn decompositions() {
        let dec = decompose_finite_module(&diag(3, 12, &[3, 1])).unwrap();
        assert_eq!((dec.exponents.clone(), dec.m, dec.d_h), (vec![1, 3], 3, 4));
        let trivial = decompose_finite_module(&diag(3, 12, &[0])).unwrap();
        assert_eq!((trivial.exponents.len(), trivial.m, trivial.d_h), (0, 0, 0));
        assert!(decompose_finite_module(&diag(3, 4, &[5])).is_err());
    }

    #[test]
    fn closed_formula() {
        let dec = CyclicDecomposition::new(vec![1, 3]).unwrap();
        assert_eq!(d_of_u(&dec, 3, 2).unwrap(), 5);
        assert_eq!(
            d_of_u(&CyclicDecomposition::new(vec![1]).unwrap(), 2, 1).unwrap(),
            2
        );
        assert!(d_of_u(&CyclicDecomposition::new(vec![4]).unwrap(), 3, 1).is_err());
        assert!(d_of_u(&dec, 3, 1).is_err());
        assert!(CyclicDecomposition::new(vec![0, 2]).is_err());
    }

    #[test]
    fn direct_route() {
        let m = diag(3, 16, &[1, 3]);
        assert_eq!(d_of_u_direct(&m, 3, 2).unwrap(), 5);
        // p^j = m: t^3 already kills the module, so nothing changes
        assert_eq!(d_of_u_direct(&m, 3, 1).unwrap(), 5);
        // p^j < m: the tensor product shrinks
        assert_eq!(d_of_u_direct(&diag(2, 16, &[5]), 2, 1).unwrap(), 3);
        assert_eq!(d_of_u_direct(&diag(5, 4, &[0]), 5, 3).unwrap(), 1);
    }

    #[test]
    fn wilson() {
        let two = BigRational::from_integer(2.into());
        let params = WilsonBoundParams::new(two.clone(), BigUint::from(9u32)).unwrap();
        assert!(wilson_check(5, &params));
        assert!(wilson_check(6, &params));
        assert!(!wilson_check(7, &params));
        assert!(WilsonBoundParams::new(BigRational::zero(), BigUint::from(9u32)).is_err());
        let k = WilsonBoundParams::parse_k("3/2").unwrap();
        assert_eq!(k, BigRational::new(3.into(), 2.into()));
        assert!(WilsonBoundParams::parse_k("1/0").is_err());

        let chain = wilson_chain(&CyclicDecomposition::new(vec![1, 3]).unwrap(), &two, 3).unwrap();
        assert_eq!((chain.j, chain.index.as_str(), chain.d_u), (2, "9", 5));
        assert!(chain.wilson_holds);
        assert_eq!(chain.chain_holds, Some(true));
    }

    #[test]
    fn five_term() {
        let b = five_term_bounds(FiveTermInput {
            dim_h0: 3,
            dim_h1q: 1,
            dim_h2q: 0,
        });
        assert_eq!((b.lower, b.upper), (4, 4));
        let b = five_term_bounds(FiveTermInput {
            dim_h0: 3,
            dim_h1q: 2,
            dim_h2q: 1,
        });
        assert_eq!((b.lower, b.upper), (4, 5));
        let b = five_term_bounds(FiveTermInput {
            dim_h0: 0,
            dim_h1q: 0,
            dim_h2q: 5,
        });
        assert_eq!((b.lower, b.upper), (0, 0));
        assert_eq!(FiveTermInput::free_abelian_quotient(2, 3).dim_h2q, 3);
    }

    #[test]
    fn coinvariant_bound() {
        assert_eq!(coinvariant_dim_bound(4, 2).unwrap(), 3);
        assert_eq!(coinvariant_dim_bound(0, 1).unwrap(), 0);
        assert_eq!(coinvariant_dim_bound(10, 4).unwrap(), 10);
        assert!(coinvariant_dim_bound(1, 0).is_err());
    }
}
