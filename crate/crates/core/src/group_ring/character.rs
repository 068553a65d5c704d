//! Reductions of a presentation to one-variable power series.
//!
//! Two routes lead from `Z_p[[x, y]]`-modules to `F_p[[t]]`-modules:
//! restricting along a corank-one character (`x -> (1+t)^lambda`,
//! `y -> 1+t`, which kills `x y^-lambda`), and eliminating a variable with a
//! relation that is linear in it.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::padic::PadicInt;
use crate::series::{one_plus_t_pow, TruncatedSeries};

use super::{reduce_coefficient, LaurentPoly, ModulePresentation};

/// Substitutes `x -> (1+t)^lambda, y -> 1+t` (or, with `axis_swap`,
/// `y -> (1+t)^lambda, x -> 1+t`) into a polynomial in two variables.
///
/// The first form is the quotient by `H = <x y^-lambda>`, the second by
/// `H = <y x^-lambda>`.
pub fn substitute_poly(
    poly: &LaurentPoly,
    lam: &PadicInt,
    axis_swap: bool,
    trunc_degree: usize,
    coeff_precision: u32,
) -> Result<TruncatedSeries> {
    let mut cache = HashMap::new();
    substitute_cached(
        poly,
        lam,
        axis_swap,
        trunc_degree,
        coeff_precision,
        &mut cache,
    )
}

fn substitute_cached(
    poly: &LaurentPoly,
    lam: &PadicInt,
    axis_swap: bool,
    trunc_degree: usize,
    coeff_precision: u32,
    cache: &mut HashMap<BigUint, TruncatedSeries>,
) -> Result<TruncatedSeries> {
    if poly.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "corank-one substitution needs rank 2, got {}",
            poly.n()
        )));
    }
    let mut acc = TruncatedSeries::zero(lam.p(), coeff_precision, trunc_degree)?;
    for (e, c) in poly.terms() {
        let (scaled, plain) = if axis_swap {
            (e[1], e[0])
        } else {
            (e[0], e[1])
        };
        let exponent = lam.scale(scaled).shift(plain);
        let power = match cache.get(exponent.residue()) {
            Some(s) => s.clone(),
            None => {
                let s = one_plus_t_pow(&exponent, trunc_degree, coeff_precision)?;
                cache.insert(exponent.residue().clone(), s.clone());
                s
            }
        };
        acc = acc.add(&power.scale(reduce_coefficient(c, acc.modulus())))?;
    }
    Ok(acc)
}

/// Every relation row pushed through [`substitute_poly`]. Reducing the
/// result modulo `p` presents `A (x)_{Z_p[[H]]} F_p` over `F_p[[t]]`.
pub fn substitute_character(
    pres: &ModulePresentation,
    lam: &PadicInt,
    axis_swap: bool,
    trunc_degree: usize,
    coeff_precision: u32,
) -> Result<Vec<Vec<TruncatedSeries>>> {
    if pres.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "corank-one substitution needs rank 2, got {}",
            pres.n()
        )));
    }
    if lam.p() != pres.p() {
        return Err(Error::ParameterMismatch(format!(
            "lambda is {}-adic but the module is over p = {}",
            lam.p(),
            pres.p()
        )));
    }
    let mut cache = HashMap::new();
    pres.relations()
        .iter()
        .map(|row| {
            row.iter()
                .map(|entry| {
                    substitute_cached(
                        entry,
                        lam,
                        axis_swap,
                        trunc_degree,
                        coeff_precision,
                        &mut cache,
                    )
                })
                .collect()
        })
        .collect()
}

/// `A / pA` rewritten over `F_p[[t]]`: the image of each group generator and
/// the relation rows in terms of `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateReduction {
    pub images: Vec<TruncatedSeries>,
    pub rows: Vec<Vec<TruncatedSeries>>,
    /// `(variable, relation)` used for the elimination, if any.
    pub eliminated: Option<(usize, usize)>,
}

/// Rewrites a cyclic module over `F_p[[x]]` or `F_p[[x, y]]` as a module over
/// `F_p[[t]]`.
///
/// For rank 1, `x -> 1 + t`. For rank 2 one relation must be linear in a
/// variable `v`, say `v c(w) + h(w)`, with `c(1)` prime to `p` and
/// `-h(1)/c(1) = 1 mod p`; then `w -> 1 + t` and `v -> -h/c`, which is
/// exactly the isomorphism `F_p[[t_w, t_v]] / (v c + h) = F_p[[t_w]]`.
pub fn eliminate_to_one_variable(
    pres: &ModulePresentation,
    trunc_degree: usize,
) -> Result<UnivariateReduction> {
    let p = pres.p();
    if pres.gens() != 1 {
        return Err(Error::RouteInapplicable(format!(
            "series route needs a cyclic module, got {} generators",
            pres.gens()
        )));
    }
    let one_plus_t = TruncatedSeries::one_plus_t(p, 1, trunc_degree)?;
    let one = TruncatedSeries::constant(p, 1, trunc_degree, 1)?;
    let (images, eliminated) = match pres.n() {
        1 => (vec![one_plus_t], None),
        2 => {
            let mut found = None;
            'search: for (idx, row) in pres.relations().iter().enumerate() {
                for v in [1usize, 0] {
                    if let Some(image) = linear_elimination(&row[0], v, &one_plus_t, &one)? {
                        let mut images = vec![one_plus_t.clone(), one_plus_t.clone()];
                        images[v] = image;
                        found = Some((images, Some((v, idx))));
                        break 'search;
                    }
                }
            }
            found.ok_or_else(|| {
                Error::RouteInapplicable(
                    "no relation is linear in x or y with a unit coefficient".into(),
                )
            })?
        }
        n => {
            return Err(Error::RouteInapplicable(format!(
                "series route supports rank 1 or 2, got {n}"
            )))
        }
    };
    let rows = pres
        .relations()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.evaluate(&images))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UnivariateReduction {
        images,
        rows,
        eliminated,
    })
}

/// Image of variable `v` if `rel` lets it be solved for.
fn linear_elimination(
    rel: &LaurentPoly,
    v: usize,
    one_plus_t: &TruncatedSeries,
    one: &TruncatedSeries,
) -> Result<Option<TruncatedSeries>> {
    let w = 1 - v;
    let mut coefficient = LaurentPoly::zero(2);
    let mut rest = LaurentPoly::zero(2);
    for (e, c) in rel.terms() {
        let mut reduced = e.to_vec();
        reduced[v] = 0;
        match e[v] {
            0 => rest.add_term(reduced, c.clone()),
            1 => coefficient.add_term(reduced, c.clone()),
            _ => return Ok(None),
        }
    }
    if coefficient.is_zero() {
        return Ok(None);
    }
    let mut at = vec![one.clone(), one.clone()];
    at[w] = one_plus_t.clone();
    let c = coefficient.evaluate(&at)?;
    let Ok(c_inv) = c.inverse() else {
        return Ok(None);
    };
    let image = rest.evaluate(&at)?.mul(&c_inv)?.neg();
    if image.coeff(0) != 1 % image.p() {
        return Ok(None);
    }
    Ok(Some(image))
}
