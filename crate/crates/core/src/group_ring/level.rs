use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

use super::ModulePresentation;

/// Default cap on the number of columns of a level matrix.
pub const DEFAULT_SIZE_CAP: u64 = 20_000;

/// The relation matrix of `A / A Omega` over `Z[Q / Q^(p^s)]`, where
/// `Omega` is the augmentation ideal of `Z_p[[Q^(p^s)]]`.
///
/// Columns are indexed generator-major by `(generator, h)` with `h` running
/// over `[0, p^s)^n` in lexicographic order; rows are indexed relation-major
/// by `(relation, h)` and hold `h * relation` in the regular representation.
/// The cokernel, as an abelian group, is `A (x)_{Z_p[[Q^(p^s)]]} Z_p` after
/// tensoring with `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelMatrix {
    pub p: u64,
    pub n: usize,
    pub s: u32,
    pub gens: usize,
    pub matrix: IntegerMatrix,
}

impl LevelMatrix {
    /// `p^s`, the exponent of the finite quotient group.
    pub fn order(&self) -> u64 {
        self.p.pow(self.s)
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }
}

/// Number of columns `gens * p^(n s)`, or `None` on overflow.
pub fn level_columns(p: u64, n: usize, s: u32, gens: usize) -> Option<u64> {
    p.checked_pow(s)?
        .checked_pow(n as u32)?
        .checked_mul(gens as u64)
}

pub fn expand_level(pres: &ModulePresentation, s: u32, size_cap: u64) -> Result<LevelMatrix> {
    let (p, n, gens) = (pres.p(), pres.n(), pres.gens());
    let required = level_columns(p, n, s, gens).unwrap_or(u64::MAX);
    if required > size_cap {
        return Err(Error::SizeCap {
            required,
            cap: size_cap,
        });
    }
    let m = p.pow(s) as i64;
    let group_order = (m as usize).pow(n as u32);
    let cols = gens * group_order;
    let nrels = pres.relations().len();
    let mut matrix = IntegerMatrix::zeros(nrels * group_order, cols);
    let index_of = |e: &[i64]| {
        e.iter()
            .fold(0usize, |acc, &v| acc * m as usize + v as usize)
    };
    let mut h = vec![0i64; n];
    for (r, row) in pres.relations().iter().enumerate() {
        for h_idx in 0..group_order {
            // decode h from its lexicographic index
            let mut rest = h_idx;
            for slot in h.iter_mut().rev() {
                *slot = (rest % m as usize) as i64;
                rest /= m as usize;
            }
            let target_row = r * group_order + h_idx;
            for (g, entry) in row.iter().enumerate() {
                for (e, c) in entry.terms() {
                    if c.is_zero() {
                        continue;
                    }
                    let shifted: Vec<i64> = e
                        .iter()
                        .zip(&h)
                        .map(|(a, b)| (a + b).rem_euclid(m))
                        .collect();
                    matrix.add_to(target_row, g * group_order + index_of(&shifted), c);
                }
            }
        }
    }
    Ok(LevelMatrix {
        p,
        n,
        s,
        gens,
        matrix,
    })
}

/// Relation rows `(x_i^k - 1) e` for every basis vector `e` of a level
/// matrix: imposing them identifies level `s` with the level whose quotient
/// has exponent `k`.
pub fn relative_augmentation_rows(level: &LevelMatrix, k: u64) -> IntegerMatrix {
    let m = level.order() as usize;
    let group_order = m.pow(level.n as u32);
    let cols = level.cols();
    let mut out = IntegerMatrix::zeros(cols * level.n, cols);
    let mut row = 0;
    for g in 0..level.gens {
        for h_idx in 0..group_order {
            for axis in 0..level.n {
                let stride = m.pow((level.n - 1 - axis) as u32);
                let coord = (h_idx / stride) % m;
                let shifted = h_idx - coord * stride + ((coord + k as usize) % m) * stride;
                out.add_to(row, g * group_order + shifted, &BigInt::from(1));
                out.add_to(row, g * group_order + h_idx, &BigInt::from(-1));
                row += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::{parse_presentation, LaurentPoly};
    use crate::linalg::{integer_snf, rank_over_fp, rank_over_q};

    #[test]
    fn free_module_has_no_rows() {
        let pres = ModulePresentation::new(3, 1, 1, vec![]).unwrap();
        let level = expand_level(&pres, 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!((level.matrix.rows(), level.matrix.cols()), (0, 3));
    }

    #[test]
    fn shift_minus_four() {
        let pres = parse_presentation("p=3; n=1; rel: x - 4").unwrap();
        let level = expand_level(&pres, 1, DEFAULT_SIZE_CAP).unwrap();
        let expected =
            IntegerMatrix::from_rows(&[vec![-4i64, 1, 0], vec![0, -4, 1], vec![1, 0, -4]]);
        assert_eq!(level.matrix, expected);
        assert_eq!(
            integer_snf(&level.matrix),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(63)]
        );
    }

    #[test]
    fn first_example_level_one() {
        let pres = parse_presentation("p=3; n=2; rel: p; rel: y - 2*x + 1").unwrap();
        let level = expand_level(&pres, 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(level.cols(), 9);
        assert_eq!(level.matrix.rows(), 18);
        assert_eq!(level.cols() - rank_over_fp(&level.matrix, 3), 3);
        assert_eq!(rank_over_q(&level.matrix), 9);
    }

    #[test]
    fn column_order_is_generator_major_lexicographic() {
        // x * e_1 at h = 0 lands on generator 1, element (1, 0) -> column 4 + 2
        let x = LaurentPoly::variable(2, 0);
        let pres = ModulePresentation::new(2, 2, 2, vec![vec![LaurentPoly::zero(2), x]]).unwrap();
        let level = expand_level(&pres, 1, DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(level.matrix.get(0, 6), &BigInt::from(1));
        assert_eq!(
            level.matrix.row(0).iter().filter(|v| !v.is_zero()).count(),
            1
        );
    }

    #[test]
    fn size_cap_names_requirement() {
        let pres = parse_presentation("p=3; n=2; rel: p").unwrap();
        assert_eq!(
            expand_level(&pres, 3, 100),
            Err(Error::SizeCap {
                required: 729,
                cap: 100
            })
        );
    }
}
