//! Smith normal form over the discrete valuation ring `F_p[[t]]`.
//!
//! Every ideal of `F_p[[t]]` is `(t^i)`, so the cokernel of a matrix is a sum
//! of cyclic modules `F_p[[t]]/(t^i)` and is described by the divisor
//! valuations. Entries are only known modulo `t^D`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extint::ExtInt;
use crate::series::{inverse_truncated, mul_truncated, TruncatedSeries};

/// A matrix over `F_p[[t]]/(t^D)`. Rows are relations, columns generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesMatrix {
    p: u64,
    trunc_degree: usize,
    rows: usize,
    cols: usize,
    entries: Vec<TruncatedSeries>,
}

impl SeriesMatrix {
    /// All entries must be over `F_p` (`K = 1`) with one shared `D`.
    pub fn from_rows(
        p: u64,
        trunc_degree: usize,
        rows: Vec<Vec<TruncatedSeries>>,
        cols: usize,
    ) -> Result<Self> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ParameterMismatch(format!(
                    "series matrix row has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for e in row {
                if e.p() != p || e.coeff_precision() != 1 || e.trunc_degree() != trunc_degree {
                    return Err(Error::ParameterMismatch(format!(
                        "series matrix entries must be over F_{p} mod t^{trunc_degree}, got (p={}, K={}, D={})",
                        e.p(),
                        e.coeff_precision(),
                        e.trunc_degree()
                    )));
                }
                entries.push(e);
            }
        }
        Ok(SeriesMatrix {
            p,
            trunc_degree,
            rows: nrows,
            cols,
            entries,
        })
    }

    /// Square matrix with `t^e` on the diagonal.
    pub fn diagonal_monomials(p: u64, trunc_degree: usize, exponents: &[usize]) -> Result<Self> {
        let n = exponents.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            TruncatedSeries::monomial(p, 1, trunc_degree, 1, exponents[i])
                        } else {
                            TruncatedSeries::zero(p, 1, trunc_degree)
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(p, trunc_degree, rows, n)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[TruncatedSeries] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Appends relation rows.
    pub fn with_rows(&self, extra: Vec<Vec<TruncatedSeries>>) -> Result<Self> {
        let mut rows: Vec<Vec<TruncatedSeries>> =
            (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        rows.extend(extra);
        Self::from_rows(self.p, self.trunc_degree, rows, self.cols)
    }

    /// Permuted copy: row `i` of the result is row `row_perm[i]` of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for &i in row_perm {
            for &j in col_perm {
                entries.push(self.get(i, j).clone());
            }
        }
        SeriesMatrix {
            entries,
            ..self.clone()
        }
    }
}

impl Serialize for SeriesMatrix {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            p: u64,
            #[serde(rename = "D")]
            d: usize,
            rows: Vec<Vec<&'a [u64]>>,
        }
        Repr {
            p: self.p,
            d: self.trunc_degree,
            rows: (0..self.rows)
                .map(|i| self.row(i).iter().map(TruncatedSeries::coeffs).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

/// Divisor valuations `i_1 <= i_2 <= ...` along the diagonal (one per
/// position of the shorter side), plus the number of columns that no
/// relation can reach.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DvrSnfResult {
    #[serde(rename = "divisors")]
    pub divisor_valuations: Vec<ExtInt>,
    pub certified: bool,
    pub free_rank: usize,
}

impl DvrSnfResult {
    /// `sum i_j` when everything is certified and there is no free part;
    /// otherwise a lower bound that is at least `D`.
    pub fn cokernel_dim(&self, trunc_degree: usize) -> ExtInt {
        let d = trunc_degree as u64;
        let total = self
            .divisor_valuations
            .iter()
            .fold(ExtInt::Exact(0), |acc, &v| acc + v)
            .offset(self.free_rank as u64 * d);
        match total {
            ExtInt::Exact(v) if self.free_rank == 0 => ExtInt::Exact(v),
            other => ExtInt::AtLeast(other.floor().max(d)),
        }
    }

    /// Certified divisor exponents.
    pub fn exact_valuations(&self) -> Vec<u64> {
        self.divisor_valuations
            .iter()
            .filter_map(|v| v.exact())
            .collect()
    }
}

fn leading_degree(a: &[u64]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

/// Smith normal form by minimal-valuation pivoting, ties broken row-major.
///
/// With the pivot of minimal valuation `v`, every entry of the pivot row
/// and column is divisible by `t^v`, and the elimination factors are only
/// needed modulo `t^(D-v)`; all entries therefore stay known modulo `t^D`.
/// Once every remaining entry vanishes modulo `t^D`, the remaining diagonal
/// positions are reported as `AtLeast(D)`.
pub fn dvr_snf(m: &SeriesMatrix) -> DvrSnfResult {
    let (r, c, d, p) = (m.rows, m.cols, m.trunc_degree, m.p);
    let mut a: Vec<Vec<Vec<u64>>> = (0..r)
        .map(|i| m.row(i).iter().map(|e| e.coeffs().to_vec()).collect())
        .collect();
    let diag = r.min(c);
    let mut divisors = Vec::with_capacity(diag);
    for k in 0..diag {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, entry) in row.iter().enumerate().skip(k) {
                if let Some(v) = leading_degree(entry) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else {
            divisors.extend(std::iter::repeat_n(ExtInt::AtLeast(d as u64), diag - k));
            break;
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        let unit_inv =
            inverse_truncated(&a[k][k][v..], p, p).expect("shifted pivot has a unit constant term");
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail.iter_mut() {
            if leading_degree(&row[k]).is_none() {
                continue;
            }
            let factor = mul_truncated(&row[k][v..], &unit_inv, d - v, p);
            for l in k + 1..c {
                let prod = mul_truncated(&factor, &pivot_row[l], d, p);
                for (x, y) in row[l].iter_mut().zip(prod) {
                    *x = (*x + p - y) % p;
                }
            }
            row[k].iter_mut().for_each(|x| *x = 0);
        }
        divisors.push(ExtInt::Exact(v as u64));
    }
    let certified = divisors.iter().all(|v| v.is_exact());
    DvrSnfResult {
        divisor_valuations: divisors,
        certified,
        free_rank: c - diag,
    }
}

/// `dim_Fp` of the cokernel: the sum of the divisor valuations, or a lower
/// bound of at least `D` when it cannot be certified finite.
pub fn cokernel_fp_dim(m: &SeriesMatrix) -> ExtInt {
    dvr_snf(m).cokernel_dim(m.trunc_degree)
}
