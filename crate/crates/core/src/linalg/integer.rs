use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::fp::rank_over_fp;
use crate::primes::is_prime;

/// A dense matrix of arbitrary-precision integers, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged integer matrix");
            for (j, v) in row.iter().enumerate() {
                m.data[i * cols + j] = v.clone().into();
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: &BigInt) {
        self.data[i * self.cols + j] += value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntegerMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Nested arrays; entries that fit an `i64` are numbers, larger ones strings.
impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Entry {
            Small(i64),
            Big(String),
        }
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<Entry> = self
                .row(i)
                .iter()
                .map(|v| {
                    v.to_i64()
                        .map_or_else(|| Entry::Big(v.to_string()), Entry::Small)
                })
                .collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

fn divide_by_content(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for v in row.iter() {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return;
            }
        }
    }
    if g > BigInt::one() {
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v /= &g;
            }
        }
    }
}

/// Exact rank over `Q` by fraction-free elimination.
///
/// Each update is `row <- (pivot/g) row - (a/g) pivot_row` with
/// `g = gcd(pivot, a)`, followed by division of the row by its content, so
/// no fractions appear and rows that already vanish in the pivot column are
/// left untouched.
pub fn rank_over_q(m: &IntegerMatrix) -> usize {
    let mut rows: Vec<Vec<BigInt>> = m.to_rows();
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    for r in rows.iter_mut() {
        divide_by_content(r);
    }
    let mut rank = 0;
    for col in 0..m.cols() {
        if rank == rows.len() {
            break;
        }
        let pivot = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].bits());
        let Some(pivot) = pivot else { continue };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pv = &pivot_row[col];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[col]);
            let a = pv / &g;
            let b = &row[col] / &g;
            for j in col..row.len() {
                if pivot_row[j].is_zero() {
                    if !row[j].is_zero() {
                        row[j] *= &a;
                    }
                } else {
                    row[j] = &a * &row[j] - &b * &pivot_row[j];
                }
            }
            divide_by_content(&mut row[col..]);
        }
        rank += 1;
    }
    rank
}

/// Probabilistic rank over `Q`: the maximum rank modulo `trials` random
/// primes near `2^61`. It can only under-report, with negligible probability.
pub fn rank_over_q_modular(m: &IntegerMatrix, trials: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials {
        let p = loop {
            let candidate = rng.random_range((1u64 << 60)..(1u64 << 61)) | 1;
            if is_prime(candidate) {
                break candidate;
            }
        };
        best = best.max(rank_over_fp(m, p));
    }
    best
}

/// Nonzero elementary divisors `d1 | d2 | ...` (all positive), so that the
/// cokernel of the row space is `Z/d1 + Z/d2 + ... + Z^(cols - rank)`.
///
/// Plain gcd-driven reduction: cubic in the size with unbounded coefficient
/// growth, fine for the small matrices it is used on.
pub fn integer_snf(m: &IntegerMatrix) -> Vec<BigInt> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_rows();
    let mut divisors = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    let pivot_row = a[t].clone();
                    for j in t..cols {
                        a[i][j] -= &q * &pivot_row[j];
                    }
                    dirty |= !a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let delta = &q * &row[t];
                        row[j] -= delta;
                    }
                    dirty |= !a[t][j].is_zero();
                }
            }
            if dirty {
                // A smaller remainder appeared in the pivot row or column.
                let in_col = (t..rows)
                    .filter(|&i| !a[i][t].is_zero())
                    .min_by_key(|&i| a[i][t].abs());
                let in_row = (t..cols)
                    .filter(|&j| !a[t][j].is_zero())
                    .min_by_key(|&j| a[t][j].abs());
                match (in_col, in_row) {
                    (Some(i), Some(j)) if a[t][j].abs() < a[i][t].abs() => swap_cols(&mut a, t, j),
                    (Some(i), _) => a.swap(t, i),
                    (None, Some(j)) => swap_cols(&mut a, t, j),
                    (None, None) => unreachable!("pivot is nonzero"),
                }
                continue;
            }
            // The pivot must divide the whole remaining block.
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match offender {
                Some(i) => {
                    let row = a[i][t..cols].to_vec();
                    for (x, v) in a[t][t..cols].iter_mut().zip(row) {
                        *x += v;
                    }
                }
                None => break,
            }
        }
        divisors.push(a[t][t].abs());
    }
    divisors
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<BigInt>], x: usize, y: usize) {
    if x != y {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_q(&IntegerMatrix::identity(4)), 4);
        // cyclic shift minus 4 I, determinant -63
        let m = IntegerMatrix::from_rows(&[vec![-4i64, 1, 0], vec![0, -4, 1], vec![1, 0, -4]]);
        assert_eq!(rank_over_q(&m), 3);
        assert_eq!(rank_over_q(&IntegerMatrix::zeros(3, 5)), 0);
        assert_eq!(rank_over_q(&IntegerMatrix::zeros(0, 5)), 0);
    }

    #[test]
    fn rank_of_low_rank_product() {
        let u = IntegerMatrix::from_rows(&[
            vec![1i64, 2, -1],
            vec![0, 3, 5],
            vec![7, -2, 1],
            vec![4, 4, 4],
            vec![-3, 0, 2],
            vec![1, 1, 9],
        ]);
        let v = IntegerMatrix::from_rows(&[
            vec![2i64, 0, 1, -1, 3, 5],
            vec![1, 1, 0, 4, -2, 0],
            vec![0, 6, 1, 1, 1, -7],
        ]);
        let m = u.mul(&v);
        assert_eq!(rank_over_q(&m), 3);
        // Rows 0..3 of u are independent and v has a nonzero 3x3 minor on
        // columns 0..3, so the leading minor certifies rank >= 3.
        let minor = IntegerMatrix::from_rows(&[
            m.row(0)[..3].to_vec(),
            m.row(1)[..3].to_vec(),
            m.row(2)[..3].to_vec(),
        ]);
        assert_eq!(rank_over_q(&minor), 3);
        assert_eq!(rank_over_q_modular(&m, 3, 7), 3);
    }

    #[test]
    fn snf_examples() {
        let d = IntegerMatrix::from_rows(&[vec![2i64, 0], vec![0, 6]]);
        assert_eq!(integer_snf(&d), big(&[2, 6]));
        let m = IntegerMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]);
        assert_eq!(integer_snf(&m), big(&[2, 4]));
        let m = IntegerMatrix::from_rows(&[vec![63i64]]);
        assert_eq!(integer_snf(&m), big(&[63]));
        let m = IntegerMatrix::from_rows(&[vec![6i64, 0], vec![0, 4]]);
        assert_eq!(integer_snf(&m), big(&[2, 12]));
        let m = IntegerMatrix::from_rows(&[vec![0i64, 0, 0], vec![0, 5, 0]]);
        assert_eq!(integer_snf(&m), big(&[5]));
    }

    #[test]
    fn json_and_text() {
        let m = IntegerMatrix::from_rows(&[vec![1i64, -20], vec![300, 4]]);
        assert_eq!(serde_json::to_string(&m).unwrap(), "[[1,-20],[300,4]]");
        assert_eq!(m.to_string(), "[  1 -20]\n[300   4]\n");
    }
}
