use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::integer::IntegerMatrix;

/// Rank of `m` reduced modulo the prime `p`, by Gaussian elimination.
pub fn rank_over_fp(m: &IntegerMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|v| {
                    let r = v % &pb;
                    let r = if r < BigInt::from(0) { r + &pb } else { r };
                    r.to_u64().expect("reduced mod p")
                })
                .collect()
        })
        .filter(|r: &Vec<u64>| r.iter().any(|&v| v != 0))
        .collect();
    rank_of_residue_rows(&mut rows, p)
}

/// Row-reduces residues in `[0, p)` in place and returns the rank.
pub(crate) fn rank_of_residue_rows(rows: &mut [Vec<u64>], p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let pp = p as u128;
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv =
            crate::primes::inverse_mod(rows[rank][col], p).expect("nonzero residue mod a prime");
        for v in rows[rank][col..].iter_mut() {
            *v = (*v as u128 * inv as u128 % pp) as u64;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                if pivot_row[j] != 0 {
                    let sub = factor as u128 * pivot_row[j] as u128 % pp;
                    row[j] = ((row[j] as u128 + pp - sub) % pp) as u64;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rank_over_q;
    use proptest::prelude::*;

    #[test]
    fn scalar_multiple_of_p_vanishes() {
        let m = IntegerMatrix::from_rows(&[vec![5i64, 0, 0], vec![0, 5, 0], vec![0, 0, 5]]);
        assert_eq!(rank_over_fp(&m, 5), 0);
        assert_eq!(rank_over_fp(&m, 3), 3);
    }

    #[test]
    fn negative_entries() {
        let m = IntegerMatrix::from_rows(&[vec![-4i64, 1, 0], vec![0, -4, 1], vec![1, 0, -4]]);
        // det = -63, divisible by 3 and 7
        assert_eq!(rank_over_fp(&m, 3), 2);
        assert_eq!(rank_over_fp(&m, 7), 2);
        assert_eq!(rank_over_fp(&m, 5), 3);
    }

    proptest! {
        #[test]
        fn reduction_never_raises_rank(entries in prop::collection::vec(-6i64..6, 30), pidx in 0usize..3) {
            let p = [2u64, 3, 5][pidx];
            let rows: Vec<Vec<i64>> = entries.chunks(6).map(<[i64]>::to_vec).collect();
            let m = IntegerMatrix::from_rows(&rows);
            prop_assert!(rank_over_fp(&m, p) <= rank_over_q(&m));
        }
    }
}
