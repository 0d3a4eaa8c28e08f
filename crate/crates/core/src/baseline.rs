//! Reference rankings that do not use the column presort or refinement.
//!
//! [`stable_lex_sort`] is the classic approach: stable-sort a row
//! permutation by each key column, least significant first.
//! [`brute_force_ranking`] materialises every row's decoded tuple and sorts
//! those; it is the oracle the rest of the crate is tested against.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lexsort::RankingVector;
use crate::matrix::{ColumnOrder, DataMatrix};

/// Top-down merge sort of `items` by `cmp`. Stable; `O(m log m)`.
pub fn merge_sort_by<T: Copy, F>(items: &mut [T], mut cmp: F)
where
    F: FnMut(&T, &T) -> Ordering,
{
    let mut buf = items.to_vec();
    merge_rec(items, &mut buf, &mut cmp);
}

fn merge_rec<T: Copy, F>(items: &mut [T], buf: &mut [T], cmp: &mut F)
where
    F: FnMut(&T, &T) -> Ordering,
{
    let len = items.len();
    if len <= 1 {
        return;
    }
    let mid = len / 2;
    {
        let (lo, hi) = items.split_at_mut(mid);
        let (blo, bhi) = buf.split_at_mut(mid);
        merge_rec(lo, blo, cmp);
        merge_rec(hi, bhi, cmp);
    }
    buf[..len].copy_from_slice(items);
    let (mut i, mut j) = (0, mid);
    for slot in items.iter_mut() {
        // take from the right run only when strictly smaller
        if j < len && (i >= mid || cmp(&buf[j], &buf[i]) == Ordering::Less) {
            *slot = buf[j];
            j += 1;
        } else {
            *slot = buf[i];
            i += 1;
        }
    }
}

/// Positions of `keys` in nondecreasing key order; equal keys keep their
/// input order.
pub fn stable_sort_permutation<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..keys.len()).collect();
    merge_sort_by(&mut perm, |&a, &b| keys[a].cmp(&keys[b]));
    perm
}

fn check_columns(matrix: &DataMatrix, seq: &[usize]) -> Result<()> {
    seq.iter().try_for_each(|&c| matrix.check_column(c))
}

/// Lexicographic ranking by iterated stable sort over `seq`, last column
/// first.
pub fn stable_lex_sort(matrix: &DataMatrix, seq: &[usize]) -> Result<RankingVector> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    check_columns(matrix, seq)?;
    let mut perm: Vec<u32> = (0..matrix.rows() as u32).collect();
    let mut buf = perm.clone();
    for &c in seq.iter().rev() {
        let values = matrix.column(c);
        merge_rec(&mut perm, &mut buf, &mut |&a: &u32, &b: &u32| {
            values[a as usize].cmp(&values[b as usize])
        });
    }

    let mut ranks = vec![0u32; matrix.rows()];
    let mut rank = 0u32;
    for w in perm.windows(2) {
        let (prev, cur) = (w[0] as usize, w[1] as usize);
        if seq.iter().any(|&c| matrix.get(prev, c) != matrix.get(cur, c)) {
            rank += 1;
        }
        ranks[cur] = rank;
    }
    RankingVector::from_ranks(ranks)
}

/// A decoded cell, compared the way its column declares.
#[derive(Debug, Clone, PartialEq)]
enum Cell<'a> {
    Number(f64, &'a str),
    Text(&'a str),
}

impl Cell<'_> {
    fn compare(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cell::Number(x, a), Cell::Number(y, b)) => x.total_cmp(y).then_with(|| a.cmp(b)),
            (Cell::Text(a), Cell::Text(b)) => a.as_bytes().cmp(b.as_bytes()),
            _ => unreachable!("cells of one column share a kind"),
        }
    }
}

/// Naive ranking: build each row's decoded tuple, sort the tuples, number
/// the distinct ones.
pub fn brute_force_ranking(matrix: &DataMatrix, seq: &[usize]) -> Result<RankingVector> {
    check_columns(matrix, seq)?;
    let tuples: Vec<Vec<Cell>> = (0..matrix.rows())
        .map(|r| {
            seq.iter()
                .map(|&c| {
                    let token = matrix.decode(r, c);
                    match matrix.column_order(c) {
                        ColumnOrder::Numeric => Cell::Number(token.parse().unwrap(), token),
                        ColumnOrder::Lexical => Cell::Text(token),
                    }
                })
                .collect()
        })
        .collect();
    let cmp_rows = |a: &usize, b: &usize| {
        tuples[*a]
            .iter()
            .zip(&tuples[*b])
            .map(|(x, y)| x.compare(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    };
    let mut rows: Vec<usize> = (0..matrix.rows()).collect();
    rows.sort_unstable_by(cmp_rows);

    let mut ranks = vec![0u32; matrix.rows()];
    let mut rank = 0;
    for w in rows.windows(2) {
        if cmp_rows(&w[0], &w[1]).is_ne() {
            rank += 1;
        }
        ranks[w[1]] = rank;
    }
    RankingVector::from_ranks(ranks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{parse_matrix, Format};
    use crate::testdata::{EXAMPLE_D, EXAMPLE_E};
    use proptest::prelude::*;

    fn d() -> DataMatrix {
        parse_matrix(EXAMPLE_D.as_bytes(), Format::Csv, false).unwrap()
    }

    #[test]
    fn stable_lex_sort_examples() {
        assert_eq!(
            stable_lex_sort(&d(), &[0, 1, 2, 3, 4]).unwrap().ranks(),
            &[6, 5, 0, 5, 2, 4, 7, 3, 1, 4]
        );
        let constant = DataMatrix::from_value_columns(&[vec![2; 5]]).unwrap();
        assert_eq!(stable_lex_sort(&constant, &[0]).unwrap(), RankingVector::zeros(5));
        assert_eq!(stable_lex_sort(&d(), &[]), Err(Error::EmptySequence));
        assert!(matches!(
            stable_lex_sort(&d(), &[9]),
            Err(Error::ColumnOutOfRange { .. })
        ));
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(
            brute_force_ranking(&d(), &[0, 3, 4]).unwrap().ranks(),
            &[4, 3, 0, 3, 2, 2, 5, 4, 1, 2]
        );
        let same = DataMatrix::from_rows(&vec![vec![1, 2, 3]; 4]).unwrap();
        assert_eq!(brute_force_ranking(&same, &[2, 0]).unwrap(), RankingVector::zeros(4));
        let e = parse_matrix(EXAMPLE_E.as_bytes(), Format::Csv, false).unwrap();
        assert_eq!(brute_force_ranking(&e, &[1, 2]).unwrap().ranks(), &[2, 2, 0, 3, 1]);
        assert_eq!(brute_force_ranking(&e, &[]).unwrap(), RankingVector::zeros(5));
    }

    #[test]
    fn brute_force_uses_decoded_order() {
        let m = parse_matrix(b"10,b\n9,a\n10,a\n", Format::Csv, false).unwrap();
        assert_eq!(brute_force_ranking(&m, &[0, 1]).unwrap().ranks(), &[2, 0, 1]);
    }

    #[test]
    fn stable_permutation_of_example_column() {
        let col4 = d().column(4).to_vec();
        assert_eq!(stable_sort_permutation(&col4), vec![1, 2, 3, 6, 8, 0, 4, 5, 7, 9]);
        assert_eq!(stable_sort_permutation(&[1, 4, 9]), vec![0, 1, 2]);
        assert_eq!(stable_sort_permutation(&[3, 3, 3, 3]), vec![0, 1, 2, 3]);
        assert!(stable_sort_permutation::<u8>(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn merge_sort_is_stable(keys in prop::collection::vec(0u8..4, 0..200)) {
            let perm = stable_sort_permutation(&keys);
            for w in perm.windows(2) {
                prop_assert!(keys[w[0]] < keys[w[1]] || (keys[w[0]] == keys[w[1]] && w[0] < w[1]));
            }
        }

        #[test]
        fn stable_matches_oracle(
            rows in prop::collection::vec(prop::collection::vec(0u32..3, 4), 1..30),
            seq in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
            len in 1usize..=4,
        ) {
            let m = DataMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(stable_lex_sort(&m, &seq[..len]).unwrap(), brute_force_ranking(&m, &seq[..len]).unwrap());
        }
    }
}
