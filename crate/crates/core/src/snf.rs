//! Smith normal form over the integers.
//!
//! Pivoting always picks an entry of minimal absolute value in the active
//! submatrix and swaps it into place. Remainders shrink strictly, so each
//! pivot position terminates; the divisibility pass then forces
//! `d_1 | d_2 | ...`.

use crate::matrix::IntegerMatrix;
use crate::scalar::IntegerRing;

/// `left * matrix * right == diagonal`, with `right_inverse * right == I`.
#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    pub diagonal: IntegerMatrix<T>,
    pub left: IntegerMatrix<T>,
    pub right: IntegerMatrix<T>,
    pub right_inverse: IntegerMatrix<T>,
    pub rank: usize,
}

impl<T: IntegerRing> SmithForm<T> {
    /// Nonzero diagonal entries, in order.
    pub fn nonzero_diagonal(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.diagonal[(i, i)].clone()).collect()
    }
}

struct Transforms<T> {
    left: IntegerMatrix<T>,
    right: IntegerMatrix<T>,
    right_inverse: IntegerMatrix<T>,
}

/// Full decomposition with unimodular transforms.
pub fn smith_normal_form<T: IntegerRing>(m: &IntegerMatrix<T>) -> SmithForm<T> {
    let (r, c) = m.shape();
    let mut a = m.clone();
    let mut tr =
        Some(Transforms { left: IntegerMatrix::identity(r), right: IntegerMatrix::identity(c), right_inverse: IntegerMatrix::identity(c) });
    let rank = reduce(&mut a, &mut tr);
    let tr = tr.expect("transforms requested");
    SmithForm { diagonal: a, left: tr.left, right: tr.right, right_inverse: tr.right_inverse, rank }
}

/// Nonzero invariant factors (units included) without tracking transforms.
///
/// Unit entries are eliminated first on a sparse copy; only what survives
/// goes through the dense reduction. Relation matrices of graded modules are
/// mostly unit-pivot eliminations, so this keeps large presentations cheap.
pub fn invariant_factors<T: IntegerRing>(m: &IntegerMatrix<T>) -> Vec<T> {
    let mut rows: Vec<Vec<(usize, T)>> = m
        .iter_rows()
        .map(|row| row.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(j, e)| (j, e.clone())).collect())
        .filter(|r: &Vec<(usize, T)>| !r.is_empty())
        .collect();
    let mut eliminated = vec![false; m.cols()];
    let mut units = 0usize;

    loop {
        let pivot = rows.iter().enumerate().find_map(|(i, row)| row.iter().find(|(_, e)| e.is_unit()).map(|(j, e)| (i, *j, e.clone())));
        let Some((pi, pj, pe)) = pivot else { break };
        let prow = rows.swap_remove(pi);
        for row in rows.iter_mut() {
            if let Ok(k) = row.binary_search_by_key(&pj, |(j, _)| *j) {
                // e is ±1, so it is its own inverse
                let factor = -(row[k].1.clone() * pe.clone());
                *row = axpy_sparse(row, &prow, &factor);
            }
        }
        rows.retain(|r| !r.is_empty());
        eliminated[pj] = true;
        units += 1;
    }

    let remaining: Vec<usize> = (0..m.cols()).filter(|&j| !eliminated[j]).collect();
    let mut index = vec![usize::MAX; m.cols()];
    for (k, &j) in remaining.iter().enumerate() {
        index[j] = k;
    }
    let mut dense = IntegerMatrix::zeros(rows.len(), remaining.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row {
            dense[(i, index[*j])] = e.clone();
        }
    }
    let mut none = None;
    let rank = reduce(&mut dense, &mut none);
    let mut out = vec![T::one(); units];
    out.extend((0..rank).map(|i| dense[(i, i)].clone()));
    out
}

/// `row + factor * other` on sorted sparse rows.
fn axpy_sparse<T: IntegerRing>(row: &[(usize, T)], other: &[(usize, T)], factor: &T) -> Vec<(usize, T)> {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut k) = (0, 0);
    while i < row.len() || k < other.len() {
        let take_row = k >= other.len() || (i < row.len() && row[i].0 < other[k].0);
        let take_other = i >= row.len() || (k < other.len() && other[k].0 < row[i].0);
        let (j, v) = if take_row {
            i += 1;
            (row[i - 1].0, row[i - 1].1.clone())
        } else if take_other {
            k += 1;
            (other[k - 1].0, factor.clone() * other[k - 1].1.clone())
        } else {
            i += 1;
            k += 1;
            (row[i - 1].0, row[i - 1].1.clone() + factor.clone() * other[k - 1].1.clone())
        };
        if !v.is_zero() {
            out.push((j, v));
        }
    }
    out
}

fn min_abs_entry<T: IntegerRing>(a: &IntegerMatrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, T)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let e = &a[(i, j)];
            if e.is_zero() {
                continue;
            }
            let v = e.abs();
            if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                let unit = v.is_one();
                best = Some((i, j, v));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// In-place reduction to Smith form; returns the rank.
fn reduce<T: IntegerRing>(a: &mut IntegerMatrix<T>, tr: &mut Option<Transforms<T>>) -> usize {
    let (r, c) = a.shape();
    let mut rank = 0;
    for t in 0..r.min(c) {
        let Some((pi, pj)) = min_abs_entry(a, t) else { break };
        swap_rows(a, tr, t, pi);
        swap_cols(a, tr, t, pj);
        loop {
            let pivot = a[(t, t)].clone();
            for i in t + 1..r {
                if !a[(i, t)].is_zero() {
                    let q = a[(i, t)].div_floor(&pivot);
                    add_row(a, tr, i, t, &-q);
                }
            }
            for j in t + 1..c {
                if !a[(t, j)].is_zero() {
                    let q = a[(t, j)].div_floor(&pivot);
                    add_col(a, tr, j, t, &-q);
                }
            }
            // Remainders left in the pivot row/column are smaller than the pivot.
            let mut smallest: Option<(usize, usize)> = None;
            let mut smallest_abs = pivot.abs();
            for i in t + 1..r {
                let v = a[(i, t)].abs();
                if !v.is_zero() && v < smallest_abs {
                    smallest_abs = v;
                    smallest = Some((i, t));
                }
            }
            for j in t + 1..c {
                let v = a[(t, j)].abs();
                if !v.is_zero() && v < smallest_abs {
                    smallest_abs = v;
                    smallest = Some((t, j));
                }
            }
            if let Some((i, j)) = smallest {
                swap_rows(a, tr, t, i);
                swap_cols(a, tr, t, j);
                continue;
            }
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    add_row(a, tr, t, i, &T::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(tr) = tr {
                tr.left.negate_row(t);
            }
        }
        rank += 1;
    }
    rank
}

fn swap_rows<T: IntegerRing>(a: &mut IntegerMatrix<T>, tr: &mut Option<Transforms<T>>, i: usize, j: usize) {
    a.swap_rows(i, j);
    if let Some(tr) = tr {
        tr.left.swap_rows(i, j);
    }
}

fn swap_cols<T: IntegerRing>(a: &mut IntegerMatrix<T>, tr: &mut Option<Transforms<T>>, i: usize, j: usize) {
    a.swap_cols(i, j);
    if let Some(tr) = tr {
        tr.right.swap_cols(i, j);
        tr.right_inverse.swap_rows(i, j);
    }
}

fn add_row<T: IntegerRing>(a: &mut IntegerMatrix<T>, tr: &mut Option<Transforms<T>>, target: usize, source: usize, f: &T) {
    a.add_row_multiple(target, source, f);
    if let Some(tr) = tr {
        tr.left.add_row_multiple(target, source, f);
    }
}

fn add_col<T: IntegerRing>(a: &mut IntegerMatrix<T>, tr: &mut Option<Transforms<T>>, target: usize, source: usize, f: &T) {
    a.add_col_multiple(target, source, f);
    if let Some(tr) = tr {
        tr.right.add_col_multiple(target, source, f);
        // inverse of (col_target += f col_source) acts on rows: row_source -= f row_target
        tr.right_inverse.add_row_multiple(source, target, &-f.clone());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    fn m(cols: usize, rows: &[&[i32]]) -> IntegerMatrix<BigInt> {
        IntegerMatrix::from_i32_rows(cols, rows).unwrap()
    }

    fn diag_entries(s: &SmithForm<BigInt>) -> Vec<BigInt> {
        s.nonzero_diagonal()
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        // Hand reduction: [[2,0],[0,3]] -> add row 2 to row 1 -> [[2,3],[0,3]]
        // -> col ops give gcd 1 in the corner, leaving 6.
        let s = smith_normal_form(&m(2, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal, m(2, &[&[1, 0], &[0, 6]]));
    }

    #[test]
    fn zero_and_already_normal() {
        let z = IntegerMatrix::<BigInt>::zeros(2, 2);
        let s = smith_normal_form(&z);
        assert_eq!(s.diagonal, z);
        assert_eq!(s.rank, 0);
        let s = smith_normal_form(&m(1, &[&[4]]));
        assert_eq!(s.diagonal, m(1, &[&[4]]));
    }

    #[test]
    fn fixed_width_scalars_work_for_small_inputs() {
        let a = IntegerMatrix::<i64>::from_i32_rows(2, &[&[2, 4], &[6, 8]]).unwrap();
        let s = smith_normal_form(&a);
        assert_eq!(s.nonzero_diagonal(), vec![2, 4]);
        assert_eq!(invariant_factors(&a), vec![2, 4]);
    }

    #[test]
    fn empty_shapes() {
        let a = IntegerMatrix::<BigInt>::zeros(0, 3);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 0);
        assert_eq!(s.right.shape(), (3, 3));
        assert!(invariant_factors(&a).is_empty());
    }

    fn small_matrix() -> impl Strategy<Value = IntegerMatrix<BigInt>> {
        (0usize..=5, 0usize..=5).prop_flat_map(|(r, c)| {
            prop::collection::vec(-9i32..=9, r * c).prop_map(move |v| {
                let rows: Vec<Vec<BigInt>> = v.chunks(c.max(1)).take(r).map(|ch| ch.iter().map(|&x| BigInt::from(x)).collect()).collect();
                if c == 0 {
                    IntegerMatrix::zeros(r, 0)
                } else {
                    IntegerMatrix::from_rows(c, rows).unwrap()
                }
            })
        })
    }

    proptest! {
        #[test]
        fn transforms_reproduce_diagonal(a in small_matrix()) {
            let s = smith_normal_form(&a);
            let prod = &(&s.left * &a) * &s.right;
            prop_assert_eq!(&prod, &s.diagonal);
            prop_assert!(s.left.determinant().unwrap().abs() == BigInt::from(1));
            prop_assert!(s.right.determinant().unwrap().abs() == BigInt::from(1));
            prop_assert_eq!(&s.right_inverse * &s.right, IntegerMatrix::identity(a.cols()));
            let d = diag_entries(&s);
            for w in d.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            for x in &d {
                prop_assert!(*x > BigInt::from(0));
            }
            // off-diagonal entries vanish
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    if i != j { prop_assert!(s.diagonal[(i, j)].is_zero()); }
                }
            }
        }

        #[test]
        fn idempotent(a in small_matrix()) {
            let s = smith_normal_form(&a);
            let again = smith_normal_form(&s.diagonal);
            prop_assert_eq!(again.diagonal, s.diagonal);
        }

        #[test]
        fn sparse_path_agrees_with_dense(a in small_matrix()) {
            let dense = diag_entries(&smith_normal_form(&a));
            prop_assert_eq!(invariant_factors(&a), dense);
        }
    }
}
