//! Exact Gaussian elimination.

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq)]
pub enum Solve<T> {
    /// The unique solution, plus the number of equations beyond the rank
    /// (all of which were satisfied).
    Unique { x: Vec<T>, redundant: usize },
    /// Some equation contradicts the others; `row` is its index in the input.
    Inconsistent { row: usize },
    /// Consistent but with fewer independent equations than unknowns.
    Underdetermined { rank: usize },
}

/// Solves `a · x = b` exactly. Every row of `a` must have the same length.
pub fn solve<T: Field>(a: &[Vec<T>], b: &[T]) -> Solve<T> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<(usize, Vec<T>)> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (r, v))| {
            assert_eq!(r.len(), cols, "ragged matrix");
            let mut row = r.clone();
            row.push(v.clone());
            (i, row)
        })
        .collect();

    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i].1[col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = T::one() / rows[rank].1[col].clone();
        for v in rows[rank].1.iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = rows[rank].1.clone();
        for (i, (_, row)) in rows.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }

    // Rows past the rank are zero on the left; a nonzero right side is a
    // contradiction. Report the earliest such input row.
    if let Some(row) = rows[rank..]
        .iter()
        .filter(|(_, r)| !r[cols].is_zero())
        .map(|(i, _)| *i)
        .min()
    {
        return Solve::Inconsistent { row };
    }
    if rank < cols {
        return Solve::Underdetermined { rank };
    }
    let mut x = vec![T::zero(); cols];
    for (k, &col) in pivots.iter().enumerate() {
        x[col] = rows[k].1[cols].clone();
    }
    Solve::Unique {
        x,
        redundant: rows.len() - rank,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;
    use crate::Rational;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| frac(v, 1)).collect()).collect()
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| frac(x, 1)).collect()
    }

    #[test]
    fn unique_with_redundancy() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        match solve(&a, &v(&[3, 1, 4])) {
            Solve::Unique { x, redundant } => {
                assert_eq!(x, v(&[2, 1]));
                assert_eq!(redundant, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        assert_eq!(solve(&a, &v(&[3, 1, 5])), Solve::Inconsistent { row: 2 });
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &v(&[1, 2])), Solve::Underdetermined { rank: 1 });
    }

    #[test]
    fn fractional_solution() {
        let a = m(&[&[2, 1], &[1, 3]]);
        match solve(&a, &v(&[1, 0])) {
            Solve::Unique { x, .. } => assert_eq!(x, vec![frac(3, 5), frac(-1, 5)]),
            other => panic!("{other:?}"),
        }
    }
}
