//! Exact Gaussian elimination over cyclotomic fields.

use crate::cyclotomic::Cyclotomic;

/// Rank of `rows` and, for each pivot column in order, the row it was found in.
pub fn rank_with_pivots(rows: &[Vec<Cyclotomic>]) -> (usize, Vec<(usize, usize)>) {
    let mut m: Vec<Vec<Cyclotomic>> = rows.to_vec();
    let mut origin: Vec<usize> = (0..m.len()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        origin.swap(r, p);
        let inv = m[r][col].inverse().expect("nonzero pivot");
        let pivot_row: Vec<Cyclotomic> = m[r].iter().map(|x| x * &inv).collect();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = &*x - &(&factor * y);
            }
        }
        m[r] = pivot_row;
        pivots.push((origin[r], col));
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (r, pivots)
}

pub fn rank(rows: &[Vec<Cyclotomic>]) -> usize {
    rank_with_pivots(rows).0
}
