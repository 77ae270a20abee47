//! Smith normal form over ℤ with the column transform tracked.
//!
//! Only what the quotient construction needs: for an integer matrix `A`
//! returns the diagonal `D` and a unimodular `V` with `U·A·V = D` for some
//! unimodular `U`.

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<i128>>;

fn overflow() -> Error {
    Error::Internal("integer overflow in Smith normal form".into())
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn col_axpy(m: &mut Matrix, dst: usize, src: usize, q: i128) -> Result<()> {
    // column dst -= q * column src
    for row in m.iter_mut() {
        let t = q.checked_mul(row[src]).ok_or_else(overflow)?;
        row[dst] = row[dst].checked_sub(t).ok_or_else(overflow)?;
    }
    Ok(())
}

fn row_axpy(m: &mut Matrix, dst: usize, src: usize, q: i128) -> Result<()> {
    let (s, d) = (m[src].clone(), &mut m[dst]);
    for (x, y) in d.iter_mut().zip(s) {
        let t = q.checked_mul(y).ok_or_else(overflow)?;
        *x = x.checked_sub(t).ok_or_else(overflow)?;
    }
    Ok(())
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Returns `(diagonal, v)`; the diagonal has `min(rows, cols)` nonnegative
/// entries forming a divisibility chain.
pub fn smith_normal_form(a: &Matrix, cols: usize) -> Result<(Vec<i128>, Matrix)> {
    let mut m = a.clone();
    let rows = m.len();
    let mut v = identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // pivot: smallest nonzero |entry| in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(m, v, n);
            };
            m.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    row_axpy(&mut m, i, t, q)?;
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    col_axpy(&mut m, j, t, q)?;
                    col_axpy(&mut v, j, t, q)?;
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            match bad {
                Some(i) => {
                    // add row i to row t and go again
                    row_axpy(&mut m, t, i, -1)?;
                }
                None => break,
            }
        }
    }
    finish(m, v, n)
}

fn finish(mut m: Matrix, mut v: Matrix, n: usize) -> Result<(Vec<i128>, Matrix)> {
    for t in 0..n {
        if m[t][t] < 0 {
            // negate column t of both
            for row in m.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    Ok(((0..n).map(|t| m[t][t]).collect(), v))
}
