//! Dense exact linear algebra over a [`Field`].

use crate::scalar::Field;

pub type Matrix<F> = Vec<Vec<F>>;

/// Row-reduces in place to reduced row echelon form, choosing pivots from
/// the leftmost column first. Returns the pivot columns, one per nonzero row;
/// zero rows are removed.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv();
        for x in m[row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let a = m[r][col].clone();
            for c in col..ncols {
                let v = m[row][c].clone();
                if !v.is_zero() {
                    m[r][c] = m[r][c].clone() - a.clone() * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Determinant by Gaussian elimination.
pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut d = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let piv = a[col][col].clone();
        d = d * piv.clone();
        let inv = piv.inv();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() * inv.clone();
            for c in col..n {
                a[r][c] = a[r][c].clone() - f.clone() * a[col][c].clone();
            }
        }
    }
    d
}

/// Reduces `v` against rows of a matrix in reduced echelon form with the
/// given pivot columns; the result vanishes on every pivot column.
pub fn reduce_against<F: Field>(v: &mut [F], rows: &Matrix<F>, pivots: &[usize]) {
    for (row, &p) in rows.iter().zip(pivots) {
        if v[p].is_zero() {
            continue;
        }
        let a = v[p].clone();
        for (x, r) in v.iter_mut().zip(row) {
            if !r.is_zero() {
                *x = x.clone() - a.clone() * r.clone();
            }
        }
    }
}
