//! Exact linear algebra over the rationals: reduced row-echelon forms,
//! nullspaces, affine solves, and unimodular integer completions.

use num_traits::{One, Signed, Zero};

use super::scalar::{int, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// Reduces `m` in place to reduced row-echelon form and returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Canonical basis of the row space: the non-zero rows of the RREF.
pub fn row_space(rows: &Matrix) -> Matrix {
    let mut a = rows.clone();
    let k = rref(&mut a).len();
    a.truncate(k);
    a
}

/// Canonical (RREF) basis of `{x : m x = 0}` where `m` has `ncols` columns.
pub fn nullspace(m: &Matrix, ncols: usize) -> Matrix {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][f].clone();
        }
        basis.push(v);
    }
    row_space(&basis)
}

pub fn transpose(m: &Matrix, ncols: usize) -> Matrix {
    (0..ncols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

/// Some solution of `m x = b`, free variables set to zero; `None` if inconsistent.
pub fn solve(m: &Matrix, b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some(x)
}

/// Reduces `v` against an RREF basis so that it vanishes on every pivot column.
pub fn reduce_against(v: &mut [Rational], basis: &Matrix) {
    for row in basis {
        let Some(pc) = row.iter().position(|x| !x.is_zero()) else { continue };
        if v[pc].is_zero() {
            continue;
        }
        let f = v[pc].clone();
        for (x, b) in v.iter_mut().zip(row) {
            if !b.is_zero() {
                *x -= &f * b;
            }
        }
    }
}

/// Determinant by elimination.
pub fn det(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Rational::zero() };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        let inv = a[c][c].recip();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// Integer matrix (column-major semantics: `a[row][col]`) with det +1 whose
/// last column is the primitive vector `v`. For `l = 1` the determinant is `v[0]`.
pub fn complete_to_unimodular(v: &[i64]) -> Vec<Vec<i64>> {
    let l = v.len();
    let mut w: Vec<i64> = v.to_vec();
    // Invariant: c * w == v.
    let mut c: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
    loop {
        let nz: Vec<usize> = (0..l).filter(|&i| w[i] != 0).collect();
        assert!(!nz.is_empty(), "zero vector has no unimodular completion");
        if nz.len() == 1 {
            let i = nz[0];
            assert_eq!(w[i].abs(), 1, "vector must be primitive");
            if i != 0 {
                w.swap(0, i);
                for row in c.iter_mut() {
                    row.swap(0, i);
                }
            }
            if w[0] < 0 {
                w[0] = -w[0];
                for row in c.iter_mut() {
                    row[0] = -row[0];
                }
            }
            break;
        }
        // Reduce the larger entries modulo the smallest one.
        let piv = *nz.iter().min_by_key(|&&i| w[i].abs()).unwrap();
        for &i in &nz {
            if i == piv {
                continue;
            }
            let k = w[i].div_euclid(w[piv]);
            // row_i -= k * row_piv  <=>  col_piv += k * col_i
            w[i] -= k * w[piv];
            for row in c.iter_mut() {
                row[piv] += k * row[i];
            }
        }
    }
    // c[:,0] == v; rotate it to the last column.
    let mut a: Vec<Vec<i64>> = c.iter().map(|row| {
        let mut r = row[1..].to_vec();
        r.push(row[0]);
        r
    }).collect();
    if l >= 2 {
        let m: Matrix = a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        if det(&m).is_negative() {
            for row in a.iter_mut() {
                row[0] = -row[0];
            }
        }
    }
    a
}
