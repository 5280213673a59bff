//! Dense matrices over a [`Field`]: products, kernels, solves and inverses.

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

pub type Vector = Vec<Elem>;
pub type Matrix = Vec<Vec<Elem>>;

pub fn zeros(k: &Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![k.zero(); cols]; rows]
}

pub fn identity(k: &Field, n: usize) -> Matrix {
    let mut m = zeros(k, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = k.one();
    }
    m
}

pub fn unit_vector(k: &Field, n: usize, i: usize) -> Vector {
    let mut v = vec![k.zero(); n];
    v[i] = k.one();
    v
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(k: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = k.zero();
                    for (l, x) in row.iter().enumerate() {
                        if !k.is_zero(x) {
                            acc = k.add(&acc, &k.mul(x, &b[l][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(k: &Field, a: &Matrix, v: &Vector) -> Vector {
    a.iter().map(|row| dot(k, row, v)).collect()
}

pub fn dot(k: &Field, u: &Vector, v: &Vector) -> Elem {
    let mut acc = k.zero();
    for (x, y) in u.iter().zip(v) {
        if !k.is_zero(x) && !k.is_zero(y) {
            acc = k.add(&acc, &k.mul(x, y));
        }
    }
    acc
}

pub fn vec_add(k: &Field, u: &Vector, v: &Vector) -> Vector {
    u.iter().zip(v).map(|(x, y)| k.add(x, y)).collect()
}

pub fn vec_sub(k: &Field, u: &Vector, v: &Vector) -> Vector {
    u.iter().zip(v).map(|(x, y)| k.sub(x, y)).collect()
}

pub fn vec_scale(k: &Field, c: &Elem, v: &Vector) -> Vector {
    v.iter().map(|x| k.mul(c, x)).collect()
}

pub fn is_zero_vec(k: &Field, v: &Vector) -> bool {
    v.iter().all(|x| k.is_zero(x))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(k: &Field, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !k.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = k.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = k.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !k.is_zero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = k.mul(&f, &m[r][j]);
                    m[i][j] = k.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(k: &Field, m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(k, &mut a).len()
}

/// Basis of the right kernel {x : m x = 0}.
pub fn kernel(k: &Field, m: &Matrix, cols: usize) -> Vec<Vector> {
    let mut a = m.clone();
    let pivots = rref(k, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![k.zero(); cols];
            v[f] = k.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = k.neg(&a[r][f]);
            }
            v
        })
        .collect()
}

/// One solution of m x = b, if any.
pub fn solve(k: &Field, m: &Matrix, b: &Vector) -> Option<Vector> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(k, &mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![k.zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn inverse(k: &Field, m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(crate::linalg::unit_vector(k, n, i));
            r
        })
        .collect();
    let pivots = rref(k, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Precondition("matrix is singular".into()));
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(k: &Field, m: &Matrix) -> Elem {
    let n = m.len();
    let mut a = m.clone();
    let mut d = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !k.is_zero(&a[i][c])) else {
            return k.zero();
        };
        if p != c {
            a.swap(p, c);
            d = k.neg(&d);
        }
        d = k.mul(&d, &a[c][c]);
        let inv = k.inv(&a[c][c]).unwrap();
        for i in (c + 1)..n {
            if k.is_zero(&a[i][c]) {
                continue;
            }
            let f = k.mul(&a[i][c], &inv);
            for j in c..n {
                let t = k.mul(&f, &a[c][j]);
                a[i][j] = k.sub(&a[i][j], &t);
            }
        }
    }
    d
}

/// Extend linearly independent vectors to a basis of Kⁿ with unit vectors.
pub fn complete_basis(k: &Field, vs: &[Vector], n: usize) -> Vec<Vector> {
    let mut out = vs.to_vec();
    for i in 0..n {
        if out.len() == n {
            break;
        }
        let mut trial = out.clone();
        trial.push(unit_vector(k, n, i));
        if rank(k, &trial) == trial.len() {
            out = trial;
        }
    }
    out
}
