//! Exact dense linear algebra over [`Scalar`]s.
//!
//! Matrices are row lists. Kernels are right kernels: `m · x = 0`.

use crate::field::{Field, Scalar};

pub type Vector = Vec<Scalar>;
pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
    vec![vec![field.zero(); cols]; rows]
}

pub fn identity(field: &Field, n: usize) -> Matrix {
    let mut m = zeros(field, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = field.one();
    }
    m
}

pub fn mat_mul(field: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = zeros(field, a.len(), cols);
    for (i, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b[k].iter().enumerate() {
                if !y.is_zero() {
                    out[i][j] += &(x * y);
                }
            }
        }
    }
    out
}

pub fn mat_vec(field: &Field, a: &Matrix, v: &[Scalar]) -> Vector {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn transpose(field: &Field, a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = zeros(field, cols, a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            out[j][i] = x.clone();
        }
    }
    out
}

pub fn is_zero_matrix(a: &Matrix) -> bool {
    a.iter().all(|r| r.iter().all(Scalar::is_zero))
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut m = m.clone();
    rref(&mut m).len()
}

/// Basis of the right kernel of `m` (as column vectors of length `cols`).
pub fn nullspace(field: &Field, m: &Matrix, cols: usize) -> Vec<Vector> {
    let mut r = m.clone();
    let pivots = rref(&mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&r[row][f];
            }
            v
        })
        .collect()
}

/// A reduced basis of the span of `vectors`.
pub fn span_basis(vectors: &[Vector]) -> Vec<Vector> {
    let mut m: Matrix = vectors.to_vec();
    let k = rref(&mut m).len();
    m.truncate(k);
    m
}

pub fn in_span(basis: &[Vector], v: &[Scalar]) -> bool {
    let mut m: Matrix = basis.to_vec();
    let r = rank(&m);
    m.push(v.to_vec());
    rank(&m) == r
}

/// Basis of the intersection of two subspaces given by spanning sets.
pub fn intersect(field: &Field, a: &[Vector], b: &[Vector], dim: usize) -> Vec<Vector> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // solve Σ x_i a_i − Σ y_j b_j = 0 and map back through a
    let vars = a.len() + b.len();
    let mut m = zeros(field, dim, vars);
    for (i, v) in a.iter().enumerate() {
        for k in 0..dim {
            m[k][i] = v[k].clone();
        }
    }
    for (j, v) in b.iter().enumerate() {
        for k in 0..dim {
            m[k][a.len() + j] = -&v[k];
        }
    }
    let ker = nullspace(field, &m, vars);
    let vecs: Vec<Vector> = ker
        .iter()
        .map(|x| {
            let mut v = vec![field.zero(); dim];
            for (i, ai) in a.iter().enumerate() {
                if !x[i].is_zero() {
                    for k in 0..dim {
                        v[k] += &(&x[i] * &ai[k]);
                    }
                }
            }
            v
        })
        .collect();
    span_basis(&vecs)
}

/// Solves `a · x = b`; returns one solution or `None` when inconsistent.
pub fn solve(field: &Field, a: &Matrix, b: &[Scalar]) -> Option<Vector> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn determinant(field: &Field, a: &Matrix) -> Scalar {
    let n = a.len();
    let mut m = a.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return field.zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[i][k] -= &t;
                }
            }
        }
    }
    det
}

pub fn inverse(field: &Field, a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
