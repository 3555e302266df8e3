//! Sparse symmetric systems: CSR storage, a banded Cholesky factorization
//! and Jacobi-preconditioned conjugate gradients.

use crate::{Error, Result};

/// Systems at or below this size are factored directly.
pub const DIRECT_LIMIT: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n × n` matrix from triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(r, _, _) in triplets {
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![0.0; triplets.len()];
        let mut fill = counts.clone();
        for &(r, c, v) in triplets {
            cols[fill[r]] = c;
            vals[fill[r]] = v;
            fill[r] += 1;
        }

        let mut row_ptr = vec![0usize; n + 1];
        let mut out_cols = Vec::with_capacity(triplets.len());
        let mut out_vals = Vec::with_capacity(triplets.len());
        let mut row: Vec<(usize, f64)> = Vec::new();
        for i in 0..n {
            row.clear();
            row.extend((counts[i]..counts[i + 1]).map(|k| (cols[k], vals[k])));
            row.sort_by_key(|e| e.0);
            for &(c, v) in &row {
                match out_cols.last() {
                    Some(&last) if out_cols.len() > row_ptr[i] && last == c => *out_vals.last_mut().unwrap() += v,
                    _ => {
                        out_cols.push(c);
                        out_vals.push(v);
                    }
                }
            }
            row_ptr[i + 1] = out_cols.len();
        }
        Self {
            n,
            row_ptr,
            cols: out_cols,
            vals: out_vals,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(c, v)| v * x[c]).sum()).collect()
    }

    /// Adds `d[i]` to each diagonal entry, inserting missing ones.
    pub fn add_diagonal(&self, d: &[f64]) -> Self {
        let mut t: Vec<(usize, usize, f64)> = Vec::with_capacity(self.vals.len() + self.n);
        for i in 0..self.n {
            t.extend(self.row(i).map(|(c, v)| (i, c, v)));
            if d[i] != 0.0 {
                t.push((i, i, d[i]));
            }
        }
        Self::from_triplets(self.n, &t)
    }

    /// Replaces row and column `k` by the identity, moving the column into `rhs`
    /// so that symmetry is kept and `x[k] = value` is enforced.
    pub fn pin(&self, k: usize, value: f64, rhs: &mut [f64]) -> Self {
        let mut t = Vec::with_capacity(self.vals.len());
        for i in 0..self.n {
            for (c, v) in self.row(i) {
                if i == k || c == k {
                    if c == k && i != k {
                        rhs[i] -= v * value;
                    }
                    continue;
                }
                t.push((i, c, v));
            }
        }
        t.push((k, k, 1.0));
        rhs[k] = value;
        Self::from_triplets(self.n, &t)
    }

    pub fn half_bandwidth(&self) -> usize {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(c, _)| i.abs_diff(c)))
            .max()
            .unwrap_or(0)
    }
}

/// Cholesky factor of a symmetric positive-definite banded matrix, stored by
/// rows as `l[i][j - (i - bw)]` for `i - bw ≤ j ≤ i`.
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.size();
        let bw = a.half_bandwidth();
        let w = bw + 1;
        let mut l = vec![0.0; n * w];
        let idx = |i: usize, j: usize| i * w + (j + bw - i);
        for i in 0..n {
            for (c, v) in a.row(i) {
                if c <= i {
                    l[idx(i, c)] = v;
                }
            }
        }
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let mut s = l[idx(i, j)];
                for k in k0..j {
                    s -= l[idx(i, k)] * l[idx(j, k)];
                }
                if j == i {
                    if !(s > 0.0) {
                        return Err(Error::Assembly(format!("matrix not positive definite at row {i} (pivot {s:e})")));
                    }
                    l[idx(i, i)] = s.sqrt();
                } else {
                    l[idx(i, j)] = s / l[idx(j, j)];
                }
            }
        }
        Ok(Self { n, bw, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw, w) = (self.n, self.bw, self.bw + 1);
        let idx = |i: usize, j: usize| i * w + (j + bw - i);
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in i.saturating_sub(bw)..i {
                s -= self.l[idx(i, k)] * y[k];
            }
            y[i] = s / self.l[idx(i, i)];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n.min(i + bw + 1) {
                s -= self.l[idx(k, i)] * y[k];
            }
            y[i] = s / self.l[idx(i, i)];
        }
        y
    }
}

/// Jacobi-preconditioned conjugate gradients; returns the solution and the
/// final relative residual.
pub fn pcg(a: &CsrMatrix, b: &[f64], x0: Option<&[f64]>, tol: f64, max_iter: usize) -> Result<(Vec<f64>, f64)> {
    let n = a.size();
    let diag = a.diagonal();
    if diag.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::Assembly("non-positive diagonal entry".into()));
    }
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], 0.0));
    }
    let mut x = x0.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    let ax = a.matvec(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    for _ in 0..max_iter {
        let rel = norm(&r) / bnorm;
        if rel <= tol {
            return Ok((x, rel));
        }
        let ap = a.matvec(&p);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rel = norm(&r) / bnorm;
    if rel <= tol {
        Ok((x, rel))
    } else {
        Err(Error::Divergence(format!("conjugate gradients stalled at relative residual {rel:e}")))
    }
}

/// Solves an SPD system directly when small enough, else with PCG.
/// Returns the solution and `‖Ax − b‖ / ‖b‖`.
pub fn solve_spd(a: &CsrMatrix, b: &[f64], tol: f64) -> Result<(Vec<f64>, f64)> {
    let x = if a.size() <= DIRECT_LIMIT {
        BandedCholesky::factor(a)?.solve(b)
    } else {
        pcg(a, b, None, tol, 10 * a.size())?.0
    };
    let r = residual(a, &x, b);
    Ok((x, r))
}

pub fn residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.matvec(x);
    let r: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let bn = norm(b);
    if bn == 0.0 {
        norm(&r)
    } else {
        norm(&r) / bn
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
