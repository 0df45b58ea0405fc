//! Independent matrix oracle for the root-theoretic spectra.
//!
//! Builds explicit real matrix models of the classical noncompact simple Lie
//! algebras, computes the Killing form from structure constants (never from
//! the classical trace-form shortcuts), and eigensolves `X -> -[[X,h],h]` on
//! the symmetric part. The resulting spectra certify the catalog's restricted
//! roots and multiplicities without sharing any code path with them: the two
//! sides only meet in a coordinate isometry computed from simple-root
//! matching.
//!
//! Complex families are realified into `2m x 2m` real blocks so a single real
//! eigensolver serves everything; restricted-root multiplicities count real
//! dimensions, which is exactly what the catalog stores.

use crate::catalog::{SpaceDescriptor, SpaceFamily};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

// ---------------------------------------------------------------------------
// Small dense float matrices and the Jacobi eigensolver.

#[derive(Clone, Debug)]
pub(crate) struct Mat {
    n: usize,
    a: Vec<f64>,
}

impl Mat {
    fn zeros(n: usize) -> Self {
        Mat { n, a: vec![0.0; n * n] }
    }

    fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    #[inline]
    fn add(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] += v;
    }

    fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.add(i, j, x * other.get(k, j));
                }
            }
        }
        out
    }

    fn bracket(x: &Mat, y: &Mat) -> Mat {
        let xy = x.mul(y);
        let yx = y.mul(x);
        let mut out = Mat::zeros(x.n);
        for i in 0..x.n * x.n {
            out.a[i] = xy.a[i] - yx.a[i];
        }
        out
    }

    fn axpy(&mut self, c: f64, other: &Mat) {
        for i in 0..self.a.len() {
            self.a[i] += c * other.a[i];
        }
    }

    fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    fn is_symmetric_exact(&self) -> bool {
        self.max_asymmetry() == 0.0
    }

    fn is_antisymmetric_exact(&self) -> bool {
        for i in 0..self.n {
            for j in i..self.n {
                if self.get(i, j) + self.get(j, i) != 0.0 {
                    return false;
                }
            }
        }
        true
    }

    fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Cyclic Jacobi diagonalization of a symmetric matrix; returns eigenvalues
/// (descending) and the corresponding orthonormal eigenvector columns.
fn jacobi_eigen(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.n;
    let mut a = m.clone();
    let mut v = Mat::zeros(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    let off = |a: &Mat| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a.get(i, j) * a.get(i, j);
            }
        }
        (2.0 * s).sqrt()
    };
    for _sweep in 0..100 {
        if off(&a) <= 1e-12 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a.get(i, i), i)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let evals: Vec<f64> = pairs.iter().map(|(e, _)| *e).collect();
    let mut vecs = Mat::zeros(n);
    for (col, (_, src)) in pairs.iter().enumerate() {
        for row in 0..n {
            vecs.set(row, col, v.get(row, *src));
        }
    }
    (evals, vecs)
}

/// Eigenvalues of a symmetric matrix given as rows, sorted descending.
pub fn sym_eigenvalues(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("matrix must be square".into()));
    }
    let m = Mat::from_rows(rows);
    let asym = m.max_asymmetry();
    if asym > 1e-8 {
        return Err(Error::NotSymmetric(asym));
    }
    let mut sym = m.clone();
    for i in 0..n {
        for j in 0..n {
            sym.set(i, j, 0.5 * (m.get(i, j) + m.get(j, i)));
        }
    }
    Ok(jacobi_eigen(&sym).0)
}

/// Dense float solve via Gauss elimination with partial pivoting.
fn solve_dense(a: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in (row + 1)..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

fn invert_dense(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        cols.push(solve_dense(a, &e)?);
    }
    let mut out = vec![vec![0.0; n]; n];
    for (k, col) in cols.iter().enumerate() {
        for i in 0..n {
            out[i][k] = col[i];
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Algebra construction.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MatrixFamily {
    SlR(u32),
    SuPQ(u32, u32),
    SoPQ(u32, u32),
    SpR(u32),
}

impl fmt::Display for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixFamily::SlR(n) => write!(f, "sl({n},R)"),
            MatrixFamily::SuPQ(p, q) => write!(f, "su({p},{q})"),
            MatrixFamily::SoPQ(p, q) => write!(f, "so({p},{q})"),
            MatrixFamily::SpR(n) => write!(f, "sp({n},R)"),
        }
    }
}

/// The matrix model backing a catalog row, when one exists at desk scale.
pub fn matrix_family_for(space: &SpaceDescriptor) -> Option<MatrixFamily> {
    match (&space.family, space.params.as_slice()) {
        (SpaceFamily::AI, [n]) if (2..=6).contains(n) => Some(MatrixFamily::SlR(*n)),
        (SpaceFamily::AIII, [q, p]) if p + q <= 6 => Some(MatrixFamily::SuPQ(*p, *q)),
        (SpaceFamily::BDI, [q, p]) if p + q <= 6 => Some(MatrixFamily::SoPQ(*p, *q)),
        (SpaceFamily::CI, [n]) if (1..=6).contains(n) => Some(MatrixFamily::SpR(*n)),
        _ => None,
    }
}

pub struct MatrixAlgebra {
    pub family: MatrixFamily,
    /// Size of the real matrices.
    pub matrix_size: usize,
    dim: usize,
    k_count: usize,
    p_count: usize,
    rank: usize,
    basis: Vec<Mat>,
    /// Killing form `B(X_i, X_j) = tr(ad X_i ad X_j)`.
    gram_b: Vec<Vec<f64>>,
    /// Inner product `<X,Y> = -B(X, theta Y)`.
    gram_inner: Vec<Vec<f64>>,
    /// ad matrices in basis coordinates.
    ad: Vec<Vec<Vec<f64>>>,
    /// Orthonormal basis of the symmetric part, flat directions first
    /// (basis coordinates).
    p_ortho: Vec<Vec<f64>>,
    /// Orthonormal basis of the whole algebra (basis coordinates).
    full_ortho: Vec<Vec<f64>>,
    /// Worst residual when closing random brackets over the basis.
    pub closure_residual: f64,
}

// Sum of scaled matrix units.
fn plus(n: usize, entries: &[(usize, usize, f64)]) -> Mat {
    let mut m = Mat::zeros(n);
    for &(i, j, v) in entries {
        m.add(i, j, v);
    }
    m
}

/// Realify a complex matrix given as (re, im): `[[re, -im], [im, re]]`.
fn realify(re: &Mat, im: &Mat) -> Mat {
    let m = re.n;
    let mut out = Mat::zeros(2 * m);
    for i in 0..m {
        for j in 0..m {
            out.set(i, j, re.get(i, j));
            out.set(m + i, m + j, re.get(i, j));
            out.set(i, m + j, -im.get(i, j));
            out.set(m + i, j, im.get(i, j));
        }
    }
    out
}

struct BasisParts {
    k: Vec<Mat>,
    /// Flat directions, then the rest of the symmetric part.
    a: Vec<Mat>,
    p_rest: Vec<Mat>,
}

fn basis_sl(n: usize) -> BasisParts {
    let mut k = Vec::new();
    let mut p_rest = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            k.push(plus(n, &[(i, j, 1.0), (j, i, -1.0)]));
            p_rest.push(plus(n, &[(i, j, 1.0), (j, i, 1.0)]));
        }
    }
    let a = (0..n - 1)
        .map(|i| plus(n, &[(i, i, 1.0), (i + 1, i + 1, -1.0)]))
        .collect();
    BasisParts { k, a, p_rest }
}

fn basis_so(p: usize, q: usize) -> BasisParts {
    let n = p + q;
    let mut k = Vec::new();
    for (lo, hi) in [(0, p), (p, n)] {
        for i in lo..hi {
            for j in (i + 1)..hi {
                k.push(plus(n, &[(i, j, 1.0), (j, i, -1.0)]));
            }
        }
    }
    let r = p.min(q);
    let mut a = Vec::new();
    let mut p_rest = Vec::new();
    for i in 0..p {
        for j in 0..q {
            let m = plus(n, &[(i, p + j, 1.0), (p + j, i, 1.0)]);
            if i == j && i < r {
                a.push(m);
            } else {
                p_rest.push(m);
            }
        }
    }
    BasisParts { k, a, p_rest }
}

fn basis_sp(n: usize) -> BasisParts {
    let s = 2 * n;
    let mut k = Vec::new();
    // [[A, B], [-B, A]] with A antisymmetric, B symmetric.
    for i in 0..n {
        for j in (i + 1)..n {
            k.push(plus(s, &[(i, j, 1.0), (j, i, -1.0), (n + i, n + j, 1.0), (n + j, n + i, -1.0)]));
            k.push(plus(s, &[(i, n + j, 1.0), (j, n + i, 1.0), (n + i, j, -1.0), (n + j, i, -1.0)]));
        }
    }
    for i in 0..n {
        k.push(plus(s, &[(i, n + i, 1.0), (n + i, i, -1.0)]));
    }
    // Symmetric part [[A, B], [B, -A]] with A, B symmetric.
    let a = (0..n).map(|i| plus(s, &[(i, i, 1.0), (n + i, n + i, -1.0)])).collect();
    let mut p_rest = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            p_rest.push(plus(s, &[(i, j, 1.0), (j, i, 1.0), (n + i, n + j, -1.0), (n + j, n + i, -1.0)]));
            p_rest.push(plus(s, &[(i, n + j, 1.0), (j, n + i, 1.0), (n + i, j, 1.0), (n + j, i, 1.0)]));
        }
    }
    for i in 0..n {
        p_rest.push(plus(s, &[(i, n + i, 1.0), (n + i, i, 1.0)]));
    }
    BasisParts { k, a, p_rest }
}

fn basis_su(p: usize, q: usize) -> BasisParts {
    let m = p + q;
    let zero = Mat::zeros(m);
    let mut k = Vec::new();
    // Within-block real antisymmetric and imaginary symmetric parts.
    for (lo, hi) in [(0, p), (p, m)] {
        for i in lo..hi {
            for j in (i + 1)..hi {
                k.push(realify(&plus(m, &[(i, j, 1.0), (j, i, -1.0)]), &zero));
                k.push(realify(&zero, &plus(m, &[(i, j, 1.0), (j, i, 1.0)])));
            }
        }
    }
    // Traceless imaginary diagonal (spans both blocks).
    for i in 0..m - 1 {
        k.push(realify(&zero, &plus(m, &[(i, i, 1.0), (i + 1, i + 1, -1.0)])));
    }
    let r = p.min(q);
    let mut a = Vec::new();
    let mut p_rest = Vec::new();
    for i in 0..p {
        for j in 0..q {
            let re = realify(&plus(m, &[(i, p + j, 1.0), (p + j, i, 1.0)]), &zero);
            if i == j && i < r {
                a.push(re);
            } else {
                p_rest.push(re);
            }
            p_rest.push(realify(&zero, &plus(m, &[(i, p + j, 1.0), (p + j, i, -1.0)])));
        }
    }
    BasisParts { k, a, p_rest }
}

fn expected_dim(family: MatrixFamily) -> usize {
    match family {
        MatrixFamily::SlR(n) => (n * n - 1) as usize,
        MatrixFamily::SuPQ(p, q) => ((p + q) * (p + q) - 1) as usize,
        MatrixFamily::SoPQ(p, q) => ((p + q) * (p + q - 1) / 2) as usize,
        MatrixFamily::SpR(n) => (n * (2 * n + 1)) as usize,
    }
}

pub fn build_algebra(family: MatrixFamily) -> Result<MatrixAlgebra> {
    let parts = match family {
        MatrixFamily::SlR(n) => {
            if !(2..=6).contains(&n) {
                return Err(Error::InvalidParameter(format!("sl({n},R): need 2 <= n <= 6")));
            }
            basis_sl(n as usize)
        }
        MatrixFamily::SuPQ(p, q) => {
            if p < 1 || q < 1 || p + q > 6 || p + q < 2 {
                return Err(Error::InvalidParameter(format!("su({p},{q}): need p,q >= 1, p+q <= 6")));
            }
            basis_su(p as usize, q as usize)
        }
        MatrixFamily::SoPQ(p, q) => {
            if p < 1 || q < 1 || p + q > 6 || p + q < 3 {
                return Err(Error::InvalidParameter(format!(
                    "so({p},{q}): need p,q >= 1, 3 <= p+q <= 6"
                )));
            }
            basis_so(p as usize, q as usize)
        }
        MatrixFamily::SpR(n) => {
            if !(1..=6).contains(&n) {
                return Err(Error::InvalidParameter(format!("sp({n},R): need 1 <= n <= 6")));
            }
            basis_sp(n as usize)
        }
    };

    let k_count = parts.k.len();
    let rank = parts.a.len();
    let mut basis = parts.k;
    basis.extend(parts.a);
    basis.extend(parts.p_rest);
    let dim = basis.len();
    let p_count = dim - k_count;
    if dim != expected_dim(family) {
        return Err(Error::Numerical(format!(
            "{family}: built {dim} basis elements, expected {}",
            expected_dim(family)
        )));
    }
    let n = basis[0].n;

    // Cartan involution X -> -X^T splits the basis by matrix symmetry.
    for (idx, b) in basis.iter().enumerate() {
        let ok = if idx < k_count { b.is_antisymmetric_exact() } else { b.is_symmetric_exact() };
        if !ok {
            return Err(Error::Numerical(format!("{family}: basis element {idx} has mixed symmetry")));
        }
    }
    // The flat candidates must commute exactly.
    for i in k_count..k_count + rank {
        for j in (i + 1)..k_count + rank {
            if Mat::bracket(&basis[i], &basis[j]).max_abs() != 0.0 {
                return Err(Error::Numerical(format!("{family}: flat basis fails to commute")));
            }
        }
    }

    // Coordinates of an arbitrary matrix over the basis, via the normal
    // equations of the flattening (the basis is far from orthonormal).
    let g0: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| basis[i].a.iter().zip(&basis[j].a).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    let g0_inv = invert_dense(&g0)
        .ok_or_else(|| Error::Numerical(format!("{family}: basis flattening is singular")))?;
    let coords_of = |m: &Mat| -> (Vec<f64>, f64) {
        let rhs: Vec<f64> = (0..dim)
            .map(|i| basis[i].a.iter().zip(&m.a).map(|(x, y)| x * y).sum())
            .collect();
        let c: Vec<f64> = (0..dim)
            .map(|i| (0..dim).map(|j| g0_inv[i][j] * rhs[j]).sum())
            .collect();
        let mut recon = Mat::zeros(n);
        for (ci, b) in c.iter().zip(&basis) {
            recon.axpy(*ci, b);
        }
        let mut resid: f64 = 0.0;
        for (x, y) in recon.a.iter().zip(&m.a) {
            resid = resid.max((x - y).abs());
        }
        (c, resid)
    };

    // Structure constants / ad matrices, with closure of every bracket.
    let mut ad = vec![vec![vec![0.0; dim]; dim]; dim];
    let mut closure_residual: f64 = 0.0;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let br = Mat::bracket(&basis[i], &basis[j]);
            let (c, resid) = coords_of(&br);
            closure_residual = closure_residual.max(resid);
            for k in 0..dim {
                ad[i][k][j] = c[k];
                ad[j][k][i] = -c[k];
            }
        }
    }
    if closure_residual > 1e-10 {
        return Err(Error::Numerical(format!(
            "{family}: bracket closure residual {closure_residual:.3e}"
        )));
    }

    // Killing form from the structure constants.
    let mut gram_b = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let mut acc = 0.0;
            for k in 0..dim {
                for l in 0..dim {
                    acc += ad[i][k][l] * ad[j][l][k];
                }
            }
            gram_b[i][j] = acc;
            gram_b[j][i] = acc;
        }
    }

    // <X, Y> = -B(X, theta Y): flip the sign on the symmetric part.
    let mut gram_inner = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let sign = if j < k_count { -1.0 } else { 1.0 };
            gram_inner[i][j] = sign * gram_b[i][j];
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            if (gram_inner[i][j] - gram_inner[j][i]).abs() > 1e-8 {
                return Err(Error::Numerical(format!("{family}: induced metric not symmetric")));
            }
        }
    }

    let inner = |u: &[f64], v: &[f64]| -> f64 {
        let mut acc = 0.0;
        for i in 0..dim {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..dim {
                acc += u[i] * gram_inner[i][j] * v[j];
            }
        }
        acc
    };

    // Gram-Schmidt under the induced metric; positive-definiteness shows up
    // as every norm being positive.
    let orthonormalize = |indices: &[usize]| -> Result<Vec<Vec<f64>>> {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(indices.len());
        for &idx in indices {
            let mut v = vec![0.0; dim];
            v[idx] = 1.0;
            for prev in &out {
                let c = inner(&v, prev);
                for t in 0..dim {
                    v[t] -= c * prev[t];
                }
            }
            let norm_sq = inner(&v, &v);
            if norm_sq <= 1e-10 {
                return Err(Error::Numerical(format!(
                    "{family}: induced metric fails positive definiteness"
                )));
            }
            let norm = norm_sq.sqrt();
            for t in 0..dim {
                v[t] /= norm;
            }
            out.push(v);
        }
        Ok(out)
    };
    let p_ortho = orthonormalize(&(k_count..dim).collect::<Vec<_>>())?;
    let full_ortho = orthonormalize(&(0..dim).collect::<Vec<_>>())?;

    Ok(MatrixAlgebra {
        family,
        matrix_size: n,
        dim,
        k_count,
        p_count,
        rank,
        basis,
        gram_b,
        gram_inner,
        ad,
        p_ortho,
        full_ortho,
        closure_residual,
    })
}

impl MatrixAlgebra {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k_dim(&self) -> usize {
        self.k_count
    }

    pub fn p_dim(&self) -> usize {
        self.p_count
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Killing Gram matrix over the construction basis.
    pub fn killing_gram(&self) -> &Vec<Vec<f64>> {
        &self.gram_b
    }

    /// The explicit matrix basis (compact part first, then the symmetric
    /// part with the flat directions leading), as dense rows.
    pub fn basis_matrices(&self) -> Vec<Vec<Vec<f64>>> {
        self.basis
            .iter()
            .map(|m| {
                (0..m.n)
                    .map(|i| (0..m.n).map(|j| m.get(i, j)).collect())
                    .collect()
            })
            .collect()
    }

    #[cfg(test)]
    fn basis_matrix(&self, i: usize) -> &Mat {
        &self.basis[i]
    }

    fn inner_coords(&self, u: &[f64], v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                acc += u[i] * self.gram_inner[i][j] * v[j];
            }
        }
        acc
    }

    /// ad of a coordinate vector, as a matrix in basis coordinates.
    fn ad_of(&self, coords: &[f64]) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.dim]; self.dim];
        for (b, &c) in coords.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            for k in 0..self.dim {
                for j in 0..self.dim {
                    out[k][j] += c * self.ad[b][k][j];
                }
            }
        }
        out
    }

    /// An operator in basis coordinates, rewritten over an orthonormal set.
    fn operator_in_frame(&self, op: &[Vec<f64>], frame: &[Vec<f64>]) -> Mat {
        let k = frame.len();
        let mut out = Mat::zeros(k);
        for (j, fj) in frame.iter().enumerate() {
            let mut image = vec![0.0; self.dim];
            for r in 0..self.dim {
                let mut acc = 0.0;
                for c in 0..self.dim {
                    acc += op[r][c] * fj[c];
                }
                image[r] = acc;
            }
            for (i, fi) in frame.iter().enumerate() {
                out.set(i, j, self.inner_coords(fi, &image));
            }
        }
        out
    }

    /// Matrix of `X -> -[[X,h],h]` on the symmetric part, in its orthonormal
    /// basis; `h` is given by coefficients over the orthonormal flat basis
    /// and normalized internally. Returned as dense rows.
    pub fn curvature_operator_matrix(&self, h: &[f64]) -> Result<Vec<Vec<f64>>> {
        if h.len() != self.rank {
            return Err(Error::InvalidParameter(format!(
                "direction has {} coefficients, flat rank is {}",
                h.len(),
                self.rank
            )));
        }
        let norm: f64 = h.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter("direction must be nonzero".into()));
        }
        let mut h_coords = vec![0.0; self.dim];
        for (a, &c) in h.iter().enumerate() {
            for t in 0..self.dim {
                h_coords[t] += (c / norm) * self.p_ortho[a][t];
            }
        }
        let ad_h = self.ad_of(&h_coords);
        // -ad_h^2 restricted to the symmetric part.
        let mut op = vec![vec![0.0; self.dim]; self.dim];
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut acc = 0.0;
                for t in 0..self.dim {
                    acc += ad_h[r][t] * ad_h[t][c];
                }
                op[r][c] = -acc;
            }
        }
        let m = self.operator_in_frame(&op, &self.p_ortho);
        let asym = m.max_asymmetry();
        if asym > 1e-10 {
            return Err(Error::Numerical(format!(
                "curvature operator asymmetry {asym:.3e}"
            )));
        }
        Ok((0..m.n)
            .map(|i| (0..m.n).map(|j| 0.5 * (m.get(i, j) + m.get(j, i))).collect())
            .collect())
    }

    /// Positive restricted roots extracted by simultaneous diagonalization of
    /// ad over the flat: returns `(root vectors in orthonormal flat
    /// coordinates, multiplicities)`.
    pub fn restricted_roots(&self, seed: u64) -> Result<(Vec<Vec<f64>>, Vec<usize>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ad_flat: Vec<Mat> = (0..self.rank)
            .map(|a| self.operator_in_frame(&self.ad_of(&self.p_ortho[a]), &self.full_ortho))
            .collect();
        'attempt: for _ in 0..10 {
            let mut coeffs: Vec<f64> = (0..self.rank).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let norm: f64 = coeffs.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                continue;
            }
            coeffs.iter_mut().for_each(|c| *c /= norm);
            let mut ad_h0 = Mat::zeros(self.dim);
            for (a, &c) in coeffs.iter().enumerate() {
                ad_h0.axpy(c, &ad_flat[a]);
            }
            if ad_h0.max_asymmetry() > 1e-8 {
                return Err(Error::Numerical("ad(h) not symmetric in the induced metric".into()));
            }
            let (evals, evecs) = jacobi_eigen(&ad_h0);

            // Cluster eigenvalues; each positive cluster is one root space.
            let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
            for (idx, &e) in evals.iter().enumerate() {
                match clusters.last_mut() {
                    Some((v, members)) if (e - *v).abs() < 1e-6 => members.push(idx),
                    _ => clusters.push((e, vec![idx])),
                }
            }
            let mut roots = Vec::new();
            let mut mults = Vec::new();
            for (val, members) in &clusters {
                if *val <= 1e-7 {
                    continue;
                }
                let mut root = vec![0.0; self.rank];
                for a in 0..self.rank {
                    let mut mean = 0.0;
                    for &idx in members {
                        let col: Vec<f64> = (0..self.dim).map(|r| evecs.get(r, idx)).collect();
                        let mut image = vec![0.0; self.dim];
                        for r in 0..self.dim {
                            let mut acc = 0.0;
                            for c in 0..self.dim {
                                acc += ad_flat[a].get(r, c) * col[c];
                            }
                            image[r] = acc;
                        }
                        let lam: f64 = col.iter().zip(&image).map(|(x, y)| x * y).sum();
                        // The cluster must be a joint eigenspace; a mixed
                        // cluster means the probe direction was degenerate.
                        let resid: f64 = image
                            .iter()
                            .zip(&col)
                            .map(|(y, x)| (y - lam * x).powi(2))
                            .sum::<f64>()
                            .sqrt();
                        if resid > 1e-6 {
                            continue 'attempt;
                        }
                        mean += lam;
                    }
                    root[a] = mean / members.len() as f64;
                }
                roots.push(root);
                mults.push(members.len());
            }
            let counted: usize = mults.iter().sum();
            if 2 * counted + self.rank > self.dim {
                continue 'attempt;
            }
            return Ok((roots, mults));
        }
        Err(Error::Numerical(format!(
            "{}: no generic flat direction separated the root spaces",
            self.family
        )))
    }
}

// ---------------------------------------------------------------------------
// Cross-checking the catalog against the oracle.

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheckReport {
    pub space_label: String,
    pub family: String,
    pub trials: usize,
    pub max_discrepancy: f64,
    pub pass: bool,
}

fn float_simple_roots(roots: &[Vec<f64>]) -> Vec<usize> {
    let tol = 1e-7;
    let found = |v: &[f64]| roots.iter().any(|r| r.iter().zip(v).all(|(a, b)| (a - b).abs() < tol));
    (0..roots.len())
        .filter(|&i| {
            !roots.iter().any(|b| {
                let diff: Vec<f64> = roots[i].iter().zip(b).map(|(a, x)| a - x).collect();
                let nz = diff.iter().any(|d| d.abs() > tol);
                nz && found(&diff)
            })
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for sub in permutations(n - 1) {
        for pos in 0..n {
            let mut perm = sub.clone();
            perm.insert(pos, n - 1);
            out.push(perm);
        }
    }
    out
}

/// Find the orthogonal change of flat coordinates mapping the oracle's root
/// data onto the catalog's, via simple-root matching.
fn match_isometry(
    oracle_roots: &[Vec<f64>],
    oracle_mults: &[usize],
    catalog_roots: &[Vec<f64>],
    catalog_mults: &[usize],
    rank: usize,
) -> Result<Vec<Vec<f64>>> {
    let simples_m = float_simple_roots(oracle_roots);
    let simples_r = float_simple_roots(catalog_roots);
    if simples_m.len() != rank || simples_r.len() != rank {
        return Err(Error::Data(format!(
            "simple-root extraction found {} / {} candidates for rank {rank}",
            simples_m.len(),
            simples_r.len()
        )));
    }
    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(a, b)| a * b).sum() };
    // Matrix with oracle simple roots as columns.
    let sm: Vec<Vec<f64>> = (0..rank)
        .map(|r| simples_m.iter().map(|&i| oracle_roots[i][r]).collect())
        .collect();
    let sm_inv = invert_dense(&sm)
        .ok_or_else(|| Error::Data("oracle simple roots are dependent".into()))?;
    for perm in permutations(rank) {
        let gram_ok = (0..rank).all(|i| {
            (0..rank).all(|j| {
                let a = dot(&oracle_roots[simples_m[i]], &oracle_roots[simples_m[j]]);
                let b = dot(&catalog_roots[simples_r[perm[i]]], &catalog_roots[simples_r[perm[j]]]);
                (a - b).abs() < 1e-6
            })
        });
        if !gram_ok {
            continue;
        }
        // Q = S_r(perm) * S_m^{-1}.
        let mut q = vec![vec![0.0; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                let mut acc = 0.0;
                for k in 0..rank {
                    acc += catalog_roots[simples_r[perm[k]]][i] * sm_inv[k][j];
                }
                q[i][j] = acc;
            }
        }
        // Orthogonality.
        let mut orth = true;
        for i in 0..rank {
            for j in 0..rank {
                let acc: f64 = (0..rank).map(|k| q[k][i] * q[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                if (acc - expect).abs() > 1e-8 {
                    orth = false;
                }
            }
        }
        if !orth {
            continue;
        }
        // Every oracle root must map to a catalog root with equal
        // multiplicity.
        let mut used = vec![false; catalog_roots.len()];
        let mut all_matched = true;
        for (root, &m) in oracle_roots.iter().zip(oracle_mults) {
            let mapped: Vec<f64> = (0..rank)
                .map(|i| (0..rank).map(|j| q[i][j] * root[j]).sum())
                .collect();
            let slot = catalog_roots.iter().enumerate().position(|(c, cand)| {
                !used[c]
                    && catalog_mults[c] == m
                    && cand.iter().zip(&mapped).all(|(a, b)| (a - b).abs() < 1e-6)
            });
            match slot {
                Some(c) => used[c] = true,
                None => {
                    all_matched = false;
                    break;
                }
            }
        }
        if all_matched && used.iter().filter(|u| **u).count() == catalog_roots.len() {
            return Ok(q);
        }
    }
    // Diagnose by comparing norm profiles.
    let profile = |roots: &[Vec<f64>], mults: &[usize]| -> Vec<(f64, usize)> {
        let mut v: Vec<(f64, usize)> = roots
            .iter()
            .zip(mults)
            .map(|(r, &m)| (dot(r, r), m))
            .collect();
        v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        v
    };
    Err(Error::Data(format!(
        "restricted-root data disagrees: oracle norm/multiplicity profile {:?} vs catalog {:?}",
        profile(oracle_roots, oracle_mults),
        profile(catalog_roots, catalog_mults),
    )))
}

/// Compare the oracle's curvature spectra against the root-theoretic
/// prediction over random flat directions.
pub fn cross_check(space: &SpaceDescriptor, trials: usize, seed: u64) -> Result<CrossCheckReport> {
    let family = matrix_family_for(space)
        .ok_or_else(|| Error::UnsupportedModel { family: space.label.clone() })?;
    let algebra = build_algebra(family)?;
    if algebra.rank() != space.rank {
        return Err(Error::Data(format!(
            "rank mismatch: oracle {} vs catalog {}",
            algebra.rank(),
            space.rank
        )));
    }
    let (oracle_roots, oracle_mults) = algebra.restricted_roots(seed ^ 0x5eed)?;
    let sys = &space.system;
    let catalog_roots: Vec<Vec<f64>> =
        (0..sys.positive_roots().len()).map(|i| sys.root_float(i)).collect();
    let catalog_mults: Vec<usize> =
        (0..sys.positive_roots().len()).map(|i| sys.multiplicity(i) as usize).collect();
    let q = match_isometry(&oracle_roots, &oracle_mults, &catalog_roots, &catalog_mults, space.rank)?;

    let float_roots = sys.float_roots();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_disc: f64 = 0.0;
    for _ in 0..trials {
        let mut y: Vec<f64> = (0..space.rank).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let norm: f64 = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        y.iter_mut().for_each(|c| *c /= norm);

        let op = algebra.curvature_operator_matrix(&y)?;
        let oracle_spec = sym_eigenvalues(&op)?;

        let h_catalog: Vec<f64> = (0..space.rank)
            .map(|i| (0..space.rank).map(|j| q[i][j] * y[j]).sum())
            .collect();
        let mut predicted: Vec<f64> = Vec::with_capacity(algebra.p_dim());
        for (root, &m) in float_roots.iter().zip(sys.multiplicities()) {
            let v: f64 = root.iter().zip(&h_catalog).map(|(a, b)| a * b).sum();
            for _ in 0..m {
                predicted.push(-(v * v));
            }
        }
        predicted.extend(std::iter::repeat(0.0).take(space.rank));
        predicted.sort_by(|a, b| b.partial_cmp(a).unwrap());

        if predicted.len() != oracle_spec.len() {
            return Err(Error::Data(format!(
                "spectrum size mismatch: oracle {} vs predicted {}",
                oracle_spec.len(),
                predicted.len()
            )));
        }
        for (a, b) in oracle_spec.iter().zip(&predicted) {
            max_disc = max_disc.max((a - b).abs());
        }
    }
    Ok(CrossCheckReport {
        space_label: space.label.clone(),
        family: family.to_string(),
        trials,
        max_discrepancy: max_disc,
        pass: max_disc <= 1e-8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use approx::assert_relative_eq;

    fn space(name: &str) -> SpaceDescriptor {
        Catalog::builtin().lookup(name).unwrap()
    }

    #[test]
    fn dimensions_of_classical_models() {
        let sl3 = build_algebra(MatrixFamily::SlR(3)).unwrap();
        assert_eq!((sl3.dim(), sl3.p_dim(), sl3.rank()), (8, 5, 2));

        let so23 = build_algebra(MatrixFamily::SoPQ(3, 2)).unwrap();
        assert_eq!((so23.dim(), so23.p_dim(), so23.rank()), (10, 6, 2));

        let sp2 = build_algebra(MatrixFamily::SpR(2)).unwrap();
        assert_eq!((sp2.dim(), sp2.p_dim(), sp2.rank()), (10, 6, 2));

        let su12 = build_algebra(MatrixFamily::SuPQ(2, 1)).unwrap();
        assert_eq!((su12.dim(), su12.p_dim(), su12.rank()), (8, 4, 1));
    }

    #[test]
    fn bracket_closure_is_tight() {
        for family in [
            MatrixFamily::SlR(4),
            MatrixFamily::SuPQ(2, 2),
            MatrixFamily::SoPQ(4, 2),
            MatrixFamily::SpR(3),
        ] {
            let alg = build_algebra(family).unwrap();
            assert!(alg.closure_residual <= 1e-10, "{family}: {}", alg.closure_residual);
        }
    }

    #[test]
    fn jacobi_identity_on_random_combinations() {
        let alg = build_algebra(MatrixFamily::SoPQ(3, 2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let pick = |rng: &mut ChaCha8Rng| -> Mat {
                let mut m = Mat::zeros(alg.matrix_size);
                for i in 0..alg.dim() {
                    m.axpy(rng.gen::<f64>() - 0.5, alg.basis_matrix(i));
                }
                m
            };
            let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let mut total = Mat::bracket(&x, &Mat::bracket(&y, &z));
            total.axpy(1.0, &Mat::bracket(&y, &Mat::bracket(&z, &x)));
            total.axpy(1.0, &Mat::bracket(&z, &Mat::bracket(&x, &y)));
            assert!(total.max_abs() <= 1e-10);
        }
    }

    #[test]
    fn killing_form_recovers_trace_constant_for_sl_n() {
        for n in [3usize, 4] {
            let alg = build_algebra(MatrixFamily::SlR(n as u32)).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            for _ in 0..20 {
                let coeffs_x: Vec<f64> = (0..alg.dim()).map(|_| rng.gen::<f64>() - 0.5).collect();
                let coeffs_y: Vec<f64> = (0..alg.dim()).map(|_| rng.gen::<f64>() - 0.5).collect();
                let mut x = Mat::zeros(n);
                let mut y = Mat::zeros(n);
                for i in 0..alg.dim() {
                    x.axpy(coeffs_x[i], alg.basis_matrix(i));
                    y.axpy(coeffs_y[i], alg.basis_matrix(i));
                }
                let b_from_ad: f64 = (0..alg.dim())
                    .map(|i| {
                        (0..alg.dim())
                            .map(|j| coeffs_x[i] * alg.killing_gram()[i][j] * coeffs_y[j])
                            .sum::<f64>()
                    })
                    .sum();
                let trace_xy: f64 = (0..n)
                    .map(|i| (0..n).map(|k| x.get(i, k) * y.get(k, i)).sum::<f64>())
                    .sum();
                assert_relative_eq!(b_from_ad, 2.0 * n as f64 * trace_xy, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn compact_and_symmetric_parts_are_orthogonal() {
        let alg = build_algebra(MatrixFamily::SpR(2)).unwrap();
        for i in 0..alg.k_dim() {
            for j in alg.k_dim()..alg.dim() {
                assert!(alg.gram_inner[i][j].abs() <= 1e-10);
            }
        }
        // B negative definite on the compact part, positive on the
        // symmetric part.
        let k_block: Vec<Vec<f64>> = (0..alg.k_dim())
            .map(|i| (0..alg.k_dim()).map(|j| alg.gram_b[i][j]).collect())
            .collect();
        for e in sym_eigenvalues(&k_block).unwrap() {
            assert!(e < 0.0);
        }
        let p_block: Vec<Vec<f64>> = (alg.k_dim()..alg.dim())
            .map(|i| (alg.k_dim()..alg.dim()).map(|j| alg.gram_b[i][j]).collect())
            .collect();
        for e in sym_eigenvalues(&p_block).unwrap() {
            assert!(e > 0.0);
        }
    }

    #[test]
    fn ad_of_compact_elements_is_antisymmetric() {
        let alg = build_algebra(MatrixFamily::SlR(3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            // Random compact element, random pair in the algebra.
            let mut x = vec![0.0; alg.dim()];
            for slot in x.iter_mut().take(alg.k_dim()) {
                *slot = rng.gen::<f64>() - 0.5;
            }
            let ad_x = alg.ad_of(&x);
            let y: Vec<f64> = (0..alg.dim()).map(|_| rng.gen::<f64>() - 0.5).collect();
            let z: Vec<f64> = (0..alg.dim()).map(|_| rng.gen::<f64>() - 0.5).collect();
            let ad_y: Vec<f64> = (0..alg.dim())
                .map(|r| (0..alg.dim()).map(|c| ad_x[r][c] * y[c]).sum())
                .collect();
            let ad_z: Vec<f64> = (0..alg.dim())
                .map(|r| (0..alg.dim()).map(|c| ad_x[r][c] * z[c]).sum())
                .collect();
            let lhs = alg.inner_coords(&ad_y, &z);
            let rhs = -alg.inner_coords(&y, &ad_z);
            assert!((lhs - rhs).abs() <= 1e-10);
        }
    }

    #[test]
    fn curvature_operator_annihilates_the_flat() {
        let alg = build_algebra(MatrixFamily::SlR(3)).unwrap();
        let op = alg.curvature_operator_matrix(&[0.3, 0.7]).unwrap();
        // Flat directions are the first `rank` vectors of the orthonormal
        // symmetric basis.
        for a in 0..alg.rank() {
            for i in 0..alg.p_dim() {
                assert!(op[i][a].abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn curvature_trace_is_minus_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for family in [
            MatrixFamily::SlR(3),
            MatrixFamily::SuPQ(2, 1),
            MatrixFamily::SoPQ(3, 2),
            MatrixFamily::SpR(2),
        ] {
            let alg = build_algebra(family).unwrap();
            let h: Vec<f64> = (0..alg.rank()).map(|_| rng.gen::<f64>() - 0.5).collect();
            let op = alg.curvature_operator_matrix(&h).unwrap();
            let trace: f64 = (0..alg.p_dim()).map(|i| op[i][i]).sum();
            assert_relative_eq!(trace, -0.5, epsilon = 1e-10);
        }
    }

    #[test]
    fn sym_eigenvalues_basics() {
        let eye: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        assert_eq!(sym_eigenvalues(&eye).unwrap(), vec![1.0; 5]);

        let diag = vec![
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, -2.0],
        ];
        let e = sym_eigenvalues(&diag).unwrap();
        assert_relative_eq!(e[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(e[1], 1.0, epsilon = 1e-12);
        assert_relative_eq!(e[2], -2.0, epsilon = 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut a = vec![vec![0.0; 10]; 10];
        for i in 0..10 {
            for j in i..10 {
                let v = rng.gen::<f64>() - 0.5;
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let evals = sym_eigenvalues(&a).unwrap();
        let trace: f64 = (0..10).map(|i| a[i][i]).sum();
        assert_relative_eq!(evals.iter().sum::<f64>(), trace, epsilon = 1e-10);

        let bad = vec![vec![0.0, 1.0], vec![0.0, 0.0]];
        assert!(matches!(sym_eigenvalues(&bad), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn cross_check_benchmark_spaces() {
        for name in ["AI(3)", "SU(1,2)", "BDI(2,3)", "CI(2)"] {
            let report = cross_check(&space(name), 20, 0).unwrap();
            assert!(report.pass, "{name}: discrepancy {}", report.max_discrepancy);
            assert!(report.max_discrepancy <= 1e-9, "{name}: {}", report.max_discrepancy);
        }
    }

    #[test]
    fn cross_check_flat_exception_row() {
        let report = cross_check(&space("BDI(2,2)"), 10, 0).unwrap();
        assert!(report.pass);
    }

    #[test]
    fn unsupported_model_is_reported() {
        assert!(matches!(
            cross_check(&space("EIV"), 5, 0),
            Err(Error::UnsupportedModel { .. })
        ));
    }
}
