//! Small dense linear algebra over [`Real`]: one-sided Jacobi SVD, symmetric
//! Jacobi eigenvalues, least squares.

use crate::real::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<T>,
}

impl<T: Real> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)].clone();
                if a == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * other[(k, j)].clone();
                }
            }
        }
        out
    }

    /// Returns the matrix with rows reordered by `perm` (row `i` of the result is row `perm[i]`).
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(perm.len(), self.cols);
        for (i, &p) in perm.iter().enumerate() {
            for j in 0..self.cols {
                out[(i, j)] = self[(p, j)].clone();
            }
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn map<U: Real>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (x, y)| s + x.clone() * y.clone())
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Singular value decomposition `A = U diag(sigma) V^T` with singular values
/// in decreasing order.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    /// Left singular vectors as columns, `rows x n` with `n = max(rows, cols)`;
    /// columns belonging to zero singular values may be zero.
    pub u: Mat<T>,
    /// `n = max(rows, cols)` values; padding contributes zeros.
    pub sigma: Vec<T>,
    /// Right singular vectors, `cols x cols`, orthonormal.
    pub v: Mat<T>,
}

/// One-sided (Hestenes) Jacobi SVD. Wide matrices are padded with zero rows
/// so that a full orthonormal right basis is always produced.
pub fn svd<T: Real>(a: &Mat<T>) -> Svd<T> {
    let n = a.cols;
    let m = a.rows.max(n);
    // Work on columns of W (m x n).
    let mut w: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut c = a.column(j);
            c.resize(m, T::zero());
            c
        })
        .collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut c = vec![T::zero(); n];
            c[j] = T::one();
            c
        })
        .collect();
    let eps = T::epsilon();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == T::zero() || gamma.abs() <= eps.clone() * (alpha.clone() * beta.clone()).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::from_f64(2.0) * gamma);
                let sign = if zeta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (zeta.abs() + (T::one() + zeta.clone() * zeta).sqrt());
                let c = T::one() / (T::one() + t.clone() * t.clone()).sqrt();
                let s = c.clone() * t;
                rotate(&mut w, p, q, &c, &s);
                rotate(&mut v, p, q, &c, &s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sig: Vec<(T, usize)> = (0..n).map(|j| (norm(&w[j]), j)).collect();
    sig.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let rows = a.rows;
    let mut u = Mat::zeros(rows, m);
    let mut vm = Mat::zeros(n, n);
    let mut sigma = Vec::with_capacity(m);
    for (k, (s, j)) in sig.iter().enumerate() {
        if *s > T::zero() {
            for i in 0..rows {
                u[(i, k)] = w[*j][i].clone() / s.clone();
            }
        }
        for i in 0..n {
            vm[(i, k)] = v[*j][i].clone();
        }
        sigma.push(s.clone());
    }
    sigma.resize(m, T::zero());
    Svd { u, sigma, v: vm }
}

fn rotate<T: Real>(cols: &mut [Vec<T>], p: usize, q: usize, c: &T, s: &T) {
    let len = cols[p].len();
    for i in 0..len {
        let x = cols[p][i].clone();
        let y = cols[q][i].clone();
        cols[p][i] = c.clone() * x.clone() - s.clone() * y.clone();
        cols[q][i] = s.clone() * x + c.clone() * y;
    }
}

/// Singular values only, decreasing, `min(rows, cols)` of them.
pub fn singular_values<T: Real>(a: &Mat<T>) -> Vec<T> {
    let k = a.rows.min(a.cols);
    let mut s = if a.rows >= a.cols { svd(a).sigma } else { svd(&a.transpose()).sigma };
    s.truncate(k);
    s
}

/// Minimum-norm least squares solution of `A x = b`, discarding singular
/// values at or below `cutoff`.
pub fn lstsq<T: Real>(a: &Mat<T>, b: &[T], cutoff: &T) -> Vec<T> {
    let d = svd(a);
    let mut x = vec![T::zero(); a.cols];
    for k in 0..a.cols.min(d.sigma.len()) {
        let s = &d.sigma[k];
        if s <= cutoff {
            continue;
        }
        let mut ub = T::zero();
        for i in 0..a.rows {
            ub = ub + d.u[(i, k)].clone() * b[i].clone();
        }
        let coef = ub / s.clone();
        for i in 0..a.cols {
            x[i] = x[i].clone() + coef.clone() * d.v[(i, k)].clone();
        }
    }
    x
}

/// Eigenvalues and eigenvectors (columns) of a symmetric matrix by cyclic
/// Jacobi rotations, eigenvalues in decreasing order.
pub fn symmetric_eigen<T: Real>(a: &Mat<T>) -> (Vec<T>, Mat<T>) {
    let n = a.rows;
    assert_eq!(n, a.cols);
    let mut m = a.clone();
    let mut v: Mat<T> = Mat::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off + m[(i, j)].clone() * m[(i, j)].clone();
                }
            }
        }
        let scale = m.max_abs();
        if off.sqrt() <= eps.clone() * scale.clone() * T::from_f64(0.01) || scale == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)].clone();
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)].clone() - m[(p, p)].clone()) / (T::from_f64(2.0) * apq);
                let sign = if theta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (theta.abs() + (T::one() + theta.clone() * theta).sqrt());
                let c = T::one() / (T::one() + t.clone() * t.clone()).sqrt();
                let s = c.clone() * t;
                for k in 0..n {
                    let mkp = m[(k, p)].clone();
                    let mkq = m[(k, q)].clone();
                    m[(k, p)] = c.clone() * mkp.clone() - s.clone() * mkq.clone();
                    m[(k, q)] = s.clone() * mkp + c.clone() * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)].clone();
                    let mqk = m[(q, k)].clone();
                    m[(p, k)] = c.clone() * mpk.clone() - s.clone() * mqk.clone();
                    m[(q, k)] = s.clone() * mpk + c.clone() * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)].clone();
                    let vkq = v[(k, q)].clone();
                    v[(k, p)] = c.clone() * vkp.clone() - s.clone() * vkq.clone();
                    v[(k, q)] = s.clone() * vkp + c.clone() * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = idx.iter().map(|&i| m[(i, i)].clone()).collect();
    let mut vecs = Mat::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        for r in 0..n {
            vecs[(r, k)] = v[(r, i)].clone();
        }
    }
    (vals, vecs)
}

/// Solves a square system by Gaussian elimination with partial pivoting.
pub fn solve<T: Real>(a: &Mat<T>, b: &[T]) -> Option<Vec<T>> {
    let n = a.rows;
    assert_eq!(n, a.cols);
    let mut m = a.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[(i, k)].abs().partial_cmp(&m[(j, k)].abs()).unwrap())?;
        if m[(p, k)] == T::zero() {
            return None;
        }
        if p != k {
            for j in 0..n {
                let t = m[(k, j)].clone();
                m[(k, j)] = m[(p, j)].clone();
                m[(p, j)] = t;
            }
            x.swap(k, p);
        }
        for i in (k + 1)..n {
            let f = m[(i, k)].clone() / m[(k, k)].clone();
            if f == T::zero() {
                continue;
            }
            for j in k..n {
                m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(k, j)].clone();
            }
            x[i] = x[i].clone() - f * x[k].clone();
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k].clone();
        for j in (k + 1)..n {
            s = s - m[(k, j)].clone() * x[j].clone();
        }
        x[k] = s / m[(k, k)].clone();
    }
    Some(x)
}

/// Orthonormal basis (columns) of the orthogonal complement of the row space
/// spanned by the first `rank` right singular vectors.
pub fn null_space<T: Real>(d: &Svd<T>, rank: usize) -> Vec<Vec<T>> {
    (rank..d.v.cols).map(|k| d.v.column(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::F256;

    fn sample() -> Mat<f64> {
        Mat::from_rows(&[
            vec![4.0, 1.0, -2.0],
            vec![1.0, 3.0, 0.5],
            vec![0.0, 2.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ])
    }

    #[test]
    fn svd_reconstructs() {
        let a = sample();
        let d = svd(&a);
        for i in 0..a.rows {
            for j in 0..a.cols {
                let mut s = 0.0;
                for k in 0..a.cols {
                    s += d.u[(i, k)] * d.sigma[k] * d.v[(j, k)];
                }
                assert!((s - a[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn wide_matrix_has_kernel() {
        let a = Mat::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]]);
        let d = svd(&a);
        let k = null_space(&d, 2);
        assert_eq!(k.len(), 1);
        let r = a.mul_vec(&k[0]);
        assert!(r.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn rank_one_matrix_singular_values() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![3.0, 6.0]]);
        let s = singular_values(&a);
        assert!((s[0] - 70f64.sqrt()).abs() < 1e-12);
        assert!(s[1] < 1e-14);
    }

    #[test]
    fn eigen_of_symmetric() {
        let a = Mat::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, -1.0]]);
        let (vals, vecs) = symmetric_eigen(&a);
        assert!((vals[0] - 3.0).abs() < 1e-13);
        assert!((vals[1] - 1.0).abs() < 1e-13);
        assert!((vals[2] + 1.0).abs() < 1e-13);
        let v0 = vecs.column(0);
        let av = a.mul_vec(&v0);
        for i in 0..3 {
            assert!((av[i] - 3.0 * v0[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn multiprecision_svd() {
        let a = sample().map(|x| F256::from_f64(*x));
        let s = singular_values(&a);
        let s64 = singular_values(&sample());
        for (x, y) in s.iter().zip(&s64) {
            assert!((x.to_f64() - y).abs() < 1e-12);
        }
    }

    #[test]
    fn least_squares_and_solve() {
        let a = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let b = [3.0, 5.0];
        let x = solve(&a, &b).unwrap();
        let y = lstsq(&a, &b, &1e-12);
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        assert!((y[0] - 0.8).abs() < 1e-12 && (y[1] - 1.4).abs() < 1e-12);
    }
}
