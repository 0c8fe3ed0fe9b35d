//! Jacobians of the Vinberg and hyperbolic systems, numerical rank with an
//! explicit threshold rule, and the full-rank criterion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::{flip_time, HyperbolicRealization, Vec4};
use crate::linalg::{svd, Mat};
use crate::polytope::{counts, CombinatorialPolyhedron};
use crate::real::Real;
use crate::vinberg::{Equation, VinbergPoint, VinbergSystem};

/// Minimum ratio between the smallest accepted and largest rejected
/// singular value.
pub const DEFAULT_GAP: f64 = 1e3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TangentError {
    #[error("rank decision ambiguous: singular gap {gap:e} below {required:e}")]
    AmbiguousRank { gap: f64, required: f64 },
    #[error("isometry kernel check failed: {0}")]
    CheckFailed(String),
    #[error("precondition not met: {0}")]
    NotApplicable(String),
}

fn put<T: Real>(m: &mut Mat<T>, row: usize, block: usize, v: &Vec4<T>, scale: &T) {
    for k in 0..4 {
        m[(row, 4 * block + k)] = m[(row, 4 * block + k)].clone() + scale.clone() * v[k].clone();
    }
}

/// The `N x 4f` Jacobian of the Vinberg system at `point`.
pub fn jacobian<T: Real>(s: &VinbergSystem<T>, point: &VinbergPoint<T>) -> Mat<T> {
    let mut m = Mat::zeros(s.num_equations(), s.num_variables());
    let one = T::one();
    for (row, eq) in s.equations.iter().enumerate() {
        match *eq {
            Equation::Normalize(i) => put(&mut m, row, i, &s.alphas[i], &one),
            Equation::Product { i, j, .. } => {
                put(&mut m, row, i, &s.alphas[j], &s.entry(point, i, j));
                put(&mut m, row, j, &s.alphas[i], &s.entry(point, j, i));
            }
            Equation::Zero1 { i, j } => put(&mut m, row, j, &s.alphas[i], &one),
            Equation::Zero2 { i, j } => put(&mut m, row, i, &s.alphas[j], &one),
        }
    }
    m
}

/// The `(f + e) x 4f` Jacobian of the hyperbolic equations written in the
/// reflection vectors `b = 2 nu`.
pub fn hyperbolic_jacobian<T: Real>(p: &CombinatorialPolyhedron, r: &HyperbolicRealization<T>) -> Mat<T> {
    let f = p.num_faces();
    let alphas: Vec<Vec4<T>> = r.normals.iter().map(flip_time).collect();
    let mut m = Mat::zeros(f + p.num_edges(), 4 * f);
    let (two, four) = (T::from_f64(2.0), T::from_f64(4.0));
    for i in 0..f {
        put(&mut m, i, i, &alphas[i], &four);
    }
    for (e, &(a, b)) in p.edges.iter().enumerate() {
        put(&mut m, f + e, a, &alphas[b], &two);
        put(&mut m, f + e, b, &alphas[a], &two);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankDecision {
    pub rank: usize,
    /// All `min(rows, cols)` singular values, decreasing.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    /// Smallest accepted singular value.
    pub min_singular: f64,
    /// Smallest accepted over largest rejected (infinite when nothing is rejected).
    pub gap: f64,
    pub ambiguous: bool,
}

/// Rank by `tau = max(rows, cols) * eps * sigma_max`; ambiguous when the gap
/// at the threshold is below `gap_factor`.
pub fn numerical_rank<T: Real>(m: &Mat<T>, gap_factor: f64) -> RankDecision {
    let d = svd(m);
    let k = m.rows.min(m.cols);
    let sigma: Vec<T> = d.sigma[..k].to_vec();
    rank_from_sigma(&sigma, m.rows.max(m.cols), gap_factor)
}

fn rank_from_sigma<T: Real>(sigma: &[T], dim: usize, gap_factor: f64) -> RankDecision {
    let top = sigma.first().cloned().unwrap_or_else(T::zero);
    let tau = T::from_f64(dim as f64) * T::epsilon() * top;
    let rank = sigma.iter().filter(|s| **s > tau).count();
    let min_singular = if rank > 0 { sigma[rank - 1].to_f64() } else { 0.0 };
    let gap = if rank == sigma.len() || rank == 0 {
        f64::INFINITY
    } else {
        let rejected = sigma[rank].clone();
        if rejected == T::zero() {
            f64::INFINITY
        } else {
            (sigma[rank - 1].clone() / rejected).to_f64()
        }
    };
    // Also require the first rejected value to sit clearly below the threshold
    // relative to the accepted ones.
    RankDecision {
        rank,
        singular_values: sigma.iter().map(|s| s.to_f64()).collect(),
        threshold: tau.to_f64(),
        min_singular,
        gap,
        ambiguous: gap < gap_factor,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Smallest accepted singular value.
    pub min_singular: f64,
    pub singular_gap: f64,
    /// Dimension of the kernel, `4f - rank`.
    pub kernel_dim: usize,
    /// `3f - e - e2`.
    pub excess: i64,
    pub full_rank: bool,
    /// Local dimension when decided by the full-rank criterion.
    pub local_dim: Option<usize>,
    /// Orthonormal kernel basis with first nonzero coordinate positive.
    pub kernel_basis: Vec<Vec<f64>>,
    pub precision: usize,
}

/// Rank, kernel and the full-rank criterion at a solution point.
pub fn analyze<T: Real>(
    p: &CombinatorialPolyhedron,
    s: &VinbergSystem<T>,
    point: &VinbergPoint<T>,
    l: &crate::polytope::CoxeterLabeling,
    gap_factor: f64,
) -> Result<JacobianReport, TangentError> {
    let m = jacobian(s, point);
    let d = svd(&m);
    let k = m.rows.min(m.cols);
    let dec = rank_from_sigma(&d.sigma[..k], m.rows.max(m.cols), gap_factor);
    if dec.ambiguous {
        return Err(TangentError::AmbiguousRank { gap: dec.gap, required: gap_factor });
    }
    let cols = m.cols;
    let kernel_basis: Vec<Vec<f64>> = (dec.rank..cols)
        .map(|c| normalize_sign(d.v.column(c).iter().map(|x| x.to_f64()).collect()))
        .collect();
    let full_rank = dec.rank == m.rows.min(m.cols);
    let excess = counts(p, l).excess;
    let local_dim = full_rank.then(|| excess.max(0) as usize);
    Ok(JacobianReport {
        rows: m.rows,
        cols,
        rank: dec.rank,
        min_singular: dec.min_singular,
        singular_gap: dec.gap,
        kernel_dim: cols - dec.rank,
        excess,
        full_rank,
        local_dim,
        kernel_basis,
        precision: T::BITS,
    })
}

fn normalize_sign(mut v: Vec<f64>) -> Vec<f64> {
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-12) {
        if *x < 0.0 {
            v.iter_mut().for_each(|t| *t = -*t);
        }
    }
    v
}

/// Basis of the Lorentz Lie algebra: three boosts and three rotations.
pub fn lorentz_algebra() -> Vec<Mat<f64>> {
    let mut out = Vec::new();
    for k in 1..4 {
        let mut x = Mat::zeros(4, 4);
        x[(0, k)] = 1.0;
        x[(k, 0)] = 1.0;
        out.push(x);
    }
    for (j, k) in [(1, 2), (1, 3), (2, 3)] {
        let mut x = Mat::zeros(4, 4);
        x[(j, k)] = 1.0;
        x[(k, j)] = -1.0;
        out.push(x);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryKernelReport {
    pub kernel_dim: usize,
    pub rank_vinberg: usize,
    pub rank_hyperbolic: usize,
    pub equations: usize,
    /// Largest distance from a unit isometry direction to the kernel.
    pub subspace_distance: f64,
    pub isometry_span_dim: usize,
    pub passed: bool,
}

/// With every edge order at least 3: the kernel of the Jacobian is six
/// dimensional and equals the span of `(X b_1, ..., X b_f)` over infinitesimal
/// Lorentz isometries `X`.
pub fn isometry_kernel_check(
    p: &CombinatorialPolyhedron,
    r: &HyperbolicRealization<f64>,
    report: &JacobianReport,
    tol: f64,
) -> Result<IsometryKernelReport, TangentError> {
    if r.labeling.orders.iter().any(|&n| n < 3) {
        return Err(TangentError::NotApplicable("an edge has order 2".into()));
    }
    if !p.is_trivalent() {
        return Err(TangentError::NotApplicable("a vertex is not trivalent".into()));
    }
    let dirs: Vec<Vec<f64>> = lorentz_algebra()
        .iter()
        .map(|x| r.normals.iter().flat_map(|v| x.mul_vec(&v.map(|t| 2.0 * t))).collect())
        .collect();
    let dm = Mat::from_rows(&dirs).transpose();
    let dd = svd(&dm);
    let span: Vec<Vec<f64>> = (0..dirs.len())
        .filter(|&k| dd.sigma[k] > 1e-9 * dd.sigma[0])
        .map(|k| dd.u.column(k))
        .collect();
    let mut dist = 0.0f64;
    for v in &span {
        let mut resid = v.clone();
        for kb in &report.kernel_basis {
            let c: f64 = kb.iter().zip(v).map(|(a, b)| a * b).sum();
            for (x, y) in resid.iter_mut().zip(kb) {
                *x -= c * y;
            }
        }
        dist = dist.max(resid.iter().map(|x| x * x).sum::<f64>().sqrt());
    }
    let dh = hyperbolic_jacobian(p, r);
    let rank_hyperbolic = numerical_rank(&dh, DEFAULT_GAP).rank;
    let out = IsometryKernelReport {
        kernel_dim: report.kernel_dim,
        rank_vinberg: report.rank,
        rank_hyperbolic,
        equations: report.rows,
        subspace_distance: dist,
        isometry_span_dim: span.len(),
        passed: report.kernel_dim == 6 && span.len() == 6 && dist < tol && rank_hyperbolic == report.rank,
    };
    if out.passed {
        Ok(out)
    } else {
        Err(TangentError::CheckFailed(format!("{out:?}")))
    }
}
