//! Local dimension of the restricted deformation space at a rank-deficient
//! hyperbolic point: the exact quadratic model, second-order obstructions,
//! the tangent cone, curve tracking and symmetric exact families.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::{
    apply, do13_constants, do13_realization, flip_time, prism_realization, HyperbolicError, HyperbolicRealization,
    Vec4,
};
use crate::linalg::{dot, lstsq, norm, svd, symmetric_eigen, Mat};
use crate::polytope::{CombinatorialPolyhedron, CoxeterLabeling};
use crate::real::Real;
use crate::tangent::{jacobian, numerical_rank, JacobianReport, DEFAULT_GAP};
use crate::vinberg::{hyperbolic_point, max_residual, residuals, system_for, Equation, VinbergPoint, VinbergSystem};

/// Relative threshold for a cokernel projection to count as zero.
pub const OBSTRUCTION_TOL: f64 = 1e-8;
/// Residual accepted by curve tracking.
pub const TRACK_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalDimError {
    #[error("kernel dimension {0} exceeds the supported maximum of 4")]
    TooManyKernelDims(usize),
    #[error("tangent cone undecided: {0}")]
    ConeUndecided(String),
    #[error("curve tracking failed at step {delta}: residual {residual:e}")]
    TrackingFailed { delta: f64, residual: f64 },
    #[error("no branch reached a verdict: {0}")]
    Undecided(String),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
}

/// `Phi(t + c) = L c + Q(c)` for the Vinberg system at a solution `t`.
#[derive(Clone, Debug)]
pub struct QuadraticModel<T: Real> {
    pub system: VinbergSystem<T>,
    pub point: VinbergPoint<T>,
    pub linear: Mat<T>,
}

fn block<T: Real>(c: &[T], i: usize) -> &[T] {
    &c[4 * i..4 * i + 4]
}

impl<T: Real> QuadraticModel<T> {
    /// Symmetric bilinear form attached to `Q`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> Vec<T> {
        let half = T::from_f64(0.5);
        self.system
            .equations
            .iter()
            .map(|eq| match *eq {
                Equation::Product { i, j, .. } => {
                    let (ai, aj) = (&self.system.alphas[i], &self.system.alphas[j]);
                    (dot(ai, block(x, j)) * dot(aj, block(y, i)) + dot(ai, block(y, j)) * dot(aj, block(x, i)))
                        * half.clone()
                }
                _ => T::zero(),
            })
            .collect()
    }

    pub fn quadratic(&self, c: &[T]) -> Vec<T> {
        self.bilinear(c, c)
    }

    /// `L c + Q(c)`, equal to `Phi(t + c)`.
    pub fn evaluate(&self, c: &[T]) -> Vec<T> {
        let lin = self.linear.mul_vec(c);
        lin.into_iter().zip(self.quadratic(c)).map(|(a, b)| a + b).collect()
    }
}

pub fn quadratic_model<T: Real>(system: &VinbergSystem<T>, point: &VinbergPoint<T>) -> QuadraticModel<T> {
    QuadraticModel { system: system.clone(), point: point.clone(), linear: jacobian(system, point) }
}

/// Orthonormal bases of the kernel and cokernel of the linear part.
#[derive(Clone, Debug)]
pub struct KernelData<T: Real> {
    pub rank: usize,
    pub kernel: Vec<Vec<T>>,
    pub cokernel: Vec<Vec<T>>,
}

pub fn kernel_data<T: Real>(m: &QuadraticModel<T>) -> KernelData<T> {
    let l = &m.linear;
    let rank = numerical_rank(l, DEFAULT_GAP).rank;
    let right = svd(l);
    let left = svd(&l.transpose());
    let kernel = (rank..l.cols).map(|k| sign_normalized(right.v.column(k))).collect();
    let cokernel = (rank..l.rows).map(|k| sign_normalized(left.v.column(k))).collect();
    KernelData { rank, kernel, cokernel }
}

fn sign_normalized<T: Real>(mut v: Vec<T>) -> Vec<T> {
    let tiny = T::from_f64(1e-12);
    if let Some(x) = v.iter().find(|x| x.abs() > tiny) {
        if *x < T::zero() {
            v.iter_mut().for_each(|t| *t = -t.clone());
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    /// Relative size of the cokernel component of `Q(v)`.
    Obstructed { projection: f64 },
    /// A witness `w` with `L w = -Q(v)`.
    Unobstructed { witness: Vec<f64> },
}

impl Obstruction {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Obstruction::Obstructed { .. })
    }
}

/// Whether the kernel direction `v` extends to second order.
pub fn second_order_obstruction<T: Real>(m: &QuadraticModel<T>, v: &[T]) -> Obstruction {
    let q = m.quadratic(v);
    let qn = norm(&q);
    let cols = m.linear.cols;
    if qn == T::zero() {
        return Obstruction::Unobstructed { witness: vec![0.0; cols] };
    }
    let kd = kernel_data(m);
    let proj: T = kd.cokernel.iter().map(|c| dot(c, &q) * dot(c, &q)).fold(T::zero(), |a, b| a + b).sqrt();
    let rel = (proj / qn).to_f64();
    if rel > OBSTRUCTION_TOL {
        return Obstruction::Obstructed { projection: rel };
    }
    let rhs: Vec<T> = q.iter().map(|x| -x.clone()).collect();
    let cutoff = T::from_f64(1e3) * T::epsilon() * m.linear.max_abs() * T::from_f64(cols as f64);
    let w = lstsq(&m.linear, &rhs, &cutoff);
    Obstruction::Unobstructed { witness: w.iter().map(|x| x.to_f64()).collect() }
}

/// The quadratic forms `s -> <c_a, Q(sum s_k v_k)>` on kernel coordinates,
/// one per cokernel vector.
pub fn projected_forms<T: Real>(m: &QuadraticModel<T>, kd: &KernelData<T>) -> Vec<Mat<f64>> {
    let k = kd.kernel.len();
    let pairs: Vec<Vec<Vec<T>>> =
        (0..k).map(|p| (0..k).map(|q| m.bilinear(&kd.kernel[p], &kd.kernel[q])).collect()).collect();
    kd.cokernel
        .iter()
        .map(|c| {
            let mut h = Mat::zeros(k, k);
            for p in 0..k {
                for q in 0..k {
                    h[(p, q)] = dot(c, &pairs[p][q]).to_f64();
                }
            }
            h
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeReport {
    pub kernel_dim: usize,
    pub dimension: usize,
    /// Eigenvalues of each independent projected form.
    pub form_spectra: Vec<Vec<f64>>,
    /// Kernel coordinates of directions on the cone spanning its linear part.
    pub directions: Vec<Vec<f64>>,
}

/// Dimension of the real cone `{s : H_a(s) = 0 for all a}` cut out by the
/// projected second-order forms.
pub fn cone_dimension<T: Real>(m: &QuadraticModel<T>) -> Result<ConeReport, LocalDimError> {
    let kd = kernel_data(m);
    let k = kd.kernel.len();
    if k > 4 {
        return Err(LocalDimError::TooManyKernelDims(k));
    }
    let forms = projected_forms(m, &kd);
    let scale = forms.iter().map(|h| h.max_abs()).fold(0.0, f64::max).max(1.0);
    let tol = OBSTRUCTION_TOL * scale;
    let basis = independent_forms(&forms, tol);
    let spectra: Vec<Vec<f64>> = basis.iter().map(|h| symmetric_eigen(h).0).collect();
    let identity = |k: usize| (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let (dimension, directions) = match basis.len() {
        0 => (k, identity(k)),
        1 => {
            let (vals, vecs) = symmetric_eigen(&basis[0]);
            let pos: Vec<usize> = (0..k).filter(|&i| vals[i] > tol).collect();
            let neg: Vec<usize> = (0..k).filter(|&i| vals[i] < -tol).collect();
            let null: Vec<usize> = (0..k).filter(|&i| vals[i].abs() <= tol).collect();
            if !pos.is_empty() && !neg.is_empty() {
                let (a, b) = (pos[0], neg[0]);
                let dir: Vec<f64> = (0..k)
                    .map(|r| vecs[(r, a)] / vals[a].sqrt() + vecs[(r, b)] / (-vals[b]).sqrt())
                    .collect();
                let mut dirs = vec![dir];
                dirs.extend(null.iter().map(|&i| vecs.column(i)));
                (k - 1, dirs)
            } else {
                (null.len(), null.iter().map(|&i| vecs.column(i)).collect())
            }
        }
        _ if k <= 2 => binary_common_zeros(&basis, tol),
        _ if k == 3 => ternary_common_zeros(&basis, tol),
        n => return Err(LocalDimError::ConeUndecided(format!("{n} independent forms in {k} variables"))),
    };
    Ok(ConeReport { kernel_dim: k, dimension, form_spectra: spectra, directions })
}

fn independent_forms(forms: &[Mat<f64>], tol: f64) -> Vec<Mat<f64>> {
    if forms.is_empty() {
        return Vec::new();
    }
    let k = forms[0].rows;
    let flat: Vec<Vec<f64>> = forms.iter().map(|h| (0..k * k).map(|i| h[(i / k, i % k)]).collect()).collect();
    let d = svd(&Mat::from_rows(&flat).transpose());
    (0..flat.len().min(k * k))
        .filter(|&i| d.sigma[i] > tol)
        .map(|i| {
            let u = d.u.column(i);
            let mut h = Mat::zeros(k, k);
            for r in 0..k * k {
                h[(r / k, r % k)] = u[r] * d.sigma[i];
            }
            h
        })
        .collect()
}

// Two or more independent forms in three variables. The zero set of the
// first form is a smooth conic, a pair of planes, a line, a plane or empty;
// the others are intersected with each piece.
fn ternary_common_zeros(forms: &[Mat<f64>], tol: f64) -> (usize, Vec<Vec<f64>>) {
    let (vals, vecs) = symmetric_eigen(&forms[0]);
    let others = &forms[1..];
    let null: Vec<usize> = (0..3).filter(|&i| vals[i].abs() <= tol).collect();
    let pos: Vec<usize> = (0..3).filter(|&i| vals[i] > tol).collect();
    let neg: Vec<usize> = (0..3).filter(|&i| vals[i] < -tol).collect();
    let scaled = |i: usize| -> Vec<f64> { vecs.column(i).iter().map(|x| x / vals[i].abs().sqrt()).collect() };
    let vanishes = |s: &Vec<f64>| {
        let n = dot(s, s);
        others.iter().all(|h| (dot(s, &h.mul_vec(s)) / n).abs() <= tol)
    };
    match (null.len(), pos.len(), neg.len()) {
        (0, 3, 0) | (0, 0, 3) => (0, Vec::new()),
        (0, _, _) => {
            let (pair, single) = if pos.len() == 2 { ([pos[0], pos[1]], neg[0]) } else { ([neg[0], neg[1]], pos[0]) };
            let (a, b, c) = (scaled(pair[0]), scaled(pair[1]), scaled(single));
            let curve = |t: f64| -> Vec<f64> { (0..3).map(|r| a[r] * t.cos() + b[r] * t.sin() + c[r]).collect() };
            conic_common_zeros(&curve, others, tol)
        }
        (1, 1, 1) => {
            let n = vecs.column(null[0]);
            let (a, b) = (scaled(pos[0]), scaled(neg[0]));
            let plus: Vec<f64> = (0..3).map(|r| a[r] + b[r]).collect();
            let minus: Vec<f64> = (0..3).map(|r| a[r] - b[r]).collect();
            let mut dims = 0;
            let mut dirs = Vec::new();
            for w in [plus, minus] {
                let (d, mut v) = plane_common_zeros(&n, &w, others, tol);
                dims = dims.max(d);
                dirs.append(&mut v);
            }
            (dims, dirs)
        }
        (1, _, _) => {
            let n = vecs.column(null[0]);
            if vanishes(&n) {
                (1, vec![n])
            } else {
                (0, Vec::new())
            }
        }
        (2, _, _) => plane_common_zeros(&vecs.column(null[0]), &vecs.column(null[1]), others, tol),
        _ => (3, (0..3).map(|i| vecs.column(i)).collect()),
    }
}

// Common zeros of `forms` on the plane spanned by `u` and `w`.
fn plane_common_zeros(u: &[f64], w: &[f64], forms: &[Mat<f64>], tol: f64) -> (usize, Vec<Vec<f64>>) {
    let restricted: Vec<Mat<f64>> = forms
        .iter()
        .map(|h| {
            let (hu, hw) = (h.mul_vec(u), h.mul_vec(w));
            Mat::from_rows(&[vec![dot(u, &hu), dot(u, &hw)], vec![dot(w, &hu), dot(w, &hw)]])
        })
        .filter(|b| b.max_abs() > tol)
        .collect();
    let lift = |c: &Vec<f64>| -> Vec<f64> { (0..3).map(|r| c[0] * u[r] + c[1] * w[r]).collect() };
    if restricted.is_empty() {
        return (2, vec![u.to_vec(), w.to_vec()]);
    }
    let (d, coords) = binary_common_zeros(&restricted, tol);
    (d, coords.iter().map(lift).collect())
}

// Common zeros of `forms` along a closed curve parametrizing a smooth conic.
fn conic_common_zeros(curve: &dyn Fn(f64) -> Vec<f64>, forms: &[Mat<f64>], tol: f64) -> (usize, Vec<Vec<f64>>) {
    const SAMPLES: usize = 2048;
    let value = |t: f64| {
        let s = curve(t);
        dot(&s, &forms[0].mul_vec(&s)) / dot(&s, &s)
    };
    let step = 2.0 * std::f64::consts::PI / SAMPLES as f64;
    let g: Vec<f64> = (0..=SAMPLES).map(|i| value(i as f64 * step)).collect();
    let mut roots = Vec::new();
    for i in 0..SAMPLES {
        let (t0, t1) = (i as f64 * step, (i + 1) as f64 * step);
        if g[i] == 0.0 || g[i].signum() != g[i + 1].signum() {
            let (mut lo, mut hi) = (t0, t1);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if value(mid).signum() == value(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        } else if i > 0 && g[i].abs() < g[i - 1].abs() && g[i].abs() <= g[i + 1].abs() {
            // Possible tangential contact: minimize |g| locally.
            let (mut lo, mut hi) = (t0 - step, t1);
            for _ in 0..60 {
                let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
                if value(m1).abs() < value(m2).abs() {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            let t = 0.5 * (lo + hi);
            if value(t).abs() <= tol {
                roots.push(t);
            }
        }
    }
    let common: Vec<Vec<f64>> = roots
        .into_iter()
        .map(|t| {
            let s = curve(t);
            let n = norm(&s);
            s.into_iter().map(|x| x / n).collect::<Vec<f64>>()
        })
        .filter(|s| forms.iter().all(|h| dot(s, &h.mul_vec(s)).abs() <= tol))
        .collect();
    if common.is_empty() {
        (0, common)
    } else {
        (1, common)
    }
}

// Two or more independent forms in at most two variables.
fn binary_common_zeros(forms: &[Mat<f64>], tol: f64) -> (usize, Vec<Vec<f64>>) {
    if forms[0].rows == 1 {
        return (0, Vec::new());
    }
    // Candidate directions: real roots of the first nonzero form.
    let h = &forms[0];
    let (a, b, c) = (h[(0, 0)], 2.0 * h[(0, 1)], h[(1, 1)]);
    let mut roots = Vec::new();
    if a.abs() <= tol {
        roots.push(vec![1.0, 0.0]);
        if b.abs() > tol {
            roots.push(vec![-c / b, 1.0]);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= -tol {
            let r = disc.max(0.0).sqrt();
            roots.push(vec![(-b + r) / (2.0 * a), 1.0]);
            roots.push(vec![(-b - r) / (2.0 * a), 1.0]);
        }
    }
    let on_all = |s: &Vec<f64>| {
        let n = norm(s);
        forms.iter().all(|h| (dot(s, &h.mul_vec(s)) / (n * n)).abs() <= tol)
    };
    let common: Vec<Vec<f64>> = roots.into_iter().filter(on_all).collect();
    if common.is_empty() {
        (0, common)
    } else {
        (1, common)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackStep {
    pub delta: f64,
    pub residual: f64,
    pub distance: f64,
    pub iterations: usize,
    /// `4f - rank` of the Jacobian at the tracked point.
    pub local_corank: usize,
    pub point: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackRecord {
    pub steps: Vec<TrackStep>,
    pub success: bool,
}

pub const DEFAULT_LADDER: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Newton-corrects `t + delta v` onto `Phi = 0` with corrections orthogonal to
/// `v`, for each step of the ladder.
pub fn curve_track(system: &VinbergSystem<f64>, point: &VinbergPoint<f64>, v: &[f64], ladder: &[f64]) -> TrackRecord {
    let t = point.flatten();
    let n = t.len();
    let vn = norm(v);
    let v: Vec<f64> = v.iter().map(|x| x / vn).collect();
    let mut steps = Vec::new();
    let mut success = true;
    for &delta in ladder {
        let mut x: Vec<f64> = t.iter().zip(&v).map(|(a, b)| a + delta * b).collect();
        let mut res = f64::INFINITY;
        let mut iterations = 0;
        for it in 0..60 {
            let pt = VinbergPoint::from_flat(&x);
            let r = residuals(system, &pt);
            res = r.iter().fold(0.0f64, |m, y| m.max(y.abs()));
            iterations = it;
            if res < TRACK_TOL * 1e-2 {
                break;
            }
            let d = jacobian(system, &pt);
            let mut dp = d.clone();
            for row in 0..d.rows {
                let along: f64 = (0..n).map(|k| d[(row, k)] * v[k]).sum();
                for k in 0..n {
                    dp[(row, k)] -= along * v[k];
                }
            }
            let rhs: Vec<f64> = r.iter().map(|y| -y).collect();
            let cutoff = 1e-10 * dp.max_abs();
            let step = lstsq(&dp, &rhs, &cutoff);
            let along: f64 = dot(&step, &v);
            let next: Vec<f64> = x.iter().zip(&step).zip(&v).map(|((a, s), vv)| a + s - along * vv).collect();
            if next.iter().zip(&x).all(|(a, b)| a == b) {
                break;
            }
            x = next;
        }
        let distance = norm(&x.iter().zip(&t).map(|(a, b)| a - b).collect::<Vec<_>>());
        let local_corank = n - numerical_rank(&jacobian(system, &VinbergPoint::from_flat(&x)), 1.0).rank;
        let ok = res < TRACK_TOL && distance >= delta / 2.0;
        success &= ok;
        steps.push(TrackStep { delta, residual: res, distance, iterations, local_corank, point: x });
    }
    TrackRecord { steps, success }
}

/// A one-parameter family of solutions of a Vinberg system.
pub trait ExactFamily<T: Real> {
    /// Parameter value at the hyperbolic point.
    fn base_parameter(&self) -> T;
    fn point(&self, parameter: &T) -> VinbergPoint<T>;
    fn system(&self) -> &VinbergSystem<T>;
}

fn cap_vector<T: Real>(alpha_cap: &Vec4<T>, alpha_side: &Vec4<T>, b_side: &Vec4<T>) -> Vec4<T> {
    // (x, 0, 0, y) with alpha_cap(b) = 2 and alpha_side(b) * alpha_cap(b_side) = 1.
    let target = T::one() / dot(alpha_cap, b_side);
    let m = [[alpha_cap[0].clone(), alpha_cap[3].clone()], [alpha_side[0].clone(), alpha_side[3].clone()]];
    let rhs = [T::from_f64(2.0), target];
    let det = m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone();
    let x = (rhs[0].clone() * m[1][1].clone() - m[0][1].clone() * rhs[1].clone()) / det.clone();
    let y = (m[0][0].clone() * rhs[1].clone() - rhs[0].clone() * m[1][0].clone()) / det;
    [x, T::zero(), T::zero(), y]
}

/// Prism family: `b_1 = 2 nu_1 + s e_4`, side vectors by rotation, cap
/// vectors on the axis solving the cap equations.
pub struct PrismFamily<T: Real> {
    pub n: usize,
    pub realization: HyperbolicRealization<T>,
    system: VinbergSystem<T>,
    rot: Mat<T>,
}

pub fn symmetric_slice_prism<T: Real>(n: usize) -> Result<PrismFamily<T>, LocalDimError> {
    let realization = prism_realization::<T>(n)?;
    let p = crate::polytope::catalog::prism(n).expect("n >= 5");
    let system = system_for(&p, &realization);
    let (c, s) = T::cos_sin_pi(2, n as i64);
    let rot = crate::hyperbolic::rotation(&c, &s, T::one());
    Ok(PrismFamily { n, realization, system, rot })
}

impl<T: Real> ExactFamily<T> for PrismFamily<T> {
    fn base_parameter(&self) -> T {
        T::zero()
    }

    fn point(&self, parameter: &T) -> VinbergPoint<T> {
        let n = self.n;
        let nu = &self.realization.normals;
        let two = T::from_f64(2.0);
        let mut b: Vec<Vec4<T>> = Vec::with_capacity(n + 2);
        let first = [two.clone() * nu[0][0].clone(), two.clone() * nu[0][1].clone(), two.clone() * nu[0][2].clone(), parameter.clone()];
        b.push(first);
        for k in 1..n {
            let prev = b[k - 1].clone();
            b.push(apply(&self.rot, &prev));
        }
        let alphas = &self.system.alphas;
        for cap in [n, n + 1] {
            b.push(cap_vector(&alphas[cap], &alphas[0], &b[0]));
        }
        VinbergPoint { b }
    }

    fn system(&self) -> &VinbergSystem<T> {
        &self.system
    }
}

/// do13 family in catalog numbering: ring vectors `b_1, b_2` (symmetric
/// numbering) each with a free last coordinate, propagated by `L^2`, one last
/// coordinate eliminated by the product equation between them, and axis
/// vectors from the cap equations.
pub struct Do13Family<T: Real> {
    pub realization: HyperbolicRealization<T>,
    /// Catalog face to symmetric face.
    pub face_map: Vec<usize>,
    system: VinbergSystem<T>,
    sym_alphas: Vec<Vec4<T>>,
    sym_nu: Vec<Vec4<T>>,
    rot2: Mat<T>,
}

pub fn symmetric_slice_do13<T: Real>(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
) -> Option<Do13Family<T>> {
    let (realization, face_map) = do13_realization::<T>(p, l)?;
    let system = system_for(p, &realization);
    let sym_nu = crate::hyperbolic::do13_normals::<T>();
    let sym_alphas = sym_nu.iter().map(flip_time).collect();
    let k = do13_constants::<T>();
    let rot2 = k.rot.mul(&k.rot);
    Some(Do13Family { realization, face_map, system, sym_alphas, sym_nu, rot2 })
}

impl<T: Real> Do13Family<T> {
    // Ring vector with given last coordinate, first coordinate from its
    // normalization, middle coordinates from 2 nu.
    fn ring_vector(&self, face: usize, last: &T) -> Vec4<T> {
        let a = &self.sym_alphas[face];
        let nu = &self.sym_nu[face];
        let two = T::from_f64(2.0);
        let (b1, b2) = (two.clone() * nu[1].clone(), two.clone() * nu[2].clone());
        let rest = a[1].clone() * b1.clone() + a[2].clone() * b2.clone() + a[3].clone() * last.clone();
        [(two - rest) / a[0].clone(), b1, b2, last.clone()]
    }

    /// Symmetric-numbering vectors for a value of the first ring vector's last
    /// coordinate.
    pub fn symmetric_point(&self, parameter: &T) -> Vec<Vec4<T>> {
        let a = &self.sym_alphas;
        let first = self.ring_vector(0, parameter);
        let target = T::one() / dot(&a[1], &first);
        // alpha_0(b_1) is affine in the last coordinate of b_1.
        let at = |y: &T| dot(&a[0], &self.ring_vector(1, y));
        let (f0, f1) = (at(&T::zero()), at(&T::one()));
        let second = self.ring_vector(1, &((target - f0.clone()) / (f1 - f0)));
        let mut b = vec![first, second];
        for k in 2..10 {
            let prev = b[k - 2].clone();
            b.push(apply(&self.rot2, &prev));
        }
        b.push(cap_vector(&a[10], &a[0], &b[0]));
        b.push(cap_vector(&a[11], &a[1], &b[1]));
        b
    }
}

impl<T: Real> ExactFamily<T> for Do13Family<T> {
    fn base_parameter(&self) -> T {
        T::from_f64(2.0) * self.sym_nu[0][3].clone()
    }

    fn point(&self, parameter: &T) -> VinbergPoint<T> {
        let sym = self.symmetric_point(parameter);
        VinbergPoint { b: self.face_map.iter().map(|&k| sym[k].clone()).collect() }
    }

    fn system(&self) -> &VinbergSystem<T> {
        &self.system
    }
}

/// Largest residual over `samples` parameter values evenly spread in
/// `base +- radius`.
pub fn family_max_residual<T: Real, F: ExactFamily<T>>(family: &F, radius: f64, samples: usize) -> f64 {
    let base = family.base_parameter();
    (0..samples)
        .map(|k| {
            let s = if samples > 1 { -radius + 2.0 * radius * k as f64 / (samples - 1) as f64 } else { 0.0 };
            let pt = family.point(&(base.clone() + T::from_f64(s)));
            max_residual(family.system(), &pt).to_f64()
        })
        .fold(0.0, f64::max)
}

/// Whether the family actually moves: distance between the points at
/// `base +- radius`.
pub fn family_spread<T: Real, F: ExactFamily<T>>(family: &F, radius: f64) -> f64 {
    let base = family.base_parameter();
    let a = family.point(&(base.clone() + T::from_f64(radius))).flatten();
    let b = family.point(&(base - T::from_f64(radius))).flatten();
    norm(&a.iter().zip(&b).map(|(x, y)| (x.clone() - y.clone()).to_f64()).collect::<Vec<_>>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    ExactFullRank,
    ExactSymmetricFamily,
    ExactGroebner,
    ObstructionRigid,
    NumericalEvidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalDimVerdict {
    pub dimension: usize,
    pub certification: Certification,
    pub details: String,
}

/// Outcome of an exact elimination supplied by the caller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactElimination {
    pub free_variables: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct LocalDimOptions {
    pub elimination: Option<ExactElimination>,
    pub ladder: Option<Vec<f64>>,
}

/// Decision cascade: full rank, symmetric family, exact elimination, then
/// second-order analysis backed by curve tracking.
pub fn local_dimension(
    p: &CombinatorialPolyhedron,
    r: &HyperbolicRealization<f64>,
    report: &JacobianReport,
    opts: &LocalDimOptions,
) -> Result<LocalDimVerdict, LocalDimError> {
    if report.full_rank {
        let dimension = report.cols.saturating_sub(report.rows).max(0);
        let dimension = if report.rows >= report.cols { 0 } else { dimension };
        return Ok(LocalDimVerdict {
            dimension,
            certification: Certification::ExactFullRank,
            details: format!("rank {} of {}x{}", report.rank, report.rows, report.cols),
        });
    }
    let family = symmetric_family_check(p, &r.labeling);
    if let (1, Some(v)) = (report.kernel_dim, &family) {
        return Ok(v.clone());
    }
    if let Some(e) = &opts.elimination {
        if e.free_variables.len() <= report.kernel_dim {
            return Ok(LocalDimVerdict {
                dimension: e.free_variables.len(),
                certification: Certification::ExactGroebner,
                details: format!("free variables {}", e.free_variables.join(", ")),
            });
        }
    }
    let system = system_for(p, r);
    let point = hyperbolic_point(r);
    let model = quadratic_model(&system, &point);
    let cone = cone_dimension(&model)?;
    if let Some(mut v) = family {
        // The family bounds A from below, the second-order cone from above.
        if cone.dimension != 1 {
            return Err(LocalDimError::Undecided(format!(
                "exact family through the point but second-order cone of dimension {}",
                cone.dimension
            )));
        }
        v.details = format!("{}; second-order cone of dimension 1 in a {}-dimensional kernel", v.details, cone.kernel_dim);
        return Ok(v);
    }
    if cone.dimension == 0 {
        return Ok(LocalDimVerdict {
            dimension: 0,
            certification: Certification::ObstructionRigid,
            details: format!("rigid, second-order certificate; form spectra {:?}", cone.form_spectra),
        });
    }
    let kd = kernel_data(&model);
    let dir = &cone.directions[0];
    let v: Vec<f64> =
        (0..report.cols).map(|i| (0..kd.kernel.len()).map(|k| dir[k] * kd.kernel[k][i]).sum()).collect();
    let ladder = opts.ladder.clone().unwrap_or_else(|| DEFAULT_LADDER.to_vec());
    let track = curve_track(&system, &point, &v, &ladder);
    let last = track.steps.last().expect("nonempty ladder");
    if !track.success {
        return Err(LocalDimError::TrackingFailed { delta: last.delta, residual: last.residual });
    }
    if last.local_corank != cone.dimension {
        return Err(LocalDimError::Undecided(format!(
            "cone dimension {} but corank {} along the tracked curve",
            cone.dimension, last.local_corank
        )));
    }
    Ok(LocalDimVerdict {
        dimension: cone.dimension,
        certification: Certification::NumericalEvidence,
        details: format!(
            "cone dimension {}; curve tracked to residual {:.1e}; corank {} along the curve",
            cone.dimension, last.residual, last.local_corank
        ),
    })
}

/// Exact family through the hyperbolic point for the symmetric cases, giving
/// `A >= 1`, hence `A = 1` when the kernel is one dimensional.
fn symmetric_family_check(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Option<LocalDimVerdict> {
    let (residual, spread, name) = if let Some(family) = symmetric_slice_do13::<f64>(p, l) {
        (family_max_residual(&family, 0.05, 20), family_spread(&family, 0.05), "symmetric dodecahedron")
    } else {
        let n = p.name.strip_prefix("prism").and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 5)?;
        if *l != crate::hyperbolic::prism_labeling(p, n) {
            return None;
        }
        let family = symmetric_slice_prism::<f64>(n).ok()?;
        (family_max_residual(&family, 0.05, 20), family_spread(&family, 0.05), "symmetric prism")
    };
    (residual < 1e-12 && spread > 1e-3).then(|| LocalDimVerdict {
        dimension: 1,
        certification: Certification::ExactSymmetricFamily,
        details: format!("{name} family, max residual {residual:.1e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{realize, Gauge, SolveOptions};
    use crate::polytope::catalog;
    use crate::real::F256;

    fn cube_model(s: &str) -> (CombinatorialPolyhedron, HyperbolicRealization<f64>, QuadraticModel<f64>) {
        let c = catalog::cube();
        let l = CoxeterLabeling::parse(&c, s).unwrap();
        let r = realize(&c, &l, Gauge::Auto, &SolveOptions::default()).unwrap();
        let m = quadratic_model(&system_for(&c, &r), &hyperbolic_point(&r));
        (c, r, m)
    }

    #[test]
    fn model_reproduces_residuals() {
        let (_, _, m) = cube_model("2 3 2 2 3 2 2 3 2 3 2 3");
        let t = m.point.flatten();
        let c: Vec<f64> = (0..t.len()).map(|k| ((k * 5 % 7) as f64 - 3.0) / 7.0).collect();
        let shifted: Vec<f64> = t.iter().zip(&c).map(|(a, b)| a + b).collect();
        let direct = residuals(&m.system, &VinbergPoint::from_flat(&shifted));
        for (a, b) in direct.iter().zip(m.evaluate(&c)) {
            assert!((a - b).abs() < 1e-12);
        }
        let q1 = m.quadratic(&c);
        let q3 = m.quadratic(&c.iter().map(|x| 3.0 * x).collect::<Vec<_>>());
        for (a, b) in q1.iter().zip(q3) {
            assert!((9.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn obstruction_cases() {
        let (_, _, m) = cube_model("2 3 2 2 3 2 2 3 2 3 2 3");
        let kd = kernel_data(&m);
        assert_eq!(kd.kernel.len(), 1);
        assert!(!second_order_obstruction(&m, &kd.kernel[0]).is_obstructed());
        assert!(!second_order_obstruction(&m, &vec![0.0; 24]).is_obstructed());
        let (_, _, m) = cube_model("2 3 2 2 3 3 3 3 2 2 2 3");
        let kd = kernel_data(&m);
        assert!(second_order_obstruction(&m, &kd.kernel[0]).is_obstructed());
        let scaled: Vec<f64> = kd.kernel[0].iter().map(|x| -4.0 * x).collect();
        assert!(second_order_obstruction(&m, &scaled).is_obstructed());
    }

    #[test]
    fn prism_family_is_exact() {
        for n in [5, 6, 9] {
            let fam = symmetric_slice_prism::<F256>(n).unwrap();
            assert!(family_max_residual(&fam, 0.1, 20) < 1e-60);
            let base = fam.point(&F256::zero());
            let t = hyperbolic_point(&fam.realization);
            for (a, b) in base.flatten().iter().zip(t.flatten()) {
                assert!((a.clone() - b).abs().to_f64() < 1e-70);
            }
        }
        assert!(symmetric_slice_prism::<f64>(4).is_err());
    }

    #[test]
    fn prism_curve_matches_family() {
        let fam = symmetric_slice_prism::<f64>(6).unwrap();
        let p = catalog::prism(6).unwrap();
        let s = system_for(&p, &fam.realization);
        let t = hyperbolic_point(&fam.realization);
        let tangent: Vec<f64> =
            fam.point(&1e-6).flatten().iter().zip(fam.point(&-1e-6).flatten()).map(|(a, b)| (a - b) / 2e-6).collect();
        let track = curve_track(&s, &t, &tangent, &[0.05, 0.025]);
        assert!(track.success);
        for step in &track.steps {
            let x = &step.point;
            let on_family = fam.point(&x[3]).flatten();
            let gap = x.iter().zip(&on_family).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-9, "{gap}");
        }
    }

    #[test]
    fn do13_family_is_exact() {
        let p = catalog::dodecahedron();
        let l = CoxeterLabeling::parse(&p, "2 3 2 3 3 3 3 3 3 2 3 3 2 2 3 2 3 3 3 2 3 2 3 3 3 2 3 3 2 3").unwrap();
        let fam = symmetric_slice_do13::<F256>(&p, &l).expect("do13 structure");
        assert!(family_max_residual(&fam, 0.05, 20) < 1e-60);
        assert!(family_spread(&fam, 0.05) > 1e-3);
        let base = fam.point(&fam.base_parameter()).flatten();
        let t = hyperbolic_point(&fam.realization).flatten();
        for (a, b) in base.iter().zip(&t) {
            assert!((a.clone() - b.clone()).abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn cone_dimensions() {
        for (s, kernel, dim) in [
            ("2 3 2 2 3 3 3 3 2 3 2 3", 2, 1),
            ("2 3 2 3 2 3 2 3 2 3 2 3", 1, 0),
            ("2 3 2 3 3 3 3 3 2 3 2 3", 3, 2),
            ("2 3 2 2 3 2 2 3 2 3 2 3", 1, 1),
        ] {
            let (_, _, m) = cube_model(s);
            let cone = cone_dimension(&m).unwrap();
            assert_eq!((cone.kernel_dim, cone.dimension), (kernel, dim), "{s}");
        }
    }
}
