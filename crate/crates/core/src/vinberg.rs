//! Vinberg's polynomial system for reflection vectors with fixed face
//! functionals, the hyperbolic point, reflections and Cartan matrix checks.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::{flip_time, HyperbolicRealization, Vec4};
use crate::linalg::{dot, symmetric_eigen, Mat};
use crate::polytope::{CombinatorialPolyhedron, CoxeterLabeling};
use crate::real::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VinbergError {
    #[error("alpha(b) = {0} is not 2")]
    NotNormalized(f64),
}

/// One polynomial equation of the system (faces 0-based, `i < j` as in the
/// edge list).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    /// `alpha_i(b_i) = 2`.
    Normalize(usize),
    /// `alpha_i(b_j) alpha_j(b_i) = 4 cos^2(pi/n)` for an edge of order `n > 2`.
    Product { i: usize, j: usize, order: u32 },
    /// `alpha_i(b_j) = 0`.
    Zero1 { i: usize, j: usize },
    /// `alpha_j(b_i) = 0`.
    Zero2 { i: usize, j: usize },
}

#[derive(Clone, Debug)]
pub struct VinbergSystem<T: Real> {
    pub num_faces: usize,
    /// Coordinate vectors of the face functionals, evaluated by dot product.
    pub alphas: Vec<Vec4<T>>,
    pub equations: Vec<Equation>,
    /// Right-hand side per equation.
    pub rhs: Vec<T>,
}

impl<T: Real> VinbergSystem<T> {
    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn num_variables(&self) -> usize {
        4 * self.num_faces
    }

    /// `a_ij = alpha_i(b_j)`.
    pub fn entry(&self, point: &VinbergPoint<T>, i: usize, j: usize) -> T {
        dot(&self.alphas[i], &point.b[j])
    }

    pub fn rescaled(&self, d: &[T]) -> Self {
        let alphas = self.alphas.iter().zip(d).map(|(a, s)| a.clone().map(|x| x * s.clone())).collect();
        VinbergSystem { alphas, ..self.clone() }
    }
}

/// Reflection vectors `b_i`, one per face.
#[derive(Clone, Debug, PartialEq)]
pub struct VinbergPoint<T: Real> {
    pub b: Vec<Vec4<T>>,
}

impl<T: Real> VinbergPoint<T> {
    pub fn flatten(&self) -> Vec<T> {
        self.b.iter().flat_map(|v| v.iter().cloned()).collect()
    }

    pub fn from_flat(x: &[T]) -> Self {
        VinbergPoint {
            b: x.chunks(4).map(|c| [c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()]).collect(),
        }
    }

    pub fn zero(faces: usize) -> Self {
        VinbergPoint { b: vec![[T::zero(), T::zero(), T::zero(), T::zero()]; faces] }
    }

    pub fn rescaled(&self, d: &[T]) -> Self {
        VinbergPoint { b: self.b.iter().zip(d).map(|(v, s)| v.clone().map(|x| x / s.clone())).collect() }
    }
}

/// Equations in a fixed order: one normalization per face, then per edge in
/// table order either a product equation or the pair `Zero2`, `Zero1`.
pub fn build_system<T: Real>(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    normals: &[Vec4<T>],
) -> VinbergSystem<T> {
    let f = p.num_faces();
    let mut equations: Vec<Equation> = (0..f).map(Equation::Normalize).collect();
    let mut rhs = vec![T::from_f64(2.0); f];
    for (e, &(a, b)) in p.edges.iter().enumerate() {
        let (i, j) = (a.min(b), a.max(b));
        let n = l.orders[e];
        if n == 2 {
            equations.push(Equation::Zero2 { i, j });
            equations.push(Equation::Zero1 { i, j });
            rhs.push(T::zero());
            rhs.push(T::zero());
        } else {
            let c = T::cos_pi_over(n);
            equations.push(Equation::Product { i, j, order: n });
            rhs.push(T::from_f64(4.0) * c.clone() * c);
        }
    }
    VinbergSystem { num_faces: f, alphas: normals.iter().map(flip_time).collect(), equations, rhs }
}

pub fn system_for<T: Real>(p: &CombinatorialPolyhedron, r: &HyperbolicRealization<T>) -> VinbergSystem<T> {
    build_system(p, &r.labeling, &r.normals)
}

/// `b_i = 2 nu_i`.
pub fn hyperbolic_point<T: Real>(r: &HyperbolicRealization<T>) -> VinbergPoint<T> {
    let two = T::from_f64(2.0);
    VinbergPoint { b: r.normals.iter().map(|v| v.clone().map(|x| x * two.clone())).collect() }
}

/// Equation values minus right-hand sides, in equation order.
pub fn residuals<T: Real>(s: &VinbergSystem<T>, point: &VinbergPoint<T>) -> Vec<T> {
    s.equations
        .iter()
        .zip(&s.rhs)
        .map(|(eq, rhs)| {
            let v = match *eq {
                Equation::Normalize(i) => s.entry(point, i, i),
                Equation::Product { i, j, .. } => s.entry(point, i, j) * s.entry(point, j, i),
                Equation::Zero1 { i, j } => s.entry(point, i, j),
                Equation::Zero2 { i, j } => s.entry(point, j, i),
            };
            v - rhs.clone()
        })
        .collect()
}

pub fn max_residual<T: Real>(s: &VinbergSystem<T>, point: &VinbergPoint<T>) -> T {
    residuals(s, point).into_iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// `R = Id - alpha (x) b`, i.e. `R x = x - alpha(x) b`.
pub fn reflection_matrix<T: Real>(alpha: &Vec4<T>, b: &Vec4<T>) -> Result<Mat<T>, VinbergError> {
    let ab = dot(alpha, b);
    if (ab.clone() - T::from_f64(2.0)).abs() > T::from_f64(1e-9) {
        return Err(VinbergError::NotNormalized(ab.to_f64()));
    }
    let mut r: Mat<T> = Mat::identity(4);
    for i in 0..4 {
        for j in 0..4 {
            r[(i, j)] = r[(i, j)].clone() - b[i].clone() * alpha[j].clone();
        }
    }
    Ok(r)
}

pub fn cartan_matrix<T: Real>(s: &VinbergSystem<T>, point: &VinbergPoint<T>) -> Mat<T> {
    let f = s.num_faces;
    let mut a = Mat::zeros(f, f);
    for i in 0..f {
        for j in 0..f {
            a[(i, j)] = s.entry(point, i, j);
        }
    }
    a
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanReport {
    pub c1: bool,
    pub c2: bool,
    /// Equivalent to a symmetric matrix under positive diagonal conjugation.
    pub symmetrizable: bool,
    /// (positive, negative, zero) eigenvalues of the symmetrization.
    pub signature: (usize, usize, usize),
    pub indecomposable: bool,
    /// Signature convention: the Lorentz form is (-,+,+,+), so the hyperbolic
    /// signature reads (3 positive, 1 negative).
    pub hyperbolic: bool,
    pub failures: Vec<String>,
}

/// Conditions (C1), (C2), and the hyperbolicity test: indecomposable and
/// equivalent to a symmetric matrix with one negative and three positive
/// eigenvalues.
pub fn cartan_checks<T: Real>(a: &Mat<T>, p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> CartanReport {
    let f = a.rows;
    let m = a.map(|x| x.to_f64());
    let tol = 1e-8;
    let mut failures = Vec::new();
    let mut c1 = true;
    let mut c2 = true;
    for i in 0..f {
        if (m[(i, i)] - 2.0).abs() > tol {
            c2 = false;
            failures.push(format!("a({0},{0}) != 2", i + 1));
        }
        for j in 0..f {
            if i == j {
                continue;
            }
            if m[(i, j)] > tol {
                c1 = false;
                failures.push(format!("a({},{}) > 0", i + 1, j + 1));
            }
            if (m[(i, j)].abs() <= tol) != (m[(j, i)].abs() <= tol) {
                c1 = false;
                failures.push(format!("a({0},{1}) and a({1},{0}) differ in vanishing", i + 1, j + 1));
            }
            if i < j {
                let prod = m[(i, j)] * m[(j, i)];
                let ok = match l.order(p, i, j) {
                    Some(n) => {
                        let c = (std::f64::consts::PI / n as f64).cos();
                        (prod - 4.0 * c * c).abs() <= 1e-7 || (n == 2 && prod.abs() <= tol)
                    }
                    None => prod >= 4.0 - 1e-7,
                };
                if !ok {
                    c2 = false;
                    failures.push(format!("a({0},{1}) a({1},{0}) = {2}", i + 1, j + 1, prod));
                }
            }
        }
    }
    // Symmetrization s_ij = -sqrt(a_ij a_ji) and the diagonal scaling d with
    // a_ij = d_i s_ij / d_j, built along a spanning tree.
    let mut s = Mat::<f64>::zeros(f, f);
    for i in 0..f {
        for j in 0..f {
            s[(i, j)] = if i == j { m[(i, i)] } else { -(m[(i, j)] * m[(j, i)]).max(0.0).sqrt() };
        }
    }
    let mut d = vec![f64::NAN; f];
    d[0] = 1.0;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..f {
            if d[j].is_nan() && m[(i, j)].abs() > tol {
                d[j] = d[i] * s[(i, j)] / m[(i, j)];
                stack.push(j);
            }
        }
    }
    let indecomposable = d.iter().all(|x| !x.is_nan());
    if !indecomposable {
        failures.push("Cartan matrix is decomposable".into());
    }
    let mut symmetrizable = indecomposable;
    if indecomposable {
        for i in 0..f {
            for j in 0..f {
                let want = d[i] * s[(i, j)] / d[j];
                if (want - m[(i, j)]).abs() > 1e-7 * (1.0 + m[(i, j)].abs()) {
                    symmetrizable = false;
                }
            }
        }
        if !symmetrizable {
            failures.push("not equivalent to a symmetric matrix".into());
        }
    }
    let (eig, _) = symmetric_eigen(&s);
    let scale = eig.iter().fold(0.0f64, |x, y| x.max(y.abs()));
    let pos = eig.iter().filter(|&&x| x > scale * 1e-9).count();
    let neg = eig.iter().filter(|&&x| x < -scale * 1e-9).count();
    let signature = (pos, neg, f - pos - neg);
    let hyperbolic = c1 && c2 && symmetrizable && pos == 3 && neg == 1;
    if symmetrizable && !(pos == 3 && neg == 1) {
        failures.push(format!("signature {signature:?}"));
    }
    CartanReport { c1, c2, symmetrizable, signature, indecomposable, hyperbolic, failures }
}
