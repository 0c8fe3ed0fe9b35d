//! Lorentzian unit normals of hyperbolic Coxeter polyhedra: Gauss-Newton on
//! the Gram equations, closed-form realizations, angle continuation, gauge
//! fixing by isometries, and validation of the Gram matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{lstsq, solve, svd, symmetric_eigen, Mat};
use crate::polytope::{CombinatorialPolyhedron, CoxeterLabeling};
use crate::real::{convert, Real};

pub type Vec4<T> = [T; 4];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("no vertex with edge orders (2,2,3) or (2,2,2)")]
    NoStandardVertex,
    #[error("Gauss-Newton did not converge (best residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("converged to a non-convex branch: {0}")]
    WrongBranch(String),
    #[error("Gram validation failed: {0}")]
    ValidationFailed(String),
    #[error("closed-form prism realization needs n >= 5, got {0}")]
    UnsupportedN(usize),
    #[error("continuation lost the solution at parameter {at}")]
    PathFailure { at: f64 },
    #[error("malformed realization record: {0}")]
    Record(String),
    #[error("faces {0:?} do not share a vertex")]
    BadAnchor([usize; 3]),
}

/// `<x,y> = -x1 y1 + x2 y2 + x3 y3 + x4 y4`.
pub fn lorentz_product<T: Real>(x: &Vec4<T>, y: &Vec4<T>) -> T {
    -(x[0].clone() * y[0].clone()) + x[1].clone() * y[1].clone() + x[2].clone() * y[2].clone()
        + x[3].clone() * y[3].clone()
}

/// `J x` with `J = diag(-1, 1, 1, 1)`.
pub fn flip_time<T: Real>(x: &Vec4<T>) -> Vec4<T> {
    [-x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()]
}

pub fn apply<T: Real>(m: &Mat<T>, x: &Vec4<T>) -> Vec4<T> {
    let y = m.mul_vec(x);
    [y[0].clone(), y[1].clone(), y[2].clone(), y[3].clone()]
}

/// A vector Lorentz-orthogonal to `a`, `b`, `c` (generalized cross product).
pub fn lorentz_normal<T: Real>(a: &Vec4<T>, b: &Vec4<T>, c: &Vec4<T>) -> Vec4<T> {
    let rows = [flip_time(a), flip_time(b), flip_time(c)];
    let minor = |skip: usize| -> T {
        let cols: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
        let m = |r: usize, k: usize| rows[r][cols[k]].clone();
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    [-minor(0), minor(1), -minor(2), minor(3)]
}

pub fn gram_matrix<T: Real>(normals: &[Vec4<T>]) -> Mat<T> {
    let f = normals.len();
    let mut g = Mat::zeros(f, f);
    for i in 0..f {
        for j in 0..f {
            g[(i, j)] = lorentz_product(&normals[i], &normals[j]);
        }
    }
    g
}

/// Target Gram entries `-cos(pi/n)` per edge.
pub fn edge_targets<T: Real>(l: &CoxeterLabeling) -> Vec<T> {
    l.orders.iter().map(|&n| -T::cos_pi_over(n)).collect()
}

/// Defects of the hyperbolic equations: unit length per face, then one Gram
/// entry per edge.
pub fn hyperbolic_residuals<T: Real>(p: &CombinatorialPolyhedron, targets: &[T], normals: &[Vec4<T>]) -> Vec<T> {
    let mut r: Vec<T> = normals.iter().map(|v| lorentz_product(v, v) - T::one()).collect();
    for (e, &(a, b)) in p.edges.iter().enumerate() {
        r.push(lorentz_product(&normals[a], &normals[b]) - targets[e].clone());
    }
    r
}

fn max_abs<T: Real>(v: &[T]) -> T {
    if v.iter().any(|x| !x.is_finite()) {
        return T::from_f64(f64::INFINITY);
    }
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

#[derive(Clone, Debug)]
pub struct HyperbolicRealization<T: Real> {
    pub polyhedron: String,
    pub labeling: CoxeterLabeling,
    pub normals: Vec<Vec4<T>>,
    pub gram: Mat<T>,
    pub residual: T,
    pub precision: usize,
    /// Faces pinned by the gauge, if any.
    pub anchor: Option<Vec<usize>>,
}

impl<T: Real> HyperbolicRealization<T> {
    pub fn new(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, normals: Vec<Vec4<T>>) -> Self {
        let residual = max_abs(&hyperbolic_residuals(p, &edge_targets(l), &normals));
        HyperbolicRealization {
            polyhedron: p.name.clone(),
            labeling: l.clone(),
            gram: gram_matrix(&normals),
            normals,
            residual,
            precision: T::BITS,
            anchor: None,
        }
    }

    pub fn num_faces(&self) -> usize {
        self.normals.len()
    }

    /// Image under a Lorentz transformation.
    pub fn transformed(&self, m: &Mat<T>) -> Self {
        let normals: Vec<_> = self.normals.iter().map(|v| apply(m, v)).collect();
        HyperbolicRealization { gram: gram_matrix(&normals), normals, ..self.clone() }
    }

    pub fn convert<U: Real>(&self) -> HyperbolicRealization<U> {
        let normals: Vec<Vec4<U>> = self
            .normals
            .iter()
            .map(|v| [convert(&v[0]), convert(&v[1]), convert(&v[2]), convert(&v[3])])
            .collect();
        HyperbolicRealization {
            polyhedron: self.polyhedron.clone(),
            labeling: self.labeling.clone(),
            gram: gram_matrix(&normals),
            residual: convert(&self.residual),
            precision: U::BITS,
            anchor: self.anchor.clone(),
            normals,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Continuation steps along the angle path.
    pub steps: usize,
    /// Random restarts when no base realization is known.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-13, max_iter: 60, steps: 10, restarts: 200, seed: 7 }
    }
}

impl SolveOptions {
    fn tol_for<T: Real>(&self) -> T {
        let eps = T::epsilon().to_f64();
        if eps < 1e-20 {
            T::epsilon() * T::from_f64(1e6)
        } else {
            T::from_f64(self.tol.max(eps * 64.0))
        }
    }
}

/// Gauss-Newton on the hyperbolic equations with the normals of `pinned`
/// faces held fixed.
pub fn gauss_newton<T: Real>(
    p: &CombinatorialPolyhedron,
    targets: &[T],
    start: &[Vec4<T>],
    pinned: &[usize],
    tol: &T,
    max_iter: usize,
) -> Result<Vec<Vec4<T>>, HyperbolicError> {
    let f = p.num_faces();
    let free: Vec<usize> = (0..f).filter(|i| !pinned.contains(i)).collect();
    let mut col_of = vec![usize::MAX; f];
    for (k, &i) in free.iter().enumerate() {
        col_of[i] = k;
    }
    let mut nu = start.to_vec();
    let mut best = T::from_f64(f64::INFINITY);
    let mut stall = 0;
    for _ in 0..max_iter {
        let r = hyperbolic_residuals(p, targets, &nu);
        let res = max_abs(&r);
        if !res.is_finite() {
            break;
        }
        if res < *tol {
            return Ok(nu);
        }
        if res < best.clone() * T::from_f64(0.5) {
            best = res;
            stall = 0;
        } else {
            stall += 1;
            if res < best {
                best = res;
            }
            if stall > 6 {
                break;
            }
        }
        let mut jac = Mat::zeros(r.len(), 4 * free.len());
        let put = |jac: &mut Mat<T>, row: usize, face: usize, v: Vec4<T>| {
            if col_of[face] != usize::MAX {
                for k in 0..4 {
                    jac[(row, 4 * col_of[face] + k)] = jac[(row, 4 * col_of[face] + k)].clone() + v[k].clone();
                }
            }
        };
        for i in 0..f {
            let two = T::from_f64(2.0);
            let v = flip_time(&nu[i]).map(|x| x * two.clone());
            put(&mut jac, i, i, v);
        }
        for (e, &(a, b)) in p.edges.iter().enumerate() {
            put(&mut jac, f + e, a, flip_time(&nu[b]));
            put(&mut jac, f + e, b, flip_time(&nu[a]));
        }
        let rhs: Vec<T> = r.iter().map(|x| -x.clone()).collect();
        let cutoff = T::epsilon() * T::from_f64(1e3) * jac.max_abs();
        let dx = lstsq(&jac, &rhs, &cutoff);
        for (k, &i) in free.iter().enumerate() {
            for c in 0..4 {
                nu[i][c] = nu[i][c].clone() + dx[4 * k + c].clone();
            }
        }
    }
    Err(HyperbolicError::NoConvergence { residual: best.to_f64() })
}

/// Unit normals of three faces meeting at a finite vertex, placed in the
/// spacelike hyperplane `x1 = 0` by a Cholesky factorization of their Gram
/// block.
pub fn vertex_frame<T: Real>(cos_ab: &T, cos_ac: &T, cos_bc: &T) -> [Vec4<T>; 3] {
    let (gab, gac, gbc) = (-cos_ab.clone(), -cos_ac.clone(), -cos_bc.clone());
    let r10 = gab;
    let r11 = (T::one() - r10.clone() * r10.clone()).sqrt();
    let r20 = gac;
    let r21 = (gbc - r20.clone() * r10.clone()) / r11.clone();
    let r22 = (T::one() - r20.clone() * r20.clone() - r21.clone() * r21.clone()).max(T::zero()).sqrt();
    let z = T::zero;
    [
        [z(), T::one(), z(), z()],
        [z(), r10, r11, z()],
        [z(), r20, r21, r22],
    ]
}

/// Gauge anchor: three faces at a vertex and their prescribed normals.
#[derive(Clone, Debug)]
pub struct Anchor<T: Real> {
    pub faces: [usize; 3],
    pub normals: [Vec4<T>; 3],
}

/// The standard placement at a vertex with orders (2,2,3) or (2,2,2): the
/// face orthogonal to both others gets `(0,1,0,0)`, the next `(0,0,1,0)`.
pub fn seed_standard<T: Real>(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Result<Anchor<T>, HyperbolicError> {
    for wanted in [[2, 2, 3], [2, 2, 2]] {
        for faces in &p.vertices {
            if faces.len() != 3 {
                continue;
            }
            let ord = |a: usize, b: usize| l.order(p, a, b).unwrap_or(0);
            for rot in 0..3 {
                let (a, b, c) = (faces[rot], faces[(rot + 1) % 3], faces[(rot + 2) % 3]);
                if ord(a, b) == 2 && ord(a, c) == 2 && ord(b, c) == wanted[2] {
                    let frame = vertex_frame(&T::zero(), &T::zero(), &T::cos_pi_over(ord(b, c)));
                    return Ok(Anchor { faces: [a, b, c], normals: frame });
                }
            }
        }
    }
    Err(HyperbolicError::NoStandardVertex)
}

fn inverse4<T: Real>(m: &Mat<T>) -> Option<Mat<T>> {
    let mut inv = Mat::zeros(4, 4);
    for j in 0..4 {
        let mut e = vec![T::zero(); 4];
        e[j] = T::one();
        let x = solve(m, &e)?;
        for i in 0..4 {
            inv[(i, j)] = x[i].clone();
        }
    }
    Some(inv)
}

fn unit_timelike<T: Real>(n: Vec4<T>) -> Vec4<T> {
    let q = -lorentz_product(&n, &n);
    let s = q.abs().sqrt();
    let sign = if n[0] < T::zero() { -T::one() } else { T::one() };
    n.map(|x| x * sign.clone() / s.clone())
}

/// The Lorentz transformations sending `from[k]` to `to[k]` (k = 0..3); the
/// time-orientation preserving one comes first. Requires equal Gram blocks.
pub fn anchor_isometries<T: Real>(from: &[Vec4<T>; 3], to: &[Vec4<T>; 3]) -> Vec<Mat<T>> {
    let na = unit_timelike(lorentz_normal(&from[0], &from[1], &from[2]));
    let nb = unit_timelike(lorentz_normal(&to[0], &to[1], &to[2]));
    let mut out = Vec::new();
    for sign in [T::one(), -T::one()] {
        let mut a = Mat::zeros(4, 4);
        let mut b = Mat::zeros(4, 4);
        for i in 0..4 {
            for k in 0..3 {
                a[(i, k)] = from[k][i].clone();
                b[(i, k)] = to[k][i].clone();
            }
            a[(i, 3)] = na[i].clone();
            b[(i, 3)] = sign.clone() * nb[i].clone();
        }
        if let Some(ai) = inverse4(&a) {
            out.push(b.mul(&ai));
        }
    }
    out
}

/// Moves a realization into the gauge of `anchor`, preferring a transform
/// after which every normal has non-negative first coordinate.
pub fn apply_anchor<T: Real>(r: &HyperbolicRealization<T>, anchor: &Anchor<T>) -> HyperbolicRealization<T> {
    let from = anchor.faces.map(|i| r.normals[i].clone());
    let cands: Vec<_> = anchor_isometries(&from, &anchor.normals).iter().map(|m| r.transformed(m)).collect();
    let mut pick = cands
        .iter()
        .find(|c| first_coordinates_nonnegative(&c.normals))
        .cloned()
        .unwrap_or_else(|| cands[0].clone());
    pick.anchor = Some(anchor.faces.to_vec());
    pick
}

pub fn first_coordinates_nonnegative<T: Real>(normals: &[Vec4<T>]) -> bool {
    let tol = T::from_f64(-1e-9);
    normals.iter().all(|v| v[0] >= tol)
}

/// Normals of a regular polyhedron with outward directions `dirs` and all
/// dihedral angles `angle`: `nu = (x, y u)` with `-x^2 + y^2 cos(phi) = -cos(angle)`
/// where `cos(phi)` is the dot product of adjacent directions.
fn regular_normals(dirs: &[[f64; 3]], adjacent_dot: f64, angle: f64) -> Vec<Vec4<f64>> {
    let x2 = (adjacent_dot + angle.cos()) / (1.0 - adjacent_dot);
    let (x, y) = (x2.sqrt(), (1.0 + x2).sqrt());
    dirs.iter().map(|u| [x, y * u[0], y * u[1], y * u[2]]).collect()
}

/// Base cube realization with every dihedral angle `2 pi / 5`.
pub fn regular_cube() -> (Vec<Vec4<f64>>, f64) {
    let angle = 2.0 * std::f64::consts::PI / 5.0;
    let dirs = [[0.0, 0.0, 1.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]];
    (regular_normals(&dirs, 0.0, angle), angle)
}

/// Base right-angled dodecahedron, matched to the catalog face numbering.
pub fn regular_dodecahedron(p: &CombinatorialPolyhedron) -> Option<(Vec<Vec4<f64>>, f64)> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let norm = (1.0 + phi * phi).sqrt();
    let mut dirs = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            dirs.push([0.0, s1 / norm, s2 * phi / norm]);
            dirs.push([s1 / norm, s2 * phi / norm, 0.0]);
            dirs.push([s2 * phi / norm, 0.0, s1 / norm]);
        }
    }
    let adj: Vec<Vec<bool>> = dirs
        .iter()
        .map(|u| dirs.iter().map(|w| u != w && u[0] * w[0] + u[1] * w[1] + u[2] * w[2] > 0.3).collect())
        .collect();
    let map = match_faces(p, &adj, |_, _| true)?;
    let dirs: Vec<[f64; 3]> = map.iter().map(|&k| dirs[k]).collect();
    let angle = std::f64::consts::FRAC_PI_2;
    Some((regular_normals(&dirs, 1.0 / 5f64.sqrt(), angle), angle))
}

/// A bijection `faces of p -> 0..n` carrying adjacency onto `other_adj`,
/// with `edge_ok(face_pair, other_pair)` constraining matched edges.
pub fn match_faces(
    p: &CombinatorialPolyhedron,
    other_adj: &[Vec<bool>],
    edge_ok: impl Fn((usize, usize), (usize, usize)) -> bool,
) -> Option<Vec<usize>> {
    let f = p.num_faces();
    if other_adj.len() != f {
        return None;
    }
    fn extend(
        p: &CombinatorialPolyhedron,
        other: &[Vec<bool>],
        ok: &dyn Fn((usize, usize), (usize, usize)) -> bool,
        order: &[usize],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let depth = map.iter().filter(|&&m| m != usize::MAX).count();
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        for j in 0..other.len() {
            if used[j] {
                continue;
            }
            let fits = (0..p.num_faces()).filter(|&h| map[h] != usize::MAX).all(|h| {
                let a = p.adjacent(x, h);
                a == other[j][map[h]] && (!a || ok((x, h), (j, map[h])))
            });
            if fits {
                map[x] = j;
                used[j] = true;
                if extend(p, other, ok, order, map, used) {
                    return true;
                }
                map[x] = usize::MAX;
                used[j] = false;
            }
        }
        false
    }
    // Breadth-first face order keeps the partial map connected.
    let mut order = vec![0];
    let mut seen = vec![false; f];
    seen[0] = true;
    let mut k = 0;
    while k < order.len() {
        let x = order[k];
        for y in 0..f {
            if !seen[y] && p.adjacent(x, y) {
                seen[y] = true;
                order.push(y);
            }
        }
        k += 1;
    }
    let mut map = vec![usize::MAX; f];
    let mut used = vec![false; f];
    if extend(p, other_adj, &edge_ok, &order, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Closed-form prism over an n-gon with side edges of order 2 and cap edges
/// of order 3. Side faces are `L^k nu_1`; the normals are the time-reversal
/// of the ones with negative first coordinates, which have the same Gram
/// matrix.
pub fn prism_normals<T: Real>(n: usize) -> Result<Vec<Vec4<T>>, HyperbolicError> {
    if n < 5 {
        return Err(HyperbolicError::UnsupportedN(n));
    }
    let (c, s) = T::cos_sin_pi(2, n as i64);
    let one = T::one();
    let first = [(c.clone() / (one.clone() - c.clone())).sqrt(), (one.clone() / (one.clone() - c.clone())).sqrt(), T::zero(), T::zero()];
    let rot = rotation(&c, &s, T::one());
    let mut normals = vec![first];
    for k in 1..n {
        let prev = normals[k - 1].clone();
        normals.push(apply(&rot, &prev));
    }
    let four_c = T::from_f64(4.0) * c.clone();
    let t0 = ((one.clone() - c.clone()) / four_c.clone()).sqrt();
    let t3 = ((one + T::from_f64(3.0) * c) / four_c).sqrt();
    normals.push([t0.clone(), T::zero(), T::zero(), t3.clone()]);
    normals.push([t0, T::zero(), T::zero(), -t3]);
    Ok(normals)
}

/// The rotation `L` about the `x4` axis by the angle with cosine `c`, sine
/// `s`, with `last` as its (4,4) entry.
pub fn rotation<T: Real>(c: &T, s: &T, last: T) -> Mat<T> {
    let z = T::zero;
    Mat::from_rows(&[
        vec![T::one(), z(), z(), z()],
        vec![z(), c.clone(), -s.clone(), z()],
        vec![z(), s.clone(), c.clone(), z()],
        vec![z(), z(), z(), last],
    ])
}

pub fn prism_labeling(p: &CombinatorialPolyhedron, n: usize) -> CoxeterLabeling {
    let mut orders = vec![3; p.num_edges()];
    for o in orders.iter_mut().take(n) {
        *o = 2;
    }
    CoxeterLabeling { orders }
}

pub fn prism_realization<T: Real>(n: usize) -> Result<HyperbolicRealization<T>, HyperbolicError> {
    let normals = prism_normals::<T>(n)?;
    let p = crate::polytope::catalog::prism(n).map_err(|e| HyperbolicError::Record(e.to_string()))?;
    let l = prism_labeling(&p, n);
    Ok(HyperbolicRealization::new(&p, &l, normals))
}

/// Constants of the rotationally symmetric dodecahedron: `(c, s, d, L)` with
/// `c = cos(pi/5)`, `s = sin(pi/5)`.
pub struct Do13Constants<T: Real> {
    pub c: T,
    pub s: T,
    pub d: T,
    pub rot: Mat<T>,
}

pub fn do13_constants<T: Real>() -> Do13Constants<T> {
    let (c, s) = T::cos_sin_pi(1, 5);
    let one = T::one();
    let three = T::from_f64(3.0);
    let d = ((one.clone() + c.clone()) / (one.clone() - c.clone())).sqrt()
        / ((T::from_f64(2.0) * c.clone() + three.clone() * c.clone() * c.clone()).sqrt()
            + (three * c.clone() * c.clone() - one).sqrt());
    let rot = rotation(&c, &s, -T::one());
    Do13Constants { c, s, d, rot }
}

/// Normals of the symmetric dodecahedron in its own numbering: ring faces
/// 0..9 with `nu_{k+1} = L^k nu_1`, axis faces 10 (top) and 11 (bottom).
pub fn do13_normals<T: Real>() -> Vec<Vec4<T>> {
    let k = do13_constants::<T>();
    let (c, s, d) = (k.c.clone(), k.s.clone(), k.d.clone());
    let one = T::one();
    let two = T::from_f64(2.0);
    let four = T::from_f64(4.0);
    let first = [
        (c.clone() / (four.clone() - four.clone() * c.clone())).sqrt(),
        one.clone() / (two.sqrt() * s),
        T::zero(),
        ((two + T::from_f64(3.0) * c.clone()) / (four.clone() + four * c)).sqrt(),
    ];
    let mut normals = vec![first];
    for i in 1..10 {
        let prev = normals[i - 1].clone();
        normals.push(apply(&k.rot, &prev));
    }
    let h = (d.clone() * d.clone() - one.clone()).sqrt();
    normals.push([one.clone() / h.clone(), T::zero(), T::zero(), d.clone() / h.clone()]);
    normals.push([one / h.clone(), T::zero(), T::zero(), -(d / h)]);
    normals
}

/// Adjacency and orders of the symmetric dodecahedron in its own numbering.
pub fn do13_structure() -> (Vec<Vec<bool>>, Vec<Vec<u32>>) {
    let mut adj = vec![vec![false; 12]; 12];
    let mut ord = vec![vec![0u32; 12]; 12];
    let mut link = |a: usize, b: usize, n: u32| {
        adj[a][b] = true;
        adj[b][a] = true;
        ord[a][b] = n;
        ord[b][a] = n;
    };
    for k in 0..10 {
        link(k, (k + 1) % 10, 3);
        link(k, (k + 2) % 10, 2);
        link(k, if k % 2 == 0 { 10 } else { 11 }, 3);
    }
    (adj, ord)
}

/// Face map from the catalog dodecahedron with the do13 labeling onto the
/// symmetric numbering.
pub fn do13_face_map(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Option<Vec<usize>> {
    let (adj, ord) = do13_structure();
    match_faces(p, &adj, |(a, b), (x, y)| l.order(p, a, b) == Some(ord[x][y]))
}

/// The symmetric dodecahedron realization in catalog numbering.
pub fn do13_realization<T: Real>(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
) -> Option<(HyperbolicRealization<T>, Vec<usize>)> {
    let map = do13_face_map(p, l)?;
    let sym = do13_normals::<T>();
    let normals = map.iter().map(|&k| sym[k].clone()).collect();
    Some((HyperbolicRealization::new(p, l, normals), map))
}

/// Gauge used for dodecahedra: the (2,3,3) vertices of face 11 (catalog
/// numbering, 1-based) in a fixed order. The face opposite the order-2 edge
/// goes to the symmetric dodecahedron's axis face, the other two to a pair of
/// ring faces meeting at a right angle.
pub fn dodecahedron_anchors<T: Real>(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Vec<Anchor<T>> {
    let sym = do13_normals::<T>();
    let center = 10;
    let ring: Vec<usize> = [7, 9, 5, 7, 3, 5, 1, 3, 9, 1].iter().map(|x: &usize| x - 1).collect();
    let ord = |x: usize, y: usize| l.order(p, x, y);
    let mut out = Vec::new();
    for pair in ring.chunks(2) {
        let (x, y) = (pair[0], pair[1]);
        if !p.adjacent(x, y) {
            continue;
        }
        let triple = [(center, x, y), (x, center, y), (y, center, x)];
        for (top, a, b) in triple {
            if ord(top, a) == Some(3) && ord(top, b) == Some(3) && ord(a, b) == Some(2) {
                out.push(Anchor { faces: [top, a, b], normals: [sym[10].clone(), sym[0].clone(), sym[2].clone()] });
            }
        }
    }
    out
}

/// Anchor at three faces sharing a vertex: the dodecahedron anchor with
/// these faces when there is one, otherwise their vertex frame.
pub fn explicit_anchor<T: Real>(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    faces: [usize; 3],
) -> Result<Anchor<T>, HyperbolicError> {
    let at_vertex = faces.iter().all(|&f| f < p.num_faces())
        && p.vertices.iter().any(|v| faces.iter().all(|f| v.contains(f)));
    if !at_vertex {
        return Err(HyperbolicError::BadAnchor(faces));
    }
    if p.name == "dodecahedron" {
        if let Some(a) = dodecahedron_anchors::<T>(p, l).into_iter().find(|a| a.faces == faces) {
            return Ok(a);
        }
    }
    let cos = |a: usize, b: usize| T::cos_pi_over(l.order(p, a, b).expect("faces share a vertex"));
    let normals = vertex_frame(&cos(faces[0], faces[1]), &cos(faces[0], faces[2]), &cos(faces[1], faces[2]));
    Ok(Anchor { faces, normals })
}

/// Moves a dodecahedron realization into the anchored gauge: the first
/// admissible anchor after which all first coordinates are non-negative.
pub fn apply_dodecahedron_gauge<T: Real>(
    p: &CombinatorialPolyhedron,
    r: &HyperbolicRealization<T>,
) -> Option<HyperbolicRealization<T>> {
    let anchors = dodecahedron_anchors::<T>(p, &r.labeling);
    let mut fallback = None;
    for anchor in &anchors {
        let from = anchor.faces.map(|i| r.normals[i].clone());
        for m in anchor_isometries(&from, &anchor.normals) {
            let mut c = r.transformed(&m);
            c.anchor = Some(anchor.faces.to_vec());
            if first_coordinates_nonnegative(&c.normals) {
                return Some(c);
            }
            fallback.get_or_insert(c);
        }
    }
    fallback
}

/// Angle-linear continuation in binary64 from a realization with uniform or
/// given dihedral angles to the target labeling.
pub fn continuation_solve(
    p: &CombinatorialPolyhedron,
    base: &[Vec4<f64>],
    base_angles: &[f64],
    target: &CoxeterLabeling,
    opts: &SolveOptions,
) -> Result<Vec<Vec4<f64>>, HyperbolicError> {
    let target_angles: Vec<f64> = target.orders.iter().map(|&n| std::f64::consts::PI / n as f64).collect();
    let tol = opts.tol_for::<f64>();
    let mut nu = base.to_vec();
    let mut at = 0.0f64;
    let mut step = 1.0 / opts.steps.max(1) as f64;
    while at < 1.0 {
        let next = (at + step).min(1.0);
        let targets: Vec<f64> = base_angles
            .iter()
            .zip(&target_angles)
            .map(|(a, b)| -((1.0 - next) * a + next * b).cos())
            .collect();
        match gauss_newton(p, &targets, &nu, &[], &tol, opts.max_iter) {
            Ok(sol) => {
                nu = sol;
                at = next;
                step = (step * 1.5).min(0.5);
            }
            Err(_) => {
                step /= 2.0;
                if step < 1e-4 {
                    return Err(HyperbolicError::PathFailure { at });
                }
            }
        }
    }
    Ok(nu)
}

/// Solves for the target labeling from random starting normals, keeping the
/// first solution that validates.
pub fn random_restart_solve(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    opts: &SolveOptions,
) -> Result<Vec<Vec4<f64>>, HyperbolicError> {
    let targets = edge_targets::<f64>(l);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = f64::INFINITY;
    for _ in 0..opts.restarts {
        let start: Vec<Vec4<f64>> = (0..p.num_faces())
            .map(|_| {
                let u: [f64; 3] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
                let n = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt().max(1e-3);
                let t: f64 = rng.random_range(0.0..1.5);
                let y = (1.0 + t * t).sqrt();
                [t, y * u[0] / n, y * u[1] / n, y * u[2] / n]
            })
            .collect();
        match gauss_newton(p, &targets, &start, &[], &opts.tol_for::<f64>(), opts.max_iter) {
            Ok(sol) => {
                let r = HyperbolicRealization::new(p, l, sol.clone());
                if validate_gram(p, &r).valid {
                    return Ok(sol);
                }
            }
            Err(HyperbolicError::NoConvergence { residual }) => best = best.min(residual),
            Err(_) => {}
        }
    }
    Err(HyperbolicError::NoConvergence { residual: best })
}

/// Polishes a realization at the precision of `T`, pinning the anchor faces
/// (or the first vertex when no anchor is set).
pub fn solve_normals<T: Real>(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    seed: &[Vec4<T>],
    pinned: &[usize],
    opts: &SolveOptions,
) -> Result<HyperbolicRealization<T>, HyperbolicError> {
    let targets = edge_targets::<T>(l);
    let nu = gauss_newton(p, &targets, seed, pinned, &opts.tol_for::<T>(), opts.max_iter)?;
    let mut r = HyperbolicRealization::new(p, l, nu);
    r.anchor = Some(pinned.to_vec());
    let tol = T::from_f64(1e-9);
    let f = p.num_faces();
    for i in 0..f {
        for j in 0..f {
            if i != j && r.gram[(i, j)] > tol {
                return Err(HyperbolicError::WrongBranch(format!("Gram entry ({}, {}) is positive", i + 1, j + 1)));
            }
        }
    }
    let report = validate_gram(p, &r);
    if !report.valid {
        return Err(HyperbolicError::ValidationFailed(report.failures.join("; ")));
    }
    Ok(r)
}

/// Which gauge a realization is delivered in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// Dodecahedra: the anchored (2,3,3) vertex gauge; others: the standard
    /// (2,2,3)/(2,2,2) vertex when present.
    #[default]
    Auto,
    /// The standard (2,2,3)/(2,2,2) vertex placement.
    Standard,
    /// Whatever the construction produced.
    Free,
    /// Three faces meeting at a vertex, placed by their vertex frame (or by
    /// the matching dodecahedron anchor).
    Anchored([usize; 3]),
}

/// Full binary64 realization: base construction, angle continuation, gauge.
pub fn realize(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    gauge: Gauge,
    opts: &SolveOptions,
) -> Result<HyperbolicRealization<f64>, HyperbolicError> {
    let normals = if p.name == "cube" {
        let (base, angle) = regular_cube();
        continuation_solve(p, &base, &vec![angle; p.num_edges()], l, opts)?
    } else if p.name == "dodecahedron" {
        let (base, angle) = regular_dodecahedron(p).ok_or_else(|| HyperbolicError::Record("dodecahedron match".into()))?;
        continuation_solve(p, &base, &vec![angle; p.num_edges()], l, opts)?
    } else if let Some(n) = p.name.strip_prefix("prism").and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 5) {
        let base = prism_normals::<f64>(n)?;
        let angles: Vec<f64> =
            prism_labeling(p, n).orders.iter().map(|&o| std::f64::consts::PI / o as f64).collect();
        continuation_solve(p, &base, &angles, l, opts)?
    } else {
        random_restart_solve(p, l, opts)?
    };
    let raw = HyperbolicRealization::new(p, l, normals);
    let gauged = match gauge {
        Gauge::Free => Some(raw.clone()),
        Gauge::Auto if p.name == "dodecahedron" => apply_dodecahedron_gauge(p, &raw),
        Gauge::Auto | Gauge::Standard => seed_standard::<f64>(p, l).ok().map(|a| apply_anchor(&raw, &a)),
        Gauge::Anchored(faces) => Some(apply_anchor(&raw, &explicit_anchor::<f64>(p, l, faces)?)),
    }
    .unwrap_or(raw);
    let pinned = gauged.anchor.clone().unwrap_or_default();
    let mut r = solve_normals(p, l, &gauged.normals, &pinned, opts)?;
    r.anchor = gauged.anchor;
    Ok(r)
}

/// Re-solves a binary64 realization at higher precision in the same gauge.
/// Anchor normals are rebuilt exactly when the anchor is a known placement;
/// otherwise no face is pinned and the minimum-norm step keeps the gauge.
pub fn refine<T: Real>(
    p: &CombinatorialPolyhedron,
    r: &HyperbolicRealization<f64>,
    opts: &SolveOptions,
) -> Result<HyperbolicRealization<T>, HyperbolicError> {
    let mut seed = r.convert::<T>().normals;
    let l = &r.labeling;
    let mut known: Vec<Anchor<T>> = dodecahedron_anchors::<T>(p, l);
    known.extend(seed_standard::<T>(p, l));
    if let Some(faces) = r.anchor.as_ref().and_then(|f| <[usize; 3]>::try_from(f.as_slice()).ok()) {
        known.extend(explicit_anchor::<T>(p, l, faces));
    }
    let exact = r.anchor.as_ref().and_then(|faces| known.into_iter().find(|a| a.faces.to_vec() == *faces));
    let pinned = match &exact {
        Some(a) => {
            for k in 0..3 {
                seed[a.faces[k]] = a.normals[k].clone();
            }
            a.faces.to_vec()
        }
        None => Vec::new(),
    };
    let mut out = solve_normals(p, l, &seed, &pinned, opts)?;
    out.anchor = r.anchor.clone();
    Ok(out)
}

/// How the cone of a realization was shown to meet hyperbolic space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeCertificate {
    /// Every normal has non-negative first coordinate, so `(1,0,0,0)` is inside.
    FirstCoordinates,
    /// Every vertex is a timelike point on the inner side of all faces; their
    /// centroid is an interior point.
    Vertices { interior_point: [f64; 4] },
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub valid: bool,
    pub failures: Vec<String>,
    pub signature: (usize, usize, usize),
    pub certificate: ConeCertificate,
}

/// Checks that the Gram matrix is that of a convex polyhedron of finite volume:
/// indecomposable, unit diagonal, non-positive off-diagonal entries, rank 4
/// with signature (3,1), and a cone meeting hyperbolic space.
pub fn validate_gram<T: Real>(p: &CombinatorialPolyhedron, r: &HyperbolicRealization<T>) -> GramReport {
    let f = r.num_faces();
    let g = r.gram.map(|x| x.to_f64());
    let tol = 1e-8;
    let mut failures = Vec::new();
    // Indecomposable: the graph of nonzero entries is connected.
    let mut seen = vec![false; f];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..f {
            if !seen[j] && g[(i, j)].abs() > tol {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        failures.push("Gram matrix is decomposable".to_string());
    }
    for i in 0..f {
        if (g[(i, i)] - 1.0).abs() > tol {
            failures.push(format!("diagonal entry {} is not 1", i + 1));
        }
        for j in 0..f {
            if i != j && g[(i, j)] > tol {
                failures.push(format!("off-diagonal entry ({}, {}) is positive", i + 1, j + 1));
            }
        }
    }
    let (eig, _) = symmetric_eigen(&g);
    let scale = eig.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let cut = scale * 1e-9;
    let pos = eig.iter().filter(|&&x| x > cut).count();
    let neg = eig.iter().filter(|&&x| x < -cut).count();
    let zero = f - pos - neg;
    if pos != 3 || neg != 1 {
        failures.push(format!("signature ({pos}, {neg}, {zero}) is not (3, 1)"));
    }
    let normals: Vec<Vec4<f64>> = r.normals.iter().map(|v| v.clone().map(|x| x.to_f64())).collect();
    let certificate = if first_coordinates_nonnegative(&normals) {
        ConeCertificate::FirstCoordinates
    } else if let Some(x) = vertex_certificate(p, &normals) {
        ConeCertificate::Vertices { interior_point: x }
    } else {
        failures.push("no certificate that the cone meets hyperbolic space".to_string());
        ConeCertificate::None
    };
    GramReport { valid: failures.is_empty(), failures, signature: (pos, neg, zero), certificate }
}

/// Each trivalent vertex is the timelike point orthogonal to its three face
/// normals; all must lie on the inner side of every face.
fn vertex_certificate(p: &CombinatorialPolyhedron, normals: &[Vec4<f64>]) -> Option<[f64; 4]> {
    let mut sum = [0.0; 4];
    for faces in &p.vertices {
        if faces.len() < 3 {
            return None;
        }
        let mut x = lorentz_normal(&normals[faces[0]], &normals[faces[1]], &normals[faces[2]]);
        let q = lorentz_product(&x, &x);
        if q > 1e-9 {
            return None;
        }
        if x[0] < 0.0 {
            x = x.map(|t| -t);
        }
        let n = (-q).max(1e-300).sqrt();
        x = x.map(|t| t / n);
        for v in normals {
            if lorentz_product(&x, v) > 1e-7 {
                return None;
            }
        }
        for k in 0..4 {
            sum[k] += x[k];
        }
    }
    let q = lorentz_product(&sum, &sum);
    if q < 0.0 {
        Some(sum)
    } else {
        None
    }
}

/// Persistent form: decimal strings at full working precision.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RealizationRecord {
    pub polyhedron: String,
    pub orders: Vec<u32>,
    pub precision: usize,
    pub anchor: Option<Vec<usize>>,
    pub normals: Vec<[String; 4]>,
    pub gram: Vec<Vec<String>>,
    pub residual: String,
}

impl<T: Real> HyperbolicRealization<T> {
    pub fn to_record(&self) -> RealizationRecord {
        let f = self.num_faces();
        RealizationRecord {
            polyhedron: self.polyhedron.clone(),
            orders: self.labeling.orders.clone(),
            precision: self.precision,
            anchor: self.anchor.clone(),
            normals: self.normals.iter().map(|v| v.clone().map(|x| x.to_decimal())).collect(),
            gram: (0..f).map(|i| (0..f).map(|j| self.gram[(i, j)].to_decimal()).collect()).collect(),
            residual: self.residual.to_decimal(),
        }
    }

    pub fn from_record(p: &CombinatorialPolyhedron, rec: &RealizationRecord) -> Result<Self, HyperbolicError> {
        if rec.normals.len() != p.num_faces() || rec.orders.len() != p.num_edges() {
            return Err(HyperbolicError::Record("size mismatch".into()));
        }
        let parse = |s: &String| T::parse_decimal(s).ok_or_else(|| HyperbolicError::Record(format!("bad number {s}")));
        let mut normals = Vec::new();
        for v in &rec.normals {
            normals.push([parse(&v[0])?, parse(&v[1])?, parse(&v[2])?, parse(&v[3])?]);
        }
        let l = CoxeterLabeling { orders: rec.orders.clone() };
        let mut r = HyperbolicRealization::new(p, &l, normals);
        r.anchor = rec.anchor.clone();
        Ok(r)
    }
}

/// Singular values of the normal matrix; rank 4 means the normals span.
pub fn normals_rank<T: Real>(normals: &[Vec4<T>]) -> usize {
    let m = Mat::from_rows(&normals.iter().map(|v| v.to_vec()).collect::<Vec<_>>());
    let d = svd(&m);
    let top = d.sigma[0].clone();
    d.sigma.iter().filter(|s| **s > top.clone() * T::from_f64(1e-9)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::catalog;
    use crate::real::F256;

    #[test]
    fn lorentz_basics() {
        let e0 = [1.0, 0.0, 0.0, 0.0];
        let e1 = [0.0, 1.0, 0.0, 0.0];
        let light = [1.0, 1.0, 0.0, 0.0];
        assert_eq!(lorentz_product(&e0, &e0), -1.0);
        assert_eq!(lorentz_product(&e1, &e1), 1.0);
        assert_eq!(lorentz_product(&light, &light), 0.0);
    }

    #[test]
    fn lorentz_normal_is_orthogonal() {
        let a = [0.3, 1.0, 0.2, -0.1];
        let b = [0.1, -0.4, 1.1, 0.5];
        let c = [0.7, 0.2, 0.3, 1.2];
        let n = lorentz_normal(&a, &b, &c);
        for v in [a, b, c] {
            assert!(lorentz_product(&n, &v).abs() < 1e-14);
        }
    }

    #[test]
    fn regular_cube_solves_uniform_angles() {
        let c = catalog::cube();
        let (nu, angle) = regular_cube();
        let t = vec![-angle.cos(); 12];
        assert!(max_abs(&hyperbolic_residuals(&c, &t, &nu)) < 1e-14);
    }

    #[test]
    fn prism_identities_at_high_precision() {
        for n in 5..=12 {
            let r = prism_realization::<F256>(n).unwrap();
            assert!(r.residual.to_f64() < 1e-70, "n={n}");
            let half = r.gram[(n, 0)].to_f64();
            assert!((half + 0.5).abs() < 1e-70);
            assert!(r.gram[(0, 1)].to_f64().abs() < 1e-70);
            let p = catalog::prism(n).unwrap();
            assert!(validate_gram(&p, &r).valid);
        }
        assert_eq!(prism_realization::<f64>(4).unwrap_err(), HyperbolicError::UnsupportedN(4));
    }

    #[test]
    fn do13_identities() {
        let nu = do13_normals::<F256>();
        let g = gram_matrix(&nu);
        let close = |i: usize, j: usize, v: f64| (g[(i, j)].to_f64() - v).abs() < 1e-70;
        for i in 0..12 {
            assert!(close(i, i, 1.0));
        }
        for j in 0..5 {
            assert!(close(10, 2 * j, -0.5));
            assert!(close(11, 2 * j + 1, -0.5));
        }
        for k in 0..10 {
            assert!(close(k, (k + 1) % 10, -0.5));
            assert!(close(k, (k + 2) % 10, 0.0));
        }
        assert!(nu.iter().all(|v| v[0].to_f64() >= 0.0));
    }

    #[test]
    fn ideal_cube_realization() {
        let c = catalog::cube();
        let l = CoxeterLabeling::uniform(&c, 3);
        let r = realize(&c, &l, Gauge::Free, &SolveOptions::default()).unwrap();
        assert!(r.residual < 1e-12);
        for &(a, b) in &c.edges {
            assert!((r.gram[(a, b)] + 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_seed_for_223_vertex() {
        let c = catalog::cube();
        let l = CoxeterLabeling::parse(&c, "2 3 2 2 3 2 2 3 2 3 2 3").unwrap();
        let a = seed_standard::<f64>(&c, &l).unwrap();
        assert_eq!(a.normals[0], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(a.normals[1], [0.0, 0.0, 1.0, 0.0]);
        assert!((a.normals[2][2] + 0.5).abs() < 1e-15);
        assert!((a.normals[2][3] - 0.75f64.sqrt()).abs() < 1e-15);
        let d = catalog::dodecahedron();
        let all3 = CoxeterLabeling::uniform(&d, 3);
        assert_eq!(seed_standard::<f64>(&d, &all3).unwrap_err(), HyperbolicError::NoStandardVertex);
    }

    #[test]
    fn record_round_trip() {
        let r = prism_realization::<F256>(6).unwrap();
        let p = catalog::prism(6).unwrap();
        let rec = r.to_record();
        let json = serde_json::to_string(&rec).unwrap();
        let back: RealizationRecord = serde_json::from_str(&json).unwrap();
        let r2 = HyperbolicRealization::<F256>::from_record(&p, &back).unwrap();
        for (a, b) in r.normals.iter().zip(&r2.normals) {
            for k in 0..4 {
                assert!((a[k].clone() - b[k].clone()).abs().to_f64() < 1e-70);
            }
        }
    }

    #[test]
    fn triangular_prism_by_restarts() {
        let t = catalog::triangular_prism();
        let l = CoxeterLabeling::parse(&t, "3 3 2 3 3 2 2 5 5").unwrap();
        let r = realize(&t, &l, Gauge::Free, &SolveOptions::default()).unwrap();
        assert!(r.residual < 1e-12);
        assert!(validate_gram(&t, &r).valid);
    }
}
