//! Combinatorial sufficient conditions: the linear rigidity test and
//! orderability.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::andreev::check_compact;
use crate::linalg::{symmetric_eigen, Mat};
use crate::polytope::{counts, CombinatorialPolyhedron, CoxeterLabeling};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigidityError {
    #[error("labeling is not orderable")]
    NotOrderable,
    #[error("labeling is not of normal type: {0}")]
    NotNormalType(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTestResult {
    pub rigid: bool,
    /// Face (0-based) to level (1-based) for faces proven rigid.
    pub level: BTreeMap<usize, usize>,
    pub stalled_faces: Vec<usize>,
}

impl LinearTestResult {
    pub fn max_level(&self) -> Option<usize> {
        self.level.values().copied().max()
    }

    /// Faces rigid at the given level, ascending.
    pub fn faces_at(&self, level: usize) -> Vec<usize> {
        self.level.iter().filter(|(_, &l)| l == level).map(|(&f, _)| f).collect()
    }
}

/// Level-by-level propagation: a face becomes rigid at level k when at least
/// three of its edges have order 2 or are shared with a face rigid at a lower
/// level, the constraining neighbours being distinct adjacent faces.
pub fn linear_test(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> LinearTestResult {
    let f = p.num_faces();
    let mut level: BTreeMap<usize, usize> = BTreeMap::new();
    for k in 1.. {
        let added: Vec<usize> = (0..f)
            .filter(|i| !level.contains_key(i))
            .filter(|&i| {
                let mut constraining: Vec<usize> = p
                    .face_edges(i)
                    .into_iter()
                    .filter_map(|e| {
                        let (a, b) = p.edges[e];
                        let other = if a == i { b } else { a };
                        (l.orders[e] == 2 || level.contains_key(&other)).then_some(other)
                    })
                    .filter(|&j| p.adjacent(i, j))
                    .collect();
                constraining.sort_unstable();
                constraining.dedup();
                constraining.len() >= 3
            })
            .collect();
        if added.is_empty() {
            break;
        }
        for i in added {
            level.insert(i, k);
        }
    }
    let stalled_faces: Vec<usize> = (0..f).filter(|i| !level.contains_key(i)).collect();
    LinearTestResult { rigid: stalled_faces.is_empty(), level, stalled_faces }
}

/// Exhaustive search for a face order in which every face has at most three
/// edges that have order 2 or lie on a face of higher index. The order is
/// returned lowest index first.
pub fn orderability_test(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Option<Vec<usize>> {
    let f = p.num_faces();
    assert!(f <= 64, "at most 64 faces");
    let mut failed: HashMap<u64, ()> = HashMap::new();
    let mut placed = Vec::new();
    if place_highest(p, l, 0, &mut placed, &mut failed) {
        placed.reverse();
        Some(placed)
    } else {
        None
    }
}

// `above` holds the faces already given the highest indices.
fn place_highest(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    above: u64,
    placed: &mut Vec<usize>,
    failed: &mut HashMap<u64, ()>,
) -> bool {
    let f = p.num_faces();
    if placed.len() == f {
        return true;
    }
    if failed.contains_key(&above) {
        return false;
    }
    for i in (0..f).rev() {
        if above & (1 << i) != 0 {
            continue;
        }
        let load = p
            .face_edges(i)
            .into_iter()
            .filter(|&e| {
                let (a, b) = p.edges[e];
                let other = if a == i { b } else { a };
                l.orders[e] == 2 || above & (1 << other) != 0
            })
            .count();
        if load <= 3 {
            placed.push(i);
            if place_highest(p, l, above | (1 << i), placed, failed) {
                return true;
            }
            placed.pop();
        }
    }
    failed.insert(above, ());
    false
}

/// Pairs of disjoint faces exhibiting the polyhedron as a polygon times an
/// interval.
pub fn product_caps(p: &CombinatorialPolyhedron) -> Vec<(usize, usize)> {
    let f = p.num_faces();
    let mut out = Vec::new();
    if !p.is_trivalent() {
        return out;
    }
    for a in 0..f {
        for b in (a + 1)..f {
            if p.adjacent(a, b) {
                continue;
            }
            let sides = (0..f).filter(|&k| k != a && k != b);
            let ok = sides.clone().count() == p.face_cycles[a].len()
                && sides.into_iter().all(|k| p.face_cycles[k].len() == 4 && p.adjacent(k, a) && p.adjacent(k, b));
            if ok {
                out.push((a, b));
            }
        }
    }
    out
}

/// Faces over which the polyhedron is a cone, with the apex vertex.
pub fn cone_bases(p: &CombinatorialPolyhedron) -> Vec<(usize, usize)> {
    let f = p.num_faces();
    let mut out = Vec::new();
    for (v, faces) in p.vertices.iter().enumerate() {
        if faces.len() == f - 1 {
            let base = (0..f).find(|k| !faces.contains(k)).expect("one face misses the apex");
            out.push((base, v));
        }
    }
    out
}

/// Whether the Coxeter group of the labeling is finite: every pair of faces
/// must meet, and the cosine matrix must be positive definite.
pub fn has_finite_group(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> bool {
    let f = p.num_faces();
    let mut g = Mat::identity(f);
    for a in 0..f {
        for b in (a + 1)..f {
            let Some(n) = l.order(p, a, b) else { return false };
            let c = -(std::f64::consts::PI / n as f64).cos();
            g[(a, b)] = c;
            g[(b, a)] = c;
        }
    }
    symmetric_eigen(&g).0.iter().all(|&x| x > 1e-12)
}

/// Checks the three exclusions defining normal type.
pub fn normal_type(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Result<(), RigidityError> {
    let all_right = |face: usize| p.face_edges(face).iter().all(|&e| l.orders[e] == 2);
    if let Some((base, _)) = cone_bases(p).into_iter().find(|&(base, _)| all_right(base)) {
        return Err(RigidityError::NotNormalType(format!("cone type over face {}", base + 1)));
    }
    if let Some((a, b)) = product_caps(p).into_iter().find(|&(a, b)| all_right(a) && all_right(b)) {
        return Err(RigidityError::NotNormalType(format!("product type with caps {} and {}", a + 1, b + 1)));
    }
    if has_finite_group(p, l) {
        return Err(RigidityError::NotNormalType("finite fundamental group".into()));
    }
    Ok(())
}

/// Dimension of the restricted deformation space of an orderable normal-type
/// orbifold: `3f - e - e2` minus the projective automorphism dimension.
pub fn orderable_dimension(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Result<i64, RigidityError> {
    orderability_test(p, l).ok_or(RigidityError::NotOrderable)?;
    normal_type(p, l)?;
    Ok(counts(p, l).excess - p.automorphism_dim() as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShortcutVerdict {
    RigidRelMirrors,
}

/// Orderable compact hyperbolic orbifolds with more than seven faces are
/// projectively rigid relative to the mirrors.
pub fn orderable_rigidity_shortcut(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Option<ShortcutVerdict> {
    if p.num_faces() <= 7 {
        return None;
    }
    let admissible = check_compact(p, l).map(|v| v.admissible).unwrap_or(false);
    (admissible && orderability_test(p, l).is_some()).then_some(ShortcutVerdict::RigidRelMirrors)
}
