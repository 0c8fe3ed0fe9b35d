//! Andreev's existence conditions for hyperbolic polyhedra with non-obtuse
//! dihedral angles, and enumeration of admissible Coxeter labelings.
//!
//! Angles are `pi/n`; every condition compares sums of `1/n` with an integer,
//! so all checks are exact.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polytope::{CombinatorialPolyhedron, CoxeterLabeling, SymmetryGroup};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AndreevError {
    #[error("tetrahedra are outside the scope of Andreev's conditions")]
    TetrahedronUnsupported,
    #[error("vertex {0} is not trivalent")]
    NonTrivalentVertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    A1,
    A2,
    A3,
    A4,
    FiniteA1,
    FiniteA2,
    FiniteA3,
    FiniteA4,
    FiniteA5,
    FiniteA6,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::A1 => "A1",
            Condition::A2 => "A2",
            Condition::A3 => "A3",
            Condition::A4 => "A4",
            Condition::FiniteA1 => "Ã1",
            Condition::FiniteA2 => "Ã2",
            Condition::FiniteA3 => "Ã3",
            Condition::FiniteA4 => "Ã4",
            Condition::FiniteA5 => "Ã5",
            Condition::FiniteA6 => "Ã6",
        };
        f.write_str(s)
    }
}

/// A violated condition with the faces witnessing it (0-based ids).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub faces: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AndreevVerdict {
    pub admissible: bool,
    pub violations: Vec<Violation>,
}

impl AndreevVerdict {
    fn from_violations(violations: Vec<Violation>) -> Self {
        AndreevVerdict { admissible: violations.is_empty(), violations }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Compact,
    FiniteVolume,
}

fn inv(n: u32) -> Ratio<i64> {
    Ratio::new(1, n as i64)
}

fn cycle_sum(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, faces: &[usize]) -> Ratio<i64> {
    let k = faces.len();
    (0..k).map(|i| inv(l.order(p, faces[i], faces[(i + 1) % k]).expect("circuit edge"))).sum()
}

struct Circuits {
    three: Vec<Vec<usize>>,
    four: Vec<Vec<usize>>,
}

impl Circuits {
    fn of(p: &CombinatorialPolyhedron) -> Self {
        Circuits { three: p.prismatic_circuits(3), four: p.prismatic_circuits(4) }
    }
}

fn triangular_prism_caps(p: &CombinatorialPolyhedron) -> Option<(usize, usize)> {
    if p.num_faces() == 5 && p.is_prism() {
        let t: Vec<usize> = (0..5).filter(|&i| p.face_cycles[i].len() == 3).collect();
        Some((t[0], t[1]))
    } else {
        None
    }
}

fn a4_sum(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, caps: (usize, usize)) -> Ratio<i64> {
    [caps.0, caps.1].iter().flat_map(|&t| p.face_edges(t)).map(|e| inv(l.orders[e])).sum()
}

fn compact_violations(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, c: &Circuits) -> Vec<Violation> {
    let one = Ratio::from_integer(1);
    let mut out = Vec::new();
    for (v, faces) in p.vertices.iter().enumerate() {
        let s: Ratio<i64> = p.vertex_edges(v).iter().map(|&e| inv(l.orders[e])).sum();
        if s <= one {
            out.push(Violation { condition: Condition::A1, faces: faces.clone() });
        }
    }
    out.extend(circuit_violations(p, l, c, Condition::A2, Condition::A3));
    if let Some(caps) = triangular_prism_caps(p) {
        if a4_sum(p, l, caps) >= Ratio::from_integer(3) {
            out.push(Violation { condition: Condition::A4, faces: vec![caps.0, caps.1] });
        }
    }
    out
}

fn circuit_violations(
    p: &CombinatorialPolyhedron,
    l: &CoxeterLabeling,
    c: &Circuits,
    three: Condition,
    four: Condition,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for cyc in &c.three {
        if cycle_sum(p, l, cyc) >= Ratio::from_integer(1) {
            out.push(Violation { condition: three, faces: cyc.clone() });
        }
    }
    for cyc in &c.four {
        if cycle_sum(p, l, cyc) >= Ratio::from_integer(2) {
            out.push(Violation { condition: four, faces: cyc.clone() });
        }
    }
    out
}

fn finite_volume_violations(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, c: &Circuits) -> Vec<Violation> {
    let one = Ratio::from_integer(1);
    let mut out = Vec::new();
    for (v, faces) in p.vertices.iter().enumerate() {
        let s: Ratio<i64> = p.vertex_edges(v).iter().map(|&e| inv(l.orders[e])).sum();
        match faces.len() {
            3 => {
                if s < one {
                    out.push(Violation { condition: Condition::FiniteA1, faces: faces.clone() });
                }
            }
            4 => {
                if s != Ratio::from_integer(2) {
                    out.push(Violation { condition: Condition::FiniteA2, faces: faces.clone() });
                }
            }
            _ => out.push(Violation { condition: Condition::FiniteA2, faces: faces.clone() }),
        }
    }
    out.extend(circuit_violations(p, l, c, Condition::FiniteA3, Condition::FiniteA4));
    if let Some(caps) = triangular_prism_caps(p) {
        if a4_sum(p, l, caps) >= Ratio::from_integer(3) {
            out.push(Violation { condition: Condition::FiniteA5, faces: vec![caps.0, caps.1] });
        }
    }
    if !p.is_trivalent() {
        out.extend(a6_violations(p, l));
    }
    out
}

fn a6_violations(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Vec<Violation> {
    let f = p.num_faces();
    let mut out = Vec::new();
    for j in 0..f {
        for &i in &p.face_cycles[j] {
            for &k in &p.face_cycles[j] {
                if i >= k || p.adjacent(i, k) {
                    continue;
                }
                let meets_off_j =
                    p.vertices.iter().any(|v| v.contains(&i) && v.contains(&k) && !v.contains(&j));
                if !meets_off_j {
                    continue;
                }
                let s = inv(l.order(p, i, j).unwrap()) + inv(l.order(p, j, k).unwrap());
                if s >= Ratio::from_integer(1) {
                    out.push(Violation { condition: Condition::FiniteA6, faces: vec![i, j, k] });
                }
            }
        }
    }
    out
}

/// Conditions (A1)-(A4) for a compact realization.
pub fn check_compact(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Result<AndreevVerdict, AndreevError> {
    if p.is_tetrahedron() {
        return Err(AndreevError::TetrahedronUnsupported);
    }
    if let Some(v) = p.vertices.iter().position(|v| v.len() != 3) {
        return Err(AndreevError::NonTrivalentVertex(v));
    }
    Ok(AndreevVerdict::from_violations(compact_violations(p, l, &Circuits::of(p))))
}

/// Conditions for a finite-volume realization; the four-valent vertex and
/// non-adjacent-pair conditions only apply when some vertex is not trivalent.
pub fn check_finite_volume(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Result<AndreevVerdict, AndreevError> {
    if p.is_tetrahedron() {
        return Err(AndreevError::TetrahedronUnsupported);
    }
    Ok(AndreevVerdict::from_violations(finite_volume_violations(p, l, &Circuits::of(p))))
}

pub fn check(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, mode: Mode) -> Result<AndreevVerdict, AndreevError> {
    match mode {
        Mode::Compact => check_compact(p, l),
        Mode::FiniteVolume => check_finite_volume(p, l),
    }
}

/// How orbit representatives are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representative {
    /// Plain lexicographic minimum of the edge-order string.
    Lexicographic,
    /// Lexicographic minimum with the second edge compared in reverse; this
    /// is the convention under which the published cube and dodecahedron
    /// tables list their strings.
    #[default]
    TableConvention,
}

impl Representative {
    fn key(self, orders: &[u32]) -> Vec<i64> {
        orders
            .iter()
            .enumerate()
            .map(|(i, &o)| if self == Representative::TableConvention && i == 1 { -(o as i64) } else { o as i64 })
            .collect()
    }

    /// The representative of the orbit of `l` under the symmetry group.
    pub fn canonical(
        self,
        p: &CombinatorialPolyhedron,
        group: &SymmetryGroup,
        l: &CoxeterLabeling,
    ) -> CoxeterLabeling {
        let perms: Vec<Vec<usize>> = (0..group.order()).map(|g| group.edge_permutation(p, g)).collect();
        self.canonical_with(&perms, l)
    }

    fn canonical_with(self, edge_perms: &[Vec<usize>], l: &CoxeterLabeling) -> CoxeterLabeling {
        edge_perms
            .iter()
            .map(|perm| l.permuted(perm))
            .min_by_key(|x| self.key(&x.orders))
            .unwrap_or_else(|| l.clone())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnumerationOptions {
    pub allowed_orders: Vec<u32>,
    /// Upper bound on order-2 edges per face.
    pub max_right_angles_per_face: Option<usize>,
    pub mode: Mode,
    pub representative: Representative,
}

impl EnumerationOptions {
    pub fn compact(orders: &[u32]) -> Self {
        EnumerationOptions {
            allowed_orders: orders.to_vec(),
            max_right_angles_per_face: None,
            mode: Mode::Compact,
            representative: Representative::default(),
        }
    }
}

/// One representative per symmetry orbit of admissible labelings, sorted by
/// edge-order string.
pub fn enumerate_labelings(
    p: &CombinatorialPolyhedron,
    opts: &EnumerationOptions,
    group: &SymmetryGroup,
) -> Result<Vec<CoxeterLabeling>, AndreevError> {
    if p.is_tetrahedron() {
        return Err(AndreevError::TetrahedronUnsupported);
    }
    if opts.mode == Mode::Compact {
        if let Some(v) = p.vertices.iter().position(|v| v.len() != 3) {
            return Err(AndreevError::NonTrivalentVertex(v));
        }
    }
    let mut orders: Vec<u32> = opts.allowed_orders.iter().copied().filter(|&o| o >= 2).collect();
    orders.sort_unstable();
    orders.dedup();
    let circuits = Circuits::of(p);
    let e = p.num_edges();
    // Vertices and faces become checkable once their last edge is assigned.
    let mut vertex_ready = vec![Vec::new(); e];
    for v in 0..p.num_vertices() {
        let last = *p.vertex_edges(v).iter().max().expect("vertex edges");
        vertex_ready[last].push(v);
    }
    let face_edges: Vec<Vec<usize>> = (0..p.num_faces()).map(|i| p.face_edges(i)).collect();
    let mut search = Search {
        p,
        orders: &orders,
        mode: opts.mode,
        max_right: opts.max_right_angles_per_face,
        vertex_ready,
        face_edges,
        current: vec![0; e],
        found: Vec::new(),
    };
    search.assign(0);
    let perms: Vec<Vec<usize>> = (0..group.order()).map(|g| group.edge_permutation(p, g)).collect();
    let mut reps = BTreeSet::new();
    for orders in search.found {
        let l = CoxeterLabeling { orders };
        let admissible = match opts.mode {
            Mode::Compact => compact_violations(p, &l, &circuits).is_empty(),
            Mode::FiniteVolume => finite_volume_violations(p, &l, &circuits).is_empty(),
        };
        if admissible {
            reps.insert(opts.representative.canonical_with(&perms, &l));
        }
    }
    let mut out: Vec<CoxeterLabeling> = reps.into_iter().collect();
    out.sort();
    Ok(out)
}

struct Search<'a> {
    p: &'a CombinatorialPolyhedron,
    orders: &'a [u32],
    mode: Mode,
    max_right: Option<usize>,
    vertex_ready: Vec<Vec<usize>>,
    face_edges: Vec<Vec<usize>>,
    current: Vec<u32>,
    found: Vec<Vec<u32>>,
}

impl Search<'_> {
    fn assign(&mut self, e: usize) {
        if e == self.current.len() {
            self.found.push(self.current.clone());
            return;
        }
        for k in 0..self.orders.len() {
            self.current[e] = self.orders[k];
            if self.consistent(e) {
                self.assign(e + 1);
            }
        }
        self.current[e] = 0;
    }

    /// Checks the vertices completed by edge `e` and the face bound.
    fn consistent(&self, e: usize) -> bool {
        let one = Ratio::from_integer(1);
        for &v in &self.vertex_ready[e] {
            let es = self.p.vertex_edges(v);
            let s: Ratio<i64> = es.iter().map(|&x| inv(self.current[x])).sum();
            let ok = match (self.mode, es.len()) {
                (Mode::Compact, _) => s > one,
                (Mode::FiniteVolume, 3) => s >= one,
                (Mode::FiniteVolume, 4) => s == Ratio::from_integer(2),
                _ => false,
            };
            if !ok {
                return false;
            }
        }
        if let Some(max) = self.max_right {
            if self.current[e] == 2 {
                let (a, b) = self.p.edges[e];
                for face in [a, b] {
                    let n = self.face_edges[face].iter().filter(|&&x| x <= e && self.current[x] == 2).count();
                    if n > max {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::catalog;

    #[test]
    fn cube_all_right_angles_violates_four_circuits() {
        let c = catalog::cube();
        let v = check_compact(&c, &CoxeterLabeling::uniform(&c, 2)).unwrap();
        assert!(!v.admissible);
        assert!(v.violations.iter().any(|x| x.condition == Condition::A3));
    }

    #[test]
    fn boundary_vertex_violates_a1() {
        let c = catalog::cube();
        let mut l = CoxeterLabeling::uniform(&c, 3);
        for (e, o) in c.vertex_edges(0).into_iter().zip([2, 3, 6]) {
            l.orders[e] = o;
        }
        let v = check_compact(&c, &l).unwrap();
        assert!(v.violations.iter().any(|x| x.condition == Condition::A1 && x.faces == c.vertices[0]));
    }

    #[test]
    fn ideal_cube_is_finite_volume() {
        let c = catalog::cube();
        let l = CoxeterLabeling::uniform(&c, 3);
        assert!(check_finite_volume(&c, &l).unwrap().admissible);
        assert!(!check_compact(&c, &l).unwrap().admissible);
    }

    #[test]
    fn tetrahedron_rejected() {
        let t = catalog::tetrahedron();
        assert_eq!(check_compact(&t, &CoxeterLabeling::uniform(&t, 3)), Err(AndreevError::TetrahedronUnsupported));
    }

    #[test]
    fn triangular_prism_example() {
        let t = catalog::triangular_prism();
        let l = CoxeterLabeling::parse(&t, "3 3 2 3 3 2 2 5 5").unwrap();
        assert!(check_compact(&t, &l).unwrap().admissible);
        let group = t.symmetry_group();
        let all = enumerate_labelings(&t, &EnumerationOptions::compact(&[2, 3, 5]), &group).unwrap();
        let canon = Representative::default().canonical(&t, &group, &l);
        assert!(all.contains(&canon));
    }

    #[test]
    fn right_angled_triangular_prism_fails_a4_or_a2() {
        let t = catalog::triangular_prism();
        let v = check_compact(&t, &CoxeterLabeling::uniform(&t, 2)).unwrap();
        assert!(v.violations.iter().any(|x| x.condition == Condition::A4));
        assert!(v.violations.iter().any(|x| x.condition == Condition::A2));
    }

    #[test]
    fn cube_and_dodecahedron_counts() {
        let c = catalog::cube();
        let cubes = enumerate_labelings(&c, &EnumerationOptions::compact(&[2, 3]), &c.symmetry_group()).unwrap();
        assert_eq!(cubes.len(), 34);
        assert_eq!(cubes[0].to_string(), "2 3 2 2 2 2 2 3 2 2 2 3");
        assert_eq!(cubes[33].to_string(), "2 3 3 2 2 3 2 3 3 3 2 2");
        let d = catalog::dodecahedron();
        let mut opts = EnumerationOptions::compact(&[2, 3]);
        opts.max_right_angles_per_face = Some(2);
        let dodecs = enumerate_labelings(&d, &opts, &d.symmetry_group()).unwrap();
        assert_eq!(dodecs.len(), 13);
        assert_eq!(dodecs[12].to_string(), "2 3 2 3 3 3 3 3 3 2 3 3 2 2 3 2 3 3 3 2 3 2 3 3 3 2 3 3 2 3");
    }
}
