//! Combinatorics of abstract convex 3-polyhedra: incidence, prismatic
//! circuits, symmetries and Coxeter labelings.
//!
//! Faces are 0-based internally; text formats and displays are 1-based.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolytopeError {
    #[error("not a polyhedron: {0}")]
    NonPolyhedral(String),
    #[error("vertex {0} is not trivalent")]
    NonTrivalentVertex(usize),
    #[error("labeling has {got} orders but the polyhedron has {expected} edges")]
    LabelingSize { expected: usize, got: usize },
    #[error("edge order {0} is below 2")]
    OrderTooSmall(u32),
    #[error("unknown polyhedron `{0}`")]
    UnknownPolyhedron(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// An abstract convex 3-polyhedron given by its faces and their cyclically
/// ordered neighbors.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CombinatorialPolyhedron {
    pub name: String,
    /// For each face, the neighboring faces in a consistent cyclic order.
    pub face_cycles: Vec<Vec<usize>>,
    /// Edges as face pairs, in the catalog numbering.
    pub edges: Vec<(usize, usize)>,
    /// Each vertex as the cyclic list of faces around it.
    pub vertices: Vec<Vec<usize>>,
    #[serde(skip)]
    edge_index: BTreeMap<(usize, usize), usize>,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl CombinatorialPolyhedron {
    /// Builds a polyhedron from face cycles, reorienting cycles where needed
    /// so that neighbors traverse shared edges oppositely. Edges are numbered
    /// in order of first appearance `(i, j)` with `i < j`.
    pub fn from_face_cycles(name: &str, cycles: Vec<Vec<usize>>) -> Result<Self, PolytopeError> {
        let f = cycles.len();
        if f < 4 {
            return Err(PolytopeError::NonPolyhedral(format!("only {f} faces")));
        }
        let mut edges = Vec::new();
        let mut edge_index = BTreeMap::new();
        for (i, cyc) in cycles.iter().enumerate() {
            if cyc.len() < 3 {
                return Err(PolytopeError::NonPolyhedral(format!("face {} has {} sides", i + 1, cyc.len())));
            }
            let distinct: BTreeSet<_> = cyc.iter().collect();
            if distinct.len() != cyc.len() {
                return Err(PolytopeError::NonPolyhedral(format!(
                    "face {} shares more than one edge with a neighbor",
                    i + 1
                )));
            }
            for &j in cyc {
                if j >= f || j == i {
                    return Err(PolytopeError::NonPolyhedral(format!("face {} has invalid neighbor {}", i + 1, j + 1)));
                }
                if !cycles[j].contains(&i) {
                    return Err(PolytopeError::NonPolyhedral(format!("dangling edge between faces {} and {}", i + 1, j + 1)));
                }
                let k = key(i, j);
                if !edge_index.contains_key(&k) {
                    edge_index.insert(k, edges.len());
                    edges.push(k);
                }
            }
        }
        let cycles = orient_cycles(cycles);
        let vertices = trace_vertices(&cycles)?;
        let v = vertices.len();
        if v + f != edges.len() + 2 {
            return Err(PolytopeError::NonPolyhedral(format!(
                "Euler relation fails: v={v}, e={}, f={f}",
                edges.len()
            )));
        }
        Ok(CombinatorialPolyhedron { name: name.to_string(), face_cycles: cycles, edges, vertices, edge_index })
    }

    /// Renumbers the edges to follow the given list of face pairs.
    pub fn with_edge_numbering(mut self, order: &[(usize, usize)]) -> Result<Self, PolytopeError> {
        if order.len() != self.edges.len() {
            return Err(PolytopeError::NonPolyhedral("edge numbering has the wrong length".into()));
        }
        let mut index = BTreeMap::new();
        for (n, &(a, b)) in order.iter().enumerate() {
            if !self.edge_index.contains_key(&key(a, b)) || index.insert(key(a, b), n).is_some() {
                return Err(PolytopeError::NonPolyhedral(format!("edge ({}, {}) is not an edge", a + 1, b + 1)));
            }
        }
        self.edges = order.to_vec();
        self.edge_index = index;
        Ok(self)
    }

    /// Parses the text format: one face per line, neighbor ids (1-based) in
    /// cyclic order. Blank lines and `#` comments are ignored.
    pub fn parse(name: &str, text: &str) -> Result<Self, PolytopeError> {
        let mut cycles = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cyc = line
                .split_whitespace()
                .map(|t| match t.parse::<usize>() {
                    Ok(x) if x >= 1 => Ok(x - 1),
                    _ => Err(PolytopeError::Parse(format!("bad face id `{t}`"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cyc);
        }
        Self::from_face_cycles(name, cycles)
    }

    pub fn num_faces(&self) -> usize {
        self.face_cycles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Index of the edge between faces `a` and `b`, if adjacent.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&key(a, b)).copied()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.edge_between(a, b).is_some()
    }

    /// Edge ids on the boundary of face `i`, in cyclic order.
    pub fn face_edges(&self, i: usize) -> Vec<usize> {
        self.face_cycles[i].iter().map(|&j| self.edge_between(i, j).expect("cycle edge")).collect()
    }

    /// The vertices (ids) at the two ends of edge `e`.
    pub fn edge_vertices(&self, e: usize) -> Vec<usize> {
        let (a, b) = self.edges[e];
        (0..self.vertices.len())
            .filter(|&v| self.vertices[v].contains(&a) && self.vertices[v].contains(&b))
            .collect()
    }

    /// Edge ids meeting at vertex `v`.
    pub fn vertex_edges(&self, v: usize) -> Vec<usize> {
        let fs = &self.vertices[v];
        let n = fs.len();
        (0..n).map(|k| self.edge_between(fs[k], fs[(k + 1) % n]).expect("vertex edge")).collect()
    }

    pub fn is_trivalent(&self) -> bool {
        self.vertices.iter().all(|v| v.len() == 3)
    }

    pub fn is_tetrahedron(&self) -> bool {
        self.num_faces() == 4 && self.face_cycles.iter().all(|c| c.len() == 3)
    }

    /// Whether the polyhedron is a cone over a polygon: one vertex lies on
    /// every face but one.
    pub fn cone_apex(&self) -> Option<usize> {
        let f = self.num_faces();
        (0..self.vertices.len()).find(|&v| self.vertices[v].len() == f - 1)
    }

    /// Whether the polyhedron is combinatorially a prism over a polygon.
    pub fn is_prism(&self) -> bool {
        let f = self.num_faces();
        if f < 5 || !self.is_trivalent() {
            return false;
        }
        let n = f - 2;
        let caps: Vec<usize> = (0..f).filter(|&i| self.face_cycles[i].len() == n).collect();
        let quads = (0..f).filter(|&i| self.face_cycles[i].len() == 4).count();
        if n == 4 {
            return f == 6 && quads == 6;
        }
        caps.len() == 2 && !self.adjacent(caps[0], caps[1]) && quads == n
    }

    /// Prismatic `k`-circuits (k = 3 or 4) as face cycles, each in its
    /// lexicographically minimal rotation or reflection.
    pub fn prismatic_circuits(&self, k: usize) -> Vec<Vec<usize>> {
        let f = self.num_faces();
        let mut found = BTreeSet::new();
        let mut path = Vec::with_capacity(k);
        for start in 0..f {
            path.clear();
            path.push(start);
            self.extend_circuit(k, &mut path, &mut found);
        }
        found.into_iter().collect()
    }

    fn extend_circuit(&self, k: usize, path: &mut Vec<usize>, found: &mut BTreeSet<Vec<usize>>) {
        let last = *path.last().unwrap();
        if path.len() == k {
            if self.adjacent(last, path[0]) && self.is_prismatic(path) {
                found.insert(canonical_cycle(path));
            }
            return;
        }
        for &next in &self.face_cycles[last] {
            if next > path[0] && !path.contains(&next) {
                path.push(next);
                self.extend_circuit(k, path, found);
                path.pop();
            }
        }
    }

    fn is_prismatic(&self, cycle: &[usize]) -> bool {
        let k = cycle.len();
        let crossed: Vec<usize> =
            (0..k).map(|i| self.edge_between(cycle[i], cycle[(i + 1) % k]).expect("adjacent")).collect();
        let ends: Vec<Vec<usize>> = crossed.iter().map(|&e| self.edge_vertices(e)).collect();
        for a in 0..k {
            for b in (a + 1)..k {
                if ends[a].iter().any(|v| ends[b].contains(v)) {
                    return false;
                }
            }
        }
        true
    }

    /// The full incidence-preserving symmetry group, by backtracking.
    pub fn symmetry_group(&self) -> SymmetryGroup {
        let f = self.num_faces();
        let vset: BTreeSet<BTreeSet<usize>> = self.vertices.iter().map(|v| v.iter().copied().collect()).collect();
        let mut order = vec![0usize];
        let mut seen = vec![false; f];
        seen[0] = true;
        let mut q = 0;
        while q < order.len() {
            for &j in &self.face_cycles[order[q]] {
                if !seen[j] {
                    seen[j] = true;
                    order.push(j);
                }
            }
            q += 1;
        }
        let mut elements = Vec::new();
        let mut map = vec![usize::MAX; f];
        let mut used = vec![false; f];
        self.extend_symmetry(&order, 0, &mut map, &mut used, &vset, &mut elements);
        elements.sort();
        SymmetryGroup { elements }
    }

    fn extend_symmetry(
        &self,
        order: &[usize],
        depth: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        vset: &BTreeSet<BTreeSet<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == order.len() {
            let ok = self.vertices.iter().all(|v| vset.contains(&v.iter().map(|&x| map[x]).collect::<BTreeSet<_>>()));
            if ok {
                out.push(map.clone());
            }
            return;
        }
        let x = order[depth];
        for y in 0..self.num_faces() {
            if used[y] || self.face_cycles[y].len() != self.face_cycles[x].len() {
                continue;
            }
            let consistent = order[..depth].iter().all(|&h| self.adjacent(x, h) == self.adjacent(y, map[h]));
            if consistent {
                map[x] = y;
                used[y] = true;
                self.extend_symmetry(order, depth + 1, map, used, vset, out);
                used[y] = false;
                map[x] = usize::MAX;
            }
        }
    }

    /// Dimension of the group of projective automorphisms of the realized
    /// polyhedron: 3 for a tetrahedron, 1 for a cone over an n-gon with n > 3,
    /// 0 otherwise.
    pub fn automorphism_dim(&self) -> usize {
        if self.is_tetrahedron() {
            3
        } else if self.cone_apex().is_some() && self.num_faces() > 4 {
            1
        } else {
            0
        }
    }

    /// Text form of the face cycles (1-based).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for cyc in &self.face_cycles {
            let line: Vec<String> = cyc.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Re-derives the internal edge lookup after deserialization.
    pub fn reindex(&mut self) {
        self.edge_index = self.edges.iter().enumerate().map(|(n, &(a, b))| (key(a, b), n)).collect();
    }
}

fn cyclic_step(c: &[usize], x: usize, forward: bool) -> usize {
    let p = c.iter().position(|&y| y == x).expect("neighbor in cycle");
    if forward {
        c[(p + 1) % c.len()]
    } else {
        c[(p + c.len() - 1) % c.len()]
    }
}

/// Breadth-first reorientation. Whether two neighbors agree is read off at a
/// trivalent end of their shared edge; pairs without one keep the input order.
fn orient_cycles(mut cycles: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let f = cycles.len();
    let mut done = vec![false; f];
    done[0] = true;
    let mut queue = vec![0];
    let mut q = 0;
    while q < queue.len() {
        let i = queue[q];
        q += 1;
        for k in cycles[i].clone() {
            if done[k] {
                continue;
            }
            let (ip, is) = (cyclic_step(&cycles[i], k, false), cyclic_step(&cycles[i], k, true));
            let (kp, ks) = (cyclic_step(&cycles[k], i, false), cyclic_step(&cycles[k], i, true));
            if ks == is || kp == ip {
                cycles[k].reverse();
            }
            done[k] = true;
            queue.push(k);
        }
    }
    cycles
}

fn trace_vertices(cycles: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, PolytopeError> {
    let succ = |face: usize, nb: usize| -> usize {
        let c = &cycles[face];
        let p = c.iter().position(|&x| x == nb).expect("neighbor in cycle");
        c[(p + 1) % c.len()]
    };
    // A corner `(face, from)` sits between neighbor `from` and its successor.
    let mut seen = BTreeSet::new();
    let mut vertices = Vec::new();
    for (i, cyc) in cycles.iter().enumerate() {
        for &j in cyc {
            if seen.contains(&(i, j)) {
                continue;
            }
            let mut faces = Vec::new();
            let (mut face, mut from) = (i, j);
            loop {
                seen.insert((face, from));
                if faces.contains(&face) {
                    return Err(PolytopeError::NonPolyhedral("face cycles are not consistently oriented".into()));
                }
                faces.push(face);
                let next = succ(face, from);
                (face, from) = (next, face);
                if (face, from) == (i, j) {
                    break;
                }
            }
            if faces.len() < 3 {
                return Err(PolytopeError::NonPolyhedral("vertex with fewer than three faces".into()));
            }
            vertices.push(faces);
        }
    }
    Ok(vertices)
}

/// Lexicographically minimal rotation or reflection of a cyclic sequence.
pub fn canonical_cycle(c: &[usize]) -> Vec<usize> {
    let n = c.len();
    let mut best: Option<Vec<usize>> = None;
    for r in 0..n {
        for rev in [false, true] {
            let cand: Vec<usize> = (0..n)
                .map(|k| if rev { c[(r + n - k) % n] } else { c[(r + k) % n] })
                .collect();
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Incidence-preserving face permutations; `elements[g][i]` is the image of face `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    pub elements: Vec<Vec<usize>>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Edge permutation induced by element `g`: edge `e` maps to `perm[e]`.
    pub fn edge_permutation(&self, p: &CombinatorialPolyhedron, g: usize) -> Vec<usize> {
        let m = &self.elements[g];
        p.edges.iter().map(|&(a, b)| p.edge_between(m[a], m[b]).expect("symmetry maps edges")).collect()
    }

    pub fn contains(&self, perm: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(perm)).is_ok()
    }

    pub fn compose(&self, g: usize, h: usize) -> Vec<usize> {
        let (a, b) = (&self.elements[g], &self.elements[h]);
        (0..a.len()).map(|i| a[b[i]]).collect()
    }
}

/// Edge orders of a Coxeter orbifold, indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoxeterLabeling {
    pub orders: Vec<u32>,
}

impl CoxeterLabeling {
    pub fn new(p: &CombinatorialPolyhedron, orders: Vec<u32>) -> Result<Self, PolytopeError> {
        if orders.len() != p.num_edges() {
            return Err(PolytopeError::LabelingSize { expected: p.num_edges(), got: orders.len() });
        }
        if let Some(&o) = orders.iter().find(|&&o| o < 2) {
            return Err(PolytopeError::OrderTooSmall(o));
        }
        Ok(CoxeterLabeling { orders })
    }

    pub fn uniform(p: &CombinatorialPolyhedron, order: u32) -> Self {
        CoxeterLabeling { orders: vec![order; p.num_edges()] }
    }

    /// Parses a whitespace separated order string such as `2 3 2 2`.
    pub fn parse(p: &CombinatorialPolyhedron, s: &str) -> Result<Self, PolytopeError> {
        let orders = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| PolytopeError::Parse(format!("bad order `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, orders)
    }

    pub fn num_right_angles(&self) -> usize {
        self.orders.iter().filter(|&&o| o == 2).count()
    }

    pub fn order(&self, p: &CombinatorialPolyhedron, a: usize, b: usize) -> Option<u32> {
        p.edge_between(a, b).map(|e| self.orders[e])
    }

    /// The labeling after applying a symmetry's edge permutation.
    pub fn permuted(&self, edge_perm: &[usize]) -> Self {
        let mut orders = vec![0; self.orders.len()];
        for (e, &o) in self.orders.iter().enumerate() {
            orders[edge_perm[e]] = o;
        }
        CoxeterLabeling { orders }
    }
}

impl fmt::Display for CoxeterLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.orders.iter().map(|o| o.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub f: usize,
    pub e: usize,
    pub v: usize,
    pub e2: usize,
    /// `3f - e - e2`: variables minus equations of the Vinberg system.
    pub excess: i64,
}

pub fn counts(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Counts {
    let (f, e, v) = (p.num_faces(), p.num_edges(), p.num_vertices());
    let e2 = l.num_right_angles();
    Counts { f, e, v, e2, excess: 3 * f as i64 - e as i64 - e2 as i64 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Finite,
    Ideal,
    Hyperinfinite,
}

/// Sum of `1/n` over the edges at a vertex, exactly.
pub fn vertex_angle_sum(p: &CombinatorialPolyhedron, l: &CoxeterLabeling, v: usize) -> Ratio<i64> {
    p.vertex_edges(v).iter().map(|&e| Ratio::new(1, l.orders[e] as i64)).sum()
}

pub fn classify_vertices(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Result<Vec<VertexKind>, PolytopeError> {
    (0..p.num_vertices())
        .map(|v| {
            if p.vertices[v].len() != 3 {
                return Err(PolytopeError::NonTrivalentVertex(v));
            }
            let s = vertex_angle_sum(p, l, v);
            Ok(match s.cmp(&Ratio::from_integer(1)) {
                std::cmp::Ordering::Greater => VertexKind::Finite,
                std::cmp::Ordering::Equal => VertexKind::Ideal,
                std::cmp::Ordering::Less => VertexKind::Hyperinfinite,
            })
        })
        .collect()
}

/// Builtin catalog with fixed face and edge numbering.
pub mod catalog {
    use super::*;

    fn build(name: &str, cycles: &[&[usize]], edges: &[(usize, usize)]) -> CombinatorialPolyhedron {
        let cycles = cycles.iter().map(|c| c.iter().map(|x| x - 1).collect()).collect();
        let edges: Vec<_> = edges.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
        CombinatorialPolyhedron::from_face_cycles(name, cycles)
            .and_then(|p| p.with_edge_numbering(&edges))
            .expect("builtin polyhedron")
    }

    /// Cube with F1 center, F2 left, F3 bottom, F4 right, F5 top, F6 outer in
    /// the planar diagram, edges e1..e12 in the table numbering.
    pub fn cube() -> CombinatorialPolyhedron {
        build(
            "cube",
            &[&[2, 3, 4, 5], &[1, 5, 6, 3], &[1, 2, 6, 4], &[1, 3, 6, 5], &[1, 4, 6, 2], &[2, 5, 4, 3]],
            &CUBE_EDGES,
        )
    }

    pub const CUBE_EDGES: [(usize, usize); 12] =
        [(1, 5), (1, 4), (1, 3), (1, 2), (2, 5), (5, 4), (4, 3), (3, 2), (2, 6), (5, 6), (4, 6), (3, 6)];

    /// Dodecahedron with F11 center and F12 outer, edges e1..e30 in the table numbering.
    pub fn dodecahedron() -> CombinatorialPolyhedron {
        build(
            "dodecahedron",
            &[
                &[2, 10, 9, 11, 3],
                &[1, 3, 4, 12, 10],
                &[1, 11, 5, 4, 2],
                &[2, 3, 5, 6, 12],
                &[3, 11, 7, 6, 4],
                &[4, 5, 7, 8, 12],
                &[5, 11, 9, 8, 6],
                &[6, 7, 9, 10, 12],
                &[1, 10, 8, 7, 11],
                &[1, 2, 12, 8, 9],
                &[1, 9, 7, 5, 3],
                &[2, 4, 6, 8, 10],
            ],
            &DODECAHEDRON_EDGES,
        )
    }

    pub const DODECAHEDRON_EDGES: [(usize, usize); 30] = [
        (11, 5),
        (11, 3),
        (11, 1),
        (11, 9),
        (11, 7),
        (5, 7),
        (5, 3),
        (3, 1),
        (1, 9),
        (9, 7),
        (5, 6),
        (3, 4),
        (1, 2),
        (9, 10),
        (7, 8),
        (5, 4),
        (3, 2),
        (1, 10),
        (9, 8),
        (7, 6),
        (6, 4),
        (4, 2),
        (2, 10),
        (10, 8),
        (8, 6),
        (6, 12),
        (4, 12),
        (2, 12),
        (10, 12),
        (8, 12),
    ];

    /// Prism over an n-gon: side faces 1..n in cyclic order, top n+1,
    /// bottom n+2. Edges: side-side (k, k+1), then top (k, n+1), then bottom (k, n+2).
    pub fn prism(n: usize) -> Result<CombinatorialPolyhedron, PolytopeError> {
        if n < 3 {
            return Err(PolytopeError::NonPolyhedral(format!("prism over a {n}-gon")));
        }
        let (top, bottom) = (n, n + 1);
        let mut cycles = Vec::new();
        for k in 0..n {
            let next = (k + 1) % n;
            let prev = (k + n - 1) % n;
            cycles.push(vec![prev, top, next, bottom]);
        }
        cycles.push((0..n).collect());
        cycles.push((0..n).rev().collect());
        let mut edges = Vec::new();
        for k in 0..n {
            edges.push((k, (k + 1) % n));
        }
        for k in 0..n {
            edges.push((k, top));
        }
        for k in 0..n {
            edges.push((k, bottom));
        }
        CombinatorialPolyhedron::from_face_cycles(&format!("prism{n}"), cycles)?.with_edge_numbering(&edges)
    }

    /// Triangular prism with triangles F1, F2 and quadrilaterals F3, F4, F5.
    pub fn triangular_prism() -> CombinatorialPolyhedron {
        build(
            "triangular-prism",
            &[&[3, 4, 5], &[3, 5, 4], &[1, 4, 2, 5], &[1, 5, 2, 3], &[1, 3, 2, 4]],
            &[(1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 5)],
        )
    }

    pub fn tetrahedron() -> CombinatorialPolyhedron {
        build(
            "tetrahedron",
            &[&[2, 3, 4], &[1, 4, 3], &[1, 2, 4], &[1, 3, 2]],
            &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
        )
    }

    /// Pyramid over an n-gon: side faces 1..n, base n+1.
    pub fn pyramid(n: usize) -> Result<CombinatorialPolyhedron, PolytopeError> {
        if n < 3 {
            return Err(PolytopeError::NonPolyhedral(format!("pyramid over a {n}-gon")));
        }
        let base = n;
        let mut cycles = Vec::new();
        for k in 0..n {
            cycles.push(vec![(k + n - 1) % n, base, (k + 1) % n]);
        }
        cycles.push((0..n).collect());
        CombinatorialPolyhedron::from_face_cycles(&format!("pyramid{n}"), cycles)
    }

    /// Antiprism over an n-gon: triangles 1..2n alternating up/down, caps 2n+1 (top) and 2n+2 (bottom).
    pub fn antiprism(n: usize) -> Result<CombinatorialPolyhedron, PolytopeError> {
        if n < 3 {
            return Err(PolytopeError::NonPolyhedral(format!("antiprism over a {n}-gon")));
        }
        let m = 2 * n;
        let (top, bottom) = (m, m + 1);
        let mut cycles = Vec::new();
        for k in 0..m {
            let prev = (k + m - 1) % m;
            let next = (k + 1) % m;
            if k % 2 == 0 {
                cycles.push(vec![prev, top, next]);
            } else {
                cycles.push(vec![prev, next, bottom]);
            }
        }
        cycles.push((0..m).filter(|k| k % 2 == 0).rev().collect());
        cycles.push((0..m).filter(|k| k % 2 == 1).collect());
        CombinatorialPolyhedron::from_face_cycles(&format!("antiprism{n}"), cycles)
    }

    /// Looks up a builtin by name: `cube`, `dodecahedron`, `tetrahedron`,
    /// `triangular-prism`, `prismN`, `pyramidN`, `antiprismN`.
    pub fn by_name(name: &str) -> Result<CombinatorialPolyhedron, PolytopeError> {
        let numbered = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
        match name {
            "cube" => Ok(cube()),
            "dodecahedron" => Ok(dodecahedron()),
            "tetrahedron" => Ok(tetrahedron()),
            "triangular-prism" => Ok(triangular_prism()),
            _ => {
                if let Some(n) = numbered("antiprism") {
                    antiprism(n)
                } else if let Some(n) = numbered("prism") {
                    prism(n)
                } else if let Some(n) = numbered("pyramid") {
                    pyramid(n)
                } else {
                    Err(PolytopeError::UnknownPolyhedron(name.to_string()))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::catalog::*;
    use super::*;

    #[test]
    fn catalog_counts() {
        let c = cube();
        assert_eq!((c.num_faces(), c.num_edges(), c.num_vertices()), (6, 12, 8));
        let d = dodecahedron();
        assert_eq!((d.num_faces(), d.num_edges(), d.num_vertices()), (12, 30, 20));
        for n in 3..=12 {
            let p = prism(n).unwrap();
            assert_eq!((p.num_faces(), p.num_edges(), p.num_vertices()), (n + 2, 3 * n, 2 * n));
            assert!(p.is_trivalent());
            assert!(p.is_prism());
        }
        let t = triangular_prism();
        assert_eq!((t.num_faces(), t.num_edges(), t.num_vertices()), (5, 9, 6));
        assert!(t.is_prism());
        let a = antiprism(4).unwrap();
        assert_eq!((a.num_faces(), a.num_edges(), a.num_vertices()), (10, 16, 8));
    }

    #[test]
    fn circuits() {
        let c = cube();
        assert!(c.prismatic_circuits(3).is_empty());
        assert_eq!(c.prismatic_circuits(4).len(), 3);
        let t = triangular_prism();
        assert_eq!(t.prismatic_circuits(3), vec![vec![2, 3, 4]]);
    }

    #[test]
    fn symmetry_orders() {
        assert_eq!(cube().symmetry_group().order(), 48);
        assert_eq!(dodecahedron().symmetry_group().order(), 120);
        assert_eq!(prism(6).unwrap().symmetry_group().order(), 24);
        assert_eq!(tetrahedron().symmetry_group().order(), 24);
    }

    #[test]
    fn excess_counts() {
        let c = cube();
        let l = CoxeterLabeling::parse(&c, "2 3 2 2 3 2 2 3 2 3 2 3").unwrap();
        let k = counts(&c, &l);
        assert_eq!((k.e2, k.excess), (7, -1));
        assert_eq!(counts(&c, &CoxeterLabeling::uniform(&c, 3)).excess, 6);
    }

    #[test]
    fn automorphism_dimensions() {
        assert_eq!(tetrahedron().automorphism_dim(), 3);
        assert_eq!(pyramid(4).unwrap().automorphism_dim(), 1);
        assert_eq!(cube().automorphism_dim(), 0);
        assert_eq!(pyramid(3).unwrap().automorphism_dim(), 3);
    }

    #[test]
    fn vertex_classes() {
        let t = triangular_prism();
        let mut l = CoxeterLabeling::uniform(&t, 2);
        let v = 0;
        let es = t.vertex_edges(v);
        l.orders[es[0]] = 3;
        assert_eq!(classify_vertices(&t, &l).unwrap()[v], VertexKind::Finite);
        let c = cube();
        let ideal = CoxeterLabeling::uniform(&c, 3);
        assert!(classify_vertices(&c, &ideal).unwrap().iter().all(|k| *k == VertexKind::Ideal));
        let mut h = CoxeterLabeling::uniform(&c, 2);
        for (e, o) in c.vertex_edges(0).into_iter().zip([2, 4, 5]) {
            h.orders[e] = o;
        }
        assert_eq!(classify_vertices(&c, &h).unwrap()[0], VertexKind::Hyperinfinite);
        assert!(classify_vertices(&pyramid(4).unwrap(), &CoxeterLabeling { orders: vec![3; 8] }).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CombinatorialPolyhedron::parse("x", "2 3\n1 3\n1 2\n").is_err());
        let text = cube().to_text();
        let again = CombinatorialPolyhedron::parse("cube", &text).unwrap();
        assert_eq!(again.num_vertices(), 8);
        let flipped = text.replacen("2 3 4 5", "5 4 3 2", 1);
        assert_eq!(CombinatorialPolyhedron::parse("flipped", &flipped).unwrap().num_vertices(), 8);
        assert!(CombinatorialPolyhedron::parse("short", "2 3 4\n1 3 4\n1 2 4\n1 2\n").is_err());
    }

    #[test]
    fn edge_numbering_of_cube() {
        let c = cube();
        assert_eq!(c.edge_between(0, 4), Some(0));
        assert_eq!(c.edge_between(2, 5), Some(11));
    }
}
