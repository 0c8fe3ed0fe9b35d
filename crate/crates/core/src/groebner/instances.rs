//! Exact certificates for the two cubes with a one-dimensional local
//! deformation space that needs elimination: cu21 and cu27.

use serde::Serialize;

use super::analysis::{analyze_basis, radical_step, BasisAnalysis};
use super::buchberger::{groebner_basis, normal_form, GroebnerOptions};
use super::field::{rat, FieldElem, NumberField, Rational};
use super::ideal::{coordinate_name, vinberg_ideal, ExactRealization};
use super::poly::{Poly, PolyRing};
use super::GroebnerError;
use crate::andreev::Representative;
use crate::localdim::ExactElimination;
use crate::polytope::{catalog, CombinatorialPolyhedron, CoxeterLabeling};

/// Catalog-cube face to figure face (0-based) for cu21.
pub const CU21_FIGURE_FACES: [usize; 6] = [1, 4, 5, 2, 0, 3];
/// Catalog-cube face to figure face (0-based) for cu27.
pub const CU27_FIGURE_FACES: [usize; 6] = [0, 2, 3, 4, 1, 5];

pub const CU21_STRING: &str = "2 3 2 2 3 2 2 3 2 3 2 3";
pub const CU27_STRING: &str = "2 3 2 2 3 3 3 3 2 3 2 3";

#[derive(Clone, Debug, Serialize)]
pub struct GroebnerCertificate {
    pub name: String,
    pub field: String,
    pub variable_order: Vec<String>,
    pub generators: usize,
    /// Roots substituted for perfect-power generators, as `(root, power)`.
    pub radical_roots: Vec<(String, u32)>,
    pub basis: Vec<String>,
    pub analysis: BasisAnalysis,
    pub free_variables: Vec<String>,
    pub dimension: usize,
}

impl GroebnerCertificate {
    /// Plain-text export of the basis, one generator per line.
    pub fn basis_text(&self) -> String {
        let mut out = format!("# {} over Q({}); lex order {}\n", self.name, self.field, self.variable_order.join(" > "));
        for (root, k) in &self.radical_roots {
            out.push_str(&format!("# radical: ({root})^{k} replaced by {root}\n"));
        }
        for g in &self.basis {
            out.push_str(g);
            out.push('\n');
        }
        out.push_str(&format!("# free: {}\n", self.free_variables.join(", ")));
        out
    }
}

impl From<&GroebnerCertificate> for ExactElimination {
    fn from(c: &GroebnerCertificate) -> Self {
        ExactElimination { free_variables: c.free_variables.clone() }
    }
}

/// Orbifolds with a built-in exact realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BuiltinInstance {
    Cu21,
    Cu27,
}

impl BuiltinInstance {
    /// The instance equivalent to `l` under the symmetries of the cube.
    pub fn identify(p: &CombinatorialPolyhedron, l: &CoxeterLabeling) -> Option<Self> {
        let cube = catalog::cube();
        if p.to_text() != cube.to_text() {
            return None;
        }
        let group = cube.symmetry_group();
        let rep = Representative::default();
        let target = rep.canonical(&cube, &group, l);
        [(BuiltinInstance::Cu21, CU21_STRING), (BuiltinInstance::Cu27, CU27_STRING)].into_iter().find_map(|(inst, s)| {
            let known = CoxeterLabeling::parse(&cube, s).expect("valid cube labeling");
            (rep.canonical(&cube, &group, &known) == target).then_some(inst)
        })
    }

    pub fn certificate(self, opts: GroebnerOptions) -> Result<(GroebnerCertificate, Vec<Poly>, PolyRing), GroebnerError> {
        match self {
            BuiltinInstance::Cu21 => cu21_certificate(opts),
            BuiltinInstance::Cu27 => cu27_certificate(opts),
        }
    }
}

/// Computes the reduced basis, replaces perfect powers by their roots until
/// none remain, and analyses the result at the origin.
pub fn certify(
    name: &str,
    real: &ExactRealization,
    ring: &PolyRing,
    opts: GroebnerOptions,
) -> Result<(GroebnerCertificate, Vec<Poly>), GroebnerError> {
    let generators = vinberg_ideal(real, ring)?;
    let mut basis = groebner_basis(&generators, opts)?;
    let mut radical_roots = Vec::new();
    while let Some((next, roots)) = radical_step(&basis, ring, opts)? {
        radical_roots.extend(roots.iter().map(|(q, k)| (ring.display(q).to_string(), *k)));
        basis = next;
    }
    let analysis = analyze_basis(&basis, ring, opts)?;
    let cert = GroebnerCertificate {
        name: name.to_string(),
        field: real.field.name().to_string(),
        variable_order: ring.vars().to_vec(),
        generators: generators.len(),
        radical_roots,
        basis: basis.iter().map(|g| ring.display(g).to_string()).collect(),
        free_variables: analysis.free.iter().map(|&v| ring.vars()[v].clone()).collect(),
        dimension: analysis.dimension,
        analysis,
    };
    Ok((cert, basis))
}

/// Ring whose variables are listed face by face, largest first.
pub fn ring_for_faces(field: &NumberField, face_order: &[usize]) -> PolyRing {
    let f = face_order.len();
    let vars = face_order.iter().flat_map(|&i| (0..4).map(move |k| coordinate_name(f, i, k))).collect();
    PolyRing::new(field.clone(), vars)
}

fn cube_edges(labels: &str, figure: &[usize; 6]) -> Vec<(usize, usize, u32)> {
    let cube = catalog::cube();
    let l = CoxeterLabeling::parse(&cube, labels).expect("valid cube labeling");
    cube.edges.iter().zip(&l.orders).map(|(&(a, b), &m)| (figure[a], figure[b], m)).collect()
}

/// cu21 in figure numbering over `Q(sqrt2, sqrt3, sqrt5)`.
pub fn cu21_realization() -> Result<ExactRealization, GroebnerError> {
    let (k, r) = NumberField::multiquadratic(&[2, 3, 5])?;
    let (s2, s3, s5) = (&r[0], &r[1], &r[2]);
    let q = |n: i64, d: i64| k.rational(rat(n, d));
    let half = q(1, 2);
    let s6 = s2 * s3;
    let normals = vec![
        [q(0, 1), q(1, 1), q(0, 1), q(0, 1)],
        [q(0, 1), q(0, 1), q(1, 1), q(0, 1)],
        [q(0, 1), q(0, 1), q(-1, 2), s3 * &half],
        [s5 * &half, q(-1, 2), -&(&s6 * &half), -&(s2 * &half)],
        [s5 * &half, q(-1, 2), q(0, 1), -s2],
        [s5 * &half, q(-3, 2), q(0, 1), q(0, 1)],
    ];
    Ok(ExactRealization { field: k, normals, edges: cube_edges(CU21_STRING, &CU21_FIGURE_FACES) })
}

/// Largest-first face order of the cu21 elimination (0-based figure faces).
pub const CU21_FACE_ORDER: [usize; 6] = [3, 4, 5, 0, 1, 2];
/// Largest-first face order of the cu27 elimination.
pub const CU27_FACE_ORDER: [usize; 6] = [1, 3, 4, 5, 2, 0];

/// The published reduced basis for cu21, and its three nonlinear members.
pub fn cu21_reference(ring: &PolyRing) -> (Vec<Poly>, [Poly; 3]) {
    let k = ring.field().clone();
    let (_, r) = NumberField::multiquadratic(&[2, 3, 5]).expect("field");
    let s5 = k.elem(r[2].coeffs().to_vec());
    let v = |name: &str| ring.named(name);
    let c = |x: FieldElem| ring.constant(x);
    let two_over_s5 = k.int(2).div(&s5).expect("nonzero");
    let f1 = v("c11").neg().add(&v("c62").mul(&c(two_over_s5.clone()))).add(&v("c11").mul(&v("c62")).mul(&c(k.int(2))));
    let f2 = v("c11").neg().add(&v("c52").mul(&c(two_over_s5))).add(&v("c11").mul(&v("c52")));
    let f3 = v("c52").neg().add(&v("c62")).add(&v("c52").mul(&v("c62")));
    let mut basis: Vec<Poly> = ["c34", "c33", "c32", "c31", "c24", "c23", "c22", "c21", "c14", "c13", "c12", "c64", "c63"]
        .iter()
        .map(|n| v(n))
        .collect();
    basis.push(f1.clone());
    basis.push(v("c61").mul(&c(s5.clone())).add(&v("c62").mul(&c(k.int(3)))));
    basis.push(v("c54"));
    basis.push(v("c53"));
    basis.push(f2.clone());
    basis.push(f3.clone());
    basis.push(v("c51").mul(&c(s5.clone())).add(&v("c52")));
    basis.push(v("c44"));
    basis.push(v("c43"));
    basis.push(v("c42").sub(&v("c52")));
    basis.push(v("c41").mul(&c(s5)).add(&v("c52")));
    (basis, [f1, f2, f3])
}

/// Checks `c62 f2 + c11 f3 = c52 f1` for the published nonlinear members.
pub fn cu21_syzygy_holds(ring: &PolyRing) -> bool {
    let (_, [f1, f2, f3]) = cu21_reference(ring);
    let v = |name: &str| ring.named(name);
    v("c62").mul(&f2).add(&v("c11").mul(&f3)) == v("c52").mul(&f1)
}

/// Whether two generating sets span the same ideal, by reduced bases.
pub fn same_ideal(a: &[Poly], b: &[Poly], opts: GroebnerOptions) -> Result<bool, GroebnerError> {
    let ga = groebner_basis(a, opts)?;
    for g in b {
        if !normal_form(g, &ga)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(ga == groebner_basis(b, opts)?)
}

fn theta_poly(k: &NumberField, coeffs: &[(usize, i64, i64)]) -> FieldElem {
    let mut c = vec![Rational::from_integer(0.into()); 12];
    for &(p, n, d) in coeffs {
        c[p] = rat(n, d);
    }
    k.elem(c)
}

/// cu27 in figure numbering over the degree-12 field containing all normal
/// coordinates.
pub fn cu27_realization() -> Result<ExactRealization, GroebnerError> {
    let k = NumberField::from_integers(
        "theta",
        &[64, 0, -384, 0, -208, 0, 320, 0, -52, 0, -24, 0, 1],
        -0.3957,
        -0.3955,
    )?;
    let u = theta_poly(&k, &[(1, 13, 4), (3, 13, 8), (5, -5, 2), (7, 13, 32), (9, 3, 16), (11, -1, 128)]);
    let v = theta_poly(&k, &[(0, -47, 32), (2, -1, 16), (4, 73, 64), (6, -1, 4), (8, -47, 512), (10, 1, 256)]);
    let w = theta_poly(&k, &[(0, -1, 1), (2, -7, 8), (4, 5, 4), (6, -13, 64), (8, -3, 32), (10, 1, 256)]);
    let x = theta_poly(&k, &[(1, -169, 64), (3, -45, 128), (5, 195, 128), (7, -89, 256), (9, -129, 1024), (11, 11, 2048)]);
    let y = theta_poly(&k, &[(1, -11, 4), (3, -13, 8), (5, 5, 2), (7, -13, 32), (9, -3, 16), (11, 1, 128)]);
    let z = theta_poly(&k, &[(1, -35, 32), (3, -55, 64), (5, 9, 8), (7, -7, 64), (9, -37, 512), (11, 3, 1024)]);
    let q = |n: i64, d: i64| k.rational(rat(n, d));
    let normals = vec![
        [q(0, 1), q(0, 1), q(0, 1), q(1, 1)],
        [x.clone(), q(-1, 2), -&u, q(0, 1)],
        [q(0, 1), q(1, 1), q(0, 1), q(0, 1)],
        [x, q(-1, 2), u, q(0, 1)],
        [y, v, q(0, 1), q(-1, 2)],
        [z, q(0, 1), q(0, 1), w],
    ];
    Ok(ExactRealization { field: k, normals, edges: cube_edges(CU27_STRING, &CU27_FIGURE_FACES) })
}

/// Full cu21 certificate in the published variable order.
pub fn cu21_certificate(opts: GroebnerOptions) -> Result<(GroebnerCertificate, Vec<Poly>, PolyRing), GroebnerError> {
    let real = cu21_realization()?;
    let ring = ring_for_faces(&real.field, &CU21_FACE_ORDER);
    let (cert, basis) = certify("cu21", &real, &ring, opts)?;
    Ok((cert, basis, ring))
}

/// Full cu27 certificate in the published variable order. Expensive.
pub fn cu27_certificate(opts: GroebnerOptions) -> Result<(GroebnerCertificate, Vec<Poly>, PolyRing), GroebnerError> {
    let real = cu27_realization()?;
    let ring = ring_for_faces(&real.field, &CU27_FACE_ORDER);
    let (cert, basis) = certify("cu27", &real, &ring, opts)?;
    Ok((cert, basis, ring))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cu21_realization_is_exact() {
        cu21_realization().unwrap().verify().unwrap();
    }

    #[test]
    fn cu21_basis_matches_reference() {
        let opts = GroebnerOptions::default();
        let (cert, basis, ring) = cu21_certificate(opts).unwrap();
        assert_eq!(cert.free_variables, vec!["c11".to_string()]);
        assert_eq!(cert.dimension, 1);
        assert_eq!(cert.analysis.implied.len(), 1);
        let (reference, _) = cu21_reference(&ring);
        assert!(same_ideal(&basis, &reference, opts).unwrap());
        assert!(cu21_syzygy_holds(&ring));
    }

    #[test]
    fn cu21_dimension_is_order_independent() {
        let real = cu21_realization().unwrap();
        for order in [[0, 1, 2, 3, 4, 5], [5, 4, 3, 2, 1, 0], [2, 0, 4, 1, 5, 3]] {
            let ring = ring_for_faces(&real.field, &order);
            let (cert, _) = certify("cu21", &real, &ring, GroebnerOptions::default()).unwrap();
            assert_eq!(cert.dimension, 1, "order {order:?}");
        }
    }

    #[test]
    fn identifies_builtin_instances_up_to_symmetry() {
        let cube = catalog::cube();
        let group = cube.symmetry_group();
        let l = CoxeterLabeling::parse(&cube, CU27_STRING).unwrap();
        for g in 0..group.order() {
            let moved = l.permuted(&group.edge_permutation(&cube, g));
            assert_eq!(BuiltinInstance::identify(&cube, &moved), Some(BuiltinInstance::Cu27));
        }
        let l = CoxeterLabeling::parse(&cube, CU21_STRING).unwrap();
        assert_eq!(BuiltinInstance::identify(&cube, &l), Some(BuiltinInstance::Cu21));
        let other = CoxeterLabeling::parse(&cube, "2 3 2 3 3 3 3 3 2 3 2 3").unwrap();
        assert_eq!(BuiltinInstance::identify(&cube, &other), None);
    }

    #[test]
    fn budget_is_enforced() {
        let real = cu21_realization().unwrap();
        let ring = ring_for_faces(&real.field, &CU21_FACE_ORDER);
        let err = certify("cu21", &real, &ring, GroebnerOptions { term_budget: 10 }).unwrap_err();
        assert_eq!(err, GroebnerError::ResourceExceeded { budget: 10 });
    }

    fn coefficient(ring: &PolyRing, g: &Poly, var: &str) -> FieldElem {
        let target = ring.named(var);
        g.terms().iter().find(|(m, _)| m == target.lm()).map(|(_, c)| c.clone()).unwrap_or_else(|| ring.field().zero())
    }

    fn generator_with_lm<'a>(basis: &'a [Poly], lm: &Poly) -> &'a Poly {
        basis.iter().find(|g| g.lm() == lm.lm()).expect("generator present")
    }

    fn is_root(x: &FieldElem, coeffs: &[i64]) -> bool {
        let k = x.field();
        coeffs.iter().rev().fold(k.zero(), |acc, &c| &(&acc * x) + &k.int(c)).is_zero()
    }

    #[test]
    fn cu27_certificate_free_variable() {
        let (cert, basis, ring) = cu27_certificate(GroebnerOptions::default()).unwrap();
        assert_eq!(cert.radical_roots.len(), 1);
        assert_eq!(cert.radical_roots[0].1, 2);
        assert_eq!(cert.free_variables, vec!["c33".to_string()]);
        assert_eq!(cert.analysis.implied.len(), 1);
        // Coefficients are the published constants delta, epsilon and mu.
        let g42 = generator_with_lm(&basis, &ring.named("c42"));
        let delta = ring.field().int(-1).div(&coefficient(&ring, g42, "c43")).unwrap();
        assert!(is_root(&delta, &[961, 0, -1017, 0, 251, 0, 5]));
        assert!((delta.to_f64() - 1.25796).abs() < 1e-5);
        let g41 = generator_with_lm(&basis, &ring.named("c41"));
        let mu = ring.field().one().div(&coefficient(&ring, g41, "c43")).unwrap();
        assert!(is_root(&mu, &[961, 0, -2288, 0, -1152, 0, 80]));
        assert!((mu.to_f64() - 0.597767).abs() < 1e-6);
        let bold = generator_with_lm(&basis, &ring.named("c43").mul(&ring.named("c33")));
        let epsilon = coefficient(&ring, bold, "c43");
        assert!(is_root(&epsilon, &[64, 0, -144, 0, 44, 0, 5]));
        assert!((epsilon.to_f64() - 0.733796).abs() < 1e-6);
        assert_eq!(coefficient(&ring, bold, "c33"), -&delta);
        // Published relation c23 f1 + c43 f2 = c33 f3.
        let v = |n: &str| ring.named(n);
        let f1 = bold.clone();
        let f2 = generator_with_lm(&basis, &v("c23").mul(&v("c33"))).clone();
        let f3 = generator_with_lm(&basis, &v("c23").mul(&v("c43"))).scale(&ring.field().int(2));
        assert_eq!(v("c23").mul(&f1).add(&v("c43").mul(&f2)), v("c33").mul(&f3));
    }
}
