//! The Vinberg ideal at an exact hyperbolic realization, in displacement
//! coordinates centred on the hyperbolic point.

use std::cmp::Ordering;

use super::field::{rat, FieldElem, NumberField, Rational};
use super::poly::{Poly, PolyRing};
use super::GroebnerError;

/// Exact unit normals in a number field, with the labelled edges.
#[derive(Clone, Debug)]
pub struct ExactRealization {
    pub field: NumberField,
    pub normals: Vec<[FieldElem; 4]>,
    /// `(face, face, order)`, faces 0-based.
    pub edges: Vec<(usize, usize, u32)>,
}

/// Exact `4 cos^2(pi / m)` for the orders whose cosine is a square root of a
/// rational.
pub fn four_cos_squared(m: u32) -> Result<Rational, GroebnerError> {
    match m {
        2 => Ok(rat(0, 1)),
        3 => Ok(rat(1, 1)),
        4 => Ok(rat(2, 1)),
        6 => Ok(rat(3, 1)),
        _ => Err(GroebnerError::UnsupportedOrder(m)),
    }
}

impl ExactRealization {
    pub fn num_faces(&self) -> usize {
        self.normals.len()
    }

    pub fn lorentz(&self, i: usize, j: usize) -> FieldElem {
        let (a, b) = (&self.normals[i], &self.normals[j]);
        let space = (1..4).fold(self.field.zero(), |acc, k| &acc + &(&a[k] * &b[k]));
        &space - &(&a[0] * &b[0])
    }

    /// Unit normals, and `<n_i, n_j> = -cos(pi / m)` on every edge.
    pub fn verify(&self) -> Result<(), GroebnerError> {
        for i in 0..self.num_faces() {
            if !self.lorentz(i, i).is_one() {
                return Err(GroebnerError::NotRealization(format!("normal {} is not a unit vector", i + 1)));
            }
        }
        for &(i, j, m) in &self.edges {
            let g = self.lorentz(i, j);
            let target = four_cos_squared(m)?;
            let four_g2 = &(&g * &g) * &self.field.int(4);
            let ok = four_g2.as_rational() == Some(target) && g.sign() != Ordering::Greater;
            if !ok {
                return Err(GroebnerError::NotRealization(format!("edge {}-{} does not have order {m}", i + 1, j + 1)));
            }
        }
        Ok(())
    }

    /// Relabels faces: face `i` becomes face `map[i]`.
    pub fn relabeled(&self, map: &[usize]) -> ExactRealization {
        let mut normals = self.normals.clone();
        for (i, &k) in map.iter().enumerate() {
            normals[k] = self.normals[i].clone();
        }
        ExactRealization {
            field: self.field.clone(),
            normals,
            edges: self.edges.iter().map(|&(a, b, m)| (map[a], map[b], m)).collect(),
        }
    }
}

/// Coordinate name for component `k` of the displacement of face `i`
/// (both 0-based).
pub fn coordinate_name(num_faces: usize, i: usize, k: usize) -> String {
    if num_faces <= 9 {
        format!("c{}{}", i + 1, k + 1)
    } else {
        format!("c{}_{}", i + 1, k + 1)
    }
}

/// Generators of the Vinberg ideal: for each face the normalization
/// `a_i(c_i)`, for each edge of order 2 the pair `a_j(c_i)`, `a_i(c_j)`, and
/// for each higher order `(a_ij + a_i(c_j))(a_ji + a_j(c_i)) - 4cos^2(pi/m)`,
/// where `a_i = J n_i` and `a_ij = a_i(2 n_j)`.
pub fn vinberg_ideal(real: &ExactRealization, ring: &PolyRing) -> Result<Vec<Poly>, GroebnerError> {
    real.verify()?;
    let f = real.num_faces();
    let field = &real.field;
    let var = |i: usize, k: usize| ring.named(&coordinate_name(f, i, k));
    // a_i(c_j)
    let functional = |i: usize, j: usize| {
        (0..4).fold(Poly::zero(), |acc, k| {
            let c = if k == 0 { -&real.normals[i][0] } else { real.normals[i][k].clone() };
            acc.add(&var(j, k).scale(&c))
        })
    };
    let mut out: Vec<Poly> = (0..f).map(|i| functional(i, i)).collect();
    for &(i, j, m) in &real.edges {
        if m == 2 {
            out.push(functional(j, i));
            out.push(functional(i, j));
        } else {
            let rhs = four_cos_squared(m)?;
            let a_ij = ring.constant(&real.lorentz(i, j) * &field.int(2));
            let left = a_ij.add(&functional(i, j));
            let right = a_ij.add(&functional(j, i));
            out.push(left.mul(&right).sub(&ring.constant(field.rational(rhs))));
        }
    }
    debug_assert!(out.iter().all(|p| p.constant_term().is_none()));
    Ok(out)
}
