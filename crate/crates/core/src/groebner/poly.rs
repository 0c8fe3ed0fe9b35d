//! Sparse multivariate polynomials under the lexicographic order.

use std::cmp::Ordering;
use std::fmt;

use super::field::{FieldElem, NumberField};

/// Exponent vector; index 0 is the largest variable, so lexicographic
/// comparison of the vectors is the monomial order.
pub type Monomial = Vec<u32>;

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn mono_coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Polynomial ring over a number field with named variables, largest first.
#[derive(Clone, Debug)]
pub struct PolyRing {
    field: NumberField,
    vars: Vec<String>,
}

impl PolyRing {
    pub fn new(field: NumberField, vars: Vec<String>) -> Self {
        PolyRing { field, vars }
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut m = vec![0; self.nvars()];
        m[i] = 1;
        Poly { terms: vec![(m, self.field.one())] }
    }

    pub fn named(&self, name: &str) -> Poly {
        self.var(self.index(name).unwrap_or_else(|| panic!("unknown variable {name}")))
    }

    pub fn constant(&self, c: FieldElem) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(vec![0; self.nvars()], c)] }
        }
    }

    /// Linear form `sum coeffs[k] * var(vars[k])`.
    pub fn linear(&self, vars: &[usize], coeffs: &[FieldElem]) -> Poly {
        vars.iter().zip(coeffs).fold(Poly::zero(), |acc, (&v, c)| acc.add(&self.var(v).scale(c)))
    }

    /// Same polynomial in a ring with the same variable names in another order.
    pub fn transfer(&self, p: &Poly, target: &PolyRing) -> Poly {
        let map: Vec<usize> = self.vars.iter().map(|v| target.index(v).expect("same variables")).collect();
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| {
                let mut out = vec![0; target.nvars()];
                for (i, &e) in m.iter().enumerate() {
                    out[map[i]] = e;
                }
                (out, c.clone())
            })
            .collect();
        Poly::from_terms(terms)
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: p }
    }
}

/// Terms sorted by descending monomial, all coefficients nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    terms: Vec<(Monomial, FieldElem)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn from_terms(mut terms: Vec<(Monomial, FieldElem)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, FieldElem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = &last.1 + &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, FieldElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<&(Monomial, FieldElem)> {
        self.terms.first()
    }

    /// Leading term and the remaining polynomial.
    pub fn split_leading(mut self) -> Option<((Monomial, FieldElem), Poly)> {
        if self.terms.is_empty() {
            return None;
        }
        let head = self.terms.remove(0);
        Some((head, self))
    }

    pub fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &FieldElem {
        &self.terms[0].1
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Option<&FieldElem> {
        self.terms.last().filter(|(m, _)| m.iter().all(|&e| e == 0)).map(|(_, c)| c)
    }

    /// Variables occurring in some term.
    pub fn support(&self) -> Vec<usize> {
        let n = self.terms.first().map_or(0, |t| t.0.len());
        (0..n).filter(|&i| self.terms.iter().any(|(m, _)| m[i] > 0)).collect()
    }

    /// Degree-one part as (variable, coefficient) pairs.
    pub fn linear_part(&self) -> Vec<(usize, FieldElem)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.iter().sum::<u32>() == 1)
            .map(|(m, c)| (m.iter().position(|&e| e == 1).expect("degree one"), c.clone()))
            .collect()
    }

    fn combine(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if negate { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &self.terms[i].1 - &other.terms[j].1 } else { &self.terms[i].1 + &other.terms[j].1 };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    pub fn mul_term(&self, mono: &[u32], c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (mono_mul(m, mono), x * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        other.terms.iter().fold(Poly::zero(), |acc, (m, c)| acc.add(&self.mul_term(m, c)))
    }

    pub fn pow(&self, k: u32, ring: &PolyRing) -> Poly {
        (0..k).fold(ring.constant(ring.field().one()), |acc, _| acc.mul(self))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, lc)) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }
}

pub struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.ring.vars[i].clone() } else { format!("{}^{e}", self.ring.vars[i]) })
                .collect();
            match (factors.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", factors.join("*"))?,
                (false, false) => write!(f, "{c}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}
