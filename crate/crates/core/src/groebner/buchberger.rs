//! Buchberger's algorithm with the normal selection strategy and both
//! Buchberger criteria.

use std::collections::HashSet;

use super::poly::{mono_coprime, mono_div, mono_divides, mono_lcm, Monomial, Poly};
use super::GroebnerError;

pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct GroebnerOptions {
    /// Maximum number of polynomial terms produced during reductions.
    pub term_budget: usize,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions { term_budget: DEFAULT_TERM_BUDGET }
    }
}

struct Budget {
    limit: usize,
    used: usize,
}

impl Budget {
    fn spend(&mut self, n: usize) -> Result<(), GroebnerError> {
        self.used += n;
        if self.used > self.limit {
            Err(GroebnerError::ResourceExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

fn reduce(p: &Poly, basis: &[Poly], budget: &mut Budget) -> Result<Poly, GroebnerError> {
    let mut rest = p.clone();
    let mut remainder = Vec::new();
    while let Some((m, c)) = rest.leading() {
        match basis.iter().find(|g| mono_divides(g.lm(), m)) {
            Some(g) => {
                let factor = c.div(g.lc())?;
                rest = rest.sub(&g.mul_term(&mono_div(m, g.lm()), &factor));
                budget.spend(g.len())?;
            }
            None => {
                let (head, tail) = rest.split_leading().expect("nonzero");
                remainder.push(head);
                rest = tail;
            }
        }
    }
    Ok(Poly::from_terms(remainder))
}

/// Full reduction of `p` modulo `basis`.
pub fn normal_form(p: &Poly, basis: &[Poly]) -> Result<Poly, GroebnerError> {
    reduce(p, basis, &mut Budget { limit: usize::MAX, used: 0 })
}

fn s_polynomial(f: &Poly, g: &Poly) -> Result<Poly, GroebnerError> {
    let l = mono_lcm(f.lm(), g.lm());
    let one = f.lc().field().one();
    let a = f.mul_term(&mono_div(&l, f.lm()), &one.div(f.lc())?);
    let b = g.mul_term(&mono_div(&l, g.lm()), &one.div(g.lc())?);
    Ok(a.sub(&b))
}

/// Reduced Gröbner basis with monic elements, sorted by descending leading
/// monomial.
pub fn groebner_basis(generators: &[Poly], opts: GroebnerOptions) -> Result<Vec<Poly>, GroebnerError> {
    let mut budget = Budget { limit: opts.term_budget, used: 0 };
    let mut basis: Vec<Poly> = Vec::new();
    for g in generators.iter().filter(|g| !g.is_zero()) {
        basis.push(g.monic());
    }
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while let Some(&(i, j)) = pending.iter().min_by(|a, b| pair_lcm(&basis, **a).cmp(&pair_lcm(&basis, **b)).then(a.cmp(b))) {
        pending.remove(&(i, j));
        if mono_coprime(basis[i].lm(), basis[j].lm()) {
            continue;
        }
        let l = pair_lcm(&basis, (i, j));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && mono_divides(basis[k].lm(), &l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = reduce(&s_polynomial(&basis[i], &basis[j])?, &basis, &mut budget)?;
        if r.is_zero() {
            continue;
        }
        let n = basis.len();
        basis.push(r.monic());
        for k in 0..n {
            pending.insert((k, n));
        }
    }
    interreduce(basis, &mut budget)
}

fn pair_lcm(basis: &[Poly], (i, j): (usize, usize)) -> Monomial {
    mono_lcm(basis[i].lm(), basis[j].lm())
}

fn interreduce(mut basis: Vec<Poly>, budget: &mut Budget) -> Result<Vec<Poly>, GroebnerError> {
    basis.sort_by(|a, b| a.lm().cmp(b.lm()));
    let mut minimal: Vec<Poly> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| mono_divides(h.lm(), g.lm())) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
        reduced.push(reduce(&minimal[k], &others, budget)?.monic());
    }
    reduced.sort_by(|a, b| b.lm().cmp(a.lm()));
    Ok(reduced)
}
