//! Reading the local dimension at the origin off a reduced lexicographic
//! Gröbner basis.

use serde::Serialize;

use super::buchberger::{groebner_basis, normal_form, GroebnerOptions};
use super::field::FieldElem;
use super::poly::{mono_div, mono_divides, Monomial, Poly, PolyRing};
use super::GroebnerError;

/// Generator implied by the selected ones after multiplication by a
/// variable whose linear part is independent of theirs (or by 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImpliedGenerator {
    pub generator: usize,
    pub multiplier: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisAnalysis {
    /// Variables that are leading monomials of basis elements, hence graphs
    /// over smaller variables.
    pub determined: Vec<usize>,
    /// Variables occurring in no leading monomial of degree one.
    pub rest: Vec<usize>,
    /// Basis indices of the nonlinear generators with independent linear
    /// parts.
    pub selected: Vec<usize>,
    /// Variable solved for by each selected generator.
    pub pivots: Vec<usize>,
    pub implied: Vec<ImpliedGenerator>,
    pub free: Vec<usize>,
    pub dimension: usize,
}

/// Exact `k`-th root of a monic polynomial, if it is a perfect power.
pub fn perfect_root(p: &Poly, k: u32, ring: &PolyRing) -> Option<Poly> {
    let (lm, lc) = p.leading()?;
    if !lc.is_one() || lm.iter().any(|e| e % k != 0) {
        return None;
    }
    let one = ring.field().one();
    let root_lm: Monomial = lm.iter().map(|e| e / k).collect();
    let mut q = Poly::from_terms(vec![(root_lm.clone(), one.clone())]);
    let divisor_lm: Monomial = root_lm.iter().map(|e| e * (k - 1)).collect();
    let divisor_lc = ring.field().int(k as i64);
    for _ in 0..=p.len() {
        let r = p.sub(&q.pow(k, ring));
        let Some((m, c)) = r.leading() else { return Some(q) };
        if !mono_divides(&divisor_lm, m) {
            return None;
        }
        let t = mono_div(m, &divisor_lm);
        if t >= root_lm {
            return None;
        }
        q = q.add(&Poly::from_terms(vec![(t, c.div(&divisor_lc).ok()?)]));
    }
    None
}

/// Replaces every generator that is a perfect power by its root and
/// recomputes the basis. Returns `None` when no generator is a power.
pub fn radical_step(
    basis: &[Poly],
    ring: &PolyRing,
    opts: GroebnerOptions,
) -> Result<Option<(Vec<Poly>, Vec<(Poly, u32)>)>, GroebnerError> {
    let mut roots = Vec::new();
    let mut replaced = Vec::with_capacity(basis.len());
    for g in basis {
        let found = (2..=g.total_degree()).rev().find_map(|k| perfect_root(g, k, ring).map(|q| (q, k)));
        match found {
            Some((q, k)) => {
                replaced.push(q.clone());
                roots.push((q, k));
            }
            None => replaced.push(g.clone()),
        }
    }
    if roots.is_empty() {
        return Ok(None);
    }
    Ok(Some((groebner_basis(&replaced, opts)?, roots)))
}

// Reduces `v` by echelon rows; each row is (pivot, dense coefficients).
fn eliminate(rows: &[(usize, Vec<FieldElem>)], mut v: Vec<FieldElem>) -> Vec<FieldElem> {
    for (pivot, row) in rows {
        if v[*pivot].is_zero() {
            continue;
        }
        let factor = v[*pivot].div(&row[*pivot]).expect("nonzero pivot");
        for (x, y) in v.iter_mut().zip(row) {
            *x = &*x - &(&factor * y);
        }
    }
    v
}

/// Local dimension at the origin from a reduced Gröbner basis.
///
/// Generators with a single variable as leading monomial make that variable
/// a graph over the rest. The remaining generators, in ascending order, are
/// selected while their linear parts are independent; by the implicit
/// function theorem they cut out a smooth germ of dimension
/// `#rest - #selected`. Every other generator `g` must satisfy `h g` in the
/// ideal of the selected and graph generators, for `h = 1` or a variable
/// whose linear part is independent of the selected ones, so that `g`
/// vanishes on a dense subset of the germ.
pub fn analyze_basis(basis: &[Poly], ring: &PolyRing, opts: GroebnerOptions) -> Result<BasisAnalysis, GroebnerError> {
    if basis.iter().any(|g| g.constant_term().is_some()) {
        return Err(GroebnerError::NonTriangular("the origin is not a zero of the ideal".into()));
    }
    let n = ring.nvars();
    let is_var = |m: &Monomial| m.iter().sum::<u32>() == 1;
    let mut determined = Vec::new();
    let mut graph_gens = Vec::new();
    let mut others = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        if is_var(g.lm()) {
            determined.push(g.lm().iter().position(|&e| e == 1).expect("variable"));
            graph_gens.push(g.clone());
        } else {
            others.push(k);
        }
    }
    let rest: Vec<usize> = (0..n).filter(|v| !determined.contains(v)).collect();
    others.sort_by(|&a, &b| basis[a].lm().cmp(basis[b].lm()));

    let field = ring.field();
    let dense = |pairs: Vec<(usize, FieldElem)>| {
        let mut v = vec![field.zero(); n];
        for (i, c) in pairs {
            v[i] = c;
        }
        v
    };
    let mut rows: Vec<(usize, Vec<FieldElem>)> = Vec::new();
    let mut selected = Vec::new();
    let mut leftover = Vec::new();
    for &k in &others {
        let v = eliminate(&rows, dense(basis[k].linear_part()));
        match v.iter().position(|c| !c.is_zero()) {
            Some(pivot) => {
                rows.push((pivot, v));
                selected.push(k);
            }
            None => leftover.push(k),
        }
    }
    let pivots: Vec<usize> = rows.iter().map(|(p, _)| *p).collect();

    let mut implied = Vec::new();
    if !leftover.is_empty() {
        let mut sub: Vec<Poly> = graph_gens.clone();
        sub.extend(selected.iter().map(|&k| basis[k].clone()));
        let sub_basis = groebner_basis(&sub, opts)?;
        let independent: Vec<usize> = rest
            .iter()
            .copied()
            .filter(|&v| eliminate(&rows, dense(vec![(v, field.one())])).iter().any(|c| !c.is_zero()))
            .collect();
        for k in leftover {
            let g = &basis[k];
            let multiplier = std::iter::once(None)
                .chain(independent.iter().map(|&v| Some(v)))
                .find(|h| {
                    let product = match h {
                        None => g.clone(),
                        Some(v) => g.mul(&ring.var(*v)),
                    };
                    normal_form(&product, &sub_basis).map(|r| r.is_zero()).unwrap_or(false)
                });
            match multiplier {
                Some(multiplier) => implied.push(ImpliedGenerator { generator: k, multiplier }),
                None => {
                    return Err(GroebnerError::NonTriangular(format!(
                        "generator {} is not implied by the others",
                        ring.display(g)
                    )))
                }
            }
        }
    }
    let free: Vec<usize> = rest.iter().copied().filter(|v| !pivots.contains(v)).collect();
    Ok(BasisAnalysis { dimension: free.len(), determined, rest, selected, pivots, implied, free })
}
