use coxeter_deform::groebner::field::NumberField;
use coxeter_deform::groebner::instances::{cu21_certificate, cu21_realization};
use coxeter_deform::groebner::{
    analyze_basis, groebner_basis, normal_form, radical_step, vinberg_ideal, GroebnerOptions, Poly, PolyRing,
};

fn ring(names: &[&str]) -> PolyRing {
    PolyRing::new(NumberField::rationals(), names.iter().map(|s| s.to_string()).collect())
}

fn same_set(a: &[Poly], b: &[Poly]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.contains(p))
}

#[test]
fn monomial_ideal_is_its_own_basis() {
    let r = ring(&["x", "y"]);
    let (x, y) = (r.named("x"), r.named("y"));
    let gens = vec![x.mul(&x), x.mul(&y)];
    assert!(same_set(&groebner_basis(&gens, GroebnerOptions::default()).unwrap(), &gens));
}

#[test]
fn nilpotent_direction_has_dimension_zero_after_radical() {
    let r = ring(&["x", "y"]);
    let (x, y) = (r.named("x"), r.named("y"));
    let opts = GroebnerOptions::default();
    let gens = vec![x.sub(&y), y.mul(&y)];
    let basis = groebner_basis(&gens, opts).unwrap();
    assert!(same_set(&basis, &gens));
    let (reduced, roots) = radical_step(&basis, &r, opts).unwrap().expect("y^2 is a square");
    assert_eq!(roots, vec![(y.clone(), 2)]);
    let a = analyze_basis(&reduced, &r, opts).unwrap();
    assert_eq!((a.dimension, a.free.len()), (0, 0));
    // Without perfect powers the step is a no-op.
    assert!(radical_step(&reduced, &r, opts).unwrap().is_none());
}

#[test]
fn zero_ideal_leaves_every_variable_free() {
    let r = ring(&["x"]);
    let a = analyze_basis(&[], &r, GroebnerOptions::default()).unwrap();
    assert_eq!((a.free.clone(), a.dimension), (vec![0], 1));
}

#[test]
fn generators_reduce_to_zero_modulo_the_cu21_basis() {
    let opts = GroebnerOptions::default();
    let real = cu21_realization().unwrap();
    let (_, basis, ring) = cu21_certificate(opts).unwrap();
    let gens = vinberg_ideal(&real, &ring).unwrap();
    assert_eq!(gens.len(), 6 + 2 * 7 + 5);
    for g in &gens {
        assert!(normal_form(g, &basis).unwrap().is_zero());
    }
}
