use proptest::prelude::*;

use coxeter_deform::andreev::check_compact;
use coxeter_deform::linalg::Mat;
use coxeter_deform::polytope::{catalog, CoxeterLabeling};
use coxeter_deform::rigidity::linear_test;
use coxeter_deform::tangent::{jacobian, numerical_rank};
use coxeter_deform::vinberg::{build_system, residuals, VinbergPoint};

fn cube_labeling() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(prop_oneof![Just(2u32), Just(3), Just(4), Just(5)], 12)
}

fn quad() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-2.0f64..2.0)
}

/// Integer rows plus a repeated row, so the rank is always deficient, and a
/// shuffle of the row indices.
fn matrix_with_row_permutation() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>)> {
    (prop::collection::vec(prop::collection::vec(-3i32..=3, 6), 1..9), any::<prop::sample::Index>()).prop_flat_map(
        |(rows, dup)| {
            let mut rows: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
            rows.push(rows[dup.index(rows.len())].clone());
            let n = rows.len();
            (Just(rows), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_are_symmetry_invariant(orders in cube_labeling(), g in 0usize..48) {
        let cube = catalog::cube();
        let group = cube.symmetry_group();
        prop_assert_eq!(group.order(), 48);
        let l = CoxeterLabeling::new(&cube, orders).unwrap();
        let image = l.permuted(&group.edge_permutation(&cube, g));
        let (a, b) = (check_compact(&cube, &l).unwrap(), check_compact(&cube, &image).unwrap());
        prop_assert_eq!(a.admissible, b.admissible);
        let (a, b) = (linear_test(&cube, &l), linear_test(&cube, &image));
        prop_assert_eq!(a.rigid, b.rigid);
        prop_assert_eq!(a.max_level(), b.max_level());
        let mut levels_a: Vec<usize> = a.level.values().copied().collect();
        let mut levels_b: Vec<usize> = b.level.values().copied().collect();
        levels_a.sort_unstable();
        levels_b.sort_unstable();
        prop_assert_eq!(levels_a, levels_b);
    }

    #[test]
    fn jacobian_matches_the_quadratic_expansion(
        orders in cube_labeling(),
        normals in prop::collection::vec(quad(), 6),
        base in prop::collection::vec(quad(), 6),
        dir in prop::collection::vec(quad(), 6),
    ) {
        let cube = catalog::cube();
        let l = CoxeterLabeling::new(&cube, orders).unwrap();
        let s = build_system(&cube, &l, &normals);
        let shifted = |t: f64| VinbergPoint {
            b: base.iter().zip(&dir).map(|(b, d)| [0, 1, 2, 3].map(|k| b[k] + t * d[k])).collect(),
        };
        let at = VinbergPoint { b: base.clone() };
        let j = jacobian(&s, &at);
        let flat: Vec<f64> = dir.iter().flatten().copied().collect();
        let linear = j.mul_vec(&flat);
        // Every equation is at most quadratic, so the central difference is exact.
        let (plus, minus) = (residuals(&s, &shifted(1.0)), residuals(&s, &shifted(-1.0)));
        for ((p, m), lin) in plus.iter().zip(&minus).zip(&linear) {
            let scale = 1.0 + p.abs() + m.abs();
            prop_assert!(((p - m) / 2.0 - lin).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn rank_ignores_row_order((rows, perm) in matrix_with_row_permutation()) {
        let m = Mat::from_rows(&rows);
        let a = numerical_rank(&m, 1e3);
        let b = numerical_rank(&m.permute_rows(&perm), 1e3);
        prop_assert_eq!(a.rank, b.rank);
        prop_assert!(a.rank < rows.len());
    }
}
