//! Cross-module properties: optimizer-versus-oracle consistency, Weyl
//! invariance of the reported quantities, and randomized algebraic laws.

use curvature_vanish::catalog::{Catalog, CatalogFilter, SpaceDescriptor};
use curvature_vanish::chamber::{eval_objective, grid_oracle, sum_of_p_largest_max, OptMethod};
use curvature_vanish::curvature::{lambda_coth, pinching, ricci_radial};
use curvature_vanish::exact::{cmp_sqrt_sum, rat, SqrtRat};
use curvature_vanish::vanishing::{check_eigen_sum, check_root_triple, witness_residual};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lookup(name: &str) -> SpaceDescriptor {
    Catalog::builtin().lookup(name).unwrap()
}

#[test]
fn grid_oracle_brackets_exact_value_rank_two() {
    // exact >= grid - tol, and exact <= grid + Lipschitz * spacing.
    let resolution = 20_000usize;
    for name in ["AI(3)", "BDI(2,3)", "CI(2)", "BDI(2,2)", "G", "EIII"] {
        let d = lookup(name);
        assert_eq!(d.rank, 2);
        // Arc length of the chamber is at most pi; the objective is a
        // maximum of linear functionals with gradient norm at most
        // 2 * sum of m |lambda|.
        let sys = &d.system;
        let lipschitz: f64 = 2.0
            * (0..sys.positive_roots().len())
                .map(|i| {
                    let v = sys.root_float(i);
                    f64::from(sys.multiplicity(i)) * v.iter().map(|x| x * x).sum::<f64>().sqrt()
                })
                .sum::<f64>();
        let spacing = std::f64::consts::PI / resolution as f64;
        for p in [1u32, 2] {
            let exact = sum_of_p_largest_max(&d, p).unwrap();
            if exact.method != OptMethod::ExactCone {
                continue;
            }
            let grid = grid_oracle(&d, p, resolution, 0).unwrap();
            assert!(exact.value >= grid.value - 1e-8, "{name} p={p}");
            assert!(
                exact.value <= grid.value + lipschitz * spacing,
                "{name} p={p}: exact {} grid {} bound {}",
                exact.value,
                grid.value,
                lipschitz * spacing
            );
        }
    }
}

#[test]
fn pinching_and_ricci_are_chamber_independent() {
    // Reflecting a direction through a wall changes neither the radial Ricci
    // value nor, trivially, the pinching constants.
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for name in ["AI(4)", "BDI(2,3)", "G"] {
        let d = lookup(name);
        let a_before = pinching(&d).a;
        for _ in 0..20 {
            let mut h: Vec<f64> = (0..d.rank).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let n: f64 = h.iter().map(|x| x * x).sum::<f64>().sqrt();
            h.iter_mut().for_each(|x| *x /= n);
            let base = ricci_radial(&d, &h);
            for &s in d.system.simple_indices() {
                let reflected = d.system.reflect(&h, s);
                assert!((ricci_radial(&d, &reflected) - base).abs() < 1e-12);
            }
        }
        assert_eq!(pinching(&d).a, a_before);
    }
}

#[test]
fn eigen_sum_witnesses_reverify_across_catalog() {
    for d in Catalog::builtin().enumerate(&CatalogFilter::with_max_param(3)) {
        for p in [1u32, 2] {
            if p > d.dim - 1 {
                continue;
            }
            let cert = check_eigen_sum(&d, p).unwrap();
            if let Some(residual) = witness_residual(&d, &cert) {
                assert!(residual <= 1e-10, "{} p={p}: {residual}", d.label);
            }
        }
    }
}

#[test]
fn triple_holding_spaces_hold_eigen_sum_at_degree_one() {
    for d in Catalog::builtin().enumerate(&CatalogFilter::with_max_param(6)) {
        if check_root_triple(&d).unwrap().holds {
            let eigen = check_eigen_sum(&d, 1).unwrap();
            assert!(eigen.holds, "{}: triple holds but eigen-sum fails", d.label);
        }
    }
}

#[test]
fn failure_is_monotone_in_degree_across_catalog() {
    for d in Catalog::builtin().enumerate(&CatalogFilter::with_max_param(3)) {
        let mut failed = false;
        for p in 1..d.dim.min(5) {
            let holds = check_eigen_sum(&d, p).unwrap().holds;
            if failed && holds {
                panic!("{}: eigen-sum re-held at p={p} after a failure", d.label);
            }
            failed = failed || !holds;
        }
    }
}

proptest! {
    #[test]
    fn sqrt_scalars_order_like_floats(
        a_num in 0i64..400, a_den in 1i64..40,
        b_num in 0i64..400, b_den in 1i64..40,
    ) {
        let a = SqrtRat::sqrt(rat(a_num, a_den));
        let b = SqrtRat::sqrt(rat(b_num, b_den));
        let fa = (a_num as f64 / a_den as f64).sqrt();
        let fb = (b_num as f64 / b_den as f64).sqrt();
        if (fa - fb).abs() > 1e-9 {
            prop_assert_eq!(a > b, fa > fb);
        }
    }

    #[test]
    fn sqrt_sum_comparison_matches_floats(
        a_num in 0i64..100, b_num in 0i64..100, c_num in 0i64..400, den in 1i64..20,
    ) {
        let lhs = (a_num as f64 / den as f64).sqrt() + (b_num as f64 / den as f64).sqrt();
        let rhs = (c_num as f64 / den as f64).sqrt();
        let ord = cmp_sqrt_sum(&rat(a_num, den), &rat(b_num, den), &rat(c_num, den));
        if (lhs - rhs).abs() > 1e-9 {
            prop_assert_eq!(ord == std::cmp::Ordering::Greater, lhs > rhs);
        }
    }

    #[test]
    fn hessian_entries_increase_with_the_root_value(
        v1 in 0.0f64..2.0, dv in 1e-6f64..1.0, r in 0.01f64..100.0,
    ) {
        prop_assert!(lambda_coth(v1 + dv, r) > lambda_coth(v1, r));
    }

    #[test]
    fn ricci_scales_quadratically_everywhere(
        x in -1.0f64..1.0, y in -1.0f64..1.0, c in 0.1f64..3.0,
    ) {
        prop_assume!(x.abs() + y.abs() > 1e-3);
        let d = lookup("AI(3)");
        let h = [x, y];
        let scaled = [c * x, c * y];
        let lhs = ricci_radial(&d, &scaled);
        let rhs = c * c * ricci_radial(&d, &h);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn objective_below_chamber_maximum_anywhere(
        x in -1.0f64..1.0, y in -1.0f64..1.0,
    ) {
        prop_assume!(x.abs() + y.abs() > 1e-3);
        let d = lookup("CI(2)");
        let n = (x * x + y * y).sqrt();
        let h = [x / n, y / n];
        for p in [1u32, 2] {
            let max = sum_of_p_largest_max(&d, p).unwrap().value;
            prop_assert!(eval_objective(&d, p, &h) <= max + 1e-9);
        }
    }
}
