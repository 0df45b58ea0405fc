//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use curvature_vanish::catalog::{Catalog, CatalogFilter, SpaceDescriptor};
use curvature_vanish::chamber::{grid_oracle, sum_of_p_largest_max, OptMethod};
use curvature_vanish::curvature::{asymptotic_hessian_values, hessian_spectrum, lambda_coth};
use curvature_vanish::matrixlab::cross_check;
use curvature_vanish::vanishing::{
    check_eigen_sum, check_pinching, verify_proof_chain, VERDICT_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!("criterion {id} ({name}): {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn catalog(max_param: u32) -> Vec<SpaceDescriptor> {
    Catalog::builtin().enumerate(&CatalogFilter::with_max_param(max_param))
}

fn lookup(name: &str) -> SpaceDescriptor {
    Catalog::builtin().lookup(name).unwrap()
}

#[test]
fn criterion_1_dimension_identity() {
    let rows = catalog(8);
    let mut worst = String::new();
    let mut pass = !rows.is_empty();
    for d in &rows {
        if d.dim != d.rank as u32 + d.system.total_multiplicity() {
            pass = false;
            worst = format!("{} violates dim = rank + sum(mult)", d.label);
        }
    }
    for (name, dim, rank) in [
        ("SL(3,R)/SO(3)", 5, 2),
        ("SU(1,2)/S(U(1)xU(2))", 4, 1),
        ("SO_0(2,3)/SO(2)xSO(3)", 6, 2),
        ("Sp(2,R)/U(2)", 6, 2),
        ("SO_0(2,2)/SO(2)xSO(2)", 4, 2),
    ] {
        let d = lookup(name);
        if (d.dim, d.rank) != (dim, rank) {
            pass = false;
            worst = format!("{name}: got ({}, {})", d.dim, d.rank);
        }
    }
    report(1, "dimension identity", pass, &format!("{} rows checked {worst}", rows.len()));
}

#[test]
fn criterion_2_ricci_identity() {
    let rows = catalog(8);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for d in &rows {
        let float_roots = d.system.float_roots();
        let mults = d.system.multiplicities();
        for _ in 0..100 {
            let mut h: Vec<f64> = (0..d.rank).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
            let n: f64 = h.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-6 {
                continue;
            }
            h.iter_mut().for_each(|x| *x /= n);
            let sum: f64 = float_roots
                .iter()
                .zip(mults)
                .map(|(root, &m)| {
                    let v: f64 = root.iter().zip(&h).map(|(a, b)| a * b).sum();
                    f64::from(m) * v * v
                })
                .sum();
            worst = worst.max((sum - 0.5).abs());
        }
    }
    report(
        2,
        "ricci identity",
        worst <= 1e-12,
        &format!("{} spaces x 100 directions, worst |error| = {worst:.3e}", rows.len()),
    );
}

#[test]
fn criterion_3_benchmark_regression_p1() {
    let mut pass = true;
    let mut detail = String::new();
    for name in ["SL(3,R)/SO(3)", "SU(1,2)/S(U(1)xU(2))", "SO_0(2,3)/SO(2)xSO(3)", "Sp(2,R)/U(2)"] {
        let cert = check_eigen_sum(&lookup(name), 1).unwrap();
        if !cert.holds || cert.margin.abs() > VERDICT_TOL {
            pass = false;
            detail = format!("{name}: holds={} margin={}", cert.holds, cert.margin);
        }
    }
    let so22 = check_eigen_sum(&lookup("SO_0(2,2)/SO(2)xSO(2)"), 1).unwrap();
    if so22.holds || (so22.margin + 1.0 / 2f64.sqrt()).abs() > 1e-6 {
        pass = false;
        detail = format!("flat exception: holds={} margin={}", so22.holds, so22.margin);
    }
    let h2 = check_eigen_sum(&lookup("SL(2,R)/SO(2)"), 1).unwrap();
    if h2.holds {
        pass = false;
        detail = "hyperbolic plane unexpectedly holds".into();
    }
    report(
        3,
        "degree-1 benchmark regression",
        pass,
        &format!("four tight cases at margin 0, exception at {:.4} {detail}", so22.margin),
    );
}

#[test]
fn criterion_4_oracle_equivalence() {
    let mut pass = true;
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    for name in [
        "SL(3,R)/SO(3)",
        "SU(1,2)/S(U(1)xU(2))",
        "SO_0(2,3)/SO(2)xSO(3)",
        "Sp(2,R)/U(2)",
        "AI(4)",
        "AIII(2,2)",
        "BDI(2,4)",
        "CI(3)",
    ] {
        match cross_check(&lookup(name), 20, 0) {
            Ok(r) => {
                worst = worst.max(r.max_discrepancy);
                if !r.pass || r.max_discrepancy > 1e-8 {
                    pass = false;
                    detail = format!("{name}: discrepancy {}", r.max_discrepancy);
                }
            }
            Err(e) => {
                pass = false;
                detail = format!("{name}: {e}");
            }
        }
    }
    report(
        4,
        "oracle equivalence",
        pass,
        &format!("8 models x 20 directions, worst discrepancy {worst:.3e} {detail}"),
    );
}

#[test]
fn criterion_5_optimizer_soundness() {
    let rows: Vec<SpaceDescriptor> =
        catalog(4).into_iter().filter(|d| d.rank <= 3).collect();
    let mut pass = !rows.is_empty();
    let mut worst: f64 = 0.0;
    let mut detail = String::new();
    let mut pairs = 0;
    for d in &rows {
        for p in 1..=3u32.min(d.dim - 1) {
            let exact = sum_of_p_largest_max(d, p).unwrap();
            if exact.method != OptMethod::ExactCone {
                continue;
            }
            let grid = grid_oracle(d, p, 100_000, 0).unwrap();
            pairs += 1;
            let gap = (exact.value - grid.value).abs();
            worst = worst.max(gap);
            if gap > 1e-6 {
                pass = false;
                detail = format!("{} p={p}: exact {} vs grid {}", d.label, exact.value, grid.value);
            }
            // The sampled value must never exceed the certified maximum.
            if grid.value > exact.value + 1e-9 {
                pass = false;
                detail = format!("{} p={p}: grid exceeded exact", d.label);
            }
        }
    }
    report(
        5,
        "optimizer soundness",
        pass,
        &format!("{pairs} (space, p) pairs, worst |exact - grid| = {worst:.3e} {detail}"),
    );
}

#[test]
fn criterion_6_pinching_implies_eigen_sum() {
    let rows = catalog(6);
    let mut pass = true;
    let mut detail = String::new();
    let mut implications = 0;
    for d in &rows {
        for p in 1..=3u32.min(d.dim - 1) {
            if check_pinching(d, p).unwrap().holds {
                implications += 1;
                if !check_eigen_sum(d, p).unwrap().holds {
                    pass = false;
                    detail = format!("{} p={p}: pinching holds, eigen-sum fails", d.label);
                }
            }
        }
    }
    report(
        6,
        "pinching implies eigen-sum",
        pass,
        &format!("{} spaces, {implications} implications, zero counterexamples {detail}", rows.len()),
    );
}

#[test]
fn criterion_7_flagged_list_regression() {
    let rows: Vec<SpaceDescriptor> =
        catalog(6).into_iter().filter(|d| d.in_theorem_1_3_list).collect();
    let mut pass = !rows.is_empty();
    let mut detail = String::new();
    for d in &rows {
        let cert = check_eigen_sum(d, 1).unwrap();
        if !cert.holds {
            pass = false;
            detail = format!("{} fails at p=1 (margin {})", d.label, cert.margin);
        }
    }
    report(
        7,
        "flagged-list regression",
        pass,
        &format!("{} flagged spaces hold at p=1 {detail}", rows.len()),
    );
}

#[test]
fn criterion_8_proof_chain() {
    let rows = catalog(6);
    let mut pass = true;
    let mut min_seen = f64::INFINITY;
    let mut detail = String::new();
    let mut runs = 0;
    for d in &rows {
        for p in 1..=3u32.min(d.dim - 1) {
            if !check_eigen_sum(d, p).unwrap().holds {
                continue;
            }
            let rep = verify_proof_chain(d, p, 334, &[0.1, 1.0, 10.0], 8).unwrap();
            runs += 1;
            min_seen = min_seen.min(rep.min_value);
            if !rep.pass || rep.min_value < -1e-9 {
                pass = false;
                detail = format!("{} p={p}: min {}", d.label, rep.min_value);
            }
        }
    }
    report(
        8,
        "proof-chain property",
        pass,
        &format!("{runs} (space, p) runs x ~1000 samples, min chain value {min_seen:.3e} {detail}"),
    );
}

#[test]
fn criterion_9_hessian_limits() {
    // Series branch against the direct formula at the switchover.
    let mut pass = true;
    let mut detail = String::new();
    let r = 1.0;
    for v in [1e-4 - 1e-12, 1e-4, 1e-4 + 1e-12] {
        let direct = v * (1.0 + 2.0 / (2.0f64 * v * r).exp_m1());
        let series = 1.0 / r + v * v * r / 3.0 - v.powi(4) * r.powi(3) / 45.0;
        let rel = ((lambda_coth(v, r) - direct) / direct)
            .abs()
            .max(((lambda_coth(v, r) - series) / series).abs());
        if rel > 1e-12 {
            pass = false;
            detail = format!("switchover mismatch at v={v}: rel {rel:.3e}");
        }
    }
    // Large-radius limit reproduces the asymptotic eigenvalue list. The
    // probe direction is a chamber extreme ray: every root value there is
    // either exactly zero or bounded away from the slow-convergence regime.
    let mut worst: f64 = 0.0;
    for name in ["SL(3,R)/SO(3)", "SU(1,2)/S(U(1)xU(2))", "SO_0(2,3)/SO(2)xSO(3)", "Sp(2,R)/U(2)"] {
        let d = lookup(name);
        let cone = d.system.chamber().unwrap();
        let h = cone.ray_unit_float(0);
        for i in 0..d.system.positive_roots().len() {
            let v = d.system.eval_root(i, &h).abs();
            assert!(v <= 1e-12 || v >= 0.2, "{name}: probe direction too close to a wall ({v})");
        }
        let radius = 50.0;
        let hess = hessian_spectrum(&d, &h, radius).unwrap();
        let asym = asymptotic_hessian_values(&d, &h).unwrap();
        // Flat entries sit exactly at 1/r.
        let flats: u32 = hess
            .entries
            .iter()
            .filter(|(v, _)| *v == 1.0 / radius)
            .map(|(_, m)| *m)
            .sum();
        if d.rank > 1 && flats < (d.rank - 1) as u32 {
            pass = false;
            detail = format!("{name}: missing exact 1/r flat entries");
        }
        // Entrywise limit, with the asymptotic zeros mapped to 1/r.
        let got = hess.expanded();
        let mut expected: Vec<f64> = asym
            .expanded()
            .into_iter()
            .map(|v| if v <= 1e-12 { 1.0 / radius } else { v })
            .collect();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (g, e) in got.iter().zip(&expected) {
            worst = worst.max((g - e).abs());
        }
    }
    if worst > 1e-6 {
        pass = false;
        detail = format!("large-radius limit off by {worst:.3e}");
    }
    report(
        9,
        "hessian limits",
        pass,
        &format!("series switchover to 1e-12, r=50 limit within {worst:.3e} {detail}"),
    );
}
