//! The three vanishing-condition checkers and the finite-radius chain check.
//!
//! A certificate records a verdict, a signed margin (nonnegative means the
//! condition holds; the benchmark cases sit exactly at margin zero) and a
//! re-checkable witness: the worst chamber direction for the eigenvalue-sum
//! condition, the extremal-curvature direction for the pinching condition,
//! and the tightest root triple for the triple condition.

use crate::catalog::SpaceDescriptor;
use crate::chamber::{self, sample_chamber_unit, OptMethod, SearchOptions};
use crate::curvature::{self, lambda_coth};
use crate::error::{Error, Result};
use crate::exact::{self, Rat};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;

/// Verdict tolerance: the reference cases attain equality, so "holds" means
/// the margin is no worse than this.
pub const VERDICT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    EigenSum,
    Pinching,
    RootTriple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMethod {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Direction { h: Vec<f64> },
    Triple { lambda_norm: f64, nu_norm: f64, mu_norm: f64 },
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingCertificate {
    pub space_label: String,
    pub p: u32,
    pub condition: Condition,
    pub holds: bool,
    /// Signed slack; `>= 0` means the condition holds, `0` exact equality.
    pub margin: f64,
    pub witness: Witness,
    pub method: CheckMethod,
    pub in_theorem_scope: bool,
}

fn method_of(m: OptMethod) -> CheckMethod {
    match m {
        OptMethod::ExactCone => CheckMethod::Exact,
        _ => CheckMethod::Sampled,
    }
}

/// Eigenvalue-sum condition at degree `p`: the chamber maximum of
/// `sum of p largest minus sum of the rest` must be nonpositive.
pub fn check_eigen_sum(space: &SpaceDescriptor, p: u32) -> Result<VanishingCertificate> {
    check_eigen_sum_with(space, p, &SearchOptions::default())
}

pub fn check_eigen_sum_with(
    space: &SpaceDescriptor,
    p: u32,
    opts: &SearchOptions,
) -> Result<VanishingCertificate> {
    if p > space.dim - 1 {
        return Err(Error::OutOfRange("p", format!("{p} not in 0..={}", space.dim - 1)));
    }
    if p == 0 {
        // Degree zero puts every eigenvalue on the right-hand side; the
        // margin is the minimal total eigenvalue sum over the chamber.
        let sys = &space.system;
        let cone = sys.chamber()?;
        let rank = space.rank;
        let mut neg_total = vec![Rat::zero(); rank];
        for (i, root) in sys.positive_roots().iter().enumerate() {
            let m = exact::rat_int(i64::from(sys.multiplicity(i)));
            for (t, c) in neg_total.iter_mut().zip(root.coords()) {
                *t -= &m * c;
            }
        }
        let opt = chamber::maximize_linear_on_chamber_sphere(&cone, &neg_total)?;
        return Ok(VanishingCertificate {
            space_label: space.label.clone(),
            p,
            condition: Condition::EigenSum,
            holds: true,
            margin: -opt.value,
            witness: Witness::Direction { h: opt.argmax },
            method: CheckMethod::Exact,
            in_theorem_scope: space.in_theorem_scope(),
        });
    }
    let opt = chamber::sum_of_p_largest_max_with(space, p, opts)?;
    Ok(VanishingCertificate {
        space_label: space.label.clone(),
        p,
        condition: Condition::EigenSum,
        holds: opt.value <= VERDICT_TOL,
        // `+ 0.0` turns the tight cases' negative zero into plain zero.
        margin: -opt.value + 0.0,
        witness: Witness::Direction { h: opt.argmax },
        method: method_of(opt.method),
        in_theorem_scope: space.in_theorem_scope(),
    })
}

/// Pinching condition `p(p+1) <= B/A`, decided on exact rationals.
pub fn check_pinching(space: &SpaceDescriptor, p: u32) -> Result<VanishingCertificate> {
    if p > space.dim - 1 {
        return Err(Error::OutOfRange("p", format!("{p} not in 0..={}", space.dim - 1)));
    }
    let report = curvature::pinching(space);
    let pp1 = exact::rat_int(i64::from(p) * (i64::from(p) + 1));
    let holds = pp1 <= report.ratio_exact;
    let margin = report.ratio - (p as f64) * (p as f64 + 1.0);
    Ok(VanishingCertificate {
        space_label: space.label.clone(),
        p,
        condition: Condition::Pinching,
        holds,
        margin,
        witness: Witness::Direction { h: curvature::extremal_direction(space) },
        method: CheckMethod::Exact,
        in_theorem_scope: space.in_theorem_scope(),
    })
}

/// Root-triple condition (degree 1): counting multiplicities, every entry of
/// the positive-root multiset must be dominated by the sum of the two largest
/// norms among the other entries. Verdicts are exact; a multiset with fewer
/// than three entries fails outright.
pub fn check_root_triple(space: &SpaceDescriptor) -> Result<VanishingCertificate> {
    let sys = &space.system;
    // Expanded multiset of squared norms, descending.
    let mut norms_sq: Vec<Rat> = Vec::new();
    for i in 0..sys.positive_roots().len() {
        let n = sys.root_norm_sq(i);
        for _ in 0..sys.multiplicity(i) {
            norms_sq.push(n.clone());
        }
    }
    norms_sq.sort_by(|a, b| b.cmp(a));

    let scope = space.in_theorem_scope();
    if norms_sq.len() < 3 {
        let largest = exact::to_f64(&norms_sq[0]).sqrt();
        return Ok(VanishingCertificate {
            space_label: space.label.clone(),
            p: 1,
            condition: Condition::RootTriple,
            holds: false,
            margin: -largest,
            witness: Witness::Triple { lambda_norm: largest, nu_norm: 0.0, mu_norm: 0.0 },
            method: CheckMethod::Exact,
            in_theorem_scope: scope,
        });
    }

    let mut holds = true;
    let mut min_margin = f64::INFINITY;
    let mut witness = Witness::None;
    for e in 0..norms_sq.len() {
        // Two largest among the others of a descending list.
        let (nu, mu) = match e {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if cmp_triple(&norms_sq[nu], &norms_sq[mu], &norms_sq[e]) == Ordering::Less {
            holds = false;
        }
        let lam = exact::to_f64(&norms_sq[e]).sqrt();
        let nu_f = exact::to_f64(&norms_sq[nu]).sqrt();
        let mu_f = exact::to_f64(&norms_sq[mu]).sqrt();
        let margin = nu_f + mu_f - lam;
        if margin < min_margin {
            min_margin = margin;
            witness = Witness::Triple { lambda_norm: lam, nu_norm: nu_f, mu_norm: mu_f };
        }
    }
    Ok(VanishingCertificate {
        space_label: space.label.clone(),
        p: 1,
        condition: Condition::RootTriple,
        holds,
        margin: min_margin,
        witness,
        method: CheckMethod::Exact,
        in_theorem_scope: scope,
    })
}

/// `sqrt(nu) + sqrt(mu)` versus `sqrt(lambda)`.
fn cmp_triple(nu_sq: &Rat, mu_sq: &Rat, lambda_sq: &Rat) -> Ordering {
    exact::cmp_sqrt_sum(nu_sq, mu_sq, lambda_sq)
}

/// Largest `p` such that the eigenvalue-sum condition holds for every degree
/// up to `p` (the chamber maximum is nondecreasing in `p`, so the first
/// failure is final). Returns 0 when degree 1 already fails.
pub fn max_vanishing_degree(space: &SpaceDescriptor) -> Result<(u32, Vec<VanishingCertificate>)> {
    max_vanishing_degree_with(space, &SearchOptions::default())
}

pub fn max_vanishing_degree_with(
    space: &SpaceDescriptor,
    opts: &SearchOptions,
) -> Result<(u32, Vec<VanishingCertificate>)> {
    let mut certs = Vec::new();
    let mut degree = 0u32;
    for p in 1..space.dim {
        let cert = check_eigen_sum_with(space, p, opts)?;
        let holds = cert.holds;
        certs.push(cert);
        if holds {
            degree = p;
        } else {
            break;
        }
    }
    Ok((degree, certs))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProofChainReport {
    pub space_label: String,
    pub p: u32,
    pub samples: usize,
    pub radii: Vec<f64>,
    /// Minimum over all sampled (direction, radius) pairs of
    /// `sum_{i>p} eta_i - sum_{i<=p} eta_i` for the Hessian eigenvalues
    /// `eta` sorted descending.
    pub min_value: f64,
    pub worst_direction: Vec<f64>,
    pub worst_radius: f64,
    pub pass: bool,
}

/// Finite-radius counterpart of the eigenvalue-sum condition: wherever that
/// condition holds, the ordered Hessian eigenvalues must satisfy the same
/// inequality at every radius, because `v -> v coth(v r)` is increasing in
/// `v` and the flat directions only strengthen the right-hand side.
pub fn verify_proof_chain(
    space: &SpaceDescriptor,
    p: u32,
    samples: usize,
    radii: &[f64],
    seed: u64,
) -> Result<ProofChainReport> {
    verify_proof_chain_with(space, p, samples, radii, seed, &SearchOptions::default())
}

pub fn verify_proof_chain_with(
    space: &SpaceDescriptor,
    p: u32,
    samples: usize,
    radii: &[f64],
    seed: u64,
    opts: &SearchOptions,
) -> Result<ProofChainReport> {
    let gate = check_eigen_sum_with(space, p, opts)?;
    if !gate.holds {
        return Err(Error::Precondition(format!(
            "eigenvalue-sum condition fails for {} at p={p}; the chain inequality is only claimed under it",
            space.label
        )));
    }
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidParameter("radii must be positive".into()));
    }
    let sys = &space.system;
    let cone = sys.chamber()?;
    let float_roots = sys.float_roots();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    let mut worst_direction = Vec::new();
    let mut worst_radius = 0.0;
    for _ in 0..samples {
        let h = sample_chamber_unit(&cone, &mut rng);
        let values: Vec<(f64, u32)> = float_roots
            .iter()
            .zip(sys.multiplicities())
            .map(|(root, &m)| {
                let v: f64 = root.iter().zip(&h).map(|(a, b)| a * b).sum();
                (v.abs(), m)
            })
            .collect();
        for &r in radii {
            let mut eta: Vec<(f64, u32)> =
                values.iter().map(|(v, m)| (lambda_coth(*v, r), *m)).collect();
            if space.rank > 1 {
                eta.push((1.0 / r, (space.rank - 1) as u32));
            }
            eta.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            let mut take = p;
            let mut left = 0.0;
            let mut total = 0.0;
            for (v, m) in eta {
                total += v * f64::from(m);
                let t = take.min(m);
                left += v * f64::from(t);
                take -= t;
            }
            let chain = total - 2.0 * left;
            if chain < min_value {
                min_value = chain;
                worst_direction = h.clone();
                worst_radius = r;
            }
        }
    }
    Ok(ProofChainReport {
        space_label: space.label.clone(),
        p,
        samples,
        radii: radii.to_vec(),
        min_value,
        worst_direction,
        worst_radius,
        pass: min_value >= -VERDICT_TOL,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicationReport {
    pub pairs_checked: usize,
    pub pinching_holds: usize,
    pub counterexamples: Vec<(String, u32)>,
}

/// Wherever the pinching condition holds, the eigenvalue-sum condition must
/// hold as well; reports any counterexample instead of asserting.
pub fn check_pinching_implies_eigen_sum(
    spaces: &[SpaceDescriptor],
    p_range: std::ops::RangeInclusive<u32>,
    opts: &SearchOptions,
) -> Result<ImplicationReport> {
    let mut pairs_checked = 0;
    let mut pinching_holds = 0;
    let mut counterexamples = Vec::new();
    for space in spaces {
        for p in p_range.clone() {
            if p < 1 || p > space.dim - 1 {
                continue;
            }
            pairs_checked += 1;
            if check_pinching(space, p)?.holds {
                pinching_holds += 1;
                if !check_eigen_sum_with(space, p, opts)?.holds {
                    counterexamples.push((space.label.clone(), p));
                }
            }
        }
    }
    Ok(ImplicationReport { pairs_checked, pinching_holds, counterexamples })
}

/// Re-evaluate a certificate's witness; the eigenvalue-sum objective at the
/// stored direction must reproduce the margin.
pub fn witness_residual(space: &SpaceDescriptor, cert: &VanishingCertificate) -> Option<f64> {
    match (&cert.condition, &cert.witness) {
        (Condition::EigenSum, Witness::Direction { h }) if cert.p >= 1 => {
            Some((chamber::eval_objective(space, cert.p, h) + cert.margin).abs())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{Catalog, CatalogFilter};
    use approx::assert_relative_eq;

    fn space(name: &str) -> SpaceDescriptor {
        Catalog::builtin().lookup(name).unwrap()
    }

    #[test]
    fn benchmark_regression_at_degree_one() {
        for name in ["AI(3)", "SU(1,2)", "BDI(2,3)", "CI(2)"] {
            let cert = check_eigen_sum(&space(name), 1).unwrap();
            assert!(cert.holds, "{name}");
            assert_eq!(cert.margin, 0.0, "{name} margin should be exactly zero");
            assert_eq!(cert.method, CheckMethod::Exact);
        }
        let so22 = check_eigen_sum(&space("BDI(2,2)"), 1).unwrap();
        assert!(!so22.holds);
        assert_relative_eq!(so22.margin, -1.0 / 2f64.sqrt(), epsilon = 1e-6);
        assert!(!so22.in_theorem_scope);

        let h2 = check_eigen_sum(&space("AI(2)"), 1).unwrap();
        assert!(!h2.holds);
    }

    #[test]
    fn su12_degrees() {
        let su12 = space("SU(1,2)");
        assert!(check_eigen_sum(&su12, 1).unwrap().holds);
        assert!(!check_eigen_sum(&su12, 2).unwrap().holds);
        let (degree, certs) = max_vanishing_degree(&su12).unwrap();
        assert_eq!(degree, 1);
        assert_eq!(certs.len(), 2);
    }

    #[test]
    fn max_degrees_for_benchmark_spaces() {
        assert_eq!(max_vanishing_degree(&space("BDI(2,2)")).unwrap().0, 0);
        assert_eq!(max_vanishing_degree(&space("BDI(2,3)")).unwrap().0, 1);
        assert_eq!(max_vanishing_degree(&space("AI(2)")).unwrap().0, 0);
    }

    #[test]
    fn degree_zero_is_trivially_green() {
        let cert = check_eigen_sum(&space("AI(3)"), 0).unwrap();
        assert!(cert.holds);
        assert!(cert.margin > 0.0);
        let pin = check_pinching(&space("AI(3)"), 0).unwrap();
        assert!(pin.holds);
    }

    #[test]
    fn pinching_examples() {
        let sl4 = check_pinching(&space("AI(4)"), 1).unwrap();
        assert!(sl4.holds);
        assert_relative_eq!(sl4.margin, 0.0, epsilon = 1e-12);

        // Strictly weaker than the eigenvalue-sum condition.
        let sl3 = check_pinching(&space("AI(3)"), 1).unwrap();
        assert!(!sl3.holds);
        assert!(check_eigen_sum(&space("AI(3)"), 1).unwrap().holds);
    }

    #[test]
    fn root_triple_examples() {
        let su12 = check_root_triple(&space("SU(1,2)")).unwrap();
        assert!(su12.holds);
        assert_eq!(su12.margin, 0.0);

        let so22 = check_root_triple(&space("BDI(2,2)")).unwrap();
        assert!(!so22.holds);

        let sp2 = check_root_triple(&space("CI(2)")).unwrap();
        assert!(sp2.holds);
        assert!(sp2.margin > 0.0);

        let sl2 = check_root_triple(&space("AI(2)")).unwrap();
        assert!(!sl2.holds);
    }

    #[test]
    fn triple_condition_is_one_sided() {
        // Two expanded entries only: the triple test fails while the
        // eigenvalue-sum condition holds (the converse implication is false).
        let so13 = space("BDI(1,3)");
        assert_eq!(so13.system.total_multiplicity(), 2);
        assert!(!check_root_triple(&so13).unwrap().holds);
        assert!(check_eigen_sum(&so13, 1).unwrap().holds);
    }

    #[test]
    fn triple_implies_eigen_sum_on_small_catalog() {
        let rows = Catalog::builtin().enumerate(&CatalogFilter::with_max_param(4));
        for d in rows {
            if check_root_triple(&d).unwrap().holds {
                assert!(
                    check_eigen_sum(&d, 1).unwrap().holds,
                    "{}: triple holds but eigen-sum fails",
                    d.label
                );
            }
        }
    }

    #[test]
    fn proof_chain_on_benchmark_cases() {
        let report = verify_proof_chain(&space("AI(3)"), 1, 200, &[0.1, 1.0, 10.0], 0).unwrap();
        assert!(report.pass, "min {}", report.min_value);
        assert!(report.min_value >= 0.0);

        // Away from the equality locus the chain is strictly positive.
        let su12 = space("SU(1,2)");
        let s = 1.0 / 12f64.sqrt();
        let coth = |x: f64| 1.0 / x.tanh();
        let expected = 2.0 * s * coth(s) - 2.0 * s * coth(2.0 * s);
        let report = verify_proof_chain(&su12, 1, 10, &[1.0], 0).unwrap();
        assert_relative_eq!(report.min_value, expected, epsilon = 1e-12);
        assert!(report.min_value > 0.0);
    }

    #[test]
    fn proof_chain_blows_up_at_tiny_radius() {
        let report = verify_proof_chain(&space("AI(3)"), 1, 20, &[1e-6], 0).unwrap();
        assert!(report.min_value > 1e5);
    }

    #[test]
    fn proof_chain_refuses_failing_precondition() {
        let err = verify_proof_chain(&space("BDI(2,2)"), 1, 10, &[1.0], 0);
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn implication_holds_on_small_catalog() {
        let rows = Catalog::builtin().enumerate(&CatalogFilter::with_max_param(4));
        let report =
            check_pinching_implies_eigen_sum(&rows, 1..=2, &SearchOptions::default()).unwrap();
        assert!(report.pairs_checked > 0);
        assert!(report.pinching_holds > 0);
        assert!(report.counterexamples.is_empty(), "{:?}", report.counterexamples);
    }

    #[test]
    fn eigen_sum_failure_is_monotone_in_p() {
        for name in ["AI(3)", "SU(1,2)", "CI(2)", "BDI(2,3)", "AIII(1,3)"] {
            let d = space(name);
            let mut failed = false;
            for p in 1..d.dim.min(6) {
                let holds = check_eigen_sum(&d, p).unwrap().holds;
                if failed {
                    assert!(!holds, "{name}: condition re-held at p={p} after failing");
                }
                failed = failed || !holds;
            }
        }
    }

    #[test]
    fn witnesses_reproduce_margins() {
        for name in ["AI(3)", "SU(1,2)", "BDI(2,2)", "CI(3)"] {
            let d = space(name);
            for p in [1u32, 2] {
                if p > d.dim - 1 {
                    continue;
                }
                let cert = check_eigen_sum(&d, p).unwrap();
                let residual = witness_residual(&d, &cert).unwrap();
                assert!(residual <= 1e-10, "{name} p={p}: residual {residual}");
            }
        }
    }

    #[test]
    fn p_out_of_range_is_rejected() {
        let sl3 = space("AI(3)");
        assert!(check_eigen_sum(&sl3, sl3.dim).is_err());
        assert!(check_pinching(&sl3, sl3.dim).is_err());
    }
}
