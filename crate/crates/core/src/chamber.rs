//! Maximization of eigenvalue-sum functionals over the unit sphere of the
//! flat, restricted to the closed Weyl chamber.
//!
//! The exact path enumerates active wall sets: for each subset of walls the
//! candidate is the metric projection of the objective onto the wall
//! intersection, kept when it lies in the cone; the extreme rays complete the
//! candidate list (a negative maximum is always attained on a ray, and a
//! zero-projection face always contains one). All comparisons run on exact
//! `q * sqrt(rational)` scalars, so boundary ties are decided without
//! floating-point noise. A seeded grid-plus-refinement search doubles as an
//! independent oracle and as the fallback when the sub-multiset enumeration
//! would exceed its cap.

use crate::catalog::SpaceDescriptor;
use crate::error::{Error, Result};
use crate::exact::{self, invert, mat_vec, Rat, SqrtRat};
use crate::rootkit::ChamberCone;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OptMethod {
    ExactCone,
    Grid,
    Refined,
}

/// Result of one chamber maximization.
#[derive(Clone, Debug, Serialize)]
pub struct Optimum {
    pub value: f64,
    /// Unit maximizer in orthonormal flat coordinates.
    pub argmax: Vec<f64>,
    pub method: OptMethod,
    /// Indices of the walls active at the maximizer.
    pub active_walls: Vec<usize>,
    /// Alternative maximizer directions within tolerance.
    pub ties: Vec<Vec<f64>>,
    /// False when the value comes from sampling rather than enumeration.
    pub certified: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub force_grid: bool,
    /// Grid resolution override (defaults: 1e5 for rank <= 3, 2e4 above).
    pub resolution: Option<usize>,
    pub seed: u64,
    /// Sub-multiset budget before falling back to the sampled method.
    pub enumeration_cap: Option<usize>,
}

const DEFAULT_ENUMERATION_CAP: usize = 100_000;

struct ExactCandidate {
    value: SqrtRat,
    dir: Vec<Rat>,
    active: Vec<usize>,
}

struct ExactOpt {
    value: SqrtRat,
    dir: Vec<Rat>,
    active: Vec<usize>,
    ties: Vec<Vec<Rat>>,
}

/// Scale a rational direction to a canonical representative (first nonzero
/// coordinate becomes +/-1) so that parallel candidates deduplicate.
fn canonical_dir(v: &[Rat]) -> Vec<Rat> {
    let pivot = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rat::zero);
    if pivot.is_zero() {
        return v.to_vec();
    }
    let scale = pivot.abs();
    v.iter().map(|c| c / &scale).collect()
}

/// Exact maximizer of `<w, h>` over the chamber-sphere intersection.
struct ConeSolver<'a> {
    cone: &'a ChamberCone,
    /// Inverse of the matrix whose columns are the walls (mu-test).
    wall_expansion: Vec<Vec<Rat>>,
    /// Per-subset inverse Gram matrices, built lazily.
    gram_memo: HashMap<u32, (Vec<usize>, Vec<Vec<Rat>>)>,
}

impl<'a> ConeSolver<'a> {
    fn new(cone: &'a ChamberCone) -> Result<Self> {
        let rank = cone.rank();
        let mut a_t = vec![vec![Rat::zero(); rank]; rank];
        for (j, wall) in cone.walls().iter().enumerate() {
            for i in 0..rank {
                a_t[i][j] = wall[i].clone();
            }
        }
        let wall_expansion = invert(&a_t).ok_or(Error::DegenerateChamber)?;
        Ok(ConeSolver { cone, wall_expansion, gram_memo: HashMap::new() })
    }

    fn subset_data(&mut self, mask: u32) -> &(Vec<usize>, Vec<Vec<Rat>>) {
        let cone = self.cone;
        self.gram_memo.entry(mask).or_insert_with(|| {
            let indices: Vec<usize> =
                (0..cone.rank()).filter(|i| mask & (1 << i) != 0).collect();
            let k = indices.len();
            let mut gram = vec![vec![Rat::zero(); k]; k];
            for (a, &i) in indices.iter().enumerate() {
                for (b, &j) in indices.iter().enumerate() {
                    gram[a][b] = cone.dot(&cone.walls()[i], &cone.walls()[j]);
                }
            }
            let inv = invert(&gram).expect("wall subset Gram is positive definite");
            (indices, inv)
        })
    }

    fn ray_candidates(&self, w: &[Rat]) -> Vec<ExactCandidate> {
        let cone = self.cone;
        (0..cone.rank())
            .map(|k| {
                let ray = &cone.rays()[k];
                let value = SqrtRat::ratio_over_sqrt(cone.dot(w, ray), cone.dot(ray, ray));
                let active = (0..cone.rank()).filter(|&i| i != k).collect();
                ExactCandidate { value, dir: ray.clone(), active }
            })
            .collect()
    }

    /// All maxima of a nonpositive-maximum functional sit on extreme rays,
    /// so when `-w` expands nonnegatively over the walls the projection
    /// enumeration can be skipped entirely.
    fn max_is_nonpositive(&self, w: &[Rat]) -> bool {
        let neg_w: Vec<Rat> = w.iter().map(|x| -x).collect();
        let mu = mat_vec(&self.wall_expansion, &neg_w);
        mu.iter().all(|m| !m.is_negative())
    }

    fn maximize(&mut self, w: &[Rat]) -> ExactOpt {
        let rank = self.cone.rank();
        let mut candidates = Vec::new();

        if !self.max_is_nonpositive(w) {
            let full_mask = (1u32 << rank) - 1;
            for mask in 0..(1u32 << rank) {
                if mask == full_mask && rank > 0 {
                    continue; // projection onto {0}
                }
                let c = {
                    let cone = self.cone;
                    let (indices, gram_inv) = self.subset_data(mask);
                    let rhs: Vec<Rat> =
                        indices.iter().map(|&j| cone.dot(&cone.walls()[j], w)).collect();
                    let y = mat_vec(gram_inv, &rhs);
                    let mut c = w.to_vec();
                    for (coef, &j) in y.iter().zip(indices.iter()) {
                        for i in 0..rank {
                            let sub = coef * &cone.walls()[j][i];
                            c[i] -= sub;
                        }
                    }
                    c
                };
                if c.iter().all(Rat::is_zero) {
                    continue;
                }
                let feasible = self
                    .cone
                    .walls()
                    .iter()
                    .all(|wall| !self.cone.dot(wall, &c).is_negative());
                if !feasible {
                    continue;
                }
                let norm_sq = self.cone.dot(&c, &c);
                let active: Vec<usize> = (0..rank).filter(|i| mask & (1 << i) != 0).collect();
                candidates.push(ExactCandidate { value: SqrtRat::sqrt(norm_sq), dir: c, active });
            }
        }
        candidates.extend(self.ray_candidates(w));

        let best_idx = candidates
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.value.cmp(&b.value).then(ib.cmp(ia)))
            .map(|(i, _)| i)
            .expect("candidate list is never empty");
        let best_value = candidates[best_idx].value.clone();
        let winner_dir = canonical_dir(&candidates[best_idx].dir);
        let mut ties: Vec<Vec<Rat>> = Vec::new();
        for (i, cand) in candidates.iter().enumerate() {
            if i != best_idx && cand.value == best_value {
                let dir = canonical_dir(&cand.dir);
                if dir != winner_dir && !ties.contains(&dir) {
                    ties.push(dir);
                }
            }
        }
        ExactOpt {
            value: best_value,
            dir: candidates[best_idx].dir.clone(),
            active: candidates[best_idx].active.clone(),
            ties,
        }
    }
}

fn exact_to_optimum(cone: &ChamberCone, opt: ExactOpt) -> Optimum {
    Optimum {
        value: opt.value.to_f64(),
        argmax: cone.unit_float(&opt.dir),
        method: OptMethod::ExactCone,
        active_walls: opt.active,
        ties: opt.ties.iter().map(|d| cone.unit_float(d)).collect(),
        certified: true,
    }
}

/// Exact maximum of a linear functional (rational coordinates, chamber
/// metric) over the unit sphere inside the closed chamber.
pub fn maximize_linear_on_chamber_sphere(cone: &ChamberCone, w: &[Rat]) -> Result<Optimum> {
    if w.len() != cone.rank() {
        return Err(Error::InvalidParameter(format!(
            "functional has {} coordinates, rank is {}",
            w.len(),
            cone.rank()
        )));
    }
    let mut solver = ConeSolver::new(cone)?;
    Ok(exact_to_optimum(cone, solver.maximize(w)))
}

/// Float evaluator for `F_p`, with the exact root data converted once.
pub struct ObjectiveEvaluator {
    roots: Vec<Vec<f64>>,
    mults: Vec<u32>,
    structural_zeros: u32,
}

impl ObjectiveEvaluator {
    pub fn new(space: &SpaceDescriptor) -> Self {
        let sys = &space.system;
        ObjectiveEvaluator {
            roots: sys.float_roots(),
            mults: sys.multiplicities().to_vec(),
            structural_zeros: (space.rank - 1) as u32,
        }
    }

    /// `F_p(h)`: sum of the `p` largest entries of the value multiset
    /// `{|lambda(h)| with multiplicity} + {0 x (rank-1)}` minus the rest.
    pub fn value(&self, p: u32, h: &[f64]) -> f64 {
        let mut vals: Vec<(f64, u32)> = self
            .roots
            .iter()
            .zip(&self.mults)
            .map(|(root, &m)| {
                let v: f64 = root.iter().zip(h).map(|(a, b)| a * b).sum();
                (v.abs(), m)
            })
            .collect();
        if self.structural_zeros > 0 {
            vals.push((0.0, self.structural_zeros));
        }
        vals.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut take = p;
        let mut left = 0.0;
        let mut total = 0.0;
        for (v, m) in vals {
            total += v * f64::from(m);
            let t = take.min(m);
            left += v * f64::from(t);
            take -= t;
        }
        2.0 * left - total
    }
}

/// One-shot `F_p(h)` evaluation.
pub fn eval_objective(space: &SpaceDescriptor, p: u32, h: &[f64]) -> f64 {
    ObjectiveEvaluator::new(space).value(p, h)
}

fn composition_count(mults: &[u32], k: u32) -> usize {
    // Number of ways to choose k_i <= m_i with sum k, saturating at the cap.
    let cap = usize::MAX / 2;
    let mut dp = vec![0usize; k as usize + 1];
    dp[0] = 1;
    for &m in mults {
        let mut next = vec![0usize; k as usize + 1];
        for j in 0..=k as usize {
            if dp[j] == 0 {
                continue;
            }
            for c in 0..=(m as usize).min(k as usize - j) {
                next[j + c] = (next[j + c] + dp[j]).min(cap);
            }
        }
        dp = next;
    }
    dp[k as usize]
}

pub fn sum_of_p_largest_max(space: &SpaceDescriptor, p: u32) -> Result<Optimum> {
    sum_of_p_largest_max_with(space, p, &SearchOptions::default())
}

pub fn sum_of_p_largest_max_with(
    space: &SpaceDescriptor,
    p: u32,
    opts: &SearchOptions,
) -> Result<Optimum> {
    if p < 1 || p > space.dim - 1 {
        return Err(Error::OutOfRange("p", format!("{p} not in 1..={}", space.dim - 1)));
    }
    let sys = &space.system;
    let cone = sys.chamber()?;
    let n_total = sys.total_multiplicity();
    let k = p.min(n_total);
    let cap = opts.enumeration_cap.unwrap_or(DEFAULT_ENUMERATION_CAP);

    let count = composition_count(sys.multiplicities(), k);
    if opts.force_grid || count > cap {
        let res = opts.resolution.unwrap_or(default_resolution(space.rank));
        let mut opt = grid_search(space, p, res, opts.seed, OptMethod::Refined);
        opt.certified = false;
        return Ok(opt);
    }

    let rank = space.rank;
    let total: Vec<Rat> = {
        let mut t = vec![Rat::zero(); rank];
        for (i, root) in sys.positive_roots().iter().enumerate() {
            let m = exact::rat_int(i64::from(sys.multiplicity(i)));
            for (ti, c) in t.iter_mut().zip(root.coords()) {
                *ti += &m * c;
            }
        }
        t
    };

    // Enumerate sub-multisets as per-root counts, reduce each to the linear
    // functional 2 * sum(S) - total, and deduplicate.
    let mut functionals: Vec<(Rat, Vec<Rat>)> = Vec::new();
    let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let roots = sys.positive_roots();
    let mults = sys.multiplicities();
    let mut stack_sum = vec![Rat::zero(); rank];
    enumerate_compositions(
        roots,
        mults,
        0,
        k,
        &mut stack_sum,
        &mut |sum: &[Rat]| {
            let w: Vec<Rat> = sum
                .iter()
                .zip(&total)
                .map(|(s, t)| exact::rat_int(2) * s - t)
                .collect();
            if seen.insert(w.clone()) {
                let norm = cone.dot(&w, &w);
                functionals.push((norm, w));
            }
        },
    );
    functionals.sort_by(|a, b| b.0.cmp(&a.0));

    let mut solver = ConeSolver::new(&cone)?;
    let mut best: Option<ExactOpt> = None;
    for (norm_sq, w) in functionals {
        if let Some(b) = &best {
            // Any chamber maximum is bounded by |w|; the list is sorted.
            if b.value > SqrtRat::sqrt(norm_sq) {
                break;
            }
        }
        let opt = solver.maximize(&w);
        match &mut best {
            None => best = Some(opt),
            Some(b) => {
                if opt.value > b.value {
                    *b = opt;
                } else if opt.value == b.value {
                    let winner = canonical_dir(&b.dir);
                    let dir = canonical_dir(&opt.dir);
                    if dir != winner && !b.ties.contains(&dir) {
                        b.ties.push(dir);
                    }
                    for t in opt.ties {
                        if t != winner && !b.ties.contains(&t) {
                            b.ties.push(t);
                        }
                    }
                }
            }
        }
    }
    Ok(exact_to_optimum(&cone, best.expect("at least one sub-multiset")))
}

fn enumerate_compositions(
    roots: &[crate::rootkit::RootVector],
    mults: &[u32],
    index: usize,
    remaining: u32,
    sum: &mut Vec<Rat>,
    emit: &mut impl FnMut(&[Rat]),
) {
    if remaining == 0 {
        emit(sum);
        return;
    }
    if index >= roots.len() {
        return;
    }
    // Capacity pruning: the remaining roots must be able to absorb the count.
    let tail: u32 = mults[index..].iter().sum();
    if tail < remaining {
        return;
    }
    let max_here = mults[index].min(remaining);
    for c in 0..=max_here {
        if c > 0 {
            for (s, r) in sum.iter_mut().zip(roots[index].coords()) {
                *s += r;
            }
        }
        enumerate_compositions(roots, mults, index + 1, remaining - c, sum, emit);
    }
    // Undo the copies accumulated across the count loop.
    for (s, r) in sum.iter_mut().zip(roots[index].coords()) {
        let back = r * exact::rat_int(i64::from(max_here));
        *s -= back;
    }
}

fn default_resolution(rank: usize) -> usize {
    if rank <= 3 {
        100_000
    } else {
        20_000
    }
}

/// Independent sampled maximizer: dense chamber sampling plus local
/// refinement, deterministic for a fixed seed.
pub fn grid_oracle(space: &SpaceDescriptor, p: u32, resolution: usize, seed: u64) -> Result<Optimum> {
    if p < 1 || p > space.dim - 1 {
        return Err(Error::OutOfRange("p", format!("{p} not in 1..={}", space.dim - 1)));
    }
    if resolution < 10 {
        return Err(Error::InvalidParameter(format!(
            "grid resolution must be at least 10, got {resolution}"
        )));
    }
    Ok(grid_search(space, p, resolution, seed, OptMethod::Grid))
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= n;
    }
    v
}

fn grid_search(
    space: &SpaceDescriptor,
    p: u32,
    resolution: usize,
    seed: u64,
    method: OptMethod,
) -> Optimum {
    let cone = space.system.chamber().expect("catalog systems have full chambers");
    let rank = space.rank;
    let evaluator = ObjectiveEvaluator::new(space);
    let eval = |h: &[f64]| evaluator.value(p, h);

    let finish = |h: Vec<f64>, value: f64| -> Optimum {
        let active: Vec<usize> = cone
            .walls_float()
            .iter()
            .enumerate()
            .filter(|(_, wall)| {
                wall.iter().zip(&h).map(|(a, b)| a * b).sum::<f64>().abs() <= 1e-9
            })
            .map(|(i, _)| i)
            .collect();
        Optimum { value, argmax: h, method, active_walls: active, ties: vec![], certified: false }
    };

    if rank == 1 {
        let h = cone.ray_unit_float(0);
        let value = eval(&h);
        return finish(h, value);
    }

    if rank == 2 {
        let u0 = cone.ray_unit_float(0);
        let u1 = cone.ray_unit_float(1);
        let cos_t = (u0[0] * u1[0] + u0[1] * u1[1]).clamp(-1.0, 1.0);
        let theta = cos_t.acos();
        let point = |t: f64| -> Vec<f64> {
            let (a, b) = (((1.0 - t) * theta).sin(), (t * theta).sin());
            normalize(vec![
                (a * u0[0] + b * u1[0]) / theta.sin(),
                (a * u0[1] + b * u1[1]) / theta.sin(),
            ])
        };
        let mut best_t = 0.0;
        let mut best_v = f64::NEG_INFINITY;
        for j in 0..=resolution {
            let t = j as f64 / resolution as f64;
            let v = eval(&point(t));
            if v > best_v {
                best_v = v;
                best_t = t;
            }
        }
        // Golden-section polish around the best grid node.
        let delta = 2.0 / resolution as f64;
        let (mut lo, mut hi) = ((best_t - delta).max(0.0), (best_t + delta).min(1.0));
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let m1 = hi - phi * (hi - lo);
            let m2 = lo + phi * (hi - lo);
            if eval(&point(m1)) >= eval(&point(m2)) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let t = (lo + hi) / 2.0;
        let (h, v) = (point(t), eval(&point(t)));
        return if v >= best_v { finish(h, v) } else { finish(point(best_t), best_v) };
    }

    // rank >= 3: sampled chamber points, rays, wall midpoints, then local
    // pattern-search refinement from the best few samples.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rays: Vec<Vec<f64>> = (0..rank).map(|k| cone.ray_unit_float(k)).collect();
    let mut candidates: Vec<(f64, Vec<f64>)> = Vec::new();
    let consider = |h: Vec<f64>, candidates: &mut Vec<(f64, Vec<f64>)>| {
        let v = eval(&h);
        candidates.push((v, h));
    };
    for ray in &rays {
        consider(ray.clone(), &mut candidates);
    }
    for i in 0..rank {
        for j in (i + 1)..rank {
            let mid: Vec<f64> =
                rays[i].iter().zip(&rays[j]).map(|(a, b)| a + b).collect();
            consider(normalize(mid), &mut candidates);
        }
    }
    consider(
        normalize(rays.iter().fold(vec![0.0; rank], |acc, r| {
            acc.iter().zip(r).map(|(a, b)| a + b).collect()
        })),
        &mut candidates,
    );
    for trial in 0..resolution {
        if trial % 2 == 0 {
            // Nonnegative ray combination: always lands in the chamber.
            let h: Vec<f64> = rays.iter().fold(vec![0.0; rank], |acc, r| {
                let w: f64 = -(rng.gen::<f64>().max(1e-12)).ln();
                acc.iter().zip(r).map(|(a, b)| a + w * b).collect()
            });
            consider(normalize(h), &mut candidates);
        } else {
            // Rejection-sampled sphere point.
            let h: Vec<f64> = (0..rank)
                .map(|_| {
                    let (u1, u2) = (rng.gen::<f64>().max(1e-12), rng.gen::<f64>());
                    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                })
                .collect();
            let h = normalize(h);
            if cone.contains_float(&h, 0.0) {
                consider(h, &mut candidates);
            }
        }
    }
    candidates.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    candidates.truncate(6);

    let mut best = candidates[0].clone();
    for (v0, start) in candidates {
        let refined = pattern_search(&cone, start, v0, &eval);
        if refined.0 > best.0 {
            best = refined;
        }
    }
    finish(best.1, best.0)
}

fn pattern_search(
    cone: &ChamberCone,
    mut h: Vec<f64>,
    mut value: f64,
    eval: &impl Fn(&[f64]) -> f64,
) -> (f64, Vec<f64>) {
    let rank = h.len();
    let mut step = 0.25;
    while step > 1e-10 {
        let mut improved = false;
        for axis in 0..rank {
            for sign in [1.0, -1.0] {
                let mut cand = h.clone();
                cand[axis] += sign * step;
                let cand = normalize(cand);
                if !cone.contains_float(&cand, 1e-12) {
                    continue;
                }
                let v = eval(&cand);
                if v > value {
                    value = v;
                    h = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, h)
}

/// Random unit vector in the closed chamber (nonnegative ray mixture).
pub fn sample_chamber_unit(cone: &ChamberCone, rng: &mut impl Rng) -> Vec<f64> {
    let rank = cone.rank();
    let h = (0..rank).fold(vec![0.0; rank], |acc, k| {
        let ray = cone.ray_unit_float(k);
        let w: f64 = -(rng.gen::<f64>().max(1e-12)).ln();
        acc.iter().zip(&ray).map(|(a, b)| a + w * b).collect()
    });
    normalize(h)
}
