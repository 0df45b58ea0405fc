//! Restricted root systems in exact coordinates.
//!
//! Roots are stored as rational coordinate vectors relative to an orthonormal
//! basis of the maximal flat. Two symbolic scale layers keep every pairing
//! rational: a fixed per-coordinate factor `sqrt(d_i)` chosen at construction
//! (the A/E/G lattices admit no all-rational orthonormal realization, but they
//! do admit one up to a diagonal square-root scaling), and a global factor `s`
//! with `s^2` rational, set by Killing normalization. The true root vector is
//! `s * diag(sqrt(d_i)) * coords`, so inner products `s^2 * sum d_i u_i v_i`
//! are exact rationals throughout.
//!
//! Killing normalization rescales a system so that
//! `sum_{positive roots} m_lambda * lambda lambda^T = I/2`,
//! which pins the radial Ricci curvature at -1/2 in every direction.

use crate::error::{Error, Result};
use crate::exact::{self, dot_diag, rat, rat_int, Rat};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Abstract family of a (possibly non-reduced) root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum RootFamily {
    A,
    B,
    C,
    D,
    BC,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl RootFamily {
    pub fn parse(s: &str) -> Option<RootFamily> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Some(RootFamily::A),
            "B" => Some(RootFamily::B),
            "C" => Some(RootFamily::C),
            "D" => Some(RootFamily::D),
            "BC" => Some(RootFamily::BC),
            "E6" => Some(RootFamily::E6),
            "E7" => Some(RootFamily::E7),
            "E8" => Some(RootFamily::E8),
            "F4" => Some(RootFamily::F4),
            "G2" => Some(RootFamily::G2),
            _ => None,
        }
    }

    fn fixed_rank(self) -> Option<usize> {
        match self {
            RootFamily::E6 => Some(6),
            RootFamily::E7 => Some(7),
            RootFamily::E8 => Some(8),
            RootFamily::F4 => Some(4),
            RootFamily::G2 => Some(2),
            _ => None,
        }
    }

    /// Number of positive roots, counted without multiplicity.
    pub fn positive_root_count(self, rank: usize) -> usize {
        match self {
            RootFamily::A => rank * (rank + 1) / 2,
            RootFamily::B | RootFamily::C => rank * rank,
            RootFamily::D => rank * (rank - 1),
            RootFamily::BC => rank * rank + rank,
            RootFamily::G2 => 6,
            RootFamily::F4 => 24,
            RootFamily::E6 => 36,
            RootFamily::E7 => 63,
            RootFamily::E8 => 120,
        }
    }
}

impl fmt::Display for RootFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootFamily::A => "A",
            RootFamily::B => "B",
            RootFamily::C => "C",
            RootFamily::D => "D",
            RootFamily::BC => "BC",
            RootFamily::E6 => "E6",
            RootFamily::E7 => "E7",
            RootFamily::E8 => "E8",
            RootFamily::F4 => "F4",
            RootFamily::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// Length class of a Weyl orbit of positive roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum OrbitClass {
    All,
    Short,
    Middle,
    Long,
}

impl OrbitClass {
    pub fn parse(s: &str) -> Option<OrbitClass> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Some(OrbitClass::All),
            "short" => Some(OrbitClass::Short),
            "middle" => Some(OrbitClass::Middle),
            "long" => Some(OrbitClass::Long),
            _ => None,
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrbitClass::All => "all",
            OrbitClass::Short => "short",
            OrbitClass::Middle => "middle",
            OrbitClass::Long => "long",
        };
        f.write_str(s)
    }
}

/// A root as a rational coordinate vector (the symbolic scales live on the
/// owning system).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RootVector {
    coords: Vec<Rat>,
}

impl RootVector {
    fn new(coords: Vec<Rat>) -> Self {
        debug_assert!(coords.iter().any(|c| !c.is_zero()), "zero root vector");
        RootVector { coords }
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }
}

/// Positive restricted roots of one irreducible system, with multiplicities.
#[derive(Clone, Debug)]
pub struct RestrictedRootSystem {
    family: RootFamily,
    rank: usize,
    /// Squares `d_i` of the per-coordinate scale factors.
    coord_scale_sq: Vec<Rat>,
    /// Square `s^2` of the global normalization scale.
    norm_scale_sq: Rat,
    positive_roots: Vec<RootVector>,
    multiplicities: Vec<u32>,
    simple_indices: Vec<usize>,
}

impl RestrictedRootSystem {
    /// Standard positive system for `family` at `rank`, all multiplicities 1.
    pub fn build(family: RootFamily, rank: usize) -> Result<Self> {
        if let Some(fixed) = family.fixed_rank() {
            if rank != fixed {
                return Err(Error::InvalidParameter(format!(
                    "{family} has fixed rank {fixed}, got {rank}"
                )));
            }
        }
        let min_rank = match family {
            RootFamily::D => 2,
            _ => 1,
        };
        if rank < min_rank {
            return Err(Error::InvalidParameter(format!(
                "{family} requires rank >= {min_rank}, got {rank}"
            )));
        }

        let (coord_scale_sq, roots) = match family {
            RootFamily::A => families::type_a(rank),
            RootFamily::B => families::type_b(rank),
            RootFamily::C => families::type_c(rank),
            RootFamily::D => families::type_d(rank),
            RootFamily::BC => families::type_bc(rank),
            RootFamily::G2 => families::type_g2(),
            RootFamily::F4 => families::type_f4(),
            RootFamily::E6 => families::type_e6(),
            RootFamily::E7 => families::type_e7(),
            RootFamily::E8 => families::type_e8(),
        };

        let expected = family.positive_root_count(rank);
        if roots.len() != expected {
            return Err(Error::Data(format!(
                "{family}_{rank}: built {} positive roots, expected {expected}",
                roots.len()
            )));
        }

        let positive_roots: Vec<RootVector> = roots.into_iter().map(RootVector::new).collect();
        let simple_indices = derive_simple_roots(&positive_roots);
        if simple_indices.len() != rank {
            return Err(Error::Data(format!(
                "{family}_{rank}: derived {} simple roots, expected {rank}",
                simple_indices.len()
            )));
        }
        let simple_rows: Vec<Vec<Rat>> = simple_indices
            .iter()
            .map(|&i| positive_roots[i].coords.to_vec())
            .collect();
        if exact::rank_of(&simple_rows) != rank {
            return Err(Error::Data(format!(
                "{family}_{rank}: simple roots are linearly dependent"
            )));
        }

        let n = positive_roots.len();
        Ok(RestrictedRootSystem {
            family,
            rank,
            coord_scale_sq,
            norm_scale_sq: rat_int(1),
            positive_roots,
            multiplicities: vec![1; n],
            simple_indices,
        })
    }

    pub fn family(&self) -> RootFamily {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn positive_roots(&self) -> &[RootVector] {
        &self.positive_roots
    }

    pub fn multiplicity(&self, index: usize) -> u32 {
        self.multiplicities[index]
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// `N = sum of multiplicities` over the positive roots.
    pub fn total_multiplicity(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple_indices
    }

    pub fn norm_scale_sq(&self) -> &Rat {
        &self.norm_scale_sq
    }

    /// Squared per-coordinate scales `d_i`.
    pub fn coord_scale_sq(&self) -> &[Rat] {
        &self.coord_scale_sq
    }

    /// Diagonal of the exact metric in stored coordinates: `g_i = s^2 d_i`.
    pub fn metric_diag(&self) -> Vec<Rat> {
        self.coord_scale_sq.iter().map(|d| d * &self.norm_scale_sq).collect()
    }

    /// Exact inner product of two coordinate vectors, scales included.
    pub fn inner(&self, u: &[Rat], v: &[Rat]) -> Rat {
        &self.norm_scale_sq * dot_diag(&self.coord_scale_sq, u, v)
    }

    pub fn root_inner(&self, i: usize, j: usize) -> Rat {
        self.inner(self.positive_roots[i].coords(), self.positive_roots[j].coords())
    }

    /// Exact squared norm of a positive root.
    pub fn root_norm_sq(&self, i: usize) -> Rat {
        self.root_inner(i, i)
    }

    /// Pre-scale inner product (used for orbit classification, which must not
    /// depend on the normalization state).
    fn inner_raw(&self, u: &[Rat], v: &[Rat]) -> Rat {
        dot_diag(&self.coord_scale_sq, u, v)
    }

    /// Distinct length classes present, paired with their pre-scale squared
    /// norms, shortest first.
    pub fn orbit_classes(&self) -> Vec<(OrbitClass, Rat)> {
        let mut norms: Vec<Rat> = Vec::new();
        for r in &self.positive_roots {
            let n = self.inner_raw(r.coords(), r.coords());
            if !norms.contains(&n) {
                norms.push(n);
            }
        }
        norms.sort();
        match norms.len() {
            1 => vec![(OrbitClass::All, norms[0].clone())],
            2 => vec![
                (OrbitClass::Short, norms[0].clone()),
                (OrbitClass::Long, norms[1].clone()),
            ],
            3 => vec![
                (OrbitClass::Short, norms[0].clone()),
                (OrbitClass::Middle, norms[1].clone()),
                (OrbitClass::Long, norms[2].clone()),
            ],
            n => unreachable!("root system with {n} length classes"),
        }
    }

    pub fn orbit_class_of(&self, index: usize) -> OrbitClass {
        let norm = self.inner_raw(
            self.positive_roots[index].coords(),
            self.positive_roots[index].coords(),
        );
        self.orbit_classes()
            .into_iter()
            .find(|(_, n)| *n == norm)
            .map(|(c, _)| c)
            .expect("root norm not in any orbit class")
    }

    /// Attach a multiplicity to every length class.
    pub fn with_multiplicities(&self, map: &BTreeMap<OrbitClass, u32>) -> Result<Self> {
        let classes = self.orbit_classes();
        for (class, _) in &classes {
            match map.get(class) {
                None => {
                    return Err(Error::Data(format!(
                        "multiplicity map misses orbit class `{class}`"
                    )))
                }
                Some(0) => {
                    return Err(Error::Data(format!(
                        "orbit class `{class}` assigned multiplicity 0"
                    )))
                }
                Some(_) => {}
            }
        }
        for class in map.keys() {
            if !classes.iter().any(|(c, _)| c == class) {
                return Err(Error::Data(format!(
                    "multiplicity map names absent orbit class `{class}`"
                )));
            }
        }
        let mut out = self.clone();
        for i in 0..out.positive_roots.len() {
            let class = out.orbit_class_of(i);
            out.multiplicities[i] = map[&class];
        }
        Ok(out)
    }

    /// Rescale so that `sum m_lambda lambda lambda^T = I/2` exactly.
    ///
    /// Fails when the weighted outer-product sum is not a scalar matrix,
    /// which signals a corrupted or non-irreducible system. (The orthogonal
    /// rank-2 pair used for the flat rank-2 exception still passes: its sum
    /// is `t * I`.)
    pub fn killing_normalized(&self) -> Result<Self> {
        // S_ij = sum m u_i u_j in raw coordinates; scalar iff off-diagonals
        // vanish and d_i S_ii is constant.
        let r = self.rank;
        let mut s = vec![vec![Rat::zero(); r]; r];
        for (root, &m) in self.positive_roots.iter().zip(&self.multiplicities) {
            let u = root.coords();
            let mf = rat_int(i64::from(m));
            for i in 0..r {
                if u[i].is_zero() {
                    continue;
                }
                for j in i..r {
                    if !u[j].is_zero() {
                        let add = &mf * &u[i] * &u[j];
                        s[i][j] += add;
                    }
                }
            }
        }
        for i in 0..r {
            for j in (i + 1)..r {
                if !s[i][j].is_zero() {
                    return Err(Error::IdentityViolation {
                        identity: "ricci",
                        label: format!("{}_{}", self.family, self.rank),
                        detail: format!(
                            "sum m root root^T has nonzero off-diagonal entry ({i},{j})"
                        ),
                    });
                }
            }
        }
        let c = &self.coord_scale_sq[0] * &s[0][0];
        for i in 1..r {
            let ci = &self.coord_scale_sq[i] * &s[i][i];
            if ci != c {
                return Err(Error::IdentityViolation {
                    identity: "ricci",
                    label: format!("{}_{}", self.family, self.rank),
                    detail: format!("sum m root root^T is diagonal but not scalar at {i}"),
                });
            }
        }
        if c.is_zero() {
            return Err(Error::Data("empty root system cannot be normalized".into()));
        }
        let mut out = self.clone();
        out.norm_scale_sq = rat(1, 2) / c;
        Ok(out)
    }

    #[cfg(test)]
    pub(crate) fn rescaled(&self, factor_sq: Rat) -> Self {
        let mut out = self.clone();
        out.norm_scale_sq = &out.norm_scale_sq * factor_sq;
        out
    }

    /// Conversion factors from stored coordinates to the orthonormal basis of
    /// the flat: `true_i = sqrt(s^2 d_i) * coord_i`.
    pub fn coord_to_ambient_factors(&self) -> Vec<f64> {
        self.metric_diag().iter().map(|g| exact::to_f64(g).sqrt()).collect()
    }

    /// Positive root as a float vector in the orthonormal basis.
    pub fn root_float(&self, index: usize) -> Vec<f64> {
        let f = self.coord_to_ambient_factors();
        self.positive_roots[index]
            .coords()
            .iter()
            .zip(&f)
            .map(|(c, fi)| exact::to_f64(c) * fi)
            .collect()
    }

    /// All positive roots as float vectors, converting the exact data once.
    /// Loops evaluating many directions should use this instead of repeated
    /// `eval_root` calls.
    pub fn float_roots(&self) -> Vec<Vec<f64>> {
        let f = self.coord_to_ambient_factors();
        self.positive_roots
            .iter()
            .map(|r| r.coords().iter().zip(&f).map(|(c, fi)| exact::to_f64(c) * fi).collect())
            .collect()
    }

    /// `lambda_i(h)` for `h` in orthonormal coordinates.
    pub fn eval_root(&self, index: usize, h: &[f64]) -> f64 {
        let f = self.coord_to_ambient_factors();
        self.positive_roots[index]
            .coords()
            .iter()
            .zip(f.iter().zip(h))
            .map(|(c, (fi, hi))| exact::to_f64(c) * fi * hi)
            .sum()
    }

    /// Reflect `h` in the hyperplane of a positive root (a Weyl generator
    /// when the root is simple).
    pub fn reflect(&self, h: &[f64], root_index: usize) -> Vec<f64> {
        let root = self.root_float(root_index);
        let norm_sq: f64 = root.iter().map(|x| x * x).sum();
        let pairing: f64 = root.iter().zip(h).map(|(r, x)| r * x).sum();
        let t = 2.0 * pairing / norm_sq;
        h.iter().zip(&root).map(|(x, r)| x - t * r).collect()
    }

    /// Connectivity of the simple-root pairing graph.
    pub fn is_irreducible(&self) -> bool {
        let n = self.simple_indices.len();
        if n <= 1 {
            return true;
        }
        let coords: Vec<&[Rat]> = self
            .simple_indices
            .iter()
            .map(|&i| self.positive_roots[i].coords())
            .collect();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && !self.inner_raw(coords[i], coords[j]).is_zero() {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// The closed positive chamber cut out by the simple roots.
    pub fn chamber(&self) -> Result<ChamberCone> {
        ChamberCone::from_system(self)
    }
}

/// Closed Weyl chamber `{h : <alpha, h> >= 0 for all simple alpha}`, with the
/// dual extreme rays and float views precomputed.
#[derive(Clone, Debug)]
pub struct ChamberCone {
    rank: usize,
    /// Diagonal metric `g_i = s^2 d_i` in stored coordinates.
    metric: Vec<Rat>,
    /// Simple-root coordinate vectors (the walls).
    walls: Vec<Vec<Rat>>,
    /// Extreme rays `g_k` with `<alpha_j, g_k> = delta_jk`.
    rays: Vec<Vec<Rat>>,
    /// sqrt(g_i): conversion to orthonormal coordinates.
    factors_float: Vec<f64>,
    walls_float: Vec<Vec<f64>>,
    rays_unit_float: Vec<Vec<f64>>,
}

impl ChamberCone {
    fn from_system(system: &RestrictedRootSystem) -> Result<Self> {
        let rank = system.rank();
        let metric = system.metric_diag();
        let walls: Vec<Vec<Rat>> = system
            .simple_indices()
            .iter()
            .map(|&i| system.positive_roots()[i].coords().to_vec())
            .collect();
        // Rays solve (A G) x = e_k where A has the walls as rows.
        let mut ag = vec![vec![Rat::zero(); rank]; rank];
        for (j, wall) in walls.iter().enumerate() {
            for i in 0..rank {
                ag[j][i] = &wall[i] * &metric[i];
            }
        }
        let inv = exact::invert(&ag).ok_or(Error::DegenerateChamber)?;
        let rays: Vec<Vec<Rat>> = (0..rank)
            .map(|k| (0..rank).map(|i| inv[i][k].clone()).collect())
            .collect();
        let factors_float: Vec<f64> = metric.iter().map(|g| exact::to_f64(g).sqrt()).collect();
        let to_ambient = |v: &[Rat]| -> Vec<f64> {
            v.iter().zip(&factors_float).map(|(c, f)| exact::to_f64(c) * f).collect()
        };
        let walls_float: Vec<Vec<f64>> = walls.iter().map(|w| to_ambient(w)).collect();
        let rays_unit_float: Vec<Vec<f64>> = rays
            .iter()
            .map(|r| {
                let mut v = to_ambient(r);
                let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter_mut().for_each(|x| *x /= norm);
                v
            })
            .collect();
        Ok(ChamberCone { rank, metric, walls, rays, factors_float, walls_float, rays_unit_float })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn metric(&self) -> &[Rat] {
        &self.metric
    }

    pub fn walls(&self) -> &[Vec<Rat>] {
        &self.walls
    }

    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }

    pub fn dot(&self, u: &[Rat], v: &[Rat]) -> Rat {
        dot_diag(&self.metric, u, v)
    }

    /// Exact membership test for a coordinate vector.
    pub fn contains(&self, v: &[Rat]) -> bool {
        self.walls.iter().all(|w| !self.dot(w, v).is_negative())
    }

    /// Conversion factors to orthonormal coordinates (`sqrt(g_i)`).
    pub fn ambient_factors(&self) -> &[f64] {
        &self.factors_float
    }

    /// The walls as float vectors in orthonormal coordinates.
    pub fn walls_float(&self) -> &[Vec<f64>] {
        &self.walls_float
    }

    /// Unit float vector (orthonormal coordinates) along a rational direction.
    pub fn unit_float(&self, v: &[Rat]) -> Vec<f64> {
        let mut out: Vec<f64> = v
            .iter()
            .zip(&self.factors_float)
            .map(|(c, fi)| exact::to_f64(c) * fi)
            .collect();
        let norm: f64 = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut out {
            *x /= norm;
        }
        out
    }

    /// Unit float vector along extreme ray `k`.
    pub fn ray_unit_float(&self, k: usize) -> Vec<f64> {
        self.rays_unit_float[k].clone()
    }

    /// Approximate membership for a float vector in orthonormal coordinates.
    pub fn contains_float(&self, h: &[f64], tol: f64) -> bool {
        self.walls_float
            .iter()
            .all(|w| w.iter().zip(h).map(|(a, b)| a * b).sum::<f64>() >= -tol)
    }
}

/// A positive root is simple iff it is not the sum of two positive roots.
fn derive_simple_roots(positive: &[RootVector]) -> Vec<usize> {
    let set: BTreeSet<&[Rat]> = positive.iter().map(|r| r.coords()).collect();
    let mut simple = Vec::new();
    'outer: for (i, alpha) in positive.iter().enumerate() {
        for beta in positive {
            if beta.coords() == alpha.coords() {
                continue;
            }
            let diff: Vec<Rat> = alpha
                .coords()
                .iter()
                .zip(beta.coords())
                .map(|(a, b)| a - b)
                .collect();
            if set.contains(diff.as_slice()) {
                continue 'outer;
            }
        }
        simple.push(i);
    }
    simple
}

mod families {
    //! Positive-root lists per family, in coordinates chosen so that all
    //! entries are rational under the per-coordinate scale convention.

    use super::*;

    fn ones(rank: usize) -> Vec<Rat> {
        vec![rat_int(1); rank]
    }

    fn basis_vec(rank: usize, entries: &[(usize, Rat)]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); rank];
        for (i, x) in entries {
            v[*i] = x.clone();
        }
        v
    }

    /// A_n realized inside the sum-zero hyperplane of R^{n+1}. Coordinate k
    /// (0-based) measures the component along
    /// `(e_0 + ... + e_k - (k+1) e_{k+1}) / sqrt((k+1)(k+2))`,
    /// so `d_k = 1/((k+1)(k+2))` and every `e_i - e_j` has integer entries.
    pub fn type_a(rank: usize) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let scales: Vec<Rat> = (0..rank)
            .map(|k| rat(1, ((k + 1) * (k + 2)) as i64))
            .collect();
        let coord = |i: usize, k: usize| -> i64 {
            if i <= k {
                1
            } else if i == k + 1 {
                -((k + 1) as i64)
            } else {
                0
            }
        };
        let mut roots = Vec::new();
        for i in 0..=rank {
            for j in (i + 1)..=rank {
                let v: Vec<Rat> = (0..rank).map(|k| rat_int(coord(i, k) - coord(j, k))).collect();
                roots.push(v);
            }
        }
        (scales, roots)
    }

    pub fn type_b(rank: usize) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let mut roots = Vec::new();
        for i in 0..rank {
            for j in (i + 1)..rank {
                roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(-1))]));
                roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(1))]));
            }
        }
        for i in 0..rank {
            roots.push(basis_vec(rank, &[(i, rat_int(1))]));
        }
        (ones(rank), roots)
    }

    pub fn type_c(rank: usize) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let mut roots = Vec::new();
        for i in 0..rank {
            for j in (i + 1)..rank {
                roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(-1))]));
                roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(1))]));
            }
        }
        for i in 0..rank {
            roots.push(basis_vec(rank, &[(i, rat_int(2))]));
        }
        (ones(rank), roots)
    }

    /// For rank 2 the two positive roots are an orthogonal pair; the
    /// coordinate-axis presentation keeps reported worst directions aligned
    /// with the roots themselves.
    pub fn type_d(rank: usize) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let mut roots = Vec::new();
        if rank == 2 {
            roots.push(basis_vec(2, &[(0, rat_int(1))]));
            roots.push(basis_vec(2, &[(1, rat_int(1))]));
        } else {
            for i in 0..rank {
                for j in (i + 1)..rank {
                    roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(-1))]));
                    roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(1))]));
                }
            }
        }
        (ones(rank), roots)
    }

    pub fn type_bc(rank: usize) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let mut roots = Vec::new();
        for i in 0..rank {
            for j in (i + 1)..rank {
                roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(-1))]));
                roots.push(basis_vec(rank, &[(i, rat_int(1)), (j, rat_int(1))]));
            }
        }
        for i in 0..rank {
            roots.push(basis_vec(rank, &[(i, rat_int(1))]));
            roots.push(basis_vec(rank, &[(i, rat_int(2))]));
        }
        (ones(rank), roots)
    }

    /// Short roots at squared length 1, long at 3, with `d = (1, 3)`.
    pub fn type_g2() -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let scales = vec![rat_int(1), rat_int(3)];
        let roots = vec![
            vec![rat_int(1), Rat::zero()],
            vec![rat(1, 2), rat(1, 2)],
            vec![rat(-1, 2), rat(1, 2)],
            vec![Rat::zero(), rat_int(1)],
            vec![rat(3, 2), rat(1, 2)],
            vec![rat(-3, 2), rat(1, 2)],
        ];
        (scales, roots)
    }

    pub fn type_f4() -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let mut roots = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                roots.push(basis_vec(4, &[(i, rat_int(1)), (j, rat_int(-1))]));
                roots.push(basis_vec(4, &[(i, rat_int(1)), (j, rat_int(1))]));
            }
        }
        for i in 0..4 {
            roots.push(basis_vec(4, &[(i, rat_int(1))]));
        }
        for s1 in [1i64, -1] {
            for s2 in [1i64, -1] {
                for s3 in [1i64, -1] {
                    roots.push(vec![rat(1, 2), rat(s1, 2), rat(s2, 2), rat(s3, 2)]);
                }
            }
        }
        (ones(4), roots)
    }

    /// Enumerate the full E8 root set in R^8, then keep the half fixed by a
    /// zero-free linear functional; the E6/E7 sets are the subsets orthogonal
    /// to the usual defining vectors, folded down to rank-many coordinates.
    fn e8_all_roots() -> Vec<Vec<Rat>> {
        let mut out = Vec::new();
        for i in 0..8 {
            for j in (i + 1)..8 {
                for si in [1i64, -1] {
                    for sj in [1i64, -1] {
                        let mut v = vec![Rat::zero(); 8];
                        v[i] = rat_int(si);
                        v[j] = rat_int(sj);
                        out.push(v);
                    }
                }
            }
        }
        for mask in 0u32..256 {
            if mask.count_ones() % 2 == 0 {
                let v: Vec<Rat> = (0..8)
                    .map(|i| if mask & (1 << i) != 0 { rat(-1, 2) } else { rat(1, 2) })
                    .collect();
                out.push(v);
            }
        }
        out
    }

    fn positive_half(scales: &[Rat], all: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
        // Weights 3^(rank-1-k) on the metric pairing separate every +/- pair
        // and vanish on no root for these lattices.
        let rank = scales.len();
        let weights: Vec<Rat> = (0..rank).map(|k| rat_int(3i64.pow((rank - 1 - k) as u32))).collect();
        let mut pos = Vec::new();
        for v in all {
            let mut phi = Rat::zero();
            for k in 0..rank {
                phi += &weights[k] * &scales[k] * &v[k];
            }
            assert!(!phi.is_zero(), "positivity functional vanished on a root");
            if phi.is_positive() {
                pos.push(v);
            }
        }
        pos
    }

    pub fn type_e8() -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let scales = ones(8);
        let pos = positive_half(&scales, e8_all_roots());
        (scales, pos)
    }

    /// E7 = the E8 roots orthogonal to `e_7 + e_8`; the seventh coordinate
    /// measures `(x_7 - x_8)/2` with `d_7 = 2`.
    pub fn type_e7() -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let mut scales = ones(7);
        scales[6] = rat_int(2);
        let mut folded = Vec::new();
        for v in e8_all_roots() {
            if !(&v[6] + &v[7]).is_zero() {
                continue;
            }
            let mut w: Vec<Rat> = v[0..6].to_vec();
            w.push((&v[6] - &v[7]) / rat_int(2));
            folded.push(w);
        }
        assert_eq!(folded.len(), 126);
        let pos = positive_half(&scales, folded);
        (scales, pos)
    }

    /// E6 = the E8 roots orthogonal to `e_6 + e_7` and `e_6 - e_8` (i.e. in
    /// the span of `e_1..e_5` and `e_8 - e_7 - e_6`); the sixth coordinate
    /// measures `(x_8 - x_7 - x_6)/3` with `d_6 = 3`.
    pub fn type_e6() -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let mut scales = ones(6);
        scales[5] = rat_int(3);
        let mut folded = Vec::new();
        for v in e8_all_roots() {
            // Last three coordinates proportional to (-1, -1, 1).
            if !(&v[5] - &v[6]).is_zero() || !(&v[5] + &v[7]).is_zero() {
                continue;
            }
            let mut w: Vec<Rat> = v[0..5].to_vec();
            w.push((&v[7] - &v[6] - &v[5]) / rat_int(3));
            folded.push(w);
        }
        assert_eq!(folded.len(), 72);
        let pos = positive_half(&scales, folded);
        (scales, pos)
    }
}
