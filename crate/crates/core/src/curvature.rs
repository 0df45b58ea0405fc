//! Spectra of the curvature transformation and of the distance Hessian.
//!
//! Along a geodesic with unit initial direction `h` in the flat, the operator
//! `X -> -[[X,h],h]` has eigenvalue 0 on the flat and `-lambda(h)^2` on each
//! root space; the Hessian of the distance function at radius `r` has
//! eigenvalues `lambda(h) coth(lambda(h) r)` with the flat directions
//! contributing the Euclidean `1/r`.

use crate::catalog::SpaceDescriptor;
use crate::error::{Error, Result};
use crate::exact::{self, Rat};
use num_traits::Zero;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SpectrumKind {
    RootValues,
    CurvatureOperator,
    HessianOfDistance { radius: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSpectrum {
    /// `(value, multiplicity)` pairs, sorted by value descending.
    pub entries: Vec<(f64, u32)>,
    /// Unit direction in orthonormal flat coordinates.
    pub direction: Vec<f64>,
    pub kind: SpectrumKind,
}

impl CurvatureSpectrum {
    pub fn total_multiplicity(&self) -> u32 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Sum of value times multiplicity.
    pub fn weighted_sum(&self) -> f64 {
        self.entries.iter().map(|(v, m)| v * f64::from(*m)).sum()
    }

    /// Values expanded by multiplicity, descending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_multiplicity() as usize);
        for (v, m) in &self.entries {
            out.extend(std::iter::repeat(*v).take(*m as usize));
        }
        out.sort_by(|a, b| b.partial_cmp(a).unwrap());
        out
    }
}

/// Pinching data: `-A` bounds the sectional curvature from below (attained in
/// the plane of the longest root), `-B` is the radial Ricci value.
#[derive(Clone, Debug, Serialize)]
pub struct PinchingReport {
    pub a: f64,
    pub b: f64,
    pub ratio: f64,
    pub max_p_by_pinching: u32,
    #[serde(skip)]
    pub(crate) ratio_exact: Rat,
}

fn unit_direction(space: &SpaceDescriptor, h: &[f64]) -> Result<Vec<f64>> {
    if h.len() != space.rank {
        return Err(Error::InvalidParameter(format!(
            "direction has {} coordinates, rank is {}",
            h.len(),
            space.rank
        )));
    }
    let norm_sq: f64 = h.iter().map(|x| x * x).sum();
    if norm_sq == 0.0 || !norm_sq.is_finite() {
        return Err(Error::InvalidParameter("direction must be a nonzero finite vector".into()));
    }
    let norm = norm_sq.sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        log::warn!("direction has norm {norm:.6}; normalizing");
    }
    Ok(h.iter().map(|x| x / norm).collect())
}

fn sort_desc(entries: &mut [(f64, u32)]) {
    entries.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
}

/// `(|lambda(h)|, m_lambda)` per positive root; the values feeding the
/// eigenvalue-sum condition before zero padding.
pub fn root_values(space: &SpaceDescriptor, h: &[f64]) -> Result<CurvatureSpectrum> {
    let h = unit_direction(space, h)?;
    let sys = &space.system;
    let mut entries: Vec<(f64, u32)> = sys
        .float_roots()
        .iter()
        .zip(sys.multiplicities())
        .map(|(root, &m)| {
            let v: f64 = root.iter().zip(&h).map(|(a, b)| a * b).sum();
            (v.abs(), m)
        })
        .collect();
    sort_desc(&mut entries);
    Ok(CurvatureSpectrum { entries, direction: h, kind: SpectrumKind::RootValues })
}

/// Spectrum of `X -> -[[X,h],h]` on the orthogonal complement of `h`:
/// `-lambda(h)^2` on each root space plus a structural zero of multiplicity
/// `rank - 1`.
pub fn curvature_spectrum(space: &SpaceDescriptor, h: &[f64]) -> Result<CurvatureSpectrum> {
    let h = unit_direction(space, h)?;
    let sys = &space.system;
    let mut entries: Vec<(f64, u32)> = sys
        .float_roots()
        .iter()
        .zip(sys.multiplicities())
        .map(|(root, &m)| {
            let v: f64 = root.iter().zip(&h).map(|(a, b)| a * b).sum();
            (-(v * v), m)
        })
        .collect();
    if space.rank > 1 {
        entries.push((0.0, (space.rank - 1) as u32));
    }
    sort_desc(&mut entries);
    Ok(CurvatureSpectrum { entries, direction: h, kind: SpectrumKind::CurvatureOperator })
}

/// `lambda coth(lambda r)` with the removable singularity at `lambda = 0`
/// evaluated as `1/r`. Below `lambda r = 1e-4` a three-term series avoids the
/// cancellation in `coth(x) ~ 1/x`.
pub fn lambda_coth(v: f64, r: f64) -> f64 {
    debug_assert!(v >= 0.0 && r > 0.0);
    let x = v * r;
    if x < 1e-4 {
        1.0 / r + v * v * r / 3.0 - v.powi(4) * r.powi(3) / 45.0
    } else {
        // coth(x) = 1 + 2/(e^{2x} - 1); exp saturates harmlessly for large x.
        v * (1.0 + 2.0 / (2.0 * x).exp_m1())
    }
}

/// Eigenvalues of the distance Hessian at radius `r`: root entries map to
/// `v coth(v r)`, the `rank - 1` flat directions to `1/r`.
pub fn hessian_spectrum(space: &SpaceDescriptor, h: &[f64], radius: f64) -> Result<CurvatureSpectrum> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let rv = root_values(space, h)?;
    let mut entries: Vec<(f64, u32)> =
        rv.entries.iter().map(|(v, m)| (lambda_coth(*v, radius), *m)).collect();
    if space.rank > 1 {
        entries.push((1.0 / radius, (space.rank - 1) as u32));
    }
    sort_desc(&mut entries);
    Ok(CurvatureSpectrum {
        entries,
        direction: rv.direction,
        kind: SpectrumKind::HessianOfDistance { radius },
    })
}

/// Limiting Hessian eigenvalue list as the radius grows: the root values plus
/// a zero of multiplicity `rank - 1`.
pub fn asymptotic_hessian_values(space: &SpaceDescriptor, h: &[f64]) -> Result<CurvatureSpectrum> {
    let rv = root_values(space, h)?;
    let mut entries = rv.entries;
    if space.rank > 1 {
        entries.push((0.0, (space.rank - 1) as u32));
    }
    sort_desc(&mut entries);
    Ok(CurvatureSpectrum { entries, direction: rv.direction, kind: SpectrumKind::RootValues })
}

/// Radial Ricci curvature `-sum m_lambda lambda(h)^2`, evaluated at `h` as
/// given (quadratic under rescaling; equals -1/2 for unit `h` after Killing
/// normalization).
pub fn ricci_radial(space: &SpaceDescriptor, h: &[f64]) -> f64 {
    let sys = &space.system;
    -sys.float_roots()
        .iter()
        .zip(sys.multiplicities())
        .map(|(root, &m)| {
            let v: f64 = root.iter().zip(h).map(|(a, b)| a * b).sum();
            f64::from(m) * v * v
        })
        .sum::<f64>()
}

pub fn pinching(space: &SpaceDescriptor) -> PinchingReport {
    let sys = &space.system;
    let mut a_max = Rat::zero();
    for i in 0..sys.positive_roots().len() {
        let n = sys.root_norm_sq(i);
        if n > a_max {
            a_max = n;
        }
    }
    let ratio_exact = exact::rat(1, 2) / &a_max;
    let mut p = 0u32;
    while {
        let next = p + 1;
        exact::rat_int(i64::from(next) * i64::from(next + 1)) <= ratio_exact
    } {
        p += 1;
    }
    PinchingReport {
        a: exact::to_f64(&a_max),
        b: 0.5,
        ratio: exact::to_f64(&ratio_exact),
        max_p_by_pinching: p,
        ratio_exact,
    }
}

/// Direction of the longest root (where the extremal sectional curvature is
/// attained), as a unit float vector.
pub fn extremal_direction(space: &SpaceDescriptor) -> Vec<f64> {
    let sys = &space.system;
    let mut best = 0usize;
    let mut best_norm = Rat::zero();
    for i in 0..sys.positive_roots().len() {
        let n = sys.root_norm_sq(i);
        if n > best_norm {
            best_norm = n;
            best = i;
        }
    }
    let mut v = sys.root_float(best);
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}
