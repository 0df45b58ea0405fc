//! Registry of irreducible Riemannian symmetric spaces of noncompact type.
//!
//! Each row maps a family-plus-parameters label to its restricted root data,
//! rank and dimension. Two identities gate every row, built-in or loaded from
//! an override file: `dim = rank + sum of multiplicities`, and the scalarity
//! of `sum m_lambda lambda lambda^T` enforced by Killing normalization.

use crate::error::{Error, Result};
use crate::rootkit::{OrbitClass, RestrictedRootSystem, RootFamily};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SpaceFamily {
    AI,
    AII,
    AIII,
    BDI,
    DIII,
    CI,
    CII,
    EI,
    EII,
    EIII,
    EIV,
    EV,
    EVI,
    EVII,
    EVIII,
    EIX,
    FI,
    FII,
    G,
    Custom(String),
}

impl fmt::Display for SpaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceFamily::Custom(s) => f.write_str(s),
            other => f.write_str(match other {
                SpaceFamily::AI => "AI",
                SpaceFamily::AII => "AII",
                SpaceFamily::AIII => "AIII",
                SpaceFamily::BDI => "BDI",
                SpaceFamily::DIII => "DIII",
                SpaceFamily::CI => "CI",
                SpaceFamily::CII => "CII",
                SpaceFamily::EI => "EI",
                SpaceFamily::EII => "EII",
                SpaceFamily::EIII => "EIII",
                SpaceFamily::EIV => "EIV",
                SpaceFamily::EV => "EV",
                SpaceFamily::EVI => "EVI",
                SpaceFamily::EVII => "EVII",
                SpaceFamily::EVIII => "EVIII",
                SpaceFamily::EIX => "EIX",
                SpaceFamily::FI => "FI",
                SpaceFamily::FII => "FII",
                SpaceFamily::G => "G",
                SpaceFamily::Custom(_) => unreachable!(),
            }),
        }
    }
}

/// One irreducible symmetric space with its normalized restricted system.
#[derive(Clone, Debug)]
pub struct SpaceDescriptor {
    pub label: String,
    pub group_name: String,
    pub family: SpaceFamily,
    /// Integer parameters in ascending order (`[n]` or `[min, max]`).
    pub params: Vec<u32>,
    pub rank: usize,
    pub dim: u32,
    pub system: RestrictedRootSystem,
    /// The one catalog row that is a reducible product rather than an
    /// irreducible space; kept because it is the boundary counterexample.
    pub reducible_exception: bool,
    pub in_theorem_1_3_list: bool,
}

impl SpaceDescriptor {
    /// Whether the vanishing statement applies to this row at all.
    pub fn in_theorem_scope(&self) -> bool {
        self.dim > 2 && !self.reducible_exception
    }
}

#[derive(Clone, Debug, Default)]
pub struct CatalogFilter {
    pub family: Option<SpaceFamily>,
    pub rank_range: Option<(usize, usize)>,
    pub dim_range: Option<(u32, u32)>,
    pub theorem_1_3_only: bool,
    /// Upper bound for each integer parameter of the classical families.
    pub max_param: u32,
}

impl CatalogFilter {
    pub fn with_max_param(max_param: u32) -> Self {
        CatalogFilter { max_param, ..Default::default() }
    }

    fn admits(&self, d: &SpaceDescriptor) -> bool {
        if let Some(f) = &self.family {
            if *f != d.family {
                return false;
            }
        }
        if let Some((lo, hi)) = self.rank_range {
            if d.rank < lo || d.rank > hi {
                return false;
            }
        }
        if let Some((lo, hi)) = self.dim_range {
            if d.dim < lo || d.dim > hi {
                return false;
            }
        }
        if self.theorem_1_3_only && !d.in_theorem_1_3_list {
            return false;
        }
        true
    }
}

impl Default for SpaceFamily {
    fn default() -> Self {
        SpaceFamily::AI
    }
}

fn mult_map(entries: &[(OrbitClass, u32)]) -> BTreeMap<OrbitClass, u32> {
    entries.iter().cloned().collect()
}

/// B/C/BC multiplicity maps degenerate at rank 1 (fewer length classes).
fn map_b(rank: usize, m_pair: u32, m_single: u32) -> BTreeMap<OrbitClass, u32> {
    if rank == 1 {
        mult_map(&[(OrbitClass::All, m_single)])
    } else {
        mult_map(&[(OrbitClass::Long, m_pair), (OrbitClass::Short, m_single)])
    }
}

fn map_c(rank: usize, m_pair: u32, m_double: u32) -> BTreeMap<OrbitClass, u32> {
    if rank == 1 {
        mult_map(&[(OrbitClass::All, m_double)])
    } else {
        mult_map(&[(OrbitClass::Short, m_pair), (OrbitClass::Long, m_double)])
    }
}

fn map_bc(rank: usize, m_pair: u32, m_single: u32, m_double: u32) -> BTreeMap<OrbitClass, u32> {
    if rank == 1 {
        mult_map(&[(OrbitClass::Short, m_single), (OrbitClass::Long, m_double)])
    } else {
        mult_map(&[
            (OrbitClass::Middle, m_pair),
            (OrbitClass::Short, m_single),
            (OrbitClass::Long, m_double),
        ])
    }
}

struct RowSpec {
    family: SpaceFamily,
    params: Vec<u32>,
    label: String,
    group_name: String,
    root_family: RootFamily,
    root_rank: usize,
    mults: BTreeMap<OrbitClass, u32>,
    dim: u32,
    reducible_exception: bool,
    in_theorem_1_3_list: bool,
}

fn row_spec(family: &SpaceFamily, params: &[u32]) -> Result<RowSpec> {
    let bad = |msg: String| Err(Error::InvalidParameter(msg));
    match family {
        SpaceFamily::AI => {
            let [n] = params else { return bad("AI takes one parameter n >= 2".into()) };
            let n = *n;
            if n < 2 {
                return bad(format!("AI requires n >= 2, got {n}"));
            }
            Ok(RowSpec {
                family: SpaceFamily::AI,
                params: vec![n],
                label: format!("AI({n})"),
                group_name: format!("SL({n},R)/SO({n})"),
                root_family: RootFamily::A,
                root_rank: (n - 1) as usize,
                mults: mult_map(&[(OrbitClass::All, 1)]),
                dim: (n - 1) * (n + 2) / 2,
                reducible_exception: false,
                in_theorem_1_3_list: n >= 4,
            })
        }
        SpaceFamily::AII => {
            let [n] = params else { return bad("AII takes one parameter n >= 2".into()) };
            let n = *n;
            if n < 2 {
                return bad(format!("AII requires n >= 2, got {n}"));
            }
            Ok(RowSpec {
                family: SpaceFamily::AII,
                params: vec![n],
                label: format!("AII({n})"),
                group_name: format!("SU*({})/Sp({n})", 2 * n),
                root_family: RootFamily::A,
                root_rank: (n - 1) as usize,
                mults: mult_map(&[(OrbitClass::All, 4)]),
                dim: (n - 1) * (2 * n + 1),
                reducible_exception: false,
                in_theorem_1_3_list: true,
            })
        }
        SpaceFamily::AIII => {
            let [a, b] = params else { return bad("AIII takes two parameters p, q >= 1".into()) };
            let (q, p) = (*a.min(b), *a.max(b));
            if q < 1 {
                return bad("AIII requires p, q >= 1".into());
            }
            let rank = q as usize;
            let (root_family, mults) = if p > q {
                (RootFamily::BC, map_bc(rank, 2, 2 * (p - q), 1))
            } else {
                (RootFamily::C, map_c(rank, 2, 1))
            };
            Ok(RowSpec {
                family: SpaceFamily::AIII,
                params: vec![q, p],
                label: format!("AIII({q},{p})"),
                group_name: format!("SU({q},{p})/S(U({q})xU({p}))"),
                root_family,
                root_rank: rank,
                mults,
                dim: 2 * p * q,
                reducible_exception: false,
                in_theorem_1_3_list: p + q >= 4,
            })
        }
        SpaceFamily::BDI => {
            let [a, b] = params else { return bad("BDI takes two parameters p, q >= 1".into()) };
            let (q, p) = (*a.min(b), *a.max(b));
            if q < 1 {
                return bad("BDI requires p, q >= 1".into());
            }
            if p + q < 3 {
                return bad("BDI requires p + q >= 3 (SO_0(1,1) is abelian)".into());
            }
            let rank = q as usize;
            let (root_family, mults) = if p > q {
                (RootFamily::B, map_b(rank, 1, p - q))
            } else {
                (RootFamily::D, mult_map(&[(OrbitClass::All, 1)]))
            };
            Ok(RowSpec {
                family: SpaceFamily::BDI,
                params: vec![q, p],
                label: format!("BDI({q},{p})"),
                group_name: format!("SO_0({q},{p})/SO({q})xSO({p})"),
                root_family,
                root_rank: rank,
                mults,
                dim: p * q,
                reducible_exception: p == 2 && q == 2,
                in_theorem_1_3_list: if q == 1 { p + q >= 4 } else { p + q >= 6 },
            })
        }
        SpaceFamily::DIII => {
            let [n] = params else { return bad("DIII takes one parameter n >= 2".into()) };
            let n = *n;
            if n < 2 {
                return bad(format!("DIII requires n >= 2, got {n}"));
            }
            let (root_family, rank, mults) = if n % 2 == 0 {
                let r = (n / 2) as usize;
                (RootFamily::C, r, map_c(r, 4, 1))
            } else {
                let r = ((n - 1) / 2) as usize;
                (RootFamily::BC, r, map_bc(r, 4, 4, 1))
            };
            Ok(RowSpec {
                family: SpaceFamily::DIII,
                params: vec![n],
                label: format!("DIII({n})"),
                group_name: format!("SO*({})/U({n})", 2 * n),
                root_family,
                root_rank: rank,
                mults,
                dim: n * (n - 1),
                reducible_exception: false,
                in_theorem_1_3_list: n >= 3,
            })
        }
        SpaceFamily::CI => {
            let [n] = params else { return bad("CI takes one parameter n >= 1".into()) };
            let n = *n;
            if n < 1 {
                return bad("CI requires n >= 1".into());
            }
            let rank = n as usize;
            Ok(RowSpec {
                family: SpaceFamily::CI,
                params: vec![n],
                label: format!("CI({n})"),
                group_name: format!("Sp({n},R)/U({n})"),
                root_family: RootFamily::C,
                root_rank: rank,
                mults: map_c(rank, 1, 1),
                dim: n * (n + 1),
                reducible_exception: false,
                in_theorem_1_3_list: n >= 3,
            })
        }
        SpaceFamily::CII => {
            let [a, b] = params else { return bad("CII takes two parameters p, q >= 1".into()) };
            let (q, p) = (*a.min(b), *a.max(b));
            if q < 1 {
                return bad("CII requires p, q >= 1".into());
            }
            let rank = q as usize;
            let (root_family, mults) = if p > q {
                (RootFamily::BC, map_bc(rank, 4, 4 * (p - q), 3))
            } else {
                (RootFamily::C, map_c(rank, 4, 3))
            };
            Ok(RowSpec {
                family: SpaceFamily::CII,
                params: vec![q, p],
                label: format!("CII({q},{p})"),
                group_name: format!("Sp({q},{p})/Sp({q})xSp({p})"),
                root_family,
                root_rank: rank,
                mults,
                dim: 4 * p * q,
                reducible_exception: false,
                in_theorem_1_3_list: true,
            })
        }
        exceptional => {
            if !params.is_empty() {
                return bad(format!("{exceptional} takes no parameters"));
            }
            let (group, root_family, rank, mults, dim): (&str, RootFamily, usize, BTreeMap<OrbitClass, u32>, u32) =
                match exceptional {
                    SpaceFamily::EI => ("E6(6)/Sp(4)", RootFamily::E6, 6, mult_map(&[(OrbitClass::All, 1)]), 42),
                    SpaceFamily::EII => (
                        "E6(2)/SU(6)xSU(2)",
                        RootFamily::F4,
                        4,
                        mult_map(&[(OrbitClass::Short, 2), (OrbitClass::Long, 1)]),
                        40,
                    ),
                    SpaceFamily::EIII => (
                        "E6(-14)/SO(10)xSO(2)",
                        RootFamily::BC,
                        2,
                        map_bc(2, 6, 8, 1),
                        32,
                    ),
                    SpaceFamily::EIV => ("E6(-26)/F4", RootFamily::A, 2, mult_map(&[(OrbitClass::All, 8)]), 26),
                    SpaceFamily::EV => ("E7(7)/SU(8)", RootFamily::E7, 7, mult_map(&[(OrbitClass::All, 1)]), 70),
                    SpaceFamily::EVI => (
                        "E7(-5)/SO(12)xSU(2)",
                        RootFamily::F4,
                        4,
                        mult_map(&[(OrbitClass::Short, 4), (OrbitClass::Long, 1)]),
                        64,
                    ),
                    SpaceFamily::EVII => (
                        "E7(-25)/E6xSO(2)",
                        RootFamily::C,
                        3,
                        map_c(3, 8, 1),
                        54,
                    ),
                    SpaceFamily::EVIII => ("E8(8)/SO(16)", RootFamily::E8, 8, mult_map(&[(OrbitClass::All, 1)]), 128),
                    SpaceFamily::EIX => (
                        "E8(-24)/E7xSU(2)",
                        RootFamily::F4,
                        4,
                        mult_map(&[(OrbitClass::Short, 8), (OrbitClass::Long, 1)]),
                        112,
                    ),
                    SpaceFamily::FI => (
                        "F4(4)/Sp(3)xSU(2)",
                        RootFamily::F4,
                        4,
                        mult_map(&[(OrbitClass::Short, 1), (OrbitClass::Long, 1)]),
                        28,
                    ),
                    SpaceFamily::FII => ("F4(-20)/Spin(9)", RootFamily::BC, 1, map_bc(1, 0, 8, 7), 16),
                    SpaceFamily::G => ("G2(2)/SO(4)", RootFamily::G2, 2, mult_map(&[(OrbitClass::Short, 1), (OrbitClass::Long, 1)]), 8),
                    other => return bad(format!("cannot construct rows for family {other}")),
                };
            Ok(RowSpec {
                family: exceptional.clone(),
                params: vec![],
                label: exceptional.to_string(),
                group_name: group.to_string(),
                root_family,
                root_rank: rank,
                mults,
                dim,
                reducible_exception: false,
                in_theorem_1_3_list: true,
            })
        }
    }
}

fn build_row(spec: RowSpec) -> Result<SpaceDescriptor> {
    let system = RestrictedRootSystem::build(spec.root_family, spec.root_rank)?
        .with_multiplicities(&spec.mults)
        .map_err(|e| Error::Data(format!("{}: {e}", spec.label)))?
        .killing_normalized()
        .map_err(|e| match e {
            Error::IdentityViolation { identity, detail, .. } => Error::IdentityViolation {
                identity,
                label: spec.label.clone(),
                detail,
            },
            other => other,
        })?;
    let n = system.total_multiplicity();
    let rank = system.rank() as u32;
    if spec.dim != rank + n {
        return Err(Error::IdentityViolation {
            identity: "dimension",
            label: spec.label,
            detail: format!("declared dim {} but rank + sum(mult) = {}", spec.dim, rank + n),
        });
    }
    Ok(SpaceDescriptor {
        label: spec.label,
        group_name: spec.group_name,
        family: spec.family,
        params: spec.params,
        rank: spec.root_rank,
        dim: spec.dim,
        system,
        reducible_exception: spec.reducible_exception,
        in_theorem_1_3_list: spec.in_theorem_1_3_list,
    })
}

/// Construct the built-in row for a family and parameter list.
pub fn construct(family: &SpaceFamily, params: &[u32]) -> Result<SpaceDescriptor> {
    build_row(row_spec(family, params)?)
}

fn normalize_name(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '\u{d7}' => 'x', // multiplication sign
            '\u{2080}' => '0',
            c => c.to_ascii_lowercase(),
        })
        .collect()
}

/// Parse `"name(1,2)"`-style heads; returns (head, params).
fn split_params(s: &str) -> Option<(&str, Vec<u32>)> {
    if let Some(open) = s.find('(') {
        if !s.ends_with(')') {
            return None;
        }
        let head = &s[..open];
        let inner = &s[open + 1..s.len() - 1];
        let mut params = Vec::new();
        for piece in inner.split(',') {
            params.push(piece.trim().parse::<u32>().ok()?);
        }
        Some((head, params))
    } else {
        Some((s, vec![]))
    }
}

/// Parse a space name: Cartan labels (`AIII(1,2)`) or group quotients
/// (`SU(1,2)/S(U(1)xU(2))`), case-insensitive and whitespace-tolerant.
pub fn parse_name(name: &str) -> Result<(SpaceFamily, Vec<u32>)> {
    let norm = normalize_name(name);
    let unknown = || Error::Lookup(name.trim().to_string());

    // Group-quotient form: parse the numerator, ignore any /K suffix.
    let numerator = norm.split('/').next().unwrap_or("");
    let exceptional_group = |s: &str| -> Option<SpaceFamily> {
        Some(match s {
            "e6(6)" => SpaceFamily::EI,
            "e6(2)" => SpaceFamily::EII,
            "e6(-14)" => SpaceFamily::EIII,
            "e6(-26)" => SpaceFamily::EIV,
            "e7(7)" => SpaceFamily::EV,
            "e7(-5)" => SpaceFamily::EVI,
            "e7(-25)" => SpaceFamily::EVII,
            "e8(8)" => SpaceFamily::EVIII,
            "e8(-24)" => SpaceFamily::EIX,
            "f4(4)" => SpaceFamily::FI,
            "f4(-20)" => SpaceFamily::FII,
            "g2(2)" => SpaceFamily::G,
            _ => return None,
        })
    };
    if let Some(family) = exceptional_group(numerator) {
        return Ok((family, vec![]));
    }
    if let Some(rest) = numerator.strip_prefix("sl") {
        // sl(n,r)
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(unknown)?;
        let mut parts = inner.split(',');
        let n: u32 = parts.next().and_then(|p| p.parse().ok()).ok_or_else(unknown)?;
        if parts.next().map(str::trim) != Some("r") {
            return Err(unknown());
        }
        return Ok((SpaceFamily::AI, vec![n]));
    }
    if let Some(rest) = numerator.strip_prefix("su*") {
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(unknown)?;
        let two_n: u32 = inner.parse().map_err(|_| unknown())?;
        if two_n % 2 != 0 || two_n == 0 {
            return Err(Error::InvalidParameter(format!("SU*({two_n}): argument must be even")));
        }
        return Ok((SpaceFamily::AII, vec![two_n / 2]));
    }
    if let Some(rest) = numerator.strip_prefix("so*") {
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(unknown)?;
        let two_n: u32 = inner.parse().map_err(|_| unknown())?;
        if two_n % 2 != 0 || two_n == 0 {
            return Err(Error::InvalidParameter(format!("SO*({two_n}): argument must be even")));
        }
        return Ok((SpaceFamily::DIII, vec![two_n / 2]));
    }
    if let Some(rest) = numerator.strip_prefix("su") {
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(unknown)?;
        let parts: Vec<u32> = inner.split(',').map(|p| p.parse().unwrap_or(0)).collect();
        if parts.len() == 2 && parts.iter().all(|&x| x > 0) {
            return Ok((SpaceFamily::AIII, parts));
        }
        return Err(unknown());
    }
    if numerator.starts_with("so0") || numerator.starts_with("so_0") || numerator.starts_with("so(")
    {
        let open = numerator.find('(').ok_or_else(unknown)?;
        let inner = numerator[open + 1..].strip_suffix(')').ok_or_else(unknown)?;
        let parts: Vec<u32> = inner.split(',').map(|p| p.parse().unwrap_or(0)).collect();
        if parts.len() == 2 && parts.iter().all(|&x| x > 0) {
            return Ok((SpaceFamily::BDI, parts));
        }
        return Err(unknown());
    }
    if let Some(rest) = numerator.strip_prefix("sp") {
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(unknown)?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() == 2 && parts[1].trim() == "r" {
            let n: u32 = parts[0].parse().map_err(|_| unknown())?;
            return Ok((SpaceFamily::CI, vec![n]));
        }
        if parts.len() == 2 {
            let p: u32 = parts[0].parse().map_err(|_| unknown())?;
            let q: u32 = parts[1].parse().map_err(|_| unknown())?;
            if p > 0 && q > 0 {
                return Ok((SpaceFamily::CII, vec![p, q]));
            }
        }
        return Err(unknown());
    }

    // Cartan labels.
    let (head, params) = split_params(&norm).ok_or_else(unknown)?;
    let family = match head {
        "ai" => SpaceFamily::AI,
        "aii" => SpaceFamily::AII,
        "aiii" => SpaceFamily::AIII,
        "bdi" => SpaceFamily::BDI,
        "diii" => SpaceFamily::DIII,
        "ci" => SpaceFamily::CI,
        "cii" => SpaceFamily::CII,
        "ei" => SpaceFamily::EI,
        "eii" => SpaceFamily::EII,
        "eiii" => SpaceFamily::EIII,
        "eiv" => SpaceFamily::EIV,
        "ev" => SpaceFamily::EV,
        "evi" => SpaceFamily::EVI,
        "evii" => SpaceFamily::EVII,
        "eviii" => SpaceFamily::EVIII,
        "eix" => SpaceFamily::EIX,
        "fi" => SpaceFamily::FI,
        "fii" => SpaceFamily::FII,
        "g" | "g2" => SpaceFamily::G,
        _ => return Err(unknown()),
    };
    // Exceptional labels written with their defining parameters, e.g. g2(2),
    // carry no free parameters.
    let params = if matches!(
        family,
        SpaceFamily::AI | SpaceFamily::AII | SpaceFamily::AIII | SpaceFamily::BDI
            | SpaceFamily::DIII | SpaceFamily::CI | SpaceFamily::CII
    ) {
        params
    } else {
        vec![]
    };
    Ok((family, params))
}

#[derive(Debug, Deserialize)]
struct OverrideFlags {
    #[serde(default)]
    reducible_exception: bool,
    #[serde(default)]
    in_theorem_1_3_list: bool,
}

impl Default for OverrideFlags {
    fn default() -> Self {
        OverrideFlags { reducible_exception: false, in_theorem_1_3_list: false }
    }
}

#[derive(Debug, Deserialize)]
struct OverrideRow {
    label: String,
    #[serde(default)]
    family: Option<String>,
    rank: usize,
    dim: u32,
    roots_type: String,
    multiplicities: BTreeMap<String, u32>,
    #[serde(default)]
    flags: OverrideFlags,
}

fn descriptor_from_override(row: OverrideRow) -> Result<SpaceDescriptor> {
    let root_family = RootFamily::parse(&row.roots_type).ok_or_else(|| {
        Error::CatalogFile(format!("row `{}`: unknown roots_type `{}`", row.label, row.roots_type))
    })?;
    let mut mults = BTreeMap::new();
    for (k, v) in &row.multiplicities {
        let class = OrbitClass::parse(k).ok_or_else(|| {
            Error::CatalogFile(format!("row `{}`: unknown orbit class `{k}`", row.label))
        })?;
        mults.insert(class, *v);
    }
    let system = RestrictedRootSystem::build(root_family, row.rank)?
        .with_multiplicities(&mults)
        .map_err(|e| Error::CatalogFile(format!("row `{}`: {e}", row.label)))?
        .killing_normalized()
        .map_err(|e| match e {
            Error::IdentityViolation { identity, detail, .. } => Error::IdentityViolation {
                identity,
                label: row.label.clone(),
                detail,
            },
            other => other,
        })?;
    let n = system.total_multiplicity();
    if row.dim != row.rank as u32 + n {
        return Err(Error::IdentityViolation {
            identity: "dimension",
            label: row.label,
            detail: format!("declared dim {} but rank + sum(mult) = {}", row.dim, row.rank as u32 + n),
        });
    }
    let family = match row.family.as_deref() {
        Some(f) => match parse_name(f) {
            Ok((fam, _)) => fam,
            Err(_) => SpaceFamily::Custom(f.to_string()),
        },
        None => SpaceFamily::Custom(row.label.clone()),
    };
    Ok(SpaceDescriptor {
        label: row.label.clone(),
        group_name: row.label,
        family,
        params: vec![],
        rank: row.rank,
        dim: row.dim,
        system,
        reducible_exception: row.flags.reducible_exception,
        in_theorem_1_3_list: row.flags.in_theorem_1_3_list,
    })
}

/// The space registry: built-in rows plus optional file overrides.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    overrides: Vec<SpaceDescriptor>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Catalog { overrides: Vec::new() }
    }

    /// Load override rows; rows replace built-in entries with the same label
    /// (canonicalized), otherwise extend the catalog.
    pub fn with_override_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::CatalogFile(format!("{}: {e}", path.display())))?;
        if text.trim().is_empty() {
            return Ok(Catalog::builtin());
        }
        let rows: Vec<OverrideRow> = serde_json::from_str(&text)
            .map_err(|e| Error::CatalogFile(format!("{}: {e}", path.display())))?;
        let mut overrides = Vec::new();
        for row in rows {
            overrides.push(descriptor_from_override(row)?);
        }
        Ok(Catalog { overrides })
    }

    pub fn override_count(&self) -> usize {
        self.overrides.len()
    }

    pub fn lookup(&self, name: &str) -> Result<SpaceDescriptor> {
        let wanted = normalize_name(name);
        for row in &self.overrides {
            if normalize_name(&row.label) == wanted || normalize_name(&row.group_name) == wanted {
                return Ok(row.clone());
            }
        }
        let (family, params) = parse_name(name)?;
        let built = construct(&family, &params)?;
        // An override may shadow a built-in label.
        for row in &self.overrides {
            if normalize_name(&row.label) == normalize_name(&built.label) {
                return Ok(row.clone());
            }
        }
        Ok(built)
    }

    /// Deterministic enumeration: classical families with parameters up to
    /// `filter.max_param`, then the twelve exceptional rows, then overrides
    /// that do not shadow a built-in label.
    pub fn enumerate(&self, filter: &CatalogFilter) -> Vec<SpaceDescriptor> {
        let max = if filter.max_param == 0 { 8 } else { filter.max_param };
        let mut rows: Vec<SpaceDescriptor> = Vec::new();
        let mut push = |spec: Result<SpaceDescriptor>| {
            if let Ok(d) = spec {
                rows.push(d);
            }
        };
        for n in 2..=max {
            push(construct(&SpaceFamily::AI, &[n]));
        }
        for n in 2..=max {
            push(construct(&SpaceFamily::AII, &[n]));
        }
        for p in 1..=max {
            for q in 1..=p {
                push(construct(&SpaceFamily::AIII, &[q, p]));
            }
        }
        for p in 1..=max {
            for q in 1..=p {
                push(construct(&SpaceFamily::BDI, &[q, p]));
            }
        }
        for n in 2..=max {
            push(construct(&SpaceFamily::DIII, &[n]));
        }
        for n in 1..=max {
            push(construct(&SpaceFamily::CI, &[n]));
        }
        for p in 1..=max {
            for q in 1..=p {
                push(construct(&SpaceFamily::CII, &[q, p]));
            }
        }
        for fam in [
            SpaceFamily::EI,
            SpaceFamily::EII,
            SpaceFamily::EIII,
            SpaceFamily::EIV,
            SpaceFamily::EV,
            SpaceFamily::EVI,
            SpaceFamily::EVII,
            SpaceFamily::EVIII,
            SpaceFamily::EIX,
            SpaceFamily::FI,
            SpaceFamily::FII,
            SpaceFamily::G,
        ] {
            push(construct(&fam, &[]));
        }

        // Apply overrides: replace by label, append the rest.
        for ov in &self.overrides {
            if let Some(slot) = rows.iter_mut().find(|r| normalize_name(&r.label) == normalize_name(&ov.label)) {
                *slot = ov.clone();
            } else {
                rows.push(ov.clone());
            }
        }

        rows.into_iter().filter(|d| filter.admits(d)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use std::io::Write;

    fn lookup(name: &str) -> SpaceDescriptor {
        Catalog::builtin().lookup(name).unwrap()
    }

    #[test]
    fn benchmark_rows_match_reference_data() {
        let sl3 = lookup("SL(3,R)/SO(3)");
        assert_eq!((sl3.rank, sl3.dim), (2, 5));
        assert_eq!(sl3.system.family(), RootFamily::A);
        assert!(sl3.system.multiplicities().iter().all(|&m| m == 1));

        let su12 = lookup("SU(1,2)/S(U(1)xU(2))");
        assert_eq!((su12.rank, su12.dim), (1, 4));
        assert_eq!(su12.system.family(), RootFamily::BC);
        let mut mults: Vec<u32> = su12.system.multiplicities().to_vec();
        mults.sort_unstable();
        assert_eq!(mults, vec![1, 2]);

        let sp2 = lookup("Sp(2,R)/U(2)");
        assert_eq!((sp2.rank, sp2.dim), (2, 6));
        assert_eq!(sp2.system.family(), RootFamily::C);

        let so23 = lookup("SO_0(2,3)/SO(2)xSO(3)");
        assert_eq!((so23.rank, so23.dim), (2, 6));
        assert_eq!(so23.system.family(), RootFamily::B);

        let so22 = lookup("SO_0(2,2)/SO(2)xSO(2)");
        assert_eq!((so22.rank, so22.dim), (2, 4));
        assert!(so22.reducible_exception);
        assert!(!so22.in_theorem_scope());
        assert!(!so22.in_theorem_1_3_list);
    }

    #[test]
    fn label_forms_resolve_to_the_same_row() {
        let a = lookup("AIII(1,2)");
        let b = lookup("su(1,2)");
        let c = lookup(" SU ( 2 , 1 ) / S(U(2)xU(1)) ");
        assert_eq!(a.label, b.label);
        assert_eq!(a.label, c.label);
        assert_eq!(a.dim, 4);
    }

    #[test]
    fn dimension_formulas() {
        for n in 2..=8u32 {
            assert_eq!(lookup(&format!("AI({n})")).dim, (n - 1) * (n + 2) / 2);
        }
        for (p, q) in [(3u32, 2u32), (4, 1), (4, 4)] {
            assert_eq!(lookup(&format!("AIII({q},{p})")).dim, 2 * p * q);
            assert_eq!(lookup(&format!("BDI({q},{p})")).dim, p * q);
            assert_eq!(lookup(&format!("CII({q},{p})")).dim, 4 * p * q);
        }
        for n in 1..=6u32 {
            assert_eq!(lookup(&format!("CI({n})")).dim, n * (n + 1));
        }
        assert_eq!(lookup("EIV").dim, 26);
        assert_eq!(lookup("FII").dim, 16);
        assert_eq!(lookup("G").dim, 8);
    }

    #[test]
    fn dimension_identity_across_catalog() {
        let rows = Catalog::builtin().enumerate(&CatalogFilter::with_max_param(8));
        assert!(!rows.is_empty());
        for d in &rows {
            assert_eq!(
                d.dim,
                d.rank as u32 + d.system.total_multiplicity(),
                "{}",
                d.label
            );
            assert_eq!(d.rank, d.system.rank());
        }
    }

    #[test]
    fn enumeration_filters() {
        let catalog = Catalog::builtin();
        let filter = CatalogFilter {
            dim_range: Some((3, 6)),
            max_param: 4,
            ..Default::default()
        };
        let rows = catalog.enumerate(&filter);
        let labels: Vec<&str> = rows.iter().map(|d| d.label.as_str()).collect();
        for wanted in ["AI(3)", "AIII(1,2)", "BDI(2,3)", "CI(2)", "BDI(2,2)"] {
            assert!(labels.contains(&wanted), "missing {wanted} in {labels:?}");
        }
        assert!(rows.iter().all(|d| d.dim >= 3 && d.dim <= 6));

        let thm = catalog.enumerate(&CatalogFilter {
            theorem_1_3_only: true,
            max_param: 4,
            ..Default::default()
        });
        let thm_labels: Vec<&str> = thm.iter().map(|d| d.label.as_str()).collect();
        assert!(thm_labels.contains(&"AI(4)"));
        assert!(thm_labels.contains(&"AIII(2,2)"));
        assert!(!thm_labels.contains(&"AI(3)"));

        let all = catalog.enumerate(&CatalogFilter::with_max_param(4));
        let exceptional = all
            .iter()
            .filter(|d| matches!(d.family, SpaceFamily::EI | SpaceFamily::EII | SpaceFamily::EIII
                | SpaceFamily::EIV | SpaceFamily::EV | SpaceFamily::EVI | SpaceFamily::EVII
                | SpaceFamily::EVIII | SpaceFamily::EIX | SpaceFamily::FI | SpaceFamily::FII
                | SpaceFamily::G))
            .count();
        assert_eq!(exceptional, 12);
    }

    #[test]
    fn theorem_flag_parameter_constraints() {
        let c = Catalog::builtin();
        assert!(!c.lookup("BDI(1,2)").unwrap().in_theorem_1_3_list); // SO_0(1,2), p+q=3
        assert!(c.lookup("BDI(1,3)").unwrap().in_theorem_1_3_list); // rank 1, p+q=4
        assert!(!c.lookup("BDI(2,3)").unwrap().in_theorem_1_3_list); // rank 2, p+q=5
        assert!(c.lookup("BDI(2,4)").unwrap().in_theorem_1_3_list); // rank 2, p+q=6
        assert!(!c.lookup("CI(2)").unwrap().in_theorem_1_3_list);
        assert!(c.lookup("CI(3)").unwrap().in_theorem_1_3_list);
        assert!(!c.lookup("DIII(2)").unwrap().in_theorem_1_3_list);
        assert!(c.lookup("DIII(3)").unwrap().in_theorem_1_3_list);
    }

    #[test]
    fn lookup_of_enumerated_rows_is_identity() {
        let catalog = Catalog::builtin();
        for d in catalog.enumerate(&CatalogFilter::with_max_param(4)) {
            let again = catalog.lookup(&d.label).unwrap();
            assert_eq!(again.label, d.label);
            assert_eq!(again.dim, d.dim);
            assert_eq!(again.rank, d.rank);
            assert_eq!(again.system.multiplicities(), d.system.multiplicities());
            let by_group = catalog.lookup(&d.group_name).unwrap();
            assert_eq!(by_group.label, d.label);
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let c = Catalog::builtin();
        assert!(matches!(c.lookup("AI(1)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(c.lookup("BDI(1,1)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(c.lookup("nonsense"), Err(Error::Lookup(_))));
        assert!(matches!(c.lookup("SU*(5)/Sp(2)"), Err(Error::InvalidParameter(_))));
    }

    fn write_temp(content: &str) -> std::path::PathBuf {
        let mut path = std::env::temp_dir();
        path.push(format!("cv-catalog-test-{}-{}.json", std::process::id(), content.len()));
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn override_rejects_bad_dimension() {
        let path = write_temp(
            r#"[{"label": "custom", "rank": 2, "dim": 11,
                 "roots_type": "BC",
                 "multiplicities": {"short": 1, "middle": 1, "long": 1}}]"#,
        );
        let err = Catalog::with_override_file(&path).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("dimension identity"), "{msg}");
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn override_replaces_builtin_row() {
        let path = write_temp(
            r#"[{"label": "EIV", "family": "EIV", "rank": 2, "dim": 26,
                 "roots_type": "A", "multiplicities": {"all": 8},
                 "flags": {"in_theorem_1_3_list": true}}]"#,
        );
        let catalog = Catalog::with_override_file(&path).unwrap();
        let row = catalog.lookup("EIV").unwrap();
        assert_eq!(row.dim, 26);
        assert_eq!(row.system.total_multiplicity(), 24);
        let rows = catalog.enumerate(&CatalogFilter::with_max_param(2));
        assert_eq!(rows.iter().filter(|d| d.label == "EIV").count(), 1);
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn empty_override_file_keeps_builtin_catalog() {
        let path = write_temp("   \n");
        let catalog = Catalog::with_override_file(&path).unwrap();
        assert_eq!(catalog.override_count(), 0);
        assert!(catalog.lookup("AI(3)").is_ok());
        std::fs::remove_file(path).ok();
    }

    #[test]
    fn normalized_norms_spot_checks() {
        let sl3 = lookup("AI(3)");
        for i in 0..3 {
            assert_eq!(sl3.system.root_norm_sq(i), rat(1, 3));
        }
        let so22 = lookup("BDI(2,2)");
        assert_eq!(so22.system.root_norm_sq(0), rat(1, 2));
    }
}
