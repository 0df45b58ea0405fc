//! Vanishing checks for square-integrable harmonic forms on irreducible
//! symmetric spaces of noncompact type.
//!
//! The library computes restricted root systems exactly, normalizes them
//! against the Killing metric, maximizes eigenvalue-sum functionals over the
//! Weyl chamber, and certifies everything against an independent matrix
//! Lie-algebra oracle.

pub mod catalog;
pub mod chamber;
pub mod curvature;
pub mod error;
pub mod exact;
pub mod matrixlab;
pub mod rootkit;
pub mod vanishing;

pub use catalog::{Catalog, CatalogFilter, SpaceDescriptor, SpaceFamily};
pub use chamber::{grid_oracle, maximize_linear_on_chamber_sphere, sum_of_p_largest_max, OptMethod, Optimum, SearchOptions};
pub use curvature::{curvature_spectrum, hessian_spectrum, pinching, ricci_radial, root_values, CurvatureSpectrum, PinchingReport, SpectrumKind};
pub use error::{Error, Result};
pub use matrixlab::{build_algebra, cross_check, sym_eigenvalues, CrossCheckReport, MatrixAlgebra, MatrixFamily};
pub use rootkit::{ChamberCone, OrbitClass, RestrictedRootSystem, RootFamily, RootVector};
pub use vanishing::{check_eigen_sum, check_pinching, check_root_triple, max_vanishing_degree, verify_proof_chain, Condition, VanishingCertificate};
