//! Exact p-adic arithmetic and number theory.
//!
//! The crate provides, in dependency order:
//!
//! * [`valuation`] — p-adic valuations and absolute values on Q, plus a
//!   classifier that decides from a finite table whether a multiplicative
//!   norm is a power of the usual absolute value, trivial, or a power of
//!   some |.|_p;
//! * [`number`] — the capped-precision ball representation of elements of
//!   Q_p with sound exact arithmetic;
//! * [`series`] — certified summation of convergent series, the geometric
//!   closed form, and linearity;
//! * [`hensel`] — polynomials over Z_p, Newton-iteration root lifting under
//!   the basic and refined hypotheses, and q-th root extraction;
//! * [`geometry`] — cells (closed balls), subdivision, trichotomy, and
//!   Riemann integration with real, Q_l, and measure-weighted targets;
//! * [`residue`] — the rings Z/p^jZ, reduction from Z_p, and finite-level
//!   characters as exact rotation numbers;
//! * [`linalg`] — matrices over Q and Z_p, reduction to GL_n(Z/pZ), torsion
//!   classification, subgroup checks, and involution projections.
//!
//! Everything is exact: the only numbers are arbitrary-precision integers
//! and rationals, and p-adic results are balls guaranteed to contain the
//! true value.

pub mod error;
pub mod geometry;
pub mod hensel;
pub mod linalg;
pub mod number;
pub mod residue;
pub mod series;
pub mod valuation;

pub use error::{Error, Result};
pub use geometry::{
    integrate_measure, integrate_qell, integrate_real, parse_cell, Cell, CellMeasure,
    CellRelation, RealIntegral,
};
pub use hensel::{
    hensel_basic, hensel_refined, qth_root, unit_power_reduction, LiftTrace, Polynomial,
    PowerShape, RootOutcome,
};
pub use linalg::{
    involution_projections, parse_matrix, power_expansion_check, subgroup_checks, torsion_test,
    unipotent_shape, GfpMatrix, PadicMatrix, RationalMatrix, ShapeOutcome, SubgroupReport,
    TorsionOutcome, UnipotentShape,
};
pub use number::{NormBound, PadicNumber, PrecisionPolicy, ValuationInfo};
pub use residue::{lift, reduce, FiniteCharacter, ResidueClass};
pub use series::{geometric_sum, partial_sum_identity_check, sum_series, TermGenerator};
pub use valuation::{
    abs_p, check_norm_axioms, classify_norm, vp, NormClass, NormOracle, NormValue, NormViolation,
    Prime, TriangleMode,
};
