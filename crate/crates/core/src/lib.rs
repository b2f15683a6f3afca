//! Linear sofic approximations of finitely generated amenable algebras.
//!
//! The crate builds approximate representations `φ: A → M_n(K)` of monomial
//! algebras from Følner windows, certifies them as d-approximations, tiles
//! them with root vectors, conjugates pairs of approximations onto each
//! other, and amplifies true representations to arbitrary dimensions. All
//! arithmetic is exact: GF(p) or the rationals.

pub mod algebra;
pub mod approx;
pub mod error;
pub mod field;
pub mod folner;
pub mod lld;
pub mod matrix;
pub mod projective;
pub mod rational;
pub mod stability;
pub mod subspace;
pub mod tiling;

pub use algebra::{Algebra, AlgebraElement, AlgebraSpec, Ball, BasisWord};
pub use approx::{
    build_d_approximation, build_quotient_representation, ApproxMap, BuildOptions, CertReport,
    CheckOptions, Provenance, RankPolicy,
};
pub use error::{Error, Result};
pub use folner::{candidate_window, invariance_check, FolnerWindow, InvarianceReport};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use lld::{bms_search, is_lld, verify_bms_sweep, OperatorFamily, SweepMode, SweepReport};
pub use matrix::{complete_to_basis, rk_dist, Matrix};
pub use rational::Rational;
pub use stability::{tile_window, demo_weak_stability, WindowTilingReport, DemoReport};
pub use tiling::{
    build_conjugator, find_root_vector, hyperfinite_decompose, monotile, verify_conjugacy,
    ConjugacyResult, ConjugatorOptions, RootVector, SearchOptions, Tiling,
};
pub use subspace::{EchelonBasis, Subspace};
