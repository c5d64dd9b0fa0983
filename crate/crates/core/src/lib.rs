//! Abelian KMS states of generalized gauge actions on Cayley-graph algebras.
//!
//! The crate covers the whole pipeline from group data to equilibrium states:
//!
//! - [`group`]: generators, potential, abelianization vectors and exact word
//!   arithmetic for the built-in groups (free abelian, Heisenberg, infinite
//!   dihedral, finite tables);
//! - [`numerics`]: `β(u)`, `u(β)`, the critical inverse temperature `β₀`,
//!   radial roots on `Q(β)` and the power-sum normalization;
//! - [`fan`]: the fan of polyhedral cones `M(Z)`;

// NaN must fail every validity check, so `!(x > 0.0)` is deliberate
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fan;
pub mod group;
pub mod kms;
pub mod linalg;
pub mod ninf;
pub mod numerics;
pub mod sphere;

pub use error::{Error, Result};
pub use fan::{Cone, ConeId, Fan};
pub use group::{validate_spec, GroupElement, GroupSpec, Oracle, ValidationReport, Word};
pub use kms::{HarmonicKind, HarmonicVector, KmsState, QBetaPoint};
pub use ninf::{HMapCache, LimitPoint};
pub use numerics::{power_sum_root, PartitionData, SolverConfig};
