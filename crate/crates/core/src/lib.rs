//! Exact combinatorics of tame elliptic tori in `GL_n` and its inner forms,
//! and a verifier for the character identities relating the two explicit
//! descriptions of the local Jacquet–Langlands correspondence.
//!
//! Everything is integer arithmetic on exponents: `μ_L` is `Z/(Q-1)`,
//! Galois elements are pairs `(a, c)`, and every character is a sign.

pub mod arith;
pub mod chartools;
pub mod csa;
pub mod error;
pub mod finmod;
pub mod identities;
pub mod localfield;
pub mod roots;
pub mod sweep;
pub mod tower;

pub use chartools::{MuExponent, Sign, TameQuadChar};
pub use csa::{CsaParams, OrderInvariants};
pub use error::{Error, Result};
pub use finmod::ModuleClass;
pub use identities::{verify_instance, Instance, Mutation, Report, Side};
pub use localfield::{ExtensionModel, ExtensionParams, GaloisElement, SubfieldHandle};
pub use roots::{RootClass, RootOrbit, RootSystem};
pub use sweep::{sweep, sweep_mutated, Coordinates, GridSpec, SweepSummary};
pub use tower::TowerShape;
