//! Exact spectral solver for four hard-core particles with masses 6m, 2m, m
//! and 3m between two hard walls.
//!
//! The configuration space of the four particles is, after mass scaling, the
//! fundamental simplex of the affine reflection group F4~. Eigenstates are
//! finite alternating sums of plane waves over the 1152 elements of F4, the
//! spectrum is a positive-definite quadratic form in four integers, and the
//! F4-invariant polynomials of the momenta are conserved.
//!
//! Natural units `m3 = L = hbar = 1` are used throughout; see [`units`].

pub mod dynamics;
pub mod error;
pub mod format;
pub mod invariants;
pub mod jacobi;
pub mod root_system;
pub mod spectrum;
pub mod tiling;
pub mod units;
pub mod wavefunction;

pub use dynamics::{Event, EventKind, ParticleState, RunSummary};
pub use error::{Error, Result};
pub use invariants::InvariantPolynomial;
pub use jacobi::{FrameTransforms, Mass, MassChain};
pub use root_system::{
    GroupElement, HalfIntMat4, HalfIntVec4, Lattice, ReflectionGroup, RootSystem,
};
pub use spectrum::{Level, QuantumNumbers};
pub use tiling::{FoldResult, Octacube, Tiling};
pub use units::PhysicalUnits;
pub use wavefunction::{Eigenstate, McEstimate, SliceSpec};
