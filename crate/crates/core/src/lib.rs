//! Energy Hilbert space analysis of weighted networks.
//!
//! A [`Network`] is a finite connected graph with symmetric positive
//! conductances and a distinguished base vertex. On top of it this crate
//! provides:
//!
//! - the graph Laplacian and the reversible random walk it induces
//!   ([`network`]),
//! - the energy inner product, grounded dipole solves and the resistance
//!   metric ([`energy`]),
//! - the Parseval frame of scaled dipoles with its analysis and synthesis
//!   operators ([`frame`]),
//! - the operators `K`, `L` and `P`, the factorization `LL* = Δ` on the
//!   mean-zero dipole span and the Greens-Gauss identity ([`operators`]),
//! - generators, closed forms and recurrences for path, geometric, binary
//!   tree, lattice strip and triangle networks ([`models`]).
//!
//! The [`cli`] module backs the `energy-network` binary.

pub mod cli;
pub mod energy;
mod error;
pub mod fmt;
pub mod frame;
pub mod models;
pub mod network;
pub mod operators;
mod solver;

pub use energy::{DipoleSystem, PotentialFunction};
pub use error::{Error, Result};
pub use frame::{OrientationScheme, OrientedEdgeSet, ParsevalFrame};
pub use network::{Network, NetworkDocument, ValidationReport, Violation, WalkData};
