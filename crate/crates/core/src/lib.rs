//! Bottom of the spectrum of discrete Schrödinger operators on graphs and on
//! their (possibly infinite) covering graphs.
//!
//! A covering graph is described by a finite base graph, a voltage word on
//! every edge, and a right action of the fundamental group on the fiber
//! states. Infinite covers are explored through finite windows.

pub mod action;
pub mod cover;
pub mod error;
pub mod folner;
pub mod function;
pub mod graph;
pub mod spectral;
pub mod transfer;

pub use action::{DeckAction, Letter, Provider, State, Word};
pub use cover::{build_cover, build_cover_with_budget, CoverGraph, FundamentalDomainAssignment};
pub use error::{Error, Result};
pub use folner::{orbit_ball, search_folner, verify_folner, ActionWindow, FolnerCertificate, FolnerSearch, Verdict};
pub use function::TestFunction;
pub use graph::{BaseGraph, Edge, Graph, Voltage};
pub use spectral::{
    dense_oracle, lambda0_exhaustion, lambda0_finite, rayleigh, ExhaustionOptions, Method, SolverOptions,
    SpectralEstimate,
};
pub use transfer::{displacement_set, partition_of_unity, pullup, pushdown, PartitionOfUnity, PullupReport};
