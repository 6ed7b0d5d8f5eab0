//! Moving test functions between a base graph and its cover: the push-down
//! `f ↦ (Σ_fiber f²)^{1/2}` and the Følner cutoff pull-up.

mod displacement;
mod partition;
mod pullup;
mod pushdown;

pub use displacement::{displacement_set, G_CONSTRUCTION};
pub use partition::{partition_of_unity, PartitionOfUnity, Profile, SlopeReport};
pub use pullup::{pullup, Pullup, PullupReport};
pub use pushdown::pushdown;
