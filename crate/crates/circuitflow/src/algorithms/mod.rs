//! The four combinatorial algorithms, each instrumented to emit its walk
//! over the pseudoflow polyhedron as a [`crate::trace::WalkTrace`].

pub mod gapa;
pub mod hungarian;
pub mod preflow_push;
pub mod sspa;

pub use gapa::{run_gapa, GapaRun, PathRule};
pub use hungarian::{run_hungarian, HungarianRun};
pub use preflow_push::{run_preflow_push, ActiveRule, PfpRun};
pub use sspa::{run_sspa, PairingRule, SspaOptions, SspaRun};
