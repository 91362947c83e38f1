//! Community detection by modularity maximization, compiled to QUBO/Ising
//! problems and solved with a classical annealing stack.
//!
//! The pipeline is: load a weighted undirected [`Graph`], build its
//! [`ModularityMatrix`], encode a two-community or k-concurrent one-hot
//! QUBO, solve it with one of the [`solver`] backends (exhaustive
//! enumeration, simulated annealing, tabu search, or a subproblem-
//! decomposing hybrid loop), and decode the winning bit vector back into a
//! [`CommunityLabeling`].
//!
//! The crate is `no_std`-compatible (`alloc` required); wall-clock timing
//! of solver runs is only recorded when the `std` feature (default) is
//! enabled. All transcendental math goes through `libm` so solver
//! trajectories are reproducible bit-for-bit across platforms.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod encode;
pub mod graph;
mod math;
pub mod modularity;
pub mod qubo;
pub mod solver;

pub use encode::{
    decode_labeling, k_concurrent_qubo, k_concurrent_qubo_limited, one_hot_violations,
    two_community_qubo, EncodeError, PenaltyConfig, DEFAULT_VAR_LIMIT,
};
pub use graph::{Edge, Graph, GraphError};
pub use modularity::{CommunityLabeling, ModularityError, ModularityMatrix};
pub use qubo::{ising_from_qubo, qubo_from_ising, IsingModel, Qubo};
pub use solver::{
    detect_communities, detect_communities_auto_k, detect_communities_with_backend, derive_seed,
    exhaustive_solve, hybrid_solve, sa_sample, tabu_improve, Backend, BackendChoice, DetectError,
    DetectionReport, Sample, SampleSet, SolveError, SolverParams,
};
