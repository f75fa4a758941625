//! The counterexample search: node expansion over admissible intervals,
//! boundary-swap moves, terminal certificates and breadth-first exploration.

mod bfs;
mod certificate;
mod config;
mod node;

pub use bfs::{bfs_prove, bfs_prove_from, NullObserver, ProofResult, Progress, SearchObserver};
pub use certificate::{
    candidate_count, check_certificates, check_certificates_exact, exact_witness, Certificate,
    CertificateKind,
};
pub use config::{Arith, DupPolicy, IntervalPolicy, LeafPolicy, Mode, ModeConfig, RootPolicy, MAX_ENGINE_K};
pub use node::{admissible_intervals, expand, incidence_vector, Interval, Ordering, SearchNode};
