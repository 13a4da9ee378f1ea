//! Distance signless Laplacian spectral radius of connected graphs, the graft
//! transformations that move it monotonically, and an exhaustive harness that
//! checks extremal-tree claims over all trees of small order.

pub mod enumerate;
pub mod error;
pub mod families;
pub mod graph;
pub mod spectral;
pub mod transforms;
pub mod verify;

pub use enumerate::{canonical_code, enumerate_trees, prufer_count_oracle, CanonicalCode};
pub use error::{Error, Result};
pub use families::{class_membership, ClassMembership, FamilySpec};
pub use graph::{
    all_pairs_distances, graph_stats, parse_edge_list, q_matrix, transmissions, DistanceMatrix,
    Graph, GraphStats, QMatrix, TransmissionVector,
};
pub use spectral::{
    compare_rho, eigen_equation_residual, full_spectrum_oracle, quadratic_form, spectral_radius,
    RhoOrdering, SpectralResult,
};
pub use verify::{
    Claim, ClaimReport, ClassFilter, Counterexample, Direction, Entry, ExtremalQuery, Status,
    VerificationRun, Verifier, VerifyOptions,
};
