//! Discrete Morse theory on matching complexes of complete graphs.
//!
//! The crate builds the matching complex `M_n`, represents gradient vector
//! fields as acyclic Hasse-diagram matchings, enumerates gradient paths,
//! cancels critical pairs (one at a time or several at once) and certifies
//! optimality by comparing critical-cell counts with the Morse inequalities
//! computed from exact integer homology.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --release -p matching-morse --example build_complex
//! cargo run --release -p matching-morse --example homology_bounds
//! cargo run --release -p matching-morse --example figure_paths
//! cargo run --release -p matching-morse --example simultaneous_cancellation
//! cargo run --release -p matching-morse --example optimal_m7
//! cargo run --release -p matching-morse --example export_dot
//! ```

pub mod cancellation;
pub mod cell;
pub mod cli;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod gvf;
pub mod homology;
pub mod optimizer;

pub use cancellation::{apply_plan, cancel_pair, check_simultaneous, find_cancellable_pairs, CancellationPlan};
pub use cell::{Matching, VertexPair};
pub use complex::{build_matching_complex, CellId, SimplicialComplex};
pub use error::{Error, Result};
pub use gvf::{CriticalVector, GradientPath, GradientVectorField, Status};
pub use homology::{homology_of, morse_boundary, morse_lower_bounds, simplicial_boundary, smith_normal_form, HomologySummary};
pub use optimizer::{initial_field, optimize, verify_certificate, OptimalityCertificate, SearchConfig, Strategy, Verdict};
