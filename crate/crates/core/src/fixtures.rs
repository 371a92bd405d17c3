//! A local gradient vector field on `M_7` around three critical triangles
//! and four critical edges, used by tests, examples and the CLI.

use std::sync::Arc;

use crate::cell::Matching;
use crate::complex::{build_matching_complex, SimplicialComplex};
use crate::gvf::GradientVectorField;

/// Pair listing of the fixture field in `gvf` text form.
pub const F_STAR_LOCAL: &str = include_str!("../fixtures/f_star_local.gvf");

const ETAS: [&str; 3] = ["2-5,3-6,4-7", "1-5,2-4,6-7", "1-5,2-6,4-7"];
const SIGMAS: [&str; 4] = ["1-2,4-5", "1-2,4-6", "1-3,4-5", "1-3,4-6"];

/// Critical triangle `eta_i`, `i` in `1..=3`.
pub fn eta(i: usize) -> Matching {
    ETAS[i - 1].parse().expect("valid fixture cell")
}

/// Critical edge `sigma_i`, `i` in `1..=4`.
pub fn sigma(i: usize) -> Matching {
    SIGMAS[i - 1].parse().expect("valid fixture cell")
}

/// The fixture field on a freshly built `M_7`.
pub fn f_star() -> GradientVectorField {
    let c = Arc::new(build_matching_complex(7).expect("M_7 is in range"));
    f_star_on(c)
}

/// The fixture field on an existing `M_7`.
pub fn f_star_on(complex: Arc<SimplicialComplex>) -> GradientVectorField {
    GradientVectorField::from_text(complex, F_STAR_LOCAL).expect("fixture is a valid acyclic field")
}
