//! Writes Graphviz renderings of the empty field on M_4 and of the bundled
//! local field on M_7 into the given directory (default: current).

use std::path::PathBuf;
use std::sync::Arc;

use matching_morse::fixtures::f_star;
use matching_morse::{build_matching_complex, GradientVectorField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let m4 = Arc::new(build_matching_complex(4)?);
    std::fs::write(dir.join("m4_empty.dot"), GradientVectorField::empty(m4).to_dot())?;
    std::fs::write(dir.join("m7_local.dot"), f_star().to_dot())?;
    println!("wrote m4_empty.dot and m7_local.dot to {}", dir.display());
    Ok(())
}
