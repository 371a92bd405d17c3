//! Searches for an optimal gradient vector field on M_7 and prints the
//! certificate. Pass a seed as the first argument to change the search.

use std::sync::Arc;

use matching_morse::{build_matching_complex, optimize, verify_certificate, SearchConfig};

fn main() -> matching_morse::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let c = Arc::new(build_matching_complex(7)?);
    let config = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let cert = optimize(&c, &config)?;
    print!("{}", cert.to_text());
    println!("# verified: {}", verify_certificate(&c, &cert));
    Ok(())
}
