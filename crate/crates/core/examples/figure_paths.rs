//! Gradient paths on the bundled local field around eta_1, eta_2, eta_3.

use matching_morse::cancellation::cancel_pair;
use matching_morse::fixtures::{eta, f_star, sigma};

fn main() -> matching_morse::Result<()> {
    let f = f_star();
    let c = f.complex().clone();
    for i in 1..=3 {
        let e = eta(i);
        println!("eta_{i} = {e}");
        for p in f.enumerate_paths(&e)? {
            println!("  {}", p.describe(&c));
        }
        for (end, count) in f.path_endpoints(&e)? {
            println!("  ends at {end}: {count}");
        }
    }
    match cancel_pair(&f, &eta(3), &sigma(4)) {
        Ok(_) => println!("eta_3 / sigma_4 cancelled"),
        Err(e) => println!("eta_3 / sigma_4: {e}"),
    }
    let g = cancel_pair(&f, &eta(1), &sigma(4))?;
    println!(
        "after cancelling eta_1 / sigma_4: {} -> {}",
        f.critical_vector(),
        g.critical_vector()
    );
    Ok(())
}
