//! Checks and applies a three-pair simultaneous cancellation on the bundled
//! local field.

use matching_morse::cancellation::{apply_plan, check_simultaneous};
use matching_morse::fixtures::{eta, f_star, sigma};

fn main() -> matching_morse::Result<()> {
    let f = f_star();
    let c = f.complex().clone();
    let etas = [eta(1), eta(2), eta(3)];
    let sigmas = [sigma(4), sigma(3), sigma(1)];
    let plan = check_simultaneous(&f, &etas, &sigmas)?;
    for (e, s) in plan.bijection(&f) {
        println!("{e} -> {s}");
    }
    let g = apply_plan(&f, &plan)?;
    for j in 1..=4 {
        let id = c.id_of(&sigma(j))?;
        println!("sigma_{j} critical: {}", g.is_critical(id));
    }
    match check_simultaneous(&f, &[eta(3)], &[sigma(4)]) {
        Ok(_) => println!("eta_3 / sigma_4 accepted"),
        Err(e) => println!("eta_3 / sigma_4 rejected: {e}"),
    }
    Ok(())
}
