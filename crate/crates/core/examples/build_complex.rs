//! Builds the matching complexes M_2 through M_8 and prints their shape.

use matching_morse::build_matching_complex;

fn main() -> matching_morse::Result<()> {
    for n in 2..=8 {
        let c = build_matching_complex(n)?;
        println!("M_{n}: f = {:?}, chi = {}", c.f_vector(), c.euler_characteristic());
    }
    let m7 = build_matching_complex(7)?;
    let cell = "1-2,3-4".parse()?;
    println!("facets of {cell} in M_7:");
    for f in m7.facets(&cell)? {
        println!("  {f}");
    }
    println!("cofacets of {cell} in M_7:");
    for f in m7.cofacets(&cell)? {
        println!("  {f}");
    }
    Ok(())
}
