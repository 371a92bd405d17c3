//! Integer homology of M_n and the critical-cell lower bounds it implies.

use matching_morse::build_matching_complex;
use matching_morse::homology::simplicial_homology;

fn main() -> matching_morse::Result<()> {
    for n in 3..=8 {
        let c = build_matching_complex(n)?;
        let h = simplicial_homology(&c)?;
        println!("M_{n}: {}", h.summary_line());
    }
    Ok(())
}
