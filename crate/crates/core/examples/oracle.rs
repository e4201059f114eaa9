//! Brute-force truth in small finite universes, next to the symbolic answer.

use bapa::alpha::{decide, DecideOptions};
use bapa::oracle::{oracle_sweep, IntBackend};
use bapa::parse_formula;

fn main() -> bapa::Result<()> {
    // Holds exactly when the universe has an even number of elements.
    let f = parse_formula("ex set x. card(x) = card(compl(x))")?;
    for (u, holds) in oracle_sweep(&f, 5, IntBackend::PaExact)? {
        println!("u={u} {holds}");
    }
    println!("valid over all finite universes: {}", decide(&f, &DecideOptions::default())?);
    Ok(())
}
