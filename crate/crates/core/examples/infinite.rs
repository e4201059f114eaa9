//! The same questions under finite, infinite and mixed universes.

use bapa::alpha::{decide, DecideOptions, ModelClass};
use bapa::parse_formula;

fn main() -> bapa::Result<()> {
    let sentences = ["fin(univ)", "~fin(univ) => card(univ) = 0", "ex set y. ~fin(y)", "all set x. fin(x) | fin(compl(x))"];
    let modes = [ModelClass::FiniteUniverse, ModelClass::InfiniteUniverse, ModelClass::AllModels];
    println!("{:<36} finite   infinite all", "sentence");
    for src in sentences {
        let f = parse_formula(src)?;
        let cells: Vec<String> = modes
            .iter()
            .map(|&mode| match decide(&f, &DecideOptions { mode, ..Default::default() }) {
                Ok(v) => format!("{v:<8}"),
                Err(e) => format!("error: {e}"),
            })
            .collect();
        println!("{src:<36} {}", cells.join(" "));
    }
    Ok(())
}
