//! Quantifier elimination and decision in Presburger arithmetic.

use bapa::presburger::{pa_decide, pa_qe};
use bapa::{parse_formula, print_formula};

fn main() -> bapa::Result<()> {
    let open = [
        "free n : int. ex int k. n = 2 * k",
        "free a : int, b : int. ex int x. a < x & x < b",
        "free n : int. all int k. k >= 0 => n + k >= 3",
    ];
    for src in open {
        let f = parse_formula(src)?;
        println!("{}\n  ~> {}", print_formula(&f), print_formula(&pa_qe(&f)?));
    }
    let closed = ["all int x. ex int y. x = 2 * y | x = 2 * y + 1", "ex int x. 3 * x = 7"];
    for src in closed {
        println!("{src}: {}", pa_decide(&parse_formula(src)?)?);
    }
    Ok(())
}
