//! Eliminating set quantifiers from a formula with constant cardinality
//! bounds; the free sets `a` and `b` survive.

use bapa::ba::ba_eliminate;
use bapa::{parse_formula, print_formula};

fn main() -> bapa::Result<()> {
    let inputs = [
        "free a : set. ex set x. x subseteq a & card(x) = 2",
        "free a : set, b : set. ex set x. a subseteq x & x subseteq b & card(x) >= 3",
        "free a : set. all set x. x subseteq a => card(x) = 0",
    ];
    for src in inputs {
        let f = parse_formula(src)?;
        println!("{}\n  ~> {}", print_formula(&f), print_formula(&ba_eliminate(&f)?));
    }
    Ok(())
}
