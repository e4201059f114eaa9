//! The Presburger image of a BAPA sentence, with its size figures.

use bapa::alpha::{alpha_translate, ModelClass};
use bapa::{parse_formula, print_formula};

fn main() -> bapa::Result<()> {
    let f = parse_formula("all set x. ex set y. card(x inter y) = 1 & y subseteq x")?;
    let t = alpha_translate(&f, ModelClass::FiniteUniverse, false)?;
    println!("input:  {}", print_formula(&f));
    // MAXC stands for the size of the universe and stays free here.
    println!("output: {}", print_formula(&t.formula));
    println!("closed: {}", print_formula(&t.sentence()));
    for (name, depth) in {
        let mut d: Vec<_> = t.depths.iter().collect();
        d.sort();
        d
    } {
        println!("  {name} partitions {depth} set variable(s)");
    }
    println!("size {} -> {}", f.size(), t.formula.size());
    Ok(())
}
