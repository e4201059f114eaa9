//! Evaluating a translated Boolean-algebra sentence in huge universes with
//! memory that does not grow with the universe.

use bapa::alpha::{alpha_translate, ModelClass};
use bapa::parse_formula;
use bapa::presburger::pa_eval_bounded;

fn main() -> bapa::Result<()> {
    let f = parse_formula("all set x. ex set y. y subseteq x & card(y) = 1 | card(x) = 0")?;
    let t = alpha_translate(&f, ModelClass::FiniteUniverse, false)?;
    for u in [0u64, 1, 1_000, 1_000_000_000_000] {
        let (holds, stats) = pa_eval_bounded(&t.formula, &t.depths, u)?;
        println!("u={u:<14} {holds:<5} peak bits {}", stats.peak_bits);
    }
    Ok(())
}
