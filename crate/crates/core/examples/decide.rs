//! Validity of a few BAPA sentences over finite universes.
//!
//! Run with `cargo run --example decide`.

use bapa::alpha::{decide, DecideOptions, Strategy};
use bapa::parse_formula;

fn main() -> bapa::Result<()> {
    let sentences = [
        "all set x. all set y. card(x union y) + card(x inter y) = card(x) + card(y)",
        "all set x. ex set y. y subseteq x & 2 * card(y) = card(x)",
        "all set x. ex set y. y subseteq x & (2 * card(y) = card(x) | 2 * card(y) = card(x) + 1)",
        "ex set x. card(x) = card(compl(x))",
    ];
    for src in sentences {
        let f = parse_formula(src)?;
        let alpha = decide(&f, &DecideOptions::default())?;
        let interleaved = decide(&f, &DecideOptions { strategy: Strategy::Interleaved, ..Default::default() })?;
        assert_eq!(alpha, interleaved);
        println!("{:<7} {src}", if alpha { "valid" } else { "invalid" });
    }
    Ok(())
}
