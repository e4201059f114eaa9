//! Verification conditions for a small procedure over a set and its size,
//! decided over finite universes.

use bapa::alpha::{decide, DecideOptions};
use bapa::print_formula;
use bapa::schema::{all_vcs, parse_schema};

const SCHEMA: &str = "
var content : set;
var size : int;
invariant I <=> size = card(content);

procedure insert(e : set) maintains I
requires card(e) = 1 & card(e inter content) = 0
ensures size' > 0
{
  content := content union e;
  size := size + 1;
}

procedure clear() maintains I
ensures card(content') = 0
{
  content := empty;
  size := 0;
}

procedure sloppy(e : set) maintains I
requires card(e) = 1
{
  content := content union e;
  size := size + 1;
}
";

fn main() -> bapa::Result<()> {
    let schema = parse_schema(SCHEMA)?;
    for (name, vc) in all_vcs(&schema)? {
        let valid = decide(&vc, &DecideOptions::default())?;
        println!("{name}: {}", if valid { "valid" } else { "invalid" });
        if name == "insert" {
            println!("  {}", print_formula(&vc));
        }
    }
    Ok(())
}
