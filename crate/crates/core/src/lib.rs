pub mod error;
pub mod formula;
pub mod alpha;
pub mod ba;
pub mod cli;
pub mod normalize;
pub mod oracle;
pub mod presburger;
pub mod schema;
pub mod text;

pub use error::{Error, Result};
pub use formula::{Atom, Formula, IntTerm, Metrics, Quant, SetTerm, Sort};
pub use text::{parse_formula, print_formula};
