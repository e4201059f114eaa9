//! Bounded evaluation of translations of pure Boolean-algebra sentences.
//!
//! For such translations the truth of the formula below a block of partition
//! variables only depends on each free partition variable up to a threshold
//! that doubles per set variable. Enumerating every block over that range
//! decides the sentence with values of `O(S)` bits, independent of the
//! universe size.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, IntTerm, Name};

/// Memory and work figures of one bounded evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct BoundedStats {
    /// Largest number of simultaneously live bindings.
    pub peak_bindings: usize,
    /// Largest value ever bound to a variable.
    pub max_value: u64,
    /// Largest total bit width of the live bindings.
    pub peak_bits: u64,
    /// Number of atom evaluations.
    pub atom_evaluations: u64,
}

struct Eval<'a> {
    depths: &'a HashMap<Name, usize>,
    threshold: u64,
    maxc: u64,
    env: Vec<(&'a str, i128)>,
    stats: BoundedStats,
    budget: u64,
}

fn bits(v: i128) -> u64 {
    (128 - v.unsigned_abs().leading_zeros()).max(1) as u64
}

impl<'a> Eval<'a> {
    /// Clamp bound for variables introduced at step `r` (1-based): `T·2^(r-1)`.
    fn clamp(&self, r: usize) -> u64 {
        self.threshold.saturating_mul(1u64 << (r - 1).min(62))
    }

    fn lookup(&self, name: &str) -> Result<i128> {
        self.env
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::MissingBinding(name.to_string()))
    }

    fn push(&mut self, name: &'a str, value: i128) {
        self.env.push((name, value));
        self.stats.peak_bindings = self.stats.peak_bindings.max(self.env.len());
        self.stats.max_value = self.stats.max_value.max(value.unsigned_abs() as u64);
        let total: u64 = self.env.iter().map(|(_, v)| bits(*v)).sum();
        self.stats.peak_bits = self.stats.peak_bits.max(total);
    }

    fn term(&self, t: &IntTerm) -> Result<i128> {
        Ok(match t {
            IntTerm::Var(v) => self.lookup(v)?,
            IntTerm::MaxCard => self.lookup("MAXC")?,
            IntTerm::Const(c) => c.to_i128().ok_or_else(|| Error::Fragment("constant too large".into()))?,
            IntTerm::Add(a, b) => self.term(a)? + self.term(b)?,
            IntTerm::Sub(a, b) => self.term(a)? - self.term(b)?,
            IntTerm::MulConst(c, a) => {
                c.to_i128().ok_or_else(|| Error::Fragment("constant too large".into()))? * self.term(a)?
            }
            IntTerm::Card(_) => return Err(Error::Fragment("cardinality in a Presburger term".into())),
        })
    }

    fn formula(&mut self, f: &'a Formula) -> Result<bool> {
        Ok(match f {
            Formula::Atom(a) => {
                self.stats.atom_evaluations += 1;
                if self.stats.atom_evaluations > self.budget {
                    return Err(Error::Resource {
                        what: "bounded evaluation".into(),
                        cost: self.stats.atom_evaluations as u128,
                        limit: self.budget as u128,
                    });
                }
                match a {
                    Atom::True => true,
                    Atom::False => false,
                    Atom::IntEq(x, y) => self.term(x)? == self.term(y)?,
                    Atom::IntLt(x, y) => self.term(x)? < self.term(y)?,
                    Atom::Dvd(c, t) => {
                        let c = c.to_i128().ok_or_else(|| Error::Fragment("divisor too large".into()))?;
                        self.term(t)?.mod_floor(&c) == 0
                    }
                    other => {
                        return Err(Error::Fragment(format!(
                            "`{}` cannot occur in a translated Boolean-algebra sentence",
                            crate::text::print_atom(other)
                        )))
                    }
                }
            }
            Formula::Not(a) => !self.formula(a)?,
            Formula::And(a, b) => self.formula(a)? && self.formula(b)?,
            Formula::Or(a, b) => self.formula(a)? || self.formula(b)?,
            Formula::Implies(a, b) => !self.formula(a)? || self.formula(b)?,
            Formula::Iff(a, b) => self.formula(a)? == self.formula(b)?,
            Formula::Exists(v, _, body) | Formula::Forall(v, _, body) => {
                let r = *self.depths.get(v).ok_or_else(|| {
                    Error::contract(format!(
                        "`{v}` has no partition depth; bounded evaluation needs the output of the translation"
                    ))
                })?;
                // Parents of this block are the variables of step r+1; they
                // only matter up to the clamp of that step.
                let parent_clamp = self.clamp(r + 1) as i128;
                let mut shadowed = 0;
                for i in 0..self.env.len() {
                    let (n, val) = self.env[i];
                    if val > parent_clamp && self.depths.get(n) == Some(&(r + 1)) {
                        self.push(n, parent_clamp);
                        shadowed += 1;
                    }
                }
                let hi = self.maxc.min(self.clamp(r + 1)) as i128;
                let exists = matches!(f, Formula::Exists(..));
                let mut result = !exists;
                for value in 0..=hi {
                    self.push(v, value);
                    let b = self.formula(body);
                    self.env.pop();
                    if b? == exists {
                        result = exists;
                        break;
                    }
                }
                for _ in 0..shadowed {
                    self.env.pop();
                }
                result
            }
        })
    }
}

/// Largest absolute constant in the formula (divisors excluded).
fn max_constant(f: &Formula) -> u64 {
    fn term(t: &IntTerm) -> BigInt {
        match t {
            IntTerm::Const(c) => c.abs(),
            IntTerm::Add(a, b) | IntTerm::Sub(a, b) => term(a).max(term(b)),
            IntTerm::MulConst(c, a) => c.abs().max(term(a)),
            _ => BigInt::zero(),
        }
    }
    let mut m = BigInt::zero();
    f.visit_atoms(&mut |a| match a {
        Atom::IntEq(x, y) | Atom::IntLt(x, y) => m = m.clone().max(term(x)).max(term(y)),
        Atom::Dvd(_, t) => m = m.clone().max(term(t)),
        _ => {}
    });
    m.to_u64().unwrap_or(u64::MAX)
}

/// Decides the translation `g` of a pure Boolean-algebra sentence at universe
/// size `maxc`. `depths` maps each partition variable to the set-elimination
/// step (1 = innermost set variable) whose block binds it.
///
/// With `K` the largest constant of `g`, a variable bound at step `r` ranges
/// over `[0, min(maxc, (K+1)·2^r)]`, and on entry to that block the parent
/// variables are clamped to the same bound; `MAXC` itself is clamped to
/// `(K+1)·2^S`.
pub fn pa_eval_bounded(g: &Formula, depths: &HashMap<Name, usize>, maxc: u64) -> Result<(bool, BoundedStats)> {
    let s = depths.values().copied().max().unwrap_or(0);
    if g.quantifier_counts() != (0, 0, 0) && depths.is_empty() {
        return Err(Error::contract(
            "missing partition depths; bounded evaluation needs the output of the translation",
        ));
    }
    let threshold = max_constant(g).saturating_add(1);
    let mut ev = Eval {
        depths,
        threshold,
        maxc,
        env: Vec::new(),
        stats: BoundedStats::default(),
        budget: 50_000_000,
    };
    let top = maxc.min(ev.clamp(s + 1)) as i128;
    ev.push("MAXC", top);
    let verdict = ev.formula(g)?;
    Ok((verdict, ev.stats))
}
