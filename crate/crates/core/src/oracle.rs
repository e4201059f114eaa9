//! Brute-force semantics over an explicit finite universe `{0, ..., u-1}`.
//!
//! Sets are bitmasks, cardinality is popcount and `MAXC` is `u`. Every set
//! of a finite universe is finite, so `fin(b)` and `finU` are true.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, IntTerm, Name, SetTerm, Sort};
use crate::normalize::simplify_const;
use crate::presburger::pa_decide;

/// Largest supported universe.
pub const MAX_UNIVERSE: u32 = 6;

/// Largest number of set assignments one query may enumerate.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;

/// How integer quantifiers are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntBackend {
    /// Fix the set and propositional choices, then decide the residual
    /// Presburger formula exactly.
    #[default]
    PaExact,
    /// Enumerate integers in `[-B, B]`. Only sound relative to `B`; the
    /// default bound is `2u + 10 + max |c|`.
    Bounded(Option<u64>),
}

/// An interpretation of the free variables over a universe of `universe`
/// elements.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FiniteModel {
    pub universe: u32,
    pub sets: HashMap<Name, u64>,
    pub ints: HashMap<Name, BigInt>,
    pub props: HashMap<Name, bool>,
}

impl FiniteModel {
    pub fn new(universe: u32) -> Self {
        FiniteModel { universe, ..Default::default() }
    }

    fn full(&self) -> u64 {
        (1u64 << self.universe) - 1
    }

    pub fn set(&self, t: &SetTerm) -> Result<u64> {
        Ok(match t {
            SetTerm::Var(v) => *self.sets.get(v).ok_or_else(|| Error::MissingBinding(v.clone()))?,
            SetTerm::Empty => 0,
            SetTerm::Univ => self.full(),
            SetTerm::Union(a, b) => self.set(a)? | self.set(b)?,
            SetTerm::Inter(a, b) => self.set(a)? & self.set(b)?,
            SetTerm::Compl(a) => !self.set(a)? & self.full(),
        })
    }

    pub fn int(&self, t: &IntTerm) -> Result<BigInt> {
        Ok(match t {
            IntTerm::Var(v) => self.ints.get(v).cloned().ok_or_else(|| Error::MissingBinding(v.clone()))?,
            IntTerm::Const(c) => c.clone(),
            IntTerm::MaxCard => BigInt::from(self.universe),
            IntTerm::Add(a, b) => self.int(a)? + self.int(b)?,
            IntTerm::Sub(a, b) => self.int(a)? - self.int(b)?,
            IntTerm::MulConst(c, a) => c * self.int(a)?,
            IntTerm::Card(b) => BigInt::from(self.set(b)?.count_ones()),
        })
    }

    fn atom(&self, a: &Atom) -> Result<bool> {
        Ok(match a {
            Atom::SetEq(x, y) => self.set(x)? == self.set(y)?,
            Atom::SubsetEq(x, y) => self.set(x)? & !self.set(y)? == 0,
            Atom::IntEq(x, y) => self.int(x)? == self.int(y)?,
            Atom::IntLt(x, y) => self.int(x)? < self.int(y)?,
            Atom::Dvd(c, t) => self.int(t)?.mod_floor(c).is_zero(),
            Atom::PropVar(p) => *self.props.get(p).ok_or_else(|| Error::MissingBinding(p.clone()))?,
            Atom::Fin(_) | Atom::FinU | Atom::True => true,
            Atom::False => false,
        })
    }
}

/// Binds a variable for the duration of `f`, restoring any shadowed value.
fn with_binding<T>(
    model: &mut FiniteModel,
    v: &str,
    value: Value,
    f: impl FnOnce(&mut FiniteModel) -> Result<T>,
) -> Result<T> {
    let saved = match &value {
        Value::Set(m) => model.sets.insert(v.to_string(), *m).map(Value::Set),
        Value::Int(i) => model.ints.insert(v.to_string(), i.clone()).map(Value::Int),
        Value::Prop(b) => model.props.insert(v.to_string(), *b).map(Value::Prop),
        Value::Unbound => model.ints.remove(v).map(Value::Int),
    };
    let out = f(model);
    match (&value, saved) {
        (Value::Set(_), None) => {
            model.sets.remove(v);
        }
        (Value::Int(_), None) | (Value::Unbound, None) => {
            model.ints.remove(v);
        }
        (Value::Prop(_), None) => {
            model.props.remove(v);
        }
        (_, Some(Value::Set(m))) => {
            model.sets.insert(v.to_string(), m);
        }
        (_, Some(Value::Int(i))) => {
            model.ints.insert(v.to_string(), i);
        }
        (_, Some(Value::Prop(b))) => {
            model.props.insert(v.to_string(), b);
        }
        (_, Some(Value::Unbound)) => {}
    }
    out
}

enum Value {
    Set(u64),
    Int(BigInt),
    Prop(bool),
    /// Hides an integer binding while a quantifier over the name is open.
    Unbound,
}

struct Evaluator {
    backend: IntBackend,
    bound: BigInt,
}

impl Evaluator {
    fn eval(&self, f: &Formula, m: &mut FiniteModel) -> Result<bool> {
        Ok(match f {
            Formula::Atom(a) => m.atom(a)?,
            Formula::Not(a) => !self.eval(a, m)?,
            Formula::And(a, b) => self.eval(a, m)? && self.eval(b, m)?,
            Formula::Or(a, b) => self.eval(a, m)? || self.eval(b, m)?,
            Formula::Implies(a, b) => !self.eval(a, m)? || self.eval(b, m)?,
            Formula::Iff(a, b) => self.eval(a, m)? == self.eval(b, m)?,
            Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
                let exists = matches!(f, Formula::Exists(..));
                match s {
                    Sort::Set => {
                        for mask in 0..=m.full() {
                            if with_binding(m, v, Value::Set(mask), |m| self.eval(body, m))? == exists {
                                return Ok(exists);
                            }
                        }
                        !exists
                    }
                    Sort::Prop => {
                        for b in [false, true] {
                            if with_binding(m, v, Value::Prop(b), |m| self.eval(body, m))? == exists {
                                return Ok(exists);
                            }
                        }
                        !exists
                    }
                    Sort::Int => match self.backend {
                        IntBackend::PaExact => pa_decide(&residual(f, m)?)?,
                        IntBackend::Bounded(_) => {
                            let mut k = -self.bound.clone();
                            while k <= self.bound {
                                if with_binding(m, v, Value::Int(k.clone()), |m| self.eval(body, m))? == exists {
                                    return Ok(exists);
                                }
                                k += 1;
                            }
                            !exists
                        }
                    },
                }
            }
        })
    }
}

fn truth(b: bool) -> Formula {
    if b {
        Formula::tt()
    } else {
        Formula::ff()
    }
}

/// The Presburger formula left after fixing every set and propositional
/// choice: set quantifiers become finite conjunctions or disjunctions,
/// cardinalities become constants, integer quantifiers stay symbolic.
fn residual(f: &Formula, m: &mut FiniteModel) -> Result<Formula> {
    Ok(simplify_const(&match f {
        Formula::Atom(a) => match a {
            Atom::IntEq(..) | Atom::IntLt(..) | Atom::Dvd(..) => {
                let sub = |t: &IntTerm| -> Result<IntTerm> {
                    let mut err = None;
                    let out = t.map_leaves(&mut |leaf| match leaf {
                        IntTerm::Var(v) => m.ints.get(v).map(|i| IntTerm::Const(i.clone())),
                        IntTerm::MaxCard => Some(IntTerm::int(m.universe as i64)),
                        IntTerm::Card(b) => match m.set(b) {
                            Ok(mask) => Some(IntTerm::int(mask.count_ones() as i64)),
                            Err(e) => {
                                err.get_or_insert(e);
                                None
                            }
                        },
                        _ => None,
                    });
                    err.map_or(Ok(out), Err)
                };
                Formula::Atom(match a {
                    Atom::IntEq(x, y) => Atom::IntEq(sub(x)?, sub(y)?),
                    Atom::IntLt(x, y) => Atom::IntLt(sub(x)?, sub(y)?),
                    Atom::Dvd(c, t) => Atom::Dvd(c.clone(), sub(t)?),
                    _ => unreachable!(),
                })
            }
            other => truth(m.atom(other)?),
        },
        Formula::Not(a) => Formula::not(residual(a, m)?),
        Formula::And(a, b) => Formula::and(residual(a, m)?, residual(b, m)?),
        Formula::Or(a, b) => Formula::or(residual(a, m)?, residual(b, m)?),
        Formula::Implies(a, b) => Formula::implies(residual(a, m)?, residual(b, m)?),
        Formula::Iff(a, b) => Formula::iff(residual(a, m)?, residual(b, m)?),
        Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
            let exists = matches!(f, Formula::Exists(..));
            let combine = |parts: BTreeSet<Formula>| {
                if exists {
                    Formula::or_all(parts)
                } else {
                    Formula::and_all(parts)
                }
            };
            match s {
                Sort::Set => {
                    let mut parts = BTreeSet::new();
                    for mask in 0..=m.full() {
                        parts.insert(with_binding(m, v, Value::Set(mask), |m| residual(body, m))?);
                    }
                    combine(parts)
                }
                Sort::Prop => {
                    let mut parts = BTreeSet::new();
                    for b in [false, true] {
                        parts.insert(with_binding(m, v, Value::Prop(b), |m| residual(body, m))?);
                    }
                    combine(parts)
                }
                Sort::Int => {
                    let body = with_binding(m, v, Value::Unbound, |m| residual(body, m))?;
                    if exists {
                        Formula::exists(v.clone(), Sort::Int, body)
                    } else {
                        Formula::forall(v.clone(), Sort::Int, body)
                    }
                }
            }
        }
    }))
}

fn max_constant(f: &Formula) -> BigInt {
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
        Atom::Dvd(c, t) => m = m.clone().max(c.abs()).max(term(t)),
        _ => {}
    });
    m
}

fn check_cost(f: &Formula, u: u32) -> Result<()> {
    if u > MAX_UNIVERSE {
        return Err(Error::Resource { what: "universe size".into(), cost: u as u128, limit: MAX_UNIVERSE as u128 });
    }
    let (sets, _, _) = f.quantifier_counts();
    let cost = 2u128.checked_pow(u * sets as u32).unwrap_or(u128::MAX);
    if cost > ENUMERATION_LIMIT {
        return Err(Error::Resource { what: "set assignments".into(), cost, limit: ENUMERATION_LIMIT });
    }
    Ok(())
}

/// Truth of `f` in `model`; the model must bind every free variable.
pub fn eval_model(f: &Formula, model: &FiniteModel, backend: IntBackend) -> Result<bool> {
    check_cost(f, model.universe)?;
    let bound = match backend {
        IntBackend::Bounded(Some(b)) => BigInt::from(b),
        _ => BigInt::from(2 * model.universe + 10) + max_constant(f),
    };
    let mut m = model.clone();
    Evaluator { backend, bound }.eval(f, &mut m)
}

/// Truth of a sentence in the universe of `u` elements.
pub fn oracle(f: &Formula, u: u32, backend: IntBackend) -> Result<bool> {
    f.check_sorts(&[])?;
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(free.into_iter().map(|(n, _)| n).collect()));
    }
    eval_model(f, &FiniteModel::new(u), backend)
}

/// [`oracle`] at every universe size `0..=u_max`.
pub fn oracle_sweep(f: &Formula, u_max: u32, backend: IntBackend) -> Result<Vec<(u32, bool)>> {
    (0..=u_max).map(|u| Ok((u, oracle(f, u, backend)?))).collect()
}

/// Every assignment of subsets of a `u`-element universe to `vars`.
pub fn set_assignments(vars: &[Name], u: u32) -> impl Iterator<Item = HashMap<Name, u64>> + '_ {
    let per = 1u64 << u;
    let total = per.checked_pow(vars.len() as u32).expect("too many assignments");
    (0..total).map(move |mut code| {
        vars.iter()
            .map(|v| {
                let mask = code % per;
                code /= per;
                (v.clone(), mask)
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn singleton_per_size() {
        let f = p("ex set y. card(y) = 1");
        assert!(!oracle(&f, 0, IntBackend::PaExact).unwrap());
        assert!(oracle(&f, 2, IntBackend::PaExact).unwrap());
        assert_eq!(
            oracle_sweep(&f, 2, IntBackend::PaExact).unwrap(),
            vec![(0, false), (1, true), (2, true)]
        );
    }

    #[test]
    fn sweeps() {
        let all = |s: &str| oracle_sweep(&p(s), 3, IntBackend::PaExact).unwrap().iter().all(|(_, b)| *b);
        assert!(all("all set x. card(x) <= MAXC"));
        assert!(oracle_sweep(&p("false"), 3, IntBackend::PaExact).unwrap().iter().all(|(_, b)| !b));
    }

    #[test]
    fn integer_backends_agree() {
        for s in [
            "all set x. ex int k. card(x) = k + k | card(x) = k + k + 1",
            "ex int k. all set x. card(x) <= k",
            "all int k. ex set x. k < 0 | MAXC < k | card(x) = k",
            "all set x. all int k. card(x) < k => ex int j. j + card(x) = k",
        ] {
            let f = p(s);
            for u in 0..4 {
                assert_eq!(
                    oracle(&f, u, IntBackend::PaExact).unwrap(),
                    oracle(&f, u, IntBackend::Bounded(None)).unwrap(),
                    "{s} at {u}"
                );
            }
        }
    }

    #[test]
    fn guards() {
        let f = p("ex set y. card(y) = 1");
        assert!(matches!(oracle(&f, 7, IntBackend::PaExact), Err(Error::Resource { .. })));
        assert!(matches!(oracle(&p("free x:set. x seteq x"), 1, IntBackend::PaExact), Err(Error::FreeVariables(_))));
    }

    #[test]
    fn shadowing_restores_bindings() {
        let f = p("all set x. (ex set x. card(x) = 1) & card(x) <= 1");
        assert!(!oracle(&f, 2, IntBackend::PaExact).unwrap());
        assert!(oracle(&f, 1, IntBackend::PaExact).unwrap());
    }

    #[test]
    fn free_variable_assignments() {
        let f = p("free a:set. ex set x. x subseteq a & card(x) = 1");
        let vars = vec!["a".to_string()];
        let truths: Vec<bool> = set_assignments(&vars, 2)
            .map(|sets| eval_model(&f, &FiniteModel { universe: 2, sets, ..Default::default() }, IntBackend::PaExact).unwrap())
            .collect();
        assert_eq!(truths, vec![false, true, true, true]);
    }
}
