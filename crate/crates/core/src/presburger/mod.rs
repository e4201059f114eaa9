//! Presburger arithmetic: quantifier elimination, decision of closed
//! sentences, evaluation under an assignment, and the bounded evaluator for
//! translations of pure Boolean-algebra sentences.

pub mod bounded;
mod bounds;
pub mod linear;
pub mod qe;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, IntTerm, Name, Quant, Sort};
use crate::normalize::rename_apart;

pub use bounded::{pa_eval_bounded, BoundedStats};
use linear::{Lin, Lit, Var, VarTable};
use qe::{Pf, Qf};

/// Variable assignment for evaluation; propositional variables use 0/1.
pub type Env = HashMap<Name, BigInt>;

/// Name under which `MAXC` is treated as an ordinary integer variable.
pub const MAXC: &str = "MAXC";

/// Checks that a formula belongs to the Presburger sublanguage.
pub fn check_pa(f: &Formula) -> Result<()> {
    let mut bad: Option<String> = None;
    f.visit_atoms(&mut |a| {
        if bad.is_some() {
            return;
        }
        let offending = match a {
            Atom::SetEq(..) | Atom::SubsetEq(..) | Atom::Fin(_) | Atom::FinU => true,
            Atom::IntEq(x, y) | Atom::IntLt(x, y) => x.has_card() || y.has_card(),
            Atom::Dvd(_, t) => t.has_card(),
            _ => false,
        };
        if offending {
            bad = Some(crate::text::print_atom(a));
        }
    });
    if let Some(atom) = bad {
        return Err(Error::Fragment(format!("`{atom}` is not a Presburger atom")));
    }
    let (sets, _, _) = f.quantifier_counts();
    if sets > 0 || f.free_vars().iter().any(|(_, s)| *s == Sort::Set) {
        return Err(Error::Fragment("set variables are not allowed in Presburger formulas".into()));
    }
    Ok(())
}

pub(crate) fn linearize(t: &IntTerm, vars: &mut VarTable) -> Result<Lin> {
    Ok(match t {
        IntTerm::Var(v) => Lin::var(vars.intern(v)),
        IntTerm::MaxCard => Lin::var(vars.intern(MAXC)),
        IntTerm::Const(c) => Lin::constant(c.clone()),
        IntTerm::Add(a, b) => linearize(a, vars)?.add(&linearize(b, vars)?),
        IntTerm::Sub(a, b) => linearize(a, vars)?.add(&linearize(b, vars)?.neg()),
        IntTerm::MulConst(c, a) => linearize(a, vars)?.scale(c),
        IntTerm::Card(_) => return Err(Error::Fragment("cardinality in a Presburger term".into())),
    })
}

fn lit_of_atom(a: &Atom, vars: &mut VarTable) -> Result<Option<Lit>> {
    Ok(Some(match a {
        Atom::IntEq(x, y) => Lit::Eq(linearize(x, vars)?.add(&linearize(y, vars)?.neg())),
        Atom::IntLt(x, y) => Lit::Lt(linearize(y, vars)?.add(&linearize(x, vars)?.neg())),
        Atom::Dvd(c, t) => Lit::Dvd(c.clone(), linearize(t, vars)?),
        Atom::PropVar(p) => Lit::Eq(Lin::var(vars.intern(p)).plus_const(&-BigInt::one())),
        Atom::True | Atom::False => return Ok(None),
        other => {
            return Err(Error::Fragment(format!(
                "`{}` is not a Presburger atom",
                crate::text::print_atom(other)
            )))
        }
    }))
}

fn unit_interval(v: Var, positive: bool) -> Qf {
    // 0 ≤ v ≤ 1
    let lo = Lit::Lt(Lin::var(v).plus_const(&BigInt::one()));
    let hi = Lit::Lt(Lin::var(v).neg().plus_const(&BigInt::from(2)));
    let q = qe::mk_and(vec![Qf::Lit(lo), Qf::Lit(hi)]);
    if positive {
        q
    } else {
        q.negate()
    }
}

/// Compiles a (renamed-apart) formula to NNF over linear literals.
fn compile(f: &Formula, positive: bool, vars: &mut VarTable) -> Result<Pf> {
    Ok(match f {
        Formula::Atom(Atom::True) => Pf::Qf(if positive { Qf::True } else { Qf::False }),
        Formula::Atom(Atom::False) => Pf::Qf(if positive { Qf::False } else { Qf::True }),
        Formula::Atom(a) => {
            let l = lit_of_atom(a, vars)?.expect("non-constant atom");
            Pf::Qf(Qf::lit(if positive { l } else { l.negate() }))
        }
        Formula::Not(a) => compile(a, !positive, vars)?,
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (a, b) = (compile(a, positive, vars)?, compile(b, positive, vars)?);
            if matches!(f, Formula::And(..)) == positive {
                qe::pf_and(vec![a, b])
            } else {
                qe::pf_or(vec![a, b])
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (compile(a, !positive, vars)?, compile(b, positive, vars)?);
            if positive {
                qe::pf_or(vec![a, b])
            } else {
                qe::pf_and(vec![a, b])
            }
        }
        Formula::Iff(a, b) => {
            let (ap, an) = (compile(a, true, vars)?, compile(a, false, vars)?);
            let (bp, bn) = (compile(b, true, vars)?, compile(b, false, vars)?);
            if positive {
                qe::pf_or(vec![qe::pf_and(vec![ap, bp]), qe::pf_and(vec![an, bn])])
            } else {
                qe::pf_or(vec![qe::pf_and(vec![ap, bn]), qe::pf_and(vec![an, bp])])
            }
        }
        Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
            let q = if matches!(f, Formula::Exists(..)) { Quant::Exists } else { Quant::Forall };
            let q = if positive { q } else { q.dual() };
            let x = vars.intern(v);
            let mut b = compile(body, positive, vars)?;
            match s {
                Sort::Set => return Err(Error::Fragment("set quantifier in a Presburger formula".into())),
                Sort::Prop => {
                    b = match q {
                        Quant::Exists => qe::pf_and(vec![Pf::Qf(unit_interval(x, true)), b]),
                        Quant::Forall => qe::pf_or(vec![Pf::Qf(unit_interval(x, false)), b]),
                    }
                }
                Sort::Int => {}
            }
            match q {
                Quant::Exists => Pf::Exists(x, Box::new(b)),
                Quant::Forall => Pf::Forall(x, Box::new(b)),
            }
        }
    })
}

fn lin_to_term(t: &Lin, vars: &VarTable) -> IntTerm {
    let mut parts: Vec<IntTerm> = Vec::new();
    for (v, a) in &t.terms {
        let name = vars.name(*v);
        let var = if name == MAXC { IntTerm::MaxCard } else { IntTerm::Var(name.to_string()) };
        parts.push(if a.is_one() { var } else { IntTerm::MulConst(a.clone(), Box::new(var)) });
    }
    if !t.c.is_zero() || parts.is_empty() {
        parts.push(IntTerm::Const(t.c.clone()));
    }
    IntTerm::sum(parts)
}

/// `t = rhs - lhs` with every coefficient on either side positive.
fn sides(t: &Lin) -> (Lin, Lin) {
    let mut pos = Lin::constant(0);
    let mut neg = Lin::constant(0);
    for (v, a) in &t.terms {
        if a.is_positive() {
            pos = pos.add(&Lin::var(*v).scale(a));
        } else {
            neg = neg.add(&Lin::var(*v).scale(&-a));
        }
    }
    if t.c.is_positive() {
        pos.c = t.c.clone();
    } else {
        neg.c = -&t.c;
    }
    (neg, pos)
}

fn lit_to_formula(l: &Lit, vars: &VarTable) -> Formula {
    match l {
        Lit::Lt(t) => {
            let (lhs, rhs) = sides(t);
            Formula::int_lt(lin_to_term(&lhs, vars), lin_to_term(&rhs, vars))
        }
        Lit::Eq(t) | Lit::Ne(t) => {
            let (lhs, rhs) = sides(t);
            let eq = Formula::int_eq(lin_to_term(&rhs, vars), lin_to_term(&lhs, vars));
            if matches!(l, Lit::Eq(_)) {
                eq
            } else {
                Formula::not(eq)
            }
        }
        Lit::Dvd(m, t) => Formula::Atom(Atom::Dvd(m.clone(), lin_to_term(t, vars))),
        Lit::NDvd(m, t) => Formula::not(Formula::Atom(Atom::Dvd(m.clone(), lin_to_term(t, vars)))),
    }
}

fn qf_to_formula(q: &Qf, vars: &VarTable) -> Formula {
    match q {
        Qf::True => Formula::tt(),
        Qf::False => Formula::ff(),
        Qf::Lit(l) => lit_to_formula(l, vars),
        Qf::And(cs) => Formula::and_all(cs.iter().map(|c| qf_to_formula(c, vars))),
        Qf::Or(cs) => Formula::or_all(cs.iter().map(|c| qf_to_formula(c, vars))),
    }
}

fn blowup(e: qe::Blowup) -> Error {
    Error::Resource {
        what: "Presburger quantifier elimination".into(),
        cost: e.cost,
        limit: qe::INSTANCE_LIMIT.max(qe::DNF_LIMIT as u128),
    }
}

fn qe_internal(f: &Formula) -> Result<(Qf, VarTable)> {
    check_pa(f)?;
    let f = rename_apart(f);
    let mut vars = VarTable::default();
    let pf = compile(&f, true, &mut vars)?;
    let q = qe::qe(&bounds::strengthen(&pf)).map_err(blowup)?;
    Ok((q, vars))
}

/// Quantifier elimination: an equivalent quantifier-free formula whose free
/// variables are among those of `f`.
pub fn pa_qe(f: &Formula) -> Result<Formula> {
    let has_props = f.free_vars().iter().any(|(_, s)| *s == Sort::Prop);
    if has_props {
        // Keep propositional atoms as atoms: eliminate under each case.
        return pa_qe_props(f);
    }
    let (q, vars) = qe_internal(f)?;
    Ok(qf_to_formula(&q, &vars))
}

fn pa_qe_props(f: &Formula) -> Result<Formula> {
    let props: Vec<Name> = f.free_vars().into_iter().filter(|(_, s)| *s == Sort::Prop).map(|(n, _)| n).collect();
    let p = &props[0];
    let mut cases = Vec::new();
    for value in [true, false] {
        let r = crate::formula::Replacement::Prop(if value { Formula::tt() } else { Formula::ff() });
        let g = crate::formula::substitute(f, p, Sort::Prop, &r)?;
        let g = pa_qe(&g)?;
        let atom = Formula::Atom(Atom::PropVar(p.clone()));
        let guard = if value { atom } else { Formula::not(atom) };
        cases.push(Formula::and(guard, g));
    }
    Ok(crate::normalize::simplify_const(&Formula::or_all(cases)))
}

/// Decides a closed Presburger sentence.
pub fn pa_decide(f: &Formula) -> Result<bool> {
    let free = f.free_vars();
    let mut free_names: Vec<String> = free.iter().map(|(n, _)| n.clone()).collect();
    if f.mentions_maxcard() {
        free_names.push(MAXC.into());
    }
    if !free_names.is_empty() {
        return Err(Error::FreeVariables(free_names));
    }
    let (q, _) = qe_internal(f)?;
    q.eval(&|_| None).ok_or_else(|| Error::contract("elimination left variables in a closed sentence"))
}

/// Substitutes a value for `MAXC`.
pub fn instantiate_maxc(f: &Formula, value: &BigInt) -> Formula {
    replace_maxc(f, &IntTerm::Const(value.clone()))
}

/// Substitutes an integer term for every occurrence of `MAXC`.
pub fn replace_maxc(f: &Formula, by: &IntTerm) -> Formula {
    f.map_atoms(&mut |a| {
        let sub = |t: &IntTerm| {
            t.map_leaves(&mut |leaf| match leaf {
                IntTerm::MaxCard => Some(by.clone()),
                _ => None,
            })
        };
        Formula::Atom(match a {
            Atom::IntEq(x, y) => Atom::IntEq(sub(x), sub(y)),
            Atom::IntLt(x, y) => Atom::IntLt(sub(x), sub(y)),
            Atom::Dvd(c, t) => Atom::Dvd(c.clone(), sub(t)),
            other => other.clone(),
        })
    })
}

fn eval_term(t: &IntTerm, env: &Env) -> Result<BigInt> {
    Ok(match t {
        IntTerm::Var(v) => env.get(v).cloned().ok_or_else(|| Error::MissingBinding(v.clone()))?,
        IntTerm::MaxCard => env.get(MAXC).cloned().ok_or_else(|| Error::MissingBinding(MAXC.into()))?,
        IntTerm::Const(c) => c.clone(),
        IntTerm::Add(a, b) => eval_term(a, env)? + eval_term(b, env)?,
        IntTerm::Sub(a, b) => eval_term(a, env)? - eval_term(b, env)?,
        IntTerm::MulConst(c, a) => c * eval_term(a, env)?,
        IntTerm::Card(_) => return Err(Error::Fragment("cardinality in a Presburger term".into())),
    })
}

/// Evaluates a quantifier-free Presburger formula under `env`. `MAXC` is
/// looked up under the name `MAXC`; propositional variables are true when
/// bound to 1.
pub fn pa_eval(f: &Formula, env: &Env) -> Result<bool> {
    Ok(match f {
        Formula::Atom(a) => match a {
            Atom::True => true,
            Atom::False => false,
            Atom::IntEq(x, y) => eval_term(x, env)? == eval_term(y, env)?,
            Atom::IntLt(x, y) => eval_term(x, env)? < eval_term(y, env)?,
            Atom::Dvd(c, t) => eval_term(t, env)?.mod_floor(c).is_zero(),
            Atom::PropVar(p) => env.get(p).ok_or_else(|| Error::MissingBinding(p.clone()))?.is_one(),
            other => {
                return Err(Error::Fragment(format!(
                    "`{}` is not a Presburger atom",
                    crate::text::print_atom(other)
                )))
            }
        },
        Formula::Not(a) => !pa_eval(a, env)?,
        Formula::And(a, b) => pa_eval(a, env)? && pa_eval(b, env)?,
        Formula::Or(a, b) => pa_eval(a, env)? || pa_eval(b, env)?,
        Formula::Implies(a, b) => !pa_eval(a, env)? || pa_eval(b, env)?,
        Formula::Iff(a, b) => pa_eval(a, env)? == pa_eval(b, env)?,
        Formula::Exists(..) | Formula::Forall(..) => {
            return Err(Error::contract("pa_eval expects a quantifier-free formula"))
        }
    })
}

/// Rewrites atoms into the positive forms used by elimination: negated `<`
/// becomes `<` with a shifted bound, negated divisibility becomes a
/// disjunction over residues, and (when requested) equalities become pairs
/// of strict inequalities.
pub fn normalize_atoms(f: &Formula, expand_equalities: bool) -> Formula {
    let nnf = crate::normalize::to_nnf(f);
    rewrite_literals(&nnf, expand_equalities)
}

fn rewrite_literals(f: &Formula, eqs: bool) -> Formula {
    let one = || IntTerm::int(1);
    match f {
        Formula::Atom(Atom::IntEq(a, b)) if eqs => Formula::and(
            Formula::int_lt(a.clone(), IntTerm::add(b.clone(), one())),
            Formula::int_lt(b.clone(), IntTerm::add(a.clone(), one())),
        ),
        Formula::Not(inner) => match &**inner {
            Formula::Atom(Atom::IntLt(a, b)) => Formula::int_lt(b.clone(), IntTerm::add(a.clone(), one())),
            Formula::Atom(Atom::IntEq(a, b)) if eqs => {
                Formula::or(Formula::int_lt(a.clone(), b.clone()), Formula::int_lt(b.clone(), a.clone()))
            }
            Formula::Atom(Atom::Dvd(c, t)) => {
                let n: u64 = c.try_into().unwrap_or(u64::MAX);
                Formula::or_all((1..n).map(|i| {
                    Formula::Atom(Atom::Dvd(c.clone(), IntTerm::add(t.clone(), IntTerm::Const(BigInt::from(i)))))
                }))
            }
            _ => f.clone(),
        },
        Formula::And(a, b) => Formula::and(rewrite_literals(a, eqs), rewrite_literals(b, eqs)),
        Formula::Or(a, b) => Formula::or(rewrite_literals(a, eqs), rewrite_literals(b, eqs)),
        Formula::Exists(v, s, b) => Formula::exists(v.clone(), *s, rewrite_literals(b, eqs)),
        Formula::Forall(v, s, b) => Formula::forall(v.clone(), *s, rewrite_literals(b, eqs)),
        _ => f.clone(),
    }
}

/// Eliminates `∃x` from a conjunction of literals, each of which must
/// mention `x`.
pub fn pa_eliminate_exists(conj: &[Formula], x: &str) -> Result<Formula> {
    let mut vars = VarTable::default();
    let xv = vars.intern(x);
    let mut lits = Vec::new();
    for c in conj {
        let (atom, positive) = match c {
            Formula::Atom(a) => (a, true),
            Formula::Not(inner) => match &**inner {
                Formula::Atom(a) => (a, false),
                _ => return Err(Error::contract("expected a literal")),
            },
            _ => return Err(Error::contract("expected a literal")),
        };
        let l = lit_of_atom(atom, &mut vars)?.ok_or_else(|| Error::contract("constant literal"))?;
        if !l.mentions(xv) {
            return Err(Error::contract(format!(
                "literal `{}` does not mention `{x}`",
                crate::text::print_formula(c)
            )));
        }
        lits.push(if positive { l } else { l.negate() });
    }
    let q = qe::eliminate_in_conj(xv, &lits).map_err(blowup)?;
    Ok(qf_to_formula(&q, &vars))
}
