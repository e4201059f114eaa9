//! Abstract syntax of BAPA formulas: set terms, integer terms, atoms and
//! first-order formulas over three sorts, plus the structural utilities shared
//! by every decision procedure in the crate (free variables, substitution,
//! fresh names, metrics).

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub type Name = String;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Set,
    Int,
    Prop,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Set => "set",
            Sort::Int => "int",
            Sort::Prop => "prop",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetTerm {
    Var(Name),
    Empty,
    Univ,
    Union(Box<SetTerm>, Box<SetTerm>),
    Inter(Box<SetTerm>, Box<SetTerm>),
    Compl(Box<SetTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntTerm {
    Var(Name),
    Const(BigInt),
    MaxCard,
    Add(Box<IntTerm>, Box<IntTerm>),
    Sub(Box<IntTerm>, Box<IntTerm>),
    MulConst(BigInt, Box<IntTerm>),
    Card(Box<SetTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    SetEq(SetTerm, SetTerm),
    SubsetEq(SetTerm, SetTerm),
    IntEq(IntTerm, IntTerm),
    IntLt(IntTerm, IntTerm),
    Dvd(BigInt, IntTerm),
    Fin(SetTerm),
    PropVar(Name),
    FinU,
    True,
    False,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Name, Sort, Box<Formula>),
    Forall(Name, Sort, Box<Formula>),
}

// ---------------------------------------------------------------------------
// Constructors

impl SetTerm {
    pub fn var(name: impl Into<Name>) -> Self {
        SetTerm::Var(name.into())
    }

    pub fn union(a: SetTerm, b: SetTerm) -> Self {
        SetTerm::Union(Box::new(a), Box::new(b))
    }

    pub fn inter(a: SetTerm, b: SetTerm) -> Self {
        SetTerm::Inter(Box::new(a), Box::new(b))
    }

    pub fn compl(a: SetTerm) -> Self {
        SetTerm::Compl(Box::new(a))
    }

    /// Evaluates the term as a Boolean function of its variables.
    pub fn eval_bits(&self, assign: &dyn Fn(&str) -> bool) -> bool {
        match self {
            SetTerm::Var(v) => assign(v),
            SetTerm::Empty => false,
            SetTerm::Univ => true,
            SetTerm::Union(a, b) => a.eval_bits(assign) || b.eval_bits(assign),
            SetTerm::Inter(a, b) => a.eval_bits(assign) && b.eval_bits(assign),
            SetTerm::Compl(a) => !a.eval_bits(assign),
        }
    }

    pub fn vars_into(&self, out: &mut Vec<Name>) {
        match self {
            SetTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            SetTerm::Empty | SetTerm::Univ => {}
            SetTerm::Union(a, b) | SetTerm::Inter(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            SetTerm::Compl(a) => a.vars_into(out),
        }
    }

    pub fn vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.vars_into(&mut out);
        out
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            SetTerm::Var(v) => v == name,
            SetTerm::Empty | SetTerm::Univ => false,
            SetTerm::Union(a, b) | SetTerm::Inter(a, b) => a.mentions(name) || b.mentions(name),
            SetTerm::Compl(a) => a.mentions(name),
        }
    }

    fn size(&self) -> usize {
        match self {
            SetTerm::Var(_) | SetTerm::Empty | SetTerm::Univ => 1,
            SetTerm::Union(a, b) | SetTerm::Inter(a, b) => 1 + a.size() + b.size(),
            SetTerm::Compl(a) => 1 + a.size(),
        }
    }

    pub fn map_vars(&self, f: &mut dyn FnMut(&str) -> SetTerm) -> SetTerm {
        match self {
            SetTerm::Var(v) => f(v),
            SetTerm::Empty => SetTerm::Empty,
            SetTerm::Univ => SetTerm::Univ,
            SetTerm::Union(a, b) => SetTerm::union(a.map_vars(f), b.map_vars(f)),
            SetTerm::Inter(a, b) => SetTerm::inter(a.map_vars(f), b.map_vars(f)),
            SetTerm::Compl(a) => SetTerm::compl(a.map_vars(f)),
        }
    }
}

impl IntTerm {
    pub fn var(name: impl Into<Name>) -> Self {
        IntTerm::Var(name.into())
    }

    pub fn int(value: i64) -> Self {
        IntTerm::Const(BigInt::from(value))
    }

    pub fn card(b: SetTerm) -> Self {
        IntTerm::Card(Box::new(b))
    }

    pub fn add(a: IntTerm, b: IntTerm) -> Self {
        IntTerm::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: IntTerm, b: IntTerm) -> Self {
        IntTerm::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(c: impl Into<BigInt>, t: IntTerm) -> Self {
        IntTerm::MulConst(c.into(), Box::new(t))
    }

    /// Left-associated sum; the empty sum is `0`.
    pub fn sum(terms: impl IntoIterator<Item = IntTerm>) -> Self {
        let mut it = terms.into_iter();
        match it.next() {
            None => IntTerm::int(0),
            Some(first) => it.fold(first, IntTerm::add),
        }
    }

    pub fn has_card(&self) -> bool {
        match self {
            IntTerm::Card(_) => true,
            IntTerm::Var(_) | IntTerm::Const(_) | IntTerm::MaxCard => false,
            IntTerm::Add(a, b) | IntTerm::Sub(a, b) => a.has_card() || b.has_card(),
            IntTerm::MulConst(_, t) => t.has_card(),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            IntTerm::Var(v) => v == name,
            IntTerm::Const(_) | IntTerm::MaxCard => false,
            IntTerm::Add(a, b) | IntTerm::Sub(a, b) => a.mentions(name) || b.mentions(name),
            IntTerm::MulConst(_, t) => t.mentions(name),
            IntTerm::Card(b) => b.mentions(name),
        }
    }

    pub fn has_maxcard(&self) -> bool {
        match self {
            IntTerm::MaxCard => true,
            IntTerm::Var(_) | IntTerm::Const(_) | IntTerm::Card(_) => false,
            IntTerm::Add(a, b) | IntTerm::Sub(a, b) => a.has_maxcard() || b.has_maxcard(),
            IntTerm::MulConst(_, t) => t.has_maxcard(),
        }
    }

    fn size(&self) -> usize {
        match self {
            IntTerm::Var(_) | IntTerm::Const(_) | IntTerm::MaxCard => 1,
            IntTerm::Add(a, b) | IntTerm::Sub(a, b) => 1 + a.size() + b.size(),
            IntTerm::MulConst(_, t) => 1 + t.size(),
            IntTerm::Card(b) => 1 + b.size(),
        }
    }

    /// Rebuilds the term bottom-up, letting `leaf` replace variables, `MAXC`
    /// and cardinality subterms.
    pub fn map_leaves(&self, leaf: &mut dyn FnMut(&IntTerm) -> Option<IntTerm>) -> IntTerm {
        if let Some(t) = leaf(self) {
            return t;
        }
        match self {
            IntTerm::Add(a, b) => IntTerm::add(a.map_leaves(leaf), b.map_leaves(leaf)),
            IntTerm::Sub(a, b) => IntTerm::sub(a.map_leaves(leaf), b.map_leaves(leaf)),
            IntTerm::MulConst(c, t) => IntTerm::MulConst(c.clone(), Box::new(t.map_leaves(leaf))),
            other => other.clone(),
        }
    }
}

impl Atom {
    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Atom::SetEq(a, b) | Atom::SubsetEq(a, b) => a.mentions(name) || b.mentions(name),
            Atom::IntEq(a, b) | Atom::IntLt(a, b) => a.mentions(name) || b.mentions(name),
            Atom::Dvd(_, t) => t.mentions(name),
            Atom::Fin(b) => b.mentions(name),
            Atom::PropVar(p) => p == name,
            Atom::FinU | Atom::True | Atom::False => false,
        }
    }

    fn size(&self) -> usize {
        1 + match self {
            Atom::SetEq(a, b) | Atom::SubsetEq(a, b) => a.size() + b.size(),
            Atom::IntEq(a, b) | Atom::IntLt(a, b) => a.size() + b.size(),
            Atom::Dvd(_, t) => 1 + t.size(),
            Atom::Fin(b) => b.size(),
            Atom::PropVar(_) | Atom::FinU | Atom::True | Atom::False => 0,
        }
    }
}

impl Formula {
    pub fn tt() -> Self {
        Formula::Atom(Atom::True)
    }

    pub fn ff() -> Self {
        Formula::Atom(Atom::False)
    }

    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Self {
        Formula::Not(Box::new(a))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<Name>, sort: Sort, body: Formula) -> Self {
        Formula::Exists(v.into(), sort, Box::new(body))
    }

    pub fn forall(v: impl Into<Name>, sort: Sort, body: Formula) -> Self {
        Formula::Forall(v.into(), sort, Box::new(body))
    }

    pub fn quant(q: Quant, v: impl Into<Name>, sort: Sort, body: Formula) -> Self {
        match q {
            Quant::Exists => Formula::exists(v, sort, body),
            Quant::Forall => Formula::forall(v, sort, body),
        }
    }

    pub fn int_eq(a: IntTerm, b: IntTerm) -> Self {
        Formula::Atom(Atom::IntEq(a, b))
    }

    pub fn int_lt(a: IntTerm, b: IntTerm) -> Self {
        Formula::Atom(Atom::IntLt(a, b))
    }

    /// `a >= b`, encoded as `~(a < b)`.
    pub fn int_ge(a: IntTerm, b: IntTerm) -> Self {
        Formula::not(Formula::int_lt(a, b))
    }

    /// `a <= b`, encoded as `~(b < a)`.
    pub fn int_le(a: IntTerm, b: IntTerm) -> Self {
        Formula::not(Formula::int_lt(b, a))
    }

    /// Left-associated conjunction; the empty conjunction is `true`.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::tt(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Left-associated disjunction; the empty disjunction is `false`.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::ff(),
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Top-level conjuncts, flattening nested `And` nodes.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                other => out.push(other),
            }
        }
        go(self, &mut out);
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    pub fn visit_atoms(&self, f: &mut dyn FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(a) => a.visit_atoms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::Exists(_, _, b) | Formula::Forall(_, _, b) => b.visit_atoms(f),
        }
    }

    /// Rebuilds the formula with every atom replaced by `f(atom)`; binders are
    /// kept as they are.
    pub fn map_atoms(&self, f: &mut dyn FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Exists(v, s, b) => Formula::exists(v.clone(), *s, b.map_atoms(f)),
            Formula::Forall(v, s, b) => Formula::forall(v.clone(), *s, b.map_atoms(f)),
        }
    }

    pub fn mentions_maxcard(&self) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| match a {
            Atom::IntEq(x, y) | Atom::IntLt(x, y) => found |= x.has_maxcard() || y.has_maxcard(),
            Atom::Dvd(_, t) => found |= t.has_maxcard(),
            _ => {}
        });
        found
    }

    pub fn mentions_finiteness(&self) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| found |= matches!(a, Atom::Fin(_) | Atom::FinU));
        found
    }

    /// Number of quantifier nodes per sort.
    pub fn quantifier_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        fn go(f: &Formula, c: &mut (usize, usize, usize)) {
            match f {
                Formula::Atom(_) => {}
                Formula::Not(a) => go(a, c),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    go(a, c);
                    go(b, c);
                }
                Formula::Exists(_, s, b) | Formula::Forall(_, s, b) => {
                    match s {
                        Sort::Set => c.0 += 1,
                        Sort::Int => c.1 += 1,
                        Sort::Prop => c.2 += 1,
                    }
                    go(b, c);
                }
            }
        }
        go(self, &mut counts);
        counts
    }

    /// AST node count; constants count as one node regardless of magnitude.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(a) => a.size(),
            Formula::Not(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Exists(_, _, b) | Formula::Forall(_, _, b) => 1 + b.size(),
        }
    }

    /// Free variables with their sorts, in order of first occurrence.
    pub fn free_vars(&self) -> Vec<(Name, Sort)> {
        let mut out: Vec<(Name, Sort)> = Vec::new();
        let mut bound: Vec<&str> = Vec::new();
        fn push(out: &mut Vec<(Name, Sort)>, bound: &[&str], v: &str, s: Sort) {
            if !bound.contains(&v) && !out.iter().any(|(n, _)| n == v) {
                out.push((v.to_string(), s));
            }
        }
        fn set_term(t: &SetTerm, out: &mut Vec<(Name, Sort)>, bound: &[&str]) {
            for v in t.vars() {
                push(out, bound, &v, Sort::Set);
            }
        }
        fn int_term(t: &IntTerm, out: &mut Vec<(Name, Sort)>, bound: &[&str]) {
            match t {
                IntTerm::Var(v) => push(out, bound, v, Sort::Int),
                IntTerm::Const(_) | IntTerm::MaxCard => {}
                IntTerm::Add(a, b) | IntTerm::Sub(a, b) => {
                    int_term(a, out, bound);
                    int_term(b, out, bound);
                }
                IntTerm::MulConst(_, a) => int_term(a, out, bound),
                IntTerm::Card(b) => set_term(b, out, bound),
            }
        }
        fn go<'a>(f: &'a Formula, out: &mut Vec<(Name, Sort)>, bound: &mut Vec<&'a str>) {
            match f {
                Formula::Atom(a) => match a {
                    Atom::SetEq(x, y) | Atom::SubsetEq(x, y) => {
                        set_term(x, out, bound);
                        set_term(y, out, bound);
                    }
                    Atom::IntEq(x, y) | Atom::IntLt(x, y) => {
                        int_term(x, out, bound);
                        int_term(y, out, bound);
                    }
                    Atom::Dvd(_, t) => int_term(t, out, bound),
                    Atom::Fin(b) => set_term(b, out, bound),
                    Atom::PropVar(p) => push(out, bound, p, Sort::Prop),
                    Atom::FinU | Atom::True | Atom::False => {}
                },
                Formula::Not(a) => go(a, out, bound),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    go(a, out, bound);
                    go(b, out, bound);
                }
                Formula::Exists(v, _, b) | Formula::Forall(v, _, b) => {
                    bound.push(v);
                    go(b, out, bound);
                    bound.pop();
                }
            }
        }
        go(self, &mut out, &mut bound);
        out
    }

    pub fn is_free(&self, name: &str) -> bool {
        self.free_vars().iter().any(|(n, _)| n == name)
    }

    /// Every name occurring in the formula, bound or free.
    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        fn go(f: &Formula, out: &mut BTreeSet<Name>) {
            match f {
                Formula::Atom(_) => {
                    for (n, _) in f.free_vars() {
                        out.insert(n);
                    }
                }
                Formula::Not(a) => go(a, out),
                Formula::And(a, b)
                | Formula::Or(a, b)
                | Formula::Implies(a, b)
                | Formula::Iff(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Exists(v, _, b) | Formula::Forall(v, _, b) => {
                    out.insert(v.clone());
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// Universal (or existential) closure over the free variables, outermost
    /// first in order of first occurrence.
    pub fn close(&self, q: Quant) -> Formula {
        self.free_vars()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, (v, s)| Formula::quant(q, v, s, acc))
    }

    /// Checks well-sortedness: no name is used at two sorts within one scope,
    /// bound names agree with their declared sort, divisors are positive.
    /// `free` pins the sorts of free variables; undeclared free names are
    /// inferred from their first use.
    pub fn check_sorts(&self, free: &[(Name, Sort)]) -> Result<()> {
        let mut env: Vec<(String, Sort)> = free.to_vec();
        check(self, &mut env, free.len())
    }
}

fn check(f: &Formula, env: &mut Vec<(String, Sort)>, _decl: usize) -> Result<()> {
    fn lookup(env: &[(String, Sort)], v: &str) -> Option<Sort> {
        env.iter().rev().find(|(n, _)| n == v).map(|(_, s)| *s)
    }
    fn use_var(env: &mut Vec<(String, Sort)>, v: &str, s: Sort, atom: &Atom) -> Result<()> {
        match lookup(env, v) {
            Some(found) if found != s => Err(Error::Sort {
                atom: crate::text::print_atom(atom),
                message: format!("`{v}` is used as {s} but has sort {found}"),
            }),
            Some(_) => Ok(()),
            None => {
                // Free and undeclared: remember the sort at the bottom of the scope stack.
                env.insert(0, (v.to_string(), s));
                Ok(())
            }
        }
    }
    fn int_term(t: &IntTerm, env: &mut Vec<(String, Sort)>, atom: &Atom) -> Result<()> {
        match t {
            IntTerm::Var(v) => use_var(env, v, Sort::Int, atom),
            IntTerm::Const(_) | IntTerm::MaxCard => Ok(()),
            IntTerm::Add(a, b) | IntTerm::Sub(a, b) => {
                int_term(a, env, atom)?;
                int_term(b, env, atom)
            }
            IntTerm::MulConst(_, a) => int_term(a, env, atom),
            IntTerm::Card(b) => set_term(b, env, atom),
        }
    }
    fn set_term(t: &SetTerm, env: &mut Vec<(String, Sort)>, atom: &Atom) -> Result<()> {
        for v in t.vars() {
            use_var(env, &v, Sort::Set, atom)?;
        }
        Ok(())
    }
    match f {
        Formula::Atom(a) => match a {
            Atom::SetEq(x, y) | Atom::SubsetEq(x, y) => {
                set_term(x, env, a)?;
                set_term(y, env, a)
            }
            Atom::IntEq(x, y) | Atom::IntLt(x, y) => {
                int_term(x, env, a)?;
                int_term(y, env, a)
            }
            Atom::Dvd(c, t) => {
                if c <= &BigInt::from(0) {
                    return Err(Error::Sort {
                        atom: crate::text::print_atom(a),
                        message: "divisor must be positive".into(),
                    });
                }
                int_term(t, env, a)
            }
            Atom::Fin(b) => set_term(b, env, a),
            Atom::PropVar(p) => use_var(env, p, Sort::Prop, a),
            Atom::FinU | Atom::True | Atom::False => Ok(()),
        },
        Formula::Not(a) => check(a, env, _decl),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            check(a, env, _decl)?;
            check(b, env, _decl)
        }
        Formula::Exists(v, s, b) | Formula::Forall(v, s, b) => {
            env.push((v.clone(), *s));
            let r = check(b, env, _decl);
            // pop the binder; undeclared free names were inserted at the bottom
            if let Some(pos) = env.iter().rposition(|(n, so)| n == v && so == s) {
                env.remove(pos);
            }
            r
        }
    }
}

// ---------------------------------------------------------------------------
// Fresh names

/// Returns `base` if unused, otherwise `base` with the smallest numeric suffix
/// `1, 2, ...` that is not in `avoid`.
pub fn fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1u64..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded suffix search")
}

/// A per-translation name supply: remembers every name it has handed out.
#[derive(Debug, Clone, Default)]
pub struct NameSupply {
    used: BTreeSet<Name>,
}

impl NameSupply {
    pub fn new(used: BTreeSet<Name>) -> Self {
        NameSupply { used }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        let n = fresh(base, &self.used);
        self.used.insert(n.clone());
        n
    }
}

// ---------------------------------------------------------------------------
// Substitution

/// A term that may stand in for a variable of the matching sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replacement {
    Set(SetTerm),
    Int(IntTerm),
    Prop(Formula),
}

impl Replacement {
    pub fn sort(&self) -> Sort {
        match self {
            Replacement::Set(_) => Sort::Set,
            Replacement::Int(_) => Sort::Int,
            Replacement::Prop(_) => Sort::Prop,
        }
    }

    fn free_names(&self) -> HashSet<Name> {
        match self {
            Replacement::Set(t) => t.vars().into_iter().collect(),
            Replacement::Int(t) => Formula::int_eq(t.clone(), IntTerm::int(0))
                .free_vars()
                .into_iter()
                .map(|(n, _)| n)
                .collect(),
            Replacement::Prop(f) => f.free_vars().into_iter().map(|(n, _)| n).collect(),
        }
    }
}

/// Capture-avoiding substitution of the free occurrences of `var` (of sort
/// `sort`) by `replacement`.
pub fn substitute(f: &Formula, var: &str, sort: Sort, replacement: &Replacement) -> Result<Formula> {
    if replacement.sort() != sort {
        return Err(Error::Sort {
            atom: var.to_string(),
            message: format!(
                "cannot replace {sort} variable `{var}` with a {} term",
                replacement.sort()
            ),
        });
    }
    let mut map = HashMap::new();
    map.insert(var.to_string(), replacement.clone());
    Ok(substitute_many(f, &map))
}

/// Simultaneous capture-avoiding substitution. Sorts are taken from the
/// replacements; occurrences at a different sort are left alone.
pub fn substitute_many(f: &Formula, map: &HashMap<Name, Replacement>) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    let mut danger: HashSet<Name> = HashSet::new();
    for r in map.values() {
        danger.extend(r.free_names());
    }
    let mut avoid: BTreeSet<Name> = f.all_names();
    avoid.extend(danger.iter().cloned());
    avoid.extend(map.keys().cloned());
    subst_rec(f, map, &danger, &mut avoid)
}

fn subst_set(t: &SetTerm, map: &HashMap<Name, Replacement>) -> SetTerm {
    t.map_vars(&mut |v| match map.get(v) {
        Some(Replacement::Set(r)) => r.clone(),
        _ => SetTerm::Var(v.to_string()),
    })
}

fn subst_int(t: &IntTerm, map: &HashMap<Name, Replacement>) -> IntTerm {
    t.map_leaves(&mut |leaf| match leaf {
        IntTerm::Var(v) => match map.get(v) {
            Some(Replacement::Int(r)) => Some(r.clone()),
            _ => None,
        },
        IntTerm::Card(b) => Some(IntTerm::card(subst_set(b, map))),
        _ => None,
    })
}

fn subst_atom(a: &Atom, map: &HashMap<Name, Replacement>) -> Formula {
    Formula::Atom(match a {
        Atom::SetEq(x, y) => Atom::SetEq(subst_set(x, map), subst_set(y, map)),
        Atom::SubsetEq(x, y) => Atom::SubsetEq(subst_set(x, map), subst_set(y, map)),
        Atom::IntEq(x, y) => Atom::IntEq(subst_int(x, map), subst_int(y, map)),
        Atom::IntLt(x, y) => Atom::IntLt(subst_int(x, map), subst_int(y, map)),
        Atom::Dvd(c, t) => Atom::Dvd(c.clone(), subst_int(t, map)),
        Atom::Fin(b) => Atom::Fin(subst_set(b, map)),
        Atom::PropVar(p) => match map.get(p) {
            Some(Replacement::Prop(r)) => return r.clone(),
            _ => Atom::PropVar(p.clone()),
        },
        other => other.clone(),
    })
}

fn subst_rec(
    f: &Formula,
    map: &HashMap<Name, Replacement>,
    danger: &HashSet<Name>,
    avoid: &mut BTreeSet<Name>,
) -> Formula {
    match f {
        Formula::Atom(a) => subst_atom(a, map),
        Formula::Not(a) => Formula::not(subst_rec(a, map, danger, avoid)),
        Formula::And(a, b) => Formula::and(subst_rec(a, map, danger, avoid), subst_rec(b, map, danger, avoid)),
        Formula::Or(a, b) => Formula::or(subst_rec(a, map, danger, avoid), subst_rec(b, map, danger, avoid)),
        Formula::Implies(a, b) => {
            Formula::implies(subst_rec(a, map, danger, avoid), subst_rec(b, map, danger, avoid))
        }
        Formula::Iff(a, b) => Formula::iff(subst_rec(a, map, danger, avoid), subst_rec(b, map, danger, avoid)),
        Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
            let q = if matches!(f, Formula::Exists(..)) { Quant::Exists } else { Quant::Forall };
            // The binder shadows `v`: drop it from the active map.
            let inner: HashMap<Name, Replacement>;
            let map_ref = if map.contains_key(v) {
                inner = map.iter().filter(|(k, _)| *k != v).map(|(k, r)| (k.clone(), r.clone())).collect();
                &inner
            } else {
                map
            };
            if map_ref.is_empty() {
                return f.clone();
            }
            let relevant = map_ref.keys().any(|k| body.is_free(k));
            if !relevant {
                return f.clone();
            }
            if danger.contains(v) {
                let nv = fresh(v, avoid);
                avoid.insert(nv.clone());
                let rename = match s {
                    Sort::Set => Replacement::Set(SetTerm::Var(nv.clone())),
                    Sort::Int => Replacement::Int(IntTerm::Var(nv.clone())),
                    Sort::Prop => Replacement::Prop(Formula::Atom(Atom::PropVar(nv.clone()))),
                };
                let mut rmap = HashMap::new();
                rmap.insert(v.clone(), rename);
                let renamed = subst_rec(body, &rmap, &HashSet::new(), avoid);
                Formula::quant(q, nv, *s, subst_rec(&renamed, map_ref, danger, avoid))
            } else {
                Formula::quant(q, v.clone(), *s, subst_rec(body, map_ref, danger, avoid))
            }
        }
    }
}

/// Renames every bound variable to `_0, _1, ...` in binding (pre-)order so
/// that alpha-equivalent formulas become structurally equal.
pub fn canonical_rename(f: &Formula) -> Formula {
    fn go(f: &Formula, counter: &mut usize) -> Formula {
        match f {
            Formula::Atom(_) => f.clone(),
            Formula::Not(a) => Formula::not(go(a, counter)),
            Formula::And(a, b) => {
                let a = go(a, counter);
                Formula::and(a, go(b, counter))
            }
            Formula::Or(a, b) => {
                let a = go(a, counter);
                Formula::or(a, go(b, counter))
            }
            Formula::Implies(a, b) => {
                let a = go(a, counter);
                Formula::implies(a, go(b, counter))
            }
            Formula::Iff(a, b) => {
                let a = go(a, counter);
                Formula::iff(a, go(b, counter))
            }
            Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
                let q = if matches!(f, Formula::Exists(..)) { Quant::Exists } else { Quant::Forall };
                let nv = format!("_{}", *counter);
                *counter += 1;
                let r = match s {
                    Sort::Set => Replacement::Set(SetTerm::Var(nv.clone())),
                    Sort::Int => Replacement::Int(IntTerm::Var(nv.clone())),
                    Sort::Prop => Replacement::Prop(Formula::Atom(Atom::PropVar(nv.clone()))),
                };
                let mut map = HashMap::new();
                map.insert(v.clone(), r);
                let body = substitute_many(body, &map);
                Formula::quant(q, nv, *s, go(&body, counter))
            }
        }
    }
    go(f, &mut 0)
}

pub fn alpha_equivalent(a: &Formula, b: &Formula) -> bool {
    canonical_rename(a) == canonical_rename(b)
}

// ---------------------------------------------------------------------------
// Metrics

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct Metrics {
    pub size: usize,
    pub alternations: usize,
    pub set_vars: usize,
    pub int_vars: usize,
    pub prop_vars: usize,
}

/// Number of kind changes between adjacent quantifiers of a prefix.
pub fn count_alternations<'a>(kinds: impl IntoIterator<Item = &'a Quant>) -> usize {
    let mut last: Option<Quant> = None;
    let mut alts = 0;
    for &k in kinds {
        if let Some(l) = last {
            if l != k {
                alts += 1;
            }
        }
        last = Some(k);
    }
    alts
}

pub fn measure(f: &Formula) -> Result<Metrics> {
    f.check_sorts(&[])?;
    let prenex = crate::normalize::to_prenex(f);
    let kinds: Vec<Quant> = prenex.prefix.iter().map(|(q, _, _)| *q).collect();
    let (set_vars, int_vars, prop_vars) = f.quantifier_counts();
    Ok(Metrics {
        size: f.size(),
        alternations: count_alternations(&kinds),
        set_vars,
        int_vars,
        prop_vars,
    })
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_formula;

    fn set(names: &[&str]) -> BTreeSet<Name> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn fresh_appends_smallest_suffix() {
        assert_eq!(fresh("l", &set(&[])), "l");
        assert_eq!(fresh("l", &set(&["l"])), "l1");
        assert_eq!(fresh("l", &set(&["l", "l1"])), "l2");
    }

    #[test]
    fn fresh_never_collides() {
        let mut avoid: BTreeSet<Name> = (1..10_000).map(|i| format!("v{i}")).collect();
        avoid.insert("v".into());
        assert_eq!(fresh("v", &avoid), "v10000");
        for gap in [1, 17, 512, 9_999] {
            let mut a = avoid.clone();
            a.remove(&format!("v{gap}"));
            let n = fresh("v", &a);
            assert!(!a.contains(&n));
            assert_eq!(n, format!("v{gap}"));
        }
    }

    #[test]
    fn substitute_free_occurrence() {
        let f = parse_formula("free x:set, k:int. card(x) = k").unwrap();
        let g = substitute(&f, "k", Sort::Int, &Replacement::Int(IntTerm::int(3))).unwrap();
        assert_eq!(g, parse_formula("free x:set. card(x) = 3").unwrap());
    }

    #[test]
    fn substitute_leaves_bound_occurrence() {
        let f = parse_formula("free x:set. ex int k. card(x) = k").unwrap();
        let g = substitute(&f, "k", Sort::Int, &Replacement::Int(IntTerm::int(3))).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn substitute_avoids_capture() {
        let f = parse_formula("free x:set, k:int. ex set y. card(x union y) = k").unwrap();
        let g = substitute(&f, "x", Sort::Set, &Replacement::Set(SetTerm::var("y"))).unwrap();
        match &g {
            Formula::Exists(v, Sort::Set, body) => {
                assert_ne!(v, "y");
                let expected = Formula::int_eq(
                    IntTerm::card(SetTerm::union(SetTerm::var("y"), SetTerm::var(v.clone()))),
                    IntTerm::var("k"),
                );
                assert_eq!(**body, expected);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn substitute_rejects_sort_mismatch() {
        let f = parse_formula("free k:int. k = 1").unwrap();
        assert!(substitute(&f, "k", Sort::Int, &Replacement::Set(SetTerm::Empty)).is_err());
    }

    #[test]
    fn measure_examples() {
        let t = measure(&Formula::tt()).unwrap();
        assert_eq!((t.size, t.alternations), (1, 0));
        let f = parse_formula("ex set y. all int k. card(y) = k").unwrap();
        let m = measure(&f).unwrap();
        assert_eq!(m.alternations, 1);
        assert_eq!((m.set_vars, m.int_vars, m.prop_vars), (1, 1, 0));
    }

    #[test]
    fn sort_clash_is_reported() {
        let f = Formula::and(
            Formula::int_eq(IntTerm::var("a"), IntTerm::int(0)),
            Formula::Atom(Atom::SetEq(SetTerm::var("a"), SetTerm::Empty)),
        );
        let err = f.check_sorts(&[]).unwrap_err();
        assert!(matches!(err, Error::Sort { .. }), "{err}");
    }

    #[test]
    fn canonical_rename_identifies_alpha_variants() {
        let a = parse_formula("all int k. ex set y. card(y) = k").unwrap();
        let b = parse_formula("all int m. ex set z. card(z) = m").unwrap();
        assert!(alpha_equivalent(&a, &b));
        let c = parse_formula("all int m. ex set z. card(z) = m + 1").unwrap();
        assert!(!alpha_equivalent(&a, &c));
    }
}
