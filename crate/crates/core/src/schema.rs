//! Annotated program schemas and their verification conditions.
//!
//! ```text
//! schema    := { "var" decls ";" | "invariant" Name "<=>" formula ";" | procedure }
//! procedure := "procedure" Name [ "(" decls ")" ] [ "maintains" Name {"," Name} ]
//!              [ "requires" formula ] [ "ensures" formula ] "{" stmts "}"
//! stmts     := [ stmt { ";" stmt } [ ";" ] ]
//! stmt      := "choice" "{" stmts "}" "or" "{" stmts "}" { "or" "{" stmts "}" }
//!            | "call" Name | "local" name ":" sort "{" stmts "}"
//!            | "assume" formula | "skip" | name ":=" term | formula
//! ```
//!
//! State variables are the globals plus the locals in scope; `x'` names the
//! post-state copy of `x`. Header parameters are read-only: they have no
//! primed copy and are not part of the frame.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::formula::{fresh, substitute_many, Atom, Formula, IntTerm, Name, Replacement, SetTerm, Sort};
use crate::text::{Parser, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SchemaOptions {
    /// Encode `assume F` as `F & skip` instead of `F => skip`.
    pub assume_conjunctive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    /// Transition relation over the pre- and post-state.
    Formula(Formula),
    Call(Name),
    Seq(Box<Stmt>, Box<Stmt>),
    Choice(Box<Stmt>, Box<Stmt>),
    Local(Name, Sort, Box<Stmt>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proc {
    pub name: Name,
    pub params: Vec<(Name, Sort)>,
    pub maintains: Vec<Name>,
    /// Requires clause with the maintained invariants conjoined.
    pub pre: Formula,
    /// Ensures clause with the primed maintained invariants conjoined.
    pub post: Formula,
    pub body: Stmt,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schema {
    pub vars: Vec<(Name, Sort)>,
    pub invariants: Vec<(Name, Formula)>,
    pub procs: Vec<Proc>,
}

impl Schema {
    pub fn proc(&self, name: &str) -> Option<&Proc> {
        self.procs.iter().find(|p| p.name == name)
    }

    pub fn invariant(&self, name: &str) -> Option<&Formula> {
        self.invariants.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    /// Meaning of a call: `pre => post`.
    pub fn spec(&self, name: &str) -> Result<Formula> {
        let p = self.proc(name).ok_or_else(|| Error::Schema(format!("unknown procedure `{name}`")))?;
        if !p.params.is_empty() {
            return Err(Error::Schema(format!("procedure `{name}` has parameters and cannot be called")));
        }
        Ok(Formula::implies(p.pre.clone(), p.post.clone()))
    }
}

pub fn prime(x: &str) -> Name {
    format!("{x}'")
}

fn var_of(x: &str, sort: Sort) -> Replacement {
    match sort {
        Sort::Set => Replacement::Set(SetTerm::var(x)),
        Sort::Int => Replacement::Int(IntTerm::var(x)),
        Sort::Prop => Replacement::Prop(Formula::Atom(Atom::PropVar(x.to_string()))),
    }
}

fn equation(x: &str, sort: Sort, value: Replacement) -> Formula {
    match (sort, value) {
        (Sort::Set, Replacement::Set(t)) => Formula::Atom(Atom::SetEq(SetTerm::var(x), t)),
        (Sort::Int, Replacement::Int(t)) => Formula::int_eq(IntTerm::var(x), t),
        (_, Replacement::Prop(g)) => Formula::iff(Formula::Atom(Atom::PropVar(x.to_string())), g),
        (s, r) => unreachable!("{s} variable `{x}` assigned a {} term", r.sort()),
    }
}

/// `x' = x` for every state variable.
pub fn skip(state: &[(Name, Sort)]) -> Formula {
    Formula::and_all(state.iter().map(|(x, s)| equation(&prime(x), *s, var_of(x, *s))))
}

/// `x' = t` followed by the frame `y' = y` for every other state variable.
pub fn assign(state: &[(Name, Sort)], x: &str, value: Replacement) -> Formula {
    let sort = value.sort();
    let frame = state.iter().filter(|(y, _)| y != x).map(|(y, s)| equation(&prime(y), *s, var_of(y, *s)));
    Formula::and_all(std::iter::once(equation(&prime(x), sort, value)).chain(frame))
}

/// A reference is a set with at most one element; null is the empty set.
pub fn isref(t: SetTerm) -> Formula {
    Formula::int_le(IntTerm::card(t), IntTerm::int(1))
}

/// Renames every state variable to its primed copy.
fn primed(f: &Formula, state: &[(Name, Sort)]) -> Formula {
    let map: HashMap<Name, Replacement> = state.iter().map(|(x, s)| (x.clone(), var_of(&prime(x), *s))).collect();
    substitute_many(f, &map)
}

// ---------------------------------------------------------------------------
// Parsing

const RESERVED: &[&str] = &[
    "var", "invariant", "procedure", "maintains", "requires", "ensures", "choice", "or", "call", "local",
    "assume", "skip",
];

struct SchemaParser {
    p: Parser,
    opts: SchemaOptions,
    state: Vec<(Name, Sort)>,
    calls: Vec<(Name, SourceSpan)>,
}

impl SchemaParser {
    fn name(&mut self) -> Result<Name> {
        if let Some(w) = RESERVED.iter().find(|w| self.p.at_word(w)) {
            return self.p.error(format!("`{w}` is reserved"));
        }
        let span = self.p.span();
        let n = self.p.ident()?;
        if n.contains('\'') {
            return Err(Error::Parse { span, message: format!("`{n}`: declared names cannot be primed") });
        }
        Ok(n)
    }

    fn declared(&self, n: &str, params: &[(Name, Sort)]) -> bool {
        self.state.iter().chain(params).any(|(x, _)| x == n)
    }

    /// Parses a formula with the given variables in scope.
    fn formula_in(&mut self, scope: &[(Name, Sort)]) -> Result<Formula> {
        for (x, s) in scope {
            self.p.push_scope(x.clone(), *s);
        }
        let f = self.p.formula();
        self.p.pop_scope(scope.len());
        f
    }

    fn pre_scope(&self, params: &[(Name, Sort)]) -> Vec<(Name, Sort)> {
        params.iter().chain(&self.state).cloned().collect()
    }

    fn two_state_scope(&self, params: &[(Name, Sort)]) -> Vec<(Name, Sort)> {
        let mut out = self.pre_scope(params);
        out.extend(self.state.iter().map(|(x, s)| (prime(x), *s)));
        out
    }

    fn stmts(&mut self, params: &[(Name, Sort)]) -> Result<Stmt> {
        let mut items = Vec::new();
        while !self.p.at_sym("}") {
            items.push(self.stmt(params)?);
            if !self.p.eat_sym(";") {
                break;
            }
        }
        let skip = Stmt::Formula(skip(&self.state));
        Ok(items.into_iter().rev().reduce(|acc, s| Stmt::Seq(Box::new(s), Box::new(acc))).unwrap_or(skip))
    }

    fn block(&mut self, params: &[(Name, Sort)]) -> Result<Stmt> {
        self.p.expect_sym("{")?;
        let s = self.stmts(params)?;
        self.p.expect_sym("}")?;
        Ok(s)
    }

    fn stmt(&mut self, params: &[(Name, Sort)]) -> Result<Stmt> {
        if self.p.eat_word("choice") {
            let mut s = self.block(params)?;
            self.p.expect_word("or")?;
            s = Stmt::Choice(Box::new(s), Box::new(self.block(params)?));
            while self.p.eat_word("or") {
                s = Stmt::Choice(Box::new(s), Box::new(self.block(params)?));
            }
            return Ok(s);
        }
        if self.p.eat_word("call") {
            let span = self.p.span();
            let n = self.p.ident()?;
            self.calls.push((n.clone(), span));
            return Ok(Stmt::Call(n));
        }
        if self.p.eat_word("skip") {
            return Ok(Stmt::Formula(skip(&self.state)));
        }
        if self.p.eat_word("local") {
            let span = self.p.span();
            let x = self.name()?;
            if self.declared(&x, params) {
                return Err(Error::Parse { span, message: format!("`{x}` is already declared") });
            }
            self.p.expect_sym(":")?;
            let sort = self.p.sort()?;
            self.state.push((x.clone(), sort));
            let body = self.block(params);
            self.state.pop();
            return Ok(Stmt::Local(x, sort, Box::new(body?)));
        }
        if self.p.eat_word("assume") {
            let f = self.formula_in(&self.two_state_scope(params))?;
            let skip = skip(&self.state);
            return Ok(Stmt::Formula(if self.opts.assume_conjunctive {
                Formula::and(f, skip)
            } else {
                Formula::implies(f, skip)
            }));
        }
        if matches!(self.p.peek_at(1), crate::text::Tok::Sym(":=")) {
            let span = self.p.span();
            let x = self.p.ident()?;
            self.p.expect_sym(":=")?;
            let Some(sort) = self.state.iter().find(|(y, _)| *y == x).map(|(_, s)| *s) else {
                let message = if params.iter().any(|(y, _)| *y == x) {
                    format!("parameter `{x}` is read-only")
                } else {
                    format!("assignment to undeclared variable `{x}`")
                };
                return Err(Error::Parse { span, message });
            };
            let scope = self.pre_scope(params);
            for (y, s) in &scope {
                self.p.push_scope(y.clone(), *s);
            }
            let value = match sort {
                Sort::Set => self.p.set_term().map(Replacement::Set),
                Sort::Int => self.p.int_term().map(Replacement::Int),
                Sort::Prop => self.p.formula().map(Replacement::Prop),
            };
            self.p.pop_scope(scope.len());
            return Ok(Stmt::Formula(assign(&self.state, &x, value?)));
        }
        Ok(Stmt::Formula(self.formula_in(&self.two_state_scope(params))?))
    }

    fn procedure(&mut self, schema: &Schema) -> Result<Proc> {
        let span = self.p.span();
        let name = self.name()?;
        if schema.proc(&name).is_some() {
            return Err(Error::Parse { span, message: format!("procedure `{name}` is declared twice") });
        }
        let mut params = Vec::new();
        if self.p.eat_sym("(") {
            if !self.p.at_sym(")") {
                params = self.p.decls()?;
            }
            self.p.expect_sym(")")?;
            for (x, _) in &params {
                if self.declared(x, &[]) || RESERVED.contains(&x.as_str()) {
                    return Err(Error::Parse { span, message: format!("parameter `{x}` clashes with a declaration") });
                }
            }
        }
        let mut maintains = Vec::new();
        let mut inv = Vec::new();
        if self.p.eat_word("maintains") {
            loop {
                let span = self.p.span();
                let i = self.p.ident()?;
                match schema.invariant(&i) {
                    Some(f) => inv.push(f.clone()),
                    None => return Err(Error::Parse { span, message: format!("unknown invariant `{i}`") }),
                }
                maintains.push(i);
                if !self.p.eat_sym(",") {
                    break;
                }
            }
        }
        let requires = if self.p.eat_word("requires") { Some(self.formula_in(&self.pre_scope(&params))?) } else { None };
        let ensures =
            if self.p.eat_word("ensures") { Some(self.formula_in(&self.two_state_scope(&params))?) } else { None };
        let body = self.block(&params)?;
        self.p.eat_sym(";");
        let pre = Formula::and_all(requires.into_iter().chain(inv.iter().cloned()));
        let post = Formula::and_all(ensures.into_iter().chain(inv.iter().map(|f| primed(f, &self.state))));
        Ok(Proc { name, params, maintains, pre, post, body })
    }

    fn schema(&mut self) -> Result<Schema> {
        let mut schema = Schema::default();
        while !self.p.at_eof() {
            if self.p.eat_word("var") {
                let span = self.p.span();
                for (x, s) in self.p.decls()? {
                    if self.declared(&x, &[]) || x.contains('\'') || RESERVED.contains(&x.as_str()) {
                        return Err(Error::Parse { span, message: format!("cannot declare `{x}`") });
                    }
                    if s == Sort::Prop {
                        return Err(Error::Parse { span, message: format!("`{x}`: state variables are sets or integers") });
                    }
                    self.state.push((x, s));
                }
                self.p.expect_sym(";")?;
            } else if self.p.eat_word("invariant") {
                let span = self.p.span();
                let n = self.name()?;
                if schema.invariant(&n).is_some() {
                    return Err(Error::Parse { span, message: format!("invariant `{n}` is declared twice") });
                }
                self.p.expect_sym("<=>")?;
                let f = self.formula_in(&self.state.clone())?;
                self.p.expect_sym(";")?;
                schema.invariants.push((n, f));
            } else if self.p.eat_word("procedure") {
                let proc = self.procedure(&schema)?;
                schema.procs.push(proc);
            } else {
                return self.p.error(format!("expected `var`, `invariant` or `procedure`, found {}", self.p.peek()));
            }
        }
        for (n, span) in &self.calls {
            match schema.proc(n) {
                None => return Err(Error::Parse { span: *span, message: format!("call to undeclared procedure `{n}`") }),
                Some(p) if !p.params.is_empty() => {
                    return Err(Error::Parse {
                        span: *span,
                        message: format!("procedure `{n}` has parameters and cannot be called"),
                    })
                }
                _ => {}
            }
        }
        schema.vars = std::mem::take(&mut self.state);
        Ok(schema)
    }
}

pub fn parse_schema(text: &str) -> Result<Schema> {
    parse_schema_with(text, SchemaOptions::default())
}

pub fn parse_schema_with(text: &str, opts: SchemaOptions) -> Result<Schema> {
    SchemaParser { p: Parser::new(text)?, opts, state: Vec::new(), calls: Vec::new() }.schema()
}

// ---------------------------------------------------------------------------
// Reduction to formulas

/// Reduces a procedure body over the global state to a transition formula.
pub fn body_to_formula(s: &Stmt, schema: &Schema) -> Result<Formula> {
    reduce(s, schema, &mut schema.vars.clone())
}

fn reduce(s: &Stmt, schema: &Schema, state: &mut Vec<(Name, Sort)>) -> Result<Formula> {
    Ok(match s {
        Stmt::Formula(f) => f.clone(),
        Stmt::Call(p) => {
            // Locals are invisible to the callee and survive the call.
            let locals = &state[schema.vars.len()..];
            Formula::and_all(std::iter::once(schema.spec(p)?).chain((!locals.is_empty()).then(|| skip(locals))))
        }
        Stmt::Choice(a, b) => Formula::or(reduce(a, schema, state)?, reduce(b, schema, state)?),
        Stmt::Local(x, sort, body) => {
            state.push((x.clone(), *sort));
            let f = reduce(body, schema, state);
            state.pop();
            Formula::exists(x.clone(), *sort, Formula::exists(prime(x), *sort, f?))
        }
        Stmt::Seq(a, b) => {
            let f1 = reduce(a, schema, state)?;
            let f2 = reduce(b, schema, state)?;
            let mut avoid: BTreeSet<Name> = f1.all_names();
            avoid.extend(f2.all_names());
            for (x, _) in state.iter() {
                avoid.insert(x.clone());
                avoid.insert(prime(x));
            }
            let mut mid = Vec::new();
            let (mut post_map, mut pre_map) = (HashMap::new(), HashMap::new());
            for (x, sort) in state.iter() {
                let x0 = fresh(&format!("{x}0"), &avoid);
                avoid.insert(x0.clone());
                post_map.insert(prime(x), var_of(&x0, *sort));
                pre_map.insert(x.clone(), var_of(&x0, *sort));
                mid.push((x0, *sort));
            }
            let body = Formula::and(substitute_many(&f1, &post_map), substitute_many(&f2, &pre_map));
            mid.into_iter().rev().fold(body, |acc, (v, s)| Formula::exists(v, s, acc))
        }
    })
}

/// The defining term of `v` in an equation conjunct, if any.
fn definition(c: &Formula, v: &str, sort: Sort) -> Option<Replacement> {
    let Formula::Atom(a) = c else { return None };
    match (a, sort) {
        (Atom::SetEq(SetTerm::Var(x), t), Sort::Set) | (Atom::SetEq(t, SetTerm::Var(x)), Sort::Set)
            if x == v && !t.mentions(v) =>
        {
            Some(Replacement::Set(t.clone()))
        }
        (Atom::IntEq(IntTerm::Var(x), t), Sort::Int) | (Atom::IntEq(t, IntTerm::Var(x)), Sort::Int)
            if x == v && !t.mentions(v) =>
        {
            Some(Replacement::Int(t.clone()))
        }
        _ => None,
    }
}

fn is_variable(r: &Replacement) -> bool {
    matches!(r, Replacement::Set(SetTerm::Var(_)) | Replacement::Int(IntTerm::Var(_)))
}

/// One-point rule `ex v. v = t & A  ~>  A[v := t]` applied to every
/// existential block whose body is a conjunction. Copy equations `v = w`
/// are consumed first so that the meaningful equations survive.
pub fn one_point(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(one_point(a)),
        Formula::And(a, b) => Formula::and(one_point(a), one_point(b)),
        Formula::Or(a, b) => Formula::or(one_point(a), one_point(b)),
        Formula::Implies(a, b) => Formula::implies(one_point(a), one_point(b)),
        Formula::Iff(a, b) => Formula::iff(one_point(a), one_point(b)),
        Formula::Forall(v, s, b) => Formula::forall(v.clone(), *s, one_point(b)),
        Formula::Exists(..) => {
            let mut block = Vec::new();
            let mut body = f;
            while let Formula::Exists(v, s, b) = body {
                block.push((v.clone(), *s));
                body = b;
            }
            let body = one_point(body);
            let mut conj: Vec<Formula> = body.conjuncts().into_iter().cloned().collect();
            let mut kept = Vec::new();
            for (v, s) in block {
                let defs: Vec<(usize, Replacement)> =
                    conj.iter().enumerate().filter_map(|(i, c)| definition(c, &v, s).map(|r| (i, r))).collect();
                let pick = defs.iter().find(|(_, r)| is_variable(r)).or(defs.first()).cloned();
                match pick {
                    Some((i, r)) => {
                        conj.remove(i);
                        let map = HashMap::from([(v, r)]);
                        conj = conj.iter().map(|c| substitute_many(c, &map)).collect();
                    }
                    None => kept.push((v, s)),
                }
            }
            kept.into_iter().rev().fold(Formula::and_all(conj), |acc, (v, s)| Formula::exists(v, s, acc))
        }
    }
}

fn closure(schema: &Schema, proc: &Proc, matrix: Formula) -> Formula {
    let mut vars: Vec<(Name, Sort)> = proc.params.clone();
    for (x, s) in &schema.vars {
        vars.push((x.clone(), *s));
        vars.push((prime(x), *s));
    }
    vars.into_iter().rev().fold(matrix, |acc, (v, s)| Formula::forall(v, s, acc))
}

fn lookup_proc<'a>(schema: &'a Schema, name: &str) -> Result<&'a Proc> {
    schema.proc(name).ok_or_else(|| Error::Schema(format!("unknown procedure `{name}`")))
}

/// `all*. fbody => (pre => post)` exactly as the reduction rules produce it.
pub fn correctness_vc_raw(schema: &Schema, name: &str) -> Result<Formula> {
    let proc = lookup_proc(schema, name)?;
    let body = body_to_formula(&proc.body, schema)?;
    let spec = Formula::implies(proc.pre.clone(), proc.post.clone());
    Ok(closure(schema, proc, Formula::implies(body, spec)))
}

/// `all*. (pre & fbody) => post` with intermediate states removed by the
/// one-point rule where an equation defines them.
pub fn correctness_vc(schema: &Schema, name: &str) -> Result<Formula> {
    let proc = lookup_proc(schema, name)?;
    let body = one_point(&body_to_formula(&proc.body, schema)?);
    let mut hyps: Vec<Formula> = proc.pre.conjuncts().into_iter().cloned().collect();
    hyps.extend(body.conjuncts().into_iter().cloned().filter(|c| *c != Formula::tt()));
    Ok(closure(schema, proc, Formula::implies(Formula::and_all(hyps), proc.post.clone())))
}

/// Verification conditions of every procedure, in declaration order.
pub fn all_vcs(schema: &Schema) -> Result<Vec<(Name, Formula)>> {
    schema.procs.iter().map(|p| Ok((p.name.clone(), correctness_vc(schema, &p.name)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::{decide, DecideOptions};
    use crate::formula::alpha_equivalent;
    use crate::oracle::{oracle_sweep, IntBackend};
    use crate::text::{parse_formula, parse_formula_in, print_formula};

    const INSERT: &str = "
        var content : set;
        var size : int;
        invariant I <=> size = card(content);
        procedure insert(e : set) maintains I
        requires card(e) = 1 & card(e inter content) = 0
        ensures size' > 0
        {
          content := content union e;
          size := size + 1;
        }";

    const INSERT_VC: &str = "
        all set e. all set content. all set content'. all int size. all int size'.
          (card(e) = 1 & card(e inter content) = 0 & size = card(content)
           & content' seteq content union e & size' = size + 1)
          => size' > 0 & size' = card(content')";

    #[test]
    fn insert_pre_conjoins_invariant() {
        let s = parse_schema(INSERT).unwrap();
        let p = s.proc("insert").unwrap();
        let free = [("e".to_string(), Sort::Set), ("content".into(), Sort::Set), ("size".into(), Sort::Int)];
        let expected = parse_formula_in("card(e) = 1 & card(e inter content) = 0 & size = card(content)", &free).unwrap();
        assert_eq!(p.pre, expected);
        assert_eq!(print_formula(&p.post), "0 < size' & size' = card(content')");
    }

    #[test]
    fn insert_vc_matches_hand_written() {
        let s = parse_schema(INSERT).unwrap();
        let vc = correctness_vc(&s, "insert").unwrap();
        let expected = parse_formula(INSERT_VC).unwrap();
        assert!(alpha_equivalent(&vc, &expected), "{vc}");
        assert!(decide(&vc, &DecideOptions::default()).unwrap());
        assert!(decide(&correctness_vc_raw(&s, "insert").unwrap(), &DecideOptions::default()).unwrap());
    }

    #[test]
    fn weakened_ensures_is_refuted() {
        let s = parse_schema(&INSERT.replace("size' > 0", "size' > 1")).unwrap();
        let vc = correctness_vc(&s, "insert").unwrap();
        assert!(!decide(&vc, &DecideOptions::default()).unwrap());
        let sweep = oracle_sweep(&vc, 2, IntBackend::PaExact).unwrap();
        assert_eq!(sweep, vec![(0, true), (1, false), (2, false)]);
    }

    #[test]
    fn assignment_frames_other_globals() {
        let s = parse_schema("var x : int; var c : set; procedure p { x := x + 1 }").unwrap();
        let Stmt::Formula(f) = &s.procs[0].body else { panic!() };
        assert_eq!(print_formula(f), "x' = x + 1 & c' seteq c");
    }

    #[test]
    fn choice_is_disjunction() {
        let s = parse_schema("var x : int; procedure p { choice { x' = 1 } or { x' = 2 } }").unwrap();
        let f = body_to_formula(&s.procs[0].body, &s).unwrap();
        assert_eq!(print_formula(&f), "x' = 1 | x' = 2");
    }

    #[test]
    fn seq_of_skips_is_skip() {
        let s = parse_schema("var x : int; var c : set; procedure p { skip; skip }").unwrap();
        let f = body_to_formula(&s.procs[0].body, &s).unwrap();
        assert_eq!(
            print_formula(&f),
            "ex int x0. ex set c0. x0 = x & c0 seteq c & (x' = x0 & c' seteq c0)"
        );
        let claim = Formula::iff(f.clone(), skip(&s.vars)).close(crate::Quant::Forall);
        let sweep = oracle_sweep(&claim, 3, IntBackend::PaExact).unwrap();
        assert!(sweep.iter().all(|(_, v)| *v));
        assert_eq!(print_formula(&one_point(&f)), "x' = x & c' seteq c");
    }

    #[test]
    fn false_body_is_vacuous() {
        let s = parse_schema("var x : int; procedure p ensures x' = 7 { false }").unwrap();
        assert!(decide(&correctness_vc(&s, "p").unwrap(), &DecideOptions::default()).unwrap());
    }

    #[test]
    fn assume_encodings() {
        let src = "var x : int; procedure p ensures x' = x { assume x > 0 }";
        let paper = parse_schema(src).unwrap();
        let conj = parse_schema_with(src, SchemaOptions { assume_conjunctive: true }).unwrap();
        let Stmt::Formula(f) = &paper.procs[0].body else { panic!() };
        assert_eq!(print_formula(f), "0 < x => x' = x");
        let Stmt::Formula(g) = &conj.procs[0].body else { panic!() };
        assert_eq!(print_formula(g), "0 < x & x' = x");
        let opts = DecideOptions::default();
        assert!(!decide(&correctness_vc(&paper, "p").unwrap(), &opts).unwrap());
        assert!(decide(&correctness_vc(&conj, "p").unwrap(), &opts).unwrap());
    }

    #[test]
    fn calls_use_specs() {
        let src = "
            var x : int;
            procedure inc requires x >= 0 ensures x' = x + 1 { x := x + 1 }
            procedure twice requires x >= 0 ensures x' = x + 2 { call inc; call inc }";
        let s = parse_schema(src).unwrap();
        let opts = DecideOptions::default();
        for (name, vc) in all_vcs(&s).unwrap() {
            assert!(decide(&vc, &opts).unwrap(), "{name}");
            assert!(measure_alternations(&vc) <= 1);
        }
    }

    fn measure_alternations(f: &Formula) -> usize {
        crate::formula::measure(f).unwrap().alternations
    }

    #[test]
    fn locals_are_existential() {
        let src = "var x : int; procedure p ensures x' = x { local t : int { t := x; x := t } }";
        let s = parse_schema(src).unwrap();
        let raw = correctness_vc_raw(&s, "p").unwrap();
        assert!(decide(&raw, &DecideOptions::default()).unwrap());
        assert!(decide(&correctness_vc(&s, "p").unwrap(), &DecideOptions::default()).unwrap());
    }

    #[test]
    fn isref_predicate() {
        let f = parse_formula("all set e. isref(e) <=> card(e) <= 1").unwrap();
        assert!(decide(&f, &DecideOptions::default()).unwrap());
        assert_eq!(isref(SetTerm::var("e")), parse_formula_in("card(e) <= 1", &[("e".into(), Sort::Set)]).unwrap());
    }

    #[test]
    fn errors() {
        for bad in [
            "var x : int; procedure p { call q }",
            "var x : int; procedure p maintains J { skip }",
            "var x : int; procedure p { y := 1 }",
            "var x : int; procedure p(e : set) { e := empty }",
            "var x : int; procedure p { x := empty }",
            "var x : int; procedure p { skip } procedure p { skip }",
            "var x : int; procedure p requires x' = 1 { skip }",
        ] {
            assert!(matches!(parse_schema(bad), Err(Error::Parse { .. })), "{bad}");
        }
    }
}
