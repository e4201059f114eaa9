//! Translation of BAPA sentences into Presburger sentences.
//!
//! Every set quantifier is replaced by a block of quantifiers over the
//! cardinalities of the cubes of a Venn partition. Cube indices are bit
//! strings whose first character belongs to the innermost set variable, so
//! eliminating that variable pairs `1w` with `0w` and the parent cube `w`
//! gets the count `l_w = l_1w + l_0w`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{substitute, substitute_many, Atom, Formula, IntTerm, Name, NameSupply, Quant, Replacement, SetTerm, Sort};
use crate::normalize::{is_purified, prepare, simplify_const, PrenexForm};
use crate::presburger::{pa_decide, pa_qe, replace_maxc};

/// The class of models a validity question ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ModelClass {
    #[default]
    FiniteUniverse,
    InfiniteUniverse,
    AllModels,
}

impl FromStr for ModelClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "finite" => Ok(ModelClass::FiniteUniverse),
            "infinite" => Ok(ModelClass::InfiniteUniverse),
            "all" => Ok(ModelClass::AllModels),
            _ => Err(format!("unknown model class `{s}` (expected finite, infinite or all)")),
        }
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelClass::FiniteUniverse => "finite",
            ModelClass::InfiniteUniverse => "infinite",
            ModelClass::AllModels => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    /// Translate the whole sentence, then decide the Presburger result.
    #[default]
    Alpha,
    /// Eliminate innermost-first, running Presburger elimination after
    /// every step.
    Interleaved,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "alpha" => Ok(Strategy::Alpha),
            "interleaved" => Ok(Strategy::Interleaved),
            _ => Err(format!("unknown strategy `{s}` (expected alpha or interleaved)")),
        }
    }
}

/// Cube indices of length `e` in partition order.
pub fn cube_list(e: usize) -> Vec<String> {
    let mut list = vec![String::new()];
    for _ in 0..e {
        list = list.iter().flat_map(|w| [format!("1{w}"), format!("0{w}")]).collect();
    }
    list
}

/// Which integer (and, for infinite universes, propositional) variable
/// stands for which cube.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartitionNaming {
    /// Quantified set variables, outermost first.
    pub set_vars: Vec<Name>,
    pub counts: BTreeMap<String, Name>,
    pub finiteness: BTreeMap<String, Name>,
}

impl PartitionNaming {
    /// Set variable addressed by character `j` of a cube index of length `e`.
    pub fn set_var_at(&self, e: usize, j: usize) -> &str {
        &self.set_vars[e - 1 - j]
    }

    /// The cube as an intersection of variables and complements.
    pub fn cube(&self, w: &str) -> SetTerm {
        let e = w.len();
        w.chars()
            .enumerate()
            .map(|(j, c)| {
                let v = SetTerm::var(self.set_var_at(e, j));
                if c == '1' {
                    v
                } else {
                    SetTerm::compl(v)
                }
            })
            .reduce(SetTerm::inter)
            .unwrap_or(SetTerm::Univ)
    }

    /// Whether cube `w` (of full length) lies inside `b`.
    fn covers(&self, b: &SetTerm, w: &str) -> bool {
        let e = w.len();
        let bits = w.as_bytes();
        b.eval_bits(&|v| {
            let i = self.set_vars.iter().position(|s| s == v).expect("set variable outside the prefix");
            bits[e - 1 - i] == b'1'
        })
    }

    fn count(&self, w: &str) -> IntTerm {
        if w.is_empty() {
            IntTerm::MaxCard
        } else {
            IntTerm::var(self.counts[w].clone())
        }
    }
}

/// Intermediate state: the prefix still to process, the current cubes and
/// the Presburger formula built so far.
#[derive(Debug, Clone)]
pub struct AlphaState {
    pub remaining: Vec<(Quant, Name, Sort)>,
    pub cubes: Vec<String>,
    pub g: Formula,
    pub naming: PartitionNaming,
    /// Elimination step (1 = innermost set variable) binding each count.
    pub depths: HashMap<Name, usize>,
    infinite: bool,
    finu: Name,
    supply: NameSupply,
}

impl AlphaState {
    fn prop(&self, w: &str) -> Formula {
        let name = if w.is_empty() { &self.finu } else { &self.naming.finiteness[w] };
        Formula::Atom(Atom::PropVar(name.clone()))
    }

    fn fin_of(&self, b: &SetTerm) -> Formula {
        Formula::and_all(self.cubes.iter().filter(|w| self.naming.covers(b, w)).map(|w| self.prop(w)))
    }

    fn sum_of(&self, b: &SetTerm) -> (Vec<String>, IntTerm) {
        let ws: Vec<String> = self.cubes.iter().filter(|w| self.naming.covers(b, w)).cloned().collect();
        let sum = IntTerm::sum(ws.iter().map(|w| self.naming.count(w)));
        (ws, sum)
    }

    /// Case split of an atom on the finiteness of each set it measures:
    /// an infinite set has cardinality zero.
    fn split_cards(&self, atom: &Atom, cards: &[SetTerm]) -> Formula {
        let Some((b, rest)) = cards.split_first() else {
            return Formula::Atom(atom.clone());
        };
        let (ws, sum) = self.sum_of(b);
        let finite = replace_card(atom, b, &sum);
        if ws.is_empty() {
            return self.split_cards(&finite, rest);
        }
        let cond = Formula::and_all(ws.iter().map(|w| self.prop(w)));
        let infinite = replace_card(atom, b, &IntTerm::int(0));
        Formula::or(
            Formula::and(cond.clone(), self.split_cards(&finite, rest)),
            Formula::and(Formula::not(cond), self.split_cards(&infinite, rest)),
        )
    }

    fn translate_atom(&self, a: &Atom) -> Result<Formula> {
        Ok(match a {
            Atom::SetEq(..) | Atom::SubsetEq(..) => {
                return Err(Error::contract(format!(
                    "unpurified atom `{}` reached the partition step",
                    crate::text::print_atom(a)
                )))
            }
            Atom::Fin(b) if self.infinite => self.fin_of(b),
            Atom::FinU if self.infinite => self.fin_of(&SetTerm::Univ),
            Atom::Fin(_) | Atom::FinU => Formula::tt(),
            Atom::IntEq(..) | Atom::IntLt(..) | Atom::Dvd(..) => {
                let a = orient(a);
                if self.infinite {
                    let mut cards = Vec::new();
                    for_each_term(&a, &mut |t| collect_cards(t, &mut cards));
                    self.split_cards(&a, &cards)
                } else {
                    Formula::Atom(map_terms(&a, &mut |t| {
                        t.map_leaves(&mut |leaf| match leaf {
                            IntTerm::Card(b) => Some(self.sum_of(b).1),
                            _ => None,
                        })
                    }))
                }
            }
            other => Formula::Atom(other.clone()),
        })
    }
}

/// Equalities put the cardinality side on the left.
fn orient(a: &Atom) -> Atom {
    match a {
        Atom::IntEq(x, y) if !x.has_card() && y.has_card() => Atom::IntEq(y.clone(), x.clone()),
        other => other.clone(),
    }
}

fn for_each_term(a: &Atom, f: &mut dyn FnMut(&IntTerm)) {
    match a {
        Atom::IntEq(x, y) | Atom::IntLt(x, y) => {
            f(x);
            f(y);
        }
        Atom::Dvd(_, t) => f(t),
        _ => {}
    }
}

fn map_terms(a: &Atom, f: &mut dyn FnMut(&IntTerm) -> IntTerm) -> Atom {
    match a {
        Atom::IntEq(x, y) => Atom::IntEq(f(x), f(y)),
        Atom::IntLt(x, y) => Atom::IntLt(f(x), f(y)),
        Atom::Dvd(c, t) => Atom::Dvd(c.clone(), f(t)),
        other => other.clone(),
    }
}

fn collect_cards(t: &IntTerm, out: &mut Vec<SetTerm>) {
    match t {
        IntTerm::Card(b) => {
            if !out.contains(b) {
                out.push((**b).clone());
            }
        }
        IntTerm::Add(a, b) | IntTerm::Sub(a, b) => {
            collect_cards(a, out);
            collect_cards(b, out);
        }
        IntTerm::MulConst(_, a) => collect_cards(a, out),
        _ => {}
    }
}

fn replace_card(a: &Atom, b: &SetTerm, by: &IntTerm) -> Atom {
    map_terms(a, &mut |t| {
        t.map_leaves(&mut |leaf| match leaf {
            IntTerm::Card(c) if **c == *b => Some(by.clone()),
            _ => None,
        })
    })
}

fn try_map_atoms(f: &Formula, g: &mut dyn FnMut(&Atom) -> Result<Formula>) -> Result<Formula> {
    let mut err = None;
    let out = f.map_atoms(&mut |a| match g(a) {
        Ok(x) => x,
        Err(e) => {
            err.get_or_insert(e);
            Formula::tt()
        }
    });
    err.map_or(Ok(out), Err)
}

fn nonneg(v: &str) -> Formula {
    Formula::int_ge(IntTerm::var(v), IntTerm::int(0))
}

/// Wraps `body` in a guarded block: `ex l. l >= 0 & ...` or
/// `all l. l >= 0 => ...`, followed by plain propositional quantifiers.
fn guarded_block(q: Quant, counts: &[Name], props: &[Name], body: Formula) -> Formula {
    let body = props.iter().rev().fold(body, |acc, p| Formula::quant(q, p.clone(), Sort::Prop, acc));
    counts.iter().rev().fold(body, |acc, l| {
        let inner = match q {
            Quant::Exists => Formula::and(nonneg(l), acc),
            Quant::Forall => Formula::implies(nonneg(l), acc),
        };
        Formula::quant(q, l.clone(), Sort::Int, inner)
    })
}

/// Set relations over possibly infinite sets: `a subseteq b` holds iff
/// `a inter compl(b)` is finite and has cardinality zero.
fn purify_infinite(f: &Formula) -> Formula {
    let empty = |d: SetTerm| {
        Formula::and(Formula::int_eq(IntTerm::card(d.clone()), IntTerm::int(0)), Formula::Atom(Atom::Fin(d)))
    };
    let sub = |a: &SetTerm, b: &SetTerm| empty(SetTerm::inter(a.clone(), SetTerm::compl(b.clone())));
    f.map_atoms(&mut |a| match a {
        Atom::SubsetEq(x, y) => sub(x, y),
        Atom::SetEq(x, y) => Formula::and(sub(x, y), sub(y, x)),
        other => Formula::Atom(other.clone()),
    })
}

fn name_supply(f: &Formula) -> NameSupply {
    let mut supply = NameSupply::new(f.all_names());
    supply.reserve(crate::presburger::MAXC);
    supply
}

/// Replaces the cardinality atoms of the matrix by sums over the cubes of
/// all quantified set variables.
pub fn introduce_partition(pf: &PrenexForm, infinite: bool) -> Result<AlphaState> {
    if !is_purified(&pf.matrix) {
        return Err(Error::contract("matrix still contains set relations; purify it first"));
    }
    let mut supply = name_supply(&pf.to_formula());
    let set_vars: Vec<Name> = pf.prefix.iter().filter(|(_, _, s)| *s == Sort::Set).map(|(_, v, _)| v.clone()).collect();
    let cubes = cube_list(set_vars.len());
    let mut naming = PartitionNaming { set_vars, ..Default::default() };
    if !naming.set_vars.is_empty() {
        for w in &cubes {
            naming.counts.insert(w.clone(), supply.fresh(&format!("l{w}")));
            if infinite {
                naming.finiteness.insert(w.clone(), supply.fresh(&format!("p{w}")));
            }
        }
    }
    let finu = supply.fresh("finu");
    let mut st = AlphaState {
        remaining: pf.prefix.clone(),
        cubes,
        g: Formula::tt(),
        naming,
        depths: HashMap::new(),
        infinite,
        finu,
        supply,
    };
    st.g = try_map_atoms(&pf.matrix, &mut |a| st.translate_atom(a))?;
    Ok(st)
}

/// Consumes the innermost remaining quantifier.
pub fn alpha_step(mut st: AlphaState) -> Result<AlphaState> {
    let (q, v, sort) = st.remaining.pop().ok_or_else(|| Error::contract("no quantifier left to eliminate"))?;
    if sort != Sort::Set {
        st.g = Formula::quant(q, v, sort, st.g);
        return Ok(st);
    }
    let e = st.cubes[0].len();
    if e == 0 || st.naming.set_var_at(e, 0) != v {
        return Err(Error::contract(format!("set variable `{v}` is out of partition order")));
    }
    let depth = st.naming.set_vars.len() - e + 1;
    let parents = cube_list(e - 1);
    if e > 1 {
        for w in &parents {
            let l = st.supply.fresh(&format!("l{w}"));
            st.naming.counts.insert(w.clone(), l);
            if st.infinite {
                let p = st.supply.fresh(&format!("p{w}"));
                st.naming.finiteness.insert(w.clone(), p);
            }
        }
    }
    let defs = Formula::and_all(parents.iter().map(|w| {
        let (one, zero) = (format!("1{w}"), format!("0{w}"));
        let def = Formula::int_eq(
            st.naming.count(w),
            IntTerm::add(st.naming.count(&one), st.naming.count(&zero)),
        );
        if st.infinite {
            let both = Formula::and(st.prop(&one), st.prop(&zero));
            Formula::and(Formula::implies(both.clone(), def), Formula::iff(st.prop(w), both))
        } else {
            def
        }
    }));
    let counts: Vec<Name> = st.cubes.iter().map(|w| st.naming.counts[w].clone()).collect();
    let props: Vec<Name> = if st.infinite {
        st.cubes.iter().map(|w| st.naming.finiteness[w].clone()).collect()
    } else {
        Vec::new()
    };
    for l in &counts {
        st.depths.insert(l.clone(), depth);
    }
    let body = match q {
        Quant::Exists => Formula::and(defs, st.g),
        Quant::Forall => Formula::implies(defs, st.g),
    };
    st.g = guarded_block(q, &counts, &props, body);
    st.cubes = parents;
    Ok(st)
}

/// The result of translating one sentence.
#[derive(Debug, Clone)]
pub struct Translation {
    /// The Presburger formula for the requested model class. For finite
    /// universes `MAXC` is left free; see [`Translation::sentence`].
    pub formula: Formula,
    /// The translation before instantiating `MAXC` and universe finiteness.
    pub open: Formula,
    /// Propositional variable standing for the finiteness of the universe,
    /// when the infinite-universe translation was used.
    pub finu: Option<Name>,
    pub mode: ModelClass,
    pub depths: HashMap<Name, usize>,
    pub naming: PartitionNaming,
}

impl Translation {
    /// The closed sentence whose validity answers the question:
    /// `all k. k >= 0 => formula[MAXC := k]` for finite universes.
    pub fn sentence(&self) -> Formula {
        match self.mode {
            ModelClass::FiniteUniverse => close_maxc(&self.formula),
            _ => self.formula.clone(),
        }
    }

    /// The translation evaluated in a finite universe of `u` elements.
    pub fn at_universe(&self, u: u64) -> Formula {
        self.instantiate(&IntTerm::int(u as i64), true)
    }

    /// Validity over all finite universes, whatever the mode of translation.
    pub fn finite_sentence(&self) -> Formula {
        close_maxc(&self.instantiate(&IntTerm::MaxCard, true))
    }

    fn instantiate(&self, maxc: &IntTerm, finite: bool) -> Formula {
        instantiate(&self.open, self.finu.as_deref(), maxc, finite)
    }
}

fn instantiate(open: &Formula, finu: Option<&str>, maxc: &IntTerm, finite: bool) -> Formula {
    let f = match finu {
        Some(p) => {
            let value = if finite { Formula::tt() } else { Formula::ff() };
            substitute(open, p, Sort::Prop, &Replacement::Prop(value)).expect("sorts agree")
        }
        None => open.clone(),
    };
    replace_maxc(&f, maxc)
}

/// `all k. k >= 0 => f[MAXC := k]`.
pub fn close_maxc(f: &Formula) -> Formula {
    let k = name_supply(f).fresh("k");
    Formula::forall(k.clone(), Sort::Int, Formula::implies(nonneg(&k), replace_maxc(f, &IntTerm::var(k.clone()))))
}

fn require_sentence(f: &Formula) -> Result<()> {
    f.check_sorts(&[])?;
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(Error::FreeVariables(free.into_iter().map(|(n, _)| n).collect()));
    }
    Ok(())
}

/// Translates a BAPA sentence into an equivalent Presburger formula for the
/// given model class. With `optimize`, each set variable is partitioned
/// only together with the set variables it shares a cardinality with
/// (finite universes only; the flag is ignored otherwise).
pub fn alpha_translate(f: &Formula, mode: ModelClass, optimize: bool) -> Result<Translation> {
    require_sentence(f)?;
    let infinite = mode != ModelClass::FiniteUniverse;
    let pf = if infinite { prepare(&purify_infinite(f)) } else { prepare(f) };
    if optimize && !infinite {
        let open = scoped_alpha(&pf)?;
        return Ok(Translation {
            formula: open.clone(),
            open,
            finu: None,
            mode,
            depths: HashMap::new(),
            naming: PartitionNaming::default(),
        });
    }
    let mut st = introduce_partition(&pf, infinite)?;
    while !st.remaining.is_empty() {
        st = alpha_step(st)?;
    }
    let finu = infinite.then(|| st.finu.clone());
    let formula = match mode {
        ModelClass::FiniteUniverse => st.g.clone(),
        ModelClass::InfiniteUniverse => instantiate(&st.g, finu.as_deref(), &IntTerm::int(0), false),
        ModelClass::AllModels => Formula::and(
            instantiate(&st.g, finu.as_deref(), &IntTerm::int(0), false),
            close_maxc(&instantiate(&st.g, finu.as_deref(), &IntTerm::MaxCard, true)),
        ),
    };
    Ok(Translation { formula, open: st.g, finu, mode, depths: st.depths, naming: st.naming })
}

// ---------------------------------------------------------------------------
// Scoped partitions

/// Set variables sharing a cardinality term with `y`, other than `y`.
pub fn partition_scope(g: &Formula, y: &str) -> BTreeSet<Name> {
    let mut scope = BTreeSet::new();
    g.visit_atoms(&mut |a| {
        for_each_term(a, &mut |t| {
            let mut cards = Vec::new();
            collect_cards(t, &mut cards);
            for b in cards.iter().filter(|b| b.mentions(y)) {
                scope.extend(b.vars().into_iter().filter(|v| v != y));
            }
        })
    });
    scope
}

/// One set-elimination step over an explicit cube scope: every cardinality
/// selected by `replace` is split over the cubes of `y` and `scope`
/// (innermost first), and the block of counts is tied to the cardinalities
/// of the cubes of `scope` alone.
fn scoped_step(
    q: Quant,
    y: &Name,
    scope: &[Name],
    g: &Formula,
    replace: &dyn Fn(&SetTerm) -> bool,
    supply: &mut NameSupply,
) -> Formula {
    // naming.set_vars is outermost first; y is innermost.
    let mut vars: Vec<Name> = scope.iter().rev().cloned().collect();
    vars.push(y.clone());
    let naming = PartitionNaming { set_vars: vars.clone(), ..Default::default() };
    let children = cube_list(vars.len());
    let counts: Vec<Name> = children.iter().map(|w| supply.fresh(&format!("l{w}"))).collect();
    let count_of: HashMap<&str, &Name> = children.iter().map(|w| w.as_str()).zip(counts.iter()).collect();
    let body = g.map_atoms(&mut |a| {
        Formula::Atom(map_terms(a, &mut |t| {
            t.map_leaves(&mut |leaf| match leaf {
                IntTerm::Card(b) if replace(b) => Some(IntTerm::sum(
                    children.iter().filter(|w| naming.covers(b, w)).map(|w| IntTerm::var(count_of[w.as_str()].clone())),
                )),
                _ => None,
            })
        }))
    });
    let parent_naming = PartitionNaming { set_vars: vars[..vars.len() - 1].to_vec(), ..Default::default() };
    let defs = Formula::and_all(cube_list(scope.len()).iter().map(|w| {
        let parent = if w.is_empty() { IntTerm::MaxCard } else { IntTerm::card(parent_naming.cube(w)) };
        Formula::int_eq(
            parent,
            IntTerm::add(
                IntTerm::var(count_of[format!("1{w}").as_str()].clone()),
                IntTerm::var(count_of[format!("0{w}").as_str()].clone()),
            ),
        )
    }));
    let body = match q {
        Quant::Exists => Formula::and(defs, body),
        Quant::Forall => Formula::implies(defs, body),
    };
    guarded_block(q, &counts, &[], body)
}

/// Cardinalities of variable-free set terms: the universe or nothing.
fn ground_cards(f: &Formula) -> Formula {
    f.map_atoms(&mut |a| {
        Formula::Atom(map_terms(a, &mut |t| {
            t.map_leaves(&mut |leaf| match leaf {
                IntTerm::Card(b) if b.vars().is_empty() => {
                    Some(if b.eval_bits(&|_| false) { IntTerm::MaxCard } else { IntTerm::int(0) })
                }
                _ => None,
            })
        }))
    })
}

fn finite_matrix(m: &Formula) -> Formula {
    ground_cards(&m.map_atoms(&mut |a| match a {
        Atom::Fin(_) | Atom::FinU => Formula::tt(),
        other => Formula::Atom(orient(other)),
    }))
}

fn order_scope(prefix: &[(Quant, Name, Sort)], scope: &BTreeSet<Name>) -> Vec<Name> {
    prefix.iter().filter(|(_, v, _)| scope.contains(v)).map(|(_, v, _)| v.clone()).collect()
}

fn scoped_alpha(pf: &PrenexForm) -> Result<Formula> {
    let mut supply = name_supply(&pf.to_formula());
    let mut g = finite_matrix(&pf.matrix);
    for (i, (q, v, sort)) in pf.prefix.iter().enumerate().rev() {
        if *sort != Sort::Set {
            g = Formula::quant(*q, v.clone(), *sort, g);
            continue;
        }
        let scope = order_scope(&pf.prefix[..i], &partition_scope(&g, v));
        g = scoped_step(*q, v, &scope, &g, &|b| b.mentions(v), &mut supply);
    }
    Ok(ground_cards(&g))
}

// ---------------------------------------------------------------------------
// Interleaved elimination

/// Presburger elimination on a formula whose cardinality terms are treated
/// as opaque integer parameters.
fn qe_opaque(f: &Formula, supply: &mut NameSupply) -> Result<Formula> {
    let mut cards: Vec<SetTerm> = Vec::new();
    f.visit_atoms(&mut |a| for_each_term(a, &mut |t| collect_cards(t, &mut cards)));
    let names: Vec<Name> = cards.iter().map(|_| supply.fresh("c")).collect();
    let abstracted = f.map_atoms(&mut |a| {
        Formula::Atom(map_terms(a, &mut |t| {
            t.map_leaves(&mut |leaf| match leaf {
                IntTerm::Card(b) => cards.iter().position(|c| **b == *c).map(|i| IntTerm::var(names[i].clone())),
                _ => None,
            })
        }))
    });
    let q = pa_qe(&abstracted)?;
    let back: HashMap<Name, Replacement> = names
        .iter()
        .zip(&cards)
        .map(|(n, b)| (n.clone(), Replacement::Int(IntTerm::card(b.clone()))))
        .collect();
    Ok(simplify_const(&substitute_many(&q, &back)))
}

/// Eliminates all quantifiers of a sentence innermost-first, leaving a
/// quantifier-free formula over `MAXC` (finite universes).
pub fn interleaved_matrix(f: &Formula, optimize: bool) -> Result<Formula> {
    require_sentence(f)?;
    let pf = prepare(f);
    let mut supply = name_supply(&pf.to_formula());
    let mut m = finite_matrix(&pf.matrix);
    for (i, (q, v, sort)) in pf.prefix.iter().enumerate().rev() {
        m = match sort {
            Sort::Prop => {
                let case = |b: bool| {
                    let value = Replacement::Prop(if b { Formula::tt() } else { Formula::ff() });
                    substitute(&m, v, Sort::Prop, &value)
                };
                let (t, e) = (case(true)?, case(false)?);
                simplify_const(&match q {
                    Quant::Exists => Formula::or(t, e),
                    Quant::Forall => Formula::and(t, e),
                })
            }
            Sort::Int => qe_opaque(&Formula::quant(*q, v.clone(), Sort::Int, m), &mut supply)?,
            Sort::Set => {
                let scope: BTreeSet<Name> = if optimize {
                    partition_scope(&m, v)
                } else {
                    pf.prefix[..i].iter().filter(|(_, _, s)| *s == Sort::Set).map(|(_, x, _)| x.clone()).collect()
                };
                let scope = order_scope(&pf.prefix[..i], &scope);
                let replace = |b: &SetTerm| !optimize || b.mentions(v);
                let block = scoped_step(*q, v, &scope, &m, &replace, &mut supply);
                ground_cards(&qe_opaque(&block, &mut supply)?)
            }
        };
    }
    Ok(ground_cards(&m))
}

/// Decides a sentence over finite universes with the interleaved strategy.
pub fn alpha_interleaved(f: &Formula, mode: ModelClass, optimize: bool) -> Result<bool> {
    if mode != ModelClass::FiniteUniverse {
        return Err(Error::contract("the interleaved strategy only supports finite universes"));
    }
    pa_decide(&close_maxc(&interleaved_matrix(f, optimize)?))
}

// ---------------------------------------------------------------------------
// Decision

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub mode: ModelClass,
    pub strategy: Strategy,
    pub optimize: bool,
    /// How free variables are closed before deciding.
    pub open_as: Quant,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            mode: ModelClass::FiniteUniverse,
            strategy: Strategy::Alpha,
            optimize: false,
            open_as: Quant::Forall,
        }
    }
}

/// Validity of a BAPA formula over the selected model class. Free variables
/// are closed first.
pub fn decide(f: &Formula, opts: &DecideOptions) -> Result<bool> {
    f.check_sorts(&[])?;
    let f = f.close(opts.open_as);
    match opts.strategy {
        Strategy::Alpha => pa_decide(&alpha_translate(&f, opts.mode, opts.optimize)?.sentence()),
        Strategy::Interleaved => alpha_interleaved(&f, opts.mode, opts.optimize),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::to_prenex;
    use crate::presburger::pa_eval_bounded;
    use crate::text::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn valid(s: &str, mode: ModelClass) -> bool {
        decide(&p(s), &DecideOptions { mode, ..Default::default() }).unwrap()
    }

    #[test]
    fn cube_order() {
        assert_eq!(cube_list(0), vec![""]);
        assert_eq!(cube_list(2), vec!["11", "01", "10", "00"]);
        assert_eq!(cube_list(3)[..4], ["111", "011", "101", "001"]);
    }

    #[test]
    fn union_splits_into_cubes() {
        let f = p("all set x. all set y. card(x union y) = 3");
        let st = introduce_partition(&prepare(&f), false).unwrap();
        assert_eq!(st.g.to_string(), "l11 + l01 + l10 = 3");
    }

    #[test]
    fn universe_without_set_variables_is_maxc() {
        let st = introduce_partition(&prepare(&p("card(univ) = 2")), false).unwrap();
        assert_eq!(st.g.to_string(), "MAXC = 2");
    }

    #[test]
    fn existential_set_step() {
        let st = introduce_partition(&prepare(&p("ex set y. card(y) = 1")), false).unwrap();
        let st = alpha_step(st).unwrap();
        assert!(st.remaining.is_empty());
        assert_eq!(
            st.g.to_string(),
            "ex int l1. l1 >= 0 & (ex int l0. l0 >= 0 & (MAXC = l1 + l0 & l1 = 1))"
        );
        assert_eq!(st.depths["l1"], 1);
    }

    #[test]
    fn integer_steps_move_the_quantifier() {
        let st = introduce_partition(&prepare(&p("all set x. ex int k. card(x) = k")), false).unwrap();
        let st = alpha_step(st).unwrap();
        assert_eq!(st.g.to_string(), "ex int k. l1 = k");
        let st = alpha_step(st).unwrap();
        assert!(st.g.to_string().starts_with("all int l1. l1 >= 0 => (all int l0. l0 >= 0 => MAXC = l1 + l0 => "));
        assert!(alpha_step(st).is_err());
    }

    #[test]
    fn singleton_needs_a_nonempty_universe() {
        let f = p("ex set y. card(y) = 1");
        assert!(!valid("ex set y. card(y) = 1", ModelClass::FiniteUniverse));
        let t = alpha_translate(&f, ModelClass::FiniteUniverse, false).unwrap();
        let at = |u| pa_decide(&t.at_universe(u)).unwrap();
        assert_eq!((at(0), at(1), at(2)), (false, true, true));
    }

    #[test]
    fn alternations_are_preserved() {
        let f = p("ex set y. all int k. all set x. card(x inter y) = k | k < 0");
        let t = alpha_translate(&f, ModelClass::FiniteUniverse, false).unwrap();
        assert_eq!(to_prenex(&t.formula).alternations(), to_prenex(&f).alternations());
    }

    #[test]
    fn infinite_universe_fixtures() {
        assert!(!valid("fin(univ)", ModelClass::InfiniteUniverse));
        assert!(valid("~fin(univ) => card(univ) = 0", ModelClass::InfiniteUniverse));
        assert!(valid("~fin(univ) => card(univ) = 0", ModelClass::AllModels));
        assert!(!valid("ex set y. ~fin(y)", ModelClass::AllModels));
        assert!(valid("ex set y. ~fin(y)", ModelClass::InfiniteUniverse));
        assert!(valid("all set x. fin(x)", ModelClass::FiniteUniverse));
        assert!(valid("all set x. ex set y. ~fin(x) => ~fin(y) & ~fin(compl(y) inter x)", ModelClass::InfiniteUniverse));
    }

    #[test]
    fn infinite_sets_have_cardinality_zero() {
        assert!(valid("all set x. ~fin(x) => card(x) = 0", ModelClass::AllModels));
        assert!(!valid("all set x. card(x) = 0 => x seteq empty", ModelClass::InfiniteUniverse));
        assert!(valid("all set x. card(x) = 0 => x seteq empty", ModelClass::FiniteUniverse));
    }

    #[test]
    fn scope_only_collects_partners() {
        let g = p("free x1:set, x2:set, x3:set, y:set, k:int, m:int. card(x1 inter y) = k & card(x2) = m & card(x3) = 0");
        assert_eq!(partition_scope(&g, "y"), BTreeSet::from(["x1".to_string()]));
    }

    #[test]
    fn optimized_translation_agrees() {
        for s in [
            "all set x. all set y. ex set z. card(z inter x) = card(y) | card(x) < 2",
            "ex set y. card(y) = 1",
            "all set x. all set y. x subseteq y | y subseteq x",
        ] {
            let f = p(s);
            let plain = alpha_translate(&f, ModelClass::FiniteUniverse, false).unwrap();
            let opt = alpha_translate(&f, ModelClass::FiniteUniverse, true).unwrap();
            for u in 0..4 {
                assert_eq!(
                    pa_decide(&plain.at_universe(u)).unwrap(),
                    pa_decide(&opt.at_universe(u)).unwrap(),
                    "{s} at {u}"
                );
            }
        }
    }

    #[test]
    fn interleaved_examples() {
        let f = p("ex set y. card(y) = 1");
        let m = interleaved_matrix(&f, false).unwrap();
        assert!(m.is_quantifier_free());
        let at = |u: i64| pa_decide(&replace_maxc(&m, &IntTerm::int(u))).unwrap();
        assert!(!at(0) && at(2));
        let g = interleaved_matrix(&p("all set x. card(x) >= 1"), true).unwrap();
        assert!(!pa_decide(&replace_maxc(&g, &IntTerm::int(1))).unwrap());
        assert!(alpha_interleaved(&p("all set x. x subseteq x"), ModelClass::FiniteUniverse, false).unwrap());
        assert!(alpha_interleaved(&f, ModelClass::AllModels, false).is_err());
    }

    #[test]
    fn open_formulas_are_closed() {
        let f = p("free x:set. x subseteq x");
        assert!(decide(&f, &DecideOptions::default()).unwrap());
        let g = p("free x:set. card(x) = 1");
        assert!(!decide(&g, &DecideOptions::default()).unwrap());
        let exists = DecideOptions { open_as: Quant::Exists, mode: ModelClass::FiniteUniverse, ..Default::default() };
        assert!(!decide(&g, &exists).unwrap(), "fails in the empty universe");
        assert!(matches!(alpha_translate(&g, ModelClass::FiniteUniverse, false), Err(Error::FreeVariables(_))));
    }

    #[test]
    fn bounded_evaluation_examples() {
        let t = alpha_translate(&p("all set x. x seteq x"), ModelClass::FiniteUniverse, false).unwrap();
        assert!(pa_eval_bounded(&t.formula, &t.depths, 3).unwrap().0);
        let t = alpha_translate(
            &p("all set x. all set y. x subseteq y | y subseteq x"),
            ModelClass::FiniteUniverse,
            false,
        )
        .unwrap();
        assert!(!pa_eval_bounded(&t.formula, &t.depths, 2).unwrap().0);
        assert!(pa_eval_bounded(&t.formula, &t.depths, 1).unwrap().0);
        assert!(pa_eval_bounded(&t.formula, &HashMap::new(), 1).is_err());
    }
}
