//! Generic front end shared by the elimination procedures: negation normal
//! form, prenex form, purification of set relations into cardinality atoms,
//! and constant simplification.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::formula::{fresh, Atom, Formula, IntTerm, Name, Quant, Replacement, SetTerm, Sort};

/// A quantifier prefix (outermost first) over a quantifier-free matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrenexForm {
    pub prefix: Vec<(Quant, Name, Sort)>,
    pub matrix: Formula,
}

impl PrenexForm {
    pub fn to_formula(&self) -> Formula {
        self.prefix
            .iter()
            .rev()
            .fold(self.matrix.clone(), |acc, (q, v, s)| Formula::quant(*q, v.clone(), *s, acc))
    }

    pub fn alternations(&self) -> usize {
        crate::formula::count_alternations(self.prefix.iter().map(|(q, _, _)| q))
    }
}

pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, true)
}

fn nnf(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(a) => match (a, positive) {
            (_, true) => f.clone(),
            (Atom::True, false) => Formula::ff(),
            (Atom::False, false) => Formula::tt(),
            (_, false) => Formula::not(f.clone()),
        },
        Formula::Not(a) => nnf(a, !positive),
        Formula::And(a, b) => {
            if positive {
                Formula::and(nnf(a, true), nnf(b, true))
            } else {
                Formula::or(nnf(a, false), nnf(b, false))
            }
        }
        Formula::Or(a, b) => {
            if positive {
                Formula::or(nnf(a, true), nnf(b, true))
            } else {
                Formula::and(nnf(a, false), nnf(b, false))
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                Formula::or(nnf(a, false), nnf(b, true))
            } else {
                Formula::and(nnf(a, true), nnf(b, false))
            }
        }
        Formula::Iff(a, b) => {
            let ab = Formula::implies((**a).clone(), (**b).clone());
            let ba = Formula::implies((**b).clone(), (**a).clone());
            nnf(&Formula::and(ab, ba), positive)
        }
        Formula::Exists(v, s, body) => {
            let q = if positive { Quant::Exists } else { Quant::Forall };
            Formula::quant(q, v.clone(), *s, nnf(body, positive))
        }
        Formula::Forall(v, s, body) => {
            let q = if positive { Quant::Forall } else { Quant::Exists };
            Formula::quant(q, v.clone(), *s, nnf(body, positive))
        }
    }
}

/// Expands `<=>` nodes that contain quantifiers; quantifier-free ones stay.
fn expand_quantified_iff(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(expand_quantified_iff(a)),
        Formula::And(a, b) => Formula::and(expand_quantified_iff(a), expand_quantified_iff(b)),
        Formula::Or(a, b) => Formula::or(expand_quantified_iff(a), expand_quantified_iff(b)),
        Formula::Implies(a, b) => Formula::implies(expand_quantified_iff(a), expand_quantified_iff(b)),
        Formula::Iff(a, b) => {
            let (a, b) = (expand_quantified_iff(a), expand_quantified_iff(b));
            if a.is_quantifier_free() && b.is_quantifier_free() {
                Formula::iff(a, b)
            } else {
                Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
            }
        }
        Formula::Exists(v, s, body) => Formula::exists(v.clone(), *s, expand_quantified_iff(body)),
        Formula::Forall(v, s, body) => Formula::forall(v.clone(), *s, expand_quantified_iff(body)),
    }
}

fn var_replacement(name: &str, sort: Sort) -> Replacement {
    match sort {
        Sort::Set => Replacement::Set(SetTerm::var(name)),
        Sort::Int => Replacement::Int(IntTerm::var(name)),
        Sort::Prop => Replacement::Prop(Formula::Atom(Atom::PropVar(name.to_string()))),
    }
}

/// Renames binders so that every bound name is distinct and differs from
/// every free name. The first binder of each name keeps it.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut used: BTreeSet<Name> = f.free_vars().into_iter().map(|(n, _)| n).collect();
    let mut avoid = f.all_names();
    rename_rec(f, &mut used, &mut avoid)
}

fn rename_rec(f: &Formula, used: &mut BTreeSet<Name>, avoid: &mut BTreeSet<Name>) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(a) => Formula::not(rename_rec(a, used, avoid)),
        Formula::And(a, b) => {
            let a = rename_rec(a, used, avoid);
            Formula::and(a, rename_rec(b, used, avoid))
        }
        Formula::Or(a, b) => {
            let a = rename_rec(a, used, avoid);
            Formula::or(a, rename_rec(b, used, avoid))
        }
        Formula::Implies(a, b) => {
            let a = rename_rec(a, used, avoid);
            Formula::implies(a, rename_rec(b, used, avoid))
        }
        Formula::Iff(a, b) => {
            let a = rename_rec(a, used, avoid);
            Formula::iff(a, rename_rec(b, used, avoid))
        }
        Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
            let q = if matches!(f, Formula::Exists(..)) { Quant::Exists } else { Quant::Forall };
            if used.contains(v) {
                let nv = fresh(v, avoid);
                avoid.insert(nv.clone());
                used.insert(nv.clone());
                let mut map = HashMap::new();
                map.insert(v.clone(), var_replacement(&nv, *s));
                let body = crate::formula::substitute_many(body, &map);
                Formula::quant(q, nv, *s, rename_rec(&body, used, avoid))
            } else {
                used.insert(v.clone());
                Formula::quant(q, v.clone(), *s, rename_rec(body, used, avoid))
            }
        }
    }
}

/// Prenex form: quantifiers are hoisted outside-in, left to right. Kinds flip
/// under negation and in the antecedent of an implication; `<=>` is expanded
/// only when it contains quantifiers. Quantifier-free structure is kept.
pub fn to_prenex(f: &Formula) -> PrenexForm {
    let f = rename_apart(&expand_quantified_iff(f));
    let (prefix, matrix) = pull(&f);
    PrenexForm { prefix, matrix }
}

type Prefix = Vec<(Quant, Name, Sort)>;

fn flipped(p: Prefix) -> Prefix {
    p.into_iter().map(|(q, v, s)| (q.dual(), v, s)).collect()
}

fn pull(f: &Formula) -> (Prefix, Formula) {
    match f {
        Formula::Atom(_) => (Vec::new(), f.clone()),
        Formula::Not(a) => {
            let (p, m) = pull(a);
            (flipped(p), Formula::not(m))
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let (pa, ma) = pull(a);
            let (pb, mb) = pull(b);
            let pa = if matches!(f, Formula::Implies(..)) { flipped(pa) } else { pa };
            let mut prefix = pa;
            prefix.extend(pb);
            let m = match f {
                Formula::And(..) => Formula::and(ma, mb),
                Formula::Or(..) => Formula::or(ma, mb),
                Formula::Implies(..) => Formula::implies(ma, mb),
                _ => Formula::iff(ma, mb),
            };
            (prefix, m)
        }
        Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
            let q = if matches!(f, Formula::Exists(..)) { Quant::Exists } else { Quant::Forall };
            let (p, m) = pull(body);
            let mut prefix = vec![(q, v.clone(), *s)];
            prefix.extend(p);
            (prefix, m)
        }
    }
}

/// Rewrites `b1 subseteq b2` into `card(b1 inter compl(b2)) = 0` and
/// `b1 seteq b2` into the conjunction of both inclusions.
pub fn purify_atoms(f: &Formula) -> Formula {
    fn subset(a: &SetTerm, b: &SetTerm) -> Formula {
        Formula::int_eq(
            IntTerm::card(SetTerm::inter(a.clone(), SetTerm::compl(b.clone()))),
            IntTerm::int(0),
        )
    }
    f.map_atoms(&mut |a| match a {
        Atom::SubsetEq(x, y) => subset(x, y),
        Atom::SetEq(x, y) => Formula::and(subset(x, y), subset(y, x)),
        other => Formula::Atom(other.clone()),
    })
}

pub fn simplify_set(t: &SetTerm) -> SetTerm {
    match t {
        SetTerm::Var(_) | SetTerm::Empty | SetTerm::Univ => t.clone(),
        SetTerm::Compl(a) => match simplify_set(a) {
            SetTerm::Empty => SetTerm::Univ,
            SetTerm::Univ => SetTerm::Empty,
            a => SetTerm::compl(a),
        },
        SetTerm::Union(a, b) => match (simplify_set(a), simplify_set(b)) {
            (SetTerm::Univ, _) | (_, SetTerm::Univ) => SetTerm::Univ,
            (SetTerm::Empty, x) | (x, SetTerm::Empty) => x,
            (x, y) => SetTerm::union(x, y),
        },
        SetTerm::Inter(a, b) => match (simplify_set(a), simplify_set(b)) {
            (SetTerm::Empty, _) | (_, SetTerm::Empty) => SetTerm::Empty,
            (SetTerm::Univ, x) | (x, SetTerm::Univ) => x,
            (x, y) => SetTerm::inter(x, y),
        },
    }
}

pub fn simplify_int(t: &IntTerm) -> IntTerm {
    match t {
        IntTerm::Var(_) | IntTerm::Const(_) | IntTerm::MaxCard => t.clone(),
        IntTerm::Card(b) => match simplify_set(b) {
            SetTerm::Empty => IntTerm::Const(BigInt::zero()),
            b => IntTerm::card(b),
        },
        IntTerm::Add(a, b) => match (simplify_int(a), simplify_int(b)) {
            (IntTerm::Const(x), IntTerm::Const(y)) => IntTerm::Const(x + y),
            (x, y) => IntTerm::add(x, y),
        },
        IntTerm::Sub(a, b) => match (simplify_int(a), simplify_int(b)) {
            (IntTerm::Const(x), IntTerm::Const(y)) => IntTerm::Const(x - y),
            (x, y) => IntTerm::sub(x, y),
        },
        IntTerm::MulConst(c, a) => match simplify_int(a) {
            IntTerm::Const(x) => IntTerm::Const(c * x),
            x => IntTerm::MulConst(c.clone(), Box::new(x)),
        },
    }
}

fn simplify_atom(a: &Atom) -> Formula {
    let truth = |b: bool| if b { Formula::tt() } else { Formula::ff() };
    match a {
        Atom::IntEq(x, y) => match (simplify_int(x), simplify_int(y)) {
            (IntTerm::Const(p), IntTerm::Const(q)) => truth(p == q),
            (x, y) => Formula::int_eq(x, y),
        },
        Atom::IntLt(x, y) => match (simplify_int(x), simplify_int(y)) {
            (IntTerm::Const(p), IntTerm::Const(q)) => truth(p < q),
            (x, y) => Formula::int_lt(x, y),
        },
        Atom::Dvd(c, t) => match simplify_int(t) {
            IntTerm::Const(v) => truth(v.mod_floor(c).is_zero()),
            t => Formula::Atom(Atom::Dvd(c.clone(), t)),
        },
        Atom::SetEq(x, y) => Formula::Atom(Atom::SetEq(simplify_set(x), simplify_set(y))),
        Atom::SubsetEq(x, y) => Formula::Atom(Atom::SubsetEq(simplify_set(x), simplify_set(y))),
        Atom::Fin(b) => match simplify_set(b) {
            SetTerm::Empty => Formula::tt(),
            b => Formula::Atom(Atom::Fin(b)),
        },
        other => Formula::Atom(other.clone()),
    }
}

fn is_true(f: &Formula) -> bool {
    matches!(f, Formula::Atom(Atom::True))
}

fn is_false(f: &Formula) -> bool {
    matches!(f, Formula::Atom(Atom::False))
}

/// Absorbs `empty`/`univ` in set terms, folds ground integer arithmetic and
/// ground comparisons, propagates `true`/`false` through the connectives, and
/// re-associates `&`/`|` chains to the left.
pub fn simplify_const(f: &Formula) -> Formula {
    match f {
        Formula::Atom(a) => simplify_atom(a),
        Formula::Not(a) => match simplify_const(a) {
            x if is_true(&x) => Formula::ff(),
            x if is_false(&x) => Formula::tt(),
            x => Formula::not(x),
        },
        Formula::And(..) => {
            let mut parts = Vec::new();
            collect(f, true, &mut parts);
            let mut kept = Vec::new();
            for p in parts {
                let p = simplify_const(p);
                if is_false(&p) {
                    return Formula::ff();
                }
                if !is_true(&p) {
                    flatten_into(p, true, &mut kept);
                }
            }
            Formula::and_all(kept)
        }
        Formula::Or(..) => {
            let mut parts = Vec::new();
            collect(f, false, &mut parts);
            let mut kept = Vec::new();
            for p in parts {
                let p = simplify_const(p);
                if is_true(&p) {
                    return Formula::tt();
                }
                if !is_false(&p) {
                    flatten_into(p, false, &mut kept);
                }
            }
            Formula::or_all(kept)
        }
        Formula::Implies(a, b) => {
            let (a, b) = (simplify_const(a), simplify_const(b));
            if is_false(&a) || is_true(&b) {
                Formula::tt()
            } else if is_true(&a) {
                b
            } else if is_false(&b) {
                simplify_const(&Formula::not(a))
            } else {
                Formula::implies(a, b)
            }
        }
        Formula::Iff(a, b) => {
            let (a, b) = (simplify_const(a), simplify_const(b));
            match (is_true(&a), is_false(&a), is_true(&b), is_false(&b)) {
                (true, _, _, _) => b,
                (_, _, true, _) => a,
                (_, true, _, _) => simplify_const(&Formula::not(b)),
                (_, _, _, true) => simplify_const(&Formula::not(a)),
                _ => Formula::iff(a, b),
            }
        }
        Formula::Exists(v, s, body) | Formula::Forall(v, s, body) => {
            let b = simplify_const(body);
            // Every sort has a nonempty domain.
            if is_true(&b) || is_false(&b) {
                return b;
            }
            let q = if matches!(f, Formula::Exists(..)) { Quant::Exists } else { Quant::Forall };
            Formula::quant(q, v.clone(), *s, b)
        }
    }
}

fn collect<'a>(f: &'a Formula, conj: bool, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) if conj => {
            collect(a, conj, out);
            collect(b, conj, out);
        }
        Formula::Or(a, b) if !conj => {
            collect(a, conj, out);
            collect(b, conj, out);
        }
        other => out.push(other),
    }
}

fn flatten_into(f: Formula, conj: bool, out: &mut Vec<Formula>) {
    match f {
        Formula::And(a, b) if conj => {
            flatten_into(*a, conj, out);
            flatten_into(*b, conj, out);
        }
        Formula::Or(a, b) if !conj => {
            flatten_into(*a, conj, out);
            flatten_into(*b, conj, out);
        }
        other => out.push(other),
    }
}

/// Prenex form with a purified, constant-simplified matrix: the common entry
/// point of the translation procedures.
pub fn prepare(f: &Formula) -> PrenexForm {
    let pf = to_prenex(f);
    PrenexForm { prefix: pf.prefix, matrix: simplify_const(&purify_atoms(&pf.matrix)) }
}

/// True when every set term occurs directly under `card` or `fin`.
pub fn is_purified(f: &Formula) -> bool {
    let mut ok = true;
    f.visit_atoms(&mut |a| ok &= !matches!(a, Atom::SetEq(..) | Atom::SubsetEq(..)));
    ok
}
