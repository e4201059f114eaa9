//! Quantifier elimination for Boolean algebras of finite sets with constant
//! cardinality constraints.
//!
//! Formulas are kept in disjunctive normal form over positive literals
//! `card(b) = k` and `card(b) >= k`; negated literals are expanded into
//! disjunctions of positive ones. Eliminating `ex y` from a conjunction
//! splits every literal mentioning `y` over the cells `s inter y` and
//! `s inter compl(y)` of the cubes `s` of its partner variables, then merges
//! each pair of cells back into a constraint on `s`.

use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::formula::{Atom, Formula, IntTerm, Name, Quant, SetTerm, Sort};
use crate::normalize::{prepare, simplify_set};

/// Largest cardinality constant accepted; larger bounds make the
/// composition enumeration explode and belong to the translation pipeline.
pub const MAX_CONSTANT: u32 = 8;

/// Largest number of conjuncts kept in a normal form.
pub const DNF_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaLiteral {
    CardEq(SetTerm, u32),
    CardGeq(SetTerm, u32),
}

impl BaLiteral {
    pub fn set(&self) -> &SetTerm {
        match self {
            BaLiteral::CardEq(b, _) | BaLiteral::CardGeq(b, _) => b,
        }
    }

    pub fn bound(&self) -> u32 {
        match self {
            BaLiteral::CardEq(_, k) | BaLiteral::CardGeq(_, k) => *k,
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            BaLiteral::CardEq(b, k) => Formula::int_eq(IntTerm::card(b.clone()), IntTerm::int(*k as i64)),
            BaLiteral::CardGeq(b, k) => Formula::int_ge(IntTerm::card(b.clone()), IntTerm::int(*k as i64)),
        }
    }
}

type Conj = Vec<BaLiteral>;
type Dnf = Vec<Conj>;

fn too_big(n: usize) -> Error {
    Error::Resource { what: "normal form size".into(), cost: n as u128, limit: DNF_LIMIT as u128 }
}

/// The negation of a literal as a disjunction of positive literals.
fn negate(lit: &BaLiteral) -> Dnf {
    let b = lit.set();
    let mut out: Dnf = (0..lit.bound()).map(|i| vec![BaLiteral::CardEq(b.clone(), i)]).collect();
    if let BaLiteral::CardEq(_, k) = lit {
        out.push(vec![BaLiteral::CardGeq(b.clone(), k + 1)]);
    }
    out
}

fn dnf_to_formula(d: &Dnf) -> Formula {
    Formula::or_all(d.iter().map(|c| Formula::and_all(c.iter().map(BaLiteral::to_formula))))
}

/// `~(card(b) = k)` becomes `card(b) = 0 | ... | card(b) = k-1 | card(b) >= k+1`
/// and `~(card(b) >= k)` becomes `card(b) = 0 | ... | card(b) = k-1`.
pub fn expand_negative_literal(lit: &BaLiteral) -> Formula {
    dnf_to_formula(&negate(lit))
}

/// Merges the literals of one conjunction that constrain the same set.
/// Returns `None` when they contradict each other.
fn simplify_conj(mut c: Conj) -> Option<Conj> {
    c.sort();
    c.dedup();
    let mut out: Conj = Vec::new();
    for lit in c {
        let b = simplify_set(lit.set());
        let lit = match (&lit, &b) {
            (BaLiteral::CardEq(_, k), SetTerm::Empty) if *k > 0 => return None,
            (BaLiteral::CardGeq(_, k), SetTerm::Empty) if *k > 0 => return None,
            (_, SetTerm::Empty) | (BaLiteral::CardGeq(_, 0), _) => continue,
            (BaLiteral::CardEq(_, k), _) => BaLiteral::CardEq(b, *k),
            (BaLiteral::CardGeq(_, k), _) => BaLiteral::CardGeq(b, *k),
        };
        match out.iter().position(|o| o.set() == lit.set()) {
            None => out.push(lit),
            Some(i) => out[i] = merge(&out[i], &lit)?,
        }
    }
    out.sort();
    Some(out)
}

fn merge(a: &BaLiteral, b: &BaLiteral) -> Option<BaLiteral> {
    use BaLiteral::*;
    match (a, b) {
        (CardEq(s, k1), CardEq(_, k2)) => (k1 == k2).then(|| CardEq(s.clone(), *k1)),
        (CardEq(s, k), CardGeq(_, l)) | (CardGeq(_, l), CardEq(s, k)) => (k >= l).then(|| CardEq(s.clone(), *k)),
        (CardGeq(s, k1), CardGeq(_, k2)) => Some(CardGeq(s.clone(), *k1.max(k2))),
    }
}

/// Drops contradictory, duplicate and subsumed conjunctions.
fn tidy(d: Dnf) -> Dnf {
    let mut cs: Vec<Conj> = d.into_iter().filter_map(simplify_conj).collect();
    cs.sort_by_key(|c| c.len());
    cs.dedup();
    if cs.first().is_some_and(|c| c.is_empty()) {
        return vec![Vec::new()];
    }
    if cs.len() > 2_000 {
        return cs;
    }
    let mut kept: Vec<Conj> = Vec::new();
    for c in cs {
        if !kept.iter().any(|k| k.iter().all(|l| c.contains(l))) {
            kept.push(c);
        }
    }
    kept
}

fn product(a: &Dnf, b: &Dnf) -> Result<Dnf> {
    let n = a.len().saturating_mul(b.len());
    if n > DNF_LIMIT {
        return Err(too_big(n));
    }
    let mut out = Vec::with_capacity(n);
    for x in a {
        for y in b {
            let mut c = x.clone();
            c.extend(y.iter().cloned());
            out.push(c);
        }
    }
    Ok(tidy(out))
}

fn union(mut a: Dnf, b: Dnf) -> Result<Dnf> {
    a.extend(b);
    if a.len() > DNF_LIMIT {
        return Err(too_big(a.len()));
    }
    Ok(tidy(a))
}

fn negate_dnf(d: &Dnf) -> Result<Dnf> {
    let mut acc: Dnf = vec![Vec::new()];
    for c in d {
        let mut alternatives: Dnf = Vec::new();
        for lit in c {
            alternatives.extend(negate(lit));
        }
        acc = product(&acc, &alternatives)?;
    }
    Ok(acc)
}

fn constant(t: &IntTerm) -> Option<i64> {
    match t {
        IntTerm::Const(c) => c.to_i64(),
        _ => None,
    }
}

fn literal_dnf(lit: BaLiteral, positive: bool) -> Dnf {
    if positive {
        vec![vec![lit]]
    } else {
        negate(&lit)
    }
}

fn truth(b: bool) -> Dnf {
    if b {
        vec![Vec::new()]
    } else {
        Vec::new()
    }
}

fn card_of(t: &IntTerm) -> Option<SetTerm> {
    match t {
        IntTerm::Card(b) => Some((**b).clone()),
        IntTerm::MaxCard => Some(SetTerm::Univ),
        _ => None,
    }
}

fn boundary() -> Error {
    Error::Fragment(
        "only cardinalities compared with integer constants are supported here; \
         use the translation pipeline for integer variables and arithmetic"
            .into(),
    )
}

fn atom_dnf(a: &Atom, positive: bool) -> Result<Dnf> {
    // `card(b) = k` (eq) or `card(b) >= k` (not eq), under polarity `pos`.
    let lit = |b: SetTerm, k: i64, eq: bool, pos: bool| -> Dnf {
        let value = match (eq, k) {
            (true, k) if k < 0 => return truth(!pos),
            (false, k) if k <= 0 => return truth(pos),
            (true, k) => BaLiteral::CardEq(b, k as u32),
            (false, k) => BaLiteral::CardGeq(b, k as u32),
        };
        literal_dnf(value, pos)
    };
    Ok(match a {
        Atom::True => truth(positive),
        Atom::False => truth(!positive),
        Atom::IntEq(x, y) => match (card_of(x), constant(x), card_of(y), constant(y)) {
            (Some(b), _, _, Some(k)) | (_, Some(k), Some(b), _) => lit(b, k, true, positive),
            (_, Some(p), _, Some(q)) => truth((p == q) == positive),
            _ => return Err(boundary()),
        },
        Atom::IntLt(x, y) => match (card_of(x), constant(x), card_of(y), constant(y)) {
            // card(b) < k  iff  ~(card(b) >= k)
            (Some(b), _, _, Some(k)) => lit(b, k, false, !positive),
            // k < card(b)  iff  card(b) >= k+1
            (_, Some(k), Some(b), _) => lit(b, k + 1, false, positive),
            (_, Some(p), _, Some(q)) => truth((p < q) == positive),
            _ => return Err(boundary()),
        },
        Atom::PropVar(_) | Atom::Dvd(..) => return Err(boundary()),
        Atom::Fin(_) | Atom::FinU => truth(positive),
        Atom::SetEq(..) | Atom::SubsetEq(..) => return Err(Error::contract("unpurified set relation")),
    })
}

fn formula_dnf(f: &Formula, positive: bool) -> Result<Dnf> {
    match f {
        Formula::Atom(a) => atom_dnf(a, positive),
        Formula::Not(a) => formula_dnf(a, !positive),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (x, y) = (formula_dnf(a, positive)?, formula_dnf(b, positive)?);
            if matches!(f, Formula::And(..)) == positive {
                product(&x, &y)
            } else {
                union(x, y)
            }
        }
        Formula::Implies(a, b) => formula_dnf(&Formula::or(Formula::not((**a).clone()), (**b).clone()), positive),
        Formula::Iff(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            let both = Formula::and(a.clone(), b.clone());
            let neither = Formula::and(Formula::not(a), Formula::not(b));
            formula_dnf(&Formula::or(both, neither), positive)
        }
        Formula::Exists(..) | Formula::Forall(..) => Err(Error::contract("quantifier inside a matrix")),
    }
}

/// All ways of writing `k` as an ordered sum of `parts` naturals.
fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if k == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The cube of `vars` selected by `bits` (bit `i` for `vars[i]`).
fn cube(vars: &[Name], bits: usize) -> SetTerm {
    vars.iter()
        .enumerate()
        .map(|(i, v)| {
            if bits >> i & 1 == 1 {
                SetTerm::var(v.clone())
            } else {
                SetTerm::compl(SetTerm::var(v.clone()))
            }
        })
        .reduce(SetTerm::inter)
        .unwrap_or(SetTerm::Univ)
}

/// Largest number of clamped cube profiles `canonicalize` enumerates.
const PROFILE_LIMIT: usize = 4096;

/// Rewrites a normal form as a union of cube profiles. Every literal only
/// depends on the cardinalities of the cubes of its variables, and a count
/// above the largest bound `K` behaves like `K + 1`, so the profiles with
/// entries in `0..=K` or `>= K+1` that satisfy `d` describe it exactly.
/// Profiles that agree except on one cube, covering all its values, merge.
/// Returns `None` when the profile space is too large.
fn canonicalize(d: &Dnf) -> Option<Dnf> {
    let mut vars: Vec<Name> = Vec::new();
    d.iter().flatten().for_each(|l| l.set().vars_into(&mut vars));
    vars.sort();
    let cubes = 1usize << vars.len();
    let top = d.iter().flatten().map(BaLiteral::bound).max().unwrap_or(0) + 1;
    let values = top as usize + 1;
    let count = u32::try_from(cubes).ok().and_then(|c| values.checked_pow(c))?;
    if count > PROFILE_LIMIT {
        return None;
    }
    // Each literal as the mask of cubes its set covers.
    let mask = |b: &SetTerm| -> Vec<usize> {
        (0..cubes)
            .filter(|bits| b.eval_bits(&|v| vars.iter().position(|w| w == v).is_some_and(|i| bits >> i & 1 == 1)))
            .collect()
    };
    let masks: Vec<Vec<(Vec<usize>, &BaLiteral)>> =
        d.iter().map(|c| c.iter().map(|l| (mask(l.set()), l)).collect()).collect();
    let holds = |p: &[u32], cells: &[usize], lit: &BaLiteral| -> bool {
        let saturated = cells.iter().any(|&c| p[c] == top);
        let n: u32 = cells.iter().map(|&c| p[c]).sum();
        match lit {
            BaLiteral::CardEq(_, k) => !saturated && n == *k,
            BaLiteral::CardGeq(_, k) => saturated || n >= *k,
        }
    };
    let mut kept: BTreeSet<Vec<Option<u32>>> = BTreeSet::new();
    let mut p = vec![0u32; cubes];
    loop {
        if masks.iter().any(|c| c.iter().all(|(cells, l)| holds(&p, cells, l))) {
            kept.insert(p.iter().map(|&v| Some(v)).collect());
        }
        if !odometer(&mut p, top) {
            break;
        }
    }
    for j in 0..cubes {
        let mut groups: std::collections::BTreeMap<Vec<Option<u32>>, Vec<u32>> = Default::default();
        let mut next = BTreeSet::new();
        for mut e in std::mem::take(&mut kept) {
            match e[j].take() {
                None => {
                    next.insert(e);
                }
                Some(v) => groups.entry(e).or_default().push(v),
            }
        }
        for (key, vs) in groups {
            if vs.len() == values {
                next.insert(key);
            } else {
                for v in vs {
                    let mut e = key.clone();
                    e[j] = Some(v);
                    next.insert(e);
                }
            }
        }
        kept = next;
    }
    let out = kept
        .into_iter()
        .map(|e| {
            e.iter()
                .enumerate()
                .filter_map(|(c, v)| {
                    let v = (*v)?;
                    let b = cube(&vars, c);
                    Some(if v == top { BaLiteral::CardGeq(b, top) } else { BaLiteral::CardEq(b, v) })
                })
                .collect()
        })
        .collect();
    Some(tidy(out))
}

fn odometer(v: &mut [u32], max: u32) -> bool {
    for x in v.iter_mut() {
        if *x < max {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

fn literal_count(d: &Dnf) -> usize {
    d.iter().map(Vec::len).sum()
}

/// The smaller of `d` and its profile form.
fn compact(d: Dnf) -> Dnf {
    match canonicalize(&d) {
        Some(c) if literal_count(&c) < literal_count(&d) => c,
        _ => d,
    }
}

/// Eliminates `ex y` from a conjunction of literals that all mention `y`.
pub fn ba_eliminate_innermost(conj: &[BaLiteral], y: &str) -> Result<Formula> {
    if let Some(lit) = conj.iter().find(|l| !l.set().mentions(y)) {
        return Err(Error::contract(format!(
            "literal `{}` does not mention `{y}`",
            crate::text::print_formula(&lit.to_formula())
        )));
    }
    Ok(dnf_to_formula(&eliminate_conj(conj, y)?))
}

fn eliminate_conj(conj: &[BaLiteral], y: &str) -> Result<Dnf> {
    let partners: BTreeSet<Name> =
        conj.iter().flat_map(|l| l.set().vars()).filter(|v| v != y).collect();
    let xs: Vec<Name> = partners.into_iter().collect();
    let n = xs.len();
    // Cell c = 2*j + t: cube j of the partners, inside y when t = 1.
    let in_cell = |b: &SetTerm, c: usize| {
        let (j, t) = (c / 2, c % 2 == 1);
        b.eval_bits(&|v| if v == y { t } else { j >> xs.iter().position(|x| x == v).unwrap() & 1 == 1 })
    };
    let cells = 2usize << n;
    // Literals over cells, as (cell, literal kind, bound).
    let mut acc: Vec<Vec<(usize, bool, u32)>> = vec![Vec::new()];
    for lit in conj {
        let (eq, k) = match lit {
            BaLiteral::CardEq(_, k) => (true, *k),
            BaLiteral::CardGeq(_, k) => (false, *k),
        };
        let inside: Vec<usize> = (0..cells).filter(|&c| in_cell(lit.set(), c)).collect();
        let mut options = Vec::new();
        for parts in compositions(k, inside.len()) {
            options.push(
                inside
                    .iter()
                    .zip(parts)
                    .filter(|&(_, p)| eq || p > 0)
                    .map(|(&c, p)| (c, eq, p))
                    .collect::<Vec<_>>(),
            );
        }
        let n = acc.len().saturating_mul(options.len());
        if n > DNF_LIMIT {
            return Err(too_big(n));
        }
        acc = acc
            .iter()
            .flat_map(|a| {
                options.iter().map(move |o| {
                    let mut c = a.clone();
                    c.extend(o.iter().cloned());
                    c
                })
            })
            .collect();
    }
    let mut out: Dnf = Vec::new();
    'next: for cell_lits in acc {
        // Per cell: Some((exact, k)).
        let mut per_cell: Vec<Option<(bool, u32)>> = vec![None; cells];
        for (c, eq, k) in cell_lits {
            per_cell[c] = Some(match (per_cell[c], eq) {
                (None, _) => (eq, k),
                (Some((true, k1)), true) if k1 == k => (true, k),
                (Some((true, _)), true) => continue 'next,
                (Some((true, k1)), false) if k1 >= k => (true, k1),
                (Some((false, l)), true) if k >= l => (true, k),
                (Some((true, _)), false) | (Some((false, _)), true) => continue 'next,
                (Some((false, k1)), false) => (false, k1.max(k)),
            });
        }
        let mut conj = Vec::new();
        for j in 0..cells / 2 {
            let s = cube(&xs, j);
            match (per_cell[2 * j + 1], per_cell[2 * j]) {
                (None, None) => {}
                (Some((true, k)), Some((true, l))) => conj.push(BaLiteral::CardEq(s, k + l)),
                (a, b) => {
                    let k = a.map_or(0, |x| x.1) + b.map_or(0, |x| x.1);
                    conj.push(BaLiteral::CardGeq(s, k));
                }
            }
        }
        out.push(conj);
    }
    Ok(tidy(out))
}

fn exists(d: &Dnf, y: &str) -> Result<Dnf> {
    let mut out = Vec::new();
    for c in d {
        let (with, without): (Conj, Conj) = c.iter().cloned().partition(|l| l.set().mentions(y));
        if with.is_empty() {
            out.push(without);
            continue;
        }
        for mut e in eliminate_conj(&with, y)? {
            e.extend(without.iter().cloned());
            out.push(e);
        }
        if out.len() > DNF_LIMIT {
            return Err(too_big(out.len()));
        }
    }
    Ok(tidy(out))
}

fn max_constant(f: &Formula) -> u64 {
    fn term(t: &IntTerm) -> u64 {
        match t {
            IntTerm::Const(c) => c.abs().to_u64().unwrap_or(u64::MAX),
            IntTerm::Add(a, b) | IntTerm::Sub(a, b) => term(a).max(term(b)),
            IntTerm::MulConst(c, a) => c.abs().to_u64().unwrap_or(u64::MAX).max(term(a)),
            _ => 0,
        }
    }
    let mut m = 0;
    f.visit_atoms(&mut |a| match a {
        Atom::IntEq(x, y) | Atom::IntLt(x, y) => m = m.max(term(x)).max(term(y)),
        _ => {}
    });
    m
}

/// Eliminates all quantifiers of a pure Boolean-algebra formula. The result
/// is a disjunction of conjunctions of `card(b) = k` and `card(b) >= k`
/// literals over the free set variables, equivalent over finite universes.
pub fn ba_eliminate(f: &Formula) -> Result<Formula> {
    f.check_sorts(&[])?;
    if let Some((v, s)) = f.free_vars().into_iter().find(|(_, s)| *s != Sort::Set) {
        return Err(Error::Fragment(format!("free {s} variable `{v}`; only set variables may be free")));
    }
    let (_, ints, props) = f.quantifier_counts();
    if ints + props > 0 {
        return Err(boundary());
    }
    let k = max_constant(f);
    if k > MAX_CONSTANT as u64 {
        return Err(Error::Fragment(format!(
            "constant {k} exceeds {MAX_CONSTANT}; decide this formula with the translation pipeline"
        )));
    }
    let pf = prepare(f);
    let mut d = formula_dnf(&pf.matrix, true)?;
    for (q, y, _) in pf.prefix.iter().rev() {
        d = match q {
            Quant::Exists => exists(&d, y)?,
            Quant::Forall => negate_dnf(&exists(&negate_dnf(&d)?, y)?)?,
        };
        d = compact(d);
    }
    Ok(dnf_to_formula(&d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn b(s: &str) -> SetTerm {
        SetTerm::var(s)
    }

    #[test]
    fn negative_literals() {
        let show = |l| expand_negative_literal(&l).to_string();
        assert_eq!(show(BaLiteral::CardEq(b("b"), 1)), "card(b) = 0 | card(b) >= 2");
        assert_eq!(show(BaLiteral::CardGeq(b("b"), 0)), "false");
        assert_eq!(show(BaLiteral::CardGeq(b("b"), 2)), "card(b) = 0 | card(b) = 1");
        assert_eq!(show(BaLiteral::CardEq(b("b"), 0)), "card(b) >= 1");
    }

    #[test]
    fn merge_rules() {
        let both = |l: Vec<BaLiteral>| simplify_conj(l);
        assert_eq!(both(vec![BaLiteral::CardEq(b("s"), 1), BaLiteral::CardEq(b("s"), 2)]), None);
        assert_eq!(
            both(vec![BaLiteral::CardEq(b("s"), 3), BaLiteral::CardGeq(b("s"), 2)]),
            Some(vec![BaLiteral::CardEq(b("s"), 3)])
        );
        assert_eq!(both(vec![BaLiteral::CardEq(b("s"), 1), BaLiteral::CardGeq(b("s"), 2)]), None);
        assert_eq!(
            both(vec![BaLiteral::CardGeq(b("s"), 1), BaLiteral::CardGeq(b("s"), 4)]),
            Some(vec![BaLiteral::CardGeq(b("s"), 4)])
        );
    }

    #[test]
    fn pair_rules() {
        let y = SetTerm::var("y");
        let cell = |inside: bool| {
            SetTerm::inter(b("b"), if inside { y.clone() } else { SetTerm::compl(y.clone()) })
        };
        let geq = ba_eliminate_innermost(
            &[BaLiteral::CardGeq(cell(true), 1), BaLiteral::CardGeq(cell(false), 2)],
            "y",
        )
        .unwrap();
        assert_eq!(geq.to_string(), "card(b) >= 3");
        let eq = ba_eliminate_innermost(&[BaLiteral::CardEq(cell(true), 1), BaLiteral::CardEq(cell(false), 2)], "y")
            .unwrap();
        assert_eq!(eq.to_string(), "card(b) = 3");
        let mixed = ba_eliminate_innermost(&[BaLiteral::CardEq(cell(true), 1), BaLiteral::CardGeq(cell(false), 2)], "y")
            .unwrap();
        assert_eq!(mixed.to_string(), "card(b) >= 3");
        assert_eq!(ba_eliminate_innermost(&[BaLiteral::CardEq(y.clone(), 0)], "y").unwrap().to_string(), "true");
        assert!(ba_eliminate_innermost(&[BaLiteral::CardEq(b("b"), 0)], "y").is_err());
    }

    #[test]
    fn eliminates_examples() {
        assert_eq!(
            ba_eliminate(&p("all set x. all set y. (x subseteq y & y subseteq x) => x seteq y")).unwrap().to_string(),
            "true"
        );
        assert_eq!(ba_eliminate(&p("ex set x. card(x) >= 1")).unwrap().to_string(), "card(univ) >= 1");
        assert_eq!(
            ba_eliminate(&p("free y:set. ex set x. x subseteq y & card(x) = 1")).unwrap().to_string(),
            "card(y) >= 1"
        );
    }

    #[test]
    fn rejects_non_constant_bounds() {
        assert!(matches!(ba_eliminate(&p("all int k. ex set x. card(x) = k")), Err(Error::Fragment(_))));
        assert!(matches!(ba_eliminate(&p("ex set x. card(x) = 9")), Err(Error::Fragment(_))));
        assert!(matches!(ba_eliminate(&p("free k:int. ex set x. card(x) = k")), Err(Error::Fragment(_))));
    }

    #[test]
    fn profile_form() {
        use BaLiteral::*;
        let ab = SetTerm::inter(b("a"), b("b"));
        // Complementary bounds cover every profile.
        let d = vec![vec![CardEq(b("a"), 0)], vec![CardGeq(b("a"), 1)]];
        assert_eq!(canonicalize(&d), Some(vec![Vec::new()]));
        // card(a) = 1 & card(a inter b) = 1 pins a to one element, inside b.
        let d = vec![vec![CardEq(b("a"), 1), CardEq(ab, 1)]];
        let c = canonicalize(&d).unwrap();
        let vars = ["a".to_string(), "b".to_string()];
        // Truth of a normal form given the number of elements in each cube.
        let eval = |d: &Dnf, counts: &[u32]| {
            d.iter().any(|c| {
                c.iter().all(|l| {
                    let n: u32 = (0..4)
                        .filter(|&bits| l.set().eval_bits(&|v| bits >> vars.iter().position(|w| w == v).unwrap() & 1 == 1))
                        .map(|bits| counts[bits])
                        .sum();
                    match l {
                        CardEq(_, k) => n == *k,
                        CardGeq(_, k) => n >= *k,
                    }
                })
            })
        };
        let mut counts = vec![0u32; 4];
        loop {
            assert_eq!(eval(&d, &counts), eval(&c, &counts), "cube counts {counts:?}");
            if !odometer(&mut counts, 3) {
                break;
            }
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(3, 0).len(), 0);
        assert_eq!(compositions(4, 3).len(), 15);
    }
}
