//! Quantifier elimination over the integers. Quantifiers are removed
//! bottom-up; each existential is eliminated from the disjuncts of a DNF,
//! universals go through `¬∃¬`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::linear::{simplify_clause, simplify_conj, Lin, Lit, Var};

/// Quantifier-free formulas in negation normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qf {
    True,
    False,
    Lit(Lit),
    And(Vec<Qf>),
    Or(Vec<Qf>),
}

/// Formulas with quantifiers, negations already pushed to literals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pf {
    Qf(Qf),
    And(Vec<Pf>),
    Or(Vec<Pf>),
    Exists(Var, Box<Pf>),
    Forall(Var, Box<Pf>),
}

impl Pf {
    pub fn size(&self) -> usize {
        match self {
            Pf::Qf(q) => q.size(),
            Pf::And(cs) | Pf::Or(cs) => 1 + cs.iter().map(Pf::size).sum::<usize>(),
            Pf::Exists(_, b) | Pf::Forall(_, b) => 1 + b.size(),
        }
    }
}

impl Qf {
    pub fn lit(l: Lit) -> Qf {
        match l.normalize() {
            super::linear::Norm::True => Qf::True,
            super::linear::Norm::False => Qf::False,
            super::linear::Norm::Lit(l) => Qf::Lit(l),
        }
    }

    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Qf::True | Qf::False => false,
            Qf::Lit(l) => l.mentions(v),
            Qf::And(cs) | Qf::Or(cs) => cs.iter().any(|c| c.mentions(v)),
        }
    }

    pub fn negate(&self) -> Qf {
        match self {
            Qf::True => Qf::False,
            Qf::False => Qf::True,
            Qf::Lit(l) => Qf::lit(l.negate()),
            Qf::And(cs) => Qf::Or(cs.iter().map(Qf::negate).collect()),
            Qf::Or(cs) => Qf::And(cs.iter().map(Qf::negate).collect()),
        }
    }

    pub fn eval(&self, env: &dyn Fn(Var) -> Option<BigInt>) -> Option<bool> {
        Some(match self {
            Qf::True => true,
            Qf::False => false,
            Qf::Lit(l) => l.eval(env)?,
            Qf::And(cs) => {
                for c in cs {
                    if !c.eval(env)? {
                        return Some(false);
                    }
                }
                true
            }
            Qf::Or(cs) => {
                for c in cs {
                    if c.eval(env)? {
                        return Some(true);
                    }
                }
                false
            }
        })
    }

    pub fn size(&self) -> usize {
        match self {
            Qf::True | Qf::False | Qf::Lit(_) => 1,
            Qf::And(cs) | Qf::Or(cs) => 1 + cs.iter().map(Qf::size).sum::<usize>(),
        }
    }
}

pub fn mk_and(children: Vec<Qf>) -> Qf {
    let mut flat = Vec::with_capacity(children.len());
    for c in children {
        match c {
            Qf::True => {}
            Qf::False => return Qf::False,
            Qf::And(cs) => flat.extend(cs),
            other => flat.push(other),
        }
    }
    let (lits, mut rest): (Vec<Qf>, Vec<Qf>) = flat.into_iter().partition(|c| matches!(c, Qf::Lit(_)));
    let lits = lits.into_iter().map(|c| match c {
        Qf::Lit(l) => l,
        _ => unreachable!(),
    });
    let lits = match simplify_conj(lits) {
        None => return Qf::False,
        Some(ls) => ls,
    };
    rest.sort();
    rest.dedup();
    let mut all: Vec<Qf> = lits.into_iter().map(Qf::Lit).collect();
    all.extend(rest);
    match all.len() {
        0 => Qf::True,
        1 => all.pop().unwrap(),
        _ => Qf::And(all),
    }
}

/// Conjunction with constant folding and the literal children merged.
pub fn pf_and(cs: Vec<Pf>) -> Pf {
    let (mut qfs, mut rest) = (Vec::new(), Vec::new());
    for c in cs {
        match c {
            Pf::Qf(q) => qfs.push(q),
            Pf::And(inner) => inner.into_iter().for_each(|i| match i {
                Pf::Qf(q) => qfs.push(q),
                other => rest.push(other),
            }),
            other => rest.push(other),
        }
    }
    match mk_and(qfs) {
        Qf::False => Pf::Qf(Qf::False),
        Qf::True if rest.is_empty() => Pf::Qf(Qf::True),
        Qf::True if rest.len() == 1 => rest.pop().unwrap(),
        Qf::True => Pf::And(rest),
        q if rest.is_empty() => Pf::Qf(q),
        q => {
            rest.insert(0, Pf::Qf(q));
            Pf::And(rest)
        }
    }
}

/// Disjunction with constant folding and the literal children merged.
pub fn pf_or(cs: Vec<Pf>) -> Pf {
    let (mut qfs, mut rest) = (Vec::new(), Vec::new());
    for c in cs {
        match c {
            Pf::Qf(q) => qfs.push(q),
            Pf::Or(inner) => inner.into_iter().for_each(|i| match i {
                Pf::Qf(q) => qfs.push(q),
                other => rest.push(other),
            }),
            other => rest.push(other),
        }
    }
    match mk_or(qfs) {
        Qf::True => Pf::Qf(Qf::True),
        Qf::False if rest.is_empty() => Pf::Qf(Qf::False),
        Qf::False if rest.len() == 1 => rest.pop().unwrap(),
        Qf::False => Pf::Or(rest),
        q if rest.is_empty() => Pf::Qf(q),
        q => {
            rest.insert(0, Pf::Qf(q));
            Pf::Or(rest)
        }
    }
}

pub fn mk_or(children: Vec<Qf>) -> Qf {
    let mut flat = Vec::with_capacity(children.len());
    for c in children {
        match c {
            Qf::False => {}
            Qf::True => return Qf::True,
            Qf::Or(cs) => flat.extend(cs),
            other => flat.push(other),
        }
    }
    let (lits, mut rest): (Vec<Qf>, Vec<Qf>) = flat.into_iter().partition(|c| matches!(c, Qf::Lit(_)));
    let lits = lits.into_iter().map(|c| match c {
        Qf::Lit(l) => l,
        _ => unreachable!(),
    });
    let lits = match simplify_clause(lits) {
        None => return Qf::True,
        Some(ls) => ls,
    };
    rest.sort();
    rest.dedup();
    let mut all: Vec<Qf> = lits.into_iter().map(Qf::Lit).collect();
    all.extend(rest);
    match all.len() {
        0 => Qf::False,
        1 => all.pop().unwrap(),
        _ => Qf::Or(all),
    }
}

/// Cost guard for DNF expansion: number of conjunctions kept at once.
pub const DNF_LIMIT: usize = 200_000;

/// Disjunctive normal form with every conjunction simplified; unsatisfiable
/// conjunctions are dropped. `None` when the expansion exceeds [`DNF_LIMIT`].
pub fn dnf(q: &Qf) -> Option<Vec<Vec<Lit>>> {
    dnf_limited(q, DNF_LIMIT)
}

fn dnf_limited(q: &Qf, limit: usize) -> Option<Vec<Vec<Lit>>> {
    Some(match q {
        Qf::True => vec![Vec::new()],
        Qf::False => Vec::new(),
        Qf::Lit(l) => match simplify_conj([l.clone()]) {
            Some(c) => vec![c],
            None => Vec::new(),
        },
        Qf::Or(cs) => {
            let mut out = Vec::new();
            for c in cs {
                out.extend(dnf_limited(c, limit)?);
                if out.len() > limit {
                    return None;
                }
            }
            out.sort();
            out.dedup();
            out
        }
        Qf::And(cs) => {
            let mut acc: Vec<Vec<Lit>> = vec![Vec::new()];
            // Literal children first keeps intermediate products pruned.
            let mut order: Vec<&Qf> = cs.iter().collect();
            order.sort_by_key(|c| !matches!(c, Qf::Lit(_)));
            for c in order {
                let d = dnf_limited(c, limit)?;
                let mut next = Vec::with_capacity(acc.len() * d.len().max(1));
                for a in &acc {
                    for b in &d {
                        if let Some(conj) = simplify_conj(a.iter().chain(b.iter()).cloned()) {
                            next.push(conj);
                        }
                    }
                    if next.len() > limit {
                        return None;
                    }
                }
                next.sort();
                next.dedup();
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    })
}

fn conj_to_qf(lits: Vec<Lit>) -> Qf {
    mk_and(lits.into_iter().map(Qf::Lit).collect())
}

/// Cost guard for a single elimination: period times test points.
pub const INSTANCE_LIMIT: u128 = 1_000_000;

/// Error raised when an elimination step exceeds the expansion guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blowup {
    pub cost: u128,
}

/// Eliminates `∃x` from a conjunction of literals that all mention `x`.
pub fn eliminate_in_conj(x: Var, lits: &[Lit]) -> Result<Qf, Blowup> {
    if lits.is_empty() {
        return Ok(Qf::True);
    }
    // Scale every coefficient of x to ±M, then read M·x as a new x.
    let m = lits.iter().fold(BigInt::one(), |acc, l| acc.lcm(l.lin().coeff(x).expect("mentions x")));
    let mut scaled: Vec<Lit> = lits
        .iter()
        .map(|l| {
            let a = l.lin().coeff(x).expect("mentions x").clone();
            let k = &m / a.abs();
            let sign = if a.is_negative() { -BigInt::one() } else { BigInt::one() };
            let t = l.lin().scale(&k).with_coeff(x, sign);
            match l {
                Lit::Lt(_) => Lit::Lt(t),
                Lit::Eq(_) => Lit::Eq(t),
                Lit::Ne(_) => Lit::Ne(t),
                Lit::Dvd(c, _) => Lit::Dvd(c * &k, t),
                Lit::NDvd(c, _) => Lit::NDvd(c * &k, t),
            }
        })
        .collect();
    if !m.is_one() {
        scaled.push(Lit::Dvd(m.clone(), Lin::var(x)));
    }

    // An equality gives the value of x directly.
    if let Some(pos) = scaled.iter().position(|l| matches!(l, Lit::Eq(_))) {
        let t = scaled[pos].lin();
        let a = t.coeff(x).expect("mentions x").clone();
        // a·x + r = 0 with a = ±1  ⇒  x = -a·r
        let value = t.without(x).scale(&-a);
        let rest: Vec<Lit> = scaled
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pos)
            .map(|(_, l)| l.subst(x, &value))
            .collect();
        return Ok(match simplify_conj(rest) {
            Some(c) => conj_to_qf(c),
            None => Qf::False,
        });
    }

    // Divisibility literals with x get coefficient +1; collect the period.
    let mut delta = BigInt::one();
    let mut lower: Vec<Lin> = Vec::new();
    let mut upper: Vec<Lin> = Vec::new();
    let mut has_lower_bound = false;
    let mut has_upper_bound = false;
    let mut normalized = Vec::with_capacity(scaled.len());
    for l in scaled {
        let l = match l {
            Lit::Dvd(c, t) if t.coeff(x).is_some_and(|a| a.is_negative()) => Lit::Dvd(c, t.neg()),
            Lit::NDvd(c, t) if t.coeff(x).is_some_and(|a| a.is_negative()) => Lit::NDvd(c, t.neg()),
            other => other,
        };
        match &l {
            Lit::Dvd(c, _) | Lit::NDvd(c, _) => delta = delta.lcm(c),
            Lit::Lt(t) => {
                let r = t.without(x);
                if t.coeff(x).is_some_and(|a| a.is_positive()) {
                    // 0 < x + r  ⇔  -r < x
                    lower.push(r.neg());
                    has_lower_bound = true;
                } else {
                    // 0 < -x + r  ⇔  x < r
                    upper.push(r);
                    has_upper_bound = true;
                }
            }
            Lit::Ne(t) => {
                // a·x + r ≠ 0  ⇔  x ≠ -a·r
                let a = t.coeff(x).expect("mentions x").clone();
                let hole = t.without(x).scale(&-a);
                lower.push(hole.clone());
                upper.push(hole);
            }
            Lit::Eq(_) => unreachable!("equalities handled above"),
        }
        normalized.push(l);
    }
    lower.sort();
    lower.dedup();
    upper.sort();
    upper.dedup();

    let use_lower = lower.len() <= upper.len();
    let mut disjuncts: Vec<Qf> = Vec::new();
    let instantiate = |value: &Lin, out: &mut Vec<Qf>| {
        let lits = normalized.iter().map(|l| l.subst(x, value));
        if let Some(c) = simplify_conj(lits) {
            out.push(conj_to_qf(c));
        }
    };
    let points = if use_lower { lower.len() } else { upper.len() } as u128 + 1;
    let delta_usize: u64 = delta.clone().try_into().unwrap_or(u64::MAX);
    let cost = (delta_usize as u128).saturating_mul(points);
    if cost > INSTANCE_LIMIT {
        return Err(Blowup { cost });
    }
    if use_lower {
        if !has_lower_bound {
            // Far to the left only the divisibility constraints matter.
            let periodic: Vec<Lit> =
                normalized.iter().filter(|l| matches!(l, Lit::Dvd(..) | Lit::NDvd(..))).cloned().collect();
            for j in 1..=delta_usize {
                let v = Lin::constant(j);
                if let Some(c) = simplify_conj(periodic.iter().map(|l| l.subst(x, &v))) {
                    disjuncts.push(conj_to_qf(c));
                    if disjuncts.last() == Some(&Qf::True) {
                        return Ok(Qf::True);
                    }
                }
            }
        }
        for b in &lower {
            for j in 1..=delta_usize {
                instantiate(&b.plus_const(&BigInt::from(j)), &mut disjuncts);
            }
        }
    } else {
        if !has_upper_bound {
            let periodic: Vec<Lit> =
                normalized.iter().filter(|l| matches!(l, Lit::Dvd(..) | Lit::NDvd(..))).cloned().collect();
            for j in 1..=delta_usize {
                let v = Lin::constant(-BigInt::from(j));
                if let Some(c) = simplify_conj(periodic.iter().map(|l| l.subst(x, &v))) {
                    disjuncts.push(conj_to_qf(c));
                    if disjuncts.last() == Some(&Qf::True) {
                        return Ok(Qf::True);
                    }
                }
            }
        }
        for a in &upper {
            for j in 1..=delta_usize {
                instantiate(&a.plus_const(&-BigInt::from(j)), &mut disjuncts);
            }
        }
    }
    Ok(mk_or(disjuncts))
}

/// Rebuilds `q` with `x` replaced by `value`, simplifying on the way.
pub(super) fn subst_qf(q: &Qf, x: Var, value: &Lin) -> Qf {
    match q {
        Qf::True | Qf::False => q.clone(),
        Qf::Lit(l) if l.mentions(x) => Qf::lit(l.subst(x, value)),
        Qf::Lit(_) => q.clone(),
        Qf::And(cs) => mk_and(cs.iter().map(|c| subst_qf(c, x, value)).collect()),
        Qf::Or(cs) => mk_or(cs.iter().map(|c| subst_qf(c, x, value)).collect()),
    }
}

/// `a·x = value` with `a > 0` taken from a top-level equation of `q`,
/// preferring the smallest coefficient.
fn definition(q: &Qf, x: Var) -> Option<(BigInt, Lin)> {
    let lits: Vec<&Lit> = match q {
        Qf::Lit(l) => vec![l],
        Qf::And(cs) => cs.iter().filter_map(|c| if let Qf::Lit(l) = c { Some(l) } else { None }).collect(),
        _ => return None,
    };
    lits.into_iter()
        .filter_map(|l| match l {
            Lit::Eq(t) => {
                let a = t.coeff(x)?;
                // a·x + r = 0  ⇒  |a|·x = -sign(a)·r
                let r = t.without(x);
                Some(if a.is_negative() { (-a, r) } else { (a.clone(), r.neg()) })
            }
            _ => None,
        })
        .min_by(|p, q| p.0.cmp(&q.0))
}

/// `∃x. a·x = v ∧ R` as `a | v ∧ R'`, where every literal of `R` is first
/// multiplied by `a` so that `a·x` can be replaced by `v`.
fn eliminate_by_definition(q: &Qf, x: Var, a: &BigInt, value: &Lin) -> Qf {
    if a.is_one() {
        return subst_qf(q, x, value);
    }
    let body = map_lits(q, &mut |l| {
        let Some(c) = l.lin().coeff(x) else { return Qf::Lit(l.clone()) };
        let t = l.lin().without(x).scale(a).add(&value.scale(c));
        Qf::lit(match l {
            Lit::Lt(_) => Lit::Lt(t),
            Lit::Eq(_) => Lit::Eq(t),
            Lit::Ne(_) => Lit::Ne(t),
            Lit::Dvd(m, _) => Lit::Dvd(m * a, t),
            Lit::NDvd(m, _) => Lit::NDvd(m * a, t),
        })
    });
    mk_and(vec![Qf::lit(Lit::Dvd(a.clone(), value.clone())), body])
}

/// Widest range enumerated directly during elimination.
const ENUM_LIMIT: u32 = 64;

/// Rough count of the instances Cooper's procedure generates for `x`.
fn cooper_instances(q: &Qf, x: Var) -> BigInt {
    let (mut m, mut delta) = (BigInt::one(), BigInt::one());
    let (mut lower, mut upper) = (0u32, 0u32);
    visit_lits(q, &mut |l| {
        let Some(a) = l.lin().coeff(x) else { return };
        m = m.lcm(a);
        match l {
            Lit::Dvd(c, _) | Lit::NDvd(c, _) => delta = delta.lcm(c),
            Lit::Lt(_) if a.is_positive() => lower += 1,
            Lit::Lt(_) => upper += 1,
            Lit::Eq(_) | Lit::Ne(_) => {
                lower += 1;
                upper += 1;
            }
        }
    });
    delta * m * BigInt::from(lower.min(upper) + 1)
}

/// `lo ≤ x ≤ hi` from top-level conjuncts of `q` that mention only `x`.
fn constant_range(q: &Qf, x: Var) -> Option<(BigInt, BigInt)> {
    let cs = match q {
        Qf::And(cs) => cs.as_slice(),
        _ => std::slice::from_ref(q),
    };
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for c in cs {
        let Qf::Lit(Lit::Lt(t)) = c else { continue };
        let [(v, a)] = t.terms.as_slice() else { continue };
        if *v != x {
            continue;
        }
        // 0 < a·x + c
        if a.is_positive() {
            let b = (BigInt::one() - &t.c).div_ceil(a);
            lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
        } else {
            let b = (BigInt::one() - &t.c).div_floor(a);
            hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
        }
    }
    Some((lo?, hi?))
}

fn map_lits(q: &Qf, f: &mut dyn FnMut(&Lit) -> Qf) -> Qf {
    match q {
        Qf::True | Qf::False => q.clone(),
        Qf::Lit(l) => f(l),
        Qf::And(cs) => mk_and(cs.iter().map(|c| map_lits(c, f)).collect()),
        Qf::Or(cs) => mk_or(cs.iter().map(|c| map_lits(c, f)).collect()),
    }
}

fn visit_lits(q: &Qf, f: &mut dyn FnMut(&Lit)) {
    match q {
        Qf::True | Qf::False => {}
        Qf::Lit(l) => f(l),
        Qf::And(cs) | Qf::Or(cs) => cs.iter().for_each(|c| visit_lits(c, f)),
    }
}

/// Largest nominal size of all instances in one formula-level Cooper step.
const WORK_LIMIT: u128 = 200_000_000;

/// Conjunction count above which elimination works on the formula itself
/// instead of its disjunctive normal form.
const DNF_SWITCH: usize = 4096;

/// Cooper's elimination of `∃x` on a whole negation-normal formula: either
/// the left-infinite projection or a point just above a lower bound witnesses
/// the formula (symmetrically with upper bounds, whichever set is smaller).
fn cooper(x: Var, q: &Qf) -> Result<Qf, Blowup> {
    let mut m = BigInt::one();
    visit_lits(q, &mut |l| {
        if let Some(a) = l.lin().coeff(x) {
            m = m.lcm(a);
        }
    });
    // Unit coefficients: scale each literal so that x appears as ±m, then read m·x as x.
    let unit = |l: &Lit| -> Qf {
        let Some(a) = l.lin().coeff(x).cloned() else { return Qf::Lit(l.clone()) };
        let k = &m / a.abs();
        let sign = if a.is_negative() { -BigInt::one() } else { BigInt::one() };
        let t = l.lin().scale(&k).with_coeff(x, sign);
        Qf::lit(match l {
            Lit::Lt(_) => Lit::Lt(t),
            Lit::Eq(_) => Lit::Eq(t),
            Lit::Ne(_) => Lit::Ne(t),
            Lit::Dvd(c, _) => Lit::Dvd(c * &k, if t.coeff(x).is_some_and(|a| a.is_negative()) { t.neg() } else { t }),
            Lit::NDvd(c, _) => Lit::NDvd(c * &k, if t.coeff(x).is_some_and(|a| a.is_negative()) { t.neg() } else { t }),
        })
    };
    let mut phi = map_lits(q, &mut |l| unit(l));
    if !m.is_one() {
        phi = mk_and(vec![phi, Qf::lit(Lit::Dvd(m.clone(), Lin::var(x)))]);
    }
    if !phi.mentions(x) {
        return Ok(phi);
    }
    let mut delta = BigInt::one();
    let (mut lower, mut upper): (Vec<Lin>, Vec<Lin>) = (Vec::new(), Vec::new());
    visit_lits(&phi, &mut |l| {
        let Some(a) = l.lin().coeff(x) else { return };
        let r = l.lin().without(x);
        let pos = a.is_positive();
        // With x + r or -x + r: the value of x that makes the literal tight.
        let root = if pos { r.neg() } else { r.clone() };
        match l {
            Lit::Dvd(c, _) | Lit::NDvd(c, _) => delta = delta.lcm(c),
            // 0 < x + r  ⇔  -r < x ;  0 < -x + r  ⇔  x < r
            Lit::Lt(_) if pos => lower.push(root),
            Lit::Lt(_) => upper.push(root),
            Lit::Eq(_) => {
                lower.push(root.plus_const(&-BigInt::one()));
                upper.push(root.plus_const(&BigInt::one()));
            }
            Lit::Ne(_) => {
                lower.push(root.clone());
                upper.push(root);
            }
        }
    });
    lower.sort();
    lower.dedup();
    upper.sort();
    upper.dedup();
    let use_lower = lower.len() <= upper.len();
    let points = if use_lower { &lower } else { &upper };
    let d: u64 = delta.clone().try_into().unwrap_or(u64::MAX);
    // The instances usually simplify far below their nominal size, so the
    // limit applies to what is actually produced.
    let nominal = (d as u128).saturating_mul(points.len() as u128 + 1);
    let work = nominal.saturating_mul(phi.size() as u128);
    if nominal > INSTANCE_LIMIT || work > WORK_LIMIT {
        return Err(Blowup { cost: work });
    }
    // Projection at -∞ (or +∞): bounds on the far side vanish.
    let infinity = map_lits(&phi, &mut |l| match (l, l.lin().coeff(x)) {
        (Lit::Lt(_), Some(a)) => {
            if a.is_positive() == use_lower {
                Qf::False
            } else {
                Qf::True
            }
        }
        (Lit::Eq(_), Some(_)) => Qf::False,
        (Lit::Ne(_), Some(_)) => Qf::True,
        _ => Qf::Lit(l.clone()),
    });
    let mut out = std::collections::BTreeSet::new();
    let mut produced = 0usize;
    let mut keep = |e: Qf, out: &mut std::collections::BTreeSet<Qf>| -> Result<bool, Blowup> {
        if e == Qf::True {
            return Ok(true);
        }
        produced += e.size();
        if produced as u128 > INSTANCE_LIMIT * 4 {
            return Err(Blowup { cost: work });
        }
        out.insert(e);
        Ok(false)
    };
    for j in 1..=d {
        let j = BigInt::from(j);
        let shift = if use_lower { j.clone() } else { -j.clone() };
        if keep(subst_qf(&infinity, x, &Lin::constant(shift.clone())), &mut out)? {
            return Ok(Qf::True);
        }
        for p in points {
            if keep(subst_qf(&phi, x, &p.plus_const(&shift)), &mut out)? {
                return Ok(Qf::True);
            }
        }
    }
    Ok(mk_or(out.into_iter().collect()))
}

/// `∃x. q` for quantifier-free `q`.
pub fn exists(x: Var, q: &Qf) -> Result<Qf, Blowup> {
    if !q.mentions(x) {
        return Ok(q.clone());
    }
    if let Some((a, value)) = definition(q, x) {
        return Ok(eliminate_by_definition(q, x, &a, &value));
    }
    if let Some((lo, hi)) = constant_range(q, x) {
        // Enumerate a range no wider than the instances Cooper's procedure would need.
        let width = &hi - &lo + 1;
        if width <= BigInt::from(ENUM_LIMIT) && width <= cooper_instances(q, x) {
            let mut out = Vec::new();
            let mut v = lo;
            while v <= hi {
                let e = subst_qf(q, x, &Lin::constant(v.clone()));
                if e == Qf::True {
                    return Ok(Qf::True);
                }
                out.push(e);
                v += 1;
            }
            return Ok(mk_or(out));
        }
    }
    match q {
        Qf::Or(cs) => {
            let mut out = Vec::with_capacity(cs.len());
            for c in cs {
                let e = exists(x, c)?;
                if e == Qf::True {
                    return Ok(Qf::True);
                }
                out.push(e);
            }
            Ok(mk_or(out))
        }
        Qf::And(cs) => {
            let (with, without): (Vec<Qf>, Vec<Qf>) = cs.iter().cloned().partition(|c| c.mentions(x));
            let inner = mk_and(with);
            let Some(conjs) = dnf_limited(&inner, DNF_SWITCH) else {
                let mut parts = without;
                parts.push(cooper(x, &inner)?);
                return Ok(mk_and(parts));
            };
            let mut out = Vec::with_capacity(conjs.len());
            for conj in conjs {
                let (has, hasnt): (Vec<Lit>, Vec<Lit>) = conj.into_iter().partition(|l| l.mentions(x));
                let e = eliminate_in_conj(x, &has)?;
                let mut parts: Vec<Qf> = hasnt.into_iter().map(Qf::Lit).collect();
                parts.push(e);
                let d = mk_and(parts);
                if d == Qf::True {
                    return Ok(mk_and(without));
                }
                out.push(d);
            }
            let mut parts = without;
            parts.push(mk_or(out));
            Ok(mk_and(parts))
        }
        Qf::Lit(l) => eliminate_in_conj(x, std::slice::from_ref(l)),
        Qf::True | Qf::False => Ok(q.clone()),
    }
}

/// `∀x. q` as `¬∃x. ¬q`.
pub fn forall(x: Var, q: &Qf) -> Result<Qf, Blowup> {
    Ok(exists(x, &q.negate())?.negate()).map(normalize_shape)
}

/// Re-simplifies after a negation, which may leave unflattened nodes.
fn normalize_shape(q: Qf) -> Qf {
    match q {
        Qf::And(cs) => mk_and(cs.into_iter().map(normalize_shape).collect()),
        Qf::Or(cs) => mk_or(cs.into_iter().map(normalize_shape).collect()),
        other => other,
    }
}

/// Eliminates all quantifiers, innermost first.
pub fn qe(p: &Pf) -> Result<Qf, Blowup> {
    match p {
        Pf::Qf(q) => Ok(normalize_shape(q.clone())),
        Pf::And(cs) => junction(cs, Qf::False).map(mk_and),
        Pf::Or(cs) => junction(cs, Qf::True).map(mk_or),
        Pf::Exists(..) | Pf::Forall(..) => {
            let universal = matches!(p, Pf::Forall(..));
            let (mut vars, body) = block(p, universal);
            let mut q = qe(&body)?;
            // Like quantifiers commute; take defined variables first, then
            // the one with the fewest Cooper instances.
            while !vars.is_empty() {
                let target = if universal { q.negate() } else { q.clone() };
                let i = (0..vars.len())
                    .min_by_key(|&i| {
                        let x = vars[i];
                        if !target.mentions(x) || definition(&target, x).is_some() {
                            BigInt::from(0)
                        } else {
                            cooper_instances(&target, x)
                        }
                    })
                    .expect("non-empty block");
                let x = vars.swap_remove(i);
                q = if universal { forall(x, &q)? } else { exists(x, &q)? };
            }
            Ok(q)
        }
    }
}

/// A maximal run of like quantifiers, read through the junction they
/// distribute over (`∃x. A ∧ ∃y. B` is `∃x y. A ∧ B` once names are apart).
fn block(p: &Pf, universal: bool) -> (Vec<Var>, Pf) {
    match (p, universal) {
        (Pf::Exists(x, b), false) | (Pf::Forall(x, b), true) => {
            let (mut vars, body) = block(b, universal);
            vars.push(*x);
            (vars, body)
        }
        (Pf::And(cs), false) | (Pf::Or(cs), true) => {
            let nested: Vec<usize> = (0..cs.len())
                .filter(|&i| matches!((&cs[i], universal), (Pf::Exists(..), false) | (Pf::Forall(..), true)))
                .collect();
            let [i] = nested.as_slice() else { return (Vec::new(), p.clone()) };
            if cs.iter().enumerate().any(|(j, c)| j != *i && !matches!(c, Pf::Qf(_))) {
                return (Vec::new(), p.clone());
            }
            let (vars, inner) = block(&cs[*i], universal);
            let mut parts: Vec<Pf> = cs.iter().enumerate().filter(|(j, _)| j != i).map(|(_, c)| c.clone()).collect();
            parts.push(inner);
            (vars, if universal { pf_or(parts) } else { pf_and(parts) })
        }
        _ => (Vec::new(), p.clone()),
    }
}

/// Eliminates in each child, smallest first. A child equal to `absorbing`
/// decides the junction even when another child exceeded the limits.
fn junction(cs: &[Pf], absorbing: Qf) -> Result<Vec<Qf>, Blowup> {
    let mut order: Vec<&Pf> = cs.iter().collect();
    order.sort_by_cached_key(|c| c.size());
    let mut out = Vec::with_capacity(cs.len());
    let mut failed = None;
    for c in order {
        match qe(c) {
            Ok(e) if e == absorbing => return Ok(vec![absorbing]),
            Ok(e) => out.push(e),
            Err(b) => failed = failed.or(Some(b)),
        }
    }
    match failed {
        Some(b) => Err(b),
        None => Ok(out),
    }
}

impl From<Qf> for Pf {
    fn from(q: Qf) -> Self {
        Pf::Qf(q)
    }
}

pub fn is_ground_true(q: &Qf) -> Option<bool> {
    q.eval(&|_| None)
}
