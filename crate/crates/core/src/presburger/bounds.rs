//! Constant bounds for quantified variables, read off the guards around and
//! below each quantifier.
//!
//! For `∃x. φ`, any literal that must hold whenever `φ` does (the conjuncts
//! of `φ`, including those under nested existentials) together with the
//! literals that hold in the enclosing context constrains `x`; interval
//! propagation turns them into `lo ≤ x ≤ hi`, which is then added to `φ`.
//! Universals are handled through their negation. The result is equivalent
//! to the input, but elimination can enumerate small ranges instead of
//! running Cooper's procedure on them. A variable pinned to one value is
//! substituted away, which in turn simplifies the guards below it.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::linear::{Lin, Lit, Var};
use super::qe::{pf_and, pf_or, subst_qf, Pf, Qf};

const ROUNDS: usize = 16;

#[derive(Clone, Default)]
struct Interval {
    lo: Option<BigInt>,
    hi: Option<BigInt>,
}

/// Passes over the formula; a substitution deep inside can expose a
/// definition to the quantifiers above it on the next pass.
const PASSES: usize = 4;

/// Adds constant bounds to quantifiers wherever they can be derived.
pub fn strengthen(pf: &Pf) -> Pf {
    let mut cur = walk(pf, &[]);
    for _ in 1..PASSES {
        let next = walk(&cur, &[]);
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn direct_lits(q: &Qf, out: &mut Vec<Lit>) {
    match q {
        Qf::Lit(l) => out.push(l.clone()),
        Qf::And(cs) => cs.iter().for_each(|c| direct_lits(c, out)),
        _ => {}
    }
}

/// Literals implied by `pf`, looking through conjunctions and existentials.
fn implied(pf: &Pf, out: &mut Vec<Lit>) {
    match pf {
        Pf::Qf(q) => direct_lits(q, out),
        Pf::And(cs) => cs.iter().for_each(|c| implied(c, out)),
        Pf::Exists(_, b) => implied(b, out),
        Pf::Or(_) | Pf::Forall(..) => {}
    }
}

/// Literals implied by `¬pf`.
fn refuted(pf: &Pf, out: &mut Vec<Lit>) {
    match pf {
        Pf::Qf(q) => direct_lits(&q.negate(), out),
        Pf::Or(cs) => cs.iter().for_each(|c| refuted(c, out)),
        Pf::Forall(_, b) => refuted(b, out),
        Pf::And(_) | Pf::Exists(..) => {}
    }
}

fn walk(pf: &Pf, ctx: &[Lit]) -> Pf {
    match pf {
        Pf::Qf(_) => pf.clone(),
        Pf::And(cs) | Pf::Or(cs) => {
            let conj = matches!(pf, Pf::And(_));
            let mut inner = ctx.to_vec();
            for c in cs {
                if let Pf::Qf(q) = c {
                    direct_lits(&if conj { q.clone() } else { q.negate() }, &mut inner);
                }
            }
            let cs = cs.iter().map(|c| walk(c, &inner)).collect();
            if conj {
                Pf::And(cs)
            } else {
                Pf::Or(cs)
            }
        }
        Pf::Exists(x, body) | Pf::Forall(x, body) => {
            let exists = matches!(pf, Pf::Exists(..));
            let mut inner: Vec<Lit> = ctx.iter().filter(|l| !l.mentions(*x)).cloned().collect();
            let mut cons = inner.clone();
            if exists {
                implied(body, &mut cons);
            } else {
                refuted(body, &mut cons);
            }
            let range = interval(*x, &cons);
            if let (Some(lo), Some(hi)) = (&range.lo, &range.hi) {
                if lo == hi {
                    // ∃x. x = v ∧ φ  ⇔  φ[x := v], and dually for ∀.
                    return walk(&subst_pf(body, *x, &Lin::constant(lo.clone())), ctx);
                }
            }
            let mut guard = Vec::new();
            let already = |l: &Lit| {
                let l = if exists { l.clone() } else { l.negate() };
                match body.as_ref() {
                    Pf::And(cs) | Pf::Or(cs) => cs.iter().any(|c| c == &Pf::Qf(Qf::lit(l.clone()))),
                    _ => false,
                }
            };
            if let Some(lo) = &range.lo {
                // x ≥ lo
                guard.push(Lit::Lt(Lin::var(*x).plus_const(&(BigInt::one() - lo))));
            }
            if let Some(hi) = &range.hi {
                // x ≤ hi
                guard.push(Lit::Lt(Lin::var(*x).neg().plus_const(&(hi + BigInt::one()))));
            }
            guard.retain(|l| !already(l));
            inner.extend(guard.iter().cloned());
            let body = walk(body, &inner);
            if guard.is_empty() {
                return if exists { Pf::Exists(*x, Box::new(body)) } else { Pf::Forall(*x, Box::new(body)) };
            }
            let mut cs: Vec<Pf> = guard.into_iter().map(|l| Pf::Qf(Qf::lit(if exists { l } else { l.negate() }))).collect();
            cs.push(body);
            if exists {
                Pf::Exists(*x, Box::new(Pf::And(cs)))
            } else {
                Pf::Forall(*x, Box::new(Pf::Or(cs)))
            }
        }
    }
}

fn subst_pf(pf: &Pf, x: Var, value: &Lin) -> Pf {
    match pf {
        Pf::Qf(q) => Pf::Qf(subst_qf(q, x, value)),
        Pf::And(cs) => pf_and(cs.iter().map(|c| subst_pf(c, x, value)).collect()),
        Pf::Or(cs) => pf_or(cs.iter().map(|c| subst_pf(c, x, value)).collect()),
        Pf::Exists(y, b) => Pf::Exists(*y, Box::new(subst_pf(b, x, value))),
        Pf::Forall(y, b) => Pf::Forall(*y, Box::new(subst_pf(b, x, value))),
    }
}

/// Bounds on `x` by propagation over `Lt` and `Eq` literals.
fn interval(x: Var, lits: &[Lit]) -> Interval {
    // Each constraint reads `t ≥ k`.
    let mut cons: Vec<(&Lin, bool, BigInt)> = Vec::new();
    for l in lits {
        match l {
            Lit::Lt(t) => cons.push((t, false, BigInt::one())),
            Lit::Eq(t) => {
                cons.push((t, false, BigInt::zero()));
                cons.push((t, true, BigInt::zero()));
            }
            _ => {}
        }
    }
    if !cons.iter().any(|(t, _, _)| t.mentions(x)) {
        return Interval::default();
    }
    let mut iv: HashMap<Var, Interval> = HashMap::new();
    for _ in 0..ROUNDS {
        let mut changed = false;
        for (t, negated, k) in &cons {
            let sign = if *negated { -BigInt::one() } else { BigInt::one() };
            // Σ s·a_i·v_i ≥ k - s·c
            let rhs = k - &sign * &t.c;
            let terms: Vec<(Var, BigInt)> = t.terms.iter().map(|(v, a)| (*v, &sign * a)).collect();
            // Upper bound of each term a·v, or None when unbounded.
            let sup = |v: Var, a: &BigInt, iv: &HashMap<Var, Interval>| -> Option<BigInt> {
                let i = iv.get(&v)?;
                if a.is_positive() {
                    i.hi.as_ref().map(|h| a * h)
                } else {
                    i.lo.as_ref().map(|l| a * l)
                }
            };
            let sups: Vec<Option<BigInt>> = terms.iter().map(|(v, a)| sup(*v, a, &iv)).collect();
            let unbounded = sups.iter().filter(|s| s.is_none()).count();
            if unbounded > 1 {
                continue;
            }
            let total: BigInt = sups.iter().flatten().sum();
            for (i, (v, a)) in terms.iter().enumerate() {
                if unbounded == 1 && sups[i].is_some() {
                    continue;
                }
                // a·v ≥ rhs - Σ_{j≠i} sup_j
                let rest = match &sups[i] {
                    Some(s) => &total - s,
                    None => total.clone(),
                };
                let need = &rhs - rest;
                let e = iv.entry(*v).or_default();
                if a.is_positive() {
                    let lo = need.div_ceil(a);
                    if e.lo.as_ref().is_none_or(|l| lo > *l) {
                        e.lo = Some(lo);
                        changed = true;
                    }
                } else {
                    let hi = need.div_floor(a);
                    if e.hi.as_ref().is_none_or(|h| hi < *h) {
                        e.hi = Some(hi);
                        changed = true;
                    }
                }
                if let (Some(l), Some(h)) = (&e.lo, &e.hi) {
                    if l > h {
                        // Unsatisfiable context: the quantifier is never consulted.
                        return Interval::default();
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    iv.remove(&x).unwrap_or_default()
}
