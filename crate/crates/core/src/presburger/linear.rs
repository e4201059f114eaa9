//! Linear terms over interned variables and the literal forms used during
//! quantifier elimination.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Var = u32;

/// Interning table; names are kept for printing results back.
#[derive(Debug, Clone, Default)]
pub struct VarTable {
    names: Vec<String>,
    index: HashMap<String, Var>,
}

impl VarTable {
    pub fn intern(&mut self, name: &str) -> Var {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = self.names.len() as Var;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v as usize]
    }
}

/// `c + Σ aᵢ·xᵢ` with nonzero coefficients sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lin {
    pub terms: Vec<(Var, BigInt)>,
    pub c: BigInt,
}

impl Lin {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Lin { terms: Vec::new(), c: c.into() }
    }

    pub fn var(v: Var) -> Self {
        Lin { terms: vec![(v, BigInt::one())], c: BigInt::zero() }
    }

    pub fn is_const(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, v: Var) -> Option<&BigInt> {
        self.terms.binary_search_by_key(&v, |(x, _)| *x).ok().map(|i| &self.terms[i].1)
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.coeff(v).is_some()
    }

    pub fn add(&self, other: &Lin) -> Lin {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            match (self.terms.get(i), other.terms.get(j)) {
                (Some((a, x)), Some((b, y))) if a == b => {
                    let s = x + y;
                    if !s.is_zero() {
                        terms.push((*a, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((a, x)), Some((b, _))) if a < b => {
                    terms.push((*a, x.clone()));
                    i += 1;
                }
                (Some(_), Some((b, y))) => {
                    terms.push((*b, y.clone()));
                    j += 1;
                }
                (Some((a, x)), None) => {
                    terms.push((*a, x.clone()));
                    i += 1;
                }
                (None, Some((b, y))) => {
                    terms.push((*b, y.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Lin { terms, c: &self.c + &other.c }
    }

    pub fn scale(&self, k: &BigInt) -> Lin {
        if k.is_zero() {
            return Lin::constant(0);
        }
        Lin { terms: self.terms.iter().map(|(v, a)| (*v, a * k)).collect(), c: &self.c * k }
    }

    pub fn neg(&self) -> Lin {
        self.scale(&-BigInt::one())
    }

    pub fn plus_const(&self, k: &BigInt) -> Lin {
        Lin { terms: self.terms.clone(), c: &self.c + k }
    }

    /// Replaces `v` by `by`.
    pub fn subst(&self, v: Var, by: &Lin) -> Lin {
        match self.coeff(v) {
            None => self.clone(),
            Some(a) => {
                let a = a.clone();
                let rest = self.without(v);
                rest.add(&by.scale(&a))
            }
        }
    }

    /// Drops the `v` term.
    pub fn without(&self, v: Var) -> Lin {
        Lin { terms: self.terms.iter().filter(|(x, _)| *x != v).cloned().collect(), c: self.c.clone() }
    }

    /// Sets the coefficient of `v` (which must already occur).
    pub fn with_coeff(&self, v: Var, a: BigInt) -> Lin {
        Lin {
            terms: self.terms.iter().map(|(x, b)| if *x == v { (*x, a.clone()) } else { (*x, b.clone()) }).collect(),
            c: self.c.clone(),
        }
    }

    pub fn coeff_gcd(&self) -> BigInt {
        self.terms.iter().fold(BigInt::zero(), |g, (_, a)| g.gcd(a))
    }

    pub fn eval(&self, env: &dyn Fn(Var) -> Option<BigInt>) -> Option<BigInt> {
        let mut s = self.c.clone();
        for (v, a) in &self.terms {
            s += a * env(*v)?;
        }
        Some(s)
    }

    fn first_negative(&self) -> bool {
        self.terms.first().is_some_and(|(_, a)| a.is_negative())
    }
}

/// Atomic constraints: `0 < t`, `t = 0`, `t ≠ 0`, `m | t`, `¬(m | t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lit {
    Lt(Lin),
    Eq(Lin),
    Ne(Lin),
    Dvd(BigInt, Lin),
    NDvd(BigInt, Lin),
}

pub enum Norm {
    True,
    False,
    Lit(Lit),
}

impl Lit {
    pub fn lin(&self) -> &Lin {
        match self {
            Lit::Lt(t) | Lit::Eq(t) | Lit::Ne(t) | Lit::Dvd(_, t) | Lit::NDvd(_, t) => t,
        }
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.lin().mentions(v)
    }

    pub fn map(&self, f: impl Fn(&Lin) -> Lin) -> Lit {
        match self {
            Lit::Lt(t) => Lit::Lt(f(t)),
            Lit::Eq(t) => Lit::Eq(f(t)),
            Lit::Ne(t) => Lit::Ne(f(t)),
            Lit::Dvd(m, t) => Lit::Dvd(m.clone(), f(t)),
            Lit::NDvd(m, t) => Lit::NDvd(m.clone(), f(t)),
        }
    }

    pub fn negate(&self) -> Lit {
        match self {
            // ¬(0 < t) ⇔ 0 < 1 - t
            Lit::Lt(t) => Lit::Lt(t.neg().plus_const(&BigInt::one())),
            Lit::Eq(t) => Lit::Ne(t.clone()),
            Lit::Ne(t) => Lit::Eq(t.clone()),
            Lit::Dvd(m, t) => Lit::NDvd(m.clone(), t.clone()),
            Lit::NDvd(m, t) => Lit::Dvd(m.clone(), t.clone()),
        }
    }

    pub fn subst(&self, v: Var, by: &Lin) -> Lit {
        self.map(|t| t.subst(v, by))
    }

    pub fn eval(&self, env: &dyn Fn(Var) -> Option<BigInt>) -> Option<bool> {
        let val = self.lin().eval(env)?;
        Some(match self {
            Lit::Lt(_) => val.is_positive(),
            Lit::Eq(_) => val.is_zero(),
            Lit::Ne(_) => !val.is_zero(),
            Lit::Dvd(m, _) => val.mod_floor(m).is_zero(),
            Lit::NDvd(m, _) => !val.mod_floor(m).is_zero(),
        })
    }

    /// Canonical form: gcd-tightened inequalities, divided equalities with a
    /// positive leading coefficient, reduced divisibility constraints, and
    /// ground literals folded.
    pub fn normalize(&self) -> Norm {
        let truth = |b: bool| if b { Norm::True } else { Norm::False };
        match self {
            Lit::Lt(t) => {
                if t.is_const() {
                    return truth(t.c.is_positive());
                }
                let g = t.coeff_gcd();
                if g.is_one() {
                    return Norm::Lit(self.clone());
                }
                let terms = t.terms.iter().map(|(v, a)| (*v, a / &g)).collect();
                // 0 < c + g·s  ⇔  0 < s + ceil(c/g)
                let c = num_integer::Integer::div_ceil(&t.c, &g);
                Norm::Lit(Lit::Lt(Lin { terms, c }))
            }
            Lit::Eq(t) | Lit::Ne(t) => {
                let eq = matches!(self, Lit::Eq(_));
                if t.is_const() {
                    return truth(t.c.is_zero() == eq);
                }
                let g = t.coeff_gcd();
                if !t.c.is_multiple_of(&g) {
                    return truth(!eq);
                }
                let mut t = if g.is_one() {
                    t.clone()
                } else {
                    Lin { terms: t.terms.iter().map(|(v, a)| (*v, a / &g)).collect(), c: &t.c / &g }
                };
                if t.first_negative() {
                    t = t.neg();
                }
                Norm::Lit(if eq { Lit::Eq(t) } else { Lit::Ne(t) })
            }
            Lit::Dvd(m, t) | Lit::NDvd(m, t) => {
                let pos = matches!(self, Lit::Dvd(..));
                let terms: Vec<(Var, BigInt)> = t
                    .terms
                    .iter()
                    .map(|(v, a)| (*v, a.mod_floor(m)))
                    .filter(|(_, a)| !a.is_zero())
                    .collect();
                let c = t.c.mod_floor(m);
                if terms.is_empty() {
                    return truth(c.is_zero() == pos);
                }
                let g = terms.iter().fold(m.clone(), |g, (_, a)| g.gcd(a));
                if !c.is_multiple_of(&g) {
                    return truth(!pos);
                }
                let (m, terms, c) = if g.is_one() {
                    (m.clone(), terms, c)
                } else {
                    (m / &g, terms.into_iter().map(|(v, a)| (v, a / &g)).collect(), c / &g)
                };
                if m.is_one() {
                    return truth(pos);
                }
                let t = Lin { terms, c };
                Norm::Lit(if pos { Lit::Dvd(m, t) } else { Lit::NDvd(m, t) })
            }
        }
    }
}

/// Bounds for one linear form `s` (leading coefficient positive), collected
/// from inequalities, equalities and disequalities.
#[derive(Default)]
struct Bounds {
    lower: Option<BigInt>,
    upper: Option<BigInt>,
    holes: Vec<BigInt>,
}

/// Splits a literal's linear term into `(key, sign, constant)` with
/// `t = sign·key + constant` and the key's leading coefficient positive.
fn keyed(t: &Lin) -> (Lin, bool, BigInt) {
    let key = Lin { terms: t.terms.clone(), c: BigInt::zero() };
    if t.first_negative() {
        (key.neg(), false, t.c.clone())
    } else {
        (key, true, t.c.clone())
    }
}

/// Simplifies a conjunction of literals. Returns `None` when it is
/// unsatisfiable by bound reasoning; otherwise an equivalent, sorted,
/// deduplicated list (empty means `true`).
pub fn simplify_conj(lits: impl IntoIterator<Item = Lit>) -> Option<Vec<Lit>> {
    let mut bounds: BTreeMap<Lin, Bounds> = BTreeMap::new();
    let mut others: Vec<Lit> = Vec::new();
    for l in lits {
        let l = match l.normalize() {
            Norm::True => continue,
            Norm::False => return None,
            Norm::Lit(l) => l,
        };
        match &l {
            Lit::Lt(t) => {
                let (key, pos, c) = keyed(t);
                let b = bounds.entry(key).or_default();
                if pos {
                    // 0 < s + c  ⇔  s ≥ 1 - c
                    let lo = BigInt::one() - c;
                    if b.lower.as_ref().is_none_or(|x| lo > *x) {
                        b.lower = Some(lo);
                    }
                } else {
                    // 0 < -s + c  ⇔  s ≤ c - 1
                    let hi = c - BigInt::one();
                    if b.upper.as_ref().is_none_or(|x| hi < *x) {
                        b.upper = Some(hi);
                    }
                }
            }
            Lit::Eq(t) => {
                let (key, _, c) = keyed(t);
                let v = -c;
                let b = bounds.entry(key).or_default();
                if b.lower.as_ref().is_none_or(|x| v > *x) {
                    b.lower = Some(v.clone());
                }
                if b.upper.as_ref().is_none_or(|x| v < *x) {
                    b.upper = Some(v);
                }
            }
            Lit::Ne(t) => {
                let (key, _, c) = keyed(t);
                bounds.entry(key).or_default().holes.push(-c);
            }
            _ => others.push(l),
        }
    }
    let mut out: Vec<Lit> = Vec::new();
    for (key, mut b) in bounds {
        b.holes.sort();
        b.holes.dedup();
        // Holes at the ends of the interval tighten it.
        loop {
            let mut changed = false;
            if let Some(lo) = &b.lower {
                if b.holes.binary_search(lo).is_ok() {
                    b.lower = Some(lo + 1);
                    changed = true;
                }
            }
            if let Some(hi) = &b.upper {
                if b.holes.binary_search(hi).is_ok() {
                    b.upper = Some(hi - 1);
                    changed = true;
                }
            }
            if let (Some(lo), Some(hi)) = (&b.lower, &b.upper) {
                if lo > hi {
                    return None;
                }
            }
            if !changed {
                break;
            }
        }
        match (&b.lower, &b.upper) {
            (Some(lo), Some(hi)) if lo == hi => {
                out.push(Lit::Eq(key.plus_const(&-lo)));
                continue;
            }
            _ => {}
        }
        if let Some(lo) = &b.lower {
            out.push(Lit::Lt(key.plus_const(&(BigInt::one() - lo))));
        }
        if let Some(hi) = &b.upper {
            out.push(Lit::Lt(key.neg().plus_const(&(hi + BigInt::one()))));
        }
        for h in &b.holes {
            let inside = b.lower.as_ref().is_none_or(|lo| h > lo) && b.upper.as_ref().is_none_or(|hi| h < hi);
            if inside {
                out.push(Lit::Ne(key.plus_const(&-h)));
            }
        }
    }
    others.sort();
    others.dedup();
    for w in others.windows(2) {
        if let (Lit::Dvd(m1, t1), Lit::NDvd(m2, t2)) = (&w[0], &w[1]) {
            if m1 == m2 && t1 == t2 {
                return None;
            }
        }
    }
    for l in &others {
        if let Lit::Dvd(m, t) = l {
            if others.contains(&Lit::NDvd(m.clone(), t.clone())) {
                return None;
            }
        }
    }
    out.extend(others);
    out.sort();
    Some(out)
}

/// Simplifies a disjunction of literals by duality. `None` means the clause
/// is a tautology.
pub fn simplify_clause(lits: impl IntoIterator<Item = Lit>) -> Option<Vec<Lit>> {
    let negated = simplify_conj(lits.into_iter().map(|l| l.negate()))?;
    let mut out: Vec<Lit> = negated.iter().map(|l| l.negate()).collect();
    out.sort();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(c: i64, terms: &[(Var, i64)]) -> Lin {
        let mut t: Vec<(Var, BigInt)> = terms.iter().map(|(v, a)| (*v, BigInt::from(*a))).collect();
        t.sort();
        Lin { terms: t, c: BigInt::from(c) }
    }

    fn brute(l: &Lit, x: i64) -> bool {
        l.eval(&|_| Some(BigInt::from(x))).unwrap()
    }

    #[test]
    fn normalization_preserves_meaning() {
        let lits = [
            Lit::Lt(lin(3, &[(0, 4)])),
            Lit::Lt(lin(-3, &[(0, -4)])),
            Lit::Eq(lin(6, &[(0, -4)])),
            Lit::Eq(lin(4, &[(0, -4)])),
            Lit::Ne(lin(3, &[(0, 6)])),
            Lit::Dvd(BigInt::from(6), lin(2, &[(0, 4)])),
            Lit::Dvd(BigInt::from(6), lin(3, &[(0, 4)])),
            Lit::NDvd(BigInt::from(4), lin(-2, &[(0, 10)])),
        ];
        for l in &lits {
            for x in -30..30 {
                let expected = brute(l, x);
                let got = match l.normalize() {
                    Norm::True => true,
                    Norm::False => false,
                    Norm::Lit(n) => brute(&n, x),
                };
                assert_eq!(got, expected, "{l:?} at {x}");
            }
        }
    }

    #[test]
    fn conj_detects_empty_interval() {
        // x > 2 and x < 3
        let a = Lit::Lt(lin(-2, &[(0, 1)]));
        let b = Lit::Lt(lin(3, &[(0, -1)]));
        assert!(simplify_conj([a, b]).is_none());
    }

    #[test]
    fn conj_turns_point_interval_into_equality() {
        // x >= 2, x <= 2
        let a = Lit::Lt(lin(-1, &[(0, 1)]));
        let b = Lit::Lt(lin(3, &[(0, -1)]));
        let out = simplify_conj([a, b]).unwrap();
        assert_eq!(out, vec![Lit::Eq(lin(-2, &[(0, 1)]))]);
    }

    #[test]
    fn conj_agrees_with_enumeration() {
        let lits = vec![
            Lit::Lt(lin(5, &[(0, 1)])),
            Lit::Lt(lin(3, &[(0, -1)])),
            Lit::Ne(lin(-2, &[(0, 1)])),
            Lit::Ne(lin(4, &[(0, 1)])),
            Lit::Ne(lin(0, &[(0, 1)])),
            Lit::Dvd(BigInt::from(2), lin(0, &[(0, 1)])),
        ];
        let simplified = simplify_conj(lits.clone());
        for x in -20..20 {
            let expected = lits.iter().all(|l| brute(l, x));
            let got = simplified.as_ref().is_some_and(|s| s.iter().all(|l| brute(l, x)));
            assert_eq!(got, expected, "x = {x}");
        }
    }

    #[test]
    fn clause_tautology() {
        // x < 1 or x > -1 covers everything
        let a = Lit::Lt(lin(1, &[(0, -1)]));
        let b = Lit::Lt(lin(1, &[(0, 1)]));
        assert!(simplify_clause([a, b]).is_none());
    }

    #[test]
    fn linear_arithmetic() {
        let a = lin(1, &[(0, 2), (1, 3)]);
        let b = lin(-1, &[(1, -3), (2, 1)]);
        assert_eq!(a.add(&b), lin(0, &[(0, 2), (2, 1)]));
        assert_eq!(a.subst(0, &lin(5, &[(2, 1)])), lin(11, &[(1, 3), (2, 2)]));
    }
}
