//! Seeded random formula corpora shared by the integration tests.
#![allow(dead_code)]

use bapa::{Atom, Formula, IntTerm, Quant, SetTerm, Sort};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_set: usize,
    pub max_int: usize,
    pub max_const: i64,
    pub max_depth: usize,
    /// Only constant cardinality constraints and set relations.
    pub pure_ba: bool,
    /// Number of free set variables (`a`, `b`, ...) to leave open.
    pub free_sets: usize,
}

impl Shape {
    pub const BAPA: Shape = Shape { max_set: 3, max_int: 2, max_const: 3, max_depth: 6, pure_ba: false, free_sets: 0 };
    pub const BA: Shape = Shape { max_set: 3, max_int: 0, max_const: 2, max_depth: 6, pure_ba: true, free_sets: 0 };
}

const SET_NAMES: [&str; 4] = ["x", "y", "z", "w"];
const INT_NAMES: [&str; 3] = ["k", "m", "n"];
const FREE_SETS: [&str; 3] = ["a", "b", "c"];

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    shape: Shape,
    sets: Vec<String>,
    ints: Vec<String>,
    used_set: usize,
    used_int: usize,
    /// Inside a `<=>`: prenexing would duplicate any quantifier placed here.
    no_quant: bool,
}

impl Gen<'_> {
    fn set_term(&mut self, depth: usize) -> SetTerm {
        let leaf = depth == 0 || self.rng.gen_bool(0.5);
        if leaf {
            if !self.sets.is_empty() && self.rng.gen_bool(0.85) {
                let i = self.rng.gen_range(0..self.sets.len());
                return SetTerm::var(self.sets[i].clone());
            }
            return if self.rng.gen_bool(0.5) { SetTerm::Empty } else { SetTerm::Univ };
        }
        match self.rng.gen_range(0..3) {
            0 => SetTerm::union(self.set_term(depth - 1), self.set_term(depth - 1)),
            1 => SetTerm::inter(self.set_term(depth - 1), self.set_term(depth - 1)),
            _ => SetTerm::compl(self.set_term(depth - 1)),
        }
    }

    fn constant(&mut self) -> IntTerm {
        IntTerm::int(self.rng.gen_range(0..=self.shape.max_const))
    }

    fn int_term(&mut self, depth: usize) -> IntTerm {
        let leaf = depth == 0 || self.rng.gen_bool(0.55);
        if leaf {
            return match self.rng.gen_range(0..4) {
                0 => self.constant(),
                1 if !self.ints.is_empty() => {
                    let i = self.rng.gen_range(0..self.ints.len());
                    IntTerm::var(self.ints[i].clone())
                }
                _ => IntTerm::card(self.set_term(2)),
            };
        }
        match self.rng.gen_range(0..4) {
            0 | 1 => IntTerm::add(self.int_term(depth - 1), self.int_term(depth - 1)),
            2 => IntTerm::sub(self.int_term(depth - 1), self.int_term(depth - 1)),
            _ => IntTerm::mul(2, self.int_term(depth - 1)),
        }
    }

    fn atom(&mut self) -> Formula {
        if self.shape.pure_ba {
            let b = self.set_term(2);
            return match self.rng.gen_range(0..4) {
                0 => Formula::Atom(Atom::SetEq(b, self.set_term(2))),
                1 => Formula::Atom(Atom::SubsetEq(b, self.set_term(2))),
                2 => Formula::int_eq(IntTerm::card(b), self.constant()),
                _ => Formula::int_ge(IntTerm::card(b), self.constant()),
            };
        }
        match self.rng.gen_range(0..7) {
            0 => Formula::Atom(Atom::SetEq(self.set_term(2), self.set_term(2))),
            1 => Formula::Atom(Atom::SubsetEq(self.set_term(2), self.set_term(2))),
            2 | 3 => Formula::int_eq(self.int_term(2), self.int_term(2)),
            4 | 5 => Formula::int_lt(self.int_term(2), self.int_term(2)),
            _ => {
                let c = self.rng.gen_range(2..=3);
                Formula::Atom(Atom::Dvd(c.into(), self.int_term(2)))
            }
        }
    }

    fn quantified(&mut self, depth: usize) -> Option<Formula> {
        let set_ok = self.used_set < self.shape.max_set;
        let int_ok = self.used_int < self.shape.max_int;
        let sort = match (set_ok, int_ok) {
            (false, false) => return None,
            (true, false) => Sort::Set,
            (false, true) => Sort::Int,
            (true, true) => {
                if self.rng.gen_bool(0.6) {
                    Sort::Set
                } else {
                    Sort::Int
                }
            }
        };
        let q = if self.rng.gen_bool(0.5) { Quant::Exists } else { Quant::Forall };
        let name = if sort == Sort::Set {
            self.used_set += 1;
            SET_NAMES[self.used_set - 1].to_string()
        } else {
            self.used_int += 1;
            INT_NAMES[self.used_int - 1].to_string()
        };
        let scope = if sort == Sort::Set { &mut self.sets } else { &mut self.ints };
        scope.push(name.clone());
        let body = self.formula(depth + 1);
        let scope = if sort == Sort::Set { &mut self.sets } else { &mut self.ints };
        scope.pop();
        Some(Formula::quant(q, name, sort, body))
    }

    fn formula(&mut self, depth: usize) -> Formula {
        if depth >= self.shape.max_depth || self.rng.gen_bool(0.2) {
            return self.atom();
        }
        match self.rng.gen_range(0..10) {
            0..=2 if !self.no_quant => match self.quantified(depth) {
                Some(f) => f,
                None => self.atom(),
            },
            3 => Formula::not(self.formula(depth + 1)),
            4 | 5 => Formula::and(self.formula(depth + 1), self.formula(depth + 1)),
            6 | 7 => Formula::or(self.formula(depth + 1), self.formula(depth + 1)),
            8 => Formula::implies(self.formula(depth + 1), self.formula(depth + 1)),
            9 => {
                let outer = std::mem::replace(&mut self.no_quant, true);
                let f = Formula::iff(self.formula(depth + 1), self.formula(depth + 1));
                self.no_quant = outer;
                f
            }
            _ => self.atom(),
        }
    }
}

/// One random formula. Sentences start with at least one quantifier; free set
/// variables come from `a, b, c`.
pub fn random_formula(rng: &mut ChaCha8Rng, shape: Shape) -> Formula {
    let mut g = Gen {
        sets: FREE_SETS[..shape.free_sets].iter().map(|s| s.to_string()).collect(),
        ints: Vec::new(),
        rng,
        shape,
        used_set: 0,
        used_int: 0,
        no_quant: false,
    };
    g.quantified(0).unwrap_or_else(|| g.formula(0))
}

/// `n` formulas from a fixed seed.
pub fn corpus(seed: u64, n: usize, shape: Shape) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_formula(&mut rng, shape)).collect()
}

/// Sentences with bounded integer quantifiers: `ex int v. -B <= v & v <= B & ...`.
/// Brute-force enumeration over `[-B, B]` decides them exactly.
pub fn bounded_pa(rng: &mut ChaCha8Rng, bound: i64, vars: usize, free: &[&str]) -> Formula {
    fn term(rng: &mut ChaCha8Rng, scope: &[String], depth: usize) -> IntTerm {
        if depth == 0 || rng.gen_bool(0.4) {
            if !scope.is_empty() && rng.gen_bool(0.7) {
                return IntTerm::var(scope[rng.gen_range(0..scope.len())].clone());
            }
            return IntTerm::int(rng.gen_range(-4..=4));
        }
        match rng.gen_range(0..3) {
            0 => IntTerm::add(term(rng, scope, depth - 1), term(rng, scope, depth - 1)),
            1 => IntTerm::sub(term(rng, scope, depth - 1), term(rng, scope, depth - 1)),
            _ => IntTerm::mul(rng.gen_range(-3..=3), term(rng, scope, depth - 1)),
        }
    }
    fn atom(rng: &mut ChaCha8Rng, scope: &[String]) -> Formula {
        match rng.gen_range(0..5) {
            0 | 1 => Formula::int_lt(term(rng, scope, 2), term(rng, scope, 2)),
            2 | 3 => Formula::int_eq(term(rng, scope, 2), term(rng, scope, 2)),
            _ => Formula::Atom(Atom::Dvd(rng.gen_range(2..=4).into(), term(rng, scope, 2))),
        }
    }
    fn matrix(rng: &mut ChaCha8Rng, scope: &[String], depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.3) {
            return atom(rng, scope);
        }
        match rng.gen_range(0..4) {
            0 => Formula::not(matrix(rng, scope, depth - 1)),
            1 => Formula::and(matrix(rng, scope, depth - 1), matrix(rng, scope, depth - 1)),
            2 => Formula::or(matrix(rng, scope, depth - 1), matrix(rng, scope, depth - 1)),
            _ => Formula::implies(matrix(rng, scope, depth - 1), matrix(rng, scope, depth - 1)),
        }
    }
    let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    let mut prefix = Vec::new();
    for i in 0..vars {
        let v = INT_NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("v{i}"));
        prefix.push((if rng.gen_bool(0.5) { Quant::Exists } else { Quant::Forall }, v.clone()));
        scope.push(v);
    }
    let body = matrix(rng, &scope, 3);
    prefix.into_iter().rev().fold(body, |acc, (q, v)| {
        let x = IntTerm::var(v.clone());
        let range = Formula::and(Formula::int_le(IntTerm::int(-bound), x.clone()), Formula::int_le(x, IntTerm::int(bound)));
        match q {
            Quant::Exists => Formula::exists(v, Sort::Int, Formula::and(range, acc)),
            Quant::Forall => Formula::forall(v, Sort::Int, Formula::implies(range, acc)),
        }
    })
}

/// Evaluates a Presburger formula whose quantifiers all range over `[-B, B]`.
pub fn brute_force_pa(f: &Formula, bound: i64, env: &mut Vec<(String, i64)>) -> bool {
    fn term(t: &IntTerm, env: &[(String, i64)]) -> i64 {
        match t {
            IntTerm::Var(v) => env.iter().rev().find(|(n, _)| n == v).map(|(_, x)| *x).expect("bound"),
            IntTerm::Const(c) => c.try_into().expect("small"),
            IntTerm::Add(a, b) => term(a, env) + term(b, env),
            IntTerm::Sub(a, b) => term(a, env) - term(b, env),
            IntTerm::MulConst(c, a) => i64::try_from(c).expect("small") * term(a, env),
            other => panic!("not Presburger: {other:?}"),
        }
    }
    match f {
        Formula::Atom(Atom::True) => true,
        Formula::Atom(Atom::False) => false,
        Formula::Atom(Atom::IntEq(a, b)) => term(a, env) == term(b, env),
        Formula::Atom(Atom::IntLt(a, b)) => term(a, env) < term(b, env),
        Formula::Atom(Atom::Dvd(c, t)) => term(t, env).rem_euclid(i64::try_from(c).expect("small")) == 0,
        Formula::Atom(a) => panic!("not Presburger: {a:?}"),
        Formula::Not(a) => !brute_force_pa(a, bound, env),
        Formula::And(a, b) => brute_force_pa(a, bound, env) && brute_force_pa(b, bound, env),
        Formula::Or(a, b) => brute_force_pa(a, bound, env) || brute_force_pa(b, bound, env),
        Formula::Implies(a, b) => !brute_force_pa(a, bound, env) || brute_force_pa(b, bound, env),
        Formula::Iff(a, b) => brute_force_pa(a, bound, env) == brute_force_pa(b, bound, env),
        Formula::Exists(v, _, body) | Formula::Forall(v, _, body) => {
            let ex = matches!(f, Formula::Exists(..));
            for x in -bound..=bound {
                env.push((v.clone(), x));
                let r = brute_force_pa(body, bound, env);
                env.pop();
                if r == ex {
                    return ex;
                }
            }
            !ex
        }
    }
}
