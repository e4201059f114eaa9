//! Printing then parsing returns the same tree.

use bapa::text::parse_formula_in;
use bapa::{print_formula, Atom, Formula, IntTerm, Quant, SetTerm, Sort};
use proptest::prelude::*;

const SETS: [&str; 3] = ["a", "b", "x"];
const INTS: [&str; 2] = ["n", "k"];

fn free() -> Vec<(String, Sort)> {
    let mut out: Vec<(String, Sort)> = SETS.iter().map(|s| (s.to_string(), Sort::Set)).collect();
    out.extend(INTS.iter().map(|s| (s.to_string(), Sort::Int)));
    out.push(("p".into(), Sort::Prop));
    out
}

fn set_term() -> impl Strategy<Value = SetTerm> {
    let leaf = prop_oneof![
        prop::sample::select(SETS.to_vec()).prop_map(SetTerm::var),
        Just(SetTerm::Empty),
        Just(SetTerm::Univ),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SetTerm::union(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SetTerm::inter(a, b)),
            inner.prop_map(SetTerm::compl),
        ]
    })
}

fn int_term() -> impl Strategy<Value = IntTerm> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(IntTerm::int),
        prop::sample::select(INTS.to_vec()).prop_map(IntTerm::var),
        Just(IntTerm::MaxCard),
        set_term().prop_map(IntTerm::card),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IntTerm::add(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| IntTerm::sub(a, b)),
            (2i64..5, inner).prop_map(|(c, t)| IntTerm::mul(c, t)),
        ]
    })
}

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        (set_term(), set_term()).prop_map(|(a, b)| Formula::Atom(Atom::SetEq(a, b))),
        (set_term(), set_term()).prop_map(|(a, b)| Formula::Atom(Atom::SubsetEq(a, b))),
        (int_term(), int_term()).prop_map(|(a, b)| Formula::int_eq(a, b)),
        (int_term(), int_term()).prop_map(|(a, b)| Formula::int_lt(a, b)),
        (int_term(), int_term()).prop_map(|(a, b)| Formula::int_ge(a, b)),
        (2i64..7, int_term()).prop_map(|(c, t)| Formula::Atom(Atom::Dvd(c.into(), t))),
        set_term().prop_map(|b| Formula::Atom(Atom::Fin(b))),
        Just(Formula::Atom(Atom::PropVar("p".into()))),
        Just(Formula::Atom(Atom::FinU)),
        Just(Formula::tt()),
        Just(Formula::ff()),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(4, 24, 2, |inner| {
        let bound = prop_oneof![
            prop::sample::select(SETS.to_vec()).prop_map(|v| (v, Sort::Set)),
            prop::sample::select(INTS.to_vec()).prop_map(|v| (v, Sort::Int)),
        ];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (any::<bool>(), bound, inner).prop_map(|(e, (v, s), body)| {
                Formula::quant(if e { Quant::Exists } else { Quant::Forall }, v, s, body)
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(f in formula()) {
        let text = print_formula(&f);
        let back = parse_formula_in(&text, &free());
        prop_assert!(back.is_ok(), "{text}: {back:?}");
        prop_assert_eq!(back.unwrap(), f, "{}", text);
    }

    #[test]
    fn printing_is_stable(f in formula()) {
        let once = print_formula(&f);
        let twice = print_formula(&parse_formula_in(&once, &free()).unwrap());
        prop_assert_eq!(once, twice);
    }
}

#[test]
fn named_examples() {
    for src in [
        "all set x. ex set y. card(x inter y) = 1 & y subseteq x",
        "ex int k. dvd(3, k + card(a)) | ~fin(compl(a))",
        "card(a) >= 2 => (p <=> finU)",
        "all set x. all set y. all int k. x seteq y => card(x) - k < MAXC",
    ] {
        let f = parse_formula_in(src, &free()).unwrap();
        assert_eq!(print_formula(&f), src);
    }
}
