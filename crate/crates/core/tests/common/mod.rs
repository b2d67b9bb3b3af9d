#![allow(dead_code)]

use std::sync::Arc;

use halmos_core::{fixtures, FiniteAlgebra, Formula, Term};
use proptest::prelude::*;

/// Terms of the group signature `add/2, neg/1, e/0` over `vars`.
pub fn group_term(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        proptest::sample::select(vars).prop_map(Term::var),
        Just(Term::constant("e")),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app("add", vec![a, b])),
            inner.prop_map(|a| Term::app("neg", vec![a])),
        ]
    })
    .boxed()
}

/// Formulas of the group signature over `x, y, z`; free variables outside
/// `vars` are closed off existentially.
pub fn group_formula(vars: &'static [&'static str], depth: u32) -> BoxedStrategy<Formula> {
    const ALL: &[&str] = &["x", "y", "z"];
    let atom = (group_term(ALL, 2), group_term(ALL, 2)).prop_map(|(a, b)| Formula::eq(a, b));
    atom.prop_recursive(depth, 32, 2, move |inner| {
        let binder = proptest::sample::select(vec!["x", "y", "z"]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (binder.clone(), inner.clone()).prop_map(|(v, a)| Formula::exists(v, a)),
            (binder, inner).prop_map(|(v, a)| Formula::forall(v, a)),
        ]
    })
    .prop_map(move |f| {
        let free = f.free_variables();
        free.iter()
            .filter(|v| !vars.contains(&v.as_str()))
            .fold(f.clone(), |acc, v| Formula::exists(v.clone(), acc))
    })
    .boxed()
}

pub fn groups() -> Vec<Arc<FiniteAlgebra>> {
    vec![
        Arc::new(fixtures::z2()),
        Arc::new(fixtures::z3()),
        Arc::new(fixtures::z2_squared()),
    ]
}
