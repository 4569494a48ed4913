#![allow(dead_code)] // each integration test binary uses a subset

use lrv_core::{Formula, Model, Owner, Signature, Valuation, VarKind};
use proptest::prelude::*;

/// Two environment booleans and two system data variables; enough to exercise
/// every operator.
pub fn test_sig() -> Signature {
    let mut s = Signature::new();
    s.declare(Owner::Env, VarKind::Bool, "a").unwrap();
    s.declare(Owner::Env, VarKind::Bool, "b").unwrap();
    s.declare(Owner::Sys, VarKind::Data, "x").unwrap();
    s.declare(Owner::Sys, VarKind::Data, "y").unwrap();
    s
}

fn arb_data_var() -> impl Strategy<Value = String> {
    prop_oneof![Just("x".to_string()), Just("y".to_string())]
}

fn arb_bool_var() -> impl Strategy<Value = String> {
    prop_oneof![Just("a".to_string()), Just("b".to_string())]
}

fn arb_atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        arb_bool_var().prop_map(Formula::Bool),
        (arb_data_var(), -2..=2i32, arb_data_var())
            .prop_map(|(x, j, y)| Formula::LocalEq { x, j, y }),
        (arb_data_var(), arb_data_var(), any::<bool>(), any::<bool>()).prop_map(
            |(x, y, fut, neq)| {
                if fut {
                    if neq {
                        Formula::fut_neq(&x, &y, Formula::True)
                    } else {
                        Formula::fut_eq(&x, &y, Formula::True)
                    }
                } else if neq {
                    Formula::past_neq(&x, &y, Formula::True)
                } else {
                    Formula::past_eq(&x, &y, Formula::True)
                }
            }
        ),
    ]
}

/// Random formulas over `test_sig`, all operators, bounded depth. Obligation
/// nests are kept shallow: one layer of booleans and past material.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let nest = prop_oneof![
        Just(Formula::True),
        arb_bool_var().prop_map(Formula::Bool),
        (arb_data_var(), -1..=0i32, arb_data_var())
            .prop_map(|(x, j, y)| Formula::LocalEq { x, j, y }),
    ];
    let nested_oblig = (arb_data_var(), arb_data_var(), nest).prop_map(|(x, y, n)| {
        Formula::past_eq(&x, &y, n)
    });
    let leaf = prop_oneof![arb_atom(), nested_oblig];
    leaf.prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| a.not()),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            inner.clone().prop_map(|a| a.next()),
            inner.clone().prop_map(|a| Formula::WeakNext(Box::new(a))),
            inner.clone().prop_map(|a| a.prev()),
            inner.clone().prop_map(|a| Formula::WeakPrev(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.until(b)),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Release(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.since(b)),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Trigger(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| a.finally()),
            inner.clone().prop_map(|a| a.globally()),
            inner.clone().prop_map(|a| a.once()),
            inner.prop_map(|a| a.historically()),
        ]
    })
}

/// Random models over `test_sig` with 1..=5 positions and data ids below 3.
pub fn arb_model() -> impl Strategy<Value = Model> {
    prop::collection::vec((any::<bool>(), any::<bool>(), 0..3u32, 0..3u32), 1..=5).prop_map(
        |rows| {
            Model::new(
                rows.into_iter()
                    .map(|(a, b, x, y)| {
                        Valuation::new()
                            .with_bool("a", a)
                            .with_bool("b", b)
                            .with_data("x", x)
                            .with_data("y", y)
                    })
                    .collect(),
            )
        },
    )
}

/// Every model of the given length over data variables x, y with ids `0..ids`.
pub fn all_data_models(len: usize, ids: u32) -> Vec<Model> {
    let mut out = Vec::new();
    let total = (ids as u64 * ids as u64).pow(len as u32);
    for mut code in 0..total {
        let mut vals = Vec::with_capacity(len);
        for _ in 0..len {
            let x = (code % ids as u64) as u32;
            code /= ids as u64;
            let y = (code % ids as u64) as u32;
            code /= ids as u64;
            vals.push(Valuation::new().with_data("x", x).with_data("y", y));
        }
        out.push(Model::new(vals));
    }
    out
}
