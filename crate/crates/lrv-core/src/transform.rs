//! Formula rewrites: pushing negative local offsets outward, negation normal
//! form, X-length, and compilation of past disequality obligations into
//! equality obligations over fresh variables.
//!
//! None of the rewrites descend into obligation nests. Nests live in the
//! past-time sub-grammar, where negative offsets are native and negation is
//! handled by closure sets, so rewriting inside them would push formulas out
//! of that grammar.

use crate::ast::{Dir, Formula, Owner, Signature, VarKind};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FragmentError {
    #[error("future obligations are not supported by this transformation")]
    FutureObligation,
    #[error("obligation nests other than `true` are not supported by this transformation")]
    NonTrivialNest,
}

/// Rewrites every top-level `eq(x, -j, y)` with `j > 0` into `Y^j eq(y, j, x)`.
pub fn normalize_local(phi: &Formula) -> Formula {
    match phi {
        Formula::LocalEq { x, j, y } if *j < 0 => {
            let k = (-*j) as usize;
            Formula::eq(y, -*j, x).prev_n(k)
        }
        _ => map_shallow(phi, &mut normalize_local),
    }
}

/// Largest forward offset of any top-level local test; 0 when there is none.
/// Panics on a negative offset: run `normalize_local` first.
pub fn x_length(phi: &Formula) -> usize {
    let mut max = 0usize;
    walk_shallow(phi, &mut |f| {
        if let Formula::LocalEq { j, .. } = f {
            assert!(*j >= 0, "negative local offset {j}; normalize_local must run first");
            max = max.max(*j as usize);
        }
    });
    max
}

/// Negation normal form: negations pushed down to boolean variables, local
/// tests and obligations, with weak-step and release/trigger duals introduced
/// as needed. Implication is expanded.
pub fn to_nnf(phi: &Formula) -> Formula {
    match phi {
        Formula::True
        | Formula::False
        | Formula::Bool(_)
        | Formula::LocalEq { .. }
        | Formula::Oblig { .. } => phi.clone(),
        Formula::Not(a) => neg_nnf(a),
        Formula::And(a, b) => to_nnf(a).and(to_nnf(b)),
        Formula::Or(a, b) => to_nnf(a).or(to_nnf(b)),
        Formula::Implies(a, b) => neg_nnf(a).or(to_nnf(b)),
        Formula::Next(a) => to_nnf(a).next(),
        Formula::WeakNext(a) => Formula::WeakNext(Box::new(to_nnf(a))),
        Formula::Prev(a) => to_nnf(a).prev(),
        Formula::WeakPrev(a) => Formula::WeakPrev(Box::new(to_nnf(a))),
        Formula::Until(a, b) => to_nnf(a).until(to_nnf(b)),
        Formula::Release(a, b) => Formula::Release(Box::new(to_nnf(a)), Box::new(to_nnf(b))),
        Formula::Since(a, b) => to_nnf(a).since(to_nnf(b)),
        Formula::Trigger(a, b) => Formula::Trigger(Box::new(to_nnf(a)), Box::new(to_nnf(b))),
        Formula::Finally(a) => to_nnf(a).finally(),
        Formula::Globally(a) => to_nnf(a).globally(),
        Formula::Once(a) => to_nnf(a).once(),
        Formula::Historically(a) => to_nnf(a).historically(),
    }
}

fn neg_nnf(phi: &Formula) -> Formula {
    match phi {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Bool(_) | Formula::LocalEq { .. } | Formula::Oblig { .. } => phi.clone().not(),
        Formula::Not(a) => to_nnf(a),
        Formula::And(a, b) => neg_nnf(a).or(neg_nnf(b)),
        Formula::Or(a, b) => neg_nnf(a).and(neg_nnf(b)),
        Formula::Implies(a, b) => to_nnf(a).and(neg_nnf(b)),
        Formula::Next(a) => Formula::WeakNext(Box::new(neg_nnf(a))),
        Formula::WeakNext(a) => neg_nnf(a).next(),
        Formula::Prev(a) => Formula::WeakPrev(Box::new(neg_nnf(a))),
        Formula::WeakPrev(a) => neg_nnf(a).prev(),
        Formula::Until(a, b) => Formula::Release(Box::new(neg_nnf(a)), Box::new(neg_nnf(b))),
        Formula::Release(a, b) => neg_nnf(a).until(neg_nnf(b)),
        Formula::Since(a, b) => Formula::Trigger(Box::new(neg_nnf(a)), Box::new(neg_nnf(b))),
        Formula::Trigger(a, b) => neg_nnf(a).since(neg_nnf(b)),
        Formula::Finally(a) => neg_nnf(a).globally(),
        Formula::Globally(a) => neg_nnf(a).finally(),
        Formula::Once(a) => neg_nnf(a).historically(),
        Formula::Historically(a) => neg_nnf(a).once(),
    }
}

/// Compiles away past disequality obligations.
///
/// A positive `D-(x, y; true)` becomes `!eq(x, 0, x') & E-(x', y; true)` for a
/// fresh data variable `x'` owned by `x`'s player: the player witnesses the
/// differing past value in `x'`. One fresh variable serves all occurrences of
/// the same `(x, y)` pair. A negated `!D-(x, y; true)` is replaced by an
/// equivalent formula stating that every past `y` carries the current `x`
/// value. Inputs must contain no future obligations and only trivial nests;
/// negations are pushed to atoms first, and the result is normalized.
pub fn remove_disequalities(
    phi: &Formula,
    sig: &Signature,
) -> Result<(Signature, Formula), FragmentError> {
    let mut bad: Option<FragmentError> = None;
    phi.visit(&mut |f| {
        if let Formula::Oblig { dir, nested, .. } = f {
            if *dir == Dir::Future {
                bad.get_or_insert(FragmentError::FutureObligation);
            } else if **nested != Formula::True {
                bad.get_or_insert(FragmentError::NonTrivialNest);
            }
        }
    });
    if let Some(e) = bad {
        return Err(e);
    }
    let mut sig = sig.clone();
    let mut fresh: BTreeMap<(String, String), String> = BTreeMap::new();
    let rewritten = rw_diseq(&to_nnf(phi), &mut sig, &mut fresh);
    Ok((sig, normalize_local(&rewritten)))
}

fn fresh_witness(
    sig: &mut Signature,
    fresh: &mut BTreeMap<(String, String), String>,
    x: &str,
    y: &str,
) -> String {
    if let Some(name) = fresh.get(&(x.to_string(), y.to_string())) {
        return name.clone();
    }
    let owner = match sig.lookup(x) {
        Some((o, _)) => o,
        None => Owner::Sys,
    };
    let base = format!("{x}__neq_past__{y}");
    let mut name = base.clone();
    let mut k = 2;
    while sig.lookup(&name).is_some() {
        name = format!("{base}_{k}");
        k += 1;
    }
    sig.declare(owner, VarKind::Data, &name).expect("fresh name collided");
    fresh.insert((x.to_string(), y.to_string()), name.clone());
    name
}

fn rw_diseq(
    phi: &Formula,
    sig: &mut Signature,
    fresh: &mut BTreeMap<(String, String), String>,
) -> Formula {
    match phi {
        Formula::Oblig { dir: Dir::Past, neq: true, x, y, .. } => {
            let xp = fresh_witness(sig, fresh, x, y);
            Formula::eq(x, 0, &xp).not().and(Formula::past_eq(&xp, y, Formula::True))
        }
        Formula::Not(inner) => match &**inner {
            Formula::Oblig { dir: Dir::Past, neq: true, x, y, .. } => {
                // "every strictly earlier y equals the current x": the last y
                // carries it and y was constant before that. The constancy
                // check must stop at the predecessor, hence the Y guard.
                let at_start = Formula::True.prev().not();
                let y_constant = at_start
                    .clone()
                    .or(Formula::eq(y, -1, y))
                    .historically()
                    .prev();
                at_start.or(Formula::eq(x, -1, y).and(y_constant))
            }
            _ => phi.clone(),
        },
        _ => map_shallow(phi, &mut |f| rw_diseq(f, sig, fresh)),
    }
}

/// Rebuilds the formula by applying `f` to children; obligation nests are
/// kept as-is (atoms for the purposes of these rewrites).
fn map_shallow(phi: &Formula, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
    match phi {
        Formula::True
        | Formula::False
        | Formula::Bool(_)
        | Formula::LocalEq { .. }
        | Formula::Oblig { .. } => phi.clone(),
        Formula::Not(a) => f(a).not(),
        Formula::And(a, b) => f(a).and(f(b)),
        Formula::Or(a, b) => f(a).or(f(b)),
        Formula::Implies(a, b) => f(a).implies(f(b)),
        Formula::Next(a) => f(a).next(),
        Formula::WeakNext(a) => Formula::WeakNext(Box::new(f(a))),
        Formula::Prev(a) => f(a).prev(),
        Formula::WeakPrev(a) => Formula::WeakPrev(Box::new(f(a))),
        Formula::Until(a, b) => f(a).until(f(b)),
        Formula::Release(a, b) => Formula::Release(Box::new(f(a)), Box::new(f(b))),
        Formula::Since(a, b) => f(a).since(f(b)),
        Formula::Trigger(a, b) => Formula::Trigger(Box::new(f(a)), Box::new(f(b))),
        Formula::Finally(a) => f(a).finally(),
        Formula::Globally(a) => f(a).globally(),
        Formula::Once(a) => f(a).once(),
        Formula::Historically(a) => f(a).historically(),
    }
}

fn walk_shallow(phi: &Formula, f: &mut impl FnMut(&Formula)) {
    f(phi);
    match phi {
        Formula::True
        | Formula::False
        | Formula::Bool(_)
        | Formula::LocalEq { .. }
        | Formula::Oblig { .. } => {}
        Formula::Not(a)
        | Formula::Next(a)
        | Formula::WeakNext(a)
        | Formula::Prev(a)
        | Formula::WeakPrev(a)
        | Formula::Finally(a)
        | Formula::Globally(a)
        | Formula::Once(a)
        | Formula::Historically(a) => walk_shallow(a, f),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Until(a, b)
        | Formula::Release(a, b)
        | Formula::Since(a, b)
        | Formula::Trigger(a, b) => {
            walk_shallow(a, f);
            walk_shallow(b, f);
        }
    }
}
