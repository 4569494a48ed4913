use lrv_core::Formula;
use std::collections::BTreeSet;

/// Negation with double negations collapsed, so `neg(neg(f)) == f`.
pub fn negate(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::Not(Box::new(other.clone())),
    }
}

fn assert_nest_shape(f: &Formula) {
    match f {
        Formula::True
        | Formula::False
        | Formula::Bool(_)
        | Formula::Oblig { dir: lrv_core::Dir::Past, neq: false, .. } => {}
        Formula::LocalEq { j, .. } => {
            assert!(*j <= 0, "nested local tests must point at the past, got offset {j}");
        }
        Formula::Not(a) | Formula::Prev(a) => assert_nest_shape(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Since(a, b) => {
            assert_nest_shape(a);
            assert_nest_shape(b);
        }
        other => panic!("formula {other} is outside the pure-past nest grammar"),
    }
}

/// cl(Φ): close the pool under direct subformulas (conjuncts, disjuncts,
/// negation bodies, previous-step bodies, since operands) and under
/// canonical negation. Obligation atoms are not opened up; their nests are
/// already members of Φ by construction.
pub fn closure(pool: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    let mut out: BTreeSet<Formula> = BTreeSet::new();
    let mut work: Vec<Formula> = pool.iter().cloned().collect();
    for f in &work {
        assert_nest_shape(f);
    }
    while let Some(f) = work.pop() {
        if !out.insert(f.clone()) {
            continue;
        }
        let neg = negate(&f);
        if !out.contains(&neg) {
            work.push(neg);
        }
        match &f {
            Formula::Not(a) | Formula::Prev(a) => {
                work.push((**a).clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Since(a, b) => {
                work.push((**a).clone());
                work.push((**b).clone());
            }
            _ => {}
        }
    }
    out
}

/// Local truth-table coherence of a member set, relative to cl(Φ).
pub fn boolean_consistent(set: &BTreeSet<Formula>, cl: &BTreeSet<Formula>) -> bool {
    if !set.contains(&Formula::True) {
        return false;
    }
    if set.contains(&Formula::False) {
        return false;
    }
    for f in cl {
        let holds = set.contains(f);
        match f {
            Formula::And(a, b) => {
                if holds != (set.contains(a) && set.contains(b)) {
                    return false;
                }
            }
            Formula::Or(a, b) => {
                if holds != (set.contains(a) || set.contains(b)) {
                    return false;
                }
            }
            Formula::Not(a) => {
                if holds == set.contains(a) {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

/// Coherence of two member sets at adjacent positions (earlier, later).
pub fn one_step_consistent_sets(
    earlier: &BTreeSet<Formula>,
    later: &BTreeSet<Formula>,
    cl: &BTreeSet<Formula>,
) -> bool {
    for f in cl {
        match f {
            Formula::Prev(a) => {
                if later.contains(f) != earlier.contains(a) {
                    return false;
                }
            }
            Formula::Since(a, b) => {
                let expect = later.contains(b) || (later.contains(a) && earlier.contains(f));
                if later.contains(f) != expect {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}

/// Coherence of a member set at the first position of a model.
pub fn initially_consistent_set(set: &BTreeSet<Formula>, cl: &BTreeSet<Formula>) -> bool {
    if !boolean_consistent(set, cl) {
        return false;
    }
    for f in cl {
        match f {
            Formula::Prev(_) => {
                if set.contains(f) {
                    return false;
                }
            }
            Formula::Since(_, b) => {
                if set.contains(f) != set.contains(b) {
                    return false;
                }
            }
            _ => {}
        }
    }
    true
}
