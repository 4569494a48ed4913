use crate::types::{PastObligation, RepetitionHistory};

/// Whether the history can discharge the obligation: every owed pair must be
/// assignable to a history entry that contains it, and every history entry
/// must be fully covered by owed pairs. The assignment is found by explicit
/// backtracking over candidate entries per pair.
pub fn matches(h: &RepetitionHistory, o: &PastObligation) -> bool {
    // the coverage direction does not depend on the assignment
    for (vars, psis) in &h.0 {
        for v in vars {
            for p in psis {
                if !o.0.contains(&(v.clone(), p.clone())) {
                    return false;
                }
            }
        }
    }
    let pairs: Vec<_> = o.0.iter().collect();
    let entries: Vec<_> = h.0.iter().collect();
    fn assign(
        pairs: &[&(String, lrv_core::Formula)],
        entries: &[&(std::collections::BTreeSet<String>, std::collections::BTreeSet<lrv_core::Formula>)],
        k: usize,
    ) -> bool {
        if k == pairs.len() {
            return true;
        }
        let (v, p) = pairs[k];
        for (vars, psis) in entries {
            if vars.contains(v) && psis.contains(p) && assign(pairs, entries, k + 1) {
                return true;
            }
        }
        false
    }
    assign(&pairs, &entries, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrv_core::Formula;
    use std::collections::BTreeSet;

    fn ps(name: &str) -> Formula {
        Formula::boolv(name)
    }

    fn vars(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn psis(fs: &[&Formula]) -> BTreeSet<Formula> {
        fs.iter().map(|f| (*f).clone()).collect()
    }

    #[test]
    fn empty_history_matches_empty_obligation() {
        assert!(matches(&RepetitionHistory::empty(), &PastObligation::default()));
    }

    #[test]
    fn uncovered_history_entry_fails() {
        let h = RepetitionHistory::empty().with(vars(&["x"]), psis(&[&ps("p1")]));
        assert!(!matches(&h, &PastObligation::default()));
    }

    #[test]
    fn unassignable_pair_fails() {
        let h = RepetitionHistory::empty().with(vars(&["x"]), psis(&[&ps("p1")]));
        let mut o = PastObligation::default();
        o.0.insert(("x".into(), ps("p1")));
        o.0.insert(("y".into(), ps("p1")));
        assert!(!matches(&h, &o));
    }

    #[test]
    fn two_group_example_matches() {
        let p1 = ps("p1");
        let p2 = ps("p2");
        let p3 = ps("p3");
        let h = RepetitionHistory::empty()
            .with(vars(&["x", "y"]), psis(&[&p1, &p2]))
            .with(vars(&["y", "z"]), psis(&[&p2, &p3]));
        let mut o = PastObligation::default();
        for (v, p) in [
            ("y", &p1),
            ("x", &p2),
            ("x", &p1),
            ("y", &p2),
            ("y", &p3),
            ("z", &p3),
            ("z", &p2),
        ] {
            o.0.insert((v.into(), p.clone()));
        }
        assert!(matches(&h, &o));
        // dropping a pair that some entry owes flips the answer
        let mut o2 = o.clone();
        o2.0.remove(&("x".to_string(), p1.clone()));
        assert!(!matches(&h, &o2));
    }
}
