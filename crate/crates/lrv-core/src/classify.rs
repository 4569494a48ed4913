//! Syntactic fragment membership and the single-sided signature check.

use crate::ast::{Dir, Formula, FragmentFlags, Signature};

/// True iff `f` stays inside the past-time nested grammar: boolean variables,
/// constants, backward local tests, past equality obligations, conjunction,
/// disjunction, negation, previous, since. With `allow_f`, `F` and `G` are
/// admitted as well.
fn nest_conforms(f: &Formula, allow_f: bool) -> bool {
    match f {
        Formula::True | Formula::False | Formula::Bool(_) => true,
        Formula::LocalEq { j, .. } => *j <= 0,
        Formula::Oblig { dir: Dir::Past, neq: false, nested, .. } => nest_conforms(nested, allow_f),
        Formula::Oblig { .. } => false,
        Formula::Not(a) | Formula::Prev(a) => nest_conforms(a, allow_f),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Since(a, b) => {
            nest_conforms(a, allow_f) && nest_conforms(b, allow_f)
        }
        Formula::Finally(a) | Formula::Globally(a) => allow_f && nest_conforms(a, allow_f),
        _ => false,
    }
}

pub fn classify_fragment(phi: &Formula, _sig: &Signature) -> FragmentFlags {
    let mut flags = FragmentFlags {
        no_nested: true,
        no_diseq: true,
        no_past_obl: true,
        no_fut_obl: true,
        nested_past_only: true,
        nested_f_allowed: true,
    };
    phi.visit(&mut |f| {
        if let Formula::Oblig { dir, neq, nested, .. } = f {
            if **nested != Formula::True {
                flags.no_nested = false;
            }
            if *neq {
                flags.no_diseq = false;
            }
            match dir {
                Dir::Past => flags.no_past_obl = false,
                Dir::Future => flags.no_fut_obl = false,
            }
            if !nest_conforms(nested, false) {
                flags.nested_past_only = false;
            }
            if !nest_conforms(nested, true) {
                flags.nested_f_allowed = false;
            }
        }
    });
    flags
}

/// True iff the environment owns only booleans and the system only data.
pub fn check_single_sided(sig: &Signature) -> bool {
    sig.env_datas.is_empty() && sig.sys_bools.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Formula as Fm, Owner, VarKind};

    fn flags(f: &Fm) -> FragmentFlags {
        classify_fragment(f, &Signature::new())
    }

    #[test]
    fn obligation_free_formula_is_in_every_fragment() {
        let f = Fm::eq("proc", 1, "log")
            .globally()
            .and(Fm::boolv("lf").not().implies(Fm::eq("log", -1, "proc").not()).globally());
        let fl = flags(&f);
        assert!(fl.no_nested && fl.no_diseq && fl.no_past_obl && fl.no_fut_obl);
        assert!(fl.nested_past_only && fl.nested_f_allowed);
    }

    #[test]
    fn future_obligation_clears_the_future_flag() {
        let fl = flags(&Fm::fut_eq("x", "y", Fm::True));
        assert!(!fl.no_fut_obl);
        assert!(fl.no_past_obl && fl.no_diseq && fl.no_nested);
    }

    #[test]
    fn f_inside_a_nest_is_only_in_the_extended_grammar() {
        let nest = Fm::boolv("p").and(Fm::boolv("q").finally().not());
        let f = Fm::past_eq("x", "x", nest).finally();
        let fl = flags(&f);
        assert!(!fl.no_nested);
        assert!(fl.no_diseq);
        assert!(fl.no_fut_obl);
        assert!(!fl.nested_past_only);
        assert!(fl.nested_f_allowed);
    }

    #[test]
    fn pure_past_nest_stays_in_both_nested_grammars() {
        let nest = Fm::boolv("p").since(Fm::eq("x", -1, "y")).and(Fm::past_eq("x", "y", Fm::True));
        let fl = flags(&Fm::past_eq("x", "x", nest));
        assert!(fl.nested_past_only && fl.nested_f_allowed);
        assert!(!fl.no_nested);
    }

    #[test]
    fn forward_local_test_in_nest_leaves_the_grammar() {
        let fl = flags(&Fm::past_eq("x", "x", Fm::eq("x", 1, "x")));
        assert!(!fl.nested_past_only && !fl.nested_f_allowed);
    }

    #[test]
    fn disequality_nest_leaves_the_grammar() {
        let fl = flags(&Fm::past_eq("x", "x", Fm::past_neq("x", "x", Fm::True)));
        assert!(!fl.nested_past_only);
        assert!(!fl.no_diseq);
    }

    #[test]
    fn single_sided_checks() {
        let mut sig = Signature::new();
        sig.declare(Owner::Env, VarKind::Bool, "lf").unwrap();
        sig.declare(Owner::Sys, VarKind::Data, "proc").unwrap();
        sig.declare(Owner::Sys, VarKind::Data, "log").unwrap();
        assert!(check_single_sided(&sig));
        let mut sig2 = Signature::new();
        sig2.declare(Owner::Env, VarKind::Data, "y").unwrap();
        assert!(!check_single_sided(&sig2));
        assert!(check_single_sided(&Signature::new()));
    }
}
