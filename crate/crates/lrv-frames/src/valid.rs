use crate::matching::matches;
use crate::sets::{boolean_consistent, initially_consistent_set, one_step_consistent_sets};
use crate::types::{Constraint, Frame, FrameContext, Mode, RepetitionHistory};
use lrv_core::{Dir, Formula};
use std::collections::BTreeSet;
use std::fmt;

/// All constraints a frame over this context may mention, in ascending order.
pub fn constraint_universe(ctx: &FrameContext) -> Vec<Constraint> {
    let mut out = Vec::new();
    for i in 0..=ctx.l {
        for q in &ctx.bvars {
            out.push(Constraint::BoolAt(i, q.clone()));
        }
    }
    for i in 0..=ctx.l {
        for x in &ctx.dvars {
            for j in 0..=ctx.l {
                for y in &ctx.dvars {
                    out.push(Constraint::EqAt(i, x.clone(), j, y.clone()));
                }
            }
        }
    }
    for i in 0..=ctx.l {
        for x in &ctx.dvars {
            for y in &ctx.dvars {
                for psi in &ctx.nested {
                    out.push(Constraint::OblAt(i, x.clone(), y.clone(), psi.clone()));
                }
            }
        }
    }
    out.sort();
    out
}

/// First condition a candidate frame violates, if any. `Shape` covers typing
/// problems that the numbered conditions presuppose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrameViolation {
    Shape(String),
    F0,
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
    F10,
}

impl fmt::Display for FrameViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameViolation::Shape(msg) => write!(f, "shape: {msg}"),
            other => write!(f, "{other:?}"),
        }
    }
}

fn in_universe(ctx: &FrameContext, c: &Constraint) -> bool {
    match c {
        Constraint::BoolAt(i, q) => *i <= ctx.l && ctx.bvars.contains(q),
        Constraint::EqAt(i, x, j, y) => {
            *i <= ctx.l && *j <= ctx.l && ctx.dvars.contains(x) && ctx.dvars.contains(y)
        }
        Constraint::OblAt(i, x, y, psi) => {
            *i <= ctx.l
                && ctx.dvars.contains(x)
                && ctx.dvars.contains(y)
                && ctx.nested.contains(psi)
        }
    }
}

fn shape_check(ctx: &FrameContext, fr: &Frame) -> Result<(), FrameViolation> {
    let fail = |msg: String| Err(FrameViolation::Shape(msg));
    if fr.is_bottom() {
        return fail("bottom frame is only a placeholder, not a frame".into());
    }
    let e = fr.level();
    if e > ctx.l {
        return fail(format!("level {e} exceeds window length {}", ctx.l));
    }
    for c in &fr.omega {
        if !in_universe(ctx, c) {
            return fail(format!("constraint {c} is outside the context universe"));
        }
    }
    match ctx.mode {
        Mode::Simple => {
            if !fr.phi_fr.is_empty() || !fr.h_fr.is_empty() {
                return fail("simple mode carries no nested decorations".into());
            }
        }
        Mode::Nested => {
            if fr.phi_fr.len() != e + 1 {
                return fail(format!(
                    "need {} formula sets for level {e}, found {}",
                    e + 1,
                    fr.phi_fr.len()
                ));
            }
            for set in &fr.phi_fr {
                if let Some(bad) = set.iter().find(|f| !ctx.cl().contains(*f)) {
                    return fail(format!("formula set member {bad} is outside the closure"));
                }
            }
            let mut expected = BTreeSet::new();
            for x in &ctx.dvars {
                for i in 0..=e {
                    expected.insert((x.clone(), i));
                }
            }
            let got: BTreeSet<_> = fr.h_fr.keys().cloned().collect();
            if got != expected {
                return fail("history table must cover exactly the variables and levels".into());
            }
            for h in fr.h_fr.values() {
                for (vars, psis) in &h.0 {
                    if vars.is_empty() || !vars.is_subset(&ctx.dvars) {
                        return fail("history variable groups must be nonempty context subsets".into());
                    }
                    if !psis.is_subset(&ctx.nested) {
                        return fail("history formula sets must draw from the nested pool".into());
                    }
                }
            }
        }
    }
    Ok(())
}

fn eq_pairs(fr: &Frame) -> Vec<(usize, &String, usize, &String)> {
    fr.omega
        .iter()
        .filter_map(|c| match c {
            Constraint::EqAt(i, x, j, y) => Some((*i, x, *j, y)),
            _ => None,
        })
        .collect()
}

/// Full validity check, reporting the first violated condition.
pub fn check_frame(ctx: &FrameContext, fr: &Frame) -> Result<(), FrameViolation> {
    shape_check(ctx, fr)?;
    let e = fr.level();

    // F0: all indices within the level
    if fr.omega.iter().any(|c| c.max_index() > e) {
        return Err(FrameViolation::F0);
    }

    // F1: reflexivity at every level
    for i in 0..=e {
        for x in &ctx.dvars {
            if !fr.has_eq(i, x, i, x) {
                return Err(FrameViolation::F1);
            }
        }
    }

    let eqs = eq_pairs(fr);

    // F2: symmetry
    for (i, x, j, y) in &eqs {
        if !fr.has_eq(*j, y, *i, x) {
            return Err(FrameViolation::F2);
        }
    }

    // F3: transitivity
    for (i, x, j, y) in &eqs {
        for (j2, y2, k, z) in &eqs {
            if j2 == j && y2 == y && !fr.has_eq(*i, x, *k, z) {
                return Err(FrameViolation::F3);
            }
        }
    }

    // F4: obligations cohere along equalities
    for (i, x, j, y) in &eqs {
        let (i, x, j, y) = (*i, *x, *j, *y);
        if i > j {
            continue; // the symmetric constraint is handled when visited
        }
        if i == j {
            for z in &ctx.dvars {
                for psi in &ctx.nested {
                    let a = fr.has(&Constraint::OblAt(i, x.clone(), z.clone(), psi.clone()));
                    let b = fr.has(&Constraint::OblAt(j, y.clone(), z.clone(), psi.clone()));
                    if a != b {
                        return Err(FrameViolation::F4);
                    }
                }
            }
        } else {
            let owed_to_x: Vec<&Formula> = match ctx.mode {
                Mode::Simple => vec![&Formula::True],
                Mode::Nested => fr.phi_fr[i].iter().filter(|f| ctx.nested.contains(*f)).collect(),
            };
            for psi in owed_to_x {
                if !fr.has(&Constraint::OblAt(j, y.clone(), x.clone(), psi.clone())) {
                    return Err(FrameViolation::F4);
                }
            }
            for z in &ctx.dvars {
                for psi in &ctx.nested {
                    let later = fr.has(&Constraint::OblAt(j, y.clone(), z.clone(), psi.clone()));
                    let earlier = fr.has(&Constraint::OblAt(i, x.clone(), z.clone(), psi.clone()));
                    let bridged = (i..j).any(|j2| {
                        fr.has_eq(j, y, j2, z)
                            && match ctx.mode {
                                Mode::Simple => true,
                                Mode::Nested => {
                                    fr.phi_fr[j2].contains(psi) && ctx.nested.contains(psi)
                                }
                            }
                    });
                    if later != (earlier || bridged) {
                        return Err(FrameViolation::F4);
                    }
                }
            }
        }
    }

    if ctx.mode == Mode::Nested {
        // F5: histories propagate along equalities
        for (i, x, j, y) in &eqs {
            let (i, x, j, y) = (*i, *x, *j, *y);
            if i > j {
                continue;
            }
            if i == j {
                if fr.hist(x, i) != fr.hist(y, j) {
                    return Err(FrameViolation::F5);
                }
            } else {
                let intermediate = ((i + 1)..j)
                    .any(|j2| ctx.dvars.iter().any(|z| fr.has_eq(i, x, j2, z)));
                if !intermediate {
                    let psis: BTreeSet<Formula> = fr.phi_fr[i]
                        .iter()
                        .filter(|f| ctx.nested.contains(*f))
                        .cloned()
                        .collect();
                    let expected = fr.hist(x, i).with(fr.class(x, i), psis);
                    if fr.hist(y, j) != &expected {
                        return Err(FrameViolation::F5);
                    }
                }
            }
        }

        // F6: each history discharges the recorded obligation
        for x in &ctx.dvars {
            for i in 0..=e {
                if !matches(fr.hist(x, i), &fr.po(x, i)) {
                    return Err(FrameViolation::F6);
                }
            }
        }

        // F7-F9: previous-step chains over atoms agree with the constraints
        for member in ctx.cl() {
            let (depth, core) = strip_prevs(member);
            match core {
                Formula::Bool(q) => {
                    for i in depth..=e {
                        let in_phi = fr.phi_fr[i].contains(member);
                        let in_omega = fr.has(&Constraint::BoolAt(i - depth, q.clone()));
                        if in_phi != in_omega {
                            return Err(FrameViolation::F7);
                        }
                    }
                }
                Formula::Oblig { dir: Dir::Past, neq: false, x, y, nested } => {
                    for i in depth..=e {
                        let in_phi = fr.phi_fr[i].contains(member);
                        let c = Constraint::OblAt(
                            i - depth,
                            x.clone(),
                            y.clone(),
                            (**nested).clone(),
                        );
                        if in_phi != fr.has(&c) {
                            return Err(FrameViolation::F8);
                        }
                    }
                }
                Formula::LocalEq { x, j, y } => {
                    let back = (-j) as usize;
                    for i in 0..=e {
                        if i < depth + back {
                            continue;
                        }
                        let in_phi = fr.phi_fr[i].contains(member);
                        let in_omega = fr.has_eq(i - depth, x, i - depth - back, y);
                        if in_phi != in_omega {
                            return Err(FrameViolation::F9);
                        }
                    }
                }
                _ => {}
            }
        }

        // F10: each level locally coherent, adjacent levels step-coherent
        for i in 0..=e {
            if !boolean_consistent(&fr.phi_fr[i], ctx.cl()) {
                return Err(FrameViolation::F10);
            }
            if i < e && !one_step_consistent_sets(&fr.phi_fr[i], &fr.phi_fr[i + 1], ctx.cl()) {
                return Err(FrameViolation::F10);
            }
        }
    }

    Ok(())
}

pub(crate) fn strip_prevs(f: &Formula) -> (usize, &Formula) {
    match f {
        Formula::Prev(inner) => {
            let (d, core) = strip_prevs(inner);
            (d + 1, core)
        }
        other => (0, other),
    }
}

pub fn is_valid_frame(ctx: &FrameContext, fr: &Frame) -> bool {
    check_frame(ctx, fr).is_ok()
}

/// Whether the frame can sit at the very start of a model.
pub fn initially_consistent(ctx: &FrameContext, fr: &Frame) -> bool {
    match ctx.mode {
        Mode::Simple => true,
        Mode::Nested => {
            assert!(!fr.is_bottom(), "bottom frame has no first position");
            initially_consistent_set(&fr.phi_fr[0], ctx.cl())
        }
    }
}

/// Histories drawn from positions strictly before the anchor are per-class;
/// convenience used by extraction and enumeration.
pub fn phi_cap_pool(ctx: &FrameContext, set: &BTreeSet<Formula>) -> BTreeSet<Formula> {
    set.iter().filter(|f| ctx.nested.contains(*f)).cloned().collect()
}

#[allow(dead_code)]
fn _assert_send_sync()
where
    Frame: Send + Sync,
    RepetitionHistory: Send + Sync,
{
}
