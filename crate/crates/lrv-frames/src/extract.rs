use crate::types::{Constraint, Frame, FrameContext, FramesError, Mode};
use crate::valid::constraint_universe;
use lrv_core::{eval, Formula, Model};
use std::collections::{BTreeMap, BTreeSet};

fn constraint_holds(sigma: &Model, anchor: usize, c: &Constraint) -> bool {
    match c {
        Constraint::BoolAt(i, q) => sigma.boolv(anchor + i, q),
        Constraint::EqAt(i, x, j, y) => sigma.data(anchor + i, x) == sigma.data(anchor + j, y),
        Constraint::OblAt(i, x, y, psi) => {
            let pos = anchor + i;
            let d = sigma.data(pos, x);
            (1..pos).any(|p| sigma.data(p, y) == d && eval(sigma, p, psi))
        }
    }
}

/// All (group, formulas) pairs the value of x at `pos` has left behind: one
/// entry per earlier position carrying the same value, grouping the
/// variables that carried it there with the pool formulas that held there.
fn history_at(ctx: &FrameContext, sigma: &Model, pos: usize, x: &str) -> crate::types::RepetitionHistory {
    let d = sigma.data(pos, x);
    let mut entries = BTreeSet::new();
    for p in 1..pos {
        let group: BTreeSet<String> =
            ctx.dvars.iter().filter(|y| sigma.data(p, y) == d).cloned().collect();
        if group.is_empty() {
            continue;
        }
        let held: BTreeSet<Formula> =
            ctx.nested.iter().filter(|psi| eval(sigma, p, psi)).cloned().collect();
        entries.insert((group, held));
    }
    crate::types::RepetitionHistory(entries)
}

/// The frame the model induces at position j (1-indexed): level
/// min(j-1, l), anchored at j - level, every in-window constraint read off
/// the model, and in nested mode the decorations read off as well.
pub fn frame_extract(ctx: &FrameContext, sigma: &Model, j: usize) -> Frame {
    assert!(j >= 1 && j <= sigma.len(), "position {j} outside the model");
    let e = (j - 1).min(ctx.l);
    let anchor = j - e;
    let mut omega = BTreeSet::new();
    for c in constraint_universe(ctx) {
        if c.max_index() <= e && constraint_holds(sigma, anchor, &c) {
            omega.insert(c);
        }
    }
    let mut phi_fr = Vec::new();
    let mut h_fr = BTreeMap::new();
    if ctx.mode == Mode::Nested {
        for i in 0..=e {
            let set: BTreeSet<Formula> =
                ctx.cl().iter().filter(|p| eval(sigma, anchor + i, p)).cloned().collect();
            phi_fr.push(set);
        }
        for x in &ctx.dvars {
            for i in 0..=e {
                h_fr.insert((x.clone(), i), history_at(ctx, sigma, anchor + i, x));
            }
        }
    }
    Frame { e: e as i32, omega, phi_fr, h_fr }
}

/// Whether the model induces exactly this run of window-l frames, with
/// frames[k] anchored at position k+1. The model must be exactly l
/// positions longer than the run so every frame has a full window.
pub fn realizes(ctx: &FrameContext, sigma: &Model, frames: &[Frame]) -> Result<bool, FramesError> {
    if sigma.len() != frames.len() + ctx.l {
        return Err(FramesError::LengthMismatch {
            frames: frames.len(),
            l: ctx.l,
            model: sigma.len(),
        });
    }
    for (k, fr) in frames.iter().enumerate() {
        if frame_extract(ctx, sigma, k + 1 + ctx.l) != *fr {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rebuilds the formula-set decorations of a run of window-l frames from
/// the constraint sets alone, reading positions before the run start as
/// nonexistent. Returns one level-indexed map per frame. Panics if some
/// pool atom looks back further than the window, since no single window
/// can then witness it.
pub fn phi_chain(ctx: &FrameContext, omegas: &[&BTreeSet<Constraint>]) -> Vec<Vec<BTreeSet<Formula>>> {
    assert_eq!(ctx.mode, Mode::Nested, "decorations only exist in nested mode");
    for f in ctx.cl() {
        if let Formula::LocalEq { j, .. } = f {
            assert!(
                (-j) as usize <= ctx.l,
                "atom {f} looks back past the window; its value is not recoverable"
            );
        }
    }
    let l = ctx.l;
    let mut out: Vec<Vec<BTreeSet<Formula>>> = Vec::with_capacity(omegas.len());
    for (k, omega) in omegas.iter().enumerate() {
        let mut map: Vec<BTreeSet<Formula>> = Vec::with_capacity(l + 1);
        if k == 0 {
            for i in 0..=l {
                let set = level_set(ctx, omega, i, map.last());
                map.push(set);
            }
        } else {
            let prev = &out[k - 1];
            for i in 1..=l {
                map.push(prev[i].clone());
            }
            let set = level_set(ctx, omega, l, map.last());
            map.push(set);
        }
        out.push(map);
    }
    out
}

/// The cl members holding at level i of a window, given the set one level
/// below (none at a run's very first position, where anything reaching
/// further back is false).
fn level_set(
    ctx: &FrameContext,
    omega: &BTreeSet<Constraint>,
    i: usize,
    below: Option<&BTreeSet<Formula>>,
) -> BTreeSet<Formula> {
    let mut set = BTreeSet::new();
    let members: Vec<Formula> = ctx.cl().iter().cloned().collect();
    // Structural recursion; Since consults its own level for the arms and
    // the level below for the recursive step, so no ordering issues arise.
    fn holds(
        f: &Formula,
        omega: &BTreeSet<Constraint>,
        i: usize,
        below: Option<&BTreeSet<Formula>>,
    ) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Bool(q) => omega.contains(&Constraint::BoolAt(i, q.clone())),
            Formula::LocalEq { x, j, y } => {
                let target = i as i64 + *j as i64;
                if target < 0 {
                    return false;
                }
                omega.contains(&Constraint::EqAt(i, x.clone(), target as usize, y.clone()))
            }
            Formula::Oblig { x, y, nested, .. } => {
                omega.contains(&Constraint::OblAt(i, x.clone(), y.clone(), (**nested).clone()))
            }
            Formula::Not(g) => !holds(g, omega, i, below),
            Formula::And(a, b) => holds(a, omega, i, below) && holds(b, omega, i, below),
            Formula::Or(a, b) => holds(a, omega, i, below) || holds(b, omega, i, below),
            Formula::Prev(g) => match below {
                None => false,
                Some(lower) => lower.contains(g.as_ref()),
            },
            Formula::Since(a, b) => {
                holds(b, omega, i, below)
                    || (holds(a, omega, i, below)
                        && below.map(|lower| lower.contains(f)).unwrap_or(false))
            }
            other => panic!("formula {other} is outside the pure-past nest grammar"),
        }
    }
    for f in &members {
        if holds(f, omega, i, below) {
            set.insert(f.clone());
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Mode;
    use lrv_core::{parse_formula, Valuation};

    fn val(pairs: &[(&str, u32)], bools: &[(&str, bool)]) -> Valuation {
        let mut v = Valuation::default();
        for (x, d) in pairs {
            v.datas.insert(x.to_string(), *d);
        }
        for (q, b) in bools {
            v.bools.insert(q.to_string(), *b);
        }
        v
    }

    #[test]
    fn extraction_reads_equalities_and_obligations() {
        let ctx = FrameContext::simple(
            ["x".to_string(), "y".to_string()],
            ["p".to_string()],
            1,
        );
        let sigma = Model::new(vec![
            val(&[("x", 7), ("y", 3)], &[("p", true)]),
            val(&[("x", 3), ("y", 5)], &[("p", false)]),
            val(&[("x", 5), ("y", 7)], &[("p", true)]),
        ]);
        let fr = frame_extract(&ctx, &sigma, 2);
        assert_eq!(fr.level(), 1);
        assert!(fr.has(&Constraint::BoolAt(0, "p".into())));
        assert!(!fr.has(&Constraint::BoolAt(1, "p".into())));
        assert!(fr.has_eq(0, "y", 1, "x"));
        assert!(fr.has_eq(1, "x", 0, "y"));
        assert!(fr.has(&Constraint::OblAt(1, "x".into(), "y".into(), Formula::True)));
        assert!(!fr.has(&Constraint::OblAt(0, "y".into(), "x".into(), Formula::True)));

        let fr3 = frame_extract(&ctx, &sigma, 3);
        assert!(fr3.has(&Constraint::OblAt(1, "y".into(), "x".into(), Formula::True)));
        assert!(fr3.has(&Constraint::OblAt(0, "x".into(), "y".into(), Formula::True)));
        assert!(!fr3.has_eq(0, "x", 1, "y"));
    }

    #[test]
    fn realizes_accepts_own_extraction_and_flags_length() {
        let ctx = FrameContext::simple(["x".to_string()], [], 1);
        let sigma = Model::new(vec![
            val(&[("x", 1)], &[]),
            val(&[("x", 1)], &[]),
            val(&[("x", 2)], &[]),
        ]);
        let frames: Vec<Frame> =
            (2..=3).map(|j| frame_extract(&ctx, &sigma, j)).collect();
        assert_eq!(realizes(&ctx, &sigma, &frames), Ok(true));
        let mut wrong = frames.clone();
        wrong[0].omega.remove(&Constraint::EqAt(0, "x".into(), 1, "x".into()));
        assert_eq!(realizes(&ctx, &sigma, &wrong), Ok(false));
        assert!(realizes(&ctx, &sigma, &frames[..1]).is_err());
    }

    #[test]
    fn nested_extraction_decorates_levels_and_histories() {
        let (sig, phi) = parse_formula(
            "env bool p;\nsys data x;\nformula: G E-(x, x; p)",
        )
        .unwrap();
        let ctx = FrameContext::for_formula(&sig, &phi, Mode::Nested);
        assert_eq!(ctx.l, 0);
        let sigma = Model::new(vec![
            val(&[("x", 4)], &[("p", true)]),
            val(&[("x", 9)], &[("p", false)]),
            val(&[("x", 4)], &[("p", false)]),
        ]);
        let fr = frame_extract(&ctx, &sigma, 3);
        let p = Formula::Bool("p".into());
        assert!(!fr.phi_at(0).contains(&p));
        assert!(fr.has(&Constraint::OblAt(0, "x".into(), "x".into(), p.clone())));
        let h = fr.hist("x", 0);
        assert_eq!(h.0.len(), 1);
        let (group, held) = h.0.iter().next().unwrap();
        assert!(group.contains("x"));
        assert!(held.contains(&p));

        let fr2 = frame_extract(&ctx, &sigma, 2);
        assert!(fr2.hist("x", 0).is_empty());
        assert!(!fr2.has(&Constraint::OblAt(0, "x".into(), "x".into(), p)));
    }

    #[test]
    fn phi_chain_rebuilds_extracted_decorations() {
        let (sig, phi) = parse_formula(
            "env bool p;\nsys data x;\nformula: G (eq(x, 1, x) | E-(x, x; p S eq(x, -1, x)))",
        )
        .unwrap();
        let ctx = FrameContext::for_formula(&sig, &phi, Mode::Nested);
        assert_eq!(ctx.l, 1);
        let sigma = Model::new(vec![
            val(&[("x", 1)], &[("p", true)]),
            val(&[("x", 1)], &[("p", true)]),
            val(&[("x", 2)], &[("p", true)]),
            val(&[("x", 2)], &[("p", false)]),
            val(&[("x", 1)], &[("p", false)]),
        ]);
        let frames: Vec<Frame> =
            (2..=5).map(|j| frame_extract(&ctx, &sigma, j)).collect();
        let omegas: Vec<&BTreeSet<Constraint>> = frames.iter().map(|f| &f.omega).collect();
        let rebuilt = phi_chain(&ctx, &omegas);
        for (fr, map) in frames.iter().zip(rebuilt.iter()) {
            assert_eq!(&fr.phi_fr, map);
        }
    }
}
