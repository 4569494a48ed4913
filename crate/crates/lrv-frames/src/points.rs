use crate::types::{CounterKey, Frame, FrameContext, Mode, UpdateVector};
use crate::valid::phi_cap_pool;
use std::collections::BTreeSet;

/// The distinct value classes of a frame level, each named by one of its
/// members (every class holds its reflexive member, so none is empty).
fn classes_at(ctx: &FrameContext, fr: &Frame, level: usize) -> Vec<BTreeSet<String>> {
    let mut seen: BTreeSet<BTreeSet<String>> = BTreeSet::new();
    for x in &ctx.dvars {
        seen.insert(fr.class(x, level));
    }
    seen.into_iter().filter(|c| !c.is_empty()).collect()
}

/// Counter bumps owed by the values entering at the anchor of a full
/// window: one per class with no forward reference, since that value is
/// about to leave the window with nothing in view repeating it. Frames
/// still growing their window contribute nothing.
pub fn points_of_increment(ctx: &FrameContext, fr: &Frame) -> UpdateVector {
    let mut out = UpdateVector::zero();
    if fr.is_bottom() || fr.level() < ctx.l {
        return out;
    }
    for class in classes_at(ctx, fr, 0) {
        let rep = class.iter().next().expect("classes are nonempty");
        if fr.has_forward_ref(rep, 0) {
            continue;
        }
        let key = match ctx.mode {
            Mode::Simple => {
                let mut joined = class.clone();
                joined.extend(fr.po(rep, 0).var_set());
                CounterKey::Vars(joined)
            }
            Mode::Nested => CounterKey::Hist(
                fr.hist(rep, 0).with(class.clone(), phi_cap_pool(ctx, fr.phi_at(0))),
            ),
        };
        out.bump(key, 1);
    }
    out
}

/// Counter draws claimed by the newest position of a frame: one per class
/// whose past obligations reach beyond the window (no backward reference
/// and a nonempty obligation set).
pub fn points_of_decrement(ctx: &FrameContext, fr: &Frame) -> UpdateVector {
    let mut out = UpdateVector::zero();
    if fr.is_bottom() {
        return out;
    }
    let e = fr.level();
    for class in classes_at(ctx, fr, e) {
        let rep = class.iter().next().expect("classes are nonempty");
        if fr.has_backward_ref(rep, e) {
            continue;
        }
        let po = fr.po(rep, e);
        if po.is_empty() {
            continue;
        }
        let key = match ctx.mode {
            Mode::Simple => CounterKey::Vars(po.var_set()),
            Mode::Nested => CounterKey::Hist(fr.hist(rep, e).clone()),
        };
        out.bump(key, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Constraint;
    use lrv_core::Formula;

    fn ctx_xy(l: usize) -> FrameContext {
        FrameContext::simple(["x".to_string(), "y".to_string()], [], l)
    }

    fn refl(e: usize, vars: &[&str]) -> BTreeSet<Constraint> {
        let mut omega = BTreeSet::new();
        for i in 0..=e {
            for v in vars {
                omega.insert(Constraint::EqAt(i, v.to_string(), i, v.to_string()));
            }
        }
        omega
    }

    #[test]
    fn unlinked_full_window_increments_per_class() {
        let ctx = ctx_xy(1);
        let fr = Frame::simple(1, refl(1, &["x", "y"]));
        let inc = points_of_increment(&ctx, &fr);
        let kx = CounterKey::Vars(["x".to_string()].into_iter().collect());
        let ky = CounterKey::Vars(["y".to_string()].into_iter().collect());
        assert_eq!(inc.get(&kx), 1);
        assert_eq!(inc.get(&ky), 1);
        assert!(points_of_decrement(&ctx, &fr).is_zero());
    }

    #[test]
    fn growing_window_never_increments() {
        let ctx = ctx_xy(1);
        let fr = Frame::simple(0, refl(0, &["x", "y"]));
        assert!(points_of_increment(&ctx, &fr).is_zero());
    }

    #[test]
    fn forward_reference_suppresses_the_increment() {
        let ctx = ctx_xy(1);
        let mut omega = refl(1, &["x", "y"]);
        omega.insert(Constraint::EqAt(0, "x".into(), 1, "x".into()));
        omega.insert(Constraint::EqAt(1, "x".into(), 0, "x".into()));
        let fr = Frame::simple(1, omega);
        let inc = points_of_increment(&ctx, &fr);
        let kx = CounterKey::Vars(["x".to_string()].into_iter().collect());
        let ky = CounterKey::Vars(["y".to_string()].into_iter().collect());
        assert_eq!(inc.get(&kx), 0);
        assert_eq!(inc.get(&ky), 1);
    }

    #[test]
    fn obligations_shape_both_keys() {
        let ctx = ctx_xy(1);
        let mut omega = refl(1, &["x", "y"]);
        omega.insert(Constraint::OblAt(0, "x".into(), "y".into(), Formula::True));
        omega.insert(Constraint::OblAt(1, "y".into(), "y".into(), Formula::True));
        let fr = Frame::simple(1, omega);

        let inc = points_of_increment(&ctx, &fr);
        let kxy = CounterKey::Vars(["x".to_string(), "y".to_string()].into_iter().collect());
        assert_eq!(inc.get(&kxy), 1);

        let dec = points_of_decrement(&ctx, &fr);
        let ky = CounterKey::Vars(["y".to_string()].into_iter().collect());
        assert_eq!(dec.get(&ky), 1);
        assert_eq!(
            dec.iter().map(|(_, v)| v).sum::<i64>(),
            1,
            "x's class at the top level owes nothing"
        );
    }

    #[test]
    fn backward_reference_discharges_in_window() {
        let ctx = ctx_xy(1);
        let mut omega = refl(1, &["x", "y"]);
        omega.insert(Constraint::EqAt(1, "y".into(), 0, "y".into()));
        omega.insert(Constraint::EqAt(0, "y".into(), 1, "y".into()));
        omega.insert(Constraint::OblAt(1, "y".into(), "y".into(), Formula::True));
        let fr = Frame::simple(1, omega);
        assert!(points_of_decrement(&ctx, &fr).is_zero());
    }
}
