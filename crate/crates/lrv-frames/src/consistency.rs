use crate::sets::one_step_consistent_sets;
use crate::types::{Constraint, Frame, FrameContext, FramesError, Mode};
use crate::valid::initially_consistent;

/// Whether `later` may directly follow `earlier` in a symbolic run. Three
/// level pairs are covered: bottom to 0 (run start), e to e+1 (window still
/// growing, same anchor), and l to l (window sliding by one position). Any
/// other pair is an error. Both frames are assumed valid on their own.
pub fn one_step_consistent(
    ctx: &FrameContext,
    earlier: &Frame,
    later: &Frame,
) -> Result<bool, FramesError> {
    let l = ctx.l as i32;
    if earlier.is_bottom() && later.e == 0 {
        return Ok(match ctx.mode {
            Mode::Simple => true,
            Mode::Nested => initially_consistent(ctx, later),
        });
    }
    if earlier.e >= 0 && later.e == earlier.e + 1 && later.e <= l {
        return Ok(grow_step(ctx, earlier, later));
    }
    if earlier.e == l && later.e == l {
        return Ok(slide_step(ctx, earlier, later));
    }
    Err(FramesError::LevelPair { left: earlier.e, right: later.e })
}

/// Same anchor, one more position in view: everything already known stays,
/// and nothing new may be claimed about the old window.
fn grow_step(ctx: &FrameContext, earlier: &Frame, later: &Frame) -> bool {
    let e = earlier.level();
    if !earlier.omega.is_subset(&later.omega) {
        return false;
    }
    if later.omega.iter().any(|c| c.max_index() <= e && !earlier.has(c)) {
        return false;
    }
    if ctx.mode == Mode::Nested {
        for i in 0..=e {
            if earlier.phi_at(i) != later.phi_at(i) {
                return false;
            }
        }
        for x in &ctx.dvars {
            for i in 0..=e {
                if earlier.hist(x, i) != later.hist(x, i) {
                    return false;
                }
            }
        }
        if !one_step_consistent_sets(earlier.phi_at(e), later.phi_at(e + 1), ctx.cl()) {
            return false;
        }
    }
    true
}

/// Anchor advances by one: the shared l positions must carry identical
/// information in both frames, shifted by one level.
fn slide_step(ctx: &FrameContext, earlier: &Frame, later: &Frame) -> bool {
    let l = ctx.l;
    for x in &ctx.dvars {
        for y in &ctx.dvars {
            for i in 1..=l {
                for j in 1..=l {
                    if earlier.has_eq(i, x, j, y) != later.has_eq(i - 1, x, j - 1, y) {
                        return false;
                    }
                }
            }
            for psi in &ctx.nested {
                for i in 1..=l {
                    let here = Constraint::OblAt(i, x.clone(), y.clone(), psi.clone());
                    let shifted = Constraint::OblAt(i - 1, x.clone(), y.clone(), psi.clone());
                    if earlier.has(&here) != later.has(&shifted) {
                        return false;
                    }
                }
            }
        }
    }
    for q in &ctx.bvars {
        for i in 1..=l {
            let here = Constraint::BoolAt(i, q.clone());
            let shifted = Constraint::BoolAt(i - 1, q.clone());
            if earlier.has(&here) != later.has(&shifted) {
                return false;
            }
        }
    }
    if ctx.mode == Mode::Nested {
        for x in &ctx.dvars {
            for i in 1..=l {
                if earlier.hist(x, i) != later.hist(x, i - 1) {
                    return false;
                }
            }
        }
        for i in 1..=l {
            if earlier.phi_at(i) != later.phi_at(i - 1) {
                return false;
            }
        }
        if !one_step_consistent_sets(earlier.phi_at(0), later.phi_at(0), ctx.cl()) {
            return false;
        }
        if !one_step_consistent_sets(earlier.phi_at(l), later.phi_at(l), ctx.cl()) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn ctx_xy(l: usize) -> FrameContext {
        FrameContext::simple(["x".to_string(), "y".to_string()], ["p".to_string()], l)
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
    fn bottom_accepts_any_simple_zero_frame() {
        let ctx = ctx_xy(1);
        let fr = Frame::simple(0, refl(0, &["x", "y"]));
        assert_eq!(one_step_consistent(&ctx, &Frame::bottom(), &fr), Ok(true));
        let skip = Frame::simple(1, refl(1, &["x", "y"]));
        assert!(one_step_consistent(&ctx, &Frame::bottom(), &skip).is_err());
    }

    #[test]
    fn growth_requires_agreement_on_the_old_window() {
        let ctx = ctx_xy(1);
        let small = Frame::simple(0, refl(0, &["x", "y"]));
        let mut grown = refl(1, &["x", "y"]);
        grown.insert(Constraint::BoolAt(1, "p".into()));
        assert_eq!(one_step_consistent(&ctx, &small, &Frame::simple(1, grown.clone())), Ok(true));

        grown.insert(Constraint::BoolAt(0, "p".into()));
        assert_eq!(one_step_consistent(&ctx, &small, &Frame::simple(1, grown.clone())), Ok(false));

        let mut small_p = refl(0, &["x", "y"]);
        small_p.insert(Constraint::BoolAt(0, "p".into()));
        assert_eq!(
            one_step_consistent(&ctx, &Frame::simple(0, small_p), &Frame::simple(1, grown)),
            Ok(true)
        );
    }

    #[test]
    fn slide_matches_shifted_window() {
        let ctx = ctx_xy(1);
        let mut a = refl(1, &["x", "y"]);
        a.insert(Constraint::BoolAt(1, "p".into()));
        let mut b = refl(1, &["x", "y"]);
        b.insert(Constraint::BoolAt(0, "p".into()));
        let fa = Frame::simple(1, a);
        let fb = Frame::simple(1, b.clone());
        assert_eq!(one_step_consistent(&ctx, &fa, &fb), Ok(true));
        assert_eq!(one_step_consistent(&ctx, &fa, &fa), Ok(false));

        let mut b_linked = b;
        b_linked.insert(Constraint::EqAt(0, "x".into(), 1, "x".into()));
        b_linked.insert(Constraint::EqAt(1, "x".into(), 0, "x".into()));
        b_linked.insert(Constraint::OblAt(1, "x".into(), "x".into(), lrv_core::Formula::True));
        let fb_linked = Frame::simple(1, b_linked);
        assert_eq!(one_step_consistent(&ctx, &fa, &fb_linked), Ok(true));
        assert_eq!(one_step_consistent(&ctx, &fb_linked, &fa), Ok(false));
    }
}
