//! Folding the frame sequence of an ultimately constant word into a lasso.
//!
//! On `u·c^ω` the extracted frames become constant once the window sits deep
//! enough in the tail: equalities stop changing immediately, obligation and
//! history summaries only grow toward a finite saturation, and the nested
//! decorations settle once every past-time member of the closure has. The
//! margin below overshoots every one of those delays; equality of several
//! consecutive frames is still asserted so an undersized margin cannot pass
//! silently.

use lrv_core::Model;
use lrv_frames::{frame_extract, FrameContext, SymbolicLasso};

/// The symbolic lasso of the infinite word represented by `looped` (its last
/// letter repeats forever). The prefix carries the ramp and one frame per
/// anchor up to the settling point; the cycle is the single settled frame.
pub fn extract_lasso(ctx: &FrameContext, looped: &Model) -> SymbolicLasso {
    assert!(!looped.is_empty());
    let l = ctx.l;
    let margin = looped.len() + ctx.cl().len() + 2 * l + 6;
    let mut vals = looped.vals.clone();
    let last = vals.last().unwrap().clone();
    while vals.len() < margin + l + 1 {
        vals.push(last.clone());
    }
    let ext = Model::new(vals);
    let frames: Vec<_> = (1..=margin + l + 1).map(|j| frame_extract(ctx, &ext, j)).collect();
    for a in margin - 2..=margin {
        assert_eq!(
            frames[a + l - 1],
            frames[a + l],
            "frames still changing at anchor {a}; the settle margin is too small"
        );
    }
    let lasso = SymbolicLasso {
        prefix: frames[..margin + l].to_vec(),
        cycle: vec![frames[margin + l].clone()],
    };
    lasso.validate(ctx).expect("extracted frame sequence forms a well-formed lasso");
    lasso
}
