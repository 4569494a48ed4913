//! Window abstractions over data words: each frame records the complete
//! equality, obligation and boolean information of l+1 consecutive
//! positions, so an infinite word collapses to a finite-alphabet run.
//! Validity, one-step consistency, enumeration, extraction from concrete
//! models, counter bookkeeping for values leaving the window, and
//! evaluation over eventually periodic frame runs live here.

mod consistency;
mod enumerate;
mod extract;
mod lasso;
mod matching;
mod points;
mod sets;
mod types;
mod valid;

pub use consistency::one_step_consistent;
pub use enumerate::enumerate_frames;
pub use extract::{frame_extract, phi_chain, realizes};
pub use lasso::{symbolic_eval_lasso, SymbolicLasso};
pub use matching::matches;
pub use points::{points_of_decrement, points_of_increment};
pub use sets::{
    boolean_consistent, closure, initially_consistent_set, negate, one_step_consistent_sets,
};
pub use types::{
    Constraint, CounterKey, Frame, FrameContext, FramesError, Mode, PastObligation,
    RepetitionHistory, UpdateVector,
};
pub use valid::{
    check_frame, constraint_universe, initially_consistent, is_valid_frame, phi_cap_pool,
    FrameViolation,
};
