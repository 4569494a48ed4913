use crate::consistency::one_step_consistent;
use crate::types::{Constraint, Frame, FrameContext};
use crate::valid::{initially_consistent, is_valid_frame};
use lrv_core::{Dir, Formula};
use std::collections::BTreeMap;

/// An eventually periodic run of frames: a ramp of growing windows
/// (levels 0..l-1), then full-window frames, then a repeating cycle of
/// full-window frames. The k-th full-window frame is anchored at position
/// k+1, so the run describes one infinite word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicLasso {
    pub prefix: Vec<Frame>,
    pub cycle: Vec<Frame>,
}

impl SymbolicLasso {
    /// The full-window frames: everything past the ramp, then the cycle.
    pub fn stable(&self, ctx: &FrameContext) -> (&[Frame], &[Frame]) {
        (&self.prefix[ctx.l.min(self.prefix.len())..], &self.cycle)
    }

    pub fn validate(&self, ctx: &FrameContext) -> Result<(), String> {
        if self.cycle.is_empty() {
            return Err("cycle is empty".into());
        }
        if self.prefix.len() < ctx.l {
            return Err(format!(
                "prefix holds {} frames but the window needs {} ramp frames",
                self.prefix.len(),
                ctx.l
            ));
        }
        for (k, fr) in self.prefix.iter().enumerate() {
            let want = k.min(ctx.l);
            if fr.level() != want {
                return Err(format!("prefix frame {k} has level {} , expected {want}", fr.level()));
            }
        }
        for (k, fr) in self.cycle.iter().enumerate() {
            if fr.level() != ctx.l {
                return Err(format!("cycle frame {k} has level {}, expected {}", fr.level(), ctx.l));
            }
        }
        for (k, fr) in self.prefix.iter().chain(self.cycle.iter()).enumerate() {
            if !is_valid_frame(ctx, fr) {
                return Err(format!("frame {k} of the run is not valid"));
            }
        }
        let first = self.prefix.first().unwrap_or(&self.cycle[0]);
        if !initially_consistent(ctx, first) {
            return Err("first frame cannot sit at the start of a model".into());
        }
        let run: Vec<&Frame> = self.prefix.iter().chain(self.cycle.iter()).collect();
        for w in run.windows(2) {
            check_pair(ctx, w[0], w[1])?;
        }
        check_pair(ctx, self.cycle.last().unwrap(), &self.cycle[0])?;
        Ok(())
    }
}

fn check_pair(ctx: &FrameContext, a: &Frame, b: &Frame) -> Result<(), String> {
    match one_step_consistent(ctx, a, b) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!(
            "consecutive frames disagree:\n{}vs\n{}",
            a.canonical_string(),
            b.canonical_string()
        )),
        Err(e) => Err(e.to_string()),
    }
}

struct Eval<'a> {
    ctx: &'a FrameContext,
    head: &'a [Frame],
    cycle: &'a [Frame],
    n: usize,
    memo: BTreeMap<Formula, Vec<bool>>,
}

impl<'a> Eval<'a> {
    fn frame_at(&self, idx: usize) -> &'a Frame {
        if idx < self.head.len() {
            &self.head[idx]
        } else {
            &self.cycle[(idx - self.head.len()) % self.cycle.len()]
        }
    }

    /// Every vector must repeat over the last two cycle copies; the copy
    /// count is chosen so all transients have died down before them.
    fn assert_settled(&self, v: &[bool], f: &Formula) {
        let p = self.cycle.len();
        assert!(
            v[self.n - 2 * p..self.n - p] == v[self.n - p..],
            "evaluation of {f} did not settle into the cycle period"
        );
    }

    fn future_fix(&self, f: &Formula, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
        let p = self.cycle.len();
        let n = self.n;
        let mut cyc = vec![init; p];
        for _ in 0..=p {
            for k in (0..p).rev() {
                let nxt = cyc[(k + 1) % p];
                cyc[k] = step(n - p + k, nxt);
            }
        }
        let mut v = vec![init; n];
        v[n - p..].copy_from_slice(&cyc);
        for idx in (0..n - p).rev() {
            v[idx] = step(idx, v[idx + 1]);
        }
        self.assert_settled(&v, f);
        v
    }

    fn forward_scan(
        &self,
        f: &Formula,
        first: impl Fn(usize) -> bool,
        step: impl Fn(usize, bool) -> bool,
    ) -> Vec<bool> {
        let mut v = vec![false; self.n];
        v[0] = first(0);
        for idx in 1..self.n {
            v[idx] = step(idx, v[idx - 1]);
        }
        self.assert_settled(&v, f);
        v
    }

    fn vec_of(&mut self, f: &Formula) -> Vec<bool> {
        if let Some(v) = self.memo.get(f) {
            return v.clone();
        }
        let n = self.n;
        let v = match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Bool(q) => {
                assert!(self.ctx.bvars.contains(q), "boolean {q} is not tracked by the frames");
                let c = Constraint::BoolAt(0, q.clone());
                (0..n).map(|i| self.frame_at(i).has(&c)).collect()
            }
            Formula::LocalEq { x, j, y } => {
                assert!(self.ctx.dvars.contains(x) && self.ctx.dvars.contains(y));
                let off = j.unsigned_abs() as usize;
                assert!(
                    off <= self.ctx.l,
                    "equality offset {j} exceeds the window length {}",
                    self.ctx.l
                );
                if *j >= 0 {
                    (0..n).map(|i| self.frame_at(i).has_eq(0, x, off, y)).collect()
                } else {
                    (0..n)
                        .map(|i| i >= off && self.frame_at(i - off).has_eq(0, y, off, x))
                        .collect()
                }
            }
            Formula::Oblig { dir: Dir::Past, neq: false, x, y, nested } => {
                assert!(
                    self.ctx.nested.contains(nested.as_ref()),
                    "nested formula {nested} is outside the tracked pool"
                );
                let c = Constraint::OblAt(0, x.clone(), y.clone(), (**nested).clone());
                (0..n).map(|i| self.frame_at(i).has(&c)).collect()
            }
            Formula::Oblig { .. } => {
                panic!("obligation {f} is not represented in frames; rewrite it away first")
            }
            Formula::Not(g) => self.vec_of(g).into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => zip_with(self.vec_of(a), self.vec_of(b), |x, y| x && y),
            Formula::Or(a, b) => zip_with(self.vec_of(a), self.vec_of(b), |x, y| x || y),
            Formula::Implies(a, b) => zip_with(self.vec_of(a), self.vec_of(b), |x, y| !x || y),
            Formula::Next(g) | Formula::WeakNext(g) => {
                let a = self.vec_of(g);
                let p = self.cycle.len();
                let mut v = vec![false; n];
                for idx in 0..n - 1 {
                    v[idx] = a[idx + 1];
                }
                v[n - 1] = a[n - p];
                self.assert_settled(&v, f);
                v
            }
            Formula::Prev(g) | Formula::WeakPrev(g) => {
                let a = self.vec_of(g);
                let weak = matches!(f, Formula::WeakPrev(_));
                let mut v = vec![false; n];
                v[0] = weak;
                for idx in 1..n {
                    v[idx] = a[idx - 1];
                }
                self.assert_settled(&v, f);
                v
            }
            Formula::Until(a, b) => {
                let (va, vb) = (self.vec_of(a), self.vec_of(b));
                self.future_fix(f, false, |i, nxt| vb[i] || (va[i] && nxt))
            }
            Formula::Release(a, b) => {
                let (va, vb) = (self.vec_of(a), self.vec_of(b));
                self.future_fix(f, true, |i, nxt| vb[i] && (va[i] || nxt))
            }
            Formula::Finally(g) => {
                let vg = self.vec_of(g);
                self.future_fix(f, false, |i, nxt| vg[i] || nxt)
            }
            Formula::Globally(g) => {
                let vg = self.vec_of(g);
                self.future_fix(f, true, |i, nxt| vg[i] && nxt)
            }
            Formula::Since(a, b) => {
                let (va, vb) = (self.vec_of(a), self.vec_of(b));
                self.forward_scan(f, |i| vb[i], |i, prev| vb[i] || (va[i] && prev))
            }
            Formula::Trigger(a, b) => {
                let (va, vb) = (self.vec_of(a), self.vec_of(b));
                self.forward_scan(f, |i| vb[i], |i, prev| vb[i] && (va[i] || prev))
            }
            Formula::Once(g) => {
                let vg = self.vec_of(g);
                self.forward_scan(f, |i| vg[i], |i, prev| vg[i] || prev)
            }
            Formula::Historically(g) => {
                let vg = self.vec_of(g);
                self.forward_scan(f, |i| vg[i], |i, prev| vg[i] && prev)
            }
        };
        self.memo.insert(f.clone(), v.clone());
        v
    }
}

fn zip_with(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn count_temporal(phi: &Formula) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    phi.visit(&mut |f| {
        if matches!(
            f,
            Formula::Next(_)
                | Formula::WeakNext(_)
                | Formula::Prev(_)
                | Formula::WeakPrev(_)
                | Formula::Until(..)
                | Formula::Release(..)
                | Formula::Since(..)
                | Formula::Trigger(..)
                | Formula::Finally(_)
                | Formula::Globally(_)
                | Formula::Once(_)
                | Formula::Historically(_)
        ) {
            seen.insert(f.clone());
        }
    });
    seen.len()
}

/// Truth of phi at position 1 of the word the lasso describes, read off
/// the frames alone: local tests and past obligations come from the
/// anchored constraints, temporal structure from vectors over enough
/// materialized positions for every recurrence to settle.
pub fn symbolic_eval_lasso(ctx: &FrameContext, lasso: &SymbolicLasso, phi: &Formula) -> bool {
    lasso.validate(ctx).unwrap_or_else(|e| panic!("malformed lasso: {e}"));
    let (head, cycle) = lasso.stable(ctx);
    let p = cycle.len();
    let copies = 2 * count_temporal(phi) + 2;
    let n = head.len() + copies.max(2) * p;
    let mut ev = Eval { ctx, head, cycle, n, memo: BTreeMap::new() };
    ev.vec_of(phi)[0]
}
