//! Seeded random signatures, formulas and words for the randomized suites.
//!
//! Formulas are drawn inside the fragment the window machinery accepts:
//! local tests with forward offsets at the top level, equality repetition
//! obligations toward the past, and optionally obligation nests from the
//! past-time sub-grammar over `Prev`/`Since`. The draw never needs a
//! rejection loop: offsets are bounded by a window target chosen up front,
//! and the formula is padded with a vacuous disjunct when its own tests do
//! not reach that target.

use lrv_core::{x_length, Formula, Model, Owner, Signature, Valuation, VarKind};
use lrv_frames::{FrameContext, Mode};
use rand::Rng;

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub dvars: Vec<String>,
    pub bvars: Vec<String>,
    /// Draw non-trivial obligation nests and classify the case as nested.
    pub nested: bool,
    /// Upper bound on the window length of the drawn formula.
    pub max_l: usize,
    /// Rough node budget for the main formula.
    pub size: usize,
}

impl GenConfig {
    pub fn new(dvars: &[&str], bvars: &[&str], nested: bool, max_l: usize) -> Self {
        GenConfig {
            dvars: dvars.iter().map(|s| s.to_string()).collect(),
            bvars: bvars.iter().map(|s| s.to_string()).collect(),
            nested,
            max_l,
            size: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenCase {
    pub sig: Signature,
    pub phi: Formula,
    pub mode: Mode,
}

impl GenCase {
    pub fn ctx(&self) -> FrameContext {
        FrameContext::for_formula(&self.sig, &self.phi, self.mode)
    }
}

/// Data variables are owned by the system, booleans by the environment, the
/// single-sided shape every game in this workspace uses.
pub fn signature_for(cfg: &GenConfig) -> Signature {
    let mut sig = Signature::new();
    for x in &cfg.dvars {
        sig.declare(Owner::Sys, VarKind::Data, x).unwrap();
    }
    for q in &cfg.bvars {
        sig.declare(Owner::Env, VarKind::Bool, q).unwrap();
    }
    sig
}

fn pick<'a, T>(rng: &mut impl Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.gen_range(0..xs.len())]
}

fn split_budget(rng: &mut impl Rng, budget: usize) -> (usize, usize) {
    let left = if budget >= 3 { rng.gen_range(1..budget - 1) } else { 1 };
    (left, budget.saturating_sub(left + 1).max(1))
}

/// A formula from the past-time sub-grammar: booleans, local tests with
/// non-positive offsets, negation, conjunction, disjunction, `Prev`, `Since`.
pub fn gen_past_formula(rng: &mut impl Rng, cfg: &GenConfig, l: usize, budget: usize) -> Formula {
    if budget <= 1 {
        return match rng.gen_range(0..4u8) {
            0 => Formula::True,
            1 if !cfg.bvars.is_empty() => Formula::boolv(pick(rng, &cfg.bvars)),
            _ => {
                let x = pick(rng, &cfg.dvars).as_str();
                let y = pick(rng, &cfg.dvars).as_str();
                Formula::eq(x, -(rng.gen_range(0..=l) as i32), y)
            }
        };
    }
    let sub = budget - 1;
    match rng.gen_range(0..5u8) {
        0 => gen_past_formula(rng, cfg, l, sub).not(),
        1 => gen_past_formula(rng, cfg, l, sub).prev(),
        2 => {
            let (a, b) = split_budget(rng, budget);
            gen_past_formula(rng, cfg, l, a).and(gen_past_formula(rng, cfg, l, b))
        }
        3 => {
            let (a, b) = split_budget(rng, budget);
            gen_past_formula(rng, cfg, l, a).or(gen_past_formula(rng, cfg, l, b))
        }
        _ => {
            let (a, b) = split_budget(rng, budget);
            gen_past_formula(rng, cfg, l, a).since(gen_past_formula(rng, cfg, l, b))
        }
    }
}

fn gen_main(rng: &mut impl Rng, cfg: &GenConfig, l: usize, pool: &[Formula], budget: usize) -> Formula {
    if budget <= 1 {
        return match rng.gen_range(0..6u8) {
            0 => Formula::True,
            1 if !cfg.bvars.is_empty() => Formula::boolv(pick(rng, &cfg.bvars)),
            2 | 3 => {
                let x = pick(rng, &cfg.dvars).as_str();
                let y = pick(rng, &cfg.dvars).as_str();
                Formula::eq(x, rng.gen_range(0..=l) as i32, y)
            }
            _ => {
                let x = pick(rng, &cfg.dvars).as_str();
                let y = pick(rng, &cfg.dvars).as_str();
                Formula::past_eq(x, y, pick(rng, pool).clone())
            }
        };
    }
    let sub = budget - 1;
    match rng.gen_range(0..14u8) {
        0 => gen_main(rng, cfg, l, pool, sub).not(),
        1 => {
            let (a, b) = split_budget(rng, budget);
            gen_main(rng, cfg, l, pool, a).and(gen_main(rng, cfg, l, pool, b))
        }
        2 => {
            let (a, b) = split_budget(rng, budget);
            gen_main(rng, cfg, l, pool, a).or(gen_main(rng, cfg, l, pool, b))
        }
        3 => gen_main(rng, cfg, l, pool, sub).next(),
        4 => Formula::WeakNext(Box::new(gen_main(rng, cfg, l, pool, sub))),
        5 => gen_main(rng, cfg, l, pool, sub).prev(),
        6 => Formula::WeakPrev(Box::new(gen_main(rng, cfg, l, pool, sub))),
        7 => {
            let (a, b) = split_budget(rng, budget);
            gen_main(rng, cfg, l, pool, a).until(gen_main(rng, cfg, l, pool, b))
        }
        8 => {
            let (a, b) = split_budget(rng, budget);
            gen_main(rng, cfg, l, pool, a).since(gen_main(rng, cfg, l, pool, b))
        }
        9 => gen_main(rng, cfg, l, pool, sub).finally(),
        10 => gen_main(rng, cfg, l, pool, sub).globally(),
        11 => gen_main(rng, cfg, l, pool, sub).once(),
        12 => gen_main(rng, cfg, l, pool, sub).historically(),
        _ => {
            let (a, b) = split_budget(rng, budget);
            Formula::Release(
                Box::new(gen_main(rng, cfg, l, pool, a)),
                Box::new(gen_main(rng, cfg, l, pool, b)),
            )
        }
    }
}

/// Draws one case. The window target is chosen first; every local test stays
/// within it and the formula is padded up to it when needed, so the resulting
/// context is usable without post-hoc filtering.
pub fn gen_formula(rng: &mut impl Rng, cfg: &GenConfig) -> GenCase {
    assert!(!cfg.dvars.is_empty(), "generation needs at least one data variable");
    let sig = signature_for(cfg);
    let l = rng.gen_range(0..=cfg.max_l);
    let mut pool = vec![Formula::True];
    if cfg.nested && rng.gen_bool(0.85) {
        let budget = rng.gen_range(1..=3);
        pool.push(gen_past_formula(rng, cfg, l, budget));
    }
    let mut phi = gen_main(rng, cfg, l, &pool, cfg.size.max(1));
    if x_length(&phi) < l {
        // A vacuous disjunct whose local test widens the window to the target.
        let x = cfg.dvars[0].as_str();
        phi = phi.and(Formula::True.or(Formula::eq(x, l as i32, x)));
    }
    let mode = if cfg.nested { Mode::Nested } else { Mode::Simple };
    GenCase { sig, phi, mode }
}

/// A random word over the signature: every data value drawn from a small pool
/// so that repetitions are frequent. The last letter doubles as the constant
/// tail when the word is read as a lasso.
pub fn gen_word(rng: &mut impl Rng, sig: &Signature, min_len: usize, max_len: usize, vals: u32) -> Model {
    let n = rng.gen_range(min_len..=max_len);
    let letters = (0..n)
        .map(|_| {
            let mut v = Valuation::new();
            for x in sig.datas() {
                v = v.with_data(x, rng.gen_range(0..vals));
            }
            for q in sig.bools() {
                v = v.with_bool(q, rng.gen_bool(0.5));
            }
            v
        })
        .collect();
    Model::new(letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn drawn_cases_fit_their_own_window() {
        let cfg = GenConfig::new(&["x", "y"], &["p"], true, 2);
        let mut r = rng(7);
        for _ in 0..200 {
            let case = gen_formula(&mut r, &cfg);
            let ctx = case.ctx();
            assert!(ctx.l <= 2);
            let mut ok = true;
            case.phi.visit(&mut |f| {
                if let Formula::LocalEq { j, .. } = f {
                    ok &= j.unsigned_abs() as usize <= ctx.l;
                }
            });
            assert!(ok, "offset outside the window in {}", case.phi);
        }
    }

    #[test]
    fn nested_cases_keep_a_small_pool() {
        let cfg = GenConfig::new(&["x"], &[], true, 1);
        let mut r = rng(11);
        for _ in 0..100 {
            let case = gen_formula(&mut r, &cfg);
            let ctx = case.ctx();
            assert!(ctx.nested.len() <= 2, "pool {:?}", ctx.nested);
        }
    }

    #[test]
    fn words_cover_all_declared_variables() {
        let cfg = GenConfig::new(&["x", "y"], &["p"], false, 1);
        let sig = signature_for(&cfg);
        let mut r = rng(3);
        let w = gen_word(&mut r, &sig, 2, 6, 3);
        for i in 1..=w.len() {
            let _ = w.data(i, "x");
            let _ = w.data(i, "y");
            let _ = w.boolv(i, "p");
        }
    }
}
