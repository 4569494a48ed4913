//! Extraction properties on random words: every extracted frame is valid,
//! the chain is one-step consistent from the bottom frame on, nested chains
//! start initially consistent, a model realizes its own extraction and
//! nothing else, and the increment/decrement balance never dips below zero.

use lrv_frames::{
    frame_extract, initially_consistent, is_valid_frame, one_step_consistent,
    points_of_decrement, points_of_increment, realizes, Constraint, Frame, UpdateVector,
};
use lrv_testkit::{gen_formula, gen_word, rng, GenConfig};
use proptest::prelude::*;

fn config_for(seed: u64) -> GenConfig {
    match seed % 4 {
        0 => GenConfig::new(&["x"], &[], false, 1),
        1 => GenConfig::new(&["x", "y"], &["p"], false, 2),
        2 => GenConfig::new(&["x"], &["p"], true, 1),
        _ => GenConfig::new(&["x", "y"], &["p"], true, 2),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn extraction_yields_a_valid_consistent_chain(seed in any::<u64>()) {
        let mut r = rng(seed);
        let case = gen_formula(&mut r, &config_for(seed));
        let ctx = case.ctx();
        let w = gen_word(&mut r, &case.sig, ctx.l.max(1) + 1, 8, 3);
        let frames: Vec<Frame> = (1..=w.len()).map(|j| frame_extract(&ctx, &w, j)).collect();
        let mut prev = Frame::bottom();
        for (k, fr) in frames.iter().enumerate() {
            prop_assert_eq!(fr.level(), k.min(ctx.l), "level at position {}", k + 1);
            prop_assert!(is_valid_frame(&ctx, fr), "invalid frame at position {}:\n{}", k + 1, fr);
            prop_assert_eq!(
                one_step_consistent(&ctx, &prev, fr),
                Ok(true),
                "step into position {} is inconsistent", k + 1
            );
            prev = fr.clone();
        }
        prop_assert!(initially_consistent(&ctx, &frames[0]));
    }

    #[test]
    fn a_word_realizes_its_own_extraction_only(seed in any::<u64>()) {
        let mut r = rng(seed);
        let case = gen_formula(&mut r, &config_for(seed));
        let ctx = case.ctx();
        let w = gen_word(&mut r, &case.sig, ctx.l + 1, 8, 3);
        let stable: Vec<Frame> =
            (ctx.l + 1..=w.len()).map(|j| frame_extract(&ctx, &w, j)).collect();
        prop_assert_eq!(realizes(&ctx, &w, &stable), Ok(true));

        let mut tampered = stable.clone();
        let target = &mut tampered[0];
        let x = ctx.dvars.iter().next().unwrap().clone();
        let probe = Constraint::OblAt(0, x.clone(), x, lrv_core::Formula::True);
        if !target.omega.remove(&probe) {
            target.omega.insert(probe);
        }
        prop_assert_eq!(realizes(&ctx, &w, &tampered), Ok(false));
    }

    #[test]
    fn the_counter_balance_never_dips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let case = gen_formula(&mut r, &config_for(seed));
        let ctx = case.ctx();
        let w = gen_word(&mut r, &case.sig, ctx.l.max(1) + 1, 10, 3);
        let frames: Vec<Frame> = (1..=w.len()).map(|j| frame_extract(&ctx, &w, j)).collect();
        // Increments collected through frame k must cover decrements payable
        // through frame k+1; at the start nothing is owed at all.
        let mut inc = UpdateVector::zero();
        let mut dec = points_of_decrement(&ctx, &frames[0]);
        prop_assert!(dec.is_zero(), "the first position has no past to owe to");
        for k in 0..frames.len() {
            inc = inc.plus(&points_of_increment(&ctx, &frames[k]));
            if k + 1 < frames.len() {
                dec = dec.plus(&points_of_decrement(&ctx, &frames[k + 1]));
            }
            prop_assert!(
                inc.minus(&dec).is_nonneg(),
                "balance dips after position {}: inc {:?} dec {:?}",
                k + 1,
                inc,
                dec
            );
        }
    }
}
