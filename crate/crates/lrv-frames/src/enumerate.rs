use crate::matching::matches;
use crate::sets::{boolean_consistent, one_step_consistent_sets};
use crate::types::{Constraint, Frame, FrameContext, Mode, PastObligation, RepetitionHistory};
use crate::valid::{check_frame, phi_cap_pool, strip_prevs};
use lrv_core::Formula;
use std::collections::{BTreeMap, BTreeSet};

fn subsets<T: Clone + Ord>(items: &BTreeSet<T>) -> Vec<BTreeSet<T>> {
    let elems: Vec<&T> = items.iter().collect();
    assert!(elems.len() < 20, "subset space too rich to enumerate");
    let mut out = Vec::with_capacity(1 << elems.len());
    for mask in 0u32..(1 << elems.len()) {
        out.push(
            elems
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, t)| (*t).clone())
                .collect(),
        );
    }
    out
}

/// Restricted growth strings: every set partition of n items exactly once.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rgs: &mut Vec<usize>, next_fresh: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if rgs.len() == n {
            out.push(rgs.clone());
            return;
        }
        for v in 0..=next_fresh {
            rgs.push(v);
            go(rgs, next_fresh.max(v + 1), n, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, n, &mut out);
    out
}

/// All index tuples for the given per-slot sizes, lexicographic.
fn tuples(radix: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radix {
        let mut next = Vec::with_capacity(out.len() * r);
        for t in &out {
            for v in 0..r {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// One value class seen across the window: which variables carry it at
/// which levels.
struct BlockView {
    levels: BTreeMap<usize, BTreeSet<String>>,
}

fn block_views(cells: &[(usize, String)], rgs: &[usize]) -> Vec<BlockView> {
    let nblocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut out: Vec<BlockView> = (0..nblocks).map(|_| BlockView { levels: BTreeMap::new() }).collect();
    for (k, (i, x)) in cells.iter().enumerate() {
        out[rgs[k]].levels.entry(*i).or_default().insert(x.clone());
    }
    out
}

fn eq_constraints(cells: &[(usize, String)], rgs: &[usize]) -> BTreeSet<Constraint> {
    let mut out = BTreeSet::new();
    for (a, (i, x)) in cells.iter().enumerate() {
        for (b, (j, y)) in cells.iter().enumerate() {
            if rgs[a] == rgs[b] {
                out.insert(Constraint::EqAt(*i, x.clone(), *j, y.clone()));
            }
        }
    }
    out
}

/// Per-level decoration candidates pinned to the chosen booleans and
/// equalities, then chained with the one-step rule between levels.
fn phi_maps(
    ctx: &FrameContext,
    e: usize,
    bools: &[&BTreeSet<String>],
    eqs: &BTreeSet<Constraint>,
) -> Vec<Vec<BTreeSet<Formula>>> {
    let cl = ctx.cl();
    let members: Vec<&Formula> = cl.iter().collect();
    assert!(members.len() < 20, "nested pool too rich to enumerate");
    let mut per_level: Vec<Vec<BTreeSet<Formula>>> = Vec::new();
    for i in 0..=e {
        let mut cands = Vec::new();
        'mask: for mask in 0u32..(1 << members.len()) {
            let s: BTreeSet<Formula> = members
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, f)| (*f).clone())
                .collect();
            if !boolean_consistent(&s, cl) {
                continue;
            }
            for f in cl {
                let (depth, core) = strip_prevs(f);
                if depth > i {
                    continue;
                }
                let idx = i - depth;
                match core {
                    Formula::Bool(q) => {
                        if s.contains(f) != bools[idx].contains(q) {
                            continue 'mask;
                        }
                    }
                    Formula::LocalEq { x, j, y } => {
                        let back = (-j) as usize;
                        if back <= idx {
                            let want =
                                eqs.contains(&Constraint::EqAt(idx, x.clone(), idx - back, y.clone()));
                            if s.contains(f) != want {
                                continue 'mask;
                            }
                        }
                    }
                    _ => {}
                }
            }
            cands.push(s);
        }
        per_level.push(cands);
    }
    let mut maps: Vec<Vec<BTreeSet<Formula>>> = vec![Vec::new()];
    for level_cands in per_level {
        let mut next = Vec::new();
        for partial in &maps {
            for cand in &level_cands {
                if let Some(prev) = partial.last() {
                    if !one_step_consistent_sets(prev, cand, cl) {
                        continue;
                    }
                }
                let mut p2 = partial.clone();
                p2.push(cand.clone());
                next.push(p2);
            }
        }
        maps = next;
    }
    maps
}

/// What a block's members held at its earlier levels, as obligation pairs.
fn held_pairs(
    ctx: &FrameContext,
    vars: &BTreeSet<String>,
    map_at: Option<&BTreeSet<Formula>>,
) -> Vec<(String, Formula)> {
    let held: Vec<Formula> = match ctx.mode {
        Mode::Simple => vec![Formula::True],
        Mode::Nested => phi_cap_pool(ctx, map_at.expect("nested maps cover every level"))
            .into_iter()
            .collect(),
    };
    let mut out = Vec::new();
    for z in vars {
        for psi in &held {
            out.push((z.clone(), psi.clone()));
        }
    }
    out
}

/// Obligation sets per occupied level of one block: the base at the lowest
/// level, then every lower occupied level's members and held formulas join.
fn po_chain(
    ctx: &FrameContext,
    block: &BlockView,
    base: &BTreeSet<(String, Formula)>,
    maps: &[BTreeSet<Formula>],
) -> BTreeMap<usize, BTreeSet<(String, Formula)>> {
    let occupied: Vec<(&usize, &BTreeSet<String>)> = block.levels.iter().collect();
    let mut acc = base.clone();
    let mut out = BTreeMap::new();
    for (idx, (j, _)) in occupied.iter().enumerate() {
        if idx > 0 {
            let (a, avars) = occupied[idx - 1];
            acc.extend(held_pairs(ctx, avars, maps.get(*a)));
        }
        out.insert(**j, acc.clone());
    }
    out
}

/// Histories per occupied level of one block, grown the same way.
fn h_chain(
    ctx: &FrameContext,
    block: &BlockView,
    base: &RepetitionHistory,
    maps: &[BTreeSet<Formula>],
) -> BTreeMap<usize, RepetitionHistory> {
    let occupied: Vec<(&usize, &BTreeSet<String>)> = block.levels.iter().collect();
    let mut acc = base.clone();
    let mut out = BTreeMap::new();
    for (idx, (j, _)) in occupied.iter().enumerate() {
        if idx > 0 {
            let (a, avars) = occupied[idx - 1];
            acc = acc.with(avars.clone(), phi_cap_pool(ctx, &maps[*a]));
        }
        out.insert(**j, acc.clone());
    }
    out
}

/// The decoration bits about obligation atoms must agree with the
/// obligations this block actually carries.
fn f8_local(
    ctx: &FrameContext,
    block: &BlockView,
    po_at: &BTreeMap<usize, BTreeSet<(String, Formula)>>,
    maps: &[BTreeSet<Formula>],
    e: usize,
) -> bool {
    if ctx.mode == Mode::Simple {
        return true;
    }
    for f in ctx.cl() {
        let (depth, core) = strip_prevs(f);
        if let Formula::Oblig { x, y, nested, .. } = core {
            for i in depth..=e {
                let j = i - depth;
                if !block.levels.get(&j).is_some_and(|vs| vs.contains(x)) {
                    continue;
                }
                let claimed = maps[i].contains(f);
                let present =
                    po_at.get(&j).is_some_and(|s| s.contains(&(y.clone(), (**nested).clone())));
                if claimed != present {
                    return false;
                }
            }
        }
    }
    true
}

fn rh_universe(ctx: &FrameContext) -> Vec<RepetitionHistory> {
    let groups: Vec<BTreeSet<String>> =
        subsets(&ctx.dvars).into_iter().filter(|s| !s.is_empty()).collect();
    let pool_sets = subsets(&ctx.nested);
    let mut entries: BTreeSet<(BTreeSet<String>, BTreeSet<Formula>)> = BTreeSet::new();
    for g in &groups {
        for p in &pool_sets {
            entries.insert((g.clone(), p.clone()));
        }
    }
    assert!(entries.len() < 16, "history space too rich to enumerate");
    subsets(&entries).into_iter().map(RepetitionHistory).collect()
}

/// Every valid frame at window level e, in a stable order. Booleans, the
/// value partition, decorations, obligations and histories are chosen in
/// stages, with each choice propagated so the cross-level conditions hold
/// by construction; a final validity check keeps the result exact.
pub fn enumerate_frames(ctx: &FrameContext, e: usize) -> Vec<Frame> {
    assert!(e <= ctx.l, "level {e} above the window length {}", ctx.l);
    let nested = ctx.mode == Mode::Nested;
    let cells: Vec<(usize, String)> =
        (0..=e).flat_map(|i| ctx.dvars.iter().map(move |x| (i, x.clone()))).collect();
    let bool_subsets = subsets(&ctx.bvars);
    let bool_tuples = tuples(&vec![bool_subsets.len(); e + 1]);
    let mut pair_universe: BTreeSet<(String, Formula)> = BTreeSet::new();
    for y in &ctx.dvars {
        for psi in &ctx.nested {
            pair_universe.insert((y.clone(), psi.clone()));
        }
    }
    let po_bases = subsets(&pair_universe);
    let hist_bases: Vec<RepetitionHistory> =
        if nested { rh_universe(ctx) } else { vec![RepetitionHistory::empty()] };

    let mut out: Vec<Frame> = Vec::new();
    for bt in &bool_tuples {
        let bools: Vec<&BTreeSet<String>> = bt.iter().map(|&k| &bool_subsets[k]).collect();
        let mut base_omega = BTreeSet::new();
        for (i, qs) in bools.iter().enumerate() {
            for q in qs.iter() {
                base_omega.insert(Constraint::BoolAt(i, q.clone()));
            }
        }
        for rgs in partitions(cells.len()) {
            let blocks = block_views(&cells, &rgs);
            let eqs = eq_constraints(&cells, &rgs);
            let maps_list: Vec<Vec<BTreeSet<Formula>>> =
                if nested { phi_maps(ctx, e, &bools, &eqs) } else { vec![Vec::new()] };
            for maps in &maps_list {
                // Per block: obligation bases surviving the decoration bits,
                // with their propagated per-level sets.
                let mut feasible_po: Vec<Vec<BTreeMap<usize, BTreeSet<(String, Formula)>>>> =
                    Vec::new();
                for block in &blocks {
                    let mut list = Vec::new();
                    for base in &po_bases {
                        let po_at = po_chain(ctx, block, base, maps);
                        if f8_local(ctx, block, &po_at, maps, e) {
                            list.push(po_at);
                        }
                    }
                    feasible_po.push(list);
                }
                for pick in tuples(&feasible_po.iter().map(|l| l.len()).collect::<Vec<_>>()) {
                    let mut omega = base_omega.clone();
                    omega.extend(eqs.iter().cloned());
                    for (bi, block) in blocks.iter().enumerate() {
                        for (j, vars) in &block.levels {
                            for x in vars {
                                for (y, psi) in &feasible_po[bi][pick[bi]][j] {
                                    omega.insert(Constraint::OblAt(
                                        *j,
                                        x.clone(),
                                        y.clone(),
                                        psi.clone(),
                                    ));
                                }
                            }
                        }
                    }
                    if !nested {
                        let fr = Frame::simple(e, omega);
                        if check_frame(ctx, &fr).is_ok() {
                            out.push(fr);
                        }
                        continue;
                    }
                    // Per block: history bases whose propagated chain matches
                    // the obligations at every occupied level.
                    let mut feasible_h: Vec<Vec<BTreeMap<usize, RepetitionHistory>>> = Vec::new();
                    for (bi, block) in blocks.iter().enumerate() {
                        let po_at = &feasible_po[bi][pick[bi]];
                        let mut list = Vec::new();
                        for base in &hist_bases {
                            let h_at = h_chain(ctx, block, base, maps);
                            let ok = block.levels.keys().all(|j| {
                                matches(&h_at[j], &PastObligation(po_at[j].clone()))
                            });
                            if ok {
                                list.push(h_at);
                            }
                        }
                        feasible_h.push(list);
                    }
                    for hpick in tuples(&feasible_h.iter().map(|l| l.len()).collect::<Vec<_>>()) {
                        let mut h_fr = BTreeMap::new();
                        for (bi, block) in blocks.iter().enumerate() {
                            let h_at = &feasible_h[bi][hpick[bi]];
                            for (j, vars) in &block.levels {
                                for x in vars {
                                    h_fr.insert((x.clone(), *j), h_at[j].clone());
                                }
                            }
                        }
                        let fr = Frame {
                            e: e as i32,
                            omega: omega.clone(),
                            phi_fr: maps.clone(),
                            h_fr,
                        };
                        if check_frame(ctx, &fr).is_ok() {
                            out.push(fr);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
