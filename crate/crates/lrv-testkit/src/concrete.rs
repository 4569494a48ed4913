//! Ground-truth evaluation on ultimately constant words.
//!
//! A looped model `u·c` stands for the infinite word `u·c^ω`. Evaluation
//! works on truth vectors over a finite horizon long enough for every
//! subformula to settle: past operators are forward scans, future operators
//! take their settled tail value from the one-letter fixpoint of their
//! unfolding and are then filled backward, and future obligations add an
//! explicit clause for witnesses beyond the horizon. Each vector is asserted
//! to be constant near the horizon, so an undersized margin fails loudly
//! instead of returning a truncated answer.

use lrv_core::{Dir, Formula, Model};
use std::collections::BTreeMap;

/// Truth of `phi` at position 1 of the infinite word `looped` represents.
pub fn eval_word_lasso(looped: &Model, phi: &Formula) -> bool {
    eval_word_lasso_at(looped, 1, phi)
}

/// Truth of `phi` at position `i` (1-based, within the looped part).
pub fn eval_word_lasso_at(looped: &Model, i: usize, phi: &Formula) -> bool {
    assert!(!looped.is_empty(), "a lasso needs at least its tail letter");
    assert!(
        (1..=looped.len()).contains(&i),
        "position {i} outside the represented word of length {}",
        looped.len()
    );
    let mut ev = WordEval::new(looped, phi);
    ev.vec(phi)[i - 1]
}

struct WordEval<'a> {
    m: &'a Model,
    n: usize,
    horizon: usize,
    memo: BTreeMap<Formula, Vec<bool>>,
}

impl<'a> WordEval<'a> {
    fn new(m: &'a Model, phi: &Formula) -> Self {
        let n = m.len();
        let mut nodes = 0usize;
        let mut max_off = 0usize;
        phi.visit(&mut |f| {
            nodes += 1;
            if let Formula::LocalEq { j, .. } = f {
                max_off = max_off.max(j.unsigned_abs() as usize);
            }
        });
        // Every layer can delay settling by one step plus one window offset.
        let horizon = n + nodes * (2 + max_off) + 8;
        WordEval { m, n, horizon, memo: BTreeMap::new() }
    }

    fn data(&self, p: usize, x: &str) -> u32 {
        self.m.data(p.min(self.n), x)
    }

    fn boolv(&self, p: usize, q: &str) -> bool {
        self.m.boolv(p.min(self.n), q)
    }

    fn vec(&mut self, phi: &Formula) -> Vec<bool> {
        if let Some(v) = self.memo.get(phi) {
            return v.clone();
        }
        let hh = self.horizon;
        let v = match phi {
            Formula::True => vec![true; hh],
            Formula::False => vec![false; hh],
            Formula::Bool(q) => (1..=hh).map(|p| self.boolv(p, q)).collect(),
            Formula::LocalEq { x, j, y } => (1..=hh)
                .map(|p| {
                    let t = p as i64 + *j as i64;
                    t >= 1 && self.data(p, x) == self.data(t as usize, y)
                })
                .collect(),
            Formula::Oblig { dir: Dir::Past, neq, x, y, nested } => {
                let vn = self.vec(nested);
                (1..=hh)
                    .map(|p| {
                        let d = self.data(p, x);
                        (1..p).any(|q| vn[q - 1] && ((self.data(q, y) != d) == *neq))
                    })
                    .collect()
            }
            Formula::Oblig { dir: Dir::Future, neq, x, y, nested } => {
                let vn = self.vec(nested);
                (1..=hh)
                    .map(|p| {
                        let d = self.data(p, x);
                        let within = (p + 1..=hh).any(|q| vn[q - 1] && ((self.data(q, y) != d) == *neq));
                        let beyond = vn[hh - 1] && ((self.data(self.n, y) != d) == *neq);
                        within || beyond
                    })
                    .collect()
            }
            Formula::Not(a) => self.vec(a).into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => zip(self.vec(a), self.vec(b), |x, y| x && y),
            Formula::Or(a, b) => zip(self.vec(a), self.vec(b), |x, y| x || y),
            Formula::Implies(a, b) => zip(self.vec(a), self.vec(b), |x, y| !x || y),
            // There is no last position, so the weak and strong steps agree;
            // the successor of the horizon carries the settled value.
            Formula::Next(a) | Formula::WeakNext(a) => {
                let va = self.vec(a);
                let mut v: Vec<bool> = va[1..].to_vec();
                v.push(va[hh - 1]);
                v
            }
            Formula::Prev(a) | Formula::WeakPrev(a) => {
                let va = self.vec(a);
                let first = matches!(phi, Formula::WeakPrev(_));
                let mut v = vec![first];
                v.extend_from_slice(&va[..hh - 1]);
                v
            }
            Formula::Until(a, b) => self.backward(a, b, |ap, bp, nxt| bp || (ap && nxt), |_, bs| bs),
            Formula::Release(a, b) => self.backward(a, b, |ap, bp, nxt| bp && (ap || nxt), |_, bs| bs),
            Formula::Finally(b) => self.backward(b, b, |_, bp, nxt| bp || nxt, |_, bs| bs),
            Formula::Globally(a) => self.backward(a, a, |ap, _, nxt| ap && nxt, |as_, _| as_),
            Formula::Since(a, b) => self.forward(a, b, |ap, bp, prv| bp || (ap && prv), |_, b1| b1),
            Formula::Trigger(a, b) => self.forward(a, b, |ap, bp, prv| bp && (ap || prv), |_, b1| b1),
            Formula::Once(b) => self.forward(b, b, |_, bp, prv| bp || prv, |_, b1| b1),
            Formula::Historically(a) => self.forward(a, a, |ap, _, prv| ap && prv, |a1, _| a1),
        };
        assert!(
            v[hh - 4..].iter().all(|&b| b == v[hh - 1]),
            "vector not settled at the horizon for {phi}"
        );
        self.memo.insert(phi.clone(), v.clone());
        v
    }

    fn backward(
        &mut self,
        a: &Formula,
        b: &Formula,
        step: impl Fn(bool, bool, bool) -> bool,
        seed: impl Fn(bool, bool) -> bool,
    ) -> Vec<bool> {
        let va = self.vec(a);
        let vb = self.vec(b);
        let hh = self.horizon;
        let mut v = vec![false; hh];
        v[hh - 1] = seed(va[hh - 1], vb[hh - 1]);
        for p in (0..hh - 1).rev() {
            v[p] = step(va[p], vb[p], v[p + 1]);
        }
        v
    }

    fn forward(
        &mut self,
        a: &Formula,
        b: &Formula,
        step: impl Fn(bool, bool, bool) -> bool,
        seed: impl Fn(bool, bool) -> bool,
    ) -> Vec<bool> {
        let va = self.vec(a);
        let vb = self.vec(b);
        let hh = self.horizon;
        let mut v = vec![false; hh];
        v[0] = seed(va[0], vb[0]);
        for p in 1..hh {
            v[p] = step(va[p], vb[p], v[p - 1]);
        }
        v
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_formula, gen_past_formula, gen_word, signature_for, GenConfig};
    use crate::rng;
    use lrv_core::{eval, Valuation};

    fn letters(xs: &[(u32, bool)]) -> Model {
        Model::new(
            xs.iter()
                .map(|(d, b)| Valuation::new().with_data("x", *d).with_bool("p", *b))
                .collect(),
        )
    }

    #[test]
    fn the_loop_never_runs_out_of_positions() {
        // On any finite reading X⊤ fails at the last letter; the loop has no
        // last letter.
        let m = letters(&[(0, true), (1, false)]);
        let gx = Formula::True.next().globally();
        assert!(eval_word_lasso(&m, &gx));
        assert!(!eval(&m, 1, &gx));
    }

    #[test]
    fn future_operators_read_the_constant_tail() {
        let m = letters(&[(0, true), (1, false), (2, false)]);
        let p = Formula::boolv("p");
        assert!(eval_word_lasso(&m, &p.clone().finally()));
        assert!(!eval_word_lasso(&m, &p.clone().finally().globally()));
        let m2 = letters(&[(0, false), (1, true)]);
        assert!(eval_word_lasso(&m2, &p.clone().finally().globally()));
        assert!(!eval_word_lasso(&m2, &p.globally()));
    }

    #[test]
    fn obligations_cross_into_and_out_of_the_tail() {
        // Tail value 7 repeats the prefix value at position 1.
        let m = letters(&[(7, false), (3, false), (7, false)]);
        let back = Formula::past_eq("x", "x", Formula::True);
        assert!(eval_word_lasso_at(&m, 3, &back));
        assert!(!eval_word_lasso_at(&m, 2, &back));
        // A future witness for position 2's value 3 never arrives.
        let fwd = Formula::fut_eq("x", "x", Formula::True);
        assert!(!eval_word_lasso_at(&m, 2, &fwd));
        assert!(eval_word_lasso_at(&m, 1, &fwd));
        let fwd_neq = Formula::fut_neq("x", "x", Formula::True);
        assert!(!eval_word_lasso_at(&m, 3, &fwd_neq));
        assert!(eval_word_lasso_at(&m, 2, &fwd_neq));
    }

    #[test]
    fn pure_past_agrees_with_finite_evaluation() {
        let cfg = GenConfig::new(&["x", "y"], &["p"], true, 1);
        let sig = signature_for(&cfg);
        let mut r = rng(23);
        for _ in 0..300 {
            let phi = gen_past_formula(&mut r, &cfg, 1, 5);
            let w = gen_word(&mut r, &sig, 1, 6, 3);
            for i in 1..=w.len() {
                assert_eq!(
                    eval_word_lasso_at(&w, i, &phi),
                    eval(&w, i, &phi),
                    "{phi} at {i} on {w:?}"
                );
            }
        }
    }

    #[test]
    fn repeating_the_tail_letter_changes_nothing() {
        let cfg = GenConfig::new(&["x", "y"], &["p"], true, 2);
        let sig = signature_for(&cfg);
        let mut r = rng(41);
        for _ in 0..300 {
            let case = gen_formula(&mut r, &cfg);
            let w = gen_word(&mut r, &sig, 1, 5, 3);
            let mut extended = w.vals.clone();
            extended.push(extended.last().unwrap().clone());
            extended.push(extended.last().unwrap().clone());
            let w2 = Model::new(extended);
            assert_eq!(
                eval_word_lasso(&w, &case.phi),
                eval_word_lasso(&w2, &case.phi),
                "{} on {w:?}",
                case.phi
            );
        }
    }
}
