//! Satisfaction over finite models. Positions are 1-based; `X` fails at the
//! last position while `WX` holds there, and symmetrically for `Y`/`WY`.

use crate::ast::{Dir, Formula, Model};

/// Evaluates `φ` at position `i` of `σ`. Panics if `i` is out of range or a
/// variable is missing from a valuation.
pub fn eval(sigma: &Model, i: usize, phi: &Formula) -> bool {
    let n = sigma.len();
    assert!(1 <= i && i <= n, "position {i} out of range 1..={n}");
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Bool(q) => sigma.boolv(i, q),
        Formula::LocalEq { x, j, y } => {
            let target = i as i64 + *j as i64;
            1 <= target && target <= n as i64 && sigma.data(i, x) == sigma.data(target as usize, y)
        }
        Formula::Oblig { dir, neq, x, y, nested } => {
            let here = sigma.data(i, x);
            let range: Box<dyn Iterator<Item = usize>> = match dir {
                Dir::Future => Box::new(i + 1..=n),
                Dir::Past => Box::new(1..i),
            };
            let mut range = range;
            range.any(|j| {
                let eq = sigma.data(j, y) == here;
                (if *neq { !eq } else { eq }) && eval(sigma, j, nested)
            })
        }
        Formula::Not(a) => !eval(sigma, i, a),
        Formula::And(a, b) => eval(sigma, i, a) && eval(sigma, i, b),
        Formula::Or(a, b) => eval(sigma, i, a) || eval(sigma, i, b),
        Formula::Implies(a, b) => !eval(sigma, i, a) || eval(sigma, i, b),
        Formula::Next(a) => i < n && eval(sigma, i + 1, a),
        Formula::WeakNext(a) => i >= n || eval(sigma, i + 1, a),
        Formula::Prev(a) => i > 1 && eval(sigma, i - 1, a),
        Formula::WeakPrev(a) => i <= 1 || eval(sigma, i - 1, a),
        Formula::Until(a, b) => (i..=n).any(|k| eval(sigma, k, b) && (i..k).all(|m| eval(sigma, m, a))),
        Formula::Release(a, b) => {
            (i..=n).all(|k| eval(sigma, k, b) || (i..k).any(|m| eval(sigma, m, a)))
        }
        Formula::Since(a, b) => {
            (1..=i).any(|k| eval(sigma, k, b) && (k + 1..=i).all(|m| eval(sigma, m, a)))
        }
        Formula::Trigger(a, b) => {
            (1..=i).all(|k| eval(sigma, k, b) || (k + 1..=i).any(|m| eval(sigma, m, a)))
        }
        Formula::Finally(a) => (i..=n).any(|k| eval(sigma, k, a)),
        Formula::Globally(a) => (i..=n).all(|k| eval(sigma, k, a)),
        Formula::Once(a) => (1..=i).any(|k| eval(sigma, k, a)),
        Formula::Historically(a) => (1..=i).all(|k| eval(sigma, k, a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Formula as Fm, Valuation};

    fn data_word(xs: &[u32]) -> Model {
        Model::new(xs.iter().map(|&v| Valuation::new().with_data("x", v)).collect())
    }

    #[test]
    fn past_obligation_needs_an_earlier_position() {
        let m = data_word(&[7]);
        assert!(!eval(&m, 1, &Fm::past_eq("x", "x", Fm::True)));
    }

    #[test]
    fn local_eq_respects_word_bounds() {
        let m = data_word(&[5, 5]);
        assert!(eval(&m, 1, &Fm::eq("x", 1, "x")));
        assert!(!eval(&m, 2, &Fm::eq("x", 1, "x")));
    }

    #[test]
    fn past_disequality_finds_a_differing_value() {
        let m = data_word(&[1, 2, 1]);
        assert!(eval(&m, 3, &Fm::past_neq("x", "x", Fm::True)));
        // the only differing past position is 1, where eq(x,-1,x) has no target
        assert!(!eval(&m, 2, &Fm::past_neq("x", "x", Fm::eq("x", -1, "x"))));
    }

    #[test]
    fn weak_next_true_at_last_position() {
        let m = data_word(&[1, 2]);
        let wx_false = Fm::WeakNext(Box::new(Fm::False));
        assert!(!eval(&m, 1, &wx_false));
        assert!(eval(&m, 2, &wx_false));
        assert!(!eval(&m, 2, &Fm::False.next()));
    }

    #[test]
    fn until_requires_the_goal_within_the_word() {
        let m = Model::new(vec![
            Valuation::new().with_bool("a", true).with_bool("b", false),
            Valuation::new().with_bool("a", true).with_bool("b", false),
            Valuation::new().with_bool("a", false).with_bool("b", true),
        ]);
        let f = Fm::boolv("a").until(Fm::boolv("b"));
        assert!(eval(&m, 1, &f));
        let short = Model::new(m.vals[..2].to_vec());
        assert!(!eval(&short, 1, &f));
    }

    #[test]
    fn since_mirrors_until() {
        let m = Model::new(vec![
            Valuation::new().with_bool("a", false).with_bool("b", true),
            Valuation::new().with_bool("a", true).with_bool("b", false),
            Valuation::new().with_bool("a", true).with_bool("b", false),
        ]);
        let f = Fm::boolv("a").since(Fm::boolv("b"));
        assert!(eval(&m, 3, &f));
        assert!(eval(&m, 1, &f));
        let m2 = Model::new(vec![
            Valuation::new().with_bool("a", false).with_bool("b", false),
            Valuation::new().with_bool("a", true).with_bool("b", false),
        ]);
        assert!(!eval(&m2, 2, &f));
    }

    #[test]
    fn nested_obligation_evaluates_at_the_witness() {
        // x: 3 1 3; at position 3, some earlier x equals 3 and satisfies "x repeats in one step".
        let m = data_word(&[3, 1, 3]);
        let f = Fm::past_eq("x", "x", Fm::eq("x", 2, "x"));
        assert!(eval(&m, 3, &f));
        let g = Fm::past_eq("x", "x", Fm::eq("x", 1, "x"));
        assert!(!eval(&m, 3, &g));
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn out_of_range_position_panics() {
        let m = data_word(&[1]);
        eval(&m, 2, &Fm::True);
    }
}
