use lrv_core::{x_length, Formula, Signature, VarKind};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Simple,
    Nested,
}

/// Shared context for frame machinery: the tracked variables, the pool of
/// nested formulas, the window length and the operating mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameContext {
    pub dvars: BTreeSet<String>,
    pub bvars: BTreeSet<String>,
    /// Nested-formula pool; always contains `true`. In simple mode it is exactly `{true}`.
    pub nested: BTreeSet<Formula>,
    pub l: usize,
    pub mode: Mode,
    cl: BTreeSet<Formula>,
}

impl FrameContext {
    pub fn simple<I, J>(dvars: I, bvars: J, l: usize) -> Self
    where
        I: IntoIterator<Item = String>,
        J: IntoIterator<Item = String>,
    {
        let nested: BTreeSet<Formula> = [Formula::True].into_iter().collect();
        let cl = crate::sets::closure(&nested);
        FrameContext {
            dvars: dvars.into_iter().collect(),
            bvars: bvars.into_iter().collect(),
            nested,
            l,
            mode: Mode::Simple,
            cl,
        }
    }

    pub fn nested<I, J, K>(dvars: I, bvars: J, nests: K, l: usize) -> Self
    where
        I: IntoIterator<Item = String>,
        J: IntoIterator<Item = String>,
        K: IntoIterator<Item = Formula>,
    {
        let mut nested: BTreeSet<Formula> = nests.into_iter().collect();
        nested.insert(Formula::True);
        let cl = crate::sets::closure(&nested);
        FrameContext {
            dvars: dvars.into_iter().collect(),
            bvars: bvars.into_iter().collect(),
            nested,
            l,
            mode: Mode::Nested,
            cl,
        }
    }

    /// Context induced by a formula: variables it uses, its X-length, and
    /// (in nested mode) the pool of obligation nests occurring anywhere in it.
    pub fn for_formula(sig: &Signature, phi: &Formula, mode: Mode) -> Self {
        let mut dvars = BTreeSet::new();
        let mut bvars = BTreeSet::new();
        for v in phi.variables() {
            match sig.lookup(&v) {
                Some((_, VarKind::Data)) => {
                    dvars.insert(v);
                }
                Some((_, VarKind::Bool)) => {
                    bvars.insert(v);
                }
                None => panic!("variable {v} not declared"),
            }
        }
        let l = x_length(phi);
        match mode {
            Mode::Simple => FrameContext::simple(dvars, bvars, l),
            Mode::Nested => {
                let mut nests = Vec::new();
                phi.visit(&mut |f| {
                    if let Formula::Oblig { nested, .. } = f {
                        nests.push((**nested).clone());
                    }
                });
                FrameContext::nested(dvars, bvars, nests, l)
            }
        }
    }

    /// cl(Φ): the nested pool closed under subformulas and (canonical) negation.
    pub fn cl(&self) -> &BTreeSet<Formula> {
        &self.cl
    }
}

/// One atomic constraint relative to a frame's anchor position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    /// X^i q
    BoolAt(usize, String),
    /// X^i x = X^j y
    EqAt(usize, String, usize, String),
    /// X^i <x has an earlier position with y's value, where psi held>
    OblAt(usize, String, String, Formula),
}

impl Constraint {
    pub fn max_index(&self) -> usize {
        match self {
            Constraint::BoolAt(i, _) => *i,
            Constraint::EqAt(i, _, j, _) => (*i).max(*j),
            Constraint::OblAt(i, _, _, _) => *i,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::BoolAt(i, q) => write!(f, "X^{i} {q}"),
            Constraint::EqAt(i, x, j, y) => write!(f, "X^{i} {x} = X^{j} {y}"),
            Constraint::OblAt(i, x, y, psi) => write!(f, "X^{i} <{x} ~ {y} ? {psi}>"),
        }
    }
}

/// Record of which value groups repeated in the past and which nested
/// formulas held at those positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RepetitionHistory(pub BTreeSet<(BTreeSet<String>, BTreeSet<Formula>)>);

impl RepetitionHistory {
    pub fn empty() -> Self {
        RepetitionHistory(BTreeSet::new())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn with(&self, varset: BTreeSet<String>, formulaset: BTreeSet<Formula>) -> Self {
        assert!(!varset.is_empty(), "history entries need a nonempty variable group");
        let mut s = self.0.clone();
        s.insert((varset, formulaset));
        RepetitionHistory(s)
    }
}

impl fmt::Display for RepetitionHistory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (vs, fs)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({{")?;
            for (m, v) in vs.iter().enumerate() {
                if m > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "}},{{")?;
            for (m, p) in fs.iter().enumerate() {
                if m > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, "}})")?;
        }
        write!(f, "}}")
    }
}

/// The pairs (variable, nested formula) a position owes to the past.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PastObligation(pub BTreeSet<(String, Formula)>);

impl PastObligation {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn var_set(&self) -> BTreeSet<String> {
        self.0.iter().map(|(v, _)| v.clone()).collect()
    }
}

impl fmt::Display for PastObligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (v, p)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({v},{p})")?;
        }
        write!(f, "}}")
    }
}

/// Key of one counter: a variable group in simple mode, a repetition
/// history in nested mode. Ordered so vectors serialize canonically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CounterKey {
    Vars(BTreeSet<String>),
    Hist(RepetitionHistory),
}

impl fmt::Display for CounterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CounterKey::Vars(vs) => {
                write!(f, "{{")?;
                for (k, v) in vs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "}}")
            }
            CounterKey::Hist(h) => write!(f, "{h}"),
        }
    }
}

/// Sparse integer vector over counter keys; zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateVector(BTreeMap<CounterKey, i64>);

impl UpdateVector {
    pub fn zero() -> Self {
        UpdateVector(BTreeMap::new())
    }

    pub fn bump(&mut self, key: CounterKey, delta: i64) {
        let v = self.0.entry(key).or_insert(0);
        *v += delta;
        if *v == 0 {
            self.0.retain(|_, n| *n != 0);
        }
    }

    pub fn get(&self, key: &CounterKey) -> i64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn plus(&self, other: &UpdateVector) -> UpdateVector {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.bump(k.clone(), *v);
        }
        out
    }

    pub fn minus(&self, other: &UpdateVector) -> UpdateVector {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.bump(k.clone(), -*v);
        }
        out
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.values().all(|v| *v >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CounterKey, i64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }
}

impl fmt::Display for UpdateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (key, v)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{key}: {v}")?;
        }
        write!(f, "]")
    }
}

/// A window of constraints over e+1 consecutive positions, with the nested
/// decorations when the mode calls for them. Level -1 is the unique bottom
/// frame used before the first position exists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Frame {
    pub e: i32,
    pub omega: BTreeSet<Constraint>,
    /// Nested mode: index i holds the cl(Φ) members true at the anchor+i position.
    pub phi_fr: Vec<BTreeSet<Formula>>,
    /// Nested mode: repetition history per (data variable, level).
    pub h_fr: BTreeMap<(String, usize), RepetitionHistory>,
}

impl Frame {
    pub fn bottom() -> Self {
        Frame { e: -1, omega: BTreeSet::new(), phi_fr: Vec::new(), h_fr: BTreeMap::new() }
    }

    pub fn is_bottom(&self) -> bool {
        self.e < 0
    }

    pub fn simple(e: usize, omega: BTreeSet<Constraint>) -> Self {
        Frame { e: e as i32, omega, phi_fr: Vec::new(), h_fr: BTreeMap::new() }
    }

    pub fn level(&self) -> usize {
        assert!(self.e >= 0, "bottom frame has no level");
        self.e as usize
    }

    pub fn has(&self, c: &Constraint) -> bool {
        self.omega.contains(c)
    }

    pub fn has_eq(&self, i: usize, x: &str, j: usize, y: &str) -> bool {
        self.omega.contains(&Constraint::EqAt(i, x.to_string(), j, y.to_string()))
    }

    /// Pairs owed to the past by x at the given level.
    pub fn po(&self, x: &str, i: usize) -> PastObligation {
        let mut out = BTreeSet::new();
        for c in &self.omega {
            if let Constraint::OblAt(ci, cx, cy, psi) = c {
                if *ci == i && cx == x {
                    out.insert((cy.clone(), psi.clone()));
                }
            }
        }
        PastObligation(out)
    }

    /// Variables sharing x's value at the given level (includes x when reflexivity holds).
    pub fn class(&self, x: &str, i: usize) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.omega {
            if let Constraint::EqAt(ci, cx, cj, cy) = c {
                if *ci == i && *cj == i && cx == x {
                    out.insert(cy.clone());
                }
            }
        }
        out
    }

    pub fn has_forward_ref(&self, x: &str, i: usize) -> bool {
        self.omega.iter().any(|c| {
            matches!(c, Constraint::EqAt(ci, cx, cj, _) if *ci == i && cx == x && *cj > i)
        })
    }

    pub fn has_backward_ref(&self, x: &str, i: usize) -> bool {
        self.omega.iter().any(|c| {
            matches!(c, Constraint::EqAt(ci, cx, cj, _) if *ci == i && cx == x && *cj < i)
        })
    }

    pub fn phi_at(&self, i: usize) -> &BTreeSet<Formula> {
        &self.phi_fr[i]
    }

    pub fn hist(&self, x: &str, i: usize) -> &RepetitionHistory {
        self.h_fr
            .get(&(x.to_string(), i))
            .unwrap_or_else(|| panic!("no history recorded for ({x},{i})"))
    }

    /// Stable text form: sorted constraints, then the nested decorations.
    pub fn canonical_string(&self) -> String {
        use fmt::Write as _;
        let mut s = String::new();
        if self.is_bottom() {
            s.push_str("frame bottom\n");
            return s;
        }
        let _ = writeln!(s, "frame level={}", self.e);
        for c in &self.omega {
            let _ = writeln!(s, "  {c}");
        }
        for (i, set) in self.phi_fr.iter().enumerate() {
            let _ = write!(s, "  phi[{i}] = {{");
            for (k, p) in set.iter().enumerate() {
                if k > 0 {
                    let _ = write!(s, ", ");
                }
                let _ = write!(s, "{p}");
            }
            let _ = writeln!(s, "}}");
        }
        for ((x, i), h) in &self.h_fr {
            let _ = writeln!(s, "  h[{x},{i}] = {h}");
        }
        s
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum FramesError {
    #[error("one-step consistency is not defined for levels ({left}, {right})")]
    LevelPair { left: i32, right: i32 },
    #[error("model of length {model} cannot realize {frames} window-{l} frames (need length {})", frames + l)]
    LengthMismatch { frames: usize, l: usize, model: usize },
}
