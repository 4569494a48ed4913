use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Which player controls a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Owner {
    Env,
    Sys,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Bool,
    Data,
}

/// Variable declarations, split by owner and kind. The four sets are kept
/// pairwise disjoint by `declare`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub env_bools: BTreeSet<String>,
    pub sys_bools: BTreeSet<String>,
    pub env_datas: BTreeSet<String>,
    pub sys_datas: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable; rejects any name already declared in any of the four sets.
    pub fn declare(&mut self, owner: Owner, kind: VarKind, name: &str) -> Result<(), String> {
        if self.lookup(name).is_some() {
            return Err(format!("duplicate declaration of `{name}`"));
        }
        let set = match (owner, kind) {
            (Owner::Env, VarKind::Bool) => &mut self.env_bools,
            (Owner::Sys, VarKind::Bool) => &mut self.sys_bools,
            (Owner::Env, VarKind::Data) => &mut self.env_datas,
            (Owner::Sys, VarKind::Data) => &mut self.sys_datas,
        };
        set.insert(name.to_string());
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<(Owner, VarKind)> {
        if self.env_bools.contains(name) {
            Some((Owner::Env, VarKind::Bool))
        } else if self.sys_bools.contains(name) {
            Some((Owner::Sys, VarKind::Bool))
        } else if self.env_datas.contains(name) {
            Some((Owner::Env, VarKind::Data))
        } else if self.sys_datas.contains(name) {
            Some((Owner::Sys, VarKind::Data))
        } else {
            None
        }
    }

    pub fn is_bool(&self, name: &str) -> bool {
        matches!(self.lookup(name), Some((_, VarKind::Bool)))
    }

    pub fn is_data(&self, name: &str) -> bool {
        matches!(self.lookup(name), Some((_, VarKind::Data)))
    }

    pub fn bools(&self) -> impl Iterator<Item = &String> {
        self.env_bools.iter().chain(self.sys_bools.iter())
    }

    pub fn datas(&self) -> impl Iterator<Item = &String> {
        self.env_datas.iter().chain(self.sys_datas.iter())
    }
}

/// Direction of a repetition obligation: toward the future or the past.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    Future,
    Past,
}

/// LRV formulas. Local tests `eq(x, j, y)` relate the value of `x` now with
/// the value of `y` at offset `j` (possibly negative). An obligation
/// `Oblig { dir, neq, x, y, nested }` asks for a position in the given
/// direction where `y` carries a value equal (or, with `neq`, unequal) to the
/// current value of `x` and where `nested` holds.
///
/// `F`, `G`, `O` (once) and `H` (historically) are kept as primitives so that
/// generated formulas stay readable; evaluation and the automaton translation
/// treat them by their usual definitions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Bool(String),
    LocalEq { x: String, j: i32, y: String },
    Oblig { dir: Dir, neq: bool, x: String, y: String, nested: Box<Formula> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    WeakNext(Box<Formula>),
    Prev(Box<Formula>),
    WeakPrev(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Since(Box<Formula>, Box<Formula>),
    Trigger(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Once(Box<Formula>),
    Historically(Box<Formula>),
}

impl Formula {
    pub fn boolv(name: &str) -> Self {
        Formula::Bool(name.to_string())
    }

    pub fn eq(x: &str, j: i32, y: &str) -> Self {
        Formula::LocalEq { x: x.to_string(), j, y: y.to_string() }
    }

    pub fn fut_eq(x: &str, y: &str, nested: Formula) -> Self {
        Formula::Oblig {
            dir: Dir::Future,
            neq: false,
            x: x.to_string(),
            y: y.to_string(),
            nested: Box::new(nested),
        }
    }

    pub fn fut_neq(x: &str, y: &str, nested: Formula) -> Self {
        Formula::Oblig {
            dir: Dir::Future,
            neq: true,
            x: x.to_string(),
            y: y.to_string(),
            nested: Box::new(nested),
        }
    }

    pub fn past_eq(x: &str, y: &str, nested: Formula) -> Self {
        Formula::Oblig {
            dir: Dir::Past,
            neq: false,
            x: x.to_string(),
            y: y.to_string(),
            nested: Box::new(nested),
        }
    }

    pub fn past_neq(x: &str, y: &str, nested: Formula) -> Self {
        Formula::Oblig {
            dir: Dir::Past,
            neq: true,
            x: x.to_string(),
            y: y.to_string(),
            nested: Box::new(nested),
        }
    }

    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn next(self) -> Self {
        Formula::Next(Box::new(self))
    }

    pub fn prev(self) -> Self {
        Formula::Prev(Box::new(self))
    }

    pub fn until(self, rhs: Formula) -> Self {
        Formula::Until(Box::new(self), Box::new(rhs))
    }

    pub fn since(self, rhs: Formula) -> Self {
        Formula::Since(Box::new(self), Box::new(rhs))
    }

    pub fn finally(self) -> Self {
        Formula::Finally(Box::new(self))
    }

    pub fn globally(self) -> Self {
        Formula::Globally(Box::new(self))
    }

    pub fn once(self) -> Self {
        Formula::Once(Box::new(self))
    }

    pub fn historically(self) -> Self {
        Formula::Historically(Box::new(self))
    }

    /// Applies `X` `n` times.
    pub fn next_n(self, n: usize) -> Self {
        (0..n).fold(self, |f, _| f.next())
    }

    /// Applies `Y` `n` times.
    pub fn prev_n(self, n: usize) -> Self {
        (0..n).fold(self, |f, _| f.prev())
    }

    /// Walks the formula top-down, including obligation nests.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::True | Formula::False | Formula::Bool(_) | Formula::LocalEq { .. } => {}
            Formula::Oblig { nested, .. } => nested.visit(f),
            Formula::Not(a)
            | Formula::Next(a)
            | Formula::WeakNext(a)
            | Formula::Prev(a)
            | Formula::WeakPrev(a)
            | Formula::Finally(a)
            | Formula::Globally(a)
            | Formula::Once(a)
            | Formula::Historically(a) => a.visit(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::Release(a, b)
            | Formula::Since(a, b)
            | Formula::Trigger(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Every variable occurring in the formula (obligation nests included).
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Bool(q) => {
                out.insert(q.clone());
            }
            Formula::LocalEq { x, y, .. } => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Oblig { x, y, .. } => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            _ => {}
        });
        out
    }
}

/// Conjunction of a list; `true` when empty.
pub fn big_and(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = parts.into_iter();
    match it.next() {
        None => Formula::True,
        Some(first) => it.fold(first, Formula::and),
    }
}

/// Disjunction of a list; `false` when empty.
pub fn big_or(parts: impl IntoIterator<Item = Formula>) -> Formula {
    let mut it = parts.into_iter();
    match it.next() {
        None => Formula::False,
        Some(first) => it.fold(first, Formula::or),
    }
}

/// One round's worth of values: a boolean and a data assignment. Data values
/// are identifiers into an infinite domain of which only equality is
/// observable.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valuation {
    pub bools: BTreeMap<String, bool>,
    pub datas: BTreeMap<String, u32>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_bool(mut self, name: &str, v: bool) -> Self {
        self.bools.insert(name.to_string(), v);
        self
    }

    pub fn with_data(mut self, name: &str, v: u32) -> Self {
        self.datas.insert(name.to_string(), v);
        self
    }

    /// Merges two valuations over disjoint variables (an environment move
    /// joined with a system response).
    pub fn merged(&self, other: &Valuation) -> Valuation {
        let mut out = self.clone();
        out.bools.extend(other.bools.iter().map(|(k, v)| (k.clone(), *v)));
        out.datas.extend(other.datas.iter().map(|(k, v)| (k.clone(), *v)));
        out
    }
}

/// A finite sequence of valuations; positions are 1-based throughout.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    pub vals: Vec<Valuation>,
}

impl Model {
    pub fn new(vals: Vec<Valuation>) -> Self {
        Model { vals }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    /// Value of data variable `x` at 1-based position `i`.
    pub fn data(&self, i: usize, x: &str) -> u32 {
        *self.vals[i - 1]
            .datas
            .get(x)
            .unwrap_or_else(|| panic!("no data variable `{x}` at position {i}"))
    }

    pub fn boolv(&self, i: usize, q: &str) -> bool {
        *self.vals[i - 1]
            .bools
            .get(q)
            .unwrap_or_else(|| panic!("no boolean variable `{q}` at position {i}"))
    }

    /// The prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Model {
        Model { vals: self.vals[..n].to_vec() }
    }
}

/// Syntactic fragment membership. Each flag is true when the restriction it
/// names holds of the formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentFlags {
    /// Every obligation nest is exactly `true`.
    pub no_nested: bool,
    /// No disequality obligations.
    pub no_diseq: bool,
    /// No past obligations.
    pub no_past_obl: bool,
    /// No future obligations.
    pub no_fut_obl: bool,
    /// Every obligation nest stays inside the pure-past nested grammar.
    pub nested_past_only: bool,
    /// Every obligation nest stays inside the nested grammar extended with F/G.
    pub nested_f_allowed: bool,
}
