//! Core types and operations for the logic of repeating values (LRV):
//! formulas over multi-attributed data words, their finite-model semantics,
//! fragment classification, and the normalizing rewrites used by the
//! game-solving pipeline.

pub mod ast;
pub mod classify;
pub mod eval;
pub mod parser;
pub mod print;
pub mod transform;

pub use ast::{big_and, big_or, Dir, Formula, FragmentFlags, Model, Owner, Signature, Valuation, VarKind};
pub use classify::{check_single_sided, classify_fragment};
pub use eval::eval;
pub use parser::{parse_expr_with, parse_formula, ParseError};
pub use print::formula_file;
pub use transform::{normalize_local, remove_disequalities, to_nnf, x_length, FragmentError};
