//! Monadic second-order logic over annotated order types.

mod annot;
mod ast;
mod check;
mod library;
mod parse;

pub use annot::{AnnotatedStructure, Annotations};
pub use ast::{Formula, Macro, MsoFormula, Quantifier, Sort};
pub use check::{
    check, check_with_witness, enumerate, eval_free, optimize, Assignment, Checker, Direction,
    SET_QUANTIFIER_CAP,
};
pub use library::{convpartition, formula_library, library_macros, LIBRARY_NAMES};
pub use parse::{parse_formula, parse_with_macros, Signature};
