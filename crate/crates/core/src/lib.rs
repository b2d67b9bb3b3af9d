//! Logical geometry over finite algebras.
//!
//! Formulas of a first-order language with equality are evaluated as sets of
//! points of affine spaces `Hom(W(X), H)` for a finite algebra `H`. On top of
//! that sit the algebraic, logical and model-theoretic Galois closures, point
//! types, and decision procedures for isotypy, logical homogeneity and
//! saturation.
//!
//! ```
//! use std::sync::Arc;
//! use halmos_core::{fixtures, parser::parse_formula_in, pointset::Space, semantics::val, term::VariableSet};
//!
//! let z3 = Arc::new(fixtures::z3());
//! let space = Space::new(z3.clone(), VariableSet::new(["x"]).unwrap()).unwrap();
//! let u = parse_formula_in("exists y. add(y,y) = x", z3.signature()).unwrap();
//! assert!(val(&u, &space).unwrap().is_full());
//! ```

pub mod algebra;
pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod formula;
pub mod galois;
pub mod parser;
pub mod pointset;
pub mod pool;
pub mod semantics;
pub mod term;

pub use algebra::{ElementMap, FiniteAlgebra, Signature};
pub use error::{Error, Result};
pub use formula::{Formula, SpecialFormula};
pub use pointset::{PointSet, Space};
pub use term::{Point, Substitution, Term, VariableSet};

/// Default cap on the number of points in a space (and table cells).
pub const DEFAULT_BUDGET: usize = 1 << 24;

/// `base^exp`, or a budget error naming the required size.
pub(crate) fn check_budget(what: &str, base: u128, exp: usize, budget: usize) -> Result<usize> {
    let mut required: u128 = 1;
    for _ in 0..exp {
        required = required.saturating_mul(base);
        if required > budget as u128 {
            // report the full size when it fits
            let full = base.checked_pow(exp as u32).unwrap_or(u128::MAX);
            return Err(Error::Budget {
                what: what.to_string(),
                required: full,
                budget,
            });
        }
    }
    Ok(required as usize)
}

/// C-style identifier.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
