//! Formulas evaluated as point sets: `Val^X_H`, logical kernels, theories.

use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::pointset::{PointSet, Space};
use crate::term::{Point, Term, VariableSet};

/// `[w ≡ w']_H`: the points whose kernel contains `(w, w')`.
pub fn equality_set(w: &Term, w2: &Term, space: &Arc<Space>) -> Result<PointSet> {
    let alg = space.algebra();
    let lhs = w.compile(space.vars(), alg)?;
    let rhs = w2.compile(space.vars(), alg)?;
    let mut stack = Vec::new();
    Ok(PointSet::from_predicate(space, |_, values| {
        lhs.eval(alg, values, &mut stack) == rhs.eval(alg, values, &mut stack)
    }))
}

/// `Val^X_H(u)`, the set of points satisfying `u`.
///
/// A quantifier over a variable of `X` is the quantifier of the Boolean
/// algebra; a quantifier over any other name evaluates its body in the space
/// extended by that coordinate and then projects it away.
pub fn val(u: &Formula, space: &Arc<Space>) -> Result<PointSet> {
    if let Some(v) = u.free_variables().into_iter().find(|v| !space.vars().contains(v)) {
        return Err(Error::UnknownVariable(v));
    }
    eval(u, space)
}

fn eval(u: &Formula, space: &Arc<Space>) -> Result<PointSet> {
    match u {
        Formula::Eq(w, w2) => equality_set(w, w2, space),
        Formula::Not(a) => Ok(eval(a, space)?.complement()),
        Formula::And(a, b) => eval(a, space)?.meet(&eval(b, space)?),
        Formula::Or(a, b) => eval(a, space)?.join(&eval(b, space)?),
        Formula::Exists(x, a) => quantify(x, a, space, true),
        Formula::Forall(x, a) => quantify(x, a, space, false),
    }
}

fn quantify(x: &str, body: &Formula, space: &Arc<Space>, existential: bool) -> Result<PointSet> {
    if space.vars().contains(x) {
        let inner = eval(body, space)?;
        return if existential { inner.exists(x) } else { inner.forall(x) };
    }
    let wide = space.extended(x)?;
    Ok(eval(body, &wide)?.project_last(existential))
}

/// Evaluates `u` over `vars` in `algebra` with the default budget.
pub fn val_in(u: &Formula, algebra: &Arc<FiniteAlgebra>, vars: &VariableSet) -> Result<PointSet> {
    val(u, &Space::new(algebra.clone(), vars.clone())?)
}

/// `u ∈ LKer(μ)`.
pub fn in_lker(u: &Formula, p: &Point) -> Result<bool> {
    let space = Space::new(p.algebra().clone(), p.vars().clone())?;
    let set = val(u, &space)?;
    Ok(set.contains(space.encode(p)?))
}

/// `u ∈ Th^X(H)`: `u` holds at every point.
pub fn in_theory(u: &Formula, space: &Arc<Space>) -> Result<bool> {
    Ok(val(u, space)?.is_full())
}

/// The equation `w ≡ w'` has a solution in the space.
pub fn is_admissible(w: &Term, w2: &Term, space: &Arc<Space>) -> Result<bool> {
    Ok(!equality_set(w, w2, space)?.is_empty())
}

/// `Val(u) = Val(v)` in every listed algebra, over the union of the free
/// variables of both formulas.
pub fn semantically_equal(u: &Formula, v: &Formula, algebras: &[Arc<FiniteAlgebra>]) -> Result<bool> {
    let mut free = u.free_variables();
    free.extend(v.free_variables());
    let vars = VariableSet::any(free)?;
    for h in algebras {
        let space = Space::new(h.clone(), vars.clone())?;
        if val(u, &space)? != val(v, &space)? {
            return Ok(false);
        }
    }
    Ok(true)
}
