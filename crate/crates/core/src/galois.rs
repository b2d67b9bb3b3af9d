//! The three Galois correspondences between sets of points and sets of
//! equations / formulas / special formulas, and their closures.
//!
//! The "up" direction (points to formulas) produces infinite sets; those are
//! exposed only as membership predicates (`*_up_contains`).

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::Product;
use crate::analysis::in_type;
use crate::error::{Error, Result};
use crate::formula::{Formula, SpecialFormula};
use crate::pointset::{PointSet, Space};
use crate::semantics::{equality_set, val};
use crate::term::{enumerate_terms, Substitution, Term};

/// A finite system of equations `w = w'` over the variables of a space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquationSet {
    pub pairs: Vec<(Term, Term)>,
}

impl EquationSet {
    pub fn new(pairs: Vec<(Term, Term)>) -> Self {
        EquationSet { pairs }
    }
}

/// `T'_H`: common solutions of the equations; the full space when `T` is
/// empty.
pub fn ag_solutions(system: &EquationSet, space: &Arc<Space>) -> Result<PointSet> {
    system.pairs.iter().try_fold(PointSet::full(space), |acc, (w, w2)| {
        acc.meet(&equality_set(w, w2, space)?)
    })
}

/// Whether `(w, w')` lies in `A'_H = ⋂_{μ∈A} Ker(μ)`.
pub fn ag_up_contains(a: &PointSet, w: &Term, w2: &Term) -> Result<bool> {
    a.is_subset(&equality_set(w, w2, a.space())?)
}

/// `A''_H`: the points whose kernel contains every equation true on all of
/// `A`. Empty for empty `A`.
///
/// With `A = {μ_1..μ_m}`, the joint map `W(X) → H^m` factors through the
/// subalgebra `S ⊆ H^m` generated by `g_k = (μ_i(x_k))_i`. A point `ν` is in
/// the closure iff `g_k ↦ ν(x_k)` extends to a homomorphism `S → H`, i.e.
/// iff the subalgebra of `H^(m+1)` generated by `(g_k, ν(x_k))` is the graph
/// of a function on `S`.
pub fn ag_closure(a: &PointSet) -> Result<PointSet> {
    let space = a.space();
    if a.is_empty() {
        return Ok(a.clone());
    }
    let alg = space.algebra();
    let members: Vec<Vec<usize>> = a
        .indices()
        .map(|i| {
            let mut v = Vec::new();
            space.decode_values(i, &mut v);
            v
        })
        .collect();
    let m = members.len();
    let product = Product::power(alg, m + 1);
    let limit = space.budget() / (m + 1);
    let overflow = || Error::Budget {
        what: format!("subalgebra of {}^{}", alg.name(), m + 1),
        required: (alg.size() as u128).saturating_pow(m as u32 + 1),
        budget: space.budget(),
    };
    let mut out = a.clone();
    let mut candidate = Vec::new();
    for index in 0..space.size() {
        if a.contains(index) {
            continue;
        }
        space.decode_values(index, &mut candidate);
        let gens = (0..space.vars().len()).map(|k| {
            let mut g: Vec<usize> = members.iter().map(|mu| mu[k]).collect();
            g.push(candidate[k]);
            g
        });
        let closed = product.close(gens, limit).ok_or_else(overflow)?;
        let mut graph: HashMap<&[usize], usize> = HashMap::with_capacity(closed.len());
        let functional = closed.iter().all(|t| {
            let (arg, value) = t.split_at(m);
            *graph.entry(arg).or_insert(value[0]) == value[0]
        });
        if functional {
            out.insert(index);
        }
    }
    Ok(out)
}

/// Result of an algebraic closure computation that may fall back to a
/// bounded term search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgClosure {
    pub points: PointSet,
    /// The closure only honours equations between terms up to a fixed depth,
    /// so it may be larger than the exact one.
    pub approximate: bool,
}

/// The exact closure, or the depth-bounded term closure when the exact one
/// exceeds the budget.
pub fn ag_closure_or_approximate(a: &PointSet, depth: usize) -> Result<AgClosure> {
    match ag_closure(a) {
        Ok(points) => Ok(AgClosure {
            points,
            approximate: false,
        }),
        Err(e) if e.is_resource() => Ok(AgClosure {
            points: ag_closure_by_terms(a, depth)?,
            approximate: true,
        }),
        Err(e) => Err(e),
    }
}

/// Closure with respect to the equations between terms of depth at most
/// `depth`: the points `ν` such that any two such terms agreeing on all of
/// `A` agree at `ν`. Terms are enumerated level by level and deduplicated by
/// their value vector on the space.
pub fn ag_closure_by_terms(a: &PointSet, depth: usize) -> Result<PointSet> {
    let space = a.space();
    if a.is_empty() {
        return Ok(a.clone());
    }
    let functions = term_functions(space, depth)?;
    let members: Vec<usize> = a.indices().collect();
    let mut classes: HashMap<Vec<usize>, Vec<&Vec<usize>>> = HashMap::new();
    for f in &functions {
        let restriction = members.iter().map(|&i| f[i]).collect();
        classes.entry(restriction).or_default().push(f);
    }
    Ok(PointSet::from_predicate(space, |index, _| {
        classes.values().all(|fs| fs.iter().all(|f| f[index] == fs[0][index]))
    }))
}

/// Distinct value vectors over the space of all terms up to `depth`.
pub(crate) fn term_functions(space: &Arc<Space>, depth: usize) -> Result<Vec<Vec<usize>>> {
    let alg = space.algebra();
    let sig = alg.signature();
    let size = space.size();
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut frontier_start = 0;
    for t in enumerate_terms(sig, space.vars(), 0) {
        let code = t.compile(space.vars(), alg)?;
        let mut stack = Vec::new();
        let mut values = Vec::with_capacity(size);
        space.for_each_point(|_, vals| values.push(code.eval(alg, vals, &mut stack)));
        if seen.insert(values.clone(), ()).is_none() {
            all.push(values);
        }
    }
    for _ in 0..depth {
        let end = all.len();
        let mut fresh = Vec::new();
        for (op, sym) in sig.ops().iter().enumerate().filter(|(_, s)| s.arity > 0) {
            crate::algebra::for_each_tuple(end, sym.arity, |idx| {
                if idx.iter().all(|&i| i < frontier_start) {
                    return;
                }
                let mut args = vec![0; idx.len()];
                let values: Vec<usize> = (0..size)
                    .map(|p| {
                        for (slot, &i) in args.iter_mut().zip(idx) {
                            *slot = all[i][p];
                        }
                        alg.apply(op, &args)
                    })
                    .collect();
                fresh.push(values);
            });
        }
        frontier_start = end;
        for values in fresh {
            if seen.insert(values.clone(), ()).is_none() {
                all.push(values);
            }
        }
        if all.len() == end {
            break;
        }
    }
    Ok(all)
}

/// `T^L_H = ⋂_{u∈T} Val(u)`; the full space for an empty pool.
pub fn lg_solutions(pool: &[Formula], space: &Arc<Space>) -> Result<PointSet> {
    pool.iter()
        .try_fold(PointSet::full(space), |acc, u| acc.meet(&val(u, space)?))
}

/// Whether `u` lies in `A^L_H = ⋂_{μ∈A} LKer(μ)`, i.e. `A ⊆ Val(u)`.
pub fn lg_up_contains(a: &PointSet, u: &Formula) -> Result<bool> {
    a.is_subset(&val(u, a.space())?)
}

/// `A^{LL}_H`, the smallest definable set containing `A`: its saturation
/// under the coordinatewise action of `Aut(H)`.
pub fn lg_closure(a: &PointSet) -> PointSet {
    a.algebra()
        .automorphisms()
        .iter()
        .fold(PointSet::empty(a.space()), |acc, sigma| {
            acc.join(&a.mapped(sigma)).expect("same space")
        })
}

/// `T^{L0}_H`: the points whose type contains every formula of the pool.
pub fn mt_solutions(pool: &[SpecialFormula], space: &Arc<Space>) -> Result<PointSet> {
    let mut out = PointSet::empty(space);
    for (i, p) in space.points().enumerate() {
        let mut all = true;
        for u in pool {
            if !in_type(u, &p)? {
                all = false;
                break;
            }
        }
        if all {
            out.insert(i);
        }
    }
    Ok(out)
}

/// Whether `u` lies in `A^{L0}_H = ⋂_{μ∈A} Tp^H(μ)`.
pub fn mt_up_contains(a: &PointSet, u: &SpecialFormula) -> Result<bool> {
    for p in a.points() {
        if !in_type(u, &p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `A^{L0L0}_H`. MT-definable and LG-definable sets coincide, so this is
/// [`lg_closure`].
pub fn mt_closure(a: &PointSet) -> PointSet {
    lg_closure(a)
}

/// `A^{LL} = A`.
pub fn is_definable(a: &PointSet) -> bool {
    lg_closure(a) == *a
}

/// Whether `s: W(Y) → W(X)` is a morphism from `(X, A)` to `(Y, B)`: every
/// `μ ∈ A` gives `μ∘s ∈ B`.
pub fn is_category_morphism(s: &Substitution, a: &PointSet, b: &PointSet) -> Result<bool> {
    if s.codomain() != a.vars() || s.domain() != b.vars() {
        return Err(Error::SpaceMismatch(format!(
            "morphism {} -> {} between sets over {} and {}",
            s.domain(),
            s.codomain(),
            a.vars(),
            b.vars()
        )));
    }
    let pulled = b.pullback(s)?;
    a.is_subset(&pulled)
}

/// A finite subset `T0 ⊆ T` with the same solutions: scan in order and keep
/// each formula that strictly shrinks the running intersection.
pub fn noetherian_witness(pool: &[Formula], space: &Arc<Space>) -> Result<Vec<Formula>> {
    let mut running = PointSet::full(space);
    let mut kept = Vec::new();
    for u in pool {
        let next = running.meet(&val(u, space)?)?;
        if next != running {
            kept.push(u.clone());
            running = next;
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::specialize;
    use crate::parser::{parse_formula_in, parse_term_in};
    use crate::term::VariableSet;

    fn space(h: crate::FiniteAlgebra, vars: &[&str]) -> Arc<Space> {
        Space::new(Arc::new(h), VariableSet::new(vars.iter().copied()).unwrap()).unwrap()
    }

    fn set(sp: &Arc<Space>, idx: &[usize]) -> PointSet {
        PointSet::from_indices(sp, idx.iter().copied()).unwrap()
    }

    fn fs(sp: &Arc<Space>, src: &[&str]) -> Vec<Formula> {
        src.iter()
            .map(|s| parse_formula_in(s, sp.algebra().signature()).unwrap())
            .collect()
    }

    fn eqs(sp: &Arc<Space>, src: &[(&str, &str)]) -> EquationSet {
        let sig = sp.algebra().signature();
        EquationSet::new(
            src.iter()
                .map(|(a, b)| (parse_term_in(a, sig).unwrap(), parse_term_in(b, sig).unwrap()))
                .collect(),
        )
    }

    #[test]
    fn ag_solution_examples() {
        let z3 = space(fixtures::z3(), &["x"]);
        assert!(ag_solutions(&EquationSet::default(), &z3).unwrap().is_full());
        assert_eq!(
            ag_solutions(&eqs(&z3, &[("add(x,x)", "e")]), &z3).unwrap(),
            set(&z3, &[0])
        );
        let z2 = space(fixtures::z2(), &["x"]);
        assert_eq!(ag_solutions(&eqs(&z2, &[("x", "e")]), &z2).unwrap(), set(&z2, &[0]));
    }

    #[test]
    fn ag_closure_examples() {
        let z2 = space(fixtures::z2(), &["x"]);
        assert!(ag_closure(&set(&z2, &[1])).unwrap().is_full());
        let z3 = space(fixtures::z3(), &["x"]);
        assert!(ag_closure(&PointSet::full(&z3)).unwrap().is_full());
        assert_eq!(ag_closure(&set(&z3, &[0])).unwrap(), set(&z3, &[0]));
        assert!(ag_closure(&PointSet::empty(&z3)).unwrap().is_empty());
        // the term route agrees on these
        assert!(ag_closure_by_terms(&set(&z2, &[1]), 3).unwrap().is_full());
        assert_eq!(ag_closure_by_terms(&set(&z3, &[0]), 3).unwrap(), set(&z3, &[0]));
    }

    #[test]
    fn ag_closure_budget_falls_back() {
        let h = Arc::new(fixtures::z3());
        let sp = Space::with_budget(h, VariableSet::new(["x", "y"]).unwrap(), 20).unwrap();
        let a = set(&sp, &[1, 3, 4]);
        assert!(ag_closure(&a).unwrap_err().is_resource());
        let approx = ag_closure_or_approximate(&a, 3).unwrap();
        assert!(approx.approximate);
        assert!(a.is_subset(&approx.points).unwrap());
    }

    #[test]
    fn lg_solution_examples() {
        let z3 = space(fixtures::z3(), &["x"]);
        assert!(lg_solutions(&fs(&z3, &["x = x"]), &z3).unwrap().is_full());
        let pool = fs(&z3, &["!(x = e)", "!(add(x,x) = e)"]);
        assert_eq!(lg_solutions(&pool, &z3).unwrap(), set(&z3, &[1, 2]));
        let z2 = space(fixtures::z2(), &["x"]);
        let pool = fs(&z2, &["!(x = e)", "!(add(x,x) = e)"]);
        assert!(lg_solutions(&pool, &z2).unwrap().is_empty());
    }

    #[test]
    fn lg_up_examples() {
        let z3 = space(fixtures::z3(), &["x"]);
        let trivial = &fs(&z3, &["x = x"])[0];
        let pin = &fs(&z3, &["x = e"])[0];
        assert!(lg_up_contains(&set(&z3, &[1, 2]), trivial).unwrap());
        assert!(lg_up_contains(&PointSet::empty(&z3), pin).unwrap());
        assert!(!lg_up_contains(&set(&z3, &[1]), pin).unwrap());
    }

    #[test]
    fn lg_closure_examples() {
        let z2 = space(fixtures::z2(), &["x", "y"]);
        let a = set(&z2, &[1, 2]);
        assert_eq!(lg_closure(&a), a);
        let z3 = space(fixtures::z3(), &["x"]);
        assert_eq!(lg_closure(&set(&z3, &[1])), set(&z3, &[1, 2]));
        assert!(lg_closure(&PointSet::full(&z3)).is_full());
        assert_eq!(mt_closure(&set(&z3, &[1])), set(&z3, &[1, 2]));
        let c = mt_closure(&set(&z3, &[1]));
        assert_eq!(mt_closure(&c), c);
    }

    #[test]
    fn mt_solution_examples() {
        let z3 = space(fixtures::z3(), &["x"]);
        assert!(mt_solutions(&[], &z3).unwrap().is_full());
        let u = specialize(&fs(&z3, &["!(x = e)"])[0], z3.vars()).unwrap();
        assert_eq!(mt_solutions(&[u], &z3).unwrap(), set(&z3, &[1, 2]));
    }

    #[test]
    fn definability_examples() {
        let z3 = space(fixtures::z3(), &["x"]);
        assert!(is_definable(&PointSet::full(&z3)));
        assert!(is_definable(&PointSet::empty(&z3)));
        assert!(!is_definable(&set(&z3, &[1])));
        assert!(is_definable(&set(&z3, &[1, 2])));
    }

    #[test]
    fn morphism_examples() {
        let h = Arc::new(fixtures::z2());
        let x = VariableSet::new(["x"]).unwrap();
        let y = VariableSet::new(["y"]).unwrap();
        let sx = Space::new(h.clone(), x.clone()).unwrap();
        let sy = Space::new(h.clone(), y.clone()).unwrap();
        let id = Substitution::identity(&x);
        assert!(is_category_morphism(&id, &set(&sx, &[1]), &set(&sx, &[0, 1])).unwrap());
        assert!(!is_category_morphism(&id, &set(&sx, &[0, 1]), &set(&sx, &[1])).unwrap());
        let s = Substitution::new(y, x, vec![parse_term_in("add(x,x)", h.signature()).unwrap()]).unwrap();
        let b = val(&parse_formula_in("y = e", h.signature()).unwrap(), &sy).unwrap();
        assert!(is_category_morphism(&s, &PointSet::full(&sx), &b).unwrap());
    }

    #[test]
    fn noetherian_examples() {
        let z3 = space(fixtures::z3(), &["x"]);
        assert!(noetherian_witness(&fs(&z3, &["x = x", "x = x"]), &z3)
            .unwrap()
            .is_empty());
        let pool = fs(&z3, &["!(x = e)", "x = x", "!(x = e)"]);
        assert_eq!(noetherian_witness(&pool, &z3).unwrap(), fs(&z3, &["!(x = e)"]));
    }
}
