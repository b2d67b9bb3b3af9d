//! Types of points, orbit formulas, and the structural checks built on them:
//! isotypy, logical homogeneity, LG-saturation and local isomorphism.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{embed_generated, find_pair_isomorphism, ElementMap, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::formula::{is_x_special, substitute_formula, Formula, FreshNames, SpecialFormula};
use crate::galois::lg_closure;
use crate::pointset::{PointSet, Space};
use crate::semantics::{in_lker, val};
use crate::term::{enumerate_terms, Point, Substitution, Term, VariableSet};

/// Tarskian satisfaction `H ⊨ u[μ]`, by direct recursion over the carrier.
pub fn satisfies(u: &Formula, p: &Point) -> Result<bool> {
    if let Some(v) = u.free_variables().into_iter().find(|v| !p.vars().contains(v)) {
        return Err(Error::UnknownVariable(v));
    }
    let mut env: Vec<(String, usize)> = p
        .vars()
        .iter()
        .zip(p.values())
        .map(|(v, &a)| (v.to_string(), a))
        .collect();
    sat(u, p.algebra(), &mut env)
}

fn sat(u: &Formula, alg: &FiniteAlgebra, env: &mut Vec<(String, usize)>) -> Result<bool> {
    Ok(match u {
        Formula::Eq(a, b) => term_value(a, alg, env)? == term_value(b, alg, env)?,
        Formula::Not(a) => !sat(a, alg, env)?,
        Formula::And(a, b) => sat(a, alg, env)? && sat(b, alg, env)?,
        Formula::Or(a, b) => sat(a, alg, env)? || sat(b, alg, env)?,
        Formula::Exists(x, a) | Formula::Forall(x, a) => {
            let want = matches!(u, Formula::Exists(..));
            for v in 0..alg.size() {
                env.push((x.clone(), v));
                let r = sat(a, alg, env);
                env.pop();
                if r? == want {
                    return Ok(want);
                }
            }
            !want
        }
    })
}

fn term_value(t: &Term, alg: &FiniteAlgebra, env: &[(String, usize)]) -> Result<usize> {
    match t {
        Term::Var(x) => env
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|&(_, v)| v)
            .ok_or_else(|| Error::UnknownVariable(x.clone())),
        Term::App(name, args) => {
            let op = alg
                .signature()
                .op_index(name)
                .ok_or_else(|| Error::UnknownOperation(name.clone()))?;
            let values = args
                .iter()
                .map(|a| term_value(a, alg, env))
                .collect::<Result<Vec<_>>>()?;
            Ok(alg.apply(op, &values))
        }
    }
}

/// `u ∈ Tp^H(μ)` for an X-special `u`, with `X` the variables of `μ`.
pub fn in_type(u: &SpecialFormula, p: &Point) -> Result<bool> {
    if !is_x_special(u.formula(), p.vars()) {
        return Err(Error::NotSpecial {
            vars: p.vars().to_string(),
            msg: format!("`{u}` is not special for the point's variables"),
        });
    }
    satisfies(u.formula(), p)
}

/// The criterion `u ∈ Tp(μ) ⟺ s_*u ∈ LKer(μ)` with `s` the identity on `X`,
/// evaluated through point sets.
pub fn type_criterion_check(u: &SpecialFormula, p: &Point) -> Result<bool> {
    let v = substitute_formula(&Substitution::identity(p.vars()), u.formula());
    in_lker(&v, p)
}

/// `Tp(μ) = Tp(ν)`: for finite algebras, iff some isomorphism maps `μ` to
/// `ν` coordinatewise.
pub fn types_equal(p: &Point, q: &Point) -> Result<bool> {
    if p.vars() != q.vars() {
        return Err(Error::SpaceMismatch(format!(
            "points over {} and {}",
            p.vars(),
            q.vars()
        )));
    }
    Ok(find_pair_isomorphism(p.algebra(), p.values(), q.algebra(), q.values())?.is_some())
}

/// [`types_equal`], returning early when a pool formula separates the
/// points.
pub fn types_equal_with_pool(p: &Point, q: &Point, pool: &[Formula]) -> Result<bool> {
    for u in pool {
        if satisfies(u, p)? != satisfies(u, q)? {
            return Ok(false);
        }
    }
    types_equal(p, q)
}

/// Variable names used for `k`-tuples: `x, y, z`, then `x1..xk`.
pub fn standard_vars(k: usize) -> VariableSet {
    let names: Vec<String> = if k <= 3 {
        ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    };
    VariableSet::new(names).expect("plain names")
}

/// The `Aut(H)`-orbits of the space, ordered by their least index.
pub fn orbit_decomposition(space: &Arc<Space>) -> Vec<PointSet> {
    let mut seen = PointSet::empty(space);
    let mut orbits = Vec::new();
    for i in 0..space.size() {
        if seen.contains(i) {
            continue;
        }
        let mut one = PointSet::empty(space);
        one.insert(i);
        let orbit = lg_closure(&one);
        seen = seen.join(&orbit).expect("same space");
        orbits.push(orbit);
    }
    orbits
}

/// A formula satisfied in any algebra `G` of the signature exactly by the
/// points `ν` with an isomorphism `H → G` sending `μ` to `ν`: it names every
/// element by a bound variable, asserts they are distinct and exhaust the
/// carrier, lists the operation tables and places the point.
pub fn orbit_formula(p: &Point) -> Formula {
    let alg = p.algebra();
    let n = alg.size();
    let mut fresh = FreshNames::avoiding(p.vars().iter());
    let ys: Vec<String> = (0..n).map(|_| fresh.fresh()).collect();
    let z = fresh.fresh();
    let y = |a: usize| Term::var(ys[a].clone());
    let mut parts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            parts.push(Formula::not(Formula::eq(y(i), y(j))));
        }
    }
    let cover = (0..n).map(|a| Formula::eq(Term::var(z.clone()), y(a)));
    parts.push(Formula::forall(
        z.clone(),
        Formula::disjunction(cover).expect("nonempty carrier"),
    ));
    for (op, sym) in alg.signature().ops().iter().enumerate() {
        crate::algebra::for_each_tuple(n, sym.arity, |args| {
            let lhs = Term::app(sym.name.clone(), args.iter().map(|&a| y(a)).collect());
            parts.push(Formula::eq(lhs, y(alg.apply(op, args))));
        });
    }
    for (v, &a) in p.vars().iter().zip(p.values()) {
        parts.push(Formula::eq(Term::var(v), y(a)));
    }
    let body = Formula::conjunction(parts).expect("nonempty");
    ys.into_iter().rev().fold(body, |acc, v| Formula::exists(v, acc))
}

/// Representative terms up to `depth`, one per distinct term function on
/// `X` over every listed algebra, smallest first.
fn representative_terms(vars: &VariableSet, algebras: &[&Arc<FiniteAlgebra>], depth: usize) -> Result<Vec<Term>> {
    let sig = algebras[0].signature();
    let mut terms = enumerate_terms(sig, vars, depth);
    terms.sort_by_key(|t| t.size());
    let spaces = algebras
        .iter()
        .map(|h| Space::new((*h).clone(), vars.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut seen = HashMap::new();
    let mut reps = Vec::new();
    let mut stack = Vec::new();
    for t in terms {
        let mut key = Vec::new();
        for sp in &spaces {
            let code = t.compile(vars, sp.algebra())?;
            sp.for_each_point(|_, values| key.push(code.eval(sp.algebra(), values, &mut stack)));
        }
        if seen.insert(key, ()).is_none() {
            reps.push(t);
        }
    }
    Ok(reps)
}

fn diagram_over(p: &Point, reps: &[Term]) -> Result<Vec<Formula>> {
    let mut classes: Vec<(usize, &Term)> = Vec::new();
    let mut literals = Vec::new();
    for t in reps {
        let v = t.evaluate(p)?;
        match classes.iter().find(|(w, _)| *w == v) {
            Some((_, r)) => literals.push(Formula::eq(t.clone(), (*r).clone())),
            None => classes.push((v, t)),
        }
    }
    for (i, (_, a)) in classes.iter().enumerate() {
        for (_, b) in &classes[i + 1..] {
            literals.push(Formula::not(Formula::eq((*a).clone(), (*b).clone())));
        }
    }
    Ok(literals)
}

/// Equalities and inequalities between term functions of depth at most
/// `depth` that hold at `p`.
pub fn atomic_diagram(p: &Point, depth: usize) -> Result<Vec<Formula>> {
    let reps = representative_terms(p.vars(), &[p.algebra()], depth)?;
    diagram_over(p, &reps)
}

/// A point of one algebra together with a formula it satisfies that no point
/// of the other algebra satisfies.
#[derive(Debug, Clone)]
pub struct TypeWitness {
    pub point: Point,
    pub formula: Formula,
    pub other: String,
}

#[derive(Debug, Clone)]
pub struct IsotypyReport {
    pub isotypic: bool,
    pub max_arity: usize,
    pub isomorphism: Option<(ElementMap, String)>,
    pub witness: Option<TypeWitness>,
}

impl IsotypyReport {
    pub fn record(&self) -> String {
        let mut out = String::new();
        if self.isotypic {
            let _ = writeln!(out, "verdict: isotypic_up_to({})", self.max_arity);
        } else {
            let _ = writeln!(out, "verdict: distinguished");
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "witness_algebra: {}", w.point.algebra().name());
            let _ = writeln!(out, "witness_point: {}", w.point);
            let _ = writeln!(out, "witness_formula: {}", w.formula);
            let _ = writeln!(
                out,
                "certificate: satisfied in {}, unrealized in {}",
                w.point.algebra().name(),
                w.other
            );
        }
        if let Some((_, text)) = &self.isomorphism {
            let _ = writeln!(out, "certificate: isomorphism {text}");
        }
        out
    }
}

/// Whether every type over `|X| ≤ max_arity` realized in one algebra is
/// realized in the other. For finite algebras this holds iff they are
/// isomorphic; otherwise a distinguishing formula is mined from atomic
/// diagrams (at most three literals), falling back to the whole diagram and
/// then to the orbit formula.
pub fn are_isotypic(h1: &Arc<FiniteAlgebra>, h2: &Arc<FiniteAlgebra>, max_arity: usize) -> Result<IsotypyReport> {
    if max_arity == 0 {
        return Err(Error::Malformed("maximum arity must be positive".into()));
    }
    if !h1.signature().compatible(h2.signature()) {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            h1.signature(),
            h2.signature()
        )));
    }
    if let Some(iso) = find_pair_isomorphism(h1, &[], h2, &[])? {
        let text = iso.render(h1, h2);
        return Ok(IsotypyReport {
            isotypic: true,
            max_arity,
            isomorphism: Some((iso, text)),
            witness: None,
        });
    }
    let mut best: Option<TypeWitness> = None;
    for k in 1..=max_arity {
        let vars = standard_vars(k);
        for (a, b) in [(h1, h2), (h2, h1)] {
            let sa = Space::new(a.clone(), vars.clone())?;
            let sb = Space::new(b.clone(), vars.clone())?;
            let reps = representative_terms(&vars, &[a, b], 2)?;
            for p in sa.points() {
                if let Some(f) = mine_literals(&p, &reps, &sb)? {
                    if best.as_ref().map_or(true, |w| f.size() < w.formula.size()) {
                        best = Some(TypeWitness {
                            point: p,
                            formula: f,
                            other: b.name().to_string(),
                        });
                    }
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    let witness = match best {
        Some(w) => w,
        None => fallback_witness(h1, h2)?,
    };
    Ok(IsotypyReport {
        isotypic: false,
        max_arity,
        isomorphism: None,
        witness: Some(witness),
    })
}

/// The smallest conjunction of at most three diagram literals of `p` that
/// no point of `other` satisfies.
fn mine_literals(p: &Point, reps: &[Term], other: &Arc<Space>) -> Result<Option<Formula>> {
    let mut literals = diagram_over(p, reps)?;
    literals.sort_by_key(Formula::size);
    let sets = literals.iter().map(|l| val(l, other)).collect::<Result<Vec<_>>>()?;
    let m = literals.len();
    let mut found: Vec<Vec<usize>> = (0..m).filter(|&i| sets[i].is_empty()).map(|i| vec![i]).collect();
    if found.is_empty() {
        for i in 0..m {
            for j in i + 1..m {
                let ij = sets[i].meet(&sets[j])?;
                if ij.is_empty() {
                    found.push(vec![i, j]);
                    continue;
                }
                for l in j + 1..m {
                    if ij.meet(&sets[l])?.is_empty() {
                        found.push(vec![i, j, l]);
                    }
                }
            }
        }
    }
    Ok(found
        .into_iter()
        .map(|idx| Formula::conjunction(idx.into_iter().map(|i| literals[i].clone())).expect("nonempty"))
        .min_by_key(Formula::size))
}

fn fallback_witness(h1: &Arc<FiniteAlgebra>, h2: &Arc<FiniteAlgebra>) -> Result<TypeWitness> {
    let vars = standard_vars(1);
    let p = Point::new(vars.clone(), h1.clone(), vec![0])?;
    let reps = representative_terms(&vars, &[h1, h2], 2)?;
    let other = Space::new(h2.clone(), vars.clone())?;
    let diagram = Formula::conjunction(diagram_over(&p, &reps)?).expect("nonempty");
    if val(&diagram, &other)?.is_empty() {
        return Ok(TypeWitness {
            point: p,
            formula: diagram,
            other: h2.name().to_string(),
        });
    }
    // no isomorphism exists, so the orbit formula of any point is unrealized
    Ok(TypeWitness {
        formula: orbit_formula(&p),
        point: p,
        other: h2.name().to_string(),
    })
}

/// Per-orbit evidence: a member, the orbit, and a formula defining it.
#[derive(Debug, Clone)]
pub struct OrbitCertificate {
    pub point: Point,
    pub orbit: PointSet,
    pub formula: Formula,
    /// For each member, an automorphism carrying `point` to it.
    pub carriers: Vec<(Point, ElementMap)>,
}

#[derive(Debug, Clone)]
pub struct HomogeneityReport {
    pub homogeneous: bool,
    pub orbits: Vec<OrbitCertificate>,
    /// Points with equal types that are not conjugate, or conversely.
    pub counterexample: Option<(Point, Point)>,
}

impl HomogeneityReport {
    pub fn record(&self) -> String {
        let mut out = String::new();
        let verdict = if self.homogeneous {
            "homogeneous"
        } else {
            "not homogeneous"
        };
        let _ = writeln!(out, "verdict: {verdict}");
        let _ = writeln!(out, "orbits: {}", self.orbits.len());
        for c in &self.orbits {
            for (q, sigma) in &c.carriers {
                let _ = writeln!(
                    out,
                    "certificate: {} -> {} by {}",
                    c.point,
                    q,
                    sigma.render(c.point.algebra(), c.point.algebra())
                );
            }
        }
        if let Some((p, q)) = &self.counterexample {
            let _ = writeln!(out, "witness_point: {p}");
            let _ = writeln!(out, "witness_point: {q}");
        }
        out
    }
}

/// Checks that two points of the space have equal types iff some
/// automorphism carries one to the other. Types are compared through the
/// orbit formulas, which define them; conjugacy through the automorphism
/// group.
pub fn is_logically_homogeneous(space: &Arc<Space>) -> Result<HomogeneityReport> {
    let alg = space.algebra();
    let auts = alg.automorphisms();
    let mut orbits = Vec::new();
    let mut counterexample = None;
    for orbit in orbit_decomposition(space) {
        let first = orbit.indices().next().expect("orbits are nonempty");
        let point = space.decode(first)?;
        let formula = orbit_formula(&point);
        let same_type = val(&formula, space)?;
        if same_type != orbit && counterexample.is_none() {
            let odd = same_type.difference(&orbit)?.join(&orbit.difference(&same_type)?)?;
            let q = odd.indices().next().expect("sets differ");
            counterexample = Some((point.clone(), space.decode(q)?));
        }
        let mut carriers = Vec::new();
        for q in orbit.points() {
            let sigma = auts
                .iter()
                .find(|s| point.mapped(s).values() == q.values())
                .expect("orbit member")
                .clone();
            carriers.push((q, sigma));
        }
        orbits.push(OrbitCertificate {
            point,
            orbit,
            formula,
            carriers,
        });
    }
    Ok(HomogeneityReport {
        homogeneous: counterexample.is_none(),
        orbits,
        counterexample,
    })
}

#[derive(Debug, Clone)]
pub struct SaturationReport {
    pub saturated: bool,
    /// One entry per atom of the algebra of definable sets.
    pub atoms: Vec<OrbitCertificate>,
}

impl SaturationReport {
    pub fn record(&self) -> String {
        let mut out = String::new();
        let verdict = if self.saturated { "saturated" } else { "not saturated" };
        let _ = writeln!(out, "verdict: {verdict}");
        let _ = writeln!(out, "atoms: {}", self.atoms.len());
        for a in &self.atoms {
            let _ = writeln!(out, "witness_point: {}", a.point);
            let _ = writeln!(
                out,
                "certificate: atom of {} points defined by {}",
                a.orbit.len(),
                a.formula
            );
        }
        out
    }
}

/// The atoms of the definable sets are the orbits; each is the closure of
/// any of its points and is defined by that point's orbit formula.
pub fn is_lg_saturated(space: &Arc<Space>) -> Result<SaturationReport> {
    let h = is_logically_homogeneous(space)?;
    let mut saturated = h.homogeneous;
    for a in &h.orbits {
        let one = PointSet::from_points(space, [&a.point])?;
        saturated &= lg_closure(&one) == a.orbit;
    }
    Ok(SaturationReport {
        saturated,
        atoms: h.orbits,
    })
}

/// Embeddings of the subalgebras of `h1` generated by at most
/// `max_generators` elements into `h2`, one seed per distinct subalgebra.
#[derive(Debug, Clone)]
pub struct LocalEmbedding {
    pub source: String,
    pub target: String,
    pub witnesses: Vec<(Vec<usize>, Vec<usize>)>,
    pub failure: Option<Vec<usize>>,
}

pub fn embeds_locally(h1: &FiniteAlgebra, h2: &FiniteAlgebra, max_generators: usize) -> Result<LocalEmbedding> {
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut seeds = Vec::new();
    for k in 0..=max_generators {
        crate::algebra::for_each_tuple(h1.size(), k, |t| {
            if t.windows(2).all(|w| w[0] < w[1]) {
                let sub = h1.generated_subalgebra(&t.iter().copied().collect());
                if seen.insert(sub) {
                    seeds.push(t.to_vec());
                }
            }
        });
    }
    let mut out = LocalEmbedding {
        source: h1.name().to_string(),
        target: h2.name().to_string(),
        witnesses: Vec::new(),
        failure: None,
    };
    for seed in seeds {
        match embed_generated(h1, &seed, h2)? {
            Some(image) => out.witnesses.push((seed, image)),
            None => {
                out.failure = Some(seed);
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct LocalIsoReport {
    pub forward: LocalEmbedding,
    pub backward: LocalEmbedding,
}

impl LocalIsoReport {
    pub fn holds(&self) -> bool {
        self.forward.failure.is_none() && self.backward.failure.is_none()
    }
}

pub fn locally_isomorphic(h1: &FiniteAlgebra, h2: &FiniteAlgebra, max_generators: usize) -> Result<LocalIsoReport> {
    Ok(LocalIsoReport {
        forward: embeds_locally(h1, h2, max_generators)?,
        backward: embeds_locally(h2, h1, max_generators)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::specialize;
    use crate::parser::parse_formula_in;
    use crate::semantics::val_in;

    fn pt(h: &Arc<FiniteAlgebra>, vars: &[&str], values: &[usize]) -> Point {
        Point::new(
            VariableSet::new(vars.iter().copied()).unwrap(),
            h.clone(),
            values.to_vec(),
        )
        .unwrap()
    }

    fn sp(h: &Arc<FiniteAlgebra>, k: usize) -> Arc<Space> {
        Space::new(h.clone(), standard_vars(k)).unwrap()
    }

    #[test]
    fn in_type_examples() {
        let z3 = Arc::new(fixtures::z3());
        let z2 = Arc::new(fixtures::z2());
        let x = VariableSet::new(["x"]).unwrap();
        let f = |s: &str| parse_formula_in(s, z3.signature()).unwrap();
        let special = |s: &str| SpecialFormula::certify(f(s), x.clone()).unwrap();
        assert!(in_type(&special("exists _y1. add(_y1,_y1) = x"), &pt(&z3, &["x"], &[1])).unwrap());
        assert!(!in_type(&special("!(x = e)"), &pt(&z3, &["x"], &[0])).unwrap());
        assert!(in_type(&special("forall _y1. add(_y1,_y1) = e"), &pt(&z2, &["x"], &[0])).unwrap());
        let loose = SpecialFormula::certify(f("exists _y1. add(_y1,_y1) = x"), VariableSet::new(["y"]).unwrap());
        assert!(loose.is_err());
        let other = SpecialFormula::certify(f("x = x"), VariableSet::new(["x", "y"]).unwrap()).unwrap();
        assert!(in_type(&other, &pt(&z3, &["x", "y"], &[0, 1])).unwrap());
        let bad = SpecialFormula::certify(f("y = y"), VariableSet::new(["x", "y"]).unwrap()).unwrap();
        assert!(matches!(
            in_type(&bad, &pt(&z3, &["x"], &[0])),
            Err(Error::NotSpecial { .. })
        ));
    }

    #[test]
    fn criterion_agrees_on_examples() {
        let z3 = Arc::new(fixtures::z3());
        let x = VariableSet::new(["x"]).unwrap();
        for src in [
            "exists y. add(y,y) = x",
            "forall y. !(add(y,x) = y) | x = e",
            "!(x = e)",
        ] {
            let u = specialize(&parse_formula_in(src, z3.signature()).unwrap(), &x).unwrap();
            for a in 0..3 {
                let p = pt(&z3, &["x"], &[a]);
                assert_eq!(in_type(&u, &p).unwrap(), type_criterion_check(&u, &p).unwrap());
            }
        }
    }

    #[test]
    fn types_equal_examples() {
        let z3 = Arc::new(fixtures::z3());
        let z2 = Arc::new(fixtures::z2());
        assert!(types_equal(&pt(&z3, &["x"], &[1]), &pt(&z3, &["x"], &[2])).unwrap());
        assert!(!types_equal(&pt(&z3, &["x"], &[0]), &pt(&z3, &["x"], &[1])).unwrap());
        assert!(!types_equal(&pt(&z2, &["x"], &[0]), &pt(&z2, &["x"], &[1])).unwrap());
        let pool = vec![parse_formula_in("x = e", z3.signature()).unwrap()];
        assert!(types_equal_with_pool(&pt(&z3, &["x"], &[1]), &pt(&z3, &["x"], &[2]), &pool).unwrap());
        assert!(!types_equal_with_pool(&pt(&z3, &["x"], &[0]), &pt(&z3, &["x"], &[2]), &pool).unwrap());
    }

    #[test]
    fn orbit_examples() {
        let z3 = Arc::new(fixtures::z3());
        assert_eq!(orbit_decomposition(&sp(&z3, 1)).len(), 2);
        assert_eq!(orbit_decomposition(&sp(&z3, 2)).len(), 5);
        let z2 = Arc::new(fixtures::z2());
        assert_eq!(orbit_decomposition(&sp(&z2, 2)).len(), 4);
    }

    #[test]
    fn orbit_formula_defines_orbit() {
        let z3 = Arc::new(fixtures::z3());
        let z2 = Arc::new(fixtures::z2());
        let p = pt(&z3, &["x"], &[1]);
        let f = orbit_formula(&p);
        assert_eq!(val_in(&f, &z3, p.vars()).unwrap().len(), 2);
        assert!(val_in(&f, &z2, p.vars()).unwrap().is_empty());
        let l2 = Arc::new(fixtures::l2());
        let q = pt(&l2, &["x"], &[0]);
        assert_eq!(val_in(&orbit_formula(&q), &l2, q.vars()).unwrap().len(), 1);
    }

    #[test]
    fn diagram_holds_at_point() {
        let z3 = Arc::new(fixtures::z3());
        let p = pt(&z3, &["x", "y"], &[1, 2]);
        let d = atomic_diagram(&p, 2).unwrap();
        assert!(!d.is_empty());
        for l in &d {
            assert!(satisfies(l, &p).unwrap(), "{l}");
        }
    }

    #[test]
    fn isotypy_examples() {
        let z2 = Arc::new(fixtures::z2());
        let z3 = Arc::new(fixtures::z3());
        let r = are_isotypic(&z2, &z3, 1).unwrap();
        assert!(!r.isotypic);
        let w = r.witness.unwrap();
        let mine = Space::new(w.point.algebra().clone(), w.point.vars().clone()).unwrap();
        assert!(val(&w.formula, &mine).unwrap().contains(mine.encode(&w.point).unwrap()));
        let other = if w.point.algebra().name() == "Z2" { &z3 } else { &z2 };
        assert!(val_in(&w.formula, other, w.point.vars()).unwrap().is_empty());

        let relabeled = Arc::new(fixtures::z3_relabeled());
        let r = are_isotypic(&z3, &relabeled, 2).unwrap();
        assert!(r.isotypic);
        assert!(r.record().starts_with("verdict: isotypic_up_to(2)"));
        let l2 = Arc::new(fixtures::l2());
        assert!(matches!(are_isotypic(&z2, &l2, 1), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn homogeneity_and_saturation() {
        for h in fixtures::standard() {
            let h = Arc::new(h);
            for k in 1..=2 {
                let r = is_logically_homogeneous(&sp(&h, k)).unwrap();
                assert!(r.homogeneous, "{} {k}", h.name());
                let s = is_lg_saturated(&sp(&h, k)).unwrap();
                assert!(s.saturated);
            }
        }
        let z3 = Arc::new(fixtures::z3());
        let s = is_lg_saturated(&sp(&z3, 1)).unwrap();
        assert_eq!(s.atoms.len(), 2);
        assert!(s.record().starts_with("verdict: saturated"));
    }

    #[test]
    fn local_isomorphism_examples() {
        let z3 = fixtures::z3();
        assert!(locally_isomorphic(&z3, &fixtures::z3_relabeled(), 2).unwrap().holds());
        let z2 = fixtures::z2();
        let r = locally_isomorphic(&z2, &z3, 1).unwrap();
        assert!(!r.holds());
        assert!(r.forward.failure.is_some());
        let sq = fixtures::z2_squared();
        assert!(locally_isomorphic(&z2, &sq, 1).unwrap().holds());
        let r = locally_isomorphic(&z2, &sq, 2).unwrap();
        assert!(r.forward.failure.is_none());
        assert!(r.backward.failure.is_some());
        let z3sq = z3.direct_power(2).unwrap();
        let r = locally_isomorphic(&z3, &z3sq, 1).unwrap();
        assert!(r.forward.failure.is_none());
        assert_eq!(r.forward.witnesses.len(), 2);
    }
}
