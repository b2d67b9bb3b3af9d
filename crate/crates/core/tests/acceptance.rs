//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Every check compares the library against an oracle written here from the
//! definitions (nested loops over carriers, brute-force permutations, term
//! functions built level by level), never against itself.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use halmos_core::analysis::{
    are_isotypic, in_type, is_lg_saturated, is_logically_homogeneous, orbit_decomposition, type_criterion_check,
};
use halmos_core::formula::{specialize, substitute_formula};
use halmos_core::galois::{
    ag_closure, ag_solutions, ag_up_contains, lg_closure, lg_solutions, lg_up_contains, mt_closure, mt_solutions,
    mt_up_contains, EquationSet,
};
use halmos_core::pool::standard_pool;
use halmos_core::semantics::{in_lker, val};
use halmos_core::term::{enumerate_terms, kernel_contains};
use halmos_core::{
    fixtures, FiniteAlgebra, Formula, Point, PointSet, Space, SpecialFormula, Substitution, Term, VariableSet,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Option<u64>, fn() -> Outcome); 10] = [
        (1, "quantifier axioms", Some(10), quantifier_axioms),
        (2, "substitution diagram", Some(60), substitution_diagram),
        (3, "kernel identity", None, kernel_identity),
        (4, "naive evaluator agreement", None, naive_agreement),
        (5, "type criterion", None, type_criterion),
        (6, "specialization correctness", None, specialization),
        (7, "MT solutions equal LG solutions", None, mt_equals_lg),
        (8, "closure cross-validation", None, closure_cross_validation),
        (9, "Galois laws", None, galois_laws),
        (10, "analysis verdicts", None, analysis_verdicts),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (n, name, limit, run) in criteria {
        let t = Instant::now();
        let mut outcome = run();
        let took = t.elapsed();
        if let (Ok(msg), Some(secs)) = (&outcome, limit) {
            if took > Duration::from_secs(secs) {
                outcome = Err(format!("{msg}; took {took:.1?}, limit {secs} s"));
            }
        }
        match outcome {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg} ({took:.2?})"),
            Err(msg) => {
                failures += 1;
                println!("criterion {n:>2} FAIL  {name}: {msg} ({took:.2?})");
            }
        }
    }
    let total = start.elapsed();
    if total > Duration::from_secs(300) {
        failures += 1;
        println!("suite runtime {total:.1?} exceeds 300 s");
    } else {
        println!("suite runtime {total:.1?}");
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}

// ---- oracles ----

fn naive_term(t: &Term, h: &FiniteAlgebra, env: &[(String, usize)]) -> usize {
    match t {
        Term::Var(x) => env.iter().rev().find(|(n, _)| n == x).expect("bound").1,
        Term::App(f, args) => {
            let op = h.signature().op_index(f).expect("operation");
            let n = h.size();
            let index = args.iter().fold(0, |acc, a| acc * n + naive_term(a, h, env));
            h.table(op)[index]
        }
    }
}

fn naive_sat(u: &Formula, h: &FiniteAlgebra, env: &mut Vec<(String, usize)>) -> bool {
    match u {
        Formula::Eq(a, b) => naive_term(a, h, env) == naive_term(b, h, env),
        Formula::Not(a) => !naive_sat(a, h, env),
        Formula::And(a, b) => naive_sat(a, h, env) & naive_sat(b, h, env),
        Formula::Or(a, b) => naive_sat(a, h, env) | naive_sat(b, h, env),
        Formula::Exists(x, a) => (0..h.size()).any(|v| {
            env.push((x.clone(), v));
            let r = naive_sat(a, h, env);
            env.pop();
            r
        }),
        Formula::Forall(x, a) => (0..h.size()).all(|v| {
            env.push((x.clone(), v));
            let r = naive_sat(a, h, env);
            env.pop();
            r
        }),
    }
}

fn env_of(vars: &VariableSet, values: &[usize]) -> Vec<(String, usize)> {
    vars.iter().map(str::to_string).zip(values.iter().copied()).collect()
}

/// All permutations of the carrier commuting with every table.
fn brute_automorphisms(h: &FiniteAlgebra) -> Vec<Vec<usize>> {
    fn perms(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for a in 0..n {
            if !used[a] {
                used[a] = true;
                cur.push(a);
                perms(n, cur, used, out);
                cur.pop();
                used[a] = false;
            }
        }
    }
    let n = h.size();
    let mut all = Vec::new();
    perms(n, &mut Vec::new(), &mut vec![false; n], &mut all);
    all.into_iter()
        .filter(|s| {
            h.signature().ops().iter().enumerate().all(|(op, sym)| {
                tuples(n, sym.arity).iter().all(|args| {
                    let mapped: Vec<usize> = args.iter().map(|&a| s[a]).collect();
                    s[apply(h, op, args)] == apply(h, op, &mapped)
                })
            })
        })
        .collect()
}

fn apply(h: &FiniteAlgebra, op: usize, args: &[usize]) -> usize {
    let n = h.size();
    h.table(op)[args.iter().fold(0, |acc, &a| acc * n + a)]
}

fn tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// Value vectors over the space of all term functions of depth at most
/// `depth`, built from variables and constants by applying every operation
/// to every tuple of functions from the previous stage.
fn term_functions(space: &Space, depth: usize) -> Vec<Vec<usize>> {
    let h = space.algebra();
    let points: Vec<Vec<usize>> = (0..space.size())
        .map(|i| {
            let mut v = Vec::new();
            space.decode_values(i, &mut v);
            v
        })
        .collect();
    let mut funcs: BTreeSet<Vec<usize>> = BTreeSet::new();
    for k in 0..space.vars().len() {
        funcs.insert(points.iter().map(|p| p[k]).collect());
    }
    for (op, sym) in h.signature().ops().iter().enumerate() {
        if sym.arity == 0 {
            funcs.insert(vec![h.table(op)[0]; points.len()]);
        }
    }
    for _ in 0..depth {
        let current: Vec<Vec<usize>> = funcs.iter().cloned().collect();
        for (op, sym) in h.signature().ops().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            for idx in tuples(current.len(), sym.arity) {
                let f = (0..points.len())
                    .map(|p| {
                        let args: Vec<usize> = idx.iter().map(|&i| current[i][p]).collect();
                        apply(h, op, &args)
                    })
                    .collect();
                funcs.insert(f);
            }
        }
    }
    funcs.into_iter().collect()
}

// ---- shared setup ----

fn algebras() -> Vec<Arc<FiniteAlgebra>> {
    fixtures::standard().into_iter().map(Arc::new).collect()
}

fn prefix(k: usize) -> VariableSet {
    VariableSet::new(["x", "y", "z"][..k].iter().copied()).unwrap()
}

fn pool(h: &FiniteAlgebra) -> &'static [Formula] {
    static POOLS: OnceLock<Vec<(halmos_core::Signature, Vec<Formula>)>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| {
        let mut v: Vec<(halmos_core::Signature, Vec<Formula>)> = Vec::new();
        for h in fixtures::standard() {
            if !v.iter().any(|(s, _)| s.compatible(h.signature())) {
                v.push((h.signature().clone(), standard_pool(h.signature()).unwrap()));
            }
        }
        v
    });
    &pools.iter().find(|(s, _)| s.compatible(h.signature())).unwrap().1
}

fn pool_over(h: &FiniteAlgebra, vars: &VariableSet) -> Vec<Formula> {
    pool(h)
        .iter()
        .filter(|u| u.free_variables().iter().all(|v| vars.contains(v)))
        .cloned()
        .collect()
}

fn space(h: &Arc<FiniteAlgebra>, vars: &VariableSet) -> Arc<Space> {
    Space::new(h.clone(), vars.clone()).unwrap()
}

fn subset(space: &Arc<Space>, mask: u64) -> PointSet {
    PointSet::from_indices(space, (0..space.size()).filter(|i| mask >> i & 1 == 1)).unwrap()
}

fn random_set(space: &Arc<Space>, rng: &mut StdRng) -> PointSet {
    let density: f64 = rng.gen();
    PointSet::from_indices(space, (0..space.size()).filter(|_| rng.gen_bool(density))).unwrap()
}

// ---- criteria ----

fn quantifier_axioms() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut checked = 0u64;
    for h in algebras() {
        for k in 1..=3 {
            let sp = space(&h, &prefix(k));
            let size = sp.size();
            let pairs: Vec<(PointSet, PointSet)> = if size <= 8 {
                let all: Vec<PointSet> = (0..1u64 << size).map(|m| subset(&sp, m)).collect();
                all.iter()
                    .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
                    .collect()
            } else {
                (0..10_000)
                    .map(|_| (random_set(&sp, &mut rng), random_set(&sp, &mut rng)))
                    .collect()
            };
            for (a, b) in &pairs {
                axioms(&sp, a, b).map_err(|e| format!("{} over {}: {e}", h.name(), sp.vars()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pairs of point sets"))
}

fn naive_exists(a: &PointSet, k: usize) -> PointSet {
    let sp = a.space();
    let n = sp.algebra().size();
    let mut values = Vec::new();
    PointSet::from_indices(
        sp,
        (0..sp.size()).filter(|&i| {
            sp.decode_values(i, &mut values);
            (0..n).any(|v| {
                values[k] = v;
                a.contains(sp.encode_values(&values))
            })
        }),
    )
    .unwrap()
}

fn axioms(sp: &Arc<Space>, a: &PointSet, b: &PointSet) -> Result<(), String> {
    let empty = PointSet::empty(sp);
    let full = PointSet::full(sp);
    let ex = |s: &PointSet, x: &str| s.exists(x).unwrap();
    let fa = |s: &PointSet, x: &str| s.forall(x).unwrap();
    for (k, x) in sp.vars().iter().enumerate() {
        ensure!(ex(a, x) == naive_exists(a, k), "exists {x} differs from the cylinder");
        ensure!(ex(&empty, x) == empty, "exists of empty");
        ensure!(fa(&full, x) == full, "forall of full");
        ensure!(a.is_subset(&ex(a, x)).unwrap(), "A not within exists {x} A");
        ensure!(fa(a, x).is_subset(a).unwrap(), "forall {x} A not within A");
        ensure!(
            ex(&a.meet(&ex(b, x)).unwrap(), x) == ex(a, x).meet(&ex(b, x)).unwrap(),
            "exists {x} (A and exists B)"
        );
        ensure!(
            fa(&a.join(&fa(b, x)).unwrap(), x) == fa(a, x).join(&fa(b, x)).unwrap(),
            "forall {x} (A or forall B)"
        );
        ensure!(
            ex(&a.join(b).unwrap(), x) == ex(a, x).join(&ex(b, x)).unwrap(),
            "exists over or"
        );
        ensure!(
            fa(&a.meet(b).unwrap(), x) == fa(a, x).meet(&fa(b, x)).unwrap(),
            "forall over and"
        );
        ensure!(
            ex(a, x).complement() == fa(&a.complement(), x),
            "not exists vs forall not"
        );
        for y in sp.vars().iter() {
            ensure!(ex(&ex(a, y), x) == ex(&ex(a, x), y), "exists {x} {y} commute");
            ensure!(fa(&fa(a, y), x) == fa(&fa(a, x), y), "forall {x} {y} commute");
        }
    }
    Ok(())
}

fn substitution_diagram() -> Outcome {
    let mut checked = 0u64;
    let domains = [prefix(1), prefix(2)];
    let codomains = [
        VariableSet::new(["x"]).unwrap(),
        VariableSet::new(["z"]).unwrap(),
        VariableSet::new(["x", "y"]).unwrap(),
        VariableSet::new(["y", "z"]).unwrap(),
    ];
    for h in [Arc::new(fixtures::z2()), Arc::new(fixtures::z3())] {
        for x in &domains {
            let sx = space(&h, x);
            let formulas = pool_over(&h, x);
            let values: Vec<PointSet> = formulas.iter().map(|u| val(u, &sx).unwrap()).collect();
            for y in &codomains {
                let sy = space(&h, y);
                let all_terms = enumerate_terms(h.signature(), y, 2);
                // one-variable domains take every term; two-variable domains
                // one term per term function of the algebra
                let images = if x.len() == 1 {
                    all_terms
                } else {
                    let mut seen = HashMap::new();
                    all_terms
                        .into_iter()
                        .filter(|t| {
                            let f: Vec<usize> = (0..sy.size())
                                .map(|i| {
                                    let mut v = Vec::new();
                                    sy.decode_values(i, &mut v);
                                    naive_term(t, &h, &env_of(y, &v))
                                })
                                .collect();
                            seen.insert(f, ()).is_none()
                        })
                        .collect()
                };
                for choice in tuples(images.len(), x.len()) {
                    let s = Substitution::new(
                        x.clone(),
                        y.clone(),
                        choice.iter().map(|&i| images[i].clone()).collect(),
                    )
                    .unwrap();
                    for (u, vu) in formulas.iter().zip(&values) {
                        let lhs = val(&substitute_formula(&s, u), &sy).map_err(|e| e.to_string())?;
                        let rhs = vu.pullback(&s).map_err(|e| e.to_string())?;
                        ensure!(lhs == rhs, "{}: s = {s}, u = {u}", h.name());
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} (substitution, formula) pairs"))
}

fn kernel_identity() -> Outcome {
    let mut checked = 0u64;
    for h in algebras() {
        for k in 1..=2 {
            let vars = prefix(k);
            let sp = space(&h, &vars);
            let terms = enumerate_terms(h.signature(), &vars, 2);
            let points: Vec<Point> = sp.points().collect();
            for (i, w) in terms.iter().enumerate() {
                for w2 in &terms[i..] {
                    let eq = Formula::eq(w.clone(), w2.clone());
                    for p in &points {
                        let kernel = kernel_contains(p, w, w2).unwrap();
                        let env = env_of(&vars, p.values());
                        ensure!(
                            kernel == (naive_term(w, &h, &env) == naive_term(w2, &h, &env)),
                            "kernel_contains wrong at {p} for {eq}"
                        );
                        ensure!(kernel == in_lker(&eq, p).unwrap(), "{}: {eq} at {p}", h.name());
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} (term pair, point) checks"))
}

fn naive_agreement() -> Outcome {
    let mut checked = 0u64;
    for h in algebras() {
        for k in 0..=2 {
            let vars = prefix(k);
            let sp = space(&h, &vars);
            for u in pool_over(&h, &vars) {
                let set = val(&u, &sp).unwrap();
                let mut values = Vec::new();
                for i in 0..sp.size() {
                    sp.decode_values(i, &mut values);
                    let naive = naive_sat(&u, &h, &mut env_of(&vars, &values));
                    ensure!(set.contains(i) == naive, "{} over {vars}: {u} at index {i}", h.name());
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (formula, point) checks"))
}

fn special_grid() -> Vec<(Arc<FiniteAlgebra>, VariableSet, Formula, SpecialFormula)> {
    let mut out = Vec::new();
    for h in algebras() {
        for k in 0..=2 {
            let vars = prefix(k);
            for u in pool_over(&h, &vars) {
                let su = specialize(&u, &vars).unwrap();
                out.push((h.clone(), vars.clone(), u, su));
            }
        }
    }
    out
}

fn type_criterion() -> Outcome {
    let mut checked = 0u64;
    for (h, vars, _, su) in special_grid() {
        for p in space(&h, &vars).points() {
            let a = in_type(&su, &p).unwrap();
            ensure!(a == type_criterion_check(&su, &p).unwrap(), "{}: {su} at {p}", h.name());
            ensure!(
                a == naive_sat(su.formula(), &h, &mut env_of(&vars, p.values())),
                "in_type oracle"
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} (special formula, point) checks"))
}

fn specialization() -> Outcome {
    let mut checked = 0u64;
    for (h, vars, u, su) in special_grid() {
        for p in space(&h, &vars).points() {
            ensure!(
                in_lker(&u, &p).unwrap() == in_type(&su, &p).unwrap(),
                "{}: {u} vs {su} at {p}",
                h.name()
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} (formula, point) checks"))
}

fn mt_equals_lg() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut checked = 0u64;
    for h in algebras() {
        let vars = prefix(2);
        let sp = space(&h, &vars);
        let formulas = pool_over(&h, &vars);
        let special: Vec<SpecialFormula> = formulas.iter().map(|u| specialize(u, &vars).unwrap()).collect();
        for _ in 0..1000 {
            let size = rng.gen_range(0..=4);
            let picks: Vec<usize> = (0..size).map(|_| rng.gen_range(0..formulas.len())).collect();
            let lg: Vec<Formula> = picks.iter().map(|&i| formulas[i].clone()).collect();
            let mt: Vec<SpecialFormula> = picks.iter().map(|&i| special[i].clone()).collect();
            let a = mt_solutions(&mt, &sp).unwrap();
            ensure!(a == lg_solutions(&lg, &sp).unwrap(), "{}: sub-pool {picks:?}", h.name());
            checked += 1;
        }
    }
    Ok(format!("{checked} random sub-pools"))
}

/// Conjunction of equalities and inequalities between depth-2 terms pinning
/// the values of `p`.
fn diagram(h: &FiniteAlgebra, vars: &VariableSet, values: &[usize]) -> Formula {
    let env = env_of(vars, values);
    let mut reps: Vec<(usize, Term)> = Vec::new();
    let mut parts = Vec::new();
    for t in enumerate_terms(h.signature(), vars, 2) {
        let v = naive_term(&t, h, &env);
        match reps.iter().find(|(w, _)| *w == v) {
            Some((_, r)) => parts.push(Formula::eq(t, r.clone())),
            None => reps.push((v, t)),
        }
    }
    for (i, (_, a)) in reps.iter().enumerate() {
        for (_, b) in &reps[i + 1..] {
            parts.push(Formula::not(Formula::eq(a.clone(), b.clone())));
        }
    }
    parts.into_iter().reduce(Formula::and).expect("fixtures have constants")
}

fn closure_cross_validation() -> Outcome {
    let mut lg_checked = 0u64;
    let mut ag_checked = 0u64;
    let mut pool_only_gaps = 0u64;
    for h in algebras() {
        for k in 0..=3 {
            let vars = prefix(k);
            let sp = space(&h, &vars);
            if sp.size() > 9 {
                continue;
            }
            let pool_sets: Vec<PointSet> = pool_over(&h, &vars).iter().map(|u| val(u, &sp).unwrap()).collect();
            let mut sets = pool_sets.clone();
            let mut values = Vec::new();
            for i in 0..sp.size() {
                sp.decode_values(i, &mut values);
                let d = diagram(&h, &vars, &values);
                sets.push(val(&d, &sp).unwrap());
                sets.push(val(&Formula::not(d), &sp).unwrap());
            }
            let funcs = term_functions(&sp, 3);
            for mask in 0..1u64 << sp.size() {
                let a = subset(&sp, mask);
                let closure = |family: &[PointSet]| {
                    family
                        .iter()
                        .filter(|v| a.is_subset(v).unwrap())
                        .fold(PointSet::full(&sp), |acc, v| acc.meet(v).unwrap())
                };
                let orbit = lg_closure(&a);
                ensure!(closure(&sets) == orbit, "{} over {vars}: lg closure of {a}", h.name());
                if closure(&pool_sets) != orbit {
                    pool_only_gaps += 1;
                }
                lg_checked += 1;

                let members: Vec<usize> = a.indices().collect();
                let expected = if members.is_empty() {
                    PointSet::empty(&sp)
                } else {
                    let mut by_restriction: HashMap<Vec<usize>, Vec<&Vec<usize>>> = HashMap::new();
                    for f in &funcs {
                        by_restriction
                            .entry(members.iter().map(|&i| f[i]).collect())
                            .or_default()
                            .push(f);
                    }
                    PointSet::from_indices(
                        &sp,
                        (0..sp.size())
                            .filter(|&nu| by_restriction.values().all(|fs| fs.iter().all(|f| f[nu] == fs[0][nu]))),
                    )
                    .unwrap()
                };
                let got = ag_closure(&a).map_err(|e| e.to_string())?;
                ensure!(
                    got == expected,
                    "{} over {vars}: ag closure of {a}: {got} vs {expected}",
                    h.name()
                );
                ag_checked += 1;
            }
        }
    }
    Ok(format!(
        "{lg_checked} LG and {ag_checked} AG closures; pool without diagrams differs on {pool_only_gaps}"
    ))
}

fn equation_pool(h: &FiniteAlgebra, vars: &VariableSet) -> Vec<(Term, Term)> {
    let terms = enumerate_terms(h.signature(), vars, 1);
    let mut out = Vec::new();
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

fn galois_laws() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0u64;
    for h in algebras() {
        let vars = prefix(2);
        let sp = space(&h, &vars);
        let eqs = equation_pool(&h, &vars);
        let formulas = pool_over(&h, &vars);
        let special: Vec<SpecialFormula> = formulas.iter().map(|u| specialize(u, &vars).unwrap()).collect();
        for _ in 0..1000 {
            let b = random_set(&sp, &mut rng);
            let a = PointSet::from_indices(&sp, b.indices().filter(|_| rng.gen_bool(0.5))).unwrap();
            let mut t2: Vec<usize> = (0..rng.gen_range(0..=4))
                .map(|_| rng.gen_range(0..formulas.len()))
                .collect();
            t2.sort_unstable();
            t2.dedup();
            let mut t1 = t2.clone();
            t1.shuffle(&mut rng);
            t1.truncate(t2.len() / 2);
            let e2: Vec<usize> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..eqs.len())).collect();
            let e1: Vec<usize> = e2.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();

            // algebraic
            let ac = ag_closure(&a).unwrap();
            ensure!(a.is_subset(&ac).unwrap(), "AG extensivity");
            ensure!(ag_closure(&ac).unwrap() == ac, "AG idempotence");
            ensure!(ac.is_subset(&ag_closure(&b).unwrap()).unwrap(), "AG closure monotone");
            ensure!(lg_closure(&a).is_subset(&ac).unwrap(), "AG closure below LG closure");
            let sys = |idx: &[usize]| EquationSet::new(idx.iter().map(|&i| eqs[i].clone()).collect());
            let s1 = ag_solutions(&sys(&e1), &sp).unwrap();
            let s2 = ag_solutions(&sys(&e2), &sp).unwrap();
            ensure!(s2.is_subset(&s1).unwrap(), "AG antitone on equations");
            for (w, w2) in &eqs {
                if ag_up_contains(&b, w, w2).unwrap() {
                    ensure!(ag_up_contains(&a, w, w2).unwrap(), "AG antitone on points");
                    ensure!(ag_up_contains(&ac, w, w2).unwrap(), "AG closure keeps equations");
                }
            }
            for &i in &e2 {
                ensure!(ag_up_contains(&s2, &eqs[i].0, &eqs[i].1).unwrap(), "AG T within T''");
            }
            if !s2.is_empty() {
                ensure!(ag_closure(&s2).unwrap() == s2, "AG solution sets are closed");
            }

            // logical
            let lc = lg_closure(&a);
            ensure!(a.is_subset(&lc).unwrap(), "LG extensivity");
            ensure!(lg_closure(&lc) == lc, "LG idempotence");
            let pick = |idx: &[usize]| idx.iter().map(|&i| formulas[i].clone()).collect::<Vec<_>>();
            let l1 = lg_solutions(&pick(&t1), &sp).unwrap();
            let l2 = lg_solutions(&pick(&t2), &sp).unwrap();
            ensure!(l2.is_subset(&l1).unwrap(), "LG antitone on formulas");
            ensure!(lg_closure(&l2) == l2, "LG solution sets are closed");
            for &i in &t2 {
                ensure!(lg_up_contains(&l2, &formulas[i]).unwrap(), "LG T within T^LL");
            }
            for u in formulas.iter().take(40) {
                if lg_up_contains(&b, u).unwrap() {
                    ensure!(lg_up_contains(&a, u).unwrap(), "LG antitone on points");
                }
                if lg_up_contains(&a, u).unwrap() {
                    ensure!(lg_up_contains(&lc, u).unwrap(), "LG closure keeps formulas");
                }
            }

            // model-theoretic
            let mc = mt_closure(&a);
            ensure!(a.is_subset(&mc).unwrap() && mt_closure(&mc) == mc, "MT closure laws");
            let spick = |idx: &[usize]| idx.iter().map(|&i| special[i].clone()).collect::<Vec<_>>();
            let m1 = mt_solutions(&spick(&t1), &sp).unwrap();
            let m2 = mt_solutions(&spick(&t2), &sp).unwrap();
            ensure!(m2.is_subset(&m1).unwrap(), "MT antitone on formulas");
            ensure!(mt_closure(&m2) == m2, "MT solution sets are closed");
            for &i in &t2 {
                ensure!(mt_up_contains(&m2, &special[i]).unwrap(), "MT T within T^L0L0");
            }
            for su in special.iter().take(20) {
                if mt_up_contains(&b, su).unwrap() {
                    ensure!(mt_up_contains(&a, su).unwrap(), "MT antitone on points");
                }
                if mt_up_contains(&a, su).unwrap() {
                    ensure!(mt_up_contains(&mc, su).unwrap(), "MT closure keeps formulas");
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} random instances"))
}

fn brute_orbits(h: &FiniteAlgebra, vars: &VariableSet) -> Vec<BTreeSet<Vec<usize>>> {
    let auts = brute_automorphisms(h);
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for p in tuples(h.size(), vars.len()) {
        if seen.contains(&p) {
            continue;
        }
        let orbit: BTreeSet<Vec<usize>> = auts.iter().map(|s| p.iter().map(|&a| s[a]).collect()).collect();
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    orbits
}

fn analysis_verdicts() -> Outcome {
    let z2 = Arc::new(fixtures::z2());
    let z3 = Arc::new(fixtures::z3());
    let r = are_isotypic(&z2, &z3, 3).map_err(|e| e.to_string())?;
    ensure!(!r.isotypic, "Z2 and Z3 reported isotypic");
    let w = r.witness.as_ref().ok_or("no witness")?;
    let (home, other) = if w.point.algebra().name() == "Z2" {
        (&z2, &z3)
    } else {
        (&z3, &z2)
    };
    let vars = w.point.vars().clone();
    let here = val(&w.formula, &space(home, &vars)).unwrap();
    ensure!(
        here.contains_point(&w.point).unwrap(),
        "witness formula fails at its point"
    );
    ensure!(
        val(&w.formula, &space(other, &vars)).unwrap().is_empty(),
        "witness realized in {}",
        other.name()
    );
    ensure!(
        naive_sat(&w.formula, home, &mut env_of(&vars, w.point.values())),
        "witness rejected by the naive evaluator"
    );
    let relabeled = Arc::new(fixtures::z3_relabeled());
    ensure!(
        are_isotypic(&z3, &relabeled, 3).unwrap().isotypic,
        "Z3 vs relabeled Z3 not isotypic"
    );

    let mut orbit_counts = Vec::new();
    for h in algebras() {
        for k in 0..=2 {
            let vars = prefix(k);
            let sp = space(&h, &vars);
            let hom = is_logically_homogeneous(&sp).map_err(|e| e.to_string())?;
            ensure!(hom.homogeneous, "{} over {vars} not homogeneous", h.name());
            let sat = is_lg_saturated(&sp).map_err(|e| e.to_string())?;
            ensure!(sat.saturated, "{} over {vars} not saturated", h.name());
            let expected = brute_orbits(&h, &vars);
            ensure!(
                sat.atoms.len() == expected.len(),
                "{} over {vars}: atom count",
                h.name()
            );
            let mut union = PointSet::empty(&sp);
            for atom in &sat.atoms {
                ensure!(atom.orbit.contains_point(&atom.point).unwrap(), "atom misses its point");
                ensure!(val(&atom.formula, &sp).unwrap() == atom.orbit, "atom formula");
                ensure!(union.meet(&atom.orbit).unwrap().is_empty(), "atoms overlap");
                union = union.join(&atom.orbit).unwrap();
                let members: BTreeSet<Vec<usize>> = atom.orbit.points().map(|p| p.values().to_vec()).collect();
                ensure!(expected.contains(&members), "atom is not an orbit");
                for (q, sigma) in &atom.carriers {
                    ensure!(atom.point.mapped(sigma).values() == q.values(), "bad carrier");
                }
            }
            ensure!(union.is_full(), "atoms do not cover the space");
            ensure!(orbit_decomposition(&sp).len() == expected.len(), "orbit count");
            orbit_counts.push(format!("{}^{k}:{}", h.name(), expected.len()));
        }
    }
    let z3_pairs = brute_orbits(&z3, &prefix(2)).len();
    ensure!(z3_pairs == 5, "Z3 over two variables has {z3_pairs} orbits");
    ensure!(
        orbit_decomposition(&space(&z3, &prefix(2))).len() == 5,
        "library orbit count for Z3"
    );
    Ok(format!(
        "witness {} at {} in {}; orbits {}",
        w.formula,
        w.point,
        home.name(),
        orbit_counts.join(" ")
    ))
}
