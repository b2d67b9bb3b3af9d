//! Finite formula pools: hand-written pool files and a deterministic
//! generator of small, semantically distinct formulas.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Position, Result};
use crate::fixtures;
use crate::formula::Formula;
use crate::parser::parse_formula_in;
use crate::pointset::{PointSet, Space};
use crate::semantics::{equality_set, val};
use crate::term::{enumerate_terms, Term, VariableSet};

/// Parses one formula per line. Blank lines and `#` comments are skipped;
/// syntax errors report the line within the file.
pub fn parse_pool(text: &str, signature: &Signature) -> Result<Vec<Formula>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let f = parse_formula_in(line, signature).map_err(|e| match e {
            Error::Syntax { pos, msg } => Error::Syntax {
                pos: Position {
                    line: i + 1,
                    column: pos.column,
                },
                msg,
            },
            other => Error::Syntax {
                pos: Position { line: i + 1, column: 1 },
                msg: other.to_string(),
            },
        })?;
        out.push(f);
    }
    Ok(out)
}

pub fn render_pool(pool: &[Formula]) -> String {
    pool.iter().map(|f| format!("{f}\n")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolParams {
    /// Variables allowed free in the final pool.
    pub free: Vec<String>,
    /// Extra variables available to quantifiers.
    pub bound: Vec<String>,
    pub term_depth: usize,
    pub formula_depth: usize,
    pub max_atoms: usize,
    pub max_per_level: usize,
}

impl Default for PoolParams {
    fn default() -> Self {
        PoolParams {
            free: vec!["x".into(), "y".into()],
            bound: vec!["z".into()],
            term_depth: 2,
            formula_depth: 3,
            max_atoms: 40,
            max_per_level: 150,
        }
    }
}

/// Standard fixtures whose signature matches, plus the squares of those
/// with at most three elements.
pub fn reference_algebras(signature: &Signature) -> Vec<Arc<FiniteAlgebra>> {
    let base: Vec<FiniteAlgebra> = fixtures::standard()
        .into_iter()
        .filter(|h| h.signature().compatible(signature))
        .collect();
    let mut out: Vec<FiniteAlgebra> = base.clone();
    for h in base.iter().filter(|h| h.size() <= 3) {
        let sq = h.direct_power(2).expect("small square");
        if !out.iter().any(|g| g.name() == sq.name()) {
            out.push(sq);
        }
    }
    out.into_iter().map(Arc::new).collect()
}

struct Entry {
    formula: Formula,
    sets: Vec<PointSet>,
}

impl Entry {
    fn key(&self) -> Vec<u64> {
        self.sets.iter().flat_map(|s| s.words().iter().copied()).collect()
    }
}

/// Builds a pool level by level. Atoms are equalities between term
/// representatives (one per term function over the references); each level
/// applies negation, both quantifiers over every variable, conjunction and
/// disjunction to the level below, round robin, keeping only formulas whose
/// value sets over the references are new. The result keeps the formulas
/// whose free variables lie in `params.free`.
pub fn generate_pool(
    signature: &Signature,
    references: &[Arc<FiniteAlgebra>],
    params: &PoolParams,
) -> Result<Vec<Formula>> {
    if references.is_empty() {
        return Err(Error::Malformed("pool generation needs a reference algebra".into()));
    }
    let all_vars = VariableSet::new(params.free.iter().chain(&params.bound).cloned())?;
    let spaces = references
        .iter()
        .map(|h| Space::new(h.clone(), all_vars.clone()))
        .collect::<Result<Vec<_>>>()?;

    let mut terms = enumerate_terms(signature, &all_vars, params.term_depth);
    terms.sort_by_key(Term::size);
    let mut seen_terms = HashSet::new();
    let mut reps = Vec::new();
    for t in terms {
        let key = spaces
            .iter()
            .map(|sp| {
                let mut values = Vec::with_capacity(sp.size());
                let p = t.compile(sp.vars(), sp.algebra())?;
                let mut stack = Vec::new();
                sp.for_each_point(|_, v| values.push(p.eval(sp.algebra(), v, &mut stack)));
                Ok(values)
            })
            .collect::<Result<Vec<_>>>()?;
        if seen_terms.insert(key) {
            reps.push(t);
        }
    }

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut atoms = Vec::new();
    let mut pairs: Vec<(Term, Term)> = vec![(Term::var(all_vars.get(0)), Term::var(all_vars.get(0)))];
    for (i, a) in reps.iter().enumerate() {
        for b in &reps[i + 1..] {
            pairs.push((a.clone(), b.clone()));
        }
    }
    pairs.sort_by_key(|(a, b)| a.size() + b.size());
    for (a, b) in pairs {
        if atoms.len() >= params.max_atoms {
            break;
        }
        let sets = spaces
            .iter()
            .map(|sp| equality_set(&a, &b, sp))
            .collect::<Result<Vec<_>>>()?;
        let entry = Entry {
            formula: Formula::eq(a, b),
            sets,
        };
        if seen.insert(entry.key()) {
            atoms.push(entry);
        }
    }

    let mut levels: Vec<Vec<Entry>> = vec![atoms];
    for d in 1..=params.formula_depth {
        let last = d == params.formula_depth;
        let below = levels.last().expect("atoms");
        let lower: Vec<&Entry> = levels.iter().flatten().collect();
        let mut kinds: Vec<Vec<Box<dyn Fn() -> Result<Entry> + '_>>> = (0..4).map(|_| Vec::new()).collect();
        for u in below {
            kinds[0].push(Box::new(move || {
                Ok(Entry {
                    formula: Formula::not(u.formula.clone()),
                    sets: u.sets.iter().map(PointSet::complement).collect(),
                })
            }));
            for v in all_vars.iter() {
                kinds[1].push(Box::new(move || {
                    Ok(Entry {
                        formula: Formula::exists(v, u.formula.clone()),
                        sets: u.sets.iter().map(|s| s.exists(v)).collect::<Result<_>>()?,
                    })
                }));
                kinds[1].push(Box::new(move || {
                    Ok(Entry {
                        formula: Formula::forall(v, u.formula.clone()),
                        sets: u.sets.iter().map(|s| s.forall(v)).collect::<Result<_>>()?,
                    })
                }));
            }
            for w in &lower {
                if std::ptr::eq(u, *w) {
                    continue;
                }
                kinds[2].push(Box::new(move || {
                    Ok(Entry {
                        formula: Formula::and(u.formula.clone(), w.formula.clone()),
                        sets: u
                            .sets
                            .iter()
                            .zip(&w.sets)
                            .map(|(a, b)| a.meet(b))
                            .collect::<Result<_>>()?,
                    })
                }));
                kinds[3].push(Box::new(move || {
                    Ok(Entry {
                        formula: Formula::or(u.formula.clone(), w.formula.clone()),
                        sets: u
                            .sets
                            .iter()
                            .zip(&w.sets)
                            .map(|(a, b)| a.join(b))
                            .collect::<Result<_>>()?,
                    })
                }));
            }
        }
        let mut level = Vec::new();
        let longest = kinds.iter().map(Vec::len).max().unwrap_or(0);
        'fill: for i in 0..longest {
            for kind in &kinds {
                if level.len() >= params.max_per_level {
                    break 'fill;
                }
                if let Some(make) = kind.get(i) {
                    let entry = make()?;
                    if last && !entry.formula.free_variables().iter().all(|v| params.free.contains(v)) {
                        continue;
                    }
                    if seen.insert(entry.key()) {
                        level.push(entry);
                    }
                }
            }
        }
        drop(kinds);
        if level.is_empty() {
            break;
        }
        levels.push(level);
    }

    Ok(levels
        .into_iter()
        .flatten()
        .map(|e| e.formula)
        .filter(|f| f.free_variables().iter().all(|v| params.free.contains(v)))
        .collect())
}

/// The default pool for a signature, generated over its reference algebras.
pub fn standard_pool(signature: &Signature) -> Result<Vec<Formula>> {
    generate_pool(signature, &reference_algebras(signature), &PoolParams::default())
}

/// Checks every formula in the pool evaluates over `space`.
pub fn check_pool(pool: &[Formula], space: &Arc<Space>) -> Result<()> {
    for u in pool {
        val(u, space)?;
    }
    Ok(())
}
