use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use halmos_core::algebra::parse_algebra;
use halmos_core::analysis::{
    are_isotypic, is_lg_saturated, is_logically_homogeneous, locally_isomorphic, orbit_decomposition,
};
use halmos_core::formula::{specialize, substitute_formula};
use halmos_core::galois::{
    ag_closure_or_approximate, is_category_morphism, is_definable, lg_closure, mt_closure, noetherian_witness,
};
use halmos_core::parser::{parse_bindings, parse_formula, parse_formula_in};
use halmos_core::pool::{parse_pool, standard_pool};
use halmos_core::semantics::{in_theory, val};
use halmos_core::{
    fixtures, Error, FiniteAlgebra, Formula, Point, PointSet, Space, Substitution, Term, VariableSet, DEFAULT_BUDGET,
};

/// Logical geometry over finite algebras.
#[derive(Parser)]
#[command(name = "halmos", version)]
struct Cli {
    /// Maximum number of points in any space or table.
    #[arg(long, global = true, env = "HALMOS_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Print machine-readable records (point sets in their serialized form).
    #[arg(long, global = true)]
    record: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula (or the meet of a pool) as a point set.
    Eval {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, short, conflicts_with = "pool", required_unless_present = "pool")]
        formula: Option<String>,
        /// Pool file, one formula per line; its solution set is printed.
        #[arg(long)]
        pool: Option<PathBuf>,
    },
    /// Galois closure of a point set.
    Closure {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t = Kind::Lg)]
        kind: Kind,
        /// Points as `x=1, y=0` separated by `;` or newlines, a file of those,
        /// or a serialized point set.
        #[arg(long, short)]
        points: String,
        /// Term depth used when the exact algebraic closure is over budget.
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Decide isotypy of two algebras.
    Isotypic {
        algebras: Vec<String>,
        #[arg(long = "alg")]
        alg: Vec<String>,
        /// Largest number of variables considered.
        #[arg(long, visible_alias = "max-arity", default_value_t = 3)]
        depth: usize,
    },
    /// Decide local isomorphism of two algebras.
    Local {
        algebras: Vec<String>,
        #[arg(long = "alg")]
        alg: Vec<String>,
        #[arg(long, default_value_t = 2)]
        generators: usize,
    },
    /// Automorphism orbits of a space.
    Orbits {
        #[command(flatten)]
        space: PositionalSpace,
    },
    /// Logical homogeneity of a space.
    Homogeneous {
        #[command(flatten)]
        space: PositionalSpace,
    },
    /// LG-saturation of a space.
    Saturated {
        #[command(flatten)]
        space: PositionalSpace,
    },
    /// Apply a substitution to a formula.
    Subst {
        /// Variables of the formula, as `x,y` or `"x y"`.
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        /// Variables of the result.
        #[arg(long, value_delimiter = ',')]
        to: Vec<String>,
        /// Bindings such as `x=add(y,z); y=y`; unbound variables map to themselves.
        #[arg(long)]
        map: String,
        formula: String,
        /// Algebra whose signature the terms use; the result is evaluated over it.
        #[arg(long)]
        alg: String,
    },
    /// Rewrite a formula into special form for the given variables.
    Specialize {
        #[arg(long, value_delimiter = ',')]
        vars: Vec<String>,
        formula: String,
        #[arg(long)]
        alg: Option<String>,
    },
    /// Check that a substitution is a morphism between two point sets.
    Morphism {
        #[arg(long)]
        alg: String,
        /// Variables of the source set.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        vars: Vec<String>,
        /// Variables of the target set.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        to: Vec<String>,
        /// Each target variable bound to a term over the source variables.
        #[arg(long)]
        map: String,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// A finite subset of a pool with the same solutions.
    Noetherian {
        #[command(flatten)]
        space: SpaceArgs,
        /// Pool file; the generated standard pool when omitted.
        #[arg(long)]
        pool: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ag,
    Lg,
    Mt,
}

#[derive(Args)]
struct SpaceArgs {
    /// Algebra file or fixture name (Z2, Z3, Z3r, L2, Z2^2).
    #[arg(long)]
    alg: String,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    vars: Vec<String>,
}

#[derive(Args)]
struct PositionalSpace {
    algebra: Option<String>,
    #[arg(long = "alg", conflicts_with = "algebra", required_unless_present = "algebra")]
    alg: Option<String>,
    #[arg(long, num_args = 0.., value_delimiter = ',')]
    vars: Vec<String>,
}

impl PositionalSpace {
    fn source(&self) -> &str {
        self.algebra.as_deref().or(self.alg.as_deref()).unwrap_or_default()
    }
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_algebra(source: &str) -> Result<Arc<FiniteAlgebra>, Failure> {
    let path = Path::new(source);
    if !path.exists() {
        let name = source.strip_suffix(".alg").unwrap_or(source).replace("sq", "^2");
        if let Some(h) = fixtures::library()
            .into_iter()
            .find(|h| h.name().eq_ignore_ascii_case(&name))
        {
            return Ok(Arc::new(h));
        }
    }
    Ok(Arc::new(parse_algebra(&read(path)?)?))
}

fn variables(names: &[String]) -> Result<VariableSet, Failure> {
    let names: Vec<&str> = names.iter().flat_map(|n| n.split_whitespace()).collect();
    Ok(VariableSet::new(names)?)
}

fn space(alg: &str, vars: &[String], budget: usize) -> Result<Arc<Space>, Failure> {
    Ok(Space::with_budget(load_algebra(alg)?, variables(vars)?, budget)?)
}

fn text_or_file(value: &str) -> Result<String, Failure> {
    let path = Path::new(value);
    if !value.contains('=') && path.is_file() {
        read(path)
    } else {
        Ok(value.to_string())
    }
}

fn parse_points(value: &str, space: &Arc<Space>) -> Result<PointSet, Failure> {
    let text = text_or_file(value)?;
    if text.trim_start().starts_with("pointset") {
        let set = PointSet::deserialize(&text, space.algebra())?;
        if set.vars() != space.vars() {
            return Err(Error::SpaceMismatch(format!("point set over {} read as {}", set.vars(), space.vars())).into());
        }
        return Ok(set);
    }
    let points = text
        .split([';', '\n'])
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(|line| Point::parse(line, space.vars(), space.algebra()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PointSet::from_points(space, &points)?)
}

fn substitution(
    domain: VariableSet,
    codomain: VariableSet,
    map: &str,
    alg: &FiniteAlgebra,
) -> Result<Substitution, Failure> {
    let bindings = parse_bindings(map, alg.signature())?;
    for (name, _) in &bindings {
        if !domain.contains(name) {
            return Err(Error::UnknownVariable(name.clone()).into());
        }
    }
    let images = domain
        .iter()
        .map(|v| {
            bindings
                .iter()
                .find(|(name, _)| name == v)
                .map(|(_, t)| t.clone())
                .unwrap_or_else(|| Term::var(v))
        })
        .collect();
    Ok(Substitution::new(domain, codomain, images)?)
}

fn formula_for(text: &str, alg: Option<&FiniteAlgebra>) -> Result<Formula, Failure> {
    Ok(match alg {
        Some(h) => parse_formula_in(text, h.signature())?,
        None => parse_formula(text)?,
    })
}

fn show_set(out: &mut String, set: &PointSet, record: bool) {
    let _ = writeln!(out, "card: {}", set.len());
    if record {
        let _ = writeln!(out, "{}", set.serialize());
    } else if set.vars().is_empty() {
        if !set.is_empty() {
            let _ = writeln!(out, "()");
        }
    } else {
        for p in set.describe() {
            let _ = writeln!(out, "{p}");
        }
    }
}

fn two_algebras(algebras: &[String], alg: &[String]) -> Result<(Arc<FiniteAlgebra>, Arc<FiniteAlgebra>), Failure> {
    let all: Vec<&String> = algebras.iter().chain(alg).collect();
    match all.as_slice() {
        [a, b] => Ok((load_algebra(a)?, load_algebra(b)?)),
        _ => Err(Failure::Usage(format!("expected two algebras, got {}", all.len()))),
    }
}

fn run(cli: Cli) -> Outcome {
    let budget = cli.budget;
    let record = cli.record;
    let mut out = String::new();
    match cli.command {
        Command::Eval {
            space: s,
            formula,
            pool,
        } => {
            let space = space(&s.alg, &s.vars, budget)?;
            let sig = space.algebra().signature();
            let (set, theory) = match (formula, pool) {
                (Some(text), _) => {
                    let u = parse_formula_in(&text, sig)?;
                    (val(&u, &space)?, in_theory(&u, &space)?)
                }
                (None, Some(path)) => {
                    let pool = parse_pool(&read(&path)?, sig)?;
                    let mut set = PointSet::full(&space);
                    for u in &pool {
                        set = set.meet(&val(u, &space)?)?;
                    }
                    let full = set.is_full();
                    (set, full)
                }
                (None, None) => return Err(Failure::Usage("give --formula or --pool".into())),
            };
            show_set(&mut out, &set, record);
            let _ = writeln!(out, "in_theory: {theory}");
        }
        Command::Closure {
            space: s,
            kind,
            points,
            depth,
        } => {
            let space = space(&s.alg, &s.vars, budget)?;
            let a = parse_points(&points, &space)?;
            let (closed, approximate) = match kind {
                Kind::Ag => {
                    let c = ag_closure_or_approximate(&a, depth)?;
                    (c.points, c.approximate)
                }
                Kind::Lg => (lg_closure(&a), false),
                Kind::Mt => (mt_closure(&a), false),
            };
            show_set(&mut out, &closed, record);
            if approximate {
                let _ = writeln!(out, "approximate: true");
            }
            let _ = writeln!(out, "definable: {}", is_definable(&a));
        }
        Command::Isotypic { algebras, alg, depth } => {
            let (h1, h2) = two_algebras(&algebras, &alg)?;
            if depth == 0 {
                return Err(Failure::Usage("--depth must be at least 1".into()));
            }
            out.push_str(&are_isotypic(&h1, &h2, depth)?.record());
        }
        Command::Local {
            algebras,
            alg,
            generators,
        } => {
            let (h1, h2) = two_algebras(&algebras, &alg)?;
            let report = locally_isomorphic(&h1, &h2, generators)?;
            let verdict = if report.holds() {
                "locally_isomorphic"
            } else {
                "not locally_isomorphic"
            };
            let _ = writeln!(out, "verdict: {verdict}");
            for e in [&report.forward, &report.backward] {
                let _ = writeln!(out, "embeddings: {} -> {}: {}", e.source, e.target, e.witnesses.len());
                if let Some(seed) = &e.failure {
                    let h = if e.source == h1.name() { &h1 } else { &h2 };
                    let labels: Vec<&str> = seed.iter().map(|&a| h.label(a)).collect();
                    let _ = writeln!(out, "witness_seed: {} in {}", labels.join(" "), e.source);
                }
            }
        }
        Command::Orbits { space: s } => {
            let space = space(s.source(), &s.vars, budget)?;
            let orbits = orbit_decomposition(&space);
            let _ = writeln!(out, "count: {}", orbits.len());
            for o in &orbits {
                if record {
                    let _ = writeln!(out, "{}", o.serialize());
                } else {
                    let _ = writeln!(out, "{o}");
                }
            }
        }
        Command::Homogeneous { space: s } => {
            let space = space(s.source(), &s.vars, budget)?;
            out.push_str(&is_logically_homogeneous(&space)?.record());
        }
        Command::Saturated { space: s } => {
            let space = space(s.source(), &s.vars, budget)?;
            out.push_str(&is_lg_saturated(&space)?.record());
        }
        Command::Subst {
            vars,
            to,
            map,
            formula,
            alg,
        } => {
            let h = load_algebra(&alg)?;
            let u = parse_formula_in(&formula, h.signature())?;
            let to = variables(&to)?;
            let s = substitution(variables(&vars)?, to.clone(), &map, &h)?;
            let v = substitute_formula(&s, &u);
            let _ = writeln!(out, "{v}");
            let sp = Space::with_budget(h, to, budget)?;
            show_set(&mut out, &val(&v, &sp)?, record);
        }
        Command::Specialize { vars, formula, alg } => {
            let h = alg.as_deref().map(load_algebra).transpose()?;
            let u = formula_for(&formula, h.as_deref())?;
            let _ = writeln!(out, "{}", specialize(&u, &variables(&vars)?)?.formula());
        }
        Command::Morphism {
            alg,
            vars,
            to,
            map,
            source,
            target,
        } => {
            let h = load_algebra(&alg)?;
            let x = variables(&vars)?;
            let y = variables(&to)?;
            let sx = Space::with_budget(h.clone(), x.clone(), budget)?;
            let sy = Space::with_budget(h.clone(), y.clone(), budget)?;
            let a = parse_points(&source, &sx)?;
            let b = parse_points(&target, &sy)?;
            let s = substitution(y, x, &map, &h)?;
            let _ = writeln!(out, "morphism: {}", is_category_morphism(&s, &a, &b)?);
        }
        Command::Noetherian { space: s, pool } => {
            let space = space(&s.alg, &s.vars, budget)?;
            let sig = space.algebra().signature();
            let pool = match pool {
                Some(path) => parse_pool(&read(&path)?, sig)?,
                None => standard_pool(sig)?
                    .into_iter()
                    .filter(|u| u.free_variables().iter().all(|v| space.vars().contains(v)))
                    .collect(),
            };
            let kept = noetherian_witness(&pool, &space)?;
            let _ = writeln!(out, "count: {} of {}", kept.len(), pool.len());
            for u in &kept {
                let _ = writeln!(out, "{u}");
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(out)) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Core(e))) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
        Err(_) => ExitCode::from(1),
    }
}
