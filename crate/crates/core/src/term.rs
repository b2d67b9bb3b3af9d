//! The absolutely free term algebra `W(X)`, substitutions and points.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::error::{Error, Result};

/// Prefix of the reserved namespace used for bound variables.
pub const RESERVED_PREFIX: &str = "_y";

pub fn is_reserved(name: &str) -> bool {
    name.starts_with(RESERVED_PREFIX)
}

/// An ordered list of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct VariableSet(Arc<[String]>);

impl VariableSet {
    /// A set of user variables; reserved names are rejected.
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars = Self::any(names)?;
        if let Some(bad) = vars.iter().find(|v| is_reserved(v)) {
            return Err(Error::InvalidVariables(format!(
                "`{bad}` lies in the reserved namespace `{RESERVED_PREFIX}*`"
            )));
        }
        Ok(vars)
    }

    /// Like [`VariableSet::new`] but admits reserved names.
    pub fn any<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !crate::is_identifier(n) {
                return Err(Error::InvalidVariables(format!("`{n}` is not an identifier")));
            }
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidVariables(format!("duplicate variable `{n}`")));
            }
        }
        Ok(VariableSet(names.into()))
    }

    pub fn empty() -> Self {
        VariableSet(Arc::from(Vec::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn get(&self, i: usize) -> &str {
        &self.0[i]
    }

    /// This set with `name` appended as the last coordinate.
    pub fn extended(&self, name: &str) -> Result<Self> {
        Self::any(self.iter().chain(std::iter::once(name)))
    }

    /// This set with the last coordinate removed.
    pub(crate) fn truncated(&self) -> Self {
        VariableSet(self.0[..self.0.len() - 1].into())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for VariableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.join(", "))
    }
}

/// An element of the absolutely free term algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// Operation applied to arguments; constants have no arguments.
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_variables(&mut out);
        out
    }

    pub(crate) fn collect_variables(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_variables(out)),
        }
    }

    /// Replaces variables through `f`; unmapped variables stay.
    pub(crate) fn map_vars(&self, f: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Checks every application against the signature.
    pub fn check(&self, signature: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::App(op, args) => {
                let arity = signature.arity(op).ok_or_else(|| Error::UnknownOperation(op.clone()))?;
                if arity != args.len() {
                    return Err(Error::Arity {
                        name: op.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(signature))
            }
        }
    }

    /// Turns bare identifiers naming a constant of `signature` into
    /// constant applications, except those listed in `shadowed`.
    pub(crate) fn resolve_constants(&self, signature: &Signature, shadowed: &[String]) -> Term {
        match self {
            Term::Var(v) if signature.arity(v) == Some(0) && !shadowed.contains(v) => Term::constant(v.clone()),
            Term::Var(_) => self.clone(),
            Term::App(op, args) => Term::App(
                op.clone(),
                args.iter().map(|a| a.resolve_constants(signature, shadowed)).collect(),
            ),
        }
    }

    /// Compiles against a variable order and an algebra's operation indices.
    pub(crate) fn compile(&self, vars: &VariableSet, algebra: &FiniteAlgebra) -> Result<CompiledTerm> {
        self.check(algebra.signature())?;
        let mut code = Vec::new();
        self.emit(vars, algebra.signature(), &mut code)?;
        Ok(CompiledTerm { code })
    }

    fn emit(&self, vars: &VariableSet, sig: &Signature, code: &mut Vec<Instr>) -> Result<()> {
        match self {
            Term::Var(v) => {
                let i = vars.position(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
                code.push(Instr::Load(i));
            }
            Term::App(op, args) => {
                for a in args {
                    a.emit(vars, sig, code)?;
                }
                let index = sig.op_index(op).expect("checked");
                code.push(Instr::Apply(index, args.len()));
            }
        }
        Ok(())
    }

    /// Homomorphic extension of `s` applied to this term.
    pub fn apply_substitution(&self, s: &Substitution) -> Term {
        self.map_vars(&|v| s.image(v).cloned())
    }

    /// The value of this term at `p`.
    pub fn evaluate(&self, p: &Point) -> Result<usize> {
        match self {
            Term::Var(v) => p.value(v).ok_or_else(|| Error::UnknownVariable(v.clone())),
            Term::App(op, args) => {
                let alg = p.algebra();
                let index = alg
                    .signature()
                    .op_index(op)
                    .ok_or_else(|| Error::UnknownOperation(op.clone()))?;
                let arity = alg.signature().ops()[index].arity;
                if arity != args.len() {
                    return Err(Error::Arity {
                        name: op.clone(),
                        expected: arity,
                        got: args.len(),
                    });
                }
                let values = args.iter().map(|a| a.evaluate(p)).collect::<Result<Vec<_>>>()?;
                Ok(alg.apply(index, &values))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) if args.is_empty() => f.write_str(op),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Instr {
    Load(usize),
    Apply(usize, usize),
}

/// A term flattened to postfix code over variable positions.
#[derive(Debug, Clone)]
pub(crate) struct CompiledTerm {
    code: Vec<Instr>,
}

impl CompiledTerm {
    pub fn eval(&self, algebra: &FiniteAlgebra, values: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for instr in &self.code {
            match *instr {
                Instr::Load(i) => stack.push(values[i]),
                Instr::Apply(op, k) => {
                    let at = stack.len() - k;
                    let v = algebra.apply(op, &stack[at..]);
                    stack.truncate(at);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }
}

/// A homomorphism `s: W(X) → W(Y)` given by the images of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    domain: VariableSet,
    codomain: VariableSet,
    images: Vec<Term>,
}

impl Substitution {
    pub fn new(domain: VariableSet, codomain: VariableSet, images: Vec<Term>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::Malformed(format!(
                "substitution on {domain} needs {} images, got {}",
                domain.len(),
                images.len()
            )));
        }
        for t in &images {
            if let Some(v) = t.variables().into_iter().find(|v| !codomain.contains(v)) {
                return Err(Error::UnknownVariable(v));
            }
        }
        Ok(Substitution {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(vars: &VariableSet) -> Self {
        Substitution {
            domain: vars.clone(),
            codomain: vars.clone(),
            images: vars.iter().map(Term::var).collect(),
        }
    }

    pub fn domain(&self) -> &VariableSet {
        &self.domain
    }

    pub fn codomain(&self) -> &VariableSet {
        &self.codomain
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn image(&self, var: &str) -> Option<&Term> {
        self.domain.position(var).map(|i| &self.images[i])
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Substitution) -> Result<Substitution> {
        if first.codomain != self.domain {
            return Err(Error::SpaceMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                first.domain, first.codomain, self.domain, self.codomain
            )));
        }
        Ok(Substitution {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            images: first.images.iter().map(|t| t.apply_substitution(self)).collect(),
        })
    }

    pub fn check(&self, signature: &Signature) -> Result<()> {
        self.images.iter().try_for_each(|t| t.check(signature))
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, t)) in self.domain.iter().zip(&self.images).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={t}")?;
        }
        Ok(())
    }
}

/// An assignment `X → H`, i.e. a homomorphism `W(X) → H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    vars: VariableSet,
    algebra: Arc<FiniteAlgebra>,
    values: Vec<usize>,
}

impl Point {
    pub fn new(vars: VariableSet, algebra: Arc<FiniteAlgebra>, values: Vec<usize>) -> Result<Self> {
        if values.len() != vars.len() {
            return Err(Error::Malformed(format!(
                "point over {vars} needs {} values, got {}",
                vars.len(),
                values.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= algebra.size()) {
            return Err(Error::Malformed(format!(
                "element index {bad} outside carrier of {}",
                algebra.name()
            )));
        }
        Ok(Point { vars, algebra, values })
    }

    /// Parses `x=1, y=0` (labels) or a bare label list in variable order.
    pub fn parse(text: &str, vars: &VariableSet, algebra: &Arc<FiniteAlgebra>) -> Result<Self> {
        let text = text.trim();
        let mut values = vec![None; vars.len()];
        if text.contains('=') {
            for part in text.split([',', ' ']).filter(|p| !p.is_empty()) {
                let (v, label) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Malformed(format!("expected `var=label`, got `{part}`")))?;
                let i = vars
                    .position(v.trim())
                    .ok_or_else(|| Error::UnknownVariable(v.trim().to_string()))?;
                values[i] = Some(lookup(algebra, label.trim())?);
            }
        } else {
            let labels: Vec<&str> = text.split([',', ' ']).filter(|p| !p.is_empty()).collect();
            if labels.len() != vars.len() {
                return Err(Error::Malformed(format!(
                    "point `{text}` has {} labels for {} variables",
                    labels.len(),
                    vars.len()
                )));
            }
            for (slot, label) in values.iter_mut().zip(labels) {
                *slot = Some(lookup(algebra, label)?);
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Malformed(format!("no value for `{}`", vars.get(i)))))
            .collect::<Result<Vec<_>>>()?;
        Point::new(vars.clone(), algebra.clone(), values)
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, var: &str) -> Option<usize> {
        self.vars.position(var).map(|i| self.values[i])
    }

    /// The point `x ↦ evaluate(s(x), self)` over `s.domain()`.
    pub fn compose(&self, s: &Substitution) -> Result<Point> {
        let values = s
            .images()
            .iter()
            .map(|t| t.evaluate(self))
            .collect::<Result<Vec<_>>>()?;
        Point::new(s.domain().clone(), self.algebra.clone(), values)
    }

    /// `σ ∘ self`, coordinatewise.
    pub fn mapped(&self, sigma: &crate::algebra::ElementMap) -> Point {
        Point {
            vars: self.vars.clone(),
            algebra: self.algebra.clone(),
            values: self.values.iter().map(|&v| sigma.apply(v)).collect(),
        }
    }
}

fn lookup(algebra: &FiniteAlgebra, label: &str) -> Result<usize> {
    algebra
        .element(label)
        .ok_or_else(|| Error::Malformed(format!("`{label}` is not an element of {}", algebra.name())))
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, &a)) in self.vars.iter().zip(&self.values).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}={}", self.algebra.label(a))?;
        }
        Ok(())
    }
}

/// Whether `(w, w2) ∈ Ker(p)`.
pub fn kernel_contains(p: &Point, w: &Term, w2: &Term) -> Result<bool> {
    Ok(w.evaluate(p)? == w2.evaluate(p)?)
}

/// All terms over `vars` of depth at most `depth`, leaves first.
pub fn enumerate_terms(signature: &Signature, vars: &VariableSet, depth: usize) -> Vec<Term> {
    let mut levels: Vec<Vec<Term>> = Vec::new();
    let mut leaves: Vec<Term> = vars.iter().map(Term::var).collect();
    leaves.extend(
        signature
            .ops()
            .iter()
            .filter(|op| op.arity == 0)
            .map(|op| Term::constant(op.name.clone())),
    );
    levels.push(leaves);
    for d in 1..=depth {
        let below: Vec<Term> = levels.iter().flatten().cloned().collect();
        let mut fresh = Vec::new();
        for op in signature.ops().iter().filter(|op| op.arity > 0) {
            crate::algebra::for_each_tuple(below.len(), op.arity, |idx| {
                // at least one argument from the level just below
                if idx.iter().any(|&i| below[i].depth() == d - 1) {
                    let args = idx.iter().map(|&i| below[i].clone()).collect();
                    fresh.push(Term::App(op.name.clone(), args));
                }
            });
        }
        levels.push(fresh);
    }
    levels.into_iter().flatten().collect()
}
