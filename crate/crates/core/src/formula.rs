//! First-order formulas with equality: the syntactic side `Φ(X)`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::algebra::Signature;
use crate::error::{Error, Result};
use crate::term::{is_reserved, Substitution, Term, VariableSet, RESERVED_PREFIX};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn eq(w: Term, w2: Term) -> Formula {
        Formula::Eq(w, w2)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(u: Formula) -> Formula {
        Formula::Not(Box::new(u))
    }

    pub fn and(u: Formula, v: Formula) -> Formula {
        Formula::And(Box::new(u), Box::new(v))
    }

    pub fn or(u: Formula, v: Formula) -> Formula {
        Formula::Or(Box::new(u), Box::new(v))
    }

    /// `u → v`, i.e. `¬u ∨ v`.
    pub fn implies(u: Formula, v: Formula) -> Formula {
        Formula::or(Formula::not(u), v)
    }

    pub fn exists(var: impl Into<String>, u: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(u))
    }

    pub fn forall(var: impl Into<String>, u: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(u))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    /// Nesting depth of connectives and quantifiers; equalities have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) => 0,
            Formula::Not(u) | Formula::Exists(_, u) | Formula::Forall(_, u) => 1 + u.depth(),
            Formula::And(u, v) | Formula::Or(u, v) => 1 + u.depth().max(v.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(w, w2) => w.size() + w2.size(),
            Formula::Not(u) | Formula::Exists(_, u) | Formula::Forall(_, u) => 1 + u.size(),
            Formula::And(u, v) | Formula::Or(u, v) => 1 + u.size() + v.size(),
        }
    }

    /// Variables with a free occurrence in some equality.
    pub fn free_variables(&self) -> BTreeSet<String> {
        match self {
            Formula::Eq(w, w2) => {
                let mut out = w.variables();
                w2.collect_variables(&mut out);
                out
            }
            Formula::Not(u) => u.free_variables(),
            Formula::And(u, v) | Formula::Or(u, v) => {
                let mut out = u.free_variables();
                out.extend(v.free_variables());
                out
            }
            Formula::Exists(x, u) | Formula::Forall(x, u) => {
                let mut out = u.free_variables();
                out.remove(x);
                out
            }
        }
    }

    /// Variables appearing as quantifier binders.
    pub fn bound_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Exists(x, _) | Formula::Forall(x, _) = f {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Eq(w, w2) => {
                w.collect_variables(&mut out);
                w2.collect_variables(&mut out);
            }
            Formula::Exists(x, _) | Formula::Forall(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Eq(..) => {}
            Formula::Not(u) | Formula::Exists(_, u) | Formula::Forall(_, u) => u.walk(f),
            Formula::And(u, v) | Formula::Or(u, v) => {
                u.walk(f);
                v.walk(f);
            }
        }
    }

    pub fn check(&self, signature: &Signature) -> Result<()> {
        match self {
            Formula::Eq(w, w2) => {
                w.check(signature)?;
                w2.check(signature)
            }
            Formula::Not(u) | Formula::Exists(_, u) | Formula::Forall(_, u) => u.check(signature),
            Formula::And(u, v) | Formula::Or(u, v) => {
                u.check(signature)?;
                v.check(signature)
            }
        }
    }

    /// Reads bare identifiers that name constants of `signature` as those
    /// constants, unless a quantifier in scope binds the name.
    pub fn resolve_constants(&self, signature: &Signature) -> Formula {
        self.resolve_in(signature, &mut Vec::new())
    }

    fn resolve_in(&self, sig: &Signature, bound: &mut Vec<String>) -> Formula {
        match self {
            Formula::Eq(w, w2) => Formula::Eq(w.resolve_constants(sig, bound), w2.resolve_constants(sig, bound)),
            Formula::Not(u) => Formula::not(u.resolve_in(sig, bound)),
            Formula::And(u, v) => Formula::and(u.resolve_in(sig, bound), v.resolve_in(sig, bound)),
            Formula::Or(u, v) => Formula::or(u.resolve_in(sig, bound), v.resolve_in(sig, bound)),
            Formula::Exists(x, u) | Formula::Forall(x, u) => {
                bound.push(x.clone());
                let body = u.resolve_in(sig, bound);
                bound.pop();
                self.rebind(x.clone(), body)
            }
        }
    }

    /// Same quantifier as `self` (which must be one) over a new binder/body.
    fn rebind(&self, var: String, body: Formula) -> Formula {
        match self {
            Formula::Exists(..) => Formula::Exists(var, Box::new(body)),
            Formula::Forall(..) => Formula::Forall(var, Box::new(body)),
            _ => unreachable!("rebind on a non-quantifier"),
        }
    }

    /// Rewrites the terms of every equality through `env`, renaming every
    /// binder via `binder` first.
    fn rename(&self, env: &mut HashMap<String, Term>, binder: &mut impl FnMut(&str) -> String) -> Formula {
        let lookup = |env: &HashMap<String, Term>, t: &Term| t.map_vars(&|v| env.get(v).cloned());
        match self {
            Formula::Eq(w, w2) => Formula::Eq(lookup(env, w), lookup(env, w2)),
            Formula::Not(u) => Formula::not(u.rename(env, binder)),
            Formula::And(u, v) => Formula::and(u.rename(env, binder), v.rename(env, binder)),
            Formula::Or(u, v) => Formula::or(u.rename(env, binder), v.rename(env, binder)),
            Formula::Exists(x, u) | Formula::Forall(x, u) => {
                let fresh = binder(x);
                let saved = env.insert(x.clone(), Term::var(fresh.clone()));
                let body = u.rename(env, binder);
                match saved {
                    Some(t) => env.insert(x.clone(), t),
                    None => env.remove(x),
                };
                self.rebind(fresh, body)
            }
        }
    }
}

/// Deterministic supply of `_y1, _y2, ...` avoiding names already in use.
pub struct FreshNames {
    used: HashSet<String>,
    next: usize,
}

impl FreshNames {
    pub fn avoiding<'a>(used: impl IntoIterator<Item = &'a str>) -> Self {
        FreshNames {
            used: used.into_iter().map(str::to_string).collect(),
            next: 1,
        }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("{RESERVED_PREFIX}{}", self.next);
            self.next += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// `s_* u`: applies `s` to every equality after renaming each binder to a
/// fresh reserved variable, so no image variable is captured. Free
/// variables outside `s.domain()` are left unchanged.
pub fn substitute_formula(s: &Substitution, u: &Formula) -> Formula {
    let all = u.all_variables();
    let mut avoid: Vec<&str> = all.iter().map(String::as_str).collect();
    avoid.extend(s.domain().iter());
    avoid.extend(s.codomain().iter());
    let mut fresh = FreshNames::avoiding(avoid);
    let mut env: HashMap<String, Term> = s
        .domain()
        .iter()
        .zip(s.images())
        .map(|(v, t)| (v.to_string(), t.clone()))
        .collect();
    u.rename(&mut env, &mut |_| fresh.fresh())
}

/// Free variables within `vars`, every binder reserved and outside `vars`.
pub fn is_x_special(u: &Formula, vars: &VariableSet) -> bool {
    special_violation(u, vars).is_none()
}

fn special_violation(u: &Formula, vars: &VariableSet) -> Option<String> {
    if let Some(v) = u.free_variables().into_iter().find(|v| !vars.contains(v)) {
        return Some(format!("free variable `{v}` outside the set"));
    }
    u.bound_variables()
        .into_iter()
        .find(|b| !is_reserved(b) || vars.contains(b))
        .map(|b| format!("bound variable `{b}` is not a reserved name"))
}

/// A formula certified to be special for its variable set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpecialFormula {
    formula: Formula,
    vars: VariableSet,
}

impl SpecialFormula {
    pub fn certify(formula: Formula, vars: VariableSet) -> Result<Self> {
        match special_violation(&formula, &vars) {
            None => Ok(SpecialFormula { formula, vars }),
            Some(msg) => Err(Error::NotSpecial {
                vars: vars.to_string(),
                msg,
            }),
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    pub fn into_formula(self) -> Formula {
        self.formula
    }
}

impl fmt::Display for SpecialFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt(f)
    }
}

/// The translation `u ↦ ũ`: equalities are kept, connectives commute, and
/// every binder that is not already reserved is renamed to a fresh reserved
/// variable (outermost first).
pub fn specialize(u: &Formula, vars: &VariableSet) -> Result<SpecialFormula> {
    if let Some(v) = u.free_variables().into_iter().find(|v| !vars.contains(v)) {
        return Err(Error::NotSpecial {
            vars: vars.to_string(),
            msg: format!("free variable `{v}` outside the set"),
        });
    }
    let all = u.all_variables();
    let mut fresh = FreshNames::avoiding(all.iter().map(String::as_str).chain(vars.iter()));
    let mut env = HashMap::new();
    let out = u.rename(&mut env, &mut |b| {
        if is_reserved(b) && !vars.contains(b) {
            b.to_string()
        } else {
            fresh.fresh()
        }
    });
    SpecialFormula::certify(out, vars.clone())
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Top,
    Or,
    And,
    Unary,
}

impl Formula {
    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: Prec) -> fmt::Result {
        let own = match self {
            Formula::Exists(..) | Formula::Forall(..) => Prec::Top,
            Formula::Or(..) => Prec::Or,
            Formula::And(..) => Prec::And,
            Formula::Eq(..) | Formula::Not(..) => Prec::Unary,
        };
        let paren = own < ctx;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Eq(w, w2) => write!(f, "{w} = {w2}")?,
            Formula::Not(u) => {
                f.write_str("!")?;
                match **u {
                    Formula::Not(_) => u.write(f, Prec::Unary)?,
                    _ => {
                        f.write_str("(")?;
                        u.write(f, Prec::Top)?;
                        f.write_str(")")?;
                    }
                }
            }
            Formula::And(u, v) => {
                u.write(f, Prec::And)?;
                f.write_str(" & ")?;
                v.write(f, Prec::Unary)?;
            }
            Formula::Or(u, v) => {
                u.write(f, Prec::Or)?;
                f.write_str(" | ")?;
                v.write(f, Prec::And)?;
            }
            Formula::Exists(x, u) => {
                write!(f, "exists {x}. ")?;
                u.write(f, Prec::Top)?;
            }
            Formula::Forall(x, u) => {
                write!(f, "forall {x}. ")?;
                u.write(f, Prec::Top)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints in the formula DSL; the output parses back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, Prec::Top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_term};

    fn p(s: &str) -> Formula {
        parse_formula(s)
            .unwrap()
            .resolve_constants(crate::fixtures::z3().signature())
    }

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn vars(names: &[&str]) -> VariableSet {
        VariableSet::any(names.iter().copied()).unwrap()
    }

    #[test]
    fn free_variable_examples() {
        assert_eq!(p("x = x").free_variables(), ["x".to_string()].into());
        assert_eq!(p("exists x. x = y").free_variables(), ["y".to_string()].into());
        // without a signature `e` is read as a variable
        let raw = parse_formula("exists y. y = e").unwrap();
        assert_eq!(raw.free_variables(), ["e".to_string()].into());
        assert!(p("exists y. y = e").free_variables().is_empty());
        let closed = Formula::exists("y", Formula::eq(t("y"), Term::constant("e")));
        assert!(closed.free_variables().is_empty());
    }

    #[test]
    fn substitution_without_binders() {
        let s = Substitution::new(vars(&["y"]), vars(&["x"]), vec![t("add(x,x)")]).unwrap();
        let u = Formula::eq(t("y"), Term::constant("e"));
        assert_eq!(
            substitute_formula(&s, &u),
            Formula::eq(t("add(x,x)"), Term::constant("e"))
        );
    }

    #[test]
    fn substitution_avoids_capture() {
        let s = Substitution::new(vars(&["y"]), vars(&["x"]), vec![t("x")]).unwrap();
        let out = substitute_formula(&s, &p("exists x. x = y"));
        assert_eq!(out, p("exists _y1. _y1 = x"));
    }

    #[test]
    fn identity_substitution_renames_binders_only() {
        let u = p("forall z. add(z,x) = x | (exists x. x = z)");
        let out = substitute_formula(&Substitution::identity(&vars(&["x", "z"])), &u);
        assert_eq!(out, p("forall _y1. add(_y1,x) = x | (exists _y2. _y2 = _y1)"));
    }

    #[test]
    fn special_examples() {
        assert!(is_x_special(&p("x = x"), &vars(&["x"])));
        assert!(!is_x_special(&p("exists x. x = x"), &vars(&["x"])));
        assert!(is_x_special(&p("exists _y1. _y1 = x"), &vars(&["x"])));
        assert!(!is_x_special(&p("y = y"), &vars(&["x"])));
        assert!(SpecialFormula::certify(p("exists x. x = x"), vars(&["x"])).is_err());
    }

    #[test]
    fn specialize_examples() {
        let x = vars(&["x"]);
        let xy = vars(&["x", "y"]);
        let eq = p("add(x,x) = e");
        assert_eq!(specialize(&eq, &x).unwrap().formula(), &eq);
        assert_eq!(
            specialize(&p("exists x. x = y"), &xy).unwrap().formula(),
            &p("exists _y1. _y1 = y")
        );
        let neg = p("!(x = e)");
        assert_eq!(specialize(&neg, &x).unwrap().formula(), &neg);
        assert!(specialize(&p("y = y"), &x).is_err());
    }

    #[test]
    fn specialize_keeps_reserved_binders_and_avoids_them() {
        let x = vars(&["x"]);
        let u = p("exists _y1. exists x. _y1 = x");
        assert_eq!(
            specialize(&u, &x).unwrap().formula(),
            &p("exists _y1. exists _y2. _y1 = _y2")
        );
        // outermost binder gets the first fresh name
        let u = p("exists x. forall z. add(x,z) = z");
        assert_eq!(
            specialize(&u, &x).unwrap().formula(),
            &p("exists _y1. forall _y2. add(_y1,_y2) = _y2")
        );
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "x = x",
            "!(x = e)",
            "!!(x = e)",
            "!(x = e) & !(add(x,x) = e)",
            "x = e | y = e & x = y",
            "(x = e | y = e) & x = y",
            "x = e & (y = e & x = y)",
            "exists y. add(y,y) = x",
            "!(exists y. y = x) | (forall z. z = z)",
            "exists y. forall z. y = z | !(z = y)",
        ] {
            let f = p(s);
            assert_eq!(f.to_string(), s);
            assert_eq!(p(&f.to_string()), f);
        }
    }
}
