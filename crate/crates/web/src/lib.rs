//! Browser bindings: each operation takes an algebra (file text or fixture
//! name) and returns JSON.

use std::sync::Arc;

use halmos_core::algebra::{parse_algebra, render_algebra};
use halmos_core::analysis::orbit_decomposition;
use halmos_core::galois::{ag_closure_or_approximate, is_definable, lg_closure};
use halmos_core::parser::parse_formula_in;
use halmos_core::semantics::{in_theory, val};
use halmos_core::{fixtures, FiniteAlgebra, Point, PointSet, Space, VariableSet};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Spaces larger than this are refused in the browser.
pub const WEB_BUDGET: usize = 1 << 16;

#[derive(Debug, Serialize)]
pub struct Fixture {
    pub name: String,
    pub source: String,
}

#[derive(Debug, Serialize)]
pub struct SetView {
    pub algebra: String,
    pub carrier: Vec<String>,
    pub vars: Vec<String>,
    pub card: usize,
    /// Members as element indices, one entry per variable.
    pub members: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Evaluation {
    pub set: SetView,
    pub in_theory: bool,
}

#[derive(Debug, Serialize)]
pub struct Closure {
    pub input: SetView,
    pub closure: SetView,
    pub definable: bool,
    pub approximate: bool,
}

#[derive(Debug, Serialize)]
pub struct Orbits {
    pub count: usize,
    pub orbits: Vec<SetView>,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn fixtures() -> Vec<Fixture> {
    fixtures::library()
        .iter()
        .map(|h| Fixture {
            name: h.name().to_string(),
            source: render_algebra(h),
        })
        .collect()
}

pub fn load_algebra(source: &str) -> Result<Arc<FiniteAlgebra>, String> {
    let trimmed = source.trim();
    if let Some(h) = fixtures::by_name(trimmed) {
        return Ok(Arc::new(h));
    }
    parse_algebra(source).map(Arc::new).map_err(err)
}

fn space(alg: &str, vars: &str) -> Result<Arc<Space>, String> {
    let names: Vec<&str> = vars.split([',', ' ']).filter(|v| !v.is_empty()).collect();
    let vars = VariableSet::new(names).map_err(err)?;
    Space::with_budget(load_algebra(alg)?, vars, WEB_BUDGET).map_err(err)
}

fn view(set: &PointSet) -> SetView {
    SetView {
        algebra: set.algebra().name().to_string(),
        carrier: set.algebra().carrier().to_vec(),
        vars: set.vars().iter().map(str::to_string).collect(),
        card: set.len(),
        members: set.points().map(|p| p.values().to_vec()).collect(),
        labels: set.describe(),
    }
}

pub fn evaluate(alg: &str, vars: &str, formula: &str) -> Result<Evaluation, String> {
    let space = space(alg, vars)?;
    let u = parse_formula_in(formula, space.algebra().signature()).map_err(err)?;
    Ok(Evaluation {
        set: view(&val(&u, &space).map_err(err)?),
        in_theory: in_theory(&u, &space).map_err(err)?,
    })
}

/// `points` lists `x=1, y=0` entries separated by `;` or newlines; `kind`
/// is `ag` or `lg`.
pub fn closure(alg: &str, vars: &str, points: &str, kind: &str) -> Result<Closure, String> {
    let space = space(alg, vars)?;
    let points = points
        .split([';', '\n'])
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| Point::parse(p, space.vars(), space.algebra()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let a = PointSet::from_points(&space, &points).map_err(err)?;
    let (closed, approximate) = match kind {
        "ag" => {
            let c = ag_closure_or_approximate(&a, 3).map_err(err)?;
            (c.points, c.approximate)
        }
        "lg" | "mt" => (lg_closure(&a), false),
        other => return Err(format!("unknown closure kind `{other}`")),
    };
    Ok(Closure {
        input: view(&a),
        closure: view(&closed),
        definable: is_definable(&a),
        approximate,
    })
}

pub fn orbits(alg: &str, vars: &str) -> Result<Orbits, String> {
    let space = space(alg, vars)?;
    let orbits: Vec<SetView> = orbit_decomposition(&space).iter().map(view).collect();
    Ok(Orbits {
        count: orbits.len(),
        orbits,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(err))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = fixtures)]
pub fn fixtures_js() -> Result<String, JsValue> {
    to_js(Ok(fixtures()))
}

#[wasm_bindgen(js_name = evaluate)]
pub fn evaluate_js(alg: &str, vars: &str, formula: &str) -> Result<String, JsValue> {
    to_js(evaluate(alg, vars, formula))
}

#[wasm_bindgen(js_name = closure)]
pub fn closure_js(alg: &str, vars: &str, points: &str, kind: &str) -> Result<String, JsValue> {
    to_js(closure(alg, vars, points, kind))
}

#[wasm_bindgen(js_name = orbits)]
pub fn orbits_js(alg: &str, vars: &str) -> Result<String, JsValue> {
    to_js(orbits(alg, vars))
}
