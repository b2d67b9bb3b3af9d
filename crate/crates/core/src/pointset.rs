//! Subsets of the affine space `Hom(W(X), H)` as bit vectors.
//!
//! A point `μ` over `X = (x_0, …, x_{m-1})` lives at index
//! `Σ_k μ(x_k)·n^k` (mixed radix, little-endian in variable order).

use std::fmt;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::term::{Point, Substitution, VariableSet};
use crate::{check_budget, DEFAULT_BUDGET};

/// An affine space `Hom(W(X), H)` together with its size budget.
#[derive(Debug, Clone)]
pub struct Space {
    algebra: Arc<FiniteAlgebra>,
    vars: VariableSet,
    size: usize,
    budget: usize,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra) && self.vars == other.vars
    }
}

impl Eq for Space {}

impl Space {
    pub fn new(algebra: Arc<FiniteAlgebra>, vars: VariableSet) -> Result<Arc<Space>> {
        Space::with_budget(algebra, vars, DEFAULT_BUDGET)
    }

    pub fn with_budget(algebra: Arc<FiniteAlgebra>, vars: VariableSet, budget: usize) -> Result<Arc<Space>> {
        let size = check_budget(
            &format!("space over {vars} in {}", algebra.name()),
            algebra.size() as u128,
            vars.len(),
            budget,
        )?;
        Ok(Arc::new(Space {
            algebra,
            vars,
            size,
            budget,
        }))
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn vars(&self) -> &VariableSet {
        &self.vars
    }

    /// Number of points, `n^|X|`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    fn n(&self) -> usize {
        self.algebra.size()
    }

    pub(crate) fn stride(&self, coordinate: usize) -> usize {
        self.n().pow(coordinate as u32)
    }

    /// The same algebra over `vars` with this space's budget.
    pub fn over(&self, vars: VariableSet) -> Result<Arc<Space>> {
        Space::with_budget(self.algebra.clone(), vars, self.budget)
    }

    /// This space with one more coordinate, appended last.
    pub fn extended(&self, var: &str) -> Result<Arc<Space>> {
        self.over(self.vars.extended(var)?)
    }

    pub fn encode_values(&self, values: &[usize]) -> usize {
        let n = self.n();
        values.iter().rev().fold(0, |acc, &v| acc * n + v)
    }

    pub fn decode_values(&self, mut index: usize, out: &mut Vec<usize>) {
        let n = self.n();
        out.clear();
        for _ in 0..self.vars.len() {
            out.push(index % n);
            index /= n;
        }
    }

    pub fn encode(&self, p: &Point) -> Result<usize> {
        if p.vars() != &self.vars || !(Arc::ptr_eq(p.algebra(), &self.algebra) || **p.algebra() == *self.algebra) {
            return Err(Error::SpaceMismatch(format!(
                "point over {} in {} encoded in space over {} in {}",
                p.vars(),
                p.algebra().name(),
                self.vars,
                self.algebra.name()
            )));
        }
        Ok(self.encode_values(p.values()))
    }

    pub fn decode(&self, index: usize) -> Result<Point> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange { index, size: self.size });
        }
        let mut values = Vec::new();
        self.decode_values(index, &mut values);
        Point::new(self.vars.clone(), self.algebra.clone(), values)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(|i| self.decode(i).expect("in range"))
    }

    /// Calls `f(index, values)` for every point, reusing one buffer.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[usize])) {
        let n = self.n();
        let mut values = vec![0; self.vars.len()];
        for index in 0..self.size {
            f(index, &values);
            for v in values.iter_mut() {
                *v += 1;
                if *v < n {
                    break;
                }
                *v = 0;
            }
        }
    }
}

/// An element of the extended Boolean algebra of point sets.
#[derive(Debug, Clone)]
pub struct PointSet {
    space: Arc<Space>,
    words: Vec<u64>,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.words == other.words
    }
}

impl Eq for PointSet {}

fn word_count(bits: usize) -> usize {
    bits.div_ceil(64)
}

impl PointSet {
    pub fn empty(space: &Arc<Space>) -> PointSet {
        PointSet {
            space: space.clone(),
            words: vec![0; word_count(space.size)],
        }
    }

    pub fn full(space: &Arc<Space>) -> PointSet {
        let mut s = PointSet {
            space: space.clone(),
            words: vec![u64::MAX; word_count(space.size)],
        };
        s.clear_tail();
        s
    }

    pub fn from_indices(space: &Arc<Space>, indices: impl IntoIterator<Item = usize>) -> Result<PointSet> {
        let mut s = PointSet::empty(space);
        for i in indices {
            if i >= space.size {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    size: space.size,
                });
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn from_points<'a>(space: &Arc<Space>, points: impl IntoIterator<Item = &'a Point>) -> Result<PointSet> {
        let indices = points
            .into_iter()
            .map(|p| space.encode(p))
            .collect::<Result<Vec<_>>>()?;
        PointSet::from_indices(space, indices)
    }

    /// The set of indices where `pred` holds.
    pub fn from_predicate(space: &Arc<Space>, mut pred: impl FnMut(usize, &[usize]) -> bool) -> PointSet {
        let mut s = PointSet::empty(space);
        space.for_each_point(|i, values| {
            if pred(i, values) {
                s.insert(i);
            }
        });
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.space.size % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn vars(&self) -> &VariableSet {
        &self.space.vars
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.space.algebra
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.space.size && self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn contains_point(&self, p: &Point) -> Result<bool> {
        Ok(self.contains(self.space.encode(p)?))
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.space.size, "index {index} out of range");
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        assert!(index < self.space.size, "index {index} out of range");
        self.words[index / 64] &= !(1 << (index % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.space.size
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.indices().map(|i| self.space.decode(i).expect("in range"))
    }

    fn same_space(&self, other: &PointSet) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!(
                "{} over {} vs {} over {}",
                self.space.algebra.name(),
                self.space.vars,
                other.space.algebra.name(),
                other.space.vars
            )))
        }
    }

    fn zip(&self, other: &PointSet, f: impl Fn(u64, u64) -> u64) -> Result<PointSet> {
        self.same_space(other)?;
        Ok(PointSet {
            space: self.space.clone(),
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn meet(&self, other: &PointSet) -> Result<PointSet> {
        self.zip(other, |a, b| a & b)
    }

    pub fn join(&self, other: &PointSet) -> Result<PointSet> {
        self.zip(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &PointSet) -> Result<PointSet> {
        self.zip(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> PointSet {
        let mut s = PointSet {
            space: self.space.clone(),
            words: self.words.iter().map(|w| !w).collect(),
        };
        s.clear_tail();
        s
    }

    pub fn is_subset(&self, other: &PointSet) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    fn coordinate(&self, var: &str) -> Result<usize> {
        self.space
            .vars
            .position(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    /// `∃x A`: the points agreeing off `x` with some point of `A`.
    pub fn exists(&self, var: &str) -> Result<PointSet> {
        let k = self.coordinate(var)?;
        let n = self.space.n();
        let stride = self.space.stride(k);
        let mut out = PointSet::empty(&self.space);
        for i in self.indices() {
            let base = i - (i / stride % n) * stride;
            if out.contains(base) {
                continue;
            }
            for a in 0..n {
                out.insert(base + a * stride);
            }
        }
        Ok(out)
    }

    /// `∀x A = ¬∃x ¬A`.
    pub fn forall(&self, var: &str) -> Result<PointSet> {
        Ok(self.complement().exists(var)?.complement())
    }

    /// Drops the last coordinate, keeping a point when some (`any`) or
    /// every (`!any`) extension of it lies in the set.
    pub(crate) fn project_last(&self, any: bool) -> PointSet {
        let target = Arc::new(Space {
            algebra: self.space.algebra.clone(),
            vars: self.space.vars.truncated(),
            size: self.space.size / self.space.n(),
            budget: self.space.budget,
        });
        let block = target.size;
        let n = self.space.n();
        PointSet::from_predicate(&target, |j, _| {
            let mut hits = (0..n).map(|a| self.contains(j + a * block));
            if any {
                hits.any(|b| b)
            } else {
                hits.all(|b| b)
            }
        })
    }

    /// `s_*(A) = s̃⁻¹(A)`: the points `ν` over `s.codomain()` with `ν∘s ∈ A`.
    pub fn pullback(&self, s: &Substitution) -> Result<PointSet> {
        if s.domain() != self.vars() {
            return Err(Error::SpaceMismatch(format!(
                "substitution from {} applied to a set over {}",
                s.domain(),
                self.vars()
            )));
        }
        let target = self.space.over(s.codomain().clone())?;
        let alg = self.algebra().clone();
        let images = s
            .images()
            .iter()
            .map(|t| t.compile(s.codomain(), &alg))
            .collect::<Result<Vec<_>>>()?;
        let mut stack = Vec::new();
        let mut composed = vec![0; images.len()];
        Ok(PointSet::from_predicate(&target, |_, values| {
            for (slot, t) in composed.iter_mut().zip(&images) {
                *slot = t.eval(&alg, values, &mut stack);
            }
            self.contains(self.space.encode_values(&composed))
        }))
    }

    /// Image of the set under `σ` acting coordinatewise.
    pub fn mapped(&self, sigma: &crate::algebra::ElementMap) -> PointSet {
        let mut out = PointSet::empty(&self.space);
        let mut values = Vec::new();
        for i in self.indices() {
            self.space.decode_values(i, &mut values);
            values.iter_mut().for_each(|v| *v = sigma.apply(*v));
            out.insert(self.space.encode_values(&values));
        }
        out
    }

    /// Header line plus lowercase hex of the bit vector, byte `k` holding
    /// indices `8k..8k+8` with index `8k` in the least significant bit.
    pub fn serialize(&self) -> String {
        let mut out = format!("pointset {}", self.algebra().name());
        for v in self.vars().iter() {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
        for b in 0..self.space.size.div_ceil(8) {
            let byte = (self.words[b / 8] >> ((b % 8) * 8)) & 0xff;
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    /// Inverse of [`PointSet::serialize`]; `algebra` must carry the name in
    /// the header.
    pub fn deserialize(text: &str, algebra: &Arc<FiniteAlgebra>) -> Result<PointSet> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Malformed("empty point set".into()))?;
        let mut words = header.split_whitespace();
        if words.next() != Some("pointset") {
            return Err(Error::Malformed("expected `pointset` header".into()));
        }
        let name = words
            .next()
            .ok_or_else(|| Error::Malformed("missing algebra name".into()))?;
        if name != algebra.name() {
            return Err(Error::SpaceMismatch(format!(
                "point set over `{name}` read against `{}`",
                algebra.name()
            )));
        }
        let vars = VariableSet::any(words)?;
        let space = Space::new(algebra.clone(), vars)?;
        let hex = lines.next().unwrap_or("");
        let bytes = space.size.div_ceil(8);
        if hex.len() != 2 * bytes || !hex.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(Error::Malformed(format!("expected {} hex digits", 2 * bytes)));
        }
        let mut set = PointSet::empty(&space);
        for b in 0..bytes {
            let byte = u64::from_str_radix(&hex[2 * b..2 * b + 2], 16).expect("hex digits");
            set.words[b / 8] |= byte << ((b % 8) * 8);
        }
        let before = set.words.clone();
        set.clear_tail();
        if before != set.words {
            return Err(Error::Malformed("bits set beyond the end of the space".into()));
        }
        Ok(set)
    }

    /// Points as `x=1, y=0`, one per entry.
    pub fn describe(&self) -> Vec<String> {
        self.points().map(|p| p.to_string()).collect()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}
