//! Finite algebras over arbitrary finite signatures.
//!
//! Elements are dense indices `0..n` in declared carrier order; labels are
//! only used for input and output. Operation tables are flat and row-major,
//! so the first argument is the most significant digit.

mod search;
mod text;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::OnceLock;

pub use search::{embed_generated, find_pair_isomorphism, is_isomorphic};
pub use text::{parse_algebra, render_algebra};

pub(crate) use search::Product;

use crate::error::{Error, Result};
use crate::{check_budget, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpSymbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of operation symbols. Arity-0 symbols are constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    ops: Vec<OpSymbol>,
}

impl Signature {
    pub fn new<I, S>(ops: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let ops: Vec<OpSymbol> = ops
            .into_iter()
            .map(|(name, arity)| OpSymbol {
                name: name.into(),
                arity,
            })
            .collect();
        let mut seen = HashSet::new();
        for op in &ops {
            if !crate::is_identifier(&op.name) {
                return Err(Error::InvalidAlgebra(format!(
                    "operation name `{}` is not an identifier",
                    op.name
                )));
            }
            if !seen.insert(op.name.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate operation `{}`", op.name)));
            }
        }
        Ok(Signature { ops })
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.name == name)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.ops.iter().find(|op| op.name == name).map(|op| op.arity)
    }

    /// Same symbols with the same arities, in any declaration order.
    pub fn compatible(&self, other: &Signature) -> bool {
        self.ops.len() == other.ops.len() && self.ops.iter().all(|op| other.arity(&op.name) == Some(op.arity))
    }

    /// For each of our operations, the index of the same-named operation in
    /// `other`.
    pub(crate) fn index_map(&self, other: &Signature) -> Result<Vec<usize>> {
        if !self.compatible(other) {
            return Err(Error::SignatureMismatch(format!("{self} vs {other}")));
        }
        Ok(self
            .ops
            .iter()
            .map(|op| other.op_index(&op.name).expect("compatible"))
            .collect())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}/{}", op.name, op.arity)?;
        }
        write!(f, "}}")
    }
}

/// A finite algebra `H`: carrier plus one total table per operation.
#[derive(Debug)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    carrier: Vec<String>,
    tables: Vec<Vec<usize>>,
    automorphisms: OnceLock<Vec<ElementMap>>,
}

impl Clone for FiniteAlgebra {
    fn clone(&self) -> Self {
        FiniteAlgebra {
            name: self.name.clone(),
            signature: self.signature.clone(),
            carrier: self.carrier.clone(),
            tables: self.tables.clone(),
            automorphisms: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.signature == other.signature
            && self.carrier == other.carrier
            && self.tables == other.tables
    }
}

impl Eq for FiniteAlgebra {}

impl FiniteAlgebra {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        carrier: Vec<String>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("empty carrier".into()));
        }
        let mut seen = HashSet::new();
        for label in &carrier {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlgebra(format!("bad element label {label:?}")));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate label `{label}`")));
            }
        }
        if tables.len() != signature.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} tables for {} operations",
                tables.len(),
                signature.len()
            )));
        }
        for (op, table) in signature.ops().iter().zip(&tables) {
            let expected = n
                .checked_pow(op.arity as u32)
                .ok_or_else(|| Error::InvalidAlgebra(format!("table for `{}` is too large", op.name)))?;
            if table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "table for `{}` has {} entries, expected {expected}",
                    op.name,
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidAlgebra(format!(
                    "table for `{}` contains out-of-range element {bad}",
                    op.name
                )));
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            signature,
            carrier,
            tables,
            automorphisms: OnceLock::new(),
        })
    }

    /// Builds the tables by calling `f(op_index, args)` on every argument
    /// tuple in row-major order.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        carrier: Vec<String>,
        mut f: impl FnMut(usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let n = carrier.len();
        let mut tables = Vec::with_capacity(signature.len());
        for (i, op) in signature.ops().iter().enumerate() {
            let mut table = Vec::new();
            for_each_tuple(n, op.arity, |args| table.push(f(i, args)));
            tables.push(table);
        }
        FiniteAlgebra::new(name, signature, carrier, tables)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn label(&self, element: usize) -> &str {
        &self.carrier[element]
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.carrier.iter().position(|l| l == label)
    }

    pub fn table(&self, op: usize) -> &[usize] {
        &self.tables[op]
    }

    pub fn apply(&self, op: usize, args: &[usize]) -> usize {
        let n = self.size();
        let index = args.iter().fold(0, |acc, &a| acc * n + a);
        self.tables[op][index]
    }

    /// `(op index, value)` for every constant symbol.
    pub fn constants(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.signature
            .ops()
            .iter()
            .enumerate()
            .filter(|(_, op)| op.arity == 0)
            .map(|(i, _)| (i, self.tables[i][0]))
    }

    pub fn with_name(&self, name: impl Into<String>) -> FiniteAlgebra {
        let mut copy = self.clone();
        copy.name = name.into();
        copy
    }

    /// Least subset containing `seed` and all constants, closed under every
    /// operation.
    pub fn generated_subalgebra(&self, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
        let product = Product::single(self);
        product
            .close(seed.iter().map(|&a| vec![a]), usize::MAX)
            .expect("closure within a finite carrier")
            .into_iter()
            .map(|t| t[0])
            .collect()
    }

    /// The automorphism group, identity first, the rest in lexicographic
    /// order of the map as a tuple. Computed once and cached.
    pub fn automorphisms(&self) -> &[ElementMap] {
        self.automorphisms.get_or_init(|| search::all_automorphisms(self))
    }

    pub fn direct_power(&self, k: usize) -> Result<FiniteAlgebra> {
        self.direct_power_within(k, DEFAULT_BUDGET)
    }

    /// `H^k` with lexicographically ordered tuples and componentwise
    /// operations. Fails when any table would exceed `budget` entries.
    pub fn direct_power_within(&self, k: usize, budget: usize) -> Result<FiniteAlgebra> {
        if k == 0 {
            return Err(Error::InvalidAlgebra("direct power exponent must be positive".into()));
        }
        let n = self.size();
        let size = check_budget("direct power carrier", n as u128, k, budget)?;
        for op in self.signature.ops() {
            check_budget(
                &format!("direct power table `{}`", op.name),
                size as u128,
                op.arity,
                budget,
            )?;
        }
        let decode = |mut index: usize| -> Vec<usize> {
            let mut digits = vec![0; k];
            for d in digits.iter_mut().rev() {
                *d = index % n;
                index /= n;
            }
            digits
        };
        let encode = |digits: &[usize]| digits.iter().fold(0, |acc, &d| acc * n + d);
        let tuples: Vec<Vec<usize>> = (0..size).map(decode).collect();
        let carrier = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t.iter().map(|&e| self.label(e)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let mut component_args = Vec::new();
        FiniteAlgebra::from_fn(
            format!("{}^{k}", self.name),
            self.signature.clone(),
            carrier,
            |op, args| {
                let result: Vec<usize> = (0..k)
                    .map(|c| {
                        component_args.clear();
                        component_args.extend(args.iter().map(|&a| tuples[a][c]));
                        self.apply(op, &component_args)
                    })
                    .collect();
                encode(&result)
            },
        )
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_algebra(self))
    }
}

/// A total map between carriers, stored as images of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementMap {
    pub map: Vec<usize>,
}

impl ElementMap {
    pub fn new(map: Vec<usize>) -> Self {
        ElementMap { map }
    }

    pub fn identity(n: usize) -> Self {
        ElementMap { map: (0..n).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &ElementMap) -> ElementMap {
        ElementMap {
            map: other.map.iter().map(|&a| self.map[a]).collect(),
        }
    }

    pub fn is_bijective(&self, target_size: usize) -> bool {
        if self.map.len() != target_size {
            return false;
        }
        let mut hit = vec![false; target_size];
        for &b in &self.map {
            if b >= target_size || std::mem::replace(&mut hit[b], true) {
                return false;
            }
        }
        true
    }

    pub fn inverse(&self) -> Option<ElementMap> {
        if !self.is_bijective(self.map.len()) {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        Some(ElementMap { map: inv })
    }

    pub fn render(&self, source: &FiniteAlgebra, target: &FiniteAlgebra) -> String {
        self.map
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{}->{}", source.label(a), target.label(b)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Whether `f` commutes with every operation, constants included.
pub fn is_homomorphism(source: &FiniteAlgebra, target: &FiniteAlgebra, f: &ElementMap) -> Result<bool> {
    let op_map = source.signature().index_map(target.signature())?;
    if f.map.len() != source.size() {
        return Err(Error::Malformed(format!(
            "map has {} entries for a carrier of {}",
            f.map.len(),
            source.size()
        )));
    }
    if f.map.iter().any(|&b| b >= target.size()) {
        return Err(Error::Malformed("map image outside the target carrier".into()));
    }
    let mut image_args = Vec::new();
    let mut ok = true;
    for (op, sym) in source.signature().ops().iter().enumerate() {
        for_each_tuple(source.size(), sym.arity, |args| {
            if !ok {
                return;
            }
            image_args.clear();
            image_args.extend(args.iter().map(|&a| f.map[a]));
            ok = f.map[source.apply(op, args)] == target.apply(op_map[op], &image_args);
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Calls `f` on every tuple in `0..n` of length `k`, row-major.
pub(crate) fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut digits = vec![0usize; k];
    if k > 0 && n == 0 {
        return;
    }
    loop {
        f(&digits);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                break;
            }
            digits[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_is_homomorphism() {
        let z3 = fixtures::z3();
        assert!(is_homomorphism(&z3, &z3, &ElementMap::identity(3)).unwrap());
    }

    #[test]
    fn zero_map_on_z2() {
        let z2 = fixtures::z2();
        assert!(is_homomorphism(&z2, &z2, &ElementMap::new(vec![0, 0])).unwrap());
    }

    #[test]
    fn swap_is_not_homomorphism_on_z3() {
        let z3 = fixtures::z3();
        assert!(!is_homomorphism(&z3, &z3, &ElementMap::new(vec![1, 0, 2])).unwrap());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let z2 = fixtures::z2();
        let l2 = fixtures::l2();
        assert!(matches!(
            is_homomorphism(&z2, &l2, &ElementMap::identity(2)),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn automorphism_groups() {
        assert_eq!(fixtures::z2().automorphisms(), &[ElementMap::identity(2)]);
        assert_eq!(
            fixtures::z3().automorphisms(),
            &[ElementMap::identity(3), ElementMap::new(vec![0, 2, 1])]
        );
        assert_eq!(fixtures::l2().automorphisms(), &[ElementMap::identity(2)]);
        // GL(2,2) acting on the Klein four-group.
        assert_eq!(fixtures::z2_squared().automorphisms().len(), 6);
    }

    #[test]
    fn generated_subalgebras() {
        let z3 = fixtures::z3();
        let z2 = fixtures::z2();
        assert_eq!(z3.generated_subalgebra(&[1].into()), [0, 1, 2].into());
        assert_eq!(z2.generated_subalgebra(&BTreeSet::new()), [0].into());
        let all: BTreeSet<usize> = (0..3).collect();
        assert_eq!(z3.generated_subalgebra(&all), all);
    }

    #[test]
    fn direct_powers() {
        let z2 = fixtures::z2();
        let p1 = z2.direct_power(1).unwrap();
        assert!(is_isomorphic(&p1, &z2).unwrap());

        let p2 = z2.direct_power(2).unwrap();
        assert_eq!(p2.size(), 4);
        let add = p2.signature().op_index("add").unwrap();
        let a = p2.element("(0,1)").unwrap();
        let b = p2.element("(1,1)").unwrap();
        assert_eq!(p2.label(p2.apply(add, &[a, b])), "(1,0)");

        let z3 = fixtures::z3();
        let p = z3.direct_power(2).unwrap();
        assert_eq!(p.size(), 9);
        let neg = p.signature().op_index("neg").unwrap();
        assert_eq!(p.label(p.apply(neg, &[p.element("(1,2)").unwrap()])), "(2,1)");
    }

    #[test]
    fn direct_power_budget() {
        let z3 = fixtures::z3();
        let err = z3.direct_power_within(5, 100).unwrap_err();
        assert!(err.is_resource(), "{err}");
        assert!(err.to_string().contains("243"), "{err}");
    }

    #[test]
    fn invalid_tables_rejected() {
        let sig = Signature::new([("f", 1)]).unwrap();
        let carrier = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteAlgebra::new("x", sig.clone(), carrier.clone(), vec![vec![0]]).is_err());
        assert!(FiniteAlgebra::new("x", sig.clone(), carrier.clone(), vec![vec![0, 2]]).is_err());
        let dup = vec!["a".to_string(), "a".to_string()];
        assert!(FiniteAlgebra::new("x", sig, dup, vec![vec![0, 1]]).is_err());
        assert!(Signature::new([("f", 1), ("f", 2)]).is_err());
    }
}
