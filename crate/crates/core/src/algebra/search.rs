//! Closure under componentwise operations and backtracking isomorphism search.

use std::collections::HashMap;

use super::{ElementMap, FiniteAlgebra};
use crate::error::{Error, Result};

/// A direct product of finitely many algebras of one signature, evaluated
/// lazily: elements are tuples, one component per factor.
pub(crate) struct Product<'a> {
    factors: Vec<&'a FiniteAlgebra>,
    /// `op_maps[f][op]` is the index in factor `f` of the first factor's `op`.
    op_maps: Vec<Vec<usize>>,
}

impl<'a> Product<'a> {
    pub fn new(factors: Vec<&'a FiniteAlgebra>) -> Result<Self> {
        assert!(!factors.is_empty());
        let base = factors[0].signature();
        let op_maps = factors
            .iter()
            .map(|f| base.index_map(f.signature()))
            .collect::<Result<_>>()?;
        Ok(Product { factors, op_maps })
    }

    pub fn single(algebra: &'a FiniteAlgebra) -> Self {
        Product {
            factors: vec![algebra],
            op_maps: vec![(0..algebra.signature().len()).collect()],
        }
    }

    pub fn power(algebra: &'a FiniteAlgebra, k: usize) -> Self {
        Product {
            factors: vec![algebra; k],
            op_maps: vec![(0..algebra.signature().len()).collect(); k],
        }
    }

    fn width(&self) -> usize {
        self.factors.len()
    }

    fn apply(&self, op: usize, args: &[&[usize]], scratch: &mut Vec<usize>) -> Vec<usize> {
        (0..self.width())
            .map(|c| {
                scratch.clear();
                scratch.extend(args.iter().map(|t| t[c]));
                self.factors[c].apply(self.op_maps[c][op], scratch)
            })
            .collect()
    }

    /// Subalgebra generated by `gens` and the constants, in discovery order.
    /// `None` once more than `limit` elements appear.
    pub fn close(&self, gens: impl IntoIterator<Item = Vec<usize>>, limit: usize) -> Option<Vec<Vec<usize>>> {
        let mut elems: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut push = |t: Vec<usize>, elems: &mut Vec<Vec<usize>>| -> bool {
            if !index.contains_key(&t) {
                index.insert(t.clone(), elems.len());
                elems.push(t);
            }
            elems.len() <= limit
        };
        let mut scratch = Vec::new();
        let ops = self.factors[0].signature().ops();
        for g in gens {
            if !push(g, &mut elems) {
                return None;
            }
        }
        for (op, sym) in ops.iter().enumerate() {
            if sym.arity == 0 && !push(self.apply(op, &[], &mut scratch), &mut elems) {
                return None;
            }
        }
        let mut start = 0;
        while start < elems.len() {
            let end = elems.len();
            for (op, sym) in ops.iter().enumerate() {
                if sym.arity == 0 {
                    continue;
                }
                let mut fresh = Vec::new();
                super::for_each_tuple(end, sym.arity, |idx| {
                    if idx.iter().all(|&i| i < start) {
                        return;
                    }
                    let args: Vec<&[usize]> = idx.iter().map(|&i| elems[i].as_slice()).collect();
                    fresh.push(self.apply(op, &args, &mut scratch));
                });
                for t in fresh {
                    if !push(t, &mut elems) {
                        return None;
                    }
                }
            }
            start = end;
        }
        Some(elems)
    }
}

/// Closes the relation `pairs ⊆ H1 × H2` under the operations and returns
/// it as a partial injective map, or `None` if the closure is not the graph
/// of an injective function.
fn close_pairs(
    product: &Product<'_>,
    n1: usize,
    n2: usize,
    pairs: impl IntoIterator<Item = (usize, usize)>,
) -> Option<Vec<Option<usize>>> {
    let closed = product.close(pairs.into_iter().map(|(a, b)| vec![a, b]), n1 * n2)?;
    let mut forward = vec![None; n1];
    let mut backward = vec![None; n2];
    for t in closed {
        let (a, b) = (t[0], t[1]);
        match (forward[a], backward[b]) {
            (None, None) => {
                forward[a] = Some(b);
                backward[b] = Some(a);
            }
            (Some(x), Some(y)) if x == b && y == a => {}
            _ => return None,
        }
    }
    Some(forward)
}

struct IsoSearch<'a> {
    product: Product<'a>,
    n: usize,
    all: bool,
    found: Vec<ElementMap>,
}

impl IsoSearch<'_> {
    fn run(&mut self, partial: Vec<Option<usize>>) {
        let pairs = partial.iter().enumerate().filter_map(|(a, b)| b.map(|b| (a, b)));
        let Some(extended) = close_pairs(&self.product, self.n, self.n, pairs) else {
            return;
        };
        let Some(next) = extended.iter().position(Option::is_none) else {
            self.found.push(ElementMap::new(
                extended.into_iter().map(|b| b.expect("complete")).collect(),
            ));
            return;
        };
        let mut used = vec![false; self.n];
        for b in extended.iter().flatten() {
            used[*b] = true;
        }
        for candidate in (0..self.n).filter(|&b| !used[b]) {
            let mut branch = extended.clone();
            branch[next] = Some(candidate);
            self.run(branch);
            if !self.all && !self.found.is_empty() {
                return;
            }
        }
    }
}

pub(super) fn all_automorphisms(algebra: &FiniteAlgebra) -> Vec<ElementMap> {
    let n = algebra.size();
    let mut search = IsoSearch {
        product: Product::power(algebra, 2),
        n,
        all: true,
        found: Vec::new(),
    };
    search.run(vec![None; n]);
    search.found
}

/// An isomorphism `H1 → H2` sending `a[i] ↦ b[i]`, if one exists.
pub fn find_pair_isomorphism(
    h1: &FiniteAlgebra,
    a: &[usize],
    h2: &FiniteAlgebra,
    b: &[usize],
) -> Result<Option<ElementMap>> {
    if a.len() != b.len() {
        return Err(Error::Malformed(format!(
            "tuples of different lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let product = Product::new(vec![h1, h2])?;
    if h1.size() != h2.size() {
        return Ok(None);
    }
    let n = h1.size();
    let mut partial = vec![None; n];
    for (&x, &y) in a.iter().zip(b) {
        match partial[x] {
            None => partial[x] = Some(y),
            Some(z) if z == y => {}
            Some(_) => return Ok(None),
        }
    }
    let mut search = IsoSearch {
        product,
        n,
        all: false,
        found: Vec::new(),
    };
    search.run(partial);
    Ok(search.found.pop())
}

pub fn is_isomorphic(h1: &FiniteAlgebra, h2: &FiniteAlgebra) -> Result<bool> {
    Ok(find_pair_isomorphism(h1, &[], h2, &[])?.is_some())
}

/// Images `b` of `seed` such that `seed[i] ↦ b[i]` extends to an embedding of
/// the subalgebra generated by `seed` into `h2`.
pub fn embed_generated(h1: &FiniteAlgebra, seed: &[usize], h2: &FiniteAlgebra) -> Result<Option<Vec<usize>>> {
    let product = Product::new(vec![h1, h2])?;
    let mut found = None;
    super::for_each_tuple(h2.size(), seed.len(), |b| {
        if found.is_some() {
            return;
        }
        let pairs = seed.iter().copied().zip(b.iter().copied());
        if close_pairs(&product, h1.size(), h2.size(), pairs).is_some() {
            found = Some(b.to_vec());
        }
    });
    Ok(found)
}
