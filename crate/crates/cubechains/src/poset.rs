//! Finite poset substrate: strict order with a dimension grading, facet
//! queries, closed subposets and order complexes.

use std::collections::HashMap;
use std::fmt::Display;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Square bit matrix; row i holds the set of elements strictly below i.
#[derive(Clone)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; words * n],
        }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] & (1 << (j % 64)) != 0
    }

    /// row(i) |= row(j), returns true if row(i) changed.
    fn or_row(&mut self, i: usize, j: usize) -> bool {
        let mut changed = false;
        for w in 0..self.words {
            let (a, b) = (i * self.words + w, j * self.words + w);
            let before = self.bits[a];
            let after = before | self.bits[b];
            if after != before {
                self.bits[a] = after;
                changed = true;
            }
        }
        changed
    }

    fn row_indices(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for w in 0..self.words {
            let mut word = self.bits[i * self.words + w];
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                let j = w * 64 + b;
                if j < self.n {
                    out.push(j);
                }
                word &= word - 1;
            }
        }
        out
    }
}

/// A finite graded poset over opaque, hash-comparable cells.
///
/// The covering relation is stored explicitly and the strict-order closure is
/// computed once at construction; queries never recompute reachability.
pub struct FinitePoset<C> {
    cells: Vec<C>,
    index: HashMap<C, usize>,
    dims: Vec<usize>,
    covers: Vec<Vec<usize>>,   // covers[i]: cells covered by cell i
    cocovers: Vec<Vec<usize>>, // cocovers[i]: cells covering cell i
    below: BitMatrix,          // strict reachability
}

impl<C: Clone + Eq + Hash + Ord> FinitePoset<C> {
    /// Build from an arbitrary strict order given as a predicate.
    ///
    /// The predicate must be irreflexive and transitive; `check_strict_order`
    /// verifies this by exhaustive scan and is used by tests at desk scale.
    pub fn from_order<F>(cells: Vec<C>, dim: impl Fn(&C) -> usize, less: F) -> Self
    where
        F: Fn(&C, &C) -> bool,
    {
        let n = cells.len();
        let dims: Vec<usize> = cells.iter().map(&dim).collect();
        let mut below = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && less(&cells[j], &cells[i]) {
                    below.set(i, j);
                }
            }
        }
        Self::finish(cells, dims, below)
    }

    /// Build from explicit covering pairs `(lower, upper)`.
    pub fn from_covers(cells: Vec<C>, dim: impl Fn(&C) -> usize, cover_pairs: &[(C, C)]) -> Self {
        let n = cells.len();
        let dims: Vec<usize> = cells.iter().map(&dim).collect();
        let index: HashMap<C, usize> = cells
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let mut covers = vec![Vec::new(); n];
        for (lo, hi) in cover_pairs {
            covers[index[hi]].push(index[lo]);
        }
        // Transitive closure, processing cells in increasing dimension so each
        // row only depends on already-complete rows.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| dims[i]);
        let mut below = BitMatrix::new(n);
        for &i in &order {
            let lower = covers[i].clone();
            for j in lower {
                below.set(i, j);
                below.or_row(i, j);
            }
        }
        Self::finish(cells, dims, below)
    }

    fn finish(cells: Vec<C>, dims: Vec<usize>, below: BitMatrix) -> Self {
        let n = cells.len();
        let index: HashMap<C, usize> = cells
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let mut covers = vec![Vec::new(); n];
        let mut cocovers = vec![Vec::new(); n];
        for i in 0..n {
            for j in below.row_indices(i) {
                // j covered by i iff nothing sits strictly between them
                let between = below
                    .row_indices(i)
                    .into_iter()
                    .any(|k| k != j && below.get(k, j));
                if !between {
                    covers[i].push(j);
                    cocovers[j].push(i);
                }
            }
        }
        for v in covers.iter_mut().chain(cocovers.iter_mut()) {
            v.sort_unstable();
        }
        FinitePoset {
            cells,
            index,
            dims,
            covers,
            cocovers,
            below,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[C] {
        &self.cells
    }

    pub fn index_of(&self, cell: &C) -> Option<usize> {
        self.index.get(cell).copied()
    }

    pub fn cell(&self, i: usize) -> &C {
        &self.cells[i]
    }

    pub fn dim_of_index(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn dim(&self, cell: &C) -> Result<usize> {
        self.require(cell).map(|i| self.dims[i])
    }

    pub fn less_idx(&self, lo: usize, hi: usize) -> bool {
        self.below.get(hi, lo)
    }

    pub fn less(&self, lo: &C, hi: &C) -> Result<bool> {
        Ok(self.less_idx(self.require(lo)?, self.require(hi)?))
    }

    fn require(&self, cell: &C) -> Result<usize> {
        self.index_of(cell)
            .ok_or_else(|| Error::UnknownCell("cell is not an element of the poset".into()))
    }

    /// Indices of the facets of cell `i`: everything strictly below with
    /// dimension exactly one less.
    pub fn facet_indices(&self, i: usize) -> Vec<usize> {
        let d = self.dims[i];
        self.below
            .row_indices(i)
            .into_iter()
            .filter(|&j| d >= 1 && self.dims[j] == d - 1)
            .collect()
    }

    /// All cells `a` with `a < b` and `dim(a) = dim(b) - 1`.
    pub fn facets(&self, b: &C) -> Result<Vec<C>> {
        let i = self.require(b)?;
        let mut out: Vec<C> = self
            .facet_indices(i)
            .into_iter()
            .map(|j| self.cells[j].clone())
            .collect();
        out.sort();
        Ok(out)
    }

    pub fn cover_indices(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn cocover_indices(&self, i: usize) -> &[usize] {
        &self.cocovers[i]
    }

    /// True iff `q` is downward closed in this poset.
    pub fn is_closed_subposet(&self, q: &[C]) -> Result<bool> {
        let mut member = vec![false; self.len()];
        for c in q {
            member[self.require(c)?] = true;
        }
        for i in 0..self.len() {
            if member[i] {
                for j in self.below.row_indices(i) {
                    if !member[j] {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Downward closure of a subset.
    pub fn down_closure(&self, q: &[C]) -> Result<Vec<C>> {
        let mut member = vec![false; self.len()];
        for c in q {
            let i = self.require(c)?;
            member[i] = true;
            for j in self.below.row_indices(i) {
                member[j] = true;
            }
        }
        let mut out: Vec<C> = (0..self.len())
            .filter(|&i| member[i])
            .map(|i| self.cells[i].clone())
            .collect();
        out.sort();
        Ok(out)
    }

    /// The induced subposet on a subset of cells.
    pub fn induced(&self, q: &[C]) -> Result<FinitePoset<C>> {
        let idx: Vec<usize> = q.iter().map(|c| self.require(c)).collect::<Result<_>>()?;
        let cells: Vec<C> = q.to_vec();
        let mut below = BitMatrix::new(cells.len());
        for (a, &ia) in idx.iter().enumerate() {
            for (b, &ib) in idx.iter().enumerate() {
                if self.below.get(ia, ib) {
                    below.set(a, b);
                }
            }
        }
        let dims = idx.iter().map(|&i| self.dims[i]).collect();
        Ok(Self::finish(cells, dims, below))
    }

    /// Exhaustive irreflexivity/transitivity scan, plus the grading check
    /// that covering pairs drop dimension by at least one.
    pub fn check_strict_order(&self) -> bool {
        let n = self.len();
        for i in 0..n {
            if self.below.get(i, i) {
                return false;
            }
            for j in self.below.row_indices(i) {
                for k in self.below.row_indices(j) {
                    if !self.below.get(i, k) {
                        return false;
                    }
                }
            }
        }
        for i in 0..n {
            for &j in &self.covers[i] {
                if self.dims[j] >= self.dims[i] {
                    return false;
                }
            }
        }
        true
    }

    /// The order complex: one vertex per cell, one simplex per chain.
    ///
    /// `dim_cap` limits simplex dimension (chain length - 1); `None` keeps
    /// every chain. Chains are enumerated by DFS over the Hasse diagram.
    pub fn order_complex(&self, dim_cap: Option<usize>) -> SimplicialComplexRecord
    where
        C: Display,
    {
        let n = self.len();
        let vertex_names = self.cells.iter().map(|c| c.to_string()).collect();
        let mut simplices: Vec<Vec<u32>> = Vec::new();
        // cells sorted by dimension so chains come out ascending in poset order
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (self.dims[i], i));
        let max_len = dim_cap.map(|d| d + 1).unwrap_or(usize::MAX);
        let mut stack: Vec<u32> = Vec::new();
        for &start in &order {
            self.chains_from(start, &mut stack, max_len, &mut simplices);
        }
        SimplicialComplexRecord {
            vertex_names,
            simplices,
        }
    }

    fn chains_from(
        &self,
        top: usize,
        stack: &mut Vec<u32>,
        max_len: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        // extend the chain downward: stack holds indices in decreasing order
        stack.push(top as u32);
        let mut simplex: Vec<u32> = stack.clone();
        simplex.sort_unstable();
        out.push(simplex);
        if stack.len() < max_len {
            for lo in self.below.row_indices(top) {
                self.chains_from(lo, stack, max_len, out);
            }
        }
        stack.pop();
    }
}

/// A simplicial complex listed face by face: the combinatorial output of
/// `order_complex` and the input of the homology oracle.
#[derive(Clone, Debug)]
pub struct SimplicialComplexRecord {
    pub vertex_names: Vec<String>,
    /// Every simplex as a sorted vector of vertex indices; closed under
    /// taking subsets, no duplicates.
    pub simplices: Vec<Vec<u32>>,
}

impl SimplicialComplexRecord {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// Face-closure and duplicate check.
    pub fn validate(&self) -> bool {
        use std::collections::HashSet;
        let set: HashSet<&Vec<u32>> = self.simplices.iter().collect();
        if set.len() != self.simplices.len() {
            return false;
        }
        for s in &self.simplices {
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            if s.len() > 1 {
                for omit in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(omit);
                    if !set.contains(&face) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Euler characteristic, as the alternating simplex count.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .map(|s| if s.len() % 2 == 1 { 1i64 } else { -1i64 })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_poset() -> FinitePoset<&'static str> {
        FinitePoset::from_order(
            vec!["a", "b", "c"],
            |c| match *c {
                "a" => 0,
                "b" => 1,
                _ => 2,
            },
            |x, y| matches!((*x, *y), ("a", "b") | ("a", "c") | ("b", "c")),
        )
    }

    #[test]
    fn facets_on_a_chain() {
        let p = chain_poset();
        assert_eq!(p.facets(&"c").unwrap(), vec!["b"]);
        assert_eq!(p.facets(&"b").unwrap(), vec!["a"]);
        assert!(p.facets(&"a").unwrap().is_empty());
        assert!(p.facets(&"zz").is_err());
    }

    #[test]
    fn closed_subposets() {
        let p = chain_poset();
        assert!(p.is_closed_subposet(&[]).unwrap());
        assert!(p.is_closed_subposet(&["a", "b", "c"]).unwrap());
        assert!(p.is_closed_subposet(&["a", "b"]).unwrap());
        assert!(!p.is_closed_subposet(&["b"]).unwrap());
        // closure of any subset is closed
        let down = p.down_closure(&["b"]).unwrap();
        assert_eq!(down, vec!["a", "b"]);
        assert!(p.is_closed_subposet(&down).unwrap());
    }

    #[test]
    fn order_complex_of_antichain_and_chain() {
        let anti = FinitePoset::from_order(vec![0, 1, 2], |_| 0, |_, _| false);
        let oc = anti.order_complex(None);
        assert_eq!(oc.simplices.len(), 3);
        assert!(oc.simplices.iter().all(|s| s.len() == 1));
        assert!(oc.validate());

        let p = chain_poset();
        let oc = p.order_complex(None);
        // full 2-simplex: 3 vertices, 3 edges, 1 triangle
        assert_eq!(oc.simplices.len(), 7);
        assert!(oc.validate());
        assert_eq!(oc.euler_characteristic(), 1);

        let capped = p.order_complex(Some(1));
        assert_eq!(capped.simplices.len(), 6);
        assert!(capped.validate());
    }

    #[test]
    fn strict_order_scan() {
        let p = chain_poset();
        assert!(p.check_strict_order());
    }

    #[test]
    fn induced_subposet_keeps_order() {
        let p = chain_poset();
        let q = p.induced(&["a", "c"]).unwrap();
        assert!(q.less(&"a", &"c").unwrap());
        assert_eq!(q.len(), 2);
        // "c" has no facet inside the subposet: dim gap
        assert!(q.facets(&"c").unwrap().is_empty());
    }
}
