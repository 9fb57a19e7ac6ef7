//! Discrete vector fields on finite graded posets: gradient checks with
//! explicit cycle witnesses, Morse functions, product fields, and the
//! standard fields on simplices, cubes and permutahedra.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;
use std::hash::Hash;

use crate::cubical::{Cube, Tri};
use crate::error::{Error, Result};
use crate::partitions::{all_partitions, OrderedPartition};
use crate::poset::FinitePoset;

/// A set of pairwise disjoint facet pairs `(a, b)` over a host poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteVectorField<C> {
    vectors: Vec<(C, C)>,
}

impl<C: Clone + Eq + Hash + Ord> DiscreteVectorField<C> {
    pub fn new(mut vectors: Vec<(C, C)>) -> Self {
        vectors.sort();
        DiscreteVectorField { vectors }
    }

    pub fn empty() -> Self {
        DiscreteVectorField {
            vectors: Vec::new(),
        }
    }

    pub fn vectors(&self) -> &[(C, C)] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn map<D: Clone + Eq + Hash + Ord>(&self, f: impl Fn(&C) -> D) -> DiscreteVectorField<D> {
        DiscreteVectorField::new(
            self.vectors
                .iter()
                .map(|(a, b)| (f(a), f(b)))
                .collect(),
        )
    }

    /// Check the defining conditions against a host poset: every pair is a
    /// facet pair and no cell appears twice.
    pub fn validate(&self, poset: &FinitePoset<C>) -> Result<()> {
        let mut seen: HashMap<&C, ()> = HashMap::new();
        for (a, b) in &self.vectors {
            let ia = poset
                .index_of(a)
                .ok_or_else(|| Error::InvalidField("vector tail not in poset".into()))?;
            let ib = poset
                .index_of(b)
                .ok_or_else(|| Error::InvalidField("vector head not in poset".into()))?;
            if !poset.less_idx(ia, ib) || poset.dim_of_index(ia) + 1 != poset.dim_of_index(ib) {
                return Err(Error::InvalidField(
                    "vector is not a facet pair".into(),
                ));
            }
            for c in [a, b] {
                if seen.insert(c, ()).is_some() {
                    return Err(Error::InvalidField(
                        "a cell belongs to two vectors".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Cells in no vector, bucketed by dimension.
    pub fn critical(&self, poset: &FinitePoset<C>) -> BTreeMap<usize, Vec<C>> {
        let mut regular: HashMap<&C, ()> = HashMap::new();
        for (a, b) in &self.vectors {
            regular.insert(a, ());
            regular.insert(b, ());
        }
        let mut out: BTreeMap<usize, Vec<C>> = BTreeMap::new();
        for (i, c) in poset.cells().iter().enumerate() {
            if !regular.contains_key(c) {
                out.entry(poset.dim_of_index(i)).or_default().push(c.clone());
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    }
}

/// Outcome of the acyclicity check: either gradient, or one explicit cycle
/// `(a_1, b_1, a_2, b_2, ..., a_k, b_k)` with `a_1` again a facet of `b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradientVerdict<C> {
    Gradient,
    Cycle(Vec<C>),
}

impl<C> GradientVerdict<C> {
    pub fn is_gradient(&self) -> bool {
        matches!(self, GradientVerdict::Gradient)
    }
}

/// Cycle detection over the flow graph on vectors: vector `(a, b)` steps to
/// `(a', b')` when `a'` is a facet of `b` other than `a`. The field is a
/// gradient field iff this digraph is acyclic.
pub fn is_gradient<C: Clone + Eq + Hash + Ord>(
    poset: &FinitePoset<C>,
    field: &DiscreteVectorField<C>,
) -> Result<GradientVerdict<C>> {
    field.validate(poset)?;
    let nv = field.len();
    let mut lower_of: HashMap<usize, usize> = HashMap::new(); // cell index -> vector id
    let mut tails: Vec<usize> = Vec::with_capacity(nv);
    let mut heads: Vec<usize> = Vec::with_capacity(nv);
    for (vid, (a, b)) in field.vectors().iter().enumerate() {
        let ia = poset.index_of(a).expect("validated");
        let ib = poset.index_of(b).expect("validated");
        lower_of.insert(ia, vid);
        tails.push(ia);
        heads.push(ib);
    }
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for vid in 0..nv {
        for &f in &poset.facet_indices(heads[vid]) {
            if f != tails[vid] {
                if let Some(&w) = lower_of.get(&f) {
                    succ[vid].push(w);
                }
            }
        }
    }
    // iterative DFS with colors; on a back edge, recover the cycle
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color = vec![Color::White; nv];
    let mut parent: Vec<Option<usize>> = vec![None; nv];
    for start in 0..nv {
        if color[start] != Color::White {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color[start] = Color::Gray;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < succ[v].len() {
                let w = succ[v][*next];
                *next += 1;
                match color[w] {
                    Color::White => {
                        color[w] = Color::Gray;
                        parent[w] = Some(v);
                        stack.push((w, 0));
                    }
                    Color::Gray => {
                        // back edge v -> w closes a cycle w -> ... -> v -> w
                        let mut path = vec![v];
                        let mut cur = v;
                        while cur != w {
                            cur = parent[cur].expect("gray chain reaches w");
                            path.push(cur);
                        }
                        path.reverse();
                        let mut witness = Vec::with_capacity(path.len() * 2);
                        for vid in path {
                            let (a, b) = &field.vectors()[vid];
                            witness.push(a.clone());
                            witness.push(b.clone());
                        }
                        return Ok(GradientVerdict::Cycle(witness));
                    }
                    Color::Black => {}
                }
            } else {
                color[v] = Color::Black;
                stack.pop();
            }
        }
    }
    Ok(GradientVerdict::Gradient)
}

/// True iff `h` is a Morse function for the field: strictly decreasing along
/// vectors and non-decreasing along every other facet pair.
pub fn validate_morse_function<C, O>(
    poset: &FinitePoset<C>,
    field: &DiscreteVectorField<C>,
    h: impl Fn(&C) -> O,
) -> bool
where
    C: Clone + Eq + Hash + Ord,
    O: Ord,
{
    let in_field: HashMap<(&C, &C), ()> = field
        .vectors()
        .iter()
        .map(|(a, b)| ((a, b), ()))
        .collect();
    for (ib, b) in poset.cells().iter().enumerate() {
        for ia in poset.facet_indices(ib) {
            let a = poset.cell(ia);
            let ha = h(a);
            let hb = h(b);
            if in_field.contains_key(&(a, b)) {
                if ha <= hb {
                    return false;
                }
            } else if ha > hb {
                return false;
            }
        }
    }
    true
}

/// A value of the weight function on the permutahedron: `(prefix, block)`
/// sizes, compared in the order that is lexicographic with the inverse order
/// on the first coordinate and `2 < 3 < 4 < ... < 1` on the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorseValue {
    pub prefix: i64,
    pub block: u32,
}

impl MorseValue {
    pub fn new(prefix: i64, block: u32) -> Self {
        debug_assert!(block >= 1);
        MorseValue { prefix, block }
    }

    fn key(&self) -> (std::cmp::Reverse<i64>, u64) {
        let t = if self.block == 1 {
            u64::MAX
        } else {
            self.block as u64
        };
        (std::cmp::Reverse(self.prefix), t)
    }
}

impl PartialOrd for MorseValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MorseValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// The weight of a partition whose block containing the maximal label `m`
/// is not the trailing singleton: `(#C, #B)` for `lambda = pi | B | rho`
/// with `m` in `B` and `pi` a partition of `C`.
pub fn permutahedron_weight(lambda: &OrderedPartition, m: usize) -> Result<MorseValue> {
    let mut prefix = 0usize;
    for block in lambda.blocks() {
        if block.contains(&m) {
            return Ok(MorseValue::new(prefix as i64, block.len() as u32));
        }
        prefix += block.len();
    }
    Err(Error::InvalidArgument(format!(
        "label {m} does not occur in the partition"
    )))
}

/// The product field on `P x Q`: vectors move the second coordinate wherever
/// possible and the first only over critical cells of the second field.
pub fn product_field<P, Q>(
    p: &FinitePoset<P>,
    v: &DiscreteVectorField<P>,
    q: &FinitePoset<Q>,
    w: &DiscreteVectorField<Q>,
) -> (FinitePoset<(P, Q)>, DiscreteVectorField<(P, Q)>)
where
    P: Clone + Eq + Hash + Ord,
    Q: Clone + Eq + Hash + Ord,
{
    let cells: Vec<(P, Q)> = p
        .cells()
        .iter()
        .flat_map(|a| q.cells().iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let dim = |c: &(P, Q)| p.dim(&c.0).unwrap() + q.dim(&c.1).unwrap();
    let poset = FinitePoset::from_order(cells, dim, |lo, hi| {
        let p_le = lo.0 == hi.0 || p.less(&lo.0, &hi.0).unwrap();
        let q_le = lo.1 == hi.1 || q.less(&lo.1, &hi.1).unwrap();
        p_le && q_le && lo != hi
    });
    let w_critical: Vec<Q> = w
        .critical(q)
        .into_values()
        .flatten()
        .collect();
    let mut vectors: Vec<((P, Q), (P, Q))> = Vec::new();
    for a in p.cells() {
        for (x, y) in w.vectors() {
            vectors.push(((a.clone(), x.clone()), (a.clone(), y.clone())));
        }
    }
    for (x, y) in v.vectors() {
        for b in &w_critical {
            vectors.push(((x.clone(), b.clone()), (y.clone(), b.clone())));
        }
    }
    (poset, DiscreteVectorField::new(vectors))
}

/// The poset of nonempty subsets of `0..n` (the simplex on `n` labels).
pub fn simplex_poset(n: usize) -> FinitePoset<Vec<usize>> {
    let mut cells = Vec::new();
    for mask in 1u32..(1 << n) {
        cells.push((0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
    }
    FinitePoset::from_order(
        cells,
        |c| c.len() - 1,
        |lo, hi| lo.len() < hi.len() && lo.iter().all(|x| hi.contains(x)),
    )
}

/// The standard field on the simplex: pair `B` with `B + {m}` for nonempty
/// `B` avoiding the maximal label.
pub fn simplex_field(n: usize) -> DiscreteVectorField<Vec<usize>> {
    assert!(n >= 1);
    let m = n - 1;
    let mut vectors = Vec::new();
    for mask in 1u32..(1 << (n - 1)) {
        let b: Vec<usize> = (0..n - 1).filter(|i| mask >> i & 1 == 1).collect();
        let mut bm = b.clone();
        bm.push(m);
        vectors.push((b, bm));
    }
    DiscreteVectorField::new(vectors)
}

/// The poset of cells of the standard cube on `n` labels.
pub fn cube_poset(n: usize) -> FinitePoset<Cube> {
    let cells = Cube::from_word(vec![Tri::Star; n]).all_faces();
    FinitePoset::from_order(cells, |c| c.dim(), |lo, hi| lo != hi && lo.is_face_of(hi))
}

/// The standard field on the cube, built inductively on the maximal label.
pub fn cube_field(n: usize) -> DiscreteVectorField<Cube> {
    if n == 0 {
        return DiscreteVectorField::empty();
    }
    let inner = cube_field(n - 1);
    let mut vectors: Vec<(Cube, Cube)> = inner
        .vectors()
        .iter()
        .map(|(a, b)| (extend(a, Tri::Zero), extend(b, Tri::Zero)))
        .collect();
    for c in Cube::from_word(vec![Tri::Star; n - 1]).all_faces() {
        vectors.push((extend(&c, Tri::One), extend(&c, Tri::Star)));
    }
    DiscreteVectorField::new(vectors)
}

fn extend(c: &Cube, t: Tri) -> Cube {
    let mut word: Vec<Tri> = (0..c.len()).map(|p| c.entry(p)).collect();
    word.push(t);
    Cube::from_word(word)
}

/// The standard gradient field on the permutahedron of `0..n`, built
/// inductively: lift the field on `0..n-1` over partitions ending with the
/// singleton max block, and on the rest pair `pi|m|B|rho` with
/// `pi|m+B|rho`. Its unique critical cell is the all-singletons ascending
/// partition.
pub fn permutahedron_field(n: usize) -> DiscreteVectorField<OrderedPartition> {
    if n == 0 {
        return DiscreteVectorField::empty();
    }
    let m = n - 1;
    let inner = permutahedron_field(n - 1);
    let mut vectors: Vec<(OrderedPartition, OrderedPartition)> = inner
        .vectors()
        .iter()
        .map(|(a, b)| (a.push_block(vec![m]), b.push_block(vec![m])))
        .collect();
    // pi|m|B|rho -> pi|m∪B|rho over all partitions with a singleton m block
    // followed by at least one block
    for lam in all_partitions(n) {
        let blocks = lam.blocks();
        if let Some(pos) = blocks.iter().position(|b| b.as_slice() == [m]) {
            if pos + 1 < blocks.len() {
                let mut merged: Vec<Vec<usize>> = blocks.to_vec();
                let next = merged.remove(pos + 1);
                let target = &mut merged[pos];
                target.extend(next);
                target.sort_unstable();
                vectors.push((lam.clone(), OrderedPartition::new(merged).unwrap()));
            }
        }
    }
    DiscreteVectorField::new(vectors)
}

/// The unique critical cell of the permutahedron field: singletons ascending.
pub fn permutahedron_critical_cell(n: usize) -> OrderedPartition {
    OrderedPartition::new((0..n).map(|i| vec![i]).collect()).unwrap()
}

/// DOT rendering of a field over its host poset: facet edges thin, vectors
/// bold, critical cells doubled.
pub fn field_to_dot<C>(poset: &FinitePoset<C>, field: &DiscreteVectorField<C>) -> String
where
    C: Clone + Eq + Hash + Ord + Display,
{
    use std::fmt::Write;
    let mut out = String::from("digraph field {\n  rankdir=BT;\n");
    let critical: std::collections::BTreeSet<C> = field
        .critical(poset)
        .into_values()
        .flatten()
        .collect();
    for c in poset.cells() {
        let shape = if critical.contains(c) {
            " [peripheries=2]"
        } else {
            ""
        };
        writeln!(out, "  \"{c}\"{shape};").unwrap();
    }
    let vector_set: std::collections::BTreeSet<(&C, &C)> =
        field.vectors().iter().map(|(a, b)| (a, b)).collect();
    for (ib, b) in poset.cells().iter().enumerate() {
        for ia in poset.facet_indices(ib) {
            let a = poset.cell(ia);
            if vector_set.contains(&(a, b)) {
                writeln!(out, "  \"{a}\" -> \"{b}\" [style=bold];").unwrap();
            } else {
                writeln!(out, "  \"{a}\" -> \"{b}\" [arrowhead=none, color=gray];").unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
