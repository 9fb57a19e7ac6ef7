//! The gradient field on the chain poset of a complex and its critical
//! cells, enumerated three independent ways: from the materialized field,
//! by structural recursion on the maximal label, and through explicit
//! critical sequences.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::cubical::{Cube, CubicalComplex, Endpoint};
use crate::error::{Error, Result};
use crate::morse::DiscreteVectorField;
use crate::partitions::{build_pk, partition_in_pk, relabel_from_subset, OrderedPartition};

/// Singleton blocks ascending.
pub fn tau(b: &[usize]) -> OrderedPartition {
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    OrderedPartition::new(sorted.into_iter().map(|x| vec![x]).collect())
        .expect("distinct labels form singleton blocks")
}

/// The maximal element first, then the rest as one block. Needs at least
/// two elements.
pub fn kappa(b: &[usize]) -> Result<OrderedPartition> {
    if b.len() < 2 {
        return Err(Error::InvalidArgument(
            "kappa needs a set with at least two elements".into(),
        ));
    }
    let mut sorted = b.to_vec();
    sorted.sort_unstable();
    let max = sorted.pop().expect("nonempty");
    OrderedPartition::new(vec![vec![max], sorted])
}

/// A triple `(C, B, D)` partitioning the labels below the maximum such that
/// the cube spanning `B + {m}` over prefix `C` is missing while both of its
/// split cubes are present.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BranchingSequence {
    pub c: Vec<usize>,
    pub b: Vec<usize>,
    pub d: Vec<usize>,
}

/// All branching sequences of `K`.
pub fn branching_sequences(k: &CubicalComplex) -> Vec<BranchingSequence> {
    let n = k.labels().len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let m = n - 1;
    let others: Vec<usize> = (0..m).collect();
    // assign each label below m to C, B or D
    let mut assign = vec![0u8; others.len()];
    loop {
        let c: Vec<usize> = others
            .iter()
            .zip(&assign)
            .filter(|(_, &a)| a == 0)
            .map(|(&l, _)| l)
            .collect();
        let b: Vec<usize> = others
            .iter()
            .zip(&assign)
            .filter(|(_, &a)| a == 1)
            .map(|(&l, _)| l)
            .collect();
        let d: Vec<usize> = others
            .iter()
            .zip(&assign)
            .filter(|(_, &a)| a == 2)
            .map(|(&l, _)| l)
            .collect();
        if !b.is_empty() && is_branching(k, &c, &b, &d) {
            out.push(BranchingSequence { c, b, d });
        }
        // next assignment
        let mut i = 0;
        loop {
            if i == assign.len() {
                out.sort();
                return out;
            }
            assign[i] += 1;
            if assign[i] < 3 {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if assign.is_empty() {
            out.sort();
            return out;
        }
    }
}

fn is_branching(k: &CubicalComplex, c: &[usize], b: &[usize], d: &[usize]) -> bool {
    let n = k.labels().len();
    let m = n - 1;
    let mut bm: Vec<usize> = b.to_vec();
    bm.push(m);
    let mut bd: Vec<usize> = b.iter().chain(d.iter()).copied().collect();
    bd.sort_unstable();
    let mut cm: Vec<usize> = c.to_vec();
    cm.push(m);
    !k.contains_parts(c, &bm, d)
        && k.contains_parts(c, &[m], &bd)
        && k.contains_parts(&cm, b, d)
}

/// The gradient field on the chain poset, with its vectors kept apart by
/// origin: the lift over the trailing max block, the merge vectors on the
/// rest, and the product vectors on branch regions.
#[derive(Clone, Debug)]
pub struct WkField {
    pub pk: Vec<OrderedPartition>,
    pub lift: Vec<(OrderedPartition, OrderedPartition)>,
    pub merge: Vec<(OrderedPartition, OrderedPartition)>,
    pub branch: Vec<(OrderedPartition, OrderedPartition)>,
}

impl WkField {
    /// All vectors as one discrete vector field.
    pub fn field(&self) -> DiscreteVectorField<OrderedPartition> {
        DiscreteVectorField::new(
            self.lift
                .iter()
                .chain(&self.merge)
                .chain(&self.branch)
                .cloned()
                .collect(),
        )
    }

    pub fn vector_count(&self) -> usize {
        self.lift.len() + self.merge.len() + self.branch.len()
    }

    /// Critical cells read off as the complement of the paired cells.
    pub fn critical(&self) -> BTreeMap<usize, Vec<OrderedPartition>> {
        let mut paired: std::collections::BTreeSet<&OrderedPartition> =
            std::collections::BTreeSet::new();
        for (a, b) in self.lift.iter().chain(&self.merge).chain(&self.branch) {
            paired.insert(a);
            paired.insert(b);
        }
        let mut out: BTreeMap<usize, Vec<OrderedPartition>> = BTreeMap::new();
        for p in &self.pk {
            if !paired.contains(p) {
                out.entry(p.dim()).or_default().push(p.clone());
            }
        }
        out
    }
}

#[derive(Clone)]
struct FieldData {
    pk: Vec<OrderedPartition>,
    lift: Vec<(OrderedPartition, OrderedPartition)>,
    merge: Vec<(OrderedPartition, OrderedPartition)>,
    branch: Vec<(OrderedPartition, OrderedPartition)>,
}

/// Build the gradient field on the chain poset of `K`.
pub fn build_wk(k: &CubicalComplex) -> WkField {
    let mut memo: HashMap<Vec<Cube>, Rc<FieldData>> = HashMap::new();
    let data = wk_rec(k, &mut memo);
    WkField {
        pk: data.pk.clone(),
        lift: data.lift.clone(),
        merge: data.merge.clone(),
        branch: data.branch.clone(),
    }
}

fn wk_rec(k: &CubicalComplex, memo: &mut HashMap<Vec<Cube>, Rc<FieldData>>) -> Rc<FieldData> {
    let key = k.word_key();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let n = k.labels().len();
    let pk = build_pk(k);
    let mut lift = Vec::new();
    let mut merge = Vec::new();
    let mut branch = Vec::new();
    if n > 0 && !pk.is_empty() {
        let m = n - 1;
        let prefix: Vec<usize> = (0..m).collect();

        // vectors lifted over the trailing singleton max block, present
        // exactly when the final edge is in K
        let final_edge =
            Cube::from_parts(n, &prefix, &[m], &[]).expect("prefix, {m} partition the labels");
        if k.contains(&final_edge) {
            let k0 = k.restrict(&prefix, Endpoint::Zero);
            let sub = wk_rec(&k0, memo);
            for (a, b) in sub.lift.iter().chain(&sub.merge).chain(&sub.branch) {
                lift.push((a.push_block(vec![m]), b.push_block(vec![m])));
            }
        }

        // merge vectors: every cell whose m-block has a second element pairs
        // downward with the split; the split stays in the poset because the
        // poset is downward closed
        for lam in &pk {
            let blocks = lam.blocks();
            let pos = blocks
                .iter()
                .position(|b| b.contains(&m))
                .expect("every cell covers the labels");
            if blocks[pos].len() >= 2 {
                let mut split: Vec<Vec<usize>> = blocks.to_vec();
                let rest: Vec<usize> = split[pos].iter().copied().filter(|&x| x != m).collect();
                split[pos] = vec![m];
                split.insert(pos + 1, rest);
                let nu = OrderedPartition::new(split).expect("split of a valid partition");
                merge.push((nu, lam.clone()));
            }
        }

        // product vectors on each branch region
        for bs in branching_sequences(k) {
            let kc = k.restrict(&bs.c, Endpoint::Zero);
            let kd = k.restrict(&bs.d, Endpoint::One);
            let sub_c = wk_rec(&kc, memo);
            let sub_d = wk_rec(&kd, memo);
            let assemble = |pi: &OrderedPartition, rho: &OrderedPartition| {
                let pi = relabel_from_subset(pi, &bs.c);
                let rho = relabel_from_subset(rho, &bs.d);
                let mut blocks = pi.blocks().to_vec();
                blocks.push(vec![m]);
                blocks.push(bs.b.clone());
                blocks.extend(rho.blocks().iter().cloned());
                OrderedPartition::new(blocks).expect("branch blocks are disjoint")
            };
            let d_vectors: Vec<(OrderedPartition, OrderedPartition)> = sub_d
                .lift
                .iter()
                .chain(&sub_d.merge)
                .chain(&sub_d.branch)
                .cloned()
                .collect();
            for pi in &sub_c.pk {
                for (x, y) in &d_vectors {
                    branch.push((assemble(pi, x), assemble(pi, y)));
                }
            }
            let c_vectors: Vec<(OrderedPartition, OrderedPartition)> = sub_c
                .lift
                .iter()
                .chain(&sub_c.merge)
                .chain(&sub_c.branch)
                .cloned()
                .collect();
            for rho in critical_of(&sub_d) {
                for (x, y) in &c_vectors {
                    branch.push((assemble(x, &rho), assemble(y, &rho)));
                }
            }
        }
    }
    let data = Rc::new(FieldData {
        pk,
        lift,
        merge,
        branch,
    });
    memo.insert(key, data.clone());
    data
}

fn critical_of(data: &FieldData) -> Vec<OrderedPartition> {
    let mut paired: std::collections::BTreeSet<&OrderedPartition> =
        std::collections::BTreeSet::new();
    for (a, b) in data.lift.iter().chain(&data.merge).chain(&data.branch) {
        paired.insert(a);
        paired.insert(b);
    }
    data.pk
        .iter()
        .filter(|p| !paired.contains(p))
        .cloned()
        .collect()
}

/// Critical cells by structural recursion, without materializing the field.
pub fn critical_inductive(k: &CubicalComplex) -> BTreeMap<usize, Vec<OrderedPartition>> {
    let mut memo: HashMap<Vec<Cube>, Rc<Vec<OrderedPartition>>> = HashMap::new();
    let cells = crit_rec(k, &mut memo);
    let mut out: BTreeMap<usize, Vec<OrderedPartition>> = BTreeMap::new();
    for c in cells.iter() {
        out.entry(c.dim()).or_default().push(c.clone());
    }
    for v in out.values_mut() {
        v.sort();
    }
    out
}

fn crit_rec(
    k: &CubicalComplex,
    memo: &mut HashMap<Vec<Cube>, Rc<Vec<OrderedPartition>>>,
) -> Rc<Vec<OrderedPartition>> {
    let key = k.word_key();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let n = k.labels().len();
    let mut out: Vec<OrderedPartition> = Vec::new();
    if n == 0 {
        if k.cube_count() > 0 {
            out.push(OrderedPartition::empty());
        }
    } else {
        let m = n - 1;
        let prefix: Vec<usize> = (0..m).collect();
        let final_edge =
            Cube::from_parts(n, &prefix, &[m], &[]).expect("prefix, {m} partition the labels");
        if k.contains(&final_edge) {
            let k0 = k.restrict(&prefix, Endpoint::Zero);
            for lam in crit_rec(&k0, memo).iter() {
                out.push(lam.push_block(vec![m]));
            }
        }
        for bs in branching_sequences(k) {
            let kc = k.restrict(&bs.c, Endpoint::Zero);
            let kd = k.restrict(&bs.d, Endpoint::One);
            let crit_c = crit_rec(&kc, memo);
            let crit_d = crit_rec(&kd, memo);
            for pi in crit_c.iter() {
                for rho in crit_d.iter() {
                    let pi = relabel_from_subset(pi, &bs.c);
                    let rho = relabel_from_subset(rho, &bs.d);
                    let mut blocks = pi.blocks().to_vec();
                    blocks.push(vec![m]);
                    blocks.push(bs.b.clone());
                    blocks.extend(rho.blocks().iter().cloned());
                    out.push(OrderedPartition::new(blocks).expect("disjoint blocks"));
                }
            }
        }
    }
    out.sort();
    let rc = Rc::new(out);
    memo.insert(key, rc.clone());
    rc
}

/// An explicit certificate for one critical cell: interleaved subsets
/// `(E_1..E_q, F_0..F_q)` of the label set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalSequence {
    e_blocks: Vec<Vec<usize>>,
    f_blocks: Vec<Vec<usize>>,
}

impl CriticalSequence {
    pub fn new(e_blocks: Vec<Vec<usize>>, f_blocks: Vec<Vec<usize>>) -> Result<Self> {
        if f_blocks.len() != e_blocks.len() + 1 {
            return Err(Error::InvalidCertificate(
                "need one more F block than E blocks".into(),
            ));
        }
        let cs = CriticalSequence {
            e_blocks: e_blocks
                .into_iter()
                .map(|mut b| {
                    b.sort_unstable();
                    b
                })
                .collect(),
            f_blocks: f_blocks
                .into_iter()
                .map(|mut b| {
                    b.sort_unstable();
                    b
                })
                .collect(),
        };
        Ok(cs)
    }

    pub fn q(&self) -> usize {
        self.e_blocks.len()
    }

    pub fn e_blocks(&self) -> &[Vec<usize>] {
        &self.e_blocks
    }

    pub fn f_blocks(&self) -> &[Vec<usize>] {
        &self.f_blocks
    }

    /// Σ (#E_j - 2).
    pub fn dim(&self) -> usize {
        self.e_blocks.iter().map(|e| e.len() - 2).sum()
    }

    /// Check all defining conditions against a complex.
    pub fn validate(&self, k: &CubicalComplex) -> Result<()> {
        let n = k.labels().len();
        let mut all: Vec<usize> = self
            .e_blocks
            .iter()
            .chain(&self.f_blocks)
            .flatten()
            .copied()
            .collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidCertificate(
                "blocks do not partition the label set".into(),
            ));
        }
        for e in &self.e_blocks {
            if e.len() < 2 {
                return Err(Error::InvalidCertificate(
                    "every E block needs at least two elements".into(),
                ));
            }
        }
        for (j, e) in self.e_blocks.iter().enumerate() {
            let f_prev = &self.f_blocks[j];
            if !f_prev.is_empty() && f_prev.last() > e.last() {
                return Err(Error::InvalidCertificate(format!(
                    "max F_{j} exceeds max E_{}",
                    j + 1
                )));
            }
        }
        if !partition_in_pk(k, &sigma(self)) {
            return Err(Error::InvalidCertificate(
                "associated cell is not a cube chain of the complex".into(),
            ));
        }
        // the spanning cube of each E block must be missing
        let mut before: Vec<usize> = Vec::new();
        for j in 0..self.q() {
            before.extend(self.f_blocks[j].iter().copied());
            let mut after: Vec<usize> = self.f_blocks[j + 1..].iter().flatten().copied().collect();
            after.extend(self.e_blocks[j + 1..].iter().flatten().copied());
            before.sort_unstable();
            after.sort_unstable();
            if k.contains_parts(&before, &self.e_blocks[j], &after) {
                return Err(Error::InvalidCertificate(format!(
                    "spanning cube of E_{} is present",
                    j + 1
                )));
            }
            before.extend(self.e_blocks[j].iter().copied());
        }
        Ok(())
    }
}

/// The critical cell of a sequence: `tau F_0 | kappa E_1 | tau F_1 | ...`.
pub fn sigma(cs: &CriticalSequence) -> OrderedPartition {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    blocks.extend(tau(&cs.f_blocks[0]).blocks().iter().cloned());
    for (j, e) in cs.e_blocks.iter().enumerate() {
        let k = kappa(e).expect("E blocks have at least two elements");
        blocks.extend(k.blocks().iter().cloned());
        blocks.extend(tau(&cs.f_blocks[j + 1]).blocks().iter().cloned());
    }
    OrderedPartition::new(blocks).expect("interleaving disjoint subsets")
}

/// All critical sequences of `K`, by left-to-right extension: grow the
/// current F block one ascending label at a time (each step an edge of `K`),
/// or close it with an E block whose spanning cube is missing while its two
/// split cubes are present.
pub fn enumerate_critical_sequences(k: &CubicalComplex) -> Vec<CriticalSequence> {
    let n = k.labels().len();
    let mut out = Vec::new();
    if n == 0 {
        if k.cube_count() > 0 {
            out.push(CriticalSequence::new(vec![], vec![vec![]]).unwrap());
        }
        return out;
    }
    assert!(n <= 32, "label sets beyond 32 are not supported");
    let universe: Vec<usize> = (0..n).collect();
    let mut es: Vec<Vec<usize>> = Vec::new();
    let mut fs: Vec<Vec<usize>> = Vec::new();
    let mut f_current: Vec<usize> = Vec::new();
    rec_sequences(
        k,
        &[],
        &universe,
        &mut f_current,
        &mut es,
        &mut fs,
        &mut out,
    );
    out.sort();
    out
}

fn rec_sequences(
    k: &CubicalComplex,
    consumed: &[usize],
    remaining: &[usize],
    f_current: &mut Vec<usize>,
    es: &mut Vec<Vec<usize>>,
    fs: &mut Vec<Vec<usize>>,
    out: &mut Vec<CriticalSequence>,
) {
    if remaining.is_empty() {
        let mut f_all = fs.clone();
        f_all.push(f_current.clone());
        out.push(CriticalSequence {
            e_blocks: es.clone(),
            f_blocks: f_all,
        });
        return;
    }
    // extend the running F block by one label, ascending
    let floor = f_current.last().copied();
    for (i, &f) in remaining.iter().enumerate() {
        if floor.is_some_and(|last| f <= last) {
            continue;
        }
        let mut rest = remaining.to_vec();
        rest.remove(i);
        if !k.contains_parts(consumed, &[f], &rest) {
            continue;
        }
        let mut new_consumed = consumed.to_vec();
        new_consumed.push(f);
        new_consumed.sort_unstable();
        f_current.push(f);
        rec_sequences(k, &new_consumed, &rest, f_current, es, fs, out);
        f_current.pop();
    }
    // or close F and open an E block
    let m = remaining.len();
    if m < 2 {
        return;
    }
    for mask in 1u32..(1 << m) {
        if (mask.count_ones() as usize) < 2 {
            continue;
        }
        let e: Vec<usize> = (0..m)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| remaining[i])
            .collect();
        let rest: Vec<usize> = (0..m)
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| remaining[i])
            .collect();
        let max = *e.last().expect("nonempty");
        if f_current.last().is_some_and(|&last| last > max) {
            continue;
        }
        // the spanning cube must be absent, both split cubes present
        if k.contains_parts(consumed, &e, &rest) {
            continue;
        }
        let e_rest: Vec<usize> = e[..e.len() - 1].to_vec();
        let mut tail: Vec<usize> = e_rest.iter().chain(rest.iter()).copied().collect();
        tail.sort_unstable();
        if !k.contains_parts(consumed, &[max], &tail) {
            continue;
        }
        let mut with_max = consumed.to_vec();
        with_max.push(max);
        with_max.sort_unstable();
        if !k.contains_parts(&with_max, &e_rest, &rest) {
            continue;
        }
        let mut new_consumed: Vec<usize> = consumed.iter().chain(e.iter()).copied().collect();
        new_consumed.sort_unstable();
        es.push(e);
        fs.push(f_current.clone());
        let saved_f = std::mem::take(f_current);
        rec_sequences(k, &new_consumed, &rest, f_current, es, fs, out);
        *f_current = saved_f;
        es.pop();
        fs.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::LabelSet;
    use crate::morse::{is_gradient, permutahedron_critical_cell, permutahedron_field};
    use crate::partitions::{all_partitions, partition_poset};

    fn op(s: &str, n: usize) -> OrderedPartition {
        OrderedPartition::parse(s, &LabelSet::numeric(n)).unwrap()
    }

    #[test]
    fn tau_kappa_examples() {
        assert_eq!(tau(&[2, 0, 1]), op("1|2|3", 3));
        assert_eq!(kappa(&[0, 1, 2]).unwrap(), op("3|1,2", 3));
        assert_eq!(kappa(&[0, 1]).unwrap(), op("2|1", 2));
        assert!(kappa(&[0]).is_err());
    }

    #[test]
    fn branching_examples() {
        let full = CubicalComplex::full(LabelSet::numeric(3));
        assert!(branching_sequences(&full).is_empty());

        let punctured = CubicalComplex::full(LabelSet::numeric(2))
            .remove_cells_upward(&[Cube::parse("**").unwrap()]);
        assert_eq!(
            branching_sequences(&punctured),
            vec![BranchingSequence {
                c: vec![],
                b: vec![0],
                d: vec![]
            }]
        );

        let skeleton = CubicalComplex::full(LabelSet::numeric(3)).skeleton(2);
        assert_eq!(
            branching_sequences(&skeleton),
            vec![BranchingSequence {
                c: vec![],
                b: vec![0, 1],
                d: vec![]
            }]
        );
    }

    #[test]
    fn wk_on_full_cube_is_permutahedron_field() {
        for n in 0..=4 {
            let full = CubicalComplex::full(LabelSet::numeric(n));
            let wk = build_wk(&full);
            assert_eq!(wk.field(), permutahedron_field(n), "n = {n}");
            let crit = wk.critical();
            assert_eq!(
                crit.into_iter().collect::<Vec<_>>(),
                vec![(0, vec![permutahedron_critical_cell(n)])]
            );
        }
    }

    #[test]
    fn wk_on_punctured_square() {
        let k = CubicalComplex::full(LabelSet::numeric(2))
            .remove_cells_upward(&[Cube::parse("**").unwrap()]);
        let wk = build_wk(&k);
        assert_eq!(wk.vector_count(), 0);
        let crit = wk.critical();
        assert_eq!(
            crit,
            BTreeMap::from([(0, vec![op("1|2", 2), op("2|1", 2)])])
        );
    }

    #[test]
    fn wk_on_two_skeleton_of_cube() {
        let k = CubicalComplex::full(LabelSet::numeric(3)).skeleton(2);
        let wk = build_wk(&k);
        let crit = wk.critical();
        assert_eq!(
            crit,
            BTreeMap::from([(0, vec![op("1|2|3", 3)]), (1, vec![op("3|1,2", 3)])])
        );
        let poset = partition_poset(wk.pk.clone());
        assert!(is_gradient(&poset, &wk.field()).unwrap().is_gradient());
    }

    #[test]
    fn critical_inductive_agrees_on_examples() {
        let cases = [
            CubicalComplex::full(LabelSet::numeric(3)),
            CubicalComplex::full(LabelSet::numeric(2))
                .remove_cells_upward(&[Cube::parse("**").unwrap()]),
            CubicalComplex::full(LabelSet::numeric(3)).skeleton(2),
            CubicalComplex::full(LabelSet::numeric(3)).skeleton(1),
            CubicalComplex::empty(LabelSet::numeric(2)),
        ];
        for k in cases {
            let wk = build_wk(&k);
            assert_eq!(wk.critical(), critical_inductive(&k));
        }
    }

    #[test]
    fn sequences_on_full_cube() {
        for n in 0..=4 {
            let full = CubicalComplex::full(LabelSet::numeric(n));
            let seqs = enumerate_critical_sequences(&full);
            assert_eq!(seqs.len(), 1);
            assert_eq!(seqs[0].q(), 0);
            assert_eq!(sigma(&seqs[0]), permutahedron_critical_cell(n));
        }
    }

    #[test]
    fn sequences_on_two_skeleton() {
        let k = CubicalComplex::full(LabelSet::numeric(3)).skeleton(2);
        let seqs = enumerate_critical_sequences(&k);
        assert_eq!(seqs.len(), 2);
        let sigmas: Vec<OrderedPartition> = seqs.iter().map(sigma).collect();
        assert!(sigmas.contains(&op("1|2|3", 3)));
        assert!(sigmas.contains(&op("3|1,2", 3)));
        let dims: Vec<usize> = seqs.iter().map(|s| s.dim()).collect();
        assert_eq!(dims.iter().sum::<usize>(), 1);
        for s in &seqs {
            s.validate(&k).unwrap();
            assert_eq!(sigma(s).dim(), s.dim());
        }
    }

    #[test]
    fn sigma_examples() {
        let cs = CriticalSequence::new(vec![], vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(sigma(&cs), op("1|2|3", 3));
        let cs = CriticalSequence::new(vec![vec![0, 1, 2]], vec![vec![], vec![]]).unwrap();
        assert_eq!(sigma(&cs), op("3|1,2", 3));
        let cs = CriticalSequence::new(vec![vec![0, 2]], vec![vec![1], vec![]]).unwrap();
        assert_eq!(sigma(&cs), op("2|3|1", 3));
    }

    #[test]
    fn skeleton_sequences_have_uniform_block_size() {
        // s-skeleton of the n-cube: every E block has s+1 elements
        for (n, s) in [(3, 2), (4, 2), (4, 3)] {
            let k = CubicalComplex::full(LabelSet::numeric(n)).skeleton(s);
            for cs in enumerate_critical_sequences(&k) {
                for e in cs.e_blocks() {
                    assert_eq!(e.len(), s + 1);
                }
            }
        }
    }

    #[test]
    fn triple_agreement_small_random() {
        use crate::random::random_subcomplex;
        for seed in 0..40 {
            let k = random_subcomplex(&LabelSet::numeric(3), seed, 0.5);
            let wk = build_wk(&k);
            let a = wk.critical();
            let b = critical_inductive(&k);
            let mut c: BTreeMap<usize, Vec<OrderedPartition>> = BTreeMap::new();
            for cs in enumerate_critical_sequences(&k) {
                let cell = sigma(&cs);
                assert_eq!(cell.dim(), cs.dim());
                c.entry(cs.dim()).or_default().push(cell);
            }
            for v in c.values_mut() {
                v.sort();
            }
            assert_eq!(a, b, "seed {seed}");
            assert_eq!(a, c, "seed {seed}");
            let poset = partition_poset(wk.pk.clone());
            assert!(
                is_gradient(&poset, &wk.field()).unwrap().is_gradient(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn empty_chain_poset_yields_empty_outputs() {
        let k = CubicalComplex::full(LabelSet::numeric(2)).skeleton(0);
        assert!(build_pk(&k).is_empty());
        let wk = build_wk(&k);
        assert_eq!(wk.vector_count(), 0);
        assert!(wk.critical().is_empty());
        assert!(enumerate_critical_sequences(&k).is_empty());
        assert!(critical_inductive(&k).is_empty());
    }

    #[test]
    fn weight_behaviour_on_field_parts() {
        use crate::morse::permutahedron_weight;
        // on branch vectors the weight is conserved; merge vectors only ever
        // decrease it
        let k = CubicalComplex::full(LabelSet::numeric(4)).skeleton(2);
        let wk = build_wk(&k);
        let m = 3;
        for (a, b) in &wk.branch {
            assert_eq!(
                permutahedron_weight(a, m).unwrap(),
                permutahedron_weight(b, m).unwrap()
            );
        }
        for (a, b) in &wk.merge {
            let wa = permutahedron_weight(a, m).unwrap();
            let wb = permutahedron_weight(b, m).unwrap();
            assert!(wa >= wb);
        }
    }
}
