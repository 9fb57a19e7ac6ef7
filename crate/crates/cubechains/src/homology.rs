//! Brute-force verification layer: integral simplicial homology via Smith
//! normal form, configuration-space counts, and the combined report that
//! decides between the dimension-gap argument and Morse bounds.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::euclid::{enumerate_critical_routes, EuclideanComplex, Point};
use crate::partitions::partition_poset;
use crate::poset::SimplicialComplexRecord;
use crate::wk::critical_inductive;

/// Integral homology ranks with torsion summands per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiReport {
    pub betti: Vec<usize>,
    /// `(dimension, invariant factor)` pairs with factor > 1.
    pub torsion: Vec<(usize, u64)>,
}

/// Integral simplicial homology of an explicit complex, by boundary
/// matrices over the integers and exact Smith reduction.
pub fn betti(rec: &SimplicialComplexRecord, max_simplices: usize) -> Result<BettiReport> {
    if rec.simplices.len() > max_simplices {
        return Err(Error::ResourceCap(format!(
            "{} simplices exceed the cap of {max_simplices}",
            rec.simplices.len()
        )));
    }
    let max_dim = match rec.max_dim() {
        Some(d) => d,
        None => {
            return Ok(BettiReport {
                betti: vec![],
                torsion: vec![],
            })
        }
    };
    let mut by_dim: Vec<Vec<&Vec<u32>>> = vec![Vec::new(); max_dim + 1];
    for s in &rec.simplices {
        by_dim[s.len() - 1].push(s);
    }
    let mut index: Vec<HashMap<&Vec<u32>, usize>> = Vec::with_capacity(max_dim + 1);
    for dim_list in &by_dim {
        index.push(
            dim_list
                .iter()
                .enumerate()
                .map(|(i, s)| (*s, i))
                .collect(),
        );
    }
    // rank and nontrivial factors of each boundary matrix
    let mut ranks = vec![0usize; max_dim + 2];
    let mut factors: Vec<Vec<u64>> = vec![Vec::new(); max_dim + 2];
    for d in 1..=max_dim {
        let mut mat = SparseMatrix::new(by_dim[d - 1].len(), by_dim[d].len());
        for (col, s) in by_dim[d].iter().enumerate() {
            for omit in 0..s.len() {
                let mut face: Vec<u32> = s.to_vec();
                face.remove(omit);
                let row = index[d - 1][&face];
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                mat.insert(row, col, sign);
            }
        }
        let summary = mat.smith_summary()?;
        ranks[d] = summary.rank;
        factors[d] = summary.nontrivial_factors;
    }
    let mut betti = Vec::with_capacity(max_dim + 1);
    for d in 0..=max_dim {
        let n_d = by_dim[d].len();
        betti.push(n_d - ranks[d] - ranks[d + 1]);
    }
    let mut torsion = Vec::new();
    for d in 0..=max_dim {
        for &f in &factors[d + 1] {
            torsion.push((d, f));
        }
    }
    Ok(BettiReport { betti, torsion })
}

struct SmithSummary {
    rank: usize,
    nontrivial_factors: Vec<u64>,
}

/// Sparse integer matrix reduced by unit pivots; whatever remains afterwards
/// is handled densely in arbitrary precision.
struct SparseMatrix {
    rows: Vec<HashMap<usize, i64>>,
    cols: Vec<HashMap<usize, i64>>,
}

impl SparseMatrix {
    fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            rows: vec![HashMap::new(); nrows],
            cols: vec![HashMap::new(); ncols],
        }
    }

    fn insert(&mut self, r: usize, c: usize, v: i64) {
        if v != 0 {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r, v);
        }
    }

    fn set(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r, v);
        }
    }

    fn smith_summary(mut self) -> Result<SmithSummary> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut rank = 0usize;
        let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
        let cost = |rows: &Vec<HashMap<usize, i64>>,
                    cols: &Vec<HashMap<usize, i64>>,
                    r: usize,
                    c: usize| { (rows[r].len() - 1) * (cols[c].len() - 1) };
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, &v) in row {
                if v.abs() == 1 {
                    heap.push(Reverse((cost(&self.rows, &self.cols, r, c), r, c)));
                }
            }
        }
        while let Some(Reverse((claimed, r, c))) = heap.pop() {
            let Some(&v) = self.rows[r].get(&c) else {
                continue;
            };
            if v.abs() != 1 {
                continue;
            }
            let actual = cost(&self.rows, &self.cols, r, c);
            if actual > claimed {
                heap.push(Reverse((actual, r, c)));
                continue;
            }
            // eliminate column c using the unit pivot at (r, c)
            let pivot_row: Vec<(usize, i64)> =
                self.rows[r].iter().map(|(&cc, &vv)| (cc, vv)).collect();
            let col_entries: Vec<(usize, i64)> =
                self.cols[c].iter().map(|(&rr, &vv)| (rr, vv)).collect();
            for (rr, vv) in col_entries {
                if rr == r {
                    continue;
                }
                // factor = vv / v with v = ±1
                let factor = vv * v;
                for &(cc, pv) in &pivot_row {
                    let cur = self.rows[rr].get(&cc).copied().unwrap_or(0);
                    let next = cur
                        .checked_sub(
                            factor
                                .checked_mul(pv)
                                .ok_or_else(|| overflow_error())?,
                        )
                        .ok_or_else(|| overflow_error())?;
                    self.set(rr, cc, next);
                    if next.abs() == 1 {
                        heap.push(Reverse((0, rr, cc)));
                    }
                }
            }
            // detach pivot row and column
            for (cc, _) in pivot_row {
                self.rows[r].remove(&cc);
                self.cols[cc].remove(&r);
            }
            debug_assert!(self.cols[c].is_empty());
            rank += 1;
        }
        // dense residual in arbitrary precision
        let mut live_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| !self.rows[r].is_empty())
            .collect();
        live_rows.sort_unstable();
        if live_rows.is_empty() {
            return Ok(SmithSummary {
                rank,
                nontrivial_factors: vec![],
            });
        }
        let mut live_cols: Vec<usize> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(_, col)| !col.is_empty())
            .map(|(c, _)| c)
            .collect();
        live_cols.sort_unstable();
        let col_pos: HashMap<usize, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (ri, &r) in live_rows.iter().enumerate() {
            for (&c, &v) in &self.rows[r] {
                dense[ri][col_pos[&c]] = BigInt::from(v);
            }
        }
        let dense_factors = dense_smith(&mut dense);
        let mut nontrivial = Vec::new();
        for f in &dense_factors {
            if f.abs() > BigInt::from(1) {
                let as_u64 = f
                    .abs()
                    .try_into()
                    .map_err(|_| Error::ResourceCap("invariant factor exceeds u64".into()))?;
                nontrivial.push(as_u64);
            }
        }
        Ok(SmithSummary {
            rank: rank + dense_factors.len(),
            nontrivial_factors: nontrivial,
        })
    }
}

fn overflow_error() -> Error {
    Error::ResourceCap("entry growth exceeded 64-bit range during reduction".into())
}

/// Textbook Smith reduction over arbitrary-precision integers; returns the
/// nonzero diagonal entries in divisibility order.
fn dense_smith(m: &mut Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut factors = Vec::new();
    let mut t = 0usize;
    while t < nrows.min(ncols) {
        // find the nonzero entry of least magnitude in the working block
        let mut best: Option<(usize, usize)> = None;
        for r in t..nrows {
            for c in t..ncols {
                if !m[r][c].is_zero()
                    && best
                        .map(|(br, bc)| m[r][c].abs() < m[br][bc].abs())
                        .unwrap_or(true)
                {
                    best = Some((r, c));
                }
            }
        }
        let Some((br, bc)) = best else {
            break;
        };
        m.swap(t, br);
        for row in m.iter_mut() {
            row.swap(t, bc);
        }
        // clear row and column t by division steps, restarting when a
        // remainder undercuts the pivot
        loop {
            let mut clean = true;
            for r in (t + 1)..nrows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = &m[r][t] / &m[t][t];
                for c in t..ncols {
                    let sub = &q * &m[t][c];
                    m[r][c] -= sub;
                }
                if !m[r][t].is_zero() {
                    // remainder smaller than pivot: promote it
                    m.swap(t, r);
                    clean = false;
                }
            }
            for c in (t + 1)..ncols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = &m[t][c] / &m[t][t];
                for row in m.iter_mut().take(nrows).skip(t) {
                    let sub = &q * &row[t];
                    row[c] -= sub;
                }
                if !m[t][c].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, c);
                    }
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        // enforce divisibility into the remaining block
        let pivot = m[t][t].clone();
        let mut fixed = false;
        'scan: for r in (t + 1)..nrows {
            for c in (t + 1)..ncols {
                if (&m[r][c] % &pivot) != BigInt::zero() {
                    // fold the offending row into row t and restart this slot
                    for cc in t..ncols {
                        let add = m[r][cc].clone();
                        m[t][cc] += add;
                    }
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }
        factors.push(pivot.abs());
        t += 1;
    }
    factors
}

/// Counts of interleaved-subset certificates for the skeleton of a cube:
/// all moving blocks have exactly `s + 1` labels, tallied by block count.
pub fn conf_counts(n: usize, s: usize) -> Result<BTreeMap<usize, u64>> {
    if s == 0 || s > n {
        return Err(Error::Precondition(format!("need 0 < s <= n, got s={s}, n={n}")));
    }
    assert!(n <= 32, "label sets beyond 32 are not supported");
    let mut memo: HashMap<u32, BTreeMap<usize, u64>> = HashMap::new();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let counts = conf_rec(full, s, &mut memo);
    Ok(counts)
}

fn conf_rec(remaining: u32, s: usize, memo: &mut HashMap<u32, BTreeMap<usize, u64>>) -> BTreeMap<usize, u64> {
    if let Some(hit) = memo.get(&remaining) {
        return hit.clone();
    }
    let mut out: BTreeMap<usize, u64> = BTreeMap::new();
    // choose F as any subset of the remaining labels
    let mut f = remaining;
    loop {
        let rest = remaining & !f;
        if rest == 0 {
            *out.entry(0).or_insert(0) += 1;
        } else if rest.count_ones() as usize >= s + 1 {
            let max_f = 31 - f.leading_zeros() as i32; // -1 impossible here unless f = 0
            let f_max = if f == 0 { -1 } else { max_f };
            // choose E: an (s+1)-subset of rest with max(E) > max(F)
            let rest_bits: Vec<u32> = (0..32).filter(|i| rest >> i & 1 == 1).collect();
            enumerate_subsets(&rest_bits, s + 1, &mut |e_bits| {
                let max_e = *e_bits.last().expect("nonempty") as i32;
                if f_max > max_e {
                    return;
                }
                let mut e_mask = 0u32;
                for &b in e_bits {
                    e_mask |= 1 << b;
                }
                let sub = conf_rec(rest & !e_mask, s, memo);
                for (q, c) in sub {
                    *out.entry(q + 1).or_insert(0) += c;
                }
            });
        }
        if f == 0 {
            break;
        }
        f = (f - 1) & remaining;
    }
    memo.insert(remaining, out.clone());
    out
}

fn enumerate_subsets(items: &[u32], size: usize, f: &mut impl FnMut(&[u32])) {
    fn rec(items: &[u32], size: usize, start: usize, acc: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if acc.len() == size {
            f(acc);
            return;
        }
        let needed = size - acc.len();
        for i in start..items.len() {
            if items.len() - i < needed {
                break;
            }
            acc.push(items[i]);
            rec(items, size, i + 1, acc, f);
            acc.pop();
        }
    }
    rec(items, size, 0, &mut Vec::new(), f);
}

/// Counts of critical routes in the `s`-skeleton of the box whose blocks all
/// have dimension `s + 1`, tallied by block count.
pub fn generalized_conf_counts(k: &Point, s: usize) -> Result<BTreeMap<usize, u64>> {
    if s == 0 {
        return Err(Error::Precondition("need s > 0".into()));
    }
    let skeleton = EuclideanComplex::full_box(k.clone())?.skeleton(s);
    let routes = enumerate_critical_routes(&skeleton);
    let mut out = BTreeMap::new();
    for r in &routes {
        if (1..=r.q()).all(|j| r.block(j).dim() == s + 1) {
            *out.entry(r.q()).or_insert(0u64) += 1;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportMethod {
    /// Critical dimensions have no two consecutive values: homology is free
    /// on the critical cells.
    GapExact,
    /// Morse counts are upper bounds only.
    BoundsOnly,
}

impl ReportMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReportMethod::GapExact => "gap-exact",
            ReportMethod::BoundsOnly => "bounds-only",
        }
    }
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub critical_by_dim: Vec<usize>,
    pub method: ReportMethod,
    /// Betti numbers: derived from critical counts in the gap-exact case,
    /// from the oracle otherwise (when within the cap).
    pub betti: Option<Vec<usize>>,
    pub torsion: Vec<(usize, u64)>,
    pub notes: Vec<String>,
}

/// Homology of the path-space model of `K`: read off the critical cells when
/// the dimension gap allows, otherwise fall back to Morse bounds plus the
/// simplicial oracle at desk scale.
pub fn homology_report(k: &CubicalComplex, max_simplices: usize) -> Result<HomologyReport> {
    let crit = critical_inductive(k);
    let max_dim = crit.keys().max().copied();
    let mut counts = vec![0usize; max_dim.map(|d| d + 1).unwrap_or(0)];
    for (&d, cells) in &crit {
        counts[d] = cells.len();
    }
    let mut notes = Vec::new();
    if counts.is_empty() {
        notes.push("path space is empty".into());
        return Ok(HomologyReport {
            critical_by_dim: counts,
            method: ReportMethod::GapExact,
            betti: Some(vec![]),
            torsion: vec![],
            notes,
        });
    }
    let gap = counts
        .windows(2)
        .all(|w| w[0] == 0 || w[1] == 0);
    if gap {
        notes.push("exact via dimension gap".into());
        return Ok(HomologyReport {
            critical_by_dim: counts.clone(),
            method: ReportMethod::GapExact,
            betti: Some(counts),
            torsion: vec![],
            notes,
        });
    }
    notes.push("bounds only (Morse inequalities)".into());
    let pk = crate::partitions::build_pk(k);
    let poset = partition_poset(pk);
    let cap = counts.len(); // max critical dimension + 1
    let oc = poset.order_complex(Some(cap));
    match betti(&oc, max_simplices) {
        Ok(report) => {
            let top = counts.len() - 1;
            let mut b = report.betti;
            b.truncate(top + 1);
            b.resize(top + 1, 0);
            let torsion: Vec<(usize, u64)> = report
                .torsion
                .into_iter()
                .filter(|(d, _)| *d <= top)
                .collect();
            notes.push("oracle Betti numbers attached".into());
            Ok(HomologyReport {
                critical_by_dim: counts,
                method: ReportMethod::BoundsOnly,
                betti: Some(b),
                torsion,
                notes,
            })
        }
        Err(Error::ResourceCap(msg)) => {
            notes.push(format!("oracle skipped: {msg}"));
            Ok(HomologyReport {
                critical_by_dim: counts,
                method: ReportMethod::BoundsOnly,
                betti: None,
                torsion: vec![],
                notes,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::LabelSet;

    fn record(vertices: usize, simplices: &[&[u32]]) -> SimplicialComplexRecord {
        SimplicialComplexRecord {
            vertex_names: (0..vertices).map(|i| i.to_string()).collect(),
            simplices: simplices.iter().map(|s| s.to_vec()).collect(),
        }
    }

    #[test]
    fn single_vertex() {
        let rec = record(1, &[&[0]]);
        let rep = betti(&rec, 1000).unwrap();
        assert_eq!(rep.betti, vec![1]);
        assert!(rep.torsion.is_empty());
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let rec = record(3, &[&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2]]);
        let rep = betti(&rec, 1000).unwrap();
        assert_eq!(rep.betti, vec![1, 1]);
    }

    #[test]
    fn filled_triangle_is_contractible() {
        let rec = record(
            3,
            &[&[0], &[1], &[2], &[0, 1], &[1, 2], &[0, 2], &[0, 1, 2]],
        );
        let rep = betti(&rec, 1000).unwrap();
        assert_eq!(rep.betti, vec![1, 0, 0]);
    }

    #[test]
    fn two_points() {
        let rec = record(2, &[&[0], &[1]]);
        let rep = betti(&rec, 1000).unwrap();
        assert_eq!(rep.betti, vec![2]);
    }

    #[test]
    fn projective_plane_has_torsion() {
        // the 6-vertex triangulation of RP^2: complete 1-skeleton, every
        // vertex in five triangles, every edge in exactly two
        let triangles: &[&[u32]] = &[
            &[0, 1, 3],
            &[0, 1, 4],
            &[0, 2, 3],
            &[0, 2, 5],
            &[0, 4, 5],
            &[1, 2, 4],
            &[1, 2, 5],
            &[1, 3, 5],
            &[2, 3, 4],
            &[3, 4, 5],
        ];
        let mut simplices: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
        for t in triangles {
            for mask in 1u32..8 {
                let face: Vec<u32> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect();
                simplices.insert(face);
            }
        }
        let rec = SimplicialComplexRecord {
            vertex_names: (0..6).map(|i| i.to_string()).collect(),
            simplices: simplices.into_iter().collect(),
        };
        assert!(rec.validate());
        assert_eq!(rec.euler_characteristic(), 1);
        let rep = betti(&rec, 1000).unwrap();
        assert_eq!(rep.betti, vec![1, 0, 0]);
        assert_eq!(rep.torsion, vec![(1, 2)]);
    }

    #[test]
    fn resource_cap_is_reported() {
        let rec = record(3, &[&[0], &[1], &[2]]);
        assert!(matches!(betti(&rec, 2), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn order_complex_of_two_skeleton_poset() {
        let k = CubicalComplex::full(LabelSet::numeric(3)).skeleton(2);
        let pk = crate::partitions::build_pk(&k);
        let poset = partition_poset(pk);
        let oc = poset.order_complex(None);
        assert!(oc.validate());
        let rep = betti(&oc, 10_000).unwrap();
        assert_eq!(rep.betti, vec![1, 1]);
        assert!(rep.torsion.is_empty());
    }

    #[test]
    fn conf_count_examples() {
        for (n, s) in [(3, 2), (4, 2), (4, 3), (5, 3)] {
            let counts = conf_counts(n, s).unwrap();
            assert_eq!(counts.get(&0), Some(&1), "({n},{s})");
        }
        assert_eq!(conf_counts(3, 2).unwrap().get(&1), Some(&1));
        assert_eq!(conf_counts(4, 3).unwrap().get(&1), Some(&1));
        assert_eq!(conf_counts(5, 3).unwrap().get(&1), Some(&9));
        assert!(conf_counts(3, 0).is_err());
        assert!(conf_counts(3, 4).is_err());
    }

    #[test]
    fn conf_counts_match_sequence_enumeration() {
        use crate::wk::enumerate_critical_sequences;
        for (n, s) in [(3, 2), (4, 2), (4, 3)] {
            let k = CubicalComplex::full(LabelSet::numeric(n)).skeleton(s);
            let seqs = enumerate_critical_sequences(&k);
            let mut by_q: BTreeMap<usize, u64> = BTreeMap::new();
            for cs in &seqs {
                *by_q.entry(cs.q()).or_insert(0) += 1;
            }
            assert_eq!(by_q, conf_counts(n, s).unwrap(), "({n},{s})");
        }
    }

    #[test]
    fn generalized_counts_reduce_to_plain_ones() {
        let counts = generalized_conf_counts(&vec![1, 1, 1], 2).unwrap();
        assert_eq!(counts, conf_counts(3, 2).unwrap());
        let counts = generalized_conf_counts(&vec![1, 1, 1, 1], 3).unwrap();
        assert_eq!(counts, conf_counts(4, 3).unwrap());
    }

    #[test]
    fn generalized_counts_small_box() {
        // k = (2,1), s = 1: every block is a missing edge-pair square
        let counts = generalized_conf_counts(&vec![2, 1], 1).unwrap();
        assert_eq!(counts.get(&0), Some(&1));
        // cross-check against the route enumeration without the filter
        let skeleton = EuclideanComplex::full_box(vec![2, 1]).unwrap().skeleton(1);
        let routes = enumerate_critical_routes(&skeleton);
        let total: u64 = counts.values().sum();
        assert_eq!(total, routes.len() as u64);
    }

    #[test]
    fn report_gap_and_bounds() {
        // full cube: one critical cell, gap-exact
        let k = CubicalComplex::full(LabelSet::numeric(3));
        let rep = homology_report(&k, 10_000).unwrap();
        assert_eq!(rep.method, ReportMethod::GapExact);
        assert_eq!(rep.betti, Some(vec![1]));

        // 2-skeleton of the 3-cube: consecutive dims 0 and 1, bounds only
        let k = k.skeleton(2);
        let rep = homology_report(&k, 10_000).unwrap();
        assert_eq!(rep.method, ReportMethod::BoundsOnly);
        assert_eq!(rep.betti, Some(vec![1, 1]));

        // 3-skeleton of the 4-cube: dims 0 and 2, gap-exact
        let k = CubicalComplex::full(LabelSet::numeric(4)).skeleton(3);
        let rep = homology_report(&k, 10_000).unwrap();
        assert_eq!(rep.method, ReportMethod::GapExact);
        assert_eq!(rep.betti, Some(vec![1, 0, 1]));

        // empty path space
        let k = CubicalComplex::full(LabelSet::numeric(2)).skeleton(0);
        let rep = homology_report(&k, 10_000).unwrap();
        assert!(rep.notes.iter().any(|n| n.contains("empty")));
    }
}
