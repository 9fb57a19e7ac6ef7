//! Euclidean cubical complexes: unit-integer-corner cubes inside a box, the
//! embedding into a standard cube, multiset partitions, and critical routes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::cubical::{Cube, CubicalComplex, LabelSet, Tri};
use crate::error::{Error, Result};
use crate::partitions::OrderedPartition;
use crate::wk::CriticalSequence;

pub type Point = Vec<i32>;

/// The axis-aligned cube `[a, b]` with `0 <= b_i - a_i <= 1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryCube {
    a: Point,
    b: Point,
}

impl fmt::Debug for ElementaryCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?},{:?}]", self.a, self.b)
    }
}

impl ElementaryCube {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidArgument("corner dimensions differ".into()));
        }
        for (x, y) in a.iter().zip(&b) {
            if !(0..=1).contains(&(y - x)) {
                return Err(Error::InvalidArgument(format!(
                    "not an elementary cube: corners {a:?}, {b:?}"
                )));
            }
        }
        Ok(ElementaryCube { a, b })
    }

    pub fn vertex(p: Point) -> Self {
        ElementaryCube { a: p.clone(), b: p }
    }

    pub fn low(&self) -> &Point {
        &self.a
    }

    pub fn high(&self) -> &Point {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a
            .iter()
            .zip(&self.b)
            .filter(|(x, y)| *y - *x == 1)
            .count()
    }

    /// Axes along which the cube extends, ascending.
    pub fn directions(&self) -> Vec<usize> {
        (0..self.a.len())
            .filter(|&i| self.b[i] - self.a[i] == 1)
            .collect()
    }

    /// Sub-cubes of all dimensions, the cube itself included.
    pub fn sub_cubes(&self) -> Vec<ElementaryCube> {
        let dirs = self.directions();
        let mut out = Vec::with_capacity(3usize.pow(dirs.len() as u32));
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        fn rec(
            dirs: &[usize],
            k: usize,
            a: &mut Point,
            b: &mut Point,
            out: &mut Vec<ElementaryCube>,
        ) {
            if k == dirs.len() {
                out.push(ElementaryCube {
                    a: a.clone(),
                    b: b.clone(),
                });
                return;
            }
            let i = dirs[k];
            // keep the extent
            rec(dirs, k + 1, a, b, out);
            // collapse low
            b[i] -= 1;
            rec(dirs, k + 1, a, b, out);
            b[i] += 1;
            // collapse high
            a[i] += 1;
            rec(dirs, k + 1, a, b, out);
            a[i] -= 1;
        }
        rec(&dirs, 0, &mut a, &mut b, &mut out);
        out
    }

    pub fn contains_cube(&self, other: &ElementaryCube) -> bool {
        self.a
            .iter()
            .zip(&other.a)
            .all(|(outer, inner)| inner >= outer)
            && self
                .b
                .iter()
                .zip(&other.b)
                .all(|(outer, inner)| inner <= outer)
    }
}

/// A face-closed family of elementary cubes inside the box `[0, k]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EuclideanComplex {
    k: Point,
    cubes: BTreeSet<ElementaryCube>,
}

impl EuclideanComplex {
    /// The full box `[0, k]`.
    pub fn full_box(k: Point) -> Result<Self> {
        check_corner(&k)?;
        let mut cubes = BTreeSet::new();
        let mut a = vec![0; k.len()];
        loop {
            // at corner a, add every cube extending by 0/1 per axis within the box
            let n = k.len();
            for mask in 0..(1u32 << n) {
                let b: Point = (0..n)
                    .map(|i| a[i] + ((mask >> i) & 1) as i32)
                    .collect();
                if b.iter().zip(&k).all(|(x, lim)| x <= lim) {
                    cubes.insert(ElementaryCube { a: a.clone(), b });
                }
            }
            if !increment(&mut a, &k) {
                break;
            }
        }
        Ok(EuclideanComplex { k, cubes })
    }

    /// Face closure of an explicit cube list.
    pub fn from_cubes(k: Point, cubes: Vec<ElementaryCube>) -> Result<Self> {
        check_corner(&k)?;
        let mut set = BTreeSet::new();
        for c in cubes {
            if c.low().len() != k.len() {
                return Err(Error::InvalidArgument("cube dimension mismatch".into()));
            }
            if c.low().iter().any(|&x| x < 0)
                || c.high().iter().zip(&k).any(|(x, lim)| x > lim)
            {
                return Err(Error::InvalidArgument(format!(
                    "cube {c:?} lies outside the box"
                )));
            }
            set.extend(c.sub_cubes());
        }
        Ok(EuclideanComplex { k, cubes: set })
    }

    /// The box minus the listed cells and everything containing them.
    pub fn box_minus(k: Point, removed: &[ElementaryCube]) -> Result<Self> {
        let full = Self::full_box(k)?;
        Ok(full.remove_cells_upward(removed))
    }

    pub fn remove_cells_upward(&self, removed: &[ElementaryCube]) -> EuclideanComplex {
        let cubes = self
            .cubes
            .iter()
            .filter(|c| !removed.iter().any(|r| c.contains_cube(r)))
            .cloned()
            .collect();
        EuclideanComplex {
            k: self.k.clone(),
            cubes,
        }
    }

    pub fn corner(&self) -> &Point {
        &self.k
    }

    pub fn ambient_dim(&self) -> usize {
        self.k.len()
    }

    pub fn cube_count(&self) -> usize {
        self.cubes.len()
    }

    pub fn cubes(&self) -> impl Iterator<Item = &ElementaryCube> {
        self.cubes.iter()
    }

    pub fn contains(&self, c: &ElementaryCube) -> bool {
        self.cubes.contains(c)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cubes.iter().map(|c| c.dim()).max()
    }

    /// Cubes of dimension at most `q`.
    pub fn skeleton(&self, q: usize) -> EuclideanComplex {
        EuclideanComplex {
            k: self.k.clone(),
            cubes: self.cubes.iter().filter(|c| c.dim() <= q).cloned().collect(),
        }
    }

    pub fn validate(&self) -> bool {
        self.cubes
            .iter()
            .all(|c| c.sub_cubes().iter().all(|f| self.cubes.contains(f)))
    }

    /// True iff the whole `(n-1)`-skeleton of the box is present.
    pub fn contains_box_skeleton(&self) -> Result<bool> {
        let n = self.ambient_dim();
        if n == 0 {
            return Ok(true);
        }
        let full = EuclideanComplex::full_box(self.k.clone())?;
        let ok = full
            .cubes()
            .filter(|c| c.dim() <= n - 1)
            .all(|c| self.contains(c));
        Ok(ok)
    }
}

fn check_corner(k: &Point) -> Result<()> {
    if k.iter().any(|&x| x < 0) {
        return Err(Error::InvalidArgument("box corner must be >= 0".into()));
    }
    Ok(())
}

fn increment(a: &mut Point, k: &Point) -> bool {
    for i in 0..a.len() {
        if a[i] < k[i] {
            a[i] += 1;
            return true;
        }
        a[i] = 0;
    }
    false
}

/// The label set of the box: axis levels `(i, 1..=k_i)` in axis-major order,
/// named `i.j` with 1-based axis and level.
pub fn box_label_set(k: &Point) -> LabelSet {
    let mut names = Vec::new();
    for (i, &ki) in k.iter().enumerate() {
        for j in 1..=ki {
            names.push(format!("{}.{}", i + 1, j));
        }
    }
    LabelSet::new(names).expect("axis-level names are distinct")
}

fn axis_offsets(k: &Point) -> Vec<usize> {
    let mut out = Vec::with_capacity(k.len());
    let mut acc = 0usize;
    for &ki in k {
        out.push(acc);
        acc += ki as usize;
    }
    out
}

/// The word of one elementary cube under the box embedding.
pub fn embed_cube(c: &ElementaryCube, k: &Point) -> Result<Cube> {
    if c.low().len() != k.len() {
        return Err(Error::InvalidArgument("cube dimension mismatch".into()));
    }
    if c.low().iter().any(|&x| x < 0) || c.high().iter().zip(k).any(|(x, lim)| x > lim) {
        return Err(Error::InvalidArgument(format!(
            "cube {c:?} lies outside the box"
        )));
    }
    let mut word = Vec::new();
    for (i, &ki) in k.iter().enumerate() {
        let (a, b) = (c.low()[i], c.high()[i]);
        for j in 1..=ki {
            word.push(if b < j {
                Tri::Zero
            } else if j <= a {
                Tri::One
            } else {
                Tri::Star
            });
        }
    }
    Ok(Cube::from_word(word))
}

/// The embedded complex over the box label set.
pub fn embed(k_complex: &EuclideanComplex) -> Result<CubicalComplex> {
    let labels = box_label_set(k_complex.corner());
    let words = k_complex
        .cubes()
        .map(|c| embed_cube(c, k_complex.corner()))
        .collect::<Result<Vec<_>>>()?;
    CubicalComplex::new(labels, words)
}

/// The image of the full box under the embedding.
pub fn box_complex(k: &Point) -> CubicalComplex {
    embed(&EuclideanComplex::full_box(k.clone()).expect("valid corner")).expect("box embeds")
}

/// The minimal line from `a` to `b`: the staircase that exhausts axis 1
/// first and the last axis last, so the segment along axis `i` fixes the
/// earlier axes at their final values and the later axes at their starting
/// values.
pub fn minimal_line(a: &Point, b: &Point) -> Result<EuclideanComplex> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x > y) {
        return Err(Error::InvalidArgument(format!(
            "need a <= b, got {a:?}, {b:?}"
        )));
    }
    let mut cubes = vec![ElementaryCube::vertex(a.clone())];
    let mut cur = a.clone();
    for i in 0..a.len() {
        while cur[i] < b[i] {
            let mut next = cur.clone();
            next[i] += 1;
            cubes.push(ElementaryCube::new(cur.clone(), next.clone())?);
            cubes.push(ElementaryCube::vertex(next.clone()));
            cur = next;
        }
    }
    EuclideanComplex::from_cubes(b.clone(), cubes)
}

/// True iff every cell of the minimal line from `a` to `b` lies in `K`.
fn line_inside(k: &EuclideanComplex, a: &Point, b: &Point) -> bool {
    if a.iter().zip(b).any(|(x, y)| x > y) {
        return false;
    }
    if !k.contains(&ElementaryCube::vertex(a.clone())) {
        return false;
    }
    let mut cur = a.clone();
    for i in 0..a.len() {
        while cur[i] < b[i] {
            let mut next = cur.clone();
            next[i] += 1;
            let edge = ElementaryCube::new(cur.clone(), next.clone()).expect("unit step");
            if !k.contains(&edge) {
                return false;
            }
            cur = next;
        }
    }
    true
}

/// A geometric certificate for one critical cell: corner points
/// `b^0 = 0, a^1, b^1, ..., a^q, b^q, a^{q+1} = k` where each `[a^j, b^j]`
/// is a missing cube reached by minimal lines.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalRoute {
    /// `a^1, ..., a^{q+1}`.
    a_points: Vec<Point>,
    /// `b^0, ..., b^q`.
    b_points: Vec<Point>,
}

impl CriticalRoute {
    pub fn new(a_points: Vec<Point>, b_points: Vec<Point>) -> Result<Self> {
        if a_points.len() != b_points.len() || a_points.is_empty() {
            return Err(Error::InvalidCertificate(
                "need points a^1..a^{q+1} and b^0..b^q".into(),
            ));
        }
        Ok(CriticalRoute { a_points, b_points })
    }

    pub fn q(&self) -> usize {
        self.a_points.len() - 1
    }

    pub fn a_points(&self) -> &[Point] {
        &self.a_points
    }

    pub fn b_points(&self) -> &[Point] {
        &self.b_points
    }

    /// The `j`-th missing block `[a^j, b^j]`, 1-based.
    pub fn block(&self, j: usize) -> ElementaryCube {
        ElementaryCube::new(self.a_points[j - 1].clone(), self.b_points[j].clone())
            .expect("route blocks are elementary")
    }

    /// Σ (dim[a^j, b^j] - 2).
    pub fn dim(&self) -> usize {
        (1..=self.q()).map(|j| self.block(j).dim() - 2).sum()
    }

    /// Check the route and criticality conditions in `K`.
    pub fn validate(&self, k: &EuclideanComplex) -> Result<()> {
        let n = k.ambient_dim();
        let q = self.q();
        if self.b_points[0] != vec![0; n] {
            return Err(Error::InvalidCertificate("b^0 must be the origin".into()));
        }
        if self.a_points[q] != *k.corner() {
            return Err(Error::InvalidCertificate(
                "a^{q+1} must be the box corner".into(),
            ));
        }
        for j in 0..=q {
            if self.b_points[j].iter().zip(&self.a_points[j]).any(|(b, a)| b > a) {
                return Err(Error::InvalidCertificate(format!(
                    "b^{j} exceeds a^{}",
                    j + 1
                )));
            }
        }
        for j in 1..=q {
            let block = ElementaryCube::new(self.a_points[j - 1].clone(), self.b_points[j].clone())
                .map_err(|_| Error::InvalidCertificate(format!("block {j} is not elementary")))?;
            if block.dim() == 0 {
                return Err(Error::InvalidCertificate(format!("block {j} is a vertex")));
            }
            if k.contains(&block) {
                return Err(Error::InvalidCertificate(format!(
                    "block {j} is present in the complex"
                )));
            }
            let dirs = block.directions();
            let m = *dirs.last().expect("positive dimension");
            let mut mid = block.low().clone();
            mid[m] += 1;
            let first = ElementaryCube::new(block.low().clone(), mid.clone()).expect("unit edge");
            let second = ElementaryCube::new(mid, block.high().clone()).expect("elementary");
            if !k.contains(&first) || !k.contains(&second) {
                return Err(Error::InvalidCertificate(format!(
                    "split cubes of block {j} are not both present"
                )));
            }
            // axes beyond the top direction of the block may not move on the
            // approach segment; this is what matches the max condition on
            // critical sequences
            for i in (m + 1)..n {
                if self.a_points[j - 1][i] != self.b_points[j - 1][i] {
                    return Err(Error::InvalidCertificate(format!(
                        "axis {i} moves before block {j} above its top direction"
                    )));
                }
            }
        }
        for j in 0..=q {
            if !line_inside(k, &self.b_points[j], &self.a_points[j]) {
                return Err(Error::InvalidCertificate(format!(
                    "minimal line before a^{} leaves the complex",
                    j + 1
                )));
            }
        }
        Ok(())
    }
}

/// All critical routes of `K`, by depth-first extension from the origin:
/// either finish through a minimal line to the corner, or pick the next
/// missing block and continue from its top vertex.
pub fn enumerate_critical_routes(k: &EuclideanComplex) -> Vec<CriticalRoute> {
    let mut memo: HashMap<Point, Rc<Vec<Vec<(Point, Point)>>>> = HashMap::new();
    let n = k.ambient_dim();
    let origin = vec![0; n];
    let suffixes = route_suffixes(k, &origin, &mut memo);
    let mut out = Vec::new();
    for suf in suffixes.iter() {
        let mut a_points: Vec<Point> = Vec::with_capacity(suf.len() + 1);
        let mut b_points: Vec<Point> = vec![origin.clone()];
        for (a, b) in suf {
            a_points.push(a.clone());
            b_points.push(b.clone());
        }
        a_points.push(k.corner().clone());
        out.push(CriticalRoute { a_points, b_points });
    }
    out.sort();
    out
}

fn route_suffixes(
    k: &EuclideanComplex,
    from: &Point,
    memo: &mut HashMap<Point, Rc<Vec<Vec<(Point, Point)>>>>,
) -> Rc<Vec<Vec<(Point, Point)>>> {
    if let Some(hit) = memo.get(from) {
        return hit.clone();
    }
    let n = k.ambient_dim();
    let mut out: Vec<Vec<(Point, Point)>> = Vec::new();
    if line_inside(k, from, k.corner()) {
        out.push(Vec::new());
    }
    // candidate next blocks: a >= from, 0 < b - a <= 1, within the box
    let mut a = from.clone();
    loop {
        'masks: for mask in 1u32..(1 << n) {
            let b: Point = (0..n).map(|i| a[i] + ((mask >> i) & 1) as i32).collect();
            if b.iter().zip(k.corner()).any(|(x, lim)| x > lim) {
                continue;
            }
            let block = ElementaryCube::new(a.clone(), b.clone()).expect("unit extents");
            if block.dim() < 2 || k.contains(&block) {
                continue;
            }
            let dirs = block.directions();
            let m = *dirs.last().expect("dim >= 2");
            for i in (m + 1)..n {
                if a[i] != from[i] {
                    continue 'masks;
                }
            }
            let mut mid = a.clone();
            mid[m] += 1;
            let first = ElementaryCube::new(a.clone(), mid.clone()).expect("unit edge");
            let second = ElementaryCube::new(mid, b.clone()).expect("elementary");
            if !k.contains(&first) || !k.contains(&second) {
                continue;
            }
            if !line_inside(k, from, &a) {
                continue;
            }
            for suffix in route_suffixes(k, &b, memo).iter() {
                let mut route = vec![(a.clone(), b.clone())];
                route.extend(suffix.iter().cloned());
                out.push(route);
            }
        }
        if !increment_from(&mut a, from, k.corner()) {
            break;
        }
    }
    let rc = Rc::new(out);
    memo.insert(from.clone(), rc.clone());
    rc
}

fn increment_from(a: &mut Point, lo: &Point, hi: &Point) -> bool {
    for i in 0..a.len() {
        if a[i] < hi[i] {
            a[i] += 1;
            return true;
        }
        a[i] = lo[i];
    }
    false
}

pub fn routes_by_dim(routes: &[CriticalRoute]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for r in routes {
        *out.entry(r.dim()).or_insert(0) += 1;
    }
    out
}

/// The critical sequence of a critical route, over the box label set.
pub fn route_to_sequence(r: &CriticalRoute, k: &EuclideanComplex) -> Result<CriticalSequence> {
    r.validate(k)?;
    let corner = k.corner();
    let offsets = axis_offsets(corner);
    let interval = |lo: &Point, hi: &Point| -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..corner.len() {
            for level in (lo[i] + 1)..=hi[i] {
                out.push(offsets[i] + (level - 1) as usize);
            }
        }
        out.sort_unstable();
        out
    };
    let q = r.q();
    let mut e_blocks = Vec::with_capacity(q);
    let mut f_blocks = Vec::with_capacity(q + 1);
    for j in 0..=q {
        f_blocks.push(interval(&r.b_points()[j], &r.a_points()[j]));
        if j < q {
            e_blocks.push(interval(&r.a_points()[j], &r.b_points()[j + 1]));
        }
    }
    let cs = CriticalSequence::new(e_blocks, f_blocks)?;
    cs.validate(&embed(k)?)?;
    Ok(cs)
}

/// The critical route of a critical sequence of the embedded complex.
pub fn sequence_to_route(cs: &CriticalSequence, k: &EuclideanComplex) -> Result<CriticalRoute> {
    cs.validate(&embed(k)?)?;
    let corner = k.corner();
    let n = corner.len();
    let offsets = axis_offsets(corner);
    let bar = |labels: &[usize]| -> Point {
        let mut counts = vec![0i32; n];
        for &l in labels {
            let axis = match offsets.binary_search(&l) {
                Ok(i) => {
                    // offsets may repeat when an axis has k_i = 0; take the
                    // last axis starting at this offset with positive extent
                    let mut i = i;
                    while i + 1 < n && offsets[i + 1] == offsets[i] {
                        i += 1;
                    }
                    i
                }
                Err(i) => i - 1,
            };
            counts[axis] += 1;
        }
        counts
    };
    let add = |p: &Point, d: &Point| -> Point { p.iter().zip(d).map(|(x, y)| x + y).collect() };
    let q = cs.q();
    let mut b_points = vec![vec![0; n]];
    let mut a_points = Vec::with_capacity(q + 1);
    let mut cur = vec![0; n];
    for j in 0..=q {
        cur = add(&cur, &bar(&cs.f_blocks()[j]));
        a_points.push(cur.clone());
        if j < q {
            cur = add(&cur, &bar(&cs.e_blocks()[j]));
            b_points.push(cur.clone());
        }
    }
    let route = CriticalRoute { a_points, b_points };
    route.validate(k)?;
    Ok(route)
}

/// Sandwich precondition of the skeleton correspondence: everything between
/// the `(n-1)`-skeleton of the box and the box itself, with `n >= 2`.
fn check_sandwich(k: &EuclideanComplex) -> Result<()> {
    if k.ambient_dim() < 2 {
        return Err(Error::Precondition("need ambient dimension >= 2".into()));
    }
    if !k.contains_box_skeleton()? {
        return Err(Error::Precondition(
            "complex does not contain the (n-1)-skeleton of its box".into(),
        ));
    }
    Ok(())
}

/// In the sandwich case every block of a critical route is a missing top
/// cube `[b - 1, b]`; the route is recorded by its top corners.
pub fn cube_sequence_of_route(r: &CriticalRoute, k: &EuclideanComplex) -> Result<Vec<Point>> {
    check_sandwich(k)?;
    r.validate(k)?;
    for j in 1..=r.q() {
        let block = r.block(j);
        if block.dim() != k.ambient_dim() {
            return Err(Error::InvalidCertificate(
                "sandwich routes have full-dimensional blocks only".into(),
            ));
        }
    }
    Ok(r.b_points()[1..].to_vec())
}

/// The critical route determined by strictly increasing missing-cube top
/// corners.
pub fn route_of_cube_sequence(points: &[Point], k: &EuclideanComplex) -> Result<CriticalRoute> {
    check_sandwich(k)?;
    let n = k.ambient_dim();
    let mut a_points = Vec::with_capacity(points.len() + 1);
    let mut b_points = vec![vec![0; n]];
    for p in points {
        let a: Point = p.iter().map(|x| x - 1).collect();
        a_points.push(a);
        b_points.push(p.clone());
    }
    a_points.push(k.corner().clone());
    let route = CriticalRoute { a_points, b_points };
    route.validate(k)?;
    Ok(route)
}

/// An ordered partition of the box multiset: blocks are per-axis counts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultisetPartition {
    blocks: Vec<Vec<u32>>,
}

impl MultisetPartition {
    pub fn new(blocks: Vec<Vec<u32>>) -> Self {
        MultisetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Proper iff every block is a set: counts at most one per axis.
    pub fn is_proper(&self) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&c| c <= 1))
    }

    /// Refinement by consecutive grouping of blocks with summed counts.
    pub fn refines(&self, coarser: &MultisetPartition) -> bool {
        let n = self.blocks.first().map(Vec::len).unwrap_or(0);
        let mut i = 0;
        for big in &coarser.blocks {
            let mut acc = vec![0u32; n];
            loop {
                if &acc == big {
                    break;
                }
                let Some(small) = self.blocks.get(i) else {
                    return false;
                };
                for (a, s) in acc.iter_mut().zip(small) {
                    *a += s;
                }
                if acc.iter().zip(big).any(|(a, b)| a > b) {
                    return false;
                }
                i += 1;
            }
        }
        i == self.blocks.len()
    }
}

/// Blockwise projection of a partition of the box label set onto per-axis
/// multiplicities.
pub fn project(lambda: &OrderedPartition, k: &Point) -> MultisetPartition {
    let offsets = axis_offsets(k);
    let n = k.len();
    let blocks = lambda
        .blocks()
        .iter()
        .map(|b| {
            let mut counts = vec![0u32; n];
            for &l in b {
                let axis = match offsets.binary_search(&l) {
                    Ok(mut i) => {
                        while i + 1 < n && offsets[i + 1] == offsets[i] {
                            i += 1;
                        }
                        i
                    }
                    Err(i) => i - 1,
                };
                counts[axis] += 1;
            }
            counts
        })
        .collect();
    MultisetPartition { blocks }
}

/// The unique box-poset partition projecting to a proper multiset partition:
/// axis levels are consumed in order.
pub fn unproject(ms: &MultisetPartition, k: &Point) -> Result<OrderedPartition> {
    if !ms.is_proper() {
        return Err(Error::InvalidArgument(
            "only proper multiset partitions lift".into(),
        ));
    }
    let offsets = axis_offsets(k);
    let n = k.len();
    let mut used = vec![0i32; n];
    let mut blocks = Vec::with_capacity(ms.blocks.len());
    for b in &ms.blocks {
        let mut block = Vec::new();
        for i in 0..n {
            if b[i] == 1 {
                used[i] += 1;
                if used[i] > k[i] {
                    return Err(Error::InvalidArgument(format!(
                        "axis {} used more than {} times",
                        i + 1,
                        k[i]
                    )));
                }
                block.push(offsets[i] + (used[i] - 1) as usize);
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    if used.iter().zip(k).any(|(u, lim)| *u != *lim) {
        return Err(Error::InvalidArgument(
            "multiset partition does not exhaust the box multiset".into(),
        ));
    }
    OrderedPartition::new(blocks)
}

/// The box-poset membership criterion: on every axis, higher levels appear
/// in strictly later blocks.
pub fn is_box_partition(lambda: &OrderedPartition, k: &Point) -> bool {
    let offsets = axis_offsets(k);
    let n = k.len();
    let mut last_level = vec![0i32; n];
    for block in lambda.blocks() {
        let mut this_block = vec![Vec::new(); n];
        for &l in block {
            let axis = match offsets.binary_search(&l) {
                Ok(mut i) => {
                    while i + 1 < n && offsets[i + 1] == offsets[i] {
                        i += 1;
                    }
                    i
                }
                Err(i) => i - 1,
            };
            let level = (l - offsets[axis] + 1) as i32;
            this_block[axis].push(level);
        }
        for i in 0..n {
            if this_block[i].len() > 1 {
                return false;
            }
            if let Some(&level) = this_block[i].first() {
                if level != last_level[i] + 1 {
                    return false;
                }
                last_level[i] = level;
            }
        }
    }
    last_level.iter().zip(k).all(|(l, lim)| *l == *lim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::Endpoint;

    fn pt(v: &[i32]) -> Point {
        v.to_vec()
    }

    fn ec(a: &[i32], b: &[i32]) -> ElementaryCube {
        ElementaryCube::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn elementary_cube_basics() {
        assert!(ElementaryCube::new(vec![0, 0], vec![2, 1]).is_err());
        let c = ec(&[0, 1], &[1, 2]);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.directions(), vec![0, 1]);
        assert_eq!(c.sub_cubes().len(), 9);
    }

    #[test]
    fn embed_examples() {
        // k = 1: the evident bijection
        let k = pt(&[1, 1]);
        assert_eq!(
            embed_cube(&ec(&[0, 0], &[1, 1]), &k).unwrap(),
            Cube::parse("**").unwrap()
        );
        // the worked coordinate example
        let k = pt(&[1, 2]);
        assert_eq!(
            embed_cube(&ec(&[0, 1], &[1, 2]), &k).unwrap(),
            Cube::parse("*1*").unwrap()
        );
        // origin goes to the all-zeros word
        assert_eq!(
            embed_cube(&ElementaryCube::vertex(pt(&[0, 0])), &k).unwrap(),
            Cube::parse("000").unwrap()
        );
        assert!(embed_cube(&ec(&[1, 2], &[2, 2]), &k).is_err());
    }

    #[test]
    fn embedding_commutes_with_faces_and_is_closed() {
        let k = pt(&[2, 2]);
        let complex = EuclideanComplex::full_box(k.clone()).unwrap();
        let embedded = embed(&complex).unwrap();
        assert!(embedded.validate());
        for c in complex.cubes() {
            let w = embed_cube(c, &k).unwrap();
            assert_eq!(w.dim(), c.dim());
            // face sets match
            let mut geometric: Vec<Cube> = c
                .sub_cubes()
                .iter()
                .map(|f| embed_cube(f, &k).unwrap())
                .collect();
            geometric.sort();
            geometric.dedup();
            let mut words = w.all_faces();
            words.sort();
            assert_eq!(geometric, words);
        }
    }

    #[test]
    fn minimal_line_examples() {
        // a = b: single vertex
        let l = minimal_line(&pt(&[1, 1]), &pt(&[1, 1])).unwrap();
        assert_eq!(l.cube_count(), 1);
        // axis 1 first, then axis 2: through the bottom-right corner
        let l = minimal_line(&pt(&[0, 0]), &pt(&[2, 1])).unwrap();
        assert!(l.contains(&ec(&[0, 0], &[1, 0])));
        assert!(l.contains(&ec(&[1, 0], &[2, 0])));
        assert!(l.contains(&ec(&[2, 0], &[2, 1])));
        assert_eq!(l.cubes().filter(|c| c.dim() == 1).count(), 3);
        assert!(minimal_line(&pt(&[1]), &pt(&[0])).is_err());
    }

    #[test]
    fn minimal_line_stays_in_box() {
        for k in [pt(&[2, 2]), pt(&[3, 1, 2])] {
            let l = minimal_line(&vec![0; k.len()], &k).unwrap();
            for c in l.cubes() {
                assert!(c.low().iter().all(|&x| x >= 0));
                assert!(c.high().iter().zip(&k).all(|(x, lim)| x <= lim));
            }
        }
    }

    #[test]
    fn full_box_has_single_route() {
        for k in [pt(&[1]), pt(&[2, 2]), pt(&[1, 1, 1])] {
            let complex = EuclideanComplex::full_box(k).unwrap();
            let routes = enumerate_critical_routes(&complex);
            assert_eq!(routes.len(), 1);
            assert_eq!(routes[0].q(), 0);
            assert_eq!(routes[0].dim(), 0);
        }
    }

    #[test]
    fn swiss_square_routes() {
        let complex =
            EuclideanComplex::box_minus(pt(&[2, 2]), &[ec(&[1, 1], &[2, 2])]).unwrap();
        let routes = enumerate_critical_routes(&complex);
        assert_eq!(routes.len(), 2);
        assert!(routes.iter().all(|r| r.dim() == 0));
        let with_block: Vec<&CriticalRoute> = routes.iter().filter(|r| r.q() == 1).collect();
        assert_eq!(with_block.len(), 1);
        assert_eq!(with_block[0].a_points()[0], pt(&[1, 1]));
        assert_eq!(with_block[0].b_points()[1], pt(&[2, 2]));
    }

    #[test]
    fn skeleton_examples() {
        let b = EuclideanComplex::full_box(pt(&[1, 1, 1])).unwrap();
        assert_eq!(b.skeleton(3), b);
        assert_eq!(b.skeleton(2).cube_count(), b.cube_count() - 1);
        let k = box_complex(&pt(&[1, 1, 1]));
        assert_eq!(k.skeleton(2).cube_count(), 26);
        // 0-skeleton of a positive-dimensional box has no chains
        let v = CubicalComplex::full(crate::cubical::LabelSet::numeric(2)).skeleton(0);
        assert!(crate::partitions::build_pk(&v).is_empty());
    }

    #[test]
    fn route_without_top_axis_drift_only() {
        // removing the square spanning axes 1,2 at height 1 leaves no
        // critical block there: the approach would have to move axis 3 first
        let k = pt(&[1, 1, 1]);
        let missing = ec(&[0, 0, 1], &[1, 1, 1]);
        let complex = EuclideanComplex::box_minus(k.clone(), &[missing.clone()]).unwrap();
        let routes = enumerate_critical_routes(&complex);
        assert_eq!(routes.len(), 1);
        assert_eq!(routes[0].q(), 0);
        // the same square at height 0 is a genuine block; removing it also
        // removes the top cell, which blocks on its own
        let missing = ec(&[0, 0, 0], &[1, 1, 0]);
        let complex = EuclideanComplex::box_minus(k, &[missing]).unwrap();
        let routes = enumerate_critical_routes(&complex);
        assert_eq!(routes.len(), 3);
        let mut dims: Vec<usize> = routes.iter().map(|r| r.dim()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![0, 0, 1]);
        // counts agree with the sequence enumeration of the embedded complex
        for complex in [
            &EuclideanComplex::box_minus(pt(&[1, 1, 1]), &[ec(&[0, 0, 1], &[1, 1, 1])]).unwrap(),
            &complex,
        ] {
            let seqs =
                crate::wk::enumerate_critical_sequences(&embed(complex).unwrap());
            assert_eq!(seqs.len(), enumerate_critical_routes(complex).len());
        }
    }

    #[test]
    fn route_sequence_round_trip_on_swiss_square() {
        let complex =
            EuclideanComplex::box_minus(pt(&[2, 2]), &[ec(&[1, 1], &[2, 2])]).unwrap();
        let routes = enumerate_critical_routes(&complex);
        for r in &routes {
            let cs = route_to_sequence(r, &complex).unwrap();
            assert_eq!(cs.dim(), r.dim());
            let back = sequence_to_route(&cs, &complex).unwrap();
            assert_eq!(&back, r);
        }
        // the q = 1 route has E_1 = the two top levels of the axes
        let q1 = routes.iter().find(|r| r.q() == 1).unwrap();
        let cs = route_to_sequence(q1, &complex).unwrap();
        // labels: 1.1, 1.2, 2.1, 2.2 at positions 0..4; E_1 = {1.2, 2.2}
        assert_eq!(cs.e_blocks(), &[vec![1, 3]]);
    }

    #[test]
    fn sandwich_cube_sequences() {
        let k = pt(&[2, 2]);
        let removed = [ec(&[0, 0], &[1, 1]), ec(&[1, 1], &[2, 2])];
        let complex = EuclideanComplex::box_minus(k.clone(), &removed).unwrap();
        let routes = enumerate_critical_routes(&complex);
        for r in &routes {
            let pts = cube_sequence_of_route(r, &complex).unwrap();
            let back = route_of_cube_sequence(&pts, &complex).unwrap();
            assert_eq!(&back, r);
            for j in 1..=r.q() {
                let block = r.block(j);
                let ones: Point = block
                    .high()
                    .iter()
                    .zip(block.low())
                    .map(|(b, a)| b - a)
                    .collect();
                assert_eq!(ones, vec![1, 1]);
            }
        }
        // both removed squares in one route: corners strictly increase
        let longest = routes.iter().map(|r| r.q()).max().unwrap();
        assert_eq!(longest, 2);
        // not applicable outside the sandwich
        let holed = EuclideanComplex::box_minus(
            k,
            &[ec(&[0, 0], &[1, 0])], // an edge
        )
        .unwrap();
        let full_route = CriticalRoute::new(vec![pt(&[2, 2])], vec![pt(&[0, 0])]).unwrap();
        assert!(cube_sequence_of_route(&full_route, &holed).is_err());
    }

    #[test]
    fn project_and_unproject() {
        let k = pt(&[2]);
        let labels = box_label_set(&k);
        let lam = OrderedPartition::parse("1.1|1.2", &labels).unwrap();
        let ms = project(&lam, &k);
        assert_eq!(ms.blocks(), &[vec![1], vec![1]]);
        assert!(ms.is_proper());
        assert_eq!(unproject(&ms, &k).unwrap(), lam);

        // wrong-order partition: projection defined, box criterion fails
        let bad = OrderedPartition::parse("1.2|1.1", &labels).unwrap();
        let ms = project(&bad, &k);
        assert!(ms.is_proper());
        assert!(!is_box_partition(&bad, &k));
        assert!(is_box_partition(&lam, &k));
    }

    #[test]
    fn unproject_round_trip_exhaustive() {
        // enumerate proper multiset partitions for small boxes and round trip
        for k in [pt(&[2, 1]), pt(&[1, 1, 1]), pt(&[2, 2])] {
            let total: u32 = k.iter().map(|&x| x as u32).sum();
            let mut count = 0usize;
            let mut stack: Vec<Vec<u32>> = Vec::new();
            fn rec(
                remaining: &mut Vec<u32>,
                k: &Point,
                total_left: u32,
                stack: &mut Vec<Vec<u32>>,
                count: &mut usize,
            ) {
                let n = k.len();
                if total_left == 0 {
                    let ms = MultisetPartition::new(stack.clone());
                    let lam = unproject(&ms, k).unwrap();
                    assert!(is_box_partition(&lam, k));
                    assert_eq!(project(&lam, k), ms);
                    *count += 1;
                    return;
                }
                for mask in 1u32..(1 << n) {
                    let block: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
                    if block.iter().zip(remaining.iter()).any(|(b, r)| b > r) {
                        continue;
                    }
                    for i in 0..n {
                        remaining[i] -= block[i];
                    }
                    let used: u32 = block.iter().sum();
                    stack.push(block.clone());
                    rec(remaining, k, total_left - used, stack, count);
                    stack.pop();
                    for i in 0..n {
                        remaining[i] += block[i];
                    }
                }
            }
            let mut remaining: Vec<u32> = k.iter().map(|&x| x as u32).collect();
            rec(&mut remaining, &k, total, &mut stack, &mut count);
            assert!(count > 0);
        }
    }

    #[test]
    fn projection_is_order_isomorphism_on_box_poset() {
        let k = pt(&[2, 1]);
        let complex = EuclideanComplex::full_box(k.clone()).unwrap();
        let embedded = embed(&complex).unwrap();
        let pk = crate::partitions::build_pk(&embedded);
        for lam in &pk {
            assert!(is_box_partition(lam, &k));
            assert!(project(lam, &k).is_proper());
        }
        for a in &pk {
            for b in &pk {
                let direct = a.refines(b).unwrap();
                let projected = project(a, &k).refines(&project(b, &k));
                assert_eq!(direct, projected, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn restriction_respects_euclid_skeleton() {
        // skeleton commutes with the embedding
        let k = pt(&[2, 1]);
        let complex = EuclideanComplex::full_box(k.clone()).unwrap();
        let a = embed(&complex.skeleton(1)).unwrap();
        let b = embed(&complex).unwrap().skeleton(1);
        assert_eq!(a, b);
        let r = embed(&complex).unwrap().restrict(&[0, 1], Endpoint::Zero);
        assert!(r.validate());
    }
}
