//! The standard cube on a finite ordered label set, its sub-complexes, face
//! maps and restrictions.
//!
//! A cube is a word over `{0, 1, *}` indexed by the label set in label order;
//! its dimension is the number of `*` entries. Complexes are face-closed word
//! sets over a fixed label set.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One coordinate of a cube word.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tri {
    Zero,
    One,
    Star,
}

impl Tri {
    pub fn from_endpoint(eps: Endpoint) -> Tri {
        match eps {
            Endpoint::Zero => Tri::Zero,
            Endpoint::One => Tri::One,
        }
    }
}

/// A face-map endpoint: the value substituted for a `*`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Endpoint {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

/// The coordinate index set: a finite, totally ordered list of distinct
/// label names. Position order is the order of the set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LabelSet {
    names: Vec<String>,
}

impl LabelSet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate label {n:?}")));
            }
        }
        Ok(LabelSet { names })
    }

    /// Labels `1..=n` as decimal strings.
    pub fn numeric(n: usize) -> Self {
        LabelSet {
            names: (1..=n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, pos: usize) -> &str {
        &self.names[pos]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Position of the maximal element; `None` when the set is empty.
    pub fn max_position(&self) -> Option<usize> {
        self.len().checked_sub(1)
    }

    pub fn subset(&self, positions: &[usize]) -> LabelSet {
        LabelSet {
            names: positions.iter().map(|&p| self.names[p].clone()).collect(),
        }
    }
}

/// A cell of the standard cube: a word over `{0, 1, *}` in label order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    word: Vec<Tri>,
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cube({self})")
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.word {
            f.write_str(match t {
                Tri::Zero => "0",
                Tri::One => "1",
                Tri::Star => "*",
            })?;
        }
        Ok(())
    }
}

impl Cube {
    pub fn from_word(word: Vec<Tri>) -> Self {
        Cube { word }
    }

    /// Parse a word like `"01*"`.
    pub fn parse(s: &str) -> Result<Self> {
        let word = s
            .chars()
            .map(|c| match c {
                '0' => Ok(Tri::Zero),
                '1' => Ok(Tri::One),
                '*' => Ok(Tri::Star),
                other => Err(Error::Parse(format!("invalid cube character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Cube { word })
    }

    /// The cube with entries 1 on `ones`, `*` on `stars`, 0 on `zeros`.
    /// The three sets must partition `0..n`.
    pub fn from_parts(n: usize, ones: &[usize], stars: &[usize], zeros: &[usize]) -> Result<Self> {
        let mut word = vec![None; n];
        let mut place = |positions: &[usize], t: Tri| -> Result<()> {
            for &p in positions {
                if p >= n {
                    return Err(Error::InvalidArgument(format!(
                        "position {p} out of range for {n} labels"
                    )));
                }
                if word[p].replace(t).is_some() {
                    return Err(Error::InvalidArgument(format!(
                        "position {p} assigned twice"
                    )));
                }
                word[p] = Some(t);
            }
            Ok(())
        };
        place(ones, Tri::One)?;
        place(stars, Tri::Star)?;
        place(zeros, Tri::Zero)?;
        let word = word
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidArgument("sets do not cover the label set".into()))?;
        Ok(Cube { word })
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn entry(&self, pos: usize) -> Tri {
        self.word[pos]
    }

    pub fn dim(&self) -> usize {
        self.word.iter().filter(|t| **t == Tri::Star).count()
    }

    /// Positions carrying `*`, in label order.
    pub fn star_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| self.word[p] == Tri::Star)
            .collect()
    }

    pub fn one_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| self.word[p] == Tri::One)
            .collect()
    }

    /// Face map: converts the `i`-th occurrence of `*` (1-based, in label
    /// order) into `eps`.
    pub fn face(&self, i: usize, eps: Endpoint) -> Result<Cube> {
        let stars = self.star_positions();
        if i == 0 || i > stars.len() {
            return Err(Error::FaceIndex {
                index: i,
                dim: stars.len(),
            });
        }
        let mut word = self.word.clone();
        word[stars[i - 1]] = Tri::from_endpoint(eps);
        Ok(Cube { word })
    }

    /// `(d0, d1)`: all stars replaced by 0, respectively by 1.
    pub fn end_vertices(&self) -> (Cube, Cube) {
        let lo = self
            .word
            .iter()
            .map(|t| if *t == Tri::Star { Tri::Zero } else { *t })
            .collect();
        let hi = self
            .word
            .iter()
            .map(|t| if *t == Tri::Star { Tri::One } else { *t })
            .collect();
        (Cube { word: lo }, Cube { word: hi })
    }

    /// All proper and improper faces (the down-set under inclusion).
    pub fn all_faces(&self) -> Vec<Cube> {
        let stars = self.star_positions();
        let mut out = Vec::with_capacity(3usize.pow(stars.len() as u32));
        let mut word = self.word.clone();
        fn rec(word: &mut Vec<Tri>, stars: &[usize], k: usize, out: &mut Vec<Cube>) {
            if k == stars.len() {
                out.push(Cube { word: word.clone() });
                return;
            }
            for t in [Tri::Zero, Tri::Star, Tri::One] {
                word[stars[k]] = t;
                rec(word, stars, k + 1, out);
            }
            word[stars[k]] = Tri::Star;
        }
        rec(&mut word, &stars, 0, &mut out);
        out
    }

    /// Containment as cells of the standard cube: `self` is a face of `other`.
    pub fn is_face_of(&self, other: &Cube) -> bool {
        self.len() == other.len()
            && self
                .word
                .iter()
                .zip(&other.word)
                .all(|(s, o)| *o == Tri::Star || s == o)
    }
}

/// A face-closed set of cubes over a fixed label set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CubicalComplex {
    labels: LabelSet,
    cubes: BTreeSet<Cube>,
}

impl CubicalComplex {
    /// Build from an explicit cube list, verifying face-closure.
    pub fn new(labels: LabelSet, cubes: Vec<Cube>) -> Result<Self> {
        let n = labels.len();
        for c in &cubes {
            if c.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "cube {c} has {} entries, expected {n}",
                    c.len()
                )));
            }
        }
        let set: BTreeSet<Cube> = cubes.into_iter().collect();
        let complex = CubicalComplex { labels, cubes: set };
        if let Some(missing) = complex.first_missing_face() {
            return Err(Error::NotFaceClosed(missing.to_string()));
        }
        Ok(complex)
    }

    /// Build as the face-closure of a generator set.
    pub fn from_generators(labels: LabelSet, generators: Vec<Cube>) -> Result<Self> {
        let n = labels.len();
        let mut cubes = BTreeSet::new();
        for g in generators {
            if g.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "cube {g} has {} entries, expected {n}",
                    g.len()
                )));
            }
            for f in g.all_faces() {
                cubes.insert(f);
            }
        }
        Ok(CubicalComplex { labels, cubes })
    }

    /// The full standard cube on the given labels.
    pub fn full(labels: LabelSet) -> Self {
        let top = Cube::from_word(vec![Tri::Star; labels.len()]);
        let cubes = top.all_faces().into_iter().collect();
        CubicalComplex { labels, cubes }
    }

    /// The complex with no cubes at all.
    pub fn empty(labels: LabelSet) -> Self {
        CubicalComplex {
            labels,
            cubes: BTreeSet::new(),
        }
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn cube_count(&self) -> usize {
        self.cubes.len()
    }

    pub fn cubes(&self) -> impl Iterator<Item = &Cube> {
        self.cubes.iter()
    }

    pub fn contains(&self, c: &Cube) -> bool {
        self.cubes.contains(c)
    }

    pub fn contains_parts(&self, ones: &[usize], stars: &[usize], zeros: &[usize]) -> bool {
        match Cube::from_parts(self.labels.len(), ones, stars, zeros) {
            Ok(c) => self.contains(&c),
            Err(_) => false,
        }
    }

    fn first_missing_face(&self) -> Option<&Cube> {
        for c in &self.cubes {
            let d = c.dim();
            for i in 1..=d {
                for eps in [Endpoint::Zero, Endpoint::One] {
                    let f = c.face(i, eps).expect("index within dimension");
                    if !self.cubes.contains(&f) {
                        return Some(c);
                    }
                }
            }
        }
        None
    }

    /// True iff every face of every cube is present.
    pub fn validate(&self) -> bool {
        self.first_missing_face().is_none()
    }

    /// Remove the listed cells together with everything containing them.
    pub fn remove_cells_upward(&self, cells: &[Cube]) -> CubicalComplex {
        let keep: BTreeSet<Cube> = self
            .cubes
            .iter()
            .filter(|c| !cells.iter().any(|x| x.is_face_of(c)))
            .cloned()
            .collect();
        CubicalComplex {
            labels: self.labels.clone(),
            cubes: keep,
        }
    }

    /// The restriction to the labels at `positions` (ascending), extending by
    /// the constant `eps` outside them.
    pub fn restrict(&self, positions: &[usize], eps: Endpoint) -> CubicalComplex {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let fill = Tri::from_endpoint(eps);
        let n = self.labels.len();
        let mut cubes = BTreeSet::new();
        // scan cubes whose entries off `positions` are all `fill`
        'outer: for c in &self.cubes {
            let mut it = positions.iter().peekable();
            let mut word = Vec::with_capacity(positions.len());
            for p in 0..n {
                if it.peek() == Some(&&p) {
                    it.next();
                    word.push(c.entry(p));
                } else if c.entry(p) != fill {
                    continue 'outer;
                }
            }
            cubes.insert(Cube::from_word(word));
        }
        CubicalComplex {
            labels: self.labels.subset(positions),
            cubes,
        }
    }

    /// Cubes of dimension at most `q`.
    pub fn skeleton(&self, q: usize) -> CubicalComplex {
        CubicalComplex {
            labels: self.labels.clone(),
            cubes: self.cubes.iter().filter(|c| c.dim() <= q).cloned().collect(),
        }
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.cubes.iter().map(|c| c.dim()).max()
    }

    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut out = vec![0; self.max_dim().map(|d| d + 1).unwrap_or(0)];
        for c in &self.cubes {
            out[c.dim()] += 1;
        }
        out
    }

    /// Canonical word list, used as a memo key by the recursive builders.
    pub fn word_key(&self) -> Vec<Cube> {
        self.cubes.iter().cloned().collect()
    }
}
