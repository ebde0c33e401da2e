//! Finite posets, gradedness, intervals, and the poset of intervals under inclusion.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// A finite partial order on labelled elements `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
}

impl FinitePoset {
    /// The order generated by `relations` (pairs `a ≤ b`), closed reflexively and
    /// transitively. Cycles between distinct elements are rejected.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::IndexOutOfRange {
                        context: "poset relation".into(),
                        index: x,
                        range: format!("0..{n}"),
                    });
                }
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::NotAntisymmetric(labels[i].clone(), labels[j].clone()));
                }
            }
        }
        Ok(Self::from_closed(labels, leq))
    }

    fn from_closed(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Self {
        let n = labels.len();
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                if a == b || !leq[a][b] {
                    continue;
                }
                let covered = !(0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b]);
                if covered {
                    upper_covers[a].push(b);
                    lower_covers[b].push(a);
                }
            }
        }
        FinitePoset {
            labels,
            leq,
            upper_covers,
            lower_covers,
        }
    }

    pub fn point() -> Self {
        Self::chain(0)
    }

    /// `0 < 1 < … < k`.
    pub fn chain(k: usize) -> Self {
        let labels = (0..=k).map(|i| i.to_string()).collect();
        let rel: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Self::from_relations(labels, &rel).expect("chains are posets")
    }

    /// Product order; element `(i, j)` gets index `i * |other| + j`.
    pub fn product(&self, other: &FinitePoset) -> Self {
        let (n, m) = (self.len(), other.len());
        let mut labels = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                labels.push(format!("({},{})", self.labels[i], other.labels[j]));
            }
        }
        let mut leq = vec![vec![false; n * m]; n * m];
        for (x, row) in leq.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                *cell = self.leq[x / m][y / m] && other.leq[x % m][y % m];
            }
        }
        Self::from_closed(labels, leq)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper_covers[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower_covers[a]
    }

    /// All pairs `a ≤ b`, lexicographic in `(a, b)`.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (0..n).filter(move |&b| self.leq[a][b]).map(move |b| (a, b)))
            .collect()
    }
}

/// An interval `[low, high]` by element indices, with its length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub low: usize,
    pub high: usize,
    pub length: usize,
}

/// A poset in which all maximal chains between two comparable elements have the same
/// number of steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoset {
    poset: FinitePoset,
    length: Vec<Vec<Option<usize>>>,
    coords: Option<CubeCoordinates>,
}

/// Embedding of the elements as vertices of `[1]^dim`. Coordinate `i` (1-based) is bit
/// `dim - i` of the mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeCoordinates {
    pub dim: usize,
    pub masks: Vec<u32>,
}

impl CubeCoordinates {
    pub fn bit(&self, coordinate: usize) -> u32 {
        1 << (self.dim - coordinate)
    }

    /// 1-based coordinate of a single-bit mask.
    pub fn coordinate_of(&self, bit: u32) -> usize {
        self.dim - bit.trailing_zeros() as usize
    }
}

pub fn check_graded(poset: FinitePoset) -> Result<GradedPoset> {
    let n = poset.len();
    // Linear extension: fewer elements below comes first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| ((0..n).filter(|&y| poset.leq(y, x)).count(), x));

    // shortest/longest saturated chain lengths from each a up to b, plus next steps
    let mut short = vec![vec![usize::MAX; n]; n];
    let mut long = vec![vec![0usize; n]; n];
    let mut short_next = vec![vec![usize::MAX; n]; n];
    let mut long_next = vec![vec![usize::MAX; n]; n];
    for b in 0..n {
        short[b][b] = 0;
        for &a in order.iter().rev() {
            if a == b || !poset.leq(a, b) {
                continue;
            }
            for &c in poset.upper_covers(a) {
                if !poset.leq(c, b) {
                    continue;
                }
                if short[c][b] + 1 < short[a][b] {
                    short[a][b] = short[c][b] + 1;
                    short_next[a][b] = c;
                }
                if long[c][b] + 1 > long[a][b] || long_next[a][b] == usize::MAX {
                    long[a][b] = long[c][b] + 1;
                    long_next[a][b] = c;
                }
            }
        }
    }
    let walk = |next: &Vec<Vec<usize>>, a: usize, b: usize| {
        let mut chain = vec![poset.label(a).to_string()];
        let mut x = a;
        while x != b {
            x = next[x][b];
            chain.push(poset.label(x).to_string());
        }
        chain
    };
    let mut length = vec![vec![None; n]; n];
    for (a, b) in poset.comparable_pairs() {
        if short[a][b] != long[a][b] {
            return Err(Error::NotGraded {
                low: poset.label(a).into(),
                high: poset.label(b).into(),
                short: walk(&short_next, a, b),
                long: walk(&long_next, a, b),
            });
        }
        length[a][b] = Some(short[a][b]);
    }
    Ok(GradedPoset {
        poset,
        length,
        coords: None,
    })
}

impl GradedPoset {
    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    /// ℓ(a, b), or `None` when `a ≰ b`.
    pub fn length(&self, a: usize, b: usize) -> Option<usize> {
        self.length[a][b]
    }

    pub fn max_length(&self) -> usize {
        self.length.iter().flatten().flatten().copied().max().unwrap_or(0)
    }

    pub fn interval(&self, a: usize, b: usize) -> Option<Interval> {
        self.length(a, b).map(|length| Interval {
            low: a,
            high: b,
            length,
        })
    }

    /// All intervals, lexicographic in `(low, high)`.
    pub fn intervals(&self) -> Vec<Interval> {
        self.poset
            .comparable_pairs()
            .into_iter()
            .map(|(a, b)| self.interval(a, b).unwrap())
            .collect()
    }

    pub fn intervals_of_length(&self, k: usize) -> Vec<Interval> {
        self.intervals().into_iter().filter(|i| i.length == k).collect()
    }

    /// Intervals one step larger: `[a, b′]` with `b′` covering `b`, and `[a′, b]` with
    /// `a′` covered by `a`.
    pub fn cover_extensions(&self, i: &Interval) -> (Vec<Interval>, Vec<Interval>) {
        let target = self
            .poset
            .upper_covers(i.high)
            .iter()
            .map(|&b| self.interval(i.low, b).unwrap())
            .collect();
        let source = self
            .poset
            .lower_covers(i.low)
            .iter()
            .map(|&a| self.interval(a, i.high).unwrap())
            .collect();
        (target, source)
    }

    pub fn coordinates(&self) -> Option<&CubeCoordinates> {
        self.coords.as_ref()
    }

    /// Attach a cube embedding. Every cover must flip exactly one bit from 0 to 1.
    pub fn with_cube_coordinates(mut self, dim: usize, masks: Vec<u32>) -> Result<Self> {
        if masks.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "cube coordinates".into(),
                expected: self.len(),
                found: masks.len(),
            });
        }
        for a in 0..self.len() {
            for &b in self.poset.upper_covers(a) {
                let flip = masks[a] ^ masks[b];
                if flip.count_ones() != 1 || masks[a] & flip != 0 || (flip >> dim) != 0 {
                    return Err(Error::InvalidInput(format!(
                        "cover {} < {} is not a single coordinate step",
                        self.poset.label(a),
                        self.poset.label(b)
                    )));
                }
            }
        }
        self.coords = Some(CubeCoordinates { dim, masks });
        Ok(self)
    }

    pub fn interval_family(&self) -> IntervalFamily {
        IntervalFamily::new(
            self.poset.clone(),
            self.coords.clone(),
            self.intervals()
                .into_iter()
                .map(|i| (i.low, i.high, i.length))
                .collect(),
        )
    }
}

/// Product of graded posets is graded; coordinates are concatenated when both have them.
pub fn graded_product(a: &GradedPoset, b: &GradedPoset) -> GradedPoset {
    let p = a.poset.product(&b.poset);
    let m = b.len();
    let mut length = vec![vec![None; p.len()]; p.len()];
    for (x, row) in length.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            if let (Some(l1), Some(l2)) = (a.length(x / m, y / m), b.length(x % m, y % m)) {
                *cell = Some(l1 + l2);
            }
        }
    }
    let coords = match (&a.coords, &b.coords) {
        (Some(ca), Some(cb)) => Some(CubeCoordinates {
            dim: ca.dim + cb.dim,
            masks: (0..p.len())
                .map(|x| (ca.masks[x / m] << cb.dim) | cb.masks[x % m])
                .collect(),
        }),
        _ => None,
    };
    GradedPoset {
        poset: p,
        length,
        coords,
    }
}

/// The poset of intervals `[a, b]` ordered by inclusion: `[a,b] ≤ [c,d]` iff `c ≤ a` and
/// `b ≤ d`.
pub fn twisted_arrow_poset(p: &FinitePoset) -> FinitePoset {
    let pairs = p.comparable_pairs();
    let labels = pairs
        .iter()
        .map(|&(a, b)| format!("[{},{}]", p.label(a), p.label(b)))
        .collect();
    let leq = pairs
        .iter()
        .map(|&(a, b)| {
            pairs
                .iter()
                .map(|&(c, d)| p.leq(c, a) && p.leq(b, d))
                .collect()
        })
        .collect();
    FinitePoset::from_closed(labels, leq)
}

/// A set of intervals in a graded poset, closed under passing to sub-intervals, with the
/// one-step extensions between its members. This is what the cochain complex is built
/// from: all intervals of a poset, or the intervals lying inside cells of a cubical
/// complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalFamily {
    poset: FinitePoset,
    coords: Option<CubeCoordinates>,
    intervals: Vec<Interval>,
    index: HashMap<(usize, usize), usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

impl IntervalFamily {
    /// `intervals` are `(low, high, length)` triples; they are sorted lexicographically.
    pub fn new(
        poset: FinitePoset,
        coords: Option<CubeCoordinates>,
        intervals: Vec<(usize, usize, usize)>,
    ) -> Self {
        let mut intervals: Vec<Interval> = intervals
            .into_iter()
            .map(|(low, high, length)| Interval { low, high, length })
            .collect();
        intervals.sort();
        intervals.dedup();
        let index: HashMap<_, _> = intervals
            .iter()
            .enumerate()
            .map(|(k, i)| ((i.low, i.high), k))
            .collect();
        let up = intervals
            .iter()
            .map(|i| {
                poset
                    .upper_covers(i.high)
                    .iter()
                    .filter_map(|&b| index.get(&(i.low, b)).copied())
                    .collect()
            })
            .collect();
        let down = intervals
            .iter()
            .map(|i| {
                poset
                    .lower_covers(i.low)
                    .iter()
                    .filter_map(|&a| index.get(&(a, i.high)).copied())
                    .collect()
            })
            .collect();
        IntervalFamily {
            poset,
            coords,
            intervals,
            index,
            up,
            down,
        }
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn coordinates(&self) -> Option<&CubeCoordinates> {
        self.coords.as_ref()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn get(&self, k: usize) -> &Interval {
        &self.intervals[k]
    }

    pub fn index_of(&self, low: usize, high: usize) -> Option<usize> {
        self.index.get(&(low, high)).copied()
    }

    /// Target extensions `[a, b′]` of interval `k` that belong to the family.
    pub fn target_extensions(&self, k: usize) -> &[usize] {
        &self.up[k]
    }

    /// Source extensions `[a′, b]` of interval `k` that belong to the family.
    pub fn source_extensions(&self, k: usize) -> &[usize] {
        &self.down[k]
    }

    /// All one-step extensions of interval `k`, target extensions first.
    pub fn extensions(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[k].iter().chain(self.down[k].iter()).copied()
    }

    pub fn contains(&self, inner: usize, outer: usize) -> bool {
        let (i, o) = (&self.intervals[inner], &self.intervals[outer]);
        self.poset.leq(o.low, i.low) && self.poset.leq(i.high, o.high)
    }

    pub fn max_length(&self) -> usize {
        self.intervals.iter().map(|i| i.length).max().unwrap_or(0)
    }

    pub fn of_length(&self, k: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.intervals[i].length == k).collect()
    }

    pub fn label(&self, k: usize) -> String {
        let i = &self.intervals[k];
        format!("[{},{}]", self.poset.label(i.low), self.poset.label(i.high))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.low, self.high)
    }
}
