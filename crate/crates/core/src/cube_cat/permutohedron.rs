use itertools::Itertools;

/// Faces are ordered set partitions of `{1, …, rank+1}`.
pub type OrderedSetPartition = Vec<Vec<usize>>;

/// Face lattice of the rank-`n` permutohedron (dimension `n`, `(n+1)!` vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Permutohedron {
    rank: usize,
}

impl Permutohedron {
    pub fn new(rank: usize) -> Self {
        Permutohedron { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn ground(&self) -> usize {
        self.rank + 1
    }

    /// Permutations of `1..=n+1`, lexicographic.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        (1..=self.ground()).permutations(self.ground()).collect()
    }

    pub fn vertex_count(&self) -> usize {
        (1..=self.ground()).product()
    }

    /// All faces; dimension of a face is `(n+1) - blocks`.
    pub fn faces(&self) -> Vec<OrderedSetPartition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        ordered_partitions(&(1..=self.ground()).collect::<Vec<_>>(), &mut current, &mut out);
        out
    }

    pub fn face_dimension(&self, face: &OrderedSetPartition) -> usize {
        self.ground() - face.len()
    }

    /// `f_d` for `d = 0..=rank`: ordered set partitions with `n+1-d` blocks, i.e.
    /// `k! S(n+1, k)`.
    pub fn face_counts(&self) -> Vec<u128> {
        let m = self.ground();
        let mut s = vec![vec![0u128; m + 1]; m + 1];
        s[0][0] = 1;
        for i in 1..=m {
            for k in 1..=i {
                s[i][k] = k as u128 * s[i - 1][k] + s[i - 1][k - 1];
            }
        }
        (0..=self.rank)
            .map(|d| {
                let k = m - d;
                (1..=k as u128).product::<u128>() * s[m][k]
            })
            .collect()
    }

    /// Pairs of vertex indices joined by an edge: they differ by swapping two adjacent
    /// positions.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let verts = self.vertices();
        let mut out = Vec::new();
        for (a, u) in verts.iter().enumerate() {
            for (b, v) in verts.iter().enumerate().skip(a + 1) {
                let diff: Vec<usize> = (0..u.len()).filter(|&k| u[k] != v[k]).collect();
                if diff.len() == 2 && diff[1] == diff[0] + 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Euler characteristic of the boundary (all faces but the top one).
    pub fn boundary_euler_characteristic(&self) -> i128 {
        self.face_counts()
            .iter()
            .take(self.rank)
            .enumerate()
            .map(|(d, &f)| if d % 2 == 0 { f as i128 } else { -(f as i128) })
            .sum()
    }

    /// `f ≤ g` in the face lattice iff `g` is obtained from `f` by merging runs of
    /// consecutive blocks.
    pub fn face_leq(f: &OrderedSetPartition, g: &OrderedSetPartition) -> bool {
        let mut blocks = f.iter();
        for target in g {
            let mut merged: Vec<usize> = Vec::new();
            while merged.len() < target.len() {
                match blocks.next() {
                    Some(b) => merged.extend(b),
                    None => return false,
                }
            }
            merged.sort_unstable();
            let mut t = target.clone();
            t.sort_unstable();
            if merged != t {
                return false;
            }
        }
        blocks.next().is_none()
    }
}

fn ordered_partitions(rest: &[usize], current: &mut Vec<Vec<usize>>, out: &mut Vec<OrderedSetPartition>) {
    if rest.is_empty() {
        out.push(current.clone());
        return;
    }
    let n = rest.len();
    for mask in 1u32..(1 << n) {
        let block: Vec<usize> = (0..n).filter(|&k| mask & (1 << k) != 0).map(|k| rest[k]).collect();
        let remaining: Vec<usize> = (0..n).filter(|&k| mask & (1 << k) == 0).map(|k| rest[k]).collect();
        current.push(block);
        ordered_partitions(&remaining, current, out);
        current.pop();
    }
}

/// Shape of the mapping space from vertex `j` to vertex `j2` of the resolved `[1]^n`:
/// `None` unless `j ≤ j2`; a point when they are equal; otherwise the permutohedron of
/// rank `|j| - |j2| - 1`, where `|·|` counts zero coordinates.
pub fn mapping_space_shape(n: usize, j: u32, j2: u32) -> Option<Permutohedron> {
    let zeros = |x: u32| n - x.count_ones() as usize;
    if j & !j2 != 0 {
        return None;
    }
    if j == j2 {
        return Some(Permutohedron::new(0));
    }
    Some(Permutohedron::new(zeros(j) - zeros(j2) - 1))
}
