use std::fmt;

use crate::error::{Error, Result};
use crate::posets::{check_graded, FinitePoset, GradedPoset};

/// The generating maps. `n` is the dimension of the larger cube involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `[1]^{n-1} → [1]^n`, inserting `eps` at slot `i`.
    Face { n: usize, i: usize, eps: u8 },
    /// `[1]^n → [1]^{n-1}`, forgetting slot `i`.
    Degeneracy { n: usize, i: usize },
    /// `[1]^n → [1]^{n-1}`, merging slots `i, i+1` (max for `eps = 0`, min for `eps = 1`).
    Connection { n: usize, i: usize, eps: u8 },
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Face { i, eps, .. } => write!(f, "d_{{{i},{eps}}}"),
            Generator::Degeneracy { i, .. } => write!(f, "σ_{i}"),
            Generator::Connection { i, eps, .. } => write!(f, "γ_{{{i},{eps}}}"),
        }
    }
}

/// A map `[1]^source → [1]^target`, stored by its action on vertices.
///
/// Vertices are bit masks; coordinate `i` (1-based) of a `d`-cube is bit `d - i`, so the
/// integer order of masks is the lexicographic order of the strings `x₁x₂…x_d`.
#[derive(Clone, Debug)]
pub struct CubeMap {
    source: usize,
    target: usize,
    action: Vec<u32>,
    /// Generators in composition order: `word[0] ∘ word[1] ∘ …`.
    word: Vec<Generator>,
}

impl PartialEq for CubeMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.action == other.action
    }
}

impl Eq for CubeMap {}

fn to_bits(mask: u32, dim: usize) -> Vec<u8> {
    (1..=dim).map(|i| ((mask >> (dim - i)) & 1) as u8).collect()
}

fn from_bits(bits: &[u8]) -> u32 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u32)
}

/// `x₁x₂…x_d` for a vertex mask.
pub fn bits_label(mask: u32, dim: usize) -> String {
    to_bits(mask, dim).iter().map(|b| char::from(b'0' + b)).collect()
}

fn check_index(context: &str, i: usize, hi: usize) -> Result<()> {
    if i == 0 || i > hi {
        return Err(Error::IndexOutOfRange {
            context: context.into(),
            index: i,
            range: format!("1..={hi}"),
        });
    }
    Ok(())
}

fn check_eps(eps: u8) -> Result<()> {
    if eps > 1 {
        return Err(Error::InvalidInput(format!("ε must be 0 or 1, got {eps}")));
    }
    Ok(())
}

impl CubeMap {
    fn from_fn(source: usize, target: usize, word: Vec<Generator>, f: impl Fn(&[u8]) -> Vec<u8>) -> Self {
        let action = (0..1u32 << source)
            .map(|x| from_bits(&f(&to_bits(x, source))))
            .collect();
        CubeMap {
            source,
            target,
            action,
            word,
        }
    }

    pub fn identity(n: usize) -> Self {
        CubeMap {
            source: n,
            target: n,
            action: (0..1u32 << n).collect(),
            word: Vec::new(),
        }
    }

    pub fn face(n: usize, i: usize, eps: u8) -> Result<Self> {
        check_index("face index", i, n)?;
        check_eps(eps)?;
        Ok(Self::from_fn(n - 1, n, vec![Generator::Face { n, i, eps }], |x| {
            let mut y = x.to_vec();
            y.insert(i - 1, eps);
            y
        }))
    }

    pub fn degeneracy(n: usize, i: usize) -> Result<Self> {
        check_index("degeneracy index", i, n)?;
        Ok(Self::from_fn(n, n - 1, vec![Generator::Degeneracy { n, i }], |x| {
            let mut y = x.to_vec();
            y.remove(i - 1);
            y
        }))
    }

    pub fn connection(n: usize, i: usize, eps: u8) -> Result<Self> {
        check_index("connection index", i, n.saturating_sub(1))?;
        check_eps(eps)?;
        Ok(Self::from_fn(n, n - 1, vec![Generator::Connection { n, i, eps }], |x| {
            let mut y = x.to_vec();
            let merged = if eps == 0 {
                x[i - 1].max(x[i])
            } else {
                x[i - 1].min(x[i])
            };
            y[i - 1] = merged;
            y.remove(i);
            y
        }))
    }

    /// `g ∘ f`.
    pub fn compose(g: &CubeMap, f: &CubeMap) -> Result<Self> {
        if f.target != g.source {
            return Err(Error::DimensionMismatch {
                context: "cube map composition".into(),
                expected: g.source,
                found: f.target,
            });
        }
        let mut word = g.word.clone();
        word.extend_from_slice(&f.word);
        Ok(CubeMap {
            source: f.source,
            target: g.target,
            action: f.action.iter().map(|&x| g.action[x as usize]).collect(),
            word,
        })
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    pub fn apply(&self, vertex: u32) -> u32 {
        self.action[vertex as usize]
    }

    pub fn action(&self) -> &[u32] {
        &self.action
    }

    /// Injective on vertices, i.e. a composite of faces.
    pub fn is_face_composite(&self) -> bool {
        let mut seen = vec![false; 1 << self.target];
        self.action.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    pub fn is_monotone(&self) -> bool {
        (0..self.action.len()).all(|x| {
            (0..self.action.len())
                .filter(|&y| x & !y == 0)
                .all(|y| self.action[x] & !self.action[y] == 0)
        })
    }
}

/// `[1]^n` with the coordinatewise order; element index = vertex mask.
pub fn cube_poset(n: usize) -> GradedPoset {
    let size = 1usize << n;
    let labels = (0..size as u32).map(|x| bits_label(x, n)).collect();
    let mut rel = Vec::new();
    for x in 0..size {
        for b in 0..n {
            if x & (1 << b) == 0 {
                rel.push((x, x | (1 << b)));
            }
        }
    }
    let p = FinitePoset::from_relations(labels, &rel).expect("cube order is a partial order");
    check_graded(p)
        .expect("cubes are graded")
        .with_cube_coordinates(n, (0..size as u32).collect())
        .expect("cube covers flip one bit")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_formulas() {
        let d = CubeMap::face(2, 1, 0).unwrap();
        // x ↦ (0, x)
        assert_eq!(d.action(), &[0b00, 0b01]);
        let g = CubeMap::connection(2, 1, 0).unwrap();
        assert_eq!(g.action(), &[0, 1, 1, 1]);
        let g1 = CubeMap::connection(2, 1, 1).unwrap();
        assert_eq!(g1.action(), &[0, 0, 0, 1]);
        let s = CubeMap::degeneracy(1, 1).unwrap();
        assert_eq!((s.source(), s.target()), (1, 0));
        assert_eq!(s.action(), &[0, 0]);
    }

    #[test]
    fn index_errors() {
        assert!(CubeMap::face(2, 3, 0).is_err());
        assert!(CubeMap::face(2, 0, 0).is_err());
        assert!(CubeMap::connection(2, 2, 0).is_err());
        assert!(CubeMap::degeneracy(0, 1).is_err());
        assert!(CubeMap::face(2, 1, 2).is_err());
    }

    #[test]
    fn compositions() {
        let id1 = CubeMap::identity(1);
        let s = CubeMap::degeneracy(1, 1).unwrap();
        let d = CubeMap::face(1, 1, 0).unwrap();
        assert_eq!(CubeMap::compose(&s, &d).unwrap(), CubeMap::identity(0));

        let d21 = CubeMap::face(2, 1, 0).unwrap();
        let g = CubeMap::connection(2, 1, 0).unwrap();
        let c = CubeMap::compose(&g, &d21).unwrap();
        assert_eq!(c, id1);
        assert_eq!(c.word().len(), 2);

        let dd = CubeMap::compose(&CubeMap::face(2, 1, 0).unwrap(), &d).unwrap();
        assert_eq!(dd.action(), &[0b00]);
        assert!(CubeMap::compose(&d, &d).is_err());
    }

    #[test]
    fn face_composites() {
        let d = CubeMap::compose(&CubeMap::face(3, 2, 1).unwrap(), &CubeMap::face(2, 1, 0).unwrap())
            .unwrap();
        assert!(d.is_face_composite());
        assert!(CubeMap::identity(3).is_face_composite());
        assert!(!CubeMap::degeneracy(2, 1).unwrap().is_face_composite());
        assert!(!CubeMap::connection(3, 2, 1).unwrap().is_face_composite());
    }

    #[test]
    fn cube_posets() {
        assert_eq!(cube_poset(0).len(), 1);
        let c3 = cube_poset(3);
        assert_eq!(c3.length(0, 7), Some(3));
        assert_eq!(c3.poset().label(5), "101");
        assert_eq!(cube_poset(2).intervals().len(), 9);
    }
}
