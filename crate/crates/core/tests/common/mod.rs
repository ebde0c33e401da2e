#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use aqcube_core::cube_cat::cube_poset;
use aqcube_core::posets::{check_graded, FinitePoset, GradedPoset};
use aqcube_core::{Cell, CoefficientSystem, CubicalComplex, FGAbelianGroup, GroupHom, IntMatrix, IntervalFamily};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Orders of the generators of a group built by `random_group`: 0 for free.
#[derive(Clone, Debug)]
pub struct Shape(pub Vec<u64>);

impl Shape {
    pub fn group(&self) -> FGAbelianGroup {
        let free = self.0.iter().filter(|&&t| t == 0).count();
        let torsion: Vec<BigInt> = self.0.iter().filter(|&&t| t > 0).map(|&t| BigInt::from(t)).collect();
        FGAbelianGroup::from_invariants(free, &torsion).unwrap()
    }

    /// Generator orders in the layout used by `from_invariants`: free generators first.
    fn layout(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.0.iter().copied().filter(|&t| t == 0).collect();
        v.extend(self.0.iter().copied().filter(|&t| t > 0));
        v
    }
}

/// Up to three cyclic summands, each free or of order 2..=12.
pub fn random_shape(r: &mut TestRng) -> Shape {
    let k = r.gen_range(1..=3);
    Shape((0..k).map(|_| if r.gen_bool(0.4) { 0 } else { r.gen_range(2..=12) }).collect())
}

/// Smallest positive multiple needed in entry (i, j) of an endomorphism so that the
/// generator of order `tj` lands in a multiple of the order `ti`.
fn step(ti: u64, tj: u64) -> Option<i64> {
    match (ti, tj) {
        (0, 0) => Some(1),
        (0, _) => None,
        (_, 0) => Some(1),
        (ti, tj) => Some((ti / ti.gcd(&tj)) as i64),
    }
}

pub fn random_endo(r: &mut TestRng, shape: &Shape, bound: i64) -> IntMatrix {
    let t = shape.layout();
    let n = t.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if let Some(s) = step(t[i], t[j]) {
                m[(i, j)] = BigInt::from(s * r.gen_range(-bound..=bound));
            }
        }
    }
    m
}

/// A random automorphism `(φ, φ⁻¹)`: signs on the diagonal times `I + E`, `E` strictly
/// upper triangular.
pub fn random_auto(r: &mut TestRng, shape: &Shape) -> (IntMatrix, IntMatrix) {
    let t = shape.layout();
    let n = t.len();
    let mut e = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if let Some(s) = step(t[i], t[j]) {
                e[(i, j)] = BigInt::from(s * r.gen_range(-2..=2));
            }
        }
    }
    let id = IntMatrix::identity(n);
    let u = id.add(&e);
    // (I + E)⁻¹ = Σ (−E)^k, finite since E is nilpotent
    let neg = e.scaled(&BigInt::from(-1));
    let mut inv = id.clone();
    let mut pow = id.clone();
    for _ in 0..n {
        pow = &pow * &neg;
        inv = inv.add(&pow);
    }
    let mut d = IntMatrix::identity(n);
    for i in 0..n {
        if r.gen_bool(0.5) {
            d[(i, i)] = BigInt::from(-1);
        }
    }
    (&d * &u, &inv * &d)
}

pub enum SystemKind {
    Constant,
    Commuting,
    Zero,
}

/// A valid system on `family`: constant, built from a commuting pair of endomorphisms
/// (one for target steps, one for source steps) conjugated per interval, or all-zero maps
/// between independent groups.
pub fn random_system(r: &mut TestRng, family: Arc<IntervalFamily>, kind: SystemKind) -> CoefficientSystem {
    match kind {
        SystemKind::Constant => {
            let g = random_shape(r).group();
            CoefficientSystem::constant(family, &g)
        }
        SystemKind::Zero => {
            let groups: Vec<FGAbelianGroup> = (0..family.len()).map(|_| random_shape(r).group()).collect();
            let mut maps = HashMap::new();
            for k in 0..family.len() {
                for e in family.extensions(k) {
                    maps.insert((k, e), GroupHom::zero(&groups[k], &groups[e]));
                }
            }
            CoefficientSystem::new(family, groups, maps).unwrap()
        }
        SystemKind::Commuting => {
            let shape = random_shape(r);
            let g = shape.group();
            let m = random_endo(r, &shape, 2);
            let n = IntMatrix::identity(m.rows())
                .scaled(&BigInt::from(r.gen_range(-2..=2)))
                .add(&m.scaled(&BigInt::from(r.gen_range(-1..=1))));
            let autos: Vec<(IntMatrix, IntMatrix)> = (0..family.len()).map(|_| random_auto(r, &shape)).collect();
            let mut maps = HashMap::new();
            for k in 0..family.len() {
                for &e in family.target_extensions(k) {
                    let mat = &(&autos[e].0 * &m) * &autos[k].1;
                    maps.insert((k, e), GroupHom::new(g.clone(), g.clone(), mat).unwrap());
                }
                for &e in family.source_extensions(k) {
                    let mat = &(&autos[e].0 * &n) * &autos[k].1;
                    maps.insert((k, e), GroupHom::new(g.clone(), g.clone(), mat).unwrap());
                }
            }
            CoefficientSystem::new(family, vec![g; autos.len()], maps).unwrap()
        }
    }
}

pub fn any_system(r: &mut TestRng, family: Arc<IntervalFamily>) -> CoefficientSystem {
    let kind = match r.gen_range(0..4) {
        0 => SystemKind::Constant,
        1 => SystemKind::Zero,
        _ => SystemKind::Commuting,
    };
    random_system(r, family, kind)
}

/// Random face-closed subcomplex of `[1]^n` with at most `max_cells` cells.
pub fn random_subcomplex(r: &mut TestRng, n: usize, max_cells: usize) -> CubicalComplex {
    let all = CubicalComplex::full_cube(n).cells().to_vec();
    loop {
        let k = r.gen_range(1..=4);
        let picks: Vec<Cell> = all.choose_multiple(r, k).copied().collect();
        let c = CubicalComplex::closure(n, picks).unwrap();
        if c.cells().len() <= max_cells {
            return c;
        }
    }
}

pub enum PosetKind {
    Chain(usize),
    Cube(usize),
    ChainProduct(usize, usize),
}

pub fn graded(kind: &PosetKind) -> GradedPoset {
    match *kind {
        PosetKind::Chain(k) => check_graded(FinitePoset::chain(k)).unwrap(),
        PosetKind::Cube(m) => cube_poset(m),
        PosetKind::ChainProduct(a, b) => check_graded(FinitePoset::chain(a).product(&FinitePoset::chain(b))).unwrap(),
    }
}

/// Random relation on up to `max` elements (edges only go from lower to higher index, so
/// the closure is always a partial order).
pub fn random_poset(r: &mut TestRng, max: usize) -> FinitePoset {
    let n = r.gen_range(1..=max);
    let p = r.gen_range(0.1..0.6);
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(p) {
                rel.push((i, j));
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    FinitePoset::from_relations(labels, &rel).unwrap()
}

pub fn random_vector(r: &mut TestRng, len: usize, bound: i64) -> Vec<BigInt> {
    (0..len).map(|_| BigInt::from(r.gen_range(-bound..=bound))).collect()
}

pub fn random_matrix(r: &mut TestRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(cols, &data).unwrap()
}
