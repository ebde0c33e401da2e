//! Finite cubical complexes, given as face-closed sets of faces of an ambient cube
//! `[1]^N`, and the cochain complex of a coefficient system on their cell intervals.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::abgrp::{snf, CochainComplex, FGAbelianGroup, GroupHom, IntMatrix, Term};
use crate::aq_complex::{build, Orientation};
use crate::error::{Error, Result};
use crate::local_system::CoefficientSystem;
use crate::posets::{CubeCoordinates, FinitePoset, IntervalFamily};

/// A face of the ambient cube: coordinates in `free` vary, the others are fixed to the
/// bits of `base`. Masks use the same bit order as vertices (coordinate `i` is bit `N-i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub base: u32,
    pub free: u32,
}

impl Cell {
    pub fn new(base: u32, free: u32) -> Self {
        Cell {
            base: base & !free,
            free,
        }
    }

    pub fn vertex(v: u32) -> Self {
        Cell { base: v, free: 0 }
    }

    pub fn dim(&self) -> usize {
        self.free.count_ones() as usize
    }

    pub fn top(&self) -> u32 {
        self.base | self.free
    }

    /// Parses strings like `"0*1"`.
    pub fn parse(s: &str) -> Result<(usize, Cell)> {
        let mut base = 0;
        let mut free = 0;
        for c in s.chars() {
            base <<= 1;
            free <<= 1;
            match c {
                '0' => {}
                '1' => base |= 1,
                '*' => free |= 1,
                _ => return Err(Error::InvalidInput(format!("bad cell {s:?}: expected 0, 1 or *"))),
            }
        }
        let dim = s.chars().count();
        if dim > 31 {
            return Err(Error::InvalidInput(format!("cell {s:?} has too many coordinates")));
        }
        Ok((dim, Cell { base, free }))
    }

    pub fn label(&self, ambient: usize) -> String {
        (1..=ambient)
            .map(|i| {
                let bit = 1 << (ambient - i);
                if self.free & bit != 0 {
                    '*'
                } else if self.base & bit != 0 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    pub fn contains_vertex(&self, v: u32) -> bool {
        v & !self.free == self.base
    }

    /// `self` is a face of `other`.
    pub fn is_face_of(&self, other: &Cell) -> bool {
        self.free & !other.free == 0 && other.contains_vertex(self.base)
    }

    /// The `2·dim` codimension-one faces.
    pub fn facets(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for b in (0..32).rev() {
            let bit = 1u32 << b;
            if self.free & bit != 0 {
                out.push(Cell::new(self.base, self.free & !bit));
                out.push(Cell::new(self.base | bit, self.free & !bit));
            }
        }
        out
    }

    /// All faces including the cell itself.
    pub fn faces(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        let mut sub = self.free;
        loop {
            // `sub` stays free, the rest of `free` is fixed in every possible way
            let fixed = self.free & !sub;
            let mut pick = fixed;
            loop {
                out.push(Cell::new(self.base | pick, sub));
                if pick == 0 {
                    break;
                }
                pick = (pick - 1) & fixed;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.free;
        }
        out
    }
}

fn cell_order(c: &Cell) -> (usize, u32, u32) {
    (c.dim(), c.base, c.free)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalComplex {
    ambient: usize,
    cells: Vec<Cell>,
}

/// Result of checking a cell set for face-closure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexReport {
    /// `(cell, face)` pairs where `face` is absent; one entry per missing face.
    pub missing: Vec<(String, String)>,
    /// Intervals of positive length lying in several maximal cells, with those cells.
    pub shared: Vec<(String, Vec<String>)>,
}

impl ComplexReport {
    pub fn is_ok(&self) -> bool {
        self.missing.is_empty()
    }
}

impl CubicalComplex {
    /// Cells are deduplicated and sorted; face-closure is not enforced (see
    /// [`validate_complex`]).
    pub fn new(ambient: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        if ambient > 31 {
            return Err(Error::InvalidInput(format!("ambient dimension {ambient} is too large")));
        }
        let limit = ((1u64 << ambient) - 1) as u32;
        let set: BTreeSet<Cell> = cells.into_iter().collect();
        let mut cells: Vec<Cell> = set.into_iter().collect();
        for c in &cells {
            if (c.base | c.free) & !limit != 0 || c.base & c.free != 0 {
                return Err(Error::InvalidInput(format!(
                    "cell does not fit in [1]^{ambient}: base {:b}, free {:b}",
                    c.base, c.free
                )));
            }
        }
        cells.sort_by_key(cell_order);
        Ok(CubicalComplex { ambient, cells })
    }

    pub fn parse(ambient: usize, cells: &[&str]) -> Result<Self> {
        let mut out = Vec::new();
        for s in cells {
            let (d, c) = Cell::parse(s)?;
            if d != ambient {
                return Err(Error::DimensionMismatch {
                    context: format!("cell {s:?}"),
                    expected: ambient,
                    found: d,
                });
            }
            out.push(c);
        }
        Self::new(ambient, out)
    }

    /// The smallest complex containing `cells`.
    pub fn closure(ambient: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let all: Vec<Cell> = cells.into_iter().flat_map(|c| c.faces()).collect();
        Self::new(ambient, all)
    }

    pub fn full_cube(n: usize) -> Self {
        Self::closure(n, [Cell::new(0, (1u32 << n) - 1)]).expect("cube fits")
    }

    /// All proper faces of `[1]^n`.
    pub fn boundary_cube(n: usize) -> Self {
        let top = Cell::new(0, (1u32 << n) - 1);
        Self::new(n, top.faces().into_iter().filter(|c| c.dim() < n)).expect("faces fit")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.cells.binary_search_by_key(&cell_order(c), cell_order).is_ok()
    }

    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(Cell::dim).max()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dim().map_or(0, |d| d + 1)];
        for c in &self.cells {
            counts[c.dim()] += 1;
        }
        counts
    }

    pub fn maximal_cells(&self) -> Vec<Cell> {
        self.cells
            .iter()
            .filter(|c| !self.cells.iter().any(|d| d != *c && c.is_face_of(d)))
            .copied()
            .collect()
    }

    /// Vertex masks, ascending.
    pub fn vertices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.cells.iter().flat_map(|c| c.faces()).filter(|c| c.dim() == 0).map(|c| c.base).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn label(&self, c: &Cell) -> String {
        c.label(self.ambient)
    }

    /// Pairs `low ≤ high` of vertices lying together in some cell, as masks.
    pub fn cell_intervals(&self) -> Vec<(u32, u32)> {
        let mut set = BTreeSet::new();
        for c in &self.cells {
            let mut t = c.free;
            loop {
                let mut s = t;
                loop {
                    set.insert((c.base | s, c.base | t));
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & t;
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & c.free;
            }
        }
        set.into_iter().collect()
    }

    /// Intervals between the vertices of the complex that lie inside some cell. Elements
    /// are the vertices in ascending mask order, ordered by the edges of the complex.
    pub fn interval_family(&self) -> IntervalFamily {
        let verts = self.vertices();
        let pos: HashMap<u32, usize> = verts.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let labels = verts.iter().map(|&v| Cell::vertex(v).label(self.ambient)).collect();
        let edges: Vec<(usize, usize)> = self
            .cells
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| (pos[&c.base], pos[&c.top()]))
            .collect();
        let poset = FinitePoset::from_relations(labels, &edges).expect("edges go up");
        let intervals = self
            .cell_intervals()
            .into_iter()
            .map(|(a, b)| (pos[&a], pos[&b], (a ^ b).count_ones() as usize))
            .collect();
        IntervalFamily::new(
            poset,
            Some(CubeCoordinates {
                dim: self.ambient,
                masks: verts,
            }),
            intervals,
        )
    }
}

impl fmt::Display for CubicalComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.cells.iter().map(|c| self.label(c)).collect();
        write!(f, "{{{}}}", labels.join(", "))
    }
}

/// Face-closure check plus a list of intervals that several maximal cells share.
pub fn validate_complex(k: &CubicalComplex) -> ComplexReport {
    let mut report = ComplexReport::default();
    let mut reported = BTreeSet::new();
    for c in &k.cells {
        let mut faces = c.faces();
        faces.sort_by_key(cell_order);
        for f in faces {
            if !k.contains(&f) && reported.insert(f) {
                report.missing.push((k.label(c), k.label(&f)));
            }
        }
    }
    let maximal = k.maximal_cells();
    let mut shared: BTreeMap<(u32, u32), Vec<String>> = BTreeMap::new();
    for c in &k.cells {
        if c.dim() == 0 {
            continue;
        }
        let owners: Vec<String> = maximal.iter().filter(|m| c.is_face_of(m)).map(|m| k.label(m)).collect();
        if owners.len() > 1 {
            shared.insert((c.base, c.top()), owners);
        }
    }
    report.shared = shared
        .into_iter()
        .map(|((a, b), owners)| {
            (
                format!("[{},{}]", Cell::vertex(a).label(k.ambient), Cell::vertex(b).label(k.ambient)),
                owners,
            )
        })
        .collect();
    report
}

/// Cells ordered by face containment.
pub fn nd_cube_poset(k: &CubicalComplex) -> FinitePoset {
    let labels = k.cells.iter().map(|c| k.label(c)).collect();
    let mut rel = Vec::new();
    for (i, c) in k.cells.iter().enumerate() {
        for (j, d) in k.cells.iter().enumerate() {
            if i != j && c.is_face_of(d) {
                rel.push((i, j));
            }
        }
    }
    FinitePoset::from_relations(labels, &rel).expect("face containment is a partial order")
}

fn check_system(k: &CubicalComplex, system: &CoefficientSystem) -> Result<()> {
    let fam = k.interval_family();
    let own = system.family();
    if own.poset() != fam.poset() || own.intervals() != fam.intervals() {
        return Err(Error::BaseMismatch(format!("the cubical complex {k}")));
    }
    Ok(())
}

/// One summand per cell interval; length-`k` term in degree `k - n`.
pub fn build_limit_complex(k: &CubicalComplex, system: &CoefficientSystem, n: usize) -> Result<CochainComplex> {
    let report = validate_complex(k);
    if let Some((cell, face)) = report.missing.first() {
        return Err(Error::InvalidInput(format!("cell {cell} is missing its face {face}")));
    }
    check_system(k, system)?;
    system
        .validate()
        .map_err(|v| Error::NotFunctorial(v.to_string()))?;
    build(system, -(n as i64))
}

/// The limit computed literally: the product over all cells of the cube complexes,
/// cut down to the tuples that agree under every restriction to a facet.
///
/// The agreement conditions only relate copies of the same interval in different cells,
/// so the equalizer is computed one interval at a time.
pub fn equalizer_oracle(k: &CubicalComplex, system: &CoefficientSystem, n: usize) -> Result<CochainComplex> {
    check_system(k, system)?;
    let fam = system.family();
    let masks = &fam.coordinates().expect("complex families carry coordinates").masks;
    let orientation = Orientation::for_family(fam)?;
    let inside = |c: &Cell, i: usize| {
        let iv = fam.get(i);
        c.contains_vertex(masks[iv.low]) && c.contains_vertex(masks[iv.high])
    };
    let cell_index: HashMap<Cell, usize> = k.cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();

    // Per interval: the cells containing it, the equalizer lattice basis (columns over the
    // copies of the interval's group), and its Smith form for solving.
    struct Block {
        cells: Vec<usize>,
        basis: IntMatrix,
        form: crate::abgrp::SmithForm,
        group: FGAbelianGroup,
    }
    let mut blocks = Vec::with_capacity(fam.len());
    for i in 0..fam.len() {
        let a = system.group(i);
        let g = a.generators();
        let cells: Vec<usize> = (0..k.cells.len()).filter(|&c| inside(&k.cells[c], i)).collect();
        let slot: HashMap<usize, usize> = cells.iter().enumerate().map(|(s, &c)| (c, s)).collect();
        let product = FGAbelianGroup::direct_sum(std::iter::repeat_n(a, cells.len()));
        // x_σ − x_τ for every cell σ ∋ I and facet τ of σ with τ ∋ I
        let mut pairs = Vec::new();
        for &c in &cells {
            for f in k.cells[c].facets() {
                if let Some(&fi) = cell_index.get(&f) {
                    if let Some(&sf) = slot.get(&fi) {
                        pairs.push((slot[&c], sf));
                    }
                }
            }
        }
        let target = FGAbelianGroup::direct_sum(std::iter::repeat_n(a, pairs.len()));
        let mut diff = IntMatrix::zeros(target.generators(), product.generators());
        let id = IntMatrix::identity(g);
        let neg = id.scaled(&(-1).into());
        for (r, &(sc, sf)) in pairs.iter().enumerate() {
            diff.set_block(r * g, sc * g, &id);
            diff.set_block(r * g, sf * g, &neg);
        }
        let lattice = snf(&diff.hstack(target.relations())).kernel_basis().top_rows(product.generators());
        let basis = snf(&lattice).image_basis();
        let form = snf(&basis);
        let rel_coords: Vec<_> = product
            .relations()
            .columns()
            .map(|col| form.solve(&col).expect("relations lie in the equalizer"))
            .collect();
        let group = FGAbelianGroup::new(basis.cols(), IntMatrix::from_columns(basis.cols(), &rel_coords))?;
        blocks.push(Block {
            cells,
            basis,
            form,
            group,
        });
    }

    let top = fam.max_length();
    let by_length: Vec<Vec<usize>> = (0..=top).map(|len| fam.of_length(len)).collect();
    let mut starts = vec![0usize; fam.len()];
    let mut terms = Vec::new();
    for ids in &by_length {
        let mut off = 0;
        for &i in ids {
            starts[i] = off;
            off += blocks[i].group.generators();
        }
        let group = FGAbelianGroup::direct_sum(ids.iter().map(|&i| &blocks[i].group));
        terms.push(Term::new(vec![("equalizer".to_string(), group)]));
    }

    let mut differentials = Vec::new();
    for len in 0..top {
        let mut m = IntMatrix::zeros(terms[len + 1].group().generators(), terms[len].group().generators());
        for &i in &by_length[len] {
            let bi = &blocks[i];
            let g = system.group(i).generators();
            for e in fam.extensions(i) {
                let be = &blocks[e];
                let ge = system.group(e).generators();
                let map = system.map(i, e).expect("cover maps exist").matrix();
                let map = map.scaled(&orientation.sign(i, e).into());
                // product differential from the copies of I to the copies of E, cell by cell
                let mut d = IntMatrix::zeros(be.cells.len() * ge, bi.cells.len() * g);
                for (se, c) in be.cells.iter().enumerate() {
                    let si = bi.cells.iter().position(|x| x == c).expect("cells containing E contain I");
                    d.set_block(se * ge, si * g, &map);
                }
                let image = &d * &bi.basis;
                for (col, v) in image.columns().enumerate() {
                    let coords = be.form.solve(&v).expect("differential preserves the equalizer");
                    for (row, x) in coords.into_iter().enumerate() {
                        m[(starts[e] + row, starts[i] + col)] += x;
                    }
                }
            }
        }
        differentials.push(GroupHom::new(terms[len].group().clone(), terms[len + 1].group().clone(), m)?);
    }
    CochainComplex::new(-(n as i64), terms, differentials)
}

/// The coefficient system on `k` that is constant with value `group`.
pub fn constant_on(k: &CubicalComplex, group: &FGAbelianGroup) -> CoefficientSystem {
    CoefficientSystem::constant(Arc::new(k.interval_family()), group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::cohomology_at;
    use crate::aq_complex::build_cube_cphi;
    use crate::cube_cat::cube_poset;
    use crate::local_system::constant_system;

    fn z() -> FGAbelianGroup {
        FGAbelianGroup::free(1)
    }

    #[test]
    fn parse_and_label() {
        let (d, c) = Cell::parse("0*1").unwrap();
        assert_eq!(d, 3);
        assert_eq!(c, Cell::new(0b001, 0b010));
        assert_eq!(c.label(3), "0*1");
        assert!(Cell::parse("0x1").is_err());
        assert_eq!(c.faces().len(), 3);
        assert_eq!(Cell::new(0, 0b111).faces().len(), 27);
    }

    #[test]
    fn validation() {
        assert!(validate_complex(&CubicalComplex::full_cube(2)).is_ok());
        let lone = CubicalComplex::parse(2, &["**"]).unwrap();
        let r = validate_complex(&lone);
        assert_eq!(r.missing.len(), 8);
        assert!(validate_complex(&CubicalComplex::boundary_cube(3)).is_ok());
    }

    #[test]
    fn boundary_counts() {
        assert_eq!(CubicalComplex::boundary_cube(1).cell_counts(), vec![2]);
        assert_eq!(CubicalComplex::boundary_cube(2).cells().len(), 8);
        assert_eq!(CubicalComplex::boundary_cube(3).cell_counts(), vec![8, 12, 6]);
    }

    #[test]
    fn nd_posets() {
        let pt = CubicalComplex::parse(2, &["01"]).unwrap();
        assert_eq!(nd_cube_poset(&pt).len(), 1);
        let b2 = CubicalComplex::boundary_cube(2);
        assert_eq!(nd_cube_poset(&b2).len(), 8);
        assert_eq!(b2.maximal_cells().len(), 4);
        let c3 = CubicalComplex::full_cube(3);
        assert_eq!(nd_cube_poset(&c3).len(), 27);
        assert_eq!(c3.maximal_cells().len(), 1);
    }

    #[test]
    fn full_cube_matches_cube_complex() {
        for m in 0..=3 {
            let k = CubicalComplex::full_cube(m);
            assert_eq!(k.interval_family(), cube_poset(m).interval_family());
            let s = constant_on(&k, &z());
            let a = build_limit_complex(&k, &s, 1).unwrap();
            let b = build_cube_cphi(m, &constant_system(&cube_poset(m), &z()), 1).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn square_boundary() {
        let k = CubicalComplex::boundary_cube(2);
        let s = constant_on(&k, &z());
        let c = build_limit_complex(&k, &s, 2).unwrap();
        assert_eq!(c.support(), vec![-2, -1]);
        assert_eq!(c.terms()[0].group().generators(), 4);
        assert_eq!(c.terms()[1].group().generators(), 4);
        assert_eq!(cohomology_at(&c, -2).unwrap().invariants().to_string(), "ℤ");
        assert_eq!(cohomology_at(&c, -1).unwrap().invariants().to_string(), "ℤ");
        let eq = equalizer_oracle(&k, &s, 2).unwrap();
        for d in -2..=0 {
            assert_eq!(
                cohomology_at(&c, d).unwrap().invariants(),
                cohomology_at(&eq, d).unwrap().invariants()
            );
        }
    }

    #[test]
    fn cube_boundary_intervals() {
        let k = CubicalComplex::boundary_cube(3);
        let fam = k.interval_family();
        let counts: Vec<usize> = (0..=2).map(|l| fam.of_length(l).len()).collect();
        assert_eq!(counts, vec![8, 12, 6]);
        let s = constant_on(&k, &z());
        let c = build_limit_complex(&k, &s, 1).unwrap();
        assert_eq!(cohomology_at(&c, -1).unwrap().invariants().to_string(), "ℤ");
        assert!(cohomology_at(&c, 0).unwrap().invariants().is_trivial());
        assert_eq!(cohomology_at(&c, 1).unwrap().invariants().to_string(), "ℤ");
    }

    #[test]
    fn shared_intervals_flagged() {
        let r = validate_complex(&CubicalComplex::boundary_cube(3));
        // every edge lies in exactly two square faces
        assert_eq!(r.shared.len(), 12);
        assert!(r.shared.iter().all(|(_, owners)| owners.len() == 2));
    }

    #[test]
    fn edge_oracle() {
        let k = CubicalComplex::full_cube(1);
        let s = constant_on(&k, &z());
        let a = build_limit_complex(&k, &s, 0).unwrap();
        let b = equalizer_oracle(&k, &s, 0).unwrap();
        for d in 0..=1 {
            assert_eq!(
                cohomology_at(&a, d).unwrap().invariants(),
                cohomology_at(&b, d).unwrap().invariants()
            );
        }
    }
}
