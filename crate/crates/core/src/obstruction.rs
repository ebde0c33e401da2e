//! Lifting obstructions over the boundary of a cube.
//!
//! Facet classes live on the long intervals of the `2n` facets of `∂□^n`; with
//! coefficient degree `n - 2` those intervals make up the degree-1 term of the limit
//! complex. The obstruction vanishes iff the assembled cocycle is a coboundary.
//!
//! Facets are ordered `(1,0), (1,1), (2,0), …, (n,1)`, where `(i, ε)` fixes coordinate `i`
//! to `ε`. The default signs are `(-1)^(i-1+ε)`: they are the incidence signs of the
//! facets' long intervals in the top interval of the full cube, so the signed transport
//! sum is the top component of the full cube's differential and vanishes on coboundaries.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abgrp::{cohomology_at, write_in_image, Cochain, CochainComplex, FGAbelianGroup, GroupHom};
use crate::cubical_complex::{build_limit_complex, Cell, CubicalComplex};
use crate::error::{Error, Result};
use crate::local_system::CoefficientSystem;

/// `(i, ε)` for the facet `x_i = ε`, in the standard order.
pub fn facet_order(n: usize) -> Vec<(usize, u8)> {
    (1..=n).flat_map(|i| [(i, 0), (i, 1)]).collect()
}

pub fn facet_cell(n: usize, i: usize, eps: u8) -> Cell {
    let bit = 1u32 << (n - i);
    let all = ((1u64 << n) - 1) as u32;
    Cell::new(if eps == 1 { bit } else { 0 }, all & !bit)
}

/// Long interval of a facet, e.g. `"[000,011]"` for `x₁ = 0` in `[1]³`.
pub fn facet_interval_label(n: usize, i: usize, eps: u8) -> String {
    let c = facet_cell(n, i, eps);
    format!(
        "[{},{}]",
        Cell::vertex(c.base).label(n),
        Cell::vertex(c.top()).label(n)
    )
}

pub fn default_signs(n: usize) -> Vec<i8> {
    facet_order(n)
        .into_iter()
        .map(|(i, e)| if (i - 1 + e as usize).is_multiple_of(2) { 1 } else { -1 })
        .collect()
}

/// One element per facet, in facet order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetClasses {
    pub n: usize,
    pub classes: Vec<Vec<BigInt>>,
}

impl FacetClasses {
    pub fn new(n: usize, classes: Vec<Vec<BigInt>>) -> Result<Self> {
        if classes.len() != 2 * n {
            return Err(Error::DimensionMismatch {
                context: "facet classes".into(),
                expected: 2 * n,
                found: classes.len(),
            });
        }
        Ok(FacetClasses { n, classes })
    }

    pub fn zero(n: usize, sizes: &[usize]) -> Self {
        FacetClasses {
            n,
            classes: sizes.iter().map(|&g| vec![BigInt::zero(); g]).collect(),
        }
    }

    pub fn add(&self, other: &FacetClasses) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                context: "facet classes".into(),
                expected: self.n,
                found: other.n,
            });
        }
        let classes = self
            .classes
            .iter()
            .zip(&other.classes)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(FacetClasses { n: self.n, classes })
    }
}

/// Maps from each facet's group to a common group, with a sign per facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportData {
    pub target: FGAbelianGroup,
    pub maps: Vec<GroupHom>,
    pub signs: Vec<i8>,
}

impl TransportData {
    pub fn new(target: FGAbelianGroup, maps: Vec<GroupHom>, signs: Vec<i8>) -> Result<Self> {
        if maps.len() != signs.len() {
            return Err(Error::DimensionMismatch {
                context: "transport signs".into(),
                expected: maps.len(),
                found: signs.len(),
            });
        }
        if let Some(k) = maps.iter().position(|m| m.target() != &target) {
            return Err(Error::InvalidInput(format!("transport {k} does not land in the common group")));
        }
        if let Some(k) = signs.iter().position(|s| s.abs() != 1) {
            return Err(Error::InvalidInput(format!("transport sign {k} is not ±1")));
        }
        Ok(TransportData { target, maps, signs })
    }

    /// Identity maps on `group` with the default signs.
    pub fn identity(n: usize, group: &FGAbelianGroup) -> Self {
        TransportData {
            target: group.clone(),
            maps: vec![GroupHom::identity(group); 2 * n],
            signs: default_signs(n),
        }
    }

    pub fn negated(&self) -> Self {
        TransportData {
            signs: self.signs.iter().map(|s| -s).collect(),
            ..self.clone()
        }
    }
}

/// `Σ s_ρ · t_ρ(α_ρ)`, in normal form in the common group.
pub fn total_class(f: &FacetClasses, t: &TransportData) -> Result<Vec<BigInt>> {
    if t.maps.len() != f.classes.len() {
        return Err(Error::DimensionMismatch {
            context: "transports".into(),
            expected: f.classes.len(),
            found: t.maps.len(),
        });
    }
    let mut sum = t.target.zero_element();
    for ((alpha, map), &sign) in f.classes.iter().zip(&t.maps).zip(&t.signs) {
        let image = map.apply(alpha)?;
        for (s, x) in sum.iter_mut().zip(image) {
            *s += x * sign;
        }
    }
    t.target.normal_form(&sum)
}

/// The degree-1 cochain whose component on each facet's long interval is that facet's
/// class, and zero elsewhere.
pub fn assemble_cocycle(complex: &CochainComplex, f: &FacetClasses) -> Result<Cochain> {
    let term = complex
        .term(1)
        .ok_or_else(|| Error::InvalidInput("complex has no degree-1 term".into()))?;
    let mut values = term.group().zero_element();
    for ((i, eps), alpha) in facet_order(f.n).into_iter().zip(&f.classes) {
        let label = facet_interval_label(f.n, i, eps);
        let s = term.summand(&label).ok_or_else(|| {
            Error::InvalidInput(format!("facet x{i}={eps}: interval {label} is not in degree 1"))
        })?;
        if alpha.len() != s.group.generators() {
            return Err(Error::DimensionMismatch {
                context: format!("class on facet x{i}={eps}"),
                expected: s.group.generators(),
                found: alpha.len(),
            });
        }
        values[s.start..s.start + alpha.len()].clone_from_slice(alpha);
    }
    Ok(Cochain { degree: 1, values })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionResult {
    pub cocycle: Cochain,
    pub vanishes: bool,
    /// A degree-0 cochain whose coboundary is the cocycle.
    pub certificate: Option<Cochain>,
    /// Canonical coordinates of the class in degree-1 cohomology when it is nonzero.
    pub class: Option<Vec<BigInt>>,
}

pub fn decide_vanishing(complex: &CochainComplex, cocycle: &Cochain) -> Result<ObstructionResult> {
    if cocycle.degree != 1 {
        return Err(Error::InvalidInput(format!(
            "obstruction cocycles live in degree 1, not {}",
            cocycle.degree
        )));
    }
    let next = complex.apply_differential(cocycle)?;
    if let Some(d1) = complex.differential(1) {
        if !d1.target().is_zero_element(&next.values)? {
            return Err(Error::NotClosed { degree: 1 });
        }
    }
    let term1 = complex.term(1).expect("checked by apply_differential");
    let (certificate, vanishes) = match complex.differential(0) {
        Some(d0) => {
            let x = write_in_image(d0, &cocycle.values)?;
            let ok = x.is_some();
            (x.map(|values| Cochain { degree: 0, values }), ok)
        }
        None => (None, term1.group().is_zero_element(&cocycle.values)?),
    };
    let class = if vanishes {
        None
    } else {
        Some(cohomology_at(complex, 1)?.class_of(&cocycle.values)?)
    };
    Ok(ObstructionResult {
        cocycle: cocycle.clone(),
        vanishes,
        certificate,
        class,
    })
}

/// `∂□^n` with a coefficient system, its limit complex in coefficient degree `n - 2`.
#[derive(Clone, Debug)]
pub struct ObstructionProblem {
    pub n: usize,
    pub complex: CubicalComplex,
    pub system: CoefficientSystem,
    pub cochains: CochainComplex,
}

impl ObstructionProblem {
    /// For `n = 2` the obstruction values are only abelian when the coefficients are
    /// declared `linear`.
    pub fn new(n: usize, system: CoefficientSystem, linear: bool) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("obstructions need a cube of dimension ≥ 2, got {n}")));
        }
        if n == 2 && !linear {
            return Err(Error::NonAbelian(n));
        }
        let complex = CubicalComplex::boundary_cube(n);
        let cochains = build_limit_complex(&complex, &system, n - 2)?;
        Ok(ObstructionProblem {
            n,
            complex,
            system,
            cochains,
        })
    }

    /// Groups on the facets' long intervals, in facet order.
    pub fn facet_groups(&self) -> Vec<FGAbelianGroup> {
        let term = self.cochains.term(1).expect("boundary complexes reach degree 1");
        facet_order(self.n)
            .into_iter()
            .map(|(i, e)| {
                term.summand(&facet_interval_label(self.n, i, e))
                    .expect("every facet interval is a summand")
                    .group
                    .clone()
            })
            .collect()
    }

    pub fn decide(&self, f: &FacetClasses) -> Result<ObstructionResult> {
        if f.n != self.n {
            return Err(Error::DimensionMismatch {
                context: "facet classes".into(),
                expected: self.n,
                found: f.n,
            });
        }
        decide_vanishing(&self.cochains, &assemble_cocycle(&self.cochains, f)?)
    }

    /// Facet classes of the coboundary of a degree-0 cochain.
    pub fn coboundary_classes(&self, c: &[BigInt]) -> Result<FacetClasses> {
        let image = self.cochains.apply_differential(&Cochain {
            degree: 0,
            values: c.to_vec(),
        })?;
        let term = self.cochains.term(1).expect("degree 1 exists");
        let classes = facet_order(self.n)
            .into_iter()
            .map(|(i, e)| {
                let s = term.summand(&facet_interval_label(self.n, i, e)).expect("facet summand");
                image.values[s.start..s.start + s.group.generators()].to_vec()
            })
            .collect();
        FacetClasses::new(self.n, classes)
    }
}

/// A secondary composite `X → Y → Z → W` placed on `∂□³`: `X = 000`, `Y = 100`,
/// `Z = 101`, `W = 111`. The facets `*0*` and `1**` carry the nullhomotopies of `g∘f`
/// and `h∘g`. Coefficients are constant `ℤ`, transports are identities into `ℤ`.
#[derive(Clone, Debug)]
pub struct TodaFixture {
    pub problem: ObstructionProblem,
    pub classes: FacetClasses,
    pub transports: TransportData,
}

impl TodaFixture {
    pub const VERTICES: [(&'static str, &'static str); 4] = [("X", "000"), ("Y", "100"), ("Z", "101"), ("W", "111")];
    pub const NULLHOMOTOPY_FACETS: [&'static str; 2] = ["*0*", "1**"];

    /// Index in facet order of a facet written like `"1**"`.
    pub fn facet_index(cell: &str) -> Result<usize> {
        let (n, c) = Cell::parse(cell)?;
        facet_order(n)
            .iter()
            .position(|&(i, e)| facet_cell(n, i, e) == c)
            .ok_or_else(|| Error::InvalidInput(format!("{cell} is not a facet")))
    }

    /// Replace the class on one facet.
    pub fn with_class(mut self, cell: &str, value: impl Into<BigInt>) -> Result<Self> {
        let k = Self::facet_index(cell)?;
        self.classes.classes[k] = vec![value.into()];
        Ok(self)
    }
}

pub fn toda_fixture() -> TodaFixture {
    let z = FGAbelianGroup::free(1);
    let k = CubicalComplex::boundary_cube(3);
    let system = crate::cubical_complex::constant_on(&k, &z);
    let problem = ObstructionProblem::new(3, system, false).expect("∂□³ fixture is well formed");
    TodaFixture {
        classes: FacetClasses::zero(3, &[1; 6]),
        transports: TransportData::identity(3, &z),
        problem,
    }
}
