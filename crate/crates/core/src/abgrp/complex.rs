use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{AbelianInvariants, FGAbelianGroup, GroupHom};
use super::matrix::IntMatrix;
use super::smith::{snf, SmithForm};
use crate::error::{Error, Result};

/// One direct summand of a term, e.g. the group sitting on a single interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub label: String,
    pub group: FGAbelianGroup,
    /// Index of this summand's first generator inside the term.
    pub start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    summands: Vec<Summand>,
    group: FGAbelianGroup,
}

impl Term {
    pub fn new(parts: Vec<(String, FGAbelianGroup)>) -> Self {
        let mut start = 0;
        let mut summands = Vec::with_capacity(parts.len());
        for (label, group) in parts {
            let g = group.generators();
            summands.push(Summand {
                label,
                group,
                start,
            });
            start += g;
        }
        let group = FGAbelianGroup::direct_sum(summands.iter().map(|s| &s.group));
        Term { summands, group }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn group(&self) -> &FGAbelianGroup {
        &self.group
    }

    pub fn summand(&self, label: &str) -> Option<&Summand> {
        self.summands.iter().find(|s| s.label == label)
    }
}

/// A cochain: an element of the term in a given degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: i64,
    pub values: Vec<BigInt>,
}

/// Bounded cochain complex of finitely generated abelian groups. The term at position `k`
/// sits in degree `k + offset`; `differentials[k]` maps position `k` to `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    offset: i64,
    terms: Vec<Term>,
    differentials: Vec<GroupHom>,
}

impl CochainComplex {
    /// Checks that each differential connects consecutive terms and that consecutive
    /// differentials compose to zero (modulo relations).
    pub fn new(offset: i64, terms: Vec<Term>, differentials: Vec<GroupHom>) -> Result<Self> {
        let expected = terms.len().saturating_sub(1);
        if differentials.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "number of differentials".into(),
                expected,
                found: differentials.len(),
            });
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.source() != terms[k].group() || d.target() != terms[k + 1].group() {
                return Err(Error::InvalidInput(format!(
                    "differential leaving degree {} does not connect consecutive terms",
                    k as i64 + offset
                )));
            }
        }
        for (k, pair) in differentials.windows(2).enumerate() {
            let comp = pair[1].matrix() * pair[0].matrix();
            for (j, col) in comp.columns().enumerate() {
                if !pair[1].target().is_zero_element(&col)? {
                    let row = col.iter().position(|x| !x.is_zero()).unwrap_or(0);
                    return Err(Error::NotAComplex {
                        degree: k as i64 + offset,
                        row,
                        col: j,
                    });
                }
            }
        }
        Ok(CochainComplex {
            offset,
            terms,
            differentials,
        })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn differentials(&self) -> &[GroupHom] {
        &self.differentials
    }

    /// Degrees carrying a term (possibly the zero group).
    pub fn degrees(&self) -> std::ops::Range<i64> {
        self.offset..self.offset + self.terms.len() as i64
    }

    fn position(&self, degree: i64) -> Option<usize> {
        let p = degree - self.offset;
        (p >= 0 && (p as usize) < self.terms.len()).then_some(p as usize)
    }

    pub fn term(&self, degree: i64) -> Option<&Term> {
        self.position(degree).map(|p| &self.terms[p])
    }

    /// The differential leaving `degree`, if both ends exist.
    pub fn differential(&self, degree: i64) -> Option<&GroupHom> {
        self.position(degree).and_then(|p| self.differentials.get(p))
    }

    /// Degrees whose term is a nontrivial group.
    pub fn support(&self) -> Vec<i64> {
        self.degrees()
            .filter(|&k| !self.term(k).unwrap().group().is_trivial())
            .collect()
    }

    pub fn apply_differential(&self, cochain: &Cochain) -> Result<Cochain> {
        let term = self.term(cochain.degree).ok_or_else(|| {
            Error::InvalidInput(format!("no term in degree {}", cochain.degree))
        })?;
        if cochain.values.len() != term.group().generators() {
            return Err(Error::DimensionMismatch {
                context: format!("cochain in degree {}", cochain.degree),
                expected: term.group().generators(),
                found: cochain.values.len(),
            });
        }
        let values = match self.differential(cochain.degree) {
            Some(d) => d.apply(&cochain.values)?,
            None => Vec::new(),
        };
        Ok(Cochain {
            degree: cochain.degree + 1,
            values,
        })
    }
}

/// H^k of a complex together with enough data to name classes of cocycles.
#[derive(Clone, Debug)]
pub struct Cohomology {
    degree: i64,
    invariants: AbelianInvariants,
    /// Columns: a basis of the cocycle lattice (inside the term's free cover).
    cocycles: Option<SmithForm>,
    presentation: SmithForm,
    generators: usize,
}

impl Cohomology {
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn invariants(&self) -> &AbelianInvariants {
        &self.invariants
    }

    /// Canonical coordinates of the class of `cocycle`: free coordinates first, then one
    /// per torsion factor reduced into `0..t`. Errors if `cocycle` is not closed.
    pub fn class_of(&self, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        if cocycle.len() != self.generators {
            return Err(Error::DimensionMismatch {
                context: format!("cochain in degree {}", self.degree),
                expected: self.generators,
                found: cocycle.len(),
            });
        }
        let w = match &self.cocycles {
            Some(z) => z
                .solve(cocycle)
                .ok_or(Error::NotClosed { degree: self.degree })?,
            None if cocycle.iter().all(Zero::is_zero) => return Ok(Vec::new()),
            None => return Err(Error::NotClosed { degree: self.degree }),
        };
        let y = self.presentation.u.mul_vec(&w);
        let diag = self.presentation.diagonal();
        let r = self.presentation.rank();
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for (i, yi) in y.into_iter().enumerate() {
            if i < r {
                if !diag[i].is_one() {
                    torsion.push(yi.mod_floor(&diag[i]));
                }
            } else {
                free.push(yi);
            }
        }
        free.extend(torsion);
        Ok(free)
    }
}

fn zero_cohomology(degree: i64, generators: usize) -> Cohomology {
    Cohomology {
        degree,
        invariants: AbelianInvariants::default(),
        cocycles: None,
        presentation: snf(&IntMatrix::zeros(0, 0)),
        generators,
    }
}

/// ker(d^degree) / im(d^{degree-1}) for a complex of presented groups.
pub fn cohomology_at(complex: &CochainComplex, degree: i64) -> Result<Cohomology> {
    let Some(term) = complex.term(degree) else {
        return Ok(zero_cohomology(degree, 0));
    };
    let group = term.group();
    let g = group.generators();
    if g == 0 {
        return Ok(zero_cohomology(degree, g));
    }

    // Cocycle lattice Z = { x : d x ∈ relations of the next term }.
    let cocycle_generators = match complex.differential(degree) {
        Some(d) => {
            let stacked = d.matrix().hstack(d.target().relations());
            snf(&stacked).kernel_basis().top_rows(g)
        }
        None => IntMatrix::identity(g),
    };
    let basis = snf(&cocycle_generators).image_basis();
    if basis.cols() == 0 {
        return Ok(zero_cohomology(degree, g));
    }
    let basis_form = snf(&basis);

    // Boundaries plus the term's own relations, in cocycle-basis coordinates.
    let mut boundary = group.relations().clone();
    if let Some(prev) = complex.differential(degree - 1) {
        boundary = prev.matrix().hstack(&boundary);
    }
    let coords: Vec<Vec<BigInt>> = boundary
        .columns()
        .map(|c| {
            basis_form
                .solve(&c)
                .ok_or(Error::NotAComplex {
                    degree: degree - 1,
                    row: 0,
                    col: 0,
                })
        })
        .collect::<Result<_>>()?;
    let rel = IntMatrix::from_columns(basis.cols(), &coords);
    let presentation = snf(&rel);
    let factors = presentation.invariant_factors();
    let invariants = AbelianInvariants {
        free_rank: basis.cols() - factors.len(),
        torsion: factors.iter().filter(|d| !d.is_one()).cloned().collect(),
    };
    Ok(Cohomology {
        degree,
        invariants,
        cocycles: Some(basis_form),
        presentation,
        generators: g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> FGAbelianGroup {
        FGAbelianGroup::free(1)
    }

    #[test]
    fn single_term() {
        let c = CochainComplex::new(3, vec![Term::new(vec![("x".into(), z())])], vec![]).unwrap();
        let h = cohomology_at(&c, 3).unwrap();
        assert_eq!(h.invariants().free_rank, 1);
        assert!(cohomology_at(&c, 2).unwrap().invariants().is_trivial());
        assert!(cohomology_at(&c, 4).unwrap().invariants().is_trivial());
    }

    #[test]
    fn multiplication_by_two() {
        let d = GroupHom::new(z(), z(), IntMatrix::from_i64(&[&[2]])).unwrap();
        let c = CochainComplex::new(
            0,
            vec![Term::new(vec![("a".into(), z())]), Term::new(vec![("b".into(), z())])],
            vec![d],
        )
        .unwrap();
        assert!(cohomology_at(&c, 0).unwrap().invariants().is_trivial());
        let h1 = cohomology_at(&c, 1).unwrap();
        assert_eq!(h1.invariants().to_string(), "ℤ/2");
        assert_eq!(h1.class_of(&[BigInt::from(3)]).unwrap(), vec![BigInt::from(1)]);
        assert_eq!(h1.class_of(&[BigInt::from(4)]).unwrap(), vec![BigInt::from(0)]);
    }

    #[test]
    fn rejects_nonzero_square() {
        let one = GroupHom::identity(&z());
        let t = || Term::new(vec![("t".into(), z())]);
        let err = CochainComplex::new(0, vec![t(), t(), t()], vec![one.clone(), one]).unwrap_err();
        assert!(matches!(err, Error::NotAComplex { degree: 0, .. }));
    }

    #[test]
    fn torsion_terms() {
        // ℤ --2--> ℤ/4 --4--> ℤ/8 : H^0 = 2ℤ, H^1 = {0,2} / {0,2} = 0, H^2 = ℤ/8 / 4 = ℤ/4.
        let z4 = FGAbelianGroup::cyclic(4).unwrap();
        let z8 = FGAbelianGroup::cyclic(8).unwrap();
        let d0 = GroupHom::new(z(), z4.clone(), IntMatrix::from_i64(&[&[2]])).unwrap();
        let d1 = GroupHom::new(z4.clone(), z8.clone(), IntMatrix::from_i64(&[&[4]])).unwrap();
        let c = CochainComplex::new(
            0,
            vec![
                Term::new(vec![("a".into(), z())]),
                Term::new(vec![("b".into(), z4)]),
                Term::new(vec![("c".into(), z8)]),
            ],
            vec![d0, d1],
        )
        .unwrap();
        assert_eq!(cohomology_at(&c, 0).unwrap().invariants().to_string(), "ℤ");
        assert!(cohomology_at(&c, 1).unwrap().invariants().is_trivial());
        assert_eq!(cohomology_at(&c, 2).unwrap().invariants().to_string(), "ℤ/4");
    }

    #[test]
    fn class_of_non_cocycle_fails() {
        let d = GroupHom::identity(&z());
        let c = CochainComplex::new(
            0,
            vec![Term::new(vec![("a".into(), z())]), Term::new(vec![("b".into(), z())])],
            vec![d],
        )
        .unwrap();
        let h0 = cohomology_at(&c, 0).unwrap();
        assert!(h0.invariants().is_trivial());
        assert!(h0.class_of(&[BigInt::from(1)]).is_err());
        assert!(h0.class_of(&[BigInt::zero()]).unwrap().is_empty());
    }
}
