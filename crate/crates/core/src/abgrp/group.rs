use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::smith::{snf, SmithForm};
use crate::error::{Error, Result};

/// Isomorphism invariants: ℤ^rank ⊕ ℤ/t₁ ⊕ … with t₁ | t₂ | … and every tᵢ ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ/{t}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// Finitely generated abelian group ℤ^g / (column span of `relations`).
#[derive(Clone)]
pub struct FGAbelianGroup {
    generators: usize,
    relations: IntMatrix,
    smith: Arc<SmithForm>,
}

impl PartialEq for FGAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators && self.relations == other.relations
    }
}

impl Eq for FGAbelianGroup {}

impl fmt::Debug for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FGAbelianGroup")
            .field("generators", &self.generators)
            .field("relations", &self.relations)
            .finish()
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.invariants().fmt(f)
    }
}

impl FGAbelianGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::DimensionMismatch {
                context: "relation matrix rows".into(),
                expected: generators,
                found: relations.rows(),
            });
        }
        let smith = Arc::new(snf(&relations));
        Ok(FGAbelianGroup {
            generators,
            relations,
            smith,
        })
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(rank, 0)).expect("free group")
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Result<Self> {
        Self::from_invariants(0, &[order.into()])
    }

    /// Presentation ℤ^rank ⊕ ℤ/t₁ ⊕ … on `rank + torsion.len()` generators, free ones first.
    /// Each torsion order must be at least 1; they need not divide each other.
    pub fn from_invariants(rank: usize, torsion: &[BigInt]) -> Result<Self> {
        if let Some(t) = torsion.iter().find(|t| !t.is_positive()) {
            return Err(Error::InvalidGroup(format!("torsion order {t} must be positive")));
        }
        let g = rank + torsion.len();
        let mut rel = IntMatrix::zeros(g, torsion.len());
        for (k, t) in torsion.iter().enumerate() {
            rel[(rank + k, k)] = t.clone();
        }
        Self::new(g, rel)
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn invariants(&self) -> AbelianInvariants {
        let factors = self.smith.invariant_factors();
        AbelianInvariants {
            free_rank: self.generators - factors.len(),
            torsion: factors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_trivial()
    }

    pub fn is_free_presentation(&self) -> bool {
        self.relations.is_zero()
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.generators]
    }

    pub fn basis_element(&self, i: usize) -> Vec<BigInt> {
        let mut v = self.zero_element();
        v[i] = BigInt::one();
        v
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.generators {
            return Err(Error::DimensionMismatch {
                context: "group element".into(),
                expected: self.generators,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the invariant decomposition: free coordinates first, then one
    /// coordinate per torsion factor reduced into `0..t`. Two vectors represent the same
    /// element exactly when their normal forms agree.
    pub fn normal_form(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(v)?;
        let y = self.smith.u.mul_vec(v);
        let diag = self.smith.diagonal();
        let r = self.smith.rank();
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

    pub fn is_zero_element(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.normal_form(v)?.iter().all(Zero::is_zero))
    }

    pub fn elements_equal(&self, a: &[BigInt], b: &[BigInt]) -> Result<bool> {
        self.check_len(a)?;
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero_element(&diff)
    }

    pub fn direct_sum<'a>(groups: impl IntoIterator<Item = &'a FGAbelianGroup>) -> Self {
        let groups: Vec<&FGAbelianGroup> = groups.into_iter().collect();
        let g = groups.iter().map(|x| x.generators).sum();
        let rel = IntMatrix::block_diagonal(groups.iter().map(|x| &x.relations));
        Self::new(g, rel).expect("direct sum presentation")
    }
}

/// Homomorphism given by its action on generators (one column per source generator).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FGAbelianGroup,
    target: FGAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks shape and that every source relation lands in the target relation lattice.
    pub fn new(source: FGAbelianGroup, target: FGAbelianGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.generators, source.generators) {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "homomorphism matrix {}x{} between groups on {} and {} generators",
                    matrix.rows(),
                    matrix.cols(),
                    source.generators,
                    target.generators
                ),
                expected: target.generators * source.generators,
                found: matrix.rows() * matrix.cols(),
            });
        }
        let images = &matrix * &source.relations;
        for (k, col) in images.columns().enumerate() {
            if !target.is_zero_element(&col)? {
                return Err(Error::IllDefinedHom {
                    context: format!("with matrix {matrix}"),
                    relation: k,
                });
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(group: &FGAbelianGroup) -> Self {
        GroupHom {
            source: group.clone(),
            target: group.clone(),
            matrix: IntMatrix::identity(group.generators),
        }
    }

    pub fn zero(source: &FGAbelianGroup, target: &FGAbelianGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.generators, source.generators),
        }
    }

    pub fn source(&self) -> &FGAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FGAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.source.check_len(v)?;
        Ok(self.matrix.mul_vec(v))
    }

    /// `self ∘ first`
    pub fn after(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(Error::InvalidInput(
                "composition of homomorphisms with mismatched groups".into(),
            ));
        }
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    pub fn negated(&self) -> GroupHom {
        GroupHom {
            matrix: self.matrix.scaled(&BigInt::from(-1)),
            ..self.clone()
        }
    }

    /// Equality as homomorphisms, i.e. modulo target relations.
    pub fn agrees_with(&self, other: &GroupHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        let diff = self.matrix.sub(&other.matrix);
        let ok = diff
            .columns()
            .all(|c| self.target.is_zero_element(&c).unwrap_or(false));
        ok
    }

    pub fn is_zero_map(&self) -> bool {
        self.matrix
            .columns()
            .all(|c| self.target.is_zero_element(&c).unwrap_or(false))
    }
}

/// Some `x` with `d(x) = target` in the target group, or `None` when `target` is not in
/// the image. Exact.
pub fn write_in_image(d: &GroupHom, target: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    d.target.check_len(target)?;
    let stacked = d.matrix.hstack(&d.target.relations);
    let s = snf(&stacked);
    Ok(s.solve(target).map(|mut x| {
        x.truncate(d.source.generators);
        x
    }))
}
