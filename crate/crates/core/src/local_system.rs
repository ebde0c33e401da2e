//! Coefficient systems: an abelian group on every interval and a homomorphism for every
//! one-step enlargement of intervals, required to compose consistently.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::abgrp::{FGAbelianGroup, GroupHom, IntMatrix};
use crate::error::{Error, Result};
use crate::posets::{GradedPoset, IntervalFamily};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSystem {
    family: Arc<IntervalFamily>,
    groups: Vec<FGAbelianGroup>,
    /// Keyed by `(smaller interval, larger interval)` family indices.
    maps: HashMap<(usize, usize), GroupHom>,
}

/// Two ways of enlarging `chain_a[0]` to its last interval that induce different maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub chain_a: Vec<String>,
    pub chain_b: Vec<String>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "functoriality fails: {} gives {} but {} gives {}",
            self.chain_a.join(" ⊆ "),
            self.left,
            self.chain_b.join(" ⊆ "),
            self.right
        )
    }
}

impl CoefficientSystem {
    /// `maps` must contain every one-step extension; further entries for longer
    /// inclusions are allowed and are checked against composites by [`validate`].
    ///
    /// [`validate`]: CoefficientSystem::validate
    pub fn new(
        family: Arc<IntervalFamily>,
        groups: Vec<FGAbelianGroup>,
        maps: HashMap<(usize, usize), GroupHom>,
    ) -> Result<Self> {
        if groups.len() != family.len() {
            return Err(Error::DimensionMismatch {
                context: "coefficient groups".into(),
                expected: family.len(),
                found: groups.len(),
            });
        }
        for (&(from, to), hom) in &maps {
            if from >= family.len() || to >= family.len() || from == to || !family.contains(from, to) {
                let name = |k: usize| {
                    if k < family.len() {
                        family.label(k)
                    } else {
                        k.to_string()
                    }
                };
                return Err(Error::NotAnInclusion {
                    from: name(from),
                    to: name(to),
                });
            }
            if hom.source() != &groups[from] || hom.target() != &groups[to] {
                return Err(Error::InvalidInput(format!(
                    "map {} -> {} does not match the groups on its intervals",
                    family.label(from),
                    family.label(to)
                )));
            }
        }
        for k in 0..family.len() {
            for e in family.extensions(k) {
                if !maps.contains_key(&(k, e)) {
                    return Err(Error::MissingMap {
                        from: family.label(k),
                        to: family.label(e),
                    });
                }
            }
        }
        Ok(CoefficientSystem {
            family,
            groups,
            maps,
        })
    }

    /// The same group everywhere, identity maps.
    pub fn constant(family: Arc<IntervalFamily>, group: &FGAbelianGroup) -> Self {
        let groups = vec![group.clone(); family.len()];
        let id = GroupHom::identity(group);
        let maps = (0..family.len())
            .flat_map(|k| family.extensions(k).map(move |e| (k, e)).collect::<Vec<_>>())
            .map(|key| (key, id.clone()))
            .collect();
        CoefficientSystem {
            family,
            groups,
            maps,
        }
    }

    pub fn family(&self) -> &Arc<IntervalFamily> {
        &self.family
    }

    pub fn groups(&self) -> &[FGAbelianGroup] {
        &self.groups
    }

    pub fn group(&self, k: usize) -> &FGAbelianGroup {
        &self.groups[k]
    }

    pub fn map(&self, from: usize, to: usize) -> Option<&GroupHom> {
        self.maps.get(&(from, to))
    }

    pub fn maps(&self) -> &HashMap<(usize, usize), GroupHom> {
        &self.maps
    }

    /// Canonical path from `from` up to `to`: always take the first one-step extension
    /// that stays inside `to`.
    fn canonical_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut path = vec![from];
        let mut k = from;
        while k != to {
            k = self
                .family
                .extensions(k)
                .find(|&e| self.family.contains(e, to))
                .expect("a smaller interval always has an extension inside a larger one");
            path.push(k);
        }
        path
    }

    /// Map from the group on `from` to the group on `to`, composed along the canonical
    /// path. Errors if `from ⊄ to`.
    pub fn transport(&self, from: usize, to: usize) -> Result<GroupHom> {
        if !self.family.contains(from, to) {
            return Err(Error::NotAnInclusion {
                from: self.family.label(from),
                to: self.family.label(to),
            });
        }
        let path = self.canonical_path(from, to);
        let mut acc = GroupHom::identity(&self.groups[from]);
        for w in path.windows(2) {
            acc = self.maps[&(w[0], w[1])].after(&acc)?;
        }
        Ok(acc)
    }

    fn labels(&self, path: &[usize]) -> Vec<String> {
        path.iter().map(|&k| self.family.label(k)).collect()
    }

    /// Every way of enlarging one interval to another must induce the same map (modulo
    /// relations of the target). Returns the first disagreement in interval order.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let fam = &self.family;
        let n = fam.len();
        let mut memo: HashMap<(usize, usize), GroupHom> = HashMap::new();
        // Process pairs by increasing length gap so every shorter composite is memoized.
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && fam.contains(i, j))
            .collect();
        pairs.sort_by_key(|&(i, j)| (fam.get(j).length - fam.get(i).length, i, j));
        let composite = |memo: &HashMap<(usize, usize), GroupHom>, step: usize, from: usize, to: usize| {
            let first = &self.maps[&(from, step)];
            if step == to {
                first.clone()
            } else {
                memo[&(step, to)]
                    .after(first)
                    .expect("composable by construction")
            }
        };
        for (i, j) in pairs {
            let mut steps = fam.extensions(i).filter(|&e| fam.contains(e, j));
            let first = steps.next().expect("extension inside a larger interval");
            let reference = composite(&memo, first, i, j);
            let reference_path = || {
                let mut p = vec![i];
                p.extend(self.canonical_path(first, j));
                p
            };
            for other in steps {
                let alt = composite(&memo, other, i, j);
                if !alt.agrees_with(&reference) {
                    let mut p = vec![i];
                    p.extend(self.canonical_path(other, j));
                    return Err(Violation {
                        chain_a: self.labels(&reference_path()),
                        chain_b: self.labels(&p),
                        left: reference.matrix().clone(),
                        right: alt.matrix().clone(),
                    });
                }
            }
            if fam.get(j).length - fam.get(i).length > 1 {
                if let Some(declared) = self.maps.get(&(i, j)) {
                    if !declared.agrees_with(&reference) {
                        return Err(Violation {
                            chain_a: self.labels(&reference_path()),
                            chain_b: self.labels(&[i, j]),
                            left: reference.matrix().clone(),
                            right: declared.matrix().clone(),
                        });
                    }
                }
            }
            memo.insert((i, j), reference);
        }
        Ok(())
    }

    /// Pull back along an element map from `family`'s poset into this system's poset.
    /// Every interval of `family` must land on an interval of the same length.
    pub fn restrict_to_family(&self, family: Arc<IntervalFamily>, element_map: &[usize]) -> Result<Self> {
        let sub = family.poset();
        if element_map.len() != sub.len() {
            return Err(Error::DimensionMismatch {
                context: "element map".into(),
                expected: sub.len(),
                found: element_map.len(),
            });
        }
        let ambient = self.family.poset();
        let mut image = Vec::with_capacity(family.len());
        for k in 0..family.len() {
            let i = family.get(k);
            let (a, b) = (element_map[i.low], element_map[i.high]);
            if a >= ambient.len() || b >= ambient.len() {
                return Err(Error::IndexOutOfRange {
                    context: "element map".into(),
                    index: a.max(b),
                    range: format!("0..{}", ambient.len()),
                });
            }
            let Some(target) = self.family.index_of(a, b) else {
                return Err(Error::NotAnInclusion {
                    from: family.label(k),
                    to: format!("[{},{}]", ambient.label(a), ambient.label(b)),
                });
            };
            if self.family.get(target).length != i.length {
                return Err(Error::NotLengthPreserving {
                    interval: family.label(k),
                    sub: i.length,
                    ambient: self.family.get(target).length,
                });
            }
            image.push(target);
        }
        let groups = image.iter().map(|&t| self.groups[t].clone()).collect();
        let preimage: HashMap<usize, usize> = image.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        let mut maps = HashMap::new();
        for k in 0..family.len() {
            for e in family.extensions(k) {
                maps.insert((k, e), self.maps[&(image[k], image[e])].clone());
            }
        }
        for (&(from, to), hom) in &self.maps {
            if let (Some(&f), Some(&t)) = (preimage.get(&from), preimage.get(&to)) {
                maps.entry((f, t)).or_insert_with(|| hom.clone());
            }
        }
        CoefficientSystem::new(family, groups, maps)
    }

    /// Restriction to a graded poset embedded by `embedding` (element indices).
    pub fn restrict(&self, sub: &GradedPoset, embedding: &[usize]) -> Result<Self> {
        self.restrict_to_family(Arc::new(sub.interval_family()), embedding)
    }
}

/// Constant coefficients on all intervals of a graded poset.
pub fn constant_system(p: &GradedPoset, group: &FGAbelianGroup) -> CoefficientSystem {
    CoefficientSystem::constant(Arc::new(p.interval_family()), group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube_cat::cube_poset;
    use crate::posets::{check_graded, FinitePoset};

    fn z() -> FGAbelianGroup {
        FGAbelianGroup::free(1)
    }

    fn times(k: i64) -> GroupHom {
        GroupHom::new(z(), z(), IntMatrix::from_i64(&[&[k]])).unwrap()
    }

    #[test]
    fn constant_systems_validate() {
        let s = constant_system(&check_graded(FinitePoset::point()).unwrap(), &z());
        assert_eq!(s.groups().len(), 1);
        let sq = constant_system(&cube_poset(2), &z());
        assert_eq!(sq.groups().len(), 9);
        assert!(sq.validate().is_ok());
        assert!(constant_system(&cube_poset(3), &FGAbelianGroup::zero()).validate().is_ok());
    }

    #[test]
    fn chain_violation() {
        let p = check_graded(FinitePoset::chain(2)).unwrap();
        let fam = Arc::new(p.interval_family());
        let idx = |a, b| fam.index_of(a, b).unwrap();
        let mut s = CoefficientSystem::constant(fam.clone(), &z());
        let mut maps = s.maps.clone();
        maps.insert((idx(0, 0), idx(0, 1)), times(2));
        maps.insert((idx(0, 0), idx(0, 2)), times(3));
        s = CoefficientSystem::new(fam.clone(), s.groups.clone(), maps).unwrap();
        let v = s.validate().unwrap_err();
        assert_eq!(v.chain_a, vec!["[0,0]", "[0,1]", "[0,2]"]);
        assert_eq!(v.chain_b, vec!["[0,0]", "[0,2]"]);
        assert_eq!(v.left, IntMatrix::from_i64(&[&[2]]));
        assert_eq!(v.right, IntMatrix::from_i64(&[&[3]]));
    }

    #[test]
    fn square_violation() {
        let fam = Arc::new(cube_poset(2).interval_family());
        let idx = |a, b| fam.index_of(a, b).unwrap();
        let base = CoefficientSystem::constant(fam.clone(), &z());
        let mut maps = base.maps.clone();
        maps.insert((idx(0, 1), idx(0, 3)), times(-1));
        let s = CoefficientSystem::new(fam.clone(), base.groups.clone(), maps).unwrap();
        let v = s.validate().unwrap_err();
        assert_eq!(v.chain_a.first().unwrap(), "[00,00]");
        assert_eq!(v.chain_a.last().unwrap(), "[00,11]");
    }

    #[test]
    fn missing_map_rejected() {
        let fam = Arc::new(cube_poset(1).interval_family());
        let err = CoefficientSystem::new(fam, vec![z(); 3], HashMap::new()).unwrap_err();
        assert!(matches!(err, Error::MissingMap { .. }));
    }

    #[test]
    fn restriction_to_edge() {
        let sq = cube_poset(2);
        let mut groups = Vec::new();
        for k in 0..9 {
            groups.push(FGAbelianGroup::cyclic(k + 2).unwrap());
        }
        // zero maps are always well defined
        let fam = Arc::new(sq.interval_family());
        let mut maps = HashMap::new();
        for k in 0..fam.len() {
            for e in fam.extensions(k) {
                maps.insert((k, e), GroupHom::zero(&groups[k], &groups[e]));
            }
        }
        let s = CoefficientSystem::new(fam.clone(), groups, maps).unwrap();
        assert!(s.validate().is_ok());
        let edge = cube_poset(1);
        // the edge 00 → 01
        let r = s.restrict(&edge, &[0, 1]).unwrap();
        assert!(r.validate().is_ok());
        for k in 0..3 {
            let i = r.family().get(k);
            let big = fam.index_of(i.low, i.high).unwrap();
            assert_eq!(r.group(k), s.group(big));
        }
        assert_eq!(s.restrict(&sq, &[0, 1, 2, 3]).unwrap(), s);
        // diagonal 00 → 11 is not length preserving
        let err = s.restrict(&edge, &[0, 3]).unwrap_err();
        assert!(matches!(err, Error::NotLengthPreserving { .. }));
    }
}
