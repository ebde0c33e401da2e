//! The cochain complex of a coefficient system: the length-`k` term is the direct sum of
//! the groups on intervals of length `k`, and the differential enlarges an interval by one
//! step at either end.
//!
//! Signs. With `+` on every target extension and `-` on every source extension, the two
//! paths around a square of target extensions carry the same sign and `d∘d ≠ 0` already on
//! `[1]²`. For intervals in a cube we use the Koszul rule instead: a step along coordinate
//! `i` picks up `(-1)^m`, where `m` counts the free coordinates of the interval before `i`,
//! and source extensions carry an extra `-1`. On `[1]` this is exactly `+` / `-`. Posets
//! without cube coordinates get a sign assignment solved over GF(2), one equation per
//! length-two inclusion of intervals, preferring the plain `+` / `-` signs on free
//! variables.

use std::collections::HashMap;

use crate::abgrp::{CochainComplex, GroupHom, IntMatrix, Term};
use crate::cube_cat::cube_poset;
use crate::error::{Error, Result};
use crate::local_system::CoefficientSystem;
use crate::posets::{GradedPoset, IntervalFamily};

/// A sign for every one-step extension of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    signs: HashMap<(usize, usize), i8>,
}

impl Orientation {
    pub fn sign(&self, from: usize, to: usize) -> i8 {
        self.signs[&(from, to)]
    }

    /// `+1` on target extensions, `-1` on source extensions, with no consistency check.
    pub fn plain(family: &IntervalFamily) -> Self {
        let mut signs = HashMap::new();
        for k in 0..family.len() {
            for &e in family.target_extensions(k) {
                signs.insert((k, e), 1);
            }
            for &e in family.source_extensions(k) {
                signs.insert((k, e), -1);
            }
        }
        Orientation { signs }
    }

    /// Koszul signs from cube coordinates.
    pub fn koszul(family: &IntervalFamily) -> Option<Self> {
        let coords = family.coordinates()?;
        let m = &coords.masks;
        let mut signs = HashMap::new();
        for k in 0..family.len() {
            let i = family.get(k);
            let free = m[i.low] ^ m[i.high];
            let parity = |bit: u32| {
                // coordinates before this one sit in higher bits
                let before = free & !((bit << 1) - 1);
                if before.count_ones().is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            };
            for &e in family.target_extensions(k) {
                let bit = m[family.get(e).high] ^ m[i.high];
                signs.insert((k, e), parity(bit));
            }
            for &e in family.source_extensions(k) {
                let bit = m[family.get(e).low] ^ m[i.low];
                signs.insert((k, e), -parity(bit));
            }
        }
        Some(Orientation { signs })
    }

    /// Solve for signs making every length-two square anticommute.
    pub fn solve(family: &IntervalFamily) -> Result<Self> {
        let plain = Self::plain(family);
        let mut edges: Vec<(usize, usize)> = plain.signs.keys().copied().collect();
        edges.sort_unstable();
        let var: HashMap<(usize, usize), usize> = edges.iter().enumerate().map(|(v, &e)| (e, v)).collect();
        let base = |e: &(usize, usize)| u8::from(plain.signs[e] < 0);

        // Row: bitset over variables (offset from the plain signs) plus right-hand side.
        let words = edges.len().div_ceil(64).max(1);
        let mut rows: Vec<(Vec<u64>, u8)> = Vec::new();
        for k in 0..family.len() {
            let mut reach: HashMap<usize, Vec<usize>> = HashMap::new();
            for e in family.extensions(k) {
                for j in family.extensions(e) {
                    reach.entry(j).or_default().push(e);
                }
            }
            let mut targets: Vec<_> = reach.into_iter().collect();
            targets.sort_unstable();
            for (j, middles) in targets {
                if middles.len() != 2 {
                    return Err(Error::NotThin {
                        from: family.label(k),
                        to: family.label(j),
                        middles: middles.len(),
                    });
                }
                let mut bits = vec![0u64; words];
                let mut rhs = 1u8;
                for &e in &middles {
                    for edge in [(k, e), (e, j)] {
                        let v = var[&edge];
                        bits[v / 64] ^= 1 << (v % 64);
                        rhs ^= base(&edge);
                    }
                }
                rows.push((bits, rhs));
            }
        }

        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for v in 0..edges.len() {
            let (w, b) = (v / 64, 1u64 << (v % 64));
            let Some(p) = (r..rows.len()).find(|&i| rows[i].0[w] & b != 0) else {
                continue;
            };
            rows.swap(r, p);
            let (pivot_bits, pivot_rhs) = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.0[w] & b != 0 {
                    for (x, y) in row.0.iter_mut().zip(&pivot_bits) {
                        *x ^= y;
                    }
                    row.1 ^= pivot_rhs;
                }
            }
            pivots.push((r, v));
            r += 1;
        }
        if rows[r..].iter().any(|(_, rhs)| *rhs == 1) {
            return Err(Error::NonOrientable);
        }
        // Free variables stay at the plain signs; pivots take the reduced right-hand side.
        let mut flip = vec![0u8; edges.len()];
        for &(row, v) in &pivots {
            flip[v] = rows[row].1;
        }
        let signs = edges
            .iter()
            .enumerate()
            .map(|(v, e)| (*e, if (base(e) ^ flip[v]) == 0 { 1 } else { -1 }))
            .collect();
        Ok(Orientation { signs })
    }

    /// Koszul signs when the family has cube coordinates, otherwise a solved assignment.
    pub fn for_family(family: &IntervalFamily) -> Result<Self> {
        match Self::koszul(family) {
            Some(o) => Ok(o),
            None => Self::solve(family),
        }
    }
}

/// Assemble the complex with a given sign choice. The length-`k` term sits in degree
/// `k + offset`.
pub fn build_with(system: &CoefficientSystem, offset: i64, orientation: &Orientation) -> Result<CochainComplex> {
    let fam = system.family();
    let top = if fam.is_empty() { 0 } else { fam.max_length() };
    let by_length: Vec<Vec<usize>> = (0..=top).map(|k| fam.of_length(k)).collect();
    let terms: Vec<Term> = by_length
        .iter()
        .map(|ks| {
            Term::new(
                ks.iter()
                    .map(|&k| (fam.label(k), system.group(k).clone()))
                    .collect(),
            )
        })
        .collect();
    let mut differentials = Vec::with_capacity(top);
    for len in 0..top {
        let (src, tgt) = (&terms[len], &terms[len + 1]);
        let row_of: HashMap<usize, usize> = by_length[len + 1]
            .iter()
            .zip(tgt.summands())
            .map(|(&k, s)| (k, s.start))
            .collect();
        let mut m = IntMatrix::zeros(tgt.group().generators(), src.group().generators());
        for (&k, s) in by_length[len].iter().zip(src.summands()) {
            for e in fam.extensions(k) {
                let block = system.map(k, e).expect("cover maps exist").matrix();
                let block = if orientation.sign(k, e) < 0 {
                    block.scaled(&(-1).into())
                } else {
                    block.clone()
                };
                m.set_block(row_of[&e], s.start, &block);
            }
        }
        differentials.push(GroupHom::new(src.group().clone(), tgt.group().clone(), m)?);
    }
    CochainComplex::new(offset, terms, differentials)
}

/// Assemble the complex without re-validating the system.
pub fn build(system: &CoefficientSystem, offset: i64) -> Result<CochainComplex> {
    build_with(system, offset, &Orientation::for_family(system.family())?)
}

/// Lowest degree `1 - max length`, so the longest intervals sit in degree 1.
pub fn default_offset(p: &GradedPoset) -> i64 {
    1 - p.max_length() as i64
}

fn check_base(p: &GradedPoset, system: &CoefficientSystem) -> Result<()> {
    let fam = p.interval_family();
    let own = system.family();
    if own.poset() != fam.poset() || own.intervals() != fam.intervals() {
        return Err(Error::BaseMismatch("the given graded poset".into()));
    }
    Ok(())
}

pub fn build_dphi(p: &GradedPoset, system: &CoefficientSystem, offset: i64) -> Result<CochainComplex> {
    check_base(p, system)?;
    system
        .validate()
        .map_err(|v| Error::NotFunctorial(v.to_string()))?;
    build(system, offset)
}

/// The cube case: the length-`k` term sits in degree `k - n`.
pub fn build_cube_cphi(m: usize, system: &CoefficientSystem, n: usize) -> Result<CochainComplex> {
    build_dphi(&cube_poset(m), system, -(n as i64))
}
