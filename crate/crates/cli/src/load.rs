//! Turning a parsed document into core objects.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use aqcube_core::abgrp::{CochainComplex, GroupHom};
use aqcube_core::aq_complex::{build, build_dphi, default_offset};
use aqcube_core::cubical_complex::{validate_complex, ComplexReport};
use aqcube_core::local_system::Violation;
use aqcube_core::obstruction::{default_signs, facet_cell, facet_order, FacetClasses, ObstructionProblem, TransportData};
use aqcube_core::posets::{check_graded, GradedPoset};
use aqcube_core::{CoefficientSystem, CubicalComplex, FGAbelianGroup, FinitePoset, IntMatrix, IntervalFamily};
use num_bigint::BigInt;

use crate::schema::{ComplexSpec, Document, GroupSpec, ObstructionSpec, SystemSpec, SCHEMA_VERSION};
use crate::CliError;

pub enum Base {
    Poset(GradedPoset),
    Complex(CubicalComplex, ComplexReport),
}

pub struct Loaded {
    pub base: Base,
    pub family: Arc<IntervalFamily>,
    pub system: CoefficientSystem,
    pub obstruction: Option<ObstructionSpec>,
    pub offset: i64,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn group(spec: &GroupSpec, what: &str) -> Result<FGAbelianGroup, CliError> {
    let g = match spec {
        GroupSpec::Invariants { rank, torsion } => {
            let t: Vec<BigInt> = torsion.iter().map(|&x| BigInt::from(x)).collect();
            FGAbelianGroup::from_invariants(*rank, &t)
        }
        GroupSpec::Presentation { generators, relations } => {
            if let Some(k) = relations.iter().position(|r| r.len() != *generators) {
                return Err(invalid(format!(
                    "{what}: relation {k} has {} entries, expected {generators}",
                    relations[k].len()
                )));
            }
            let cols: Vec<Vec<BigInt>> = relations
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            FGAbelianGroup::new(*generators, IntMatrix::from_columns(*generators, &cols))
        }
    };
    g.map_err(|e| invalid(format!("{what}: {e}")))
}

/// Row-major matrix with `rows` rows and `cols` columns.
pub fn matrix(rows_in: &[Vec<i64>], rows: usize, cols: usize, what: &str) -> Result<IntMatrix, CliError> {
    if rows_in.len() != rows {
        return Err(invalid(format!("{what}: matrix has {} rows, expected {rows}", rows_in.len())));
    }
    if let Some(r) = rows_in.iter().position(|r| r.len() != cols) {
        return Err(invalid(format!(
            "{what}: row {r} has {} entries, expected {cols}",
            rows_in[r].len()
        )));
    }
    IntMatrix::from_rows(cols, rows_in).map_err(|e| invalid(format!("{what}: {e}")))
}

fn normalize(key: &str) -> String {
    key.chars().filter(|c| !c.is_whitespace()).collect()
}

fn poset_base(spec: &crate::schema::PosetSpec) -> Result<GradedPoset, CliError> {
    let index: HashMap<&str, usize> = spec.elements.iter().enumerate().map(|(k, e)| (e.as_str(), k)).collect();
    if index.len() != spec.elements.len() {
        return Err(invalid("poset elements must be distinct"));
    }
    let mut rel = Vec::new();
    for (a, b) in &spec.relations {
        let find = |x: &String| {
            index
                .get(x.as_str())
                .copied()
                .ok_or_else(|| invalid(format!("relation mentions unknown element {x:?}")))
        };
        rel.push((find(a)?, find(b)?));
    }
    let p = FinitePoset::from_relations(spec.elements.clone(), &rel).map_err(|e| invalid(e.to_string()))?;
    check_graded(p).map_err(|e| invalid(e.to_string()))
}

fn complex_base(spec: &ComplexSpec) -> Result<CubicalComplex, CliError> {
    match spec {
        ComplexSpec::Cells { ambient, cells } => {
            let refs: Vec<&str> = cells.iter().map(String::as_str).collect();
            CubicalComplex::parse(*ambient, &refs).map_err(|e| invalid(e.to_string()))
        }
        ComplexSpec::Boundary { boundary_of } => {
            if *boundary_of == 0 || *boundary_of > 8 {
                return Err(invalid("boundary_of must be between 1 and 8"));
            }
            Ok(CubicalComplex::boundary_cube(*boundary_of))
        }
        ComplexSpec::Cube { cube } => {
            if *cube > 8 {
                return Err(invalid("cube must be at most 8"));
            }
            Ok(CubicalComplex::full_cube(*cube))
        }
    }
}

fn system(family: &Arc<IntervalFamily>, spec: &SystemSpec) -> Result<CoefficientSystem, CliError> {
    let labels: HashMap<String, usize> = (0..family.len()).map(|k| (family.label(k), k)).collect();
    let lookup = |key: &str| {
        labels
            .get(&normalize(key))
            .copied()
            .ok_or_else(|| invalid(format!("{key} is not an interval of the base")))
    };
    if let Some(g) = &spec.constant {
        if spec.default_group.is_some() || !spec.groups.is_empty() || !spec.maps.is_empty() {
            return Err(invalid("a constant system takes no other groups or maps"));
        }
        return Ok(CoefficientSystem::constant(family.clone(), &group(g, "constant group")?));
    }
    let default = spec.default_group.as_ref().map(|g| group(g, "default group")).transpose()?;
    let mut groups: Vec<Option<FGAbelianGroup>> = vec![default; family.len()];
    for (key, g) in &spec.groups {
        groups[lookup(key)?] = Some(group(g, &format!("group on {key}"))?);
    }
    let groups: Vec<FGAbelianGroup> = groups
        .into_iter()
        .enumerate()
        .map(|(k, g)| g.ok_or_else(|| invalid(format!("no group given for interval {}", family.label(k)))))
        .collect::<Result<_, _>>()?;
    let mut maps = HashMap::new();
    for m in &spec.maps {
        let (from, to) = (lookup(&m.from)?, lookup(&m.to)?);
        let what = format!("map {} -> {}", m.from, m.to);
        let mat = matrix(&m.matrix, groups[to].generators(), groups[from].generators(), &what)?;
        let hom = GroupHom::new(groups[from].clone(), groups[to].clone(), mat).map_err(|e| invalid(format!("{what}: {e}")))?;
        if maps.insert((from, to), hom).is_some() {
            return Err(invalid(format!("{what} is given twice")));
        }
    }
    // Unlisted one-step maps default to the identity between equal groups.
    for k in 0..family.len() {
        for e in family.extensions(k) {
            if let Entry::Vacant(slot) = maps.entry((k, e)) {
                if groups[k] != groups[e] {
                    return Err(invalid(format!(
                        "missing map {} -> {} between different groups",
                        family.label(k),
                        family.label(e)
                    )));
                }
                slot.insert(GroupHom::identity(&groups[k]));
            }
        }
    }
    CoefficientSystem::new(family.clone(), groups, maps).map_err(|e| invalid(e.to_string()))
}

pub fn parse(text: &str) -> Result<Document, CliError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        // serde_json appends the position, which is reported separately
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(k) => full[..k].to_string(),
            None => full,
        };
        CliError::Parse {
            line: e.line(),
            column: e.column(),
            message,
        }
    })?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(invalid(format!(
            "unsupported schema_version {}, expected {SCHEMA_VERSION}",
            doc.schema_version
        )));
    }
    Ok(doc)
}

pub fn load(doc: Document) -> Result<Loaded, CliError> {
    let complex_spec = match (&doc.complex, &doc.obstruction) {
        (None, Some(o)) => Some(ComplexSpec::Boundary {
            boundary_of: o.cube_dim,
        }),
        (Some(_), _) => None,
        (None, None) => None,
    };
    let base = match (&doc.poset, doc.complex.as_ref().or(complex_spec.as_ref())) {
        (Some(p), None) => Base::Poset(poset_base(p)?),
        (None, Some(c)) => {
            let k = complex_base(c)?;
            let report = validate_complex(&k);
            if let Some((cell, face)) = report.missing.first() {
                return Err(invalid(format!(
                    "not face-closed: cell {cell} is missing its face {face} ({} missing faces in total)",
                    report.missing.len()
                )));
            }
            Base::Complex(k, report)
        }
        (Some(_), Some(_)) => return Err(invalid("give either a poset or a complex, not both")),
        (None, None) => return Err(invalid("the document needs a poset, a complex or an obstruction")),
    };
    let family = Arc::new(match &base {
        Base::Poset(p) => p.interval_family(),
        Base::Complex(k, _) => k.interval_family(),
    });
    if let (Some(o), Base::Complex(k, _)) = (&doc.obstruction, &base) {
        if o.cube_dim < 2 || *k != CubicalComplex::boundary_cube(o.cube_dim) {
            return Err(invalid(format!(
                "obstruction instances live on the boundary of a cube of dimension ≥ 2; got cube_dim {}",
                o.cube_dim
            )));
        }
    }
    let system = system(&family, doc.system.as_ref().unwrap_or(&SystemSpec::default()))?;
    let offset = match (&base, doc.options.offset, doc.options.coefficient_degree) {
        (_, Some(o), _) => o,
        (_, None, Some(n)) => -(n as i64),
        (Base::Poset(p), None, None) => default_offset(p),
        (Base::Complex(..), None, None) => match &doc.obstruction {
            Some(o) => -(o.cube_dim as i64 - 2),
            None => 0,
        },
    };
    Ok(Loaded {
        base,
        family,
        system,
        obstruction: doc.obstruction,
        offset,
    })
}

pub fn functoriality(system: &CoefficientSystem) -> Result<(), CliError> {
    system.validate().map_err(|v: Violation| invalid(v.to_string()))
}

pub fn cochains(l: &Loaded) -> Result<CochainComplex, CliError> {
    let c = match &l.base {
        Base::Poset(p) => build_dphi(p, &l.system, l.offset),
        Base::Complex(..) => {
            functoriality(&l.system)?;
            build(&l.system, l.offset)
        }
    };
    c.map_err(|e| invalid(e.to_string()))
}

pub struct Obstruction {
    pub problem: ObstructionProblem,
    pub classes: FacetClasses,
    pub transports: Option<TransportData>,
}

pub fn obstruction(l: &Loaded) -> Result<Obstruction, CliError> {
    let spec = l
        .obstruction
        .as_ref()
        .ok_or_else(|| invalid("the document has no obstruction section"))?;
    let n = spec.cube_dim;
    let problem = ObstructionProblem::new(n, l.system.clone(), spec.linear).map_err(|e| invalid(e.to_string()))?;
    let groups = problem.facet_groups();
    let order = facet_order(n);
    let facet_of = |key: &str| {
        let cell = normalize(key);
        order
            .iter()
            .position(|&(i, e)| facet_cell(n, i, e).label(n) == cell)
            .ok_or_else(|| invalid(format!("{key} is not a facet of [1]^{n}")))
    };
    let mut classes = FacetClasses::zero(n, &groups.iter().map(|g| g.generators()).collect::<Vec<_>>());
    for (key, v) in &spec.facet_classes {
        let k = facet_of(key)?;
        if v.len() != groups[k].generators() {
            return Err(invalid(format!(
                "class on facet {key} has {} entries, its group has {} generators",
                v.len(),
                groups[k].generators()
            )));
        }
        classes.classes[k] = v.iter().map(|&x| BigInt::from(x)).collect();
    }
    let transports = match &spec.transports {
        None => None,
        Some(t) => {
            let target = group(&t.target, "transport target")?;
            let signs = default_signs(n);
            let mut maps = Vec::new();
            let mut chosen = Vec::new();
            for (k, &(i, e)) in order.iter().enumerate() {
                let key = facet_cell(n, i, e).label(n);
                let Some(m) = t.maps.iter().find(|(name, _)| normalize(name) == key).map(|(_, m)| m) else {
                    return Err(invalid(format!("no transport given for facet {key}")));
                };
                let what = format!("transport on facet {key}");
                let mat = matrix(&m.matrix, target.generators(), groups[k].generators(), &what)?;
                maps.push(GroupHom::new(groups[k].clone(), target.clone(), mat).map_err(|e| invalid(format!("{what}: {e}")))?);
                chosen.push(m.sign.unwrap_or(signs[k]));
            }
            for name in t.maps.keys() {
                facet_of(name)?;
            }
            Some(TransportData::new(target, maps, chosen).map_err(|e| invalid(e.to_string()))?)
        }
    };
    Ok(Obstruction {
        problem,
        classes,
        transports,
    })
}
