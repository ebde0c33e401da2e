use std::collections::BTreeMap;

use aqcube_core::abgrp::{cohomology_at, AbelianInvariants, CochainComplex};
use aqcube_core::cube_cat::{cube_poset, mapping_space_shape};
use aqcube_core::obstruction::{facet_cell, facet_order, total_class};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::load::{self, Base, Loaded};
use crate::CliError;

pub const MAX_CUBE_INFO: usize = 7;

/// Human-readable text plus the `--json` rendering of the same result.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub exit: u8,
}

fn num(x: &BigInt) -> Value {
    i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::from(x.to_string()))
}

fn nums(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

fn show(v: &[BigInt]) -> String {
    format!("[{}]", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

fn group_json(g: &AbelianInvariants) -> Value {
    json!({
        "display": g.to_string(),
        "free_rank": g.free_rank,
        "torsion": nums(&g.torsion),
    })
}

fn intervals_by_length(l: &Loaded) -> Vec<usize> {
    let f = &l.family;
    (0..=f.max_length()).map(|k| f.of_length(k).len()).collect()
}

fn counts_line(name: &str, counts: &[usize]) -> String {
    let parts: Vec<String> = counts.iter().enumerate().map(|(k, c)| format!("{k}: {c}")).collect();
    format!("{name}: {}\n", parts.join(", "))
}

fn base_summary(l: &Loaded) -> (String, Value) {
    match &l.base {
        Base::Poset(p) => (
            format!("poset with {} elements, maximal chain length {}", p.len(), p.max_length()),
            json!({"kind": "poset", "elements": p.len(), "max_length": p.max_length()}),
        ),
        Base::Complex(k, _) => (
            format!(
                "cubical complex in [1]^{} with {} cells, dimension {}",
                k.ambient(),
                k.cells().len(),
                k.dim().map_or("empty".to_string(), |d| d.to_string())
            ),
            json!({"kind": "complex", "ambient": k.ambient(), "cells": k.cells().len(), "cell_counts": k.cell_counts()}),
        ),
    }
}

pub fn validate(l: &Loaded) -> Result<Report, CliError> {
    load::functoriality(&l.system)?;
    let obstruction = l.obstruction.as_ref().map(|_| load::obstruction(l)).transpose()?;
    let (summary, base) = base_summary(l);
    let lengths = intervals_by_length(l);
    let mut text = format!("valid: {summary}\n");
    text += &counts_line("intervals by length", &lengths);
    text += "coefficient system: functorial\n";
    let mut shared = Vec::new();
    if let Base::Complex(_, report) = &l.base {
        for (interval, cells) in &report.shared {
            text += &format!("note: interval {interval} lies in several maximal cells: {}\n", cells.join(", "));
            shared.push(json!({"interval": interval, "cells": cells}));
        }
    }
    if let Some(o) = &obstruction {
        text += &format!("obstruction instance on the boundary of [1]^{}\n", o.problem.n);
    }
    Ok(Report {
        text,
        json: json!({
            "valid": true,
            "base": base,
            "intervals_by_length": lengths,
            "shared_intervals": shared,
        }),
        exit: 0,
    })
}

pub fn cohomology(l: &Loaded, degree: Option<i64>) -> Result<Report, CliError> {
    let c: CochainComplex = load::cochains(l)?;
    let degrees: Vec<i64> = match degree {
        Some(k) => vec![k],
        None => c.degrees().collect(),
    };
    let lengths = intervals_by_length(l);
    let mut text = counts_line("intervals by length", &lengths);
    let mut out = Vec::new();
    for k in degrees {
        let h = cohomology_at(&c, k).map_err(|e| CliError::Validation(e.to_string()))?;
        text += &format!("H^{k} = {}\n", h.invariants());
        out.push(json!({"degree": k, "group": group_json(h.invariants())}));
    }
    Ok(Report {
        text,
        json: json!({
            "offset": c.offset(),
            "intervals_by_length": lengths,
            "cohomology": out,
        }),
        exit: 0,
    })
}

pub fn obstruct(l: &Loaded) -> Result<Report, CliError> {
    let o = load::obstruction(l)?;
    let n = o.problem.n;
    let result = o
        .problem
        .decide(&o.classes)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let facets: Vec<String> = facet_order(n).into_iter().map(|(i, e)| facet_cell(n, i, e).label(n)).collect();
    let mut text = String::new();
    let mut json = BTreeMap::new();
    let exit;
    if result.vanishes {
        exit = 0;
        text += "LIFTS\n";
        json.insert("verdict", json!("LIFTS"));
        let c0 = &o.problem.cochains;
        let cert = result.certificate.as_ref().map(|c| c.values.clone()).unwrap_or_default();
        let mut parts = Vec::new();
        if let Some(term) = c0.term(0) {
            text += "certificate (degree-0 cochain whose coboundary is the cocycle):\n";
            for s in term.summands() {
                let v = s
                    .group
                    .normal_form(&cert[s.start..s.start + s.group.generators()])
                    .map_err(|e| CliError::Validation(e.to_string()))?;
                text += &format!("  {} {}\n", s.label, show(&v));
                parts.push(json!({"interval": s.label, "value": nums(&v)}));
            }
        }
        json.insert("certificate", Value::Array(parts));
    } else {
        exit = 1;
        let h1 = cohomology_at(&o.problem.cochains, 1).map_err(|e| CliError::Validation(e.to_string()))?;
        let class = result.class.clone().unwrap_or_default();
        text += "OBSTRUCTED\n";
        text += &format!("class in H^1 = {}: {}\n", h1.invariants(), show(&class));
        json.insert("verdict", json!("OBSTRUCTED"));
        json.insert("class", nums(&class));
        json.insert("cohomology", group_json(h1.invariants()));
    }
    let classes: Vec<Value> = facets
        .iter()
        .zip(&o.classes.classes)
        .map(|(f, v)| json!({"facet": f, "value": nums(v)}))
        .collect();
    json.insert("facet_classes", Value::Array(classes));
    if let Some(t) = &o.transports {
        let total = total_class(&o.classes, t).map_err(|e| CliError::Validation(e.to_string()))?;
        text += &format!("total class in {}: {}\n", t.target, show(&total));
        json.insert("total_class", nums(&total));
    }
    Ok(Report {
        text,
        json: serde_json::to_value(json).expect("string keys"),
        exit,
    })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn cube_info(n: usize) -> Result<Report, CliError> {
    if n > MAX_CUBE_INFO {
        return Err(CliError::Validation(format!("cube-info supports n ≤ {MAX_CUBE_INFO}, got {n}")));
    }
    let cells: Vec<usize> = (0..=n).map(|k| binomial(n, k) << (n - k)).collect();
    let p = cube_poset(n);
    let lengths: Vec<usize> = (0..=n).map(|k| p.intervals_of_length(k).len()).collect();
    let top = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let shape = mapping_space_shape(n, 0, top).expect("bottom is below top");
    let faces: Vec<u128> = shape.face_counts();
    let mut text = format!("[1]^{n}: {} vertices\n", 1usize << n);
    text += &counts_line("cells by dimension", &cells);
    text += &counts_line("intervals by length", &lengths);
    let bottom = "0".repeat(n);
    let ceiling = "1".repeat(n);
    if shape.rank() == 0 {
        text += &format!("mapping space {bottom:?} -> {ceiling:?}: a point\n");
    } else {
        text += &format!(
            "mapping space {bottom:?} -> {ceiling:?}: permutohedron of dimension {}, {} vertices\n",
            shape.rank(),
            shape.vertex_count()
        );
        let parts: Vec<String> = faces.iter().enumerate().map(|(d, c)| format!("{d}: {c}")).collect();
        text += &format!("  faces by dimension: {}\n", parts.join(", "));
    }
    Ok(Report {
        text,
        json: json!({
            "n": n,
            "vertices": 1usize << n,
            "cells_by_dimension": cells,
            "intervals_by_length": lengths,
            "mapping_space": {
                "dimension": shape.rank(),
                "vertices": shape.vertex_count(),
                "faces_by_dimension": faces.iter().map(|&c| c as u64).collect::<Vec<_>>(),
            },
        }),
        exit: 0,
    })
}
