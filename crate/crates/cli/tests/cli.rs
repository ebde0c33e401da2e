use std::path::PathBuf;
use std::process::{Command, Output};

use aqcube_core::obstruction::{facet_cell, facet_order, FacetClasses, ObstructionProblem};
use aqcube_core::{CoefficientSystem, CubicalComplex, FGAbelianGroup};
use num_bigint::BigInt;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn aqcube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqcube"))
        .args(args)
        .env_remove("NO_COLOR")
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = aqcube(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, stdout, _) = run(&all);
    (code, serde_json::from_str(&stdout).expect("json output"))
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

/// Smith invariants of a small integer matrix from gcds of minors; returns
/// (rank, product of invariant factors).
fn rank_and_minor_gcd(m: &[Vec<i64>]) -> (usize, i64) {
    fn det(m: &[Vec<i64>]) -> i64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum()
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == k)
            .map(|s| (0..n).filter(|&i| s & (1 << i) != 0).collect())
            .collect()
    }
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let (rows, cols) = (m.len(), m[0].len());
    for k in (1..=rows.min(cols)).rev() {
        let mut g = 0;
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = r.iter().map(|&i| c.iter().map(|&j| m[i][j]).collect()).collect();
                g = gcd(g, det(&sub));
            }
        }
        if g != 0 {
            return (k, g);
        }
    }
    (0, 1)
}

#[test]
fn validate_accepts_the_toda_fixture() {
    let (code, out, _) = run(&["validate", &path("toda_boundary3.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("valid: cubical complex in [1]^3 with 26 cells"));
    assert!(out.contains("intervals by length: 0: 8, 1: 12, 2: 6"));
}

#[test]
fn validate_names_the_failing_square() {
    let (code, _, err) = run(&["validate", &path("corrupted_square.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("[00,00] ⊆ [00,01] ⊆ [00,11] gives [[2]]"), "{err}");
    assert!(err.contains("[00,00] ⊆ [00,10] ⊆ [00,11] gives [[1]]"), "{err}");
}

#[test]
fn validate_reports_witness_chains_and_missing_faces() {
    let (code, _, err) = run(&["validate", &path("chain_violation.json")]);
    assert_eq!(code, 2);
    assert!(err.contains(r#"["a", "b", "d"]"#) && err.contains(r#"["a", "c", "e", "d"]"#), "{err}");

    let (code, _, err) = run(&["validate", &path("not_closed.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("cell 0* is missing its face 01"), "{err}");
}

#[test]
fn truncated_input_is_a_parse_error_with_position() {
    let (code, _, err) = run(&["validate", &path("truncated.json")]);
    assert_eq!(code, 3);
    assert!(err.contains("parse error at line 4, column 0"), "{err}");

    let (code, json) = run_json(&["obstruct", &path("truncated.json")]);
    assert_eq!(code, 3);
    assert_eq!(json["error"]["kind"], "parse");
}

#[test]
fn missing_file_is_reported() {
    let (code, _, err) = run(&["validate", &path("no_such_file.json")]);
    assert_eq!(code, 3);
    assert!(err.contains("no_such_file.json"));
}

#[test]
fn cohomology_of_the_square_boundary_matches_the_cycle() {
    // cochains on the 4-cycle: vertices in degree -2, edges in degree -1
    let incidence = vec![vec![1, -1, 0, 0], vec![0, 1, -1, 0], vec![0, 0, 1, -1], vec![-1, 0, 0, 1]];
    let (rank, torsion) = rank_and_minor_gcd(&incidence);
    assert_eq!((rank, torsion), (3, 1));
    let expected_free = 4 - rank;

    let (code, json) = run_json(&["cohomology", &path("boundary2.json"), "--all"]);
    assert_eq!(code, 0);
    let h = json["cohomology"].as_array().unwrap();
    assert_eq!(h.len(), 2);
    for (entry, degree) in h.iter().zip([-2, -1]) {
        assert_eq!(entry["degree"], degree);
        assert_eq!(entry["group"]["free_rank"], expected_free);
        assert_eq!(entry["group"]["torsion"].as_array().unwrap().len(), 0);
    }
    assert_eq!(json["intervals_by_length"], serde_json::json!([4, 4]));
}

#[test]
fn cohomology_of_the_interval() {
    let (code, out, _) = run(&["cohomology", &path("cube1.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, "intervals by length: 0: 2, 1: 1\nH^0 = ℤ\nH^1 = 0\n");

    let (_, out, _) = run(&["cohomology", &path("cube1.json"), "--degree", "7"]);
    assert!(out.ends_with("H^7 = 0\n"));
}

#[test]
fn cohomology_with_torsion_coefficients() {
    let (code, out, _) = run(&["cohomology", &path("square_torsion.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("H^-1 = ℤ/6\nH^0 = 0\nH^1 = 0\n"), "{out}");
}

#[test]
fn zero_system_has_zero_cohomology() {
    let dir = std::env::temp_dir().join(format!("aqcube-zero-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("zero.json");
    std::fs::write(
        &file,
        r#"{"schema_version": 1, "complex": {"cube": 2}, "system": {"constant": {"rank": 0}}}"#,
    )
    .unwrap();
    let (code, json) = run_json(&["cohomology", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    for entry in json["cohomology"].as_array().unwrap() {
        assert_eq!(entry["group"]["display"], "0");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn zero_classes_lift() {
    let (code, out, _) = run(&["obstruct", &path("toda_boundary3.json")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("LIFTS\n"));
    assert!(out.ends_with("total class in ℤ: [0]\n"));
}

#[test]
fn coboundary_fixture_lifts_with_a_valid_certificate() {
    let (code, json) = run_json(&["obstruct", &path("coboundary_boundary3.json")]);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "LIFTS");
    assert_eq!(json["total_class"], serde_json::json!([0]));

    let cert: Vec<BigInt> = json["certificate"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|e| e["value"].as_array().unwrap().iter().map(|x| BigInt::from(x.as_i64().unwrap())))
        .collect();
    let k = CubicalComplex::boundary_cube(3);
    let system = CoefficientSystem::constant(k.interval_family().into(), &FGAbelianGroup::free(1));
    let problem = ObstructionProblem::new(3, system, false).unwrap();
    let image = problem.coboundary_classes(&cert).unwrap();
    let expected: Vec<Vec<BigInt>> = json["facet_classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].as_array().unwrap().iter().map(|x| BigInt::from(x.as_i64().unwrap())).collect())
        .collect();
    assert_eq!(image, FacetClasses::new(3, expected).unwrap());
    // facet order in the report is the library's
    let facets: Vec<String> = facet_order(3).into_iter().map(|(i, e)| facet_cell(3, i, e).label(3)).collect();
    let reported: Vec<&str> = json["facet_classes"].as_array().unwrap().iter().map(|e| e["facet"].as_str().unwrap()).collect();
    assert_eq!(reported, facets);
}

#[test]
fn square_generator_is_obstructed() {
    let (code, json) = run_json(&["obstruct", &path("generator_boundary2.json")]);
    assert_eq!(code, 1);
    assert_eq!(json["verdict"], "OBSTRUCTED");
    assert_eq!(json["class"], serde_json::json!([1]));
    assert_eq!(json["cohomology"]["display"], "ℤ");
}

#[test]
fn nonlinear_square_is_rejected() {
    let (code, _, err) = run(&["obstruct", &path("nonlinear_boundary2.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("nonabelian"), "{err}");
}

#[test]
fn nonzero_toda_class_is_obstructed() {
    let (code, out, _) = run(&["obstruct", &path("toda_boundary3_nonzero.json")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("OBSTRUCTED\nclass in H^1 = ℤ: "));
    assert!(out.contains("total class in ℤ: [-1]"));
}

#[test]
fn samelson_fixture_assembles_and_decides() {
    let (code, json) = run_json(&["obstruct", &path("samelson_boundary3.json")]);
    // equal classes on opposite facets cancel with ℤ/2 coefficients
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "LIFTS");
    assert_eq!(json["total_class"], serde_json::json!([0]));
}

#[test]
fn cube_info_reports_permutohedra() {
    let (code, out, _) = run(&["cube-info", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("permutohedron of dimension 2, 6 vertices"), "{out}");
    assert!(out.contains("cells by dimension: 0: 8, 1: 12, 2: 6, 3: 1"));

    let (_, out, _) = run(&["cube-info", "1"]);
    assert!(out.contains("a point"));

    let (_, json) = run_json(&["cube-info", "4"]);
    let factorial: u64 = (1..=4).product();
    assert_eq!(json["mapping_space"]["vertices"], factorial);

    let (code, _, err) = run(&["cube-info", "8"]);
    assert_eq!(code, 2);
    assert!(err.contains("n ≤ 7"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["validate", "toda_boundary3.json"],
        vec!["cohomology", "samelson_boundary3.json", "--json"],
        vec!["obstruct", "coboundary_boundary3.json"],
    ] {
        let mut args: Vec<String> = args.into_iter().map(String::from).collect();
        args[1] = path(&args[1]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = aqcube(&refs);
        let b = aqcube(&refs);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status, b.status);
    }
}

#[test]
fn bad_references_name_the_entity() {
    let dir = std::env::temp_dir().join(format!("aqcube-refs-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases = [
        (
            r#"{"schema_version": 1, "complex": {"boundary_of": 3}, "system": {"constant": {"rank": 1}},
                "obstruction": {"cube_dim": 3, "facet_classes": {"2**": [1]}}}"#,
            "2**",
        ),
        (
            r#"{"schema_version": 1, "poset": {"elements": ["0", "1"], "relations": [["0", "1"]]},
                "system": {"default_group": {"rank": 1}, "maps": [{"from": "[0,0]", "to": "[0,1]", "matrix": [[1, 0]]}]}}"#,
            "row 0 has 2 entries",
        ),
        (
            r#"{"schema_version": 1, "poset": {"elements": ["0", "1"], "relations": [["0", "1"]]},
                "system": {"default_group": {"rank": 1}, "groups": {"[1,0]": {"rank": 2}}}}"#,
            "[1,0]",
        ),
        (
            r#"{"schema_version": 1, "poset": {"elements": ["0", "1"], "relations": [["0", "1"]]},
                "system": {"default_group": {"rank": 1}, "groups": {"[0,1]": {"rank": 2}}}}"#,
            "missing map [0,0] -> [0,1]",
        ),
    ];
    for (k, (doc, needle)) in cases.iter().enumerate() {
        let file = dir.join(format!("case{k}.json"));
        std::fs::write(&file, doc).unwrap();
        let (code, _, err) = run(&["obstruct", file.to_str().unwrap()]);
        assert_eq!(code, 2, "{err}");
        assert!(err.contains(needle), "case {k}: {err}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
