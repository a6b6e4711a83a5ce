use std::fs;
use std::path::Path;

use ginv::cli::{run, EXIT_NOT_EXISTS, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn ginv(dir: &Path, args: &[&str]) -> Run {
    let mut argv = vec!["ginv".to_string()];
    argv.extend(args.iter().map(|a| {
        if a.ends_with(".mtx") || a.ends_with(".json") || a.ends_with(".txt") {
            dir.join(a).display().to_string()
        } else {
            a.to_string()
        }
    }));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn mtx(rows: &[&[f64]]) -> String {
    let (m, n) = (rows.len(), rows[0].len());
    let mut s = format!("%%MatrixMarket matrix array real general\n{m} {n}\n");
    for j in 0..n {
        for row in rows {
            s.push_str(&format!("{}\n", row[j]));
        }
    }
    s
}

fn rational_json(rows: &[&[&str]]) -> String {
    serde_json::json!({
        "rows": rows.len(),
        "cols": rows[0].len(),
        "field": "rational",
        "data": rows,
    })
    .to_string()
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let files = [
        ("A.mtx", mtx(&[&[0.0, 1.0], &[0.0, 0.0]])),
        ("D.mtx", mtx(&[&[2.0, 0.0], &[1.0, 0.0]])),
        ("P.mtx", mtx(&[&[0.0, 2.0], &[0.0, 1.0]])),
        ("Q.mtx", mtx(&[&[0.0, 0.0], &[0.0, 1.0]])),
        ("E.mtx", mtx(&[&[1.0, 0.0], &[0.0, 0.0]])),
        ("Swap.mtx", mtx(&[&[0.0, 1.0], &[1.0, 0.0]])),
        ("Diag.mtx", mtx(&[&[2.0, 0.0], &[0.0, 0.5]])),
        ("J3.mtx", mtx(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]])),
        ("Core.mtx", mtx(&[&[2.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]])),
        ("Rect.mtx", mtx(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]])),
        ("U.mtx", mtx(&[&[2.0], &[1.0]])),
        ("N.mtx", mtx(&[&[0.0], &[1.0]])),
        ("A.json", rational_json(&[&["0", "1"], &["0", "0"]])),
        ("D.json", rational_json(&[&["2/3", "0"], &["1/3", "0"]])),
        ("eigs.txt", "2\n".to_string()),
        (
            "coord.mtx",
            "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n".to_string(),
        ),
        (
            "ragged.mtx",
            "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n".to_string(),
        ),
        ("junk.mtx", "%%MatrixMarket matrix array real general\n1 1\nabc\n".to_string()),
    ];
    for (name, body) in files {
        fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

#[test]
fn mary_prints_the_inverse_and_its_checks() {
    let w = workspace();
    let r = ginv(w.path(), &["mary", "A.mtx", "D.mtx"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("[[2,0],[1,0]]"));
    assert!(r.out.contains("verified: BAB=B"));
    assert!(r.out.contains("verified: R(B)=R(D)"));
    assert!(r.err.is_empty());
}

#[test]
fn rational_json_input_runs_exactly() {
    let w = workspace();
    let r = ginv(w.path(), &["mary", "A.json", "D.json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("[[2,0],[1,0]]"));
    assert!(r.out.contains("(exact)"));
    let r = ginv(w.path(), &["mary", "A.json", "D.json", "--backend", "float"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn group_inverse_missing_exits_two() {
    let w = workspace();
    let r = ginv(w.path(), &["group", "A.mtx"]);
    assert_eq!(r.code, EXIT_NOT_EXISTS);
    assert!(r.out.is_empty());
    assert!(r.err.contains("rank(A) ≠ rank(A²)"), "{}", r.err);
    let r = ginv(w.path(), &["group", "E.mtx", "--backend", "exact"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.lines().next(), Some("[[1,0],[0,0]]"));
}

#[test]
fn mary_missing_exits_two() {
    let w = workspace();
    let r = ginv(w.path(), &["mary", "Swap.mtx", "E.mtx"]);
    assert_eq!(r.code, EXIT_NOT_EXISTS, "{}{}", r.out, r.err);
}

#[test]
fn drazin_reports_the_index() {
    let w = workspace();
    let r = ginv(w.path(), &["drazin", "Core.mtx", "--backend", "exact"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("[[1/2,0,0],[0,0,0],[0,0,0]]"));
    assert!(r.out.contains("index: 2"));
    let r = ginv(w.path(), &["drazin", "J3.mtx"]);
    assert!(r.out.contains("index: 3"));
}

#[test]
fn moore_penrose_of_a_rectangular_matrix() {
    let w = workspace();
    let r = ginv(w.path(), &["mp", "Rect.mtx", "--backend", "exact"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    // A = u vᵀ with u = (1,2), v = (1,2,3): A† = v uᵀ / (|u|²|v|²)
    assert_eq!(r.out.lines().next(), Some("[[1/70,1/35],[1/35,2/35],[3/70,3/35]]"));
}

#[test]
fn outer_and_pq_match_the_inverse_along_d() {
    let w = workspace();
    let r = ginv(w.path(), &["outer", "A.mtx", "--range", "U.mtx", "--nullspace", "N.mtx", "--backend", "exact"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("[[2,0],[1,0]]"));
    let r = ginv(w.path(), &["pq", "A.mtx", "P.mtx", "Q.mtx", "--backend", "exact"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("[[2,0],[1,0]]"));
}

#[test]
fn certify_json_and_failures() {
    let w = workspace();
    let r = ginv(w.path(), &["certify", "A.mtx", "D.mtx", "--kind", "mary", "--along", "D.mtx", "--json"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["kind"], "mary");
    assert!(v["identities"]["BAB=B"].as_f64().unwrap() <= 1e-12);

    // the identity is not an outer inverse of A
    let r = ginv(w.path(), &["certify", "A.mtx", "E.mtx", "--kind", "mary", "--along", "D.mtx"]);
    assert_eq!(r.code, EXIT_NUMERICAL);
    assert!(r.out.contains("verdict: FAIL"));

    let r = ginv(w.path(), &["certify", "A.mtx", "D.mtx", "--kind", "mary"]);
    assert_eq!(r.code, EXIT_USAGE, "missing --along must be a usage error");
}

#[test]
fn specproj_disk_and_eigenvalue_list() {
    let w = workspace();
    let r = ginv(w.path(), &["specproj", "Diag.mtx", "--disk", "2", "0", "0.5"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("[[1,0],[0,0]]"));
    assert!(r.out.contains("quadrature points:"));
    let r = ginv(w.path(), &["specproj", "Diag.mtx", "--eigs", "eigs.txt"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("[[1,0],[0,0]]"));
    // eigenvalue 0.5 sits on the circle |λ| = 0.5
    let r = ginv(w.path(), &["specproj", "Diag.mtx", "--disk", "0", "0", "0.5"]);
    assert_eq!(r.code, EXIT_NUMERICAL);
    let r = ginv(w.path(), &["specproj", "Diag.mtx", "--disk", "-1", "0", "1", "--quad-points", "1"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn kd_and_diagnose() {
    let w = workspace();
    let r = ginv(w.path(), &["kd", "Core.mtx"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("index: 2"));
    let r = ginv(w.path(), &["diagnose", "A.mtx", "D.mtx"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let r = ginv(w.path(), &["diagnose", "Swap.mtx", "E.mtx", "--json"]);
    let v: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["exists"], false);
}

#[test]
fn plant_writes_a_pair_that_has_an_inverse() {
    let w = workspace();
    let a = w.path().join("pa.mtx");
    let d = w.path().join("pd.mtx");
    let r = ginv(
        w.path(),
        &["plant", "5", "3", "11", "--out-a", a.to_str().unwrap(), "--out-d", d.to_str().unwrap()],
    );
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let r = ginv(w.path(), &["mary", "pa.mtx", "pd.mtx", "--backend", "exact"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
}

#[test]
fn out_flag_writes_the_result() {
    let w = workspace();
    let out = w.path().join("b.json");
    let r = ginv(w.path(), &["mary", "A.json", "D.json", "--out", out.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["field"], "rational");
    assert_eq!(v["data"][1][0], "1");
}

#[test]
fn usage_errors_exit_three() {
    let w = workspace();
    for args in [
        vec!["mp", "missing.mtx"],
        vec!["mp", "coord.mtx"],
        vec!["mp", "ragged.mtx"],
        vec!["mp", "junk.mtx"],
        vec!["mp", "A.mtx", "--tol", "2"],
        vec!["frobnicate"],
        vec!["mary", "A.mtx"],
    ] {
        let r = ginv(w.path(), &args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}: {}", r.err);
        assert!(r.out.is_empty(), "{args:?}");
    }
    let r = ginv(w.path(), &["mp", "coord.mtx"]);
    assert!(r.err.contains("coordinate"));
}

#[test]
fn help_and_version_exit_zero() {
    let w = workspace();
    let r = ginv(w.path(), &["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("mary"));
    assert_eq!(ginv(w.path(), &["--version"]).code, EXIT_OK);
}

#[test]
fn ambiguous_rank_is_a_numerical_failure() {
    let w = workspace();
    fs::write(w.path().join("near.mtx"), mtx(&[&[1.0, 0.0], &[0.0, 1e-10]])).unwrap();
    let r = ginv(w.path(), &["mp", "near.mtx"]);
    assert_eq!(r.code, EXIT_NUMERICAL, "{}", r.err);
}
