use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self { dir: TempDir::new().expect("temp dir") }
    }

    fn file(&self, name: &str, contents: &Value) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, serde_json::to_string(contents).unwrap()).unwrap();
        path
    }

    fn raw(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).unwrap();
        path
    }
}

fn fqg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqg")).args(args).output().expect("run fqg")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn functions_on(w: &Workspace, group: &str) -> PathBuf {
    w.file(&format!("{group}.json"), &json!({"kind": "function_algebra", "group": group}))
}

fn evaluation(w: &Workspace, name: &str, points: Value) -> PathBuf {
    w.file(name, &json!({"kind": "evaluation", "points": points}))
}

#[test]
fn check_accepts_catalog_groups() {
    let w = Workspace::new();
    let out = fqg(&["check", p(&functions_on(&w, "S3"))]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("all axioms hold"));
    let kp = w.file("kp.json", &json!({"kind": "kac_paljutkin"}));
    assert_eq!(code(&fqg(&["check", p(&kp)])), 0);
}

#[test]
fn check_rejects_corrupted_structure_with_named_residual() {
    let w = Workspace::new();
    let spec = functions_on(&w, "Z3");
    let identity = w.file("id.json", &json!({"kind": "identity"}));
    let out = fqg(&["--json", "hopf-image", p(&spec), p(&identity)]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let mut raw = report["image_structure"].clone();
    let good = w.file("good.json", &raw);
    assert_eq!(code(&fqg(&["check", p(&good)])), 0);

    raw["antipode"][0][0] = json!([0.5, 0.0]);
    let bad = w.file("bad.json", &raw);
    let out = fqg(&["check", p(&bad)]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("axiom `") && err.contains("residual"), "{err}");
}

#[test]
fn malformed_input_exits_with_parse_code() {
    let w = Workspace::new();
    let broken = w.raw("broken.json", "{\"kind\": \"function_algebra\", ");
    assert_eq!(code(&fqg(&["check", p(&broken)])), 2);
    let unknown = w.file("unknown.json", &json!({"kind": "function_algebra", "group": "S9"}));
    assert_eq!(code(&fqg(&["check", p(&unknown)])), 2);
    assert_eq!(code(&fqg(&["check", "/nonexistent/spec.json"])), 2);
    assert_eq!(code(&fqg(&["frobnicate"])), 2);
}

#[test]
fn hopf_image_of_evaluations() {
    let w = Workspace::new();
    let s3 = functions_on(&w, "S3");
    let both = evaluation(&w, "both.json", json!(["(12)", "(123)"]));
    let out = fqg(&["hopf-image", p(&s3), p(&both)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("image dim 6, generating: true"), "{}", stdout(&out));

    let one = evaluation(&w, "one.json", json!(["(12)"]));
    assert!(stdout(&fqg(&["hopf-image", p(&s3), p(&one)])).contains("image dim 2"));

    let counit = w.file("counit.json", &json!({"kind": "counit"}));
    for spec in [s3.clone(), w.file("kp.json", &json!({"kind": "kac_paljutkin"}))] {
        assert!(stdout(&fqg(&["hopf-image", p(&spec), p(&counit)])).contains("image dim 1"));
    }
}

#[test]
fn hopf_image_json_carries_image_structure() {
    let w = Workspace::new();
    let s3 = functions_on(&w, "S3");
    let rot = evaluation(&w, "rot.json", json!(["(123)"]));
    let out = fqg(&["--json", "hopf-image", p(&s3), p(&rot)]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["image_dim"], 3);
    assert_eq!(report["generating"], false);
    assert_eq!(report["invariants"]["character_orders"], json!([1, 3, 3]));
    assert_eq!(report["image_structure"]["mult"].as_array().unwrap().len(), 3);
    assert_eq!(report["pi"].as_array().unwrap().len(), 3);
    assert_eq!(report["pi"][0].as_array().unwrap().len(), 6);
}

#[test]
fn is_generating_exit_codes() {
    let w = Workspace::new();
    let z4 = functions_on(&w, "Z4");
    let gen = evaluation(&w, "gen.json", json!([1]));
    let out = fqg(&["is-generating", p(&z4), p(&gen)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let half = evaluation(&w, "half.json", json!([2]));
    let out = fqg(&["is-generating", p(&z4), p(&half)]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("dim M₁ = 2 of 4"));
    let identity = w.file("id.json", &json!({"kind": "identity"}));
    let kp = w.file("kp.json", &json!({"kind": "kac_paljutkin"}));
    assert_eq!(code(&fqg(&["is-generating", p(&kp), p(&identity)])), 0);
}

fn representation_json(mats: &[fqg_core::linalg::CMatrix]) -> Value {
    let encode = |m: &fqg_core::linalg::CMatrix| -> Value {
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect::<Value>())
            .collect()
    };
    json!({"kind": "representation", "matrices": mats.iter().map(encode).collect::<Vec<_>>()})
}

#[test]
fn is_generating_for_group_algebra_representations() {
    use fqg_core::catalog::{builtin_group, irreps};
    let w = Workspace::new();
    let g = builtin_group("S3").unwrap();
    let spec = w.file("cs3.json", &json!({"kind": "group_algebra", "group": "S3"}));

    let sign = w.file("sign.json", &representation_json(&irreps::sign_representation(&g)));
    let out = fqg(&["--json", "is-generating", p(&spec), p(&sign)]);
    assert_eq!(code(&out), 3);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["m1_dim"], 2);

    let perm = w.file("perm.json", &representation_json(&irreps::permutation_representation(&g).unwrap()));
    assert_eq!(code(&fqg(&["is-generating", p(&spec), p(&perm)])), 0);
}

#[test]
fn non_multiplicative_matrices_are_rejected() {
    let w = Workspace::new();
    let spec = functions_on(&w, "Z2");
    let bad = w.file("bad.json", &json!({"kind": "matrix", "images": [[[1.0]], [[1.0]]]}));
    let out = fqg(&["hopf-image", p(&spec), p(&bad)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("morphism check"));
}

#[test]
fn generated_subgroups() {
    let w = Workspace::new();
    let s3 = functions_on(&w, "S3");
    let out = fqg(&["generated-subgroup", p(&s3), "(12)", "(123)"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("generated subgroup: dim 6 (full)"), "{}", stdout(&out));

    let s4 = functions_on(&w, "S4");
    let out = fqg(&["--json", "generated-subgroup", p(&s4), "(12)", "(34)"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["dim"], 4);
    assert_eq!(report["invariants"]["character_orders"], json!([1, 2, 2, 2]));
    assert!(report["steps"].as_array().unwrap().iter().all(|s| s["agree"] == true));

    let out = fqg(&["generated-subgroup", p(&s3), "(123)"]);
    assert!(stdout(&out).contains("generated subgroup: dim 3 (proper)"), "{}", stdout(&out));
}

#[test]
fn generated_subgroup_from_codouble_legs() {
    let w = Workspace::new();
    let spec = w.file("cd.json", &json!({"kind": "codouble", "of": {"kind": "function_algebra", "group": "Z2"}}));
    let out = fqg(&["--json", "generated-subgroup", p(&spec), "K", "Khat"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["subgroup_dims"], json!([2, 2]));
    assert_eq!(report["full"], true);
}

#[test]
fn intertwiner_dimensions() {
    let w = Workspace::new();
    let z3 = functions_on(&w, "Z3");
    assert!(stdout(&fqg(&["intertwiners", p(&z3), "regular", "regular"])).contains("Hom(u, v): dim 3"));
    assert!(stdout(&fqg(&["intertwiners", p(&z3), "trivial", "trivial"])).contains("Hom(u, v): dim 1"));

    let s3 = functions_on(&w, "S3");
    let out = fqg(&["--json", "intertwiners", p(&s3), "regular", "regular", "--restrict", "(12)", "--restrict", "(123)"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["hom_dim"], report["restricted"]["intersection_dim"]);
    assert_eq!(report["restricted"]["equal"], true);

    let out = fqg(&["--json", "intertwiners", p(&s3), "regular", "regular", "--restrict", "(12)"]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["restricted"]["equal"], false);
    assert!(report["restricted"]["intersection_dim"].as_u64() > report["hom_dim"].as_u64());
}

#[test]
fn corep_files() {
    let w = Workspace::new();
    let z2 = functions_on(&w, "Z2");
    let sum = w.file("sum.json", &json!({"kind": "sum", "of": [{"kind": "regular"}, {"kind": "trivial"}]}));
    let out = fqg(&["--json", "intertwiners", p(&z2), p(&sum), p(&sum)]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["u_dim"], 3);
    // Regular ⊕ trivial on ℤ₂ has the trivial corep twice and the sign once.
    assert_eq!(report["hom_dim"], 5);
}

#[test]
fn json_reports_are_deterministic() {
    let w = Workspace::new();
    let s3 = functions_on(&w, "S3");
    let one = evaluation(&w, "one.json", json!([1, 2]));
    for args in [
        vec!["--json", "hopf-image", p(&s3), p(&one)],
        vec!["--json", "--seed", "7", "is-generating", p(&s3), p(&one)],
        vec!["--json", "report", p(&s3), p(&one)],
    ] {
        let a = fqg(&args);
        let b = fqg(&args);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn haar_and_report() {
    let w = Workspace::new();
    let kp = w.file("kp.json", &json!({"kind": "builtin", "name": "KP8"}));
    let out = fqg(&["--json", "haar", p(&kp)]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["solution_dim"], 1);
    assert!(report["stored_difference"].as_f64().unwrap() < 1e-9);

    let out = fqg(&["--json", "report", p(&kp)]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["axioms"]["passed"], true);
    assert_eq!(report["invariants"]["commutative"], false);
    assert_eq!(report["invariants"]["cocommutative"], false);
    assert!(report["w_residuals"]["pentagon"].as_f64().unwrap() < 1e-9);
}

#[test]
fn tolerance_flag_is_validated() {
    let w = Workspace::new();
    let s3 = functions_on(&w, "S3");
    assert_eq!(code(&fqg(&["--tolerance", "-1", "check", p(&s3)])), 2);
    assert_eq!(code(&fqg(&["--tolerance", "1e-8", "check", p(&s3)])), 0);
}
