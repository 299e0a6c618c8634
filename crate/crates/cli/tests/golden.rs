//! Snapshot tests: each case's stdout must match `tests/golden/<name>.json`
//! byte for byte. Set `UPDATE_GOLDEN=1` to rewrite the snapshots.

use std::path::PathBuf;
use std::process::Command;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn schema_example(name: &str) -> String {
    root().join("../../schemas/examples").join(name).to_string_lossy().into_owned()
}

fn check(name: &str, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_su2tqft")).args(args).output().unwrap();
    assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    let path = root().join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing snapshot {}", path.display()));
    assert!(
        want == out.stdout,
        "{name} drifted from its snapshot:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn snapshots() {
    let hopf = schema_example("hopf.json");
    let theta = schema_example("theta.json");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("eval_hopf_r5", vec!["eval-link", "--r", "5", "--link", &hopf]),
        ("dims_theta_file_r4", vec!["dims", "--r", "4", "--spine", &theta]),
        ("projector_k3_r5", vec!["projector", "--r", "5", "--k", "3"]),
        ("recoupling_r4", vec!["dump-recoupling", "--r", "4"]),
        ("dims_genus2_r5", vec!["dims", "--r", "5", "--spine", "handcuff"]),
        ("rep_torus_ab_r4", vec!["rep-matrix", "--r", "4", "--surface", "torus", "--word", "a b"]),
        ("curve_op_genus2_b2_r3", vec!["curve-op", "--r", "3", "--surface", "genus2", "--curve", "b2"]),
        ("trace_genus2_r4", vec!["trace", "--r", "4", "--surface", "genus2", "--word", "b0 -b2 b3"]),
        ("detect_torus_a", vec!["detect", "--surface", "torus", "--word", "a", "--rmax", "8"]),
        ("braid_rep_3_r5", vec!["braid-rep", "--r", "5", "--n", "3", "--word", "1 2 -1"]),
        (
            "braid_detect_3",
            vec!["braid-detect", "--n", "3", "--word", "1 2 -1", "--rmax", "6", "--cable-max", "2"],
        ),
        (
            "braid_detect_full_twist",
            vec!["braid-detect", "--n", "2", "--word", "1 1", "--rmax", "6", "--mode", "projective"],
        ),
    ];
    for (name, args) in cases {
        check(name, &args);
    }
}
