mod common;

use std::path::Path;
use std::process::Command;

use common::checks::tree_bytes;
use elacomp::pipeline::{RunManifest, MANIFEST};

const TINY: &str = r#"{
  "dimension": 2,
  "generated_count": 15,
  "sample_multiplier": 40,
  "tsne": { "perplexity": 6.0, "iterations": 300 }
}"#;

fn elacomp(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_elacomp"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout).to_string() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"dimension": 1}"#);
    let out = dir.path().join("o");
    let (code, text) = elacomp(&["pipeline", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1, "{text}");
    assert!(text.contains("dimension"));
    let (code, _) = elacomp(&["embed", "--mode", "sideways", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    let (code, _) = elacomp(&["frobnicate"]);
    assert_eq!(code, 1);
}

#[test]
fn missing_upstream_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let (code, text) = elacomp(&["features", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(code, 2, "{text}");
    assert!(text.contains("manifest.json"));
}

#[test]
fn stages_one_by_one_equal_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TINY);
    let a = dir.path().join("stepwise");
    let b = dir.path().join("whole");
    let (a_s, b_s) = (a.to_str().unwrap(), b.to_str().unwrap());
    for stage in ["generate", "sample", "features"] {
        let (code, text) = elacomp(&[stage, "--config", &cfg, "--out", a_s]);
        assert_eq!(code, 0, "{stage}: {text}");
    }
    for stage in ["project", "embed", "correlate"] {
        for mode in ["coco-into-gen", "gen-into-coco", "joint"] {
            let (code, text) = elacomp(&[stage, "--config", &cfg, "--out", a_s, "--mode", mode]);
            assert_eq!(code, 0, "{stage} {mode}: {text}");
        }
    }
    let (code, text) = elacomp(&["pipeline", "--config", &cfg, "--out", b_s, "--threads", "3"]);
    assert_eq!(code, 0, "{text}");

    let mut fa = tree_bytes(&a);
    let mut fb = tree_bytes(&b);
    fa.remove(MANIFEST);
    fb.remove(MANIFEST);
    assert_eq!(fa.keys().collect::<Vec<_>>(), fb.keys().collect::<Vec<_>>());
    for (k, v) in &fa {
        assert!(v == &fb[k], "{k} differs");
    }
    let ma = RunManifest::load(&a).unwrap().without_timings();
    let mb = RunManifest::load(&b).unwrap().without_timings();
    assert_eq!(ma, mb);
    assert_eq!(ma.all_files().len(), fa.len());
}
