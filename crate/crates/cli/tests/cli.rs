use std::fs;
use std::process::{Command, Output};

use ksforge_core::io::{ksset_from_json, ksset_to_json, KsSetRecord};
use ksforge_core::{fixture_data, FixtureName};

fn ksforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksforge"))
        .args(args)
        .env_remove("KSFORGE_JOBS")
        .output()
        .expect("run ksforge")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn parents_with_expectation() {
    let ok = ksforge(&["parents", "--expect", "320"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok).as_array().unwrap().len(), 320);

    let bad = ksforge(&["parents", "--expect", "321"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_fixtures() {
    for name in ["fixture:table1", "fixture:table2"] {
        let out = ksforge(&["verify", name, "--exhaustive"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let v = json(&out);
        assert_eq!(v["reports"][0]["kind"], "parity");
        assert_eq!(v["reports"][0]["witness"], "even vs 11");
        assert_eq!(v["reports"][1]["assignments"], 0);
    }
}

#[test]
fn verify_rejects_an_even_collection() {
    let dir = tempfile::tempdir().unwrap();
    let mut set = fixture_data(FixtureName::Table1);
    set.bases.pop();
    let path = dir.path().join("ten.json");
    fs::write(&path, ksset_to_json(&set)).unwrap();
    let out = ksforge(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["contradiction"], false);
}

#[test]
fn statedep_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table1.json");
    let saved = ksforge(&[
        "fixtures",
        "--name",
        "table1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(saved.status.code(), Some(0));
    assert!(saved.stdout.is_empty());

    let out = ksforge(&[
        "statedep",
        "--set",
        path.to_str().unwrap(),
        "--split",
        "27,25",
        "--pre",
        "33",
        "--post",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["signature"], "18_2 [13_2] - 1_4 4_5 4_6 2_7");
    let d = &v["state_dependent"];
    assert_eq!(d["residual"]["equations"].as_array().unwrap().len(), 3);
    assert_eq!(d["probability"], "1/4");
    assert_eq!(v["used_projectors"].as_array().unwrap().len(), 20);
}

#[test]
fn statedep_on_orthogonal_rays_is_a_usage_error() {
    let out = ksforge(&[
        "statedep",
        "--set",
        "fixture:table1",
        "--pre",
        "33",
        "--post",
        "35",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_fixture_contains_table1() {
    let out = ksforge(&["transform", "--parent", "fixture:table2", "--expect", "243"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let table1 = fixture_data(FixtureName::Table1);
    let children = v["children"].as_array().unwrap();
    assert_eq!(children.len(), 243);
    let found = children.iter().any(|c| {
        let rec: KsSetRecord = serde_json::from_value(c["set"].clone()).unwrap();
        rec.into_ksset().unwrap().canonically_equal(&table1)
    });
    assert!(found);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"bases\": [[{\"rays\": [1, 2, 3]}]]}").unwrap();
    let out = ksforge(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 1"), "{err}");

    assert_eq!(ksforge(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        ksforge(&["transform", "--parent", "999"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ksforge(&["fixtures", "--name", "table9"]).status.code(),
        Some(2)
    );
}

#[test]
fn bases_pass_the_oracle() {
    let out = ksforge(&["bases"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let kinds: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds.iter().filter(|&&k| k == "pure").count(), 5);
    assert_eq!(kinds.len(), 25);
}

#[test]
fn output_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "4", "8"] {
        let path = dir.path().join(format!("classify-{jobs}.json"));
        let out = ksforge(&[
            "classify",
            "--max-bases",
            "13",
            "--jobs",
            jobs,
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        outputs.push(fs::read(&path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn fixture_json_round_trips() {
    let out = ksforge(&["fixtures", "--name", "fixture:table2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let set = ksset_from_json(&text).unwrap();
    assert_eq!(ksset_to_json(&set), text);
}
