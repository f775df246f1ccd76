#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn genoq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genoq"))
        .args(args)
        .env_remove("GENQ_SEED")
        .env_remove("GENQ_MAX_QUBITS")
        .output()
        .expect("binary runs")
}

pub fn genoq_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_genoq"));
    cmd.args(args).env_remove("GENQ_SEED").env_remove("GENQ_MAX_QUBITS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8")
}

pub fn json(o: &Output) -> serde_json::Value {
    assert_eq!(code(o), 0, "stderr: {}", stderr(o));
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

pub const TRAIN_NEG: usize = 12355;
pub const TRAIN_POS: usize = 14742;
pub const TEST_NEG: usize = 4119;
pub const TEST_POS: usize = 4915;

/// Coordinates-only promoter table of 251-base intervals plus the matching
/// `id,split,class` labels, rows in seeded random order.
pub fn write_promoter_fixture(dir: &Path, seed: u64) -> (PathBuf, PathBuf) {
    let mut labels: Vec<(&str, &str)> = Vec::new();
    for (split, class, n) in [
        ("train", "negative", TRAIN_NEG),
        ("train", "positive", TRAIN_POS),
        ("test", "negative", TEST_NEG),
        ("test", "positive", TEST_POS),
    ] {
        labels.extend(std::iter::repeat_n((split, class), n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    labels.shuffle(&mut rng);
    let mut table = String::from("id,region,start,end,strand\n");
    let mut label_csv = String::from("id,split,class\n");
    for (i, (split, class)) in labels.iter().enumerate() {
        let start: u64 = rng.random_range(10_000..200_000_000);
        let strand = if rng.random_bool(0.5) { '+' } else { '-' };
        table.push_str(&format!("seq{i:05},chr{},{start},{},{strand}\n", rng.random_range(1..=22), start + 251));
        label_csv.push_str(&format!("seq{i:05},{split},{class}\n"));
    }
    let t = dir.join("promoters.csv");
    let l = dir.join("labels.csv");
    fs::write(&t, table).unwrap();
    fs::write(&l, label_csv).unwrap();
    (t, l)
}

/// Parses `header + rows` CSV text into rows of fields, checking that every
/// row has the header's width.
pub fn parse_csv(text: &str, header: &[&str]) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().expect("header").split(',').collect();
    assert_eq!(head, header);
    lines
        .map(|l| {
            let row: Vec<String> = l.split(',').map(str::to_string).collect();
            assert_eq!(row.len(), header.len(), "{l}");
            row
        })
        .collect()
}
