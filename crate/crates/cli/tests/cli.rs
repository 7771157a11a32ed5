use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cvqkd_cli::ResultRecord;

fn cvqkd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvqkd")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const HONEST: &str = r#"{
  "source": { "squeezing": 0.5 },
  "session": { "num_slots": 100, "samples_per_slot": 100 },
  "seed": 7
}"#;

fn records(path: &Path) -> Vec<ResultRecord> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn criteria_exit_codes() {
    assert_eq!(code(&cvqkd(&["criteria", "--params", "0.5,2,0.5,2"])), 0);
    assert_eq!(code(&cvqkd(&["criteria", "--params", "1,1,1,1"])), 1);
    let o = cvqkd(&["criteria", "--params", "0.8,5,0.8,5"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("epr_paradox              false"), "{text}");
    assert_eq!(code(&cvqkd(&["criteria", "--squeezing=-2"])), 1);
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.json", HONEST);
    let a = cvqkd(&["simulate", "--config", &config, "--quiet"]);
    let b = cvqkd(&["simulate", "--config", &config, "--quiet"]);
    assert_eq!(code(&a), 0);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let rec: ResultRecord = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(rec.seed, 7);
    assert_eq!(rec.session_seeds, vec![7]);
    assert!(rec.keys_agree);

    let c = cvqkd(&["simulate", "--config", &config, "--seed", "8", "--quiet"]);
    let rec8: ResultRecord = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(rec8.seed, 8);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn session_seeds_reproduce_repetitions() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "c.json", &HONEST.replace("\"seed\": 7", "\"repetitions\": 3, \"seed\": 7"));
    let out = dir.path().join("multi.jsonl");
    let o = cvqkd(&["simulate", "--config", &config, "--out", out.to_str().unwrap(), "--per-slot", "--quiet"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rec = &records(&out)[0];
    assert_eq!(rec.repetitions, 3);

    let seed = rec.session_seeds[2].to_string();
    let single = dir.path().join("single.jsonl");
    let one = write_config(dir.path(), "one.json", HONEST);
    let o = cvqkd(&[
        "simulate", "--config", &one, "--seed", &seed, "--out", single.to_str().unwrap(), "--per-slot", "--quiet",
    ]);
    assert_eq!(code(&o), 0);
    let multi_keys = fs::read(dir.path().join("multi.simulate-r2.keys.json")).unwrap();
    let single_keys = fs::read(dir.path().join("single.simulate.keys.json")).unwrap();
    assert_eq!(multi_keys, single_keys);
}

#[test]
fn per_slot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "c.json",
        &HONEST.replace("\"seed\": 7", "\"attack\": { \"eta\": 0.7 }, \"seed\": 7"),
    );
    let out = dir.path().join("run.jsonl");
    let o = cvqkd(&["simulate", "--config", &config, "--out", out.to_str().unwrap(), "--per-slot", "--quiet"]);
    assert_eq!(code(&o), 0);
    let slots = fs::read_to_string(dir.path().join("run.simulate.slots.csv")).unwrap();
    assert!(slots.starts_with("schema,slot_index,role,alice_basis,bob_basis,v_est,v_std_error,kept\n"));
    assert_eq!(slots.lines().count(), 101);
    let eve = fs::read_to_string(dir.path().join("run.simulate.eve.csv")).unwrap();
    assert!(eve.lines().next().unwrap().ends_with("eve_basis,tapped_samples,delta,guess,basis_guess"));
    let keys: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.simulate.keys.json")).unwrap()).unwrap();
    assert_eq!(keys["alice"], keys["bob"]);
    let rec = &records(&out)[0];
    assert!(rec.per_slot);
    assert!(rec.eve_accuracy.is_some());
    // Without a destination there is nowhere to put transcripts.
    assert_eq!(code(&cvqkd(&["simulate", "--config", &config, "--per-slot"])), 2);
}

#[test]
fn eta_sweep_alarm_rate_rises() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sweep.json",
        r#"{
  "source": { "squeezing": 0.5 },
  "session": { "num_slots": 200, "samples_per_slot": 500 },
  "attack": { "eta": 1.0 },
  "sweep": { "parameter": "eta", "values": [1.0, 0.81, 0.64, 0.49] },
  "repetitions": 10,
  "output_path": "ignored-by-out.jsonl",
  "seed": 11
}"#,
    );
    let out = dir.path().join("sweep.jsonl");
    let o = cvqkd(&["sweep", "--config", &config, "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs = records(&out);
    assert_eq!(recs.len(), 4);
    let rates: Vec<f64> = recs.iter().map(|r| r.alarm_rate).collect();
    assert!(rates.windows(2).all(|w| w[0] <= w[1]), "{rates:?}");
    assert!(rates[3] > rates[0]);
    let etas: Vec<f64> = recs.iter().map(|r| r.parameters.eta.unwrap()).collect();
    assert_eq!(etas, vec![1.0, 0.81, 0.64, 0.49]);
    assert!(recs.iter().all(|r| r.seed == 11));

    // Same config and seed: byte-identical output.
    let again = dir.path().join("again.jsonl");
    cvqkd(&["sweep", "--config", &config, "--out", again.to_str().unwrap(), "--quiet"]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());

    // The subcommands refuse each other's configs.
    assert_eq!(code(&cvqkd(&["simulate", "--config", &config])), 2);
}

#[test]
fn exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    let bad_eta = write_config(dir.path(), "eta.json", &HONEST.replace("\"seed\": 7", "\"attack\": { \"eta\": 1.3 }, \"seed\": 7"));
    let o = cvqkd(&["simulate", "--config", &bad_eta]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("attack.eta"));

    let unknown = write_config(dir.path(), "unknown.json", &HONEST.replace("\"seed\"", "\"sede\""));
    let o = cvqkd(&["simulate", "--config", &unknown]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));

    assert_eq!(code(&cvqkd(&["simulate", "--config", "/nonexistent/c.json"])), 3);

    let ok = write_config(dir.path(), "ok.json", HONEST);
    assert_eq!(code(&cvqkd(&["simulate", "--config", &ok, "--out", "/nonexistent/dir/out.jsonl"])), 3);

    let separable = write_config(dir.path(), "sep.json", &HONEST.replace("0.5 }", "1.0 }"));
    let o = cvqkd(&["simulate", "--config", &separable]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("refused"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn validate_default_source_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.txt");
    let o = cvqkd(&["validate", "--samples", "200000", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let table = fs::read_to_string(&out).unwrap();
    assert_eq!(table, String::from_utf8(o.stdout).unwrap());
    assert!(!table.contains("FAIL"));
    assert!(table.contains("eve_delta_sum_form"));
}
