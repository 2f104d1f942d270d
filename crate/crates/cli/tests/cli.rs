use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn walshctl(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.cfg");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_walshctl"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

#[test]
fn gen_emits_sampled_walsh_bits() {
    let dir = TempDir::new().unwrap();
    let out = walshctl(dir.path(), "gen.orders = 12\ngen.grid = 4\n", &["gen", "--format", "csv", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "waveforms.csv");
    let bits: String = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(bits, "0110011001100110");
    assert!(csv.starts_with("slot,signal_name,value\n"));
    assert_eq!(json(dir.path(), "waveforms.json")["waveforms"][0]["bits"], "0110011001100110");
}

#[test]
fn timing_with_zero_repeats_is_silent() {
    let dir = TempDir::new().unwrap();
    let out =
        walshctl(dir.path(), "timing.s = 3\ntiming.repeat = 0\n", &["timing", "--format", "csv", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let trace = read(dir.path(), "timing_trace.csv");
    assert!(trace.starts_with("half_cycle,signal_name,value\n"));
    let trigger_rows: Vec<&str> = trace.lines().filter(|l| l.contains(",trigger,")).collect();
    assert_eq!(trigger_rows, ["0,trigger,0"]);
    let report = json(dir.path(), "timing_report.json");
    assert_eq!(report["triggers"], serde_json::json!([]));
    assert_eq!(report["stream"], "");
}

#[test]
fn timing_reports_control_latencies() {
    let dir = TempDir::new().unwrap();
    let out = walshctl(dir.path(), "timing.s = 5\ntiming.t1 = 3\ntiming.repeat = 2\n", &["timing", "--format", "json"]);
    assert!(out.status.success());
    let report = json(dir.path(), "timing_report.json");
    assert_eq!(report["ledger"]["variable_change_to_ready"], 4);
    assert_eq!(report["ledger"]["reset_to_ready"], 6);
    // W̄_5 = r1·r3 on eight slots is 01011010, each slot held for three cycles
    let once: String = "01011010".chars().flat_map(|c| std::iter::repeat_n(c, 3)).collect();
    assert_eq!(report["stream"], once.repeat(2));
}

#[test]
fn sid_round_trip_within_two_lsb() {
    let dir = TempDir::new().unwrap();
    let out = walshctl(
        dir.path(),
        "sid.N = 16\nsid.noise = walsh_band\nsid.noise.max_phase = 0.5\n",
        &["sid", "--seed", "1"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "sid_report.json");
    let linf = report["metrics"]["linf_lsb"].as_f64().unwrap();
    assert!(linf <= 2.0, "L∞ = {linf}");
    assert_eq!(report["reconstruction_lsb"].as_array().unwrap().len(), 16);
    assert_eq!(report["fidelities"]["P"].as_array().unwrap().len(), 16);
    assert_eq!(report["status"]["divider_saturated"], false);
}

#[test]
fn synth_reproduces_four_level_envelope() {
    let dir = TempDir::new().unwrap();
    let out = walshctl(dir.path(), "", &["synth", "--format", "json", "--format", "csv", "--format", "svg"]);
    assert!(out.status.success());
    let report = json(dir.path(), "synth_report.json");
    let bursts = report["bursts"].as_array().unwrap();
    assert_eq!(bursts.len(), 4);
    for b in bursts {
        assert_eq!(*b, serde_json::json!([[6144, 0], [2048, 0], [2048, 0], [6144, 0]]));
    }
    let svg = read(dir.path(), "synth_scope.svg");
    assert!(svg.contains("<!-- data i_dac / i_dac:"));
}

#[test]
fn bench_flags_model_based_ratios() {
    let dir = TempDir::new().unwrap();
    let out = walshctl(
        dir.path(),
        "modulation.n = 16\nsynth.weights = 0:0.5\n",
        &["bench", "--format", "json", "--format", "csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "bench_report.json");
    let cmp = &report["comparison"];
    assert_eq!(cmp["model_based"], true);
    assert_eq!(cmp["payload"]["computed_bits"], 250);
    assert_eq!(cmp["payload"]["reference_bits"], 345);
    let ratio = cmp["scenarios"][1]["ratio"].as_f64().unwrap();
    assert!((ratio - 6.5e5).abs() < 1.0, "{ratio}");
    assert!(read(dir.path(), "bench.csv").starts_with("scenario,fpga_cycles,baseline_cycles,ratio\n"));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let runs: Vec<Vec<(String, Vec<u8>)>> = (0..2)
        .map(|_| {
            let dir = TempDir::new().unwrap();
            for cmd in ["sid", "synth", "bench", "figures"] {
                let formats: &[&str] = if cmd == "figures" { &[] } else { &["--format", "csv", "--format", "json"] };
                let mut args = vec![cmd, "--seed", "7"];
                args.extend_from_slice(formats);
                assert!(walshctl(dir.path(), "sid.noise.terms = 32\n", &args).status.success());
            }
            let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.path().join("out"))
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
                })
                .collect();
            files.sort();
            files
        })
        .collect();
    assert!(runs[0].len() >= 10);
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn config_errors_are_aggregated_and_write_nothing() {
    let dir = TempDir::new().unwrap();
    let out = walshctl(dir.path(), "timing.repeat = 16\ntiming.t1 = 0\n", &["synth"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("repeat = 16 exceeds 4-bit range"), "{err}");
    assert!(err.contains("timing.t1 = 0"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn exit_codes_are_distinct() {
    let dir = TempDir::new().unwrap();
    // missing seed for random noise is a configuration problem
    assert_eq!(walshctl(dir.path(), "", &["sid"]).status.code(), Some(2));
    // a referenced file that does not exist is a precondition failure
    let missing = walshctl(dir.path(), "sid.noise = samples\nsid.noise.file = nowhere.txt\n", &["sid"]);
    assert_eq!(missing.status.code(), Some(3));
    // R = 0 has nothing to compare
    assert_eq!(walshctl(dir.path(), "timing.repeat = 0\n", &["bench"]).status.code(), Some(3));
    assert_eq!(walshctl(dir.path(), "unknown.key = 1\n", &["gen"]).status.code(), Some(2));
    assert_eq!(walshctl(dir.path(), "", &["figures", "--format", "csv"]).status.code(), Some(2));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn sample_file_noise_is_resolved_next_to_config() {
    let dir = TempDir::new().unwrap();
    let samples: String = (0..16).map(|i| format!("{}\n", if i < 8 { 0.1 } else { -0.1 })).collect();
    fs::write(dir.path().join("noise.txt"), samples).unwrap();
    let out = walshctl(dir.path(), "sid.noise = samples\nsid.noise.file = noise.txt\n", &["sid"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "sid_report.json");
    assert!(report["metrics"]["linf_lsb"].as_f64().unwrap() <= 2.0, "{}", report["metrics"]);
    let rec = report["reconstruction_lsb"].as_array().unwrap();
    assert!(rec[0].as_i64().unwrap() > 0 && rec[15].as_i64().unwrap() < 0);
}

#[test]
fn validate_echoes_normalized_values() {
    let dir = TempDir::new().unwrap();
    let out = walshctl(dir.path(), "timing.s = 7\nsynth.mode = qam\n", &["validate"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("timing.s = 7\n"));
    assert!(text.contains("synth.mode = QAM\n"));
    assert!(text.contains("sid.divisor = 16\n"));
}
