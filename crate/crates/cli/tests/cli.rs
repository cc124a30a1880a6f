use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use benchrel::data::read_table;
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name).display().to_string()
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_benchrel"));
    c.env_remove("BENCHREL_OUT");
    c
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn report(out: &Path, command: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join(format!("{command}.json"))).unwrap()).unwrap()
}

fn exact(report: &Value, model: &str) -> String {
    report["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["model"] == model)
        .unwrap()["exact"]
        .as_str()
        .unwrap()
        .to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn mwr_add_model_tie() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["mwr", "--input", &fixture("add_model.csv"), "--grouping", "by_scenario"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(dir.path(), "mwr");
    assert_eq!(exact(&r, "A"), "2/3");
    assert_eq!(exact(&r, "B"), "2/3");
    assert_eq!(r["run_config"]["grouping"], "by_scenario");
    assert_eq!(r["run_config"]["seed"], 0);

    let o = run(&["mwr", "-i", &fixture("add_model.csv"), "--model", "A", "--model", "B"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = report(dir.path(), "mwr");
    assert_eq!(exact(&r, "A"), "1/3");
    assert_eq!(exact(&r, "B"), "2/3");
}

#[test]
fn other_worked_cases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    run(&["mwr", "-i", &fixture("partial_report.csv")], out);
    assert_eq!(exact(&report(out, "mwr"), "A"), "3/5");
    run(&["mwr", "-i", &fixture("partial_report_omitted.csv")], out);
    assert_eq!(exact(&report(out, "mwr"), "A"), "9/10");
    run(&["mwr", "-i", &fixture("combine_datasets.csv")], out);
    assert_eq!(exact(&report(out, "mwr"), "B"), "2/3");
    run(&["mwr", "-i", &fixture("combine_datasets.csv"), "--grouping", "by_subscenario"], out);
    assert_eq!(exact(&report(out, "mwr"), "B"), "1/2");
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let small = fixture("small.csv");
    for (args, flag) in [
        (vec!["dior", "-i", &small, "--axis", "examples", "--size", "0"], "--size"),
        (vec!["dior", "-i", &small, "--iterations", "99"], "--iterations"),
        (vec!["dior", "-i", &small, "--objective", "speed"], "--objective"),
        (vec!["dior", "-i", &small, "--axis", "languages"], "--axis"),
        (vec!["cluster-curve", "-i", &small, "--cluster-size", "1"], "--cluster-size"),
        (vec!["calibrate", "-i", &small, "--tiers", "1:full,3+:2"], "--tiers"),
        (vec!["calibrate", "-i", &small, "--size", "50", "--size", "20"], "InvalidSchedule"),
        (vec!["mwr", "-i", &small, "--bogus"], "--bogus"),
        (vec!["synth", "--newcomer-rank", "3"], "--newcomer-rank"),
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
    assert!(!dir.path().join("dior.json").exists());
}

#[test]
fn data_errors_exit_1_with_module_error_names() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.csv");
    fs::write(&dup, "model,scenario,subscenario,prompt_id,example_id,score\nA,s,s,p,e,1\nA,s,s,p,e,0\n").unwrap();
    let header = dir.path().join("header.csv");
    fs::write(&header, "model,score\nA,1\n").unwrap();
    let small = fixture("small.csv");
    for (args, name) in [
        (vec!["mwr", "-i", "no/such/file.csv"], "Io"),
        (vec!["mwr", "-i", dup.to_str().unwrap()], "DuplicateRecord"),
        (vec!["mwr", "-i", header.to_str().unwrap()], "MalformedHeader"),
        (vec!["mwr", "-i", &small, "--model", "zz", "--model", "m00"], "UnknownModel"),
        (vec!["dior", "-i", &small, "--mode", "subsample", "--size", "500"], "SizeExceedsPool"),
        (vec!["best-model", "-i", &small, "--top-removals", "9"], "InsufficientModels"),
        (vec!["prompt-compare", "-i", &fixture("add_model.csv")], "NoEligibleSubscenario"),
        (vec!["flash-rank", "-i", &small, "--candidates", &small, "--model", "m01", "--iterations", "100", "--size", "10", "--size", "max"], "CalibrationMismatch"),
        (vec!["synth", "--case", "nope"], "UnknownCase"),
    ] {
        let o = run(&args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(stderr(&o).contains(name), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["rank", "-i", &fixture("add_model.csv"), "-q"])
        .env("BENCHREL_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let r = report(dir.path(), "rank");
    assert_eq!(r["result"]["ranking"][0]["model"], "A");
    assert_eq!(r["result"]["tie_break_applied"], true);
    assert_eq!(r["run_config"]["out"], dir.path().display().to_string());
}

fn plot_rows(out: &Path, command: &str) -> Vec<Vec<String>> {
    let t = read_table(fs::File::open(out.join(format!("{command}_plot.csv"))).unwrap()).unwrap();
    assert_eq!(t.header, ["series", "x", "y", "band_lo", "band_hi"]);
    for row in &t.rows {
        row[2].parse::<f64>().unwrap();
        if !row[3].is_empty() {
            assert!(row[3].parse::<f64>().unwrap() <= row[4].parse::<f64>().unwrap(), "{row:?}");
        }
    }
    t.rows
}

#[test]
fn every_command_reports_config_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let s = fixture("small.csv");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("validate", vec!["-i", &s]),
        ("mwr", vec!["-i", &s]),
        ("rank", vec!["-i", &s]),
        ("dior", vec!["-i", &s, "--size", "10", "--iterations", "100", "--seed", "3"]),
        ("best-model", vec!["-i", &s, "--top-removals", "1", "--iterations", "100", "--seed", "3"]),
        ("cluster-curve", vec!["-i", &s, "--size", "10", "--size", "max", "--cluster-size", "2", "--iterations", "100", "--seed", "3"]),
        ("prompt-compare", vec!["-i", &s, "--budget", "30", "--iterations", "100", "--seed", "3"]),
        ("correlations", vec!["-i", &s]),
        ("calibrate", vec!["-i", &s, "--size", "10", "--size", "max", "--iterations", "100", "--seed", "3"]),
        ("synth", vec!["--preset", "default", "--seed", "3"]),
    ];
    for (cmd, args) in cases {
        let mut full = vec![cmd];
        full.extend(args);
        let o = run(&full, out);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stderr(&o));
        let r = report(out, cmd);
        assert_eq!(r["command"], cmd);
        let cfg = r["run_config"].as_object().unwrap();
        for key in ["inputs", "grouping", "tie_policy", "axis", "sizes", "iterations", "seed", "objectives", "tiers", "out", "format"] {
            assert!(cfg.contains_key(key), "{cmd} lacks {key}");
        }
        let rows = plot_rows(out, cmd);
        assert!(!rows.is_empty(), "{cmd}");
    }
    assert_eq!(report(out, "dior")["run_config"]["seed"], 3);
    assert_eq!(report(out, "dior")["result"].as_array().unwrap().len(), 4);
}

#[test]
fn flash_rank_from_saved_table_matches_inline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let small = benchrel::data::load_results(Path::new(&fixture("small.csv")), benchrel::data::Format::DelimitedTable).unwrap();
    let write = |name: &str, keep: &dyn Fn(&str) -> bool| -> PathBuf {
        let p = out.join(name);
        let d = small.filter_models(keep).unwrap();
        benchrel::data::write_delimited(&d, fs::File::create(&p).unwrap()).unwrap();
        p
    };
    let reference = write("ref.csv", &|m| m != "m03");
    let cand = write("cand.csv", &|m| m == "m03");
    let (reference, cand) = (reference.to_str().unwrap(), cand.to_str().unwrap());
    let common = ["--size", "10", "--size", "20", "--size", "max", "--iterations", "200", "--seed", "5"];

    let mut args = vec!["calibrate", "-i", reference];
    args.extend(common);
    assert_eq!(run(&args, out).status.code(), Some(0));
    let table_path = out.join("calibrate.json");

    let mut args = vec!["flash-rank", "-i", reference, "--candidates", cand];
    args.extend(common);
    assert_eq!(run(&args, out).status.code(), Some(0));
    let inline = report(out, "flash-rank");

    args.extend(["--table", table_path.to_str().unwrap()]);
    assert_eq!(run(&args, out).status.code(), Some(0));
    let saved = report(out, "flash-rank");
    assert_eq!(inline["result"], saved["result"]);

    let r = &saved["result"]["results"][0];
    assert_eq!(r["model"], "m03");
    assert!(r["savings_factor"].as_f64().unwrap() >= 1.0);
    let rows = plot_rows(out, "flash-rank");
    assert!(rows.iter().any(|r| r[0] == "savings" && r[1] == "m03"));
}

#[test]
fn synth_case_round_trips_through_mwr() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    assert_eq!(run(&["synth", "--case", "add_model"], out).status.code(), Some(0));
    let r = report(out, "synth");
    let with_c = r["result"]["variants"].as_array().unwrap().iter().find(|v| v["label"] == "with_c").unwrap().clone();
    let file = with_c["data_file"].as_str().unwrap();
    assert_eq!(fs::read_to_string(file).unwrap(), fs::read_to_string(fixture("add_model.csv")).unwrap());
    run(&["mwr", "-i", file], out);
    let m = report(out, "mwr");
    for (model, want) in with_c["expected"].as_object().unwrap() {
        assert_eq!(exact(&m, model), want.as_str().unwrap());
    }
}

#[test]
fn synth_reference_with_newcomers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["synth", "--preset", "reference", "--newcomer-rank", "25", "--seed", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(dir.path(), "synth");
    assert_eq!(r["result"]["newcomers"][0], "m37");
    assert_eq!(r["result"]["models"], 38);
    assert_eq!(r["result"]["spec"]["seed"], 2);
    assert_eq!(r["run_config"]["synth_preset"], "reference");
}

#[test]
fn merged_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let a = out.join("a.csv");
    let b = out.join("b.jsonl");
    fs::write(&a, "model,scenario,subscenario,prompt_id,example_id,score\nA,S1,S1,p0,e0,10\nB,S1,S1,p0,e0,12\n").unwrap();
    fs::write(&b, "{\"model\":\"A\",\"scenario\":\"S2\",\"subscenario\":\"S2\",\"prompt_id\":\"p0\",\"example_id\":\"e0\",\"score\":3}\n{\"model\":\"B\",\"scenario\":\"S2\",\"subscenario\":\"S2\",\"prompt_id\":\"p0\",\"example_id\":\"e0\",\"score\":1}\n").unwrap();
    let o = run(&["mwr", "-i", a.to_str().unwrap(), "-i", b.to_str().unwrap()], out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = report(out, "mwr");
    assert_eq!(exact(&r, "A"), "1/2");
    assert_eq!(r["run_config"]["inputs"].as_array().unwrap().len(), 2);
}
