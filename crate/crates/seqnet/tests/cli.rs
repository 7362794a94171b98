//! End-to-end runs of the installed binary: exit codes, stream contents,
//! determinism, and the documented workflows.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn seqnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqnet"))
        .args(args)
        .env_remove("SEQNET_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(path: &Path, content: &str) {
    fs::write(path, content).unwrap();
}

/// Continuous dataset with a clear x1 -> x2 dependence and a noise column.
fn sample_csv(dir: &Path) -> String {
    let data = dir.join("d.csv");
    let mut rows = String::from("x1,x2,x3\n");
    let mut state = 901u64;
    let mut noise = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
    };
    for i in 0..60 {
        let x1 = (i as f64) * 0.1 - 3.0;
        let x2 = 0.8 * x1 + if i % 2 == 0 { 0.3 } else { -0.3 };
        let x3 = noise();
        rows.push_str(&format!("{x1},{x2},{x3}\n"));
    }
    write(&data, &rows);
    data.display().to_string()
}

#[test]
fn test_subcommand_prints_result_json() {
    let dir = tempfile::tempdir().unwrap();
    let data = sample_csv(dir.path());
    let out = seqnet(&[
        "test", "--data", &data, "--test", "fisher_z", "--x", "x1", "--y", "x2",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["test"], "fisher_z");
    assert_eq!(parsed["x"], "x1");
    assert_eq!(parsed["cond"], serde_json::json!([]));
    assert!(parsed["p"].as_f64().unwrap() < 0.01);
}

#[test]
fn test_subcommand_with_conditioning() {
    let dir = tempfile::tempdir().unwrap();
    let data = sample_csv(dir.path());
    let out = seqnet(&[
        "test", "--data", &data, "--test", "fisher_z", "--x", "x1", "--y", "x2",
        "--cond", "x3",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["cond"], serde_json::json!(["x3"]));
}

#[test]
fn learn_writes_dot_and_logs_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let data = sample_csv(dir.path());
    let net = dir.path().join("net.dot");
    let out = seqnet(&[
        "learn", "--data", &data, "--test", "fisher_z", "--alpha", "0.01", "--out",
        net.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    let dot = fs::read_to_string(&net).unwrap();
    assert!(dot.starts_with("digraph"), "dot: {dot}");
    assert!(dot.contains("\"x1\" -> \"x2\"") || dot.contains("\"x2\" -> \"x1\""));

    // JSON-lines test log on standard output
    let log = stdout(&out);
    assert!(!log.trim().is_empty());
    for line in log.lines() {
        let entry: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(entry["p"].as_f64().is_some());
    }
}

#[test]
fn same_seed_gives_byte_identical_runs() {
    let dir = tempfile::tempdir().unwrap();
    let dag = dir.path().join("g.json");
    let run = |out: &Path| {
        let o = seqnet(&[
            "simulate", "dag", "--p", "6", "--degree", "2", "--seed", "7", "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    };
    run(&dag);
    let dag2 = dir.path().join("g2.json");
    run(&dag2);
    assert_eq!(fs::read(&dag).unwrap(), fs::read(&dag2).unwrap());

    let data = dir.path().join("d.csv");
    let data2 = dir.path().join("d2.csv");
    for (d, s) in [(&data, "11"), (&data2, "11")] {
        let o = seqnet(&[
            "simulate", "gaussian", "--dag", dag.to_str().unwrap(), "--n", "200",
            "--seed", s, "--out", d.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&data).unwrap(), fs::read(&data2).unwrap());

    let other = dir.path().join("d3.csv");
    let o = seqnet(&[
        "simulate", "gaussian", "--dag", dag.to_str().unwrap(), "--n", "200", "--seed",
        "12", "--out", other.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_ne!(fs::read(&data).unwrap(), fs::read(&other).unwrap());
}

#[test]
fn exit_codes_follow_the_contract() {
    // unknown subcommand: usage text on the error stream, exit 1
    let out = seqnet(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage") || stderr(&out).contains("error"));
    assert!(stdout(&out).is_empty());

    // unknown flag: exit 1
    let out = seqnet(&["test", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));

    // data error: exit 2
    let out = seqnet(&[
        "test", "--data", "/nonexistent/x.csv", "--test", "jt", "--x", "a", "--y", "b",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error"));
}

#[test]
fn model_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("mixed.csv");
    let mut rows = String::from("x,grp\n");
    for i in 0..40 {
        let grp = if i % 3 == 0 { "a" } else { "b" };
        rows.push_str(&format!("{},{grp}\n", i as f64 * 0.25));
    }
    write(&data, &rows);
    // fisher_z on a discrete column is a regime error, not a usage error
    let out = seqnet(&[
        "test", "--data", data.to_str().unwrap(), "--test", "fisher_z", "--x", "grp",
        "--y", "x",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error"));
}

#[test]
fn every_subcommand_documents_itself() {
    for sub in [
        "test", "learn", "mb", "relnet", "ggm", "fit", "predict", "recode",
        "simulate", "power", "recover", "export",
    ] {
        let out = seqnet(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub} --help");
        let text = stdout(&out);
        assert!(text.contains("--help"), "{sub} help text: {text}");
    }
    // the default seed is documented
    for sub in ["power", "recover", "fit"] {
        let text = stdout(&seqnet(&[sub, "--help"]));
        assert!(text.contains("42"), "{sub} help should document the default seed");
    }
}

#[test]
fn mb_on_genotypes_warns_exactly_once() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("sc.json");
    write(
        &sc,
        r#"{"n":400,"m":4,"maf":0.3,"pattern":"linear","h2":0.4,"causal":[1],
           "ld_rho":0.0,"seed":19}"#,
    );
    let sim = dir.path().join("sim.csv");
    let out = seqnet(&[
        "simulate", "snp", "--scenario", sc.to_str().unwrap(), "--out",
        sim.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = seqnet(&[
        "mb", "--genotypes", sim.to_str().unwrap(), "--target", "trait", "--test",
        "jt", "--alpha", "0.01",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let warnings = stderr(&out);
    assert_eq!(
        warnings.matches("kinship").count(),
        1,
        "caveat exactly once, got: {warnings}"
    );
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["target"], "trait");
    let members: Vec<String> = parsed["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert!(members.contains(&"snp1".to_string()), "members: {members:?}");
}

#[test]
fn mb_symmetry_flag_runs() {
    let dir = tempfile::tempdir().unwrap();
    let data = sample_csv(dir.path());
    let out = seqnet(&[
        "mb", "--data", &data, "--target", "x1", "--test", "fisher_z", "--alpha",
        "0.01", "--symmetry", "and",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(parsed["members"].as_array().is_some());
}

#[test]
fn recode_fit_predict_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("sc.json");
    write(
        &sc,
        r#"{"n":300,"m":5,"maf":0.4,"pattern":"linear","h2":0.5,"causal":[0,2],
           "ld_rho":0.0,"seed":23}"#,
    );
    let sim = dir.path().join("sim.csv");
    assert!(seqnet(&[
        "simulate", "snp", "--scenario", sc.to_str().unwrap(), "--out",
        sim.to_str().unwrap(),
    ])
    .status
    .success());

    // fit straight from the token CSV
    let fit_path = dir.path().join("fit.json");
    let out = seqnet(&[
        "fit", "--genotypes", sim.to_str().unwrap(), "--trait", "trait", "--lambda",
        "0.5", "--out", fit_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&fit_path).unwrap()).unwrap();
    assert_eq!(fit["lambda"], 0.5);
    assert_eq!(fit["effects"].as_array().unwrap().len(), 5);

    // recode the same file's genotype part for prediction input
    let geno_only = dir.path().join("g.csv");
    let text = fs::read_to_string(&sim).unwrap();
    let stripped: Vec<String> = text
        .lines()
        .map(|l| {
            let mut fields: Vec<&str> = l.split(',').collect();
            fields.pop();
            fields.join(",")
        })
        .collect();
    write(&geno_only, &(stripped.join("\n") + "\n"));

    let recoded = dir.path().join("recoded.csv");
    let schema = dir.path().join("recoded.schema");
    let out = seqnet(&[
        "recode", "--genotypes", geno_only.to_str().unwrap(), "--scheme", "centered",
        "--out", recoded.to_str().unwrap(), "--schema-out", schema.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = seqnet(&[
        "predict", "--fit", fit_path.to_str().unwrap(), "--data",
        recoded.to_str().unwrap(), "--schema", schema.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "prediction");
    assert_eq!(lines.len(), 301);
    for v in &lines[1..] {
        v.parse::<f64>().unwrap();
    }
}

#[test]
fn fit_with_cross_validation_reports_grid() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("sc.json");
    write(
        &sc,
        r#"{"n":200,"m":4,"maf":0.3,"pattern":"linear","h2":0.5,"causal":[0],
           "ld_rho":0.0,"seed":29}"#,
    );
    let sim = dir.path().join("sim.csv");
    assert!(seqnet(&[
        "simulate", "snp", "--scenario", sc.to_str().unwrap(), "--out",
        sim.to_str().unwrap(),
    ])
    .status
    .success());
    let out = seqnet(&[
        "fit", "--genotypes", sim.to_str().unwrap(), "--trait", "trait", "--cv",
        "0.01,1,100", "--folds", "4", "--seed", "5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["mse"].as_array().unwrap().len(), 3);
    let chosen = parsed["chosen_lambda"].as_f64().unwrap();
    assert!([0.01, 1.0, 100.0].contains(&chosen));
    assert_eq!(parsed["fit"]["lambda"].as_f64().unwrap(), chosen);
}

#[test]
fn relnet_and_ggm_emit_weighted_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    // x3 = x1 + x2 + small noise; all pairwise correlations strong
    let mut rows = String::from("x1,x2,x3\n");
    let mut state = 17u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 33) as f64 / (1u64 << 31) as f64) - 1.0
    };
    for _ in 0..120 {
        let x1 = next();
        let x2 = next();
        let x3 = x1 + x2 + 0.1 * next();
        rows.push_str(&format!("{x1},{x2},{x3}\n"));
    }
    write(&data, &rows);

    let out = seqnet(&["relnet", "--data", data.to_str().unwrap(), "--threshold", "0.5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let edges = parsed["edges"].as_array().unwrap();
    assert!(!edges.is_empty());
    for e in edges {
        assert!(e["weight"].as_f64().unwrap().abs() >= 0.5);
        assert_eq!(e["mark"], "undirected");
    }

    let out = seqnet(&[
        "ggm", "--data", data.to_str().unwrap(), "--alpha", "0.01", "--bonferroni",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(parsed["lambda"].as_f64().unwrap() >= 0.0);
    assert!(parsed["graph"]["edges"].as_array().is_some());
}

#[test]
fn export_converts_between_formats() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("g.json");
    write(
        &json_path,
        r#"{"nodes":["a","b","c"],"edges":[{"from":"a","to":"b","mark":"directed"},
            {"from":"b","to":"c","mark":"undirected","weight":0.5}]}"#,
    );
    let dot_path = dir.path().join("g.dot");
    let out = seqnet(&[
        "export", "--input", json_path.to_str().unwrap(), "--format", "dot", "--out",
        dot_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let dot = fs::read_to_string(&dot_path).unwrap();
    assert!(dot.contains("dir=none"));

    // dot back to json preserves the structure
    let out = seqnet(&["export", "--input", dot_path.to_str().unwrap(), "--format", "json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["nodes"], serde_json::json!(["a", "b", "c"]));
    assert_eq!(parsed["edges"].as_array().unwrap().len(), 2);

    // undirected view coerces marks
    let out = seqnet(&[
        "export", "--input", json_path.to_str().unwrap(), "--format", "json",
        "--undirected",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    for e in parsed["edges"].as_array().unwrap() {
        assert_eq!(e["mark"], "undirected");
    }

    // graphml is emitted and well formed enough to contain both edges
    let out = seqnet(&[
        "export", "--input", json_path.to_str().unwrap(), "--format", "graphml",
    ]);
    let xml = stdout(&out);
    assert!(xml.contains("directed=\"false\"") && xml.contains("</graphml>"));
}

#[test]
fn power_is_thread_count_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("sc.json");
    write(
        &sc,
        r#"[{"n":120,"m":2,"maf":0.3,"pattern":"linear","h2":0.3,"causal":[0],
            "ld_rho":0.0,"seed":0}]"#,
    );
    let run = |threads: &str| {
        let out = seqnet(&[
            "power", "--scenarios", sc.to_str().unwrap(), "--tests", "jt,fisher_z",
            "--alpha", "0.05", "--replicates", "100", "--seed", "3", "--threads",
            threads,
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
    };
    let serial = run("1");
    let parallel = run("8");
    assert_eq!(serial, parallel);
    assert!(serial.starts_with("scenario,test,n,"));
    // one row per (scenario, test)
    assert_eq!(serial.trim().lines().count(), 3);
}

#[test]
fn threads_env_fallback_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("sc.json");
    write(
        &sc,
        r#"{"n":100,"m":1,"maf":0.3,"pattern":"linear","h2":0.3,"causal":[0],
            "ld_rho":0.0,"seed":0}"#,
    );
    let with_env = Command::new(env!("CARGO_BIN_EXE_seqnet"))
        .args([
            "power", "--scenarios", sc.to_str().unwrap(), "--tests", "jt", "--alpha",
            "0.05", "--replicates", "100", "--seed", "3",
        ])
        .env("SEQNET_THREADS", "2")
        .output()
        .unwrap();
    assert!(with_env.status.success(), "{}", stderr(&with_env));
    let explicit = seqnet(&[
        "power", "--scenarios", sc.to_str().unwrap(), "--tests", "jt", "--alpha",
        "0.05", "--replicates", "100", "--seed", "3", "--threads", "2",
    ]);
    assert_eq!(stdout(&with_env), stdout(&explicit));
}

#[test]
fn power_progress_goes_to_stderr_only_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let sc = dir.path().join("sc.json");
    write(
        &sc,
        r#"{"n":100,"m":1,"maf":0.3,"pattern":"linear","h2":0.0,"causal":[],
            "ld_rho":0.0,"seed":0}"#,
    );
    let base = [
        "power", "--scenarios", sc.to_str().unwrap(), "--tests", "jt", "--alpha",
        "0.05", "--replicates", "100", "--seed", "3",
    ];
    let quiet = seqnet(&base);
    assert!(quiet.status.success());
    assert!(stderr(&quiet).is_empty(), "quiet run wrote: {}", stderr(&quiet));

    let mut loud_args = base.to_vec();
    loud_args.push("--progress");
    let loud = seqnet(&loud_args);
    assert!(stderr(&loud).contains("scenario 1/1"));
    // the table itself is unchanged
    assert_eq!(stdout(&quiet), stdout(&loud));
}

#[test]
fn recover_emits_metric_rows() {
    let out = seqnet(&[
        "recover", "--p", "4", "--degree", "1.5", "--n", "400", "--alpha", "0.01",
        "--replicates", "10", "--seed", "2", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let rows = rows.as_array().unwrap();
    // a replicate may be skipped (with a warning) when structure learning fails,
    // but every requested replicate is accounted for one way or the other
    let skipped = stderr(&out).lines().filter(|l| l.contains("skipped")).count();
    assert_eq!(rows.len() + skipped, 10, "stderr: {}", stderr(&out));
    assert!(rows.len() >= 5);
    for r in rows {
        assert!(r["shd"].as_u64().is_some());
        let precision = r["precision"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&precision));
    }
}

#[test]
fn simulate_discrete_then_learn_g2_runs() {
    let dir = tempfile::tempdir().unwrap();
    let dag = dir.path().join("g.json");
    assert!(seqnet(&[
        "simulate", "dag", "--p", "4", "--degree", "1.5", "--seed", "31", "--out",
        dag.to_str().unwrap(),
    ])
    .status
    .success());
    let data = dir.path().join("d.csv");
    let schema = dir.path().join("d.schema");
    assert!(seqnet(&[
        "simulate", "discrete", "--dag", dag.to_str().unwrap(), "--n", "500", "--seed",
        "32", "--out", data.to_str().unwrap(), "--schema-out", schema.to_str().unwrap(),
    ])
    .status
    .success());
    let out = seqnet(&[
        "learn", "--data", data.to_str().unwrap(), "--schema", schema.to_str().unwrap(),
        "--test", "g2", "--alpha", "0.05",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let first_line = stdout(&out).lines().next().unwrap().to_string();
    let parsed: serde_json::Value = serde_json::from_str(&first_line).unwrap();
    assert_eq!(parsed["nodes"].as_array().unwrap().len(), 4);
}
