mod common;

use std::collections::BTreeMap;
use std::fs;

use common::*;
use serde_json::Value;
use tempfile::tempdir;

fn ok(out: &std::process::Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn json(path: &std::path::Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn score_reference_no_slicing() {
    let dir = tempdir().unwrap();
    let mut args = vec!["score".to_owned()];
    args.extend(reference_args());
    args.extend(["--out".into(), p(dir.path())]);
    let out = run(&args);
    ok(&out);
    let v = json(&dir.path().join("score.json"));
    assert_eq!(v["global"]["matched"], 8);
    assert_eq!(v["global"]["total"], 12);
    assert_eq!(v["relations"]["unclassified"]["count"], 5);
    assert!(v["slices"].as_array().unwrap().is_empty());
}

#[test]
fn score_by_specialization_gives_two_rows_with_normalization() {
    let dir = tempdir().unwrap();
    let mut args = vec!["score".to_owned()];
    args.extend(reference_args());
    args.extend([
        "--by".into(),
        "specialization".into(),
        "--out".into(),
        p(dir.path()),
    ]);
    ok(&run(&args));
    let v = json(&dir.path().join("score.json"));
    let slices = v["slices"].as_array().unwrap();
    assert_eq!(slices.len(), 2);
    for s in slices {
        assert_eq!(s["norm_kind"], "gender_half_sum");
        assert!(s["norm_match_rate_pct"].is_f64());
        assert!(s["norm_mean_log"].is_f64());
    }
    // chemistry: female r01 r03 r05 match {yes, yes, no}, male r02 r04 r06 {yes, yes, no}
    let chem = &slices[0];
    assert_eq!(chem["label"], "chemistry");
    let want = (200.0 / 3.0 + 200.0 / 3.0) / 2.0;
    assert!((chem["norm_match_rate_pct"].as_f64().unwrap() - want).abs() < 1e-12);
}

#[test]
fn missing_ngram_file_names_path() {
    let mut args = vec!["score".to_owned()];
    args.extend(["--assoc".into(), p(&fixture("reference_assoc.tsv"))]);
    args.extend(["--ngrams".into(), "/nonexistent/ngrams.tsv".into()]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/ngrams.tsv"));
}

#[test]
fn empty_filter_result_exits_2() {
    let mut args = vec!["score".to_owned()];
    args.extend(reference_args());
    args.extend([
        "--filter".into(),
        "age=90-99".into(),
        "--out".into(),
        p(tempdir().unwrap().path()),
    ]);
    assert_eq!(run(&args).status.code(), Some(2));
}

#[test]
fn malformed_filter_exits_1() {
    let mut args = vec!["score".to_owned()];
    args.extend(reference_args());
    args.extend(["--filter".into(), "height=3".into()]);
    assert_eq!(run(&args).status.code(), Some(1));
}

#[test]
fn json_and_csv_carry_identical_numbers() {
    let dir = tempdir().unwrap();
    for format in ["json", "csv"] {
        let mut args = vec!["score".to_owned()];
        args.extend(reference_args());
        args.extend(["--by", "gender", "--format", format, "--out"].map(String::from));
        args.push(p(dir.path()));
        ok(&run(&args));
    }
    let v = json(&dir.path().join("score.json"));
    let mut csv_values: BTreeMap<(String, String, String), f64> = BTreeMap::new();
    let mut rdr = csv::Reader::from_path(dir.path().join("score.csv")).unwrap();
    for row in rdr.records() {
        let row = row.unwrap();
        if let Ok(x) = row[4].parse::<f64>() {
            csv_values.insert((row[0].to_owned(), row[2].to_owned(), row[3].to_owned()), x);
        }
    }
    let get = |scope: &str, label: &str, metric: &str| {
        csv_values[&(scope.into(), label.into(), metric.into())]
    };
    for (key, metric) in [
        ("s", "s"),
        ("match_rate_pct", "match_rate_pct"),
        ("mean_log", "mean_log"),
        ("matched", "matched"),
    ] {
        let j = v["global"][key].as_f64().unwrap();
        assert!((j - get("global", "", metric)).abs() <= 1e-12 * j.abs().max(1.0));
    }
    for s in v["slices"].as_array().unwrap() {
        let label = s["label"].as_str().unwrap();
        for key in ["norm_match_rate_pct", "norm_mean_log"] {
            let j = s[key].as_f64().unwrap();
            assert!((j - get("slice", label, key)).abs() <= 1e-12 * j.abs().max(1.0));
        }
        let j = s["report"]["s"].as_f64().unwrap();
        assert!((j - get("slice", label, "s")).abs() <= 1e-12 * j.abs().max(1.0));
    }
}

fn test_cmd(c: &MatchCorpus, out: &std::path::Path, iters: &str) -> std::process::Output {
    run([
        "test",
        "--assoc",
        &p(&c.assoc),
        "--resp",
        &p(&c.resp),
        "--ngrams",
        &p(&c.ngrams),
        "--by",
        "gender",
        "--iters",
        iters,
        "--out",
        &p(out),
    ])
}

#[test]
fn planted_effect_is_significant() {
    let dir = tempdir().unwrap();
    let c = write_match_corpus(dir.path(), 10, false, true, &["m", "f"]);
    let out = test_cmd(&c, dir.path(), "2000");
    ok(&out);
    let v = json(&dir.path().join("test.json"));
    assert!(v["p_value"].as_f64().unwrap() < 0.01);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["group_a"]["count"], 10);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("seed 42") && stdout.contains("n=10"));
}

#[test]
fn identical_groups_give_p_one() {
    let dir = tempdir().unwrap();
    let c = write_match_corpus(dir.path(), 8, true, true, &["m", "f"]);
    ok(&test_cmd(&c, dir.path(), "500"));
    assert_eq!(json(&dir.path().join("test.json"))["p_value"], 1.0);
}

#[test]
fn single_gender_exits_2() {
    let dir = tempdir().unwrap();
    let c = write_match_corpus(dir.path(), 8, true, true, &["f"]);
    assert_eq!(test_cmd(&c, dir.path(), "100").status.code(), Some(2));
}

fn embed_cmd(c: &Corpus, out: &std::path::Path, dim: &str) -> std::process::Output {
    run([
        "embed",
        "--assoc",
        &p(&c.assoc),
        "--resp",
        &p(&c.resp),
        "--by",
        "gender",
        "--dim",
        dim,
        "--out",
        &p(out),
    ])
}

#[test]
fn embed_by_gender_writes_three_models_deterministically() {
    let data = tempdir().unwrap();
    let c = write_gender_corpus(data.path(), 10, true);
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    ok(&embed_cmd(&c, a.path(), "8"));
    ok(&embed_cmd(&c, b.path(), "8"));
    let mut names: Vec<String> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["model_all.txt", "model_female.txt", "model_male.txt"]
    );
    for n in &names {
        assert_eq!(
            fs::read(a.path().join(n)).unwrap(),
            fs::read(b.path().join(n)).unwrap()
        );
    }
}

#[test]
fn embed_dim_zero_exits_1() {
    let data = tempdir().unwrap();
    let c = write_gender_corpus(data.path(), 4, true);
    let out = embed_cmd(&c, data.path(), "0");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}

#[test]
fn embed_skipped_slice_warns_and_succeeds() {
    let data = tempdir().unwrap();
    let c = write_gender_corpus(data.path(), 10, true);
    // one extra respondent whose slice is too small to survive pruning
    let mut resp = fs::read_to_string(&c.resp).unwrap();
    resp.push_str("x00\tm\tintern\t30\tcity\n");
    fs::write(&c.resp, resp).unwrap();
    let mut assoc = fs::read_to_string(&c.assoc).unwrap();
    assoc.push_str("x00\tlonely\tword\n");
    fs::write(&c.assoc, assoc).unwrap();
    let out = run([
        "embed",
        "--assoc",
        &p(&c.assoc),
        "--resp",
        &p(&c.resp),
        "--by",
        "specialization",
        "--dim",
        "4",
        "--out",
        &p(data.path()),
    ]);
    ok(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped slice `intern`"));
    assert!(data.path().join("model_staff.txt").exists());
    assert!(!data.path().join("model_intern.txt").exists());
}

#[test]
fn nn_layouts() {
    let data = tempdir().unwrap();
    let c = write_gender_corpus(data.path(), 10, true);
    ok(&embed_cmd(&c, data.path(), "8"));
    let models: Vec<String> = ["all", "male", "female"]
        .iter()
        .map(|m| p(&data.path().join(format!("model_{m}.txt"))))
        .collect();
    let nn = |query: &str, n: &str, models: &[String]| {
        let mut args = vec![
            "nn".to_owned(),
            "--query".into(),
            query.into(),
            "-n".into(),
            n.into(),
        ];
        for m in models {
            args.extend(["--model".to_owned(), m.clone()]);
        }
        run(&args)
    };

    let out = nn("probe", "3", &models);
    ok(&out);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1 + 1 + 3);
    assert!(
        lines[1].starts_with("all") && lines[1].contains("male") && lines[1].contains("female")
    );

    let out = nn("probe", "1", &models);
    ok(&out);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);

    // a word present in the male model only
    let mut extra = fs::read_to_string(&models[1]).unwrap();
    extra.push_str(&format!("onlymale{}\n", "\t0.5".repeat(8)));
    fs::write(&models[1], extra).unwrap();
    let out = nn("onlymale", "2", &models);
    ok(&out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(2).unwrap().contains('—'));

    assert_eq!(nn("nowhere", "2", &models).status.code(), Some(2));
}

#[test]
fn report_counts_and_top() {
    let dir = tempdir().unwrap();
    let assoc = dir.path().join("a.tsv");
    fs::write(
        &assoc,
        "r1\tyellow\tcolour\nr1\trussia\tcountry\nr2\tyellow\tcolour\nr2\trussia\tland\nr3\tyellow\tsun\nr3\trussia\tland\n",
    )
    .unwrap();
    let lemmas = dir.path().join("l.tsv");
    fs::write(&lemmas, "colours\tcolour\n").unwrap();
    ok(&run([
        "report",
        "--assoc",
        &p(&assoc),
        "--lemmas",
        &p(&lemmas),
        "--top",
        "1",
        "--out",
        &p(dir.path()),
    ]));
    let v = json(&dir.path().join("summary.json"));
    assert_eq!(v["questionnaires"], 3);
    assert_eq!(v["distinct_stimuli"], 2);
    assert_eq!(v["top_responses"][0][0], "colour");
    assert_eq!(v["top_responses"][0][1], 2);
    assert_eq!(v["top_responses"].as_array().unwrap().len(), 1);
}

#[test]
fn output_directory_is_created() {
    let dir = tempdir().unwrap();
    let nested = dir.path().join("a/b/c");
    let mut args = vec![
        "report".to_owned(),
        "--assoc".into(),
        p(&fixture("reference_assoc.tsv")),
    ];
    args.extend([
        "--resp".into(),
        p(&fixture("reference_resp.tsv")),
        "--format".into(),
        "csv".into(),
    ]);
    args.extend(["--out".into(), p(&nested)]);
    ok(&run(&args));
    let text = fs::read_to_string(nested.join("summary.csv")).unwrap();
    assert!(text.contains("respondents,gender,female,count,6"));
}
