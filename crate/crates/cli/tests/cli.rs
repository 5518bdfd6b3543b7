use std::path::Path;
use std::process::{Command, Output};

fn edgeblend(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgeblend"))
        .args(args)
        .env_remove("EDGEBLEND_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate(dir: &Path, n: usize, k: usize, seed: u64) {
    let o = edgeblend(&[
        "generate",
        "--n",
        &n.to_string(),
        "--k",
        &k.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn summary_value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.next().unwrap().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("{key} missing from\n{text}"))
}

#[test]
fn compare_identical_clusterings_gives_zero_vi() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 200, 3, 1);
    let clu = dir.path().join("truth.clu");
    let g = dir.path().join("graph.edges");
    let o = edgeblend(&["compare", clu.to_str().unwrap(), clu.to_str().unwrap(), g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(summary_value(&text, "vi"), 0.0);
    assert!(text.contains("vi 0.0"), "{text}");
    assert_eq!(summary_value(&text, "modularity_a"), summary_value(&text, "modularity_b"));
}

#[test]
fn usage_errors_exit_with_one() {
    let o = edgeblend(&["compare", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = edgeblend(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    let o = edgeblend(&["recover", "--graph", "g", "--clusters", "c", "--beta", "1", "--beta-sweep", "0.1:10:3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = edgeblend(&["--threads", "0", "compare", "a", "b", "c"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn data_errors_exit_with_two_and_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.edges");
    let o = edgeblend(&["compare", "a.clu", "b.clu", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "));

    let bad = dir.path().join("bad.edges");
    std::fs::write(&bad, "#metrics a\n0 1 -1\n").unwrap();
    let out = dir.path().join("out.clu");
    let o = edgeblend(&["cluster", "--graph", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
    assert!(!out.exists());
}

#[test]
fn every_subcommand_documents_its_flags() {
    let cases: &[(&str, &[&str])] = &[
        ("generate", &["--n", "--k", "--degree", "--mu-t", "--mu-w", "--min-cluster", "--max-cluster", "--noise-add", "--noise-mult-lo", "--noise-mult-hi", "--seed", "--out"]),
        ("perturb", &["--graph", "--k", "--noise-add", "--seed", "--out"]),
        ("collapse", &["--graph", "--alpha", "--out"]),
        ("cluster", &["--graph", "--alpha", "--method", "--k", "--seed", "--out"]),
        ("compare", &["--alpha", "--bits"]),
        ("holding", &["--graph", "--clusters", "--alpha", "--beta", "--out"]),
        ("recover", &["--graph", "--clusters", "--pristine", "--beta", "--beta-sweep", "--seed", "--budget", "--tol", "--starts", "--out"]),
        ("inverse", &["--graph", "--clusters", "--method", "--k", "--seed", "--budget", "--tol", "--starts", "--bits", "--out"]),
        ("pareto", &["--graph", "--clusters", "--lambda", "--beta", "--pristine", "--seed", "--budget", "--tol", "--starts", "--out"]),
        ("correlate", &["--graph", "--clusters", "--k", "--beta", "--samples", "--concentration", "--method", "--seed", "--out"]),
        ("scale", &["--sizes", "--reps", "--k", "--metric-counts", "--seed", "--budget", "--out"]),
    ];
    for (cmd, flags) in cases {
        let o = edgeblend(&[cmd, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let help = stdout(&o);
        for flag in flags.iter().chain(&["--threads", "--format"]) {
            let line = help
                .lines()
                .find(|l| l.trim_start().starts_with(flag) || l.contains(&format!(" {flag} ")) || l.contains(&format!(" {flag}\n")))
                .or_else(|| help.lines().find(|l| l.split_whitespace().any(|w| w.trim_end_matches(',') == *flag)))
                .unwrap_or_else(|| panic!("{cmd} --help lacks {flag}:\n{help}"));
            // every option line carries a description after the flag
            let described = line.split_whitespace().count() > 2
                || help.lines().skip_while(|l| *l != line).nth(1).is_some_and(|n| n.starts_with("          "));
            assert!(described, "{cmd}: {flag} undocumented");
        }
    }
    let o = edgeblend(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn runs_are_deterministic_given_the_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    generate(a.path(), 200, 3, 7);
    generate(b.path(), 200, 3, 7);
    for f in ["graph.edges", "pristine.edges", "truth.clu", "spec.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let run = |out: &Path| {
        let g = a.path().join("graph.edges");
        let c = a.path().join("truth.clu");
        let o = edgeblend(&[
            "recover", "--graph", g.to_str().unwrap(), "--clusters", c.to_str().unwrap(), "--seed", "3",
            "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let (ra, rb) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run(ra.path()), run(rb.path()));
    for f in ["trace.csv", "alpha.csv", "histogram.csv", "slices.csv", "summary.txt"] {
        assert_eq!(
            std::fs::read(ra.path().join(f)).unwrap(),
            std::fs::read(rb.path().join(f)).unwrap(),
            "{f}"
        );
    }
    // no temporaries left behind
    for entry in std::fs::read_dir(ra.path()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        assert!(!name.starts_with('.'), "{name}");
    }
}

#[test]
fn recover_on_benchmark_reports_high_fraction() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 500, 10, 0);
    let g = dir.path().join("graph.edges");
    let c = dir.path().join("truth.clu");
    let p = dir.path().join("pristine.edges");
    let o = edgeblend(&[
        "recover", "--graph", g.to_str().unwrap(), "--clusters", c.to_str().unwrap(), "--pristine",
        p.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# seed: 0"));
    assert!(summary_value(&text, "fraction_positive_optimized") >= 0.90, "{text}");
}

#[test]
fn pipeline_subcommands_write_their_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = |f: &str| dir.path().join(f).to_str().unwrap().to_string();
    generate(dir.path(), 200, 3, 2);
    let ok = |args: &[&str]| {
        let o = edgeblend(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    ok(&["collapse", "--graph", &d("graph.edges"), "--alpha", "1,1,2", "--out", &d("c.edges")]);
    assert!(std::fs::read_to_string(d("c.edges")).unwrap().starts_with("#metrics composite"));
    ok(&["perturb", "--graph", &d("pristine.edges"), "--k", "4", "--out", &d("p.edges")]);
    assert!(std::fs::read_to_string(d("p.edges")).unwrap().starts_with("#metrics m1 m2 m3 m4"));
    let text = ok(&["cluster", "--graph", &d("graph.edges"), "--k", "5", "--out", &d("found.clu")]);
    assert_eq!(summary_value(&text, "clusters"), 5.0);
    ok(&["holding", "--graph", &d("graph.edges"), "--clusters", &d("truth.clu"), "--out", &d("hold"), "--format", "tsv"]);
    assert!(dir.path().join("hold/histogram.tsv").exists());
    ok(&["inverse", "--graph", &d("graph.edges"), "--clusters", &d("truth.clu"), "--budget", "6", "--out", &d("inv")]);
    let evals = std::fs::read_to_string(d("inv/evaluations.csv")).unwrap();
    assert_eq!(evals.lines().count(), 7);
    ok(&["pareto", "--graph", &d("graph.edges"), "--clusters", &d("truth.clu"), "--lambda", "0,1", "--starts", "0", "--out", &d("par")]);
    assert!(dir.path().join("par/pareto.csv").exists());
    ok(&["correlate", "--graph", &d("graph.edges"), "--clusters", &d("truth.clu"), "--k", "6", "--samples", "5", "--out", &d("cor")]);
    assert!(dir.path().join("cor/correlation.csv").exists());
    ok(&["scale", "--sizes", "100,200", "--reps", "1", "--k", "2", "--out", &d("sc")]);
    assert!(dir.path().join("sc/scaling.csv").exists());
    ok(&["recover", "--graph", &d("graph.edges"), "--clusters", &d("truth.clu"), "--beta-sweep", "0.1:10:3", "--starts", "0", "--out", &d("sweep")]);
    assert_eq!(std::fs::read_to_string(d("sweep/sweep.csv")).unwrap().lines().count(), 4);
    assert!(dir.path().join("sweep/beta_2/alpha.csv").exists());
}

#[test]
fn thread_count_can_come_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    generate(dir.path(), 200, 2, 0);
    let o = Command::new(env!("CARGO_BIN_EXE_edgeblend"))
        .args(["scale", "--sizes", "100", "--reps", "1", "--k", "2"])
        .env("EDGEBLEND_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = Command::new(env!("CARGO_BIN_EXE_edgeblend"))
        .args(["scale", "--sizes", "100"])
        .env("EDGEBLEND_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
