use std::collections::BTreeMap;

use edgeblend::clusterer::ClustererConfig;
use edgeblend::experiments::{
    correlation_study, inverse_recover, metric_scaling_study, pareto_sweep, recover_weights, scaling_study,
    CorrelationConfig, ExperimentReport, OptParams, RecoverConfig, ScalingConfig, TableFormat,
};
use edgeblend::objective::ObjectiveConfig;
use edgeblend::synthgen::{generate, BenchSpec};

/// Header line of every table file the report writes, keyed by file name.
fn headers(report: &ExperimentReport) -> BTreeMap<String, String> {
    let dir = tempfile::tempdir().unwrap();
    report.write_to(dir.path(), TableFormat::Csv).unwrap();
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "csv") {
            let text = std::fs::read_to_string(&path).unwrap();
            let name = path.file_name().unwrap().to_str().unwrap().to_string();
            out.insert(name, text.lines().next().unwrap_or("").to_string());
        }
    }
    assert!(dir.path().join("summary.txt").exists());
    assert!(dir.path().join("provenance.json").exists());
    out
}

fn expect(report: &ExperimentReport, golden: &[(&str, &str)]) {
    let want: BTreeMap<String, String> = golden.iter().map(|(f, h)| (f.to_string(), h.to_string())).collect();
    assert_eq!(headers(report), want, "{}", report.experiment);
}

fn quick() -> OptParams {
    OptParams { random_starts: 0, ..Default::default() }
}

#[test]
fn experiment_tables_have_stable_columns() {
    let bench = generate(&BenchSpec::standard(120, 2, 1)).unwrap();
    let (g, truth) = (&bench.graph, &bench.planted);

    let recover = recover_weights(g, truth, Some(&bench.pristine), &RecoverConfig { opt: quick(), ..Default::default() }).unwrap();
    expect(
        &recover.report,
        &[
            ("alpha.csv", "metric,alpha_simplex,alpha_max_norm"),
            ("slices.csv", "metric,fraction_positive,fraction_negative"),
            ("histogram.csv", "series,bin_left,bin_right,count"),
            ("trace.csv", "eval,start,alpha_1,alpha_2,value"),
        ],
    );

    let inverse = inverse_recover(g, truth, &ClustererConfig::default(), &quick(), Some(4)).unwrap();
    expect(
        &inverse.report,
        &[("basis.csv", "metric,vi"), ("evaluations.csv", "eval,start,alpha_1,alpha_2,vi")],
    );

    let pareto = pareto_sweep(g, truth, &[0.0, 1.0], 1.0, None, &quick()).unwrap();
    expect(
        &pareto.report,
        &[("pareto.csv", "lambda,fraction_positive,modularity,normalized_modularity,dominated,alpha_1,alpha_2")],
    );

    let cfg = CorrelationConfig {
        n_alpha: 4,
        clusterer: ClustererConfig::default().with_target(truth.n_clusters()),
        ..Default::default()
    };
    let correlation = correlation_study(g, truth, &cfg).unwrap();
    expect(
        &correlation.report,
        &[("correlation.csv", "beta,spearman"), ("samples.csv", "sample,beta,objective,vi")],
    );

    let scaling = scaling_study(&ScalingConfig {
        sizes: vec![100, 200],
        reps: 1,
        inner: 1,
        template: BenchSpec::standard(100, 2, 0),
        ..Default::default()
    })
    .unwrap();
    expect(&scaling.report, &[("scaling.csv", "n,edges,metrics,reps,mean_seconds")]);

    let (_, metric_scaling) =
        metric_scaling_study(100, &[1, 2], &BenchSpec::standard(100, 1, 0), ObjectiveConfig::default(), &quick()).unwrap();
    expect(&metric_scaling, &[("metric_scaling.csv", "metrics,evaluations,seconds")]);
}
