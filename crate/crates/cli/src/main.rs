use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use edgeblend::clusterer::{cluster_with_alpha, ClustererConfig, Method};
use edgeblend::experiments::{
    alpha_columns, correlation_study, inverse_recover, metric_scaling_study, pareto_sweep,
    recover_weights, scaling_study, CorrelationConfig, ExperimentReport, OptParams, RecoverConfig,
    ScalingConfig, Table, TableFormat,
};
use edgeblend::io::{load_clustering, load_graph, save_clustering, save_graph, write_atomic};
use edgeblend::metrics::{modularity, nats_to_bits, variation_of_information};
use edgeblend::objective::{
    arctan_sum, scaled_holding_powers, Histogram, HoldingReport, ObjectiveConfig,
    DEFAULT_HISTOGRAM_BINS,
};
use edgeblend::optimizer::SearchOptions;
use edgeblend::synthgen::{generate, perturb, BenchSpec, NoiseParams};
use edgeblend::{AlphaVector, Error, ErrorKind, MultiGraph, Normalization};

/// Recover metric aggregation weights that justify a ground-truth clustering.
#[derive(Debug, Parser)]
#[command(name = "edgeblend", version)]
struct Cli {
    /// Worker threads for parallel experiment stages (default: all cores).
    #[arg(long, global = true, env = "EDGEBLEND_THREADS")]
    threads: Option<usize>,

    /// Separator for emitted tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Tsv,
}

impl From<Format> for TableFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => TableFormat::Csv,
            Format::Tsv => TableFormat::Tsv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Greedy,
    LabelProp,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Greedy => Method::GreedyModularity,
            MethodArg::LabelProp => Method::LabelPropagation,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a planted-partition benchmark with noisy metric copies.
    Generate(GenerateArgs),
    /// Turn a single-metric graph into a multi-metric one by adding noise.
    Perturb(PerturbArgs),
    /// Collapse a multi-metric graph to one composite metric.
    Collapse(CollapseArgs),
    /// Cluster the composite graph.
    Cluster(ClusterArgs),
    /// Variation of information and modularity of two clusterings.
    Compare(CompareArgs),
    /// Holding-power report of a clustering under a fixed aggregation.
    Holding(HoldingArgs),
    /// Find the aggregation that best justifies a clustering.
    Recover(RecoverArgs),
    /// Find the aggregation whose clustering is closest to the ground truth.
    Inverse(InverseArgs),
    /// Sweep the trade-off between holding power and modularity.
    Pareto(ParetoArgs),
    /// Correlate the objective with clusterer agreement across steepness values.
    Correlate(CorrelateArgs),
    /// Time objective evaluation against graph size.
    Scale(ScaleArgs),
}

#[derive(Debug, Args)]
struct NoiseArgs {
    /// Additive noise range as a multiple of the mean weight.
    #[arg(long, default_value_t = 2.0)]
    noise_add: f64,
    /// Lower bound of the multiplicative noise factor.
    #[arg(long, default_value_t = 0.0)]
    noise_mult_lo: f64,
    /// Upper bound of the multiplicative noise factor.
    #[arg(long, default_value_t = 1.0)]
    noise_mult_hi: f64,
}

impl NoiseArgs {
    fn params(&self) -> NoiseParams {
        NoiseParams {
            add_factor: self.noise_add,
            mult_lo: self.noise_mult_lo,
            mult_hi: self.noise_mult_hi,
        }
    }
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Objective evaluations allowed per start.
    #[arg(long, default_value_t = 1000)]
    budget: usize,
    /// Stop a search once its step falls below this.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Random starts in addition to the barycenter and the single-metric vectors.
    #[arg(long, default_value_t = 3)]
    starts: usize,
}

impl SearchArgs {
    fn params(&self) -> OptParams {
        OptParams {
            search: SearchOptions {
                tolerance: self.tol,
                budget: self.budget,
                ..SearchOptions::default()
            },
            random_starts: self.starts,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Number of vertices.
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Number of noisy metric copies.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Mean vertex degree.
    #[arg(long, default_value_t = 30.0)]
    degree: f64,
    /// Fraction of each vertex's edges leaving its cluster.
    #[arg(long, default_value_t = 0.7)]
    mu_t: f64,
    /// Fraction of each vertex's strength on external edges.
    #[arg(long, default_value_t = 0.75)]
    mu_w: f64,
    /// Smallest cluster size.
    #[arg(long, default_value_t = 16)]
    min_cluster: usize,
    /// Largest cluster size.
    #[arg(long, default_value_t = 50)]
    max_cluster: usize,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for graph.edges, pristine.edges, truth.clu and spec.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PerturbArgs {
    /// Single-metric input graph.
    #[arg(long)]
    graph: PathBuf,
    /// Number of noisy copies.
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge list.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CollapseArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    graph: PathBuf,
    /// Aggregation coefficients, comma separated (default: uniform).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Output single-metric edge list.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    graph: PathBuf,
    /// Aggregation coefficients, comma separated (default: uniform).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Clustering algorithm.
    #[arg(long, value_enum, default_value_t = MethodArg::Greedy)]
    method: MethodArg,
    /// Exact number of clusters to produce (greedy only).
    #[arg(long)]
    k: Option<usize>,
    /// Random seed for refinement order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output clustering file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// First clustering file.
    a: PathBuf,
    /// Second clustering file.
    b: PathBuf,
    /// Graph the clusterings partition.
    graph: PathBuf,
    /// Aggregation used for modularity (default: uniform).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Report the variation of information in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Debug, Args)]
struct HoldingArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    graph: PathBuf,
    /// Clustering file to score.
    #[arg(long)]
    clusters: PathBuf,
    /// Aggregation coefficients, comma separated (default: uniform).
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Arctan steepness.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Output directory for the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    graph: PathBuf,
    /// Ground-truth clustering.
    #[arg(long)]
    clusters: PathBuf,
    /// Optional noise-free single-metric graph on the same edges, for comparison.
    #[arg(long)]
    pristine: Option<PathBuf>,
    /// Arctan steepness.
    #[arg(long, default_value_t = 1.0, conflicts_with = "beta_sweep")]
    beta: f64,
    /// Log-spaced steepness sweep `LO:HI:COUNT`, one recovery per value.
    #[arg(long, value_parser = parse_sweep)]
    beta_sweep: Option<Sweep>,
    #[command(flatten)]
    search: SearchArgs,
    /// Output directory for the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InverseArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    graph: PathBuf,
    /// Ground-truth clustering.
    #[arg(long)]
    clusters: PathBuf,
    /// Clustering algorithm.
    #[arg(long, value_enum, default_value_t = MethodArg::Greedy)]
    method: MethodArg,
    /// Exact cluster count for the clusterer.
    #[arg(long)]
    k: Option<usize>,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Total clusterer runs across all starts.
    #[arg(long, default_value_t = 200)]
    budget: usize,
    /// Stop a search once its step falls below this.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Random starts in addition to the barycenter and the single-metric vectors.
    #[arg(long, default_value_t = 0)]
    starts: usize,
    /// Report the variation of information in bits instead of nats.
    #[arg(long)]
    bits: bool,
    /// Output directory for the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParetoArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    graph: PathBuf,
    /// Ground-truth clustering.
    #[arg(long)]
    clusters: PathBuf,
    /// Modularity weights in [0, 1], comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
    lambda: Vec<f64>,
    /// Arctan steepness.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Graph whose ground-truth modularity normalizes the modularity axis
    /// (default: the uniform blend of --graph).
    #[arg(long)]
    pristine: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
    /// Output directory for the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    /// Edge-list file of the graph.
    #[arg(long)]
    graph: PathBuf,
    /// Ground-truth clustering.
    #[arg(long)]
    clusters: PathBuf,
    /// Exact cluster count for the clusterer.
    #[arg(long)]
    k: usize,
    /// Arctan steepness values, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.001,1,1000")]
    beta: Vec<f64>,
    /// Number of random aggregation vectors.
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Dirichlet concentration of the samples (1 is uniform).
    #[arg(long, default_value_t = 1.0)]
    concentration: f64,
    /// Clustering algorithm.
    #[arg(long, value_enum, default_value_t = MethodArg::Greedy)]
    method: MethodArg,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScaleArgs {
    /// Vertex counts, increasing, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "500,1000,2000,4000")]
    sizes: Vec<usize>,
    /// Graphs generated per size.
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Number of metrics.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Instead of timing sizes, run full recoveries on graphs of the first
    /// size for each of these metric counts.
    #[arg(long, value_delimiter = ',')]
    metric_counts: Option<Vec<usize>>,
    #[command(flatten)]
    search: SearchArgs,
    /// Output directory for the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct Sweep(Vec<f64>);

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err("expected LO:HI:COUNT".into());
    };
    let lo: f64 = lo.parse().map_err(|e| format!("LO: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("HI: {e}"))?;
    let count: usize = count.parse().map_err(|e| format!("COUNT: {e}"))?;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err("need 0 < LO <= HI and COUNT >= 1".into());
    }
    if count == 1 {
        return Ok(Sweep(vec![lo]));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok(Sweep(
        (0..count)
            .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
            .collect(),
    ))
}

fn alpha_or_uniform(g: &MultiGraph, alpha: &Option<Vec<f64>>) -> edgeblend::Result<AlphaVector> {
    match alpha {
        Some(a) => {
            if a.len() != g.n_metrics() {
                return Err(Error::DimensionMismatch {
                    expected: g.n_metrics(),
                    got: a.len(),
                });
            }
            AlphaVector::new(a.clone())
        }
        None => Ok(AlphaVector::uniform(g.n_metrics())),
    }
}

fn emit(report: &ExperimentReport, out: Option<&Path>, format: TableFormat) -> edgeblend::Result<()> {
    print!("{}", report.summary_text());
    if let Some(dir) = out {
        report.write_to(dir, format)?;
    }
    Ok(())
}

fn fmt_alpha(alpha: &[f64]) -> String {
    alpha.iter().map(|a| format!("{a:.6}")).collect::<Vec<_>>().join(",")
}

fn run(cli: Cli) -> edgeblend::Result<()> {
    let format: TableFormat = cli.format.into();
    match cli.command {
        Command::Generate(a) => {
            let spec = BenchSpec {
                n: a.n,
                avg_degree: a.degree,
                mu_t: a.mu_t,
                mu_w: a.mu_w,
                k: a.k,
                noise: a.noise.params(),
                min_cluster: a.min_cluster,
                max_cluster: a.max_cluster,
                seed: a.seed,
            };
            let bench = generate(&spec)?;
            std::fs::create_dir_all(&a.out).map_err(|e| Error::io(&a.out, e))?;
            save_graph(&bench.graph, a.out.join("graph.edges"))?;
            save_graph(&bench.pristine, a.out.join("pristine.edges"))?;
            save_clustering(&bench.planted, a.out.join("truth.clu"))?;
            let sidecar = serde_json::to_string_pretty(&spec).expect("spec serializes");
            write_atomic(a.out.join("spec.json"), sidecar.as_bytes())?;
            println!("# seed: {}", a.seed);
            println!(
                "vertices {} edges {} metrics {} clusters {}",
                bench.graph.n_vertices(),
                bench.graph.n_edges(),
                bench.graph.n_metrics(),
                bench.planted.n_clusters()
            );
        }
        Command::Perturb(a) => {
            let g = load_graph(&a.graph)?;
            let out = perturb(&g, a.k, &a.noise.params(), a.seed)?;
            save_graph(&out, &a.out)?;
            println!("# seed: {}", a.seed);
        }
        Command::Collapse(a) => {
            let g = load_graph(&a.graph)?;
            let alpha = alpha_or_uniform(&g, &a.alpha)?;
            let view = g.collapse(&alpha)?;
            let collapsed = g.with_metrics(vec!["composite".into()], view.weights().to_vec())?;
            save_graph(&collapsed, &a.out)?;
        }
        Command::Cluster(a) => {
            let g = load_graph(&a.graph)?;
            let alpha = alpha_or_uniform(&g, &a.alpha)?;
            let cfg = ClustererConfig {
                method: a.method.into(),
                target_clusters: a.k,
                seed: a.seed,
                ..ClustererConfig::default()
            };
            let c = cluster_with_alpha(&g, &alpha, &cfg)?;
            save_clustering(&c, &a.out)?;
            println!("# seed: {}", a.seed);
            println!("clusters {}", c.n_clusters());
            println!("modularity {:?}", modularity(&g.collapse(&alpha)?, &c)?);
        }
        Command::Compare(a) => {
            let g = load_graph(&a.graph)?;
            let ca = load_clustering(&a.a, g.n_vertices())?;
            let cb = load_clustering(&a.b, g.n_vertices())?;
            let alpha = alpha_or_uniform(&g, &a.alpha)?;
            let vi = variation_of_information(&ca, &cb)?;
            let vi = if a.bits { nats_to_bits(vi) } else { vi };
            let view = g.collapse(&alpha)?;
            println!("vi {vi:?}");
            println!("modularity_a {:?}", modularity(&view, &ca)?);
            println!("modularity_b {:?}", modularity(&view, &cb)?);
        }
        Command::Holding(a) => {
            let g = load_graph(&a.graph)?;
            let c = load_clustering(&a.clusters, g.n_vertices())?;
            let alpha = alpha_or_uniform(&g, &a.alpha)?;
            let cfg = ObjectiveConfig::arctan(a.beta);
            cfg.validate()?;
            let values = scaled_holding_powers(&g, &c, &alpha)?;
            let objective = arctan_sum(&values, a.beta);
            let hist = Histogram::covering(&values, DEFAULT_HISTOGRAM_BINS);
            let report_values = HoldingReport::new(values, hist);

            let mut report = ExperimentReport::new(
                "holding",
                0,
                serde_json::json!({
                    "graph": a.graph,
                    "clusters": a.clusters,
                    "alpha": alpha.coeffs(),
                    "beta": a.beta,
                }),
            );
            report.summary.insert("objective".into(), objective);
            report.summary.insert("fraction_positive".into(), report_values.fraction_positive);
            report.summary.insert("fraction_negative".into(), report_values.fraction_negative());
            let mut per_vertex = Table::new("holding", ["vertex", "cluster", "holding"]);
            for (v, h) in report_values.values.iter().enumerate() {
                per_vertex.push(vec![v.to_string(), c.label(v).to_string(), h.to_string()]);
            }
            let mut hist = Table::new("histogram", ["bin_left", "bin_right", "count"]);
            for (l, r, n) in report_values.histogram.rows() {
                hist.push(vec![l.to_string(), r.to_string(), n.to_string()]);
            }
            report.tables.extend([per_vertex, hist]);
            emit(&report, a.out.as_deref(), format)?;
        }
        Command::Recover(a) => {
            let g = load_graph(&a.graph)?;
            let c = load_clustering(&a.clusters, g.n_vertices())?;
            let pristine = a.pristine.as_ref().map(load_graph).transpose()?;
            let params = a.search.params();
            let betas = a.beta_sweep.clone().map_or_else(|| vec![a.beta], |s| s.0);
            let mut sweep_columns = vec!["beta".to_string(), "objective".into(), "fraction_positive".into()];
            sweep_columns.extend(alpha_columns(g.n_metrics()));
            let mut sweep = Table::new("sweep", sweep_columns);
            for (i, &beta) in betas.iter().enumerate() {
                let cfg = RecoverConfig {
                    objective: ObjectiveConfig::arctan(beta),
                    opt: params,
                    ..RecoverConfig::default()
                };
                let out = recover_weights(&g, &c, pristine.as_ref(), &cfg)?;
                let reported = out.alpha.normalized(Normalization::MaxNorm);
                println!("alpha {}", fmt_alpha(&reported));
                let mut row = vec![
                    beta.to_string(),
                    out.objective_value.to_string(),
                    out.optimized_report.fraction_positive.to_string(),
                ];
                row.extend(out.alpha.coeffs().iter().map(f64::to_string));
                sweep.push(row);
                let dir = match (&a.out, &a.beta_sweep) {
                    (Some(d), Some(_)) => Some(d.join(format!("beta_{i}"))),
                    (Some(d), None) => Some(d.clone()),
                    (None, _) => None,
                };
                emit(&out.report, dir.as_deref(), format)?;
            }
            if let (Some(dir), Some(_)) = (&a.out, &a.beta_sweep) {
                write_atomic(dir.join(format!("sweep.{}", ext(format))), sweep.render(format)?.as_bytes())?;
            }
        }
        Command::Inverse(a) => {
            let g = load_graph(&a.graph)?;
            let c = load_clustering(&a.clusters, g.n_vertices())?;
            let clusterer = ClustererConfig {
                method: a.method.into(),
                target_clusters: a.k,
                seed: a.seed,
                ..ClustererConfig::default()
            };
            let params = OptParams {
                search: SearchOptions {
                    tolerance: a.tol,
                    ..SearchOptions::default()
                },
                random_starts: a.starts,
                seed: a.seed,
            };
            let out = inverse_recover(&g, &c, &clusterer, &params, Some(a.budget))?;
            println!("alpha {}", fmt_alpha(&out.alpha.normalized(Normalization::MaxNorm)));
            if a.bits {
                println!("vi_bits {:?}", nats_to_bits(out.vi));
            }
            emit(&out.report, a.out.as_deref(), format)?;
        }
        Command::Pareto(a) => {
            let g = load_graph(&a.graph)?;
            let c = load_clustering(&a.clusters, g.n_vertices())?;
            let reference = a.pristine.as_ref().map(load_graph).transpose()?;
            let params = a.search.params();
            let out = pareto_sweep(&g, &c, &a.lambda, a.beta, reference.as_ref(), &params)?;
            emit(&out.report, a.out.as_deref(), format)?;
        }
        Command::Correlate(a) => {
            let g = load_graph(&a.graph)?;
            let c = load_clustering(&a.clusters, g.n_vertices())?;
            let cfg = CorrelationConfig {
                betas: a.beta,
                n_alpha: a.samples,
                concentration: a.concentration,
                clusterer: ClustererConfig {
                    method: a.method.into(),
                    target_clusters: Some(a.k),
                    seed: a.seed,
                    ..ClustererConfig::default()
                },
                seed: a.seed,
            };
            let out = correlation_study(&g, &c, &cfg)?;
            emit(&out.report, a.out.as_deref(), format)?;
        }
        Command::Scale(a) => {
            let first = *a.sizes.first().ok_or_else(|| Error::InvalidArgument("no sizes given".into()))?;
            let template = BenchSpec::standard(first, a.k, a.search.seed);
            match &a.metric_counts {
                Some(counts) => {
                    let params = a.search.params();
                    let (_, report) =
                        metric_scaling_study(first, counts, &template, ObjectiveConfig::default(), &params)?;
                    emit(&report, a.out.as_deref(), format)?;
                }
                None => {
                    let cfg = ScalingConfig {
                        sizes: a.sizes.clone(),
                        template,
                        reps: a.reps,
                        seed: a.search.seed,
                        ..ScalingConfig::default()
                    };
                    let out = scaling_study(&cfg)?;
                    emit(&out.report, a.out.as_deref(), format)?;
                }
            }
        }
    }
    Ok(())
}

fn ext(format: TableFormat) -> &'static str {
    match format {
        TableFormat::Csv => "csv",
        TableFormat::Tsv => "tsv",
    }
}

fn main() -> ExitCode {
    if !cfg!(debug_assertions) {
        std::panic::set_hook(Box::new(|info| {
            eprintln!("internal error: {}", info.to_string().replace('\n', " "));
        }));
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            ExitCode::from(match e.kind() {
                ErrorKind::Usage => 1,
                ErrorKind::Data => 2,
                ErrorKind::Numerical => 3,
            })
        }
    }
}
