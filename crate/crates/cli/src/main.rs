use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lipexp::expansion::{self, ExpansionMode};
use lipexp::experiments::{self, ExperimentConfig, Format};
use lipexp::graph::{self, Graph};
use lipexp::height::{self, HeightFunction, Mode};
use lipexp::samplers::{self, McmcParams, SampleBatch, TreeDp};
use lipexp::transform::{self, KRule};
use lipexp::{par, rng};

#[derive(Parser)]
#[command(name = "lipexp", version, about = "Random Lipschitz functions and homomorphisms on expanders and trees")]
struct Cli {
    /// Random seed (default 0); overrides the seed of an experiment config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; a `.config` file with the resolved parameters is written
    /// beside it. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// Enumeration cap.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Worker threads; 1 runs sequentially. Defaults to rayon's choice.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lipschitz,
    Hom,
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    #[arg(long, value_enum, default_value = "lipschitz")]
    mode: ModeArg,
    /// Lipschitz constant.
    #[arg(long = "m", default_value_t = 1)]
    m: u32,
}

impl ModeArgs {
    fn mode(self) -> Mode {
        match self.mode {
            ModeArg::Lipschitz => Mode::Lipschitz(self.m),
            ModeArg::Hom => Mode::Homomorphism,
        }
    }

    fn expansion(self) -> ExpansionMode {
        match self.mode {
            ModeArg::Lipschitz => ExpansionMode::General,
            ModeArg::Hom => ExpansionMode::Bipartite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplerArg {
    Mcmc,
    Tree,
}

#[derive(Subcommand)]
enum Command {
    /// Writes a graph file, e.g. `random-regular:64:4`, `hypercube:3`,
    /// `tree:3:4`.
    Gen { spec: String },
    /// Expansion certificate as one JSON line.
    Certify {
        graph: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = expansion::DEFAULT_TOL)]
        tol: f64,
    },
    /// Every function pinned at `v0`, one per line.
    Enumerate {
        graph: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 0)]
        v0: usize,
    },
    /// Random functions pinned at `v0`, one per line.
    Sample {
        graph: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Pinned vertex; defaults to 0, or the glue vertex of a tree.
        #[arg(long)]
        v0: Option<usize>,
        #[arg(long, value_enum, default_value = "mcmc")]
        sampler: SamplerArg,
        #[arg(long, default_value_t = 10_000)]
        burnin: u64,
        #[arg(long, default_value_t = 10)]
        thin: u64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Phase of a function and deviations from it, as JSON.
    Phase {
        graph: PathBuf,
        function: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 0)]
        v0: usize,
        /// Expansion parameter; defaults to the spectral certificate.
        #[arg(long)]
        lambda: Option<f64>,
        /// Vertices to report; all by default.
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<usize>,
    },
    /// Exhaustive check of the flattening transformation, as JSON.
    VerifyTransform {
        graph: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, default_value_t = 0)]
        v0: usize,
        /// Target vertices; all by default.
        #[arg(long, value_delimiter = ',')]
        v: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        t: u32,
        /// Expansion parameter for the phase rule; defaults to the exhaustive
        /// value.
        #[arg(long)]
        lambda: Option<f64>,
        /// Use `k = 0` instead of the phase (grounded trees).
        #[arg(long)]
        k_zero: bool,
    },
    /// Runs an experiment config; `key=value` overrides follow the file.
    Experiment {
        config: PathBuf,
        overrides: Vec<String>,
    },
}

struct Output {
    body: String,
    params: BTreeMap<String, String>,
}

/// A graph file, or a generator spec as accepted by `gen`. The bipartition
/// is recomputed when the file does not record it.
fn load_graph(arg: &Path, seed: u64) -> Result<Graph> {
    let g = if arg.exists() {
        graph::read_graph(arg).with_context(|| format!("reading graph {}", arg.display()))?
    } else {
        let spec = arg.to_str().context("graph spec is not UTF-8")?;
        spec.parse::<experiments::GraphSource>()
            .with_context(|| format!("{spec} is neither a graph file nor a generator spec"))?
            .load(seed)?
    };
    Ok(g.with_bipartition().unwrap_or(g))
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn mode_params(m: ModeArgs, map: &mut BTreeMap<String, String>) {
    match m.mode() {
        Mode::Lipschitz(k) => {
            map.insert("mode".into(), "lipschitz".into());
            map.insert("m".into(), k.to_string());
        }
        Mode::Homomorphism => {
            map.insert("mode".into(), "hom".into());
        }
    }
}

fn header(p: &BTreeMap<String, String>) -> Vec<(String, String)> {
    p.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn json_line<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)? + "\n")
}

fn run(cli: &Cli) -> Result<Output> {
    let cap = cli.cap.unwrap_or(1_000_000);
    let seed = cli.seed.unwrap_or(0);
    Ok(match &cli.command {
        Command::Gen { spec } => {
            let source: experiments::GraphSource = spec.parse()?;
            let g = source.load(seed)?;
            Output {
                body: graph::format_graph(&g),
                params: params([("command", "gen".into()), ("spec", spec.clone()), ("seed", seed.to_string())]),
            }
        }
        Command::Certify { graph, mode, tol } => {
            let g = load_graph(graph, seed)?;
            let m = matches!(mode.mode, ModeArg::Lipschitz).then_some(mode.m);
            let report = expansion::certify(&g, mode.expansion(), m, *tol)?;
            let mut p = params([("command", "certify".into()), ("graph", graph.display().to_string()), ("tol", tol.to_string())]);
            mode_params(*mode, &mut p);
            Output { body: json_line(&report)?, params: p }
        }
        Command::Enumerate { graph, mode, v0 } => {
            let g = load_graph(graph, seed)?;
            let res = samplers::enumerate(&g, *v0, mode.mode(), cap)?;
            let mut p = params([
                ("command", "enumerate".into()),
                ("graph", graph.display().to_string()),
                ("v0", v0.to_string()),
                ("cap", cap.to_string()),
                ("seed", seed.to_string()),
                ("count", res.count.to_string()),
            ]);
            mode_params(*mode, &mut p);
            let batch = SampleBatch {
                header: header(&p),
                samples: res.functions.into_iter().map(HeightFunction::into_values).collect(),
            };
            Output { body: samplers::format_samples(&batch), params: p }
        }
        Command::Sample { graph, mode, v0, sampler, burnin, thin, n } => {
            let g = load_graph(graph, seed)?;
            let v0 = &v0.or(g.glue_vertex()).unwrap_or(0);
            let mut p = params([
                ("command", "sample".into()),
                ("graph", graph.display().to_string()),
                ("v0", v0.to_string()),
                ("seed", seed.to_string()),
                ("n", n.to_string()),
            ]);
            mode_params(*mode, &mut p);
            let samples: Vec<Vec<i32>> = match sampler {
                SamplerArg::Mcmc => {
                    p.insert("sampler".into(), "mcmc".into());
                    p.insert("burnin".into(), burnin.to_string());
                    p.insert("thin".into(), thin.to_string());
                    let params = McmcParams { burnin: *burnin, thin: *thin, n_samples: *n };
                    samplers::mcmc_sample(&g, *v0, mode.mode(), params, seed)?
                        .into_iter()
                        .map(HeightFunction::into_values)
                        .collect()
                }
                SamplerArg::Tree => {
                    p.insert("sampler".into(), "tree".into());
                    let shape = g.tree_shape().context("the tree sampler needs a generated tree, e.g. tree:3:4")?;
                    if g.glue_vertex().is_some_and(|r| r != *v0) {
                        bail!("the tree sampler pins the glue vertex; pass --v0 {}", g.glue_vertex().unwrap());
                    }
                    let dp = TreeDp::new(shape.arity, shape.height, mode.mode())?;
                    let seeds: Vec<u64> = (0..*n as u64).collect();
                    par::map(&seeds, |&i| samplers::tree_sample_with(&dp, &mut rng::stream(seed, i), shape.glued))
                        .into_iter()
                        .map(|f| f.map(HeightFunction::into_values))
                        .collect::<lipexp::Result<_>>()?
                }
            };
            let batch = SampleBatch { header: header(&p), samples };
            Output { body: samplers::format_samples(&batch), params: p }
        }
        Command::Phase { graph, function, mode: mode_args, v0, lambda, vertices } => {
            let g = load_graph(graph, seed)?;
            let text = fs::read_to_string(function).with_context(|| format!("reading {}", function.display()))?;
            let values = height::parse_function(&text)?;
            let mode = mode_args.mode();
            let f = HeightFunction::new(values, *v0, mode);
            let violations = height::validate(&g, &f);
            if let Some(v) = violations.first() {
                bail!("{} is not a valid {mode} function pinned at {v0}: {v:?}", function.display());
            }
            let emode = mode_args.expansion();
            let lambda = match lambda {
                Some(l) => *l,
                None => {
                    let l = expansion::spectral_lambda(&g, emode, expansion::DEFAULT_TOL, expansion::DEFAULT_MAX_ITER)?;
                    l + expansion::DEFAULT_TOL * l.max(1.0)
                }
            };
            let phase = height::phase(&g, &f, lambda)?;
            let targets: Vec<usize> = if vertices.is_empty() { (0..g.n()).collect() } else { vertices.clone() };
            let deviation: BTreeMap<String, u32> =
                targets.iter().map(|&v| (v.to_string(), height::deviation(&f, v, &phase))).collect();
            let mut out = serde_json::Map::new();
            out.insert("mode".into(), mode.to_string().into());
            out.insert("lambda".into(), lambda.into());
            out.insert("k".into(), phase.base().into());
            match phase {
                height::Phase::Interval { lo, hi } => {
                    out.insert("phase".into(), serde_json::json!([lo, hi]));
                }
                height::Phase::Level { class, .. } => {
                    out.insert("i_star".into(), class.into());
                }
            }
            out.insert("deviation".into(), serde_json::to_value(deviation)?);
            let mut p = params([
                ("command", "phase".into()),
                ("v0", v0.to_string()),
                ("graph", graph.display().to_string()),
                ("function", function.display().to_string()),
                ("lambda", format!("{lambda:?}")),
            ]);
            mode_params(*mode_args, &mut p);
            Output { body: json_line(&out)?, params: p }
        }
        Command::VerifyTransform { graph, mode, v0, v, t, lambda, k_zero } => {
            let g = load_graph(graph, seed)?;
            let rule = if *k_zero {
                KRule::Zero
            } else {
                let l = match lambda {
                    Some(l) => *l,
                    None => expansion::exhaustive_lambda(&g, mode.expansion())?.lambda,
                };
                KRule::Phase { lambda: l }
            };
            let targets: Vec<usize> = if v.is_empty() { (0..g.n()).filter(|&x| x != *v0).collect() } else { v.clone() };
            let reports = par::map(&targets, |&x| transform::verify_counting(&g, *v0, x, *t, mode.mode(), rule, cap))
                .into_iter()
                .collect::<lipexp::Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.all_passed());
            let mut body = String::new();
            for r in &reports {
                body.push_str(&json_line(r)?);
            }
            body.push_str(&json_line(&serde_json::json!({ "all_passed": passed }))?);
            let mut p = params([
                ("command", "verify-transform".into()),
                ("graph", graph.display().to_string()),
                ("v0", v0.to_string()),
                ("t", t.to_string()),
                ("cap", cap.to_string()),
                ("k_rule", match rule {
                    KRule::Zero => "zero".into(),
                    KRule::Phase { lambda } => format!("phase(lambda={lambda:?})"),
                }),
            ]);
            mode_params(*mode, &mut p);
            if !passed {
                eprintln!("verify-transform: some checks failed");
            }
            Output { body, params: p }
        }
        Command::Experiment { config, overrides } => {
            let mut text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
            let flags = [cli.seed.map(|s| format!("seed = {s}")), cli.cap.map(|c| format!("cap = {c}"))];
            for line in overrides.iter().cloned().chain(flags.into_iter().flatten()) {
                text.push('\n');
                text.push_str(&line);
            }
            let mut cfg = ExperimentConfig::parse(&text)?;
            if let Some(f) = cli.format {
                cfg.format = to_format(f);
            }
            if cli.out.is_some() {
                cfg.out = cli.out.clone();
            }
            let result = experiments::run_experiment(&cfg)?;
            for (k, v) in &result.meta {
                eprintln!("# {k} = {v}");
            }
            let body = experiments::emit_report(&result, cfg.format)?;
            if let Some(out) = &cfg.out {
                write_out(out, &body, &cfg.resolved_with_output())?;
                return Ok(Output { body: String::new(), params: BTreeMap::new() });
            }
            Output { body, params: BTreeMap::new() }
        }
    })
}

fn to_format(f: OutFormat) -> Format {
    match f {
        OutFormat::Csv => Format::Csv,
        OutFormat::Jsonl => Format::Jsonl,
    }
}

fn config_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config");
    PathBuf::from(s)
}

fn write_out(out: &Path, body: &str, config: &str) -> Result<()> {
    fs::write(out, body).with_context(|| format!("writing {}", out.display()))?;
    fs::write(config_path(out), config).with_context(|| format!("writing config beside {}", out.display()))?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        par::set_threads(n)?;
    }
    let output = run(&cli)?;
    if matches!(cli.command, Command::Experiment { .. }) {
        if cli.out.is_none() {
            print!("{}", output.body);
        }
        return Ok(());
    }
    match &cli.out {
        Some(out) => {
            let config: String = output.params.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
            write_out(out, &output.body, &config)?;
        }
        None => print!("{}", output.body),
    }
    Ok(())
}
