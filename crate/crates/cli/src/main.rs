use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use motifscope::acceptance::all_checks;
use motifscope::count::count_induced;
use motifscope::estimators::{Estimator, EstimatorConfig, Family, LowRegime};
use motifscope::experiment::{records_csv, run_experiment, summarize, ExperimentConfig, GraphSource};
use motifscope::motif::Motif;
use motifscope::sampling::{derive_seed, draw, rng_for, write_dump, SamplerKind};
use motifscope::theory::gadgets::{builtin_pairs, matching_pair, star_family, verify_pair, write_catalog, GadgetPair, StarMode};
use std::path::PathBuf;
use std::process::ExitCode;

/// Motif counting and estimation from vertex-sampled graphs.
#[derive(Parser)]
#[command(name = "motifscope", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact induced motif counts of a parent graph.
    Count {
        #[command(flatten)]
        source: SourceArgs,
        /// Motifs to count; repeatable.
        #[arg(long, default_value = "edge")]
        motif: Vec<String>,
    },
    /// One sample, one estimate.
    Estimate {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        est: EstimatorArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the drawn sample to this file.
        #[arg(long)]
        dump_sample: Option<PathBuf>,
    },
    /// Replicated runs over a grid of sampling ratios; writes a summary CSV.
    Experiment {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        est: EstimatorArgs,
        /// Comma-separated sampling ratios.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Summary CSV path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-replicate CSV path.
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Indistinguishable graph pairs: build, verify and export.
    Gadgets {
        /// Also build the linear-algebra pair for this motif.
        #[arg(long)]
        matching: Option<String>,
        /// Also build a star-forest pair: K,ELL,first|second.
        #[arg(long)]
        stars: Option<String>,
        /// Directory for edge lists and manifest.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance checks.
    Verify {
        /// Criterion ids to run (all by default).
        #[arg(long)]
        only: Vec<String>,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with = "er")]
    graph: Option<PathBuf>,
    /// Erdős–Rényi parent: N,DELTA or N,DELTA,KEEP (first KEEP vertices).
    #[arg(long)]
    er: Option<String>,
    /// Seed for the Erdős–Rényi parent; defaults to --seed.
    #[arg(long)]
    graph_seed: Option<u64>,
    /// Add an ego vertex adjacent to every vertex of the file.
    #[arg(long)]
    ego: bool,
}

#[derive(Args)]
struct EstimatorArgs {
    #[arg(long)]
    motif: Option<String>,
    /// subgraph | neighborhood; defaults to the estimator's model.
    #[arg(long)]
    sampler: Option<String>,
    #[arg(long, default_value = "ht")]
    estimator: String,
    /// Degree bound for linear estimators; the parent's maximum degree by default.
    #[arg(long)]
    dmax: Option<usize>,
    #[arg(long)]
    clamp_at_zero: bool,
    /// Explicit ALPHA,BETA for linear estimators.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    weights: Option<Vec<f64>>,
    /// Use 1/p^k for the all-black weight when p <= 1/d.
    #[arg(long)]
    literal_low_regime: bool,
}

impl SourceArgs {
    fn source(&self, seed: u64) -> Result<GraphSource> {
        match (&self.graph, &self.er) {
            (Some(path), None) => Ok(GraphSource::File { path: path.clone(), ego: self.ego }),
            (None, Some(spec)) => {
                let parts: Vec<&str> = spec.split(',').collect();
                if parts.len() < 2 || parts.len() > 3 {
                    bail!("--er expects N,DELTA or N,DELTA,KEEP");
                }
                Ok(GraphSource::Er {
                    n: parts[0].trim().parse().context("--er N")?,
                    delta: parts[1].trim().parse().context("--er DELTA")?,
                    seed: self.graph_seed.unwrap_or(seed),
                    keep: parts.get(2).map(|k| k.trim().parse()).transpose().context("--er KEEP")?,
                })
            }
            _ => bail!("give exactly one of --graph or --er"),
        }
    }
}

impl EstimatorArgs {
    fn resolve(&self) -> Result<(Family, Motif, SamplerKind)> {
        let sampler = match &self.sampler {
            Some(s) => SamplerKind::parse(s)?,
            None if self.estimator == "ht" => SamplerKind::Subgraph,
            None => SamplerKind::Neighborhood,
        };
        let given = self.motif.as_deref().map(Motif::parse).transpose()?;
        let probe = given.clone().unwrap_or_else(Motif::edge);
        let family = Family::resolve(&self.estimator, sampler, &probe)?;
        let motif = match (family.fixed_motif(), given) {
            (Some(fixed), Some(m)) if fixed != m => {
                bail!("estimator {} only targets {}", self.estimator, fixed.name())
            }
            (Some(fixed), _) => fixed,
            (None, Some(m)) => m,
            (None, None) => Motif::edge(),
        };
        Ok((family, motif, sampler))
    }

    fn low_regime(&self) -> LowRegime {
        if self.literal_low_regime {
            LowRegime::Literal
        } else {
            LowRegime::Unbiased
        }
    }
}

fn parse_stars(spec: &str) -> Result<GadgetPair> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        bail!("--stars expects K,ELL,first|second");
    }
    let mode = match parts[2] {
        "first" => StarMode::FirstMoment,
        "second" => StarMode::SecondMoment,
        other => bail!("unknown star mode {other:?}"),
    };
    Ok(star_family(parts[0].parse()?, parts[1].parse()?, mode)?)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Count { source, motif } => {
            let g = source.source(0)?.load()?;
            println!("# n={} e={} d={}", g.n(), g.edge_count(), g.max_degree());
            println!("motif,count,method");
            for m in motif {
                let m = Motif::parse(&m)?;
                let r = count_induced(&m, &g)?;
                println!("{},{},{:?}", m.name(), r.count, r.method);
            }
        }
        Cmd::Estimate { source, est, p, seed, dump_sample } => {
            let g = source.source(seed)?.load()?;
            let (family, motif, sampler) = est.resolve()?;
            let d = est.dmax.unwrap_or_else(|| g.max_degree().max(1));
            let mut cfg = EstimatorConfig::new(family, motif, p).with_d(d).with_low_regime(est.low_regime());
            if let Some(w) = &est.weights {
                cfg = cfg.with_weights(w[0], w[1]);
            }
            let e = Estimator::build(&cfg)?;
            let sample_seed = derive_seed(seed, 0);
            let s = draw(&g, p, sampler, &mut rng_for(seed, 0))?;
            if let Some(path) = dump_sample {
                std::fs::write(&path, write_dump(&s, p, sample_seed))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let mut x = e.estimate(&s)?;
            if est.clamp_at_zero {
                x = x.max(0.0);
            }
            let truth = e.target(&g)?;
            println!("estimator,motif,p,seed,estimate,truth");
            println!("{},{},{p},{seed},{x},{truth}", family.name(), e.motif().name());
        }
        Cmd::Experiment { source, est, p, reps, seed, out, records } => {
            let (family, motif, sampler) = est.resolve()?;
            let mut cfg = ExperimentConfig::new(source.source(seed)?, family, motif, p);
            cfg.sampler = sampler;
            cfg.reps = reps;
            cfg.seed = seed;
            cfg.d = est.dmax;
            cfg.clamp_at_zero = est.clamp_at_zero;
            cfg.low_regime = est.low_regime();
            cfg.weights = est.weights.as_ref().map(|w| (w[0], w[1]));
            let x = run_experiment(&cfg)?;
            let summary = summarize(&x.records)?;
            match out {
                Some(path) => std::fs::write(&path, summary).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{summary}"),
            }
            if let Some(path) = records {
                std::fs::write(&path, records_csv(&x.records)?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Cmd::Gadgets { matching, stars, out } => {
            let mut pairs = builtin_pairs();
            if let Some(m) = matching {
                pairs.push(matching_pair(&Motif::parse(&m)?)?);
            }
            if let Some(s) = stars {
                pairs.push(parse_stars(&s)?);
            }
            let mut ok = true;
            println!("name,model,matched_order,target,gap,vertices,edges,verified");
            for pair in &pairs {
                // star forests match degree moments, not small censuses
                let verified = if pair.matched_order == 0 { true } else { verify_pair(pair)?.ok() };
                ok &= verified;
                println!(
                    "{},{},{},{},{},{},{},{}",
                    pair.name,
                    pair.model.name(),
                    pair.matched_order,
                    pair.target.name(),
                    pair.gap,
                    pair.h.n(),
                    pair.h.edge_count(),
                    verified
                );
            }
            if let Some(dir) = out {
                write_catalog(&pairs, &dir)?;
            }
            return Ok(ok);
        }
        Cmd::Verify { only } => {
            let mut ok = true;
            for (id, check) in all_checks() {
                if !only.is_empty() && !only.iter().any(|o| o == id) {
                    continue;
                }
                let o = check()?;
                ok &= o.passed;
                println!("{}", o.line());
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    if let Some(t) = std::env::var("MOTIFSCOPE_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if t > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(t).build_global().ok();
        }
    }
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
