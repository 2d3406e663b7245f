//! Replicated estimation runs over a grid of sampling ratios.

use crate::error::{Error, Result};
use crate::estimators::{Estimator, EstimatorConfig, Family, LowRegime};
use crate::graph::{self, Graph};
use crate::io::read_edge_list;
use crate::motif::Motif;
use crate::sampling::{derive_seed, draw, SamplerKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Clone, Debug)]
pub enum GraphSource {
    File { path: PathBuf, ego: bool },
    /// `G(n, δ)` from `seed`, optionally restricted to its first `keep` vertices.
    Er { n: usize, delta: f64, seed: u64, keep: Option<usize> },
    Given(Graph),
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        match self {
            GraphSource::File { path, ego } => Ok(read_edge_list(path, *ego)?.graph),
            GraphSource::Er { n, delta, seed, keep } => {
                let g = graph::erdos_renyi(*n, *delta, *seed)?;
                Ok(match keep {
                    Some(k) if *k < g.n() => g.induced_subgraph(&(0..*k as u32).collect::<Vec<_>>()),
                    _ => g,
                })
            }
            GraphSource::Given(g) => Ok(g.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GraphSource::File { path, .. } => path.display().to_string(),
            GraphSource::Er { n, delta, seed, keep: None } => format!("er({n},{delta},seed={seed})"),
            GraphSource::Er { n, delta, seed, keep: Some(k) } => format!("er({n},{delta},seed={seed})[..{k}]"),
            GraphSource::Given(g) => format!("graph(n={},e={})", g.n(), g.edge_count()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub source: GraphSource,
    pub sampler: SamplerKind,
    pub family: Family,
    pub motif: Motif,
    pub p_grid: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    /// Degree bound for linear estimators; the parent's maximum degree if unset.
    pub d: Option<usize>,
    pub clamp_at_zero: bool,
    pub low_regime: LowRegime,
    /// Explicit `(α, β)` for linear estimators.
    pub weights: Option<(f64, f64)>,
}

impl ExperimentConfig {
    pub fn new(source: GraphSource, family: Family, motif: Motif, p_grid: Vec<f64>) -> ExperimentConfig {
        ExperimentConfig {
            source,
            sampler: family.sampler(),
            family,
            motif,
            p_grid,
            reps: 10,
            seed: 0,
            d: None,
            clamp_at_zero: false,
            low_regime: LowRegime::default(),
            weights: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() {
            return Err(Error::InvalidParameter("empty p grid".into()));
        }
        if let Some(&p) = self.p_grid.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return Err(Error::InvalidParameter(format!("p = {p} outside (0, 1]")));
        }
        if self.reps == 0 {
            return Err(Error::InvalidParameter("need at least one replicate".into()));
        }
        if self.sampler != self.family.sampler() {
            return Err(Error::ModelMismatch(format!(
                "{} runs on {} samples",
                self.family.name(),
                self.family.sampler().name()
            )));
        }
        Ok(())
    }

    pub fn estimator(&self, g: &Graph, p: f64) -> Result<Estimator> {
        let d = self.d.unwrap_or_else(|| g.max_degree().max(1));
        let mut cfg = EstimatorConfig::new(self.family, self.motif.clone(), p).with_d(d).with_low_regime(self.low_regime);
        if let Some((a, b)) = self.weights {
            cfg = cfg.with_weights(a, b);
        }
        Estimator::build(&cfg)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub p: f64,
    pub rep: usize,
    pub seed: u64,
    pub estimate: f64,
    pub truth: u128,
    pub rel_err: f64,
    pub wall_time: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub p: f64,
    pub mean_rel_err: f64,
    /// Population standard deviation.
    pub std_rel_err: f64,
    pub n_reps: usize,
}

#[derive(Clone, Debug)]
pub struct Experiment {
    pub truth: u128,
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    cfg.validate()?;
    let g = cfg.source.load()?;
    run_on_graph(cfg, &g)
}

/// Replicate `r` at every `p` uses the seed derived from `(cfg.seed, r)`, so
/// samples at different `p` are coupled through the same uniforms.
pub fn run_on_graph(cfg: &ExperimentConfig, g: &Graph) -> Result<Experiment> {
    cfg.validate()?;
    let ests: Vec<Estimator> = cfg.p_grid.iter().map(|&p| cfg.estimator(g, p)).collect::<Result<_>>()?;
    let truth = ests[0].target(g)?;
    if truth == 0 {
        return Err(Error::InvalidParameter("target count is zero; relative error undefined".into()));
    }
    let jobs: Vec<(usize, usize)> = (0..cfg.p_grid.len()).flat_map(|i| (0..cfg.reps).map(move |r| (i, r))).collect();
    let records: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(i, rep)| {
            let p = cfg.p_grid[i];
            let seed = derive_seed(cfg.seed, rep as u64);
            let start = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = draw(g, p, cfg.sampler, &mut rng)?;
            let mut estimate = ests[i].estimate(&s)?;
            if cfg.clamp_at_zero {
                estimate = estimate.max(0.0);
            }
            Ok(RunRecord {
                p,
                rep,
                seed,
                estimate,
                truth,
                rel_err: (estimate - truth as f64).abs() / truth as f64,
                wall_time: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<_>>()?;
    let summary = summarize_records(&records);
    Ok(Experiment { truth, records, summary })
}

/// Per-`p` mean and population standard deviation of the relative error,
/// ordered by `p`.
pub fn summarize_records(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut ps: Vec<f64> = records.iter().map(|r| r.p).collect();
    ps.sort_by(f64::total_cmp);
    ps.dedup();
    ps.into_iter()
        .map(|p| {
            let errs: Vec<f64> = records.iter().filter(|r| r.p == p).map(|r| r.rel_err).collect();
            let n = errs.len() as f64;
            let mean = errs.iter().sum::<f64>() / n;
            let var = errs.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
            SummaryRow { p, mean_rel_err: mean, std_rel_err: var.sqrt(), n_reps: errs.len() }
        })
        .collect()
}

fn to_csv<F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>>(comment: &str, f: F) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    f(&mut w)?;
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?).expect("utf8");
    Ok(format!("# {comment}\n{body}"))
}

pub fn summarize(records: &[RunRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidParameter("no records".into()));
    }
    let rows = summarize_records(records);
    to_csv("std_rel_err is the population standard deviation (divides by n_reps)", |w| {
        w.write_record(["p", "mean_rel_err", "std_rel_err", "n_reps"])?;
        for r in &rows {
            w.write_record([r.p.to_string(), r.mean_rel_err.to_string(), r.std_rel_err.to_string(), r.n_reps.to_string()])?;
        }
        Ok(())
    })
}

/// Per-replicate records; `wall_time` is in seconds.
pub fn records_csv(records: &[RunRecord]) -> Result<String> {
    to_csv("one row per replicate", |w| {
        w.write_record(["p", "rep", "seed", "estimate", "truth", "rel_err", "wall_time"])?;
        for r in records {
            w.write_record([
                r.p.to_string(),
                r.rep.to_string(),
                r.seed.to_string(),
                r.estimate.to_string(),
                r.truth.to_string(),
                r.rel_err.to_string(),
                r.wall_time.to_string(),
            ])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: f64, e: f64) -> RunRecord {
        RunRecord { p, rep: 0, seed: 0, estimate: 0.0, truth: 1, rel_err: e, wall_time: 0.0 }
    }

    #[test]
    fn summary_statistics() {
        let rows = summarize_records(&[rec(0.5, 0.1), rec(0.5, 0.3), rec(0.2, 0.4)]);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].p, 0.2);
        assert_eq!(rows[0].std_rel_err, 0.0);
        assert!((rows[1].mean_rel_err - 0.2).abs() < 1e-15);
        assert!((rows[1].std_rel_err - 0.1).abs() < 1e-12);
    }

    #[test]
    fn full_observation_is_exact() {
        let src = GraphSource::Given(graph::petersen());
        for fam in [Family::HtSubgraph, Family::LinearEdge, Family::AdaptiveEdge] {
            let cfg = ExperimentConfig { reps: 3, ..ExperimentConfig::new(src.clone(), fam, Motif::edge(), vec![1.0]) };
            let x = run_experiment(&cfg).unwrap();
            assert!(x.records.iter().all(|r| r.rel_err < 1e-12), "{fam:?}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let src = GraphSource::Given(graph::petersen());
        let cfg = ExperimentConfig::new(src, Family::HtSubgraph, Motif::edge(), vec![]);
        assert!(run_experiment(&cfg).is_err());
        let cfg = ExperimentConfig { p_grid: vec![0.0], ..cfg };
        assert!(run_experiment(&cfg).is_err());
    }
}
