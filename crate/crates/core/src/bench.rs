//! Experiment harness: one cell is (algorithm, VM count, seed); a sweep is
//! the Cartesian product of algorithms, VM counts and repetitions.
//!
//! Results CSV header:
//! `algorithm,num_vms,seed,makespan,avg_completion,avg_response,objective_value,evaluations,wall_ms`.
//! The summary is a tidy CSV, `algorithm,num_vms,metric,mean,std,n`, one row
//! per (algorithm, VM count, metric).

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{fcfs_schedule, ljf_schedule, LjfMode};
use crate::error::{Error, Result};
use crate::evaluator::evaluate;
use crate::lca::{optimize, LcaParams};
use crate::sched::{make_objective, Assignment, Job, MetricWeights, Vm};
use crate::workload::{
    generate_fleet, generate_workload, FleetSpec, SpeedPick, WorkloadSpec, DEFAULT_SPEEDS,
};

pub const RESULTS_HEADER: [&str; 9] = [
    "algorithm",
    "num_vms",
    "seed",
    "makespan",
    "avg_completion",
    "avg_response",
    "objective_value",
    "evaluations",
    "wall_ms",
];

pub const SUMMARY_HEADER: [&str; 6] = ["algorithm", "num_vms", "metric", "mean", "std", "n"];

pub const DEFAULT_VM_COUNTS: [usize; 7] = [10, 30, 50, 70, 90, 110, 130];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Lca,
    Fcfs,
    Ljf,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Lca, Algorithm::Fcfs, Algorithm::Ljf];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Lca => "lca",
            Algorithm::Fcfs => "fcfs",
            Algorithm::Ljf => "ljf",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::param(format!(
                    "unknown algorithm {s:?} (expected lca, fcfs or ljf)"
                ))
            })
    }
}

/// Where a cell's jobs come from.
#[derive(Debug, Clone, PartialEq)]
pub enum JobSource {
    /// Generate with the cell seed substituted for `spec.seed`.
    Generate(WorkloadSpec),
    /// The same fixed trace for every cell.
    Fixed(Vec<Job>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub jobs: JobSource,
    pub vm_speeds: Vec<f64>,
    pub speed_pick: SpeedPick,
    pub vm_counts: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub reps: usize,
    pub base_seed: u64,
    /// `seed` is replaced by the cell seed.
    pub lca: LcaParams,
    pub weights: MetricWeights,
    pub ljf_mode: LjfMode,
    /// Record wall-clock time; when false `wall_ms` is written as 0.
    pub timing: bool,
    /// Worker threads for the sweep; `None` uses all cores, `Some(1)` runs serially.
    pub threads: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            jobs: JobSource::Generate(WorkloadSpec::default()),
            vm_speeds: DEFAULT_SPEEDS.to_vec(),
            speed_pick: SpeedPick::Cycle,
            vm_counts: DEFAULT_VM_COUNTS.to_vec(),
            algorithms: Algorithm::ALL.to_vec(),
            reps: 10,
            base_seed: 0,
            lca: LcaParams::default(),
            weights: MetricWeights::default(),
            ljf_mode: LjfMode::Longest,
            timing: true,
            threads: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.vm_counts.is_empty() || self.vm_counts.contains(&0) {
            return Err(Error::param("vm counts must be non-empty and all >= 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::param("at least one algorithm is required"));
        }
        if self.reps == 0 {
            return Err(Error::param("repetitions must be >= 1"));
        }
        if self.threads == Some(0) {
            return Err(Error::param("thread count must be >= 1"));
        }
        match &self.jobs {
            JobSource::Generate(spec) => spec.validate()?,
            JobSource::Fixed(jobs) if jobs.is_empty() => {
                return Err(Error::param("job trace is empty"))
            }
            JobSource::Fixed(_) => {}
        }
        FleetSpec {
            vm_count: 1,
            speeds: self.vm_speeds.clone(),
            pick: self.speed_pick,
            seed: 0,
        }
        .validate()?;
        if self.algorithms.contains(&Algorithm::Lca) {
            self.lca.validate()?;
        }
        Ok(())
    }

    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.reps as u64).map(move |r| self.base_seed.wrapping_add(r))
    }

    /// Jobs and fleet for one cell.
    pub fn instance(&self, num_vms: usize, seed: u64) -> Result<(Vec<Job>, Vec<Vm>)> {
        let jobs = match &self.jobs {
            JobSource::Generate(spec) => generate_workload(&WorkloadSpec {
                seed,
                ..spec.clone()
            })?,
            JobSource::Fixed(jobs) => jobs.clone(),
        };
        let vms = generate_fleet(&FleetSpec {
            vm_count: num_vms,
            speeds: self.vm_speeds.clone(),
            pick: self.speed_pick,
            seed,
        })?;
        Ok((jobs, vms))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: Algorithm,
    pub num_vms: usize,
    pub seed: u64,
    pub makespan: f64,
    pub avg_completion: f64,
    pub avg_response: f64,
    pub objective_value: f64,
    pub evaluations: u64,
    pub wall_ms: f64,
}

impl ResultRow {
    /// Equality ignoring wall-clock time.
    pub fn same_outcome(&self, other: &ResultRow) -> bool {
        ResultRow {
            wall_ms: 0.0,
            ..self.clone()
        } == ResultRow {
            wall_ms: 0.0,
            ..other.clone()
        }
    }

    fn sort_key(&self) -> (&'static str, usize, u64) {
        (self.algorithm.name(), self.num_vms, self.seed)
    }
}

/// Outcome of one algorithm on one instance, before timing is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub assignment: Assignment,
    pub evaluations: u64,
}

/// Runs `algorithm` on an explicit instance.
pub fn solve(
    algorithm: Algorithm,
    jobs: &[Job],
    vms: &[Vm],
    config: &ExperimentConfig,
    seed: u64,
) -> Result<Solved> {
    Ok(match algorithm {
        Algorithm::Fcfs => Solved {
            assignment: fcfs_schedule(jobs, vms)?,
            evaluations: 1,
        },
        Algorithm::Ljf => Solved {
            assignment: ljf_schedule(jobs, vms, config.ljf_mode)?,
            evaluations: 1,
        },
        Algorithm::Lca => {
            let objective = make_objective(jobs, vms, config.weights)?;
            let params = LcaParams {
                seed,
                ..config.lca.clone()
            };
            let out = optimize(&objective, &objective.domain(), &params)?;
            Solved {
                assignment: objective.decode(&out.best)?,
                evaluations: out.evaluations,
            }
        }
    })
}

pub fn run_cell(
    config: &ExperimentConfig,
    algorithm: Algorithm,
    num_vms: usize,
    seed: u64,
) -> Result<ResultRow> {
    let (jobs, vms) = config.instance(num_vms, seed)?;
    let started = Instant::now();
    let solved = solve(algorithm, &jobs, &vms, config, seed)?;
    let (_, metrics) = evaluate(&jobs, &vms, &solved.assignment)?;
    let wall_ms = if config.timing {
        started.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    Ok(ResultRow {
        algorithm,
        num_vms,
        seed,
        makespan: metrics.makespan,
        avg_completion: metrics.avg_completion,
        avg_response: metrics.avg_response,
        objective_value: config.weights.combine(&metrics),
        evaluations: solved.evaluations,
        wall_ms,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub num_vms: usize,
    pub metric: &'static str,
    pub mean: f64,
    /// Sample standard deviation; 0 for a single repetition.
    pub std: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by (algorithm name, num_vms, seed).
    pub rows: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
}

impl SweepResult {
    pub fn mean(&self, algorithm: Algorithm, num_vms: usize, metric: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.algorithm == algorithm && s.num_vms == num_vms && s.metric == metric)
            .map(|s| s.mean)
    }
}

pub const SUMMARY_METRICS: [&str; 4] = [
    "makespan",
    "avg_completion",
    "avg_response",
    "objective_value",
];

fn metric_of(row: &ResultRow, metric: &str) -> f64 {
    match metric {
        "makespan" => row.makespan,
        "avg_completion" => row.avg_completion,
        "avg_response" => row.avg_response,
        "objective_value" => row.objective_value,
        _ => unreachable!("unknown summary metric {metric}"),
    }
}

/// Mean and sample standard deviation per (algorithm, num_vms, metric).
/// `rows` must already be sorted.
pub fn summarize(rows: &[ResultRow]) -> Vec<SummaryRow> {
    let mut summary = Vec::new();
    for group in rows.chunk_by(|a, b| a.algorithm == b.algorithm && a.num_vms == b.num_vms) {
        let n = group.len();
        for metric in SUMMARY_METRICS {
            let values: Vec<f64> = group.iter().map(|r| metric_of(r, metric)).collect();
            let mean = values.iter().sum::<f64>() / n as f64;
            let std = if n > 1 {
                (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            summary.push(SummaryRow {
                algorithm: group[0].algorithm,
                num_vms: group[0].num_vms,
                metric,
                mean,
                std,
                n,
            });
        }
    }
    summary
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let cells: Vec<(Algorithm, usize, u64)> = config
        .algorithms
        .iter()
        .flat_map(|&a| {
            config
                .vm_counts
                .iter()
                .flat_map(move |&m| config.seeds().map(move |s| (a, m, s)))
        })
        .collect();

    let run = |&(a, m, s): &(Algorithm, usize, u64)| run_cell(config, a, m, s);
    let mut rows: Vec<ResultRow> = match config.threads {
        Some(1) => cells.iter().map(run).collect::<Result<_>>()?,
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::param(format!("cannot start thread pool: {e}")))?
            .install(|| cells.par_iter().map(run).collect::<Result<_>>())?,
        None => cells.par_iter().map(run).collect::<Result<_>>()?,
    };
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let summary = summarize(&rows);
    Ok(SweepResult { rows, summary })
}

pub fn write_results_csv(rows: &[ResultRow], sink: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(RESULTS_HEADER)?;
    for r in rows {
        w.write_record([
            r.algorithm.name().to_string(),
            r.num_vms.to_string(),
            r.seed.to_string(),
            r.makespan.to_string(),
            r.avg_completion.to_string(),
            r.avg_response.to_string(),
            r.objective_value.to_string(),
            r.evaluations.to_string(),
            format!("{:.3}", r.wall_ms),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<results csv>", e))?;
    Ok(())
}

pub fn write_summary_csv(summary: &[SummaryRow], sink: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(SUMMARY_HEADER)?;
    for s in summary {
        w.write_record([
            s.algorithm.name().to_string(),
            s.num_vms.to_string(),
            s.metric.to_string(),
            s.mean.to_string(),
            s.std.to_string(),
            s.n.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<summary csv>", e))?;
    Ok(())
}

/// `results.csv` -> `results_summary.csv`, next to the results file.
pub fn summary_path(results: &Path) -> PathBuf {
    let stem = results
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("results");
    results.with_file_name(format!("{stem}_summary.csv"))
}

/// Runs the sweep and writes the results CSV to `out` and the summary next to it.
pub fn run_sweep_to(config: &ExperimentConfig, out: &Path) -> Result<SweepResult> {
    let result = run_sweep(config)?;
    let file = File::create(out).map_err(|e| Error::io(out, e))?;
    write_results_csv(&result.rows, file)?;
    let summary_out = summary_path(out);
    let file = File::create(&summary_out).map_err(|e| Error::io(&summary_out, e))?;
    write_summary_csv(&result.summary, file)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::brute_force_optimal;

    fn tiny_config(lens: &[f64], speeds: &[f64]) -> ExperimentConfig {
        ExperimentConfig {
            jobs: JobSource::Fixed(
                lens.iter()
                    .enumerate()
                    .map(|(i, &l)| Job::new(i as u64, 0.0, l).unwrap())
                    .collect(),
            ),
            vm_speeds: speeds.to_vec(),
            vm_counts: vec![speeds.len()],
            reps: 1,
            timing: false,
            ..Default::default()
        }
    }

    #[test]
    fn fcfs_cell_matches_hand_simulation() {
        let cfg = tiny_config(&[10.0, 20.0, 30.0], &[1.0, 2.0]);
        let row = run_cell(&cfg, Algorithm::Fcfs, 2, 0).unwrap();
        assert_eq!(row.makespan, 40.0);
        assert_eq!(row.avg_completion, 20.0);
        assert_eq!(row.objective_value, 20.0);
        assert_eq!(row.wall_ms, 0.0);
    }

    #[test]
    fn lca_cell_near_oracle_with_exhaustive_budget() {
        let lens = [7.0, 3.0, 12.0, 5.0, 9.0, 4.0];
        let speeds = [1.0, 2.5];
        let mut cfg = tiny_config(&lens, &speeds);
        cfg.lca.max_evaluations = Some(2u64.pow(6));
        let row = run_cell(&cfg, Algorithm::Lca, 2, 3).unwrap();
        assert!(row.evaluations <= 64);
        let (jobs, vms) = cfg.instance(2, 3).unwrap();
        let (_, best) = brute_force_optimal(&jobs, &vms, &cfg.weights).unwrap();
        let opt = cfg.weights.combine(&best);
        assert!(
            row.objective_value <= 1.05 * opt,
            "lca {} vs opt {opt}",
            row.objective_value
        );
    }

    #[test]
    fn cells_are_deterministic() {
        let cfg = ExperimentConfig {
            jobs: JobSource::Generate(WorkloadSpec {
                job_count: 40,
                ..Default::default()
            }),
            lca: LcaParams {
                max_evaluations: Some(500),
                ..Default::default()
            },
            ..Default::default()
        };
        for alg in Algorithm::ALL {
            let a = run_cell(&cfg, alg, 5, 11).unwrap();
            let b = run_cell(&cfg, alg, 5, 11).unwrap();
            assert!(a.same_outcome(&b));
        }
    }

    #[test]
    fn sweep_row_count_and_order() {
        let cfg = ExperimentConfig {
            jobs: JobSource::Generate(WorkloadSpec {
                job_count: 20,
                ..Default::default()
            }),
            lca: LcaParams {
                max_evaluations: Some(60),
                ..Default::default()
            },
            reps: 10,
            timing: false,
            ..Default::default()
        };
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.rows.len(), 3 * 7 * 10);
        assert!(res
            .rows
            .windows(2)
            .all(|w| w[0].sort_key() < w[1].sort_key()));
        assert_eq!(res.rows[0].algorithm, Algorithm::Fcfs);
        assert_eq!(res.summary.len(), 3 * 7 * SUMMARY_METRICS.len());

        let group: Vec<&ResultRow> = res
            .rows
            .iter()
            .filter(|r| r.algorithm == Algorithm::Ljf && r.num_vms == 50)
            .collect();
        let hand = group.iter().map(|r| r.avg_completion).sum::<f64>() / group.len() as f64;
        let mean = res.mean(Algorithm::Ljf, 50, "avg_completion").unwrap();
        assert!((mean - hand).abs() <= 1e-12 * hand);
    }

    #[test]
    fn summary_std() {
        let row = |v: f64, seed| ResultRow {
            algorithm: Algorithm::Fcfs,
            num_vms: 1,
            seed,
            makespan: v,
            avg_completion: v,
            avg_response: v,
            objective_value: v,
            evaluations: 1,
            wall_ms: 0.0,
        };
        let s = summarize(&[row(1.0, 0), row(3.0, 1)]);
        assert_eq!(s[0].mean, 2.0);
        assert!((s[0].std - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(summarize(&[row(5.0, 0)])[0].std, 0.0);
    }

    #[test]
    fn invalid_configs() {
        let bad = [
            ExperimentConfig {
                vm_counts: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                vm_counts: vec![0, 10],
                ..Default::default()
            },
            ExperimentConfig {
                reps: 0,
                ..Default::default()
            },
            ExperimentConfig {
                algorithms: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                vm_speeds: vec![],
                ..Default::default()
            },
            ExperimentConfig {
                threads: Some(0),
                ..Default::default()
            },
            ExperimentConfig {
                jobs: JobSource::Fixed(vec![]),
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(
                matches!(run_sweep(&cfg), Err(Error::InvalidParameter(_))),
                "{cfg:?}"
            );
        }
        assert!("sjf".parse::<Algorithm>().is_err());
        assert_eq!("lca".parse::<Algorithm>().unwrap(), Algorithm::Lca);
    }

    #[test]
    fn unwritable_output_is_io_error() {
        let cfg = tiny_config(&[1.0, 2.0], &[1.0]);
        let cfg = ExperimentConfig {
            algorithms: vec![Algorithm::Fcfs],
            vm_counts: vec![1],
            ..cfg
        };
        let err = run_sweep_to(&cfg, Path::new("/nonexistent-dir/x/results.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn summary_path_sits_next_to_results() {
        assert_eq!(
            summary_path(Path::new("out/run.csv")),
            PathBuf::from("out/run_summary.csv")
        );
    }
}
