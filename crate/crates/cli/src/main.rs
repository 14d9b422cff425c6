use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lca_sched::baselines::{fcfs_schedule, ljf_schedule, LjfMode};
use lca_sched::bench::{self, Algorithm, ExperimentConfig, JobSource};
use lca_sched::evaluator::{brute_force_optimal, evaluate};
use lca_sched::lca::LcaParams;
use lca_sched::sched::MetricWeights;
use lca_sched::workload::{self, ArrivalModel, FleetSpec, SpeedPick, WorkloadSpec};
use lca_sched::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lca-bench",
    version,
    about = "LCA vs FCFS/LJF job scheduling experiments on a simulated IaaS cloud"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic workload (and optionally a VM fleet) as CSV.
    Generate(GenerateArgs),
    /// Run one algorithm on one (VM count, seed) cell.
    Run(RunArgs),
    /// Run the full algorithms x VM counts x repetitions grid.
    Sweep(SweepArgs),
    /// Exhaustively solve a tiny instance and compare the baselines.
    Oracle(OracleArgs),
}

#[derive(Args, Clone)]
struct WorkloadArgs {
    /// Jobs CSV (`job_id,arrival_time,length_mi`); overrides the generator.
    #[arg(long)]
    jobs_file: Option<PathBuf>,
    #[arg(long, default_value_t = 5000)]
    num_jobs: usize,
    #[arg(long, default_value_t = 1000)]
    len_min: u64,
    #[arg(long, default_value_t = 20_000)]
    len_max: u64,
    /// Poisson arrival rate in jobs/s; all jobs arrive at 0 when omitted.
    #[arg(long)]
    arrival_rate: Option<f64>,
    /// Comma-separated MIPS values, cycled over the fleet.
    #[arg(long, value_delimiter = ',', default_value = "500,1000,1500,2000,2500")]
    vm_speeds: Vec<f64>,
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    league_size: usize,
    #[arg(long, default_value_t = 222)]
    seasons: usize,
    #[arg(long, default_value_t = 0.3)]
    pc: f64,
    #[arg(long, default_value_t = 1.0)]
    psi1: f64,
    #[arg(long, default_value_t = 1.0)]
    psi2: f64,
    #[arg(long)]
    max_evals: Option<u64>,
    /// Objective weights for makespan, avg completion and avg response.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0,1,0")]
    weights: Vec<f64>,
    #[arg(long, default_value = "longest", value_parser = ["longest", "last-arrival"])]
    ljf_mode: String,
    /// Write 0 in the wall_ms column.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Jobs CSV destination.
    #[arg(long, default_value = "jobs.csv")]
    out: PathBuf,
    /// Also write a fleet of this many VMs.
    #[arg(long)]
    num_vms: Option<usize>,
    #[arg(long, default_value = "vms.csv")]
    vms_out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long, default_value = "lca")]
    algorithm: String,
    #[arg(long, default_value_t = 10)]
    num_vms: usize,
    /// Results CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long, value_delimiter = ',', default_value = "10,30,50,70,90,110,130")]
    vm_counts: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "lca,fcfs,ljf")]
    algorithms: Vec<String>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    /// Worker threads (1 = serial); all cores by default.
    #[arg(long)]
    threads: Option<usize>,
    /// Results CSV; the summary goes to `<stem>_summary.csv` beside it.
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    workload: WorkloadArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    num_vms: usize,
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "0,1,0")]
    weights: Vec<f64>,
    #[arg(long, default_value = "longest", value_parser = ["longest", "last-arrival"])]
    ljf_mode: String,
}

fn parse_weights(w: &[f64]) -> Result<MetricWeights, Error> {
    match w {
        [mk, ct, rs] => MetricWeights::new(*mk, *ct, *rs),
        _ => Err(Error::InvalidParameter(format!(
            "--weights needs three values w_mk,w_ct,w_rs, got {}",
            w.len()
        ))),
    }
}

fn workload_spec(args: &WorkloadArgs, seed: u64) -> WorkloadSpec {
    WorkloadSpec {
        job_count: args.num_jobs,
        len_min: args.len_min,
        len_max: args.len_max,
        arrivals: match args.arrival_rate {
            Some(rate) => ArrivalModel::Poisson { rate },
            None => ArrivalModel::Batch,
        },
        seed,
    }
}

fn job_source(args: &WorkloadArgs, seed: u64) -> Result<JobSource, Error> {
    Ok(match &args.jobs_file {
        Some(path) => JobSource::Fixed(workload::load_jobs(path)?),
        None => JobSource::Generate(workload_spec(args, seed)),
    })
}

fn experiment_config(args: &ExperimentArgs) -> Result<ExperimentConfig, Error> {
    Ok(ExperimentConfig {
        jobs: job_source(&args.workload, args.seed)?,
        vm_speeds: args.workload.vm_speeds.clone(),
        speed_pick: SpeedPick::Cycle,
        base_seed: args.seed,
        lca: LcaParams {
            league_size: args.league_size,
            seasons: args.seasons,
            change_prob: args.pc,
            retreat_coeff: args.psi1,
            approach_coeff: args.psi2,
            seed: args.seed,
            max_evaluations: args.max_evals,
        },
        weights: parse_weights(&args.weights)?,
        ljf_mode: args.ljf_mode.parse()?,
        timing: !args.no_timing,
        ..Default::default()
    })
}

fn create(path: &Path) -> Result<File, Error> {
    File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn generate(args: GenerateArgs) -> Result<(), Error> {
    let jobs = workload::generate_workload(&workload_spec(&args.workload, args.seed))?;
    workload::save_jobs(&jobs, &args.out)?;
    eprintln!("wrote {} jobs to {}", jobs.len(), args.out.display());
    if let Some(m) = args.num_vms {
        let vms = workload::generate_fleet(&FleetSpec::cycled(m, &args.workload.vm_speeds))?;
        workload::save_vms(&vms, &args.vms_out)?;
        eprintln!("wrote {} VMs to {}", vms.len(), args.vms_out.display());
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<(), Error> {
    let config = experiment_config(&args.experiment)?;
    let algorithm: Algorithm = args.algorithm.parse()?;
    let config = ExperimentConfig {
        vm_counts: vec![args.num_vms],
        algorithms: vec![algorithm],
        reps: 1,
        ..config
    };
    config.validate()?;
    let row = bench::run_cell(&config, algorithm, args.num_vms, args.experiment.seed)?;
    match &args.out {
        Some(path) => bench::write_results_csv(&[row], create(path)?),
        None => bench::write_results_csv(&[row], io::stdout().lock()),
    }
}

fn sweep(args: SweepArgs) -> Result<(), Error> {
    let algorithms = args
        .algorithms
        .iter()
        .map(|a| a.parse())
        .collect::<Result<Vec<Algorithm>, _>>()?;
    let config = ExperimentConfig {
        vm_counts: args.vm_counts.clone(),
        algorithms,
        reps: args.reps,
        threads: args.threads,
        ..experiment_config(&args.experiment)?
    };
    let result = bench::run_sweep_to(&config, &args.out)?;
    eprintln!(
        "wrote {} rows to {} and summary to {}",
        result.rows.len(),
        args.out.display(),
        bench::summary_path(&args.out).display()
    );
    let mut out = io::stdout().lock();
    let _ = writeln!(
        out,
        "{:<6} {:>7} {:>14} {:>14} {:>14}",
        "alg", "num_vms", "makespan", "avg_complete", "avg_response"
    );
    for alg in &config.algorithms {
        for &m in &config.vm_counts {
            let mean = |metric| result.mean(*alg, m, metric).unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                "{:<6} {:>7} {:>14.3} {:>14.3} {:>14.3}",
                alg.name(),
                m,
                mean("makespan"),
                mean("avg_completion"),
                mean("avg_response")
            );
        }
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), Error> {
    let jobs = match job_source(&args.workload, args.seed)? {
        JobSource::Fixed(jobs) => jobs,
        JobSource::Generate(spec) => workload::generate_workload(&spec)?,
    };
    let vms = workload::generate_fleet(&FleetSpec::cycled(args.num_vms, &args.workload.vm_speeds))?;
    let weights = parse_weights(&args.weights)?;
    let ljf_mode: LjfMode = args.ljf_mode.parse()?;
    let (best, metrics) = brute_force_optimal(&jobs, &vms, &weights)?;

    let mut out = io::stdout().lock();
    let _ = writeln!(
        out,
        "algorithm,objective_value,makespan,avg_completion,avg_response,assignment"
    );
    let mut line = |name: &str, vm_of: &[usize], m: &lca_sched::evaluator::ScheduleMetrics| {
        let assignment: Vec<String> = vm_of.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "{name},{},{},{},{},{}",
            weights.combine(m),
            m.makespan,
            m.avg_completion,
            m.avg_response,
            assignment.join(" ")
        );
    };
    line("oracle", &best.vm_of, &metrics);
    for (name, a) in [
        ("fcfs", fcfs_schedule(&jobs, &vms)?),
        ("ljf", ljf_schedule(&jobs, &vms, ljf_mode)?),
    ] {
        let (_, m) = evaluate(&jobs, &vms, &a)?;
        line(name, &a.vm_of, &m);
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::Csv(e) if e.is_io_error() => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
        Command::Oracle(args) => oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
