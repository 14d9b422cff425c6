//! Synthetic workloads and fleets, plus the jobs/VMs CSV formats.
//!
//! Jobs CSV header: `job_id,arrival_time,length_mi`.
//! VMs CSV header: `vm_id,mips`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::rng::{seeded_stream, Stream};
use crate::sched::{Job, Vm};

pub const JOBS_HEADER: [&str; 3] = ["job_id", "arrival_time", "length_mi"];
pub const VMS_HEADER: [&str; 2] = ["vm_id", "mips"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrivalModel {
    /// Every job is submitted at time zero.
    Batch,
    /// Poisson process with the given rate in jobs per second.
    Poisson { rate: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub job_count: usize,
    pub len_min: u64,
    pub len_max: u64,
    pub arrivals: ArrivalModel,
    pub seed: u64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        Self {
            job_count: 5000,
            len_min: 1000,
            len_max: 20_000,
            arrivals: ArrivalModel::Batch,
            seed: 0,
        }
    }
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<()> {
        if self.job_count == 0 {
            return Err(Error::param("job count must be positive"));
        }
        if self.len_min == 0 || self.len_min > self.len_max {
            return Err(Error::param(format!(
                "need 0 < len_min <= len_max, got [{}, {}]",
                self.len_min, self.len_max
            )));
        }
        if let ArrivalModel::Poisson { rate } = self.arrivals {
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::param(format!(
                    "arrival rate must be positive, got {rate}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpeedPick {
    /// Speeds taken from the list in order, wrapping around.
    #[default]
    Cycle,
    /// Speeds drawn uniformly from the list.
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FleetSpec {
    pub vm_count: usize,
    pub speeds: Vec<f64>,
    pub pick: SpeedPick,
    pub seed: u64,
}

pub const DEFAULT_SPEEDS: [f64; 5] = [500.0, 1000.0, 1500.0, 2000.0, 2500.0];

impl FleetSpec {
    pub fn cycled(vm_count: usize, speeds: &[f64]) -> Self {
        Self {
            vm_count,
            speeds: speeds.to_vec(),
            pick: SpeedPick::Cycle,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.vm_count == 0 {
            return Err(Error::param("VM count must be positive"));
        }
        if self.speeds.is_empty() {
            return Err(Error::param("speed list must not be empty"));
        }
        if self.speeds.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::param("all VM speeds must be positive"));
        }
        Ok(())
    }
}

pub fn generate_workload(spec: &WorkloadSpec) -> Result<Vec<Job>> {
    spec.validate()?;
    let mut rng = seeded_stream(spec.seed, Stream::Workload);
    let lengths: Vec<u64> = (0..spec.job_count)
        .map(|_| rng.gen_range(spec.len_min..=spec.len_max))
        .collect();
    let mut clock = 0.0;
    let arrivals: Vec<f64> = match spec.arrivals {
        ArrivalModel::Batch => vec![0.0; spec.job_count],
        ArrivalModel::Poisson { rate } => {
            let gap = Exp::new(rate).map_err(|e| Error::param(e.to_string()))?;
            (0..spec.job_count)
                .map(|_| {
                    clock += gap.sample(&mut rng);
                    clock
                })
                .collect()
        }
    };
    Ok(lengths
        .into_iter()
        .zip(arrivals)
        .enumerate()
        .map(|(id, (len, at))| Job {
            id: id as u64,
            arrival_time: at,
            length: len as f64,
        })
        .collect())
}

pub fn generate_fleet(spec: &FleetSpec) -> Result<Vec<Vm>> {
    spec.validate()?;
    let mut rng = seeded_stream(spec.seed, Stream::Fleet);
    Ok((0..spec.vm_count)
        .map(|i| {
            let speed = match spec.pick {
                SpeedPick::Cycle => spec.speeds[i % spec.speeds.len()],
                SpeedPick::Sample => *spec.speeds.choose(&mut rng).expect("non-empty"),
            };
            Vm {
                id: i as u64,
                speed,
            }
        })
        .collect())
}

fn check_header(reader: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let header = reader.headers()?;
    if header.iter().map(str::trim).ne(expected.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header {:?}, found {:?}",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    Ok(())
}

fn field<T: std::str::FromStr>(
    record: &csv::StringRecord,
    idx: usize,
    name: &str,
    line: u64,
) -> Result<T> {
    let raw = record.get(idx).ok_or_else(|| Error::Parse {
        line,
        message: format!("missing field {name}"),
    })?;
    raw.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("{name}: cannot parse {raw:?}"),
    })
}

fn parse_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn read_jobs_csv(source: impl Read) -> Result<Vec<Job>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    check_header(&mut reader, &JOBS_HEADER)?;
    let mut seen = HashSet::new();
    let mut jobs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(parse_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let id: u64 = field(&record, 0, "job_id", line)?;
        let arrival: f64 = field(&record, 1, "arrival_time", line)?;
        let length: f64 = field(&record, 2, "length_mi", line)?;
        if !seen.insert(id) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate job_id {id}"),
            });
        }
        let job = Job::new(id, arrival, length).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        jobs.push(job);
    }
    Ok(jobs)
}

/// Writes jobs sorted by id.
pub fn write_jobs_csv(jobs: &[Job], sink: impl Write) -> Result<()> {
    let mut sorted: Vec<&Job> = jobs.iter().collect();
    sorted.sort_by_key(|j| j.id);
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(JOBS_HEADER)?;
    for j in sorted {
        writer.write_record([
            j.id.to_string(),
            j.arrival_time.to_string(),
            j.length.to_string(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<jobs csv>", e))?;
    Ok(())
}

pub fn read_vms_csv(source: impl Read) -> Result<Vec<Vm>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    check_header(&mut reader, &VMS_HEADER)?;
    let mut seen = HashSet::new();
    let mut vms = Vec::new();
    for record in reader.records() {
        let record = record.map_err(parse_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let id: u64 = field(&record, 0, "vm_id", line)?;
        let mips: f64 = field(&record, 1, "mips", line)?;
        if !seen.insert(id) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate vm_id {id}"),
            });
        }
        vms.push(Vm::new(id, mips).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?);
    }
    Ok(vms)
}

pub fn write_vms_csv(vms: &[Vm], sink: impl Write) -> Result<()> {
    let mut sorted: Vec<&Vm> = vms.iter().collect();
    sorted.sort_by_key(|v| v.id);
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(VMS_HEADER)?;
    for v in sorted {
        writer.write_record([v.id.to_string(), v.speed.to_string()])?;
    }
    writer.flush().map_err(|e| Error::io("<vms csv>", e))?;
    Ok(())
}

pub fn load_jobs(path: &Path) -> Result<Vec<Job>> {
    read_jobs_csv(File::open(path).map_err(|e| Error::io(path, e))?)
}

pub fn save_jobs(jobs: &[Job], path: &Path) -> Result<()> {
    write_jobs_csv(jobs, File::create(path).map_err(|e| Error::io(path, e))?)
}

pub fn load_vms(path: &Path) -> Result<Vec<Vm>> {
    read_vms_csv(File::open(path).map_err(|e| Error::io(path, e))?)
}

pub fn save_vms(vms: &[Vm], path: &Path) -> Result<()> {
    write_vms_csv(vms, File::create(path).map_err(|e| Error::io(path, e))?)
}
