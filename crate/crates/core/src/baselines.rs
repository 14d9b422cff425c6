//! Reference dispatchers: First Come First Served and Last/Longest Job First.
//!
//! Both walk the jobs in a fixed priority order and greedily send each one
//! to the VM that can start it earliest, `max(ready, arrival)`, breaking
//! ties by the lowest VM index.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::sched::{Assignment, Job, Vm};

/// How the LJF baseline orders its dispatch queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LjfMode {
    /// Longest job first: decreasing length, ties by id.
    #[default]
    Longest,
    /// Last arrived first: decreasing arrival time, ties by id.
    LastArrival,
}

impl FromStr for LjfMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "longest" => Ok(LjfMode::Longest),
            "last-arrival" => Ok(LjfMode::LastArrival),
            other => Err(Error::param(format!(
                "unknown LJF mode {other:?} (expected longest or last-arrival)"
            ))),
        }
    }
}

fn check(jobs: &[Job], vms: &[Vm]) -> Result<()> {
    if jobs.is_empty() || vms.is_empty() {
        return Err(Error::param("dispatch needs at least one job and one VM"));
    }
    Ok(())
}

fn greedy_dispatch(jobs: &[Job], vms: &[Vm], queue: &[usize]) -> Assignment {
    let mut ready = vec![0.0f64; vms.len()];
    let mut vm_of = vec![0usize; jobs.len()];
    for &j in queue {
        let job = &jobs[j];
        let mut pick = 0;
        let mut pick_start = f64::INFINITY;
        for (v, &r) in ready.iter().enumerate() {
            let start = r.max(job.arrival_time);
            if start < pick_start {
                pick = v;
                pick_start = start;
            }
        }
        ready[pick] = pick_start + job.length / vms[pick].speed;
        vm_of[j] = pick;
    }
    Assignment { vm_of }
}

pub fn fcfs_schedule(jobs: &[Job], vms: &[Vm]) -> Result<Assignment> {
    check(jobs, vms)?;
    let mut queue: Vec<usize> = (0..jobs.len()).collect();
    queue.sort_by(|&a, &b| {
        jobs[a]
            .arrival_time
            .total_cmp(&jobs[b].arrival_time)
            .then(jobs[a].id.cmp(&jobs[b].id))
    });
    Ok(greedy_dispatch(jobs, vms, &queue))
}

pub fn ljf_schedule(jobs: &[Job], vms: &[Vm], mode: LjfMode) -> Result<Assignment> {
    check(jobs, vms)?;
    let mut queue: Vec<usize> = (0..jobs.len()).collect();
    match mode {
        LjfMode::Longest => queue.sort_by(|&a, &b| {
            jobs[b]
                .length
                .total_cmp(&jobs[a].length)
                .then(jobs[a].id.cmp(&jobs[b].id))
        }),
        LjfMode::LastArrival => queue.sort_by(|&a, &b| {
            jobs[b]
                .arrival_time
                .total_cmp(&jobs[a].arrival_time)
                .then(jobs[a].id.cmp(&jobs[b].id))
        }),
    }
    Ok(greedy_dispatch(jobs, vms, &queue))
}
