//! Non-preemptive execution model.
//!
//! Each VM serves its jobs one at a time in arrival order (ties by job id).
//! A job starts at `max(vm_ready, arrival)` and runs for `length / speed`.

use crate::error::{Error, Result};
use crate::sched::{Assignment, Job, MetricWeights, Vm};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JobTiming {
    pub vm: usize,
    pub start: f64,
    pub finish: f64,
}

/// Per-job timings, indexed like the job list.
#[derive(Debug, Clone, PartialEq)]
pub struct JobTimeline {
    pub jobs: Vec<JobTiming>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleMetrics {
    /// Latest finish minus earliest arrival.
    pub makespan: f64,
    /// Mean absolute finish time.
    pub avg_completion: f64,
    /// Mean wait between arrival and start.
    pub avg_response: f64,
}

/// Job positions sorted by `(arrival_time, id)`.
pub fn service_order(jobs: &[Job]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by(|&a, &b| {
        jobs[a]
            .arrival_time
            .total_cmp(&jobs[b].arrival_time)
            .then(jobs[a].id.cmp(&jobs[b].id))
    });
    order
}

fn simulate(
    jobs: &[Job],
    vms: &[Vm],
    vm_of: &[usize],
    order: &[usize],
    mut visit: impl FnMut(usize, f64, f64),
) -> ScheduleMetrics {
    let mut ready = vec![0.0f64; vms.len()];
    let mut sum_finish = 0.0;
    let mut sum_wait = 0.0;
    let mut last_finish = f64::NEG_INFINITY;
    let mut first_arrival = f64::INFINITY;
    for &j in order {
        let job = &jobs[j];
        let v = vm_of[j];
        let start = ready[v].max(job.arrival_time);
        let finish = start + job.length / vms[v].speed;
        ready[v] = finish;
        sum_finish += finish;
        sum_wait += start - job.arrival_time;
        last_finish = last_finish.max(finish);
        first_arrival = first_arrival.min(job.arrival_time);
        visit(j, start, finish);
    }
    let n = jobs.len() as f64;
    ScheduleMetrics {
        makespan: last_finish - first_arrival,
        avg_completion: sum_finish / n,
        avg_response: sum_wait / n,
    }
}

/// Metrics only, with a precomputed [`service_order`]. `vm_of` must be valid.
pub(crate) fn metrics_in_order(
    jobs: &[Job],
    vms: &[Vm],
    vm_of: &[usize],
    order: &[usize],
) -> ScheduleMetrics {
    simulate(jobs, vms, vm_of, order, |_, _, _| {})
}

pub fn evaluate(
    jobs: &[Job],
    vms: &[Vm],
    assignment: &Assignment,
) -> Result<(JobTimeline, ScheduleMetrics)> {
    if jobs.is_empty() || vms.is_empty() {
        return Err(Error::input("cannot evaluate an empty job list or fleet"));
    }
    assignment.validate(jobs.len(), vms.len())?;
    let order = service_order(jobs);
    let mut timeline = vec![
        JobTiming {
            vm: 0,
            start: 0.0,
            finish: 0.0
        };
        jobs.len()
    ];
    let metrics = simulate(jobs, vms, &assignment.vm_of, &order, |j, start, finish| {
        timeline[j] = JobTiming {
            vm: assignment.vm_of[j],
            start,
            finish,
        };
    });
    Ok((JobTimeline { jobs: timeline }, metrics))
}

/// Largest instance (`m^n` assignments) the exhaustive oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// Exhaustive minimizer of the weighted objective. Ties go to the
/// lexicographically smallest assignment vector.
pub fn brute_force_optimal(
    jobs: &[Job],
    vms: &[Vm],
    weights: &MetricWeights,
) -> Result<(Assignment, ScheduleMetrics)> {
    if jobs.is_empty() || vms.is_empty() {
        return Err(Error::param("oracle needs at least one job and one VM"));
    }
    let (n, m) = (jobs.len(), vms.len());
    let space = u32::try_from(n)
        .ok()
        .and_then(|n| (m as u64).checked_pow(n))
        .filter(|&s| s <= BRUTE_FORCE_LIMIT)
        .ok_or_else(|| {
            Error::Capacity(format!("{m}^{n} assignments exceed {BRUTE_FORCE_LIMIT}"))
        })?;

    let order = service_order(jobs);
    let mut current = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>, ScheduleMetrics)> = None;
    for _ in 0..space {
        let metrics = metrics_in_order(jobs, vms, &current, &order);
        let value = weights.combine(&metrics);
        if best.as_ref().is_none_or(|(b, _, _)| value < *b) {
            best = Some((value, current.clone(), metrics));
        }
        // Odometer with the first job most significant: lexicographic order.
        for d in (0..n).rev() {
            current[d] += 1;
            if current[d] < m {
                break;
            }
            current[d] = 0;
        }
    }
    let (_, vm_of, metrics) = best.expect("search space is non-empty");
    Ok((Assignment { vm_of }, metrics))
}
