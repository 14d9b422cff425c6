//! Scheduling problem model and the random-key bridge to the optimizer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{self, ScheduleMetrics};
use crate::lca::{BoxDomain, Objective};

/// A unit of work. `length` is in machine instructions (MI).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: u64,
    pub arrival_time: f64,
    pub length: f64,
}

impl Job {
    pub fn new(id: u64, arrival_time: f64, length: f64) -> Result<Self> {
        if !(arrival_time.is_finite() && arrival_time >= 0.0) {
            return Err(Error::input(format!(
                "job {id}: arrival time must be finite and >= 0"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::input(format!(
                "job {id}: length must be finite and > 0"
            )));
        }
        Ok(Self {
            id,
            arrival_time,
            length,
        })
    }
}

/// A virtual machine. `speed` is in MIPS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vm {
    pub id: u64,
    pub speed: f64,
}

impl Vm {
    pub fn new(id: u64, speed: f64) -> Result<Self> {
        if !(speed.is_finite() && speed > 0.0) {
            return Err(Error::input(format!(
                "vm {id}: speed must be finite and > 0"
            )));
        }
        Ok(Self { id, speed })
    }
}

/// VM index (position in the fleet) for every job (position in the job list).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub vm_of: Vec<usize>,
}

impl Assignment {
    pub fn new(vm_of: Vec<usize>) -> Self {
        Self { vm_of }
    }

    pub fn validate(&self, jobs: usize, vms: usize) -> Result<()> {
        if self.vm_of.len() != jobs {
            return Err(Error::input(format!(
                "assignment covers {} jobs, expected {jobs}",
                self.vm_of.len()
            )));
        }
        if let Some((j, &v)) = self.vm_of.iter().enumerate().find(|(_, &v)| v >= vms) {
            return Err(Error::input(format!(
                "job {j} assigned to VM {v}, only {vms} VMs"
            )));
        }
        Ok(())
    }
}

/// Linear combination of the three schedule metrics used as the objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricWeights {
    pub makespan: f64,
    pub completion: f64,
    pub response: f64,
}

impl Default for MetricWeights {
    /// Pure average completion time.
    fn default() -> Self {
        Self {
            makespan: 0.0,
            completion: 1.0,
            response: 0.0,
        }
    }
}

impl MetricWeights {
    pub fn new(makespan: f64, completion: f64, response: f64) -> Result<Self> {
        let w = [makespan, completion, response];
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::param("metric weights must be finite and >= 0"));
        }
        if w.iter().all(|v| *v == 0.0) {
            return Err(Error::param("at least one metric weight must be positive"));
        }
        Ok(Self {
            makespan,
            completion,
            response,
        })
    }

    pub fn combine(&self, m: &ScheduleMetrics) -> f64 {
        self.makespan * m.makespan
            + self.completion * m.avg_completion
            + self.response * m.avg_response
    }
}

/// Maps a real vector to VM indices by clamping into `[0, m)` and flooring.
pub fn decode_random_key(x: &[f64], m: usize) -> Result<Assignment> {
    if m == 0 {
        return Err(Error::param("VM count must be positive"));
    }
    let mut vm_of = Vec::with_capacity(x.len());
    for (d, &v) in x.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::input(format!(
                "key component {d} is not finite ({v})"
            )));
        }
        vm_of.push(key_to_vm(v, m));
    }
    Ok(Assignment { vm_of })
}

#[inline]
fn key_to_vm(v: f64, m: usize) -> usize {
    (v.max(0.0).floor() as usize).min(m - 1)
}

/// Random-key scheduling objective over `[0, m]^n`.
#[derive(Debug, Clone)]
pub struct ScheduleObjective {
    jobs: Vec<Job>,
    vms: Vec<Vm>,
    weights: MetricWeights,
    order: Vec<usize>,
}

pub fn make_objective(
    jobs: &[Job],
    vms: &[Vm],
    weights: MetricWeights,
) -> Result<ScheduleObjective> {
    if jobs.is_empty() || vms.is_empty() {
        return Err(Error::param("objective needs at least one job and one VM"));
    }
    Ok(ScheduleObjective {
        order: evaluator::service_order(jobs),
        jobs: jobs.to_vec(),
        vms: vms.to_vec(),
        weights,
    })
}

impl ScheduleObjective {
    /// Search box for the optimizer: every key in `[0, m]`.
    pub fn domain(&self) -> BoxDomain {
        BoxDomain::uniform(self.jobs.len(), 0.0, self.vms.len() as f64)
            .expect("non-empty jobs and vms give a valid box")
    }

    pub fn weights(&self) -> MetricWeights {
        self.weights
    }

    pub fn decode(&self, x: &[f64]) -> Result<Assignment> {
        if x.len() != self.jobs.len() {
            return Err(Error::input(format!(
                "key vector has {} components, expected {}",
                x.len(),
                self.jobs.len()
            )));
        }
        decode_random_key(x, self.vms.len())
    }

    pub fn metrics(&self, x: &[f64]) -> Result<ScheduleMetrics> {
        let assignment = self.decode(x)?;
        Ok(evaluator::metrics_in_order(
            &self.jobs,
            &self.vms,
            &assignment.vm_of,
            &self.order,
        ))
    }
}

impl Objective for ScheduleObjective {
    fn evaluate(&self, x: &[f64]) -> f64 {
        self.metrics(x)
            .map_or(f64::INFINITY, |m| self.weights.combine(&m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::evaluate;
    use proptest::prelude::*;

    fn two_jobs_one_vm() -> (Vec<Job>, Vec<Vm>) {
        (
            vec![
                Job::new(0, 0.0, 10.0).unwrap(),
                Job::new(1, 0.0, 20.0).unwrap(),
            ],
            vec![Vm::new(0, 1.0).unwrap()],
        )
    }

    #[test]
    fn decode_examples() {
        assert_eq!(
            decode_random_key(&[0.4, 2.9, 1.0], 3).unwrap().vm_of,
            vec![0, 2, 1]
        );
        assert_eq!(decode_random_key(&[3.0], 3).unwrap().vm_of, vec![2]);
        assert_eq!(decode_random_key(&[-1.0], 3).unwrap().vm_of, vec![0]);
        assert_eq!(decode_random_key(&[1e300], 3).unwrap().vm_of, vec![2]);
    }

    #[test]
    fn decode_errors() {
        assert!(matches!(
            decode_random_key(&[0.0], 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            decode_random_key(&[f64::NAN], 2),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            decode_random_key(&[f64::INFINITY], 2),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn decode_is_surjective_on_grid() {
        let m = 7;
        let grid: Vec<f64> = (0..=70).map(|k| k as f64 * 0.1).collect();
        let a = decode_random_key(&grid, m).unwrap();
        for v in 0..m {
            assert!(a.vm_of.contains(&v));
        }
    }

    #[test]
    fn makespan_projection() {
        let jobs: Vec<Job> = (0..4)
            .map(|i| Job::new(i, 0.0, 10.0 * (i + 1) as f64).unwrap())
            .collect();
        let vms = vec![Vm::new(0, 1.0).unwrap(), Vm::new(1, 3.0).unwrap()];
        let obj = make_objective(&jobs, &vms, MetricWeights::new(1.0, 0.0, 0.0).unwrap()).unwrap();
        let x = [0.2, 1.7, 1.1, 0.9];
        let (_, m) = evaluate(&jobs, &vms, &decode_random_key(&x, 2).unwrap()).unwrap();
        assert_eq!(obj.evaluate(&x), m.makespan);
    }

    #[test]
    fn completion_projection() {
        let (jobs, vms) = two_jobs_one_vm();
        let obj = make_objective(&jobs, &vms, MetricWeights::default()).unwrap();
        assert_eq!(obj.evaluate(&[0.3, 0.9]), 20.0);
    }

    #[test]
    fn weights_are_linear() {
        let jobs: Vec<Job> = (0..5)
            .map(|i| Job::new(i, i as f64, 5.0 + i as f64).unwrap())
            .collect();
        let vms = vec![Vm::new(0, 1.0).unwrap(), Vm::new(1, 2.0).unwrap()];
        let x = [1.5, 0.1, 0.7, 1.2, 0.0];
        let single = |w: MetricWeights| make_objective(&jobs, &vms, w).unwrap().evaluate(&x);
        let total = single(MetricWeights::new(1.0, 0.0, 0.0).unwrap())
            + single(MetricWeights::new(0.0, 1.0, 0.0).unwrap())
            + single(MetricWeights::new(0.0, 0.0, 1.0).unwrap());
        let all = single(MetricWeights::new(1.0, 1.0, 1.0).unwrap());
        assert!((all - total).abs() <= 1e-12 * total.abs());
    }

    #[test]
    fn construction_errors() {
        let (jobs, vms) = two_jobs_one_vm();
        assert!(make_objective(&[], &vms, MetricWeights::default()).is_err());
        assert!(make_objective(&jobs, &[], MetricWeights::default()).is_err());
        assert!(MetricWeights::new(0.0, 0.0, 0.0).is_err());
        assert!(MetricWeights::new(-1.0, 1.0, 0.0).is_err());
        assert!(Job::new(0, 0.0, 0.0).is_err());
        assert!(Job::new(0, -1.0, 1.0).is_err());
        assert!(Vm::new(0, 0.0).is_err());
    }

    #[test]
    fn wrong_length_key_scores_infinite() {
        let (jobs, vms) = two_jobs_one_vm();
        let obj = make_objective(&jobs, &vms, MetricWeights::default()).unwrap();
        assert_eq!(obj.evaluate(&[0.0]), f64::INFINITY);
    }

    proptest! {
        #[test]
        fn relabeling_symmetry(
            lens in proptest::collection::vec(1.0f64..100.0, 2..7),
            keys in proptest::collection::vec(0.0f64..3.0, 7),
            rot in 0usize..7,
        ) {
            let n = lens.len();
            let vms: Vec<Vm> = (0..3).map(|i| Vm::new(i, 1.0 + i as f64).unwrap()).collect();
            let jobs: Vec<Job> = lens.iter().enumerate().map(|(i, &l)| Job::new(i as u64, 0.0, l).unwrap()).collect();
            let x = &keys[..n];
            // Rotate positions but keep ids, so the service order is unchanged.
            let perm: Vec<usize> = (0..n).map(|p| (p + rot) % n).collect();
            let jobs_p: Vec<Job> = perm.iter().map(|&p| jobs[p]).collect();
            let x_p: Vec<f64> = perm.iter().map(|&p| x[p]).collect();
            let w = MetricWeights::new(1.0, 1.0, 1.0).unwrap();
            let a = make_objective(&jobs, &vms, w).unwrap().evaluate(x);
            let b = make_objective(&jobs_p, &vms, w).unwrap().evaluate(&x_p);
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            prop_assert_eq!(a, make_objective(&jobs, &vms, w).unwrap().evaluate(x));
        }
    }
}
