//! Cross-module properties on fuzzed tiny instances.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lca_sched::baselines::{fcfs_schedule, ljf_schedule, LjfMode};
use lca_sched::evaluator::{brute_force_optimal, evaluate};
use lca_sched::lca::{optimize, BoxDomain, LcaParams, Objective};
use lca_sched::sched::{make_objective, Job, MetricWeights, Vm};
use lca_sched::workload::{
    generate_workload, read_jobs_csv, write_jobs_csv, ArrivalModel, WorkloadSpec,
};

fn tiny_instance(rng: &mut ChaCha8Rng, max_jobs: usize, max_vms: usize) -> (Vec<Job>, Vec<Vm>) {
    let n = rng.gen_range(1..=max_jobs);
    let m = rng.gen_range(1..=max_vms);
    let jobs = (0..n)
        .map(|i| {
            let at = if rng.gen_bool(0.5) {
                0.0
            } else {
                rng.gen_range(0..20) as f64
            };
            Job::new(i as u64, at, rng.gen_range(1..=50) as f64).unwrap()
        })
        .collect();
    let vms = (0..m)
        .map(|i| Vm::new(i as u64, rng.gen_range(1..=4) as f64).unwrap())
        .collect();
    (jobs, vms)
}

#[test]
fn oracle_dominates_heuristics() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let weight_sets = [
        MetricWeights::new(1.0, 0.0, 0.0).unwrap(),
        MetricWeights::default(),
        MetricWeights::new(0.0, 0.0, 1.0).unwrap(),
        MetricWeights::new(1.0, 1.0, 1.0).unwrap(),
    ];
    for i in 0..200 {
        let (jobs, vms) = tiny_instance(&mut rng, 6, 3);
        let w = weight_sets[i % weight_sets.len()];
        let (_, best) = brute_force_optimal(&jobs, &vms, &w).unwrap();
        let opt = w.combine(&best);
        let objective = make_objective(&jobs, &vms, w).unwrap();
        let lca = optimize(
            &objective,
            &objective.domain(),
            &LcaParams {
                seed: i as u64,
                seasons: 3,
                ..Default::default()
            },
        )
        .unwrap();
        let candidates = [
            fcfs_schedule(&jobs, &vms).unwrap(),
            ljf_schedule(&jobs, &vms, LjfMode::Longest).unwrap(),
            ljf_schedule(&jobs, &vms, LjfMode::LastArrival).unwrap(),
            objective.decode(&lca.best).unwrap(),
        ];
        for a in candidates {
            let (_, m) = evaluate(&jobs, &vms, &a).unwrap();
            assert!(
                opt <= w.combine(&m),
                "instance {i}: oracle {opt} > heuristic {}",
                w.combine(&m)
            );
        }
        assert_eq!(lca.best_fitness, objective.evaluate(&lca.best));
    }
}

#[test]
fn extra_vm_never_hurts_optimal_makespan() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let w = MetricWeights::new(1.0, 0.0, 0.0).unwrap();
    for _ in 0..200 {
        let (jobs, mut vms) = tiny_instance(&mut rng, 6, 3);
        let (_, before) = brute_force_optimal(&jobs, &vms, &w).unwrap();
        vms.push(Vm::new(vms.len() as u64, rng.gen_range(1..=4) as f64).unwrap());
        let (_, after) = brute_force_optimal(&jobs, &vms, &w).unwrap();
        assert!(after.makespan <= before.makespan);
    }
}

#[test]
fn baselines_are_valid_and_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..200 {
        let (jobs, vms) = tiny_instance(&mut rng, 12, 5);
        for mode in [LjfMode::Longest, LjfMode::LastArrival] {
            let a = ljf_schedule(&jobs, &vms, mode).unwrap();
            a.validate(jobs.len(), vms.len()).unwrap();
            assert_eq!(a, ljf_schedule(&jobs, &vms, mode).unwrap());
        }
        let f = fcfs_schedule(&jobs, &vms).unwrap();
        f.validate(jobs.len(), vms.len()).unwrap();
        assert_eq!(f, fcfs_schedule(&jobs, &vms).unwrap());
    }
}

#[test]
fn optimize_is_bit_reproducible() {
    let jobs = generate_workload(&WorkloadSpec {
        job_count: 80,
        seed: 2,
        ..Default::default()
    })
    .unwrap();
    let vms: Vec<Vm> = (0..9)
        .map(|i| Vm::new(i, 500.0 * (1 + i % 5) as f64).unwrap())
        .collect();
    let objective = make_objective(&jobs, &vms, MetricWeights::default()).unwrap();
    let params = LcaParams {
        seed: 77,
        max_evaluations: Some(3000),
        ..Default::default()
    };
    let a = optimize(&objective, &objective.domain(), &params).unwrap();
    let b = optimize(&objective, &objective.domain(), &params).unwrap();
    assert_eq!(
        a.best.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
        b.best.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
    );
    assert_eq!(a.best_fitness.to_bits(), b.best_fitness.to_bits());
    assert_eq!(a.history, b.history);
}

#[test]
fn evaluation_count_bounds() {
    let d = BoxDomain::uniform(3, 0.0, 1.0).unwrap();
    let f = |x: &[f64]| x.iter().sum::<f64>();
    for (league_size, seasons) in [(4, 1), (6, 3), (10, 2)] {
        let p = LcaParams {
            league_size,
            seasons,
            ..Default::default()
        };
        let out = optimize(&f, &d, &p).unwrap();
        let l = league_size as u64;
        assert_eq!(out.evaluations, l + seasons as u64 * (l - 1) * l);
        assert_eq!(out.weeks_played, seasons * (league_size - 1));
    }
}

#[test]
fn generated_workload_csv_round_trip() {
    let jobs = generate_workload(&WorkloadSpec {
        job_count: 5000,
        seed: 8,
        ..Default::default()
    })
    .unwrap();
    let mut buf = Vec::new();
    write_jobs_csv(&jobs, &mut buf).unwrap();
    assert_eq!(read_jobs_csv(buf.as_slice()).unwrap(), jobs);
}

proptest! {
    #[test]
    fn poisson_workload_round_trip(seed in any::<u64>(), n in 1usize..200, rate in 0.01f64..100.0) {
        let spec = WorkloadSpec { job_count: n, arrivals: ArrivalModel::Poisson { rate }, seed, ..Default::default() };
        let jobs = generate_workload(&spec).unwrap();
        let mut buf = Vec::new();
        write_jobs_csv(&jobs, &mut buf).unwrap();
        prop_assert_eq!(read_jobs_csv(buf.as_slice()).unwrap(), jobs);
    }
}
