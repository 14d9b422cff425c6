//! League Championship Algorithm job scheduling for a simulated IaaS cloud.
//!
//! * [`lca`]: generic LCA optimizer over box domains.
//! * [`sched`]: jobs, VMs, assignments and the random-key objective bridge.
//! * [`evaluator`]: non-preemptive execution model and exhaustive oracle.
//! * [`baselines`]: FCFS and LJF dispatchers.
//! * [`workload`]: synthetic workloads/fleets and CSV trace I/O.
//! * [`bench`]: experiment cells and sweeps producing result CSVs.

pub mod baselines;
pub mod bench;
pub mod error;
pub mod evaluator;
pub mod lca;
pub mod rng;
pub mod sched;
pub mod workload;

pub use error::{Error, Result};
