//! Memory-access traces of simulated data-parallel kernels and the
//! architecture-independent metrics computed over them.
//!
//! ```
//! use parloc_core::metrics::compute_report;
//! use parloc_core::sim::{run_kernel, KernelId, KernelSpec};
//! use std::collections::BTreeMap;
//!
//! let params = BTreeMap::from([("n".to_string(), 32)]);
//! let spec = KernelSpec::new(KernelId::MatMulCoalescedAB, &params).unwrap();
//! let trace = run_kernel(&spec).unwrap();
//! let report = compute_report(&trace).unwrap();
//! assert_eq!(report.total_footprint, 3 * 32 * 32);
//! ```

pub mod metrics;
pub mod sim;
pub mod trace;
