//! Footprints, address entropies, local memory usage and parallel spatial
//! locality over a [`Trace`](crate::trace::Trace).
//!
//! All metrics count recorded (global, local, constant) accesses once at
//! their base address. Floating-point sums run in a fixed order, so equal
//! traces always give bit-identical results.

mod footprint;
mod histogram;
mod psl;
mod report;

use thiserror::Error;

pub use footprint::{footprint90, lmae_curve, relative_local_usage, total_footprint};
pub use histogram::{entropy, histogram, AddressHistogram, CURVE_LEN, MAX_BITS_DROPPED};
pub use psl::parallel_spatial_locality;
pub use report::{compute_report, AccessCounts, MetricReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("no recorded accesses to measure")]
    Empty,
    #[error("cannot drop {0} bits; at most {MAX_BITS_DROPPED} are supported")]
    BitsDropped(u32),
}
