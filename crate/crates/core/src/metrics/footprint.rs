use crate::trace::{AddressSpace, Trace};

use super::histogram::{entropy_of_counts, runs, CURVE_LEN};
use super::MetricError;

/// Every recorded address of a trace, sorted once and shared by the
/// frequency-based metrics.
pub(crate) struct SortedAddresses(Vec<u64>);

impl SortedAddresses {
    pub(crate) fn new(trace: &Trace) -> Result<Self, MetricError> {
        let mut v: Vec<u64> =
            trace.accesses().iter().filter(|a| a.space.is_recorded()).map(|a| a.address).collect();
        if v.is_empty() {
            return Err(MetricError::Empty);
        }
        v.sort_unstable();
        Ok(SortedAddresses(v))
    }

    pub(crate) fn total_footprint(&self) -> u64 {
        runs(&self.0, 0).count() as u64
    }

    pub(crate) fn footprint90(&self) -> u64 {
        let total = self.0.len() as u64;
        // ceil(0.9 * total) in exact integer arithmetic
        let threshold = (9 * u128::from(total)).div_ceil(10) as u64;
        let mut counts: Vec<u64> = runs(&self.0, 0).map(|(_, c)| c).collect();
        counts.sort_unstable_by(|a, b| b.cmp(a));
        let mut covered = 0;
        for (i, c) in counts.iter().enumerate() {
            covered += c;
            if covered >= threshold {
                return i as u64 + 1;
            }
        }
        counts.len() as u64
    }

    pub(crate) fn lmae_curve(&self) -> [f64; CURVE_LEN] {
        let total = self.0.len() as u64;
        std::array::from_fn(|n| entropy_of_counts(runs(&self.0, n as u32).map(|(_, c)| c), total))
    }
}

/// Number of distinct addresses accessed.
pub fn total_footprint(trace: &Trace) -> Result<u64, MetricError> {
    Ok(SortedAddresses::new(trace)?.total_footprint())
}

/// Fewest distinct addresses, most frequent first, whose accesses reach
/// `ceil(0.9 * total)`.
pub fn footprint90(trace: &Trace) -> Result<u64, MetricError> {
    Ok(SortedAddresses::new(trace)?.footprint90())
}

/// Address entropy after dropping `n = 0..=10` low bits. Index 0 is the
/// global memory address entropy.
pub fn lmae_curve(trace: &Trace) -> Result<[f64; CURVE_LEN], MetricError> {
    Ok(SortedAddresses::new(trace)?.lmae_curve())
}

/// Fraction of accesses that go to local memory.
pub fn relative_local_usage(trace: &Trace) -> Result<f64, MetricError> {
    let mut local = 0u64;
    let mut total = 0u64;
    for a in trace.accesses().iter().filter(|a| a.space.is_recorded()) {
        total += 1;
        local += u64::from(a.space == AddressSpace::Local);
    }
    if total == 0 {
        return Err(MetricError::Empty);
    }
    Ok(local as f64 / total as f64)
}
