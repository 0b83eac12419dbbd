use std::borrow::Cow;

use crate::trace::{MemoryAccess, Trace};

use super::histogram::{entropy_of_counts, runs, CURVE_LEN};
use super::MetricError;

/// Parallel spatial locality curve.
///
/// For each work-group and each timestamp with at least one access, take the
/// entropy of the multiset of `address >> n` accessed at that step. Average
/// over the group's timestamps, then over groups, both unweighted. Sums run
/// in ascending timestamp order within a group and ascending group order
/// across groups. Groups with no accesses do not take part.
pub fn parallel_spatial_locality(trace: &Trace) -> Result<[f64; CURVE_LEN], MetricError> {
    let accesses = cell_order(trace);
    if !accesses.iter().any(|a| a.space.is_recorded()) {
        return Err(MetricError::Empty);
    }

    let mut overall = [0.0f64; CURVE_LEN];
    let mut groups = 0u64;
    let mut group_sum = [0.0f64; CURVE_LEN];
    let mut group_steps = 0u64;
    let mut cell: Vec<u64> = Vec::new();

    let mut i = 0;
    while i < accesses.len() {
        let (g, t) = (accesses[i].group, accesses[i].timestamp);
        cell.clear();
        while i < accesses.len() && accesses[i].group == g && accesses[i].timestamp == t {
            if accesses[i].space.is_recorded() {
                cell.push(accesses[i].address);
            }
            i += 1;
        }
        let group_done = i == accesses.len() || accesses[i].group != g;
        if cell.is_empty() {
            if group_done && group_steps > 0 {
                finish_group(&mut overall, &mut group_sum, &mut group_steps, &mut groups);
            }
            continue;
        }
        cell.sort_unstable();
        let total = cell.len() as u64;
        for (n, sum) in group_sum.iter_mut().enumerate() {
            *sum += entropy_of_counts(runs(&cell, n as u32).map(|(_, c)| c), total);
        }
        group_steps += 1;
        if group_done {
            finish_group(&mut overall, &mut group_sum, &mut group_steps, &mut groups);
        }
    }
    Ok(overall.map(|s| s / groups as f64))
}

fn finish_group(
    overall: &mut [f64; CURVE_LEN],
    group_sum: &mut [f64; CURVE_LEN],
    group_steps: &mut u64,
    groups: &mut u64,
) {
    for (acc, sum) in overall.iter_mut().zip(group_sum.iter_mut()) {
        *acc += *sum / *group_steps as f64;
        *sum = 0.0;
    }
    *group_steps = 0;
    *groups += 1;
}

/// Accesses ordered by `(group, timestamp)`. Canonical traces are used in
/// place; anything else is copied and stably sorted.
fn cell_order(trace: &Trace) -> Cow<'_, [MemoryAccess]> {
    if trace.is_canonical() {
        Cow::Borrowed(trace.accesses())
    } else {
        let mut v = trace.accesses().to_vec();
        v.sort_by_key(|a| (a.group, a.timestamp));
        Cow::Owned(v)
    }
}
