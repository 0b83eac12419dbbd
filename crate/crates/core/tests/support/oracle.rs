//! Brute-force reference implementations of every metric.
//!
//! Deliberately written differently from the library: counts come from
//! nested scans instead of sorting, entropy uses
//! `log2(T) - sum(c log2 c) / T` with compensated summation, and the 90%
//! footprint is found by trying every prefix size.

use parloc_core::trace::{AddressSpace, MemoryAccess, Trace};

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Multiplicities of each distinct value, by linear scan.
pub fn multiplicities(values: &[u64]) -> Vec<u64> {
    let mut distinct: Vec<u64> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    for &v in values {
        match distinct.iter().position(|&d| d == v) {
            Some(i) => counts[i] += 1,
            None => {
                distinct.push(v);
                counts.push(1);
            }
        }
    }
    counts
}

pub fn entropy_of_counts(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let t = total as f64;
    let weighted = compensated_sum(counts.iter().map(|&c| c as f64 * (c as f64).log2()));
    let h = t.log2() - weighted / t;
    // a single outcome may leave a tiny negative residue
    if h.abs() < 1e-13 {
        0.0
    } else {
        h
    }
}

pub fn entropy_of_values(values: &[u64]) -> f64 {
    entropy_of_counts(&multiplicities(values))
}

fn recorded(trace: &Trace) -> Vec<MemoryAccess> {
    trace.accesses().iter().copied().filter(|a| a.space != AddressSpace::Private).collect()
}

pub fn shifted(trace: &Trace, n: u32) -> Vec<u64> {
    recorded(trace).iter().map(|a| a.address >> n).collect()
}

pub fn lmae(trace: &Trace) -> [f64; 11] {
    std::array::from_fn(|n| entropy_of_values(&shifted(trace, n as u32)))
}

pub fn total_footprint(trace: &Trace) -> u64 {
    multiplicities(&shifted(trace, 0)).len() as u64
}

pub fn footprint90(trace: &Trace) -> u64 {
    let counts = multiplicities(&shifted(trace, 0));
    let total: u64 = counts.iter().sum();
    for k in 1..=counts.len() {
        // best coverage achievable with k addresses: the k largest counts
        let mut pool = counts.clone();
        let mut best = 0;
        for _ in 0..k {
            let (i, &c) = pool.iter().enumerate().max_by_key(|&(_, c)| *c).unwrap();
            best += c;
            pool.swap_remove(i);
        }
        if 10 * best >= 9 * total {
            return k as u64;
        }
    }
    unreachable!("all addresses cover everything")
}

pub fn relative_local_usage(trace: &Trace) -> f64 {
    let r = recorded(trace);
    r.iter().filter(|a| a.space == AddressSpace::Local).count() as f64 / r.len() as f64
}

pub fn psl(trace: &Trace) -> [f64; 11] {
    let r = recorded(trace);
    let mut groups: Vec<u32> = r.iter().map(|a| a.group).collect();
    groups.sort_unstable();
    groups.dedup();
    std::array::from_fn(|n| {
        let per_group: Vec<f64> = groups
            .iter()
            .map(|&g| {
                let mut steps: Vec<u32> = r.iter().filter(|a| a.group == g).map(|a| a.timestamp).collect();
                steps.sort_unstable();
                steps.dedup();
                let per_step: Vec<f64> = steps
                    .iter()
                    .map(|&t| {
                        let cell: Vec<u64> = r
                            .iter()
                            .filter(|a| a.group == g && a.timestamp == t)
                            .map(|a| a.address >> n)
                            .collect();
                        entropy_of_values(&cell)
                    })
                    .collect();
                compensated_sum(per_step.iter().copied()) / per_step.len() as f64
            })
            .collect();
        compensated_sum(per_group.iter().copied()) / per_group.len() as f64
    })
}
