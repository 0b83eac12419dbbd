use crate::trace::{AddressSpace, Trace};

use super::MetricError;

/// Largest number of low address bits a curve drops.
pub const MAX_BITS_DROPPED: u32 = 10;

/// Number of points on an entropy curve (`n = 0..=10`).
pub const CURVE_LEN: usize = MAX_BITS_DROPPED as usize + 1;

/// Frequency distribution of `address >> bits_dropped`, keys ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressHistogram {
    bits_dropped: u32,
    counts: Vec<(u64, u64)>,
    total: u64,
}

impl AddressHistogram {
    /// Builds a histogram from raw (unshifted) addresses in any order.
    pub fn from_addresses<I>(addresses: I, bits_dropped: u32) -> Result<Self, MetricError>
    where
        I: IntoIterator<Item = u64>,
    {
        check_bits(bits_dropped)?;
        let mut keys: Vec<u64> = addresses.into_iter().map(|a| a >> bits_dropped).collect();
        keys.sort_unstable();
        let counts: Vec<(u64, u64)> = runs(&keys, 0).collect();
        if counts.is_empty() {
            return Err(MetricError::Empty);
        }
        Ok(AddressHistogram { bits_dropped, counts, total: keys.len() as u64 })
    }

    pub fn bits_dropped(&self) -> u32 {
        self.bits_dropped
    }

    /// `(shifted address, count)` pairs in ascending address order.
    pub fn counts(&self) -> &[(u64, u64)] {
        &self.counts
    }

    pub fn get(&self, key: u64) -> Option<u64> {
        self.counts.binary_search_by_key(&key, |&(k, _)| k).ok().map(|i| self.counts[i].1)
    }

    /// Number of distinct shifted addresses.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

pub(crate) fn check_bits(bits_dropped: u32) -> Result<(), MetricError> {
    if bits_dropped > MAX_BITS_DROPPED {
        Err(MetricError::BitsDropped(bits_dropped))
    } else {
        Ok(())
    }
}

/// Run-length encodes `sorted >> shift` into `(key, count)` pairs. Shifting
/// preserves order, so one sorted vector serves every `shift`.
pub(crate) fn runs(sorted: &[u64], shift: u32) -> impl Iterator<Item = (u64, u64)> + '_ {
    let mut i = 0;
    std::iter::from_fn(move || {
        let key = *sorted.get(i)? >> shift;
        let start = i;
        i += 1;
        while i < sorted.len() && sorted[i] >> shift == key {
            i += 1;
        }
        Some((key, (i - start) as u64))
    })
}

/// Shannon entropy in bits, `sum p log2(1/p)`, of counts given in ascending
/// key order. Every entropy in the crate goes through here so that equal
/// distributions give bit-identical results.
pub(crate) fn entropy_of_counts<I>(counts: I, total: u64) -> f64
where
    I: IntoIterator<Item = u64>,
{
    let total = total as f64;
    let mut sum = 0.0;
    for c in counts {
        let p = c as f64 / total;
        sum += p * (total / c as f64).log2();
    }
    sum
}

/// Shannon entropy in bits of the histogram's relative frequencies,
/// accumulated in ascending address order.
pub fn entropy(hist: &AddressHistogram) -> f64 {
    entropy_of_counts(hist.counts.iter().map(|&(_, c)| c), hist.total)
}

/// Histogram of `address >> bits_dropped` over every recorded access, or only
/// those in `space`.
pub fn histogram(
    trace: &Trace,
    bits_dropped: u32,
    space: Option<AddressSpace>,
) -> Result<AddressHistogram, MetricError> {
    let addresses = trace
        .accesses()
        .iter()
        .filter(|a| a.space.is_recorded() && space.map_or(true, |s| a.space == s))
        .map(|a| a.address);
    AddressHistogram::from_addresses(addresses, bits_dropped)
}
