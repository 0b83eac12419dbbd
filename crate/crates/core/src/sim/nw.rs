//! Needleman-Wunsch wavefront update. Work-item `g` owns row `g + 1` of the
//! (n+1) x (n+1) score matrix and walks the anti-diagonals; on diagonal `d`
//! it updates column `d - row` when that column is in `1..=n`.

use super::catalogue::KernelSpec;
use super::engine::{execute, Buf};
use super::SimError;
use crate::trace::{AddressSpace, Trace, VirtualAddressSpace, DEFAULT_ALIGNMENT};

const INT: u16 = 4;

pub(crate) fn access_count(n: u64) -> u64 {
    // every row visits n cells with north-west, north, west, reference reads
    // and one score write
    5 * n * n
}

pub(crate) fn run(spec: &KernelSpec, expected: usize) -> Result<Trace, SimError> {
    let n = spec.param("n");
    let wg = spec.param("wg");
    let stride = n + 1;
    let bytes = stride * stride * u64::from(INT);

    let mut vas = VirtualAddressSpace::new();
    let score = Buf::new(&vas.allocate_buffer(AddressSpace::Global, bytes, DEFAULT_ALIGNMENT)?, INT);
    let reference = Buf::new(&vas.allocate_buffer(AddressSpace::Global, bytes, DEFAULT_ALIGNMENT)?, INT);

    let trace = execute(spec.launch.clone(), vas.into_buffers(), expected, |rec| {
        let first_row = rec.items()[0].global[0] + 1;
        let cell = |row: u64, d: u64| {
            let col = d.checked_sub(row)?;
            (1..=n).contains(&col).then_some((row, col))
        };
        // diagonals touched by rows first_row..first_row+wg
        for d in first_row + 1..=first_row + wg - 1 + n {
            let at = |wi: &super::WorkItem| cell(wi.global[0] + 1, d);
            rec.point(|wi| at(wi).map(|(i, j)| score.load((i - 1) * stride + j - 1)));
            rec.point(|wi| at(wi).map(|(i, j)| score.load((i - 1) * stride + j)));
            rec.point(|wi| at(wi).map(|(i, j)| score.load(i * stride + j - 1)));
            rec.point(|wi| at(wi).map(|(i, j)| reference.load(i * stride + j)));
            rec.point(|wi| at(wi).map(|(i, j)| score.store(i * stride + j)));
            rec.barrier();
        }
    });
    Ok(trace)
}
