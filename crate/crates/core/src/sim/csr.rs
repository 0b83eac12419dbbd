//! CSR sparse matrix-vector product, one row per work-item, over a
//! pseudo-random sparsity pattern.
//!
//! Pattern: for each row in order, draw the row length as
//! `1 + draw % max_row`, then that many column indices as `draw % cols`;
//! columns are sorted and duplicates dropped. Draws come from [`Lcg`]
//! seeded with `seed`.

use super::catalogue::KernelSpec;
use super::engine::{execute, Buf};
use super::lcg::Lcg;
use super::SimError;
use crate::trace::{AddressSpace, Trace, VirtualAddressSpace, DEFAULT_ALIGNMENT};

const WORD: u16 = 4;

/// Row pointer and column index arrays of a CSR matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    pub row_ptr: Vec<u64>,
    pub col_idx: Vec<u64>,
}

impl SparsityPattern {
    pub fn generate(rows: u64, cols: u64, max_row: u64, seed: u64) -> Self {
        let mut rng = Lcg::new(seed);
        let mut row_ptr = Vec::with_capacity(rows as usize + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        let mut row = Vec::new();
        for _ in 0..rows {
            let len = 1 + rng.below(max_row);
            row.clear();
            row.extend((0..len).map(|_| rng.below(cols)));
            row.sort_unstable();
            row.dedup();
            col_idx.extend_from_slice(&row);
            row_ptr.push(col_idx.len() as u64);
        }
        SparsityPattern { row_ptr, col_idx }
    }

    pub fn nnz(&self) -> u64 {
        self.col_idx.len() as u64
    }

    pub fn row_len(&self, row: u64) -> u64 {
        self.row_ptr[row as usize + 1] - self.row_ptr[row as usize]
    }
}

pub(crate) fn pattern(spec: &KernelSpec) -> SparsityPattern {
    SparsityPattern::generate(
        spec.param("n"),
        spec.param("cols"),
        spec.param("max_row"),
        spec.param("seed"),
    )
}

pub(crate) fn access_count(pattern: &SparsityPattern) -> u64 {
    let rows = pattern.row_ptr.len() as u64 - 1;
    // two row pointer loads and one y store per row, three loads per non-zero
    3 * rows + 3 * pattern.nnz()
}

pub(crate) fn run(spec: &KernelSpec, pattern: &SparsityPattern, expected: usize) -> Result<Trace, SimError> {
    let rows = spec.param("n");
    let cols = spec.param("cols");
    let nnz = pattern.nnz().max(1);
    let w = u64::from(WORD);

    let mut vas = VirtualAddressSpace::new();
    let mut alloc = |elems: u64| -> Result<Buf, SimError> {
        Ok(Buf::new(&vas.allocate_buffer(AddressSpace::Global, elems * w, DEFAULT_ALIGNMENT)?, WORD))
    };
    let ap = alloc(rows + 1)?;
    let aj = alloc(nnz)?;
    let ax = alloc(nnz)?;
    let x = alloc(cols)?;
    let y = alloc(rows)?;

    let trace = execute(spec.launch.clone(), vas.into_buffers(), expected, |rec| {
        let longest = rec.items().iter().map(|wi| pattern.row_len(wi.global[0])).max().unwrap_or(0);
        let start = |row: u64| pattern.row_ptr[row as usize];
        rec.all(|wi| ap.load(wi.global[0]));
        rec.all(|wi| ap.load(wi.global[0] + 1));
        for trip in 0..longest {
            let jj = |wi: &super::WorkItem| {
                let row = wi.global[0];
                (trip < pattern.row_len(row)).then(|| start(row) + trip)
            };
            rec.point(|wi| jj(wi).map(|k| ax.load(k)));
            rec.point(|wi| jj(wi).map(|k| aj.load(k)));
            rec.point(|wi| jj(wi).map(|k| x.load(pattern.col_idx[k as usize])));
        }
        rec.all(|wi| y.store(wi.global[0]));
    });
    Ok(trace)
}
