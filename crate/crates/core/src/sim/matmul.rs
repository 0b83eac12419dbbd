//! The five matrix-multiply kernels. Matrices are row-major `float`s;
//! `get_global_id(0)` is the row of C and `get_global_id(1)` its column.

use super::catalogue::{KernelId, KernelSpec};
use super::engine::{execute, Buf};
use super::SimError;
use crate::trace::{AddressSpace, Trace, VirtualAddressSpace};

const FLOAT: u16 = 4;

/// Exact number of accesses the kernel will record.
pub(crate) fn access_count(kernel: KernelId, n: u64, tile: u64) -> u64 {
    let tiles = n / tile;
    let per_item = match kernel {
        // N x (B, A) loads, one C store
        KernelId::MatMulSimple => 2 * n + 1,
        // per tile: A load, tile store, then tile x (tile load, B load)
        KernelId::MatMulCoalescedA => tiles * (2 + 2 * tile) + 1,
        // per tile: A load, ASub store, B load, BSub store, then tile x 2 loads
        _ => tiles * (4 + 2 * tile) + 1,
    };
    n * n * per_item
}

pub(crate) fn run(spec: &KernelSpec, expected: usize) -> Result<Trace, SimError> {
    let n = spec.param("n");
    let t = spec.param("tile");
    let align = spec.param("align");
    let bytes = n * n * u64::from(FLOAT);
    let tile_bytes = t * t * u64::from(FLOAT);

    let mut vas = VirtualAddressSpace::new();
    let a = Buf::new(&vas.allocate_buffer(AddressSpace::Global, bytes, align)?, FLOAT);
    let b = Buf::new(&vas.allocate_buffer(AddressSpace::Global, bytes, align)?, FLOAT);
    let c = Buf::new(&vas.allocate_buffer(AddressSpace::Global, bytes, align)?, FLOAT);
    // alignedABT's aligned(4096) tiles are the default alignment, so it
    // allocates exactly like coalescedABT under any `align`
    let local_tiles = match spec.kernel {
        KernelId::MatMulSimple => 0,
        KernelId::MatMulCoalescedA => 1,
        _ => 2,
    };
    let mut tiles = Vec::with_capacity(local_tiles);
    for _ in 0..local_tiles {
        let desc = vas.allocate_buffer(AddressSpace::Local, tile_bytes, align)?;
        tiles.push(Buf::new(&desc, FLOAT));
    }
    let a_sub = tiles.first().copied();
    let b_sub = tiles.get(1).copied();
    let buffers = vas.into_buffers();

    let row = |g: [u64; 3]| g[0];
    let col = |g: [u64; 3]| g[1];
    let num_tiles = n / t;
    let trace = match spec.kernel {
        KernelId::MatMulSimple => execute(spec.launch.clone(), buffers, expected, |rec| {
            for k in 0..n {
                rec.all(|wi| b.load(k * n + col(wi.global)));
                rec.all(|wi| a.load(row(wi.global) * n + k));
            }
            rec.all(|wi| c.store(row(wi.global) * n + col(wi.global)));
        }),
        KernelId::MatMulCoalescedA => {
            let a_tile = a_sub.expect("tile allocated");
            execute(spec.launch.clone(), buffers, expected, |rec| {
                for i in 0..num_tiles {
                    // aTile[localRow][localCol] = A[globalRow*N + localCol + i*TILE]
                    rec.all(|wi| a.load(row(wi.global) * n + wi.local[1] + i * t));
                    rec.all(|wi| a_tile.store(wi.local[0] * t + wi.local[1]));
                    rec.barrier();
                    for k in 0..t {
                        rec.all(|wi| a_tile.load(wi.local[0] * t + k));
                        rec.all(|wi| b.load((i * t + k) * n + col(wi.global)));
                    }
                    rec.barrier();
                }
                rec.all(|wi| c.store(row(wi.global) * n + col(wi.global)));
            })
        }
        _ => {
            let a_sub = a_sub.expect("tile allocated");
            let b_sub = b_sub.expect("tile allocated");
            let transposed = spec.kernel != KernelId::MatMulCoalescedAB;
            // ASub index of (r, c) as written by the kernel variant
            let a_idx = move |r: u64, c: u64| if transposed { c * t + r } else { r * t + c };
            execute(spec.launch.clone(), buffers, expected, |rec| {
                for i in 0..num_tiles {
                    rec.all(|wi| a.load(row(wi.global) * n + i * t + wi.local[1]));
                    rec.all(|wi| a_sub.store(a_idx(wi.local[0], wi.local[1])));
                    rec.all(|wi| b.load(col(wi.global) + (t * i + wi.local[0]) * n));
                    rec.all(|wi| b_sub.store(wi.local[0] * t + wi.local[1]));
                    rec.barrier();
                    for k in 0..t {
                        // the transposed variants read ASub[k][localRow]
                        rec.all(|wi| a_sub.load(a_idx(wi.local[0], k)));
                        rec.all(|wi| b_sub.load(k * t + wi.local[1]));
                    }
                    rec.barrier();
                }
                rec.all(|wi| c.store(row(wi.global) * n + col(wi.global)));
            })
        }
    };
    Ok(trace)
}
