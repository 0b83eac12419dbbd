//! Random valid traces for property tests.

use parloc_core::trace::{
    AccessKind, AddressSpace, BufferDescriptor, BufferId, LaunchGeometry, MemoryAccess, Trace,
};
use proptest::prelude::*;

pub const GLOBAL_BYTES: u64 = 1 << 16;
pub const CONSTANT_BASE: u64 = 1 << 16;
pub const SMALL_BYTES: u64 = 1 << 12;

pub fn buffers() -> Vec<BufferDescriptor> {
    vec![
        BufferDescriptor { id: BufferId(0), space: AddressSpace::Global, base: 0, size: GLOBAL_BYTES, alignment: 4096 },
        BufferDescriptor {
            id: BufferId(1),
            space: AddressSpace::Constant,
            base: CONSTANT_BASE,
            size: SMALL_BYTES,
            alignment: 4096,
        },
        BufferDescriptor { id: BufferId(2), space: AddressSpace::Local, base: 0, size: SMALL_BYTES, alignment: 4096 },
    ]
}

fn address_in(space: AddressSpace, offset: u64) -> u64 {
    match space {
        AddressSpace::Global => offset % GLOBAL_BYTES,
        AddressSpace::Constant => CONSTANT_BASE + offset % SMALL_BYTES,
        _ => offset % SMALL_BYTES,
    }
}

fn space() -> impl Strategy<Value = AddressSpace> {
    prop_oneof![
        3 => Just(AddressSpace::Global),
        2 => Just(AddressSpace::Local),
        1 => Just(AddressSpace::Constant),
    ]
}

/// A valid trace with up to `max_records` accesses, 1 to `max_groups`
/// groups of 1 to 8 work-items, and timestamps below `max_timestamps`.
/// With `word_aligned`, every access is a 4-byte access at a multiple of 4.
pub fn arb_trace(
    max_records: usize,
    max_groups: u64,
    max_timestamps: u32,
    word_aligned: bool,
) -> impl Strategy<Value = Trace> {
    (1..=max_groups, 1u64..=8).prop_flat_map(move |(groups, wg)| {
        let record = (
            0..groups as u32,
            0..max_timestamps,
            0..wg as u32,
            space(),
            // small offsets make collisions likely, large ones spread out
            prop_oneof![0u64..256, 0u64..GLOBAL_BYTES],
            prop_oneof![Just(1u16), Just(2), Just(4), Just(8)],
            any::<bool>(),
        );
        proptest::collection::vec(record, 1..=max_records).prop_map(move |raw| {
            let launch = LaunchGeometry::new(&[groups * wg], &[wg]).unwrap();
            let mut accesses: Vec<MemoryAccess> = raw
                .into_iter()
                .map(|(group, timestamp, local, space, offset, width, store)| {
                    let (offset, width) = if word_aligned { (offset & !3, 4) } else { (offset, width) };
                    MemoryAccess {
                        group,
                        local,
                        timestamp,
                        address: address_in(space, offset),
                        width,
                        kind: if store { AccessKind::Store } else { AccessKind::Load },
                        space,
                    }
                })
                .collect();
            accesses.sort_by_key(|a| (a.group, a.timestamp, a.local));
            Trace::from_parts(launch, buffers(), accesses)
        })
    })
}

/// Trace of `(group, timestamp, address)` triples, all global 4-byte loads,
/// in the order given.
pub fn trace_of(groups: u64, cells: &[(u32, u32, u64)]) -> Trace {
    let launch = LaunchGeometry::new(&[groups], &[1]).unwrap();
    let accesses = cells
        .iter()
        .map(|&(group, timestamp, address)| MemoryAccess {
            group,
            local: 0,
            timestamp,
            address,
            width: 4,
            kind: AccessKind::Load,
            space: AddressSpace::Global,
        })
        .collect();
    Trace::from_parts(launch, buffers(), accesses)
}
