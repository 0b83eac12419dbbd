use std::collections::HashMap;
use std::fmt;

use super::{AccessKind, AddressSpace, BufferDescriptor, LaunchGeometry, WorkItemCoord};

/// One recorded load or store.
///
/// Counted once at its base byte address whatever its width. The global
/// work-item id is not stored; [`Trace::coord`] derives it from the launch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MemoryAccess {
    pub group: u32,
    pub local: u32,
    /// Logical time within the work-group.
    pub timestamp: u32,
    pub address: u64,
    pub width: u16,
    pub kind: AccessKind,
    pub space: AddressSpace,
}

/// A kernel invocation's memory trace: launch geometry, buffer table, and the
/// accesses in `(group, timestamp, local)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    launch: LaunchGeometry,
    buffers: Vec<BufferDescriptor>,
    accesses: Vec<MemoryAccess>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnmappedAddress { record: usize, address: u64, space: AddressSpace },
    SpaceMismatch { record: usize, address: u64, space: AddressSpace, buffer_space: AddressSpace },
    PrivateAccess { record: usize },
    ZeroWidth { record: usize },
    GroupOutOfRange { record: usize, group: u32, groups: u64 },
    LocalOutOfRange { record: usize, local: u32, group_size: u64 },
    GroupOrder { record: usize, group: u32, previous: u32 },
    TimestampOrder { record: usize, group: u32, timestamp: u32, previous: u32 },
}

impl Violation {
    /// Index of the offending record.
    pub fn record(&self) -> usize {
        match *self {
            Violation::UnmappedAddress { record, .. }
            | Violation::SpaceMismatch { record, .. }
            | Violation::PrivateAccess { record }
            | Violation::ZeroWidth { record }
            | Violation::GroupOutOfRange { record, .. }
            | Violation::LocalOutOfRange { record, .. }
            | Violation::GroupOrder { record, .. }
            | Violation::TimestampOrder { record, .. } => record,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnmappedAddress { address, space, .. } => {
                write!(f, "unmapped address {address:#x}: no {space} buffer contains it")
            }
            Violation::SpaceMismatch { address, space, buffer_space, .. } => write!(
                f,
                "space mismatch: {space} access to {address:#x} lies in a {buffer_space} buffer"
            ),
            Violation::PrivateAccess { .. } => f.write_str("private access recorded"),
            Violation::ZeroWidth { .. } => f.write_str("zero-width access"),
            Violation::GroupOutOfRange { group, groups, .. } => {
                write!(f, "group {group} out of range (launch has {groups} work-groups)")
            }
            Violation::LocalOutOfRange { local, group_size, .. } => {
                write!(f, "local id {local} out of range (work-group size {group_size})")
            }
            Violation::GroupOrder { group, previous, .. } => {
                write!(f, "group order: group {group} follows group {previous}")
            }
            Violation::TimestampOrder { group, timestamp, previous, .. } => write!(
                f,
                "timestamp order: group {group} goes back from timestamp {previous} to {timestamp}"
            ),
        }
    }
}

impl Trace {
    pub fn new(launch: LaunchGeometry, buffers: Vec<BufferDescriptor>) -> Self {
        Trace { launch, buffers, accesses: Vec::new() }
    }

    pub fn from_parts(
        launch: LaunchGeometry,
        buffers: Vec<BufferDescriptor>,
        accesses: Vec<MemoryAccess>,
    ) -> Self {
        Trace { launch, buffers, accesses }
    }

    pub fn into_parts(self) -> (LaunchGeometry, Vec<BufferDescriptor>, Vec<MemoryAccess>) {
        (self.launch, self.buffers, self.accesses)
    }

    pub fn reserve(&mut self, additional: usize) {
        self.accesses.reserve(additional);
    }

    pub fn push(&mut self, access: MemoryAccess) {
        self.accesses.push(access);
    }

    pub fn extend_from_slice(&mut self, accesses: &[MemoryAccess]) {
        self.accesses.extend_from_slice(accesses);
    }

    pub fn launch(&self) -> &LaunchGeometry {
        &self.launch
    }

    pub fn buffers(&self) -> &[BufferDescriptor] {
        &self.buffers
    }

    pub fn accesses(&self) -> &[MemoryAccess] {
        &self.accesses
    }

    pub fn len(&self) -> usize {
        self.accesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accesses.is_empty()
    }

    pub fn coord(&self, access: &MemoryAccess) -> WorkItemCoord {
        self.launch.coord(access.group, access.local)
    }

    /// True when records are sorted by `(group, timestamp)`.
    pub fn is_canonical(&self) -> bool {
        self.accesses
            .windows(2)
            .all(|w| (w[0].group, w[0].timestamp) <= (w[1].group, w[1].timestamp))
    }

    /// Checks every trace invariant and returns all violations found.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let lookup = BufferLookup::new(&self.buffers);
        let groups = self.launch.num_groups();
        let group_size = self.launch.group_size();
        let mut last_ts: HashMap<u32, u32> = HashMap::new();
        let mut previous_group: Option<u32> = None;
        let mut violations = Vec::new();

        for (record, a) in self.accesses.iter().enumerate() {
            if a.space == AddressSpace::Private {
                violations.push(Violation::PrivateAccess { record });
            } else if let Some(v) = lookup.check(record, a) {
                violations.push(v);
            }
            if a.width == 0 {
                violations.push(Violation::ZeroWidth { record });
            }
            if u64::from(a.group) >= groups {
                violations.push(Violation::GroupOutOfRange { record, group: a.group, groups });
            }
            if u64::from(a.local) >= group_size {
                violations.push(Violation::LocalOutOfRange { record, local: a.local, group_size });
            }
            if let Some(prev) = previous_group {
                if a.group < prev {
                    violations.push(Violation::GroupOrder { record, group: a.group, previous: prev });
                }
            }
            previous_group = Some(a.group);
            match last_ts.insert(a.group, a.timestamp) {
                Some(prev) if a.timestamp < prev => violations.push(Violation::TimestampOrder {
                    record,
                    group: a.group,
                    timestamp: a.timestamp,
                    previous: prev,
                }),
                _ => {}
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }
}

/// Per-space interval lookup over the buffer table.
struct BufferLookup<'a> {
    by_space: [Vec<&'a BufferDescriptor>; 3],
}

fn space_slot(space: AddressSpace) -> Option<usize> {
    match space {
        AddressSpace::Global => Some(0),
        AddressSpace::Local => Some(1),
        AddressSpace::Constant => Some(2),
        AddressSpace::Private => None,
    }
}

impl<'a> BufferLookup<'a> {
    fn new(buffers: &'a [BufferDescriptor]) -> Self {
        let mut by_space: [Vec<&BufferDescriptor>; 3] = Default::default();
        for b in buffers {
            if let Some(slot) = space_slot(b.space) {
                by_space[slot].push(b);
            }
        }
        for list in &mut by_space {
            list.sort_by_key(|b| b.base);
        }
        BufferLookup { by_space }
    }

    fn find(&self, slot: usize, address: u64) -> Option<&'a BufferDescriptor> {
        let list = &self.by_space[slot];
        let idx = list.partition_point(|b| b.base <= address);
        // overlapping buffers within one space are not expected, but scan back
        // over any that start below the address
        list[..idx].iter().rev().find(|b| b.contains(address)).copied()
    }

    fn check(&self, record: usize, a: &MemoryAccess) -> Option<Violation> {
        let slot = space_slot(a.space)?;
        if self.find(slot, a.address).is_some() {
            return None;
        }
        for other in AddressSpace::RECORDED {
            let other_slot = space_slot(other).unwrap();
            if other_slot != slot && self.find(other_slot, a.address).is_some() {
                return Some(Violation::SpaceMismatch {
                    record,
                    address: a.address,
                    space: a.space,
                    buffer_space: other,
                });
            }
        }
        Some(Violation::UnmappedAddress { record, address: a.address, space: a.space })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::BufferId;

    fn small_trace() -> Trace {
        let launch = LaunchGeometry::new(&[4], &[2]).unwrap();
        let buffers = vec![
            BufferDescriptor { id: BufferId(0), space: AddressSpace::Global, base: 0, size: 64, alignment: 4 },
            BufferDescriptor { id: BufferId(1), space: AddressSpace::Local, base: 0, size: 16, alignment: 4 },
        ];
        let mut t = Trace::new(launch, buffers);
        t.push(access(0, 0, 0, 0, AddressSpace::Global));
        t.push(access(0, 1, 0, 4, AddressSpace::Global));
        t
    }

    fn access(group: u32, local: u32, timestamp: u32, address: u64, space: AddressSpace) -> MemoryAccess {
        MemoryAccess { group, local, timestamp, address, width: 4, kind: AccessKind::Load, space }
    }

    #[test]
    fn well_formed_trace_is_ok() {
        assert_eq!(small_trace().validate(), Ok(()));
    }

    #[test]
    fn unmapped_address_is_one_violation() {
        let mut t = small_trace();
        t.push(access(1, 0, 0, 1000, AddressSpace::Global));
        let v = t.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::UnmappedAddress { record: 2, .. }));
        assert!(v[0].to_string().contains("unmapped address"));
    }

    #[test]
    fn decreasing_timestamp_is_one_violation() {
        let mut t = small_trace();
        t.push(access(0, 0, 3, 8, AddressSpace::Global));
        t.push(access(0, 1, 2, 12, AddressSpace::Global));
        let v = t.validate().unwrap_err();
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("timestamp order"));
    }

    #[test]
    fn space_is_checked_against_buffer() {
        let mut t = small_trace();
        // address 32 is inside the global buffer but beyond the 16-byte local one
        t.push(access(1, 0, 0, 32, AddressSpace::Local));
        // constant space has no buffers at all
        t.push(access(1, 0, 1, 8, AddressSpace::Constant));
        let v = t.validate().unwrap_err();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| matches!(x, Violation::SpaceMismatch { .. })));
    }

    #[test]
    fn geometry_bounds_and_private() {
        let mut t = small_trace();
        t.push(access(2, 0, 0, 0, AddressSpace::Global));
        t.push(access(1, 2, 0, 0, AddressSpace::Global));
        t.push(access(1, 0, 1, 0, AddressSpace::Private));
        let v = t.validate().unwrap_err();
        assert!(v.iter().any(|x| matches!(x, Violation::GroupOutOfRange { group: 2, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::LocalOutOfRange { local: 2, .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::GroupOrder { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::PrivateAccess { record: 4 })));
    }
}
