//! Lockstep execution of one work-group at a time.
//!
//! A kernel body is written as a sequence of access sites. Each call to
//! [`GroupRecorder::point`] is one dynamically executed site instance: every
//! work-item of the group is offered the site in local-id order, those whose
//! control flow reaches it return an access, and all of those accesses share
//! the group's next timestamp.

use crate::trace::{
    AccessKind, AddressSpace, BufferDescriptor, LaunchGeometry, MemoryAccess, Trace,
};

/// Identity of a work-item as seen by kernel code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkItem {
    /// `get_local_id(d)`
    pub local: [u64; 3],
    /// `get_global_id(d)`
    pub global: [u64; 3],
    /// `get_group_id(d)`
    pub group: [u64; 3],
    /// Flattened local index.
    pub index: u32,
}

/// A single memory operation issued by one work-item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Op {
    pub address: u64,
    pub width: u16,
    pub kind: AccessKind,
    pub space: AddressSpace,
}

/// Typed view of an allocated buffer as an array of fixed-size elements.
#[derive(Debug, Clone, Copy)]
pub struct Buf {
    base: u64,
    len: u64,
    elem: u16,
    space: AddressSpace,
}

impl Buf {
    pub fn new(desc: &BufferDescriptor, elem: u16) -> Self {
        Buf { base: desc.base, len: desc.size / u64::from(elem), elem, space: desc.space }
    }

    /// Access to byte `offset` within element `index`, e.g. one field of a
    /// record.
    pub fn field(&self, index: u64, offset: u64, width: u16, kind: AccessKind) -> Op {
        debug_assert!(index < self.len, "index {index} out of bounds ({})", self.len);
        debug_assert!(offset + u64::from(width) <= u64::from(self.elem));
        Op { address: self.base + index * u64::from(self.elem) + offset, width, kind, space: self.space }
    }

    pub fn load(&self, index: u64) -> Op {
        self.field(index, 0, self.elem, AccessKind::Load)
    }

    pub fn store(&self, index: u64) -> Op {
        self.field(index, 0, self.elem, AccessKind::Store)
    }
}

pub struct GroupRecorder<'a> {
    group: u32,
    items: &'a [WorkItem],
    timestamp: u32,
    out: &'a mut Vec<MemoryAccess>,
}

impl<'a> GroupRecorder<'a> {
    pub fn items(&self) -> &[WorkItem] {
        self.items
    }

    /// Executes one access site across the group. Work-items for which `f`
    /// returns `None` have diverged and contribute nothing. A site that no
    /// work-item reaches consumes no timestamp.
    pub fn point<F>(&mut self, mut f: F)
    where
        F: FnMut(&WorkItem) -> Option<Op>,
    {
        let before = self.out.len();
        for wi in self.items {
            if let Some(op) = f(wi) {
                self.out.push(MemoryAccess {
                    group: self.group,
                    local: wi.index,
                    timestamp: self.timestamp,
                    address: op.address,
                    width: op.width,
                    kind: op.kind,
                    space: op.space,
                });
            }
        }
        if self.out.len() > before {
            self.timestamp += 1;
        }
    }

    /// Site executed by every work-item.
    pub fn all<F>(&mut self, mut f: F)
    where
        F: FnMut(&WorkItem) -> Op,
    {
        self.point(|wi| Some(f(wi)));
    }

    /// Work-group barrier. Every site already gets a later timestamp than
    /// the one before it, so the ordering guarantee holds by construction and
    /// nothing is emitted.
    pub fn barrier(&mut self) {}
}

/// Runs `body` once per work-group in group order and collects the trace.
pub(crate) fn execute<F>(
    launch: LaunchGeometry,
    buffers: Vec<BufferDescriptor>,
    expected: usize,
    mut body: F,
) -> Trace
where
    F: FnMut(&mut GroupRecorder<'_>),
{
    let mut accesses = Vec::with_capacity(expected);
    let local_size = launch.group_size() as u32;
    let mut items = Vec::with_capacity(local_size as usize);
    for group in 0..launch.num_groups() as u32 {
        items.clear();
        let group_id = launch.group_id(group);
        for index in 0..local_size {
            items.push(WorkItem {
                local: launch.local_id(index),
                global: launch.global_id(group, index),
                group: group_id,
                index,
            });
        }
        let mut rec = GroupRecorder { group, items: &items, timestamp: 0, out: &mut accesses };
        body(&mut rec);
    }
    debug_assert_eq!(accesses.len(), expected, "access bound out of date");
    Trace::from_parts(launch, buffers, accesses)
}
