use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::AddressSpace;

/// Alignment applied when a kernel does not ask for anything else.
pub const DEFAULT_ALIGNMENT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocError {
    #[error("buffer size must be positive")]
    ZeroSize,
    #[error("alignment {0} is not a power of two")]
    Alignment(u64),
    #[error("private memory is not part of the traced address space")]
    PrivateSpace,
    #[error("virtual address space exhausted")]
    Overflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BufferId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BufferDescriptor {
    pub id: BufferId,
    pub space: AddressSpace,
    pub base: u64,
    pub size: u64,
    pub alignment: u64,
}

impl BufferDescriptor {
    pub fn end(&self) -> u64 {
        self.base + self.size
    }

    pub fn contains(&self, address: u64) -> bool {
        address >= self.base && address < self.end()
    }
}

/// Virtual address allocator.
///
/// Global and constant buffers share one arena starting at 0. Local buffers
/// get their own arena, also starting at 0 unless configured otherwise, and
/// that arena is shared by every work-group: a local buffer is one logical
/// allocation whose addresses all groups reuse. The two arenas may therefore
/// overlap numerically; they are told apart by address space.
#[derive(Debug, Clone)]
pub struct VirtualAddressSpace {
    shared_watermark: u64,
    local_watermark: u64,
    buffers: Vec<BufferDescriptor>,
}

impl Default for VirtualAddressSpace {
    fn default() -> Self {
        Self::new()
    }
}

impl VirtualAddressSpace {
    pub fn new() -> Self {
        Self::with_local_base(0)
    }

    /// Starts the local arena at `base` instead of 0.
    pub fn with_local_base(base: u64) -> Self {
        VirtualAddressSpace { shared_watermark: 0, local_watermark: base, buffers: Vec::new() }
    }

    /// Places a buffer at the lowest address at or above the arena watermark
    /// that satisfies `alignment`, then advances the watermark past it.
    pub fn allocate_buffer(
        &mut self,
        space: AddressSpace,
        size: u64,
        alignment: u64,
    ) -> Result<BufferDescriptor, AllocError> {
        if size == 0 {
            return Err(AllocError::ZeroSize);
        }
        if !alignment.is_power_of_two() {
            return Err(AllocError::Alignment(alignment));
        }
        let watermark = match space {
            AddressSpace::Global | AddressSpace::Constant => &mut self.shared_watermark,
            AddressSpace::Local => &mut self.local_watermark,
            AddressSpace::Private => return Err(AllocError::PrivateSpace),
        };
        let base = watermark
            .checked_add(alignment - 1)
            .map(|x| x & !(alignment - 1))
            .ok_or(AllocError::Overflow)?;
        *watermark = base.checked_add(size).ok_or(AllocError::Overflow)?;
        let desc = BufferDescriptor {
            id: BufferId(self.buffers.len() as u32),
            space,
            base,
            size,
            alignment,
        };
        self.buffers.push(desc.clone());
        Ok(desc)
    }

    pub fn buffers(&self) -> &[BufferDescriptor] {
        &self.buffers
    }

    pub fn into_buffers(self) -> Vec<BufferDescriptor> {
        self.buffers
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_allocation_starts_at_zero() {
        let mut vas = VirtualAddressSpace::new();
        let a = vas.allocate_buffer(AddressSpace::Global, 262144, 4096).unwrap();
        assert_eq!(a.base, 0);
        let b = vas.allocate_buffer(AddressSpace::Global, 262144, 4096).unwrap();
        assert_eq!(b.base, 262144);
    }

    #[test]
    fn rounds_up_to_alignment() {
        // next multiple of 4096 at or above 100
        let oracle = |watermark: u64, align: u64| watermark.div_ceil(align) * align;
        let mut vas = VirtualAddressSpace::new();
        vas.allocate_buffer(AddressSpace::Global, 100, 4096).unwrap();
        let b = vas.allocate_buffer(AddressSpace::Global, 100, 4096).unwrap();
        assert_eq!(b.base, oracle(100, 4096));
        assert_eq!(b.base, 4096);
    }

    #[test]
    fn constant_shares_global_arena_and_local_is_separate() {
        let mut vas = VirtualAddressSpace::new();
        let g = vas.allocate_buffer(AddressSpace::Global, 64, 4).unwrap();
        let c = vas.allocate_buffer(AddressSpace::Constant, 64, 4).unwrap();
        let l = vas.allocate_buffer(AddressSpace::Local, 64, 4).unwrap();
        assert_eq!((g.base, c.base, l.base), (0, 64, 0));
        assert_eq!(vas.buffers().len(), 3);

        let mut far = VirtualAddressSpace::with_local_base(1 << 40);
        assert_eq!(far.allocate_buffer(AddressSpace::Local, 8, 4).unwrap().base, 1 << 40);
    }

    #[test]
    fn rejects_bad_requests() {
        let mut vas = VirtualAddressSpace::new();
        assert_eq!(vas.allocate_buffer(AddressSpace::Global, 0, 4), Err(AllocError::ZeroSize));
        assert_eq!(vas.allocate_buffer(AddressSpace::Global, 8, 12), Err(AllocError::Alignment(12)));
        assert_eq!(vas.allocate_buffer(AddressSpace::Global, 8, 0), Err(AllocError::Alignment(0)));
        assert_eq!(vas.allocate_buffer(AddressSpace::Private, 8, 4), Err(AllocError::PrivateSpace));
        assert!(vas.buffers().is_empty());
    }
}
