//! Memory traces: launch geometry, virtual buffers and per-access records.

mod alloc;
pub mod format;
mod geometry;
mod record;
mod space;

pub use alloc::{AllocError, BufferDescriptor, BufferId, VirtualAddressSpace, DEFAULT_ALIGNMENT};
pub use format::{read_trace, write_trace, FormatError, ParsedTrace};
pub use geometry::{GeometryError, LaunchGeometry, WorkItemCoord};
pub use record::{MemoryAccess, Trace, Violation};
pub use space::{AccessKind, AddressSpace};
