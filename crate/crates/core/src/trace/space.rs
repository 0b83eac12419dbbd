use std::fmt;

use serde::{Deserialize, Serialize};

/// OpenCL address spaces.
///
/// Only `Global`, `Local` and `Constant` accesses end up in a [`Trace`](super::Trace);
/// private (register) traffic is never recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AddressSpace {
    Global,
    Local,
    Constant,
    Private,
}

impl AddressSpace {
    pub const RECORDED: [AddressSpace; 3] =
        [AddressSpace::Global, AddressSpace::Local, AddressSpace::Constant];

    pub fn is_recorded(self) -> bool {
        !matches!(self, AddressSpace::Private)
    }

    /// Single-letter code used by the trace file format.
    pub fn code(self) -> char {
        match self {
            AddressSpace::Global => 'G',
            AddressSpace::Local => 'L',
            AddressSpace::Constant => 'C',
            AddressSpace::Private => 'P',
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "G" => Some(AddressSpace::Global),
            "L" => Some(AddressSpace::Local),
            "C" => Some(AddressSpace::Constant),
            "P" => Some(AddressSpace::Private),
            _ => None,
        }
    }
}

impl fmt::Display for AddressSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            AddressSpace::Global => "global",
            AddressSpace::Local => "local",
            AddressSpace::Constant => "constant",
            AddressSpace::Private => "private",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessKind {
    Load,
    Store,
}

impl AccessKind {
    pub fn code(self) -> char {
        match self {
            AccessKind::Load => 'L',
            AccessKind::Store => 'S',
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "L" => Some(AccessKind::Load),
            "S" => Some(AccessKind::Store),
            _ => None,
        }
    }
}
