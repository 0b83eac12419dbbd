//! GEM-style electrostatics: each work-item owns one surface vertex and
//! reads every atom record, so all atom loads are group-wide broadcasts.

use super::catalogue::KernelSpec;
use super::engine::{execute, Buf};
use super::SimError;
use crate::trace::{AccessKind, AddressSpace, Trace, VirtualAddressSpace, DEFAULT_ALIGNMENT};

/// `float4`-sized records: x, y, z and a charge or padding word.
const RECORD: u16 = 16;
const FLOAT: u16 = 4;

pub(crate) fn access_count(n: u64, atoms: u64) -> u64 {
    // three vertex coordinate loads, four loads per atom, one store
    n * (4 + 4 * atoms)
}

pub(crate) fn run(spec: &KernelSpec, expected: usize) -> Result<Trace, SimError> {
    let n = spec.param("n");
    let atoms = spec.param("atoms");
    let record = u64::from(RECORD);

    let mut vas = VirtualAddressSpace::new();
    let vertices = Buf::new(&vas.allocate_buffer(AddressSpace::Global, n * record, DEFAULT_ALIGNMENT)?, RECORD);
    let atom_buf = Buf::new(&vas.allocate_buffer(AddressSpace::Global, atoms * record, DEFAULT_ALIGNMENT)?, RECORD);
    let potential =
        Buf::new(&vas.allocate_buffer(AddressSpace::Global, n * u64::from(FLOAT), DEFAULT_ALIGNMENT)?, FLOAT);

    let word = |i: u64| i * u64::from(FLOAT);
    let trace = execute(spec.launch.clone(), vas.into_buffers(), expected, |rec| {
        for c in 0..3 {
            rec.all(|wi| vertices.field(wi.global[0], word(c), FLOAT, AccessKind::Load));
        }
        for a in 0..atoms {
            for c in 0..4 {
                rec.all(|_| atom_buf.field(a, word(c), FLOAT, AccessKind::Load));
            }
        }
        rec.all(|wi| potential.store(wi.global[0]));
    });
    Ok(trace)
}
