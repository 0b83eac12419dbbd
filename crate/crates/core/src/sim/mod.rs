//! Deterministic SPMD simulator and the built-in kernel catalogue.

mod catalogue;
mod csr;
mod engine;
mod gem;
mod lcg;
mod matmul;
mod nw;

use thiserror::Error;

pub use catalogue::{list_kernels, KernelId, KernelInfo, KernelSpec, ParamSpec, SpecError, UnknownKernel};
pub use csr::SparsityPattern;
pub use engine::{Buf, GroupRecorder, Op, WorkItem};
pub use lcg::Lcg;

use crate::trace::{AllocError, Trace};

/// Default limit on the number of records a run may produce.
pub const DEFAULT_TRACE_CAP: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("trace would hold {records} records, above the cap of {cap}; lower the problem size or raise the cap")]
    CapExceeded { records: u64, cap: u64 },
    #[error(transparent)]
    Alloc(#[from] AllocError),
}

/// Exact number of records `run_kernel` will produce for `spec`.
pub fn access_count(spec: &KernelSpec) -> u64 {
    match spec.kernel {
        k if k.is_matmul() => matmul::access_count(k, spec.param("n"), spec.param("tile")),
        KernelId::NeedlemanWunschWavefront => nw::access_count(spec.param("n")),
        KernelId::CsrSpmv => csr::access_count(&csr::pattern(spec)),
        KernelId::GemBroadcast => gem::access_count(spec.param("n"), spec.param("atoms")),
        _ => unreachable!("all kernels handled"),
    }
}

/// Simulates `spec` with the default trace cap.
pub fn run_kernel(spec: &KernelSpec) -> Result<Trace, SimError> {
    run_kernel_capped(spec, DEFAULT_TRACE_CAP)
}

/// Simulates `spec`, refusing before any work if the trace would exceed `cap`
/// records. The trace is in `(group, timestamp, local)` order.
pub fn run_kernel_capped(spec: &KernelSpec, cap: u64) -> Result<Trace, SimError> {
    let pattern = (spec.kernel == KernelId::CsrSpmv).then(|| csr::pattern(spec));
    let records = match &pattern {
        Some(p) => csr::access_count(p),
        None => access_count(spec),
    };
    if records > cap || usize::try_from(records).is_err() {
        return Err(SimError::CapExceeded { records, cap });
    }
    let expected = records as usize;
    match spec.kernel {
        k if k.is_matmul() => matmul::run(spec, expected),
        KernelId::NeedlemanWunschWavefront => nw::run(spec, expected),
        KernelId::CsrSpmv => csr::run(spec, pattern.as_ref().expect("pattern generated"), expected),
        KernelId::GemBroadcast => gem::run(spec, expected),
        _ => unreachable!("all kernels handled"),
    }
}
