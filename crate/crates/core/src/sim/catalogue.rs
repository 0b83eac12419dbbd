use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::{GeometryError, LaunchGeometry, DEFAULT_ALIGNMENT};

/// The built-in kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelId {
    #[serde(rename = "simple")]
    MatMulSimple,
    #[serde(rename = "coalescedA")]
    MatMulCoalescedA,
    #[serde(rename = "coalescedAB")]
    MatMulCoalescedAB,
    #[serde(rename = "coalescedABT")]
    MatMulCoalescedABT,
    #[serde(rename = "alignedABT")]
    MatMulAlignedABT,
    #[serde(rename = "nw")]
    NeedlemanWunschWavefront,
    #[serde(rename = "csr")]
    CsrSpmv,
    #[serde(rename = "gem")]
    GemBroadcast,
}

/// One tunable parameter of a kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: u64,
    pub description: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelInfo {
    pub id: KernelId,
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [ParamSpec],
}

const MATMUL_PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "n", default: 256, description: "matrix order N" },
    ParamSpec { name: "tile", default: 16, description: "tile edge; work-groups are tile x tile" },
    ParamSpec { name: "align", default: DEFAULT_ALIGNMENT, description: "buffer alignment in bytes" },
];

const NW_PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "n", default: 1024, description: "sequence length; the score matrix is (n+1)^2" },
    ParamSpec { name: "wg", default: 16, description: "work-group size (rows per group)" },
];

const CSR_PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "n", default: 4096, description: "matrix rows, one work-item each" },
    ParamSpec { name: "cols", default: 1 << 20, description: "matrix columns (length of x)" },
    ParamSpec { name: "max_row", default: 64, description: "maximum non-zeros per row" },
    ParamSpec { name: "seed", default: 1, description: "sparsity pattern seed" },
    ParamSpec { name: "wg", default: 64, description: "work-group size" },
];

const GEM_PARAMS: &[ParamSpec] = &[
    ParamSpec { name: "n", default: 4096, description: "surface vertices, one work-item each" },
    ParamSpec { name: "atoms", default: 256, description: "atoms read by every work-item" },
    ParamSpec { name: "wg", default: 64, description: "work-group size" },
];

impl KernelId {
    pub const ALL: [KernelId; 8] = [
        KernelId::MatMulSimple,
        KernelId::MatMulCoalescedA,
        KernelId::MatMulCoalescedAB,
        KernelId::MatMulCoalescedABT,
        KernelId::MatMulAlignedABT,
        KernelId::NeedlemanWunschWavefront,
        KernelId::CsrSpmv,
        KernelId::GemBroadcast,
    ];

    /// The five matrix-multiply variants, simplest first.
    pub const MATMUL: [KernelId; 5] = [
        KernelId::MatMulSimple,
        KernelId::MatMulCoalescedA,
        KernelId::MatMulCoalescedAB,
        KernelId::MatMulCoalescedABT,
        KernelId::MatMulAlignedABT,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelId::MatMulSimple => "simple",
            KernelId::MatMulCoalescedA => "coalescedA",
            KernelId::MatMulCoalescedAB => "coalescedAB",
            KernelId::MatMulCoalescedABT => "coalescedABT",
            KernelId::MatMulAlignedABT => "alignedABT",
            KernelId::NeedlemanWunschWavefront => "nw",
            KernelId::CsrSpmv => "csr",
            KernelId::GemBroadcast => "gem",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            KernelId::MatMulSimple => "naive matrix multiply, one work-item per C element",
            KernelId::MatMulCoalescedA => "matrix multiply staging tiles of A in local memory",
            KernelId::MatMulCoalescedAB => "matrix multiply staging tiles of A and B in local memory",
            KernelId::MatMulCoalescedABT => "coalescedAB with the A tile stored transposed",
            KernelId::MatMulAlignedABT => "coalescedABT with local tiles aligned to 4096 bytes",
            KernelId::NeedlemanWunschWavefront => "Needleman-Wunsch anti-diagonal wavefront update",
            KernelId::CsrSpmv => "sparse matrix-vector product, CSR, one row per work-item",
            KernelId::GemBroadcast => "electrostatic potential, every work-item reads every atom",
        }
    }

    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            KernelId::NeedlemanWunschWavefront => NW_PARAMS,
            KernelId::CsrSpmv => CSR_PARAMS,
            KernelId::GemBroadcast => GEM_PARAMS,
            _ => MATMUL_PARAMS,
        }
    }

    pub fn is_matmul(self) -> bool {
        KernelId::MATMUL.contains(&self)
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown kernel '{0}'")]
pub struct UnknownKernel(pub String);

impl FromStr for KernelId {
    type Err = UnknownKernel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KernelId::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownKernel(s.to_string()))
    }
}

pub fn list_kernels() -> Vec<KernelInfo> {
    KernelId::ALL
        .into_iter()
        .map(|id| KernelInfo { id, name: id.name(), description: id.description(), params: id.params() })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("kernel {kernel} has no parameter '{param}'")]
    UnknownParam { kernel: KernelId, param: String },
    #[error("parameter '{param}' must be positive")]
    NonPositive { param: &'static str },
    #[error("parameter '{param}' = {value} must be a power of two")]
    NotPowerOfTwo { param: &'static str, value: u64 },
    #[error("'{what}' = {value} is not a multiple of '{by}' = {divisor}")]
    NotDivisible { what: &'static str, value: u64, by: &'static str, divisor: u64 },
    #[error("parameter '{param}' = {value} is too large")]
    TooLarge { param: &'static str, value: u64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A kernel with fully resolved parameters and its launch geometry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelSpec {
    pub kernel: KernelId,
    pub params: BTreeMap<String, u64>,
    pub launch: LaunchGeometry,
}

impl KernelSpec {
    /// Fills unspecified parameters with defaults, checks them, and derives
    /// the launch geometry.
    pub fn new(kernel: KernelId, overrides: &BTreeMap<String, u64>) -> Result<Self, SpecError> {
        let schema = kernel.params();
        for key in overrides.keys() {
            if !schema.iter().any(|p| p.name == key) {
                return Err(SpecError::UnknownParam { kernel, param: key.clone() });
            }
        }
        let mut params = BTreeMap::new();
        for p in schema {
            let value = overrides.get(p.name).copied().unwrap_or(p.default);
            if value == 0 {
                return Err(SpecError::NonPositive { param: p.name });
            }
            params.insert(p.name.to_string(), value);
        }
        let get = |name: &str| params[name];
        let divisible = |what, by| {
            let (value, divisor) = (get(what), get(by));
            if value % divisor == 0 {
                Ok(())
            } else {
                Err(SpecError::NotDivisible { what, value, by, divisor })
            }
        };
        // keep every derived byte address comfortably inside u64
        let bounded = |param: &'static str, limit: u64| {
            let value = get(param);
            if value > limit {
                Err(SpecError::TooLarge { param, value })
            } else {
                Ok(value)
            }
        };

        let launch = match kernel {
            k if k.is_matmul() => {
                let n = bounded("n", 1 << 20)?;
                let tile = get("tile");
                divisible("n", "tile")?;
                let align = bounded("align", 1 << 40)?;
                if !align.is_power_of_two() {
                    return Err(SpecError::NotPowerOfTwo { param: "align", value: align });
                }
                LaunchGeometry::new(&[n, n], &[tile, tile])?
            }
            KernelId::NeedlemanWunschWavefront => {
                let n = bounded("n", 1 << 20)?;
                divisible("n", "wg")?;
                LaunchGeometry::new(&[n], &[get("wg")])?
            }
            KernelId::CsrSpmv => {
                let n = bounded("n", 1 << 24)?;
                bounded("cols", 1 << 32)?;
                bounded("max_row", 1 << 16)?;
                divisible("n", "wg")?;
                LaunchGeometry::new(&[n], &[get("wg")])?
            }
            KernelId::GemBroadcast => {
                let n = bounded("n", 1 << 28)?;
                bounded("atoms", 1 << 28)?;
                divisible("n", "wg")?;
                LaunchGeometry::new(&[n], &[get("wg")])?
            }
            _ => unreachable!("all kernels handled"),
        };
        Ok(KernelSpec { kernel, params, launch })
    }

    pub fn with_defaults(kernel: KernelId) -> Self {
        Self::new(kernel, &BTreeMap::new()).expect("defaults are valid")
    }

    pub fn param(&self, name: &str) -> u64 {
        self.params[name]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn overrides(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn catalogue_has_eight_kernels_with_unique_names() {
        let list = list_kernels();
        assert_eq!(list.len(), 8);
        assert!(list.iter().any(|k| k.id == KernelId::MatMulSimple));
        for k in &list {
            assert_eq!(k.name.parse::<KernelId>().unwrap(), k.id);
            assert!(k.params.iter().any(|p| p.name == "n"));
        }
    }

    #[test]
    fn matmul_launch_is_n_by_n_in_tiles() {
        let spec = KernelSpec::new(KernelId::MatMulCoalescedAB, &overrides(&[("n", 64)])).unwrap();
        assert_eq!(spec.launch.global_sizes(), &[64, 64]);
        assert_eq!(spec.launch.group_size(), 256);
        assert_eq!(spec.param("align"), 4096);
    }

    #[test]
    fn rejects_bad_params() {
        let k = KernelId::MatMulSimple;
        assert_eq!(
            KernelSpec::new(k, &overrides(&[("n", 0)])),
            Err(SpecError::NonPositive { param: "n" })
        );
        assert!(matches!(
            KernelSpec::new(k, &overrides(&[("n", 100)])),
            Err(SpecError::NotDivisible { .. })
        ));
        assert!(matches!(
            KernelSpec::new(k, &overrides(&[("align", 48)])),
            Err(SpecError::NotPowerOfTwo { .. })
        ));
        assert!(matches!(
            KernelSpec::new(KernelId::GemBroadcast, &overrides(&[("tile", 8)])),
            Err(SpecError::UnknownParam { .. })
        ));
    }
}
