use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("launch must have 1 to 3 dimensions, got {0}")]
    Dimensions(usize),
    #[error("global and local sizes have different dimension counts ({global} vs {local})")]
    DimensionMismatch { global: usize, local: usize },
    #[error("size in dimension {dim} must be positive")]
    ZeroSize { dim: usize },
    #[error("global size {global} in dimension {dim} is not a multiple of work-group size {local}")]
    NotDivisible { dim: usize, global: u64, local: u64 },
    #[error("launch too large: {0} work-groups or work-items exceed the 32-bit index range")]
    TooLarge(u64),
}

/// NDRange of a kernel launch: global size and work-group size per dimension.
///
/// Work-groups and work-items are flattened with dimension 0 varying fastest,
/// as in OpenCL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LaunchRepr", into = "LaunchRepr")]
pub struct LaunchGeometry {
    dims: usize,
    global: [u64; 3],
    local: [u64; 3],
}

#[derive(Serialize, Deserialize)]
struct LaunchRepr {
    dims: usize,
    global: Vec<u64>,
    local: Vec<u64>,
}

impl From<LaunchGeometry> for LaunchRepr {
    fn from(g: LaunchGeometry) -> Self {
        LaunchRepr {
            dims: g.dims,
            global: g.global_sizes().to_vec(),
            local: g.local_sizes().to_vec(),
        }
    }
}

impl TryFrom<LaunchRepr> for LaunchGeometry {
    type Error = GeometryError;

    fn try_from(r: LaunchRepr) -> Result<Self, Self::Error> {
        let geometry = LaunchGeometry::new(&r.global, &r.local)?;
        if geometry.dims != r.dims {
            return Err(GeometryError::Dimensions(r.dims));
        }
        Ok(geometry)
    }
}

impl LaunchGeometry {
    pub fn new(global: &[u64], local: &[u64]) -> Result<Self, GeometryError> {
        let dims = global.len();
        if !(1..=3).contains(&dims) {
            return Err(GeometryError::Dimensions(dims));
        }
        if local.len() != dims {
            return Err(GeometryError::DimensionMismatch { global: dims, local: local.len() });
        }
        let mut g = [1u64; 3];
        let mut l = [1u64; 3];
        for dim in 0..dims {
            if global[dim] == 0 || local[dim] == 0 {
                return Err(GeometryError::ZeroSize { dim });
            }
            if global[dim] % local[dim] != 0 {
                return Err(GeometryError::NotDivisible { dim, global: global[dim], local: local[dim] });
            }
            g[dim] = global[dim];
            l[dim] = local[dim];
        }
        let geometry = LaunchGeometry { dims, global: g, local: l };
        let items = g.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x));
        match items {
            Some(n) if n <= u64::from(u32::MAX) => Ok(geometry),
            Some(n) => Err(GeometryError::TooLarge(n)),
            None => Err(GeometryError::TooLarge(u64::MAX)),
        }
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn global_sizes(&self) -> &[u64] {
        &self.global[..self.dims]
    }

    pub fn local_sizes(&self) -> &[u64] {
        &self.local[..self.dims]
    }

    pub fn groups_per_dim(&self) -> [u64; 3] {
        [
            self.global[0] / self.local[0],
            self.global[1] / self.local[1],
            self.global[2] / self.local[2],
        ]
    }

    pub fn num_groups(&self) -> u64 {
        self.groups_per_dim().iter().product()
    }

    pub fn group_size(&self) -> u64 {
        self.local.iter().product()
    }

    pub fn total_work_items(&self) -> u64 {
        self.global.iter().product()
    }

    /// Per-dimension work-group index of a flattened group id.
    pub fn group_id(&self, group: u32) -> [u64; 3] {
        unflatten(u64::from(group), self.groups_per_dim())
    }

    /// Per-dimension local id of a flattened local index.
    pub fn local_id(&self, local: u32) -> [u64; 3] {
        unflatten(u64::from(local), self.local)
    }

    /// Per-dimension global id of a work-item.
    pub fn global_id(&self, group: u32, local: u32) -> [u64; 3] {
        let g = self.group_id(group);
        let l = self.local_id(local);
        [
            g[0] * self.local[0] + l[0],
            g[1] * self.local[1] + l[1],
            g[2] * self.local[2] + l[2],
        ]
    }

    pub fn coord(&self, group: u32, local: u32) -> WorkItemCoord {
        let id = self.global_id(group, local);
        WorkItemCoord { group, local, global: flatten(id, self.global) }
    }
}

fn unflatten(index: u64, extent: [u64; 3]) -> [u64; 3] {
    let x = index % extent[0];
    let rest = index / extent[0];
    [x, rest % extent[1], rest / extent[1]]
}

fn flatten(id: [u64; 3], extent: [u64; 3]) -> u64 {
    id[0] + extent[0] * (id[1] + extent[1] * id[2])
}

/// Identity of one work-item: flattened group index, local index within the
/// group, and global index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WorkItemCoord {
    pub group: u32,
    pub local: u32,
    pub global: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(LaunchGeometry::new(&[], &[]), Err(GeometryError::Dimensions(0)));
        assert!(matches!(
            LaunchGeometry::new(&[16, 16], &[16]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        assert!(matches!(LaunchGeometry::new(&[10], &[4]), Err(GeometryError::NotDivisible { .. })));
        assert!(matches!(LaunchGeometry::new(&[0], &[1]), Err(GeometryError::ZeroSize { dim: 0 })));
    }

    #[test]
    fn flattening_is_dimension_zero_fastest() {
        let g = LaunchGeometry::new(&[32, 48], &[16, 16]).unwrap();
        assert_eq!(g.num_groups(), 6);
        assert_eq!(g.group_size(), 256);
        assert_eq!(g.group_id(3), [1, 1, 0]);
        assert_eq!(g.local_id(17), [1, 1, 0]);
        assert_eq!(g.global_id(3, 17), [17, 17, 0]);
        let c = g.coord(3, 17);
        assert_eq!(c.global, 17 + 32 * 17);
    }

    #[test]
    fn local_index_stays_inside_group() {
        let g = LaunchGeometry::new(&[8, 4, 2], &[2, 2, 2]).unwrap();
        for group in 0..g.num_groups() as u32 {
            for local in 0..g.group_size() as u32 {
                let gid = g.global_id(group, local);
                let grp = g.group_id(group);
                for d in 0..3 {
                    assert_eq!(gid[d] / g.local[d], grp[d]);
                }
            }
        }
    }
}
