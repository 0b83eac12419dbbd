use std::collections::{BTreeMap, HashMap};

use parloc_core::metrics::parallel_spatial_locality;
use parloc_core::sim::{
    access_count, list_kernels, run_kernel, run_kernel_capped, KernelId, KernelSpec, SimError,
};
use parloc_core::trace::{AccessKind, AddressSpace, Trace};

fn spec(kernel: KernelId, params: &[(&str, u64)]) -> KernelSpec {
    let params: BTreeMap<String, u64> = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    KernelSpec::new(kernel, &params).unwrap()
}

/// Small instance of every kernel.
fn small(kernel: KernelId) -> KernelSpec {
    match kernel {
        k if k.is_matmul() => spec(k, &[("n", 32), ("tile", 8)]),
        KernelId::NeedlemanWunschWavefront => spec(kernel, &[("n", 64), ("wg", 16)]),
        KernelId::CsrSpmv => spec(kernel, &[("n", 128), ("cols", 4096), ("max_row", 12), ("wg", 32)]),
        _ => spec(kernel, &[("n", 128), ("atoms", 16), ("wg", 32)]),
    }
}

/// Addresses of each (group, timestamp) cell.
fn cells(trace: &Trace) -> BTreeMap<(u32, u32), Vec<u64>> {
    let mut m: BTreeMap<(u32, u32), Vec<u64>> = BTreeMap::new();
    for a in trace.accesses() {
        m.entry((a.group, a.timestamp)).or_default().push(a.address);
    }
    m
}

#[test]
fn every_kernel_is_valid_deterministic_and_counted() {
    for info in list_kernels() {
        let s = small(info.id);
        let t = run_kernel(&s).unwrap();
        assert_eq!(t.validate(), Ok(()), "{}", info.name);
        assert!(t.is_canonical());
        assert_eq!(t.len() as u64, access_count(&s), "{}", info.name);
        assert_eq!(t, run_kernel(&s).unwrap(), "{} not deterministic", info.name);
    }
}

#[test]
fn simple_access_count_is_two_n_cubed_plus_n_squared() {
    let count = |n: u64| 2 * n * n * n + n * n;
    for n in [16, 32, 48] {
        let t = run_kernel(&spec(KernelId::MatMulSimple, &[("n", n)])).unwrap();
        assert_eq!(t.len() as u64, count(n));
    }
    assert_eq!(access_count(&spec(KernelId::MatMulSimple, &[("n", 256)])), 33_619_968);
}

#[test]
fn simple_single_group_cells() {
    let t = run_kernel(&spec(KernelId::MatMulSimple, &[("n", 16), ("tile", 16)])).unwrap();
    let cells = cells(&t);
    assert_eq!(cells.len(), 2 * 16 + 1);
    let last = *cells.keys().last().unwrap();
    for (key, addrs) in &cells {
        let mut mult: HashMap<u64, usize> = HashMap::new();
        for &a in addrs {
            *mult.entry(a).or_default() += 1;
        }
        if *key == last {
            assert_eq!(mult.len(), 256);
            assert!(mult.values().all(|&m| m == 1));
        } else {
            assert_eq!(mult.len(), 16);
            assert!(mult.values().all(|&m| m == 16));
        }
    }
}

#[test]
fn matmul_stores_cover_c_exactly_once() {
    for k in KernelId::MATMUL {
        let n = 32;
        let t = run_kernel(&small(k)).unwrap();
        let c = t.buffers().iter().filter(|b| b.space == AddressSpace::Global).nth(2).unwrap().clone();
        let mut stores: Vec<u64> = t
            .accesses()
            .iter()
            .filter(|a| a.kind == AccessKind::Store && a.space == AddressSpace::Global)
            .map(|a| a.address)
            .collect();
        stores.sort_unstable();
        let expected: Vec<u64> = (0..n * n).map(|i| c.base + 4 * i).collect();
        assert_eq!(stores, expected, "{k}");
    }
}

#[test]
fn matmul_cells_are_full_groups() {
    for k in KernelId::MATMUL {
        let t = run_kernel(&small(k)).unwrap();
        assert!(cells(&t).values().all(|v| v.len() == 64), "{k}");
    }
}

#[test]
fn aligned_and_coalesced_abt_traces_are_identical() {
    for n in [32, 64] {
        let a = run_kernel(&spec(KernelId::MatMulAlignedABT, &[("n", n)])).unwrap();
        let b = run_kernel(&spec(KernelId::MatMulCoalescedABT, &[("n", n)])).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn abt_variants_match_under_any_alignment() {
    for align in [4, 32, 64, 1 << 16] {
        let a = run_kernel(&spec(KernelId::MatMulAlignedABT, &[("n", 32), ("align", align)])).unwrap();
        let b = run_kernel(&spec(KernelId::MatMulCoalescedABT, &[("n", 32), ("align", align)])).unwrap();
        assert_eq!(a, b, "align {align}");
    }
}

#[test]
fn transposed_tiles_differ_only_in_local_indexing() {
    let ab = run_kernel(&small(KernelId::MatMulCoalescedAB)).unwrap();
    let abt = run_kernel(&small(KernelId::MatMulCoalescedABT)).unwrap();
    assert_eq!(ab.len(), abt.len());
    for (x, y) in ab.accesses().iter().zip(abt.accesses()) {
        assert_eq!((x.group, x.local, x.timestamp, x.space), (y.group, y.local, y.timestamp, y.space));
        if x.space == AddressSpace::Global {
            assert_eq!(x.address, y.address);
        }
    }
}

#[test]
fn gem_atom_loads_are_broadcasts() {
    let t = run_kernel(&small(KernelId::GemBroadcast)).unwrap();
    let atoms = &t.buffers()[1];
    let mut atom_cells = 0;
    for addrs in cells(&t).values() {
        if atoms.contains(addrs[0]) {
            atom_cells += 1;
            assert_eq!(addrs.len(), 32);
            assert!(addrs.iter().all(|&a| a == addrs[0]));
        }
    }
    assert_eq!(atom_cells, (128 / 32) * 16 * 4);
}

#[test]
fn nw_wavefront_addresses_are_over_a_kib_apart() {
    let t = run_kernel(&spec(KernelId::NeedlemanWunschWavefront, &[("n", 1024), ("wg", 16)])).unwrap();
    for addrs in cells(&t).values() {
        for (i, a) in addrs.iter().enumerate() {
            for b in &addrs[i + 1..] {
                assert!(a.abs_diff(*b) > 1 << 10);
            }
        }
    }
    let psl = parallel_spatial_locality(&t).unwrap();
    assert!(psl.iter().all(|&v| v == psl[0]));
}

#[test]
fn csr_rows_diverge() {
    let t = run_kernel(&small(KernelId::CsrSpmv)).unwrap();
    let sizes: Vec<usize> = cells(&t).values().map(Vec::len).collect();
    assert!(sizes.iter().any(|&s| s < 32));
    assert!(sizes.iter().all(|&s| (1..=32).contains(&s)));
}

#[test]
fn tile_size_sets_the_simple_plateau() {
    // every load cell holds tile distinct addresses tile times each
    let t = run_kernel(&spec(KernelId::MatMulSimple, &[("n", 64), ("tile", 8)])).unwrap();
    let psl = parallel_spatial_locality(&t).unwrap();
    let loads = 2.0 * 64.0;
    let expected = (loads * 3.0 + 6.0) / (loads + 1.0);
    assert!((psl[0] - expected).abs() < 1e-12);
}

#[test]
fn cap_is_enforced_before_running() {
    let big = spec(KernelId::MatMulSimple, &[("n", 2048)]);
    assert!(matches!(run_kernel(&big), Err(SimError::CapExceeded { .. })));
    let s = small(KernelId::MatMulSimple);
    let exact = access_count(&s);
    assert!(run_kernel_capped(&s, exact).is_ok());
    assert_eq!(
        run_kernel_capped(&s, exact - 1),
        Err(SimError::CapExceeded { records: exact, cap: exact - 1 })
    );
}
