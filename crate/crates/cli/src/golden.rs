//! Reference values for 256 x 256 matrix multiplication and the checks that
//! compare a report against them.

use std::fmt;

use parloc_core::metrics::MetricReport;
use parloc_core::sim::KernelId;

/// Matrix order of the reference measurements.
pub const GOLDEN_N: u64 = 256;
/// Tolerance for entropies in the table, in bits.
pub const ENTROPY_TOLERANCE: f64 = 0.05;
/// Tolerance for fractions in the table.
pub const FRACTION_TOLERANCE: f64 = 0.01;
/// Tolerance for parallel spatial locality curve points, in bits.
pub const CURVE_TOLERANCE: f64 = 0.02;

/// One column of the reference metric table.
#[derive(Debug, Clone, Copy)]
pub struct TableColumn {
    pub kernel: KernelId,
    pub total_footprint: u64,
    pub footprint90: u64,
    pub gmae: f64,
    pub lmae_3: f64,
    pub lmae_10: f64,
    pub relative_local_usage: f64,
}

pub const TABLE: [TableColumn; 5] = [
    TableColumn {
        kernel: KernelId::MatMulSimple,
        total_footprint: 196608,
        footprint90: 118196,
        gmae: 17.02,
        lmae_3: 16.02,
        lmae_10: 9.02,
        relative_local_usage: 0.0,
    },
    TableColumn {
        kernel: KernelId::MatMulCoalescedA,
        total_footprint: 196608,
        footprint90: 56176,
        gmae: 13.18,
        lmae_3: 12.18,
        lmae_10: 5.18,
        relative_local_usage: 0.50,
    },
    TableColumn {
        kernel: KernelId::MatMulCoalescedAB,
        total_footprint: 196608,
        footprint90: 489,
        gmae: 9.78,
        lmae_3: 8.78,
        lmae_10: 1.78,
        relative_local_usage: 0.94,
    },
    TableColumn {
        kernel: KernelId::MatMulCoalescedABT,
        total_footprint: 196608,
        footprint90: 489,
        gmae: 9.78,
        lmae_3: 8.78,
        lmae_10: 1.78,
        relative_local_usage: 0.94,
    },
    TableColumn {
        kernel: KernelId::MatMulAlignedABT,
        total_footprint: 196608,
        footprint90: 489,
        gmae: 9.78,
        lmae_3: 8.78,
        lmae_10: 1.78,
        relative_local_usage: 0.94,
    },
];

/// Plotted parallel spatial locality for `n = 0..=10` bits dropped.
pub const FIGURE: [(KernelId, [f64; 11]); 5] = [
    (
        KernelId::MatMulSimple,
        [3.987, 3.987, 3.987, 3.49, 2.992, 2.494, 1.996, 1.996, 1.996, 1.996, 1.996],
    ),
    (
        KernelId::MatMulCoalescedA,
        [3.952, 3.952, 3.952, 3.459, 2.965, 2.472, 1.979, 1.506, 1.033, 0.5598, 0.08691],
    ),
    (
        KernelId::MatMulCoalescedAB,
        [4.145, 4.145, 4.145, 3.628, 3.11, 2.598, 2.075, 1.603, 1.13, 0.6579, 0.1854],
    ),
    (
        KernelId::MatMulCoalescedABT,
        [4.145, 4.145, 4.145, 3.2, 2.254, 1.308, 0.3621, 0.318, 0.2738, 0.2296, 0.1854],
    ),
    (
        KernelId::MatMulAlignedABT,
        [4.145, 4.145, 4.145, 3.2, 2.254, 1.308, 0.3621, 0.318, 0.2738, 0.2296, 0.1854],
    ),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Count(u64),
    Bits(f64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Count(c) => write!(f, "{c}"),
            Value::Bits(b) => write!(f, "{b:.4}"),
        }
    }
}

/// Outcome of comparing one reported value with its reference counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub kernel: KernelId,
    pub metric: String,
    pub expected: Value,
    pub actual: Value,
    /// Allowed absolute difference; 0 means exact.
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn exact(kernel: KernelId, metric: &str, expected: u64, actual: u64) -> Self {
        Check {
            kernel,
            metric: metric.to_string(),
            expected: Value::Count(expected),
            actual: Value::Count(actual),
            tolerance: 0.0,
            pass: expected == actual,
        }
    }

    fn within(kernel: KernelId, metric: String, expected: f64, actual: f64, tolerance: f64) -> Self {
        Check {
            kernel,
            metric,
            expected: Value::Bits(expected),
            actual: Value::Bits(actual),
            tolerance,
            // a small epsilon keeps values printed at the boundary on the passing side
            pass: (expected - actual).abs() <= tolerance + 1e-12,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} {}: got {} expected {}", self.kernel, self.metric, self.actual, self.expected)?;
        if self.tolerance > 0.0 {
            write!(f, " (tolerance {})", self.tolerance)?;
        }
        Ok(())
    }
}

pub fn table_column(kernel: KernelId) -> Option<&'static TableColumn> {
    TABLE.iter().find(|c| c.kernel == kernel)
}

pub fn figure_series(kernel: KernelId) -> Option<&'static [f64; 11]> {
    FIGURE.iter().find(|(k, _)| *k == kernel).map(|(_, s)| s)
}

/// The six table cells for one kernel.
pub fn table_checks(kernel: KernelId, report: &MetricReport) -> Vec<Check> {
    let Some(col) = table_column(kernel) else { return Vec::new() };
    vec![
        Check::exact(kernel, "total_footprint", col.total_footprint, report.total_footprint),
        Check::exact(kernel, "footprint90", col.footprint90, report.footprint90),
        Check::within(kernel, "gmae".into(), col.gmae, report.gmae, ENTROPY_TOLERANCE),
        Check::within(kernel, "lmae_3".into(), col.lmae_3, report.lmae[3], ENTROPY_TOLERANCE),
        Check::within(kernel, "lmae_10".into(), col.lmae_10, report.lmae[10], ENTROPY_TOLERANCE),
        Check::within(
            kernel,
            "relative_local_usage".into(),
            col.relative_local_usage,
            report.relative_local_usage,
            FRACTION_TOLERANCE,
        ),
    ]
}

/// The eleven curve points for one kernel.
pub fn figure_checks(kernel: KernelId, report: &MetricReport) -> Vec<Check> {
    let Some(series) = figure_series(kernel) else { return Vec::new() };
    series
        .iter()
        .zip(report.parallel_spatial_locality)
        .enumerate()
        .map(|(n, (&expected, actual))| Check::within(kernel, format!("psl_{n}"), expected, actual, CURVE_TOLERANCE))
        .collect()
}

/// coalescedABT and alignedABT must report identical curves.
pub fn identity_check(coalesced: &MetricReport, aligned: &MetricReport) -> Check {
    let worst = coalesced
        .parallel_spatial_locality
        .iter()
        .zip(aligned.parallel_spatial_locality)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Check {
        kernel: KernelId::MatMulAlignedABT,
        metric: "psl series identical to coalescedABT".into(),
        expected: Value::Bits(0.0),
        actual: Value::Bits(worst),
        tolerance: 0.0,
        pass: coalesced.parallel_spatial_locality == aligned.parallel_spatial_locality,
    }
}
