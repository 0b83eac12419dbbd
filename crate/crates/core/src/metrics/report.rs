use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

use crate::trace::{AddressSpace, LaunchGeometry, Trace};

use super::footprint::SortedAddresses;
use super::histogram::CURVE_LEN;
use super::{parallel_spatial_locality, relative_local_usage, MetricError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AccessCounts {
    pub global: u64,
    pub local: u64,
    pub constant: u64,
    pub total: u64,
}

impl AccessCounts {
    pub fn of(trace: &Trace) -> Self {
        let mut c = AccessCounts::default();
        for a in trace.accesses() {
            match a.space {
                AddressSpace::Global => c.global += 1,
                AddressSpace::Local => c.local += 1,
                AddressSpace::Constant => c.constant += 1,
                AddressSpace::Private => continue,
            }
            c.total += 1;
        }
        c
    }
}

/// Every memory metric for one kernel invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub total_footprint: u64,
    pub footprint90: u64,
    /// Global memory address entropy, equal to `lmae[0]`.
    pub gmae: f64,
    /// Address entropy with `n` low bits dropped, `n = 0..=10`.
    pub lmae: [f64; CURVE_LEN],
    pub relative_local_usage: f64,
    pub parallel_spatial_locality: [f64; CURVE_LEN],
    pub access_counts: AccessCounts,
    pub launch: LaunchGeometry,
    /// Free-form run information. Left empty unless the caller asks for it,
    /// so that reports stay byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<BTreeMap<String, String>>,
}

pub fn compute_report(trace: &Trace) -> Result<MetricReport, MetricError> {
    let sorted = SortedAddresses::new(trace)?;
    let lmae = sorted.lmae_curve();
    let report = MetricReport {
        total_footprint: sorted.total_footprint(),
        footprint90: sorted.footprint90(),
        gmae: lmae[0],
        lmae,
        relative_local_usage: relative_local_usage(trace)?,
        parallel_spatial_locality: {
            drop(sorted);
            parallel_spatial_locality(trace)?
        },
        access_counts: AccessCounts::of(trace),
        launch: trace.launch().clone(),
        meta: None,
    };
    Ok(report)
}

impl MetricReport {
    /// CSV column names: scalars, then `lmae_0..lmae_10` and `psl_0..psl_10`,
    /// then access counts.
    pub fn csv_header() -> Vec<String> {
        let mut h: Vec<String> =
            ["total_footprint", "footprint90", "gmae"].iter().map(|s| s.to_string()).collect();
        h.extend((0..CURVE_LEN).map(|n| format!("lmae_{n}")));
        h.push("relative_local_usage".into());
        h.extend((0..CURVE_LEN).map(|n| format!("psl_{n}")));
        h.extend(
            ["global_accesses", "local_accesses", "constant_accesses", "total_accesses"]
                .iter()
                .map(|s| s.to_string()),
        );
        h
    }

    pub fn csv_record(&self) -> Vec<String> {
        let mut r = vec![
            self.total_footprint.to_string(),
            self.footprint90.to_string(),
            self.gmae.to_string(),
        ];
        r.extend(self.lmae.iter().map(f64::to_string));
        r.push(self.relative_local_usage.to_string());
        r.extend(self.parallel_spatial_locality.iter().map(f64::to_string));
        let c = &self.access_counts;
        r.extend([c.global, c.local, c.constant, c.total].iter().map(u64::to_string));
        r
    }

    /// Writes a header and one row per report.
    pub fn write_csv<W: io::Write>(reports: &[&MetricReport], out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(Self::csv_header())?;
        for r in reports {
            w.write_record(r.csv_record())?;
        }
        w.flush()?;
        Ok(())
    }
}
