use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use parloc_core::metrics::{compute_report, MetricReport, CURVE_LEN};
use parloc_core::sim::{list_kernels, run_kernel_capped, KernelId, KernelSpec};
use parloc_core::trace::{read_trace, write_trace, Trace};

use crate::args::{AnalyzeArgs, Format, ListArgs, PlotArgs, RunArgs, VerifyArgs};
use crate::config::{Layers, RunConfig, Source};
use crate::error::CliError;
use crate::golden::{self, Check, GOLDEN_N};

/// Violations listed in full before the rest are summarized.
const MAX_LISTED_VIOLATIONS: usize = 20;

fn stdout_err(e: io::Error) -> CliError {
    CliError::io(Path::new("<stdout>"), e)
}

pub fn run(args: &RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut layers = Layers::from_file(args.output.config.as_deref())?;
    layers.apply_kernel_args(&args.kernel)?;
    layers.apply_output_args(&args.output);
    layers.set_opt("emit_trace", args.emit_trace.as_ref().map(|p| p.display().to_string()));
    let cfg = layers.resolve()?;
    if !matches!(cfg.source, Source::Kernel(_)) {
        return Err(CliError::Usage("run simulates a built-in kernel; use analyze for trace files".into()));
    }
    let (report, label) = report_for(&cfg)?;
    emit_report(&cfg, &report, &label, out)
}

pub fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut layers = Layers::from_file(args.output.config.as_deref())?;
    layers.set_opt("trace", args.trace.as_ref().map(|p| p.display().to_string()));
    layers.apply_output_args(&args.output);
    let cfg = layers.resolve()?;
    if !matches!(cfg.source, Source::Trace(_)) {
        return Err(CliError::Usage("analyze reads a trace file; use run for built-in kernels".into()));
    }
    let (report, label) = report_for(&cfg)?;
    emit_report(&cfg, &report, &label, out)
}

pub fn plotdat(args: &PlotArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut layers = Layers::from_file(args.config.as_deref())?;
    layers.apply_kernel_args(&args.kernel)?;
    layers.set_opt("trace", args.trace.as_ref().map(|p| p.display().to_string()));
    layers.set_opt("out", args.out.as_ref().map(|p| p.display().to_string()));
    layers.set_opt("label", args.label.as_ref());
    let cfg = layers.resolve()?;
    let (report, label) = report_for(&cfg)?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    for path in write_plot_files(&dir, &label, &report)? {
        writeln!(out, "{}", path.display()).map_err(stdout_err)?;
    }
    Ok(())
}

pub fn list(args: &ListArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kernels = list_kernels();
    if args.json {
        let text = serde_json::to_string_pretty(&kernels).expect("catalogue serializes");
        writeln!(out, "{text}").map_err(stdout_err)?;
        return Ok(());
    }
    for k in kernels {
        let params: Vec<String> = k.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
        writeln!(out, "{:<13} {}", k.name, k.description).map_err(stdout_err)?;
        writeln!(out, "{:<13} params: {}", "", params.join(" ")).map_err(stdout_err)?;
    }
    Ok(())
}

/// Runs the five matrix-multiply kernels at the reference size and compares
/// every table cell and curve point.
pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut overrides = BTreeMap::from([("n".to_string(), GOLDEN_N)]);
    if let Some(t) = args.tile {
        overrides.insert("tile".into(), t);
    }
    if let Some(a) = args.align {
        overrides.insert("align".into(), a);
    }
    let mut reports = Vec::new();
    for kernel in KernelId::MATMUL {
        let spec = KernelSpec::new(kernel, &overrides)?;
        let trace = run_kernel_capped(&spec, u64::MAX)?;
        let report = compute_report(&trace).map_err(|source| CliError::Metric { path: kernel.name().into(), source })?;
        drop(trace);
        reports.push((kernel, report));
    }
    let checks = verification_checks(&reports);
    write_verification(&checks, &overrides, out).map_err(stdout_err)?;
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        Err(CliError::VerifyFailed { failed, total: checks.len() })
    } else {
        Ok(())
    }
}

/// All table, curve and identity checks for a set of matrix-multiply reports.
pub fn verification_checks(reports: &[(KernelId, MetricReport)]) -> Vec<Check> {
    let mut checks = Vec::new();
    for (k, r) in reports {
        checks.extend(golden::table_checks(*k, r));
    }
    for (k, r) in reports {
        checks.extend(golden::figure_checks(*k, r));
    }
    let find = |k: KernelId| reports.iter().find(|(id, _)| *id == k).map(|(_, r)| r);
    if let (Some(c), Some(a)) = (find(KernelId::MatMulCoalescedABT), find(KernelId::MatMulAlignedABT)) {
        checks.push(golden::identity_check(c, a));
    }
    checks
}

fn write_verification(checks: &[Check], params: &BTreeMap<String, u64>, out: &mut dyn Write) -> io::Result<()> {
    let settings: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    writeln!(out, "verification ({})", settings.join(" "))?;
    let kernels = KernelId::MATMUL;
    let (cells, identities): (Vec<&Check>, Vec<&Check>) =
        checks.iter().partition(|c| !c.metric.contains("identical"));
    let mut metrics: Vec<&str> = Vec::new();
    for c in &cells {
        if !metrics.contains(&c.metric.as_str()) {
            metrics.push(&c.metric);
        }
    }
    write!(out, "{:<22}", "metric")?;
    for k in kernels {
        write!(out, " {:>21}", k.name())?;
    }
    writeln!(out)?;
    for m in metrics {
        write!(out, "{m:<22}")?;
        for k in kernels {
            let cell = match cells.iter().find(|c| c.kernel == k && c.metric == m) {
                Some(c) => {
                    let mark = if c.pass { "ok" } else { "FAIL" };
                    format!("{} {} {mark}", c.actual, c.expected)
                }
                None => "-".to_string(),
            };
            write!(out, " {cell:>21}")?;
        }
        writeln!(out)?;
    }
    for c in identities {
        writeln!(out, "{c}")?;
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    if !failed.is_empty() {
        writeln!(out, "failures:")?;
        for c in &failed {
            writeln!(out, "  {c}")?;
        }
    }
    writeln!(out, "{} of {} checks passed", checks.len() - failed.len(), checks.len())
}

/// Produces the trace for `cfg`, writes it out if asked, and measures it.
fn report_for(cfg: &RunConfig) -> Result<(MetricReport, String), CliError> {
    let (trace, label, origin) = match &cfg.source {
        Source::Kernel(spec) => {
            let trace = run_kernel_capped(spec, cfg.cap)?;
            if let Some(path) = &cfg.emit_trace {
                let file = File::create(path).map_err(|e| CliError::io(path, e))?;
                write_trace(&trace, BufWriter::new(file)).map_err(|e| CliError::io(path, e))?;
            }
            let origin = PathBuf::from(spec.kernel.name());
            (trace, spec.kernel.name().to_string(), origin)
        }
        Source::Trace(path) => {
            let trace = load_trace(path)?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "trace".into());
            (trace, stem, path.clone())
        }
    };
    let mut report = compute_report(&trace).map_err(|source| CliError::Metric { path: origin, source })?;
    if cfg.meta {
        report.meta = Some(meta(&cfg.source));
    }
    Ok((report, cfg.label.clone().unwrap_or(label)))
}

/// Reads and validates a trace file.
pub fn load_trace(path: &Path) -> Result<Trace, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let parsed = read_trace(BufReader::new(file)).map_err(|source| CliError::Parse { path: path.into(), source })?;
    if let Err(violations) = parsed.trace.validate() {
        let mut details: Vec<String> = violations
            .iter()
            .take(MAX_LISTED_VIOLATIONS)
            .map(|v| format!("line {}: {v}", parsed.record_lines[v.record()]))
            .collect();
        if violations.len() > MAX_LISTED_VIOLATIONS {
            details.push(format!("... and {} more", violations.len() - MAX_LISTED_VIOLATIONS));
        }
        return Err(CliError::Invalid { path: path.into(), count: violations.len(), details });
    }
    Ok(parsed.trace)
}

fn meta(source: &Source) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("tool".into(), format!("parloc {}", env!("CARGO_PKG_VERSION")));
    match source {
        Source::Kernel(spec) => {
            m.insert("kernel".into(), spec.kernel.name().into());
            let params: Vec<String> = spec.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            m.insert("params".into(), params.join(","));
        }
        Source::Trace(path) => {
            m.insert("trace".into(), path.display().to_string());
        }
    }
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    m.insert("generated_unix_seconds".into(), now.to_string());
    m
}

fn emit_report(cfg: &RunConfig, report: &MetricReport, label: &str, out: &mut dyn Write) -> Result<(), CliError> {
    if cfg.format == Format::Plotdat {
        return match &cfg.out {
            Some(dir) => {
                for path in write_plot_files(dir, label, report)? {
                    writeln!(out, "{}", path.display()).map_err(stdout_err)?;
                }
                Ok(())
            }
            None => write_plot_blocks(report, label, out).map_err(stdout_err),
        };
    }
    let mut bytes = Vec::new();
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut bytes, report).expect("report serializes");
            bytes.push(b'\n');
        }
        Format::Csv => MetricReport::write_csv(&[report], &mut bytes).expect("csv to memory"),
        Format::Plotdat => unreachable!(),
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::io(path, e)),
        None => out.write_all(&bytes).map_err(stdout_err),
    }
}

fn curves(report: &MetricReport) -> [(&'static str, &[f64; CURVE_LEN]); 2] {
    [("lmae", &report.lmae), ("psl", &report.parallel_spatial_locality)]
}

fn write_curve(curve: &[f64; CURVE_LEN], out: &mut dyn Write) -> io::Result<()> {
    for (n, v) in curve.iter().enumerate() {
        writeln!(out, "{n} {v}")?;
    }
    Ok(())
}

/// Writes `<label>.lmae.dat` and `<label>.psl.dat` into `dir`.
pub fn write_plot_files(dir: &Path, label: &str, report: &MetricReport) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for (name, curve) in curves(report) {
        let path = dir.join(format!("{label}.{name}.dat"));
        let mut w = BufWriter::new(File::create(&path).map_err(|e| CliError::io(&path, e))?);
        write_curve(curve, &mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Both curves on stdout as blank-line separated blocks.
fn write_plot_blocks(report: &MetricReport, label: &str, out: &mut dyn Write) -> io::Result<()> {
    for (i, (name, curve)) in curves(report).into_iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        writeln!(out, "# {label} {name}")?;
        write_curve(curve, out)?;
    }
    Ok(())
}
