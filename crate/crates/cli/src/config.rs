//! Layering of defaults, configuration file and flags into one run
//! configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use parloc_core::sim::{KernelId, KernelSpec, DEFAULT_TRACE_CAP};

use crate::args::{Format, KernelArgs, OutputArgs};
use crate::error::CliError;

/// Keys that configure the tool rather than a kernel.
const CONTROL_KEYS: &[&str] = &["kernel", "trace", "format", "out", "meta", "emit_trace", "cap", "label"];

/// Parses `key = value` lines. Dashes in keys are read as underscores.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", idx + 1))?;
        let key = key.trim().replace('-', "_");
        if key.is_empty() {
            return Err(format!("line {}: empty key", idx + 1));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|msg| CliError::Usage(format!("{}: {msg}", path.display())))
}

/// Where a report's trace comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Kernel(KernelSpec),
    Trace(PathBuf),
}

/// Fully resolved settings for `run`, `analyze` and `plotdat`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub meta: bool,
    pub emit_trace: Option<PathBuf>,
    pub cap: u64,
    pub label: Option<String>,
}

/// Settings collected from the config file and then the flags, later
/// layers replacing earlier ones key by key.
#[derive(Debug, Clone, Default)]
pub struct Layers {
    values: BTreeMap<String, String>,
}

impl Layers {
    pub fn from_file(path: Option<&Path>) -> Result<Self, CliError> {
        let values = match path {
            Some(p) => load_config(p)?,
            None => BTreeMap::new(),
        };
        Ok(Layers { values })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn apply_kernel_args(&mut self, args: &KernelArgs) -> Result<(), CliError> {
        self.set_opt("kernel", args.kernel.as_ref());
        self.set_opt("n", args.n);
        self.set_opt("tile", args.tile);
        self.set_opt("align", args.align);
        self.set_opt("seed", args.seed);
        self.set_opt("cap", args.cap);
        for p in &args.params {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--param expects KEY=VALUE, got '{p}'")))?;
            self.set(&k.trim().replace('-', "_"), v.trim());
        }
        Ok(())
    }

    pub fn apply_output_args(&mut self, args: &OutputArgs) {
        if let Some(f) = args.format {
            let name = match f {
                Format::Json => "json",
                Format::Csv => "csv",
                Format::Plotdat => "plotdat",
            };
            self.set("format", name);
        }
        self.set_opt("out", args.out.as_ref().map(|p| p.display().to_string()));
        if args.meta {
            self.set("meta", "true");
        }
    }

    fn number(key: &str, value: &str) -> Result<u64, CliError> {
        value
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("{key} must be a non-negative integer, got '{value}'")))
    }

    /// Interprets the merged settings.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let get = |k: &str| self.values.get(k).map(String::as_str);
        let params: BTreeMap<String, u64> = self
            .values
            .iter()
            .filter(|(k, _)| !CONTROL_KEYS.contains(&k.as_str()))
            .map(|(k, v)| Ok((k.clone(), Self::number(k, v)?)))
            .collect::<Result<_, CliError>>()?;

        let source = match (get("kernel"), get("trace")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("give either a kernel or a trace file, not both".into()))
            }
            (None, None) => return Err(CliError::Usage("no input: give --kernel or --trace".into())),
            (Some(name), None) => {
                let kernel: KernelId = name.parse().map_err(|e| CliError::Usage(format!("{e}; see `parloc list`")))?;
                Source::Kernel(KernelSpec::new(kernel, &params)?)
            }
            (None, Some(path)) => {
                if let Some(k) = params.keys().next() {
                    return Err(CliError::Usage(format!("kernel parameter '{k}' given for a trace file")));
                }
                Source::Trace(PathBuf::from(path))
            }
        };
        let format = match get("format") {
            Some(f) => f.parse::<Format>().map_err(|_| CliError::Usage(format!("unknown format '{f}'")))?,
            None => Format::Json,
        };
        let meta = match get("meta") {
            None | Some("false") => false,
            Some("true") => true,
            Some(other) => return Err(CliError::Usage(format!("meta must be true or false, got '{other}'"))),
        };
        let cap = match get("cap") {
            Some(v) => Self::number("cap", v)?,
            None => DEFAULT_TRACE_CAP,
        };
        Ok(RunConfig {
            source,
            format,
            out: get("out").map(PathBuf::from),
            meta,
            emit_trace: get("emit_trace").map(PathBuf::from),
            cap,
            label: get("label").map(str::to_string),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_dashes() {
        let m = parse_config("# run\nkernel = simple\nemit-trace=out.trace # inline\n\nn=64\n").unwrap();
        assert_eq!(m["kernel"], "simple");
        assert_eq!(m["emit_trace"], "out.trace");
        assert_eq!(m["n"], "64");
        assert!(parse_config("kernel simple").unwrap_err().contains("line 1"));
    }

    #[test]
    fn flags_override_file_and_file_overrides_defaults() {
        let mut layers = Layers { values: parse_config("kernel=coalescedAB\nn=64\ntile=8\n").unwrap() };
        let args = KernelArgs { n: Some(32), ..Default::default() };
        layers.apply_kernel_args(&args).unwrap();
        let cfg = layers.resolve().unwrap();
        let Source::Kernel(spec) = cfg.source else { panic!("kernel source expected") };
        assert_eq!(spec.kernel, KernelId::MatMulCoalescedAB);
        assert_eq!(spec.param("n"), 32);
        assert_eq!(spec.param("tile"), 8);
        assert_eq!(spec.param("align"), 4096);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.cap, DEFAULT_TRACE_CAP);
    }

    #[test]
    fn rejects_ambiguous_or_missing_input() {
        let mut both = Layers::default();
        both.set("kernel", "simple");
        both.set("trace", "t.trace");
        assert!(matches!(both.resolve(), Err(CliError::Usage(_))));
        assert!(matches!(Layers::default().resolve(), Err(CliError::Usage(_))));
        let mut bad = Layers::default();
        bad.set("kernel", "simple");
        bad.set("n", "-3");
        assert!(matches!(bad.resolve(), Err(CliError::Usage(_))));
    }
}
