//! Line-oriented text format for traces.
//!
//! ```text
//! #version 1
//! #dims 2
//! #global 32 32
//! #local 16 16
//! #buffer 0 G 0 4096 4096
//! 0 0 0 0x0 4 L G
//! ```
//!
//! Header lines come first. Each record is
//! `group timestamp local address width kind space` with kind `L`/`S` and
//! space `G`/`L`/`C`. Integers are decimal; addresses and bases may also be
//! written as `0x` hex. Blank lines are ignored.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{
    AccessKind, AddressSpace, BufferDescriptor, BufferId, LaunchGeometry, MemoryAccess, Trace,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header {0}")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl FormatError {
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Syntax { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// A parsed trace plus the 1-based source line of every record, so that
/// validation violations can be reported against the file.
#[derive(Debug)]
pub struct ParsedTrace {
    pub trace: Trace,
    pub record_lines: Vec<usize>,
}

#[derive(Default)]
struct Header {
    dims: Option<usize>,
    global: Option<Vec<u64>>,
    local: Option<Vec<u64>>,
    buffers: Vec<BufferDescriptor>,
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

fn parse_u64(field: &str, line: usize, what: &str, allow_hex: bool) -> Result<u64, FormatError> {
    let parsed = match field.strip_prefix("0x").or_else(|| field.strip_prefix("0X")) {
        Some(hex) if allow_hex => u64::from_str_radix(hex, 16),
        _ => field.parse::<u64>(),
    };
    parsed.map_err(|_| syntax(line, format!("invalid {what} '{field}'")))
}

fn parse_small<T: TryFrom<u64>>(field: &str, line: usize, what: &str) -> Result<T, FormatError> {
    let v = parse_u64(field, line, what, false)?;
    T::try_from(v).map_err(|_| syntax(line, format!("{what} {v} out of range")))
}

fn parse_space(field: &str, line: usize) -> Result<AddressSpace, FormatError> {
    AddressSpace::from_code(field)
        .or_else(|| match field {
            "global" => Some(AddressSpace::Global),
            "local" => Some(AddressSpace::Local),
            "constant" => Some(AddressSpace::Constant),
            _ => None,
        })
        .ok_or_else(|| syntax(line, format!("unknown address space '{field}'")))
}

fn parse_sizes(fields: &[&str], line: usize, what: &str) -> Result<Vec<u64>, FormatError> {
    if fields.is_empty() || fields.len() > 3 {
        return Err(syntax(line, format!("#{what} takes 1 to 3 sizes")));
    }
    fields.iter().map(|f| parse_u64(f, line, what, false)).collect()
}

impl Header {
    fn directive(&mut self, text: &str, line: usize) -> Result<(), FormatError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let (name, args) = fields.split_first().ok_or_else(|| syntax(line, "empty directive"))?;
        match *name {
            "version" => {
                let [v] = args else { return Err(syntax(line, "#version takes one value")) };
                let v: u32 = parse_small(v, line, "version")?;
                if v != FORMAT_VERSION {
                    return Err(syntax(line, format!("unsupported format version {v}")));
                }
            }
            "dims" => {
                let [d] = args else { return Err(syntax(line, "#dims takes one value")) };
                self.dims = Some(parse_small(d, line, "dims")?);
            }
            "global" => self.global = Some(parse_sizes(args, line, "global")?),
            "local" => self.local = Some(parse_sizes(args, line, "local")?),
            "buffer" => {
                let [id, space, base, size, alignment] = args else {
                    return Err(syntax(line, "#buffer takes id space base size alignment"));
                };
                self.buffers.push(BufferDescriptor {
                    id: BufferId(parse_small(id, line, "buffer id")?),
                    space: parse_space(space, line)?,
                    base: parse_u64(base, line, "base", true)?,
                    size: parse_u64(size, line, "size", false)?,
                    alignment: parse_u64(alignment, line, "alignment", false)?,
                });
            }
            other => return Err(syntax(line, format!("unknown directive '#{other}'"))),
        }
        Ok(())
    }

    fn launch(&self, line: usize) -> Result<LaunchGeometry, FormatError> {
        let global = self.global.as_ref().ok_or(FormatError::MissingHeader("#global"))?;
        let local = self.local.as_ref().ok_or(FormatError::MissingHeader("#local"))?;
        let launch = LaunchGeometry::new(global, local).map_err(|e| syntax(line, e.to_string()))?;
        if let Some(d) = self.dims {
            if d != launch.dims() {
                return Err(syntax(line, format!("#dims {d} disagrees with #global")));
            }
        }
        Ok(launch)
    }
}

fn parse_record(text: &str, line: usize) -> Result<MemoryAccess, FormatError> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let [group, timestamp, local, address, width, kind, space] = fields[..] else {
        return Err(syntax(
            line,
            format!("expected 7 fields (group timestamp local address width kind space), got {}", fields.len()),
        ));
    };
    Ok(MemoryAccess {
        group: parse_small(group, line, "group")?,
        timestamp: parse_small(timestamp, line, "timestamp")?,
        local: parse_small(local, line, "local id")?,
        address: parse_u64(address, line, "address", true)?,
        width: parse_small(width, line, "width")?,
        kind: AccessKind::from_code(kind)
            .ok_or_else(|| syntax(line, format!("unknown access kind '{kind}'")))?,
        space: parse_space(space, line)?,
    })
}

/// Parses a trace. Only syntax is checked here; call [`Trace::validate`] for
/// the semantic invariants.
pub fn read_trace<R: BufRead>(reader: R) -> Result<ParsedTrace, FormatError> {
    let mut header = Header::default();
    let mut trace: Option<Trace> = None;
    let mut record_lines = Vec::new();

    for (idx, text) in reader.lines().enumerate() {
        let text = text?;
        let line = idx + 1;
        let body = text.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(directive) = body.strip_prefix('#') {
            if trace.is_some() {
                return Err(syntax(line, "header line after the first record"));
            }
            header.directive(directive, line)?;
            continue;
        }
        let record = parse_record(body, line)?;
        let t = match &mut trace {
            Some(t) => t,
            None => trace.insert(Trace::new(header.launch(line)?, std::mem::take(&mut header.buffers))),
        };
        t.push(record);
        record_lines.push(line);
    }

    let trace = match trace {
        Some(t) => t,
        None => Trace::new(header.launch(0)?, header.buffers),
    };
    Ok(ParsedTrace { trace, record_lines })
}

pub fn write_trace<W: Write>(trace: &Trace, mut out: W) -> io::Result<()> {
    let launch = trace.launch();
    let join = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    writeln!(out, "#version {FORMAT_VERSION}")?;
    writeln!(out, "#dims {}", launch.dims())?;
    writeln!(out, "#global {}", join(launch.global_sizes()))?;
    writeln!(out, "#local {}", join(launch.local_sizes()))?;
    for b in trace.buffers() {
        writeln!(out, "#buffer {} {} {} {} {}", b.id.0, b.space.code(), b.base, b.size, b.alignment)?;
    }
    for a in trace.accesses() {
        writeln!(
            out,
            "{} {} {} {} {} {} {}",
            a.group,
            a.timestamp,
            a.local,
            a.address,
            a.width,
            a.kind.code(),
            a.space.code()
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "#version 1
#dims 1
#global 4
#local 2
#buffer 0 G 0 64 4
#buffer 1 L 0x0 16 4

0 0 0 0x10 4 L G
0 0 1 20 4 L G
0 1 0 0 4 S L
1 0 0 8 4 L G
";

    #[test]
    fn parses_sample() {
        let parsed = read_trace(SAMPLE.as_bytes()).unwrap();
        let t = &parsed.trace;
        assert_eq!(t.len(), 4);
        assert_eq!(t.buffers().len(), 2);
        assert_eq!(t.accesses()[0].address, 16);
        assert_eq!(t.accesses()[2].kind, AccessKind::Store);
        assert_eq!(parsed.record_lines, vec![8, 9, 10, 11]);
        assert_eq!(t.validate(), Ok(()));
    }

    #[test]
    fn round_trips() {
        let parsed = read_trace(SAMPLE.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_trace(&parsed.trace, &mut buf).unwrap();
        let again = read_trace(buf.as_slice()).unwrap();
        assert_eq!(again.trace, parsed.trace);
    }

    #[test]
    fn reports_line_numbers() {
        let bad = SAMPLE.replace("0 0 1 20 4 L G", "0 0 1 zz 4 L G");
        let err = read_trace(bad.as_bytes()).unwrap_err();
        assert_eq!(err.line(), Some(9));
        assert!(err.to_string().contains("address"));

        let short = SAMPLE.replace("1 0 0 8 4 L G", "1 0 0 8 4 L");
        assert_eq!(read_trace(short.as_bytes()).unwrap_err().line(), Some(11));
    }

    #[test]
    fn rejects_bad_headers() {
        let err = read_trace("#version 2\n".as_bytes()).unwrap_err();
        assert_eq!(err.line(), Some(1));
        let err = read_trace("#global 4\n#local 2\n#frobnicate\n".as_bytes()).unwrap_err();
        assert_eq!(err.line(), Some(3));
        assert!(matches!(
            read_trace("#local 2\n0 0 0 0 4 L G\n".as_bytes()),
            Err(FormatError::MissingHeader("#global"))
        ));
        let late = format!("{SAMPLE}#buffer 2 G 128 4 4\n");
        assert_eq!(read_trace(late.as_bytes()).unwrap_err().line(), Some(12));
    }

    #[test]
    fn header_only_trace_is_empty() {
        let parsed = read_trace("#dims 2\n#global 4 4\n#local 2 2\n".as_bytes()).unwrap();
        assert!(parsed.trace.is_empty());
        assert_eq!(parsed.trace.launch().num_groups(), 4);
    }
}
