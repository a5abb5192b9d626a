//! svmlight / libsvm ranking text format.
//!
//! ```text
//! <target> [qid:<int>] <index>:<value> <index>:<value> ... [# comment]
//! ```
//!
//! Feature indices are 1-based in the file and strictly increasing within a
//! line. Either every example line carries a `qid` or none does.

use std::io::{BufRead, Write};

use super::{Dataset, SparseMatrix, ViewMode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Declared feature dimension; must cover every index in the file.
    /// Without it the dimension is the largest index seen.
    pub dims: Option<usize>,
    pub mode: ViewMode,
}

pub fn parse_svmlight_str(text: &str, opts: ParseOptions) -> Result<Dataset> {
    parse_svmlight(text.as_bytes(), opts)
}

pub fn parse_svmlight<R: BufRead>(reader: R, opts: ParseOptions) -> Result<Dataset> {
    let mut columns: Vec<Vec<(u32, f64)>> = Vec::new();
    let mut y = Vec::new();
    let mut qids: Vec<u64> = Vec::new();
    let mut has_qid: Option<bool> = None;
    let mut max_index = 0usize;

    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        let content = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let mut tokens = content.split_whitespace().peekable();
        let Some(target) = tokens.next() else {
            continue;
        };
        let target = parse_real(target, lineno, "target")?;

        let qid = match tokens.peek() {
            Some(tok) if tok.starts_with("qid:") => {
                let v = tok["qid:".len()..]
                    .parse::<u64>()
                    .map_err(|_| Error::parse(lineno, format!("bad qid token {tok:?}")))?;
                tokens.next();
                Some(v)
            }
            _ => None,
        };
        match (has_qid, qid.is_some()) {
            (None, q) => has_qid = Some(q),
            (Some(a), b) if a != b => {
                return Err(Error::parse(
                    lineno,
                    "qid must be given on every line or on none",
                ))
            }
            _ => {}
        }

        let mut entries = Vec::new();
        let mut prev = 0u64;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| {
                Error::parse(lineno, format!("expected index:value, got {tok:?}"))
            })?;
            let idx: u64 = idx
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad feature index in {tok:?}")))?;
            if idx == 0 {
                return Err(Error::parse(lineno, "feature indices are 1-based"));
            }
            if idx <= prev {
                return Err(Error::parse(
                    lineno,
                    format!("feature index {idx} does not increase (previous {prev})"),
                ));
            }
            if idx > u32::MAX as u64 {
                return Err(Error::parse(
                    lineno,
                    format!("feature index {idx} too large"),
                ));
            }
            let val = parse_real(val, lineno, "feature value")?;
            prev = idx;
            max_index = max_index.max(idx as usize);
            entries.push(((idx - 1) as u32, val));
        }

        y.push(target);
        if let Some(q) = qid {
            qids.push(q);
        }
        columns.push(entries);
    }

    let n = match opts.dims {
        Some(d) if d < max_index => {
            return Err(Error::invalid(format!(
                "declared dimension {d} is smaller than largest feature index {max_index}"
            )))
        }
        Some(d) => d,
        None => max_index,
    };
    let x = SparseMatrix::from_columns(n, columns, opts.mode)?;
    let qid = if has_qid == Some(true) {
        Some(qids)
    } else {
        None
    };
    Dataset::new(x, y, qid)
}

fn parse_real(tok: &str, line: usize, what: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {tok:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("{what} {tok:?} is not finite")));
    }
    Ok(v)
}

/// Writes the dataset so that parsing it back gives an identical dataset.
/// Floats use the shortest representation that round-trips.
pub fn write_svmlight<W: Write>(data: &Dataset, mut out: W) -> std::io::Result<()> {
    for j in 0..data.m() {
        write!(out, "{}", data.y()[j])?;
        if let Some(q) = data.qid() {
            write!(out, " qid:{}", q[j])?;
        }
        let (is, vs) = data.x().example(j);
        for (&i, &v) in is.iter().zip(vs) {
            write!(out, " {}:{}", i + 1, v)?;
        }
        writeln!(out)?;
    }
    Ok(())
}
