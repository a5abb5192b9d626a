//! Text model files.
//!
//! ```text
//! ranksvm-model 1
//! n 3
//! lambda 0.1
//! epsilon 0.001
//! converged true
//! iterations 12
//! w
//! 1:0.25
//! 3:-1.5
//! ```
//!
//! Weights are listed sparsely with 1-based indices; values use Rust's
//! shortest round-trip formatting, so loading reproduces `w` bitwise.

use std::fmt::Write as _;
use std::str::FromStr;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "ranksvm-model";

#[derive(Clone, Debug, PartialEq)]
pub struct ModelFile {
    pub lambda: f64,
    pub epsilon: f64,
    pub converged: bool,
    pub iterations: usize,
    pub w: Vec<f64>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("model file line {line}: {message}")]
pub struct ModelError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError {
        line,
        message: message.into(),
    }
}

impl ModelFile {
    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        // Writing to a String cannot fail.
        let _ = writeln!(s, "{MAGIC} {FORMAT_VERSION}");
        let _ = writeln!(s, "n {}", self.n());
        let _ = writeln!(s, "lambda {}", self.lambda);
        let _ = writeln!(s, "epsilon {}", self.epsilon);
        let _ = writeln!(s, "converged {}", self.converged);
        let _ = writeln!(s, "iterations {}", self.iterations);
        s.push_str("w\n");
        for (i, v) in self.w.iter().enumerate() {
            // Positive zero is implied; negative zero is kept.
            if v.to_bits() != 0 {
                let _ = writeln!(s, "{}:{}", i + 1, v);
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim()));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| err(0, format!("unexpected end of file, expected {what}")))
        };

        let (ln, header) = next("header")?;
        match header.split_once(' ') {
            Some((MAGIC, v)) => {
                let v: u32 = v
                    .parse()
                    .map_err(|_| err(ln, format!("bad format version {v:?}")))?;
                if v != FORMAT_VERSION {
                    return Err(err(ln, format!("unsupported format version {v}")));
                }
            }
            _ => return Err(err(ln, "not a ranksvm model file")),
        }
        let n: usize = field(next("n")?, "n")?;
        let lambda: f64 = field(next("lambda")?, "lambda")?;
        let epsilon: f64 = field(next("epsilon")?, "epsilon")?;
        let converged: bool = field(next("converged")?, "converged")?;
        let iterations: usize = field(next("iterations")?, "iterations")?;
        let (ln, tag) = next("w")?;
        if tag != "w" {
            return Err(err(ln, format!("expected \"w\", found {tag:?}")));
        }

        let mut w = vec![0.0; n];
        let mut last = 0usize;
        for (ln, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (i, v) = line
                .split_once(':')
                .ok_or_else(|| err(ln, format!("expected index:value, found {line:?}")))?;
            let i: usize = i.parse().map_err(|_| err(ln, format!("bad index {i:?}")))?;
            let v: f64 = v.parse().map_err(|_| err(ln, format!("bad value {v:?}")))?;
            if i <= last || i > n {
                return Err(err(
                    ln,
                    format!("index {i} out of order or outside 1..={n}"),
                ));
            }
            if !v.is_finite() {
                return Err(err(ln, format!("non-finite weight {v}")));
            }
            w[i - 1] = v;
            last = i;
        }
        Ok(ModelFile {
            lambda,
            epsilon,
            converged,
            iterations,
            w,
        })
    }
}

fn field<T: FromStr>((ln, line): (usize, &str), key: &str) -> Result<T, ModelError> {
    match line.split_once(' ') {
        Some((k, v)) if k == key => v
            .trim()
            .parse()
            .map_err(|_| err(ln, format!("bad value for {key}: {v:?}"))),
        _ => Err(err(
            ln,
            format!("expected \"{key} <value>\", found {line:?}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(w: Vec<f64>) -> ModelFile {
        ModelFile {
            lambda: 0.1,
            epsilon: 1e-3,
            converged: true,
            iterations: 7,
            w,
        }
    }

    #[test]
    fn round_trip_is_bitwise() {
        let w = vec![
            0.1 + 0.2,
            0.0,
            -0.0,
            1e-300,
            -123456.789,
            f64::MIN_POSITIVE,
            5e-324,
        ];
        let m = sample(w.clone());
        let back = ModelFile::parse(&m.to_text()).unwrap();
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back.w), bits(&w));
        assert_eq!(back, m);
    }

    #[test]
    fn zeros_are_omitted() {
        let text = sample(vec![0.0, 2.0, 0.0]).to_text();
        assert!(text.ends_with("w\n2:2\n"));
    }

    #[test]
    fn rejects_malformed_files() {
        let good = sample(vec![1.0, 2.0]).to_text();
        assert!(ModelFile::parse(&good.replace("ranksvm-model 1", "ranksvm-model 2")).is_err());
        assert!(ModelFile::parse(&good.replace("lambda", "lambada")).is_err());
        assert!(ModelFile::parse(&good.replace("2:2", "3:2")).is_err());
        assert!(ModelFile::parse(&good.replace("2:2", "1:2")).is_err());
        assert!(ModelFile::parse(&good.replace("2:2", "2:inf")).is_err());
        assert!(ModelFile::parse("").is_err());
        let e = ModelFile::parse(&good.replace("converged true", "converged maybe")).unwrap_err();
        assert_eq!(e.line, 5);
    }
}
