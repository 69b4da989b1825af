//! Line-oriented text formats shared by the CLI and tests.
//!
//! | file          | line format                          |
//! |---------------|--------------------------------------|
//! | requests      | `n<TAB>y`                            |
//! | allocation    | `x<TAB>y`                            |
//! | sequence      | `p/q`                                |
//! | decomposition | `n_i<TAB>r_i`                        |
//! | table         | `program<TAB>output`                 |
//! | stage         | level header, then one string a line |
//!
//! Bit strings are ASCII `0`/`1` with `-` for the empty word. Blank lines
//! and lines starting with `#` are ignored on input.

use thiserror::Error;

use crate::arith::{parse_rational, Rational};
use crate::bits::BitString;
use crate::ce_real::DyadicDecomposition;
use crate::codespace::Request;
use crate::machines::MachineTable;
use crate::mltest::PrefixSetStage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn bits(line: usize, s: &str) -> Result<BitString, FormatError> {
    s.parse().map_err(|e: crate::bits::ParseBitsError| err(line, e.to_string()))
}

fn two_fields(line: usize, l: &str) -> Result<(&str, &str), FormatError> {
    let mut it = l.split('\t').map(str::trim);
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(err(line, "expected two tab-separated fields")),
    }
}

fn natural(line: usize, s: &str) -> Result<usize, FormatError> {
    s.parse().map_err(|_| err(line, format!("expected a natural number, got {s:?}")))
}

pub fn parse_requests(text: &str) -> Result<Vec<Request>, FormatError> {
    content_lines(text)
        .map(|(n, l)| {
            let (len, y) = two_fields(n, l)?;
            Ok(Request::new(natural(n, len)?, bits(n, y)?))
        })
        .collect()
}

pub fn write_requests(requests: &[Request]) -> String {
    requests.iter().map(|r| format!("{}\t{}\n", r.length, r.output)).collect()
}

pub fn write_allocation(pairs: &[(BitString, BitString)]) -> String {
    pairs.iter().map(|(x, y)| format!("{x}\t{y}\n")).collect()
}

pub fn parse_sequence(text: &str) -> Result<Vec<Rational>, FormatError> {
    content_lines(text)
        .map(|(n, l)| parse_rational(l).ok_or_else(|| err(n, format!("expected a rational p/q, got {l:?}"))))
        .collect()
}

pub fn write_decomposition(dec: &DyadicDecomposition) -> String {
    dec.lengths
        .iter()
        .zip(&dec.partials)
        .map(|(n, r)| format!("{n}\t{}\n", r.to_rational()))
        .collect()
}

/// Parses a table and checks that its programs are prefix-free.
pub fn parse_table(text: &str) -> Result<MachineTable, FormatError> {
    let entries = content_lines(text)
        .map(|(n, l)| {
            let (p, y) = two_fields(n, l)?;
            Ok((bits(n, p)?, bits(n, y)?))
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    MachineTable::new(entries).map_err(|e| err(0, e.to_string()))
}

pub fn write_table(table: &MachineTable) -> String {
    write_allocation(table.entries())
}

pub fn parse_stage(text: &str) -> Result<PrefixSetStage, FormatError> {
    let mut lines = content_lines(text);
    let (n, header) = lines.next().ok_or_else(|| err(1, "missing level header"))?;
    let level = natural(n, header)?;
    let strings = lines.map(|(n, l)| bits(n, l)).collect::<Result<Vec<_>, _>>()?;
    PrefixSetStage::new(level, strings).map_err(|e| err(n, e.to_string()))
}

/// Naturals separated by commas, whitespace or newlines.
pub fn parse_lengths(text: &str) -> Result<Vec<usize>, FormatError> {
    content_lines(text)
        .flat_map(|(n, l)| {
            l.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(move |s| natural(n, s))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::codespace::allocate_all;

    #[test]
    fn requests_round_trip() {
        let text = "2\t1\n\n# comment\n3\t-\n4\t0110\n";
        let reqs = parse_requests(text).unwrap();
        assert_eq!(reqs.len(), 3);
        assert_eq!(reqs[1].output, BitString::empty());
        assert_eq!(write_requests(&reqs), "2\t1\n3\t-\n4\t0110\n");
        let out = write_allocation(&allocate_all(&reqs).unwrap());
        assert_eq!(out, "00\t1\n010\t-\n0110\t0110\n");
    }

    #[test]
    fn request_errors_name_the_line() {
        let e = parse_requests("2\t1\nx\t1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert_eq!(parse_requests("2 1\n").unwrap_err().line, 1);
        assert_eq!(parse_requests("2\t12\n").unwrap_err().line, 1);
    }

    #[test]
    fn sequences() {
        assert_eq!(parse_sequence("1/2\n3/4\n").unwrap(), [rat(1, 2), rat(3, 4)]);
        assert_eq!(parse_sequence("2/4").unwrap(), [rat(1, 2)]);
        assert!(parse_sequence("1/0").is_err());
        assert!(parse_sequence("0.5").is_err());
    }

    #[test]
    fn tables_and_stages() {
        let t = parse_table("0\t1\n10\t-\n").unwrap();
        assert_eq!(write_table(&t), "0\t1\n10\t-\n");
        assert!(parse_table("0\t1\n01\t-\n").is_err());
        let s = parse_stage("4\n11111\n").unwrap();
        assert_eq!(s.level(), 4);
        assert_eq!(s.to_string(), "4\n11111\n");
        assert!(parse_stage("").is_err());
        assert!(parse_stage("4\n000\n").is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(parse_lengths("2,3\n4 5").unwrap(), [2, 3, 4, 5]);
        assert!(parse_lengths("2,x").is_err());
    }
}
