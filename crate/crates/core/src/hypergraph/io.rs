//! The `u3` edge-list format.
//!
//! ```text
//! u3 <n> <m>
//! <a> <b> <c>      (m lines, 0 <= a < b < c < n, ascending lexicographic)
//! ```
//!
//! Every line is LF-terminated ASCII decimal. Parsing is strict so that
//! `serialize(parse(s)) == s` for every accepted canonical input.

use std::fmt::Write as _;

use super::{Triple, TripleSystem};
use crate::error::{Error, Result};

pub fn serialize(h: &TripleSystem) -> String {
    let mut out = String::with_capacity(16 + 12 * h.edge_count());
    writeln!(out, "u3 {} {}", h.n(), h.edge_count()).unwrap();
    for t in h.edges() {
        writeln!(out, "{t}").unwrap();
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("expected a decimal integer, found `{tok}`")));
    }
    if tok.len() > 1 && tok.starts_with('0') {
        return Err(parse_err(line, format!("leading zero in `{tok}`")));
    }
    tok.parse()
        .map_err(|_| parse_err(line, format!("integer `{tok}` out of range")))
}

fn fields(text: &str, line: usize, expected: usize) -> Result<Vec<&str>> {
    let toks: Vec<&str> = text.split(' ').collect();
    if toks.len() != expected {
        return Err(parse_err(
            line,
            format!("expected {expected} space-separated fields, found {}", toks.len()),
        ));
    }
    Ok(toks)
}

pub fn parse(text: &str) -> Result<TripleSystem> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n');
    let header = lines.next().unwrap_or("");
    let toks = fields(header, 1, 3)?;
    if toks[0] != "u3" {
        return Err(parse_err(1, format!("expected `u3` header, found `{}`", toks[0])));
    }
    let n = number(toks[1], 1)?;
    let m = number(toks[2], 1)?;

    let mut sys = TripleSystem::empty(n)?;
    let mut prev: Option<Triple> = None;
    let mut count = 0;
    for (i, raw) in lines.enumerate() {
        let line = i + 2;
        let toks = fields(raw, line, 3)?;
        let [a, b, c] = [
            number(toks[0], line)?,
            number(toks[1], line)?,
            number(toks[2], line)?,
        ];
        if !(a < b && b < c) {
            return Err(parse_err(line, format!("triple `{raw}` is not strictly ascending")));
        }
        if c >= n {
            return Err(Error::VertexOutOfRange { vertex: c, n });
        }
        let t = Triple([a, b, c]);
        if prev.is_some_and(|p| p >= t) {
            return Err(parse_err(
                line,
                format!("triple `{raw}` is a duplicate or out of lexicographic order"),
            ));
        }
        prev = Some(t);
        sys.insert(t);
        count += 1;
    }
    if count != m {
        return Err(parse_err(1, format!("header declares {m} edges, found {count}")));
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FANO: &str = "u3 7 7\n0 1 3\n0 2 6\n0 4 5\n1 2 4\n1 5 6\n2 3 5\n3 4 6\n";

    #[test]
    fn fano_round_trip() {
        let h = parse(FANO).unwrap();
        assert_eq!(h.n(), 7);
        assert_eq!(h.edge_count(), 7);
        assert_eq!(serialize(&h), FANO);
    }

    #[test]
    fn empty_system() {
        let h = parse("u3 5 0\n").unwrap();
        assert_eq!(h.edge_count(), 0);
        assert_eq!(serialize(&h), "u3 5 0\n");
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "u4 7 0\n",
            "u3 7\n",
            "u3 x 0\n",
            "u3 7 2\n0 1 2\n",
            "u3 7 1\n0 1 2\n3 4 5\n",
            "u3 7 1\n0 1 7\n",
            "u3 7 1\n1 0 2\n",
            "u3 7 2\n0 1 2\n0 1 2\n",
            "u3 7 2\n0 1 3\n0 1 2\n",
            "u3 7 1\n0  1 2\n",
            "u3 7 1\r\n0 1 2\r\n",
            "u3 7 1\n00 1 2\n",
        ] {
            assert!(parse(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn out_of_range_is_reported() {
        assert_eq!(
            parse("u3 4 1\n0 1 4\n").unwrap_err(),
            Error::VertexOutOfRange { vertex: 4, n: 4 }
        );
    }
}
