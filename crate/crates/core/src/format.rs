//! Plain-text file formats.
//!
//! * Edge list: first line `n`, then one `x y` pair per line (0-indexed).
//! * Dense: first line `n`, then `n` lines of `n` characters `0`/`1`.
//! * Generators: first line `n`, then one permutation per line as `n`
//!   space-separated images.
//!
//! Blank lines and lines starting with `#` are ignored. Errors carry the
//! 1-based line number of the offending line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::relation::{PointSet, Relation};
use crate::scheme::Permutation;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_index(line: usize, token: &str, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected {what}, found `{token}`")))
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
) -> Result<(usize, PointSet)> {
    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing point count"))?;
    let n = parse_index(line, header, "a point count")?;
    let domain = PointSet::new(n).map_err(|_| parse_err(line, "point count must be positive"))?;
    Ok((line, domain))
}

pub fn parse_edge_list(text: &str) -> Result<Relation> {
    let mut lines = content_lines(text);
    let (_, domain) = parse_header(&mut lines)?;
    let n = domain.len();
    let mut rel = Relation::empty(domain);
    for (line, l) in lines {
        let mut tokens = l.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(parse_err(line, "expected exactly two point indices"));
        };
        let x = parse_index(line, a, "a point index")?;
        let y = parse_index(line, b, "a point index")?;
        for p in [x, y] {
            if p >= n {
                return Err(parse_err(
                    line,
                    format!("point {p} out of range for {n} points"),
                ));
            }
        }
        rel.insert(x, y)?;
    }
    Ok(rel)
}

pub fn parse_dense(text: &str) -> Result<Relation> {
    let mut lines = content_lines(text);
    let (header_line, domain) = parse_header(&mut lines)?;
    let n = domain.len();
    let mut rel = Relation::empty(domain);
    let mut rows = 0;
    let mut last_line = header_line;
    for (line, l) in lines {
        last_line = line;
        if rows == n {
            return Err(parse_err(line, format!("more than {n} rows")));
        }
        let chars: Vec<char> = l.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.len() != n {
            return Err(parse_err(
                line,
                format!("row has {} entries, expected {n}", chars.len()),
            ));
        }
        for (y, c) in chars.into_iter().enumerate() {
            match c {
                '0' => {}
                '1' => rel.insert(rows, y)?,
                other => return Err(parse_err(line, format!("unexpected character `{other}`"))),
            }
        }
        rows += 1;
    }
    if rows != n {
        return Err(parse_err(
            last_line,
            format!("found {rows} rows, expected {n}"),
        ));
    }
    Ok(rel)
}

/// Detects the format: a body made of single `0`/`1` tokens is dense,
/// anything else is an edge list.
pub fn parse_relation(text: &str) -> Result<Relation> {
    let mut body = content_lines(text).skip(1).peekable();
    let dense = body.peek().is_some()
        && body.all(|(_, l)| {
            !l.chars().any(char::is_whitespace) && l.chars().all(|c| c == '0' || c == '1')
        });
    if dense {
        parse_dense(text)
    } else {
        parse_edge_list(text)
    }
}

pub fn write_edge_list(rel: &Relation) -> String {
    let mut out = String::with_capacity(8 * rel.len() + 8);
    let _ = writeln!(out, "{}", rel.n());
    for (x, y) in rel.pairs() {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

pub fn write_dense(rel: &Relation) -> String {
    let n = rel.n();
    let mut out = String::with_capacity((n + 1) * n + 8);
    let _ = writeln!(out, "{n}");
    for x in 0..n {
        for y in 0..n {
            out.push(if rel.contains(x, y) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn parse_generators(text: &str) -> Result<(PointSet, Vec<Permutation>)> {
    let mut lines = content_lines(text);
    let (_, domain) = parse_header(&mut lines)?;
    let n = domain.len();
    let mut gens = Vec::new();
    for (line, l) in lines {
        let images = l
            .split_whitespace()
            .map(|t| parse_index(line, t, "a point image"))
            .collect::<Result<Vec<_>>>()?;
        if images.len() != n {
            return Err(parse_err(
                line,
                format!("generator has {} images, expected {n}", images.len()),
            ));
        }
        let perm = Permutation::new(images).map_err(|e| parse_err(line, e.to_string()))?;
        gens.push(perm);
    }
    Ok((domain, gens))
}

pub fn write_generators(domain: PointSet, gens: &[Permutation]) -> String {
    let mut out = format!("{}\n", domain.len());
    for g in gens {
        let line: Vec<String> = g.images().iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_roundtrip() {
        let text = "5\n0 1\n1 2\n2 3\n3 4\n4 0\n";
        let rel = parse_edge_list(text).unwrap();
        assert_eq!(rel, Relation::directed_cycle(PointSet::new(5).unwrap()));
        assert_eq!(write_edge_list(&rel), text);
        assert_eq!(parse_relation(text).unwrap(), rel);
    }

    #[test]
    fn dense_roundtrip() {
        let text = "3\n010\n001\n100\n";
        let rel = parse_dense(text).unwrap();
        assert_eq!(rel, Relation::directed_cycle(PointSet::new(3).unwrap()));
        assert_eq!(write_dense(&rel), text);
        assert_eq!(parse_relation(text).unwrap(), rel);
    }

    #[test]
    fn comments_and_blank_lines() {
        let rel = parse_edge_list("# cycle\n2\n\n0 1\n# back\n1 0\n").unwrap();
        assert_eq!(rel.len(), 2);
    }

    #[test]
    fn out_of_range_rejected_with_line() {
        let err = parse_edge_list("3\n0 1\n1 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse_dense("2\n01\n12\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = parse_dense("2\n01\n011\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            parse_edge_list(""),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("3\n0 1 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_dense("2\n01\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn generators() {
        let (d, gens) = parse_generators("4\n1 2 3 0\n1 0 2 3\n").unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(gens.len(), 2);
        assert_eq!(write_generators(d, &gens), "4\n1 2 3 0\n1 0 2 3\n");
        assert!(matches!(
            parse_generators("3\n0 0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_generators("3\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
