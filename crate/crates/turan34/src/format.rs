//! Text formats for 3-graphs and orgraphs.
//!
//! `3graph` files: a header line `3graph <n> <m>` followed by `m` lines
//! `<i> <j> <k>` with 1-based labels `1 <= i < j < k <= n`. `orgraph` files:
//! `orgraph <n> <m>` followed by `m` lines `<u> <v>` meaning the arc
//! `u -> v`. Lines starting with `#` are comments and may appear anywhere;
//! emitted files carry a `# FMT_VERSION <v>` comment after the header.
//! Parsers reject duplicates, out-of-range labels, loops and antiparallel
//! arcs with line/column diagnostics.

use crate::error::{Error, Result};
use crate::hypergraph::ThreeGraph;
use crate::orgraph::Orgraph;

pub const FMT_VERSION: u32 = 1;

struct Lines<'a> {
    remaining: std::str::Lines<'a>,
    line_no: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            remaining: text.lines(),
            line_no: 0,
        }
    }

    /// Next line that is neither blank nor a comment, with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        loop {
            let line = self.remaining.next()?;
            self.line_no += 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Some((self.line_no, line));
        }
    }
}

/// Column (1-based byte offset) at which field `idx` of a whitespace-split
/// line starts.
fn field_col(line: &str, idx: usize) -> usize {
    let mut seen = 0usize;
    let mut in_field = false;
    for (pos, ch) in line.char_indices() {
        if ch.is_whitespace() {
            in_field = false;
        } else if !in_field {
            if seen == idx {
                return pos + 1;
            }
            seen += 1;
            in_field = true;
        }
    }
    line.len() + 1
}

fn parse_fields(line_no: usize, line: &str, expect: usize, what: &str) -> Result<Vec<usize>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != expect {
        return Err(Error::parse(
            line_no,
            field_col(line, fields.len().min(expect)),
            format!("expected {expect} fields for {what}, found {}", fields.len()),
        ));
    }
    let mut out = Vec::with_capacity(expect);
    for (i, f) in fields.iter().enumerate() {
        match f.parse::<usize>() {
            Ok(v) => out.push(v),
            Err(_) => {
                return Err(Error::parse(
                    line_no,
                    field_col(line, i),
                    format!("expected a nonnegative integer, found {f:?}"),
                ))
            }
        }
    }
    Ok(out)
}

fn parse_header(lines: &mut Lines<'_>, keyword: &str) -> Result<(usize, usize)> {
    let (line_no, line) = lines
        .next_content()
        .ok_or_else(|| Error::parse(1, 1, format!("missing {keyword} header")))?;
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.first() != Some(&keyword) || fields.len() != 3 {
        return Err(Error::parse(
            line_no,
            1,
            format!("header must be `{keyword} <n> <m>`"),
        ));
    }
    let mut nums = [0usize; 2];
    for (i, f) in fields[1..].iter().enumerate() {
        nums[i] = f.parse::<usize>().map_err(|_| {
            Error::parse(
                line_no,
                field_col(line, i + 1),
                format!("expected a nonnegative integer, found {f:?}"),
            )
        })?;
    }
    Ok((nums[0], nums[1]))
}

fn no_trailing(lines: &mut Lines<'_>) -> Result<()> {
    if let Some((line_no, _)) = lines.next_content() {
        return Err(Error::parse(line_no, 1, "unexpected content after last edge"));
    }
    Ok(())
}

pub fn parse_threegraph(text: &str) -> Result<ThreeGraph> {
    let mut lines = Lines::new(text);
    let (n, m) = parse_header(&mut lines, "3graph")?;
    if n == 0 || n > crate::hypergraph::MAX_VERTICES {
        return Err(Error::parse(1, 1, format!("vertex count {n} out of range")));
    }
    let mut edges: Vec<[usize; 3]> = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next_content()
            .ok_or_else(|| Error::parse(lines.line_no + 1, 1, "missing edge line"))?;
        let f = parse_fields(line_no, line, 3, "an edge")?;
        let (i, j, k) = (f[0], f[1], f[2]);
        if !(1 <= i && i < j && j < k) {
            return Err(Error::parse(
                line_no,
                1,
                format!("edge ({i}, {j}, {k}) is not strictly increasing"),
            ));
        }
        if k > n {
            return Err(Error::parse(
                line_no,
                field_col(line, 2),
                format!("label {k} exceeds vertex count {n}"),
            ));
        }
        if edges.contains(&[i - 1, j - 1, k - 1]) {
            return Err(Error::parse(line_no, 1, format!("duplicate edge ({i}, {j}, {k})")));
        }
        edges.push([i - 1, j - 1, k - 1]);
    }
    no_trailing(&mut lines)?;
    ThreeGraph::new(n, &edges)
}

pub fn emit_threegraph(g: &ThreeGraph) -> String {
    let mut out = format!("3graph {} {}\n# FMT_VERSION {FMT_VERSION}\n", g.n(), g.edge_count());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e[0] + 1, e[1] + 1, e[2] + 1));
    }
    out
}

pub fn parse_orgraph(text: &str) -> Result<Orgraph> {
    let mut lines = Lines::new(text);
    let (n, m) = parse_header(&mut lines, "orgraph")?;
    if n == 0 || n > crate::hypergraph::MAX_VERTICES {
        return Err(Error::parse(1, 1, format!("vertex count {n} out of range")));
    }
    let mut arcs: Vec<(usize, usize)> = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next_content()
            .ok_or_else(|| Error::parse(lines.line_no + 1, 1, "missing arc line"))?;
        let f = parse_fields(line_no, line, 2, "an arc")?;
        let (u, v) = (f[0], f[1]);
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::parse(line_no, 1, format!("arc ({u}, {v}) out of range 1..={n}")));
        }
        if u == v {
            return Err(Error::parse(line_no, 1, format!("arc ({u}, {v}) is a loop")));
        }
        if arcs.contains(&(u - 1, v - 1)) {
            return Err(Error::parse(line_no, 1, format!("duplicate arc ({u}, {v})")));
        }
        if arcs.contains(&(v - 1, u - 1)) {
            return Err(Error::parse(
                line_no,
                1,
                format!("arc ({u}, {v}) is antiparallel to an earlier arc"),
            ));
        }
        arcs.push((u - 1, v - 1));
    }
    no_trailing(&mut lines)?;
    Orgraph::new(n, &arcs)
}

pub fn emit_orgraph(g: &Orgraph) -> String {
    let arcs = g.arcs();
    let mut out = format!("orgraph {} {}\n# FMT_VERSION {FMT_VERSION}\n", g.n(), arcs.len());
    for (u, v) in arcs {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}

/// Validates a file of either text format, dispatching on the header keyword.
pub fn check_any(text: &str) -> Result<&'static str> {
    let mut lines = Lines::new(text);
    let keyword = match lines.next_content() {
        Some((_, line)) => line.split_whitespace().next().unwrap_or(""),
        None => return Err(Error::parse(1, 1, "empty file")),
    };
    match keyword {
        "3graph" => parse_threegraph(text).map(|_| "3graph"),
        "orgraph" => parse_orgraph(text).map(|_| "orgraph"),
        other => Err(Error::parse(
            1,
            1,
            format!("unknown format keyword {other:?} (expected 3graph or orgraph)"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threegraph_roundtrip() {
        let g = crate::constructions::named("H4").unwrap();
        let text = emit_threegraph(&g);
        assert_eq!(parse_threegraph(&text).unwrap(), g);
        assert!(text.contains("# FMT_VERSION 1"));
    }

    #[test]
    fn threegraph_rejects_malformed() {
        let cases = [
            ("3grap 3 1\n1 2 3\n", "header"),
            ("3graph 3 2\n1 2 3\n", "missing edge"),
            ("3graph 3 1\n1 2 2\n", "not strictly increasing"),
            ("3graph 3 1\n3 2 1\n", "not strictly increasing"),
            ("3graph 3 1\n1 2 4\n", "exceeds"),
            ("3graph 4 2\n1 2 3\n1 2 3\n", "duplicate"),
            ("3graph 3 1\n1 2 3\n4 5 6\n", "unexpected content"),
            ("3graph 3 1\n1 2 x\n", "integer"),
        ];
        for (text, needle) in cases {
            let err = parse_threegraph(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} -> {err}");
        }
    }

    #[test]
    fn parse_reports_line_and_column() {
        let err = parse_threegraph("3graph 5 2\n1 2 3\n1 2 zz\n").unwrap_err();
        match err {
            Error::Parse { line, col, .. } => {
                assert_eq!(line, 3);
                assert_eq!(col, 5);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn orgraph_roundtrip_and_rejections() {
        let g = Orgraph::new(4, &[(0, 1), (2, 1), (3, 0)]).unwrap();
        let text = emit_orgraph(&g);
        assert_eq!(parse_orgraph(&text).unwrap(), g);

        assert!(parse_orgraph("orgraph 3 1\n1 1\n").unwrap_err().to_string().contains("loop"));
        assert!(parse_orgraph("orgraph 3 2\n1 2\n2 1\n")
            .unwrap_err()
            .to_string()
            .contains("antiparallel"));
        assert!(parse_orgraph("orgraph 3 2\n1 2\n1 2\n")
            .unwrap_err()
            .to_string()
            .contains("duplicate"));
    }

    #[test]
    fn comments_allowed_anywhere() {
        let g = parse_threegraph("# leading note\n3graph 4 1\n# mid\n1 2 4\n# trailing\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn check_any_dispatches() {
        assert_eq!(check_any("3graph 3 0\n").unwrap(), "3graph");
        assert_eq!(check_any("orgraph 3 0\n").unwrap(), "orgraph");
        assert!(check_any("sdpa 1\n").is_err());
    }
}
