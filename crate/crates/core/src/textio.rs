//! Line-oriented text formats shared by every data language.
//!
//! All formats follow the same conventions: `#` starts a comment, blank lines
//! are ignored, the first meaningful line is a header naming the object kind,
//! and parse errors carry the 1-based line number they were raised on.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Iterator over meaningful lines, tracking original line numbers.
pub fn content_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Parses one whitespace-separated unsigned integer field.
pub fn parse_usize(line_no: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| ParseError::new(line_no, format!("expected {what}, found `{token}`")))
}

/// Splits a header line `keyword arg...` and checks the keyword.
pub fn expect_header<'a>(
    line_no: usize,
    line: &'a str,
    keyword: &str,
) -> Result<Vec<&'a str>, ParseError> {
    let mut parts = line.split_whitespace();
    match parts.next() {
        Some(k) if k == keyword => Ok(parts.collect()),
        Some(k) => Err(ParseError::new(
            line_no,
            format!("expected `{keyword}` header, found `{k}`"),
        )),
        None => Err(ParseError::new(line_no, format!("expected `{keyword}` header"))),
    }
}

/// Reads the first meaningful token of a document, used for dispatch.
pub fn header_keyword(input: &str) -> Option<&str> {
    content_lines(input)
        .next()
        .and_then(|(_, line)| line.split_whitespace().next())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blanks_are_skipped() {
        let doc = "# a comment\n\n  digraph 2\n0 1\n";
        let lines: Vec<_> = content_lines(doc).collect();
        assert_eq!(lines, vec![(3, "digraph 2"), (4, "0 1")]);
        assert_eq!(header_keyword(doc), Some("digraph"));
    }

    #[test]
    fn parse_error_displays_line() {
        let err = parse_usize(7, "x", "a vertex index").unwrap_err();
        assert_eq!(err.to_string(), "line 7: expected a vertex index, found `x`");
    }
}
