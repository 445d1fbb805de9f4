//! Line-oriented `key = value` text with optional `[section]` headers.
//!
//! `#` starts a comment that runs to the end of the line. Keys are unique
//! within their section. Positions are 1-based.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub section: Option<String>,
    pub key: String,
    pub value: String,
    pub line: usize,
    pub key_column: usize,
    pub value_column: usize,
}

impl Entry {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.value_column, message)
    }

    pub fn key_error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.key_column, message)
    }

    /// Comma-separated items with their columns; an empty value is the empty list.
    pub fn list(&self) -> Vec<(usize, &str)> {
        if self.value.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for item in self.value.split(',') {
            let lead = item.len() - item.trim_start().len();
            out.push((self.value_column + offset + lead, item.trim()));
            offset += item.len() + 1;
        }
        out
    }

    pub fn parse_value<T: std::str::FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.value
            .parse()
            .map_err(|_| self.error(format!("`{}` is not a valid {what}", self.value)))
    }

    pub fn parse_list<T: std::str::FromStr>(&self, what: &str) -> Result<Vec<T>, ParseError> {
        self.list()
            .into_iter()
            .map(|(column, item)| {
                item.parse()
                    .map_err(|_| ParseError::new(self.line, column, format!("`{item}` is not a valid {what}")))
            })
            .collect()
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.section {
            Some(s) => write!(f, "[{s}] {} = {}", self.key, self.value),
            None => write!(f, "{} = {}", self.key, self.value),
        }
    }
}

fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

/// Parses the whole text. Sections are rejected unless `allow_sections`.
pub fn parse(text: &str, allow_sections: bool) -> Result<Vec<Entry>, ParseError> {
    let mut entries: Vec<Entry> = Vec::new();
    let mut section: Option<String> = None;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let start = content.len() - content.trim_start().len();
        if trimmed.starts_with('[') {
            if !allow_sections {
                return Err(ParseError::new(
                    line_no,
                    column_of(raw, start),
                    "section headers are not allowed here",
                ));
            }
            if !trimmed.ends_with(']') {
                return Err(ParseError::new(
                    line_no,
                    column_of(raw, start),
                    "unterminated section header",
                ));
            }
            let name = trimmed[1..trimmed.len() - 1].trim();
            if name.is_empty() {
                return Err(ParseError::new(line_no, column_of(raw, start), "empty section name"));
            }
            if entries.iter().any(|e| e.section.as_deref() == Some(name)) {
                return Err(ParseError::new(
                    line_no,
                    column_of(raw, start),
                    format!("section `{name}` appears twice"),
                ));
            }
            section = Some(name.to_string());
            continue;
        }
        let Some(eq) = content.find('=') else {
            return Err(ParseError::new(
                line_no,
                column_of(raw, start),
                "expected `key = value`",
            ));
        };
        let key = content[..eq].trim();
        if key.is_empty() {
            return Err(ParseError::new(
                line_no,
                column_of(raw, start),
                "missing key before `=`",
            ));
        }
        if let Some(bad) = key.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '.')) {
            return Err(ParseError::new(
                line_no,
                column_of(raw, start + bad),
                format!("invalid character in key `{key}`"),
            ));
        }
        let rest = &content[eq + 1..];
        let value_start = eq + 1 + (rest.len() - rest.trim_start().len());
        let value = rest.trim();
        if let Some(previous) = entries.iter().find(|e| e.section == section && e.key == key) {
            return Err(ParseError::new(
                line_no,
                column_of(raw, start),
                format!("duplicate key `{key}` (first set on line {})", previous.line),
            ));
        }
        entries.push(Entry {
            section: section.clone(),
            key: key.to_string(),
            value: value.to_string(),
            line: line_no,
            key_column: column_of(raw, start),
            value_column: column_of(raw, value_start),
        });
    }
    Ok(entries)
}
