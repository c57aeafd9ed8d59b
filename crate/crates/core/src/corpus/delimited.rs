use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Field separator used by the screenplay corpus files.
pub const DEFAULT_DELIMITER: &str = " +++$+++ ";

/// How raw bytes are turned into text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    /// UTF-8, with invalid sequences replaced by U+FFFD.
    #[default]
    Utf8Lossy,
    /// Every byte maps to the code point of the same value.
    Latin1,
}

impl Encoding {
    fn decode(self, bytes: &[u8]) -> String {
        match self {
            Encoding::Utf8Lossy => String::from_utf8_lossy(bytes).into_owned(),
            Encoding::Latin1 => bytes.iter().map(|&b| b as char).collect(),
        }
    }
}

impl FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "utf8-lossy" | "utf-8" | "utf8" => Ok(Encoding::Utf8Lossy),
            "latin1" | "latin-1" | "iso-8859-1" => Ok(Encoding::Latin1),
            other => Err(format!("unknown encoding {other:?}")),
        }
    }
}

/// A recoverable problem with one input line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    /// 1-based line number in the source file.
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParsedTable {
    pub rows: Vec<Vec<String>>,
    pub diagnostics: Vec<ParseDiagnostic>,
}

/// Splits every non-empty line of `reader` into exactly `schema.len()` fields.
///
/// The last field absorbs any further delimiters, so free text in the final column
/// survives intact. Lines with too few fields are skipped and reported as diagnostics;
/// only an unreadable stream is an error.
pub fn parse_delimited<R: Read>(
    mut reader: R,
    schema: &[&str],
    delimiter: &str,
    encoding: Encoding,
) -> Result<ParsedTable, CorpusError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|source| CorpusError::Io {
            what: "delimited input".into(),
            source,
        })?;
    let text = encoding.decode(&bytes);
    let width = schema.len();
    let mut table = ParsedTable::default();
    // Editors sometimes strip the trailing blank after a final empty field.
    let bare_delimiter = delimiter.trim_end();

    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut fields: Vec<String> = line.splitn(width, delimiter).map(str::to_owned).collect();
        if fields.len() + 1 == width && !bare_delimiter.is_empty() {
            if let Some(last) = fields.last_mut() {
                if let Some(stripped) = last.strip_suffix(bare_delimiter) {
                    *last = stripped.to_owned();
                    fields.push(String::new());
                }
            }
        }
        if fields.len() != width {
            table.diagnostics.push(ParseDiagnostic {
                line: idx + 1,
                message: format!(
                    "expected {width} fields ({}), found {}",
                    schema.join(", "),
                    fields.len()
                ),
            });
            continue;
        }
        table.rows.push(fields);
    }
    Ok(table)
}

/// Inverse of [`parse_delimited`] for rows whose fields contain neither the
/// delimiter nor a newline.
pub fn write_delimited(rows: &[Vec<String>], delimiter: &str) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&row.join(delimiter));
        out.push('\n');
    }
    out
}

/// Parses a bracketed list of quoted ids such as `['L194', 'L195']`.
pub fn parse_utterance_list(field: &str) -> Result<Vec<String>, CorpusError> {
    let bad = || CorpusError::UtteranceList(field.to_owned());
    let inner = field
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(bad)?;
    if inner.contains(['[', ']']) {
        return Err(bad());
    }
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|item| {
            let item = item.trim();
            let quote = item
                .chars()
                .next()
                .filter(|c| *c == '\'' || *c == '"')
                .ok_or_else(bad)?;
            let body = item[1..].strip_suffix(quote).ok_or_else(bad)?;
            if body.is_empty() || body.contains(['\'', '"']) {
                return Err(bad());
            }
            Ok(body.trim().to_owned())
        })
        .collect()
}
