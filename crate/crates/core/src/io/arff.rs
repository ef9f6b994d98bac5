//! ARFF reader (dense and sparse data sections) and a plain dense writer.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::data::{Attribute, AttributeKind, AttributeValue};

/// Parsed ARFF content before labels are bound.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub relation_name: String,
    pub attributes: Vec<Attribute>,
    pub rows: Vec<Vec<AttributeValue>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct ArffError {
    pub line: usize,
    pub kind: ArffErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArffErrorKind {
    ExpectedRelation,
    MalformedAttribute(String),
    UnknownAttributeKind(String),
    DuplicateAttribute(String),
    UnexpectedDeclaration(String),
    MissingDataSection,
    UnterminatedQuote,
    ArityMismatch { expected: usize, got: usize },
    InvalidNumber(String),
    UndeclaredNominal { attribute: String, value: String },
    MalformedSparse(String),
}

impl fmt::Display for ArffErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ArffErrorKind::*;
        match self {
            ExpectedRelation => write!(f, "expected @relation declaration"),
            MalformedAttribute(s) => write!(f, "malformed @attribute declaration: {s}"),
            UnknownAttributeKind(s) => write!(f, "unknown attribute kind `{s}`"),
            DuplicateAttribute(s) => write!(f, "duplicate attribute `{s}`"),
            UnexpectedDeclaration(s) => write!(f, "unexpected declaration `{s}`"),
            MissingDataSection => write!(f, "missing @data section"),
            UnterminatedQuote => write!(f, "unterminated quoted string"),
            ArityMismatch { expected, got } => {
                write!(f, "row has {got} values, expected {expected}")
            }
            InvalidNumber(s) => write!(f, "invalid numeric value `{s}`"),
            UndeclaredNominal { attribute, value } => {
                write!(f, "value `{value}` is not declared for nominal attribute `{attribute}`")
            }
            MalformedSparse(s) => write!(f, "malformed sparse row: {s}"),
        }
    }
}

type ParseResult<T> = std::result::Result<T, ArffErrorKind>;

#[derive(PartialEq)]
enum Section {
    Start,
    Header,
    Data,
}

/// Parses ARFF text.
///
/// Keywords are case-insensitive, `%` lines are comments, `?` is a missing
/// value. Sparse rows `{index value, ...}` default omitted cells to `0` for
/// numeric attributes and to the first category for nominal ones.
pub fn parse_arff(text: &str) -> Result<RawTable, ArffError> {
    let mut relation_name = String::new();
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut names = HashSet::new();
    let mut rows = Vec::new();
    let mut section = Section::Start;
    let mut last_line = 0;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let err = |kind| ArffError { line: line_no, kind };
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }

        if section == Section::Data {
            if line.starts_with('@') {
                return Err(err(ArffErrorKind::UnexpectedDeclaration(keyword(line))));
            }
            let row = if line.starts_with('{') {
                parse_sparse_row(line, &attributes)
            } else {
                parse_dense_row(line, &attributes)
            };
            rows.push(row.map_err(err)?);
            continue;
        }

        let kw = keyword(line);
        match (section, kw.to_ascii_lowercase().as_str()) {
            (Section::Start, "@relation") => {
                let rest = line[kw.len()..].trim();
                let (name, _) = read_token(rest).map_err(err)?;
                relation_name = name;
                section = Section::Header;
            }
            (Section::Start, _) => return Err(err(ArffErrorKind::ExpectedRelation)),
            (_, "@attribute") => {
                let attr = parse_attribute(line[kw.len()..].trim()).map_err(err)?;
                if !names.insert(attr.name.clone()) {
                    return Err(err(ArffErrorKind::DuplicateAttribute(attr.name)));
                }
                attributes.push(attr);
                section = Section::Header;
            }
            (_, "@data") => section = Section::Data,
            _ => return Err(err(ArffErrorKind::UnexpectedDeclaration(kw))),
        }
    }

    if section != Section::Data {
        return Err(ArffError {
            line: last_line.max(1),
            kind: match section {
                Section::Start => ArffErrorKind::ExpectedRelation,
                _ => ArffErrorKind::MissingDataSection,
            },
        });
    }
    Ok(RawTable {
        relation_name,
        attributes,
        rows,
    })
}

fn keyword(line: &str) -> String {
    line.split_whitespace().next().unwrap_or("").to_string()
}

/// Reads one possibly quoted token; returns it and the remaining text.
fn read_token(s: &str) -> ParseResult<(String, &str)> {
    let s = s.trim_start();
    let mut chars = s.char_indices();
    match chars.next() {
        None => Ok((String::new(), "")),
        Some((_, q @ ('\'' | '"'))) => {
            let mut out = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    out.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((out, &s[i + c.len_utf8()..]));
                } else {
                    out.push(c);
                }
            }
            Err(ArffErrorKind::UnterminatedQuote)
        }
        Some(_) => {
            let end = s.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
    }
}

fn parse_attribute(rest: &str) -> ParseResult<Attribute> {
    let (name, kind_text) = read_token(rest)?;
    let kind_text = kind_text.trim();
    if name.is_empty() || kind_text.is_empty() {
        return Err(ArffErrorKind::MalformedAttribute(rest.to_string()));
    }
    let kind = if let Some(inner) = kind_text.strip_prefix('{') {
        let inner = inner
            .strip_suffix('}')
            .ok_or_else(|| ArffErrorKind::MalformedAttribute(rest.to_string()))?;
        let values = split_fields(inner)?;
        if values.iter().any(|v| v.is_empty()) {
            return Err(ArffErrorKind::MalformedAttribute(rest.to_string()));
        }
        AttributeKind::Nominal(values)
    } else {
        match kind_text.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => AttributeKind::Numeric,
            _ => return Err(ArffErrorKind::UnknownAttributeKind(kind_text.to_string())),
        }
    };
    Ok(Attribute { name, kind })
}

/// Splits on commas outside quotes, trimming and unquoting each field.
fn split_fields(s: &str) -> ParseResult<Vec<String>> {
    let mut fields = Vec::new();
    let mut rest = s;
    loop {
        let trimmed = rest.trim_start();
        let (field, after) = if trimmed.starts_with('\'') || trimmed.starts_with('"') {
            let (tok, after) = read_token(trimmed)?;
            (tok, after)
        } else {
            let end = trimmed.find(',').unwrap_or(trimmed.len());
            (trimmed[..end].trim().to_string(), &trimmed[end..])
        };
        fields.push(field);
        let after = after.trim_start();
        match after.strip_prefix(',') {
            Some(next) => rest = next,
            None if after.is_empty() => break,
            None => return Err(ArffErrorKind::MalformedAttribute(s.to_string())),
        }
    }
    Ok(fields)
}

fn parse_cell(text: &str, quoted: bool, attr: &Attribute) -> ParseResult<AttributeValue> {
    if text == "?" && !quoted {
        return Ok(AttributeValue::Missing);
    }
    match &attr.kind {
        AttributeKind::Numeric => text
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(AttributeValue::Numeric)
            .ok_or_else(|| ArffErrorKind::InvalidNumber(text.to_string())),
        AttributeKind::Nominal(values) => values
            .iter()
            .position(|v| v == text)
            .map(|i| AttributeValue::Nominal(i as u32))
            .ok_or_else(|| ArffErrorKind::UndeclaredNominal {
                attribute: attr.name.clone(),
                value: text.to_string(),
            }),
    }
}

fn split_cells(line: &str) -> ParseResult<Vec<(String, bool)>> {
    let mut cells = Vec::new();
    let mut rest = line;
    loop {
        let trimmed = rest.trim_start();
        let quoted = trimmed.starts_with('\'') || trimmed.starts_with('"');
        let (cell, after) = if quoted {
            read_token(trimmed)?
        } else {
            let end = trimmed.find(',').unwrap_or(trimmed.len());
            (trimmed[..end].trim().to_string(), &trimmed[end..])
        };
        cells.push((cell, quoted));
        let after = after.trim_start();
        match after.strip_prefix(',') {
            Some(next) => rest = next,
            None if after.is_empty() => break,
            None => {
                return Err(ArffErrorKind::InvalidNumber(after.to_string()));
            }
        }
    }
    Ok(cells)
}

fn parse_dense_row(line: &str, attributes: &[Attribute]) -> ParseResult<Vec<AttributeValue>> {
    let cells = split_cells(line)?;
    if cells.len() != attributes.len() {
        return Err(ArffErrorKind::ArityMismatch {
            expected: attributes.len(),
            got: cells.len(),
        });
    }
    cells
        .iter()
        .zip(attributes)
        .map(|((text, quoted), attr)| parse_cell(text, *quoted, attr))
        .collect()
}

fn parse_sparse_row(line: &str, attributes: &[Attribute]) -> ParseResult<Vec<AttributeValue>> {
    let inner = line
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| ArffErrorKind::MalformedSparse("missing closing `}`".into()))?;
    let mut row: Vec<AttributeValue> = attributes
        .iter()
        .map(|a| match a.kind {
            AttributeKind::Numeric => AttributeValue::Numeric(0.0),
            AttributeKind::Nominal(_) => AttributeValue::Nominal(0),
        })
        .collect();
    if inner.trim().is_empty() {
        return Ok(row);
    }
    let mut seen = HashSet::new();
    for item in split_sparse_items(inner)? {
        let item = item.trim();
        let (index_text, value_text) = item
            .split_once(char::is_whitespace)
            .ok_or_else(|| ArffErrorKind::MalformedSparse(format!("entry `{item}` has no value")))?;
        let index: usize = index_text
            .parse()
            .map_err(|_| ArffErrorKind::MalformedSparse(format!("bad index `{index_text}`")))?;
        if index >= attributes.len() {
            return Err(ArffErrorKind::MalformedSparse(format!(
                "index {index} out of range for {} attributes",
                attributes.len()
            )));
        }
        if !seen.insert(index) {
            return Err(ArffErrorKind::MalformedSparse(format!("index {index} repeated")));
        }
        let value_text = value_text.trim();
        let quoted = value_text.starts_with('\'') || value_text.starts_with('"');
        let text = if quoted {
            read_token(value_text)?.0
        } else {
            value_text.to_string()
        };
        row[index] = parse_cell(&text, quoted, &attributes[index])?;
    }
    Ok(row)
}

fn split_sparse_items(inner: &str) -> ParseResult<Vec<String>> {
    let mut items = Vec::new();
    let mut current = String::new();
    let mut quote: Option<char> = None;
    let mut escaped = false;
    for c in inner.chars() {
        match quote {
            Some(q) => {
                current.push(c);
                if escaped {
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    quote = None;
                }
            }
            None if c == ',' => items.push(std::mem::take(&mut current)),
            None => {
                if c == '\'' || c == '"' {
                    quote = Some(c);
                }
                current.push(c);
            }
        }
    }
    if quote.is_some() {
        return Err(ArffErrorKind::UnterminatedQuote);
    }
    items.push(current);
    Ok(items)
}

fn quote_if_needed(s: &str) -> String {
    let needs = s.is_empty()
        || s == "?"
        || s.chars()
            .any(|c| c.is_whitespace() || matches!(c, ',' | '{' | '}' | '\'' | '"' | '%' | '\\'));
    if needs {
        format!("'{}'", s.replace('\\', "\\\\").replace('\'', "\\'"))
    } else {
        s.to_string()
    }
}

/// Writes `table` as dense ARFF text that [`parse_arff`] reads back unchanged.
pub fn write_arff(table: &RawTable) -> String {
    let mut out = format!("@relation {}\n\n", quote_if_needed(&table.relation_name));
    for a in &table.attributes {
        let kind = match &a.kind {
            AttributeKind::Numeric => "numeric".to_string(),
            AttributeKind::Nominal(values) => {
                let vs: Vec<String> = values.iter().map(|v| quote_if_needed(v)).collect();
                format!("{{{}}}", vs.join(","))
            }
        };
        out.push_str(&format!("@attribute {} {}\n", quote_if_needed(&a.name), kind));
    }
    out.push_str("\n@data\n");
    for row in &table.rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&table.attributes)
            .map(|(v, a)| match (v, &a.kind) {
                (AttributeValue::Missing, _) => "?".to_string(),
                (AttributeValue::Numeric(x), _) => format!("{x}"),
                (AttributeValue::Nominal(i), AttributeKind::Nominal(values)) => quote_if_needed(&values[*i as usize]),
                (AttributeValue::Nominal(i), AttributeKind::Numeric) => format!("{i}"),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
