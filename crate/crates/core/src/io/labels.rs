use std::path::Path;

use quick_xml::events::Event;
use quick_xml::Reader;

use super::arff::RawTable;
use crate::data::{Attribute, AttributeKind, AttributeValue, FeatureVector, LabelSet, MLDataset, Schema};
use crate::error::{Error, Result};

/// Which ARFF attributes are labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSpec {
    /// Label attribute names, in label order.
    Names(Vec<String>),
    /// The last `q` attributes are the labels.
    TrailingCount(usize),
}

/// Parses a label-name file: either Mulan XML
/// (`<labels><label name="..."/>...</labels>`, nested labels included in
/// document order) or plain text with one name per line.
pub fn parse_label_file(text: &str) -> Result<Vec<String>> {
    let trimmed = text.trim_start();
    let names = if trimmed.starts_with('<') {
        parse_label_xml(trimmed)?
    } else {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect()
    };
    if names.is_empty() {
        return Err(Error::LabelBinding("label file lists no labels".into()));
    }
    Ok(names)
}

fn parse_label_xml(text: &str) -> Result<Vec<String>> {
    let mut reader = Reader::from_str(text);
    let mut names = Vec::new();
    loop {
        match reader.read_event() {
            Ok(Event::Start(e)) | Ok(Event::Empty(e)) if e.local_name().as_ref() == b"label" => {
                let mut found = false;
                for attr in e.attributes() {
                    let attr = attr.map_err(|err| Error::LabelBinding(format!("bad XML attribute: {err}")))?;
                    if attr.key.local_name().as_ref() == b"name" {
                        let value = attr
                            .unescape_value()
                            .map_err(|err| Error::LabelBinding(format!("bad XML attribute: {err}")))?;
                        names.push(value.trim().to_string());
                        found = true;
                    }
                }
                if !found {
                    return Err(Error::LabelBinding("<label> element without a name".into()));
                }
            }
            Ok(Event::Eof) => break,
            Ok(_) => {}
            Err(err) => return Err(Error::LabelBinding(format!("invalid label XML: {err}"))),
        }
    }
    Ok(names)
}

pub fn read_label_file(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    parse_label_file(&text)
}

fn label_value(raw: &AttributeValue, kind: &AttributeKind, name: &str) -> Result<bool> {
    let bad = || Error::LabelBinding(format!("label attribute `{name}` has a non-binary value"));
    match (raw, kind) {
        (AttributeValue::Missing, _) => Err(Error::LabelBinding(format!(
            "label attribute `{name}` has a missing value"
        ))),
        (AttributeValue::Numeric(v), AttributeKind::Numeric) => match *v {
            0.0 => Ok(false),
            1.0 => Ok(true),
            _ => Err(bad()),
        },
        (AttributeValue::Nominal(i), AttributeKind::Nominal(values)) => {
            Ok(positive_category(values) == Some(*i as usize))
        }
        _ => Err(bad()),
    }
}

/// Index of the positive category of a binary nominal label attribute.
fn positive_category(values: &[String]) -> Option<usize> {
    if values.len() != 2 {
        return None;
    }
    let lower: Vec<String> = values.iter().map(|v| v.to_ascii_lowercase()).collect();
    let pairs = [("0", "1"), ("false", "true"), ("no", "yes")];
    for (neg, pos) in pairs {
        if lower.iter().any(|v| v == neg) {
            if let Some(p) = lower.iter().position(|v| v == pos) {
                return Some(p);
            }
        }
    }
    None
}

/// Splits `raw` into features and labelsets.
///
/// Label attributes must be binary: nominal with categories `{0,1}`
/// (also `{false,true}`, `{no,yes}`) or numeric with only `0`/`1` values.
/// Names are matched case-sensitively after trimming whitespace.
pub fn bind_labels(raw: &RawTable, spec: &LabelSpec) -> Result<MLDataset> {
    let n_attr = raw.attributes.len();
    let label_idx: Vec<usize> = match spec {
        LabelSpec::Names(names) => {
            if names.is_empty() {
                return Err(Error::LabelBinding("empty label list".into()));
            }
            names
                .iter()
                .map(|n| {
                    let n = n.trim();
                    raw.attributes
                        .iter()
                        .position(|a| a.name.trim() == n)
                        .ok_or_else(|| Error::LabelBinding(format!("label attribute `{n}` not found")))
                })
                .collect::<Result<_>>()?
        }
        LabelSpec::TrailingCount(q) => {
            if *q == 0 || *q >= n_attr {
                return Err(Error::LabelBinding(format!(
                    "trailing label count {q} must be in 1..{n_attr}"
                )));
            }
            (n_attr - q..n_attr).collect()
        }
    };
    let mut is_label = vec![false; n_attr];
    for &i in &label_idx {
        if is_label[i] {
            return Err(Error::LabelBinding(format!(
                "label `{}` listed twice",
                raw.attributes[i].name
            )));
        }
        is_label[i] = true;
        if let AttributeKind::Nominal(values) = &raw.attributes[i].kind {
            if positive_category(values).is_none() {
                return Err(Error::LabelBinding(format!(
                    "label attribute `{}` is not binary",
                    raw.attributes[i].name
                )));
            }
        }
    }
    let feature_idx: Vec<usize> = (0..n_attr).filter(|&i| !is_label[i]).collect();
    let schema = Schema::new(
        feature_idx.iter().map(|&i| raw.attributes[i].clone()).collect(),
        label_idx.iter().map(|&i| raw.attributes[i].name.clone()).collect(),
    )?;
    let m = label_idx.len();
    let mut rows = Vec::with_capacity(raw.rows.len());
    for row in &raw.rows {
        let x = FeatureVector::new(feature_idx.iter().map(|&i| row[i]).collect());
        let mut y = LabelSet::empty(m);
        for (j, &i) in label_idx.iter().enumerate() {
            let attr = &raw.attributes[i];
            if label_value(&row[i], &attr.kind, &attr.name)? {
                y.insert(j)?;
            }
        }
        rows.push((x, y));
    }
    MLDataset::new(schema, rows)
}

/// Inverse of [`bind_labels`]: features first, then one `{0,1}` attribute
/// per label, ready for [`write_arff`](super::write_arff).
pub fn dataset_to_table(d: &MLDataset, relation_name: &str) -> RawTable {
    let schema = d.schema();
    let mut attributes = schema.attributes.clone();
    attributes.extend(
        schema
            .label_names
            .iter()
            .map(|n| Attribute::nominal(n.clone(), ["0", "1"])),
    );
    let rows = d
        .rows()
        .iter()
        .map(|(x, y)| {
            let mut row = x.values.clone();
            row.extend((0..d.n_labels()).map(|j| AttributeValue::Nominal(u32::from(y.contains(j)))));
            row
        })
        .collect();
    RawTable {
        relation_name: relation_name.to_string(),
        attributes,
        rows,
    }
}
