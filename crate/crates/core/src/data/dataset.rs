use std::collections::HashSet;

use serde::Serialize;

use super::LabelSet;
use crate::error::{Error, Result};

/// Declared type of a feature attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttributeKind {
    Numeric,
    /// Nominal attribute with its ordered list of category names.
    Nominal(Vec<String>),
}

impl AttributeKind {
    pub fn is_numeric(&self) -> bool {
        matches!(self, AttributeKind::Numeric)
    }

    pub fn category_count(&self) -> usize {
        match self {
            AttributeKind::Numeric => 0,
            AttributeKind::Nominal(values) => values.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
}

impl Attribute {
    pub fn numeric(name: impl Into<String>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Numeric,
        }
    }

    pub fn nominal<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Attribute {
            name: name.into(),
            kind: AttributeKind::Nominal(values.into_iter().map(Into::into).collect()),
        }
    }
}

/// One cell of a feature vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttributeValue {
    Numeric(f64),
    /// Index into the attribute's category list.
    Nominal(u32),
    Missing,
}

impl AttributeValue {
    pub fn is_missing(&self) -> bool {
        matches!(self, AttributeValue::Missing)
    }

    fn conforms_to(&self, kind: &AttributeKind) -> bool {
        match (self, kind) {
            (AttributeValue::Missing, _) => true,
            (AttributeValue::Numeric(v), AttributeKind::Numeric) => v.is_finite(),
            (AttributeValue::Nominal(i), AttributeKind::Nominal(values)) => (*i as usize) < values.len(),
            _ => false,
        }
    }
}

/// Feature values of one instance, in schema attribute order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<AttributeValue>,
}

impl FeatureVector {
    pub fn new(values: Vec<AttributeValue>) -> Self {
        FeatureVector { values }
    }

    pub fn numeric(values: &[f64]) -> Self {
        FeatureVector {
            values: values.iter().map(|&v| AttributeValue::Numeric(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Feature attributes plus the ordered label names of a multi-label dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub attributes: Vec<Attribute>,
    pub label_names: Vec<String>,
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>, label_names: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for a in &attributes {
            if !seen.insert(a.name.as_str()) {
                return Err(Error::Schema(format!("duplicate attribute name `{}`", a.name)));
            }
        }
        let mut labels = HashSet::new();
        for l in &label_names {
            if !labels.insert(l.as_str()) {
                return Err(Error::Schema(format!("duplicate label name `{l}`")));
            }
            if seen.contains(l.as_str()) {
                return Err(Error::Schema(format!("label `{l}` is also a feature attribute")));
            }
        }
        Ok(Schema {
            attributes,
            label_names,
        })
    }

    /// Schema with `d` numeric attributes `x0..` and `m` labels `y0..`.
    pub fn numeric(d: usize, m: usize) -> Self {
        Schema {
            attributes: (0..d).map(|i| Attribute::numeric(format!("x{i}"))).collect(),
            label_names: (0..m).map(|j| format!("y{j}")).collect(),
        }
    }

    pub fn n_labels(&self) -> usize {
        self.label_names.len()
    }

    pub fn n_attributes(&self) -> usize {
        self.attributes.len()
    }

    pub fn check_features(&self, x: &FeatureVector) -> Result<()> {
        if x.len() != self.attributes.len() {
            return Err(Error::ArityMismatch {
                expected: self.attributes.len(),
                got: x.len(),
            });
        }
        for (v, a) in x.values.iter().zip(&self.attributes) {
            if !v.conforms_to(&a.kind) {
                return Err(Error::Schema(format!(
                    "value {v:?} does not conform to attribute `{}`",
                    a.name
                )));
            }
        }
        Ok(())
    }
}

/// A multi-label dataset: feature vectors paired with labelsets.
#[derive(Debug, Clone, PartialEq)]
pub struct MLDataset {
    schema: Schema,
    rows: Vec<(FeatureVector, LabelSet)>,
}

impl MLDataset {
    pub fn new(schema: Schema, rows: Vec<(FeatureVector, LabelSet)>) -> Result<Self> {
        let m = schema.n_labels();
        for (x, y) in &rows {
            schema.check_features(x)?;
            if y.universe() != m {
                return Err(Error::UniverseMismatch {
                    left: m,
                    right: y.universe(),
                });
            }
        }
        Ok(MLDataset { schema, rows })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[(FeatureVector, LabelSet)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn n_labels(&self) -> usize {
        self.schema.n_labels()
    }

    pub fn features(&self) -> impl Iterator<Item = &FeatureVector> {
        self.rows.iter().map(|(x, _)| x)
    }

    pub fn labelsets(&self) -> impl Iterator<Item = &LabelSet> {
        self.rows.iter().map(|(_, y)| y)
    }

    /// New dataset over the same schema made of the rows at `indices`
    /// (repeats allowed).
    pub fn subset(&self, indices: &[usize]) -> MLDataset {
        MLDataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Same rows with labelsets replaced by `labels`, under a new label list.
    pub fn with_labels(&self, label_names: Vec<String>, labels: Vec<LabelSet>) -> Result<MLDataset> {
        if labels.len() != self.rows.len() {
            return Err(Error::LengthMismatch {
                expected: self.rows.len(),
                got: labels.len(),
            });
        }
        let schema = Schema {
            attributes: self.schema.attributes.clone(),
            label_names,
        };
        let rows = self.rows.iter().map(|(x, _)| x.clone()).zip(labels).collect();
        MLDataset::new(schema, rows)
    }

    /// Appends the rows of `other`, which must share this schema.
    pub fn concat(&self, other: &MLDataset) -> Result<MLDataset> {
        if self.schema != other.schema {
            return Err(Error::Schema(
                "cannot concatenate datasets with different schemas".into(),
            ));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(MLDataset {
            schema: self.schema.clone(),
            rows,
        })
    }
}

/// Summary statistics of a multi-label dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub n_instances: usize,
    pub n_labels: usize,
    /// Mean labelset size.
    pub lcard: f64,
    /// `lcard / M` over the schema label universe.
    pub lden: f64,
    /// `lcard` divided by the number of labels that occur at least once.
    pub observed_lden: f64,
    pub distinct_labelsets: usize,
}

/// Mean number of labels per instance.
pub fn label_cardinality(d: &MLDataset) -> Result<f64> {
    if d.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let total: usize = d.labelsets().map(LabelSet::cardinality).sum();
    Ok(total as f64 / d.len() as f64)
}

/// Label cardinality divided by the size of the schema's label universe.
pub fn label_density(d: &MLDataset) -> Result<f64> {
    let lcard = label_cardinality(d)?;
    if d.n_labels() == 0 {
        return Err(Error::Schema("dataset has no labels".into()));
    }
    Ok(lcard / d.n_labels() as f64)
}

pub fn dataset_stats(d: &MLDataset) -> Result<DatasetStats> {
    let lcard = label_cardinality(d)?;
    let lden = label_density(d)?;
    let distinct: HashSet<&LabelSet> = d.labelsets().collect();
    let m = d.n_labels();
    let observed = (0..m).filter(|&j| d.labelsets().any(|y| y.contains(j))).count();
    let observed_lden = if observed == 0 { 0.0 } else { lcard / observed as f64 };
    Ok(DatasetStats {
        n_instances: d.len(),
        n_labels: m,
        lcard,
        lden,
        observed_lden,
        distinct_labelsets: distinct.len(),
    })
}
