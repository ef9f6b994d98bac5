use crate::data::{Attribute, AttributeKind, AttributeValue, FeatureVector};
use crate::error::{Error, Result};

/// Per-attribute preprocessing fitted on training data.
///
/// Missing numeric values become the training mean. Missing nominal values
/// become an extra category placed after the declared ones.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Encoder {
    pub(crate) columns: Vec<Column>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Column {
    Numeric {
        mean: f64,
        std: f64,
    },
    /// `categories` includes the trailing missing-value category.
    Nominal {
        categories: usize,
    },
}

impl Encoder {
    pub(crate) fn fit(attributes: &[Attribute], rows: &[&FeatureVector]) -> Result<Self> {
        for x in rows {
            if x.len() != attributes.len() {
                return Err(Error::ArityMismatch {
                    expected: attributes.len(),
                    got: x.len(),
                });
            }
        }
        let columns = attributes
            .iter()
            .enumerate()
            .map(|(i, a)| match &a.kind {
                AttributeKind::Numeric => {
                    let vals: Vec<f64> = rows
                        .iter()
                        .filter_map(|x| match x.values[i] {
                            AttributeValue::Numeric(v) => Some(v),
                            _ => None,
                        })
                        .collect();
                    let n = vals.len() as f64;
                    let mean = if vals.is_empty() {
                        0.0
                    } else {
                        vals.iter().sum::<f64>() / n
                    };
                    let var = if vals.is_empty() {
                        0.0
                    } else {
                        vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n
                    };
                    let std = if var > 0.0 { var.sqrt() } else { 1.0 };
                    Column::Numeric { mean, std }
                }
                AttributeKind::Nominal(values) => Column::Nominal {
                    categories: values.len() + 1,
                },
            })
            .collect();
        Ok(Encoder { columns })
    }

    pub(crate) fn width(&self) -> usize {
        self.columns.len()
    }

    /// Imputed values: raw numeric values, nominal category indices as reals.
    pub(crate) fn encode(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        if x.len() != self.columns.len() {
            return Err(Error::ArityMismatch {
                expected: self.columns.len(),
                got: x.len(),
            });
        }
        x.values
            .iter()
            .zip(&self.columns)
            .map(|(v, c)| match (v, c) {
                (AttributeValue::Numeric(v), Column::Numeric { .. }) => Ok(*v),
                (AttributeValue::Missing, Column::Numeric { mean, .. }) => Ok(*mean),
                (AttributeValue::Nominal(i), Column::Nominal { categories }) => {
                    if (*i as usize) < categories - 1 {
                        Ok(*i as f64)
                    } else {
                        Err(Error::Schema(format!("nominal index {i} out of range")))
                    }
                }
                (AttributeValue::Missing, Column::Nominal { categories }) => Ok((categories - 1) as f64),
                _ => Err(Error::Schema(
                    "feature value kind does not match the training schema".into(),
                )),
            })
            .collect()
    }

    /// Like [`Encoder::encode`] with numeric columns standardized.
    pub(crate) fn encode_standardized(&self, x: &FeatureVector) -> Result<Vec<f64>> {
        let mut v = self.encode(x)?;
        for (value, c) in v.iter_mut().zip(&self.columns) {
            if let Column::Numeric { mean, std } = c {
                *value = (*value - mean) / std;
            }
        }
        Ok(v)
    }
}
