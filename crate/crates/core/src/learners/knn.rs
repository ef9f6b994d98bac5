use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::encode::{Column, Encoder};
use super::ClassDistribution;
use crate::data::FeatureVector;
use crate::error::Result;

/// Distance over standardized numeric attributes; nominal attributes add
/// 1 on mismatch, 0 on match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    #[default]
    Euclidean,
    Manhattan,
}

#[derive(Debug, Clone)]
pub struct KnnModel {
    encoder: Encoder,
    k: usize,
    distance: Distance,
    n_classes: usize,
    /// Row-major standardized training rows.
    points: Vec<f64>,
    classes: Vec<usize>,
}

impl KnnModel {
    pub(crate) fn fit(
        encoder: Encoder,
        rows: &[&FeatureVector],
        classes: &[usize],
        n_classes: usize,
        k: usize,
        distance: Distance,
    ) -> Result<Self> {
        let mut points = Vec::with_capacity(rows.len() * encoder.width());
        for x in rows {
            points.extend(encoder.encode_standardized(x)?);
        }
        Ok(KnnModel {
            encoder,
            k: k.min(rows.len()),
            distance,
            n_classes,
            points,
            classes: classes.to_vec(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub(crate) fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn distance_to(&self, query: &[f64], row: usize) -> f64 {
        let w = query.len();
        let point = &self.points[row * w..(row + 1) * w];
        let mut acc = 0.0;
        for ((q, p), col) in query.iter().zip(point).zip(&self.encoder.columns) {
            let d = match col {
                Column::Numeric { .. } => q - p,
                Column::Nominal { .. } => {
                    if q == p {
                        0.0
                    } else {
                        1.0
                    }
                }
            };
            acc += match self.distance {
                Distance::Euclidean => d * d,
                Distance::Manhattan => d.abs(),
            };
        }
        acc
    }

    /// Indices of the `k` nearest training rows; distance ties go to the
    /// lower row index.
    pub fn neighbors(&self, x: &FeatureVector) -> Result<Vec<usize>> {
        let query = self.encoder.encode_standardized(x)?;
        let mut cand: Vec<(f64, usize)> = (0..self.classes.len())
            .map(|r| (self.distance_to(&query, r), r))
            .collect();
        let by_dist =
            |a: &(f64, usize), b: &(f64, usize)| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1));
        if self.k < cand.len() {
            cand.select_nth_unstable_by(self.k - 1, by_dist);
            cand.truncate(self.k);
        }
        cand.sort_by(by_dist);
        Ok(cand.into_iter().map(|(_, r)| r).collect())
    }

    pub(crate) fn predict_dist(&self, x: &FeatureVector) -> Result<ClassDistribution> {
        let mut counts = vec![0.0; self.n_classes];
        let nn = self.neighbors(x)?;
        for &r in &nn {
            counts[self.classes[r]] += 1.0;
        }
        Ok(ClassDistribution::from_counts(&counts))
    }
}
