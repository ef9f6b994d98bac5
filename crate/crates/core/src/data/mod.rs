//! Domain types shared by every other module: labelsets, feature vectors,
//! datasets and their label statistics.
//!
//! All types are immutable once built and can be shared freely between
//! worker threads.

mod dataset;
mod labelset;

pub use dataset::{
    dataset_stats, label_cardinality, label_density, Attribute, AttributeKind, AttributeValue, DatasetStats,
    FeatureVector, MLDataset, Schema,
};
pub use labelset::{labelset_symdiff_count, LabelSet};
