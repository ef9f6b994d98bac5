//! Dataset input: ARFF parsing, label binding and train/test splitting.

pub mod arff;
mod labels;
mod split;

use std::path::Path;

pub use arff::{parse_arff, write_arff, ArffError, ArffErrorKind, RawTable};
pub use labels::{bind_labels, dataset_to_table, parse_label_file, read_label_file, LabelSpec};
pub use split::{split_dataset, SplitSize, SplitSpec};

use crate::data::MLDataset;
use crate::error::{Error, Result};

/// Reads an ARFF file and binds its labels.
pub fn load_arff(path: impl AsRef<Path>, spec: &LabelSpec) -> Result<MLDataset> {
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let raw = parse_arff(&text)?;
    bind_labels(&raw, spec)
}
