use crate::data::MLDataset;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitSize {
    Counts {
        train: usize,
        test: usize,
    },
    /// Train fraction; the train part gets `floor(N * ratio)` rows.
    Ratio(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub size: SplitSize,
    pub seed: u64,
}

impl SplitSpec {
    pub fn counts(train: usize, test: usize, seed: u64) -> Self {
        SplitSpec {
            size: SplitSize::Counts { train, test },
            seed,
        }
    }

    pub fn ratio(ratio: f64, seed: u64) -> Self {
        SplitSpec {
            size: SplitSize::Ratio(ratio),
            seed,
        }
    }

    fn train_count(&self, n: usize) -> Result<usize> {
        match self.size {
            SplitSize::Counts { train, test } => {
                if train + test != n {
                    return Err(Error::Split(format!(
                        "counts {train}+{test} do not sum to the {n} available rows"
                    )));
                }
                Ok(train)
            }
            SplitSize::Ratio(r) => {
                if !(r > 0.0 && r < 1.0) {
                    return Err(Error::Split(format!("ratio {r} is outside (0, 1)")));
                }
                Ok((n as f64 * r).floor() as usize)
            }
        }
    }
}

/// Seeded train/test partition. Rows of both parts appear in shuffled order.
pub fn split_dataset(d: &MLDataset, spec: &SplitSpec) -> Result<(MLDataset, MLDataset)> {
    let n_train = spec.train_count(d.len())?;
    let perm = SeededRng::new(spec.seed).permutation(d.len());
    let (train, test) = perm.split_at(n_train);
    Ok((d.subset(train), d.subset(test)))
}
