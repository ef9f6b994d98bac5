//! Multi-label classification: problem transformations (binary relevance,
//! label powerset, RAKEL, pruned sets), the EN-MLC heterogeneous ensemble,
//! base learners, ARFF/Mulan dataset I/O and evaluation measures.

pub mod bench;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod learners;
pub mod metrics;
pub mod rng;
pub mod synthetic;
pub mod transforms;

pub use error::{Error, Result};
