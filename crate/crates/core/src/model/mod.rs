//! Records, partitions and probability distributions over partitions.

mod distribution;
mod entropy;
mod factored;
pub mod fixtures;
mod partition;
mod record;

pub use distribution::{normalize, PartitionDistribution, NORMALIZATION_TOLERANCE};
pub use entropy::{shannon_entropy, BITS};
pub(crate) use entropy::{check_base, entropy_nats};
pub use factored::FactoredDistribution;
pub use partition::Partition;
pub use record::{ensure_unique_ids, Record, RecordId, RecordPair};
