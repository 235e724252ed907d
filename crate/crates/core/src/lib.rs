//! Bit strings, the hypercube automorphism group, supporting partitions,
//! hereditarily finite sets over `{0,1}^n`, and the orbit bounds for
//! preorders on the hypercube.
//!
//! Positions are 0-based in the API and printed 1-based.

pub mod bits;
pub mod error;
pub mod group;
pub mod hf;
pub mod hypercube;
pub mod lemmas;
pub mod partition;
pub mod perm;
pub mod preorder;
pub mod realize;

pub use bits::{BitString, PosSet, StringSet, MAX_DIM};
pub use error::{Error, Result};
pub use hf::{encode_ordered_partition, HfObject};
pub use group::{factorial, PermGroup, SymEngine, DEFAULT_CAP};
pub use hypercube::{hamming_distance, Hypercube};
pub use partition::{coarsest_supporting_partition, Partition};
pub use perm::{AutPair, PositionPerm};
pub use preorder::{Family, OrderedPartition};
pub use realize::{PartPermTuple, SupportFamily, ThetaOutcome};
