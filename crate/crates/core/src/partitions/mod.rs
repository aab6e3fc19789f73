//! Partitions of F_q^k: dense explicit labelings, subspaces and their cosets,
//! and compact grouped-weight partitions.

mod explicit;
mod grouped;
mod json;
mod subspace;

use num_bigint::BigUint;

pub use explicit::{coordinate_partition, is_refinement, support_partition, ExplicitPartition};
pub use grouped::{hwdf_partition, join_grouped, weight_partition, GroupedWeightPartition};
pub use subspace::{coordinate_kernel, kernel_intersection, Subspace};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::word::Word;

/// Either partition form, as consumed by the encoding pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Partition {
    Explicit(ExplicitPartition),
    Grouped { groups: GroupedWeightPartition, field: Field },
}

impl Partition {
    pub fn field(&self) -> &Field {
        match self {
            Partition::Explicit(p) => p.field(),
            Partition::Grouped { field, .. } => field,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Partition::Explicit(p) => p.k(),
            Partition::Grouped { groups, .. } => groups.k(),
        }
    }

    pub fn num_blocks(&self) -> usize {
        match self {
            Partition::Explicit(p) => p.num_blocks(),
            Partition::Grouped { groups, .. } => groups.num_groups(),
        }
    }

    pub fn block_of_word(&self, w: &Word) -> Result<usize> {
        match self {
            Partition::Explicit(p) => p.block_of_word(w),
            Partition::Grouped { groups, field } => {
                if w.q() != field.q() || w.len() != groups.k() {
                    return Err(Error::DimensionMismatch(format!(
                        "word of length {} for grouped partition with k={}",
                        w.len(),
                        groups.k()
                    )));
                }
                Ok(groups.group_of(w.weight()))
            }
        }
    }

    /// The explicit form, materializing grouped partitions if they fit the cap.
    pub fn to_explicit(&self) -> Result<ExplicitPartition> {
        match self {
            Partition::Explicit(p) => Ok(p.clone()),
            Partition::Grouped { groups, field } => groups.materialize(field),
        }
    }
}

impl From<ExplicitPartition> for Partition {
    fn from(p: ExplicitPartition) -> Self {
        Partition::Explicit(p)
    }
}

/// Number of functions with codomain size `h` inducing a fixed partition into
/// `e` blocks: `h! / (h - e)!`.
pub fn function_class_size(h: u64, e: u64) -> Result<BigUint> {
    if e == 0 || h < e {
        return Err(Error::InvalidArgs(format!("need h ≥ e ≥ 1, got h={h}, e={e}")));
    }
    Ok(((h - e + 1)..=h).fold(BigUint::from(1u32), |acc, x| acc * x))
}
