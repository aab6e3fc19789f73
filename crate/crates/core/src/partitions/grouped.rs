use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::word::Space;

use super::ExplicitPartition;

/// A partition whose blocks are unions of Hamming-weight classes, stored over
/// the weights `{0, .., k}`.
///
/// Groups are kept sorted internally and ordered by their smallest weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedWeightPartition {
    k: usize,
    groups: Vec<Vec<usize>>,
    group_of: Vec<usize>,
    consecutive: bool,
}

impl GroupedWeightPartition {
    pub fn new(k: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut group_of = vec![usize::MAX; k + 1];
        let mut groups = groups;
        for g in groups.iter_mut() {
            if g.is_empty() {
                return Err(Error::InvalidGroups("empty group".into()));
            }
            g.sort_unstable();
        }
        groups.sort_by_key(|g| g[0]);
        for (gi, g) in groups.iter().enumerate() {
            for &w in g {
                if w > k {
                    return Err(Error::InvalidGroups(format!("weight {w} exceeds k={k}")));
                }
                if group_of[w] != usize::MAX {
                    return Err(Error::InvalidGroups(format!("weight {w} appears twice")));
                }
                group_of[w] = gi;
            }
        }
        if let Some(w) = group_of.iter().position(|&g| g == usize::MAX) {
            return Err(Error::InvalidGroups(format!("weight {w} is not covered")));
        }
        let consecutive = groups.iter().all(|g| g.windows(2).all(|p| p[1] == p[0] + 1));
        Ok(GroupedWeightPartition { k, groups, group_of, consecutive })
    }

    /// One group per weight.
    pub fn weight(k: usize) -> Self {
        Self::new(k, (0..=k).map(|w| vec![w]).collect()).unwrap()
    }

    /// Groups `{w : ⌊w/T⌋ = j}`.
    pub fn hwdf(k: usize, width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidArgs("interval width must be at least 1".into()));
        }
        let groups = (0..=k)
            .step_by(width)
            .map(|lo| (lo..=(lo + width - 1).min(k)).collect())
            .collect();
        Self::new(k, groups)
    }

    /// Groups from a weight-to-label map.
    pub fn from_weight_labels<L: std::hash::Hash + Eq>(labels: &[L]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidGroups("no weights".into()));
        }
        let mut ids: HashMap<&L, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (w, l) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(l).or_insert(next);
            if id == groups.len() {
                groups.push(Vec::new());
            }
            groups[id].push(w);
        }
        Self::new(labels.len() - 1, groups)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn is_consecutive(&self) -> bool {
        self.consecutive
    }

    pub fn group_of(&self, weight: usize) -> usize {
        self.group_of[weight]
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!("grouped partitions with k={} and k={}", self.k, other.k)));
        }
        let labels: Vec<(usize, usize)> = (0..=self.k).map(|w| (self.group_of[w], other.group_of[w])).collect();
        Self::from_weight_labels(&labels)
    }

    pub fn materialize(&self, field: &Field) -> Result<ExplicitPartition> {
        let space = Space::new(field.clone(), self.k)?;
        let labels: Vec<usize> = (0..space.size()).map(|r| self.group_of[space.weight(r)]).collect();
        ExplicitPartition::from_labels(space, labels)
    }
}

pub fn weight_partition(k: usize) -> GroupedWeightPartition {
    GroupedWeightPartition::weight(k)
}

pub fn hwdf_partition(k: usize, width: usize) -> Result<GroupedWeightPartition> {
    GroupedWeightPartition::hwdf(k, width)
}

pub fn join_grouped(a: &GroupedWeightPartition, b: &GroupedWeightPartition) -> Result<GroupedWeightPartition> {
    a.join(b)
}
