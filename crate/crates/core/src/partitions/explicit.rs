use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::word::{Space, Word};

/// A partition of F_q^k stored as one block id per rank.
///
/// Block ids are canonical: block `i` is the `i`-th block met when scanning
/// ranks upward, so two partitions are equal iff their `block_of` arrays are.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitPartition {
    space: Space,
    block_of: Vec<u32>,
    num_blocks: usize,
}

impl ExplicitPartition {
    /// Any labeling by hashable values; labels are replaced by canonical ids.
    pub fn from_labels<L: Hash + Eq>(space: Space, labels: impl IntoIterator<Item = L>) -> Result<Self> {
        let mut ids: HashMap<L, u32> = HashMap::new();
        let mut block_of = Vec::with_capacity(space.size());
        for l in labels {
            let next = ids.len() as u32;
            block_of.push(*ids.entry(l).or_insert(next));
        }
        if block_of.len() != space.size() {
            return Err(Error::SizeMismatch { expected: space.size(), got: block_of.len() });
        }
        Ok(ExplicitPartition { space, block_of, num_blocks: ids.len() })
    }

    pub fn from_block_ids(space: Space, ids: &[u32]) -> Result<Self> {
        Self::from_labels(space, ids.iter().copied())
    }

    /// Domain partition of `f`.
    pub fn from_function<L: Hash + Eq>(space: Space, f: impl Fn(&Word) -> L) -> Result<Self> {
        let labels: Vec<L> = space.words().map(|w| f(&w)).collect();
        Self::from_labels(space, labels)
    }

    pub fn finest(space: Space) -> Self {
        let n = space.size();
        ExplicitPartition { space, block_of: (0..n as u32).collect(), num_blocks: n }
    }

    pub fn single_block(space: Space) -> Self {
        let n = space.size();
        ExplicitPartition { space, block_of: vec![0; n], num_blocks: 1 }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn k(&self) -> usize {
        self.space.k()
    }

    pub fn num_blocks(&self) -> usize {
        self.num_blocks
    }

    pub fn block_ids(&self) -> &[u32] {
        &self.block_of
    }

    #[inline]
    pub fn block_of(&self, rank: usize) -> usize {
        self.block_of[rank] as usize
    }

    pub fn block_of_word(&self, w: &Word) -> Result<usize> {
        Ok(self.block_of(self.space.rank(w)?))
    }

    /// Ranks of every block, each in increasing order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks];
        for (r, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(r);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_blocks];
        for &b in &self.block_of {
            out[b as usize] += 1;
        }
        out
    }

    pub fn check_block(&self, id: usize) -> Result<()> {
        if id >= self.num_blocks {
            return Err(Error::BadBlockId { id, blocks: self.num_blocks });
        }
        Ok(())
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch(format!(
                "partitions of q={} k={} and q={} k={}",
                self.space.q(),
                self.k(),
                other.space.q(),
                other.k()
            )));
        }
        Ok(())
    }

    /// Coarsest common refinement.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let labels = self.block_of.iter().zip(&other.block_of).map(|(&a, &b)| (a, b));
        Self::from_labels(self.space.clone(), labels)
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Self) -> Result<bool> {
        self.check_same_space(coarser)?;
        let mut image = vec![u32::MAX; self.num_blocks];
        for (&a, &b) in self.block_of.iter().zip(&coarser.block_of) {
            let slot = &mut image[a as usize];
            if *slot == u32::MAX {
                *slot = b;
            } else if *slot != b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Merge blocks through `map: block id -> new label`.
    pub fn coarsen(&self, map: &[u32]) -> Result<Self> {
        if map.len() != self.num_blocks {
            return Err(Error::SizeMismatch { expected: self.num_blocks, got: map.len() });
        }
        Self::from_labels(self.space.clone(), self.block_of.iter().map(|&b| map[b as usize]))
    }
}

/// `q` refines `p`.
pub fn is_refinement(q: &ExplicitPartition, p: &ExplicitPartition) -> Result<bool> {
    q.refines(p)
}

pub fn support_partition(space: Space) -> Result<ExplicitPartition> {
    ExplicitPartition::from_function(space, |w| {
        w.digits().iter().enumerate().fold(0u64, |m, (i, &d)| if d != 0 { m | 1 << i } else { m })
    })
}

/// Blocks `{x : x_J = a}`; `coords` are 0-based.
pub fn coordinate_partition(space: Space, coords: &[usize]) -> Result<ExplicitPartition> {
    if let Some(&i) = coords.iter().find(|&&i| i >= space.k()) {
        return Err(Error::InvalidArgs(format!("coordinate {} outside 1..={}", i + 1, space.k())));
    }
    let coords = coords.to_vec();
    ExplicitPartition::from_function(space, move |w| {
        coords.iter().map(|&i| w.digits()[i]).collect::<Vec<u8>>()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn space(q: u32, k: usize) -> Space {
        Space::new(Field::new(q).unwrap(), k).unwrap()
    }

    fn block_strings(p: &ExplicitPartition) -> Vec<Vec<String>> {
        p.blocks()
            .iter()
            .map(|b| b.iter().map(|&r| p.space().word(r).to_string()).collect())
            .collect()
    }

    #[test]
    fn weight_domain_partition() {
        let p = ExplicitPartition::from_function(space(2, 3), |w| w.weight()).unwrap();
        let mut blocks: Vec<Vec<String>> = block_strings(&p)
            .into_iter()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        blocks.sort_by_key(|b| b.len());
        assert_eq!(p.num_blocks(), 4);
        assert!(blocks.contains(&vec!["000".to_string()]));
        assert!(blocks.contains(&vec!["111".to_string()]));
        assert!(blocks.contains(&vec!["001".into(), "010".into(), "100".into()]));
        assert!(blocks.contains(&vec!["011".into(), "101".into(), "110".into()]));
    }

    #[test]
    fn constant_and_identity() {
        let s = space(3, 2);
        let c = ExplicitPartition::from_function(s.clone(), |_| 0).unwrap();
        assert_eq!(c, ExplicitPartition::single_block(s.clone()));
        let id = ExplicitPartition::from_function(s.clone(), |w| w.clone()).unwrap();
        assert_eq!(id, ExplicitPartition::finest(s));
    }

    // Ground set {1..7} embedded as ranks 1..=7 of F_2^3, with 0 in its own block.
    fn example_one() -> (ExplicitPartition, ExplicitPartition) {
        let s = space(2, 3);
        let p_lab = [0, 1, 2, 1, 1, 2, 3, 3];
        let q_lab = [0, 1, 1, 2, 2, 1, 3, 4];
        (
            ExplicitPartition::from_block_ids(s.clone(), &p_lab).unwrap(),
            ExplicitPartition::from_block_ids(s, &q_lab).unwrap(),
        )
    }

    #[test]
    fn join_of_set_example() {
        let (p, q) = example_one();
        let j = p.join(&q).unwrap();
        let mut blocks = j.blocks();
        blocks.retain(|b| b != &vec![0]);
        blocks.sort();
        assert_eq!(blocks, vec![vec![1], vec![2, 5], vec![3, 4], vec![6], vec![7]]);
        assert!(!p.refines(&q).unwrap());
        assert!(!q.refines(&p).unwrap());
        assert!(j.refines(&p).unwrap() && j.refines(&q).unwrap());
    }

    #[test]
    fn join_identities() {
        let (p, _) = example_one();
        assert_eq!(p.join(&p).unwrap(), p);
        let fine = ExplicitPartition::finest(p.space().clone());
        assert_eq!(p.join(&fine).unwrap(), fine);
        assert!(fine.refines(&p).unwrap());
        let other = ExplicitPartition::finest(space(2, 4));
        assert!(matches!(p.join(&other), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn support_finer_than_weight() {
        let s = space(2, 3);
        let sp = support_partition(s.clone()).unwrap();
        let wp = ExplicitPartition::from_function(s.clone(), |w| w.weight()).unwrap();
        assert!(sp.refines(&wp).unwrap());
        assert!(!wp.refines(&sp).unwrap());
        assert_eq!(sp, ExplicitPartition::finest(s));
    }

    #[test]
    fn support_f3() {
        let sp = support_partition(space(3, 3)).unwrap();
        let mut sizes = sp.block_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 2, 2, 4, 4, 4, 8]);
    }

    #[test]
    fn coordinate_f3() {
        let cp = coordinate_partition(space(3, 3), &[1, 2]).unwrap();
        assert_eq!(cp.num_blocks(), 9);
        assert!(cp.block_sizes().iter().all(|&s| s == 3));
        for b in cp.blocks() {
            let ws: Vec<Word> = b.iter().map(|&r| cp.space().word(r)).collect();
            assert!(ws.iter().all(|w| w.digits()[1..] == ws[0].digits()[1..]));
        }
    }

    #[test]
    fn canonical_ids() {
        let s = space(2, 2);
        let p = ExplicitPartition::from_block_ids(s, &[7, 3, 7, 9]).unwrap();
        assert_eq!(p.block_ids(), &[0, 1, 0, 2]);
        assert!(p.check_block(3).is_err());
    }
}
