//! Block-preserving contractions `φ : F_q^k → U`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::partitions::{ExplicitPartition, Subspace};
use crate::pgraph::Clique;
use crate::word::{space_size, Space, Word};

/// How `φ` is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiRule {
    /// `map[rank]` is an index into the image.
    Dense(Vec<u32>),
    /// `x ↦ 1^{wt(x)} 0^{k−wt(x)}`.
    Weight,
    /// Zero every coordinate outside the listed (0-based, increasing) ones.
    Mask(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    field: Field,
    k: usize,
    image: Vec<Word>,
    rule: PhiRule,
}

impl Contraction {
    /// A dense contraction from its image and a rank-indexed map into it.
    pub fn dense(space: &Space, image: Vec<Word>, map: Vec<u32>) -> Result<Self> {
        if map.len() != space.size() {
            return Err(Error::SizeMismatch { expected: space.size(), got: map.len() });
        }
        for w in &image {
            space.rank(w)?;
        }
        if let Some(&i) = map.iter().find(|&&i| i as usize >= image.len()) {
            return Err(Error::InvalidArgs(format!("image index {i} out of range")));
        }
        Ok(Contraction { field: space.field().clone(), k: space.k(), image, rule: PhiRule::Dense(map) })
    }

    /// Tabulate `phi` over the whole space; the image is listed in rank order.
    pub fn from_fn(space: &Space, phi: impl Fn(&Word) -> Word) -> Result<Self> {
        let targets = space.words().map(|w| space.rank(&phi(&w))).collect::<Result<Vec<usize>>>()?;
        let mut ranks = targets.clone();
        ranks.sort_unstable();
        ranks.dedup();
        let map = targets.iter().map(|t| ranks.binary_search(t).unwrap() as u32).collect();
        let image = ranks.iter().map(|&r| space.word(r)).collect();
        Self::dense(space, image, map)
    }

    pub fn identity(space: &Space) -> Self {
        Contraction {
            field: space.field().clone(),
            k: space.k(),
            image: space.words().collect(),
            rule: PhiRule::Dense((0..space.size() as u32).collect()),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The set `U`.
    pub fn image(&self) -> &[Word] {
        &self.image
    }

    pub fn rule(&self) -> &PhiRule {
        &self.rule
    }

    /// Index into the image of `φ(w)`.
    pub fn apply_index(&self, w: &Word) -> Result<usize> {
        if w.q() != self.field.q() || w.len() != self.k {
            return Err(Error::DimensionMismatch(format!("word of length {} for k={}", w.len(), self.k)));
        }
        Ok(match &self.rule {
            PhiRule::Dense(map) => {
                let r = w.rank().unwrap() as usize;
                map[r] as usize
            }
            PhiRule::Weight => w.weight(),
            PhiRule::Mask(coords) => {
                let q = self.field.q() as usize;
                coords.iter().rev().fold(0usize, |acc, &c| acc * q + w.digits()[c] as usize)
            }
        })
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        Ok(self.image[self.apply_index(w)?].clone())
    }

    fn image_ranks(&self, space: &Space) -> Vec<usize> {
        match &self.rule {
            PhiRule::Dense(map) => {
                let img: Vec<usize> = self.image.iter().map(|w| space.rank(w).unwrap()).collect();
                map.iter().map(|&i| img[i as usize]).collect()
            }
            _ => (0..space.size()).map(|r| space.rank(&self.apply(&space.word(r)).unwrap()).unwrap()).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let phi = match &self.rule {
            PhiRule::Dense(map) => PhiJson::Dense { map: map.clone() },
            PhiRule::Weight => PhiJson::Weight,
            PhiRule::Mask(c) => PhiJson::Mask { coords: c.iter().map(|i| i + 1).collect() },
        };
        let u = match &self.rule {
            PhiRule::Dense(_) => Some(self.image.iter().map(|w| w.rank().unwrap()).collect()),
            _ => None,
        };
        serde_json::to_value(ContractionJson { q: self.field.q(), k: self.k, u, phi }).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let c: ContractionJson = serde_json::from_value(v.clone())?;
        let field = Field::new(c.q)?;
        match c.phi {
            PhiJson::Dense { map } => {
                let space = Space::new(field, c.k)?;
                let u = c.u.ok_or_else(|| Error::Parse("dense contraction needs U".into()))?;
                let image = u
                    .into_iter()
                    .map(|r| {
                        if r as usize >= space.size() {
                            Err(Error::InvalidArgs(format!("rank {r} outside the space")))
                        } else {
                            Ok(space.word(r as usize))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::dense(&space, image, map)
            }
            PhiJson::Weight => Ok(weight_contraction(&field, c.k)),
            PhiJson::Mask { coords } => {
                if coords.iter().any(|&j| j == 0 || j > c.k) {
                    return Err(Error::InvalidArgs("J entries must lie in 1..=k".into()));
                }
                let zero_based: Vec<usize> = coords.iter().map(|j| j - 1).collect();
                Ok(mask_contraction(&field, c.k, &zero_based))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ContractionJson {
    q: u32,
    k: usize,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    u: Option<Vec<u64>>,
    phi: PhiJson,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum PhiJson {
    Dense { map: Vec<u32> },
    Weight,
    Mask {
        #[serde(rename = "J")]
        coords: Vec<usize>,
    },
}

/// `U' = {1^i 0^{k−i}}`, `φ(x) = v_{wt(x)}`.
pub fn weight_contraction(field: &Field, k: usize) -> Contraction {
    let q = field.q();
    let image = (0..=k)
        .map(|i| {
            let mut d = vec![0u8; k];
            d[..i].fill(1);
            Word::new(q, d).unwrap()
        })
        .collect();
    Contraction { field: field.clone(), k, image, rule: PhiRule::Weight }
}

fn mask_contraction(field: &Field, k: usize, coords: &[usize]) -> Contraction {
    let mut coords = coords.to_vec();
    coords.sort_unstable();
    coords.dedup();
    let q = field.q();
    let count = space_size(q, coords.len()) as u64;
    let image = (0..count)
        .map(|a| {
            let alpha = Word::from_rank(q, coords.len(), a);
            let mut d = vec![0u8; k];
            for (&c, &x) in coords.iter().zip(alpha.digits()) {
                d[c] = x;
            }
            Word::new(q, d).unwrap()
        })
        .collect();
    Contraction { field: field.clone(), k, image, rule: PhiRule::Mask(coords) }
}

/// `(S_J, φ_J)` when every word supported off `J` lies in `V`; `None` otherwise.
/// `coords` are 0-based.
pub fn coset_contraction(v: &Subspace, coords: &[usize]) -> Result<Option<Contraction>> {
    let k = v.k();
    if let Some(&c) = coords.iter().find(|&&c| c >= k) {
        return Err(Error::InvalidArgs(format!("coordinate {} outside 1..={k}", c + 1)));
    }
    let field = v.field();
    for i in (0..k).filter(|i| !coords.contains(i)) {
        for a in 1..field.q() {
            let mut e = vec![0u8; k];
            e[i] = a as u8;
            if !v.contains(&e) {
                return Ok(None);
            }
        }
    }
    Ok(Some(mask_contraction(field, k, coords)))
}

/// Maps every word to the clique vertex of its block.
pub fn clique_to_contraction(p: &ExplicitPartition, clique: &Clique) -> Result<Contraction> {
    let mut vertex_of_block = vec![u32::MAX; p.num_blocks()];
    for (i, w) in clique.vertices.iter().enumerate() {
        let b = p.block_of_word(w)?;
        if vertex_of_block[b] != u32::MAX {
            return Err(Error::NotFullSize(format!("block {b} holds two vertices")));
        }
        vertex_of_block[b] = i as u32;
    }
    if let Some(b) = vertex_of_block.iter().position(|&v| v == u32::MAX) {
        return Err(Error::NotFullSize(format!("block {b} has no vertex")));
    }
    let map = p.block_ids().iter().map(|&b| vertex_of_block[b as usize]).collect();
    Contraction::dense(p.space(), clique.vertices.clone(), map)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ContractionViolation {
    BlockNotPreserved { word: String, image: String },
    NotIdentityOnImage { word: String, image: String },
    DistanceIncreased { u: String, v: String, distance: usize, image_distance: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum VerificationMode {
    Exhaustive { pairs: u64 },
    Sampled { samples: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionVerdict {
    pub valid: bool,
    pub mode: VerificationMode,
    pub violation: Option<ContractionViolation>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Largest q^k checked over all pairs.
    pub exhaustive_cap: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { exhaustive_cap: 1 << 11, samples: 1_000_000, seed: 0x5eed }
    }
}

/// Checks block preservation, identity on `U` and distance non-increase.
pub fn verify_contraction(p: &ExplicitPartition, c: &Contraction, opts: &VerifyOptions) -> Result<ContractionVerdict> {
    let space = p.space();
    if c.field() != space.field() || c.k() != space.k() {
        return Err(Error::DimensionMismatch("contraction and partition live in different spaces".into()));
    }
    let n = space.size();
    let phi = c.image_ranks(space);
    let exhaustive = n <= opts.exhaustive_cap;
    let fail = |violation| ContractionVerdict {
        valid: false,
        mode: if exhaustive {
            VerificationMode::Exhaustive { pairs: 0 }
        } else {
            VerificationMode::Sampled { samples: 0 }
        },
        violation: Some(violation),
    };
    if let Some(u) = (0..n).find(|&u| p.block_of(phi[u]) != p.block_of(u)) {
        return Ok(fail(ContractionViolation::BlockNotPreserved {
            word: space.word(u).to_string(),
            image: space.word(phi[u]).to_string(),
        }));
    }
    for w in c.image() {
        let r = space.rank(w)?;
        if phi[r] != r {
            return Ok(fail(ContractionViolation::NotIdentityOnImage {
                word: w.to_string(),
                image: space.word(phi[r]).to_string(),
            }));
        }
    }
    let check = |u: usize, v: usize| {
        p.block_of(u) == p.block_of(v) || space.distance(phi[u], phi[v]) <= space.distance(u, v)
    };
    let distance_fail = |u: usize, v: usize| {
        fail(ContractionViolation::DistanceIncreased {
            u: space.word(u).to_string(),
            v: space.word(v).to_string(),
            distance: space.distance(u, v),
            image_distance: space.distance(phi[u], phi[v]),
        })
    };
    if exhaustive {
        let bad = (0..n).into_par_iter().find_map_first(|u| ((u + 1)..n).find(|&v| !check(u, v)).map(|v| (u, v)));
        if let Some((u, v)) = bad {
            return Ok(distance_fail(u, v));
        }
        let pairs = (n as u64) * (n as u64 - 1) / 2;
        Ok(ContractionVerdict { valid: true, mode: VerificationMode::Exhaustive { pairs }, violation: None })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if !check(u, v) {
                return Ok(distance_fail(u.min(v), u.max(v)));
            }
        }
        Ok(ContractionVerdict { valid: true, mode: VerificationMode::Sampled { samples: opts.samples }, violation: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{support_partition, weight_partition, GroupedWeightPartition};
    use crate::pgraph::{support_clique, weight_clique};

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn verify(p: &ExplicitPartition, c: &Contraction) -> ContractionVerdict {
        verify_contraction(p, c, &VerifyOptions::default()).unwrap()
    }

    #[test]
    fn weight_contraction_image() {
        let c = weight_contraction(&f(2), 3);
        let img: Vec<String> = c.image().iter().map(|w| w.to_string()).collect();
        assert_eq!(img, vec!["000", "100", "110", "111"]);
        let p = weight_partition(3).materialize(&f(3)).unwrap();
        assert!(verify(&p, &weight_contraction(&f(3), 3)).valid);
        let d2 = crate::partitions::hwdf_partition(4, 2).unwrap().materialize(&f(2)).unwrap();
        assert!(verify(&d2, &weight_contraction(&f(2), 4)).valid);
    }

    #[test]
    fn identity_and_collapse() {
        let space = Space::new(f(2), 3).unwrap();
        let p = weight_partition(3).materialize(&f(2)).unwrap();
        let v = verify(&p, &Contraction::identity(&space));
        assert!(v.valid);
        assert_eq!(v.mode, VerificationMode::Exhaustive { pairs: 28 });
        let collapse = Contraction::from_fn(&space, |_| Word::zero(2, 3)).unwrap();
        let v = verify(&p, &collapse);
        assert!(!v.valid);
        assert!(matches!(v.violation, Some(ContractionViolation::BlockNotPreserved { .. })));
    }

    #[test]
    fn coset_contraction_f2_5() {
        let v = Subspace::from_generators(f(2), 5, &[vec![1, 1, 1, 0, 0], vec![0, 0, 0, 1, 0], vec![0, 0, 0, 0, 1]])
            .unwrap();
        let c = coset_contraction(&v, &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(c.image().len(), 8);
        let p = v.coset_partition().unwrap();
        assert!(verify(&p, &c).valid);
        assert!(coset_contraction(&v, &[0, 1]).unwrap().is_none());
        let whole = Subspace::whole(f(3), 2);
        let all = coset_contraction(&whole, &[0, 1]).unwrap().unwrap();
        assert_eq!(all.image().len(), 9);
        let none = coset_contraction(&whole, &[]).unwrap().unwrap();
        assert_eq!(none.image(), &[Word::zero(3, 2)]);
    }

    #[test]
    fn clique_contractions() {
        let p = weight_partition(3).materialize(&f(2)).unwrap();
        let c = clique_to_contraction(&p, &weight_clique(&f(2), 3, 1).unwrap()).unwrap();
        assert_eq!(c.image().len(), 4);
        assert!(verify(&p, &c).valid);
        let s = support_partition(Space::new(f(3), 3).unwrap()).unwrap();
        let c = clique_to_contraction(&s, &support_clique(&f(3), 3, 1).unwrap()).unwrap();
        assert_eq!(c.image().len(), 8);
        assert!(verify(&s, &c).valid);
        let partial = Clique::new(vec![Word::zero(2, 3)]);
        assert!(matches!(clique_to_contraction(&p, &partial), Err(Error::NotFullSize(_))));
    }

    #[test]
    fn transfer_to_coarsening() {
        let p = weight_partition(4).materialize(&f(2)).unwrap();
        let c = weight_contraction(&f(2), 4);
        let coarse = GroupedWeightPartition::new(4, vec![vec![0, 2], vec![1], vec![3, 4]])
            .unwrap()
            .materialize(&f(2))
            .unwrap();
        assert!(verify(&p, &c).valid);
        assert!(verify(&coarse, &c).valid);
    }

    #[test]
    fn sampled_mode_reported() {
        let p = weight_partition(12).materialize(&f(2)).unwrap();
        let opts = VerifyOptions { samples: 1000, ..Default::default() };
        let v = verify_contraction(&p, &weight_contraction(&f(2), 12), &opts).unwrap();
        assert!(v.valid);
        assert_eq!(v.mode, VerificationMode::Sampled { samples: 1000 });
    }

    #[test]
    fn json_round_trip() {
        let space = Space::new(f(3), 2).unwrap();
        let dense = Contraction::from_fn(&space, |w| Word::new(3, vec![w.digits()[0], 0]).unwrap()).unwrap();
        assert_eq!(Contraction::from_json(&dense.to_json()).unwrap(), dense);
        let w = weight_contraction(&f(4), 5);
        assert_eq!(Contraction::from_json(&w.to_json()).unwrap(), w);
        let v = Subspace::whole(f(2), 4);
        let m = coset_contraction(&v, &[1, 3]).unwrap().unwrap();
        let js = m.to_json();
        assert_eq!(js["phi"]["J"], serde_json::json!([2, 4]));
        assert_eq!(Contraction::from_json(&js).unwrap(), m);
    }
}
