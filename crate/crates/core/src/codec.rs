//! Systematic (P,t)-encodings `u ↦ (u, z(u))`: synthesis, verification and
//! nearest-codeword decoding.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{plotkin_lower, trivial_lower};
use crate::contraction::{
    clique_to_contraction, coset_contraction, verify_contraction, weight_contraction, Contraction, PhiRule,
    VerificationMode, VerifyOptions,
};
use crate::dcode::{min_dcode, verify_dcode, DCode, SearchOptions, SearchStatus};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::metrics::pdrm_partition;
use crate::partitions::{support_partition, ExplicitPartition, GroupedWeightPartition, Partition, Subspace};
use crate::pgraph::{
    coset_clique, find_full_clique, grouped_ball_blocks, is_locally_bounded, is_locally_bounded_grouped,
    support_clique, CliqueOutcome, CliqueSearchConfig,
};
use crate::word::{digit_distance, space_size, Space, Word};

/// How the redundancy part of a codeword is looked up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RedundancyRule {
    /// One word per message, by rank.
    Dense(Vec<Word>),
    /// One word per block.
    PerBlock(Vec<Word>),
    /// `z(u) = words[φ(u)]`.
    PerImage { contraction: Contraction, words: Vec<Word> },
    /// One word per Hamming weight `0..=k`.
    PerWeight(Vec<Word>),
}

impl RedundancyRule {
    fn words(&self) -> &[Word] {
        match self {
            RedundancyRule::Dense(w) | RedundancyRule::PerBlock(w) | RedundancyRule::PerWeight(w) => w,
            RedundancyRule::PerImage { words, .. } => words,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Encoding {
    partition: Partition,
    t: u32,
    r: usize,
    rule: RedundancyRule,
}

impl Encoding {
    pub fn new(partition: Partition, t: u32, r: usize, rule: RedundancyRule) -> Result<Self> {
        let q = partition.field().q();
        let k = partition.k();
        if let Some(w) = rule.words().iter().find(|w| w.len() != r || w.q() != q) {
            return Err(Error::DimensionMismatch(format!("redundancy word {w} for r={r}")));
        }
        let expected = match &rule {
            RedundancyRule::Dense(_) => Some(space_size(q, k).min(usize::MAX as u128) as usize),
            RedundancyRule::PerBlock(_) => Some(partition.num_blocks()),
            RedundancyRule::PerWeight(_) => Some(k + 1),
            RedundancyRule::PerImage { contraction, .. } => {
                if contraction.k() != k || contraction.field() != partition.field() {
                    return Err(Error::DimensionMismatch("contraction and partition live in different spaces".into()));
                }
                Some(contraction.image().len())
            }
        };
        if let Some(n) = expected.filter(|&n| n != rule.words().len()) {
            return Err(Error::SizeMismatch { expected: n, got: rule.words().len() });
        }
        Ok(Encoding { partition, t, r, rule })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rule(&self) -> &RedundancyRule {
        &self.rule
    }

    fn redundancy_index(&self, u: &Word) -> Result<usize> {
        if u.len() != self.partition.k() || u.q() != self.partition.field().q() {
            return Err(Error::DimensionMismatch(format!("message of length {} for k={}", u.len(), self.partition.k())));
        }
        Ok(match &self.rule {
            RedundancyRule::Dense(_) => u.rank().ok_or_else(|| Error::SpaceTooLarge {
                size: space_size(u.q(), u.len()),
                cap: crate::word::explicit_cap(),
            })? as usize,
            RedundancyRule::PerBlock(_) => self.partition.block_of_word(u)?,
            RedundancyRule::PerImage { contraction, .. } => contraction.apply_index(u)?,
            RedundancyRule::PerWeight(_) => u.weight(),
        })
    }

    pub fn redundancy(&self, u: &Word) -> Result<Word> {
        Ok(self.rule.words()[self.redundancy_index(u)?].clone())
    }

    pub fn encode(&self, u: &Word) -> Result<Word> {
        Ok(u.concat(&self.redundancy(u)?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let q = self.partition.field().q();
        let ws = |w: &[Word]| w.iter().map(|x| word_json(q, x)).collect::<Vec<_>>();
        let rule = match &self.rule {
            RedundancyRule::Dense(w) => serde_json::json!({"kind": "dense", "words": ws(w)}),
            RedundancyRule::PerBlock(w) => {
                let m: serde_json::Map<String, serde_json::Value> =
                    w.iter().enumerate().map(|(i, x)| (i.to_string(), word_json(q, x))).collect();
                serde_json::json!({"kind": "per-block", "assignments": m})
            }
            RedundancyRule::PerImage { contraction, words } => {
                serde_json::json!({"kind": "per-image", "contraction": contraction.to_json(), "words": ws(words)})
            }
            RedundancyRule::PerWeight(w) => serde_json::json!({"kind": "per-weight", "words": ws(w)}),
        };
        serde_json::json!({"q": q, "k": self.partition.k(), "t": self.t, "r": self.r, "rule": rule})
    }

    pub fn from_json(v: &serde_json::Value, partition: Partition) -> Result<Self> {
        let q = partition.field().q();
        let bad = |m: &str| Error::Parse(format!("encoding: {m}"));
        let t = v["t"].as_u64().ok_or_else(|| bad("missing t"))? as u32;
        let r = v["r"].as_u64().ok_or_else(|| bad("missing r"))? as usize;
        let rule = &v["rule"];
        let list = |key: &str| -> Result<Vec<Word>> {
            rule[key].as_array().ok_or_else(|| bad(&format!("missing {key}")))?.iter().map(|x| parse_word(q, x)).collect()
        };
        let rule = match rule["kind"].as_str().ok_or_else(|| bad("missing rule kind"))? {
            "dense" => RedundancyRule::Dense(list("words")?),
            "per-weight" => RedundancyRule::PerWeight(list("words")?),
            "per-image" => RedundancyRule::PerImage {
                contraction: Contraction::from_json(&rule["contraction"])?,
                words: list("words")?,
            },
            "per-block" => {
                let m = rule["assignments"].as_object().ok_or_else(|| bad("missing assignments"))?;
                let mut words = vec![None; m.len()];
                for (key, val) in m {
                    let i: usize = key.parse().map_err(|_| bad(&format!("block key {key}")))?;
                    let slot = words.get_mut(i).ok_or_else(|| bad(&format!("block key {key} out of range")))?;
                    *slot = Some(parse_word(q, val)?);
                }
                RedundancyRule::PerBlock(words.into_iter().map(Option::unwrap).collect())
            }
            other => return Err(bad(&format!("unknown rule kind {other}"))),
        };
        Self::new(partition, t, r, rule)
    }
}

/// Digit string for `q ≤ 10`, digit array otherwise.
pub fn word_json(q: u32, w: &Word) -> serde_json::Value {
    if q <= 10 {
        serde_json::Value::String(w.to_string())
    } else {
        serde_json::json!(w.digits())
    }
}

pub fn parse_word(q: u32, v: &serde_json::Value) -> Result<Word> {
    match v {
        serde_json::Value::String(s) => Word::parse(q, s),
        serde_json::Value::Array(a) => Word::new(
            q,
            a.iter()
                .map(|x| x.as_u64().filter(|&d| d < 256).map(|d| d as u8).ok_or_else(|| Error::Parse(format!("bad digit {x}"))))
                .collect::<Result<Vec<_>>>()?,
        ),
        _ => Err(Error::Parse(format!("expected a word, got {v}"))),
    }
}

/// Builds `C(x) = (x, z_{φ(x)})` from a D-code certifying the PDRM over `U`.
pub fn encode_from_dcode(p: &Partition, t: u32, c: &Contraction, code: &DCode) -> Result<Encoding> {
    let d = pdrm_partition(p, t, c.image())?;
    if let Some(v) = verify_dcode(&d, code)? {
        return Err(Error::CertificateMismatch(format!(
            "words {} and {} are at distance {} but need {}",
            v.i, v.j, v.actual, v.required
        )));
    }
    let rule = if *c.rule() == PhiRule::Weight {
        RedundancyRule::PerWeight(code.words().to_vec())
    } else {
        RedundancyRule::PerImage { contraction: c.clone(), words: code.words().to_vec() }
    };
    Encoding::new(p.clone(), t, code.r(), rule)
}

/// Redundancy `0^{2t}` when a word's block is the least block met by the
/// radius-`2t` ball around it, `1^{2t}` otherwise.
pub fn construction_locally_bounded(p: &Partition, t: u32) -> Result<Encoding> {
    let rho = 2 * t as usize;
    let q = p.field().q();
    let zeros = Word::zero(q, rho);
    let ones = Word::constant(q, rho, 1);
    let pick = |least: bool| if least { zeros.clone() } else { ones.clone() };
    let rule = match p {
        Partition::Grouped { groups, .. } => {
            if !is_locally_bounded_grouped(groups, rho, 2) {
                return Err(Error::NotLocallyBounded { rho, lambda: 2 });
            }
            let balls = grouped_ball_blocks(groups, rho);
            RedundancyRule::PerWeight(
                (0..=groups.k()).map(|w| pick(groups.group_of(w) == *balls[w].first().unwrap())).collect(),
            )
        }
        Partition::Explicit(ep) => {
            if !is_locally_bounded(ep, rho, 2) {
                return Err(Error::NotLocallyBounded { rho, lambda: 2 });
            }
            let space = ep.space();
            let words = (0..space.size())
                .into_par_iter()
                .map(|u| {
                    let least = space.ball(u, rho).into_iter().map(|x| ep.block_of(x)).min().unwrap();
                    pick(ep.block_of(u) == least)
                })
                .collect();
            RedundancyRule::Dense(words)
        }
    };
    Encoding::new(p.clone(), t, rho, rule)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingViolation {
    pub u: String,
    pub v: String,
    pub distance: usize,
    pub required: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum EncodingCheck {
    /// Every cross-block pair of messages.
    Exhaustive { pairs: u64 },
    /// Every cross-block pair within message distance `2t`.
    NearPairs { pairs: u64 },
    /// Every pair of weights in different groups, at its closest message distance.
    WeightClasses { pairs: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingVerdict {
    pub valid: bool,
    pub check: EncodingCheck,
    pub violation: Option<EncodingViolation>,
}

/// Message spaces up to this size are checked over all pairs.
pub const EXHAUSTIVE_CAP: usize = 1 << 11;
/// Largest `q^k · |ball(2t)|` the near-pair scan will walk.
const NEAR_PAIR_LIMIT: u128 = 1 << 34;

fn ball_size(q: u32, k: usize, radius: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for i in 0..=radius.min(k) {
        total += binom * ((q - 1) as u128).pow(i as u32);
        binom = binom * (k - i) as u128 / (i + 1) as u128;
    }
    total
}

/// Checks that messages in different blocks get codewords at distance ≥ 2t+1.
pub fn verify_encoding(p: &Partition, enc: &Encoding) -> Result<EncodingVerdict> {
    if p.k() != enc.partition.k() || p.field() != enc.partition.field() {
        return Err(Error::DimensionMismatch("encoding and partition live in different spaces".into()));
    }
    let need = 2 * enc.t as usize + 1;
    if let (Partition::Grouped { groups, field }, RedundancyRule::PerWeight(z)) = (p, &enc.rule) {
        return Ok(verify_weight_classes(groups, field, z, need));
    }
    let ep = p.to_explicit()?;
    let space = ep.space();
    let n = space.size();
    let words = enc.rule.words();
    let idx: Vec<u32> = (0..n)
        .into_par_iter()
        .map(|u| enc.redundancy_index(&space.word(u)).map(|i| i as u32))
        .collect::<Result<Vec<_>>>()?;
    let z: Vec<&[u8]> = words.iter().map(|w| w.digits()).collect();
    let codeword_distance = |u: usize, v: usize| space.distance(u, v) + digit_distance(z[idx[u] as usize], z[idx[v] as usize]);
    let violation = |u: usize, v: usize| EncodingViolation {
        u: space.word(u).to_string(),
        v: space.word(v).to_string(),
        distance: codeword_distance(u, v),
        required: need,
    };
    if n <= EXHAUSTIVE_CAP {
        let bad = (0..n).into_par_iter().find_map_first(|u| {
            ((u + 1)..n).find(|&v| ep.block_of(u) != ep.block_of(v) && codeword_distance(u, v) < need).map(|v| (u, v))
        });
        let sizes = ep.block_sizes();
        let same: u64 = sizes.iter().map(|&s| (s as u64) * (s as u64 - 1) / 2).sum();
        let pairs = (n as u64) * (n as u64 - 1) / 2 - same;
        return Ok(EncodingVerdict {
            valid: bad.is_none(),
            check: EncodingCheck::Exhaustive { pairs },
            violation: bad.map(|(u, v)| violation(u, v)),
        });
    }
    let radius = need - 1;
    if (n as u128) * ball_size(space.q(), space.k(), radius) > NEAR_PAIR_LIMIT {
        return Err(Error::SpaceTooLarge { size: (n as u128) * ball_size(space.q(), space.k(), radius), cap: NEAR_PAIR_LIMIT as u64 });
    }
    let results: Vec<(u64, Option<usize>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut count = 0u64;
            let mut bad = None;
            for v in space.ball(u, radius) {
                if v > u && ep.block_of(u) != ep.block_of(v) {
                    count += 1;
                    if bad.is_none() && codeword_distance(u, v) < need {
                        bad = Some(v);
                    }
                }
            }
            (count, bad)
        })
        .collect();
    let pairs = results.iter().map(|r| r.0).sum();
    let bad = results.iter().enumerate().find_map(|(u, r)| r.1.map(|v| (u, v)));
    Ok(EncodingVerdict {
        valid: bad.is_none(),
        check: EncodingCheck::NearPairs { pairs },
        violation: bad.map(|(u, v)| violation(u, v)),
    })
}

/// Weight-`i` and weight-`j` messages come as close as `|i−j|`, and only
/// that close, so each weight pair reduces to one inequality.
fn verify_weight_classes(g: &GroupedWeightPartition, field: &Field, z: &[Word], need: usize) -> EncodingVerdict {
    let k = g.k();
    let mut pairs = 0u64;
    let mut bad = None;
    for i in 0..=k {
        for j in (i + 1)..=k {
            if g.group_of(i) == g.group_of(j) {
                continue;
            }
            pairs += 1;
            let d = (j - i) + digit_distance(z[i].digits(), z[j].digits());
            if bad.is_none() && d < need {
                bad = Some((i, j, d));
            }
        }
    }
    let q = field.q();
    let rep = |w: usize| {
        let mut d = vec![0u8; k];
        d[..w].fill(1);
        Word::new(q, d).unwrap().to_string()
    };
    EncodingVerdict {
        valid: bad.is_none(),
        check: EncodingCheck::WeightClasses { pairs },
        violation: bad.map(|(i, j, d)| EncodingViolation { u: rep(i), v: rep(j), distance: d, required: need }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    Auto,
    CliqueOnly,
    ContractionOnly,
    FullPdrm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    Clique,
    Contraction,
    FullPdrm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OptimalityCertificate {
    pub r: usize,
    pub method: Method,
    /// Where the representatives came from.
    pub construction: String,
    pub lower_bound: usize,
    pub lower_source: String,
    /// True when `r` is proven optimal.
    pub exact: bool,
    pub image_size: usize,
    pub nodes_expanded: u64,
}

#[derive(Clone, Debug, Default)]
pub struct OptimizeOptions {
    pub search: SearchOptions,
    pub clique: CliqueSearchConfig,
    pub verify: VerifyOptions,
}

struct Plan {
    contraction: Contraction,
    method: Method,
    construction: String,
    /// Validity of the contraction is proven rather than sampled.
    proven: bool,
}

/// The weight-class labels if the block depends only on the weight.
fn weight_groups(p: &ExplicitPartition) -> Option<GroupedWeightPartition> {
    let space = p.space();
    let mut label = vec![usize::MAX; space.k() + 1];
    for r in 0..space.size() {
        let w = space.weight(r);
        if label[w] == usize::MAX {
            label[w] = p.block_of(r);
        } else if label[w] != p.block_of(r) {
            return None;
        }
    }
    GroupedWeightPartition::from_weight_labels(&label).ok()
}

/// `V` if the partition is the coset partition of the subspace `V`.
fn coset_subspace(p: &ExplicitPartition) -> Option<Subspace> {
    let space = p.space();
    let block0: Vec<Vec<u8>> =
        (0..space.size()).filter(|&r| p.block_of(r) == p.block_of(0)).map(|r| space.word(r).into_digits()).collect();
    let v = Subspace::from_generators(space.field().clone(), space.k(), &block0).ok()?;
    if space_size(space.q(), v.dim()) != block0.len() as u128 {
        return None;
    }
    let cosets = v.coset_partition().ok()?;
    (cosets.block_ids() == p.block_ids()).then_some(v)
}

fn plan_clique(p: &ExplicitPartition, opts: &OptimizeOptions) -> Result<Option<Plan>> {
    let space = p.space();
    let clique = |c, what: &str| -> Result<Option<Plan>> {
        Ok(Some(Plan {
            contraction: clique_to_contraction(p, &c)?,
            method: Method::Clique,
            construction: what.into(),
            proven: true,
        }))
    };
    if let Some(g) = weight_groups(p) {
        if g.num_groups() == space.k() + 1 {
            return Ok(Some(Plan {
                contraction: weight_contraction(space.field(), space.k()),
                method: Method::Clique,
                construction: "weight-class representatives".into(),
                proven: true,
            }));
        }
    }
    if support_partition(space.clone())?.block_ids() == p.block_ids() {
        return clique(support_clique(space.field(), space.k(), 1)?, "support representatives");
    }
    if let Some(c) = coset_subspace(p).as_ref().and_then(coset_clique) {
        return clique(c, "coset clique on unit vectors");
    }
    match find_full_clique(p, &opts.clique) {
        Ok(CliqueOutcome::Found(c)) => clique(c, "clique search"),
        Ok(CliqueOutcome::NotFound) | Err(Error::SearchBudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn plan_contraction(p: &ExplicitPartition, user: Option<&Contraction>, opts: &OptimizeOptions) -> Result<Option<Plan>> {
    let space = p.space();
    if let Some(c) = user {
        let verdict = verify_contraction(p, c, &opts.verify)?;
        if !verdict.valid {
            return Err(Error::InvalidArgs(format!(
                "the supplied contraction is not block-preserving: {}",
                serde_json::to_string(&verdict.violation).unwrap()
            )));
        }
        return Ok(Some(Plan {
            contraction: c.clone(),
            method: Method::Contraction,
            construction: "supplied contraction".into(),
            proven: matches!(verdict.mode, VerificationMode::Exhaustive { .. }),
        }));
    }
    if weight_groups(p).is_some() {
        return Ok(Some(Plan {
            contraction: weight_contraction(space.field(), space.k()),
            method: Method::Contraction,
            construction: "weight contraction".into(),
            proven: true,
        }));
    }
    if let Some(v) = coset_subspace(p) {
        let coords: Vec<usize> = (0..space.k())
            .filter(|&i| {
                let mut e = vec![0u8; space.k()];
                e[i] = 1;
                !v.contains(&e)
            })
            .collect();
        if let Some(c) = coset_contraction(&v, &coords)? {
            return Ok(Some(Plan {
                contraction: c,
                method: Method::Contraction,
                construction: "coordinate masking off the subspace".into(),
                proven: true,
            }));
        }
    }
    Ok(None)
}

fn plan_full(p: &ExplicitPartition) -> Plan {
    Plan {
        contraction: Contraction::identity(p.space()),
        method: Method::FullPdrm,
        construction: "every message".into(),
        proven: true,
    }
}

/// Smallest redundancy of a (P,t)-encoding, with a synthesized encoding.
///
/// Fails with `BudgetExceeded` (carrying the best lower bound) when the
/// length search does not complete.
pub fn optimal_redundancy(
    p: &Partition,
    t: u32,
    strategy: Strategy,
    user: Option<&Contraction>,
    opts: &OptimizeOptions,
) -> Result<(OptimalityCertificate, Encoding)> {
    let plan = match (p, strategy) {
        (Partition::Grouped { groups, field }, Strategy::Auto | Strategy::ContractionOnly) => Plan {
            contraction: weight_contraction(field, groups.k()),
            method: if groups.num_groups() == groups.k() + 1 { Method::Clique } else { Method::Contraction },
            construction: "weight contraction".into(),
            proven: true,
        },
        (Partition::Grouped { groups, .. }, Strategy::CliqueOnly) if groups.num_groups() == groups.k() + 1 => {
            Plan {
                contraction: weight_contraction(p.field(), groups.k()),
                method: Method::Clique,
                construction: "weight-class representatives".into(),
                proven: true,
            }
        }
        _ => {
            let ep = p.to_explicit()?;
            let plan = match strategy {
                Strategy::Auto => match plan_clique(&ep, opts)? {
                    Some(plan) => Some(plan),
                    None => plan_contraction(&ep, user, opts)?.or_else(|| Some(plan_full(&ep))),
                },
                Strategy::CliqueOnly => plan_clique(&ep, opts)?,
                Strategy::ContractionOnly => plan_contraction(&ep, user, opts)?,
                Strategy::FullPdrm => Some(plan_full(&ep)),
            };
            plan.ok_or_else(|| Error::NoConstruction(format!("strategy {strategy:?} found no representatives")))?
        }
    };
    let d = pdrm_partition(p, t, plan.contraction.image())?;
    let rep = min_dcode(&d, p.field(), &opts.search)?;
    if rep.status != SearchStatus::Exact {
        let lower = rep.lower_bound.max(trivial_lower(p.num_blocks(), t)).max(plotkin_lower(&d, p.field()));
        return Err(Error::BudgetExceeded { lower, upper: None });
    }
    let r = rep.r_min.unwrap();
    let lower_source = if r == 0 {
        "no requirements"
    } else if r == d.max_entry() as usize {
        "largest single requirement"
    } else {
        "exhaustive refutation of the next shorter length"
    };
    let enc = encode_from_dcode(p, t, &plan.contraction, rep.witness.as_ref().unwrap())?;
    let cert = OptimalityCertificate {
        r,
        method: plan.method,
        construction: plan.construction,
        lower_bound: if plan.proven { r } else { r.min(rep.lower_bound) },
        lower_source: lower_source.into(),
        exact: plan.proven,
        image_size: plan.contraction.image().len(),
        nodes_expanded: rep.nodes_expanded,
    };
    Ok((cert, enc))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub block: usize,
    #[serde(serialize_with = "ser_display")]
    pub message: Word,
    pub distance: usize,
}

fn ser_display<S: serde::Serializer>(w: &Word, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

/// Nearest codeword to `y`, ties to the least message rank.
pub fn decode(enc: &Encoding, y: &Word) -> Result<Decoded> {
    let k = enc.partition.k();
    let q = enc.partition.field().q();
    if y.len() != k + enc.r || y.q() != q {
        return Err(Error::DimensionMismatch(format!("received word of length {} for n={}", y.len(), k + enc.r)));
    }
    let space = Space::new(enc.partition.field().clone(), k)?;
    let (msg, red) = y.digits().split_at(k);
    let (distance, rank) = (0..space.size())
        .into_par_iter()
        .map(|u| {
            let w = space.word(u);
            let z = enc.redundancy(&w).unwrap();
            (digit_distance(w.digits(), msg) + digit_distance(z.digits(), red), u)
        })
        .min()
        .unwrap();
    let message = space.word(rank);
    Ok(Decoded { block: enc.partition.block_of_word(&message)?, message, distance })
}
