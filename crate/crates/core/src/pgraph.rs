//! The partition graph, full-size clique search and closed-form cliques.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::metrics::{block_distance_matrix, distance_to_blocks};
use crate::partitions::{ExplicitPartition, GroupedWeightPartition, Subspace};
use crate::word::Word;

/// Words `u ≠ v` are adjacent iff they lie in different blocks and
/// `d(u,v)` equals the distance between those blocks.
pub struct PartitionGraph<'a> {
    partition: &'a ExplicitPartition,
    block_distances: Vec<Vec<u32>>,
}

impl<'a> PartitionGraph<'a> {
    pub fn new(partition: &'a ExplicitPartition) -> Self {
        PartitionGraph { partition, block_distances: block_distance_matrix(partition) }
    }

    pub fn partition(&self) -> &ExplicitPartition {
        self.partition
    }

    pub fn block_distances(&self) -> &[Vec<u32>] {
        &self.block_distances
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let (bu, bv) = (self.partition.block_of(u), self.partition.block_of(v));
        bu != bv && self.partition.space().distance(u, v) == self.block_distances[bu][bv] as usize
    }

    pub fn adjacent_words(&self, u: &Word, v: &Word) -> Result<bool> {
        let s = self.partition.space();
        Ok(self.adjacent(s.rank(u)?, s.rank(v)?))
    }

    /// Pairwise adjacency of the clique's vertices.
    pub fn is_clique(&self, c: &Clique) -> Result<bool> {
        let s = self.partition.space();
        let ranks = c.vertices.iter().map(|w| s.rank(w)).collect::<Result<Vec<_>>>()?;
        Ok(ranks.iter().enumerate().all(|(i, &u)| ranks[..i].iter().all(|&v| self.adjacent(u, v))))
    }

    /// A clique with exactly one vertex in every block.
    pub fn is_full_clique(&self, c: &Clique) -> Result<bool> {
        let mut seen = BTreeSet::new();
        for w in &c.vertices {
            seen.insert(self.partition.block_of_word(w)?);
        }
        Ok(c.size() == self.partition.num_blocks() && seen.len() == c.size() && self.is_clique(c)?)
    }

    /// Graphviz rendering, one cluster per block.
    pub fn to_dot(&self) -> String {
        let s = self.partition.space();
        let mut out = String::from("graph partition {\n");
        for (b, block) in self.partition.blocks().iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{b} {{ label=\"P{}\";", b + 1);
            for &r in block {
                let _ = writeln!(out, "    w{r} [label=\"{}\"];", s.word(r));
            }
            out.push_str("  }\n");
        }
        for u in 0..s.size() {
            for v in (u + 1)..s.size() {
                if self.adjacent(u, v) {
                    let _ = writeln!(out, "  w{u} -- w{v};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clique {
    pub vertices: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct CliqueJson {
    size: usize,
    vertices: Vec<Vec<u8>>,
}

impl Clique {
    pub fn new(vertices: Vec<Word>) -> Self {
        Clique { vertices }
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Vertices reordered by the block each lies in.
    pub fn ordered_by_blocks(&self, p: &ExplicitPartition) -> Result<Clique> {
        let mut keyed = self
            .vertices
            .iter()
            .map(|w| Ok((p.block_of_word(w)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_by_key(|(b, _)| *b);
        Ok(Clique { vertices: keyed.into_iter().map(|(_, w)| w).collect() })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices = self.vertices.iter().map(|w| w.digits().to_vec()).collect();
        serde_json::to_value(CliqueJson { size: self.size(), vertices }).unwrap()
    }

    pub fn from_json(q: u32, v: &serde_json::Value) -> Result<Clique> {
        let c: CliqueJson = serde_json::from_value(v.clone())?;
        if c.size != c.vertices.len() {
            return Err(Error::SizeMismatch { expected: c.size, got: c.vertices.len() });
        }
        let vertices = c.vertices.into_iter().map(|d| Word::new(q, d)).collect::<Result<_>>()?;
        Ok(Clique { vertices })
    }
}

#[derive(Clone, Debug)]
pub struct CliqueSearchConfig {
    /// Largest block count searched.
    pub max_blocks: usize,
    /// Number of vertex placements allowed.
    pub node_budget: u64,
}

impl Default for CliqueSearchConfig {
    fn default() -> Self {
        CliqueSearchConfig { max_blocks: 16, node_budget: 50_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueOutcome {
    /// The least full-size clique by sorted vertex ranks, vertices in block order.
    Found(Clique),
    /// Exhaustive: no full-size clique exists.
    NotFound,
}

struct CliqueSearch<'a> {
    graph: &'a PartitionGraph<'a>,
    budget: u64,
    nodes: u64,
}

impl CliqueSearch<'_> {
    /// Vertices are chosen in increasing rank order, so the first complete
    /// clique is the lexicographically least one.
    fn extend(&mut self, chosen: &mut Vec<usize>, domains: &[(usize, Vec<usize>)]) -> Result<bool> {
        if domains.is_empty() {
            return Ok(true);
        }
        let mut merged: Vec<(usize, usize)> = domains
            .iter()
            .enumerate()
            .flat_map(|(di, (_, d))| d.iter().map(move |&v| (v, di)))
            .collect();
        merged.sort_unstable();
        for (v, di) in merged {
            if domains.iter().enumerate().any(|(ci, (_, d))| ci != di && *d.last().unwrap() <= v) {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded { nodes: self.nodes - 1 });
            }
            let mut next = Vec::with_capacity(domains.len() - 1);
            let mut dead = false;
            for (ci, (b, d)) in domains.iter().enumerate() {
                if ci == di {
                    continue;
                }
                let nd: Vec<usize> = d.iter().copied().filter(|&w| w > v && self.graph.adjacent(v, w)).collect();
                if nd.is_empty() {
                    dead = true;
                    break;
                }
                next.push((*b, nd));
            }
            if dead {
                continue;
            }
            chosen.push(v);
            if self.extend(chosen, &next)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}

/// Exhaustive search for a clique meeting every block.
pub fn find_full_clique(p: &ExplicitPartition, cfg: &CliqueSearchConfig) -> Result<CliqueOutcome> {
    let e = p.num_blocks();
    if e > cfg.max_blocks {
        return Err(Error::SearchBudgetExceeded { nodes: 0 });
    }
    let space = p.space();
    if e == 1 {
        return Ok(CliqueOutcome::Found(Clique::new(vec![space.word(0)])));
    }
    let graph = PartitionGraph::new(p);
    let to_block = distance_to_blocks(p);
    let bd = graph.block_distances();
    // keep only words realizing the block distance towards every other block
    let mut domains: Vec<(usize, Vec<usize>)> = (0..e).map(|b| (b, Vec::new())).collect();
    for r in 0..space.size() {
        let b = p.block_of(r);
        if (0..e).all(|j| to_block[j][r] == bd[b][j]) {
            domains[b].1.push(r);
        }
    }
    if domains.iter().any(|(_, d)| d.is_empty()) {
        return Ok(CliqueOutcome::NotFound);
    }
    // smaller blocks first
    domains.sort_by_key(|(b, d)| (d.len(), *b));
    let mut search = CliqueSearch { graph: &graph, budget: cfg.node_budget, nodes: 0 };
    let mut chosen = Vec::new();
    if search.extend(&mut chosen, &domains)? {
        chosen.sort_by_key(|&r| p.block_of(r));
        Ok(CliqueOutcome::Found(Clique::new(chosen.into_iter().map(|r| space.word(r)).collect())))
    } else {
        Ok(CliqueOutcome::NotFound)
    }
}

fn check_symbol(field: &Field, a: u8) -> Result<()> {
    if a == 0 || a as u32 >= field.q() {
        return Err(Error::InvalidArgs(format!("symbol {a} must be a nonzero element of GF({})", field.q())));
    }
    Ok(())
}

/// `u_i = (a,..,a,0,..,0)` with weight `i`, for `i = 0..=k`.
pub fn weight_clique(field: &Field, k: usize, a: u8) -> Result<Clique> {
    check_symbol(field, a)?;
    let q = field.q();
    Ok(Clique::new(
        (0..=k)
            .map(|i| {
                let mut d = vec![0u8; k];
                d[..i].fill(a);
                Word::new(q, d).unwrap()
            })
            .collect(),
    ))
}

/// `u_A` with `a` exactly on `A`, for every subset `A` in bitmask order.
pub fn support_clique(field: &Field, k: usize, a: u8) -> Result<Clique> {
    check_symbol(field, a)?;
    if k >= 24 {
        return Err(Error::InvalidArgs(format!("2^{k} vertices is too many")));
    }
    let q = field.q();
    Ok(Clique::new(
        (0u32..1 << k)
            .map(|mask| Word::new(q, (0..k).map(|i| if mask >> i & 1 == 1 { a } else { 0 }).collect()).unwrap())
            .collect(),
    ))
}

/// Clique of size `q^ℓ` for the coset partition of `V`, `ℓ = k − dim V`,
/// available when the unit vectors outside `V` meet exactly `ℓ` cosets.
/// `None` means the condition fails, which says nothing about other cliques.
pub fn coset_clique(v: &Subspace) -> Option<Clique> {
    let k = v.k();
    let ell = k - v.dim();
    let mut reps: Vec<Vec<u8>> = Vec::new();
    let mut coords = Vec::new();
    for i in 0..k {
        let mut e = vec![0u8; k];
        e[i] = 1;
        if v.contains(&e) {
            continue;
        }
        let rep = v.reduce(&e);
        if !reps.contains(&rep) {
            reps.push(rep);
            coords.push(i);
        }
    }
    if coords.len() != ell {
        return None;
    }
    let q = v.field().q();
    let vertices = (0..(q as u64).pow(ell as u32))
        .map(|alpha| {
            let a = Word::from_rank(q, ell, alpha);
            let mut d = vec![0u8; k];
            for (&c, &x) in coords.iter().zip(a.digits()) {
                d[c] = x;
            }
            Word::new(q, d).unwrap()
        })
        .collect();
    Some(Clique::new(vertices))
}

/// Every radius-`rho` ball meets at most `lambda` blocks.
pub fn is_locally_bounded(p: &ExplicitPartition, rho: usize, lambda: usize) -> bool {
    let space = p.space();
    (0..space.size()).into_par_iter().all(|r| {
        let mut seen: Vec<usize> = Vec::with_capacity(lambda + 1);
        for x in space.ball(r, rho) {
            let b = p.block_of(x);
            if !seen.contains(&b) {
                seen.push(b);
                if seen.len() > lambda {
                    return false;
                }
            }
        }
        true
    })
}

/// Local boundedness of a grouped partition: a radius-`rho` ball around a
/// weight-`w` word reaches exactly the weights `w−rho ..= w+rho` within `0..=k`.
pub fn is_locally_bounded_grouped(g: &GroupedWeightPartition, rho: usize, lambda: usize) -> bool {
    let k = g.k();
    (0..=k).all(|w| {
        let groups: BTreeSet<usize> = (w.saturating_sub(rho)..=(w + rho).min(k)).map(|x| g.group_of(x)).collect();
        groups.len() <= lambda
    })
}

/// Blocks met by the radius-`rho` ball around every word of a grouped partition, by weight.
pub fn grouped_ball_blocks(g: &GroupedWeightPartition, rho: usize) -> Vec<BTreeSet<usize>> {
    let k = g.k();
    (0..=k)
        .map(|w| (w.saturating_sub(rho)..=(w + rho).min(k)).map(|x| g.group_of(x)).collect())
        .collect()
}

/// Index of each clique vertex by rank, for fast membership.
pub fn clique_index(p: &ExplicitPartition, c: &Clique) -> Result<HashMap<usize, usize>> {
    c.vertices.iter().enumerate().map(|(i, w)| Ok((p.space().rank(w)?, i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{coordinate_kernel, coordinate_partition, support_partition, weight_partition};
    use crate::word::Space;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn strings(c: &Clique) -> Vec<String> {
        c.vertices.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn weight_partition_f2_3_least_clique() {
        let p = weight_partition(3).materialize(&f(2)).unwrap();
        let CliqueOutcome::Found(c) = find_full_clique(&p, &Default::default()).unwrap() else {
            panic!("expected a clique");
        };
        assert_eq!(strings(&c), vec!["000", "100", "110", "111"]);
        assert!(PartitionGraph::new(&p).is_full_clique(&c).unwrap());
    }

    #[test]
    fn example_twelve_has_no_clique() {
        let s = Space::new(f(2), 4).unwrap();
        let p = ExplicitPartition::from_function(s, |w| match w.weight() {
            0 | 1 if w.digits()[0] == 0 || w.weight() == 0 => 0,
            4 => 2,
            _ => 1,
        })
        .unwrap();
        assert_eq!(p.block_sizes(), vec![4, 11, 1]);
        assert_eq!(find_full_clique(&p, &Default::default()).unwrap(), CliqueOutcome::NotFound);
    }

    #[test]
    fn budget_is_distinct_from_not_found() {
        let p = weight_partition(4).materialize(&f(2)).unwrap();
        let cfg = CliqueSearchConfig { max_blocks: 16, node_budget: 2 };
        assert!(matches!(find_full_clique(&p, &cfg), Err(Error::SearchBudgetExceeded { .. })));
        let cfg = CliqueSearchConfig { max_blocks: 3, node_budget: 1000 };
        assert!(matches!(find_full_clique(&p, &cfg), Err(Error::SearchBudgetExceeded { .. })));
    }

    #[test]
    fn weight_cliques() {
        assert_eq!(strings(&weight_clique(&f(3), 3, 1).unwrap()), vec!["000", "100", "110", "111"]);
        assert_eq!(strings(&weight_clique(&f(5), 1, 4).unwrap()), vec!["0", "4"]);
        assert!(weight_clique(&f(3), 3, 0).is_err());
        let p = weight_partition(4).materialize(&f(2)).unwrap();
        let g = PartitionGraph::new(&p);
        assert!(g.is_full_clique(&weight_clique(&f(2), 4, 1).unwrap()).unwrap());
    }

    #[test]
    fn support_cliques() {
        let c = support_clique(&f(4), 2, 1).unwrap();
        assert_eq!(strings(&c), vec!["00", "10", "01", "11"]);
        let p = support_partition(Space::new(f(4), 2).unwrap()).unwrap();
        assert!(PartitionGraph::new(&p).is_full_clique(&c).unwrap());
        let c3 = support_clique(&f(3), 3, 1).unwrap();
        let p3 = support_partition(Space::new(f(3), 3).unwrap()).unwrap();
        assert!(PartitionGraph::new(&p3).is_full_clique(&c3).unwrap());
        assert_eq!(strings(&support_clique(&f(3), 1, 2).unwrap()), vec!["0", "2"]);
    }

    #[test]
    fn coordinate_coset_clique() {
        let v = coordinate_kernel(f(3), 3, &[1, 2]).unwrap();
        let c = coset_clique(&v).unwrap();
        assert_eq!(c.size(), 9);
        assert!(c.vertices.iter().all(|w| w.digits()[0] == 0));
        let p = coordinate_partition(Space::new(f(3), 3).unwrap(), &[1, 2]).unwrap();
        assert!(PartitionGraph::new(&p).is_full_clique(&c).unwrap());
        assert_eq!(coset_clique(&Subspace::whole(f(2), 3)).unwrap().size(), 1);
    }

    #[test]
    fn coset_condition_fails() {
        let v = Subspace::from_generators(f(2), 5, &[vec![1, 1, 1, 0, 0], vec![0, 0, 0, 1, 0], vec![0, 0, 0, 0, 1]])
            .unwrap();
        assert_eq!(coset_clique(&v), None);
        let p = v.coset_partition().unwrap();
        assert_eq!(find_full_clique(&p, &Default::default()).unwrap(), CliqueOutcome::NotFound);
    }

    #[test]
    fn local_boundedness() {
        let fine = ExplicitPartition::finest(Space::new(f(2), 2).unwrap());
        assert!(!is_locally_bounded(&fine, 1, 2));
        assert!(is_locally_bounded(&fine, 0, 1));
        let d5 = crate::partitions::hwdf_partition(15, 5).unwrap();
        assert!(is_locally_bounded_grouped(&d5, 2, 2));
        assert!(!is_locally_bounded_grouped(&crate::partitions::hwdf_partition(15, 3).unwrap(), 2, 2));
        let p = d5.materialize(&f(2)).unwrap();
        assert!(is_locally_bounded(&p, 2, 2));
    }

    #[test]
    fn clique_json() {
        let c = weight_clique(&f(3), 2, 2).unwrap();
        let back = Clique::from_json(3, &c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.to_json()["size"], 3);
    }
}
