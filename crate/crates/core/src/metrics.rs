//! Block distances and the distance requirement matrices built from them.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{ExplicitPartition, GroupedWeightPartition, Partition};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MatrixRole {
    Pdm,
    Pdrm,
    #[default]
    Generic,
}

/// Symmetric nonnegative integer matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    t: Option<u32>,
    role: MatrixRole,
    entries: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<u32>,
    #[serde(default)]
    role: MatrixRole,
    entries: Vec<Vec<u32>>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        Self::with_role(rows, MatrixRole::Generic, None)
    }

    pub fn with_role(rows: Vec<Vec<u32>>, role: MatrixRole, t: Option<u32>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::SizeMismatch { expected: n, got: row.len() });
            }
            entries.extend_from_slice(row);
        }
        let m = DistanceMatrix { n, t, role, entries };
        for i in 0..n {
            if m.get(i, i) != 0 {
                return Err(Error::InvalidArgs(format!("nonzero diagonal entry at {i}")));
            }
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidArgs(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        if let Some(t) = t {
            if role != MatrixRole::Generic && m.entries.iter().any(|&e| e > 2 * t + 1) {
                return Err(Error::InvalidArgs(format!("entry exceeds 2t+1 = {}", 2 * t + 1)));
            }
        }
        Ok(m)
    }

    fn build(n: usize, role: MatrixRole, t: Option<u32>, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..i {
                let e = f(i, j);
                entries[i * n + j] = e;
                entries[j * n + i] = e;
            }
        }
        DistanceMatrix { n, t, role, entries }
    }

    /// `m × m` matrix with every off-diagonal entry `d`.
    pub fn constant(m: usize, d: u32) -> Self {
        Self::build(m, MatrixRole::Generic, None, |_, _| d)
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> Option<u32> {
        self.t
    }

    pub fn role(&self) -> MatrixRole {
        self.role
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        (0..self.n).map(|j| self.get(i, j) as u64).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// `Σ_{i<j} D[i][j]`.
    pub fn upper_sum(&self) -> u64 {
        (0..self.n).map(|i| ((i + 1)..self.n).map(|j| self.get(i, j) as u64).sum::<u64>()).sum()
    }

    /// Largest `|i − j|` with a positive entry.
    pub fn bandwidth(&self) -> usize {
        let mut b = 0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.get(i, j) > 0 {
                    b = b.max(j - i);
                }
            }
        }
        b
    }

    /// `P D Pᵀ` for `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::build(self.n, self.role, self.t, |i, j| self.get(perm[i], perm[j]))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(MatrixJson { n: self.n, t: self.t, role: self.role, entries: self.rows() }).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let m: MatrixJson = serde_json::from_value(v.clone())?;
        if m.entries.len() != m.n {
            return Err(Error::SizeMismatch { expected: m.n, got: m.entries.len() });
        }
        Self::with_role(m.entries, m.role, m.t)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }
}

/// Multi-source BFS in the Hamming graph, visiting words by distance from
/// `sources`. Stops as soon as `on_visit` returns false.
fn bfs_from(p: &ExplicitPartition, sources: &[usize], mut on_visit: impl FnMut(usize, u32) -> bool) {
    let space = p.space();
    let mut dist = vec![u32::MAX; space.size()];
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    let mut nb = Vec::new();
    while let Some(x) = queue.pop_front() {
        if !on_visit(x, dist[x]) {
            return;
        }
        space.neighbors(x, &mut nb);
        for &y in &nb {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
}

/// Minimum Hamming distance between blocks `i` and `j`.
pub fn block_distance(p: &ExplicitPartition, i: usize, j: usize) -> Result<usize> {
    p.check_block(i)?;
    p.check_block(j)?;
    if i == j {
        return Ok(0);
    }
    let sizes = p.block_sizes();
    let (src, dst) = if sizes[i] <= sizes[j] { (i, j) } else { (j, i) };
    let sources: Vec<usize> = (0..p.space().size()).filter(|&r| p.block_of(r) == src).collect();
    let mut found = 0;
    bfs_from(p, &sources, |x, d| {
        if p.block_of(x) == dst {
            found = d as usize;
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// Distances from block `src` to every block.
fn distances_from_block(p: &ExplicitPartition, sources: &[usize]) -> Vec<u32> {
    let e = p.num_blocks();
    let mut out = vec![u32::MAX; e];
    let mut remaining = e;
    bfs_from(p, sources, |x, d| {
        let b = p.block_of(x);
        if out[b] == u32::MAX {
            out[b] = d;
            remaining -= 1;
        }
        remaining > 0
    });
    out
}

/// All pairwise block distances.
pub fn block_distance_matrix(p: &ExplicitPartition) -> Vec<Vec<u32>> {
    let blocks = p.blocks();
    blocks.par_iter().map(|b| distances_from_block(p, b)).collect()
}

/// Distance from every word to every block, `out[j][rank]`.
pub fn distance_to_blocks(p: &ExplicitPartition) -> Vec<Vec<u32>> {
    let blocks = p.blocks();
    blocks
        .par_iter()
        .map(|b| {
            let mut d = vec![0u32; p.space().size()];
            bfs_from(p, b, |x, dist| {
                d[x] = dist;
                true
            });
            d
        })
        .collect()
}

/// `min S_s − max S_r` for consecutive groups (in either order).
pub fn block_distance_grouped(g: &GroupedWeightPartition, r: usize, s: usize) -> Result<usize> {
    if !g.is_consecutive() {
        return Err(Error::NotConsecutive);
    }
    for id in [r, s] {
        if id >= g.num_groups() {
            return Err(Error::BadBlockId { id, blocks: g.num_groups() });
        }
    }
    if r == s {
        return Ok(0);
    }
    let (lo, hi) = if r < s { (r, s) } else { (s, r) };
    Ok(g.groups()[hi][0] - g.groups()[lo].last().unwrap())
}

#[inline]
fn requirement(t: u32, d: usize) -> u32 {
    (2 * t + 1).saturating_sub(d.min(u32::MAX as usize) as u32)
}

/// Partition distance matrix: `max(2t+1 − d(P_i,P_j), 0)`.
pub fn pdm(p: &ExplicitPartition, t: u32) -> DistanceMatrix {
    let bd = block_distance_matrix(p);
    DistanceMatrix::build(p.num_blocks(), MatrixRole::Pdm, Some(t), |i, j| requirement(t, bd[i][j] as usize))
}

/// Requirement matrix over arbitrary words of any partition form.
pub fn pdrm_partition(p: &Partition, t: u32, vectors: &[Word]) -> Result<DistanceMatrix> {
    let blocks = vectors.iter().map(|v| p.block_of_word(v)).collect::<Result<Vec<_>>>()?;
    Ok(requirement_matrix(t, vectors, &blocks))
}

fn requirement_matrix(t: u32, vectors: &[Word], blocks: &[usize]) -> DistanceMatrix {
    DistanceMatrix::build(vectors.len(), MatrixRole::Pdrm, Some(t), |i, j| {
        if blocks[i] == blocks[j] {
            0
        } else {
            requirement(t, vectors[i].distance(&vectors[j]).unwrap())
        }
    })
}

/// Partition distance requirement matrix over `vectors`.
pub fn pdrm(p: &ExplicitPartition, t: u32, vectors: &[Word]) -> Result<DistanceMatrix> {
    let blocks = vectors.iter().map(|v| p.block_of_word(v)).collect::<Result<Vec<_>>>()?;
    Ok(requirement_matrix(t, vectors, &blocks))
}

/// PDRM over all ranks of the space, in rank order.
pub fn pdrm_full(p: &ExplicitPartition, t: u32) -> DistanceMatrix {
    let space = p.space();
    DistanceMatrix::build(space.size(), MatrixRole::Pdrm, Some(t), |i, j| {
        if p.block_of(i) == p.block_of(j) {
            0
        } else {
            requirement(t, space.distance(i, j))
        }
    })
}

/// PDRM over the representatives `u_i = 1^i 0^{k−i}`, `i = 0..=k`.
pub fn pdrm_grouped(g: &GroupedWeightPartition, t: u32) -> DistanceMatrix {
    DistanceMatrix::build(g.k() + 1, MatrixRole::Pdrm, Some(t), |i, j| {
        if g.group_of(i) == g.group_of(j) {
            0
        } else {
            requirement(t, i.abs_diff(j))
        }
    })
}
