use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::word::{Space, Word};

use super::ExplicitPartition;

/// A linear subspace of F_q^k held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    k: usize,
    basis: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

/// Row-reduce in place; returns pivot columns. Zero rows are dropped.
fn rref(field: &Field, rows: &mut Vec<Vec<u8>>, k: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..k {
        let Some(pr) = (top..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(top, pr);
        let inv = field.inv(rows[top][col]).unwrap();
        for x in rows[top].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..rows.len() {
            if r != top && rows[r][col] != 0 {
                let c = rows[r][col];
                for j in 0..k {
                    let s = field.mul(c, rows[top][j]);
                    rows[r][j] = field.sub(rows[r][j], s);
                }
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    pivots
}

/// Basis of the null space `{x : M x = 0}`.
fn null_space(field: &Field, matrix: &[Vec<u8>], k: usize) -> Vec<Vec<u8>> {
    let mut rows: Vec<Vec<u8>> = matrix.to_vec();
    let pivots = rref(field, &mut rows, k);
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; k];
            v[f] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = field.neg(row[f]);
            }
            v
        })
        .collect()
}

impl Subspace {
    pub fn from_generators(field: Field, k: usize, generators: &[Vec<u8>]) -> Result<Subspace> {
        for g in generators {
            if g.len() != k {
                return Err(Error::DimensionMismatch(format!("generator of length {} in k={k}", g.len())));
            }
            if g.iter().any(|&x| x as u32 >= field.q()) {
                return Err(Error::InvalidArgs("generator symbol outside the field".into()));
            }
        }
        let mut basis = generators.to_vec();
        let pivots = rref(&field, &mut basis, k);
        Ok(Subspace { field, k, basis, pivots })
    }

    pub fn whole(field: Field, k: usize) -> Subspace {
        let gens: Vec<Vec<u8>> = (0..k)
            .map(|i| {
                let mut e = vec![0; k];
                e[i] = 1;
                e
            })
            .collect();
        Subspace::from_generators(field, k, &gens).unwrap()
    }

    pub fn zero(field: Field, k: usize) -> Subspace {
        Subspace { field, k, basis: Vec::new(), pivots: Vec::new() }
    }

    /// Kernel of the linear map `x ↦ M x` for an ℓ×k matrix.
    pub fn kernel_of_linear(field: Field, k: usize, matrix: &[Vec<u8>]) -> Result<Subspace> {
        for row in matrix {
            if row.len() != k {
                return Err(Error::DimensionMismatch(format!("matrix row of length {} in k={k}", row.len())));
            }
            if row.iter().any(|&x| x as u32 >= field.q()) {
                return Err(Error::InvalidArgs("matrix entry outside the field".into()));
            }
        }
        let gens = null_space(&field, matrix, k);
        Subspace::from_generators(field, k, &gens)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    /// Rows spanning the dual; `x ∈ V` iff every row is orthogonal to `x`.
    pub fn annihilator(&self) -> Vec<Vec<u8>> {
        null_space(&self.field, &self.basis, self.k)
    }

    /// Canonical coset representative: `x` with pivot coordinates cleared.
    pub fn reduce(&self, x: &[u8]) -> Vec<u8> {
        let mut v = x.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                for j in 0..self.k {
                    v[j] = self.field.sub(v[j], self.field.mul(c, row[j]));
                }
            }
        }
        v
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        x.len() == self.k && self.reduce(x).iter().all(|&c| c == 0)
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.q() == self.field.q() && self.contains(w.digits())
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field || self.k != other.k {
            return Err(Error::DimensionMismatch("subspaces of different ambient spaces".into()));
        }
        Ok(())
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut checks = self.annihilator();
        checks.extend(other.annihilator());
        Subspace::kernel_of_linear(self.field.clone(), self.k, &checks)
    }

    /// All q^dim elements, in the order of coefficient ranks.
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let q = self.field.q() as u64;
        let count = q.pow(self.dim() as u32);
        (0..count)
            .map(|mut c| {
                let mut v = vec![0u8; self.k];
                for row in &self.basis {
                    let a = (c % q) as u8;
                    c /= q;
                    for j in 0..self.k {
                        v[j] = self.field.add(v[j], self.field.mul(a, row[j]));
                    }
                }
                v
            })
            .collect()
    }

    /// Partition of F_q^k into the cosets `x + V`.
    pub fn coset_partition(&self) -> Result<ExplicitPartition> {
        let space = Space::new(self.field.clone(), self.k)?;
        let mut buf = vec![0u8; self.k];
        let mut labels = Vec::with_capacity(space.size());
        let mut reps: HashMap<Vec<u8>, u32> = HashMap::new();
        for r in 0..space.size() {
            space.digits_into(r, &mut buf);
            let rep = self.reduce(&buf);
            let next = reps.len() as u32;
            labels.push(*reps.entry(rep).or_insert(next));
        }
        ExplicitPartition::from_block_ids(space, &labels)
    }
}

pub fn kernel_intersection(subspaces: &[Subspace]) -> Result<Subspace> {
    let (first, rest) = subspaces
        .split_first()
        .ok_or_else(|| Error::InvalidArgs("empty subspace list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, v| acc.intersection(v))
}

/// `{x : x_J = 0}` for 0-based `coords`.
pub fn coordinate_kernel(field: Field, k: usize, coords: &[usize]) -> Result<Subspace> {
    let rows: Vec<Vec<u8>> = coords
        .iter()
        .map(|&i| {
            let mut e = vec![0u8; k];
            if i < k {
                e[i] = 1;
            }
            e
        })
        .collect();
    if let Some(&i) = coords.iter().find(|&&i| i >= k) {
        return Err(Error::InvalidArgs(format!("coordinate {} outside 1..={k}", i + 1)));
    }
    Subspace::kernel_of_linear(field, k, &rows)
}
