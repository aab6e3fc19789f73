//! Shortest irregular-distance codes: given `D`, find words `z_1..z_M` with
//! `d(z_i, z_j) ≥ D[i][j]` of the least possible length `N(D)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::metrics::DistanceMatrix;
use crate::word::Word;

pub const MAX_LENGTH: usize = 32;

/// Candidate spaces up to this size keep per-position domains as bitsets.
const DOMAIN_LIMIT: usize = 1 << 16;
/// Candidate spaces up to this size also precompute distance masks.
const MASK_LIMIT: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DCode {
    q: u32,
    r: usize,
    words: Vec<Word>,
}

impl DCode {
    pub fn new(q: u32, r: usize, words: Vec<Word>) -> Result<Self> {
        if let Some(w) = words.iter().find(|w| w.len() != r || w.q() != q) {
            return Err(Error::DimensionMismatch(format!("word {w} in a length-{r} code over q={q}")));
        }
        Ok(DCode { q, r, words })
    }

    /// Parse concatenated digit strings (q ≤ 10).
    pub fn parse(q: u32, words: &[&str]) -> Result<Self> {
        let words = words.iter().map(|s| Word::parse(q, s)).collect::<Result<Vec<_>>>()?;
        let r = words.first().map_or(0, |w| w.len());
        Self::new(q, r, words)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.q,
            "r": self.r,
            "words": self.words.iter().map(|w| w.digits().to_vec()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct J {
            q: u32,
            r: usize,
            words: Vec<Vec<u8>>,
        }
        let j: J = serde_json::from_value(v.clone())?;
        let words = j.words.into_iter().map(|d| Word::new(j.q, d)).collect::<Result<Vec<_>>>()?;
        Self::new(j.q, j.r, words)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DCodeViolation {
    pub i: usize,
    pub j: usize,
    pub required: u32,
    pub actual: usize,
}

/// First pair (in row-major order) whose words are too close, if any.
pub fn verify_dcode(d: &DistanceMatrix, code: &DCode) -> Result<Option<DCodeViolation>> {
    if code.len() != d.n() {
        return Err(Error::SizeMismatch { expected: d.n(), got: code.len() });
    }
    for i in 0..d.n() {
        for j in (i + 1)..d.n() {
            let actual = code.words[i].distance(&code.words[j])?;
            if actual < d.get(i, j) as usize {
                return Ok(Some(DCodeViolation { i, j, required: d.get(i, j), actual }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    /// `r_min` has a witness and every shorter length is refuted.
    Exact,
    /// Every length up to `r_max` is refuted.
    LowerBoundOnly,
    /// The node budget ran out at length `lower_bound`.
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub status: SearchStatus,
    pub r_min: Option<usize>,
    /// Every length below this is refuted.
    pub lower_bound: usize,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<DCode>,
    pub nodes_expanded: u64,
}

fn ser_witness<S: serde::Serializer>(w: &Option<DCode>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(c) => c.to_json().serialize(s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub r_max: usize,
    /// Node expansions allowed over the whole search.
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { r_max: MAX_LENGTH, budget: 100_000_000 }
    }
}

enum LengthOutcome {
    Found(Vec<usize>),
    Refuted,
    Exceeded,
}

struct Exceeded;

/// Depth-first search for a code of one fixed length.
struct FixedLength<'a> {
    d: &'a DistanceMatrix,
    order: Vec<usize>,
    q: usize,
    r: usize,
    n_words: usize,
    w: usize,
    digits: Vec<u8>,
    /// Distinct positive requirements and, per word and requirement, the set
    /// of words at least that far away.
    reqs: Vec<u32>,
    far: Option<Vec<u64>>,
    budget: u64,
    nodes: u64,
    assign: Vec<usize>,
    levels: Vec<Vec<u64>>,
}

impl FixedLength<'_> {
    fn dist(&self, x: usize, y: usize) -> usize {
        if self.q == 2 {
            return (x ^ y).count_ones() as usize;
        }
        let a = &self.digits[x * self.r..(x + 1) * self.r];
        let b = &self.digits[y * self.r..(y + 1) * self.r];
        a.iter().zip(b).filter(|(u, v)| u != v).count()
    }

    fn build_far(&mut self) {
        let (n, w, nr) = (self.n_words, self.w, self.reqs.len());
        let mut far = vec![0u64; n * nr * w];
        for x in 0..n {
            for y in 0..n {
                let dxy = self.dist(x, y) as u32;
                for (ri, &req) in self.reqs.iter().enumerate() {
                    if dxy >= req {
                        far[(x * nr + ri) * w + y / 64] |= 1 << (y % 64);
                    }
                }
            }
        }
        self.far = Some(far);
    }

    /// Words of the form `1^w 0^{r−w}`.
    fn is_canonical_second(&self, x: usize) -> bool {
        let mut x = x;
        let mut seen_zero = false;
        for _ in 0..self.r {
            let d = x % self.q;
            x /= self.q;
            match d {
                0 => seen_zero = true,
                1 if !seen_zero => {}
                _ => return false,
            }
        }
        true
    }

    fn run(&mut self) -> LengthOutcome {
        let m = self.order.len();
        let w = self.w;
        self.levels = (0..=m).map(|l| vec![0u64; (m - l) * w]).collect();
        let full: Vec<u64> = (0..w)
            .map(|i| {
                let lo = i * 64;
                let hi = (lo + 64).min(self.n_words);
                if hi - lo == 64 {
                    u64::MAX
                } else {
                    (1u64 << (hi - lo)) - 1
                }
            })
            .collect();
        for p in 0..m {
            self.levels[0][p * w..(p + 1) * w].copy_from_slice(&full);
        }
        self.assign = vec![0; m];
        match self.dfs(0) {
            Ok(true) => LengthOutcome::Found(self.assign.clone()),
            Ok(false) => LengthOutcome::Refuted,
            Err(Exceeded) => LengthOutcome::Exceeded,
        }
    }

    fn dfs(&mut self, l: usize) -> std::result::Result<bool, Exceeded> {
        let m = self.order.len();
        if l == m {
            return Ok(true);
        }
        let w = self.w;
        let cand_bits: Vec<u64> = self.levels[l][..w].to_vec();
        for (wi, &bits0) in cand_bits.iter().enumerate() {
            let mut bits = bits0;
            while bits != 0 {
                let x = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                // translation fixes the first word at 0; coordinate and
                // symbol permutations fixing 0 make the second 1^w 0^{r-w}
                if (l == 0 && x != 0) || (l == 1 && !self.is_canonical_second(x)) {
                    continue;
                }
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Exceeded);
                }
                if !self.propagate(l, x) {
                    continue;
                }
                self.assign[l] = x;
                if self.dfs(l + 1)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Fill level `l+1` from level `l` after placing `x` at position `l`.
    /// Returns false on a domain wipe-out.
    fn propagate(&mut self, l: usize, x: usize) -> bool {
        let m = self.order.len();
        let w = self.w;
        let (lo, hi) = self.levels.split_at_mut(l + 1);
        let src = &lo[l];
        let dst = &mut hi[0];
        let row = self.order[l];
        for p in (l + 1)..m {
            let s = &src[(p - l) * w..(p - l + 1) * w];
            let dd = &mut dst[(p - l - 1) * w..(p - l) * w];
            let req = self.d.get(row, self.order[p]);
            if req == 0 {
                dd.copy_from_slice(s);
                continue;
            }
            let mut any = 0u64;
            if let Some(far) = &self.far {
                let ri = self.reqs.binary_search(&req).unwrap();
                let base = (x * self.reqs.len() + ri) * w;
                for i in 0..w {
                    dd[i] = s[i] & far[base + i];
                    any |= dd[i];
                }
            } else {
                for i in 0..w {
                    let mut bits = s[i];
                    let mut keep = 0u64;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        let y = i * 64 + b;
                        let dxy = if self.q == 2 {
                            (x ^ y).count_ones() as usize
                        } else {
                            let a = &self.digits[x * self.r..(x + 1) * self.r];
                            let c = &self.digits[y * self.r..(y + 1) * self.r];
                            a.iter().zip(c).filter(|(u, v)| u != v).count()
                        };
                        if dxy >= req as usize {
                            keep |= 1 << b;
                        }
                    }
                    dd[i] = keep;
                    any |= keep;
                }
            }
            if any == 0 {
                return false;
            }
        }
        true
    }
}

/// Plain backtracking for candidate spaces too large for bitset domains.
struct LargeLength<'a> {
    d: &'a DistanceMatrix,
    order: Vec<usize>,
    q: u32,
    r: usize,
    n_words: u64,
    budget: u64,
    nodes: u64,
    placed: Vec<Word>,
}

impl LargeLength<'_> {
    fn dfs(&mut self, l: usize) -> std::result::Result<bool, Exceeded> {
        if l == self.order.len() {
            return Ok(true);
        }
        let row = self.order[l];
        let limit = if l == 0 { 1 } else { self.n_words };
        for x in 0..limit {
            // every candidate examined counts against the budget here
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Exceeded);
            }
            let cand = Word::from_rank(self.q, self.r, x);
            let ok = self.placed.iter().enumerate().all(|(p, w)| {
                cand.digits().iter().zip(w.digits()).filter(|(a, b)| a != b).count()
                    >= self.d.get(row, self.order[p]) as usize
            });
            if !ok {
                continue;
            }
            self.placed.push(cand);
            if self.dfs(l + 1)? {
                return Ok(true);
            }
            self.placed.pop();
        }
        Ok(false)
    }
}

fn assignment_order(d: &DistanceMatrix) -> Vec<usize> {
    let n = d.n();
    let mut active: Vec<usize> = (0..n).filter(|&i| d.row_sum(i) > 0).collect();
    let band = d.bandwidth();
    // banded matrices are walked along the band so each placement only
    // interacts with a sliding window of neighbours
    if n >= 8 && 4 * band <= n {
        return active;
    }
    active.sort_by(|&a, &b| d.row_sum(b).cmp(&d.row_sum(a)).then(a.cmp(&b)));
    active
}

fn search_length(d: &DistanceMatrix, q: u32, r: usize, order: &[usize], budget: u64) -> (LengthOutcome, u64) {
    let n_words = crate::word::space_size(q, r);
    let m = order.len();
    if m == 0 {
        return (LengthOutcome::Found(Vec::new()), 0);
    }
    let w = (n_words as usize).div_ceil(64);
    let domain_bytes = (m as u128) * (m as u128) * (w as u128) * 4;
    if n_words <= DOMAIN_LIMIT as u128 && domain_bytes <= 1 << 30 {
        let n = n_words as usize;
        let mut digits = vec![0u8; n * r];
        for x in 0..n {
            let mut v = x;
            for i in 0..r {
                digits[x * r + i] = (v % q as usize) as u8;
                v /= q as usize;
            }
        }
        let mut reqs: Vec<u32> = (0..d.n())
            .flat_map(|i| (0..d.n()).map(move |j| (i, j)))
            .map(|(i, j)| d.get(i, j))
            .filter(|&e| e > 0)
            .collect();
        reqs.sort_unstable();
        reqs.dedup();
        let mut s = FixedLength {
            d,
            order: order.to_vec(),
            q: q as usize,
            r,
            n_words: n,
            w,
            digits,
            reqs,
            far: None,
            budget,
            nodes: 0,
            assign: Vec::new(),
            levels: Vec::new(),
        };
        if n <= MASK_LIMIT {
            s.build_far();
        }
        let out = s.run();
        (out, s.nodes)
    } else if n_words <= u64::MAX as u128 {
        let mut s = LargeLength {
            d,
            order: order.to_vec(),
            q,
            r,
            n_words: n_words as u64,
            budget,
            nodes: 0,
            placed: Vec::new(),
        };
        let out = match s.dfs(0) {
            Ok(true) => LengthOutcome::Found(s.placed.iter().map(|w| w.rank().unwrap() as usize).collect()),
            Ok(false) => LengthOutcome::Refuted,
            Err(Exceeded) => LengthOutcome::Exceeded,
        };
        (out, s.nodes)
    } else {
        (LengthOutcome::Exceeded, 0)
    }
}

/// `N(D)` over `field` by iterative deepening from `max D[i][j]`.
pub fn min_dcode(d: &DistanceMatrix, field: &Field, opts: &SearchOptions) -> Result<SearchReport> {
    if opts.r_max > MAX_LENGTH {
        return Err(Error::InvalidArgs(format!("r_max {} exceeds {MAX_LENGTH}", opts.r_max)));
    }
    let q = field.q();
    let order = assignment_order(d);
    let floor = d.max_entry() as usize;
    let mut nodes = 0u64;
    let mut r = floor;
    while r <= opts.r_max {
        let (out, used) = search_length(d, q, r, &order, opts.budget - nodes);
        nodes += used;
        match out {
            LengthOutcome::Found(assign) => {
                let mut words = vec![Word::zero(q, r); d.n()];
                for (&idx, &x) in order.iter().zip(&assign) {
                    words[idx] = Word::from_rank(q, r, x as u64);
                }
                let code = DCode::new(q, r, words)?;
                debug_assert!(verify_dcode(d, &code)?.is_none());
                return Ok(SearchReport {
                    status: SearchStatus::Exact,
                    r_min: Some(r),
                    lower_bound: r,
                    witness: Some(code),
                    nodes_expanded: nodes,
                });
            }
            LengthOutcome::Refuted => r += 1,
            LengthOutcome::Exceeded => {
                return Ok(SearchReport {
                    status: SearchStatus::BudgetExceeded,
                    r_min: None,
                    lower_bound: r,
                    witness: None,
                    nodes_expanded: nodes,
                })
            }
        }
    }
    Ok(SearchReport {
        status: SearchStatus::LowerBoundOnly,
        r_min: None,
        lower_bound: r,
        witness: None,
        nodes_expanded: nodes,
    })
}

/// `N(M, d)`: the shortest code of `m` words with minimum distance `d`.
pub fn n_classical(m: usize, dist: u32, field: &Field, opts: &SearchOptions) -> Result<SearchReport> {
    min_dcode(&DistanceMatrix::constant(m, dist), field, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn m(rows: Vec<Vec<u32>>) -> DistanceMatrix {
        DistanceMatrix::from_rows(rows).unwrap()
    }

    fn exact(d: &DistanceMatrix, q: u32) -> usize {
        let rep = min_dcode(d, &f(q), &SearchOptions::default()).unwrap();
        assert_eq!(rep.status, SearchStatus::Exact);
        let w = rep.witness.unwrap();
        assert_eq!(verify_dcode(d, &w).unwrap(), None);
        rep.r_min.unwrap()
    }

    #[test]
    fn listed_weight_code_verifies() {
        let d = m(vec![vec![0, 4, 3, 2], vec![4, 0, 4, 3], vec![3, 4, 0, 4], vec![2, 3, 4, 0]]);
        let code = DCode::parse(3, &["0000", "1111", "0222", "2001"]).unwrap();
        assert_eq!(verify_dcode(&d, &code).unwrap(), None);
        assert_eq!(exact(&d, 3), 4);
        let bad = DCode::parse(3, &["0000", "1111", "0222", "2000"]).unwrap();
        assert_eq!(verify_dcode(&d, &bad).unwrap(), Some(DCodeViolation { i: 0, j: 3, required: 2, actual: 1 }));
        assert!(matches!(verify_dcode(&d, &DCode::parse(3, &["0"]).unwrap()), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn two_words() {
        for dist in 0..6 {
            assert_eq!(exact(&DistanceMatrix::constant(2, dist), 2), dist as usize);
        }
    }

    #[test]
    fn zero_matrix() {
        let d = DistanceMatrix::zero(4);
        let rep = min_dcode(&d, &f(2), &SearchOptions::default()).unwrap();
        assert_eq!(rep.r_min, Some(0));
        assert_eq!(rep.witness.unwrap().len(), 4);
        let same = DCode::parse(2, &["01", "01", "01", "01"]).unwrap();
        assert_eq!(verify_dcode(&d, &same).unwrap(), None);
    }

    #[test]
    fn classical_values() {
        // four binary words at pairwise distance ≥ 2 need length 3: {000,011,101,110}
        assert_eq!(n_classical(4, 2, &f(2), &SearchOptions::default()).unwrap().r_min, Some(3));
        assert_eq!(n_classical(2, 5, &f(2), &SearchOptions::default()).unwrap().r_min, Some(5));
        // binary repetition-style bound: 4 words, distance 3 need length 5
        assert_eq!(n_classical(4, 3, &f(2), &SearchOptions::default()).unwrap().r_min, Some(5));
    }

    #[test]
    fn budget_and_lower_bound_only() {
        let d = DistanceMatrix::constant(5, 4);
        let rep = min_dcode(&d, &f(2), &SearchOptions { r_max: 32, budget: 0 }).unwrap();
        assert_eq!(rep.status, SearchStatus::BudgetExceeded);
        assert_eq!(rep.lower_bound, 4);
        let rep = min_dcode(&d, &f(2), &SearchOptions { r_max: 4, budget: 1_000_000 }).unwrap();
        assert_eq!(rep.status, SearchStatus::LowerBoundOnly);
        assert_eq!(rep.lower_bound, 5);
        assert!(min_dcode(&d, &f(2), &SearchOptions { r_max: 33, budget: 1 }).is_err());
    }

    #[test]
    fn banded_matrix_uses_index_order() {
        let d = crate::metrics::pdrm_grouped(&crate::partitions::hwdf_partition(15, 3).unwrap(), 2);
        assert_eq!(assignment_order(&d), (0..16).collect::<Vec<_>>());
        assert_eq!(exact(&d, 2), 4);
    }

    #[test]
    fn large_candidate_space_fallback() {
        // q^r = 5^7 > the bitset limit
        let d = DistanceMatrix::constant(3, 7);
        assert_eq!(exact(&d, 5), 7);
    }

    #[test]
    fn json_round_trip() {
        let c = DCode::parse(3, &["012", "210"]).unwrap();
        assert_eq!(DCode::from_json(&c.to_json()).unwrap(), c);
    }
}
