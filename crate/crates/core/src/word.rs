//! Words of F_q^k and the explicit space they live in.
//!
//! Coordinate `i` (0-based) of a word is its `i`-th printed symbol from the
//! left, and contributes `digit * q^i` to the rank.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::gf::Field;

pub const DEFAULT_EXPLICIT_CAP: u64 = 1 << 22;

static EXPLICIT_CAP: AtomicU64 = AtomicU64::new(DEFAULT_EXPLICIT_CAP);

/// Largest q^k that may be materialized explicitly.
pub fn explicit_cap() -> u64 {
    EXPLICIT_CAP.load(Ordering::Relaxed)
}

pub fn set_explicit_cap(cap: u64) {
    EXPLICIT_CAP.store(cap, Ordering::Relaxed);
}

/// A vector over an alphabet of size q.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: u32,
    digits: Vec<u8>,
}

impl Word {
    pub fn new(q: u32, digits: Vec<u8>) -> Result<Word> {
        if let Some(&d) = digits.iter().find(|&&d| d as u32 >= q) {
            return Err(Error::InvalidArgs(format!("symbol {d} not below q={q}")));
        }
        Ok(Word { q, digits })
    }

    pub fn zero(q: u32, k: usize) -> Word {
        Word { q, digits: vec![0; k] }
    }

    /// `(a, .., a)` of length `k`.
    pub fn constant(q: u32, k: usize, a: u8) -> Word {
        Word { q, digits: vec![a; k] }
    }

    pub fn from_rank(q: u32, k: usize, mut rank: u64) -> Word {
        let digits = (0..k)
            .map(|_| {
                let d = (rank % q as u64) as u8;
                rank /= q as u64;
                d
            })
            .collect();
        Word { q, digits }
    }

    /// Parse a concatenated digit string such as `"0110"` (q ≤ 10).
    pub fn parse(q: u32, s: &str) -> Result<Word> {
        let digits = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Word::new(q, digits)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    /// `Σ digits[i] q^i`, or `None` on overflow.
    pub fn rank(&self) -> Option<u64> {
        self.digits
            .iter()
            .rev()
            .try_fold(0u64, |acc, &d| acc.checked_mul(self.q as u64)?.checked_add(d as u64))
    }

    pub fn weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    /// 0-based indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.digits[i] != 0).collect()
    }

    pub fn distance(&self, other: &Word) -> Result<usize> {
        check_compatible(self, other)?;
        Ok(digit_distance(&self.digits, &other.digits))
    }

    /// Componentwise `self - other`.
    pub fn sub(&self, other: &Word, field: &Field) -> Result<Word> {
        check_compatible(self, other)?;
        Ok(Word {
            q: self.q,
            digits: self
                .digits
                .iter()
                .zip(&other.digits)
                .map(|(&a, &b)| field.sub(a, b))
                .collect(),
        })
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Word { q: self.q, digits }
    }
}

fn check_compatible(a: &Word, b: &Word) -> Result<()> {
    if a.q != b.q || a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "words over q={} k={} and q={} k={}",
            a.q,
            a.len(),
            b.q,
            b.len()
        )));
    }
    Ok(())
}

#[inline]
pub fn digit_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub fn hamming_distance(u: &Word, v: &Word) -> Result<usize> {
    u.distance(v)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for d in &self.digits {
                write!(f, "{d}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// F_q^k with words addressed by rank. Construction enforces the explicit cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    field: Field,
    k: usize,
    size: usize,
}

/// q^k as u128, saturating.
pub fn space_size(q: u32, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, _| acc.saturating_mul(q as u128))
}

impl Space {
    pub fn new(field: Field, k: usize) -> Result<Space> {
        let size = space_size(field.q(), k);
        let cap = explicit_cap();
        if size > cap as u128 {
            return Err(Error::SpaceTooLarge { size, cap });
        }
        Ok(Space { field, k, size: size as usize })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn word(&self, rank: usize) -> Word {
        Word::from_rank(self.q(), self.k, rank as u64)
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.size).map(move |r| self.word(r))
    }

    pub fn digits_into(&self, mut rank: usize, out: &mut [u8]) {
        let q = self.q() as usize;
        for d in out.iter_mut().take(self.k) {
            *d = (rank % q) as u8;
            rank /= q;
        }
    }

    pub fn rank_of_digits(&self, digits: &[u8]) -> usize {
        let q = self.q() as usize;
        digits.iter().rev().fold(0usize, |acc, &d| acc * q + d as usize)
    }

    /// Rank of a word, checking that it belongs to this space.
    pub fn rank(&self, w: &Word) -> Result<usize> {
        if w.q() != self.q() || w.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "word over q={} k={} in space q={} k={}",
                w.q(),
                w.len(),
                self.q(),
                self.k
            )));
        }
        Ok(self.rank_of_digits(w.digits()))
    }

    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let q = self.q() as usize;
        if q == 2 {
            return (a ^ b).count_ones() as usize;
        }
        let (mut a, mut b) = (a, b);
        let mut d = 0;
        while a != 0 || b != 0 {
            if a % q != b % q {
                d += 1;
            }
            a /= q;
            b /= q;
        }
        d
    }

    #[inline]
    pub fn weight(&self, a: usize) -> usize {
        self.distance(a, 0)
    }

    /// Ranks of the words differing from `rank` in exactly one coordinate.
    pub fn neighbors(&self, rank: usize, out: &mut Vec<usize>) {
        out.clear();
        let q = self.q() as usize;
        let mut pow = 1usize;
        for _ in 0..self.k {
            let d = (rank / pow) % q;
            let base = rank - d * pow;
            for s in 0..q {
                if s != d {
                    out.push(base + s * pow);
                }
            }
            pow *= q;
        }
    }

    /// Ranks of all words within distance `radius` of `rank`, centre first.
    pub fn ball(&self, rank: usize, radius: usize) -> Vec<usize> {
        let mut out = vec![rank];
        let q = self.q() as usize;
        let pows: Vec<usize> = (0..self.k).map(|i| q.pow(i as u32)).collect();
        fn rec(
            cur: usize,
            start: usize,
            left: usize,
            q: usize,
            pows: &[usize],
            out: &mut Vec<usize>,
        ) {
            if left == 0 {
                return;
            }
            for i in start..pows.len() {
                let d = (cur / pows[i]) % q;
                let base = cur - d * pows[i];
                for s in 0..q {
                    if s != d {
                        let next = base + s * pows[i];
                        out.push(next);
                        rec(next, i + 1, left - 1, q, pows, out);
                    }
                }
            }
        }
        rec(rank, 0, radius, q, &pows, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn distance_examples() {
        let a = Word::parse(2, "110011").unwrap();
        let b = Word::parse(2, "111100").unwrap();
        let by_hand = a.digits().iter().zip(b.digits()).filter(|(x, y)| x != y).count();
        assert_eq!(a.distance(&b).unwrap(), by_hand);
        assert_eq!(by_hand, 4);
        let z = Word::zero(2, 4);
        assert_eq!(z.distance(&z).unwrap(), 0);
        let u = Word::new(4, vec![1, 0]).unwrap();
        let v = Word::new(4, vec![2, 0]).unwrap();
        assert_eq!(u.distance(&v).unwrap(), 1);
        assert!(matches!(u.distance(&Word::zero(4, 3)), Err(Error::DimensionMismatch(_))));
        assert!(matches!(u.distance(&Word::zero(2, 2)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn weight_and_support() {
        let z = Word::zero(2, 3);
        assert_eq!(z.weight(), 0);
        assert!(z.support().is_empty());
        let w = Word::new(3, vec![1, 0, 2]).unwrap();
        let one_based: Vec<usize> = w.support().iter().map(|i| i + 1).collect();
        assert_eq!(one_based, vec![1, 3]);
        // (ω, ω²) over GF(4): ω = 2, ω² = 3.
        let f4 = f(4);
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(Word::new(4, vec![2, 3]).unwrap().weight(), 2);
    }

    #[test]
    fn rank_round_trip_and_metric() {
        for (q, k) in [(2u32, 4usize), (3, 3), (4, 2), (5, 2)] {
            let space = Space::new(f(q), k).unwrap();
            for r in 0..space.size() {
                let w = space.word(r);
                assert_eq!(w.rank(), Some(r as u64));
                assert_eq!(space.rank(&w).unwrap(), r);
                for s in 0..space.size() {
                    let v = space.word(s);
                    let d = w.distance(&v).unwrap();
                    assert_eq!(space.distance(r, s), d);
                    assert_eq!(w.sub(&v, space.field()).unwrap().weight(), d);
                }
            }
        }
    }

    #[test]
    fn ball_sizes() {
        let space = Space::new(f(3), 4).unwrap();
        let ball = space.ball(17, 2);
        // 1 + 4*2 + 6*4
        assert_eq!(ball.len(), 33);
        let mut sorted = ball.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 33);
        assert!(ball.iter().all(|&b| space.distance(17, b) <= 2));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(Space::new(f(2), 40), Err(Error::SpaceTooLarge { .. })));
    }

    #[test]
    fn rank_overflow_is_none() {
        assert_eq!(Word::constant(256, 9, 255).rank(), None);
        assert_eq!(Word::constant(2, 35, 1).rank(), Some((1u64 << 35) - 1));
    }
}
