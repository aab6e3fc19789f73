//! Redundancy bounds and multi-function gain accounting.
//!
//! All arithmetic is exact; a ceiling is applied only where a length comes out.

use num_rational::Ratio;
use serde::Serialize;

use crate::dcode::{min_dcode, n_classical, SearchOptions, SearchStatus};
use crate::error::{Error, Result};
use crate::gf::Field;
use crate::metrics::{pdm, pdrm, DistanceMatrix};
use crate::partitions::ExplicitPartition;
use crate::word::Word;

pub type Rational = Ratio<i128>;

fn ratio_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ser_ratio<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&ratio_string(r)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub lower: usize,
    /// `None` when no upper bound could be established.
    pub upper: Option<usize>,
    pub lower_source: String,
    pub upper_source: String,
    /// The lower bound before rounding up, when it came from a fraction.
    #[serde(serialize_with = "ser_ratio")]
    pub lower_exact: Option<Rational>,
}

impl BoundReport {
    pub fn is_consistent(&self) -> bool {
        self.upper.is_none_or(|u| self.lower <= u)
    }
}

const PLOTKIN: &str = "plotkin-type average distance bound";

fn ceil_usize(r: &Rational) -> usize {
    r.ceil().to_integer().max(0) as usize
}

/// `2q / (M²(q−1) − a(q−a)) · Σ_{i<j} D[i][j]` with `a = M mod q`, `sum` the
/// upper-triangle total.
fn plotkin_fraction(m: u128, q: u128, sum: u128) -> Rational {
    let a = m % q;
    let den = m * m * (q - 1) - a * (q - a);
    Rational::new((2 * q * sum) as i128, den as i128)
}

/// Exact value of the average-distance lower bound on `N(D)`; zero for `M < 2`.
pub fn plotkin_value(d: &DistanceMatrix, field: &Field) -> Rational {
    if d.n() < 2 {
        return Rational::from_integer(0);
    }
    plotkin_fraction(d.n() as u128, field.q() as u128, d.upper_sum() as u128)
}

pub fn plotkin_lower(d: &DistanceMatrix, field: &Field) -> usize {
    ceil_usize(&plotkin_value(d, field))
}

/// `k(k+1)(6t+1−k)/6`, the weight-pair total when `k ≤ 2t`.
pub fn s_kt_small(k: u64, t: u64) -> Rational {
    let (k, t) = (k as i128, t as i128);
    Rational::new(k * (k + 1) * (6 * t + 1 - k), 6)
}

/// `t(2t+1)(3k−2t+1)/3`, the weight-pair total when `k ≥ 2t`.
pub fn s_kt_large(k: u64, t: u64) -> Rational {
    let (k, t) = (k as i128, t as i128);
    Rational::new(t * (2 * t + 1) * (3 * k - 2 * t + 1), 3)
}

/// `Σ_{0≤i<j≤k} max(0, 2t+1−(j−i))`.
pub fn s_kt(k: u64, t: u64) -> Rational {
    if k <= 2 * t {
        s_kt_small(k, t)
    } else {
        s_kt_large(k, t)
    }
}

fn check_kt(k: usize, t: u32) -> Result<()> {
    if k == 0 || t == 0 {
        return Err(Error::InvalidArgs(format!("bounds need k ≥ 1 and t ≥ 1, got k={k}, t={t}")));
    }
    Ok(())
}

fn searched_upper(m: usize, dist: u32, field: &Field, opts: &SearchOptions) -> Result<(Option<usize>, String)> {
    let rep = n_classical(m, dist, field, opts)?;
    Ok(match rep.status {
        SearchStatus::Exact => (rep.r_min, format!("shortest code of {m} words at distance {dist} (exact search)")),
        _ => (None, format!("shortest code of {m} words at distance {dist} (search incomplete)")),
    })
}

/// Bounds on the redundancy of encodings protecting the Hamming weight.
pub fn weight_bounds(k: usize, t: u32, field: &Field, opts: &SearchOptions) -> Result<BoundReport> {
    check_kt(k, t)?;
    let exact = plotkin_fraction((k + 1) as u128, field.q() as u128, s_kt(k as u64, t as u64).to_integer() as u128);
    let m = (2 * t as usize + 1).min(k + 1);
    let (upper, upper_source) = searched_upper(m, 2 * t, field, opts)?;
    Ok(BoundReport {
        lower: ceil_usize(&exact),
        upper,
        lower_source: format!("{PLOTKIN}, weight-class closed form"),
        upper_source,
        lower_exact: Some(exact),
    })
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Bounds on the redundancy of encodings protecting the support.
pub fn support_bounds(k: usize, t: u32, field: &Field, opts: &SearchOptions) -> Result<BoundReport> {
    check_kt(k, t)?;
    if k > 20 {
        return Err(Error::InvalidArgs(format!("support bounds are limited to k ≤ 20, got {k}")));
    }
    let sum: u128 = (1..=k.min(2 * t as usize) as u128)
        .map(|s| (2 * t as u128 + 1 - s) * binomial(k as u128, s))
        .sum();
    // 2^{k-1} C(k,s) unordered pairs of supports differ in exactly s places
    let exact = plotkin_fraction(1u128 << k, field.q() as u128, sum << (k - 1));
    let m = 1usize << k;
    let (upper, upper_source) = searched_upper(m, 2 * t, field, opts)?;
    Ok(BoundReport {
        lower: ceil_usize(&exact),
        upper,
        lower_source: format!("{PLOTKIN}, support closed form"),
        upper_source,
        lower_exact: Some(exact),
    })
}

/// Bounds on the redundancy for the join of several partitions, from the
/// individual redundancies and optionally `N(q^k, 2t+1)`.
pub fn join_bounds(individual: &[usize], k: usize, _t: u32, n_full: Option<usize>) -> Result<BoundReport> {
    let Some(&lower) = individual.iter().max() else {
        return Err(Error::InvalidArgs("join bounds need at least one redundancy".into()));
    };
    let sum: usize = individual.iter().sum();
    let (upper, upper_source) = match n_full {
        Some(n) if n.saturating_sub(k) < sum => (n.saturating_sub(k), "full error-correcting code length minus k"),
        _ => (sum, "sum of individual redundancies"),
    };
    Ok(BoundReport {
        lower,
        upper: Some(upper),
        lower_source: "largest individual redundancy".into(),
        upper_source: upper_source.into(),
        lower_exact: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gains {
    #[serde(serialize_with = "ser_plain_ratio")]
    pub redundancy_gain: Rational,
    #[serde(serialize_with = "ser_plain_ratio")]
    pub rate_gain: Rational,
}

fn ser_plain_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

/// Savings of one joint encoding with redundancy `r` over separate encodings.
pub fn partition_gains(individual: &[usize], r: usize, k: usize) -> Result<Gains> {
    if individual.is_empty() {
        return Err(Error::InvalidArgs("gains need at least one redundancy".into()));
    }
    let saved = individual.iter().sum::<usize>() as i128 - r as i128;
    Ok(Gains {
        redundancy_gain: Rational::new(saved, individual.len() as i128),
        rate_gain: Rational::new(saved, (k + r) as i128),
    })
}

pub fn trivial_lower(blocks: usize, t: u32) -> usize {
    if blocks >= 2 {
        2 * t as usize
    } else {
        0
    }
}

/// Bounds for an explicit partition. The lower side uses the given
/// representatives (least-rank word of each block by default); the upper side
/// searches the block-distance requirement matrix.
pub fn partition_bounds(
    p: &ExplicitPartition,
    t: u32,
    reps: Option<&[Word]>,
    opts: &SearchOptions,
) -> Result<BoundReport> {
    let field = p.field();
    let default_reps: Vec<Word>;
    let reps = match reps {
        Some(r) => r,
        None => {
            let space = p.space();
            let mut first = vec![usize::MAX; p.num_blocks()];
            for r in 0..space.size() {
                let b = p.block_of(r);
                if first[b] == usize::MAX {
                    first[b] = r;
                }
            }
            default_reps = first.iter().map(|&r| space.word(r)).collect();
            &default_reps
        }
    };
    let exact = plotkin_value(&pdrm(p, t, reps)?, field);
    let trivial = trivial_lower(p.num_blocks(), t);
    let plotkin = ceil_usize(&exact);
    let (lower, lower_source, lower_exact) = if plotkin > trivial {
        (plotkin, format!("{PLOTKIN} over block representatives"), Some(exact))
    } else {
        (trivial, "2t for any partition with at least two blocks".to_string(), None)
    };
    let rep = min_dcode(&pdm(p, t), field, opts)?;
    let (upper, upper_source) = match rep.status {
        SearchStatus::Exact => (rep.r_min, "shortest code for the block distance matrix (exact search)"),
        _ => (None, "shortest code for the block distance matrix (search incomplete)"),
    };
    Ok(BoundReport { lower, upper, lower_source, upper_source: upper_source.into(), lower_exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::pdrm_grouped;
    use crate::partitions::weight_partition;

    fn f(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn weight_f3_k3_t2() {
        let b = weight_bounds(3, 2, &f(3), &SearchOptions::default()).unwrap();
        assert_eq!(b.lower, 4);
        assert_eq!(s_kt(3, 2), Rational::from_integer(20));
        assert!(b.is_consistent());
        let d = pdrm_grouped(&weight_partition(3), 2);
        assert_eq!(plotkin_lower(&d, &f(3)), 4);
    }

    #[test]
    fn weight_k1_t1_binary() {
        assert_eq!(s_kt(1, 1), Rational::from_integer(2));
        assert_eq!(weight_bounds(1, 1, &f(2), &SearchOptions::default()).unwrap().lower, 2);
    }

    #[test]
    fn s_branches_meet() {
        assert_eq!(s_kt_small(4, 2), Rational::from_integer(30));
        assert_eq!(s_kt_large(4, 2), Rational::from_integer(30));
    }

    #[test]
    fn support_f3_k3_t2() {
        let b = support_bounds(3, 2, &f(3), &SearchOptions { r_max: 32, budget: 0 }).unwrap();
        assert_eq!(b.lower, 5);
        let e = b.lower_exact.unwrap();
        assert!(e > Rational::new(438, 100) && e < Rational::new(439, 100));
        assert_eq!(b.upper, None);
    }

    #[test]
    fn support_k2_t1_binary() {
        assert_eq!(support_bounds(2, 1, &f(2), &SearchOptions::default()).unwrap().lower, 3);
        assert!(support_bounds(2, 0, &f(2), &SearchOptions::default()).is_err());
    }

    #[test]
    fn zero_matrix_plotkin() {
        assert_eq!(plotkin_lower(&DistanceMatrix::zero(5), &f(2)), 0);
        assert_eq!(plotkin_lower(&DistanceMatrix::zero(1), &f(2)), 0);
    }

    #[test]
    fn join_and_gains() {
        let b = join_bounds(&[4, 4], 35, 2, Some(46)).unwrap();
        assert_eq!((b.lower, b.upper), (4, Some(8)));
        let b = join_bounds(&[2, 2], 3, 1, None).unwrap();
        assert_eq!((b.lower, b.upper), (2, Some(4)));
        let b = join_bounds(&[3], 3, 1, None).unwrap();
        assert_eq!((b.lower, b.upper), (3, Some(3)));
        // a tighter full-code length wins over the sum
        assert_eq!(join_bounds(&[5, 5], 4, 1, Some(11)).unwrap().upper, Some(7));
        let g = partition_gains(&[4, 4], 4, 35).unwrap();
        assert_eq!((g.redundancy_gain, g.rate_gain), (Rational::from_integer(2), Rational::new(4, 39)));
        let g = partition_gains(&[2, 2], 3, 3).unwrap();
        assert_eq!((g.redundancy_gain, g.rate_gain), (Rational::new(1, 2), Rational::new(1, 6)));
        let g = partition_gains(&[2, 3], 5, 3).unwrap();
        assert_eq!((g.redundancy_gain, g.rate_gain), (Rational::from_integer(0), Rational::from_integer(0)));
        assert_eq!(serde_json::to_value(partition_gains(&[4, 4], 4, 35).unwrap()).unwrap()["rate_gain"], "4/39");
    }

    #[test]
    fn trivial() {
        assert_eq!(trivial_lower(4, 2), 4);
        assert_eq!(trivial_lower(1, 5), 0);
        assert_eq!(trivial_lower(2, 1), 2);
    }
}
