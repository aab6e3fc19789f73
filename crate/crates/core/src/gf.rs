//! Arithmetic in GF(q) for prime powers q ≤ 256.
//!
//! Elements are `u8` values. For q = p^m the value `Σ c_i p^i` stands for the
//! polynomial `Σ c_i x^i` reduced modulo the field's fixed modulus.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_Q: u32 = 256;

/// Moduli for the extension fields, little-endian coefficients with the leading 1.
const MODULI: &[(u32, u32, &[u8])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 2, &[2, 1, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

struct Tables {
    q: u32,
    p: u32,
    m: u32,
    modulus: Vec<u8>,
    add: Vec<u8>,
    neg: Vec<u8>,
    /// exp[i] = g^i for i in 0..2(q-1), g a primitive element.
    exp: Vec<u8>,
    log: Vec<u16>,
}

/// A finite field GF(q). Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn default_modulus(p: u32, m: u32) -> Vec<u8> {
    if m == 1 {
        return vec![0, 1];
    }
    MODULI
        .iter()
        .find(|(pp, mm, _)| *pp == p && *mm == m)
        .map(|(_, _, c)| c.to_vec())
        .expect("every prime power up to 256 has a listed modulus")
}

impl Field {
    /// GF(q) with the crate's fixed modulus.
    pub fn new(q: u32) -> Result<Field> {
        if q > MAX_Q {
            return Err(Error::TooLarge(q));
        }
        let (p, m) = factor_prime_power(q).ok_or(Error::NotAPrimePower(q))?;
        Field::with_modulus(p, &default_modulus(p, m))
    }

    /// GF(p^m) defined by an explicit monic modulus (little-endian coefficients).
    pub fn with_modulus(p: u32, modulus: &[u8]) -> Result<Field> {
        if factor_prime_power(p).map(|(_, m)| m) != Some(1) {
            return Err(Error::NotAPrimePower(p));
        }
        let m = modulus.len().saturating_sub(1) as u32;
        if m == 0 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c as u32 >= p) {
            return Err(Error::NotIrreducible { p, m });
        }
        let q64 = (p as u64).pow(m);
        if q64 > MAX_Q as u64 {
            return Err(Error::TooLarge(q64.min(u32::MAX as u64) as u32));
        }
        let q = q64 as u32;
        let digits = |v: u32| -> Vec<u32> {
            let mut v = v;
            (0..m)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let undigits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &c| acc * p + c);

        let mut add = vec![0u8; (q * q) as usize];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s) as u8;
            }
        }
        let mut neg = vec![0u8; q as usize];
        for a in 0..q {
            let n: Vec<u32> = digits(a).iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = undigits(&n) as u8;
        }

        let poly_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; (2 * m) as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            for deg in (m as usize..prod.len()).rev() {
                let c = prod[deg];
                if c != 0 {
                    for (i, &mc) in modulus.iter().enumerate() {
                        let idx = deg - m as usize + i;
                        prod[idx] = (prod[idx] + p * p - c * mc as u32) % p;
                    }
                }
            }
            undigits(&prod[..m as usize])
        };

        // Search for a primitive element; none exists when the modulus is reducible.
        let order = q - 1;
        let mut generator = None;
        for g in 1..q {
            let mut x = 1u32;
            let mut n = 0u32;
            loop {
                x = poly_mul(x, g);
                n += 1;
                if x == 1 || x == 0 || n > order {
                    break;
                }
            }
            if x == 1 && n == order {
                generator = Some(g);
                break;
            }
        }
        let g = generator.ok_or(Error::NotIrreducible { p, m })?;
        let mut exp = vec![0u8; 2 * order as usize];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as u8;
            exp[(i + order) as usize] = x as u8;
            log[x as usize] = i as u16;
            x = poly_mul(x, g);
        }
        Ok(Field(Arc::new(Tables {
            q,
            p,
            m,
            modulus: modulus.to_vec(),
            add,
            neg,
            exp,
            log,
        })))
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Little-endian modulus coefficients including the leading 1.
    pub fn modulus(&self) -> &[u8] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
    }

    pub fn inv(&self, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        let t = &self.0;
        let order = (t.q - 1) as usize;
        Some(t.exp[(order - t.log[a as usize] as usize) % order])
    }

    pub fn div(&self, a: u8, b: u8) -> Option<u8> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        (0..self.0.q).map(|x| x as u8)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m() == 1 {
            write!(f, "GF({})", self.q())
        } else {
            write!(f, "GF({}; modulus {:?})", self.q(), self.modulus())
        }
    }
}
