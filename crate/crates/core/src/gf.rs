//! Binary extension field arithmetic GF(2^m) backed by log/antilog tables.

use crate::error::{Error, Result};

/// Default primitive polynomials, indexed by extension degree.
const PRIMITIVE_POLYS: [(u32, u32); 2] = [(4, 0b1_0011), (8, 0b1_0001_1101)];

/// GF(2^m) for 2 <= m <= 8. Elements are stored as `u8` bit vectors in the
/// polynomial basis.
#[derive(Clone, Debug)]
pub struct GaloisField {
    m: u32,
    poly: u32,
    order: usize,
    log: Vec<u16>,
    // Doubled so that exp[log a + log b] never needs a modulo.
    exp: Vec<u8>,
}

impl GaloisField {
    /// Field with the conventional primitive polynomial for `m` (4 or 8).
    pub fn new(m: u32) -> Result<Self> {
        let poly = PRIMITIVE_POLYS
            .iter()
            .find(|(deg, _)| *deg == m)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::InvalidCode(format!("no default primitive polynomial for m = {m}")))?;
        Self::with_polynomial(m, poly)
    }

    pub fn with_polynomial(m: u32, poly: u32) -> Result<Self> {
        if !(2..=8).contains(&m) {
            return Err(Error::InvalidCode(format!("extension degree {m} outside 2..=8")));
        }
        if poly >> m != 1 {
            return Err(Error::InvalidCode(format!("polynomial {poly:#b} does not have degree {m}")));
        }
        let order = (1usize << m) - 1;
        let mut log = vec![0u16; order + 1];
        let mut exp = vec![0u8; 2 * order];
        let mut x: u32 = 1;
        for (i, e) in exp.iter_mut().enumerate().take(order) {
            if i > 0 && x == 1 {
                return Err(Error::InvalidCode(format!("polynomial {poly:#b} is not primitive")));
            }
            *e = x as u8;
            log[x as usize] = i as u16;
            x <<= 1;
            if x >> m != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::InvalidCode(format!("polynomial {poly:#b} is not primitive")));
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { m, poly, order, log, exp })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_polynomial(&self) -> u32 {
        self.poly
    }

    /// Multiplicative group order, 2^m - 1.
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.exp[(self.order - self.log[a as usize] as usize) % self.order]
    }

    #[inline]
    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    /// alpha^e for any integer exponent (reduced mod 2^m - 1).
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> u8 {
        self.exp[e.rem_euclid(self.order as i64) as usize]
    }

    /// Discrete log base alpha. Panics on zero.
    #[inline]
    pub fn log(&self, a: u8) -> usize {
        assert!(a != 0, "log of zero");
        self.log[a as usize] as usize
    }

    #[inline]
    pub fn antilog(&self, e: usize) -> u8 {
        self.exp[e % self.order]
    }

    pub fn pow(&self, a: u8, e: usize) -> u8 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] as usize * e) % self.order]
    }

    /// Minimal polynomial over GF(2) of alpha^e, as a bit mask (bit i = coefficient of x^i).
    pub fn minimal_polynomial(&self, e: usize) -> u64 {
        // Product of (x - alpha^c) over the cyclotomic coset of e, computed over
        // GF(2^m); the result has binary coefficients.
        let mut coset = Vec::new();
        let mut c = e % self.order;
        loop {
            coset.push(c);
            c = (c * 2) % self.order;
            if c == e % self.order {
                break;
            }
        }
        let mut poly: Vec<u8> = vec![1];
        for &c in &coset {
            let root = self.antilog(c);
            let mut next = vec![0u8; poly.len() + 1];
            for (i, &coef) in poly.iter().enumerate() {
                next[i + 1] ^= coef;
                next[i] ^= self.mul(coef, root);
            }
            poly = next;
        }
        poly.iter().enumerate().fold(0u64, |acc, (i, &coef)| {
            debug_assert!(coef <= 1, "minimal polynomial must be binary");
            acc | ((coef as u64) << i)
        })
    }
}
