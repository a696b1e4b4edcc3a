//! Narrow-sense binary BCH component codes with optional one-bit extension
//! and shortening, plus syndrome-based bounded-distance decoding.
//!
//! Transmitted position `p` of an unextended code maps to inner exponent
//! `p + shortened_bits`, so information occupies the leading transmitted
//! positions and the inner parity the trailing ones. The extension parity bit,
//! when present, is always the last transmitted position.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::GaloisField;

/// Largest supported error-correcting capability.
pub const MAX_T: usize = 8;

/// Construction parameters for a component code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    /// Length of the underlying primitive code, 2^m - 1.
    pub n_inner: usize,
    /// Information length of the underlying primitive code.
    pub k_inner: usize,
    pub t: usize,
    pub extended: bool,
    pub shortened_bits: usize,
}

impl CodeSpec {
    pub const fn new(n_inner: usize, k_inner: usize, t: usize, extended: bool, shortened_bits: usize) -> Self {
        Self { n_inner, k_inner, t, extended, shortened_bits }
    }

    /// Parses the transmitted-code shorthand `n,k,t`.
    ///
    /// A length of 2^m is read as a one-bit extension of the (2^m - 1) code,
    /// a length below 2^m - 1 as a shortened code with the same parity count.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split([',', ':', '/']).map(str::trim).collect();
        let parse =
            |v: &str| v.parse::<usize>().map_err(|_| Error::Config(format!("bad code component '{v}' in '{s}'")));
        if parts.len() != 3 {
            return Err(Error::Config(format!("code must be 'n,k,t', got '{s}'")));
        }
        let (n, k, t) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if n < 3 || k >= n {
            return Err(Error::Config(format!("invalid code '{s}'")));
        }
        if n.is_power_of_two() {
            return Ok(Self::new(n - 1, k, t, true, 0));
        }
        let n_inner = (n + 1).next_power_of_two() - 1;
        let shortened = n_inner - n;
        Ok(Self::new(n_inner, k + shortened, t, false, shortened))
    }

    pub fn build(&self) -> Result<BchCode> {
        BchCode::new(*self)
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_inner + self.extended as usize - self.shortened_bits;
        write!(f, "{},{},{}", n, self.k_inner - self.shortened_bits, self.t)
    }
}

/// Compact syndrome state of a received word: the `t` odd-indexed power
/// sums S1, S3, ..., S(2t-1) and, for extended codes, the overall parity.
///
/// For binary codes the even power sums follow from S(2i) = S(i)^2, so the
/// odd ones determine the full syndrome. The state is linear: the syndrome of
/// `a + b` is the XOR of the syndromes of `a` and `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Syndrome {
    odd: [u8; MAX_T],
    parity: u8,
}

impl Syndrome {
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.parity == 0 && self.odd.iter().all(|&s| s == 0)
    }

    /// True when the inner power sums vanish (parity not considered).
    #[inline]
    pub fn inner_is_zero(&self) -> bool {
        self.odd.iter().all(|&s| s == 0)
    }

    /// Odd overall parity (always false for unextended codes).
    #[inline]
    pub fn parity_odd(&self) -> bool {
        self.parity != 0
    }

    #[inline]
    pub fn odd_power_sums(&self) -> &[u8; MAX_T] {
        &self.odd
    }
}

impl std::ops::BitXorAssign for Syndrome {
    #[inline]
    fn bitxor_assign(&mut self, rhs: Self) {
        for (a, b) in self.odd.iter_mut().zip(rhs.odd) {
            *a ^= b;
        }
        self.parity ^= rhs.parity;
    }
}

impl std::ops::BitXor for Syndrome {
    type Output = Syndrome;
    #[inline]
    fn bitxor(mut self, rhs: Self) -> Syndrome {
        self ^= rhs;
        self
    }
}

/// Full syndrome vector as exposed by [`BchCode::syndromes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromeVector {
    /// S1, S2, ..., S(2t).
    pub power_sums: Vec<u8>,
    /// `Some(true)` when an extended word has odd overall parity.
    pub parity_odd: Option<bool>,
}

impl SyndromeVector {
    pub fn is_zero(&self) -> bool {
        self.power_sums.iter().all(|&s| s == 0) && self.parity_odd != Some(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BddOutcome {
    Success { codeword: Vec<u8>, error_positions: Vec<usize> },
    Failure,
}

impl BddOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, BddOutcome::Success { .. })
    }

    pub fn error_weight(&self) -> Option<usize> {
        match self {
            BddOutcome::Success { error_positions, .. } => Some(error_positions.len()),
            BddOutcome::Failure => None,
        }
    }
}

/// A binary BCH component code.
#[derive(Clone, Debug)]
pub struct BchCode {
    spec: CodeSpec,
    field: GaloisField,
    n_c: usize,
    k_c: usize,
    d0: usize,
    /// Coefficients of g(x), bit i = x^i.
    generator: u128,
    generator_degree: usize,
    /// Syndrome contribution of a single one at each transmitted position.
    position_syndromes: Vec<Syndrome>,
}

impl BchCode {
    pub fn new(spec: CodeSpec) -> Result<Self> {
        let CodeSpec { n_inner, k_inner, t, extended, shortened_bits } = spec;
        if !(n_inner + 1).is_power_of_two() {
            return Err(Error::InvalidCode(format!("inner length {n_inner} is not 2^m - 1")));
        }
        let m = (n_inner + 1).trailing_zeros();
        if t == 0 || t > MAX_T {
            return Err(Error::InvalidCode(format!("t = {t} outside 1..={MAX_T}")));
        }
        if k_inner == 0 || k_inner >= n_inner {
            return Err(Error::InvalidCode(format!("k = {k_inner} invalid for n = {n_inner}")));
        }
        if shortened_bits >= k_inner {
            return Err(Error::InvalidCode(format!("cannot shorten {shortened_bits} of {k_inner} information bits")));
        }
        let field = GaloisField::new(m)?;

        // g(x) = lcm of the minimal polynomials of alpha^1 .. alpha^2t.
        let mut seen: Vec<u64> = Vec::new();
        let mut generator: u128 = 1;
        for i in 1..=2 * t {
            let mp = field.minimal_polynomial(i);
            if !seen.contains(&mp) {
                seen.push(mp);
                generator = clmul(generator, mp as u128);
            }
        }
        let generator_degree = 127 - generator.leading_zeros() as usize;
        if generator_degree != n_inner - k_inner {
            return Err(Error::InvalidCode(format!(
                "({n_inner},{k_inner},{t}) is not a BCH code: generator degree {generator_degree} != {}",
                n_inner - k_inner
            )));
        }

        let n_c = n_inner + extended as usize - shortened_bits;
        let k_c = k_inner - shortened_bits;
        let d0 = if extended { 2 * t + 2 } else { 2 * t + 1 };

        let mut position_syndromes = Vec::with_capacity(n_c);
        for p in 0..n_inner - shortened_bits {
            let e = (p + shortened_bits) as i64;
            let mut s = Syndrome { parity: extended as u8, ..Default::default() };
            for (i, slot) in s.odd.iter_mut().take(t).enumerate() {
                *slot = field.alpha_pow(e * (2 * i as i64 + 1));
            }
            position_syndromes.push(s);
        }
        if extended {
            position_syndromes.push(Syndrome { parity: 1, ..Default::default() });
        }

        Ok(Self { spec, field, n_c, k_c, d0, generator, generator_degree, position_syndromes })
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Transmitted length.
    pub fn n(&self) -> usize {
        self.n_c
    }

    /// Transmitted information length.
    pub fn k(&self) -> usize {
        self.k_c
    }

    pub fn t(&self) -> usize {
        self.spec.t
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn n_inner(&self) -> usize {
        self.spec.n_inner
    }

    pub fn is_extended(&self) -> bool {
        self.spec.extended
    }

    pub fn shortened_bits(&self) -> usize {
        self.spec.shortened_bits
    }

    /// Generator polynomial coefficients, index i = coefficient of x^i.
    pub fn generator_polynomial(&self) -> Vec<u8> {
        (0..=self.generator_degree).map(|i| ((self.generator >> i) & 1) as u8).collect()
    }

    pub fn generator_degree(&self) -> usize {
        self.generator_degree
    }

    /// Staircase code rate 2k/n - 1 built on this component.
    pub fn staircase_rate(&self) -> f64 {
        2.0 * self.k_c as f64 / self.n_c as f64 - 1.0
    }

    /// Syndrome of a single one at transmitted position `pos`.
    #[inline]
    pub fn position_syndrome(&self, pos: usize) -> Syndrome {
        self.position_syndromes[pos]
    }

    /// Systematic encoding: information in the first `k` positions.
    pub fn encode(&self, info: &[u8]) -> Result<Vec<u8>> {
        if info.len() != self.k_c {
            return Err(Error::LengthMismatch { expected: self.k_c, actual: info.len() });
        }
        let mut out = vec![0u8; self.n_c];
        self.encode_into(info, &mut out);
        Ok(out)
    }

    /// Writes the codeword for `info` (length `k`) into `out` (length `n`).
    pub(crate) fn encode_into(&self, info: &[u8], out: &mut [u8]) {
        debug_assert_eq!(info.len(), self.k_c);
        debug_assert_eq!(out.len(), self.n_c);
        // The codeword is m(x) + x^k r(x) with r(x) = x^(n-k) m(x) mod g(x),
        // a cyclic shift of the usual parity-low systematic form.
        let deg = self.generator_degree;
        let top = 1u128 << (deg - 1);
        let mask = (1u128 << deg) - 1;
        let g_low = self.generator & mask;
        let mut rem: u128 = 0;
        // Message exponents run from k_inner - 1 down to 0; the shortened
        // low exponents carry zeros but still clock the register.
        let zeros = std::iter::repeat_n(&0u8, self.spec.shortened_bits);
        for &bit in info.iter().rev().chain(zeros) {
            let high = rem & top != 0;
            rem = (rem << 1) & mask;
            if (bit != 0) ^ high {
                rem ^= g_low;
            }
        }
        out[..self.k_c].copy_from_slice(info);
        for j in 0..deg {
            out[self.k_c + j] = ((rem >> j) & 1) as u8;
        }
        if self.spec.extended {
            let parity = out[..self.n_c - 1].iter().fold(0u8, |acc, &b| acc ^ b);
            out[self.n_c - 1] = parity;
        }
    }

    /// Compact syndrome of a word of length `n`.
    pub fn syndrome(&self, word: &[u8]) -> Syndrome {
        debug_assert_eq!(word.len(), self.n_c);
        let mut s = Syndrome::default();
        for (pos, &b) in word.iter().enumerate() {
            if b != 0 {
                s ^= self.position_syndromes[pos];
            }
        }
        s
    }

    /// Power-sum syndromes S1..S(2t) and (for extended codes) the parity check.
    pub fn syndromes(&self, word: &[u8]) -> Result<SyndromeVector> {
        if word.len() != self.n_c {
            return Err(Error::LengthMismatch { expected: self.n_c, actual: word.len() });
        }
        let s = self.syndrome(word);
        Ok(SyndromeVector { power_sums: self.expand(&s), parity_odd: self.spec.extended.then_some(s.parity_odd()) })
    }

    fn expand(&self, s: &Syndrome) -> Vec<u8> {
        let t = self.spec.t;
        let mut full = vec![0u8; 2 * t];
        for i in 1..=2 * t {
            full[i - 1] = if i % 2 == 1 {
                s.odd[(i - 1) / 2]
            } else {
                let half = full[i / 2 - 1];
                self.field.mul(half, half)
            };
        }
        full
    }

    /// Bounded-distance decoding of a full word.
    pub fn bdd_decode(&self, word: &[u8]) -> Result<BddOutcome> {
        if word.len() != self.n_c {
            return Err(Error::LengthMismatch { expected: self.n_c, actual: word.len() });
        }
        Ok(match self.decode_syndrome(&self.syndrome(word)) {
            Some(positions) => {
                let mut codeword = word.to_vec();
                for &p in &positions {
                    codeword[p] ^= 1;
                }
                BddOutcome::Success { codeword, error_positions: positions }
            }
            None => BddOutcome::Failure,
        })
    }

    /// Error positions (ascending, at most `t`) that bring a word with this
    /// syndrome to a codeword, or `None` on decoding failure.
    pub fn decode_syndrome(&self, s: &Syndrome) -> Option<Vec<usize>> {
        if s.is_zero() {
            return Some(Vec::new());
        }
        let t = self.spec.t;
        let mut positions = if s.inner_is_zero() {
            Vec::new()
        } else {
            let locator = self.berlekamp_massey(&self.expand(s));
            let degree = locator.len() - 1;
            if degree == 0 || degree > t {
                return None;
            }
            self.chien_search(&locator)?
        };
        if self.spec.extended && (s.parity_odd() ^ (positions.len() % 2 == 1)) {
            positions.push(self.n_c - 1);
        }
        (positions.len() <= t).then_some(positions)
    }

    /// Error-locator polynomial Lambda(x) (index = power, trailing zeros trimmed).
    fn berlekamp_massey(&self, syn: &[u8]) -> Vec<u8> {
        let f = &self.field;
        let n = syn.len();
        let mut c = vec![0u8; n + 1];
        let mut b = vec![0u8; n + 1];
        c[0] = 1;
        b[0] = 1;
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut last_d = 1u8;
        for r in 0..n {
            let mut d = syn[r];
            for i in 1..=l {
                d ^= f.mul(c[i], syn[r - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = f.div(d, last_d);
            if 2 * l <= r {
                let prev = c.clone();
                for i in 0..=n - shift {
                    c[i + shift] ^= f.mul(coef, b[i]);
                }
                l = r + 1 - l;
                b = prev;
                last_d = d;
                shift = 1;
            } else {
                for i in 0..=n - shift {
                    c[i + shift] ^= f.mul(coef, b[i]);
                }
                shift += 1;
            }
        }
        c.truncate(l + 1);
        // Degree may be lower than l if leading terms vanished; that signals an
        // inconsistent locator and is caught by the root count.
        c
    }

    /// Roots of the locator among valid exponents, as transmitted positions.
    /// `None` unless exactly `deg(Lambda)` distinct roots are found.
    fn chien_search(&self, locator: &[u8]) -> Option<Vec<usize>> {
        let f = &self.field;
        let order = f.order();
        let degree = locator.len() - 1;
        if locator[degree] == 0 {
            return None;
        }
        let s = self.spec.shortened_bits;
        let n_inner = self.spec.n_inner;
        let exp_to_pos = |e: usize| -> Option<usize> { (e >= s && e < n_inner).then(|| e - s) };

        if degree == 1 {
            // Lambda(x) = 1 + L1 x vanishes at x = 1/L1 = alpha^-e.
            let e = f.log(locator[1]);
            return exp_to_pos(e).map(|p| vec![p]);
        }

        let logs: Vec<Option<usize>> = locator.iter().map(|&c| (c != 0).then(|| f.log(c))).collect();
        let mut found = Vec::with_capacity(degree);
        for e in s..n_inner {
            // Lambda(alpha^-e) = sum_k Lambda_k alpha^(-e k)
            let mut acc = locator[0];
            for (k, lg) in logs.iter().enumerate().skip(1) {
                if let Some(lg) = lg {
                    let shift = (e * k) % order;
                    acc ^= f.antilog(lg + order - shift);
                }
            }
            if acc == 0 {
                found.push(e - s);
                if found.len() > degree {
                    return None;
                }
            }
        }
        (found.len() == degree).then_some(found)
    }
}

/// Carry-less product of binary polynomials.
fn clmul(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    for i in 0..128 {
        if (b >> i) & 1 == 1 {
            acc ^= a << i;
        }
    }
    acc
}
