//! Arithmetic in GF(q), q = p^e.
//!
//! Elements are plain `u32` encodings under a [`FieldCtx`]: the polynomial
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is stored as `c_0 + c_1 p + ... `.
//! Fields up to 2^16 elements get log/antilog tables; larger ones fall back to
//! schoolbook multiplication with reduction by the modulus.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type FieldElement = u32;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;
const TABLE_LIMIT: u32 = 1 << 16;

/// Serialized description of a field: `{"p": .., "e": .., "modulus": [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Parses `"p^e"` or a plain integer and checks that it is a prime power.
pub fn parse_prime_power(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::NotPrimePower(s.to_string());
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let p: u64 = base.trim().parse().map_err(|_| bad())?;
        let e: u32 = exp.trim().parse().map_err(|_| bad())?;
        if !is_prime(p) || e == 0 {
            return Err(bad());
        }
        let q = (p as u128).checked_pow(e).ok_or_else(bad)?;
        if q > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        return Ok((p as u32, e));
    }
    let q: u64 = s.parse().map_err(|_| bad())?;
    let (p, e) = prime_power_decompose(q).ok_or_else(bad)?;
    if q > MAX_FIELD_SIZE {
        return Err(Error::FieldTooLarge(q));
    }
    Ok((p as u32, e))
}

/// Returns `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
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
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

// Polynomials over GF(p), little-endian, no trailing zeros required.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap() as u64;
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = lead * mi as u64 % p as u64;
            let idx = shift + i;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len() - 1;
    if e <= 1 {
        return true;
    }
    for deg in 1..=e / 2 {
        let count = (p as u64).pow(deg as u32);
        let mut divisor = vec![0u32; deg + 1];
        divisor[deg] = 1;
        for idx in 0..count {
            let mut v = idx;
            for c in divisor.iter_mut().take(deg) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            if poly_rem_monic(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of degree `e` over GF(p), comparing
/// coefficient lists low degree first.
fn default_modulus(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let total = (p as u64).pow(e as u32);
    let mut m = vec![0u32; e + 1];
    m[e] = 1;
    for idx in 0..total {
        let mut v = idx;
        for j in 0..e {
            m[e - 1 - j] = (v % p as u64) as u32;
            v /= p as u64;
        }
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldCtx {
    /// Builds GF(p^e). Without an explicit modulus the lexicographically
    /// smallest monic irreducible is used.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::BadModulus("extension degree must be at least 1".into()));
        }
        let q = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(Error::FieldTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::BadModulus(format!(
                        "{m:?} is not monic of degree {e}"
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus(format!(
                        "{m:?} has coefficients outside GF({p})"
                    )));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::NotIrreducible(m));
                }
                m
            }
            None => default_modulus(p, e),
        };
        let mut ctx = FieldCtx {
            p,
            e,
            q: q as u32,
            modulus,
            tables: None,
        };
        if e > 1 && ctx.q <= TABLE_LIMIT {
            ctx.tables = Some(Arc::new(ctx.build_tables()));
        }
        Ok(ctx)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::new(spec.p, spec.e, Some(spec.modulus.clone()))
    }

    /// Field of order `q` with the default modulus.
    pub fn with_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power_decompose(q).ok_or_else(|| Error::NotPrimePower(q.to_string()))?;
        if q > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(q));
        }
        Self::new(p as u32, e, None)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            e: self.e,
            modulus: self.modulus.clone(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn is_valid(&self, a: FieldElement) -> bool {
        a < self.q
    }

    pub fn decode(&self, mut a: FieldElement) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn encode(&self, coeffs: &[u32]) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        if self.e == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        if self.e == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        if self.e == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.mul_schoolbook(a, b),
        }
    }

    /// Polynomial product reduced by the modulus; the reference route for `mul`.
    pub fn mul_schoolbook(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.p as u64;
        let da = self.decode(a);
        let db = self.decode(b);
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let r = poly_rem_monic(&prod, &self.modulus, self.p);
        self.encode(&r)
    }

    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let order = self.q - 1;
            return Ok(t.exp[((order - t.log[a as usize]) % order) as usize]);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    fn pow_schoolbook(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_schoolbook(acc, base);
            }
            base = self.mul_schoolbook(base, base);
            n >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (2..self.q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| self.pow_schoolbook(g, order / r) != 1)
            })
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1;
        for i in 0..order as usize {
            exp[i] = x;
            exp[i + order as usize] = x;
            log[x as usize] = i as u32;
            x = self.mul_schoolbook(x, generator);
        }
        Tables { exp, log }
    }
}
