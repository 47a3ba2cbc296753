//! Exact certificates for the polynomial inequalities in `t = q^(1/6)`.
//!
//! Each inequality is expanded from its factored form as a Laurent polynomial
//! in `t`, shifted to an ordinary polynomial, and its real roots in
//! `[1, cauchy bound]` are isolated with a Sturm sequence. The tail
//! `t >= 7^(1/6)` is root free when every isolating interval is shown to lie
//! below `7^(1/6)`, comparing sixth powers of rational endpoints with 7.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Univariate polynomial with exact rational coefficients, lowest degree
/// first. Trailing zeros are trimmed, so the zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c, 1)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        sign(&self.eval(x))
    }

    /// Double-precision evaluation, for cross-checks only.
    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Quotient and remainder of exact long division.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lead = divisor.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let f = &rem[i + dd] / lead;
            if !f.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &f * c;
                }
            }
            quot[i] = f;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("b nonzero").1;
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn square_free_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = Self::gcd(self, &self.derivative());
        Ok(self.div_rem(&g)?.0.primitive())
    }

    /// Coefficients as integers `num` with `self = num / den`, `den > 0`
    /// minimal.
    pub fn integer_cleared(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        (num, den)
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        let (num, _) = self.integer_cleared();
        let content = num.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return Self::zero();
        }
        Self::new(
            num.into_iter()
                .map(|c| BigRational::from_integer(c / &content))
                .collect(),
        )
    }

    /// `1 + max |a_i / a_n|`; every real root has smaller absolute value.
    pub fn cauchy_bound(&self) -> Result<BigRational> {
        let lead = self.leading().ok_or(Error::ZeroPolynomial)?;
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .max()
            .unwrap_or_else(BigRational::zero);
        Ok(m + BigRational::one())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sep = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            write!(f, "{sep}{}", c.abs())?;
            match i {
                0 => {}
                1 => write!(f, " t")?,
                _ => write!(f, " t^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        RatPoly::new(out)
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sturm sequence `p, p', -rem(..)...`, each member scaled by a positive
/// constant to integer primitive form. Positive scaling keeps the sign
/// pattern intact.
pub fn sturm_sequence(p: &RatPoly) -> Result<Vec<RatPoly>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut seq = vec![p.primitive()];
    let d = p.derivative();
    if d.is_zero() {
        return Ok(seq);
    }
    seq.push(d.primitive());
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1])?.1;
        if r.is_zero() {
            break;
        }
        seq.push((-&r).primitive());
    }
    Ok(seq)
}

/// Sign changes of the sequence at `x`, zeros skipped.
pub fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i32> = seq.iter().map(|p| p.sign_at(x)).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Distinct real roots in `(a, b]`.
pub fn count_roots(seq: &[RatPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

/// Closed rational interval `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Isolating intervals, in increasing order, one per distinct real root of
/// `p` in `[lower, upper]`; `upper = None` stands for the Cauchy bound.
pub fn isolate_roots(
    p: &RatPoly,
    lower: &BigRational,
    upper: Option<&BigRational>,
) -> Result<Vec<Interval>> {
    let sqf = p.square_free_part()?;
    let seq = sturm_sequence(&sqf)?;
    let upper = match upper {
        Some(u) => u.clone(),
        None => sqf.cauchy_bound()?,
    };
    let mut out = Vec::new();
    if &upper < lower {
        return Ok(out);
    }
    if sqf.sign_at(lower) == 0 {
        out.push(Interval {
            lo: lower.clone(),
            hi: lower.clone(),
        });
    }
    let mut stack = vec![(lower.clone(), upper)];
    let two = rat(2, 1);
    let mut found = Vec::new();
    while let Some((a, b)) = stack.pop() {
        match count_roots(&seq, &a, &b) {
            0 => {}
            1 => found.push(Interval { lo: a, hi: b }),
            _ => {
                let m = (&a + &b) / &two;
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    out.extend(found);
    Ok(out)
}

/// Sign of `x - 7^(1/6)` for positive rational `x`, exact.
fn cmp_with_root7(x: &BigRational) -> std::cmp::Ordering {
    if !x.is_positive() {
        return std::cmp::Ordering::Less;
    }
    num_traits::pow(x.clone(), 6).cmp(&rat(7, 1))
}

/// Where an isolated root lies relative to `7^(1/6)`.
fn root_below_tail(sqf: &RatPoly, seq: &[RatPoly], iv: &Interval) -> bool {
    use std::cmp::Ordering::*;
    if iv.lo == iv.hi {
        return cmp_with_root7(&iv.hi) == Less;
    }
    let (mut a, mut b) = (iv.lo.clone(), iv.hi.clone());
    let two = rat(2, 1);
    // 7^(1/6) is irrational, so a rational root or endpoint never equals it
    // and the loop ends once the interval is narrow enough
    for _ in 0..4096 {
        if cmp_with_root7(&b) == Less {
            return true;
        }
        if cmp_with_root7(&a) != Less {
            return false;
        }
        let m = (&a + &b) / &two;
        if sqf.sign_at(&m) == 0 {
            return cmp_with_root7(&m) == Less;
        }
        if count_roots(seq, &a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inequality {
    LemmaB1,
    LemmaB2,
    Onderwortel,
    BoundOnG,
    MainTheoremFinal,
}

pub const ALL_INEQUALITIES: [Inequality; 5] = [
    Inequality::LemmaB1,
    Inequality::LemmaB2,
    Inequality::Onderwortel,
    Inequality::BoundOnG,
    Inequality::MainTheoremFinal,
];

impl Inequality {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "lemmaB1" => Ok(Self::LemmaB1),
            "lemmaB2" => Ok(Self::LemmaB2),
            "onderwortel" => Ok(Self::Onderwortel),
            "boundonG" => Ok(Self::BoundOnG),
            "maintheorem_final" => Ok(Self::MainTheoremFinal),
            _ => Err(Error::UnknownInequality(name.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::LemmaB1 => "lemmaB1",
            Self::LemmaB2 => "lemmaB2",
            Self::Onderwortel => "onderwortel",
            Self::BoundOnG => "boundonG",
            Self::MainTheoremFinal => "maintheorem_final",
        }
    }

    /// Strict claims (`> 0`) versus `>= 0`.
    pub fn strict(self) -> bool {
        matches!(self, Self::LemmaB1 | Self::LemmaB2 | Self::BoundOnG)
    }

    /// The factored inequality the polynomial is expanded from, as
    /// `larger - smaller`, in plain notation.
    pub fn source(self) -> &'static str {
        match self {
            Self::LemmaB1 => {
                "B(t) - (1+1/(2t))^2 (1+1/(2t)-1/t^4)^2 (1+1/(2t)-1/t^5) (1+1/(2t)-2/t^5); \
                 B(t) = (1-c)^2 (1-c-1/t^18)^2 (1-c-c/t^6) (1-c-(1+c)/t^6) t^6, c = 1-1/t-1/(2t^2)"
            }
            Self::LemmaB2 => {
                "B(t) - (1+1/(2t))^2 (1+1/(3t))^2; \
                 B(t) = (1-c)^2 (1-c-1/t^18)^2 (1-c-c/t^6) (1-c-(1+c)/t^6) t^6, c = 1-1/t-1/(2t^2)"
            }
            Self::Onderwortel => "(1+1/(2t))^2 (1+1/(3t))^2 - 2 (1-1/t)^2 (4/t-1/t^3)",
            Self::BoundOnG => "(1+1/(2t))^2 (1+1/(3t))^2 - (1+1/t^6)",
            Self::MainTheoremFinal => {
                "(1+1/(2t))^2 (1+1/(2t)-1/t^4)^2 (1+1/(2t)-1/t^5) (1+1/(2t)-2/t^5) (1/(4t^4)+4/t^2-4/t^3) \
                 - (1-1/t-1/(2t^2))^2 ((2/t+4/t^2-5/t^3)^2 + (2/t+4/t^2-5/t^3)/t^6)"
            }
        }
    }
}

/// Laurent polynomial in `t`: exponent -> coefficient.
#[derive(Debug, Clone, Default, PartialEq)]
struct Laurent(BTreeMap<i32, BigRational>);

impl Laurent {
    /// Sum of terms `(num / den) t^exp`.
    fn terms(terms: &[(i64, i64, i32)]) -> Self {
        let mut out = Self::default();
        for &(n, d, e) in terms {
            out.add_term(e, rat(n, d));
        }
        out
    }

    fn one() -> Self {
        Self::terms(&[(1, 1, 0)])
    }

    fn add_term(&mut self, e: i32, c: BigRational) {
        let entry = self.0.entry(e).or_insert_with(BigRational::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.0.remove(&e);
        }
    }

    fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &o.0 {
            out.add_term(e, c.clone());
        }
        out
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rat(-1, 1)))
    }

    fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::default();
        for (&e, c) in &self.0 {
            out.add_term(e, c * k);
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let mut out = Self::default();
        for (&e1, c1) in &self.0 {
            for (&e2, c2) in &o.0 {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    fn coefficient(&self, e: i32) -> BigRational {
        self.0.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Multiplies by the smallest power of `t` that leaves no negative
    /// exponent; returns the polynomial and that power.
    fn into_poly(self) -> (RatPoly, i32) {
        let shift = self.0.keys().next().map_or(0, |&e| (-e).max(0));
        let top = self.0.keys().last().map_or(0, |&e| e + shift);
        let mut coeffs = vec![BigRational::zero(); top as usize + 1];
        for (e, c) in self.0 {
            coeffs[(e + shift) as usize] = c;
        }
        (RatPoly::new(coeffs), shift)
    }
}

fn l(terms: &[(i64, i64, i32)]) -> Laurent {
    Laurent::terms(terms)
}

/// `B` at `c = d = c_q` with `q = t^6`, from its definition.
fn b_from_definition() -> Laurent {
    let c = l(&[(1, 1, 0), (-1, 1, -1), (-1, 2, -2)]);
    let one = Laurent::one();
    let one_minus_c = one.sub(&c);
    let f1 = one_minus_c.pow(2);
    let f2 = one_minus_c.sub(&l(&[(1, 1, -18)])).pow(2);
    let t_inv6 = l(&[(1, 1, -6)]);
    let f3 = one_minus_c.sub(&c.mul(&t_inv6));
    let f4 = one_minus_c.sub(&one.add(&c).mul(&t_inv6));
    f1.mul(&f2).mul(&f3).mul(&f4).mul(&l(&[(1, 1, 6)]))
}

/// `B` in the factored form obtained by pulling `t` out of each factor.
fn b_factored() -> Laurent {
    let h = l(&[(1, 1, 0), (1, 2, -1)]);
    h.pow(2)
        .mul(&h.sub(&l(&[(1, 1, -17)])).pow(2))
        .mul(&h.add(&l(&[(-1, 1, -5), (1, 1, -6), (1, 2, -7)])))
        .mul(&h.add(&l(&[(-2, 1, -5), (1, 1, -6), (1, 2, -7)])))
}

fn lemma_b1_rhs() -> Laurent {
    let h = l(&[(1, 1, 0), (1, 2, -1)]);
    h.pow(2)
        .mul(&h.sub(&l(&[(1, 1, -4)])).pow(2))
        .mul(&h.sub(&l(&[(1, 1, -5)])))
        .mul(&h.sub(&l(&[(2, 1, -5)])))
}

fn lemma_b2_rhs() -> Laurent {
    let h = l(&[(1, 1, 0), (1, 2, -1)]);
    let g = l(&[(1, 1, 0), (1, 3, -1)]);
    h.pow(2).mul(&g.pow(2))
}

/// Printed expansion of the final inequality: coefficients of
/// `t^-4, t^-5, ..., t^-24`.
pub const PRINTED_MAINTHEOREM: [(i64, i64); 21] = [
    (157, 4),
    (95, 4),
    (-2165, 16),
    (173, 8),
    (1411, 64),
    (383, 64),
    (1313, 256),
    (69, 2),
    (1177, 32),
    (-37, 8),
    (-3315, 128),
    (-219, 8),
    (-1631, 64),
    (3, 32),
    (557, 32),
    (151, 16),
    (293, 32),
    (-1, 8),
    (-11, 2),
    (-3, 2),
    (1, 8),
];

/// The printed sum at `t`, in double precision.
pub fn printed_maintheorem_f64(t: f64) -> f64 {
    PRINTED_MAINTHEOREM
        .iter()
        .enumerate()
        .map(|(i, &(n, d))| n as f64 / d as f64 * t.powi(-(i as i32 + 4)))
        .sum()
}

fn main_theorem_sides() -> (Laurent, Laurent) {
    let lhs = lemma_b1_rhs().mul(&l(&[(1, 4, -4), (4, 1, -2), (-4, 1, -3)]));
    let a = l(&[(2, 1, -1), (4, 1, -2), (-5, 1, -3)]);
    let c = l(&[(1, 1, 0), (-1, 1, -1), (-1, 2, -2)]);
    let rhs = c.pow(2).mul(&a.pow(2).add(&l(&[(1, 1, -6)]).mul(&a)));
    (lhs, rhs)
}

fn difference(inequality: Inequality) -> (Laurent, Vec<String>) {
    let mut diagnostics = Vec::new();
    let diff = match inequality {
        Inequality::LemmaB1 | Inequality::LemmaB2 => {
            let b = b_from_definition();
            if b != b_factored() {
                diagnostics.push("factored form of B differs from its definition".to_string());
            }
            let rhs = if inequality == Inequality::LemmaB1 {
                lemma_b1_rhs()
            } else {
                lemma_b2_rhs()
            };
            b.sub(&rhs)
        }
        Inequality::Onderwortel => {
            let lhs = lemma_b2_rhs();
            let rhs = l(&[(1, 1, 0), (-1, 1, -1)])
                .pow(2)
                .mul(&l(&[(4, 1, -1), (-1, 1, -3)]))
                .scale(&rat(2, 1));
            lhs.sub(&rhs)
        }
        Inequality::BoundOnG => lemma_b2_rhs().sub(&l(&[(1, 1, 0), (1, 1, -6)])),
        Inequality::MainTheoremFinal => {
            let (lhs, rhs) = main_theorem_sides();
            let diff = lhs.sub(&rhs);
            for (i, &(n, d)) in PRINTED_MAINTHEOREM.iter().enumerate() {
                let e = -(i as i32 + 4);
                let expanded = diff.coefficient(e);
                if expanded != rat(n, d) {
                    diagnostics.push(format!(
                        "coefficient of t^{e}: printed {n}/{d}, expanded {expanded}"
                    ));
                }
            }
            let printed_range = -24..=-4;
            for (&e, c) in &diff.0 {
                if !printed_range.contains(&e) {
                    diagnostics.push(format!("coefficient of t^{e}: not printed, expanded {c}"));
                }
            }
            diff
        }
    };
    (diff, diagnostics)
}

/// The polynomial (larger side minus smaller side, times the least power of
/// `t` clearing negative exponents) together with transcription diagnostics.
pub fn build_with_diagnostics(name: &str) -> Result<(RatPoly, Vec<String>)> {
    let inequality = Inequality::from_name(name)?;
    let (diff, diagnostics) = difference(inequality);
    Ok((diff.into_poly().0, diagnostics))
}

pub fn build_inequality_poly(name: &str) -> Result<RatPoly> {
    Ok(build_with_diagnostics(name)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refuted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub t: BigRational,
    pub sign: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub strict: bool,
    pub polynomial: RatPoly,
    /// One interval per distinct real root in `[1, cauchy bound]`.
    pub isolating_intervals: Vec<Interval>,
    /// Roots in `[1, cauchy bound]` according to the Sturm sequence.
    pub sturm_count: usize,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub source_sha256: String,
    pub diagnostics: Vec<String>,
}

fn rat_pair(x: &BigRational) -> [String; 2] {
    [x.numer().to_string(), x.denom().to_string()]
}

impl Certificate {
    pub fn claim(&self) -> &'static str {
        if self.strict {
            ">0"
        } else {
            ">=0"
        }
    }

    pub fn to_json_value(&self) -> Value {
        let (num, den) = self.polynomial.integer_cleared();
        json!({
            "name": self.name,
            "claim": self.claim(),
            "poly_num": num.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "poly_den": den.to_string(),
            "roots": self.isolating_intervals.iter().map(|iv| {
                let [a, b] = rat_pair(&iv.lo);
                let [c, d] = rat_pair(&iv.hi);
                vec![a, b, c, d]
            }).collect::<Vec<_>>(),
            "verdict": self.verdict.as_str(),
            "witnesses": self.witnesses.iter().map(|w| json!({
                "t": rat_pair(&w.t),
                "sign": w.sign,
            })).collect::<Vec<_>>(),
            "source_sha256": self.source_sha256,
            "diagnostics": self.diagnostics,
        })
    }
}

/// Certifies the sign claim of the named inequality on `t >= 7^(1/6)`.
///
/// Refutes whenever an isolated root cannot be placed below `7^(1/6)`, even
/// an even-multiplicity root of a non-strict claim.
pub fn certify_tail_sign(name: &str) -> Result<Certificate> {
    let inequality = Inequality::from_name(name)?;
    let (poly, diagnostics) = build_with_diagnostics(name)?;
    let sqf = poly.square_free_part()?;
    let seq = sturm_sequence(&sqf)?;
    let one = BigRational::one();
    let upper = sqf.cauchy_bound()?.max(one.clone());
    let intervals = isolate_roots(&poly, &one, Some(&upper))?;
    let sturm_count =
        count_roots(&seq, &one, &upper) + usize::from(sqf.sign_at(&one) == 0);

    let all_below = intervals.iter().all(|iv| root_below_tail(&sqf, &seq, iv));
    let sample = intervals
        .iter()
        .map(|iv| iv.hi.clone())
        .fold(rat(3, 2), |acc, x| acc.max(x));
    let mut witnesses = vec![Witness {
        sign: poly.sign_at(&sample),
        t: sample,
    }];
    let two = rat(2, 1);
    if witnesses[0].t != two {
        witnesses.push(Witness {
            sign: poly.sign_at(&two),
            t: two,
        });
    }
    let signs_ok = witnesses.iter().all(|w| w.sign > 0);
    let verdict = if all_below && signs_ok && sturm_count == intervals.len() {
        Verdict::Certified
    } else {
        Verdict::Refuted
    };
    let source_sha256 = Sha256::digest(inequality.source().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Ok(Certificate {
        name: name.to_string(),
        strict: inequality.strict(),
        polynomial: poly,
        isolating_intervals: intervals,
        sturm_count,
        verdict,
        witnesses,
        source_sha256,
        diagnostics,
    })
}
