//! Closed-form sunflower bounds.
//!
//! Integer bounds are exact; everything else is evaluated in `f64` with the
//! sixth root `t = q^(1/6)` taken exactly whenever `q` is a perfect sixth
//! power.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom;

fn pow_big(q: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        Err(Error::BadParams(format!("q = {q} must be at least 2")))
    } else {
        Ok(())
    }
}

/// `M^2 + M + 1` with `M = (q^(k+1) - q^(t+1)) / (q - 1)`.
pub fn sunflower_bound_classical(q: u64, k: u32, t: u32) -> Result<BigUint> {
    check_q(q)?;
    if t >= k {
        return Err(Error::BadParams(format!("need 0 <= t < k, got t = {t}, k = {k}")));
    }
    let m = (pow_big(q, k + 1) - pow_big(q, t + 1)) / BigUint::from(q - 1);
    Ok(&m * &m + &m + BigUint::one())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparatorBound {
    #[serde(serialize_with = "big_as_string")]
    pub value: BigUint,
    /// The comparator theorem is stated for k >= 4 only.
    pub applicable: bool,
}

/// `M^2 + M - q^k` with `M = (q^(k+1) - q) / (q - 1)`.
pub fn sunflower_bound_comparator(q: u64, k: u32) -> Result<ComparatorBound> {
    check_q(q)?;
    if k == 0 {
        return Err(Error::BadParams("k must be positive".into()));
    }
    let m = (pow_big(q, k + 1) - BigUint::from(q)) / BigUint::from(q - 1);
    Ok(ComparatorBound {
        value: &m * &m + &m - pow_big(q, k),
        applicable: k >= 4,
    })
}

/// `q^(1/6)`, exact for perfect sixth powers, otherwise `powf` followed by one
/// Newton step.
pub fn sixth_root(q: f64) -> f64 {
    let guess = q.powf(1.0 / 6.0);
    let m = guess.round();
    if q.fract() == 0.0 && q < 9.0e15 && m.powi(6) == q {
        return m;
    }
    guess - (guess.powi(6) - q) / (6.0 * guess.powi(5))
}

/// `c_q = 1 - q^(-1/6) - q^(-1/3) / 2`.
pub fn eval_c_q(q: f64) -> Result<f64> {
    if q < 7.0 {
        return Err(Error::QTooSmall(q));
    }
    let t = sixth_root(q);
    Ok(1.0 - 1.0 / t - 1.0 / (2.0 * t * t))
}

pub(crate) fn b_with(q: f64, c: f64, d: f64, inner: f64) -> f64 {
    let x = 1.0 - c - inner;
    (1.0 - d) * (1.0 - c) * x * x * (1.0 - d - d / q) * (1.0 - d - (1.0 + d) / q) * q
}

/// `B(q, c, d)` with the `1/q^3` weakening.
#[allow(non_snake_case)]
pub fn eval_B(q: f64, c: f64, d: f64) -> f64 {
    b_with(q, c, d, 1.0 / (q * q * q))
}

/// `B` with `1/theta_k` in place of `1/q^3`.
#[allow(non_snake_case)]
pub fn eval_B_exact_form(q: u64, k: u32, c: f64, d: f64) -> f64 {
    let theta = theta_f64(k, q);
    b_with(q as f64, c, d, 1.0 / theta)
}

fn theta_f64(k: u32, q: u64) -> f64 {
    geom::theta(k as i64, q).to_f64().unwrap_or(f64::INFINITY)
}

/// Discriminant of `x^2 + (eps - B/cd) x + B (1/cd - 1)`.
pub fn discriminant(b: f64, cd: f64, eps: f64) -> f64 {
    let lin = eps - b / cd;
    lin * lin - 4.0 * b * (1.0 / cd - 1.0)
}

/// Roots `F <= G` of `x^2 + (eps - B/cd) x + B (1/cd - 1)`, or `None` when
/// they are not real.
pub fn quadratic_roots(b: f64, cd: f64, eps: f64) -> Result<Option<(f64, f64)>> {
    if !(b > 0.0) {
        return Err(Error::BadParams(format!("B = {b} must be positive")));
    }
    if !(cd > 0.0 && cd < 1.0) {
        return Err(Error::BadParams(format!("cd = {cd} must lie in (0, 1)")));
    }
    let lin = eps - b / cd;
    let constant = b * (1.0 / cd - 1.0);
    let disc = lin * lin - 4.0 * constant;
    if disc < 0.0 {
        return Ok(None);
    }
    if disc == 0.0 {
        return Ok(Some((-lin / 2.0, -lin / 2.0)));
    }
    // larger-magnitude root first, the other one from the product
    let sq = disc.sqrt();
    let big = if lin <= 0.0 { (-lin + sq) / 2.0 } else { (-lin - sq) / 2.0 };
    let small = constant / big;
    Ok(Some(if small <= big { (small, big) } else { (big, small) }))
}

/// The quadratic at the default parameters `c = d = c_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefaultQuadratic {
    pub c_q: f64,
    pub b_q: f64,
    pub discriminant: f64,
    pub f_q: Option<f64>,
    pub g_q: Option<f64>,
}

pub fn default_quadratic(q: f64) -> Result<DefaultQuadratic> {
    let c = eval_c_q(q)?;
    let b = eval_B(q, c, c);
    let cd = c * c;
    let eps = 1.0 / q;
    let roots = if b > 0.0 { quadratic_roots(b, cd, eps)? } else { None };
    Ok(DefaultQuadratic {
        c_q: c,
        b_q: b,
        discriminant: discriminant(b, cd, eps),
        f_q: roots.map(|r| r.0),
        g_q: roots.map(|r| r.1),
    })
}

#[allow(non_snake_case)]
pub fn eval_F_q(q: f64) -> Result<Option<f64>> {
    Ok(default_quadratic(q)?.f_q)
}

#[allow(non_snake_case)]
pub fn eval_G_q(q: f64) -> Result<Option<f64>> {
    Ok(default_quadratic(q)?.g_q)
}

/// `2/t + 4/t^2 - 5/t^3` with `t = q^(1/6)`.
pub fn asymptotic_bound(q: f64) -> f64 {
    let t = sixth_root(q);
    2.0 / t + 4.0 / (t * t) - 5.0 / (t * t * t)
}

/// First lower bound on `B_q` as a function of `t = q^(1/6)`.
pub fn lemma_b1_lower(t: f64) -> f64 {
    let h = 1.0 + 1.0 / (2.0 * t);
    let a = h - 1.0 / t.powi(4);
    h * h * a * a * (h - 1.0 / t.powi(5)) * (h - 2.0 / t.powi(5))
}

/// Second lower bound on `B_q`.
pub fn lemma_b2_lower(t: f64) -> f64 {
    let h = 1.0 + 1.0 / (2.0 * t);
    let g = 1.0 + 1.0 / (3.0 * t);
    h * h * g * g
}

/// Density `1 - 1/theta_k + 1/theta_k^2` of the classical bound for t = 0.
pub fn classical_density(q: u64, k: u32) -> f64 {
    let theta = theta_f64(k, q);
    1.0 - 1.0 / theta + 1.0 / (theta * theta)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("{name} = {x} must lie in (0, 1)")))
    }
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("s = {s} must lie in [0, 1)")))
    }
}

/// `s >= cd`: the rich-line bounds say nothing.
pub fn is_vacuous(s: f64, c: f64, d: f64) -> bool {
    s >= c * d
}

/// `r0 = (1 - s/c) theta_k`.
pub fn eval_r0(q: f64, k: u32, s: f64, c: f64) -> Result<f64> {
    check_s(s)?;
    check_unit("c", c)?;
    Ok((1.0 - s / c) * geom::theta_f64(k as i64, q))
}

fn lines_per_block(q: f64, k: u32) -> f64 {
    geom::theta_f64(k as i64, q) * geom::theta_f64(k as i64 - 1, q) / (q + 1.0)
}

/// Lower bound on the rich lines of one block.
pub fn eval_min_rich_lines(q: f64, k: u32, s: f64, c: f64, d: f64) -> Result<f64> {
    check_s(s)?;
    check_unit("c", c)?;
    check_unit("d", d)?;
    Ok(lines_per_block(q, k) * (1.0 - s / (c * d)))
}

/// Upper bound on the poor lines of one block.
pub fn eval_poor_line_bound(q: f64, k: u32, s: f64, c: f64, d: f64) -> Result<f64> {
    check_s(s)?;
    check_unit("c", c)?;
    check_unit("d", d)?;
    Ok(s * lines_per_block(q, k) / (c * d))
}

/// Lower bound `f(s)` on the average number of rich lines joining two blocks
/// in rich points off their meet.
pub fn eval_f(q: f64, k: u32, s: f64, c: f64, d: f64) -> Result<f64> {
    check_s(s)?;
    check_unit("c", c)?;
    check_unit("d", d)?;
    let tk = geom::theta_f64(k as i64, q);
    let tk1 = geom::theta_f64(k as i64 - 1, q);
    let x = 1.0 - c - 1.0 / tk;
    Ok(tk * tk1 * q * (1.0 - d) / (1.0 - s) * (1.0 - s / (c * d)) * x * x * (1.0 - d - d / q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityForm {
    /// `1/q^3` inside `B`, `eps = 1/q`.
    Weakened,
    /// `1/theta_k` inside `B`, `eps = 1/q^(k-2)`.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainInequality {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; nonnegative iff the inequality holds.
    pub slack: f64,
    pub holds: bool,
}

/// `(1 - s/(cd)) B <= (1 - s)^2 + (1 - s) eps`, the inequality every
/// non-sunflower SCID satisfies.
pub fn check_main_inequality(
    q: u64,
    k: u32,
    c: f64,
    d: f64,
    s: f64,
    form: InequalityForm,
) -> Result<MainInequality> {
    check_unit("c", c)?;
    check_unit("d", d)?;
    if !(s > 0.0 && s < c) {
        return Err(Error::ParamOutOfRange(format!("need 0 < s < c, got s = {s}, c = {c}")));
    }
    if k < 3 {
        return Err(Error::ParamOutOfRange(format!("k = {k} below 3")));
    }
    let qf = q as f64;
    let (b, eps) = match form {
        InequalityForm::Weakened => (eval_B(qf, c, d), 1.0 / qf),
        InequalityForm::Exact => (eval_B_exact_form(q, k, c, d), qf.powi(2 - k as i32)),
    };
    let x = 1.0 - s;
    let lhs = (1.0 - s / (c * d)) * b;
    let rhs = x * x + x * eps;
    Ok(MainInequality {
        lhs,
        rhs,
        slack: rhs - lhs,
        holds: lhs <= rhs,
    })
}

/// Rounds to 8 decimals, ties to even on the exact binary value.
pub fn round8(x: f64) -> f64 {
    format!("{x:.8}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    /// `q = 2^exponent`.
    pub exponent: u32,
    pub f_q: f64,
    pub asymptotic: f64,
}

pub const TABLE1_EXPONENTS: [u32; 9] = [4, 6, 8, 10, 12, 14, 16, 18, 20];

/// `F_q` and the asymptotic bound for `q = 2^4, 2^6, ..., 2^20`, rounded to 8
/// decimals.
pub fn table1() -> Vec<Table1Row> {
    TABLE1_EXPONENTS
        .iter()
        .map(|&e| {
            let q = f64::from(1u32 << e);
            let f = eval_F_q(q)
                .expect("q >= 7")
                .expect("discriminant nonnegative for q >= 7");
            Table1Row {
                exponent: e,
                f_q: round8(f),
                asymptotic: round8(asymptotic_bound(q)),
            }
        })
        .collect()
}

pub fn table1_csv() -> String {
    let mut out = String::from("q,F_q,asymptotic\n");
    for row in table1() {
        out.push_str(&format!("2^{},{:.8},{:.8}\n", row.exponent, row.f_q, row.asymptotic));
    }
    out
}

fn big_as_string<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub k: u32,
    pub t: u32,
    #[serde(serialize_with = "big_as_string")]
    pub classical: BigUint,
    pub comparator: ComparatorBound,
    /// Density `1 - 1/theta_k + 1/theta_k^2` of the classical bound.
    pub classical_density: f64,
    /// Absent for q < 7.
    pub c_q: Option<f64>,
    pub b_q: Option<f64>,
    pub discriminant: Option<f64>,
    pub f_q: Option<f64>,
    pub g_q: Option<f64>,
    pub asymptotic: f64,
    pub f_q_improves: bool,
    pub asymptotic_improves: bool,
    /// Filled in by [`crate::optimize::attach_optimized`].
    pub optimized: Option<f64>,
}

pub fn bound_report(q: u64, k: u32, t: u32) -> Result<BoundReport> {
    let classical = sunflower_bound_classical(q, k, t)?;
    let comparator = sunflower_bound_comparator(q, k)?;
    let density = classical_density(q, k);
    let qf = q as f64;
    let dq = if q >= 7 { Some(default_quadratic(qf)?) } else { None };
    let asymptotic = asymptotic_bound(qf);
    let f_q = dq.and_then(|x| x.f_q);
    Ok(BoundReport {
        q,
        k,
        t,
        classical,
        comparator,
        classical_density: density,
        c_q: dq.map(|x| x.c_q),
        b_q: dq.map(|x| x.b_q),
        discriminant: dq.map(|x| x.discriminant),
        f_q,
        g_q: dq.and_then(|x| x.g_q),
        asymptotic,
        f_q_improves: f_q.is_some_and(|f| f < density),
        asymptotic_improves: asymptotic < density,
        optimized: None,
    })
}
