//! Choosing `(c, d)` per `(q, k)` to tighten the bound on `1 - s`.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, BoundReport};
use crate::error::{Error, Result};
use crate::geom;

/// The bound as a function of `(c, d)` for fixed `(q, k)`.
struct Objective {
    qf: f64,
    inv_theta: f64,
    eps: f64,
}

impl Objective {
    fn new(q: u64, k: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::ParamOutOfRange(format!("q = {q}")));
        }
        if k < 3 {
            return Err(Error::ParamOutOfRange(format!("k = {k} below 3")));
        }
        let theta = geom::theta(k as i64, q).to_f64().unwrap_or(f64::INFINITY);
        let qf = q as f64;
        Ok(Self {
            qf,
            inv_theta: 1.0 / theta,
            eps: qf.powi(2 - k as i32),
        })
    }

    fn eval(&self, c: f64, d: f64) -> Option<f64> {
        let q = self.qf;
        // the counting argument squares (1-c) theta_k - 1 and multiplies the
        // two d factors, so each must be positive on its own
        if 1.0 - c - self.inv_theta <= 0.0 || 1.0 - d - (1.0 + d) / q <= 0.0 {
            return None;
        }
        let b = bounds::b_with(q, c, d, self.inv_theta);
        if b <= 0.0 {
            return None;
        }
        let cd = c * d;
        let (f, g) = bounds::quadratic_roots(b, cd, self.eps).ok()??;
        if g <= 1.0 || 1.0 - f > cd {
            return None;
        }
        Some(f)
    }
}

fn check_cd(c: f64, d: f64) -> Result<()> {
    for (name, x) in [("c", c), ("d", d)] {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::ParamOutOfRange(format!("{name} = {x} must lie in (0, 1)")));
        }
    }
    Ok(())
}

/// Small root of the exact-form quadratic at `(c, d)`, or `None` where the
/// argument does not apply: a nonpositive factor, no real roots, a large root
/// not above 1, or `s = 1 - F` outside `s <= cd`.
pub fn bound_from_cd(q: u64, k: u32, c: f64, d: f64) -> Result<Option<f64>> {
    check_cd(c, d)?;
    Ok(Objective::new(q, k)?.eval(c, d))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptResult {
    pub q: u64,
    pub k: u32,
    pub c_star: f64,
    pub d_star: f64,
    pub bound: f64,
    /// Bound at `c = d = c_q`.
    pub default_bound: Option<f64>,
    pub f_q: Option<f64>,
    pub iterations: u64,
    pub valid: bool,
}

fn sig12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

impl OptResult {
    /// `{"q", "k", "c", "d", "bound", "default_bound", "F_q", ...}` with 12
    /// significant digits.
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "k": self.k,
            "c": sig12(self.c_star),
            "d": sig12(self.d_star),
            "bound": sig12(self.bound),
            "default_bound": self.default_bound.map(sig12),
            "F_q": self.f_q.map(sig12),
            "iterations": self.iterations,
            "valid": self.valid,
        })
    }
}

#[derive(Clone, Copy)]
struct Candidate {
    bound: f64,
    c: f64,
    d: f64,
}

impl Candidate {
    fn better_than(&self, other: &Candidate) -> bool {
        self.bound
            .total_cmp(&other.bound)
            .then(self.c.total_cmp(&other.c))
            .then(self.d.total_cmp(&other.d))
            .is_lt()
    }
}

fn best(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

const MAX_ITERATIONS: u64 = 1_000_000;

/// Grid search over `(c, d)` at `coarse_step`, then compass search with step
/// halving until the step drops below `tol`. The default point `(c_q, c_q)`
/// also seeds the refinement, so the result is never worse than it.
pub fn optimize_cd(q: u64, k: u32, coarse_step: f64, tol: f64) -> Result<OptResult> {
    if q < 7 {
        return Err(Error::ParamOutOfRange(format!("q = {q} below 7")));
    }
    if !(coarse_step > 0.0 && coarse_step <= 0.5) || !(tol > 0.0) {
        return Err(Error::ParamOutOfRange(format!(
            "step = {coarse_step}, tol = {tol}"
        )));
    }
    let obj = Objective::new(q, k)?;
    let cells = (1.0 / coarse_step).round() as u64;
    let at = |i: u64| i as f64 / cells as f64;

    let grid = (1..cells)
        .into_par_iter()
        .map(|i| {
            let c = at(i);
            (1..cells)
                .filter_map(|j| {
                    let d = at(j);
                    obj.eval(c, d).map(|bound| Candidate { bound, c, d })
                })
                .fold(None, |acc, x| best(acc, Some(x)))
        })
        .reduce(|| None, best);
    let grid = grid.ok_or(Error::NoFeasiblePoint)?;

    let c_q = bounds::eval_c_q(q as f64)?;
    let default_bound = obj.eval(c_q, c_q);
    let seed = best(
        Some(grid),
        default_bound.map(|bound| Candidate { bound, c: c_q, d: c_q }),
    )
    .expect("grid produced a candidate");

    const DIRS: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
        (-1.0, -1.0),
    ];
    let mut cur = seed;
    let mut step = coarse_step;
    let mut iterations = 0u64;
    while step >= tol && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut next: Option<Candidate> = None;
        for (dc, dd) in DIRS {
            let (c, d) = (cur.c + dc * step, cur.d + dd * step);
            if !(c > 0.0 && c < 1.0 && d > 0.0 && d < 1.0) {
                continue;
            }
            if let Some(bound) = obj.eval(c, d) {
                let cand = Candidate { bound, c, d };
                if cand.bound < cur.bound {
                    next = best(next, Some(cand));
                }
            }
        }
        match next {
            Some(n) => cur = n,
            None => step /= 2.0,
        }
    }

    let bound = obj.eval(cur.c, cur.d);
    Ok(OptResult {
        q,
        k,
        c_star: cur.c,
        d_star: cur.d,
        bound: bound.unwrap_or(cur.bound),
        default_bound,
        f_q: bounds::eval_F_q(q as f64)?,
        iterations,
        valid: bound.is_some(),
    })
}

/// Runs [`optimize_cd`] with default settings and stores the bound in the
/// report. Leaves the report untouched outside `q >= 7, k >= 3`.
pub fn attach_optimized(report: &mut BoundReport) -> Result<()> {
    if report.q >= 7 && report.k >= 3 {
        report.optimized = Some(optimize_cd(report.q, report.k, 0.01, 1e-9)?.bound);
    }
    Ok(())
}
