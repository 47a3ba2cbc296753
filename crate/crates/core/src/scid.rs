//! Sets of k-spaces pairwise meeting in exactly one point.
//!
//! Besides verification and sunflower detection this module measures the
//! rich/poor point and line structure of a concrete SCID and compares every
//! measurement with the corresponding closed-form bound from [`crate::bounds`].

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::geom::{self, Subspace};
use crate::gf::{FieldCtx, FieldElement, FieldSpec};

/// Guard on the number of lines materialized for the line diagnostics.
pub const LINE_LIMIT: u64 = 10_000_000;

/// Interchange document:
/// `{"field": {...}, "n": .., "k": .., "blocks": [[[row]..]..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScidFile {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub blocks: Vec<Vec<Vec<FieldElement>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scid {
    ctx: FieldCtx,
    n: usize,
    k: usize,
    blocks: Vec<Subspace>,
    verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Valid,
    /// First offending pair (block indices) and the projective dimension of
    /// their meet: -1 for disjoint blocks, 1 or more for a too large meet.
    Invalid {
        first: usize,
        second: usize,
        meet_dim: isize,
    },
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verification::Valid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SunflowerCheck {
    pub is_sunflower: bool,
    pub center: Option<Subspace>,
}

impl Scid {
    pub fn new(ctx: FieldCtx, n: usize, k: usize, blocks: Vec<Subspace>) -> Result<Self> {
        if k > n {
            return Err(Error::MixedParameters(format!("block dimension {k} exceeds n = {n}")));
        }
        for (i, b) in blocks.iter().enumerate() {
            if b.ambient() != n {
                return Err(Error::MixedParameters(format!(
                    "block {i} lives in PG({}, q), expected PG({n}, q)",
                    b.ambient()
                )));
            }
            if b.dim() != k as isize {
                return Err(Error::MixedParameters(format!(
                    "block {i} has dimension {}, expected {k}",
                    b.dim()
                )));
            }
        }
        let distinct: BTreeSet<&Subspace> = blocks.iter().collect();
        if distinct.len() != blocks.len() {
            return Err(Error::MixedParameters("repeated block".into()));
        }
        Ok(Self {
            ctx,
            n,
            k,
            blocks,
            verified: false,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u64 {
        self.ctx.q() as u64
    }

    pub fn blocks(&self) -> &[Subspace] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Runs [`verify_scid`] and records the outcome.
    pub fn verify(&mut self) -> Verification {
        let v = verify_scid(self);
        self.verified = v.is_valid();
        v
    }

    /// Verifies and returns the SCID, or fails with the offending pair.
    pub fn into_verified(mut self) -> Result<Self> {
        match self.verify() {
            Verification::Valid => Ok(self),
            Verification::Invalid {
                first,
                second,
                meet_dim,
            } => Err(Error::Inconsistency(format!(
                "blocks {first} and {second} meet in dimension {meet_dim}"
            ))),
        }
    }

    pub fn theta_k(&self) -> BigUint {
        geom::theta(self.k as i64, self.q())
    }

    pub fn from_file(file: &ScidFile) -> Result<Self> {
        let ctx = FieldCtx::from_spec(&file.field)?;
        let blocks = file
            .blocks
            .iter()
            .map(|rows| Subspace::from_rows(&ctx, file.n, rows))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ctx, file.n, file.k, blocks)
    }

    /// Canonical interchange form: RREF blocks in lexicographic order.
    pub fn to_file(&self) -> ScidFile {
        let mut blocks = self.blocks.clone();
        blocks.sort();
        ScidFile {
            field: self.ctx.spec(),
            n: self.n,
            k: self.k,
            blocks: blocks.iter().map(Subspace::to_rows).collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("interchange format serializes")
    }
}

pub fn verify_scid(scid: &Scid) -> Verification {
    let ctx = &scid.ctx;
    for i in 0..scid.blocks.len() {
        for j in i + 1..scid.blocks.len() {
            let m = geom::meet(ctx, &scid.blocks[i], &scid.blocks[j]).expect("same ambient");
            if m.dim() != 0 {
                return Verification::Invalid {
                    first: i,
                    second: j,
                    meet_dim: m.dim(),
                };
            }
        }
    }
    Verification::Valid
}

fn require_verified(scid: &Scid) -> Result<()> {
    if scid.verified {
        Ok(())
    } else {
        Err(Error::NotVerified)
    }
}

/// Sets of at most two blocks count as sunflowers; a single block has no
/// center.
pub fn is_sunflower(scid: &Scid) -> Result<SunflowerCheck> {
    require_verified(scid)?;
    let ctx = &scid.ctx;
    match scid.blocks.as_slice() {
        [] | [_] => Ok(SunflowerCheck {
            is_sunflower: true,
            center: None,
        }),
        [a, b, rest @ ..] => {
            let center = geom::meet(ctx, a, b)?;
            let common = rest.iter().all(|s| s.contains(ctx, &center));
            Ok(SunflowerCheck {
                is_sunflower: common,
                center: common.then_some(center),
            })
        }
    }
}

/// Greedily collects `count` k-spaces through `center` that pairwise meet
/// only in `center`, scanning k-spaces in lexicographic order.
pub fn build_sunflower(
    ctx: &FieldCtx,
    n: usize,
    k: usize,
    center: &Subspace,
    count: usize,
) -> Result<Scid> {
    if n < 2 * k {
        return Err(Error::ParamOutOfRange(format!(
            "a sunflower of {k}-spaces needs n >= {}, got n = {n}",
            2 * k
        )));
    }
    if center.dim() != 0 || center.ambient() != n {
        return Err(Error::ParamOutOfRange("center must be a point of PG(n, q)".into()));
    }
    let mut chosen: Vec<Subspace> = Vec::with_capacity(count);
    if count > 0 {
        for s in geom::enumerate_subspaces(ctx, n, k as isize)? {
            if !s.contains(ctx, center) {
                continue;
            }
            let fits = chosen
                .iter()
                .all(|c| geom::meet(ctx, c, &s).map(|m| m.dim() == 0).unwrap_or(false));
            if fits {
                chosen.push(s);
                if chosen.len() == count {
                    break;
                }
            }
        }
    }
    if chosen.len() < count {
        return Err(Error::CannotPlace {
            placed: chosen.len(),
            requested: count,
        });
    }
    Scid::new(ctx.clone(), n, k, chosen)?.into_verified()
}

/// Point/block incidences of the points covered by the blocks.
struct Incidence {
    points: Vec<Vec<FieldElement>>,
    blocks_through: Vec<Vec<usize>>,
    index: HashMap<Vec<FieldElement>, usize>,
}

impl Incidence {
    fn new(scid: &Scid) -> Self {
        let mut index: HashMap<Vec<FieldElement>, usize> = HashMap::new();
        let mut points = Vec::new();
        let mut blocks_through: Vec<Vec<usize>> = Vec::new();
        for (b, block) in scid.blocks.iter().enumerate() {
            for v in geom::point_vectors(&scid.ctx, block) {
                let id = *index.entry(v.clone()).or_insert_with(|| {
                    points.push(v);
                    blocks_through.push(Vec::new());
                    points.len() - 1
                });
                blocks_through[id].push(b);
            }
        }
        Self {
            points,
            blocks_through,
            index,
        }
    }

    fn degree(&self, point: &[FieldElement]) -> usize {
        self.index
            .get(point)
            .map_or(0, |&i| self.blocks_through[i].len())
    }

    fn rich_flags(&self, threshold: f64) -> Vec<bool> {
        self.blocks_through
            .iter()
            .map(|b| b.len() as f64 > threshold)
            .collect()
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("{name} = {x} must lie in (0, 1)")))
    }
}

fn theta_f(scid: &Scid, n: i64) -> f64 {
    geom::theta(n, scid.q()).to_f64().unwrap_or(f64::INFINITY)
}

/// Number of blocks through the point `p`. For a non-sunflower the count can
/// never exceed theta_k; a larger count is reported as an inconsistency.
pub fn blocks_through_point(scid: &Scid, p: &Subspace) -> Result<usize> {
    require_verified(scid)?;
    if p.dim() != 0 {
        return Err(Error::ParamOutOfRange("expected a point".into()));
    }
    let count = scid
        .blocks
        .iter()
        .filter(|b| b.contains(&scid.ctx, p))
        .count();
    let theta_k = scid.theta_k();
    if BigUint::from(count) > theta_k && !is_sunflower(scid)?.is_sunflower {
        return Err(Error::Inconsistency(format!(
            "{count} blocks through a point of a non-sunflower, above theta_k = {theta_k}"
        )));
    }
    Ok(count)
}

fn point_subspace(n: usize, v: &[FieldElement], ctx: &FieldCtx) -> Subspace {
    Subspace::from_rows(ctx, n, &[v.to_vec()]).expect("point coordinates are valid")
}

/// Points on more than `(1 - c) theta_k` blocks.
pub fn rich_points(scid: &Scid, c: f64) -> Result<BTreeSet<Subspace>> {
    require_verified(scid)?;
    check_unit("c", c)?;
    let inc = Incidence::new(scid);
    let flags = inc.rich_flags((1.0 - c) * theta_f(scid, scid.k as i64));
    Ok(inc
        .points
        .iter()
        .zip(flags)
        .filter(|(_, rich)| *rich)
        .map(|(v, _)| point_subspace(scid.n, v, &scid.ctx))
        .collect())
}

/// One line of a block with the rich points it carries.
struct LineCount {
    line: Subspace,
    block: usize,
    rich_points: Vec<usize>,
}

fn line_counts(scid: &Scid, inc: &Incidence, rich: &[bool]) -> Result<Vec<LineCount>> {
    let q = scid.q();
    let k = scid.k as i64;
    if scid.k == 0 {
        return Ok(Vec::new());
    }
    let per_block = geom::theta(k, q) * geom::theta(k - 1, q) / BigUint::from(q + 1);
    let total = per_block * BigUint::from(scid.blocks.len());
    if total > BigUint::from(LINE_LIMIT) {
        return Err(Error::TooManySubspaces {
            count: total.to_string(),
            limit: LINE_LIMIT,
        });
    }
    let mut out = Vec::new();
    for (b, block) in scid.blocks.iter().enumerate() {
        for line in geom::subspaces_of(&scid.ctx, block, 1)? {
            let rich_points = geom::point_vectors(&scid.ctx, &line)
                .iter()
                .map(|v| inc.index[v])
                .filter(|&i| rich[i])
                .collect();
            out.push(LineCount {
                line,
                block: b,
                rich_points,
            });
        }
    }
    Ok(out)
}

/// Lines inside blocks that carry more than `(1 - d)(q + 1)` c-rich points.
pub fn rich_lines(scid: &Scid, c: f64, d: f64) -> Result<BTreeSet<Subspace>> {
    require_verified(scid)?;
    check_unit("c", c)?;
    check_unit("d", d)?;
    let inc = Incidence::new(scid);
    let rich = inc.rich_flags((1.0 - c) * theta_f(scid, scid.k as i64));
    let threshold = (1.0 - d) * (scid.q() + 1) as f64;
    Ok(line_counts(scid, &inc, &rich)?
        .into_iter()
        .filter(|l| l.rich_points.len() as f64 > threshold)
        .map(|l| l.line)
        .collect())
}

/// Measured rich/poor structure of a non-sunflower SCID next to the bounds
/// it must satisfy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticReport {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub size: usize,
    pub c: f64,
    pub d: f64,
    /// `1 - |S| / theta_k^2`, exact.
    pub s_exact: String,
    pub s: f64,
    /// `s >= c d`: the line bounds carry no information.
    pub vacuous: bool,
    /// k < 3, outside the range of the sunflower theorems.
    pub below_theorem_range: bool,
    pub max_blocks_through_point: usize,
    pub rich_point_count_per_block: Vec<usize>,
    pub r0: f64,
    pub rich_line_count_per_block: Vec<usize>,
    pub poor_line_count_per_block: Vec<usize>,
    pub min_rich_lines: f64,
    pub poor_line_bound: f64,
    pub empirical_rich_line_avg: f64,
    pub f_s: f64,
    /// Whether `f_s` is a valid lower bound: needs `(1-c) theta_k >= 1` and
    /// `(1-d) q >= d`.
    pub f_s_applicable: bool,
    pub lemma_violated: bool,
    pub violations: Vec<String>,
}

pub fn diagnostic_report(scid: &Scid, c: f64, d: f64) -> Result<DiagnosticReport> {
    require_verified(scid)?;
    check_unit("c", c)?;
    check_unit("d", d)?;
    if is_sunflower(scid)?.is_sunflower {
        return Err(Error::IsSunflower);
    }
    let q = scid.q();
    let k = scid.k as i64;
    let qf = q as f64;
    let theta_k = scid.theta_k();
    let s_exact = BigRational::one()
        - BigRational::new(
            BigUint::from(scid.len()).into(),
            (&theta_k * &theta_k).into(),
        );
    let s = s_exact.to_f64().expect("finite");
    let theta_kf = theta_f(scid, k);

    let inc = Incidence::new(scid);
    let rich = inc.rich_flags((1.0 - c) * theta_kf);
    let lines = line_counts(scid, &inc, &rich)?;
    let line_threshold = (1.0 - d) * (qf + 1.0);

    let mut rich_point_count_per_block = vec![0usize; scid.len()];
    for (p, blocks) in inc.blocks_through.iter().enumerate() {
        if rich[p] {
            for &b in blocks {
                rich_point_count_per_block[b] += 1;
            }
        }
    }
    let mut rich_line_count_per_block = vec![0usize; scid.len()];
    let mut poor_line_count_per_block = vec![0usize; scid.len()];
    // Triples (S1, S2, l): l rich, S1 and S2 meet l in distinct rich points and
    // neither contains l. A block other than the home block of l meets l in at
    // most one point, so a rich point P of l contributes deg(P) - 1 blocks.
    let mut ordered_triples: f64 = 0.0;
    for l in &lines {
        if l.rich_points.len() as f64 > line_threshold {
            rich_line_count_per_block[l.block] += 1;
            let m: Vec<f64> = l
                .rich_points
                .iter()
                .map(|&p| (inc.blocks_through[p].len() - 1) as f64)
                .collect();
            let sum: f64 = m.iter().sum();
            let sum_sq: f64 = m.iter().map(|x| x * x).sum();
            ordered_triples += sum * sum - sum_sq;
        } else {
            poor_line_count_per_block[l.block] += 1;
        }
    }
    let size = scid.len() as f64;
    let empirical_rich_line_avg = ordered_triples / (size * (size - 1.0));

    let r0 = bounds::eval_r0(qf, k as u32, s, c)?;
    let min_rich_lines = bounds::eval_min_rich_lines(qf, k as u32, s, c, d)?;
    let poor_line_bound = bounds::eval_poor_line_bound(qf, k as u32, s, c, d)?;
    let f_s = bounds::eval_f(qf, k as u32, s, c, d)?;
    let f_s_applicable = (1.0 - c) * theta_kf >= 1.0 && (1.0 - d) * qf >= d;
    let max_blocks_through_point = inc.blocks_through.iter().map(Vec::len).max().unwrap_or(0);

    const SLACK: f64 = 1e-9;
    let mut violations = Vec::new();
    if max_blocks_through_point as f64 > theta_kf {
        violations.push(format!(
            "a point lies on {max_blocks_through_point} blocks, more than theta_k = {theta_kf}"
        ));
    }
    for (b, &r) in rich_point_count_per_block.iter().enumerate() {
        if (r as f64) + SLACK < r0 {
            violations.push(format!("block {b}: {r} rich points < r0 = {r0}"));
        }
    }
    for (b, &r) in rich_line_count_per_block.iter().enumerate() {
        if (r as f64) + SLACK < min_rich_lines {
            violations.push(format!("block {b}: {r} rich lines < {min_rich_lines}"));
        }
    }
    for (b, &p) in poor_line_count_per_block.iter().enumerate() {
        if p as f64 > poor_line_bound + SLACK {
            violations.push(format!("block {b}: {p} poor lines > {poor_line_bound}"));
        }
    }
    if f_s_applicable && empirical_rich_line_avg + SLACK < f_s {
        violations.push(format!(
            "average rich connecting lines {empirical_rich_line_avg} < f(s) = {f_s}"
        ));
    }

    Ok(DiagnosticReport {
        q,
        n: scid.n,
        k: scid.k,
        size: scid.len(),
        c,
        d,
        s_exact: s_exact.to_string(),
        s,
        vacuous: bounds::is_vacuous(s, c, d),
        below_theorem_range: scid.k < 3,
        max_blocks_through_point,
        rich_point_count_per_block,
        r0,
        rich_line_count_per_block,
        poor_line_count_per_block,
        min_rich_lines,
        poor_line_bound,
        empirical_rich_line_avg,
        f_s,
        f_s_applicable,
        lemma_violated: !violations.is_empty(),
        violations,
    })
}

/// Largest number of blocks through a single covered point.
pub fn max_blocks_through_point(scid: &Scid) -> usize {
    Incidence::new(scid)
        .blocks_through
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0)
}

/// Number of blocks through the point with the given coordinates.
pub fn point_degree(scid: &Scid, point: &[FieldElement]) -> usize {
    Incidence::new(scid).degree(point)
}
