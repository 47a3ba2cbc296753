//! Projective geometry PG(n, q).
//!
//! A [`Subspace`] is stored by its reduced row echelon basis, which is unique
//! per row space, so equality, hashing and ordering are structural. The empty
//! subspace (projective dimension -1) is the matrix with no rows.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

/// Resource guard for [`enumerate_subspaces`].
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Number of k-dimensional vector subspaces of GF(q)^n.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::KOutOfRange { n, k });
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1u32;
        den *= q.pow((k - i) as u32) - 1u32;
    }
    Ok(num / den)
}

/// Number of points of PG(n, q); `theta(-1, q) = 0`.
pub fn theta(n: i64, q: u64) -> BigUint {
    assert!(n >= -1, "theta is defined for n >= -1");
    let q = BigUint::from(q);
    (0..=n).fold(BigUint::zero(), |acc, i| acc + q.pow(i as u32))
}

/// `theta` evaluated in floating point, for real-valued q.
pub fn theta_f64(n: i64, q: f64) -> f64 {
    (0..=n).fold(0.0, |acc, _| acc * q + 1.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rank: usize,
    entries: Vec<FieldElement>,
}

/// Row reduces `rows` (each of length `cols`) in place and returns the
/// nonzero rows of the reduced row echelon form.
fn rref(ctx: &FieldCtx, mut rows: Vec<Vec<FieldElement>>, cols: usize) -> Vec<Vec<FieldElement>> {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = ctx.inv(rows[rank][col]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[rank].iter_mut() {
                *x = ctx.mul(*x, inv);
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let factor = ctx.neg(row[col]);
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(col) {
                if y != 0 {
                    *x = ctx.add(*x, ctx.mul(factor, y));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

impl Subspace {
    /// Canonical form of the row space of `rows` inside PG(n, q).
    pub fn from_rows(ctx: &FieldCtx, n: usize, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let cols = n + 1;
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in PG({n}, q) needs {cols} coordinates",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| !ctx.is_valid(x)) {
                return Err(Error::Format(format!(
                    "element {bad} is not in GF({})",
                    ctx.q()
                )));
            }
        }
        let reduced = rref(ctx, rows.to_vec(), cols);
        Ok(Self {
            n,
            rank: reduced.len(),
            entries: reduced.concat(),
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            rank: 0,
            entries: Vec::new(),
        }
    }

    pub fn whole(n: usize) -> Self {
        let cols = n + 1;
        let mut entries = vec![0; cols * cols];
        for i in 0..cols {
            entries[i * cols + i] = 1;
        }
        Self {
            n,
            rank: cols,
            entries,
        }
    }

    /// Builds a subspace from rows already known to be in canonical form.
    fn from_canonical(n: usize, rank: usize, entries: Vec<FieldElement>) -> Self {
        debug_assert_eq!(entries.len(), rank * (n + 1));
        Self { n, rank, entries }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rank as isize - 1
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.rank == 0
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        let cols = self.n + 1;
        &self.entries[i * cols..(i + 1) * cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.entries.chunks(self.n + 1)
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        self.rows().map(<[_]>::to_vec).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows()
            .map(|r| r.iter().position(|&x| x != 0).expect("rows are nonzero"))
            .collect()
    }

    /// Whether the vector `v` lies in the row space.
    pub fn contains_vector(&self, ctx: &FieldCtx, v: &[FieldElement]) -> bool {
        let mut v = v.to_vec();
        for (row, pivot) in self.rows().zip(self.pivots()) {
            let coef = v[pivot];
            if coef == 0 {
                continue;
            }
            let factor = ctx.neg(coef);
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = ctx.add(*x, ctx.mul(factor, y));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, ctx: &FieldCtx, other: &Subspace) -> bool {
        other.rows().all(|r| self.contains_vector(ctx, r))
    }
}

fn check_ambient(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.n != b.n {
        return Err(Error::AmbientMismatch(a.n, b.n));
    }
    Ok(())
}

/// Intersection of two subspaces (Zassenhaus sum-intersection algorithm).
pub fn meet(ctx: &FieldCtx, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_ambient(a, b)?;
    let cols = a.n + 1;
    if a.is_empty() || b.is_empty() {
        return Ok(Subspace::empty(a.n));
    }
    let mut rows = Vec::with_capacity(a.rank + b.rank);
    for r in a.rows() {
        let mut row = r.to_vec();
        row.extend_from_slice(r);
        rows.push(row);
    }
    for r in b.rows() {
        let mut row = r.to_vec();
        row.resize(2 * cols, 0);
        rows.push(row);
    }
    let reduced = rref(ctx, rows, 2 * cols);
    let inter: Vec<Vec<FieldElement>> = reduced
        .into_iter()
        .filter(|r| r[..cols].iter().all(|&x| x == 0))
        .map(|r| r[cols..].to_vec())
        .collect();
    Subspace::from_rows(ctx, a.n, &inter)
}

/// Span of two subspaces.
pub fn join(ctx: &FieldCtx, a: &Subspace, b: &Subspace) -> Result<Subspace> {
    check_ambient(a, b)?;
    let mut rows = a.to_rows();
    rows.extend(b.to_rows());
    Subspace::from_rows(ctx, a.n, &rows)
}

/// All points of `s`, each as a canonical one-row subspace.
pub fn points_of(ctx: &FieldCtx, s: &Subspace) -> Result<Vec<Subspace>> {
    if s.is_empty() {
        return Err(Error::EmptySubspace);
    }
    Ok(point_vectors(ctx, s)
        .into_iter()
        .map(|v| Subspace::from_canonical(s.n, 1, v))
        .collect())
}

/// Normalized coordinate vectors of the points of `s`.
///
/// With the basis in RREF, a combination whose first nonzero coefficient is 1
/// is already normalized: its leftmost nonzero entry is that row's pivot.
pub fn point_vectors(ctx: &FieldCtx, s: &Subspace) -> Vec<Vec<FieldElement>> {
    let q = ctx.q();
    let cols = s.n + 1;
    let mut out = Vec::new();
    for lead in 0..s.rank {
        let tail = s.rank - lead - 1;
        let mut coefs = vec![0u32; tail];
        loop {
            let mut v = s.row(lead).to_vec();
            for (t, &c) in coefs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (x, &y) in v.iter_mut().zip(s.row(lead + 1 + t)) {
                    if y != 0 {
                        *x = ctx.add(*x, ctx.mul(c, y));
                    }
                }
            }
            debug_assert_eq!(v.len(), cols);
            out.push(v);
            // odometer over the trailing coefficients
            let mut wrapped = true;
            for c in coefs.iter_mut().rev() {
                *c += 1;
                if *c < q {
                    wrapped = false;
                    break;
                }
                *c = 0;
            }
            if wrapped {
                break;
            }
        }
    }
    out
}

/// All `d`-dimensional subspaces contained in `s`, in canonical form.
pub fn subspaces_of(ctx: &FieldCtx, s: &Subspace, d: isize) -> Result<Vec<Subspace>> {
    if s.is_empty() {
        return Err(Error::EmptySubspace);
    }
    let local = enumerate_subspaces(ctx, s.dim() as usize, d)?;
    let basis = s.to_rows();
    local
        .map(|l| {
            let rows: Vec<Vec<FieldElement>> = l
                .rows()
                .map(|coefs| {
                    let mut v = vec![0; s.n + 1];
                    for (&c, b) in coefs.iter().zip(&basis) {
                        if c == 0 {
                            continue;
                        }
                        for (x, &y) in v.iter_mut().zip(b) {
                            *x = ctx.add(*x, ctx.mul(c, y));
                        }
                    }
                    v
                })
                .collect();
            Subspace::from_rows(ctx, s.n, &rows)
        })
        .collect()
}

/// Streams every `d`-dimensional subspace of PG(n, q) exactly once, in
/// lexicographic order of the canonical matrices (row-major).
pub fn enumerate_subspaces(ctx: &FieldCtx, n: usize, d: isize) -> Result<SubspaceIter> {
    if d < -1 || d > n as isize {
        return Err(Error::DimensionMismatch(format!(
            "no {d}-dimensional subspaces in PG({n}, q)"
        )));
    }
    let count = gaussian_binomial(n as u64 + 1, (d + 1) as u64, ctx.q() as u64)?;
    if count > BigUint::from(ENUMERATION_LIMIT) {
        return Err(Error::TooManySubspaces {
            count: count.to_string(),
            limit: ENUMERATION_LIMIT,
        });
    }
    let rows = (d + 1) as usize;
    let cols = n + 1;
    Ok(SubspaceIter {
        q: ctx.q(),
        n,
        rows,
        cols,
        cells: vec![0; rows * cols],
        started: false,
        done: false,
        expected: count.to_u64().unwrap_or(u64::MAX),
    })
}

/// Depth-first generator over RREF matrices, cell by cell in row-major order,
/// trying values in increasing order and never entering a dead end.
pub struct SubspaceIter {
    q: u32,
    n: usize,
    rows: usize,
    cols: usize,
    cells: Vec<FieldElement>,
    started: bool,
    done: bool,
    expected: u64,
}

/// Values a cell may take given the prefix before it.
enum CellOptions {
    /// Before the row's pivot: 0 (pivot later) and/or 1 (pivot here).
    Leading { zero: bool, one: bool },
    /// After the row's pivot: 0, and any nonzero value if allowed.
    Trailing { nonzero: bool },
}

impl SubspaceIter {
    /// Number of subspaces the iterator will produce in total.
    pub fn expected_len(&self) -> u64 {
        self.expected
    }

    fn options(&self, pos: usize) -> CellOptions {
        let cols = self.cols;
        let (row, col) = (pos / cols, pos % cols);
        let mut pivots: Vec<Option<usize>> = vec![None; row + 1];
        let mut forbidden = vec![false; cols];
        for (p, &v) in self.cells[..pos].iter().enumerate() {
            let (i, j) = (p / cols, p % cols);
            match pivots[i] {
                None if v == 1 => pivots[i] = Some(j),
                Some(_) if v != 0 => forbidden[j] = true,
                _ => {}
            }
        }
        // free columns strictly after `from` that a later pivot could use
        let allowed_after = |from: Option<usize>, skip: Option<usize>| {
            let start = from.map_or(0, |f| f + 1);
            (start..cols)
                .filter(|&c| !forbidden[c] && Some(c) != skip)
                .count()
        };
        let remaining = self.rows - row;
        match pivots[row] {
            None => {
                let prev = if row > 0 { pivots[row - 1] } else { None };
                let after_prev = prev.is_none_or(|p| col > p);
                let floor = match prev {
                    Some(p) if p > col => Some(p),
                    _ => Some(col),
                };
                CellOptions::Leading {
                    zero: allowed_after(floor, None) >= remaining,
                    one: after_prev
                        && !forbidden[col]
                        && allowed_after(Some(col), None) + 1 >= remaining,
                }
            }
            Some(p) => CellOptions::Trailing {
                nonzero: allowed_after(Some(p), Some(col)) + 1 >= remaining,
            },
        }
    }

    fn min_value(&self, pos: usize) -> Option<FieldElement> {
        match self.options(pos) {
            CellOptions::Leading { zero: true, .. } => Some(0),
            CellOptions::Leading { one: true, .. } => Some(1),
            CellOptions::Leading { .. } => None,
            CellOptions::Trailing { .. } => Some(0),
        }
    }

    fn next_value(&self, pos: usize, current: FieldElement) -> Option<FieldElement> {
        match self.options(pos) {
            CellOptions::Leading { one: true, .. } if current == 0 => Some(1),
            CellOptions::Leading { .. } => None,
            CellOptions::Trailing { nonzero: true } if current + 1 < self.q => Some(current + 1),
            CellOptions::Trailing { .. } => None,
        }
    }

    fn fill_from(&mut self, start: usize) -> bool {
        for pos in start..self.cells.len() {
            match self.min_value(pos) {
                Some(v) => self.cells[pos] = v,
                None => return false,
            }
        }
        true
    }

    fn current(&self) -> Subspace {
        Subspace::from_canonical(self.n, self.rows, self.cells.clone())
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.fill_from(0) {
                return Some(self.current());
            }
            self.done = true;
            return None;
        }
        let mut pos = self.cells.len();
        while pos > 0 {
            pos -= 1;
            if let Some(v) = self.next_value(pos, self.cells[pos]) {
                self.cells[pos] = v;
                if self.fill_from(pos + 1) {
                    return Some(self.current());
                }
                debug_assert!(false, "feasibility check admitted a dead end");
            }
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};
    use std::collections::HashSet;

    fn gf(q: u64) -> FieldCtx {
        FieldCtx::with_order(q).unwrap()
    }

    /// Brute-force count of k-dimensional subspaces of GF(q)^n: collect the
    /// canonical forms of the spans of all k-tuples of vectors.
    fn brute_force_count(q: u64, n: usize, k: usize) -> usize {
        let ctx = gf(q);
        let vectors: Vec<Vec<u32>> = (0..(q as usize).pow(n as u32))
            .map(|mut x| {
                (0..n)
                    .map(|_| {
                        let c = (x % q as usize) as u32;
                        x /= q as usize;
                        c
                    })
                    .collect()
            })
            .collect();
        let mut seen = HashSet::new();
        let mut idx = vec![0usize; k];
        loop {
            let rows: Vec<Vec<u32>> = idx.iter().map(|&i| vectors[i].clone()).collect();
            let s = Subspace::from_rows(&ctx, n - 1, &rows).unwrap();
            if s.rank() == k {
                seen.insert(s);
            }
            let mut i = k;
            loop {
                if i == 0 {
                    return seen.len();
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < vectors.len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    #[test]
    fn gaussian_binomial_examples() {
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(5, 3, 2).unwrap(), BigUint::from(155u32));
        assert_eq!(gaussian_binomial(7, 0, 3).unwrap(), BigUint::one());
        assert_eq!(
            gaussian_binomial(2, 3, 2).unwrap_err(),
            Error::KOutOfRange { n: 2, k: 3 }
        );
    }

    #[test]
    fn gaussian_binomial_matches_brute_force() {
        assert_eq!(brute_force_count(2, 4, 2), 35);
        assert_eq!(brute_force_count(2, 5, 3), 155);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(3, 2), BigUint::from(15u32));
        assert_eq!(theta(0, 9), BigUint::one());
        assert_eq!(theta(4, 2), BigUint::from(31u32));
        assert_eq!(theta(-1, 5), BigUint::zero());
        assert_eq!(theta_f64(5, 256.0), theta(5, 256).to_f64().unwrap());
        let ctx = gf(2);
        assert_eq!(enumerate_subspaces(&ctx, 3, 0).unwrap().count(), 15);
        assert_eq!(enumerate_subspaces(&ctx, 4, 0).unwrap().count(), 31);
    }

    #[test]
    fn from_rows_examples() {
        let ctx = gf(2);
        let line = Subspace::from_rows(&ctx, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(line.to_rows(), vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        let s = Subspace::from_rows(&ctx, 2, &[vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.to_rows(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        let e = Subspace::from_rows(&ctx, 3, &[]).unwrap();
        assert_eq!(e.dim(), -1);
        assert!(matches!(
            Subspace::from_rows(&ctx, 3, &[vec![1, 0, 0]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn meet_and_join_examples() {
        let ctx = gf(2);
        let l1 = Subspace::from_rows(&ctx, 2, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let l2 = Subspace::from_rows(&ctx, 2, &[vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let m = meet(&ctx, &l1, &l2).unwrap();
        assert_eq!(m.to_rows(), vec![vec![1, 0, 0]]);
        assert_eq!(meet(&ctx, &l1, &l1).unwrap(), l1);

        let a = Subspace::from_rows(&ctx, 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Subspace::from_rows(&ctx, 3, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert!(meet(&ctx, &a, &b).unwrap().is_empty());

        let p = Subspace::from_rows(&ctx, 3, &[vec![1, 0, 0, 0]]).unwrap();
        let r = Subspace::from_rows(&ctx, 3, &[vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(join(&ctx, &p, &r).unwrap(), a);
        assert_eq!(join(&ctx, &a, &Subspace::empty(3)).unwrap(), a);

        // two planes of PG(4,2) meeting in a point span a 4-space
        let s1 = Subspace::from_rows(&ctx, 4, &[vec![1, 0, 0, 0, 0], vec![0, 1, 0, 0, 0], vec![0, 0, 1, 0, 0]]).unwrap();
        let s2 = Subspace::from_rows(&ctx, 4, &[vec![1, 0, 0, 0, 0], vec![0, 0, 0, 1, 0], vec![0, 0, 0, 0, 1]]).unwrap();
        assert_eq!(meet(&ctx, &s1, &s2).unwrap().dim(), 0);
        assert_eq!(join(&ctx, &s1, &s2).unwrap().dim(), 4);

        assert_eq!(
            meet(&ctx, &a, &l1).unwrap_err(),
            Error::AmbientMismatch(3, 2)
        );
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_subspaces(&gf(2), 2, 1).unwrap().count(), 7);
        assert_eq!(enumerate_subspaces(&gf(2), 3, 1).unwrap().count(), 35);
        assert_eq!(enumerate_subspaces(&gf(3), 2, 0).unwrap().count(), 13);
        assert_eq!(enumerate_subspaces(&gf(2), 3, -1).unwrap().count(), 1);
        assert!(matches!(
            enumerate_subspaces(&gf(2), 30, 15),
            Err(Error::TooManySubspaces { .. })
        ));
    }

    #[test]
    fn enumeration_is_sorted_canonical_and_complete() {
        for q in [2u64, 3, 4] {
            let ctx = gf(q);
            for n in 0..=3usize {
                for d in -1..=n as isize {
                    let all: Vec<Subspace> = enumerate_subspaces(&ctx, n, d).unwrap().collect();
                    let expected = gaussian_binomial(n as u64 + 1, (d + 1) as u64, q).unwrap();
                    assert_eq!(BigUint::from(all.len()), expected, "q={q} n={n} d={d}");
                    for w in all.windows(2) {
                        assert!(w[0] < w[1], "order q={q} n={n} d={d}");
                    }
                    for s in &all {
                        assert_eq!(&Subspace::from_rows(&ctx, n, &s.to_rows()).unwrap(), s);
                        assert_eq!(s.dim(), d);
                    }
                }
            }
        }
    }

    #[test]
    fn points_of_examples() {
        let ctx2 = gf(2);
        let line = Subspace::from_rows(&ctx2, 4, &[vec![1, 0, 0, 1, 0], vec![0, 0, 1, 1, 1]]).unwrap();
        assert_eq!(points_of(&ctx2, &line).unwrap().len(), 3);
        let ctx3 = gf(3);
        let plane = Subspace::from_rows(&ctx3, 3, &[vec![1, 0, 0, 2], vec![0, 1, 0, 1], vec![0, 0, 1, 1]]).unwrap();
        let pts = points_of(&ctx3, &plane).unwrap();
        assert_eq!(pts.len(), 13);
        assert!(pts.iter().all(|p| plane.contains(&ctx3, p)));
        assert_eq!(pts.iter().collect::<HashSet<_>>().len(), 13);
        let point = Subspace::from_rows(&ctx3, 3, &[vec![0, 1, 2, 0]]).unwrap();
        assert_eq!(points_of(&ctx3, &point).unwrap(), vec![point.clone()]);
        assert_eq!(points_of(&ctx3, &Subspace::empty(3)), Err(Error::EmptySubspace));
    }

    #[test]
    fn subspaces_of_counts() {
        let ctx = gf(3);
        let plane = Subspace::from_rows(&ctx, 4, &[vec![1, 2, 0, 0, 1], vec![0, 0, 1, 0, 2], vec![0, 0, 0, 1, 1]]).unwrap();
        let lines = subspaces_of(&ctx, &plane, 1).unwrap();
        assert_eq!(lines.len(), 13);
        assert!(lines.iter().all(|l| plane.contains(&ctx, l) && l.dim() == 1));
    }

    #[test]
    fn hyperplanes_match_points() {
        for (q, n) in [(2u64, 3usize), (3, 3), (2, 4), (4, 2)] {
            let ctx = gf(q);
            let hyper = enumerate_subspaces(&ctx, n, n as isize - 1).unwrap().count();
            assert_eq!(BigUint::from(hyper), theta(n as i64, q));
        }
    }

    fn random_subspace(ctx: &FieldCtx, n: usize, rng: &mut StdRng) -> Subspace {
        let k = rng.gen_range(0..=n + 1);
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|_| (0..=n).map(|_| rng.gen_range(0..ctx.q())).collect())
            .collect();
        Subspace::from_rows(ctx, n, &rows).unwrap()
    }

    #[test]
    fn dimension_law_on_random_pairs() {
        let mut rng = StdRng::seed_from_u64(11);
        for (q, n) in [(2u64, 4usize), (3, 3)] {
            let ctx = gf(q);
            for _ in 0..1000 {
                let a = random_subspace(&ctx, n, &mut rng);
                let b = random_subspace(&ctx, n, &mut rng);
                let m = meet(&ctx, &a, &b).unwrap();
                let j = join(&ctx, &a, &b).unwrap();
                assert_eq!(a.dim() + b.dim(), m.dim() + j.dim());
                assert!(a.contains(&ctx, &m) && b.contains(&ctx, &m));
                assert!(j.contains(&ctx, &a) && j.contains(&ctx, &b));
            }
        }
    }

    #[test]
    fn canonical_under_basis_change() {
        let mut rng = StdRng::seed_from_u64(5);
        for q in [2u64, 3, 4, 5] {
            let ctx = gf(q);
            for _ in 0..25 {
                let s = random_subspace(&ctx, 4, &mut rng);
                let basis = s.to_rows();
                let r = basis.len();
                // random invertible r x r matrix by rejection
                let t = loop {
                    let t: Vec<Vec<u32>> = (0..r)
                        .map(|_| (0..r).map(|_| rng.gen_range(0..ctx.q())).collect())
                        .collect();
                    if r == 0 || Subspace::from_rows(&ctx, r - 1, &t).unwrap().rank() == r {
                        break t;
                    }
                };
                let mut rows: Vec<Vec<u32>> = t
                    .iter()
                    .map(|coefs| {
                        let mut v = vec![0; 5];
                        for (&c, b) in coefs.iter().zip(&basis) {
                            for (x, &y) in v.iter_mut().zip(b) {
                                *x = ctx.add(*x, ctx.mul(c, y));
                            }
                        }
                        v
                    })
                    .collect();
                rows.push(vec![0; 5]);
                rows.reverse();
                assert_eq!(Subspace::from_rows(&ctx, 4, &rows).unwrap(), s);
            }
        }
    }
}
