#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use scidforge::geom::{self, Subspace};
use scidforge::gf::{FieldCtx, FieldElement};

/// k-spaces of PG(n, q) with their point sets as bitmasks and a naive
/// adjacency built from `geom::meet`.
pub struct SmallInstance {
    pub blocks: Vec<Subspace>,
    pub points: Vec<u64>,
    pub adj: Vec<u64>,
}

impl SmallInstance {
    pub fn new(ctx: &FieldCtx, n: usize, k: usize) -> Self {
        let all_points: BTreeMap<Subspace, usize> = geom::enumerate_subspaces(ctx, n, 0)
            .unwrap()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        assert!(all_points.len() <= 64);
        let blocks: Vec<Subspace> = geom::enumerate_subspaces(ctx, n, k as isize).unwrap().collect();
        assert!(blocks.len() <= 64);
        let points = blocks
            .iter()
            .map(|b| {
                geom::points_of(ctx, b)
                    .unwrap()
                    .iter()
                    .fold(0u64, |m, p| m | 1 << all_points[p])
            })
            .collect();
        let mut adj = vec![0u64; blocks.len()];
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if geom::meet(ctx, &blocks[i], &blocks[j]).unwrap().dim() == 0 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        Self { blocks, points, adj }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    /// Pairwise adjacent, as a bitmask over blocks.
    pub fn is_clique(&self, mask: u64) -> bool {
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mask & !(self.adj[v] | 1 << v) != 0 {
                return false;
            }
        }
        true
    }

    /// Points common to every block of `mask`.
    pub fn common_points(&self, mask: u64) -> u64 {
        let mut common = u64::MAX;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            common &= self.points[v];
        }
        common
    }

    pub fn is_sunflower(&self, mask: u64) -> bool {
        self.common_points(mask) != 0
    }

    /// Largest non-sunflower clique by visiting every clique once.
    pub fn naive_max_nonsunflower(&self) -> usize {
        fn go(inst: &SmallInstance, size: usize, cands: u64, common: u64, best: &mut usize) {
            if common == 0 {
                *best = (*best).max(size);
            }
            let mut rest = cands;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                go(inst, size + 1, rest & inst.adj[v], common & inst.points[v], best);
            }
        }
        let full = if self.len() == 64 { u64::MAX } else { (1u64 << self.len()) - 1 };
        let mut best = 0;
        go(self, 0, full, u64::MAX, &mut best);
        best
    }
}

/// Next integer with the same popcount.
pub fn gosper(x: u64) -> u64 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

pub fn random_rows(
    ctx: &FieldCtx,
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
) -> Vec<Vec<FieldElement>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..ctx.q())).collect())
        .collect()
}

/// Random subspace of PG(n, q) with rank exactly `rank`.
pub fn random_subspace(ctx: &FieldCtx, rng: &mut impl Rng, n: usize, rank: usize) -> Subspace {
    loop {
        let s = Subspace::from_rows(ctx, n, &random_rows(ctx, rng, rank, n + 1)).unwrap();
        if s.rank() == rank {
            return s;
        }
    }
}

/// `m * rows` over the field.
pub fn mat_mul(
    ctx: &FieldCtx,
    m: &[Vec<FieldElement>],
    rows: &[Vec<FieldElement>],
) -> Vec<Vec<FieldElement>> {
    m.iter()
        .map(|mr| {
            (0..rows[0].len())
                .map(|j| {
                    mr.iter()
                        .zip(rows)
                        .fold(0, |acc, (&a, r)| ctx.add(acc, ctx.mul(a, r[j])))
                })
                .collect()
        })
        .collect()
}
