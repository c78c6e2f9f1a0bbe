//! The signed sum over boxed trees: global count, per-tree contribution, and
//! per-region contribution. Exact integer arithmetic throughout.

use num::BigInt;
use rayon::prelude::*;

use crate::geometry::{group_regions, GroupedRegion, RegionKey};
use crate::spec::OffsetSpec;
use crate::trees::{enumerate_boxings, enumerate_trees, PlaneTree};
use crate::{Error, Result};

/// Result of the signed sum: its value and the number of boxed trees summed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCount {
    pub value: BigInt,
    pub terms: u64,
}

/// Evaluate the signed sum `sum over S-boxed trees of (-1)^(n - |B|)`, which
/// equals the number of regions of the arrangement.
pub fn bernardi_count(spec: &OffsetSpec) -> Result<SignedCount> {
    let n = spec.n();
    let m = spec.max_offset();
    let trees = enumerate_trees(n, m);
    let per_tree: Vec<(i64, u64)> = trees
        .par_iter()
        .map(|tree| {
            let boxings = enumerate_boxings(spec, tree).expect("arity matches by construction");
            let sum: i64 = boxings.iter().map(|b| b.sign()).sum();
            (sum, boxings.len() as u64)
        })
        .collect();
    let value: i64 = per_tree.iter().map(|&(s, _)| s).sum();
    let terms: u64 = per_tree.iter().map(|&(_, t)| t).sum();
    Ok(SignedCount {
        value: BigInt::from(value),
        terms,
    })
}

/// Signed boxing sum of a single tree, `w(T)`. Always 0 or +-1.
pub fn tree_contribution_by_boxing(spec: &OffsetSpec, tree: &PlaneTree) -> Result<i64> {
    let boxings = enumerate_boxings(spec, tree)?;
    Ok(boxings.iter().map(|b| b.sign()).sum())
}

/// Per-region contribution row: the region, its trees, and the signed sums.
#[derive(Debug, Clone)]
pub struct RegionContribution {
    pub region: GroupedRegion,
    pub boxing_count: u64,
    pub contribution: i64,
}

/// Contribution of every region: for each region `R`, the sum of `w(T)` over
/// the trees in `T_R`. The main theorem forces every entry to 1.
pub fn region_contributions(spec: &OffsetSpec) -> Result<Vec<RegionContribution>> {
    let groups = group_regions(spec)?;
    groups
        .into_par_iter()
        .map(|g| {
            let mut contribution = 0i64;
            let mut boxing_count = 0u64;
            for (tree, _) in &g.trees {
                let boxings = enumerate_boxings(spec, tree)?;
                contribution += boxings.iter().map(|b| b.sign()).sum::<i64>();
                boxing_count += boxings.len() as u64;
            }
            Ok(RegionContribution {
                region: g,
                boxing_count,
                contribution,
            })
        })
        .collect()
}

/// Contribution of one region identified by key.
pub fn region_contribution(spec: &OffsetSpec, key: &RegionKey) -> Result<i64> {
    let rows = region_contributions(spec)?;
    rows.iter()
        .find(|r| &r.region.key == key)
        .map(|r| r.contribution)
        .ok_or_else(|| Error::usage("region key is not a region of the arrangement"))
}
