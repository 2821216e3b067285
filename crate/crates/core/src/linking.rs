//! The generalized linking theorem for Lagrangian chain-groups: the minimum
//! of the connectivity over all separations between X and Y equals the best
//! connectivity achievable by a minor on X u Y. Both sides are computed by
//! exhaustive sweeps (the independent oracle), plus a proof-following
//! recursive mode that is cross-checked against them.

use crate::chaingroup::ChainGroup;
use crate::error::{Error, Result};
use crate::half::Half;
use crate::subset::{self, Subset};
use crate::widths::CutTable;
use serde::Serialize;

const GAP_CAP: usize = 16;

/// min { lambda(Z) : X <= Z <= full \ Y } over a cut table, with the
/// canonically least witness.
pub(crate) fn min_over_range(table: &CutTable, x: Subset, y: Subset) -> (Half, Subset) {
    let gap = table.ground().full_mask() & !(x | y);
    let mut best: Option<(Half, Subset)> = None;
    for s in subset::subsets_of(gap) {
        let z = x | s;
        let v = table.value(z);
        best = Some(match best {
            None => (v, z),
            Some((bv, bz)) => {
                if v < bv || (v == bv && subset::canonical_cmp(z, bz).is_lt()) {
                    (v, z)
                } else {
                    (bv, bz)
                }
            }
        });
    }
    best.expect("at least Z = X")
}

fn check_gap(n: &ChainGroup, x: Subset, y: Subset, cap: usize) -> Result<Subset> {
    debug_assert_eq!(x & y, 0, "X and Y must be disjoint");
    let gap = n.ground().full_mask() & !(x | y);
    let size = subset::size(gap) as usize;
    if size > cap {
        return Err(Error::GapTooLarge { n: size, cap });
    }
    Ok(gap)
}

/// Minimum of `lambda_N(Z)` over X <= Z <= V \ Y, with the canonically
/// least witness Z.
pub fn min_side(n: &ChainGroup, x: Subset, y: Subset) -> Result<(Half, Subset)> {
    min_side_with_cap(n, x, y, GAP_CAP)
}

pub fn min_side_with_cap(n: &ChainGroup, x: Subset, y: Subset, cap: usize) -> Result<(Half, Subset)> {
    check_gap(n, x, y, cap)?;
    let table = CutTable::chain_connectivity(n);
    Ok(min_over_range(&table, x, y))
}

/// Maximum of `lambda_{N \ U / W}(X)` over all partitions (U, W) of
/// V \ (X u Y), with the canonically least witness pair.
pub fn max_side(n: &ChainGroup, x: Subset, y: Subset) -> Result<(Half, Subset, Subset)> {
    max_side_with_cap(n, x, y, GAP_CAP)
}

pub fn max_side_with_cap(
    n: &ChainGroup,
    x: Subset,
    y: Subset,
    cap: usize,
) -> Result<(Half, Subset, Subset)> {
    let gap = check_gap(n, x, y, cap)?;
    let keep = n.ground().full_mask() & !gap;
    let mut best: Option<(Half, Subset, Subset)> = None;
    for u in subset::subsets_of(gap) {
        let w = gap & !u;
        let minor = n.minor(w, u); // contract W, delete U
        let x_new = subset::compress(x, keep);
        let v = minor.connectivity(x_new);
        let better = match best {
            None => true,
            Some((bv, bu, _)) => v > bv || (v == bv && subset::canonical_cmp(u, bu).is_lt()),
        };
        if better {
            best = Some((v, u, w));
        }
    }
    Ok(best.expect("the empty partition always exists"))
}

/// Result of the linking computation: the common optimum with witnesses for
/// both sides.
#[derive(Clone, Debug, Serialize)]
pub struct LinkingResult {
    pub value: i64,
    /// Z with X <= Z <= V \ Y attaining the minimum.
    pub min_witness: Subset,
    /// (U, W): delete U and contract W to reach a minor on X u Y whose
    /// connectivity at X attains the same value.
    pub max_witness: (Subset, Subset),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LinkingMode {
    BruteForce,
    Inductive,
}

/// Compute both sides of the linking identity for a Lagrangian chain-group
/// and check they agree. A disagreement would contradict the theorem, so it
/// panics rather than returning.
pub fn linking_equal(n: &ChainGroup, x: Subset, y: Subset) -> Result<LinkingResult> {
    linking_with_mode(n, x, y, LinkingMode::BruteForce)
}

pub fn linking_with_mode(
    n: &ChainGroup,
    x: Subset,
    y: Subset,
    mode: LinkingMode,
) -> Result<LinkingResult> {
    linking_with_mode_and_cap(n, x, y, mode, GAP_CAP)
}

pub fn linking_with_mode_and_cap(
    n: &ChainGroup,
    x: Subset,
    y: Subset,
    mode: LinkingMode,
    cap: usize,
) -> Result<LinkingResult> {
    if !n.is_lagrangian() {
        return Err(Error::NotLagrangian);
    }
    let (min_v, min_z) = min_side_with_cap(n, x, y, cap)?;
    let (max_v, u, w) = match mode {
        LinkingMode::BruteForce => max_side_with_cap(n, x, y, cap)?,
        LinkingMode::Inductive => inductive_max(n, x, y)?,
    };
    assert_eq!(
        min_v, max_v,
        "linking min/max disagree; this contradicts the linking theorem"
    );
    let value = min_v.integer().expect("Lagrangian connectivity is integral");
    Ok(LinkingResult {
        value,
        min_witness: min_z,
        max_witness: (u, w),
    })
}

/// Proof-following recursion: repeatedly pick a free element and keep
/// whichever of its deletion or contraction preserves the linking minimum;
/// one of them always does.
fn inductive_max(n: &ChainGroup, x: Subset, y: Subset) -> Result<(Half, Subset, Subset)> {
    let gap = n.ground().full_mask() & !(x | y);
    if gap == 0 {
        return Ok((n.connectivity(x), 0, 0));
    }
    let table = CutTable::chain_connectivity(n);
    let (k, _) = min_over_range(&table, x, y);
    let v = gap.trailing_zeros() as usize;
    let vmask = 1u32 << v;
    let keep = n.ground().full_mask() & !vmask;
    let x2 = subset::compress(x, keep);
    let y2 = subset::compress(y, keep);

    let deleted = n.delete(vmask);
    let dt = CutTable::chain_connectivity(&deleted);
    if min_over_range(&dt, x2, y2).0 >= k {
        let (val, u_rest, w_rest) = inductive_max(&deleted, x2, y2)?;
        return Ok((val, subset::expand(u_rest, keep) | vmask, subset::expand(w_rest, keep)));
    }
    let contracted = n.contract(vmask);
    let ct = CutTable::chain_connectivity(&contracted);
    debug_assert!(
        min_over_range(&ct, x2, y2).0 >= k,
        "one of the single-element minors must preserve the minimum"
    );
    let (val, u_rest, w_rest) = inductive_max(&contracted, x2, y2)?;
    Ok((val, subset::expand(u_rest, keep), subset::expand(w_rest, keep) | vmask))
}

/// The Bixby-type inequality
/// `lambda_{N \ v}(X) + lambda_{N / v}(Y) >= lambda_N(X n Y) + lambda_N(X u Y u {v}) - 1`.
/// Always true; exposed as a test oracle.
pub fn bixby_holds(n: &ChainGroup, v: usize, x: Subset, y: Subset) -> bool {
    let vmask = 1u32 << v;
    assert_eq!((x | y) & vmask, 0, "v must avoid X and Y");
    let keep = n.ground().full_mask() & !vmask;
    let left = n.delete(vmask).connectivity(subset::compress(x, keep))
        + n.contract(vmask).connectivity(subset::compress(y, keep));
    let right = n.connectivity(x & y) + n.connectivity(x | y | vmask) - Half::from_int(1);
    left >= right
}

/// Witness for the restriction corollary: a partition (C, D) of Y \ X with
/// `N x X = (N x Y) / C \ D`, which exists whenever the connectivity never
/// dips below `lambda(X)` between X and Y.
pub fn restriction_witness(n: &ChainGroup, x: Subset, y: Subset) -> Result<(Subset, Subset)> {
    assert_eq!(x & !y, 0, "X must be a subset of Y");
    if !n.is_lagrangian() {
        return Err(Error::NotLagrangian);
    }
    let table = CutTable::chain_connectivity(n);
    let lx = table.value(x);
    for s in subset::subsets_of(y & !x) {
        if table.value(x | s) < lx {
            return Err(Error::PreconditionFailed {
                reason: "connectivity dips below lambda(X) between X and Y".to_string(),
            });
        }
    }
    let target = n.times(x);
    let ny = n.times(y);
    let inner_in_y = subset::compress(y & !x, y); // Y \ X in N x Y coordinates
    for c in subset::subsets_of(inner_in_y) {
        let d = inner_in_y & !c;
        if ny.minor(c, d) == target {
            return Ok((subset::expand(c, y), subset::expand(d, y)));
        }
    }
    unreachable!("the restriction corollary guarantees a witness")
}
