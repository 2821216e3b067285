//! Subsets of a ground set as bitmasks in ground order, plus the canonical
//! (size, then lexicographic) ordering used for all deterministic witness
//! enumeration across the crate.

use std::cmp::Ordering;

/// A subset of a ground set, bit i = element at ground position i.
pub type Subset = u32;

pub fn full(n: usize) -> Subset {
    debug_assert!(n <= 32);
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub fn size(s: Subset) -> u32 {
    s.count_ones()
}

pub fn contains(s: Subset, i: usize) -> bool {
    s >> i & 1 == 1
}

pub fn members(s: Subset) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| contains(s, i))
}

pub fn sym_diff(a: Subset, b: Subset) -> Subset {
    a ^ b
}

/// Canonical order: smaller sets first, ties broken lexicographically on the
/// sorted index sequences. For equal sizes that comparison reduces to: the
/// set owning the lowest differing index comes first.
pub fn canonical_cmp(a: Subset, b: Subset) -> Ordering {
    size(a).cmp(&size(b)).then_with(|| {
        if a == b {
            return Ordering::Equal;
        }
        let low = (a ^ b).trailing_zeros();
        if contains(a, low as usize) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    })
}

/// Re-index a subset of `kept` into positions relative to the surviving
/// elements of `kept` (which keep their order). Used when composing
/// operations that shrink the ground set.
pub fn compress(s: Subset, kept: Subset) -> Subset {
    debug_assert_eq!(s & !kept, 0);
    let mut out = 0u32;
    for (pos, i) in members(kept).enumerate() {
        if contains(s, i) {
            out |= 1 << pos;
        }
    }
    out
}

/// Inverse of `compress`: spread a compact mask back over the positions of
/// `kept`.
pub fn expand(s: Subset, kept: Subset) -> Subset {
    let mut out = 0u32;
    for (pos, i) in members(kept).enumerate() {
        if contains(s, pos) {
            out |= 1 << i;
        }
    }
    out
}

/// All subsets of `mask`, in canonical order.
pub fn subsets_of(mask: Subset) -> Vec<Subset> {
    let mut out = Vec::with_capacity(1 << size(mask));
    let mut s: Subset = 0;
    loop {
        out.push(s);
        if s == mask {
            break;
        }
        s = (s.wrapping_sub(mask)) & mask;
    }
    out.sort_by(|&a, &b| canonical_cmp(a, b));
    out
}

/// All subsets of `mask` with exactly `k` elements, in canonical order.
pub fn subsets_of_size(mask: Subset, k: u32) -> Vec<Subset> {
    subsets_of(mask).into_iter().filter(|&s| size(s) == k).collect()
}
