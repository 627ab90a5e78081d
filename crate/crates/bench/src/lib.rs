//! Fixtures shared by the criterion benchmarks.

use trireflect_core::{GeneratingSet, ResidueSet};

/// A spread-out generating set for `n`: offsets near `n/3` and `n/2`.
pub fn spread_set(n: usize) -> GeneratingSet {
    let a = (n / 3).max(1);
    let b = (n / 2).max(2);
    let b = if b == a { a + 1 } else { b };
    // nudge a until the set generates
    (a..n)
        .find_map(|a| {
            GeneratingSet::new(n, a, b)
                .ok()
                .filter(GeneratingSet::is_generating)
        })
        .expect("some generating set exists")
}

/// Every third residue plus a few stragglers; a mid-density set.
pub fn patterned_set(n: usize) -> ResidueSet {
    ResidueSet::from_members(n, (0..n).filter(|i| i % 3 == 0 || i % 7 == 1))
}
