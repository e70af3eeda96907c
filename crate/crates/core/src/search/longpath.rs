use num_bigint::BigUint;

use super::SearchError;
use crate::decomposition::{validate, TreeDecomposition};
use crate::graph::{tree_diameter, Graph};

/// `(k+2)^h`.
pub fn longpath_threshold(k: u64, h: u32) -> BigUint {
    BigUint::from(k + 2).pow(h)
}

/// Largest `h` with `(k+2)^h ≤ n` (0 when `n < k+2`).
pub fn longpath_height(n: u64, k: u64) -> u32 {
    let mut h = 0;
    let mut p = (k + 2) as u128;
    while p <= n as u128 {
        h += 1;
        p *= (k + 2) as u128;
    }
    h
}

/// Whether the host of a width-≤`k` decomposition of the canonical `n`-vertex
/// path has diameter at least the height from [`longpath_height`]. A `false` is a
/// counterexample to the long-path property.
pub fn check_longpath_property(n: usize, k: u64, td: &TreeDecomposition) -> Result<bool, SearchError> {
    let g = Graph::path(n)?;
    let report = validate(&g, td)?;
    if !report.valid {
        return Err(SearchError::InvalidDecomposition(report));
    }
    if td.width() > k as i64 {
        return Err(SearchError::WidthExceeded { width: td.width(), k });
    }
    let h = longpath_height(n as u64, k) as usize;
    Ok(tree_diameter(td.host())? >= h)
}
