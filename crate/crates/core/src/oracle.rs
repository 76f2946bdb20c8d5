//! Brute-force reference implementation.
//!
//! A linear scan that applies the relation definitions directly, interval by
//! interval. Deliberately `O(n)` per query and free of any indexing cleverness
//! — this is the ground truth every tree structure is tested against, and the
//! reference backend behind the CLI's verification mode.

use alloc::vec::Vec;

use crate::interval::{PointId, QueryInterval};
use crate::relation::AllenRelation;
use crate::store::Dataset;

/// Returns the ids of all intervals standing in relation `r` to `q`, in
/// ascending id order.
///
/// Set semantics are the contract; the sorted order is the canonical
/// serialization used for comparisons and golden files.
pub fn scan(data: &Dataset, r: AllenRelation, q: QueryInterval) -> Vec<PointId> {
    data.iter()
        .filter(|a| AllenRelation::classify(*a, q) == r)
        .map(|a| a.id())
        .collect()
}
