//! Refined interval-relation queries over genomic interval sets.
//!
//! An interval query asks for every data interval standing in one of Allen's
//! 13 relations to a query interval. Each relation is rewritten as a
//! 2-dimensional range query over the points `(start, end)`, which is then
//! answered by one of three index structures:
//!
//! * [`RangeTree2d`] — a basic 2-dimensional range tree, `O(log² n + k)` per query;
//! * [`RtfcTree`] — the same x-tree augmented with fractional cascading,
//!   `O(log n + k)` per query;
//! * [`IntervalTree`] — an augmented red-black interval tree baseline that
//!   enumerates intersections and filters by relation.
//!
//! All three index structures share one immutable [`PointStore`] and hold only
//! indices into it. A brute-force [`oracle`] provides the ground truth the
//! trees are tested against.
//!
//! This crate is `no_std` (with `alloc`); IO, file formats, and the CLI live
//! in the companion `allenquery` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod bound;

pub mod interval;
pub mod interval_tree;
pub mod oracle;
pub mod range_tree;
pub mod relation;
pub mod rewrite;
pub mod rtfc;
pub mod stats;
pub mod store;

pub use interval::{Coord, Interval, InvalidInterval, PointId, QueryInterval};
pub use interval_tree::{IntervalTree, UnsupportedRelation};
pub use range_tree::RangeTree2d;
pub use relation::{AllenRelation, UnknownRelation, ALL_RELATIONS, INTERSECTION_RELATIONS};
pub use rewrite::{rewrite, window_after, window_before, BoundConstraint, RangeQuery2d, WindowError};
pub use rtfc::{audit_fc_invariants, build_fc_index, FcIndexArray, RtfcTree};
pub use stats::QueryStats;
pub use store::{Dataset, PointStore};
