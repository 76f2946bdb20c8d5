//! Instrumented per-query counters.
//!
//! Complexity claims — `O(log n + k)` for the cascading tree, `O(log² n + k)`
//! for the basic range tree — are asserted in tests through counters rather
//! than wall-clock timings, which desk-scale hardware cannot reproduce
//! meaningfully. Every query call returns a fresh [`QueryStats`]; nothing is
//! accumulated in shared state, so concurrent queries never contend.

use core::ops::AddAssign;

/// Counters collected by a single query call.
///
/// Counter semantics, kept identical across the three structures so the
/// numbers are comparable:
///
/// * `nodes_visited` — every tree node touched: descent and path nodes,
///   canonical subtree roots, end-structure nodes including those traversed
///   to report a subtree.
/// * `comparisons` — key comparisons against query bounds or between keys:
///   descent decisions, qualification checks, binary-search probes, and
///   per-entry scan checks. Pointer chasing and reporting itself are free.
/// * `results_reported` — number of ids returned; always equals the result
///   set's size.
/// * `y_binary_searches` — binary searches over a y-sorted structure: each
///   1-D end-tree query counts one; the cascading tree's single search in the
///   split node's array counts one.
/// * `canonical_subtrees` — maximal subtrees lying strictly between the two
///   x-search paths whose contents are reported wholesale (boundary leaves
///   checked individually are not counted).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    /// Tree nodes touched.
    pub nodes_visited: u64,
    /// Key comparisons performed.
    pub comparisons: u64,
    /// Ids reported.
    pub results_reported: u64,
    /// Binary searches over y-sorted structures.
    pub y_binary_searches: u64,
    /// Canonical subtrees reported wholesale.
    pub canonical_subtrees: u64,
}

impl AddAssign for QueryStats {
    fn add_assign(&mut self, rhs: Self) {
        self.nodes_visited += rhs.nodes_visited;
        self.comparisons += rhs.comparisons;
        self.results_reported += rhs.results_reported;
        self.y_binary_searches += rhs.y_binary_searches;
        self.canonical_subtrees += rhs.canonical_subtrees;
    }
}
