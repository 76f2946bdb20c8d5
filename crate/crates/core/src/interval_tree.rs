//! The augmented red-black interval tree baseline (IT).
//!
//! A red-black tree of intervals keyed by `(start, end, id)`, each node
//! augmented with `max_end`, the largest end coordinate in its subtree —
//! built by iterative insertion, the classical interval-tree construction.
//! Unlike the range trees it needs no rewritten query: a relation query is
//! answered by enumerating every interval that *intersects* the query (the
//! `max_end` field prunes subtrees that end too early, the start key prunes
//! right subtrees that begin too late) and filtering the candidates with
//! [`AllenRelation::classify`]. All 11 intersection relations imply
//! intersection, so the candidate set is always sufficient; `<` and `>` do
//! not, and are rejected — callers use the windowed query forms instead.
//!
//! The filter-after-intersect strategy makes the baseline's weakness
//! measurable: for a refined relation whose result set is much smaller than
//! the intersection set, IT still visits every intersecting candidate.
//!
//! The tree is mutable during the insertion phase and must be explicitly
//! frozen before querying (checked in debug builds); once frozen it is
//! immutable and safe for unrestricted concurrent reads. Like the range
//! trees, nodes store `u32` ids into the shared [`PointStore`] rather than
//! coordinate copies.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use core::fmt;

use crate::interval::{Coord, Interval, PointId, QueryInterval};
use crate::range_tree::NONE;
use crate::relation::AllenRelation;
use crate::stats::QueryStats;
use crate::store::PointStore;

/// Error returned when querying the interval tree for `<` or `>`, whose
/// results do not intersect the query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnsupportedRelation(pub AllenRelation);

impl fmt::Display for UnsupportedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "the interval tree answers intersection relations only; \
             relation '{}' is answered by a windowed query (window_before/window_after)",
            self.0
        )
    }
}

impl core::error::Error for UnsupportedRelation {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Color {
    Red,
    Black,
}

struct ItNode {
    point: u32,
    left: u32,
    right: u32,
    parent: u32,
    color: Color,
    max_end: Coord,
}

/// The augmented red-black interval tree.
pub struct IntervalTree {
    nodes: Vec<ItNode>,
    root: u32,
    frozen: bool,
}

impl Default for IntervalTree {
    fn default() -> Self {
        Self::new()
    }
}

impl IntervalTree {
    /// Creates an empty, unfrozen tree.
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            root: NONE,
            frozen: false,
        }
    }

    /// Builds a frozen tree by inserting every point of `store` in id order.
    pub fn build(store: &PointStore) -> Self {
        let mut tree = Self::new();
        tree.nodes.reserve_exact(store.len());
        for id in 0..store.len() as u32 {
            tree.insert(store, id);
        }
        tree.freeze();
        tree
    }

    /// Number of intervals inserted.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the tree holds no intervals.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Whether the tree has been frozen for querying.
    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Height in edges of the longest root-to-node path (0 for a single
    /// node; red-black balance guarantees ≤ 2·log₂(n+1)).
    pub fn height(&self) -> u32 {
        fn depth(nodes: &[ItNode], v: u32) -> u32 {
            if v == NONE {
                return 0;
            }
            let node = &nodes[v as usize];
            let (l, r) = (depth(nodes, node.left), depth(nodes, node.right));
            1 + l.max(r)
        }
        depth(&self.nodes, self.root).saturating_sub(1)
    }

    /// Inserts the interval stored at `id`, restoring all invariants
    /// (red-black balance plus `max_end` maintenance through rotations).
    ///
    /// Duplicate intervals are fine: the key is `(start, end, id)`.
    ///
    /// # Panics
    /// If the tree is frozen or `id` is out of the store's bounds.
    pub fn insert(&mut self, store: &PointStore, id: PointId) {
        assert!(!self.frozen, "insert into a frozen interval tree");
        assert!(
            self.nodes.len() < (NONE as usize),
            "interval tree node capacity exceeded"
        );
        let key = store.x_key(id);
        let end = store.y(id);

        let z = self.nodes.len() as u32;
        let mut parent = NONE;
        let mut v = self.root;
        while v != NONE {
            parent = v;
            // Every node on the descent path covers the new interval.
            let node = &mut self.nodes[v as usize];
            node.max_end = node.max_end.max(end);
            v = if key < store.x_key(node.point) {
                node.left
            } else {
                node.right
            };
        }
        self.nodes.push(ItNode {
            point: id,
            left: NONE,
            right: NONE,
            parent,
            color: Color::Red,
            max_end: end,
        });
        if parent == NONE {
            self.root = z;
        } else if key < store.x_key(self.nodes[parent as usize].point) {
            self.nodes[parent as usize].left = z;
        } else {
            self.nodes[parent as usize].right = z;
        }
        self.insert_fixup(store, z);
    }

    /// Marks the build phase complete; the tree becomes immutable.
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    fn color(&self, v: u32) -> Color {
        if v == NONE {
            Color::Black
        } else {
            self.nodes[v as usize].color
        }
    }

    fn insert_fixup(&mut self, store: &PointStore, mut z: u32) {
        loop {
            let p = self.nodes[z as usize].parent;
            if p == NONE || self.color(p) == Color::Black {
                break;
            }
            // The parent is red, so it is not the root and the grandparent
            // exists (the root is always black).
            let g = self.nodes[p as usize].parent;
            if p == self.nodes[g as usize].left {
                let u = self.nodes[g as usize].right;
                if self.color(u) == Color::Red {
                    self.nodes[p as usize].color = Color::Black;
                    self.nodes[u as usize].color = Color::Black;
                    self.nodes[g as usize].color = Color::Red;
                    z = g;
                } else {
                    if z == self.nodes[p as usize].right {
                        z = p;
                        self.rotate_left(store, z);
                    }
                    let p = self.nodes[z as usize].parent;
                    let g = self.nodes[p as usize].parent;
                    self.nodes[p as usize].color = Color::Black;
                    self.nodes[g as usize].color = Color::Red;
                    self.rotate_right(store, g);
                }
            } else {
                let u = self.nodes[g as usize].left;
                if self.color(u) == Color::Red {
                    self.nodes[p as usize].color = Color::Black;
                    self.nodes[u as usize].color = Color::Black;
                    self.nodes[g as usize].color = Color::Red;
                    z = g;
                } else {
                    if z == self.nodes[p as usize].left {
                        z = p;
                        self.rotate_right(store, z);
                    }
                    let p = self.nodes[z as usize].parent;
                    let g = self.nodes[p as usize].parent;
                    self.nodes[p as usize].color = Color::Black;
                    self.nodes[g as usize].color = Color::Red;
                    self.rotate_left(store, g);
                }
            }
        }
        let root = self.root;
        self.nodes[root as usize].color = Color::Black;
    }

    fn rotate_left(&mut self, store: &PointStore, x: u32) {
        let y = self.nodes[x as usize].right;
        debug_assert_ne!(y, NONE);
        let yl = self.nodes[y as usize].left;
        self.nodes[x as usize].right = yl;
        if yl != NONE {
            self.nodes[yl as usize].parent = x;
        }
        let xp = self.nodes[x as usize].parent;
        self.nodes[y as usize].parent = xp;
        if xp == NONE {
            self.root = y;
        } else if self.nodes[xp as usize].left == x {
            self.nodes[xp as usize].left = y;
        } else {
            self.nodes[xp as usize].right = y;
        }
        self.nodes[y as usize].left = x;
        self.nodes[x as usize].parent = y;
        // y now covers exactly what x covered; x is recomputed from below.
        self.nodes[y as usize].max_end = self.nodes[x as usize].max_end;
        self.recompute_max(store, x);
    }

    fn rotate_right(&mut self, store: &PointStore, x: u32) {
        let y = self.nodes[x as usize].left;
        debug_assert_ne!(y, NONE);
        let yr = self.nodes[y as usize].right;
        self.nodes[x as usize].left = yr;
        if yr != NONE {
            self.nodes[yr as usize].parent = x;
        }
        let xp = self.nodes[x as usize].parent;
        self.nodes[y as usize].parent = xp;
        if xp == NONE {
            self.root = y;
        } else if self.nodes[xp as usize].left == x {
            self.nodes[xp as usize].left = y;
        } else {
            self.nodes[xp as usize].right = y;
        }
        self.nodes[y as usize].right = x;
        self.nodes[x as usize].parent = y;
        self.nodes[y as usize].max_end = self.nodes[x as usize].max_end;
        self.recompute_max(store, x);
    }

    fn recompute_max(&mut self, store: &PointStore, v: u32) {
        let node = &self.nodes[v as usize];
        let mut m = store.y(node.point);
        if node.left != NONE {
            m = m.max(self.nodes[node.left as usize].max_end);
        }
        if node.right != NONE {
            m = m.max(self.nodes[node.right as usize].max_end);
        }
        self.nodes[v as usize].max_end = m;
    }

    /// Answers a relation query by pruned intersection enumeration plus
    /// classification filtering; ids return in ascending order.
    ///
    /// `store` must be the store the tree was built over. `<` and `>` are
    /// rejected with [`UnsupportedRelation`].
    pub fn query(
        &self,
        store: &PointStore,
        r: AllenRelation,
        q: QueryInterval,
    ) -> Result<(Vec<PointId>, QueryStats), UnsupportedRelation> {
        if !r.intersects() {
            return Err(UnsupportedRelation(r));
        }
        debug_assert!(
            self.frozen,
            "querying an unfrozen interval tree is a contract violation"
        );
        let mut out = Vec::new();
        let mut st = QueryStats::default();
        self.visit(store, self.root, r, q, &mut out, &mut st);
        out.sort_unstable();
        st.results_reported = out.len() as u64;
        Ok((out, st))
    }

    fn visit(
        &self,
        store: &PointStore,
        v: u32,
        r: AllenRelation,
        q: QueryInterval,
        out: &mut Vec<u32>,
        st: &mut QueryStats,
    ) {
        if v == NONE {
            return;
        }
        st.nodes_visited += 1;
        let node = &self.nodes[v as usize];
        st.comparisons += 1;
        if node.max_end < q.start() {
            // Every interval below ends before the query starts: no
            // intersection anywhere in this subtree.
            return;
        }
        self.visit(store, node.left, r, q, out, st);
        st.comparisons += 1;
        if store.x(node.point) <= q.end() {
            st.comparisons += 1;
            if store.y(node.point) >= q.start() {
                // An intersecting candidate; classification costs up to six
                // endpoint comparisons, counted as such.
                st.comparisons += 6;
                let iv = Interval::new(store.x(node.point), store.y(node.point), node.point)
                    .expect("stored points are valid intervals");
                if AllenRelation::classify(iv, q) == r {
                    out.push(node.point);
                }
            }
            self.visit(store, node.right, r, q, out, st);
        }
        // Otherwise every interval in the right subtree starts after the
        // query ends: no intersection there.
    }

    /// Verifies every structural invariant, returning a description of the
    /// first violation found: BST order on `(start, end, id)`, parent-pointer
    /// consistency, black root, no red node with a red child, equal black
    /// height on every root-to-nil path, and `max_end` equal to the true
    /// subtree maximum everywhere.
    pub fn audit(&self, store: &PointStore) -> Result<(), String> {
        if self.root == NONE {
            return if self.nodes.is_empty() {
                Ok(())
            } else {
                Err(String::from("rootless tree carries nodes"))
            };
        }
        if self.nodes[self.root as usize].parent != NONE {
            return Err(String::from("root has a parent"));
        }
        if self.color(self.root) != Color::Black {
            return Err(String::from("root is red"));
        }
        let mut count = 0usize;
        self.audit_node(store, self.root, &mut count)?;
        if count != self.nodes.len() {
            return Err(format!(
                "{} reachable nodes but {} allocated",
                count,
                self.nodes.len()
            ));
        }
        Ok(())
    }

    /// Returns (black height, subtree max end, min key, max key).
    #[allow(clippy::type_complexity)]
    fn audit_node(
        &self,
        store: &PointStore,
        v: u32,
        count: &mut usize,
    ) -> Result<(u32, Coord, (Coord, Coord, u32), (Coord, Coord, u32)), String> {
        *count += 1;
        let node = &self.nodes[v as usize];
        let key = store.x_key(node.point);
        if node.color == Color::Red
            && (self.color(node.left) == Color::Red || self.color(node.right) == Color::Red)
        {
            return Err(format!("red node {v} has a red child"));
        }
        let mut max_end = store.y(node.point);
        let (mut min_key, mut max_key) = (key, key);
        let mut child_black_heights = [1u32; 2];
        for (slot, &child) in [node.left, node.right].iter().enumerate() {
            if child == NONE {
                continue;
            }
            if self.nodes[child as usize].parent != v {
                return Err(format!("node {child} has a stale parent pointer"));
            }
            let (bh, cmax, cmin_key, cmax_key) = self.audit_node(store, child, count)?;
            child_black_heights[slot] = bh;
            max_end = max_end.max(cmax);
            if slot == 0 {
                if cmax_key >= key {
                    return Err(format!("left subtree of {v} reaches past its key"));
                }
                min_key = cmin_key;
            } else {
                if cmin_key < key {
                    return Err(format!("right subtree of {v} reaches below its key"));
                }
                max_key = cmax_key;
            }
        }
        if child_black_heights[0] != child_black_heights[1] {
            return Err(format!("unequal black heights under node {v}"));
        }
        let mut black_height = child_black_heights[0];
        if node.color == Color::Black {
            black_height += 1;
        }
        if node.max_end != max_end {
            return Err(format!(
                "node {v} max_end {} != true subtree maximum {}",
                node.max_end, max_end
            ));
        }
        Ok((black_height, max_end, min_key, max_key))
    }

    /// Debug serialization: one node per line, pre-order,
    /// `depth color key max`, with color `B`/`R` and key the interval's
    /// start coordinate.
    pub fn dump(&self, store: &PointStore) -> String {
        let mut out = String::new();
        if self.root != NONE {
            self.dump_node(store, self.root, 0, &mut out);
        }
        out
    }

    fn dump_node(&self, store: &PointStore, v: u32, depth: u32, out: &mut String) {
        let node = &self.nodes[v as usize];
        let color = match node.color {
            Color::Black => 'B',
            Color::Red => 'R',
        };
        out.push_str(&format!(
            "{} {} {} {}\n",
            depth,
            color,
            store.x(node.point),
            node.max_end
        ));
        if node.left != NONE {
            self.dump_node(store, node.left, depth + 1, out);
        }
        if node.right != NONE {
            self.dump_node(store, node.right, depth + 1, out);
        }
    }
}
