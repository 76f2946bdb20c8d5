//! The basic 2-dimensional range tree (2D-RT).
//!
//! A leaf-storing balanced BST over the points' x-keys in which every node
//! carries an associated 1-dimensional *end-tree*: a leaf-storing balanced BST
//! over the y-keys of exactly the points in that node's subtree. A query
//! locates the split node for the x-constraint, walks the two boundary paths,
//! and for each canonical subtree hanging between them runs a 1-D range query
//! on its root's end-tree — `O(log n)` end-tree searches of `O(log n)` each,
//! hence `O(log² n + k)` per query.
//!
//! Construction is bottom-up over the points sorted by composite x-key
//! `(x, y, id)`; the left half gets `ceil(m/2)` points, which makes the height
//! exactly `⌈log₂ n⌉` (the balance bound holds with constant c = 0). Each
//! internal node's key is the largest key in its left subtree. End-tree
//! contents are produced by merging the children's y-sorted id sequences, as
//! in mergesort.
//!
//! An `exact(v)` x-constraint needs no special code path: its two cuts
//! bracket precisely the keys with x = v, so the split-node machinery
//! degenerates into a binary search for v by itself (when no point has x = v
//! the two cuts fall into the same inter-key gap and the descent bottoms out
//! at a single leaf whose check rejects).
//!
//! Tree nodes store `u32` indices into the shared [`PointStore`] instead of
//! coordinates; the store is passed to `build` and must be passed unchanged
//! to every later call.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bound::Cut;
use crate::interval::PointId;
use crate::rewrite::RangeQuery2d;
use crate::stats::QueryStats;
use crate::store::PointStore;

/// Sentinel child index meaning "no node".
pub(crate) const NONE: u32 = u32::MAX;

/// `⌈log₂ n⌉` for n ≥ 1 (0 for n ≤ 1).
pub(crate) fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Merges two id sequences sorted by composite y-key into one.
pub(crate) fn merge_by_y(store: &PointStore, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if store.y_key(a[i]) <= store.y_key(b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

struct XNode {
    /// Leaf: the point stored here. Internal: the point holding the largest
    /// composite x-key in the left subtree.
    key_point: u32,
    left: u32,
    right: u32,
    /// Root of this node's end-tree in the shared y-node arena.
    y_root: u32,
}

impl XNode {
    #[inline]
    fn is_leaf(&self) -> bool {
        self.left == NONE
    }
}

struct YNode {
    /// Leaf: the point stored here. Internal: the point holding the largest
    /// composite y-key in the left subtree.
    key_point: u32,
    left: u32,
    right: u32,
}

impl YNode {
    #[inline]
    fn is_leaf(&self) -> bool {
        self.left == NONE
    }
}

/// The basic 2-dimensional range tree.
pub struct RangeTree2d {
    x_nodes: Vec<XNode>,
    y_nodes: Vec<YNode>,
    root: u32,
    n: usize,
    height: u32,
}

impl RangeTree2d {
    /// Builds the tree over all points of `store`. An empty store yields an
    /// empty tree on which every query returns the empty set.
    pub fn build(store: &PointStore) -> Self {
        let n = store.len();
        let mut tree = Self {
            x_nodes: Vec::new(),
            y_nodes: Vec::new(),
            root: NONE,
            n,
            height: ceil_log2(n),
        };
        if n == 0 {
            return tree;
        }
        let mut ids: Vec<u32> = (0..n as u32).collect();
        ids.sort_unstable_by_key(|&i| store.x_key(i));
        tree.x_nodes.reserve_exact(2 * n - 1);
        tree.y_nodes.reserve_exact(y_node_count(n));
        let (root, _) = tree.build_x(store, &ids);
        tree.root = root;
        tree
    }

    /// Number of points indexed.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Whether the tree indexes no points.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Height of the x-tree in edges: exactly `⌈log₂ n⌉`.
    pub fn height(&self) -> u32 {
        self.height
    }

    fn build_x(&mut self, store: &PointStore, ids: &[u32]) -> (u32, Vec<u32>) {
        if let [id] = *ids {
            let y_root = self.push_y(YNode {
                key_point: id,
                left: NONE,
                right: NONE,
            });
            let node = self.push_x(XNode {
                key_point: id,
                left: NONE,
                right: NONE,
                y_root,
            });
            return (node, alloc::vec![id]);
        }
        let mid = ids.len().div_ceil(2);
        let (left, ys_left) = self.build_x(store, &ids[..mid]);
        let (right, ys_right) = self.build_x(store, &ids[mid..]);
        let merged = merge_by_y(store, &ys_left, &ys_right);
        let y_root = self.build_y(&merged);
        let node = self.push_x(XNode {
            key_point: ids[mid - 1],
            left,
            right,
            y_root,
        });
        (node, merged)
    }

    fn build_y(&mut self, ids: &[u32]) -> u32 {
        if let [id] = *ids {
            return self.push_y(YNode {
                key_point: id,
                left: NONE,
                right: NONE,
            });
        }
        let mid = ids.len().div_ceil(2);
        let left = self.build_y(&ids[..mid]);
        let right = self.build_y(&ids[mid..]);
        self.push_y(YNode {
            key_point: ids[mid - 1],
            left,
            right,
        })
    }

    fn push_x(&mut self, node: XNode) -> u32 {
        let idx = self.x_nodes.len() as u32;
        self.x_nodes.push(node);
        idx
    }

    fn push_y(&mut self, node: YNode) -> u32 {
        let idx = self.y_nodes.len() as u32;
        self.y_nodes.push(node);
        idx
    }

    /// Answers a 2-D range query: the ids of all points in the region, in
    /// ascending id order, plus the per-call counters.
    ///
    /// `store` must be the store the tree was built over.
    pub fn query(&self, store: &PointStore, rq: RangeQuery2d) -> (Vec<PointId>, QueryStats) {
        let mut out = Vec::new();
        let mut st = QueryStats::default();
        if self.root == NONE {
            return (out, st);
        }
        debug_assert_eq!(store.len(), self.n, "store/tree mismatch");
        let (xlo, xhi) = Cut::from_constraint(rq.x);
        let (ylo, yhi) = Cut::from_constraint(rq.y);

        // Locate the split node: the deepest node whose subtree spans both
        // x-cuts (the descent ends at a leaf when the cuts share a gap).
        let mut v = self.root;
        let split = loop {
            st.nodes_visited += 1;
            let node = &self.x_nodes[v as usize];
            if node.is_leaf() {
                break v;
            }
            let kappa = store.x(node.key_point);
            st.comparisons += 2;
            let lo_left = xlo.is_below(kappa);
            let hi_left = xhi.is_below(kappa);
            if lo_left != hi_left {
                break v;
            }
            v = if lo_left { node.left } else { node.right };
        };

        let split_node = &self.x_nodes[split as usize];
        if split_node.is_leaf() {
            st.comparisons += 2;
            if Cut::admit(xlo, xhi, store.x(split_node.key_point)) {
                st.comparisons += 2;
                if Cut::admit(ylo, yhi, store.y(split_node.key_point)) {
                    out.push(split_node.key_point);
                }
            }
        } else {
            // Left boundary path. Every key in the split's left subtree
            // already satisfies the upper x-cut (the paths diverged), so only
            // the lower cut steers; right children hanging where it goes left
            // are canonical.
            let mut v = split_node.left;
            loop {
                st.nodes_visited += 1;
                let node = &self.x_nodes[v as usize];
                if node.is_leaf() {
                    st.comparisons += 1;
                    if xlo.is_below(store.x(node.key_point)) {
                        st.comparisons += 2;
                        if Cut::admit(ylo, yhi, store.y(node.key_point)) {
                            out.push(node.key_point);
                        }
                    }
                    break;
                }
                st.comparisons += 1;
                if xlo.is_below(store.x(node.key_point)) {
                    st.nodes_visited += 1;
                    st.canonical_subtrees += 1;
                    let canon = &self.x_nodes[node.right as usize];
                    self.query_y(store, canon.y_root, ylo, yhi, &mut out, &mut st);
                    v = node.left;
                } else {
                    v = node.right;
                }
            }
            // Right boundary path: the mirror image, steered by the upper cut.
            let mut v = split_node.right;
            loop {
                st.nodes_visited += 1;
                let node = &self.x_nodes[v as usize];
                if node.is_leaf() {
                    st.comparisons += 1;
                    if xhi.is_above(store.x(node.key_point)) {
                        st.comparisons += 2;
                        if Cut::admit(ylo, yhi, store.y(node.key_point)) {
                            out.push(node.key_point);
                        }
                    }
                    break;
                }
                st.comparisons += 1;
                if xhi.is_below(store.x(node.key_point)) {
                    v = node.left;
                } else {
                    st.nodes_visited += 1;
                    st.canonical_subtrees += 1;
                    let canon = &self.x_nodes[node.left as usize];
                    self.query_y(store, canon.y_root, ylo, yhi, &mut out, &mut st);
                    v = node.right;
                }
            }
        }

        out.sort_unstable();
        st.results_reported = out.len() as u64;
        (out, st)
    }

    /// 1-dimensional range query on one end-tree.
    fn query_y(
        &self,
        store: &PointStore,
        y_root: u32,
        ylo: Cut,
        yhi: Cut,
        out: &mut Vec<u32>,
        st: &mut QueryStats,
    ) {
        st.y_binary_searches += 1;
        let mut v = y_root;
        let split = loop {
            st.nodes_visited += 1;
            let node = &self.y_nodes[v as usize];
            if node.is_leaf() {
                break v;
            }
            let kappa = store.y(node.key_point);
            st.comparisons += 2;
            let lo_left = ylo.is_below(kappa);
            let hi_left = yhi.is_below(kappa);
            if lo_left != hi_left {
                break v;
            }
            v = if lo_left { node.left } else { node.right };
        };
        let split_node = &self.y_nodes[split as usize];
        if split_node.is_leaf() {
            st.comparisons += 2;
            if Cut::admit(ylo, yhi, store.y(split_node.key_point)) {
                out.push(split_node.key_point);
            }
            return;
        }
        let mut v = split_node.left;
        loop {
            st.nodes_visited += 1;
            let node = &self.y_nodes[v as usize];
            if node.is_leaf() {
                st.comparisons += 1;
                if ylo.is_below(store.y(node.key_point)) {
                    out.push(node.key_point);
                }
                break;
            }
            st.comparisons += 1;
            if ylo.is_below(store.y(node.key_point)) {
                self.report_y_subtree(node.right, out, st);
                v = node.left;
            } else {
                v = node.right;
            }
        }
        let mut v = split_node.right;
        loop {
            st.nodes_visited += 1;
            let node = &self.y_nodes[v as usize];
            if node.is_leaf() {
                st.comparisons += 1;
                if yhi.is_above(store.y(node.key_point)) {
                    out.push(node.key_point);
                }
                break;
            }
            st.comparisons += 1;
            if yhi.is_below(store.y(node.key_point)) {
                v = node.left;
            } else {
                self.report_y_subtree(node.left, out, st);
                v = node.right;
            }
        }
    }

    /// Reports every point in a y-subtree; comparison-free.
    fn report_y_subtree(&self, v: u32, out: &mut Vec<u32>, st: &mut QueryStats) {
        st.nodes_visited += 1;
        let node = &self.y_nodes[v as usize];
        if node.is_leaf() {
            out.push(node.key_point);
        } else {
            self.report_y_subtree(node.left, out, st);
            self.report_y_subtree(node.right, out, st);
        }
    }

    /// Verifies every structural invariant, returning a description of the
    /// first violation found: node counts, x/y BST ordering on composite
    /// keys, internal keys equal to left-subtree maxima, exact balance
    /// (height `⌈log₂ n⌉` for the x-tree and every end-tree), and end-tree
    /// contents matching the subtree's points sorted by y-key.
    pub fn audit(&self, store: &PointStore) -> Result<(), String> {
        if self.n == 0 {
            return if self.root == NONE && self.x_nodes.is_empty() && self.y_nodes.is_empty() {
                Ok(())
            } else {
                Err(String::from("empty tree carries nodes"))
            };
        }
        if store.len() != self.n {
            return Err(format!(
                "store has {} points but tree indexes {}",
                store.len(),
                self.n
            ));
        }
        if self.x_nodes.len() != 2 * self.n - 1 {
            return Err(format!(
                "x-node count {} != 2n-1 = {}",
                self.x_nodes.len(),
                2 * self.n - 1
            ));
        }
        let (leaves, depth, _) = self.audit_x(store, self.root)?;
        if leaves.len() != self.n {
            return Err(format!("{} x-leaves for {} points", leaves.len(), self.n));
        }
        let mut expected: Vec<u32> = (0..self.n as u32).collect();
        expected.sort_unstable_by_key(|&i| store.x_key(i));
        if leaves != expected {
            return Err(String::from("x-leaf order differs from x-key order"));
        }
        if depth != self.height || depth != ceil_log2(self.n) {
            return Err(format!(
                "x-tree height {} differs from ceil(log2 {}) = {}",
                depth,
                self.n,
                ceil_log2(self.n)
            ));
        }
        Ok(())
    }

    /// Returns (subtree leaf ids in x order, subtree height, ids in y order).
    #[allow(clippy::type_complexity)]
    fn audit_x(
        &self,
        store: &PointStore,
        v: u32,
    ) -> Result<(Vec<u32>, u32, Vec<u32>), String> {
        let node = &self.x_nodes[v as usize];
        if node.is_leaf() {
            if node.right != NONE {
                return Err(format!("x-leaf {v} has a right child"));
            }
            let ys = self.audit_y_subtree(store, node.y_root, &[node.key_point])?;
            return Ok((alloc::vec![node.key_point], 0, ys));
        }
        if node.right == NONE {
            return Err(format!("internal x-node {v} lacks a right child"));
        }
        let (lx, lh, ly) = self.audit_x(store, node.left)?;
        let (rx, rh, ry) = self.audit_x(store, node.right)?;
        if node.key_point != *lx.last().expect("nonempty left subtree") {
            return Err(format!(
                "x-node {v} key is not the maximum of its left subtree"
            ));
        }
        if store.x_key(*lx.last().unwrap()) >= store.x_key(rx[0]) {
            return Err(format!("x-subtrees of node {v} out of order"));
        }
        let mut xs = lx;
        xs.extend_from_slice(&rx);
        let merged = merge_by_y(store, &ly, &ry);
        let ys = self.audit_y_subtree(store, node.y_root, &merged)?;
        Ok((xs, 1 + lh.max(rh), ys))
    }

    /// Audits one end-tree against the expected y-ordered id sequence and
    /// returns that sequence.
    fn audit_y_subtree(
        &self,
        store: &PointStore,
        y_root: u32,
        expected: &[u32],
    ) -> Result<Vec<u32>, String> {
        let mut leaves = Vec::with_capacity(expected.len());
        let height = self.audit_y(store, y_root, &mut leaves)?;
        if leaves != expected {
            return Err(String::from(
                "end-tree contents differ from subtree points in y order",
            ));
        }
        if height != ceil_log2(expected.len()) {
            return Err(format!(
                "end-tree height {} differs from ceil(log2 {})",
                height,
                expected.len()
            ));
        }
        Ok(leaves)
    }

    fn audit_y(
        &self,
        store: &PointStore,
        v: u32,
        leaves: &mut Vec<u32>,
    ) -> Result<u32, String> {
        let node = &self.y_nodes[v as usize];
        if node.is_leaf() {
            if node.right != NONE {
                return Err(format!("y-leaf {v} has a right child"));
            }
            leaves.push(node.key_point);
            return Ok(0);
        }
        if node.right == NONE {
            return Err(format!("internal y-node {v} lacks a right child"));
        }
        let before = leaves.len();
        let lh = self.audit_y(store, node.left, leaves)?;
        let left_max = *leaves.last().expect("nonempty left y-subtree");
        if node.key_point != left_max {
            return Err(format!(
                "y-node {v} key is not the maximum of its left subtree"
            ));
        }
        let boundary = leaves.len();
        let rh = self.audit_y(store, node.right, leaves)?;
        if store.y_key(leaves[boundary - 1]) >= store.y_key(leaves[boundary]) {
            return Err(format!("y-subtrees of node {v} out of order"));
        }
        let _ = before;
        Ok(1 + lh.max(rh))
    }

    /// Debug serialization: one node per line, pre-order,
    /// `depth key [end-tree size]`, where `key` is the node's x-key primary
    /// coordinate.
    pub fn dump(&self, store: &PointStore) -> String {
        let mut out = String::new();
        if self.root != NONE {
            self.dump_node(store, self.root, 0, &mut out);
        }
        out
    }

    fn dump_node(&self, store: &PointStore, v: u32, depth: u32, out: &mut String) {
        let node = &self.x_nodes[v as usize];
        let size = self.y_subtree_size(node.y_root);
        out.push_str(&format!(
            "{} {} [{}]\n",
            depth,
            store.x(node.key_point),
            size
        ));
        if !node.is_leaf() {
            self.dump_node(store, node.left, depth + 1, out);
            self.dump_node(store, node.right, depth + 1, out);
        }
    }

    fn y_subtree_size(&self, v: u32) -> usize {
        let node = &self.y_nodes[v as usize];
        if node.is_leaf() {
            1
        } else {
            self.y_subtree_size(node.left) + self.y_subtree_size(node.right)
        }
    }
}

/// Σ of subtree sizes over all nodes of the ceil-split tree on `n` leaves —
/// equivalently, each point counted once per level of its root-to-leaf path.
pub(crate) fn subtree_point_slots(n: usize) -> usize {
    if n <= 1 {
        n
    } else {
        let left = n.div_ceil(2);
        n + subtree_point_slots(left) + subtree_point_slots(n - left)
    }
}

/// Total y-node count over all end-trees for n points: an end-tree over m
/// points has 2m − 1 nodes, summed over all 2n−1 subtrees.
fn y_node_count(n: usize) -> usize {
    2 * subtree_point_slots(n) - (2 * n - 1)
}
