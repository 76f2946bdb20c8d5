//! The range tree with fractional cascading (RTFC).
//!
//! Same x-tree as the basic range tree, but instead of an end-*tree*, every
//! node `v` stores its subtree's points as an array `A(v)` sorted by
//! composite y-key, plus two *FC-index* arrays bridging `A(v)` to `A(left)`
//! and `A(right)`. Because `A(v)` is exactly the merge of its children's
//! arrays, the position of any y-value in a child array follows from its
//! position in the parent array by one table lookup. A query therefore
//! performs a single binary search — in the split node's array, for the
//! y-constraint's lower cut — and obtains the scan start in every canonical
//! subtree below by `O(1)` cascading, reporting array entries until the upper
//! cut is exceeded: `O(log n + k)` per query.
//!
//! When the x-constraint is `exact(v)`, no published variant pins down where
//! the one binary search should happen; here nothing changes: the two x-cuts
//! `Below(v)`/`Above(v)` still identify a genuine split node — the deepest
//! node whose subtree spans all points with x = v — and the search happens in
//! its array as usual. If no such point exists the descent bottoms out at a
//! leaf, whose single-element array is "searched" and checked directly.
//!
//! All arrays hold `u32` indices into the shared [`PointStore`] (coordinates
//! are never copied), concatenated into flat buffers with per-node offsets.
//! Leaves keep their single-element `A` and no FC arrays.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bound::Cut;
use crate::interval::PointId;
use crate::range_tree::{ceil_log2, merge_by_y, subtree_point_slots, NONE};
use crate::rewrite::RangeQuery2d;
use crate::stats::QueryStats;
use crate::store::PointStore;

/// An FC-index array: entry `i` is the index of the smallest element of the
/// child array that is no less than parent entry `i`, or −1 if none exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FcIndexArray {
    indices: Vec<i32>,
}

impl FcIndexArray {
    /// The raw indices (−1 is the "no such element" sentinel).
    pub fn indices(&self) -> &[i32] {
        &self.indices
    }

    /// Number of entries (equals the parent array's length).
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// Whether the parent array was empty.
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Builds the FC-index array from `parent` to `child`, both sorted by `key`,
/// in one linear merge pass.
///
/// Sortedness is a precondition, checked in debug builds. For cascading to be
/// meaningful the child should additionally be a sub-multiset of the parent,
/// but the index definition itself needs only sortedness.
pub fn build_fc_index<T, K, F>(parent: &[T], child: &[T], mut key: F) -> FcIndexArray
where
    K: Ord,
    F: FnMut(&T) -> K,
{
    debug_assert!(
        parent.windows(2).all(|w| key(&w[0]) <= key(&w[1])),
        "parent array not sorted"
    );
    debug_assert!(
        child.windows(2).all(|w| key(&w[0]) <= key(&w[1])),
        "child array not sorted"
    );
    assert!(
        child.len() <= i32::MAX as usize,
        "child array exceeds the i32 index range"
    );
    let mut indices = Vec::with_capacity(parent.len());
    let mut j = 0;
    for p in parent {
        while j < child.len() && key(&child[j]) < key(p) {
            j += 1;
        }
        indices.push(if j < child.len() { j as i32 } else { -1 });
    }
    FcIndexArray { indices }
}

struct FcNode {
    /// Leaf: the point stored here. Internal: the point holding the largest
    /// composite x-key in the left subtree.
    key_point: u32,
    left: u32,
    right: u32,
    /// Offset of `A(v)` in the flat `a_buf`.
    a_start: u32,
    /// Length of `A(v)` (the subtree's point count).
    a_len: u32,
    /// Offset of both FC-index arrays in `fc_left`/`fc_right`; meaningful for
    /// internal nodes only (their length there is `a_len`).
    fc_start: u32,
}

impl FcNode {
    #[inline]
    fn is_leaf(&self) -> bool {
        self.left == NONE
    }
}

/// The range tree with fractional cascading.
pub struct RtfcTree {
    nodes: Vec<FcNode>,
    /// All `A(v)` arrays, concatenated.
    a_buf: Vec<u32>,
    /// FC-index arrays from each internal node to its left child.
    fc_left: Vec<i32>,
    /// FC-index arrays from each internal node to its right child.
    fc_right: Vec<i32>,
    root: u32,
    n: usize,
    height: u32,
}

impl RtfcTree {
    /// Builds the tree over all points of `store`. An empty store yields an
    /// empty tree on which every query returns the empty set.
    pub fn build(store: &PointStore) -> Self {
        let n = store.len();
        assert!(n <= i32::MAX as usize, "point count exceeds FC index range");
        let mut tree = Self {
            nodes: Vec::new(),
            a_buf: Vec::new(),
            fc_left: Vec::new(),
            fc_right: Vec::new(),
            root: NONE,
            n,
            height: ceil_log2(n),
        };
        if n == 0 {
            return tree;
        }
        let mut ids: Vec<u32> = (0..n as u32).collect();
        ids.sort_unstable_by_key(|&i| store.x_key(i));
        let slots = subtree_point_slots(n);
        tree.nodes.reserve_exact(2 * n - 1);
        tree.a_buf.reserve_exact(slots);
        tree.fc_left.reserve_exact(slots - n);
        tree.fc_right.reserve_exact(slots - n);
        let (root, _) = tree.build_node(store, &ids);
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

    fn build_node(&mut self, store: &PointStore, ids: &[u32]) -> (u32, Vec<u32>) {
        if let [id] = *ids {
            let a_start = self.a_buf.len() as u32;
            self.a_buf.push(id);
            let node = self.push_node(FcNode {
                key_point: id,
                left: NONE,
                right: NONE,
                a_start,
                a_len: 1,
                fc_start: 0,
            });
            return (node, alloc::vec![id]);
        }
        let mid = ids.len().div_ceil(2);
        let (left, ys_left) = self.build_node(store, &ids[..mid]);
        let (right, ys_right) = self.build_node(store, &ids[mid..]);
        let merged = merge_by_y(store, &ys_left, &ys_right);

        let a_start = self.a_buf.len() as u32;
        self.a_buf.extend_from_slice(&merged);
        let fc_start = self.fc_left.len() as u32;
        let to_left = build_fc_index(&merged, &ys_left, |&id| store.y_key(id));
        let to_right = build_fc_index(&merged, &ys_right, |&id| store.y_key(id));
        self.fc_left.extend_from_slice(to_left.indices());
        self.fc_right.extend_from_slice(to_right.indices());

        let node = self.push_node(FcNode {
            key_point: ids[mid - 1],
            left,
            right,
            a_start,
            a_len: merged.len() as u32,
            fc_start,
        });
        (node, merged)
    }

    fn push_node(&mut self, node: FcNode) -> u32 {
        let idx = self.nodes.len() as u32;
        self.nodes.push(node);
        idx
    }

    #[inline]
    fn a_slice(&self, node: &FcNode) -> &[u32] {
        &self.a_buf[node.a_start as usize..(node.a_start + node.a_len) as usize]
    }

    /// Position in the child's array corresponding to position `pos` in
    /// `node`'s array, by one FC-index lookup.
    #[inline]
    fn cascade(&self, node: &FcNode, go_left: bool, pos: u32) -> u32 {
        let child = &self.nodes[if go_left { node.left } else { node.right } as usize];
        if pos >= node.a_len {
            return child.a_len;
        }
        let fc = if go_left { &self.fc_left } else { &self.fc_right };
        let idx = fc[(node.fc_start + pos) as usize];
        if idx < 0 {
            child.a_len
        } else {
            idx as u32
        }
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

        // Locate the split node, exactly as in the basic range tree.
        let mut v = self.root;
        let split = loop {
            st.nodes_visited += 1;
            let node = &self.nodes[v as usize];
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

        // The query's single y binary search: the lower cut's position in
        // the split node's array. Every other position is cascaded from it.
        let split_node = &self.nodes[split as usize];
        let pos = self.search_lower_cut(store, split_node, ylo, &mut st);

        if split_node.is_leaf() {
            st.comparisons += 2;
            if Cut::admit(xlo, xhi, store.x(split_node.key_point)) {
                self.report_from(store, split_node, pos, yhi, &mut out, &mut st);
            }
        } else {
            // Left boundary path (upper x-cut already satisfied throughout).
            let mut v = split_node.left;
            let mut vpos = self.cascade(split_node, true, pos);
            loop {
                st.nodes_visited += 1;
                let node = &self.nodes[v as usize];
                if node.is_leaf() {
                    st.comparisons += 1;
                    if xlo.is_below(store.x(node.key_point)) {
                        self.report_from(store, node, vpos, yhi, &mut out, &mut st);
                    }
                    break;
                }
                st.comparisons += 1;
                if xlo.is_below(store.x(node.key_point)) {
                    st.nodes_visited += 1;
                    st.canonical_subtrees += 1;
                    let canon = &self.nodes[node.right as usize];
                    let cpos = self.cascade(node, false, vpos);
                    self.report_from(store, canon, cpos, yhi, &mut out, &mut st);
                    vpos = self.cascade(node, true, vpos);
                    v = node.left;
                } else {
                    vpos = self.cascade(node, false, vpos);
                    v = node.right;
                }
            }
            // Right boundary path (lower x-cut already satisfied throughout).
            let mut v = split_node.right;
            let mut vpos = self.cascade(split_node, false, pos);
            loop {
                st.nodes_visited += 1;
                let node = &self.nodes[v as usize];
                if node.is_leaf() {
                    st.comparisons += 1;
                    if xhi.is_above(store.x(node.key_point)) {
                        self.report_from(store, node, vpos, yhi, &mut out, &mut st);
                    }
                    break;
                }
                st.comparisons += 1;
                if xhi.is_below(store.x(node.key_point)) {
                    vpos = self.cascade(node, true, vpos);
                    v = node.left;
                } else {
                    st.nodes_visited += 1;
                    st.canonical_subtrees += 1;
                    let canon = &self.nodes[node.left as usize];
                    let cpos = self.cascade(node, true, vpos);
                    self.report_from(store, canon, cpos, yhi, &mut out, &mut st);
                    vpos = self.cascade(node, false, vpos);
                    v = node.right;
                }
            }
        }

        out.sort_unstable();
        st.results_reported = out.len() as u64;
        (out, st)
    }

    /// Binary search for the y lower cut in `node`'s array: the first
    /// position whose y-key lies above the cut.
    fn search_lower_cut(
        &self,
        store: &PointStore,
        node: &FcNode,
        ylo: Cut,
        st: &mut QueryStats,
    ) -> u32 {
        st.y_binary_searches += 1;
        let (mut lo, mut hi) = (0u32, node.a_len);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            st.comparisons += 1;
            let id = self.a_buf[(node.a_start + mid) as usize];
            if ylo.is_below(store.y(id)) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    /// Reports `node`'s array entries from `pos` until the upper y-cut is
    /// exceeded. For an `exact(v)` y-constraint this scans exactly the
    /// y == v run.
    fn report_from(
        &self,
        store: &PointStore,
        node: &FcNode,
        pos: u32,
        yhi: Cut,
        out: &mut Vec<u32>,
        st: &mut QueryStats,
    ) {
        for &id in &self.a_buf[(node.a_start + pos.min(node.a_len)) as usize
            ..(node.a_start + node.a_len) as usize]
        {
            st.comparisons += 1;
            if !yhi.is_above(store.y(id)) {
                break;
            }
            out.push(id);
        }
    }

    /// Verifies every structural invariant, returning a description of the
    /// first violation found: node count, x-BST ordering and left-maximum
    /// keys, exact balance, `A(v)` equal to the merge of the children's
    /// arrays (leaf arrays being the single stored point), and both FC-index
    /// arrays at every internal node equal to freshly built ones and
    /// satisfying the FC-index invariants.
    pub fn audit(&self, store: &PointStore) -> Result<(), String> {
        if self.n == 0 {
            return if self.root == NONE && self.nodes.is_empty() && self.a_buf.is_empty() {
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
        if self.nodes.len() != 2 * self.n - 1 {
            return Err(format!(
                "node count {} != 2n-1 = {}",
                self.nodes.len(),
                2 * self.n - 1
            ));
        }
        let (leaves, depth) = self.audit_node(store, self.root)?;
        if leaves.len() != self.n {
            return Err(format!("{} leaves for {} points", leaves.len(), self.n));
        }
        let mut expected: Vec<u32> = (0..self.n as u32).collect();
        expected.sort_unstable_by_key(|&i| store.x_key(i));
        if leaves != expected {
            return Err(String::from("leaf order differs from x-key order"));
        }
        if depth != self.height || depth != ceil_log2(self.n) {
            return Err(format!(
                "height {} differs from ceil(log2 {}) = {}",
                depth,
                self.n,
                ceil_log2(self.n)
            ));
        }
        Ok(())
    }

    /// Returns (subtree leaf ids in x order, subtree height).
    fn audit_node(&self, store: &PointStore, v: u32) -> Result<(Vec<u32>, u32), String> {
        let node = &self.nodes[v as usize];
        if node.is_leaf() {
            if node.right != NONE {
                return Err(format!("leaf {v} has a right child"));
            }
            if self.a_slice(node) != [node.key_point] {
                return Err(format!("leaf {v} array is not its single point"));
            }
            return Ok((alloc::vec![node.key_point], 0));
        }
        if node.right == NONE {
            return Err(format!("internal node {v} lacks a right child"));
        }
        let (lx, lh) = self.audit_node(store, node.left)?;
        let (rx, rh) = self.audit_node(store, node.right)?;
        if node.key_point != *lx.last().expect("nonempty left subtree") {
            return Err(format!(
                "node {v} key is not the maximum of its left subtree"
            ));
        }
        if store.x_key(*lx.last().unwrap()) >= store.x_key(rx[0]) {
            return Err(format!("subtrees of node {v} out of order"));
        }

        let left_node = &self.nodes[node.left as usize];
        let right_node = &self.nodes[node.right as usize];
        let merged = merge_by_y(store, self.a_slice(left_node), self.a_slice(right_node));
        if self.a_slice(node) != merged {
            return Err(format!(
                "node {v} array is not the merge of its children's arrays"
            ));
        }
        for (go_left, child, fc_buf) in [
            (true, left_node, &self.fc_left),
            (false, right_node, &self.fc_right),
        ] {
            let stored =
                &fc_buf[node.fc_start as usize..(node.fc_start + node.a_len) as usize];
            let fresh = build_fc_index(self.a_slice(node), self.a_slice(child), |&id| {
                store.y_key(id)
            });
            if stored != fresh.indices() {
                return Err(format!(
                    "node {v} {} FC-index differs from a freshly built one",
                    if go_left { "left" } else { "right" }
                ));
            }
            audit_fc_invariants(self.a_slice(node), self.a_slice(child), stored, |&id| {
                store.y_key(id)
            })
            .map_err(|e| format!("node {v}: {e}"))?;
        }

        let mut xs = lx;
        xs.extend_from_slice(&rx);
        Ok((xs, 1 + lh.max(rh)))
    }

    /// Debug serialization: one node per line, pre-order,
    /// `depth key [A-array size]` — same shape as the basic range tree's
    /// dump, so identical x-trees dump identically.
    pub fn dump(&self, store: &PointStore) -> String {
        let mut out = String::new();
        if self.root != NONE {
            self.dump_node(store, self.root, 0, &mut out);
        }
        out
    }

    fn dump_node(&self, store: &PointStore, v: u32, depth: u32, out: &mut String) {
        let node = &self.nodes[v as usize];
        out.push_str(&format!(
            "{} {} [{}]\n",
            depth,
            store.x(node.key_point),
            node.a_len
        ));
        if !node.is_leaf() {
            self.dump_node(store, node.left, depth + 1, out);
            self.dump_node(store, node.right, depth + 1, out);
        }
    }
}

/// Checks the FC-index invariants directly against their definition:
/// monotone over non-sentinel entries; each `indices[i] = j ≥ 0` has
/// `child[j] ≥ parent[i]` and is the first such element; sentinels only when
/// no child element qualifies.
pub fn audit_fc_invariants<T, K, F>(
    parent: &[T],
    child: &[T],
    indices: &[i32],
    mut key: F,
) -> Result<(), String>
where
    K: Ord,
    F: FnMut(&T) -> K,
{
    if indices.len() != parent.len() {
        return Err(format!(
            "FC-index length {} != parent length {}",
            indices.len(),
            parent.len()
        ));
    }
    let mut prev = 0i32;
    for (i, &j) in indices.iter().enumerate() {
        if j >= 0 {
            if j < prev {
                return Err(format!("FC-index decreases at entry {i}"));
            }
            prev = j;
            let j = j as usize;
            if j >= child.len() {
                return Err(format!("FC-index {j} out of child bounds at entry {i}"));
            }
            if key(&child[j]) < key(&parent[i]) {
                return Err(format!("child[{j}] < parent[{i}]"));
            }
            if j > 0 && key(&child[j - 1]) >= key(&parent[i]) {
                return Err(format!("child[{}] already ≥ parent[{i}]", j - 1));
            }
        } else if j != -1 {
            return Err(format!("negative FC-index {j} is not the −1 sentinel"));
        } else if let Some(last) = child.last() {
            if key(last) >= key(&parent[i]) {
                return Err(format!(
                    "entry {i} is the sentinel but a child element qualifies"
                ));
            }
        }
    }
    Ok(())
}
