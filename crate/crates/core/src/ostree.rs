//! Order statistics tree over `f64` keys.
//!
//! A red-black tree in which every node carries the size of its subtree.
//! Equal keys share one node and bump its `nodesize` multiplicity, so the
//! tree holds one node per distinct key and
//! `size(x) = size(left) + size(right) + nodesize(x)`.
//!
//! Only insertion and rank counting are supported. Trees used by the loss
//! computation are rebuilt from scratch on every sweep, so there is no
//! deletion.

use std::cmp::Ordering;

use crate::error::{Error, Result};

type NodeId = u32;

/// Index of the sentinel leaf. It is always black and has size 0.
const NIL: NodeId = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Color {
    Red,
    Black,
}

#[derive(Clone, Debug)]
struct Node {
    key: f64,
    nodesize: u32,
    size: u32,
    parent: NodeId,
    left: NodeId,
    right: NodeId,
    color: Color,
}

impl Node {
    fn sentinel() -> Self {
        Node {
            key: 0.0,
            nodesize: 0,
            size: 0,
            color: Color::Black,
            parent: NIL,
            left: NIL,
            right: NIL,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OSTree {
    nodes: Vec<Node>,
    root: NodeId,
}

impl Default for OSTree {
    fn default() -> Self {
        Self::new()
    }
}

impl OSTree {
    pub fn new() -> Self {
        OSTree {
            nodes: vec![Node::sentinel()],
            root: NIL,
        }
    }

    /// Empty tree with room for `distinct` keys before reallocating.
    pub fn with_capacity(distinct: usize) -> Self {
        let mut nodes = Vec::with_capacity(distinct + 1);
        nodes.push(Node::sentinel());
        OSTree { nodes, root: NIL }
    }

    /// Number of inserted keys, counted with multiplicity.
    pub fn total(&self) -> usize {
        self.nodes[self.root as usize].size as usize
    }

    /// Number of nodes, i.e. distinct keys.
    pub fn distinct(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.root == NIL
    }

    /// Multiplicity of `key` in the tree (0 if absent).
    pub fn multiplicity(&self, key: f64) -> usize {
        let mut x = self.root;
        while x != NIL {
            let node = &self.nodes[x as usize];
            match cmp_keys(key, node.key) {
                Ordering::Less => x = node.left,
                Ordering::Greater => x = node.right,
                Ordering::Equal => return node.nodesize as usize,
            }
        }
        0
    }

    /// Number of nodes on the longest root-to-leaf path (0 for an empty tree).
    pub fn height(&self) -> usize {
        fn go(t: &OSTree, x: NodeId) -> usize {
            if x == NIL {
                0
            } else {
                let n = t.node(x);
                1 + go(t, n.left).max(go(t, n.right))
            }
        }
        go(self, self.root)
    }

    /// Removes every key while keeping the allocated storage.
    pub fn clear(&mut self) {
        self.nodes.truncate(1);
        self.nodes[0] = Node::sentinel();
        self.root = NIL;
    }

    pub fn insert(&mut self, key: f64) -> Result<()> {
        check_key(key)?;
        if self.total() >= u32::MAX as usize {
            return Err(Error::invalid("tree holds at most u32::MAX keys"));
        }
        self.insert_finite(key);
        Ok(())
    }

    /// Number of inserted keys strictly smaller than `k`.
    pub fn count_smaller(&self, k: f64) -> Result<usize> {
        check_key(k)?;
        Ok(self.count_smaller_finite(k))
    }

    /// Number of inserted keys strictly larger than `k`.
    pub fn count_larger(&self, k: f64) -> Result<usize> {
        check_key(k)?;
        Ok(self.count_larger_finite(k))
    }

    pub(crate) fn insert_finite(&mut self, key: f64) {
        debug_assert!(key.is_finite());
        assert!(
            self.total() < u32::MAX as usize,
            "tree holds at most u32::MAX keys"
        );
        let mut parent = NIL;
        let mut x = self.root;
        let mut went_left = false;
        // Every node on the search path gains one key, whether or not a new
        // node ends up being created.
        while x != NIL {
            let node = &mut self.nodes[x as usize];
            node.size += 1;
            match cmp_keys(key, node.key) {
                Ordering::Equal => {
                    node.nodesize += 1;
                    return;
                }
                Ordering::Less => {
                    parent = x;
                    went_left = true;
                    x = node.left;
                }
                Ordering::Greater => {
                    parent = x;
                    went_left = false;
                    x = node.right;
                }
            }
        }

        let z = self.nodes.len() as NodeId;
        self.nodes.push(Node {
            key,
            nodesize: 1,
            size: 1,
            color: Color::Red,
            parent,
            left: NIL,
            right: NIL,
        });
        if parent == NIL {
            self.root = z;
        } else if went_left {
            self.node_mut(parent).left = z;
        } else {
            self.node_mut(parent).right = z;
        }
        self.insert_fixup(z);
    }

    pub(crate) fn count_smaller_finite(&self, k: f64) -> usize {
        let mut count = 0;
        let mut x = self.root;
        while x != NIL {
            let node = self.node(x);
            if node.key < k {
                count += (self.node(node.left).size + node.nodesize) as usize;
                x = node.right;
            } else {
                x = node.left;
            }
        }
        count
    }

    pub(crate) fn count_larger_finite(&self, k: f64) -> usize {
        let mut count = 0;
        let mut x = self.root;
        while x != NIL {
            let node = self.node(x);
            if node.key > k {
                count += (self.node(node.right).size + node.nodesize) as usize;
                x = node.left;
            } else {
                x = node.right;
            }
        }
        count
    }

    /// Like [`OSTree::count_smaller`], also returning the number of nodes
    /// visited.
    pub fn count_smaller_traced(&self, k: f64) -> Result<(usize, usize)> {
        check_key(k)?;
        let mut count = 0;
        let mut visited = 0;
        let mut x = self.root;
        while x != NIL {
            visited += 1;
            let node = self.node(x);
            if node.key < k {
                count += (self.node(node.left).size + node.nodesize) as usize;
                x = node.right;
            } else {
                x = node.left;
            }
        }
        Ok((count, visited))
    }

    /// Full structural audit: parent links, strict BST order, the size
    /// recurrence, red-black coloring, equal black height and the
    /// `2 log2(distinct + 1)` height bound.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let nil = self.node(NIL);
        if nil.color != Color::Black || nil.size != 0 {
            return Err("sentinel was modified".into());
        }
        if self.root != NIL {
            let root = self.node(self.root);
            if root.color != Color::Black {
                return Err("root is red".into());
            }
            if root.parent != NIL {
                return Err("root has a parent".into());
            }
        }

        let mut seen = 0usize;
        self.audit(self.root, None, None, &mut seen)?;
        if seen != self.distinct() {
            return Err(format!(
                "{} nodes reachable but {} allocated",
                seen,
                self.distinct()
            ));
        }

        let bound = 2.0 * ((self.distinct() + 1) as f64).log2();
        let h = self.height();
        if h as f64 > bound + 1e-9 {
            return Err(format!("height {h} exceeds bound {bound:.3}"));
        }
        Ok(())
    }

    /// Returns the black height of the subtree at `x`.
    fn audit(
        &self,
        x: NodeId,
        lo: Option<f64>,
        hi: Option<f64>,
        seen: &mut usize,
    ) -> std::result::Result<usize, String> {
        if x == NIL {
            return Ok(1);
        }
        *seen += 1;
        let n = self.node(x);
        if !n.key.is_finite() {
            return Err(format!("node {x} has a non-finite key"));
        }
        if lo.is_some_and(|lo| n.key <= lo) || hi.is_some_and(|hi| n.key >= hi) {
            return Err(format!("node {x} with key {} breaks BST order", n.key));
        }
        if n.nodesize == 0 {
            return Err(format!("node {x} has zero multiplicity"));
        }
        for child in [n.left, n.right] {
            if child != NIL && self.node(child).parent != x {
                return Err(format!("child {child} of node {x} has a wrong parent link"));
            }
        }
        let expected = self.node(n.left).size + self.node(n.right).size + n.nodesize;
        if n.size != expected {
            return Err(format!(
                "node {x}: size {} but children and nodesize sum to {expected}",
                n.size
            ));
        }
        if n.color == Color::Red
            && (self.node(n.left).color == Color::Red || self.node(n.right).color == Color::Red)
        {
            return Err(format!("red node {x} has a red child"));
        }
        let bl = self.audit(n.left, lo, Some(n.key), seen)?;
        let br = self.audit(n.right, Some(n.key), hi, seen)?;
        if bl != br {
            return Err(format!("black heights differ below node {x}: {bl} vs {br}"));
        }
        Ok(bl + usize::from(n.color == Color::Black))
    }

    #[inline]
    fn node(&self, x: NodeId) -> &Node {
        &self.nodes[x as usize]
    }

    #[inline]
    fn node_mut(&mut self, x: NodeId) -> &mut Node {
        &mut self.nodes[x as usize]
    }

    fn recompute_size(&mut self, x: NodeId) {
        let n = self.node(x);
        let size = self.node(n.left).size + self.node(n.right).size + n.nodesize;
        self.node_mut(x).size = size;
    }

    fn rotate_left(&mut self, x: NodeId) {
        let y = self.node(x).right;
        let y_left = self.node(y).left;
        self.node_mut(x).right = y_left;
        if y_left != NIL {
            self.node_mut(y_left).parent = x;
        }
        let xp = self.node(x).parent;
        self.node_mut(y).parent = xp;
        if xp == NIL {
            self.root = y;
        } else if self.node(xp).left == x {
            self.node_mut(xp).left = y;
        } else {
            self.node_mut(xp).right = y;
        }
        self.node_mut(y).left = x;
        self.node_mut(x).parent = y;

        self.node_mut(y).size = self.node(x).size;
        self.recompute_size(x);
    }

    fn rotate_right(&mut self, x: NodeId) {
        let y = self.node(x).left;
        let y_right = self.node(y).right;
        self.node_mut(x).left = y_right;
        if y_right != NIL {
            self.node_mut(y_right).parent = x;
        }
        let xp = self.node(x).parent;
        self.node_mut(y).parent = xp;
        if xp == NIL {
            self.root = y;
        } else if self.node(xp).right == x {
            self.node_mut(xp).right = y;
        } else {
            self.node_mut(xp).left = y;
        }
        self.node_mut(y).right = x;
        self.node_mut(x).parent = y;

        self.node_mut(y).size = self.node(x).size;
        self.recompute_size(x);
    }

    fn insert_fixup(&mut self, mut z: NodeId) {
        while self.node(self.node(z).parent).color == Color::Red {
            let p = self.node(z).parent;
            let g = self.node(p).parent;
            if p == self.node(g).left {
                let uncle = self.node(g).right;
                if self.node(uncle).color == Color::Red {
                    self.node_mut(p).color = Color::Black;
                    self.node_mut(uncle).color = Color::Black;
                    self.node_mut(g).color = Color::Red;
                    z = g;
                } else {
                    if z == self.node(p).right {
                        z = p;
                        self.rotate_left(z);
                    }
                    let p = self.node(z).parent;
                    let g = self.node(p).parent;
                    self.node_mut(p).color = Color::Black;
                    self.node_mut(g).color = Color::Red;
                    self.rotate_right(g);
                }
            } else {
                let uncle = self.node(g).left;
                if self.node(uncle).color == Color::Red {
                    self.node_mut(p).color = Color::Black;
                    self.node_mut(uncle).color = Color::Black;
                    self.node_mut(g).color = Color::Red;
                    z = g;
                } else {
                    if z == self.node(p).left {
                        z = p;
                        self.rotate_right(z);
                    }
                    let p = self.node(z).parent;
                    let g = self.node(p).parent;
                    self.node_mut(p).color = Color::Black;
                    self.node_mut(g).color = Color::Red;
                    self.rotate_left(g);
                }
            }
        }
        let root = self.root;
        self.node_mut(root).color = Color::Black;
        // Rotations at the root may write the sentinel's parent link.
        self.nodes[NIL as usize].parent = NIL;
    }
}

fn check_key(k: f64) -> Result<()> {
    if k.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("tree key must be finite, got {k}")))
    }
}

#[inline]
fn cmp_keys(a: f64, b: f64) -> Ordering {
    // Keys are finite, so the partial order is total.
    if a < b {
        Ordering::Less
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}
